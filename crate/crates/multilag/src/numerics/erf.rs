//! Error function via W. J. Cody's rational approximations (the classic
//! three-interval split at |x| = 0.46875 and 4.0). Self-contained so results
//! are bit-stable across platforms instead of depending on whatever libm the
//! target links.

const A: [f64; 5] = [
    3.16112374387056560e00,
    1.13864154151050156e02,
    3.77485237685302021e02,
    3.20937758913846947e03,
    1.85777706184603153e-1,
];
const B: [f64; 4] = [
    2.36012909523441209e01,
    2.44024637934444173e02,
    1.28261652607737228e03,
    2.84423683343917062e03,
];
const C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e01,
    2.98635138197400131e02,
    8.81952221241769090e02,
    1.71204761263407058e03,
    2.05107837782607147e03,
    1.23033935479799725e03,
    2.15311535474403846e-8,
];
const D: [f64; 8] = [
    1.57449261107098347e01,
    1.17693950891312499e02,
    5.37181101862009858e02,
    1.62138957456669019e03,
    3.29079923573345963e03,
    4.36261909014324716e03,
    3.43936767414372164e03,
    1.23033935480374942e03,
];
const P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const Q: [f64; 5] = [
    2.56852019228982242e00,
    1.87295284992346047e00,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

const THRESH: f64 = 0.46875;
const SQRPI: f64 = 5.6418958354775628695e-1;
const XSMALL: f64 = 1.11e-16;
const XBIG: f64 = 26.543;
const SIXTEN: f64 = 16.0;

pub fn erf(x: f64) -> f64 {
    let y = x.abs();

    if y <= THRESH {
        let ysq = if y > XSMALL { y * y } else { 0.0 };
        let mut xnum = A[4] * ysq;
        let mut xden = ysq;
        for i in 0..3 {
            xnum = (xnum + A[i]) * ysq;
            xden = (xden + B[i]) * ysq;
        }
        return x * (xnum + A[3]) / (xden + B[3]);
    }

    // Outside the central interval, evaluate erfc(|x|) and fold it back.
    let erfc_y = if y <= 4.0 {
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        let r = (xnum + C[7]) / (xden + D[7]);
        scale_by_gaussian(y, r)
    } else if y < XBIG {
        let ysq = 1.0 / (y * y);
        let mut xnum = P[5] * ysq;
        let mut xden = ysq;
        for i in 0..4 {
            xnum = (xnum + P[i]) * ysq;
            xden = (xden + Q[i]) * ysq;
        }
        let r = ysq * (xnum + P[4]) / (xden + Q[4]);
        scale_by_gaussian(y, (SQRPI - r) / y)
    } else {
        0.0
    };

    let result = (0.5 - erfc_y) + 0.5;
    if x < 0.0 {
        -result
    } else {
        result
    }
}

/// Multiply by e^{-y^2} split as e^{-ysq^2}·e^{-del} with ysq a 1/16-grid
/// truncation of y, which is Cody's trick to keep the argument reduction
/// exact.
fn scale_by_gaussian(y: f64, r: f64) -> f64 {
    let ysq = (y * SIXTEN).trunc() / SIXTEN;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}
