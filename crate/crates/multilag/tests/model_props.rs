mod common;

use common::{assert_close, assert_rel_close, rng, slope, uniform};
use multilag::eom::hamilton_rhs;
use multilag::hamiltonians::{
    h_mult_rel_rest_scaled, lax_invariant_check, legendre_numeric, HamiltonianModel,
};
use multilag::lagrangians::{
    l_mult_rel_rest_scaled, momentum_mult_nr, p2_log_form, p4_log_form, p_j, Family,
    LagrangianModel, ModelParams,
};
use multilag::potentials::Potential;

fn harmonic(m: f64, omega: f64) -> Potential {
    Potential::Harmonic { m, omega }
}

/// The Legendre transform of every Lagrangian family, resolved at the
/// standard momentum p = m v (gamma m v in the relativistic sector), must
/// reproduce the closed-form Hamiltonian of the same family.
#[test]
fn legendre_matches_closed_hamiltonian_all_families() {
    let cases: Vec<(Family, ModelParams, f64)> = vec![
        (Family::AdditiveNr, ModelParams::nonrel(1.3), 1.2),
        (
            Family::MultiplicativeNr,
            ModelParams::multiplicative(1.3, 0.9),
            1.2,
        ),
        (
            Family::HierarchyNr { j: 2 },
            ModelParams::nonrel(1.3),
            1.2,
        ),
        (
            Family::AdditiveRel,
            ModelParams::relativistic(1.3, 1.2),
            0.85 * 1.2,
        ),
        (
            Family::MultiplicativeRel,
            ModelParams::relativistic_multiplicative(1.3, 0.9, 1.2),
            0.85 * 1.2,
        ),
        (
            Family::HierarchyRel { j: 3 },
            ModelParams::relativistic(1.3, 1.2),
            0.85 * 1.2,
        ),
    ];
    let pot = harmonic(1.3, 1.1);
    for (family, params, v_max) in cases {
        let lag = LagrangianModel::new(family, params, pot.clone()).unwrap();
        let ham = HamiltonianModel::new(family, params, pot.clone()).unwrap();
        let mut r = rng(0x4c45_4745);
        for _ in 0..100 {
            let x = uniform(&mut r, -1.5, 1.5);
            let v = uniform(&mut r, -v_max, v_max);
            let p = lag.standard_momentum(v).unwrap();
            let left = legendre_numeric(&lag, x, v).unwrap();
            let right = ham.eval(x, p).unwrap();
            assert_rel_close(left, right, 1e-10, &format!("{family:?} at x={x}, v={v}"));
        }
    }
}

/// For the additive families the standard momentum is also dL/dv, so the
/// two momentum maps must agree pointwise.
#[test]
fn additive_canonical_momentum_is_standard() {
    let pot = harmonic(0.7, 1.3);
    let nr = LagrangianModel::new(Family::AdditiveNr, ModelParams::nonrel(0.7), pot.clone())
        .unwrap();
    let rel = LagrangianModel::new(
        Family::AdditiveRel,
        ModelParams::relativistic(0.7, 1.5),
        pot,
    )
    .unwrap();
    let mut r = rng(0x6d6f_6d31);
    for _ in 0..60 {
        let x = uniform(&mut r, -2.0, 2.0);
        let v = uniform(&mut r, -1.2, 1.2);
        assert_rel_close(
            nr.canonical_momentum(x, v).unwrap(),
            nr.standard_momentum(v).unwrap(),
            1e-12,
            "additive NR momentum maps",
        );
        assert_rel_close(
            rel.canonical_momentum(x, v).unwrap(),
            rel.standard_momentum(v).unwrap(),
            1e-12,
            "additive rel momentum maps",
        );
    }
}

/// dL/dv for the multiplicative non-relativistic family has a closed form
/// through the gaussian velocity integral; the hyper-dual evaluation must
/// match it.
#[test]
fn mult_nr_canonical_momentum_two_paths() {
    let params = ModelParams::multiplicative(1.4, 0.8);
    let pot = harmonic(1.4, 0.9);
    let model =
        LagrangianModel::new(Family::MultiplicativeNr, params, pot.clone()).unwrap();
    let mut r = rng(0x6d6f_6d32);
    for _ in 0..60 {
        let x = uniform(&mut r, -1.5, 1.5);
        let v = uniform(&mut r, -2.0, 2.0);
        assert_rel_close(
            model.canonical_momentum(x, v).unwrap(),
            momentum_mult_nr(&params, &pot, x, v).unwrap(),
            1e-12,
            "multiplicative NR momentum paths",
        );
    }
}

/// Each hierarchy Hamiltonian is the j-th power of the additive one, and
/// the Legendre resolution of the matching Lagrangian member must land on
/// that power.
#[test]
fn hierarchy_powers_match_legendre() {
    let pot = harmonic(1.0, 1.0);
    for j in 1..=6u32 {
        let params = ModelParams::nonrel(1.0);
        let lag =
            LagrangianModel::new(Family::HierarchyNr { j }, params, pot.clone()).unwrap();
        let ham =
            HamiltonianModel::new(Family::HierarchyNr { j }, params, pot.clone()).unwrap();
        let mut r = rng(0x6869_6572 + u64::from(j));
        for _ in 0..100 {
            let x = uniform(&mut r, -1.5, 1.5);
            let v = uniform(&mut r, -1.5, 1.5);
            let p = lag.standard_momentum(v).unwrap();
            let base = ham.additive_base(x, p).unwrap();
            let left = legendre_numeric(&lag, x, v).unwrap();
            assert_rel_close(left, base.powi(j as i32), 1e-10, &format!("NR degree {j}"));
            assert_rel_close(left, ham.eval(x, p).unwrap(), 1e-10, "NR power vs model");
        }

        let params = ModelParams::relativistic(1.0, 1.2);
        let lag =
            LagrangianModel::new(Family::HierarchyRel { j }, params, pot.clone()).unwrap();
        let ham =
            HamiltonianModel::new(Family::HierarchyRel { j }, params, pot.clone()).unwrap();
        let mut r = rng(0x6869_6563 + u64::from(j));
        for _ in 0..100 {
            let x = uniform(&mut r, -1.5, 1.5);
            let v = uniform(&mut r, -0.85 * 1.2, 0.85 * 1.2);
            let p = lag.standard_momentum(v).unwrap();
            let base = ham.additive_base(x, p).unwrap();
            let left = legendre_numeric(&lag, x, v).unwrap();
            assert_rel_close(
                left,
                base.powi(j as i32),
                1e-10,
                &format!("rel degree {j}"),
            );
        }
    }
}

/// Doubling lambda must shrink the distance to the additive limit by a
/// factor of four: slope -2 on a log2-log2 fit, for the Lagrangian and
/// Hamiltonian sides of both sectors.
#[test]
fn lambda_doubling_slopes_four_limits() {
    let pot = harmonic(1.0, 1.0);
    let ks: Vec<f64> = (4..=10).map(f64::from).collect();
    let x = 1.0;

    let mut gaps = [const { Vec::new() }; 4];
    for &k in &ks {
        let lambda = (k as f64).exp2();
        let ml2 = lambda * lambda;

        let p_nr = ModelParams::multiplicative(1.0, lambda);
        let l_mult = LagrangianModel::new(Family::MultiplicativeNr, p_nr, pot.clone())
            .unwrap()
            .eval(x, 1.0)
            .unwrap();
        let l_add = LagrangianModel::new(Family::AdditiveNr, ModelParams::nonrel(1.0), pot.clone())
            .unwrap()
            .eval(x, 1.0)
            .unwrap();
        gaps[0].push((l_mult - ml2 - l_add).abs().log2());

        let h_mult = HamiltonianModel::new(Family::MultiplicativeNr, p_nr, pot.clone())
            .unwrap()
            .eval(x, 1.0)
            .unwrap();
        let h_add = HamiltonianModel::new(Family::AdditiveNr, ModelParams::nonrel(1.0), pot.clone())
            .unwrap()
            .eval(x, 1.0)
            .unwrap();
        gaps[1].push((h_mult + ml2 - h_add).abs().log2());

        let p_rel = ModelParams::relativistic_multiplicative(1.0, lambda, 1.0);
        let rel = ModelParams::relativistic(1.0, 1.0);
        let l_mult = LagrangianModel::new(Family::MultiplicativeRel, p_rel, pot.clone())
            .unwrap()
            .eval(x, 0.3)
            .unwrap();
        let l_add = LagrangianModel::new(Family::AdditiveRel, rel, pot.clone())
            .unwrap()
            .eval(x, 0.3)
            .unwrap();
        gaps[2].push((l_mult - ml2 - l_add).abs().log2());

        let h_mult = HamiltonianModel::new(Family::MultiplicativeRel, p_rel, pot.clone())
            .unwrap()
            .eval(x, 0.3)
            .unwrap();
        let h_add = HamiltonianModel::new(Family::AdditiveRel, rel, pot.clone())
            .unwrap()
            .eval(x, 0.3)
            .unwrap();
        gaps[3].push((h_mult + ml2 - h_add).abs().log2());
    }

    for (name, gap) in ["L nr", "H nr", "L rel", "H rel"].iter().zip(&gaps) {
        let s = slope(&ks, gap);
        assert!(
            (s + 2.0).abs() < 0.1,
            "{name}: lambda-doubling slope {s}, expected -2 +- 0.1"
        );
    }
}

/// Doubling c must shrink the distance between the rest-scaled relativistic
/// multiplicative forms and their non-relativistic counterparts by a factor
/// of four.
#[test]
fn c_doubling_slopes_rest_scaled() {
    let pot = harmonic(1.0, 1.0);
    let ks: Vec<f64> = (4..=8).map(f64::from).collect();
    let (x, v, p) = (0.5, 0.4, 0.4);
    let nr = ModelParams::multiplicative(1.0, 1.0);
    let l_nr = LagrangianModel::new(Family::MultiplicativeNr, nr, pot.clone())
        .unwrap()
        .eval(x, v)
        .unwrap();
    let h_nr = HamiltonianModel::new(Family::MultiplicativeNr, nr, pot.clone())
        .unwrap()
        .eval(x, p)
        .unwrap();

    let mut l_gap = Vec::new();
    let mut h_gap = Vec::new();
    for &k in &ks {
        let c = (k as f64).exp2();
        let params = ModelParams::relativistic_multiplicative(1.0, 1.0, c);
        l_gap.push(
            (l_mult_rel_rest_scaled(&params, &pot, x, v).unwrap() - l_nr)
                .abs()
                .log2(),
        );
        h_gap.push(
            (h_mult_rel_rest_scaled(&params, &pot, x, p).unwrap() - h_nr)
                .abs()
                .log2(),
        );
    }
    let sl = slope(&ks, &l_gap);
    let sh = slope(&ks, &h_gap);
    assert!((sl + 2.0).abs() < 0.1, "L side: c-doubling slope {sl}");
    assert!((sh + 2.0).abs() < 0.1, "H side: c-doubling slope {sh}");
}

/// Taking lambda and c to infinity together still converges onto the
/// non-relativistic multiplicative form at matching lambda.
#[test]
fn joint_lambda_c_limit_monotone() {
    let pot = harmonic(1.0, 1.0);
    let (x, v) = (0.5, 0.4);
    let mut prev = f64::INFINITY;
    for k in 4..=8 {
        let scale = f64::from(k).exp2();
        let rel = ModelParams::relativistic_multiplicative(1.0, scale, scale);
        let nr = ModelParams::multiplicative(1.0, scale);
        let gap = (l_mult_rel_rest_scaled(&rel, &pot, x, v).unwrap()
            - LagrangianModel::new(Family::MultiplicativeNr, nr, pot.clone())
                .unwrap()
                .eval(x, v)
                .unwrap())
        .abs();
        assert!(
            gap < prev,
            "joint limit gap did not shrink at scale 2^{k}: {gap} vs {prev}"
        );
        prev = gap;
    }
}

/// P_1 and P_3 have simple closed forms; the defining integral must hit
/// them across the velocity range.
#[test]
fn p1_p3_match_defining_integral_on_grid() {
    for &c in &[1.0f64, 2.0] {
        let mut v = -0.9 * c;
        while v <= 0.9 * c + 1e-12 {
            let gamma = 1.0 / (1.0 - v * v / (c * c)).sqrt();
            assert_close(
                p_j(v, c, 1).unwrap(),
                1.0 / gamma,
                1e-10,
                &format!("P_1 at v={v}, c={c}"),
            );
            assert_close(
                p_j(v, c, 3).unwrap(),
                gamma * (1.0 - 2.0 * v * v / (c * c)),
                1e-10,
                &format!("P_3 at v={v}, c={c}"),
            );
            assert_close(p_j(v, c, 0).unwrap(), 1.0, 0.0, "P_0 is 1");
            v += 0.05 * c;
        }
    }
}

/// The even members close in terms of artanh(v/c):
/// P_2 = 1 - (v/c) artanh(v/c) and
/// P_4 = gamma^2 (1 - 3v^2/2c^2) - (3v/2c) artanh(v/c).
#[test]
fn p2_p4_artanh_forms_match_integral() {
    let c = 1.0;
    let mut v = -0.9;
    while v <= 0.9 + 1e-12 {
        let beta: f64 = v / c;
        let g2 = 1.0 / (1.0 - beta * beta);
        assert_close(
            p_j(v, c, 2).unwrap(),
            1.0 - beta * beta.atanh(),
            1e-11,
            &format!("P_2 at v={v}"),
        );
        assert_close(
            p_j(v, c, 4).unwrap(),
            g2 * (1.0 - 1.5 * beta * beta) - 1.5 * beta * beta.atanh(),
            1e-11,
            &format!("P_4 at v={v}"),
        );
        v += 0.06;
    }
}

/// The log-form candidates for P_2 and P_4 are not the functions the
/// defining integral produces; the gap at v = c/2 is macroscopic, and the
/// forms themselves are pinned so the mismatch is tracked, not hidden.
#[test]
fn printed_log_forms_deviate_from_integral() {
    let (v, c) = (0.5, 1.0);
    let log2v = p2_log_form(v, c).unwrap();
    let log4v = p4_log_form(v, c).unwrap();
    assert_close(log2v, 1.2027325540540823, 1e-14, "P_2 log form anchor");
    assert_close(log4v, 1.1374321644144567, 1e-14, "P_4 log form anchor");

    let dev2 = (log2v - p_j(v, c, 2).unwrap()).abs();
    let dev4 = (log4v - p_j(v, c, 4).unwrap()).abs();
    assert!(dev2 > 1e-3, "P_2 log form unexpectedly close: {dev2}");
    assert!(dev4 > 1e-3, "P_4 log form unexpectedly close: {dev4}");
}

/// Differentiating the degree-j relativistic member with respect to a
/// constant potential produces j times the degree j-1 member. The members
/// are degree-j polynomials in V, so a 7-point stencil is exact up to
/// rounding.
#[test]
fn rel_recurrence_in_potential() {
    let params = ModelParams::relativistic(1.0, 1.0);
    let member = |j: u32, v: f64, v0: f64| -> f64 {
        let pot = Potential::Polynomial { coeffs: vec![v0] };
        LagrangianModel::new(Family::HierarchyRel { j }, params, pot)
            .unwrap()
            .eval(0.0, v)
            .unwrap()
    };
    let mut r = rng(0x7265_6356);
    for j in 2..=6u32 {
        for _ in 0..20 {
            let v = uniform(&mut r, -0.85, 0.85);
            let v0 = uniform(&mut r, -0.5, 0.5);
            let d = common::fd1_stencil7(&|u| member(j, v, u), v0, 0.1);
            assert_rel_close(
                d / f64::from(j),
                member(j - 1, v, v0),
                1e-10,
                &format!("potential recurrence j={j} at v={v}, V={v0}"),
            );
        }
    }
}

/// Hamiltonian flows of the multiplicative and hierarchy families are the
/// additive flow times a conserved scalar; the vector fields must be
/// proportional pointwise with exactly that factor.
#[test]
fn hamiltonian_flow_is_time_rescaled_additive_flow() {
    let pot = harmonic(1.0, 1.0);
    let cases: Vec<(Family, ModelParams, Family, ModelParams)> = vec![
        (
            Family::MultiplicativeNr,
            ModelParams::multiplicative(1.0, 0.8),
            Family::AdditiveNr,
            ModelParams::nonrel(1.0),
        ),
        (
            Family::HierarchyNr { j: 2 },
            ModelParams::nonrel(1.0),
            Family::AdditiveNr,
            ModelParams::nonrel(1.0),
        ),
        (
            Family::HierarchyNr { j: 4 },
            ModelParams::nonrel(1.0),
            Family::AdditiveNr,
            ModelParams::nonrel(1.0),
        ),
        (
            Family::MultiplicativeRel,
            ModelParams::relativistic_multiplicative(1.0, 1.1, 1.3),
            Family::AdditiveRel,
            ModelParams::relativistic(1.0, 1.3),
        ),
        (
            Family::HierarchyRel { j: 3 },
            ModelParams::relativistic(1.0, 1.3),
            Family::AdditiveRel,
            ModelParams::relativistic(1.0, 1.3),
        ),
    ];
    for (family, params, add_family, add_params) in cases {
        let model = HamiltonianModel::new(family, params, pot.clone()).unwrap();
        let add = HamiltonianModel::new(add_family, add_params, pot.clone()).unwrap();
        let mut r = rng(0x666c_6f77);
        for _ in 0..30 {
            let x = uniform(&mut r, -1.2, 1.2);
            let p = uniform(&mut r, -1.5, 1.5);
            let w = model.flow_time_scale(x, p).unwrap();
            let (dx_m, dp_m) = hamilton_rhs(&model, x, p).unwrap();
            let (dx_a, dp_a) = hamilton_rhs(&add, x, p).unwrap();
            assert_rel_close(dx_m, w * dx_a, 1e-12, &format!("{family:?} dx/dt"));
            assert_rel_close(dp_m, w * dp_a, 1e-12, &format!("{family:?} dp/dt"));
        }
    }
}

/// Trace identities of the harmonic-oscillator Lax matrix: even powers give
/// twice the corresponding power of p^2 + omega^2 x^2, odd powers are
/// traceless.
#[test]
fn lax_traces_at_random_points() {
    let mut r = rng(0x6c61_7878);
    for _ in 0..50 {
        let x = uniform(&mut r, 0.5, 2.0) * if uniform(&mut r, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let p = uniform(&mut r, 0.5, 2.0) * if uniform(&mut r, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let omega = uniform(&mut r, 0.3, 2.5);
        for l in 1..=4u32 {
            let check = lax_invariant_check(omega, x, p, l);
            let want = 2.0 * (p * p + omega * omega * x * x).powi(l as i32);
            assert_rel_close(check.trace, want, 1e-12, &format!("even trace l={l}"));
            assert_close(check.expected, want, 1e-12 * want.abs(), "expected field");
            assert!(
                check.odd_trace.abs() <= 1e-12,
                "odd trace {} at l={l}",
                check.odd_trace
            );
        }
    }
}
