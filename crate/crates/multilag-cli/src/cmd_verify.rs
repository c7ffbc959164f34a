use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multilag::eom::{eom_equivalence_scan, ReferenceKind};
use multilag::hamiltonians::{
    h_mult_rel_rest_scaled, lax_invariant_check, legendre_numeric, HamiltonianModel,
};
use multilag::hierarchy::{hamiltonian_series, hier_coefficients_nr, series_reconstruct_nr, series_reconstruct_rel};
use multilag::lagrangians::{l_mult_rel_rest_scaled, Family, LagrangianModel, ModelParams};
use multilag::potentials::Potential;
use multilag::twobody::{
    h2_mult, integrate_twobody_hamiltonian, l2_mult, p_sum_drift, twobody_eom_check,
};
use multilag::dynamics::{integrate_lagrangian, Method, RunSpec};
use num_rational::Ratio;

use crate::config::{parse_family, parse_params, parse_potential, ConfigError, ConfigResult, FamilyChoice, Options};
use crate::report::{Check, Report};

fn lib(e: multilag::Error) -> ConfigError {
    ConfigError(e.to_string())
}

fn fam_name(family: Family) -> &'static str {
    match family {
        Family::AdditiveNr => "add-nr",
        Family::MultiplicativeNr => "mult-nr",
        Family::HierarchyNr { .. } => "hier-nr",
        Family::AdditiveRel => "add-rel",
        Family::MultiplicativeRel => "mult-rel",
        Family::HierarchyRel { .. } => "hier-rel",
    }
}

fn is_relativistic(family: Family) -> bool {
    matches!(
        family,
        Family::AdditiveRel | Family::MultiplicativeRel | Family::HierarchyRel { .. }
    )
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

pub fn run(sub: &str, opts: &Options) -> ConfigResult<Report> {
    match sub {
        "eom" => verify_eom(opts),
        "legendre" => verify_legendre(opts),
        "limits" => verify_limits(opts),
        "hierarchy" => verify_hierarchy(opts),
        "lax" => verify_lax(opts),
        "twobody" => verify_twobody(opts),
        _ => Err(ConfigError(format!(
            "unknown verify suite `{sub}` (expected eom, legendre, limits, hierarchy, lax, twobody)"
        ))),
    }
}

fn verify_eom(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&[
        "family", "m", "lambda", "c", "j", "potential", "grid", "x-min", "x-max", "v-min",
        "v-max",
    ])?;
    let FamilyChoice::Single(family) = parse_family(opts, false)? else {
        unreachable!()
    };
    let params = parse_params(opts, family)?;
    let pot_spec = opts
        .raw("potential")
        .ok_or_else(|| ConfigError("verify eom needs --potential".into()))?;
    let potential = parse_potential(pot_spec)?;
    let n = opts.usize("grid", 21)?;

    let (x_lo, x_hi) = match potential {
        Potential::CalogeroMoser { .. } => (0.3, 1.3),
        _ => (-1.0, 1.0),
    };
    let relativistic = is_relativistic(family);
    let (v_lo, v_hi) = if relativistic {
        let c = opts.f64("c", 1.0)?;
        (-0.9 * c, 0.9 * c)
    } else {
        (-1.0, 1.0)
    };
    let x_range = (opts.f64("x-min", x_lo)?, opts.f64("x-max", x_hi)?);
    let v_range = (opts.f64("v-min", v_lo)?, opts.f64("v-max", v_hi)?);

    let model = LagrangianModel::new(family, params, potential).map_err(lib)?;
    let kind = if relativistic {
        ReferenceKind::Relativistic
    } else {
        ReferenceKind::Newtonian
    };
    let scan = eom_equivalence_scan(&model, kind, x_range, v_range, n).map_err(lib)?;

    Ok(Report::new(
        "verify eom",
        vec![
            Check::bounded("max_abs_residual", scan.max_abs_residual, 1e-8),
            Check::info("degenerate_points_skipped", scan.degenerate_points_skipped as f64),
            Check::info("grid_points", scan.grid_size as f64),
            Check::info("worst_x", scan.worst_point.0),
            Check::info("worst_v", scan.worst_point.1),
        ],
    ))
}

fn legendre_cases(opts: &Options) -> ConfigResult<Vec<(Family, ModelParams)>> {
    if opts.raw("family").is_some() {
        let FamilyChoice::Single(family) = parse_family(opts, false)? else {
            unreachable!()
        };
        return Ok(vec![(family, parse_params(opts, family)?)]);
    }
    Ok(vec![
        (Family::AdditiveNr, ModelParams::nonrel(1.0)),
        (Family::MultiplicativeNr, ModelParams::multiplicative(1.0, 1.0)),
        (Family::HierarchyNr { j: 2 }, ModelParams::nonrel(1.0)),
        (Family::AdditiveRel, ModelParams::relativistic(1.0, 1.0)),
        (
            Family::MultiplicativeRel,
            ModelParams::relativistic_multiplicative(1.0, 1.0, 1.0),
        ),
        (Family::HierarchyRel { j: 3 }, ModelParams::relativistic(1.0, 1.0)),
    ])
}

fn verify_legendre(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&["family", "m", "lambda", "c", "j", "potential", "points"])?;
    let potential = parse_potential(&opts.string("potential", "harmonic:m=1,omega=1"))?;
    let points = opts.usize("points", 100)?;

    let mut checks = Vec::new();
    for (family, params) in legendre_cases(opts)? {
        let lag = LagrangianModel::new(family, params, potential.clone()).map_err(lib)?;
        let ham = HamiltonianModel::new(family, params, potential.clone()).map_err(lib)?;
        let v_max = if is_relativistic(family) {
            0.85 * opts.f64("c", 1.0)?
        } else {
            1.2
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x4c45_4745);
        let mut max_dev: f64 = 0.0;
        for _ in 0..points {
            let x = rng.gen_range(-1.5..1.5);
            let v = rng.gen_range(-v_max..v_max);
            let p = lag.standard_momentum(v).map_err(lib)?;
            let left = legendre_numeric(&lag, x, v).map_err(lib)?;
            let right = ham.eval(x, p).map_err(lib)?;
            max_dev = max_dev.max((left - right).abs() / right.abs().max(1.0));
        }
        checks.push(Check::bounded(
            format!("max_rel_dev_{}", fam_name(family)),
            max_dev,
            1e-10,
        ));
    }
    Ok(Report::new("verify legendre", checks))
}

fn verify_limits(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&[])?;
    let pot = Potential::Harmonic { m: 1.0, omega: 1.0 };
    let ks: Vec<f64> = (4..=10).map(f64::from).collect();
    let x = 1.0;

    let mut gaps = [const { Vec::new() }; 4];
    for &k in &ks {
        let lambda = k.exp2();
        let ml2 = lambda * lambda;
        let mult_nr = ModelParams::multiplicative(1.0, lambda);
        let add_nr = ModelParams::nonrel(1.0);
        let mult_rel = ModelParams::relativistic_multiplicative(1.0, lambda, 1.0);
        let add_rel = ModelParams::relativistic(1.0, 1.0);

        let eval_l = |family, params| -> ConfigResult<f64> {
            LagrangianModel::new(family, params, pot.clone())
                .map_err(lib)?
                .eval(x, if is_relativistic(family) { 0.3 } else { 1.0 })
                .map_err(lib)
        };
        let eval_h = |family, params| -> ConfigResult<f64> {
            HamiltonianModel::new(family, params, pot.clone())
                .map_err(lib)?
                .eval(x, if is_relativistic(family) { 0.3 } else { 1.0 })
                .map_err(lib)
        };
        let l_gap =
            eval_l(Family::MultiplicativeNr, mult_nr)? - ml2 - eval_l(Family::AdditiveNr, add_nr)?;
        gaps[0].push(l_gap.abs().log2());
        let h_gap =
            eval_h(Family::MultiplicativeNr, mult_nr)? + ml2 - eval_h(Family::AdditiveNr, add_nr)?;
        gaps[1].push(h_gap.abs().log2());
        let l_gap = eval_l(Family::MultiplicativeRel, mult_rel)? - ml2
            - eval_l(Family::AdditiveRel, add_rel)?;
        gaps[2].push(l_gap.abs().log2());
        let h_gap = eval_h(Family::MultiplicativeRel, mult_rel)? + ml2
            - eval_h(Family::AdditiveRel, add_rel)?;
        gaps[3].push(h_gap.abs().log2());
    }

    let mut checks = Vec::new();
    for (name, gap) in [
        "lambda_slope_lagrangian_nr",
        "lambda_slope_hamiltonian_nr",
        "lambda_slope_lagrangian_rel",
        "lambda_slope_hamiltonian_rel",
    ]
    .iter()
    .zip(&gaps)
    {
        checks.push(Check::near(*name, slope(&ks, gap), -2.0, 0.1));
    }

    let cks: Vec<f64> = (4..=8).map(f64::from).collect();
    let (px, pv) = (0.5, 0.4);
    let nr = ModelParams::multiplicative(1.0, 1.0);
    let l_nr = LagrangianModel::new(Family::MultiplicativeNr, nr, pot.clone())
        .map_err(lib)?
        .eval(px, pv)
        .map_err(lib)?;
    let h_nr = HamiltonianModel::new(Family::MultiplicativeNr, nr, pot.clone())
        .map_err(lib)?
        .eval(px, pv)
        .map_err(lib)?;
    let mut l_gap = Vec::new();
    let mut h_gap = Vec::new();
    for &k in &cks {
        let params = ModelParams::relativistic_multiplicative(1.0, 1.0, k.exp2());
        l_gap.push(
            (l_mult_rel_rest_scaled(&params, &pot, px, pv).map_err(lib)? - l_nr)
                .abs()
                .log2(),
        );
        h_gap.push(
            (h_mult_rel_rest_scaled(&params, &pot, px, pv).map_err(lib)? - h_nr)
                .abs()
                .log2(),
        );
    }
    checks.push(Check::near("c_slope_lagrangian", slope(&cks, &l_gap), -2.0, 0.1));
    checks.push(Check::near("c_slope_hamiltonian", slope(&cks, &h_gap), -2.0, 0.1));

    Ok(Report::new("verify limits", checks))
}

fn verify_hierarchy(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&[])?;
    let mut checks = Vec::new();

    let expected: [&[(i64, i64)]; 3] = [
        &[(1, 1), (-1, 1)],
        &[(1, 3), (2, 1), (-1, 1)],
        &[(1, 5), (1, 1), (3, 1), (-1, 1)],
    ];
    let mut table_mismatches = 0usize;
    for (j, want) in (1..=3u32).zip(expected) {
        let got = hier_coefficients_nr(j).map_err(lib)?;
        for (c, &(n, d)) in got.iter().zip(want) {
            if *c != Ratio::new(n, d) {
                table_mismatches += 1;
            }
        }
    }
    checks.push(Check::bounded("table_low_degree_mismatches", table_mismatches as f64, 0.0));

    let mut recurrence_failures = 0usize;
    for j in 2..=20u32 {
        let upper = hier_coefficients_nr(j).map_err(lib)?;
        let lower = hier_coefficients_nr(j - 1).map_err(lib)?;
        for k in 1..=j as usize {
            if upper[k] * Ratio::new(k as i64, i64::from(j)) != lower[k - 1] {
                recurrence_failures += 1;
            }
        }
    }
    checks.push(Check::bounded(
        "recurrence_rational_failures",
        recurrence_failures as f64,
        0.0,
    ));

    let pot = Potential::Harmonic { m: 1.0, omega: 1.0 };
    let mut max_dev: f64 = 0.0;
    for j in 1..=6u32 {
        for (family, params, v_max) in [
            (Family::HierarchyNr { j }, ModelParams::nonrel(1.0), 1.5),
            (
                Family::HierarchyRel { j },
                ModelParams::relativistic(1.0, 1.2),
                0.85 * 1.2,
            ),
        ] {
            let lag = LagrangianModel::new(family, params, pot.clone()).map_err(lib)?;
            let ham = HamiltonianModel::new(family, params, pot.clone()).map_err(lib)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x6869_6572 + u64::from(j));
            for _ in 0..100 {
                let x = rng.gen_range(-1.5..1.5);
                let v = rng.gen_range(-v_max..v_max);
                let p = lag.standard_momentum(v).map_err(lib)?;
                let base = ham.additive_base(x, p).map_err(lib)?;
                let left = legendre_numeric(&lag, x, v).map_err(lib)?;
                let dev = (left - base.powi(j as i32)).abs() / base.powi(j as i32).abs().max(1.0);
                max_dev = max_dev.max(dev);
            }
        }
    }
    checks.push(Check::bounded("power_identity_max_rel_dev", max_dev, 1e-10));

    let nr = ModelParams::multiplicative(1.0, 2.0);
    let recon = series_reconstruct_nr(&nr, &pot, 0.5, 0.5, 12).map_err(lib)?;
    checks.push(Check::bounded(
        "reconstruction_nr_rel_residual",
        recon.rel_residual(),
        1e-10,
    ));
    let rel = ModelParams::relativistic_multiplicative(1.0, 2.0, 1.0);
    let recon = series_reconstruct_rel(&rel, &Potential::Free, 0.0, 0.3, 12).map_err(lib)?;
    checks.push(Check::bounded(
        "reconstruction_rel_rel_residual",
        recon.rel_residual(),
        1e-8,
    ));

    let nr = ModelParams::multiplicative(1.0, 1.0);
    let series =
        hamiltonian_series(&nr, &Potential::Free, 0.0, std::f64::consts::SQRT_2, 15, false)
            .map_err(lib)?;
    checks.push(Check::bounded(
        "h_series_nr_rel_residual",
        series.rel_residual(),
        1e-12,
    ));
    let rel = ModelParams::relativistic_multiplicative(1.0, 1.0, 1.0);
    let series = hamiltonian_series(&rel, &Potential::Free, 0.0, 0.3, 15, true).map_err(lib)?;
    checks.push(Check::bounded(
        "h_series_rel_rel_residual",
        series.rel_residual(),
        1e-12,
    ));

    Ok(Report::new("verify hierarchy", checks))
}

fn verify_lax(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&["omega", "l", "x", "p"])?;
    let single = ["omega", "l", "x", "p"].iter().any(|k| opts.raw(k).is_some());
    if single {
        let omega = opts.f64("omega", 1.0)?;
        let l = opts.u32("l", 2)?;
        if l == 0 || l > 8 {
            return Err(ConfigError(format!("--l must be in 1..=8, got {l}")));
        }
        let x = opts.f64("x", 1.0)?;
        let p = opts.f64("p", 1.0)?;
        let check = lax_invariant_check(omega, x, p, l);
        let rel_err = (check.trace - check.expected).abs() / check.expected.abs().max(1e-300);
        return Ok(Report::new(
            "verify lax",
            vec![
                Check::info("trace", check.trace),
                Check::info("expected", check.expected),
                Check::bounded("even_trace_rel_err", rel_err, 1e-12),
                Check::bounded("odd_trace_abs", check.odd_trace.abs(), 1e-12),
            ],
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6c61_7878);
    let mut max_rel: f64 = 0.0;
    let mut max_odd: f64 = 0.0;
    for _ in 0..50 {
        let x = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        let p = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
        let omega = rng.gen_range(0.3..2.5);
        for l in 1..=4u32 {
            let check = lax_invariant_check(omega, x, p, l);
            max_rel = max_rel.max((check.trace - check.expected).abs() / check.expected.abs());
            max_odd = max_odd.max(check.odd_trace.abs());
        }
    }
    Ok(Report::new(
        "verify lax",
        vec![
            Check::info("points", 50.0),
            Check::info("max_power", 4.0),
            Check::bounded("even_trace_max_rel_err", max_rel, 1e-12),
            Check::bounded("odd_trace_max_abs", max_odd, 1e-12),
        ],
    ))
}

fn verify_twobody(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&["m", "lambda"])?;
    let m = opts.f64("m", 1.0)?;
    let lambda = opts.f64("lambda", 1.2)?;
    let params = ModelParams::multiplicative(m, lambda);
    let mut checks = Vec::new();

    for (label, pot, x_range) in [
        ("pair_harmonic", Potential::PairHarmonic { g: 0.7 }, (-1.0, 1.0)),
        ("inverse_square", Potential::CalogeroMoser { g: 0.5 }, (0.3, 1.3)),
    ] {
        let (sum, rel) =
            twobody_eom_check(&params, &pot, x_range, (-1.5, 1.5), 21).map_err(lib)?;
        checks.push(Check::bounded(
            format!("center_sector_residual_{label}"),
            sum.max_abs_residual,
            1e-10,
        ));
        checks.push(Check::bounded(
            format!("relative_sector_residual_{label}"),
            rel.max_abs_residual,
            1e-9,
        ));
    }

    let g = 0.5;
    let run_params = ModelParams::multiplicative(m, 1.5);
    let pot = Potential::PairHarmonic { g };
    let (x0, p0) = (0.8, 0.3);
    let l2 = 1.5 * 1.5;
    let k_fac = (-p0 * p0 / (2.0 * m * m * l2)).exp() * (-2.0 * g * g * x0 * x0 / (m * l2)).exp();
    let dt = 1e-3;
    let omega = 2.0 * g / m.sqrt();
    let n = (10.0 * 2.0 * std::f64::consts::PI / (omega * k_fac) / dt).round() as usize;
    let run = integrate_twobody_hamiltonian(
        &run_params,
        &pot,
        0.2,
        x0,
        0.4,
        p0,
        &RunSpec::new(dt, n, Method::Rk4).map_err(lib)?,
    )
    .map_err(lib)?;
    let direct = LagrangianModel::new(
        Family::AdditiveNr,
        ModelParams::nonrel(m),
        Potential::Harmonic { m, omega },
    )
    .map_err(lib)?;
    let direct_run = integrate_lagrangian(
        &direct,
        x0,
        p0 / m,
        &RunSpec::new(dt * k_fac, n, Method::Rk4).map_err(lib)?,
    )
    .map_err(lib)?;
    let sup = run
        .points
        .iter()
        .zip(&direct_run.points)
        .map(|(a, b)| (a.x_rel - b.x).abs())
        .fold(0.0, f64::max);
    checks.push(Check::bounded("relative_motion_sup_gap", sup, 1e-7));
    checks.push(Check::bounded("total_momentum_drift", p_sum_drift(&run), 1e-12));

    let probe_pot = Potential::PairHarmonic { g: 0.6 };
    let (u_sum, u_rel, px) = (0.7, 0.5, 0.9);
    let v = 0.36 * px * px;
    let l_add = 0.25 * m * (u_sum * u_sum + u_rel * u_rel) - v;
    let h_add = 0.25 * (u_sum * u_sum + u_rel * u_rel) / m + v;
    let ks: Vec<f64> = (4..=10).map(f64::from).collect();
    let mut l_gap = Vec::new();
    let mut h_gap = Vec::new();
    for &k in &ks {
        let lam = k.exp2();
        let fit_params = ModelParams::multiplicative(m, lam);
        let ml2 = m * lam * lam;
        let l2v = l2_mult(&fit_params, &probe_pot, u_sum, u_rel, px).map_err(lib)?;
        let h2v = h2_mult(&fit_params, &probe_pot, u_sum, u_rel, px).map_err(lib)?;
        l_gap.push((l2v - ml2 - l_add).abs().log2());
        h_gap.push((h2v + ml2 - h_add).abs().log2());
    }
    checks.push(Check::near("lambda_slope_lagrangian", slope(&ks, &l_gap), -2.0, 0.1));
    checks.push(Check::near("lambda_slope_hamiltonian", slope(&ks, &h_gap), -2.0, 0.1));

    Ok(Report::new("verify twobody", checks))
}
