use std::fs::File;
use std::io::{BufWriter, Write};

use multilag::hierarchy::{hier_coefficients_nr, series_reconstruct_nr, series_reconstruct_rel, SeriesCheck};
use multilag::lagrangians::ModelParams;
use multilag::potentials::Potential;

use crate::config::{ConfigError, ConfigResult, Options};
use crate::report::{Check, Report};

fn lib(e: multilag::Error) -> ConfigError {
    ConfigError(e.to_string())
}

pub fn run(sub: &str, opts: &Options) -> ConfigResult<Option<Report>> {
    match sub {
        "table" => table(opts).map(|_| None),
        "reconstruct" => reconstruct(opts).map(Some),
        _ => Err(ConfigError(format!(
            "unknown hierarchy subcommand `{sub}` (expected table, reconstruct)"
        ))),
    }
}

/// Exact rational coefficients of the degree-j member, one CSV row per
/// power of the potential.
fn table(opts: &Options) -> ConfigResult<()> {
    opts.allow_only(&["j", "out"])?;
    let j = opts
        .u32_opt("j")?
        .ok_or_else(|| ConfigError("hierarchy table needs --j".into()))?;
    let coeffs = hier_coefficients_nr(j).map_err(lib)?;

    let mut lines = vec!["k,numerator,denominator".to_string()];
    for (k, c) in coeffs.iter().enumerate() {
        lines.push(format!("{k},{},{}", c.numer(), c.denom()));
    }
    match opts.raw("out") {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| ConfigError(format!("cannot create output file {path}: {e}")))?;
            let mut out = BufWriter::new(file);
            for line in &lines {
                writeln!(out, "{line}")
                    .map_err(|e| ConfigError(format!("write to {path} failed: {e}")))?;
            }
        }
        None => {
            for line in &lines {
                println!("{line}");
            }
        }
    }
    Ok(())
}

/// Residuals of the generating-series partial sums order by order, with a
/// decay check: each residual must not rise above the previous one once
/// floor effects are excluded.
fn reconstruct(opts: &Options) -> ConfigResult<Report> {
    opts.allow_only(&["J", "sector", "m", "lambda", "c", "x", "v"])?;
    let j_max = opts.u32("J", 12)?;
    if !(1..=20).contains(&j_max) {
        return Err(ConfigError(format!("--J must be in 1..=20, got {j_max}")));
    }
    let m = opts.f64("m", 1.0)?;
    let lambda = opts.f64("lambda", 2.0)?;
    let sector = opts.string("sector", "nr");

    let residual_at = |j: u32| -> ConfigResult<SeriesCheck> {
        match sector.as_str() {
            "nr" => {
                let params = ModelParams::multiplicative(m, lambda);
                let pot = Potential::Harmonic { m, omega: 1.0 };
                series_reconstruct_nr(&params, &pot, opts.f64("x", 0.5)?, opts.f64("v", 0.5)?, j)
                    .map_err(lib)
            }
            "rel" => {
                let c = opts.f64("c", 1.0)?;
                let params = ModelParams::relativistic_multiplicative(m, lambda, c);
                series_reconstruct_rel(
                    &params,
                    &Potential::Free,
                    opts.f64("x", 0.0)?,
                    opts.f64("v", 0.3)?,
                    j,
                )
                .map_err(lib)
            }
            other => Err(ConfigError(format!(
                "unknown sector `{other}` (expected nr, rel)"
            ))),
        }
    };

    let mut checks = Vec::new();
    let mut residuals = Vec::new();
    let mut target = 1.0f64;
    for j in 1..=j_max {
        let check = residual_at(j)?;
        target = check.target.abs();
        residuals.push(check.rel_residual());
        checks.push(Check::info(format!("rel_residual_j{j}"), check.rel_residual()));
    }

    // residuals at the rounding floor of the target are treated as converged
    let floor = 1e-15 * target.max(1.0);
    let violations = residuals
        .windows(2)
        .filter(|w| w[1] > w[0].max(floor))
        .count();
    checks.push(Check::bounded("decay_violations", violations as f64, 0.0));
    checks.push(Check::bounded(
        "final_rel_residual",
        *residuals.last().unwrap(),
        1e-8,
    ));
    Ok(Report::new("hierarchy reconstruct", checks))
}
