use std::fs::File;
use std::io::{BufWriter, Write};

use serde::Serialize;

use multilag::dynamics::{conserved_drift, integrate_hamiltonian, integrate_lagrangian, Method, RunSpec, Trajectory};
use multilag::hamiltonians::HamiltonianModel;
use multilag::lagrangians::LagrangianModel;
use multilag::twobody::{integrate_twobody_hamiltonian, TwoBodyTrajectory};

use crate::config::{parse_family, parse_params, parse_potential, ConfigError, ConfigResult, FamilyChoice, Options};

#[derive(Serialize)]
struct Summary {
    command: &'static str,
    csv_path: String,
    rows_written: usize,
    conserved_drift: f64,
    aborted: bool,
    abort_reason: Option<String>,
    final_t: Option<f64>,
}

impl Summary {
    fn print(&self) {
        println!("{}", serde_json::to_string_pretty(self).expect("summary is finite"));
    }
}

fn lib(e: multilag::Error) -> ConfigError {
    ConfigError(e.to_string())
}

fn write_csv(path: &str, header: &str, rows: &[String], abort: Option<&str>) -> ConfigResult<()> {
    let file = File::create(path)
        .map_err(|e| ConfigError(format!("cannot create output file {path}: {e}")))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: &str| -> ConfigResult<()> {
        writeln!(out, "{line}").map_err(|e| ConfigError(format!("write to {path} failed: {e}")))
    };
    write(&mut out, header)?;
    for row in rows {
        write(&mut out, row)?;
    }
    if let Some(reason) = abort {
        write(&mut out, &format!("# aborted: {reason}"))?;
    }
    out.flush()
        .map_err(|e| ConfigError(format!("write to {path} failed: {e}")))
}

fn run_spec(opts: &Options) -> ConfigResult<RunSpec> {
    let dt = opts.f64("dt", 1e-3)?;
    let steps = opts.usize("steps", 1000)?;
    let method = match opts.string("method", "rk4").as_str() {
        "rk4" => Method::Rk4,
        "rk45" => Method::Rk45,
        other => return Err(ConfigError(format!("unknown method `{other}` (expected rk4, rk45)"))),
    };
    let spec = RunSpec::new(dt, steps, method).map_err(lib)?;
    spec.with_stride(opts.usize("stride", 1)?).map_err(lib)
}

const ALLOWED: &[&str] = &[
    "family", "m", "lambda", "c", "j", "potential", "formulation", "x0", "v0", "p0", "xsum0",
    "xrel0", "psum0", "prel0", "dt", "steps", "method", "stride", "out",
];

pub fn run(opts: &Options) -> ConfigResult<i32> {
    opts.allow_only(ALLOWED)?;
    let out_path = opts
        .raw("out")
        .ok_or_else(|| ConfigError("integrate needs --out <csv path>".into()))?
        .to_string();
    let spec = run_spec(opts)?;
    let potential = parse_potential(&opts.string("potential", "free"))?;

    match parse_family(opts, true)? {
        FamilyChoice::TwoBody => {
            let lambda = opts
                .f64_opt("lambda")?
                .ok_or_else(|| ConfigError("twobody integration needs --lambda".into()))?;
            let params = multilag::lagrangians::ModelParams::multiplicative(opts.f64("m", 1.0)?, lambda);
            let run = integrate_twobody_hamiltonian(
                &params,
                &potential,
                opts.f64("xsum0", 0.0)?,
                opts.f64("xrel0", 1.0)?,
                opts.f64("psum0", 0.0)?,
                opts.f64("prel0", 0.0)?,
                &spec,
            );
            emit_twobody(&out_path, run)
        }
        FamilyChoice::Single(family) => {
            let params = parse_params(opts, family)?;
            let formulation = opts.string("formulation", "lagrangian");
            let run = match formulation.as_str() {
                "lagrangian" => {
                    let model = LagrangianModel::new(family, params, potential).map_err(lib)?;
                    integrate_lagrangian(&model, opts.f64("x0", 1.0)?, opts.f64("v0", 0.0)?, &spec)
                }
                "hamiltonian" => {
                    let model = HamiltonianModel::new(family, params, potential).map_err(lib)?;
                    integrate_hamiltonian(&model, opts.f64("x0", 1.0)?, opts.f64("p0", 0.0)?, &spec)
                }
                other => {
                    return Err(ConfigError(format!(
                        "unknown formulation `{other}` (expected lagrangian, hamiltonian)"
                    )))
                }
            };
            emit_single(&out_path, run)
        }
    }
}

const HEADER: &str = "t,x,v,p,H_std,H_model";
const HEADER_TWOBODY: &str = "t,X,x,VX,vx,H_model";

fn emit_single(out_path: &str, run: Result<Trajectory, multilag::Error>) -> ConfigResult<i32> {
    let (rows, drift, abort_reason, final_t) = match &run {
        Ok(traj) => {
            let rows: Vec<String> = traj
                .points
                .iter()
                .map(|pt| format!("{},{},{},{},{},{}", pt.t, pt.x, pt.v, pt.p, pt.h_std, pt.h_model))
                .collect();
            let final_t = traj.points.last().map(|pt| pt.t);
            (
                rows,
                conserved_drift(traj),
                traj.abort.as_ref().map(|e| e.to_string()),
                final_t,
            )
        }
        // refused initial data: an abort before the first step
        Err(e) => (Vec::new(), 0.0, Some(e.to_string()), None),
    };
    write_csv(out_path, HEADER, &rows, abort_reason.as_deref())?;
    let aborted = abort_reason.is_some();
    Summary {
        command: "integrate",
        csv_path: out_path.to_string(),
        rows_written: rows.len(),
        conserved_drift: drift,
        aborted,
        abort_reason,
        final_t,
    }
    .print();
    Ok(if aborted { 1 } else { 0 })
}

fn emit_twobody(out_path: &str, run: Result<TwoBodyTrajectory, multilag::Error>) -> ConfigResult<i32> {
    let (rows, drift, abort_reason, final_t) = match &run {
        Ok(traj) => {
            let rows: Vec<String> = traj
                .points
                .iter()
                .map(|pt| {
                    format!(
                        "{},{},{},{},{},{}",
                        pt.t, pt.x_sum, pt.x_rel, pt.v_sum, pt.v_rel, pt.h_model
                    )
                })
                .collect();
            let drift = match traj.points.first() {
                Some(first) => {
                    let h0 = first.h_model;
                    traj.points
                        .iter()
                        .map(|pt| (pt.h_model - h0).abs())
                        .fold(0.0, f64::max)
                        / h0.abs().max(1e-300)
                }
                None => 0.0,
            };
            let final_t = traj.points.last().map(|pt| pt.t);
            (rows, drift, traj.abort.as_ref().map(|e| e.to_string()), final_t)
        }
        Err(e) => (Vec::new(), 0.0, Some(e.to_string()), None),
    };
    write_csv(out_path, HEADER_TWOBODY, &rows, abort_reason.as_deref())?;
    let aborted = abort_reason.is_some();
    Summary {
        command: "integrate",
        csv_path: out_path.to_string(),
        rows_written: rows.len(),
        conserved_drift: drift,
        aborted,
        abort_reason,
        final_t,
    }
    .print();
    Ok(if aborted { 1 } else { 0 })
}
