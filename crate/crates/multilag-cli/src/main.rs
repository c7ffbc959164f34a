mod cmd_hierarchy;
mod cmd_integrate;
mod cmd_verify;
mod config;
mod report;

use config::{ConfigError, ConfigResult, Options};

const USAGE: &str = "usage: multilag <verify <suite> | integrate | hierarchy <table|reconstruct>> [--key value ...]";

fn main() {
    std::process::exit(run_cli());
}

fn run_cli() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(ConfigError(message)) => {
            println!("{}", serde_json::json!({ "error": message }));
            2
        }
    }
}

fn dispatch(args: &[String]) -> ConfigResult<i32> {
    let mut positional = Vec::new();
    let mut rest = args;
    while let Some((head, tail)) = rest.split_first() {
        if head.starts_with("--") {
            break;
        }
        positional.push(head.as_str());
        rest = tail;
    }

    match positional.as_slice() {
        ["verify", suite] => {
            let opts = Options::from_args(rest)?;
            let report = cmd_verify::run(suite, &opts)?;
            report.print();
            Ok(if report.pass { 0 } else { 1 })
        }
        ["integrate"] => {
            let opts = Options::from_args(rest)?;
            cmd_integrate::run(&opts)
        }
        ["hierarchy", sub] => {
            let opts = Options::from_args(rest)?;
            match cmd_hierarchy::run(sub, &opts)? {
                Some(report) => {
                    report.print();
                    Ok(if report.pass { 0 } else { 1 })
                }
                None => Ok(0),
            }
        }
        ["verify"] => Err(ConfigError(
            "verify needs a suite: eom, legendre, limits, hierarchy, lax, twobody".into(),
        )),
        ["hierarchy"] => Err(ConfigError(
            "hierarchy needs a subcommand: table, reconstruct".into(),
        )),
        [] => Err(ConfigError(USAGE.into())),
        other => Err(ConfigError(format!(
            "unknown command `{}` ({USAGE})",
            other.join(" ")
        ))),
    }
}
