use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;

use multilag::lagrangians::{Family, ModelParams};
use multilag::potentials::Potential;

/// A failure before any computation ran: bad flags, bad values, unreadable
/// config file. Always maps to exit code 2 and a JSON error object.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub type ConfigResult<T> = Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError(msg.into()))
}

/// Flat key/value options collected from `--key value` / `--key=value`
/// flags layered over an optional `key = value` config file.
pub struct Options {
    values: BTreeMap<String, String>,
}

impl Options {
    /// Splits an argument list into options. A `config` key names a file of
    /// `key = value` lines that is loaded first; the flags override it.
    pub fn from_args(args: &[String]) -> ConfigResult<Self> {
        let mut flags = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            let Some(stripped) = arg.strip_prefix("--") else {
                return err(format!("expected a --key, got `{arg}`"));
            };
            let (key, value) = if let Some((k, v)) = stripped.split_once('=') {
                (k.to_string(), v.to_string())
            } else {
                let Some(value) = args.get(i + 1) else {
                    return err(format!("flag --{stripped} is missing a value"));
                };
                i += 1;
                (stripped.to_string(), value.clone())
            };
            if key.is_empty() {
                return err(format!("malformed flag `{arg}`"));
            }
            flags.insert(key, value);
            i += 1;
        }

        let mut values = BTreeMap::new();
        if let Some(path) = flags.remove("config") {
            let text = match fs::read_to_string(&path) {
                Ok(text) => text,
                Err(e) => return err(format!("cannot read config file {path}: {e}")),
            };
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return err(format!("{path}:{}: expected `key = value`", lineno + 1));
                };
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        values.extend(flags);
        Ok(Self { values })
    }

    /// Rejects any key outside the command's vocabulary.
    pub fn allow_only(&self, allowed: &[&str]) -> ConfigResult<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return err(format!(
                    "unknown option `{key}` (allowed: {})",
                    allowed.join(", ")
                ));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str, default: f64) -> ConfigResult<f64> {
        self.f64_opt(key).map(|v| v.unwrap_or(default))
    }

    pub fn f64_opt(&self, key: &str) -> ConfigResult<Option<f64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => err(format!("option `{key}` needs a finite number, got `{raw}`")),
            },
        }
    }

    pub fn u32(&self, key: &str, default: u32) -> ConfigResult<u32> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<u32>()
                .map_err(|_| ConfigError(format!("option `{key}` needs a non-negative integer, got `{raw}`"))),
        }
    }

    pub fn u32_opt(&self, key: &str) -> ConfigResult<Option<u32>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<u32>()
                .map(Some)
                .map_err(|_| ConfigError(format!("option `{key}` needs a non-negative integer, got `{raw}`"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> ConfigResult<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<usize>()
                .map_err(|_| ConfigError(format!("option `{key}` needs a non-negative integer, got `{raw}`"))),
        }
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        self.values
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_string())
    }
}

/// The model selector shared by the verify and integrate commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    Single(Family),
    TwoBody,
}

pub fn parse_family(opts: &Options, allow_twobody: bool) -> ConfigResult<FamilyChoice> {
    let name = opts.string("family", "add-nr");
    let j = || -> ConfigResult<u32> {
        opts.u32_opt("j")?
            .ok_or_else(|| ConfigError(format!("family `{name}` needs --j")))
    };
    let family = match name.as_str() {
        "add-nr" => Family::AdditiveNr,
        "mult-nr" => Family::MultiplicativeNr,
        "hier-nr" => Family::HierarchyNr { j: j()? },
        "add-rel" => Family::AdditiveRel,
        "mult-rel" => Family::MultiplicativeRel,
        "hier-rel" => Family::HierarchyRel { j: j()? },
        "twobody" if allow_twobody => return Ok(FamilyChoice::TwoBody),
        _ => {
            let extra = if allow_twobody { ", twobody" } else { "" };
            return err(format!(
                "unknown family `{name}` (expected add-nr, mult-nr, hier-nr, add-rel, mult-rel, hier-rel{extra})"
            ));
        }
    };
    Ok(FamilyChoice::Single(family))
}

pub fn parse_params(opts: &Options, family: Family) -> ConfigResult<ModelParams> {
    let m = opts.f64("m", 1.0)?;
    let needs_lambda = matches!(
        family,
        Family::MultiplicativeNr | Family::MultiplicativeRel
    );
    let relativistic = matches!(
        family,
        Family::AdditiveRel | Family::MultiplicativeRel | Family::HierarchyRel { .. }
    );
    let lambda = opts.f64_opt("lambda")?;
    let c = opts.f64_opt("c")?;
    let params = match (needs_lambda, relativistic) {
        (false, false) => ModelParams::nonrel(m),
        (true, false) => {
            let Some(lambda) = lambda else {
                return err("this family needs --lambda");
            };
            ModelParams::multiplicative(m, lambda)
        }
        (false, true) => ModelParams::relativistic(m, c.unwrap_or(1.0)),
        (true, true) => {
            let Some(lambda) = lambda else {
                return err("this family needs --lambda");
            };
            ModelParams::relativistic_multiplicative(m, lambda, c.unwrap_or(1.0))
        }
    };
    Ok(params)
}

/// `kind:param=val,param=val` potential specs: free, harmonic (m, omega),
/// pair-harmonic (g), cm (g), poly (c0..c9).
pub fn parse_potential(spec: &str) -> ConfigResult<Potential> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, r),
        None => (spec, ""),
    };
    let mut params = BTreeMap::new();
    if !rest.is_empty() {
        for piece in rest.split(',') {
            let Some((key, value)) = piece.split_once('=') else {
                return err(format!("potential parameter `{piece}` is not `key=value`"));
            };
            let Ok(value) = value.parse::<f64>() else {
                return err(format!("potential parameter `{piece}` has a non-numeric value"));
            };
            params.insert(key.to_string(), value);
        }
    }
    let mut take = |key: &str| -> ConfigResult<f64> {
        params
            .remove(key)
            .ok_or_else(|| ConfigError(format!("potential `{kind}` needs `{key}=`")))
    };
    let pot = match kind {
        "free" => Potential::Free,
        "harmonic" => Potential::Harmonic {
            m: take("m")?,
            omega: take("omega")?,
        },
        "pair-harmonic" => Potential::PairHarmonic { g: take("g")? },
        "cm" => Potential::CalogeroMoser { g: take("g")? },
        "poly" => {
            let mut coeffs = vec![0.0; 10];
            let mut top = 0;
            for k in 0..10usize {
                if let Some(v) = params.remove(&format!("c{k}")) {
                    coeffs[k] = v;
                    top = top.max(k);
                }
            }
            coeffs.truncate(top + 1);
            Potential::Polynomial { coeffs }
        }
        _ => {
            return err(format!(
                "unknown potential kind `{kind}` (expected free, harmonic, pair-harmonic, cm, poly)"
            ))
        }
    };
    if let Some(stray) = params.keys().next() {
        return err(format!("potential `{kind}` does not take `{stray}=`"));
    }
    Ok(pot)
}
