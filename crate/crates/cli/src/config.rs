//! Flag/file merging and value parsing for the verify/sweep commands.
//!
//! Config files are flat `key = value` text; lists use `[a, b, c]`.
//! Command-line flags override file entries. All values are validated
//! here, before any evaluation starts (exit code 2 on failure).

use std::collections::HashMap;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::{RunError, VerifyArgs};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Which identity family a run targets.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Popov,
    Theta,
    Cn,
    Voronoi,
    OddChar,
    Sine,
    Reduction,
    Integrals,
}

/// Fully parsed and validated run configuration.
pub struct ResolvedConfig {
    pub identity: Identity,
    pub k: Vec<u32>,
    pub z: Vec<f64>,
    pub t: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub theta: Vec<(u64, u64)>,
    pub modulus: Vec<u32>,
    pub a: Vec<u32>,
    pub order: Vec<f64>,
    pub n: Vec<u32>,
    pub chi_index: Option<u32>,
    pub tol: f64,
    pub table_len: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub jobs: usize,
}

fn cfg_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

/// Split a raw value string into items: strips optional brackets and
/// splits on commas; `"[2, 3, 4]"`, `"2,3,4"` and `"2"` all work.
fn split_list(raw: &str) -> Vec<String> {
    let inner = raw.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner);
    inner
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_file(path: &std::path::Path) -> Result<HashMap<String, String>, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| cfg_err(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(cfg_err(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(
            key.trim().replace('-', "_").to_string(),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

fn parse_complex(s: &str) -> Result<Complex64, RunError> {
    // forms: "1.3", "1.0+0.5i", "0.8-0.3i", "2i"
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Err(cfg_err(format!("cannot parse complex number `{s}`")));
    };
    // find the sign separating real and imaginary parts (skip index 0 and
    // signs that belong to an exponent)
    let bytes = body.as_bytes();
    let mut split_at = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split_at = Some(i);
            break;
        }
    }
    let (re_s, im_s) = match split_at {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re = re_s
        .parse::<f64>()
        .map_err(|_| cfg_err(format!("cannot parse complex number `{s}`")))?;
    let im = match im_s {
        "+" | "" => 1.0,
        "-" => -1.0,
        other => other
            .parse::<f64>()
            .map_err(|_| cfg_err(format!("cannot parse complex number `{s}`")))?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_fraction(s: &str) -> Result<(u64, u64), RunError> {
    let Some((num, den)) = s.split_once('/') else {
        return Err(cfg_err(format!(
            "theta must be an exact fraction like 1/3, got `{s}`"
        )));
    };
    let num: u64 = num
        .trim()
        .parse()
        .map_err(|_| cfg_err(format!("bad fraction numerator in `{s}`")))?;
    let den: u64 = den
        .trim()
        .parse()
        .map_err(|_| cfg_err(format!("bad fraction denominator in `{s}`")))?;
    if num == 0 || den == 0 || num >= den {
        return Err(cfg_err(format!(
            "theta = {s} must lie strictly inside (0,1)"
        )));
    }
    Ok((num, den))
}

fn parse_vec<T, F>(raw: Option<&String>, what: &str, f: F) -> Result<Vec<T>, RunError>
where
    F: Fn(&str) -> Result<T, RunError>,
{
    match raw {
        None => Ok(Vec::new()),
        Some(r) => {
            let items = split_list(r);
            if items.is_empty() {
                return Err(cfg_err(format!("empty list for `{what}`")));
            }
            items.iter().map(|s| f(s)).collect()
        }
    }
}

impl ResolvedConfig {
    pub fn from_args(args: VerifyArgs) -> Result<Self, RunError> {
        let identity = match args.identity.as_str() {
            "popov" => Identity::Popov,
            "theta" => Identity::Theta,
            "cn" => Identity::Cn,
            "voronoi" => Identity::Voronoi,
            "odd-char" => Identity::OddChar,
            "sine" => Identity::Sine,
            "reduction" => Identity::Reduction,
            "integrals" => Identity::Integrals,
            other => {
                return Err(cfg_err(format!(
                    "unknown identity `{other}` (expected popov|theta|cn|voronoi|odd-char|sine|reduction|integrals)"
                )))
            }
        };

        let file = match &args.config {
            Some(path) => parse_file(path)?,
            None => HashMap::new(),
        };
        // flags override file entries
        let get = |flag: &Option<String>, key: &str| -> Option<String> {
            flag.clone().or_else(|| file.get(key).cloned())
        };

        let k = parse_vec(get(&args.k, "k").as_ref(), "k", |s| {
            s.parse::<u32>()
                .map_err(|_| cfg_err(format!("bad k `{s}`")))
        })?;
        let z = parse_vec(get(&args.z, "z").as_ref(), "z", |s| {
            let v: f64 = s.parse().map_err(|_| cfg_err(format!("bad z `{s}`")))?;
            if v > 0.0 {
                Ok(v)
            } else {
                Err(cfg_err(format!("z must be positive, got {v}")))
            }
        })?;
        let t = parse_vec(get(&args.t, "t").as_ref(), "t", parse_complex)?;
        let y = parse_vec(get(&args.y, "y").as_ref(), "y", parse_complex)?;
        let s = parse_vec(get(&args.s, "s").as_ref(), "s", |v| {
            let f: f64 = v.parse().map_err(|_| cfg_err(format!("bad s `{v}`")))?;
            if f > 0.0 {
                Ok(f)
            } else {
                Err(cfg_err(format!("s must be positive, got {f}")))
            }
        })?;
        let x = parse_vec(get(&args.x, "x").as_ref(), "x", |v| {
            let f: f64 = v.parse().map_err(|_| cfg_err(format!("bad x `{v}`")))?;
            if f > 0.0 {
                Ok(f)
            } else {
                Err(cfg_err(format!("x must be positive, got {f}")))
            }
        })?;
        let theta = parse_vec(get(&args.theta, "theta").as_ref(), "theta", parse_fraction)?;
        let modulus = parse_vec(get(&args.modulus, "modulus").as_ref(), "modulus", |v| {
            v.parse::<u32>()
                .map_err(|_| cfg_err(format!("bad modulus `{v}`")))
        })?;
        let a = parse_vec(get(&args.a, "a").as_ref(), "a", |v| {
            v.parse::<u32>()
                .map_err(|_| cfg_err(format!("bad a `{v}`")))
        })?;
        let order = parse_vec(get(&args.order, "order").as_ref(), "order", |v| {
            let f: f64 = v.parse().map_err(|_| cfg_err(format!("bad order `{v}`")))?;
            if f >= 0.0 {
                Ok(f)
            } else {
                Err(cfg_err(format!("order must be >= 0, got {f}")))
            }
        })?;
        let n = parse_vec(get(&args.n, "n").as_ref(), "n", |v| {
            v.parse::<u32>()
                .map_err(|_| cfg_err(format!("bad n `{v}`")))
        })?;

        let chi_index = match get(&args.chi_index, "chi_index") {
            None => None,
            Some(v) => Some(
                v.parse::<u32>()
                    .map_err(|_| cfg_err(format!("bad chi-index `{v}`")))?,
            ),
        };

        let tol = match get(&args.tol, "tol") {
            None => 1e-9,
            Some(v) => {
                let f: f64 = v.parse().map_err(|_| cfg_err(format!("bad tol `{v}`")))?;
                if f > 0.0 && f < 1.0 {
                    f
                } else {
                    return Err(cfg_err(format!("tol must be in (0,1), got {f}")));
                }
            }
        };
        let table_len = match get(&args.table_len, "table_len") {
            None => besselsum::identities::DEFAULT_TABLE_LEN,
            Some(v) => {
                let f: u64 = v
                    .parse()
                    .map_err(|_| cfg_err(format!("bad table-len `{v}`")))?;
                if !(1000..=20_000_000).contains(&f) {
                    return Err(cfg_err(format!(
                        "table-len must be in [1000, 2e7], got {f}"
                    )));
                }
                f
            }
        };

        if let Some(v) = get(&args.snap_tol, "snap_tol") {
            let f: f64 = v
                .parse()
                .map_err(|_| cfg_err(format!("bad snap-tol `{v}`")))?;
            besselsum::summation::set_snap_tolerance(f).map_err(|e| cfg_err(e.to_string()))?;
        }
        let xs = get(&args.x_switch, "x_switch");
        let ws = get(&args.w_switch, "w_switch");
        if xs.is_some() || ws.is_some() {
            let xv: f64 = match &xs {
                Some(v) => v
                    .parse()
                    .map_err(|_| cfg_err(format!("bad x-switch `{v}`")))?,
                None => besselsum::special::DEFAULT_X_SWITCH,
            };
            let wv: f64 = match &ws {
                Some(v) => v
                    .parse()
                    .map_err(|_| cfg_err(format!("bad w-switch `{v}`")))?,
                None => besselsum::special::DEFAULT_W_SWITCH,
            };
            besselsum::special::set_switch_points(xv, wv).map_err(|e| cfg_err(e.to_string()))?;
        }

        let format = match get(&args.format, "format").as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(cfg_err(format!(
                    "unknown format `{other}` (expected json or csv)"
                )))
            }
        };
        let output = args
            .output
            .clone()
            .or_else(|| file.get("output").map(PathBuf::from));

        let jobs = match get(&args.jobs, "jobs") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| cfg_err(format!("bad jobs `{v}`")))?,
            None => std::env::var("BESSELSUM_JOBS")
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
                .unwrap_or(1),
        };
        if jobs == 0 || jobs > 256 {
            return Err(cfg_err(format!("jobs must be in [1, 256], got {jobs}")));
        }

        Ok(ResolvedConfig {
            identity,
            k,
            z,
            t,
            y,
            s,
            x,
            theta,
            modulus,
            a,
            order,
            n,
            chi_index,
            tol,
            table_len,
            format,
            output,
            jobs,
        })
    }
}
