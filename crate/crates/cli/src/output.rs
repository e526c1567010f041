//! Report and table writers (JSON Lines / CSV) with a stable schema.

use std::io::{BufWriter, Write};

use besselsum::arith::{d_chi_table, rk_table};
use besselsum::characters::{chi4_odd, enumerate_characters};
use besselsum::report::{IdentityReport, Verdict};

use crate::config::Format;
use crate::{RunError, TableArgs};

pub fn open_sink(path: Option<&std::path::Path>) -> Result<Box<dyn Write>, RunError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

const CSV_HEADER: &str =
    "identity_id,params,lhs_re,lhs_im,rhs_re,rhs_im,residual,budget,verdict,terms_used,elapsed_ms";

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

pub fn write_reports(
    out: &mut dyn Write,
    reports: &[IdentityReport],
    format: Format,
) -> Result<(), RunError> {
    match format {
        Format::Json => {
            for r in reports {
                let line = serde_json::to_string(r)
                    .map_err(|e| RunError::Config(format!("serialization failed: {e}")))?;
                writeln!(out, "{line}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.identity_id,
                    r.params,
                    r.lhs_re,
                    r.lhs_im,
                    r.rhs_re,
                    r.rhs_im,
                    r.residual,
                    r.budget,
                    verdict_str(r.verdict),
                    r.terms_used,
                    r.elapsed_ms
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn fmt_complex_value(v: num_complex::Complex64) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.im >= 0.0 {
        format!("{}+{}i", v.re, v.im)
    } else {
        format!("{}-{}i", v.re, -v.im)
    }
}

pub fn write_table(out: &mut dyn Write, args: &TableArgs) -> Result<(), RunError> {
    match args.which.as_str() {
        "rk" => {
            let k = args
                .k
                .ok_or_else(|| RunError::Config("table rk requires --k".into()))?;
            let seq = rk_table(k, args.n_max).map_err(RunError::Eval)?;
            writeln!(out, "n,value")?;
            writeln!(out, "0,{}", seq.zero_value().re)?;
            for n in 1..=args.n_max {
                writeln!(out, "{n},{}", seq.int_value(n).unwrap())?;
            }
        }
        "dchi" => {
            let q = args
                .modulus
                .ok_or_else(|| RunError::Config("table dchi requires --modulus".into()))?;
            let chi = if q == 4 {
                chi4_odd()
            } else {
                let chars = enumerate_characters(q).map_err(RunError::Eval)?;
                let wanted = args.chi_index;
                chars
                    .into_iter()
                    .filter(|c| c.is_odd && c.is_primitive)
                    .find(|c| wanted.map(|w| w == c.index).unwrap_or(true))
                    .ok_or_else(|| {
                        RunError::Config(format!("no odd primitive character mod {q}"))
                    })?
            };
            let seq = d_chi_table(&chi, args.n_max);
            writeln!(out, "n,value")?;
            for n in 1..=args.n_max {
                writeln!(out, "{n},{}", fmt_complex_value(seq.value(n)))?;
            }
        }
        "characters" => {
            let q = args
                .modulus
                .ok_or_else(|| RunError::Config("table characters requires --modulus".into()))?;
            let chars = enumerate_characters(q).map_err(RunError::Eval)?;
            writeln!(out, "index,n,re,im")?;
            for chi in &chars {
                for n in 0..q {
                    let v = chi.values[n as usize];
                    writeln!(out, "{},{n},{},{}", chi.index, v.re, v.im)?;
                }
            }
        }
        other => {
            return Err(RunError::Config(format!(
                "unknown table `{other}` (expected rk|dchi|characters)"
            )))
        }
    }
    out.flush()?;
    Ok(())
}
