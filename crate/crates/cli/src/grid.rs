//! Expansion of a resolved configuration into an ordered list of
//! evaluation points (the cross product of all parameter lists).

use besselsum::characters::enumerate_characters;
use besselsum::identities::{
    character_reduction_check, cn_identity_residual, odd_char_identity_residual_with_tol,
    popov_identity_residual_with_tol, sine_identity_residual_with_tol,
    theta_transform_residual_with_tol, voronoi_residual,
};
use besselsum::report::IdentityReport;
use besselsum::summation::{d_chi_instance, rk_instance, IntegralCase};
use besselsum::Error;
use num_complex::Complex64;

use crate::config::{Identity, ResolvedConfig};
use crate::RunError;

/// One evaluation point. Evaluation is pure; points can run on any worker.
pub enum Point {
    Popov {
        k: u32,
        z: f64,
        t: Complex64,
        tol: f64,
    },
    Theta {
        k: u32,
        y: Complex64,
        tol: f64,
    },
    CnRk {
        k: u32,
        order: f64,
        x: f64,
        table_len: u64,
    },
    CnDchi {
        modulus: u32,
        chi_index: u32,
        order: f64,
        x: f64,
        table_len: u64,
    },
    Voronoi {
        k: u32,
        s: f64,
        x: f64,
        table_len: u64,
    },
    OddChar {
        modulus: u32,
        chi_index: u32,
        z: f64,
        t: Complex64,
        tol: f64,
    },
    Sine {
        num: u64,
        den: u64,
        z: f64,
        t: f64,
        tol: f64,
    },
    Reduction {
        modulus: u32,
        a: u32,
        z: f64,
        t: f64,
    },
    Integral {
        case: IntegralCase,
        z: f64,
        t: f64,
    },
}

impl Point {
    pub fn evaluate(&self) -> Result<Vec<IdentityReport>, Error> {
        match *self {
            Point::Popov { k, z, t, tol } => {
                Ok(vec![popov_identity_residual_with_tol(k, z, t, tol)?])
            }
            Point::Theta { k, y, tol } => Ok(vec![theta_transform_residual_with_tol(k, y, tol)?]),
            Point::CnRk {
                k,
                order,
                x,
                table_len,
            } => {
                let inst = rk_instance(k, table_len)?;
                Ok(vec![cn_identity_residual(&inst, order, x)?])
            }
            Point::CnDchi {
                modulus,
                chi_index,
                order,
                x,
                table_len,
            } => {
                let chi = find_character(modulus, chi_index)?;
                let inst = d_chi_instance(&chi, table_len)?;
                Ok(vec![cn_identity_residual(&inst, order, x)?])
            }
            Point::Voronoi { k, s, x, table_len } => {
                Ok(vec![voronoi_residual(k, s, x, table_len)?])
            }
            Point::OddChar {
                modulus,
                chi_index,
                z,
                t,
                tol,
            } => {
                let chi = find_character(modulus, chi_index)?;
                Ok(vec![odd_char_identity_residual_with_tol(&chi, z, t, tol)?])
            }
            Point::Sine {
                num,
                den,
                z,
                t,
                tol,
            } => Ok(vec![sine_identity_residual_with_tol(num, den, z, t, tol)?]),
            Point::Reduction { modulus, a, z, t } => character_reduction_check(modulus, a, z, t),
            Point::Integral { case, z, t } => {
                Ok(vec![besselsum::summation::verify_integral_closed_form(
                    case, z, t,
                )?])
            }
        }
    }
}

fn find_character(
    modulus: u32,
    chi_index: u32,
) -> Result<besselsum::characters::DirichletCharacter, Error> {
    if modulus == 4 {
        return Ok(besselsum::characters::chi4_odd());
    }
    enumerate_characters(modulus)?
        .into_iter()
        .find(|c| c.index == chi_index)
        .ok_or_else(|| Error::Domain(format!("no character index {chi_index} mod {modulus}")))
}

/// Indices of all odd primitive characters mod `q`, respecting an
/// optional `--chi-index` filter.
fn odd_indices(q: u32, filter: Option<u32>) -> Result<Vec<u32>, RunError> {
    if q == 4 {
        return Ok(vec![1]);
    }
    let chars = enumerate_characters(q).map_err(|e| RunError::Config(e.to_string()))?;
    let idx: Vec<u32> = chars
        .iter()
        .filter(|c| c.is_odd && c.is_primitive)
        .map(|c| c.index)
        .filter(|i| filter.map(|f| f == *i).unwrap_or(true))
        .collect();
    if idx.is_empty() {
        return Err(RunError::Config(format!(
            "no odd primitive characters mod {q} match the filter"
        )));
    }
    Ok(idx)
}

fn need<T: Clone>(v: &[T], what: &str) -> Result<Vec<T>, RunError> {
    if v.is_empty() {
        Err(RunError::Config(format!(
            "missing required parameter `{what}`"
        )))
    } else {
        Ok(v.to_vec())
    }
}

/// Cross the parameter lists into the ordered point list. The nesting
/// order fixes the grid index and therefore the output order.
pub fn build_grid(cfg: &ResolvedConfig) -> Result<Vec<Point>, RunError> {
    let mut points = Vec::new();
    match cfg.identity {
        Identity::Popov => {
            for &k in &need(&cfg.k, "k")? {
                for &z in &need(&cfg.z, "z")? {
                    for &t in &need(&cfg.t, "t")? {
                        points.push(Point::Popov {
                            k,
                            z,
                            t,
                            tol: cfg.tol,
                        });
                    }
                }
            }
        }
        Identity::Theta => {
            for &k in &need(&cfg.k, "k")? {
                for &y in &need(&cfg.y, "y")? {
                    points.push(Point::Theta { k, y, tol: cfg.tol });
                }
            }
        }
        Identity::Cn => {
            if cfg.k.is_empty() == cfg.modulus.is_empty() {
                return Err(RunError::Config(
                    "cn needs exactly one of `k` (r_k instance) or `modulus` \
                     (odd-character divisor instance)"
                        .into(),
                ));
            }
            for &order in &need(&cfg.order, "order")? {
                for &x in &need(&cfg.x, "x")? {
                    if !cfg.k.is_empty() {
                        for &k in &cfg.k {
                            points.push(Point::CnRk {
                                k,
                                order,
                                x,
                                table_len: cfg.table_len,
                            });
                        }
                    } else {
                        for &q in &cfg.modulus {
                            for chi_index in odd_indices(q, cfg.chi_index)? {
                                points.push(Point::CnDchi {
                                    modulus: q,
                                    chi_index,
                                    order,
                                    x,
                                    table_len: cfg.table_len,
                                });
                            }
                        }
                    }
                }
            }
        }
        Identity::Voronoi => {
            for &k in &need(&cfg.k, "k")? {
                for &s in &need(&cfg.s, "s")? {
                    for &x in &need(&cfg.x, "x")? {
                        points.push(Point::Voronoi {
                            k,
                            s,
                            x,
                            table_len: cfg.table_len,
                        });
                    }
                }
            }
        }
        Identity::OddChar => {
            for &q in &need(&cfg.modulus, "modulus")? {
                for chi_index in odd_indices(q, cfg.chi_index)? {
                    for &z in &need(&cfg.z, "z")? {
                        for &t in &need(&cfg.t, "t")? {
                            points.push(Point::OddChar {
                                modulus: q,
                                chi_index,
                                z,
                                t,
                                tol: cfg.tol,
                            });
                        }
                    }
                }
            }
        }
        Identity::Sine => {
            for &(num, den) in &need(&cfg.theta, "theta")? {
                for &z in &need(&cfg.z, "z")? {
                    for &t in &need(&cfg.t, "t")? {
                        if t.im != 0.0 {
                            return Err(RunError::Config("sine identity requires real t".into()));
                        }
                        points.push(Point::Sine {
                            num,
                            den,
                            z,
                            t: t.re,
                            tol: cfg.tol,
                        });
                    }
                }
            }
        }
        Identity::Reduction => {
            for &q in &need(&cfg.modulus, "modulus")? {
                for &a in &need(&cfg.a, "a")? {
                    for &z in &need(&cfg.z, "z")? {
                        for &t in &need(&cfg.t, "t")? {
                            if t.im != 0.0 {
                                return Err(RunError::Config(
                                    "reduction check requires real t".into(),
                                ));
                            }
                            points.push(Point::Reduction {
                                modulus: q,
                                a,
                                z,
                                t: t.re,
                            });
                        }
                    }
                }
            }
        }
        Identity::Integrals => {
            // defaults give one record per closed form per (z, t)
            let ks = if cfg.k.is_empty() {
                vec![2]
            } else {
                cfg.k.clone()
            };
            let ns = if cfg.n.is_empty() {
                vec![2]
            } else {
                cfg.n.clone()
            };
            let qs = if cfg.modulus.is_empty() {
                vec![5]
            } else {
                cfg.modulus.clone()
            };
            for &z in &need(&cfg.z, "z")? {
                for &t in &need(&cfg.t, "t")? {
                    if t.im != 0.0 {
                        return Err(RunError::Config("integral checks require real t".into()));
                    }
                    for &k in &ks {
                        points.push(Point::Integral {
                            case: IntegralCase::SingleBessel { k },
                            z,
                            t: t.re,
                        });
                        for &n in &ns {
                            points.push(Point::Integral {
                                case: IntegralCase::DoubleBessel { k, n },
                                z,
                                t: t.re,
                            });
                        }
                    }
                    for &q in &qs {
                        points.push(Point::Integral {
                            case: IntegralCase::SingleBesselMod { q },
                            z,
                            t: t.re,
                        });
                        for &n in &ns {
                            points.push(Point::Integral {
                                case: IntegralCase::DoubleBesselMod { q, n },
                                z,
                                t: t.re,
                            });
                        }
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(RunError::Config("empty parameter grid".into()));
    }
    Ok(points)
}
