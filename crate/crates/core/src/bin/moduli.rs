//! Command-line surface for the library: every computation is exposed as a
//! subcommand with machine-readable JSON output. The exit code is 0 only
//! when all requested checks pass; inadmissible parameters produce a
//! structured error object on stderr and a nonzero exit.

use clap::{Parser, Subcommand};
use moduli::borcherds::{verify_product_fricke, verify_product_level1};
use moduli::fricke::{
    fricke_trace, hauptmodul_eta, hauptmodul_json, rademacher_coeff,
};
use moduli::jacobi::{solve_phi_dp, to_plusspace};
use moduli::plusspace::{
    basis_f, basis_f_levelp, basis_f_levelp_upto, basis_g, duality_check_level4,
    g_index_admissible, hecke_tm2, recurrence_check_b,
};
use moduli::quadforms::{classes_json, classnum_identities, hurwitz};
use moduli::suite;
use moduli::traces::{hilbert_poly, trace_json};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "moduli",
    about = "Traces of singular moduli, plus-space bases, Jacobi forms, \
             Fricke hauptmoduln and Borcherds products",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn default_prec() -> i64 {
    std::env::var("MODULI_PREC")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20)
}

#[derive(Subcommand)]
enum Command {
    /// Trace of singular moduli t(d), or the Fricke trace when --p is given
    Trace {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        p: Option<i64>,
    },
    /// Hurwitz class number H(d)
    Hurwitz {
        #[arg(long)]
        d: i64,
    },
    /// Reduced forms of discriminant -d
    Classes {
        #[arg(long)]
        d: i64,
    },
    /// Hilbert class polynomial of discriminant -d
    Hilbert {
        #[arg(long)]
        d: i64,
    },
    /// Weight-1/2 basis element f_d at level 4, or level 4p with --p
    BasisF {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Weight-3/2 basis element g_D at level 4, or level 4p with --p
    BasisG {
        #[arg(long = "D")]
        big_d: i64,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Coefficient duality A(D, d) = -B(D, d) over an admissible grid
    Duality {
        #[arg(long, default_value_t = 4)]
        level: i64,
        #[arg(long = "Dmax", default_value_t = 12)]
        dmax_upper: i64,
        #[arg(long = "dmax", default_value_t = 12)]
        dmax_lower: i64,
    },
    /// Half-integral Hecke operator T(m^2) applied to a basis element
    Hecke {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "g")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        index: i64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Weight-2 index-p Jacobi form with defining discriminant -D
    Jacobi {
        #[arg(long = "D")]
        big_d: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Canonical hauptmodul for the Fricke group of level p
    Hauptmodul {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Rademacher-sum estimate of a hauptmodul coefficient
    Rademacher {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        nu: i64,
        #[arg(long, default_value_t = 1500)]
        cmax: i64,
        #[arg(long, default_value_t = 1500)]
        dmax: i64,
    },
    /// Fricke trace t^(p)(d)
    FrickeTrace {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        d: i64,
    },
    /// Verify the product formula for discriminant -d (level 1, or level p)
    BorcherdsVerify {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Coefficient recurrences and Hurwitz class number identities
    Identities {
        #[arg(long, default_value_t = 50)]
        nmax: i64,
    },
    /// Run the full verification battery and print a summary table
    Suite {
        /// run a single check by id (1..=11)
        #[arg(long)]
        only: Option<usize>,
        /// directory to write the machine-readable report into
        #[arg(long)]
        golden_dir: Option<std::path::PathBuf>,
    },
}

#[derive(Serialize)]
struct SuiteLine {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn fail(err: impl std::fmt::Display) -> ! {
    eprintln!("{}", json!({ "error": err.to_string() }));
    std::process::exit(1);
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(all_passed) => std::process::exit(if all_passed { 0 } else { 1 }),
        Err(e) => fail(e),
    }
}

fn run(cmd: Command) -> moduli::Result<bool> {
    let dp = default_prec();
    match cmd {
        Command::Trace { d, p } => match p {
            None => emit(&trace_json(d)?),
            Some(p) => {
                let t = fricke_trace(p, d)?;
                emit(&json!({
                    "p": p, "d": d, "trace": t.value.to_string(),
                    "residual": format!("{:.3e}", t.residual), "digits": t.digits,
                }));
            }
        },
        Command::Hurwitz { d } => {
            let h = hurwitz(d)?;
            emit(&json!({ "d": d, "hurwitz": h.to_string() }));
        }
        Command::Classes { d } => emit(&classes_json(d)?),
        Command::Hilbert { d } => emit(&hilbert_poly(d)?),
        Command::BasisF { d, p, prec } => {
            let prec = prec.unwrap_or(dp);
            let f = match p {
                None => basis_f(d, prec)?,
                Some(p) => basis_f_levelp(p, d, prec)?,
            };
            emit(&f.to_json());
        }
        Command::BasisG { big_d, p, prec } => {
            let prec = prec.unwrap_or(dp);
            let g = match p {
                None => basis_g(big_d, prec)?,
                Some(p) => {
                    let prec_n = prec / (4 * p) + p + 2;
                    to_plusspace(&solve_phi_dp(big_d, p, prec_n)?)?
                }
            };
            emit(&g.to_json());
        }
        Command::Duality {
            level,
            dmax_upper,
            dmax_lower,
        } => {
            let mut checks = Vec::new();
            let mut all = true;
            match level {
                4 => {
                    for big_d in 1..=dmax_upper {
                        if !g_index_admissible(big_d, 4) {
                            continue;
                        }
                        for d in 0..=dmax_lower {
                            if !moduli::plusspace::f_index_admissible(d, 4) {
                                continue;
                            }
                            let w = duality_check_level4(big_d, d, 4)?;
                            all &= w.ok;
                            checks.push(w);
                        }
                    }
                }
                8 => {
                    let fs = basis_f_levelp_upto(2, dmax_lower, dmax_upper + 4)?;
                    for big_d in 1..=dmax_upper {
                        if !g_index_admissible(big_d, 8) {
                            continue;
                        }
                        let prec_n = dmax_lower / 8 + 4;
                        let g = to_plusspace(&solve_phi_dp(big_d, 2, prec_n)?)?;
                        for f in &fs {
                            let a = f.coeff(big_d);
                            let b = g.coeff(f.index);
                            let ok = a == -b.clone();
                            all &= ok;
                            checks.push(moduli::plusspace::DualityWitness {
                                level: 8,
                                big_d,
                                d: f.index,
                                a: a.to_string(),
                                b: b.to_string(),
                                ok,
                            });
                        }
                    }
                }
                other => {
                    return Err(moduli::Error::Invalid(format!(
                        "duality grids exist at level 4 and 8, not {other}"
                    )))
                }
            }
            emit(&json!({ "level": level, "pairs": checks.len(), "all_ok": all,
                          "checks": checks }));
            return Ok(all);
        }
        Command::Hecke {
            m,
            kind,
            index,
            prec,
        } => {
            let prec = prec.unwrap_or(dp).max(m * m * 4);
            let base = match kind.as_str() {
                "f" => basis_f(index, prec)?,
                "g" => basis_g(index, prec)?,
                other => {
                    return Err(moduli::Error::Invalid(format!(
                        "kind must be f or g, got {other}"
                    )))
                }
            };
            emit(&hecke_tm2(&base, m)?.to_json());
        }
        Command::Jacobi { big_d, p, prec } => {
            let prec = prec.unwrap_or(dp.min(12));
            emit(&solve_phi_dp(big_d, p, prec)?.to_json());
        }
        Command::Hauptmodul { p, prec } => {
            let spec = hauptmodul_eta(p, prec.unwrap_or(dp))?;
            emit(&hauptmodul_json(&spec));
        }
        Command::Rademacher { p, nu, cmax, dmax } => {
            let r = rademacher_coeff(p, nu, cmax, dmax);
            emit(&json!({
                "p": r.p, "nu": r.nu, "c_max": r.c_max, "d_max": r.d_max,
                "estimate": format!("{:.6}", r.estimate),
                "tail_estimate": format!("{:.3e}", r.tail_estimate),
            }));
        }
        Command::FrickeTrace { p, d } => {
            let t = fricke_trace(p, d)?;
            emit(&json!({
                "p": p, "d": d, "trace": t.value.to_string(),
                "residual": format!("{:.3e}", t.residual), "digits": t.digits,
            }));
        }
        Command::BorcherdsVerify { d, p, prec } => {
            let prec = prec.unwrap_or(dp);
            let check = match p {
                None => verify_product_level1(d, prec)?,
                Some(p) => verify_product_fricke(p, d, prec)?,
            };
            let ok = check.ok;
            emit(&check);
            return Ok(ok);
        }
        Command::Identities { nmax } => {
            let rec = recurrence_check_b(nmax.min(50).max(1))?;
            let ids = classnum_identities(nmax)?;
            let rec_ok = rec.iter().all(|w| w.odd_ok && w.even_ok);
            let ids_ok = ids.iter().all(|i| i.holds());
            emit(&json!({
                "nmax": nmax,
                "coefficient_recurrences_ok": rec_ok,
                "class_number_identities_ok": ids_ok,
            }));
            return Ok(rec_ok && ids_ok);
        }
        Command::Suite { only, golden_dir } => {
            let results = match only {
                Some(id) => vec![suite::run_one(id)],
                None => suite::run_all(),
            };
            eprint!("{}", suite::render_report(&results));
            let lines: Vec<SuiteLine> = results
                .iter()
                .map(|r| SuiteLine {
                    id: r.id,
                    name: r.name,
                    ok: r.ok,
                    detail: r.detail.clone(),
                })
                .collect();
            if let Some(dir) = golden_dir {
                std::fs::create_dir_all(&dir)
                    .and_then(|_| {
                        std::fs::write(
                            dir.join("suite.json"),
                            serde_json::to_string_pretty(&lines).expect("serializable"),
                        )
                    })
                    .map_err(|e| moduli::Error::Invalid(format!("cannot write report: {e}")))?;
            }
            emit(&lines);
            return Ok(results.iter().all(|r| r.ok));
        }
    }
    Ok(true)
}
