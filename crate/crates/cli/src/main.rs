use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cotwist_core::crossed::{twisted_group_algebra, verify_invariant_iso, CrossedModel};
use cotwist_core::expr;
use cotwist_core::gbasis::{hilbert_coeffs, truncated_gb, verify_iso, DEFAULT_DEGREE};
use cotwist_core::grp::{schur_order, AbGroup, Cocycle};
use cotwist_core::io::{self as cio, render};
use cotwist_core::pipeline::{self, iso_json, RunOptions};
use cotwist_core::twist::twist_presentation;
use cotwist_core::{Error, GenMap};

const PASS: u8 = 0;
const FALSIFIED: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "cotwist", version, about = "Exact cocycle twists of graded algebras")]
struct Cli {
    /// Degree bound for truncated computations.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE)]
    degree: u32,
    /// Cyclotomic conductor; inferred from the input when omitted.
    #[arg(long, global = true)]
    conductor: Option<u32>,
    /// Readable output instead of compact JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a twist spec and print the homogeneous basis.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Twist the presentation of a spec.
    Twist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Truncated Gröbner basis of a presentation.
    Gb {
        #[arg(long)]
        input: PathBuf,
    },
    /// Hilbert function prefix of a presentation.
    Hilbert {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check that a generator map induces an isomorphism through the degree bound.
    IsoCheck {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Generator images; the identity map when omitted.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Compare the twist with the invariants of the crossed product.
    Invariants {
        #[arg(long)]
        input: PathBuf,
    },
    /// Structure of a twisted group algebra.
    Kgmu {
        #[arg(long, default_value = "2,2")]
        group: String,
        #[arg(long, default_value = "(-1)^(p*s)")]
        cocycle: String,
    },
    /// Schur multiplier order, and the class of a cocycle when given.
    Schur {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cocycle: Option<String>,
    },
    /// Run the four Klein-four twist isomorphisms.
    #[command(name = "theorem55")]
    KleinPairs {
        /// Replace the Klein cocycle by this formula (control runs).
        #[arg(long)]
        cocycle: Option<String>,
    },
    /// Run every verification.
    Report,
}

struct Outcome {
    value: Value,
    passed: bool,
    text: Option<String>,
}

fn ok(value: Value) -> Outcome {
    Outcome {
        value,
        passed: true,
        text: None,
    }
}

fn read_json(path: &Path) -> Result<(Value, Vec<u8>), Error> {
    let bytes = fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let v = serde_json::from_slice(&bytes).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok((v, bytes))
}

fn formula_cocycle(group: &AbGroup, formula: &str, conductor: Option<u32>) -> Result<Cocycle, Error> {
    let e = expr::parse(formula)?;
    let c = conductor.unwrap_or_else(|| e.required_conductor());
    Cocycle::from_formula(group, &e, c)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let degree = cli.degree;
    match &cli.command {
        Command::Validate { input } => {
            let (v, _) = read_json(input)?;
            let spec = cio::parse_spec(&v, cli.conductor)?;
            let (ts, basis) = match spec.twist_spec() {
                Ok(x) => x,
                Err(e @ (Error::Action(_) | Error::Cocycle(_) | Error::Duality(_))) => {
                    return Ok(Outcome {
                        value: json!({"valid": false, "violation": e.to_string()}),
                        passed: false,
                        text: None,
                    })
                }
                Err(e) => return Err(e),
            };
            let names = spec.presentation.names();
            Ok(ok(json!({
                "valid": true,
                "group": cio::group_json(&spec.group),
                "cocycle": cio::cocycle_json(ts.cocycle()),
                "cocycle_is_coboundary": ts.cocycle().is_coboundary().is_some(),
                "basis": basis.map(|b| cio::basis_json(&b, &names, &spec.group)),
                "graded": cio::grading_json(ts.grading()),
            })))
        }
        Command::Twist { input, output } => {
            let (v, bytes) = read_json(input)?;
            let spec = cio::parse_spec(&v, cli.conductor)?;
            let (ts, basis) = spec.twist_spec()?;
            let twisted = twist_presentation(&ts)?;
            let mut out = cio::grading_json(&twisted);
            out["provenance"] = json!({
                "input_sha256": hex::encode(Sha256::digest(&bytes)),
                "cocycle_table": cio::cocycle_json(ts.cocycle()),
                "basis_matrix": basis.map(|b| cio::matrix_json(&b.matrix)),
                "original_names": spec.presentation.names(),
            });
            if let Some(path) = output {
                fs::write(path, render(&out, cli.human) + "\n")
                    .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                return Ok(ok(json!({"written": path.display().to_string()})));
            }
            Ok(ok(out))
        }
        Command::Gb { input } => {
            let (v, _) = read_json(input)?;
            let p = cio::parse_presentation(&v, cli.conductor)?;
            let gb = truncated_gb(&p, degree)?;
            Ok(ok(cio::gb_json(&gb, &p.names())))
        }
        Command::Hilbert { input } => {
            let (v, _) = read_json(input)?;
            let p = cio::parse_presentation(&v, cli.conductor)?;
            Ok(ok(json!({"degree": degree, "dims": hilbert_coeffs(&p, degree)?.dims})))
        }
        Command::IsoCheck { lhs, rhs, map } => {
            let (l, _) = read_json(lhs)?;
            let (r, _) = read_json(rhs)?;
            let pl = cio::parse_presentation(&l, cli.conductor)?;
            let pr = cio::parse_presentation(&r, cli.conductor)?;
            let m = cotwist_core::cyclo::lcm(pl.conductor(), pr.conductor());
            let (pl, pr) = (pl.embed(m)?, pr.embed(m)?);
            let (fwd, inv) = match map {
                Some(path) => cio::parse_map(&read_json(path)?.0, &pl, &pr)?,
                None => (GenMap::identity(pl.num_generators(), m), None),
            };
            let verdict = verify_iso(&pl, &pr, &fwd, degree, inv.as_ref())?;
            Ok(Outcome {
                passed: verdict.passed(),
                value: iso_json(&verdict),
                text: None,
            })
        }
        Command::Invariants { input } => {
            let (v, _) = read_json(input)?;
            let spec = cio::parse_spec(&v, cli.conductor)?;
            let (ts, _) = spec.twist_spec()?;
            let twisted = twist_presentation(&ts)?;
            let model = CrossedModel::new(&ts, degree)?;
            let rep = verify_invariant_iso(&model, &twisted, degree)?;
            Ok(Outcome {
                passed: rep.passed(),
                value: json!({
                    "degree": degree,
                    "passed": rep.passed(),
                    "relations_vanish": rep.relations_vanish,
                    "degrees": rep.degrees.iter().map(|d| json!({
                        "degree": d.degree,
                        "dim_a": d.dim_a,
                        "dim_twisted": d.dim_twisted,
                        "dim_invariants": d.dim_invariants,
                        "image_rank": d.image_rank,
                        "image_invariant": d.image_invariant,
                        "multiplicative": d.multiplicative,
                    })).collect::<Vec<_>>(),
                }),
                text: None,
            })
        }
        Command::Kgmu { group, cocycle } => {
            let g = AbGroup::new(cio::parse_group_str(group)?)?;
            let mu = formula_cocycle(&g, cocycle, cli.conductor)?;
            let alg = twisted_group_algebra(&g, &mu)?;
            let n = alg.dim();
            let products = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let v = alg.structure(a, b);
                            let k = v.iter().position(|c| !c.is_zero()).expect("basis products are nonzero");
                            format!("{}*{}", v[k], alg.labels()[k])
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            Ok(ok(json!({
                "group": cio::group_json(&g),
                "labels": alg.labels(),
                "products": products,
                "dimension": n,
                "center_dim": alg.center_basis().len(),
                "trace_form_rank": alg.trace_form().rank(),
                "full_matrix_algebra": alg.is_full_matrix_algebra(),
            })))
        }
        Command::Schur { group, cocycle } => {
            let g = AbGroup::new(cio::parse_group_str(group)?)?;
            let mut out = json!({"group": cio::group_json(&g), "order": schur_order(&g)});
            if let Some(f) = cocycle {
                let mu = formula_cocycle(&g, f, cli.conductor)?;
                let w = mu.is_coboundary();
                out["cocycle"] = cio::cocycle_json(&mu);
                out["is_coboundary"] = json!(w.is_some());
                out["witness"] = w.map_or(Value::Null, |rho| {
                    json!(rho.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                });
            }
            Ok(ok(out))
        }
        Command::KleinPairs { cocycle } => {
            let cocycle = cocycle
                .as_ref()
                .map(|f| formula_cocycle(&AbGroup::klein(), f, Some(4)))
                .transpose()?;
            let overridden = cocycle.is_some();
            let rep = pipeline::run_klein_twists(&RunOptions {
                degree,
                cocycle,
                coboundary: None,
            })?;
            let passed = if overridden {
                rep.passed()
            } else {
                rep.passed_with_expected_scalars()
            };
            let text = rep
                .pairs
                .iter()
                .map(|p| {
                    let scalars: Vec<String> = p
                        .scalars
                        .iter()
                        .map(|s| s.as_ref().map_or("-".into(), |c| c.to_string()))
                        .collect();
                    format!(
                        "{} {} -> {}: {} scalars ({}) verify_iso {}",
                        if p.passed() { "PASS" } else { "FAIL" },
                        p.source,
                        p.target,
                        if p.syntactic { "SYNTACTIC" } else { "FAILED" },
                        scalars.join(", "),
                        pipeline::iso_status_str(&p.iso.status)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome {
                value: rep.to_json(),
                passed,
                text: Some(text),
            })
        }
        Command::Report => {
            let checks = pipeline::full_report(degree)?;
            let text = checks
                .iter()
                .map(|c| format!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome {
                passed: checks.iter().all(|c| c.passed),
                value: pipeline::report_json(&checks),
                text: Some(text),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match (&out.text, cli.human) {
                (Some(t), true) => println!("{t}"),
                _ => println!("{}", render(&out.value, cli.human)),
            }
            ExitCode::from(if out.passed { PASS } else { FALSIFIED })
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", render(&json!({"error": e.to_string()}), cli.human));
            ExitCode::from(INPUT_ERROR)
        }
    }
}
