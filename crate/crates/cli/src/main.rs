//! Command-line driver for the ideal calculus.
//!
//! Exit codes: 0 = the verdict holds / all checks pass; 1 = a definite
//! failure with a counterexample; 2 = no decision rule applies; 3 = usage
//! or parse errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use idealcalc_core::classify::{equivalent, metadata, Equivalence};
use idealcalc_core::corpus::standard_corpus;
use idealcalc_core::dsl;
use idealcalc_core::harness::{check_isometry_lattice, check_katetov, Report};
use idealcalc_core::ideal::{catalog_expand, perp_normalize, CatalogSide, Verdict, Witness};
use idealcalc_core::iso::{
    directsum_iso, fubini_quotient, omegaperp_iso, tensor_embed, tensor_injective_norm,
};
use idealcalc_core::rat::rat_to_string;
use idealcalc_core::{c0, member, Domain, Error, IdealExpr, IndexMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "idealcalc",
    version,
    about = "Symbolic calculus of ideals on countable sets"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized harnesses (IDEALCALC_SEED overrides the default).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials for randomized harnesses.
    #[arg(long, global = true, default_value_t = 200)]
    trials: u64,
    /// Enumeration prefix length for brute-force cross-checks.
    #[arg(long, global = true, default_value_t = 1000)]
    prefix: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a set in an ideal.
    Member { ideal: String, set: String },
    /// Decide membership of a simple sequence in c₀ of an ideal.
    InC0 { ideal: String, seq: String },
    /// The I-limsup of a simple sequence.
    Limsup { ideal: String, seq: String },
    /// Distance to c₀ of the ideal (the quotient norm).
    Qnorm { ideal: String, seq: String },
    /// Sup norm of a simple sequence.
    Norm { seq: String },
    /// Compare two ideal expressions over the standard corpus.
    Equiv { left: String, right: String },
    /// Normalize the orthogonal of an ideal expression.
    Perp { ideal: String },
    /// Expand a catalog ordinal into its P and Q entries.
    Catalog { ordinal: String },
    /// Documented classification flags of a catalog ideal.
    Classify { ideal: String },
    /// Split a sequence along a join of ideals.
    Decompose {
        left: String,
        right: String,
        seq: String,
    },
    /// Check isometry and lattice laws of a representable operator.
    VerifyOp {
        op: String,
        source_ideal: String,
        target_ideal: String,
    },
    /// Check a Katětov reduction on the standard corpus.
    CheckKatetov {
        map: String,
        upper: String,
        lower: String,
    },
    /// Decompose along the ℓ∞-sum picture of a block-sum ideal.
    IsoDirectsum { sum_ideal: String, seq: String },
    /// Decompose along the c₀-sum picture of the orthogonal of a block sum.
    IsoOmegaperp { sum_ideal: String, seq: String },
    /// Apply the Fubini quotient map.
    FubiniMap {
        rows: String,
        per_column: String,
        seq: String,
    },
    /// Injective tensor norm of a sum of elementary tensors.
    TensorNorm { tensor: String },
    /// Print the standard set corpus of a domain.
    Corpus {
        domain: String,
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
}

fn main() -> ExitCode {
    // Usage problems are exit code 3; clap's default of 2 is reserved for
    // undecidable questions.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("IDEALCALC_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0x1DEA1CA1C)
    });
    match run(&cli, seed) {
        Ok(code) => code,
        Err(e) => {
            let code = match e {
                Error::Undecidable(_) | Error::NotClosed(_) => 2u8,
                _ => 3u8,
            };
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string(), "exit": code })),
            }
            ExitCode::from(code)
        }
    }
}

fn retarget_to(ideal: IdealExpr, domain: &Domain) -> Result<IdealExpr, Error> {
    if ideal.domain() == domain {
        Ok(ideal)
    } else {
        ideal.retarget(domain)
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::JoinSplit { in_left, in_right } => json!({
            "kind": "join-split",
            "in_left": dsl::print_set(in_left),
            "in_right": dsl::print_set(in_right),
        }),
        Witness::ExceptionalColumns(e) => json!({
            "kind": "exceptional-columns",
            "columns": dsl::print_set(e),
        }),
        Witness::PerpBound { bound, traces } => json!({
            "kind": "perp-bound",
            "bound": bound,
            "traces": traces
                .iter()
                .map(|(n, t)| json!({ "column": n, "trace": dsl::print_set(t) }))
                .collect::<Vec<_>>(),
        }),
        Witness::FailedCell(c) => json!({ "kind": "failed-cell", "cell": dsl::print_set(c) }),
        Witness::FailedColumn { column, trace } => json!({
            "kind": "failed-column",
            "column": column,
            "trace": dsl::print_set(trace),
        }),
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::JoinSplit { in_left, in_right } => {
            format!(
                "split: left part {}, right part {}",
                dsl::print_set(in_left),
                dsl::print_set(in_right)
            )
        }
        Witness::ExceptionalColumns(e) => format!("exceptional columns {}", dsl::print_set(e)),
        Witness::PerpBound { bound, .. } => format!("columns bounded by {bound}"),
        Witness::FailedCell(c) => format!("counterexample cell {}", dsl::print_set(c)),
        Witness::FailedColumn { column, trace } => {
            format!("column {column} has trace {}", dsl::print_set(trace))
        }
    }
}

fn emit_verdict(cli: &Cli, v: &Verdict) -> ExitCode {
    match cli.format {
        Format::Text => {
            let mut out = if v.holds {
                "holds".to_string()
            } else {
                "fails".to_string()
            };
            if let Some(w) = &v.witness {
                out.push_str(&format!(" ({})", witness_text(w)));
            }
            println!("{out}");
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert(
                "verdict".into(),
                json!(if v.holds { "holds" } else { "fails" }),
            );
            if let Some(w) = &v.witness {
                let key = if v.holds { "witness" } else { "counterexample" };
                obj.insert(key.into(), witness_json(w));
            }
            println!("{}", Value::Object(obj));
        }
    }
    ExitCode::from(if v.holds { 0 } else { 1 })
}

fn report_exit(cli: &Cli, report: &Report) -> ExitCode {
    match cli.format {
        Format::Text => {
            println!("{}", if report.passed { "pass" } else { "fail" });
            for law in &report.laws {
                let status = match (law.passed, law.expected_failure) {
                    (true, _) => "ok",
                    (false, true) => "expected-fail",
                    (false, false) => "FAIL",
                };
                println!("  [{status}] {}", law.law);
                if let Some(c) = &law.counterexample {
                    println!("        counterexample: {c}");
                }
            }
            for f in &report.flags {
                println!("  note: {f}");
            }
        }
        Format::Json => {
            let laws: Vec<Value> = report
                .laws
                .iter()
                .map(|l| {
                    json!({
                        "law": l.law,
                        "passed": l.passed,
                        "expected_failure": l.expected_failure,
                        "counterexample": l.counterexample,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "verdict": if report.passed { "pass" } else { "fail" },
                    "trials": report.trials,
                    "seed": report.seed,
                    "laws": laws,
                    "flags": report.flags,
                    "counterexample": report.counterexample(),
                })
            );
        }
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}

/// Re-verify a holds-witness against the brute-force evaluator on a domain
/// prefix: join splits must cover the set, and orthogonality bounds must
/// dominate every enumerated support column.
fn witness_prefix_check(
    set: &idealcalc_core::SetExpr,
    w: &Witness,
    prefix: usize,
) -> Result<bool, Error> {
    match w {
        Witness::JoinSplit { in_left, in_right } => {
            let cover = idealcalc_core::set_ops::union(in_left, in_right)?;
            for p in set.enumerate_prefix(prefix) {
                if !cover.contains(&p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Witness::PerpBound { bound, .. } => {
            let rows = idealcalc_core::set_ops::row_support(set)?;
            for p in rows.enumerate_prefix(prefix) {
                if p.as_nat().map(|n| n > *bound).unwrap_or(true) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(true),
    }
}

fn run(cli: &Cli, seed: u64) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Member { ideal, set } => {
            let set = dsl::parse_set(set)?;
            let ideal = retarget_to(dsl::parse_ideal(ideal)?, set.domain())?;
            let v = member(&ideal, &set)?;
            if v.holds {
                if let Some(w) = &v.witness {
                    if !witness_prefix_check(&set, w, cli.prefix)? {
                        return Err(Error::Undecidable(
                            "witness failed its brute-force cross-check".into(),
                        ));
                    }
                }
            }
            Ok(emit_verdict(cli, &v))
        }
        Command::InC0 { ideal, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let ideal = retarget_to(dsl::parse_ideal(ideal)?, seq.domain())?;
            let v = c0::in_c0i(&ideal, &seq)?;
            Ok(emit_verdict(cli, &v))
        }
        Command::Limsup { ideal, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let ideal = retarget_to(dsl::parse_ideal(ideal)?, seq.domain())?;
            let ls = c0::ideal_limsup(&ideal, &seq)?;
            match cli.format {
                Format::Text => println!("{ls}"),
                Format::Json => println!("{}", json!({ "limsup": ls.to_string() })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Qnorm { ideal, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let ideal = retarget_to(dsl::parse_ideal(ideal)?, seq.domain())?;
            let q = c0::quotient_norm(&ideal, &seq)?;
            match cli.format {
                Format::Text => println!("{}", rat_to_string(&q)),
                Format::Json => println!("{}", json!({ "quotient_norm": rat_to_string(&q) })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm { seq } => {
            let seq = dsl::parse_seq(seq)?;
            let n = seq.sup_norm();
            match cli.format {
                Format::Text => println!("{}", rat_to_string(&n)),
                Format::Json => println!("{}", json!({ "sup_norm": rat_to_string(&n) })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { left, right } => {
            let left = dsl::parse_ideal(left)?;
            let right = retarget_to(dsl::parse_ideal(right)?, left.domain())?;
            let corpus = standard_corpus(left.domain());
            match equivalent(&left, &right, &corpus)? {
                Equivalence::Equal => {
                    match cli.format {
                        Format::Text => println!("equal"),
                        Format::Json => println!("{}", json!({ "verdict": "equal" })),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Equivalence::Distinguished(w) => {
                    let printed = dsl::print_set(&w);
                    match cli.format {
                        Format::Text => println!("distinguished by {printed}"),
                        Format::Json => println!(
                            "{}",
                            json!({ "verdict": "distinguished", "counterexample": printed })
                        ),
                    }
                    Ok(ExitCode::from(1))
                }
                Equivalence::Unknown => Err(Error::Undecidable(
                    "corpus agreement without a structural certificate".into(),
                )),
            }
        }
        Command::Perp { ideal } => {
            let ideal = dsl::parse_ideal(ideal)?;
            let normalized = perp_normalize(&IdealExpr::perp(ideal));
            let printed = dsl::print_ideal(&normalized);
            match cli.format {
                Format::Text => println!("{printed}"),
                Format::Json => println!("{}", json!({ "perp": printed })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { ordinal } => {
            let alpha = dsl::parse_ordinal(ordinal)?;
            let p = catalog_expand(CatalogSide::P, &alpha)?;
            let q = catalog_expand(CatalogSide::Q, &alpha)?;
            match cli.format {
                Format::Text => {
                    println!(
                        "P[{alpha}] = {}   (domain {})",
                        dsl::print_ideal(&p),
                        p.domain()
                    );
                    println!(
                        "Q[{alpha}] = {}   (domain {})",
                        dsl::print_ideal(&q),
                        q.domain()
                    );
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "ordinal": alpha.to_string(),
                        "p": dsl::print_ideal(&p),
                        "q": dsl::print_ideal(&q),
                        "domain": p.domain().to_string(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { ideal } => {
            let ideal = dsl::parse_ideal(ideal)?;
            let meta = metadata(&ideal)?;
            match cli.format {
                Format::Text => {
                    println!("{}:", meta.name);
                    for (flag, (value, note)) in [
                        ("meager", meta.meager),
                        ("borel", meta.borel),
                        ("frechet", meta.frechet),
                        ("tall", meta.tall),
                        ("contains_fin", meta.contains_fin),
                    ] {
                        println!("  {flag}: {value}  ({note})");
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "name": meta.name,
                        "meager": { "value": meta.meager.0, "note": meta.meager.1 },
                        "borel": { "value": meta.borel.0, "note": meta.borel.1 },
                        "frechet": { "value": meta.frechet.0, "note": meta.frechet.1 },
                        "tall": { "value": meta.tall.0, "note": meta.tall.1 },
                        "contains_fin": { "value": meta.contains_fin.0, "note": meta.contains_fin.1 },
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { left, right, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let left = retarget_to(dsl::parse_ideal(left)?, seq.domain())?;
            let right = retarget_to(dsl::parse_ideal(right)?, seq.domain())?;
            let (y, z) = c0::decompose_join(&left, &right, &seq)?;
            match cli.format {
                Format::Text => {
                    println!("left  part: {}", dsl::print_seq(&y));
                    println!("right part: {}", dsl::print_seq(&z));
                }
                Format::Json => println!(
                    "{}",
                    json!({ "left": dsl::print_seq(&y), "right": dsl::print_seq(&z) })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyOp {
            op,
            source_ideal,
            target_ideal,
        } => {
            let op = dsl::parse_op(op)?;
            let src = retarget_to(dsl::parse_ideal(source_ideal)?, &op.source())?;
            let tgt = retarget_to(dsl::parse_ideal(target_ideal)?, &op.target())?;
            let report = check_isometry_lattice(&op, &src, &tgt, cli.trials, seed)?;
            Ok(report_exit(cli, &report))
        }
        Command::CheckKatetov { map, upper, lower } => {
            let upper = dsl::parse_ideal(upper)?;
            let mut map = dsl::parse_map(map)?;
            // A bare identity follows the upper ideal's domain.
            if let IndexMap::Identity(d) = &map {
                if d != upper.domain() {
                    map = IndexMap::Identity(upper.domain().clone());
                }
            }
            let lower = retarget_to(dsl::parse_ideal(lower)?, &map.source())?;
            let corpus = standard_corpus(upper.domain());
            let report = check_katetov(&map, &upper, &lower, &corpus)?;
            Ok(report_exit(cli, &report))
        }
        Command::IsoDirectsum { sum_ideal, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let sum = retarget_to(dsl::parse_ideal(sum_ideal)?, seq.domain())?;
            let dec = directsum_iso(&seq, &sum)?;
            let norm_in = seq.sup_norm();
            let norm_out = dec.sup_of_block_norms();
            let ok = norm_in == norm_out;
            match cli.format {
                Format::Text => {
                    for c in &dec.cells {
                        let block = c
                            .uniform
                            .as_ref()
                            .map(dsl::print_seq)
                            .unwrap_or_else(|| "(column-dependent)".into());
                        println!(
                            "columns {}: block {} (norm {})",
                            dsl::print_set(&c.region),
                            block,
                            rat_to_string(&c.norm)
                        );
                    }
                    println!(
                        "norm identity: {} (sequence {}, blocks {})",
                        if ok { "exact" } else { "VIOLATED" },
                        rat_to_string(&norm_in),
                        rat_to_string(&norm_out)
                    );
                }
                Format::Json => {
                    let cells: Vec<Value> = dec
                        .cells
                        .iter()
                        .map(|c| {
                            json!({
                                "region": dsl::print_set(&c.region),
                                "block": c.uniform.as_ref().map(dsl::print_seq),
                                "norm": rat_to_string(&c.norm),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "verdict": if ok { "pass" } else { "fail" },
                            "cells": cells,
                            "sup_norm": rat_to_string(&norm_in),
                            "sup_of_block_norms": rat_to_string(&norm_out),
                            "membership": dec.membership.as_ref().map(|v| v.holds),
                        })
                    );
                }
            }
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
        Command::IsoOmegaperp { sum_ideal, seq } => {
            let seq = dsl::parse_seq(seq)?;
            let sum = retarget_to(dsl::parse_ideal(sum_ideal)?, seq.domain())?;
            let dec = omegaperp_iso(&seq, &sum)?;
            match cli.format {
                Format::Text => {
                    println!("vanishing bound: {}", dec.bound);
                    for (n, block) in &dec.blocks {
                        println!("block {n}: {}", dsl::print_seq(block));
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "verdict": "pass",
                        "bound": dec.bound,
                        "blocks": dec
                            .blocks
                            .iter()
                            .map(|(n, b)| json!({ "column": n, "block": dsl::print_seq(b) }))
                            .collect::<Vec<_>>(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FubiniMap {
            rows,
            per_column,
            seq,
        } => {
            let seq = dsl::parse_seq(seq)?;
            let inner = seq
                .domain()
                .inner()
                .ok_or_else(|| Error::domain_mismatch(&Domain::nat_pairs(), seq.domain()))?
                .clone();
            let rows = retarget_to(dsl::parse_ideal(rows)?, &Domain::Nat)?;
            let per_column = retarget_to(dsl::parse_ideal(per_column)?, &inner)?;
            let (q, kernel) = fubini_quotient(&seq, &rows, &per_column)?;
            match cli.format {
                Format::Text => {
                    println!("image: {}", dsl::print_seq(&q));
                    println!("kernel: {kernel}");
                }
                Format::Json => println!(
                    "{}",
                    json!({ "image": dsl::print_seq(&q), "kernel": kernel })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::TensorNorm { tensor } => {
            let u = dsl::parse_tensor(tensor)?;
            let norm = tensor_injective_norm(&u)?;
            let embedded = tensor_embed(&u)?;
            let ok = norm == embedded.sup_norm();
            match cli.format {
                Format::Text => println!(
                    "{} ({})",
                    rat_to_string(&norm),
                    if ok {
                        "matches the embedded sup norm"
                    } else {
                        "MISMATCH"
                    }
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "verdict": if ok { "pass" } else { "fail" },
                        "injective_norm": rat_to_string(&norm),
                        "embedded_norm": rat_to_string(&embedded.sup_norm()),
                    })
                ),
            }
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
        Command::Corpus { domain, limit } => {
            let domain = dsl::parse_domain(domain)?;
            let corpus = standard_corpus(&domain);
            match cli.format {
                Format::Text => {
                    for e in corpus.iter().take(*limit) {
                        println!("{}", dsl::print_set(e));
                    }
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "domain": domain.to_string(),
                        "count": corpus.len(),
                        "sets": corpus
                            .iter()
                            .take(*limit)
                            .map(dsl::print_set)
                            .collect::<Vec<_>>(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
