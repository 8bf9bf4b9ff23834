use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use spms_core::channel::{ChannelConfig, QuantizerConfig, SnrKind};
use spms_core::code_graph::{construct_peg, degree_report, gf2_rank, girth, load_alist, write_alist, TannerGraph};
use spms_core::decoder::DecoderConfig;
use spms_core::montecarlo::{in_pool, run_sweep, sha256_hex, FileSink, StoppingRule, SweepConfig, VERSION};
use spms_core::weights::{self, format_decimal, load_table1, parse_decimal, Objective, OptimizerConfig, WeightSchedule};

use crate::parse;
use crate::{
    ConstructArgs, DecoderArg, InfoArgs, ObjectiveArg, OptimizeArgs, SimulateArgs, SnrKindArg, UsageError,
    ValidateArgs,
};

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(message.into()))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(path.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

fn read_code(path: &Path) -> Result<(TannerGraph, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = load_alist(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((graph, sha256_hex(text.as_bytes())))
}

#[derive(Serialize)]
struct Manifest<'a, A: Serialize> {
    subcommand: &'a str,
    version: &'a str,
    args: &'a A,
    resolved: serde_json::Value,
    input_sha256: BTreeMap<String, String>,
    seed: u64,
}

fn write_manifest<A: Serialize>(
    path: &Path,
    subcommand: &str,
    args: &A,
    resolved: serde_json::Value,
    input_sha256: BTreeMap<String, String>,
    seed: u64,
) -> Result<()> {
    let manifest = Manifest {
        subcommand,
        version: VERSION,
        args,
        resolved,
        input_sha256,
        seed,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn snr_kind(k: SnrKindArg) -> SnrKind {
    match k {
        SnrKindArg::Ebn0 => SnrKind::Ebn0,
        SnrKindArg::Esn0 => SnrKind::Esn0,
    }
}

fn check_q(q: u8) -> Result<()> {
    if (2..=4).contains(&q) {
        Ok(())
    } else {
        Err(usage(format!("--q must be 2, 3 or 4, got {q}")))
    }
}

fn quantizer(q: u8, alpha: Option<f64>) -> Result<QuantizerConfig> {
    let alpha = alpha.unwrap_or_else(|| QuantizerConfig::default_alpha(q).expect("q checked"));
    Ok(QuantizerConfig::new(alpha)?)
}

pub fn construct(a: &ConstructArgs) -> Result<ExitCode> {
    let counts = parse::degree_spec(&a.degree_spec).map_err(|e| usage(format!("{e:#}")))?;
    let graph = construct_peg(a.n, &counts, a.checks, a.seed)?;
    let text = write_alist(&graph);
    fs::write(&a.out, &text).with_context(|| format!("writing {}", a.out.display()))?;
    let report = degree_report(&graph);
    write_manifest(
        &with_suffix(&a.out, ".manifest.json"),
        "construct",
        a,
        json!({ "degree_report": report, "output_sha256": sha256_hex(text.as_bytes()) }),
        BTreeMap::new(),
        a.seed,
    )?;
    println!(
        "wrote {} ({} variables, {} checks, {} edges)",
        a.out.display(),
        graph.n_vars(),
        graph.n_checks(),
        graph.n_edges()
    );
    Ok(ExitCode::SUCCESS)
}

fn resolve_weights(spec: &str, q: u8, max_iters: usize, inputs: &mut BTreeMap<String, String>) -> Result<Option<WeightSchedule>> {
    let schedule = match spec {
        "none" => return Ok(None),
        "table1" => load_table1(q)?,
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            inputs.insert(path.to_string(), sha256_hex(text.as_bytes()));
            let s = WeightSchedule::from_json(&text).with_context(|| format!("parsing {path}"))?;
            if s.q != q {
                bail!("weight schedule is for q = {} but --q is {q}", s.q);
            }
            s
        }
    };
    if schedule.max_iters() != max_iters {
        bail!(
            "weight schedule covers {} iterations but --max-iters is {max_iters}",
            schedule.max_iters()
        );
    }
    Ok(Some(schedule))
}

pub fn simulate(a: &SimulateArgs) -> Result<ExitCode> {
    let snr_points = parse::snr_points(&a.snr).map_err(|e| usage(format!("{e:#}")))?;
    let (graph, code_digest) = read_code(&a.code)?;
    let mut inputs = BTreeMap::from([(a.code.display().to_string(), code_digest)]);
    let (decoder, quant) = match a.decoder {
        DecoderArg::Bp => {
            if a.q.is_some() {
                return Err(usage("--q does not apply to --decoder bp"));
            }
            if a.alpha.is_some() || a.weights != "none" {
                return Err(usage("--alpha and --weights do not apply to --decoder bp"));
            }
            let placeholder = QuantizerConfig::new(1.0)?;
            (DecoderConfig::bp().with_max_iters(a.max_iters), placeholder)
        }
        DecoderArg::SpMs => {
            let q = a.q.ok_or_else(|| usage("--decoder sp-ms needs --q"))?;
            check_q(q)?;
            let mut config = DecoderConfig::sp_ms(q).with_max_iters(a.max_iters);
            config.weights = resolve_weights(&a.weights, q, a.max_iters, &mut inputs)?;
            (config, quantizer(q, a.alpha)?)
        }
    };
    let rate = a.rate.unwrap_or_else(|| degree_report(&graph).rate);
    let config = SweepConfig {
        decoder,
        quantizer: quant,
        rate,
        snr_kind: snr_kind(a.snr_kind),
        snr_points,
        rule: StoppingRule::new(a.min_frames, a.min_frame_errors, a.max_frames)?,
        master_seed: a.seed,
        threads: a.threads,
    };
    let jsonl = with_suffix(&a.out_prefix, ".jsonl");
    let csv = with_suffix(&a.out_prefix, ".csv");
    let mut sink = FileSink::create(&jsonl, &csv).with_context(|| format!("creating {}", jsonl.display()))?;
    let mut resolved = config.describe(&graph);
    resolved["threads"] = json!(a.threads);
    write_manifest(
        &with_suffix(&a.out_prefix, ".manifest.json"),
        "simulate",
        a,
        resolved,
        inputs,
        a.seed,
    )?;
    let points = run_sweep(&graph, &config, &mut sink)?;
    for p in &points {
        println!(
            "snr {:>6} dB  frames {:>9}  frame errors {:>6}  ber {:.3e}  fer {:.3e}{}",
            p.snr_db,
            p.frames_sent,
            p.frame_errors,
            p.ber,
            p.fer,
            if p.censored { "  (censored)" } else { "" }
        );
    }
    Ok(ExitCode::SUCCESS)
}

pub fn optimize(a: &OptimizeArgs) -> Result<ExitCode> {
    check_q(a.q)?;
    let (graph, code_digest) = read_code(&a.code)?;
    let inputs = BTreeMap::from([(a.code.display().to_string(), code_digest)]);
    let quant = quantizer(a.q, a.alpha)?;
    let base = DecoderConfig::sp_ms(a.q).with_max_iters(a.max_iters);
    let rate = a.rate.unwrap_or_else(|| degree_report(&graph).rate);
    let channel = ChannelConfig::new(a.snr, rate, snr_kind(a.snr_kind), a.seed)?;
    let mut oc = OptimizerConfig::new(a.candidates, a.frames_per_candidate, a.seed);
    oc.objective = match a.objective {
        ObjectiveArg::Ber => Objective::Ber,
        ObjectiveArg::Fer => Objective::Fer,
    };
    oc.common_random_numbers = !a.independent_noise;
    oc.target_degrees = parse::usize_set(&a.target_degrees).map_err(|e| usage(format!("{e:#}")))?;
    if let Some(values) = &a.values {
        oc.weight_value_set = values
            .split(',')
            .map(|s| parse_decimal(s.trim()))
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("--values: {e}")))?;
    }
    let result = in_pool(a.threads, || weights::optimize(&graph, &base, &channel, &quant, &oc))??;
    fs::write(&a.out, result.best.to_json()).with_context(|| format!("writing {}", a.out.display()))?;

    let scores_path = a.out.with_extension("scores.csv");
    let mut csv = String::from("index,weights,score,ber,fer,frame_errors,bit_errors,mean_iterations\n");
    for s in &result.all_scores {
        let w: Vec<String> = s
            .weights
            .iter()
            .map(|&v| format_decimal(v).expect("candidate values are dyadic"))
            .collect();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.index,
            w.join(" "),
            s.score,
            s.ber,
            s.fer,
            s.frame_errors,
            s.bit_errors,
            s.mean_iterations
        ));
    }
    fs::write(&scores_path, csv).with_context(|| format!("writing {}", scores_path.display()))?;
    let values: Vec<String> = oc
        .weight_value_set
        .iter()
        .map(|&v| format_decimal(v).unwrap_or_else(|| v.to_string()))
        .collect();
    write_manifest(
        &with_suffix(&a.out, ".manifest.json"),
        "optimize",
        a,
        json!({
            "q": a.q,
            "alpha": quant.alpha,
            "rate": rate,
            "snr_db": a.snr,
            "max_iters": a.max_iters,
            "weight_value_set": values,
            "common_random_numbers": oc.common_random_numbers,
            "target_degrees": oc.target_degrees,
        }),
        inputs,
        a.seed,
    )?;
    println!(
        "best candidate {} of {}: score {:e}, all-ones score {:e}",
        result.best_index,
        result.all_scores.len(),
        result.score,
        result.all_scores[0].score
    );
    Ok(ExitCode::SUCCESS)
}

pub fn validate_weights(a: &ValidateArgs) -> Result<ExitCode> {
    let schedule = if a.schedule == "table1" {
        let q = a.q.ok_or_else(|| usage("table1 needs --q"))?;
        load_table1(q)?
    } else {
        let text = fs::read_to_string(&a.schedule).with_context(|| format!("reading {}", a.schedule))?;
        WeightSchedule::from_json(&text).with_context(|| format!("parsing {}", a.schedule))?
    };
    let mut problems: Vec<String> = schedule.validate().iter().map(|v| v.to_string()).collect();
    if let Some(q) = a.q {
        if schedule.q != q {
            problems.push(format!("schedule is for q = {} but --q is {q}", schedule.q));
        }
    }
    if let Some(n) = a.max_iters {
        if schedule.max_iters() != n {
            problems.push(format!("schedule covers {} iterations, expected {n}", schedule.max_iters()));
        }
    }
    if problems.is_empty() {
        println!("valid: q = {}, {} iterations", schedule.q, schedule.max_iters());
        Ok(ExitCode::SUCCESS)
    } else {
        for p in &problems {
            println!("violation: {p}");
        }
        Ok(ExitCode::from(1))
    }
}

pub fn info(a: &InfoArgs) -> Result<ExitCode> {
    let (graph, digest) = read_code(&a.code)?;
    let report = degree_report(&graph);
    println!("variables {}", graph.n_vars());
    println!("checks {}", graph.n_checks());
    println!("edges {}", graph.n_edges());
    println!("design rate {:.4}", report.rate);
    let fmt = |m: &BTreeMap<usize, usize>| {
        m.iter().map(|(d, c)| format!("{d}:{c}")).collect::<Vec<_>>().join(",")
    };
    println!("variable degrees {}", fmt(&report.vn_degrees));
    println!("check degrees {}", fmt(&report.cn_degrees));
    for &d in report.vn_degrees.keys() {
        println!("degree-{d} fraction {:.4}", report.vn_fraction(d));
    }
    if a.girth {
        match girth(&graph) {
            Some(g) => println!("girth {g}"),
            None => println!("girth none (acyclic)"),
        }
    }
    if a.verify_rank {
        let rank = gf2_rank(&graph);
        println!("rank {rank} (full row rank: {})", if rank == graph.n_checks() { "yes" } else { "no" });
        println!("true rate {:.4}", (graph.n_vars() - rank) as f64 / graph.n_vars() as f64);
    }
    println!("sha256 {digest}");
    Ok(ExitCode::SUCCESS)
}

