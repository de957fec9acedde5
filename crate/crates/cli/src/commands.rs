use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use knotflow::asymptotics::{check_scan, scan_cell, summarize, AsymptoticsError};
use knotflow::braid::{closure_info, knm_braid, torus_braid, BraidWord};
use knotflow::diagram::{vogel, Diagram};
use knotflow::flow::{flow_record, FlowError, FlowRun, RunConfig};
use knotflow::invariants::{omega_signature_of_matrix, signature_inertia, InvariantDescriptor, Theta, CONVENTION};
use knotflow::seifert::{alexander_det, genus_data, seifert_matrix};

use crate::output::{svg_plot, write_atomic};
use crate::{BraidArgs, BraidInput, CmdResult, Failure, FlowArgs, InvArgs, ScanArgs};

fn braid_from(input: &BraidInput) -> Result<BraidWord, Failure> {
    match (&input.braid, &input.family) {
        (Some(text), None) => {
            let strands = input.strands.ok_or_else(|| Failure::usage(anyhow!("--braid needs --strands")))?;
            BraidWord::parse(text, strands).map_err(Failure::usage)
        }
        (None, Some(f)) => {
            let num = |s: &str| s.parse::<usize>().map_err(|_| Failure::usage(anyhow!("bad family parameter {s:?}")));
            let (a, b) = (num(&f[1])?, num(&f[2])?);
            match f[0].as_str() {
                "torus" => torus_braid(a, b).map_err(Failure::usage),
                "knm" => knm_braid(a, b).map_err(Failure::usage),
                k => Err(Failure::usage(anyhow!("unknown family {k:?}; expected torus or knm"))),
            }
        }
        _ => Err(Failure::usage(anyhow!("give --braid TEXT --strands N or --family KIND A B"))),
    }
}

fn theta(s: &str) -> Result<Theta, Failure> {
    s.parse().map_err(Failure::usage)
}

fn print_json(v: &impl Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(v).context("serializing output")?);
    Ok(())
}

pub fn inv(a: &InvArgs) -> CmdResult {
    let b = braid_from(&a.input)?;
    let thetas = a.omega.iter().map(|s| theta(s)).collect::<Result<Vec<_>, _>>()?;
    let info = closure_info(&b);
    let mut out = json!({
        "braid": { "strands": b.strands(), "letters": b.letters().iter().map(|l| l.signed()).collect::<Vec<_>>() },
        "components": info.components,
        "crossings": info.crossings,
        "writhe": info.writhe,
        "convention": CONVENTION,
    });
    let none = !a.sig && thetas.is_empty() && !a.gstar && !a.det && !a.seifert;
    let data = seifert_matrix(&b);
    if a.sig || none {
        out["signature"] = json!(signature_inertia(&b).signature());
    }
    let mut ambiguous = false;
    if !thetas.is_empty() {
        let values: Vec<Value> = thetas
            .iter()
            .map(|&t| {
                let s = omega_signature_of_matrix(&data.matrix, t);
                ambiguous |= s.warning();
                json!({ "theta": t, "value": s.value, "nullity": s.nullity(), "ambiguous": s.warning() })
            })
            .collect();
        out["omega_signature"] = Value::Array(values);
    }
    if a.gstar {
        let g = genus_data(&b);
        out["slice_genus"] = json!({ "value": g.slice_genus.value().to_string(), "exact": g.slice_genus.is_exact(), "seifert_genus": g.genus.to_string() });
    }
    if a.det {
        out["determinant"] = json!(alexander_det(&data.matrix).to_string());
    }
    if a.seifert {
        out["seifert_matrix"] = json!(data.matrix.rows());
    }
    print_json(&out)?;
    Ok(if ambiguous { 4 } else { 0 })
}

pub fn scan(a: &ScanArgs) -> CmdResult {
    let inv = if a.sig {
        InvariantDescriptor::signature()
    } else if let Some(t) = &a.omega {
        InvariantDescriptor::omega_signature(theta(t)?)
    } else {
        InvariantDescriptor::slice_genus()
    };
    let (nmax, mmax) = (a.nmax, a.mmax.unwrap_or(a.nmax));
    check_scan(&inv, nmax, mmax).map_err(Failure::usage)?;
    let grid: Vec<(usize, usize)> = (1..=nmax).flat_map(|n| (1..=mmax).map(move |m| (n, m))).collect();
    let cells = grid
        .par_iter()
        .map(|&(n, m)| {
            let start = Instant::now();
            scan_cell(&inv, n, m).map(|c| (c, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()
        .context("evaluating grid")?;
    let est = summarize(&inv, nmax, mmax, cells.iter().map(|(c, _)| *c).collect());
    let summary = json!({
        "invariant": est.invariant,
        "nmax": nmax,
        "mmax": mmax,
        "tauBar": est.tau_bar,
        "errorBound": est.error_bound,
        "boundsSatisfied": est.bounds_satisfied,
        "monotoneTrend": est.trend,
        "convention": CONVENTION,
    });
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "m", "F", "f", "runtime_ms"]).context("csv")?;
        for (c, ms) in &cells {
            w.write_record([c.n.to_string(), c.m.to_string(), c.value.to_string(), c.normalized.to_string(), format!("{ms:.3}")]).context("csv")?;
        }
        write_atomic(&dir.join("scan.csv"), &w.into_inner().context("csv")?)?;
        write_atomic(&dir.join("summary.json"), serde_json::to_string_pretty(&summary).context("json")?.as_bytes())?;
    }
    print_json(&summary)?;
    Ok(if est.bounds_satisfied { 0 } else { 3 })
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: String,
    tool_version: &'static str,
    seed: u64,
    config_text: &'a str,
    config: &'a RunConfig,
    input_hashes: Value,
    outputs: Vec<String>,
    run_hash: &'a str,
    wall_clock: Value,
}

pub fn flow(a: &FlowArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display())).map_err(Failure::usage)?;
    let mut cfg = RunConfig::parse(&text).map_err(|e| Failure::usage(anyhow!("{}: {e}", a.config.display())))?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let started = SystemTime::now();
    let validation = cfg.field.validate().map_err(|e| match e {
        FlowError::Divergence { .. } | FlowError::Tangency { .. } | FlowError::NonFinite { .. } => Failure::validation(anyhow!("field validation failed: {e}")),
        other => Failure::usage(other),
    })?;
    log::info!("field validated: scale {:.3e}, max divergence {:.3e}", validation.scale, validation.max_divergence);
    let records = (0..cfg.tgrid.len()).into_par_iter().map(|i| flow_record(&cfg, i)).collect();
    let run = FlowRun::assemble(cfg.clone(), validation, records);
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut outputs = vec!["run.json".to_string(), "flow.csv".to_string()];
    write_atomic(&a.out.join("run.json"), run.to_json().as_bytes())?;
    write_atomic(&a.out.join("flow.csv"), run.to_csv().as_bytes())?;
    if a.svg {
        write_atomic(&a.out.join("plot.svg"), svg_plot(&run).as_bytes())?;
        outputs.push("plot.svg".into());
    }
    let elapsed = started.elapsed().map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let start_unix = started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut command = format!("knotflow flow --config {} --out {}", a.config.display(), a.out.display());
    if let Some(s) = a.seed {
        command.push_str(&format!(" --seed {s}"));
    }
    if a.svg {
        command.push_str(" --svg");
    }
    let manifest = RunManifest {
        command,
        tool_version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config_text: &text,
        config: &cfg,
        input_hashes: json!({ "config": hex::encode(Sha256::digest(text.as_bytes())) }),
        outputs,
        run_hash: &run.hash,
        wall_clock: json!({ "started_unix": start_unix, "seconds": elapsed }),
    };
    write_atomic(&a.out.join("manifest.json"), serde_json::to_string_pretty(&manifest).context("json")?.as_bytes())?;
    let ok = run.knots().count();
    let ambiguous = run.knots().any(|(_, k)| k.omega.iter().any(|o| o.ambiguous));
    println!("{}", json!({ "hash": run.hash, "records": run.records.len(), "knots": ok, "out": a.out.display().to_string() }));
    Ok(if ambiguous { 4 } else { 0 })
}

pub fn braid(a: &BraidArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.diagram).with_context(|| format!("reading {}", a.diagram.display())).map_err(Failure::usage)?;
    let d = Diagram::from_json(&text).map_err(Failure::usage)?;
    let r = vogel(&d).map_err(Failure::validation)?;
    print_json(&json!({
        "strands": r.braid.strands(),
        "letters": r.braid.letters().iter().map(|l| l.signed()).collect::<Vec<_>>(),
        "moves": r.moves,
        "crossings": d.crossing_count(),
    }))?;
    Ok(0)
}
