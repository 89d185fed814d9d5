use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use netentropy::entropy::{full_report, Conventions, EntropyError, EntropyReport};
use netentropy::generators::{complete_graph, dumbbell, grow_scale_free_observed, ring_lattice, GrowthConfig};
use netentropy::io::{
    count_mismatch, load_config, load_edge_list, parse_manifest, render_report, write_edge_list, write_report,
    ExperimentConfig, IoError, Provenance, ReportDocument, ReportEntry,
};
use netentropy::Graph;
use rayon::prelude::*;

use crate::args::{ComputeArgs, GenerateArgs, GrowArgs, Kind, ReportArgs, SweepArgs};

/// Failure with its exit code: 2 for usage or parse problems, 3 when the
/// input graph cannot carry an entropy, 1 for output failures.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Degenerate(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Output(_) => 1,
        })
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Degenerate(m) | CliError::Output(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::WriteFailure(_) => CliError::Output(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

fn output_err(e: io::Error) -> CliError {
    CliError::Output(e.to_string())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn experiment_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, CliError> {
    match path {
        Some(p) => Ok(load_config(p)?),
        None => Ok(ExperimentConfig::default()),
    }
}

pub fn compute(args: &ComputeArgs) -> Result<(), CliError> {
    let loaded = load_edge_list(&args.input, &args.edge_format.edge_list_format())?;
    if loaded.duplicate_edges > 0 || loaded.self_loops > 0 {
        eprintln!(
            "warning: collapsed {} duplicate edge(s), dropped {} self-loop(s)",
            loaded.duplicate_edges, loaded.self_loops
        );
    }
    if !loaded.graph.is_connected() {
        eprintln!("warning: graph is disconnected; unreachable pairs carry no betweenness");
    }
    let conventions = args.conventions.apply(Conventions::default());
    let report = full_report(&loaded.graph, &conventions)?;
    let name = args.name.clone().unwrap_or_else(|| {
        args.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "network".into())
    });
    let mut doc = ReportDocument::new(conventions);
    doc.entries.push(ReportEntry {
        name,
        provenance: Provenance {
            input: Some(args.input.display().to_string()),
            nodes: report.graph.nodes,
            edges: report.graph.edges,
            digest: Some(loaded.digest),
        },
        report,
    });
    render_report(&doc, args.format.into(), io::stdout().lock())?;
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let need_n = || args.n.ok_or_else(|| CliError::Usage("--n is required for this kind".into()));
    let usage = |e: netentropy::generators::GeneratorError| CliError::Usage(e.to_string());
    let graph = match args.kind {
        Kind::Complete => {
            let n = need_n()?;
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            complete_graph(n)
        }
        Kind::Ring => ring_lattice(need_n()?, args.k).map_err(usage)?,
        Kind::Dumbbell => dumbbell(need_n()?).map_err(usage)?,
        Kind::Grown => {
            let exp = experiment_config(args.config.as_ref())?;
            let cfg = growth_overrides(exp.growth, args.n, args.iterations, args.seed);
            grow(&cfg, &exp.conventions, |_, _, _| {})?.0
        }
    };
    let out = open_output(args.output.as_deref())?;
    write_edge_list(&graph, out).map_err(output_err)
}

fn growth_overrides(mut cfg: GrowthConfig, n: Option<usize>, iterations: Option<usize>, seed: Option<u64>) -> GrowthConfig {
    if let Some(n) = n {
        cfg.seed_nodes = n;
    }
    if let Some(k) = iterations {
        cfg.iterations = k;
    }
    if let Some(s) = seed {
        cfg.rng_seed = s;
    }
    cfg
}

fn grow<F>(
    cfg: &GrowthConfig,
    conventions: &Conventions,
    observe: F,
) -> Result<(Graph, netentropy::generators::GrowthTrace), CliError>
where
    F: FnMut(usize, &Graph, &EntropyReport),
{
    use netentropy::generators::GeneratorError;
    grow_scale_free_observed(cfg, conventions, observe).map_err(|e| match e {
        GeneratorError::Entropy(e) => CliError::Degenerate(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })
}

pub fn grow_trace(args: &GrowArgs) -> Result<(), CliError> {
    let exp = experiment_config(args.config.as_ref())?;
    let cfg = growth_overrides(exp.growth, args.n, args.iterations, args.seed);
    let conventions = args.conventions.apply(exp.conventions);
    let (graph, trace) = grow(&cfg, &conventions, |_, _, _| {})?;

    let mut out = open_output(args.output.as_deref())?;
    (|| -> io::Result<()> {
        writeln!(out, "# {conventions}")?;
        writeln!(out, "iteration,nodes,edges,e_t")?;
        for s in &trace.snapshots {
            writeln!(out, "{},{},{},{:.6}", s.iteration, s.node_count, s.edge_count, s.e_t)?;
        }
        out.flush()
    })()
    .map_err(output_err)?;

    if let Some(path) = &args.graph_output {
        let file = File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        write_edge_list(&graph, BufWriter::new(file)).map_err(output_err)?;
    }
    Ok(())
}

/// Parses `1,5,10` or the half-open range `0..10`.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("invalid {what} list `{text}`"));
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad()))
        .collect()
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let exp = experiment_config(args.config.as_ref())?;
    let conventions = args.conventions.apply(exp.conventions);
    let mut ks = parse_list(&args.k_list, "K")?;
    let seeds = parse_list(&args.seeds, "seed")?;
    let sizes: Vec<u64> = match &args.nodes {
        Some(list) => parse_list(list, "node count")?,
        None => vec![exp.growth.seed_nodes as u64],
    };
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || seeds.is_empty() || sizes.is_empty() {
        return Err(CliError::Usage("K list, seeds and node counts must be non-empty".into()));
    }
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let max_k = *ks.last().unwrap() as usize;

    let cells: Vec<(u64, u64)> = sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    for &(n, _) in &cells {
        let cfg = GrowthConfig { seed_nodes: n as usize, ..exp.growth.clone() };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<BTreeMap<usize, EntropyReport>, CliError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, seed)| {
                let cfg = GrowthConfig {
                    seed_nodes: n as usize,
                    iterations: max_k,
                    rng_seed: seed,
                    ..exp.growth.clone()
                };
                let mut picked = BTreeMap::new();
                grow(&cfg, &conventions, |k, _, r| {
                    if ks.binary_search(&(k as u64)).is_ok() {
                        picked.insert(k, r.clone());
                    }
                })?;
                Ok(picked)
            })
            .collect()
    });

    let mut by_cell = BTreeMap::new();
    for (cell, res) in cells.iter().zip(results) {
        by_cell.insert(*cell, res?);
    }

    let mut doc = ReportDocument::new(conventions);
    let mut summary = Vec::new();
    for &n in &sizes {
        for &k in &ks {
            let mut values = Vec::new();
            for &seed in &seeds {
                let report = by_cell[&(n, seed)][&(k as usize)].clone();
                values.push(report.e_t);
                doc.entries.push(ReportEntry::new(format!("n{n}_k{k}_seed{seed}"), report));
            }
            values.sort_by(f64::total_cmp);
            let mid = values.len() / 2;
            let median = if values.len() % 2 == 0 {
                (values[mid - 1] + values[mid]) / 2.0
            } else {
                values[mid]
            };
            summary.push((n, k, median, values.len()));
        }
    }
    write_report(&doc, &args.output, args.format.into())?;

    let mut out = io::stdout().lock();
    (|| -> io::Result<()> {
        writeln!(out, "nodes,k,median_e_t,seeds")?;
        for (n, k, median, count) in summary {
            writeln!(out, "{n},{k},{median:.6},{count}")?;
        }
        out.flush()
    })()
    .map_err(output_err)
}

pub fn report(args: &ReportArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.manifest.display())))?;
    let entries = parse_manifest(&text)?;
    let base = match &args.data_dir {
        Some(d) => d.clone(),
        None => args
            .manifest
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default(),
    };
    let conventions = args.conventions.apply(Conventions::default());
    let mut doc = ReportDocument::new(conventions);
    for entry in &entries {
        let path = base.join(&entry.file);
        let loaded = load_edge_list(&path, &entry.format)?;
        if let Some(w) = count_mismatch(entry, &loaded.graph) {
            eprintln!("warning: {w}");
        }
        let report = full_report(&loaded.graph, &conventions)
            .map_err(|e| CliError::Degenerate(format!("{}: {e}", entry.name)))?;
        doc.entries.push(ReportEntry {
            name: entry.name.clone(),
            provenance: Provenance {
                input: Some(path.display().to_string()),
                nodes: report.graph.nodes,
                edges: report.graph.edges,
                digest: Some(loaded.digest),
            },
            report,
        });
    }
    write_report(&doc, &args.output, args.format.into())?;

    let mut ranked: Vec<&ReportEntry> = doc.entries.iter().collect();
    ranked.sort_by(|a, b| b.report.e_t.total_cmp(&a.report.e_t));
    let mut out = io::stdout().lock();
    (|| -> io::Result<()> {
        writeln!(out, "rank,network,e_t,e_deg,e_bet")?;
        for (i, e) in ranked.iter().enumerate() {
            let r = &e.report;
            writeln!(out, "{},{},{:.6},{:.6},{:.6}", i + 1, e.name, r.e_t, r.e_deg, r.e_bet)?;
        }
        out.flush()
    })()
    .map_err(output_err)
}
