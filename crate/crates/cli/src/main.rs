use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pfactor::absorbers::{
    find_simple_absorber, run_pipeline, AbsorberKind, AbsorbingConfig, AbsorbingConstants, FamilySource, SimpleSearchOptions,
    TemplateChoice,
};
use pfactor::constructions::{build_split_host, sublinear_counterexample, SplitHost};
use pfactor::exact::parse_rational;
use pfactor::experiments::{emit_outputs, scan_threshold, workers_from_env, ExperimentSpec};
use pfactor::factor::{has_factor_with_budget, FactorOutcome};
use pfactor::pattern::{alpha_is_zero, d_star, is_strictly_balanced};
use pfactor::random::{perturb, sample_binomial, sample_coupled, SeededSampler};
use pfactor::{Hypergraph, Pattern, VertexSet};

/// Exit code for errors, kept apart from the outcome codes of `factor`.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "pfactor", version, about = "F-factors in randomly perturbed hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density parameters of a pattern, as JSON.
    Params {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Sample H^(k)(n, p), optionally on top of a host.
    Gen(GenArgs),
    /// Extremal host constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Decide whether a host has an F-factor (exit 0 factor, 1 none, 2 unknown).
    Factor {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Search-node budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Absorber search and the absorbing pipeline.
    #[command(subcommand)]
    Absorber(Absorber),
    /// Threshold scan described by a JSON spec; worker count from PFACTOR_WORKERS.
    Scan {
        #[arg(long)]
        spec: PathBuf,
        /// Output prefix; takes precedence over `output` in the experiment file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, required_unless_present = "coupled")]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    host: Option<PathBuf>,
    /// Ascending probabilities sharing one draw; writes `<out>_<i>.khg`.
    #[arg(long, value_delimiter = ',', conflicts_with = "p", requires = "out")]
    coupled: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construct {
    SplitHost {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eta: String,
        /// Writes `<out>.khg` and `<out>.json`; otherwise the graph goes to stdout and the
        /// sidecar to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Absorber {
    /// Simple absorber for S in host ∪ H^(k)(n, p); exit 1 when none is found.
    Find {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        random_p: f64,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        forbidden: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Absorbing set, almost-cover and absorption, with a JSON trace; exit 1 on failure.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AbsorberChoice {
    Simple,
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyChoice {
    Greedy,
    XFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum TemplateKind {
    Complete,
    Sparse,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    rho: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Toy constants; all three or none (then derived from rho).
    #[arg(long, requires_all = ["beta", "xi"])]
    q: Option<String>,
    #[arg(long, requires_all = ["q", "xi"])]
    beta: Option<String>,
    #[arg(long, requires_all = ["q", "beta"])]
    xi: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Host khg file; the complete k-graph when absent.
    #[arg(long)]
    host: Option<PathBuf>,
    /// Pattern khg file; a single edge when absent.
    #[arg(long)]
    pattern: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AbsorberChoice::Minimal)]
    absorbers: AbsorberChoice,
    #[arg(long, value_enum, default_value_t = FamilyChoice::XFirst)]
    families: FamilyChoice,
    #[arg(long, value_enum, default_value_t = TemplateKind::Sparse)]
    template: TemplateKind,
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Hypergraph::parse_khg(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_pattern(path: &Path) -> Result<Pattern> {
    Ok(Pattern::new(read_graph(path)?)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn params(path: &Path) -> Result<Value> {
    let f = read_pattern(path)?;
    let ds = d_star(&f)?;
    Ok(json!({
        "k": f.k(),
        "b": f.b(),
        "f": f.f(),
        "d_star": ds.ratio.to_string(),
        "d_star_value": ds.ratio.to_f64(),
        "J": { "vertices": ds.densest.vertices, "edges": ds.densest.edges },
        "strictly_balanced": is_strictly_balanced(&f)?,
        "alpha_is_zero": alpha_is_zero(&f)?,
    }))
}

fn gen(args: &GenArgs) -> Result<()> {
    let sampler = SeededSampler::new(args.seed, args.stream);
    let host = match &args.host {
        Some(path) => {
            let h = read_graph(path)?;
            if h.n() != args.n || h.k() != args.k {
                bail!("host has n = {}, k = {}, expected n = {}, k = {}", h.n(), h.k(), args.n, args.k);
            }
            Some(h)
        }
        None => None,
    };
    let combine = |g: Hypergraph| -> Result<Hypergraph> {
        Ok(match &host {
            Some(h) => h.union(&g)?,
            None => g,
        })
    };
    if let Some(ps) = &args.coupled {
        let out = args.out.as_ref().expect("clap requires --out with --coupled");
        for (i, g) in sample_coupled(args.n, args.k, ps, &sampler)?.into_iter().enumerate() {
            write(&with_suffix(out, &format!("_{}.khg", i + 1)), &combine(g)?.to_khg())?;
        }
        return Ok(());
    }
    let p = args.p.expect("clap requires --p without --coupled");
    let g = combine(sample_binomial(args.n, args.k, p, &sampler)?)?;
    match &args.out {
        Some(out) => write(out, &g.to_khg()),
        None => {
            print!("{}", g.to_khg());
            Ok(())
        }
    }
}

fn emit_construction(graph: &Hypergraph, sidecar: Value, out: &Option<PathBuf>) -> Result<()> {
    let sidecar = serde_json::to_string_pretty(&sidecar)?;
    match out {
        Some(prefix) => {
            write(&with_suffix(prefix, ".khg"), &graph.to_khg())?;
            write(&with_suffix(prefix, ".json"), &(sidecar + "\n"))
        }
        None => {
            print!("{}", graph.to_khg());
            eprintln!("{sidecar}");
            Ok(())
        }
    }
}

fn delta_1(host: &SplitHost) -> Result<usize> {
    Ok(host.graph.min_degree(1)?)
}

fn construct(cmd: &Construct) -> Result<()> {
    match cmd {
        Construct::SplitHost { n, k, eta, out } => {
            let eta = parse_rational(eta)?;
            let host = build_split_host(*n, *k, &eta)?;
            let sidecar = json!({
                "n": n, "k": k, "eta": eta.to_string(), "a_size": host.a_size(),
                "delta_1": delta_1(&host)?, "p": Value::Null,
            });
            emit_construction(&host.graph, sidecar, out)
        }
        Construct::Counterexample { n, k, omega, out } => {
            let (host, ce) = sublinear_counterexample(*n, *k, *omega)?;
            let sidecar = json!({
                "n": n, "k": k, "omega": omega, "a_size": ce.a_size, "eta_realized": ce.eta_realized,
                "delta_1": delta_1(&host)?, "p": ce.p,
            });
            emit_construction(&host.graph, sidecar, out)
        }
    }
}

fn factor(pattern: &Path, host: &Path, witness: &Option<PathBuf>, budget: Option<u64>) -> Result<u8> {
    let f = read_pattern(pattern)?;
    let h = read_graph(host)?;
    if f.k() != h.k() {
        bail!("pattern is a {}-graph, host a {}-graph", f.k(), h.k());
    }
    let outcome = has_factor_with_budget(&f, &h, budget);
    println!("{}", outcome.label());
    if let Some(path) = witness {
        let mut doc = json!({ "outcome": outcome.label() });
        match &outcome {
            FactorOutcome::Factor(t) => {
                doc["copies"] = json!(t.copies.iter().map(|e| &e.map).collect::<Vec<_>>());
            }
            FactorOutcome::NoFactor(reason) => doc["reason"] = json!(reason),
            FactorOutcome::Unknown { nodes } => doc["nodes"] = json!(nodes),
        }
        write(path, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(match outcome {
        FactorOutcome::Factor(_) => 0,
        FactorOutcome::NoFactor(_) => 1,
        FactorOutcome::Unknown { .. } => 2,
    })
}

fn absorber(cmd: &Absorber) -> Result<u8> {
    match cmd {
        Absorber::Find {
            host,
            random_p,
            pattern,
            s,
            forbidden,
            seed,
        } => {
            let h = read_graph(host)?;
            let f = read_pattern(pattern)?;
            let inst = perturb(&h, *random_p, &SeededSampler::new(*seed, 0))?;
            let forbidden = VertexSet::from_unsorted(forbidden.iter().copied());
            let found = find_simple_absorber(&inst, s, &f, &forbidden, &SimpleSearchOptions::default())?;
            let doc = match &found {
                Some(st) => json!({ "found": true, "blocks": st.blocks, "s": st.s, "diagonal": st.diagonal() }),
                None => json!({ "found": false }),
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(if found.is_some() { 0 } else { 1 })
        }
        Absorber::Pipeline(args) => pipeline(args),
    }
}

fn pipeline(args: &PipelineArgs) -> Result<u8> {
    let f = match &args.pattern {
        Some(p) => read_pattern(p)?,
        None => Pattern::single_edge(args.k)?,
    };
    let host = match &args.host {
        Some(p) => read_graph(p)?,
        None => Hypergraph::complete(args.n, args.k)?,
    };
    if host.n() != args.n {
        bail!("host has {} vertices, --n is {}", host.n(), args.n);
    }
    let rho = parse_rational(&args.rho)?;
    let constants = match (&args.q, &args.beta, &args.xi) {
        (Some(q), Some(beta), Some(xi)) => {
            AbsorbingConstants::toy(rho, parse_rational(q)?, parse_rational(beta)?, parse_rational(xi)?)?
        }
        _ => AbsorbingConstants::from_rho(&rho, f.b())?,
    };
    let config = AbsorbingConfig {
        families: match args.families {
            FamilyChoice::Greedy => FamilySource::Greedy,
            FamilyChoice::XFirst => FamilySource::XFirst,
        },
        template: match args.template {
            TemplateKind::Complete => TemplateChoice::Complete,
            TemplateKind::Sparse => TemplateChoice::Sparse,
        },
        absorbers: match args.absorbers {
            AbsorberChoice::Simple => AbsorberKind::Simple(SimpleSearchOptions::default()),
            AbsorberChoice::Minimal => AbsorberKind::Minimal { max_tries: 10_000 },
        },
        ..AbsorbingConfig::default()
    };
    let (trace, tiling) = run_pipeline(&host, &f, args.p, &constants, &config, &SeededSampler::new(args.seed, 0))?;
    println!("{}", serde_json::to_string_pretty(&trace)?);
    Ok(if tiling.is_some() { 0 } else { 1 })
}

fn scan(spec_path: &Path, out: &Option<PathBuf>) -> Result<()> {
    let spec = ExperimentSpec::load(spec_path).with_context(|| format!("loading {}", spec_path.display()))?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let result = scan_threshold(&spec, base, workers_from_env())?;
    let prefix = out.clone().or_else(|| spec.output.as_ref().map(|p| base.join(p)));
    let files = match &prefix {
        Some(prefix) => {
            let (csv, svg) = emit_outputs(&result.records, &result.cells, prefix)?;
            json!({ "csv": csv, "svg": svg })
        }
        None => Value::Null,
    };
    let summary = json!({ "cells": result.cells, "thresholds": result.thresholds, "files": files });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Params { pattern } => {
            println!("{}", serde_json::to_string_pretty(&params(&pattern)?)?);
            Ok(0)
        }
        Command::Gen(args) => gen(&args).map(|_| 0),
        Command::Construct(cmd) => construct(&cmd).map(|_| 0),
        Command::Factor {
            pattern,
            host,
            witness,
            budget,
        } => factor(&pattern, &host, &witness, budget),
        Command::Absorber(cmd) => absorber(&cmd),
        Command::Scan { spec, out } => scan(&spec, &out).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
