use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use raagsurf::certcheck::{bundled_certificates, CertMode, Certificate};
use raagsurf::ops::{central_extension, cocontract, double_along};
use raagsurf::patterns::builtin_catalog;
use raagsurf::pipeline::{run_elimination, verify_catalog, verify_skew, verify_thcw, VerifyLine};
use raagsurf::reduction::{Classification, Engine, EngineConfig, ExclusionDb, StarReading};
use raagsurf::{canonical_code, enumerate_codes, SmallGraph, VertexSet};

#[derive(Parser)]
#[command(
    name = "raagsurf",
    version,
    about = "Surface subgroup decisions for small right-angled Artin groups"
)]
struct Cli {
    #[command(flatten)]
    config: GlobalConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalConfig {
    /// Reading of condition (*).
    #[arg(long, global = true, value_enum, default_value_t = Star::CoreComplement)]
    star: Star,
    /// Move set used by the classifier.
    #[arg(long, global = true, value_enum, default_value_t = Moves::Standard)]
    moves: Moves,
    /// Also require vertex-deleted graphs to be excluded in the deleting moves.
    #[arg(long, global = true)]
    strict_deletions: bool,
    /// Override the mode stored in certificates.
    #[arg(long, global = true, value_enum)]
    cert_mode: Option<Mode>,
    /// Exclusion database, loaded if present and written back afterwards.
    #[arg(long, global = true, env = "RAAGSURF_DB")]
    db: Option<PathBuf>,
    /// Replay every k-th loaded db record (0 trusts the file).
    #[arg(long, global = true, default_value_t = 1)]
    replay_every: usize,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Star {
    #[value(alias = "centre-complement")]
    CoreComplement,
    SetComplement,
}

#[derive(Clone, Copy, ValueEnum)]
enum Moves {
    Standard,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Conservative,
    Extension,
}

#[derive(Subcommand)]
enum Command {
    /// Classify graphs given in graph6, or read one per line from stdin with "-".
    Classify {
        #[arg(required = true)]
        graphs: Vec<String>,
        /// Print the derivation of every excluded graph.
        #[arg(long)]
        explain: bool,
    },
    /// Run the eight-step elimination over every graph on K vertices.
    Pipeline {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(0..=8))]
        steps: u8,
        /// One key=value line per step instead of the full report.
        #[arg(long)]
        summary: bool,
    },
    /// Exhaustive structural checks.
    Verify {
        #[arg(value_enum)]
        what: Verify,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Check certificate files, or the bundled suite with --bundled.
    Certcheck {
        files: Vec<PathBuf>,
        #[arg(long, conflicts_with = "files")]
        bundled: bool,
    },
    /// Build a graph from another; vertices are 0-based.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// List canonical graph6 codes of all graphs on K vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Thcw,
    Skew,
    Catalog,
}

#[derive(Subcommand)]
enum Construct {
    /// The double K ∗_L K along a clique L.
    Double {
        graph: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// The central extension K ∗_L over a clique L.
    Hnn {
        graph: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Merge two non-adjacent vertices.
    Cocontract { graph: String, u: usize, v: usize },
}

enum Outcome {
    Ok,
    Counterexample,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Counterexample) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn engine_config(c: &GlobalConfig) -> EngineConfig {
    EngineConfig {
        star_reading: match c.star {
            Star::CoreComplement => StarReading::CentreComplement,
            Star::SetComplement => StarReading::SetComplement,
        },
        strict_deletions: c.strict_deletions,
        extended: matches!(c.moves, Moves::Extended),
        ..EngineConfig::default()
    }
}

fn build_engine(c: &GlobalConfig) -> Result<Engine> {
    let catalog = builtin_catalog().context("loading the forbidden catalog")?;
    let engine = Engine::new(catalog, engine_config(c));
    if let Some(path) = &c.db {
        if path.exists() {
            let db = engine
                .load_db(path, c.replay_every)
                .with_context(|| format!("loading {}", path.display()))?;
            engine.db.merge(&db)?;
        }
    }
    Ok(engine)
}

fn save_db(c: &GlobalConfig, db: &ExclusionDb) -> Result<()> {
    if let Some(path) = &c.db {
        db.save(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn parse_graph(text: &str) -> Result<SmallGraph> {
    SmallGraph::from_graph6(text.trim()).with_context(|| format!("bad graph6 {text:?}"))
}

fn vertex_set(g: &SmallGraph, items: &[usize]) -> Result<VertexSet> {
    if let Some(&v) = items.iter().find(|&&v| v >= g.n()) {
        bail!("vertex {v} out of range for {} vertices", g.n());
    }
    Ok(items.iter().copied().collect())
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .context("configuring threads")?;
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Classify { graphs, explain } => {
            let engine = build_engine(cfg)?;
            let mut lines = Vec::new();
            for g in graphs {
                if g == "-" {
                    for line in io::stdin().lock().lines() {
                        let line = line?;
                        if !line.trim().is_empty() {
                            lines.push(line.trim().to_string());
                        }
                    }
                } else {
                    lines.push(g.clone());
                }
            }
            let mut bad = 0;
            for line in &lines {
                let code = match parse_graph(line).and_then(|g| Ok(canonical_code(&g)?)) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        bad += 1;
                        continue;
                    }
                };
                let c = engine.classify_code(&code);
                writeln!(out, "{line}\t{}\t{}", c.verdict(), detail(&c))?;
                if *explain && c.is_excluded() {
                    for (dc, dcl) in engine.explain(&code).into_iter().skip(1) {
                        writeln!(out, "  {dc}\t{}\t{}", dcl.verdict(), detail(&dcl))?;
                    }
                }
            }
            save_db(cfg, &engine.db)?;
            if bad > 0 {
                bail!("{bad} unreadable line(s)");
            }
            Ok(Outcome::Ok)
        }
        Command::Pipeline { n, steps, summary } => {
            if *n > raagsurf::graph::CANON_LIMIT {
                bail!(
                    "--n {n} exceeds the canonical labelling limit of {}",
                    raagsurf::graph::CANON_LIMIT
                );
            }
            let engine = build_engine(cfg)?;
            let report = run_elimination(&engine, *n, *steps as usize);
            if *summary {
                write!(out, "{}", report.to_summary(false))?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            save_db(cfg, &engine.db)?;
            Ok(Outcome::Ok)
        }
        Command::Verify { what, max_n } => {
            if *max_n > raagsurf::graph::CANON_LIMIT {
                bail!("--max-n {max_n} exceeds the canonical labelling limit");
            }
            let ok = match what {
                Verify::Thcw | Verify::Skew => {
                    let catalog = builtin_catalog()?;
                    let lines = match what {
                        Verify::Thcw => verify_thcw(&catalog, *max_n),
                        _ => verify_skew(&catalog, *max_n),
                    };
                    print_verify(&mut out, &lines)?
                }
                Verify::Catalog => {
                    let engine = build_engine(cfg)?;
                    let checks = verify_catalog(&engine);
                    for c in &checks {
                        if c.passes() {
                            writeln!(out, "PASS {}", c.pattern)?;
                        } else {
                            let failed: Vec<&str> = c
                                .clauses
                                .iter()
                                .filter(|(_, ok)| !ok)
                                .map(|(s, _)| s.as_str())
                                .collect();
                            writeln!(out, "FAIL {}: {}", c.pattern, failed.join(", "))?;
                        }
                    }
                    save_db(cfg, &engine.db)?;
                    checks.iter().all(|c| c.passes())
                }
            };
            Ok(if ok {
                Outcome::Ok
            } else {
                Outcome::Counterexample
            })
        }
        Command::Certcheck { files, bundled } => {
            let certs: Vec<Certificate> = if *bundled {
                bundled_certificates()?
            } else {
                if files.is_empty() {
                    bail!("certcheck needs a file or --bundled");
                }
                files
                    .iter()
                    .map(|f| {
                        let text = std::fs::read_to_string(f)
                            .with_context(|| format!("reading {}", f.display()))?;
                        let mut c = Certificate::parse(&text)
                            .with_context(|| format!("parsing {}", f.display()))?;
                        if c.name.is_empty() {
                            c.name = f.display().to_string();
                        }
                        Ok(c)
                    })
                    .collect::<Result<_>>()?
            };
            let mut all_ok = true;
            for cert in &certs {
                let mode = match cfg.cert_mode {
                    Some(Mode::Conservative) => CertMode::Conservative,
                    Some(Mode::Extension) => CertMode::Extension,
                    None => cert.mode,
                };
                let r = cert
                    .check_with(mode)
                    .with_context(|| format!("checking {}", cert.name))?;
                for w in &r.warnings {
                    eprintln!("warning: {}: {w}", cert.name);
                }
                if r.passes() {
                    writeln!(out, "PASS {} ({mode}): {} anti-paths", r.name, r.paths)?;
                } else {
                    all_ok = false;
                    writeln!(
                        out,
                        "FAIL {} ({mode}): {} of {} anti-paths uncovered; first {}",
                        r.name,
                        r.failing,
                        r.paths,
                        cert.describe_failure(&r).unwrap_or_default()
                    )?;
                }
            }
            Ok(if all_ok {
                Outcome::Ok
            } else {
                Outcome::Counterexample
            })
        }
        Command::Construct { what } => {
            let g = match what {
                Construct::Double { graph, set } => {
                    let g = parse_graph(graph)?;
                    double_along(&g, vertex_set(&g, set)?)?
                }
                Construct::Hnn { graph, set } => {
                    let g = parse_graph(graph)?;
                    central_extension(&g, vertex_set(&g, set)?)?
                }
                Construct::Cocontract { graph, u, v } => {
                    let g = parse_graph(graph)?;
                    vertex_set(&g, &[*u, *v])?;
                    cocontract(&g, *u, *v)?
                }
            };
            writeln!(out, "{}", g.to_graph6())?;
            Ok(Outcome::Ok)
        }
        Command::Enumerate { n, count } => {
            if *n > raagsurf::graph::CANON_LIMIT {
                bail!("--n {n} exceeds the canonical labelling limit");
            }
            let codes = enumerate_codes(*n);
            if *count {
                writeln!(out, "{}", codes.len())?;
            } else {
                for c in &codes {
                    writeln!(out, "{c}")?;
                }
            }
            Ok(Outcome::Ok)
        }
    }
}

fn detail(c: &Classification) -> String {
    match c {
        Classification::Forbidden(p, e) => {
            let image: Vec<String> = e.map.iter().map(|v| v.to_string()).collect();
            format!("{p} at {}", image.join(","))
        }
        Classification::Excluded(t) => t.steps.first().map(|s| s.to_string()).unwrap_or_default(),
        Classification::Irreducible => "-".to_string(),
    }
}

fn print_verify(out: &mut impl Write, lines: &[VerifyLine]) -> Result<bool> {
    for l in lines {
        let tag = if l.passes() { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {}/{} at n={}", l.passed, l.checked, l.n)?;
        for c in &l.counterexamples {
            writeln!(out, "  counterexample {c}")?;
        }
    }
    Ok(lines.iter().all(VerifyLine::passes))
}
