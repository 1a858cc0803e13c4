//! Command-line front end: bounds, capacity, construction, verification,
//! minrank, and index-code dualization on graph files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 partial
//! result (an infeasible sub-bound was skipped), 4 cap exceeded, 5 usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rdss::code::{self, Code};
use rdss::combinatorics::SolveMode;
use rdss::config::Caps;
use rdss::constructions;
use rdss::duality;
use rdss::graph::Graph;
use rdss::linear;
use rdss::report::Report;
use rdss::resilience;

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PARTIAL: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_USAGE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "rdss",
    version,
    about = "Storage codes on graphs: capacity, bounds, constructions, duality"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Cap on q^n for whole-space enumeration.
    #[arg(long, global = true, env = "RDSS_STATE_CAP")]
    state_cap: Option<u64>,
    /// Cap on n for exhaustive subset searches.
    #[arg(long, global = true, env = "RDSS_SUBSET_CAP")]
    subset_cap: Option<usize>,
    /// Cap on the number of enumerated cycles.
    #[arg(long, global = true, env = "RDSS_CYCLE_CAP")]
    cycle_cap: Option<usize>,
    /// Worker thread cap (default: all cores).
    #[arg(long, global = true, env = "RDSS_THREADS")]
    threads: Option<usize>,
    /// Determinism seed for randomized checks.
    #[arg(long, global = true, env = "RDSS_SEED", default_value_t = 0)]
    seed: u64,
    /// Directory for emitted artifacts (codes, coverings).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Matching,
    Cycles,
    Cliques,
    Lp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report every applicable capacity bound and the resulting interval.
    Bounds {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Compute the exact capacity (falls back to bounds past the cap).
    Capacity {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Require the exact computation (no silent fallback).
        #[arg(long)]
        exact: bool,
    },
    /// Build a code by the chosen method and emit it after verification.
    Construct {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Verify a code file against a graph.
    Verify {
        graph: PathBuf,
        code: PathBuf,
        /// Cooperative verification for t simultaneous failures (1 or 2).
        #[arg(long)]
        coop_t: Option<usize>,
        /// Also check min distance >= d and the distance/dimension bounds.
        #[arg(long)]
        distance: Option<usize>,
    },
    /// Minimum rank of a fitting matrix over F_q.
    Minrank {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Convert a storage code into an index code via greedy covering.
    Dualize {
        graph: PathBuf,
        code: PathBuf,
    },
}

struct Failure {
    exit: u8,
    message: String,
}

fn fail(exit: u8, message: impl ToString) -> Failure {
    Failure {
        exit,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // --help/--version print and exit 0; real usage errors exit 5.
            let code = if e.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli) {
        Ok(exit) => ExitCode::from(exit),
        Err(f) => {
            eprintln!("rdss: {}", f.message);
            ExitCode::from(f.exit)
        }
    }
}

fn caps_from(cli: &Cli) -> Caps {
    let mut caps = Caps::default();
    if let Some(v) = cli.state_cap {
        caps.state_cap = v;
    }
    if let Some(v) = cli.subset_cap {
        caps.subset_threshold = v;
    }
    if let Some(v) = cli.cycle_cap {
        caps.cycle_cap = v;
    }
    caps
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<Code, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Code::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn summary(g: &Graph) -> String {
    format!(
        "n={} m={} {}",
        g.n(),
        g.edges().count(),
        if g.directed() { "directed" } else { "undirected" }
    )
}

fn write_artifact(cli: &Cli, name: &str, content: &str) -> Result<Option<PathBuf>, Failure> {
    let Some(dir) = &cli.out else {
        return Ok(None);
    };
    std::fs::create_dir_all(dir)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok(Some(path))
}

fn emit(mut report: Report, started: Instant) {
    report.elapsed_ms = started.elapsed().as_millis();
    print!("{}", report.to_text());
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let caps = caps_from(cli);
    let started = Instant::now();
    match &cli.cmd {
        Cmd::Bounds { graph, q } => {
            let g = load_graph(graph)?;
            let b = rdss::bounds::bounds_report(&g, *q, &caps)
                .map_err(|e| fail(EXIT_PARTIAL, e))?;
            let mut r = Report::new("bounds", summary(&g), cli.seed);
            r.push("q", q);
            r.push_bounds(&b);
            let partial = b.has_skipped();
            emit(r, started);
            Ok(if partial { EXIT_PARTIAL } else { 0 })
        }
        Cmd::Capacity { graph, q, exact } => {
            let g = load_graph(graph)?;
            let mut r = Report::new("capacity", summary(&g), cli.seed);
            r.push("q", q);
            match code::capacity_exact(&g, *q, &caps) {
                Ok(cap) => {
                    r.push("dimension", format!("{:.6}", cap.dimension));
                    r.push(
                        "dimension-bits",
                        format!("{:.6}", cap.dimension * (*q as f64).log2()),
                    );
                    r.push("codewords", cap.code.len());
                    if let Some(p) = write_artifact(cli, "capacity-code.txt", &cap.code.serialize())?
                    {
                        r.push("artifact", p.display());
                    }
                    emit(r, started);
                    Ok(0)
                }
                Err(code::CodeError::StateCapExceeded { n, cap }) => {
                    let _ = exact;
                    r.push("notice", format!("q^{n} exceeds state cap {cap}; bounds only"));
                    if let Ok(b) = rdss::bounds::bounds_report(&g, *q, &caps) {
                        r.push_bounds(&b);
                    }
                    emit(r, started);
                    Ok(EXIT_CAP)
                }
                Err(e) => Err(fail(EXIT_PARSE, e)),
            }
        }
        Cmd::Construct { graph, q, method } => {
            let g = load_graph(graph)?;
            let mut r = Report::new("construct", summary(&g), cli.seed);
            r.push("q", q);
            let ok_dir = |need_directed: bool| -> Result<(), Failure> {
                if g.directed() != need_directed {
                    Err(fail(
                        EXIT_USAGE,
                        format!(
                            "method requires a {} graph",
                            if need_directed { "directed" } else { "undirected" }
                        ),
                    ))
                } else {
                    Ok(())
                }
            };
            let scalar = |code: Code, r: &mut Report| -> Result<(), Failure> {
                match code::verify_rdss(&g, &code) {
                    Ok(Ok(_)) => {}
                    Ok(Err(w)) => {
                        return Err(fail(
                            EXIT_VERIFY,
                            format!("constructed code failed verification at vertex {}", w.vertex),
                        ))
                    }
                    Err(e) => return Err(fail(EXIT_PARSE, e)),
                }
                r.push("dimension", format!("{:.6}", code.dimension()));
                r.push("codewords", code.len());
                if let Some(p) = write_artifact(cli, "constructed-code.txt", &code.serialize())? {
                    r.push("artifact", p.display());
                }
                Ok(())
            };
            match method {
                Method::Matching => {
                    ok_dir(false)?;
                    let c = constructions::matching_code(&g, *q, &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    r.push("method", "matching");
                    scalar(c, &mut r)?;
                }
                Method::Cliques => {
                    ok_dir(false)?;
                    let c = constructions::clique_partition_code(&g, *q, SolveMode::Exact, &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    r.push("method", "cliques");
                    scalar(c, &mut r)?;
                }
                Method::Cycles => {
                    ok_dir(true)?;
                    let c = constructions::cycle_replication_code(&g, *q, &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    r.push("method", "cycles");
                    scalar(c, &mut r)?;
                }
                Method::Lp => {
                    ok_dir(true)?;
                    let packing = constructions::fractional_cycle_packing(&g, &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    let vc = constructions::vector_code_from_packing(&g, &packing, *q)
                        .map_err(|e| fail(EXIT_PARSE, e))?;
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    if !constructions::repair_check(&vc, &mut rng, 100) {
                        return Err(fail(EXIT_VERIFY, "vector code failed the repair check"));
                    }
                    r.push("method", "lp");
                    r.push("packing-value", &packing.value);
                    r.push("p", packing.p);
                    r.push("message-symbols", vc.message_len());
                    if let Some(p) = write_artifact(cli, "vector-code.txt", &vc.serialize())? {
                        r.push("artifact", p.display());
                    }
                }
            }
            emit(r, started);
            Ok(0)
        }
        Cmd::Verify {
            graph,
            code: code_path,
            coop_t,
            distance,
        } => {
            let g = load_graph(graph)?;
            let c = load_code(code_path)?;
            let mut r = Report::new("verify", summary(&g), cli.seed);
            let mut failed = false;
            match coop_t {
                Some(t) => {
                    r.push("mode", format!("cooperative t={t}"));
                    match resilience::verify_cooperative(&g, &c, *t) {
                        Ok(Ok(())) => r.push("result", "pass"),
                        Ok(Err(w)) => {
                            failed = true;
                            r.push("result", "fail");
                            r.push("witness-set", format!("{:?}", w.set));
                            r.push("witness-x", Code::format_word(c.q(), &w.x));
                            r.push("witness-y", Code::format_word(c.q(), &w.y));
                        }
                        Err(resilience::ResilienceError::UnsupportedT(t)) => {
                            return Err(fail(EXIT_USAGE, format!("--coop-t must be 1 or 2, got {t}")))
                        }
                        Err(e) => return Err(fail(EXIT_PARSE, e)),
                    }
                }
                None => {
                    r.push("mode", "single");
                    match code::verify_rdss(&g, &c) {
                        Ok(Ok(_)) => r.push("result", "pass"),
                        Ok(Err(w)) => {
                            failed = true;
                            r.push("result", "fail");
                            r.push("witness-vertex", w.vertex);
                            r.push("witness-x", Code::format_word(c.q(), &w.x));
                            r.push("witness-y", Code::format_word(c.q(), &w.y));
                        }
                        Err(e) => return Err(fail(EXIT_PARSE, e)),
                    }
                }
            }
            if let Some(d) = distance {
                let (dist, singleton) = c.min_distance();
                r.push("min-distance", dist);
                if singleton {
                    r.push("min-distance-note", "singleton code, convention n+1");
                }
                if dist < *d {
                    failed = true;
                    r.push("distance-check", format!("fail: {dist} < {d}"));
                } else {
                    r.push("distance-check", "pass");
                }
                let k = c.dimension().ceil() as usize;
                if k >= 1 {
                    let dmax = resilience::distance_upper_bound(&g, k, &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    let kmax = resilience::alpha_bound(&g, *d, c.q(), &caps)
                        .map_err(|e| fail(EXIT_CAP, e))?;
                    r.push("distance-upper-bound", dmax);
                    r.push("alpha-bound", kmax);
                }
            }
            emit(r, started);
            Ok(if failed { EXIT_VERIFY } else { 0 })
        }
        Cmd::Minrank { graph, q } => {
            let g = load_graph(graph)?;
            let mr = linear::minrank(&g, *q, &caps).map_err(|e| match e {
                linear::LinearError::NotPrime(_) => fail(EXIT_USAGE, e),
                linear::LinearError::SearchCapExceeded { .. } => fail(EXIT_CAP, e),
                _ => fail(EXIT_PARSE, e),
            })?;
            let mut r = Report::new("minrank", summary(&g), cli.seed);
            r.push("q", q);
            r.push("minrank", mr.rank);
            r.push("capacity-lower-bound", g.n() - mr.rank);
            r.push("witness-fit", format!("{:?}", mr.witness.entries));
            emit(r, started);
            Ok(0)
        }
        Cmd::Dualize {
            graph,
            code: code_path,
        } => {
            let g = load_graph(graph)?;
            let c = load_code(code_path)?;
            match code::verify_rdss(&g, &c) {
                Ok(Ok(_)) => {}
                Ok(Err(w)) => {
                    return Err(fail(
                        EXIT_VERIFY,
                        format!("input code is not recoverable (witness vertex {})", w.vertex),
                    ))
                }
                Err(e) => return Err(fail(EXIT_PARSE, e)),
            }
            let fam = duality::greedy_covering(&c, &caps).map_err(|e| fail(EXIT_CAP, e))?;
            let idx = duality::index_from_rdss(&g, &c, &fam, &caps)
                .map_err(|e| fail(EXIT_PARSE, e))?;
            let space =
                code::Space::new(c.q(), c.n(), &caps).map_err(|e| fail(EXIT_CAP, e))?;
            let mut roundtrip = true;
            'outer: for yi in 0..space.size {
                let y = space.word(yi);
                let label = idx.encode(&space, &y);
                for i in 0..c.n() {
                    if idx.decode(&g, &space, i, label, &y) != Some(y[i]) {
                        roundtrip = false;
                        break 'outer;
                    }
                }
            }
            let mut r = Report::new("dualize", summary(&g), cli.seed);
            r.push("generators", fam.generators.len());
            r.push("span-size", idx.span_size());
            r.push("index-length-exact", format!("{:.6}", idx.length_exact()));
            r.push("index-length-symbols", idx.length_symbols());
            r.push("roundtrip", if roundtrip { "pass" } else { "fail" });
            if let Some(p) = write_artifact(cli, "covering.txt", &fam.serialize())? {
                r.push("artifact", p.display());
            }
            emit(r, started);
            Ok(if roundtrip { 0 } else { EXIT_VERIFY })
        }
    }
}
