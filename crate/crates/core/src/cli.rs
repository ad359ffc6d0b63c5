//! Command-line front end. Every command reads and writes JSON, reports
//! diagnostics as JSON lines on stderr, and maps failures to exit codes:
//! 0 success, 1 verification failure, 2 bad input, 3 patch too small.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::builder::{build_cover, BuildOptions, CoverMap};
use crate::error::{Error, Result};
use crate::flags::{i_fundamental_domain, stabilize_n, Flag, FundamentalDomain};
use crate::graph::Graph;
use crate::instances::{make_example_k, make_quotient, QuotientSpec};
use crate::io::{read_json, to_json, write_json, FlagFile, GraphFile, PatchFile};
use crate::local::{is_r_locally, BallKind, PeripheralSpace};
use crate::tessellation::{generate, import_patch, PlanePatch};
use crate::verify::{check_cover, check_normality, NormalityOptions};

#[derive(Debug, Parser)]
#[command(name = "cover-kit", version, about = "Build and verify covers of locally planar graphs")]
pub struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a {p,q} patch of the given radius.
    Gen {
        /// Face length.
        #[arg(long)]
        p: usize,
        /// Vertex degree.
        #[arg(long)]
        q: usize,
        /// Graph radius around the root.
        #[arg(long)]
        radius: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check that every r-ball of H looks like the patch's r-ball.
    CheckLocal {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        r: usize,
        /// Compare D-balls instead of metric balls.
        #[arg(long)]
        d_balls: bool,
    },
    /// Report the fundamental domain and flag orbits at the patch root.
    Flags {
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Build a cover of H by the patch.
    Cover {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// Seed flag of the patch, as inline JSON or a file.
        #[arg(long, requires = "seed_h")]
        seed_f: Option<String>,
        /// Seed flag of H, as inline JSON or a file.
        #[arg(long, requires = "seed_f")]
        seed_h: Option<String>,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Verify a cover file.
    Verify {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// Also check that covering transformations act transitively on fibers.
        #[arg(long)]
        normality: bool,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Check every fiber pair instead of a sample.
        #[arg(long)]
        exhaustive: bool,
        /// Distance from the mapped boundary excluded from the local check.
        #[arg(long, default_value_t = 1)]
        margin: usize,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Write a finite target graph.
    #[command(subcommand)]
    Instance(Instance),
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    /// Use this D-ball level instead of searching for a stable one.
    #[arg(long)]
    pub level: Option<usize>,
    /// Search for the least level whose flag orbits are stable.
    #[arg(long)]
    pub stabilize: bool,
    /// Highest level tried by the search.
    #[arg(long, default_value_t = 2)]
    pub i_max: usize,
    /// Number of further levels that must agree.
    #[arg(long, default_value_t = 1)]
    pub guard: usize,
}

#[derive(Debug, Subcommand)]
pub enum Instance {
    /// The square grid torus C_m × C_n.
    Torus {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// The square grid Klein bottle on m × n vertices.
    Klein {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// The square grid modulo (m,0) and (s,n).
    Twisted {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        s: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// The honeycomb modulo m(1,1) and n(2,-1).
    HexTorus {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// The non-transitive graph K(l,k) with large isomorphic balls.
    ExampleK {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PatchTooSmall { .. } | Error::IncreaseRadius { .. } => 3,
        Error::NotTransitive { .. }
        | Error::NotLocallyG { .. }
        | Error::HypothesisViolation { .. }
        | Error::Defect(_) => 1,
        Error::Input(_)
        | Error::UnknownVertex(_)
        | Error::NotOneEnded { .. }
        | Error::NonPlanar { .. }
        | Error::Precondition(_)
        | Error::TooLarge(_) => 2,
    }
}

fn diagnostic(level: &str, event: &str, message: impl Serialize) {
    let line = json!({ "level": level, "event": event, "message": message });
    eprintln!("{line}");
}

fn print_json<T: Serialize>(value: &T) {
    print!("{}", to_json(value));
}

fn load_patch(path: &Path) -> Result<PlanePatch> {
    import_patch(&read_json::<PatchFile>(path)?)
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_json::<GraphFile>(path)?.to_graph()
}

fn load_flag(space: &dyn crate::local::LocalSpace, arg: &str) -> Result<Flag> {
    let file: FlagFile = if arg.trim_start().starts_with('{') {
        crate::io::from_json(arg)?
    } else {
        read_json(Path::new(arg))?
    };
    Flag::from_file(space, &file)
}

fn domain_for(g: &PlanePatch, args: &LevelArgs) -> Result<FundamentalDomain> {
    let n = match args.level {
        Some(n) if !args.stabilize => n,
        _ => stabilize_n(g, args.i_max, args.guard)?,
    };
    i_fundamental_domain(g, n)
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(jobs) = cli.jobs {
        // Fails only if a pool already exists, which then stays in charge.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            diagnostic("error", "failed", e.to_string());
            exit_code(&e)
        }
    }
}

// Ok(false) means the command ran but its check did not pass.
fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen { p, q, radius, output } => {
            let patch = generate(*p, *q, *radius)?;
            write_json(output, &patch.to_file())?;
            diagnostic(
                "info",
                "generated",
                json!({ "vertices": patch.graph.len(), "faces": patch.faces.len() }),
            );
            Ok(true)
        }
        Command::CheckLocal { h, g, r, d_balls } => {
            let g = load_patch(g)?;
            let h = load_graph(h)?;
            let kind = if *d_balls { BallKind::Facial } else { BallKind::Metric };
            let report = is_r_locally(&h, &g, *r, kind)?;
            print_json(&report);
            Ok(report.ok)
        }
        Command::Flags { g, level } => {
            let g = load_patch(g)?;
            let domain = domain_for(&g, level)?;
            let files = |fs: &[Flag]| fs.iter().map(Flag::to_file).collect::<Vec<_>>();
            print_json(&json!({
                "n": domain.level,
                "domain_size": domain.len(),
                "domain": files(&domain.flags),
                "root_flags": files(&domain.root_flags),
                "partition": domain.color_of_root_flag,
            }));
            Ok(true)
        }
        Command::Cover {
            g,
            h,
            seed_f,
            seed_h,
            level,
            output,
        } => {
            let g = load_patch(g)?;
            let h = load_graph(h)?;
            let space = PeripheralSpace::new(&h, g.max_codegree());
            let domain = domain_for(&g, level)?;
            let seed = match (seed_f, seed_h) {
                (Some(f), Some(x)) => Some((load_flag(&g, f)?, load_flag(&space, x)?)),
                _ => None,
            };
            let cover = build_cover(&g, &space, &domain, seed, BuildOptions::default())?;
            write_json(output, &cover.to_file())?;
            diagnostic(
                "info",
                "cover",
                json!({
                    "steps": cover.steps,
                    "mapped": cover.vertex_map.len(),
                    "surjective": cover.surjective,
                    "blocked_faces": cover.blocked.len(),
                }),
            );
            Ok(true)
        }
        Command::Verify {
            cover,
            g,
            h,
            normality,
            samples,
            exhaustive,
            margin,
            level,
        } => {
            let g = load_patch(g)?;
            let h = load_graph(h)?;
            let space = PeripheralSpace::new(&h, g.max_codegree());
            let c = CoverMap::from_file(&g, &space, &read_json(cover)?)?;
            let local = check_cover(&g, &h, &c, *margin);
            let normal = match normality {
                true => {
                    let domain = domain_for(&g, level)?;
                    let options = NormalityOptions {
                        samples: *samples,
                        rng_seed: cli.rng_seed,
                        exhaustive: *exhaustive,
                    };
                    Some(check_normality(&g, Some(&space), &c, &domain, options)?)
                }
                false => None,
            };
            let ok = local.ok && normal.as_ref().is_none_or(|r| r.ok);
            print_json(&json!({ "ok": ok, "cover": local, "normality": normal }));
            Ok(ok)
        }
        Command::Instance(which) => {
            let (file, output) = match which {
                Instance::Torus { m, n, output } => {
                    (make_quotient(QuotientSpec::torus(*m, *n))?.to_file(), output)
                }
                Instance::Klein { m, n, output } => {
                    (make_quotient(QuotientSpec::klein(*m, *n))?.to_file(), output)
                }
                Instance::Twisted { m, n, s, output } => (
                    make_quotient(QuotientSpec::twisted_torus(*m, *n, *s))?.to_file(),
                    output,
                ),
                Instance::HexTorus { m, n, output } => {
                    (make_quotient(QuotientSpec::hex_torus(*m, *n))?.to_file(), output)
                }
                Instance::ExampleK { l, k, output } => (make_example_k(*l, *k)?.to_file(), output),
            };
            write_json(output, &file)?;
            Ok(true)
        }
    }
}
