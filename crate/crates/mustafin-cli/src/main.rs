//! Batch front end: deterministic file outputs for chains, closures,
//! verification reports, schedules, correspondence tables and graphs, with a
//! checksummed result cache and parallel per-class verification.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use mustafin::apartment::LatticeSet;
use mustafin::dimension::{ConjectureContext, Mode};
use mustafin::pluecker::{self, wedge_chain};
use mustafin::scheduler;

#[derive(Parser)]
#[command(name = "mustafin", version, about = "lattice-class combinatorics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Params {
    /// rank of the ambient module
    #[arg(long)]
    n: usize,
    /// wedge degree
    #[arg(long)]
    k: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Reduced,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Genestier,
    Mustafin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    /// neighbour graph of the closure classes
    Components,
    /// Hasse diagram of the subset order
    Poset,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the wedge powers of the standard chain as a lattice-set JSON
    Chain {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the convex closure of a lattice-set JSON file
    Closure {
        /// input lattice-set JSON
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every closure class reaches the full ambient dimension
    Verify {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a blow-up schedule
    Schedule {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "genestier")]
        target: TargetArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the subset/class correspondence table
    Correspondence {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a DOT graph of the closure components or the subset poset
    Graph {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "components")]
        kind: GraphKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Chain { params, out } => {
            let key = cache_key(&["chain", &params.n.to_string(), &params.k.to_string()]);
            let payload = cached(&key, || {
                Ok(wedge_chain(params.n, params.k)
                    .map_err(|e| e.to_string())?
                    .to_json())
            })?;
            emit(payload.as_bytes(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Closure { input, out } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| format!("{}: {e}", input.display()))?;
            let set = LatticeSet::from_json(&text).map_err(|e| e.to_string())?;
            let key = cache_key(&["closure", &hex(&Sha256::digest(text.as_bytes()))]);
            let payload = cached(&key, || {
                let closure = set.convex_closure();
                let removable = closure.removable_classes().map_err(|e| e.to_string())?;
                let stats = format!(
                    "input_size={} closure_size={} removable={} convex={}\n",
                    set.len(),
                    closure.len(),
                    removable.len(),
                    set.is_convex()
                );
                Ok(format!("{}{}", stats, closure.to_json()))
            })?;
            // first line is the stats, the rest the closure JSON
            let (stats, json) = payload.split_once('\n').ok_or("corrupt payload")?;
            eprintln!("{stats}");
            emit(json.as_bytes(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            params,
            mode,
            jobs,
            format,
            out,
        } => {
            if jobs == 0 {
                return Err("--jobs must be at least 1".into());
            }
            let mode_core = match mode {
                ModeArg::Full => Mode::FullChain,
                ModeArg::Reduced => Mode::Reduced,
            };
            let fmt = match format {
                FormatArg::Csv => "csv",
                FormatArg::Json => "json",
                FormatArg::Dot => return Err("verify supports json or csv".into()),
            };
            let key = cache_key(&[
                "verify",
                &params.n.to_string(),
                &params.k.to_string(),
                if mode == ModeArg::Full { "full" } else { "reduced" },
                fmt,
            ]);
            let payload = cached(&key, || {
                let ctx = ConjectureContext::new(params.n, params.k, mode_core)
                    .map_err(|e| e.to_string())?;
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| e.to_string())?;
                // fan out per class; collect preserves the deterministic
                // class order regardless of completion order
                let records = pool.install(|| {
                    ctx.targets()
                        .par_iter()
                        .map(|&t| ctx.check(t))
                        .collect::<Result<Vec<_>, _>>()
                });
                let report = ctx.report(records.map_err(|e| e.to_string())?);
                let body = match format {
                    FormatArg::Csv => report.to_csv(),
                    _ => report.to_json(),
                };
                Ok(format!("overall={}\n{}", report.overall, body))
            })?;
            let (verdict, body) = payload.split_once('\n').ok_or("corrupt payload")?;
            eprintln!("{verdict}");
            emit(body.as_bytes(), out.as_deref())?;
            if verdict == "overall=true" {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Schedule {
            params,
            target,
            out,
        } => {
            let name = if target == TargetArg::Genestier {
                "genestier"
            } else {
                "mustafin"
            };
            let key = cache_key(&[
                "schedule",
                &params.n.to_string(),
                &params.k.to_string(),
                name,
            ]);
            let payload = cached(&key, || match target {
                TargetArg::Genestier => {
                    let stages = scheduler::genestier_schedule(params.n, params.k)
                        .map_err(|e| e.to_string())?;
                    Ok(scheduler::genestier_schedule_json(&stages))
                }
                TargetArg::Mustafin => {
                    let closure = wedge_chain(params.n, params.k)
                        .map_err(|e| e.to_string())?
                        .convex_closure();
                    let start = closure
                        .iter()
                        .find(|c| c.coords().iter().all(|&v| v == 0))
                        .ok_or("closure lacks the zero class")?
                        .clone();
                    let steps = scheduler::mustafin_blowup_sequence(&closure, &start)
                        .map_err(|e| e.to_string())?;
                    Ok(scheduler::mustafin_sequence_json(&steps))
                }
            })?;
            emit(payload.as_bytes(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Correspondence {
            params,
            format,
            out,
        } => {
            let fmt = match format {
                FormatArg::Csv => "csv",
                FormatArg::Json => "json",
                FormatArg::Dot => return Err("correspondence supports json or csv".into()),
            };
            let key = cache_key(&[
                "correspondence",
                &params.n.to_string(),
                &params.k.to_string(),
                fmt,
            ]);
            let payload = cached(&key, || {
                let rows =
                    pluecker::correspondence(params.n, params.k).map_err(|e| e.to_string())?;
                Ok(match format {
                    FormatArg::Csv => {
                        let mut s = String::from("subset,exponent_vector,schubert_dim\n");
                        for r in &rows {
                            let subset: Vec<String> =
                                r.subset.elems().iter().map(|v| v.to_string()).collect();
                            let exps: Vec<String> =
                                r.exponents.iter().map(|v| v.to_string()).collect();
                            s.push_str(&format!(
                                "{},{},{}\n",
                                subset.join(" "),
                                exps.join(" "),
                                r.schubert_dim
                            ));
                        }
                        s
                    }
                    _ => {
                        let docs: Vec<serde_json_row::Row> = rows
                            .iter()
                            .map(|r| serde_json_row::Row {
                                subset: r.subset.elems().to_vec(),
                                exponent_vector: r.exponents.clone(),
                                schubert_dim: r.schubert_dim,
                            })
                            .collect();
                        serde_json_row::render(&docs)
                    }
                })
            })?;
            emit(payload.as_bytes(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { params, kind, out } => {
            let name = if kind == GraphKind::Components {
                "components"
            } else {
                "poset"
            };
            let key = cache_key(&["graph", &params.n.to_string(), &params.k.to_string(), name]);
            let payload = cached(&key, || match kind {
                GraphKind::Components => {
                    let closure = wedge_chain(params.n, params.k)
                        .map_err(|e| e.to_string())?
                        .convex_closure();
                    let g = scheduler::component_graph(&closure).map_err(|e| e.to_string())?;
                    Ok(scheduler::component_graph_dot(&g))
                }
                GraphKind::Poset => {
                    scheduler::subset_poset_dot(params.n, params.k).map_err(|e| e.to_string())
                }
            })?;
            emit(payload.as_bytes(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

mod serde_json_row {
    use serde::Serialize;

    #[derive(Serialize)]
    pub struct Row {
        pub subset: Vec<usize>,
        pub exponent_vector: Vec<i64>,
        pub schubert_dim: usize,
    }

    pub fn render(rows: &[Row]) -> String {
        serde_json::to_string_pretty(rows).expect("serializable")
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn cache_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    for p in parts {
        h.update([0u8]);
        h.update(p.as_bytes());
    }
    hex(&h.finalize())
}

/// Write-once cache under MUSTAFIN_CACHE_DIR: payload file named by the key
/// hash plus a .sum checksum file; entries failing the checksum are
/// recomputed, never trusted.
fn cached(key: &str, compute: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    let dir = match std::env::var_os("MUSTAFIN_CACHE_DIR") {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => return compute(),
    };
    std::fs::create_dir_all(&dir).map_err(|e| format!("cache dir: {e}"))?;
    let payload_path = dir.join(key);
    let sum_path = dir.join(format!("{key}.sum"));
    if let (Ok(payload), Ok(sum)) = (
        std::fs::read_to_string(&payload_path),
        std::fs::read_to_string(&sum_path),
    ) {
        if hex(&Sha256::digest(payload.as_bytes())) == sum.trim() {
            return Ok(payload);
        }
    }
    let payload = compute()?;
    let sum = hex(&Sha256::digest(payload.as_bytes()));
    write_atomic(&payload_path, payload.as_bytes())?;
    write_atomic(&sum_path, sum.as_bytes())?;
    Ok(payload)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = path.parent().ok_or("path has no parent")?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp).map_err(|e| e.to_string())?;
        f.write_all(bytes).map_err(|e| e.to_string())?;
        f.sync_all().map_err(|e| e.to_string())?;
    }
    std::fs::rename(&tmp, path).map_err(|e| e.to_string())
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| e.to_string())
        }
    }
}
