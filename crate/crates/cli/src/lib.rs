//! The `qpainleve` command line, as a library so it can be driven in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use qpainleve::catalog::{Catalog, Label};
use qpainleve::characterize::{characterize, AnsatzShape};
use qpainleve::engine::{run_task, task_list, TaskKind};

mod document;

use document::{DocStatus, Document, TaskDescriptor};

#[derive(Parser)]
#[command(
    name = "qpainleve",
    version,
    about = "Exact checks of quantum Painlevé Hamiltonians on their canonical charts"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit the JSON report document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    parallel: Option<usize>,
    /// Exit with code 3 when a task is unsupported.
    #[arg(long, global = true)]
    strict: bool,
}

/// A system label, or `all`.
#[derive(Clone, Debug)]
struct Systems(Vec<Label>);

impl FromStr for Systems {
    type Err = String;

    fn from_str(s: &str) -> Result<Systems, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Systems(Label::ALL.to_vec()));
        }
        Label::from_str(s)
            .map(|l| Systems(vec![l]))
            .map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transform the flow to each chart and compare with the chart Hamiltonians.
    VerifyCharts {
        #[arg(long)]
        system: Systems,
        #[arg(long)]
        chart: Option<usize>,
    },
    /// Check [X, Y] = h and the round trip of every chart map.
    VerifyCanonical {
        #[arg(long)]
        system: Systems,
        #[arg(long)]
        chart: Option<usize>,
    },
    /// Recover the Hamiltonian from the pole-free conditions on all charts.
    Characterize {
        #[arg(long)]
        system: Systems,
        /// Degree bound of the ansatz in q and p.
        #[arg(long, default_value_t = 4)]
        deg: u32,
        /// Degree bound in t.
        #[arg(long, default_value_t = 1)]
        tdeg: u32,
        /// Bound the total degree in q and p instead of each variable.
        #[arg(long)]
        total_degree: bool,
    },
    /// Compare with the Nagoya form under its parameter maps.
    VerifyNagoya {
        #[arg(long)]
        system: Systems,
        #[arg(long)]
        map: Option<String>,
    },
    /// Check the symmetry generators: bracket and equivariance of the flow.
    VerifySymmetry {
        #[arg(long)]
        system: Systems,
        #[arg(long, value_name = "s_k")]
        gen: Option<String>,
    },
    /// Print catalog data in canonical form.
    Print {
        #[arg(long)]
        system: Systems,
        #[arg(long, conflicts_with = "nagoya")]
        chart: Option<usize>,
        #[arg(long)]
        nagoya: bool,
    },
    /// Compare h = 0 of each chart computation with the commutative one.
    ClassicalLimit {
        #[arg(long)]
        system: Systems,
        #[arg(long)]
        chart: Option<usize>,
    },
}

impl Command {
    fn descriptor(&self) -> TaskDescriptor {
        let mut options = BTreeMap::new();
        let mut opt = |k: &str, v: Value| {
            if !v.is_null() {
                options.insert(k.to_string(), v);
            }
        };
        let (name, systems) = match self {
            Command::VerifyCharts { system, chart } => {
                opt("chart", json!(chart));
                ("verify-charts", system)
            }
            Command::VerifyCanonical { system, chart } => {
                opt("chart", json!(chart));
                ("verify-canonical", system)
            }
            Command::Characterize {
                system,
                deg,
                tdeg,
                total_degree,
            } => {
                opt("deg", json!(deg));
                opt("tdeg", json!(tdeg));
                opt("total_degree", json!(total_degree));
                ("characterize", system)
            }
            Command::VerifyNagoya { system, map } => {
                opt("map", json!(map));
                ("verify-nagoya", system)
            }
            Command::VerifySymmetry { system, gen } => {
                opt("gen", json!(gen));
                ("verify-symmetry", system)
            }
            Command::Print {
                system,
                chart,
                nagoya,
            } => {
                opt("chart", json!(chart));
                opt("nagoya", json!(nagoya));
                ("print", system)
            }
            Command::ClassicalLimit { system, chart } => {
                opt("chart", json!(chart));
                ("classical-limit", system)
            }
        };
        TaskDescriptor {
            command: name.to_string(),
            systems: systems.0.iter().map(|l| l.to_string()).collect(),
            options,
        }
    }
}

/// Bad input: unknown chart, generator or map, unreadable catalog.
struct InputError(String);

fn run(
    cat: &Catalog,
    cmd: &Command,
    doc: &mut Document,
    text: &mut String,
) -> Result<(), InputError> {
    let tasks = |kind: TaskKind, systems: &Systems, target: Option<String>| {
        let all = task_list(cat, kind, &systems.0).map_err(|e| InputError(e.to_string()))?;
        let picked: Vec<_> = all
            .into_iter()
            .filter(|t| target.as_ref().is_none_or(|x| &t.target == x))
            .collect();
        match (&target, picked.is_empty()) {
            (Some(x), true) => Err(InputError(format!(
                "no target `{x}` for {}",
                doc_systems(systems)
            ))),
            _ => Ok(picked),
        }
    };
    let chosen = match cmd {
        Command::VerifyCharts { system, chart } => {
            tasks(TaskKind::Chart, system, chart.map(|c| c.to_string()))?
        }
        Command::VerifyCanonical { system, chart } => {
            tasks(TaskKind::Canonical, system, chart.map(|c| c.to_string()))?
        }
        Command::ClassicalLimit { system, chart } => {
            tasks(TaskKind::Classical, system, chart.map(|c| c.to_string()))?
        }
        Command::VerifyNagoya { system, map } => tasks(TaskKind::Nagoya, system, map.clone())?,
        Command::VerifySymmetry { system, gen } => tasks(TaskKind::Symmetry, system, gen.clone())?,
        Command::Characterize {
            system,
            deg,
            tdeg,
            total_degree,
        } => {
            let shape = AnsatzShape {
                degree: *deg,
                t_degree: *tdeg,
                total_degree: *total_degree,
            };
            if *deg == 0 {
                return Err(InputError("--deg must be at least 1".into()));
            }
            // Systems in turn; each one parallelizes its own assembly.
            for &l in &system.0 {
                let r = characterize(cat, l, shape).map_err(|e| InputError(e.to_string()))?;
                doc.summary.count(r.status);
                doc.push("characterizations", format!("characterize/{l}"), &r);
                write!(text, "{r}").unwrap();
            }
            return Ok(());
        }
        Command::Print {
            system,
            chart,
            nagoya,
        } => {
            let mut entries = Vec::new();
            for &l in &system.0 {
                print_entries(cat, l, *chart, *nagoya, &mut entries)?;
            }
            for (name, value) in &entries {
                writeln!(text, "{name} = {value}").unwrap();
            }
            let list = entries
                .into_iter()
                .map(|(name, value)| json!({ "name": name, "value": value }))
                .collect();
            doc.set("entries", Value::Array(list));
            return Ok(());
        }
    };
    // Collecting an indexed parallel iterator keeps task order.
    let reports: Vec<_> = chosen.par_iter().map(|t| run_task(cat, t)).collect();
    for (t, r) in chosen.iter().zip(&reports) {
        doc.summary.count(r.status);
        doc.push("reports", t.id(), r);
        write!(text, "{r}").unwrap();
    }
    Ok(())
}

fn doc_systems(s: &Systems) -> String {
    s.0.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_entries(
    cat: &Catalog,
    l: Label,
    chart: Option<usize>,
    nagoya: bool,
    out: &mut Vec<(String, String)>,
) -> Result<(), InputError> {
    let err = |e: qpainleve::catalog::CatalogError| InputError(e.to_string());
    let sys = cat.get_system(l).map_err(err)?;
    let mut put = |k: String, v: String| out.push((format!("{l}.{k}"), v));
    if let Some(i) = chart {
        let c = cat.get_chart(l, i).map_err(err)?;
        let g = cat.get_golden(l, i).map_err(err)?;
        let (x, y) = (c.vars.first(), c.vars.second());
        put(format!("chart{i}.{x}"), c.backward[0].to_string());
        put(format!("chart{i}.{y}"), c.backward[1].to_string());
        put(
            format!("chart{i}.{}", c.base_vars.first()),
            c.forward[0].to_string(),
        );
        put(
            format!("chart{i}.{}", c.base_vars.second()),
            c.forward[1].to_string(),
        );
        if let Some(b) = c.base {
            put(format!("chart{i}.base"), format!("chart {b}"));
        }
        if let Some([px, py]) = &c.as_printed {
            put(
                format!("chart{i}.printed.{}", c.base_vars.first()),
                px.to_string(),
            );
            put(
                format!("chart{i}.printed.{}", c.base_vars.second()),
                py.to_string(),
            );
        }
        put(format!("chart{i}.H{i}"), g.hamiltonian.to_string());
        put(format!("chart{i}.H{i}.source"), g.source.clone());
    } else if nagoya {
        let n = cat.get_nagoya(l).map_err(err)?;
        put("nagoya.source".into(), n.source.clone());
        put("nagoya.prefactor".into(), n.prefactor.to_string());
        put("nagoya.H".into(), n.hamiltonian.to_string());
        for m in &n.maps {
            let assign: Vec<String> = m.assign.iter().map(|(s, v)| format!("{s} = {v}")).collect();
            put(format!("nagoya.map.{}", m.name), assign.join(", "));
        }
    } else {
        put("H".into(), sys.hamiltonian.to_string());
        put(
            "H.normalized".into(),
            sys.normalize(&sys.hamiltonian).to_string(),
        );
        put("time_weight".into(), sys.time_weight.to_string());
        put("constraint".into(), format!("{} = 0", sys.constraint));
        put(
            "charts".into(),
            cat.get_charts(l).map_err(err)?.len().to_string(),
        );
    }
    Ok(())
}

/// The result of one command line: what would go to the two streams, and
/// the exit code.
#[derive(Debug)]
pub struct Invocation {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command. With `--out`
/// the report goes to that file and `stdout` stays empty.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            return if e.use_stderr() {
                Invocation {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Invocation {
                    exit_code: code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let mut doc = Document::new(cli.command.descriptor());
    let mut text = String::new();
    let mut stderr = String::new();

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.global.parallel {
            b = b.num_threads(n.max(1));
        }
        b.build().expect("thread pool")
    };
    let outcome = Catalog::load()
        .map_err(|e| InputError(e.to_string()))
        .and_then(|cat| pool.install(|| run(&cat, &cli.command, &mut doc, &mut text)));
    if let Err(InputError(msg)) = &outcome {
        writeln!(stderr, "error: {msg}").unwrap();
        doc.status = DocStatus::Error;
        doc.set("error", json!(msg));
    }
    doc.finish(cli.global.strict);
    doc.timing.elapsed_ms = start.elapsed().as_millis() as u64;

    let body = if cli.global.json {
        serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
    } else {
        if outcome.is_ok() && doc.summary.tasks > 0 {
            let s = &doc.summary;
            writeln!(
                text,
                "summary: {} pass, {} fail, {} unsupported of {}",
                s.pass, s.fail, s.unsupported, s.tasks
            )
            .unwrap();
        }
        text
    };
    match &cli.global.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Invocation {
                exit_code: doc.exit_code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => {
                writeln!(stderr, "error: {}: {e}", path.display()).unwrap();
                Invocation {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr,
                }
            }
        },
        None => Invocation {
            exit_code: doc.exit_code,
            stdout: body,
            stderr,
        },
    }
}
