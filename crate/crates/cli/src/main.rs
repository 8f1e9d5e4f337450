mod config;
mod output;
mod verify;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kauljones::invariant::{volscan, volume_ratio, RtLevel, VolPoint};
use kauljones::qcircuit::{QubitRegister, SamplePlan};
use kauljones::{
    colored_jones, enumerate_basis, hadamard_test, library, parse_word, plat_expectation, rt_invariant, ColoredBraidWord, Component,
    Error, KaulRep, Root,
};
use serde_json::{json, Value};

use config::{FileConfig, Settings, DEFAULT_K, DEFAULT_TOLERANCE};
use output::{complex, num, object};

#[derive(Parser)]
#[command(name = "kauljones", version, about = "Colored Jones polynomials of plat-closed colored braids")]
struct Cli {
    /// Level k; q = exp(2πi/(k+2)).
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Use the complex-conjugate root.
    #[arg(long, global = true)]
    conjugate_q: bool,
    /// Replace k by k+2 in the surgery constants b and c.
    #[arg(long, global = true)]
    rt_shift: bool,
    /// Pass threshold for `verify`.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON file with any of: k, conjugate_q, rt_shift, tolerance, threads.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComponentArg {
    Re,
    Im,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact V and J of a braid read from --input or stdin.
    Compute {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Hadamard-test estimate of the vacuum matrix element.
    Sample {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0.75)]
        confidence: f64,
        /// Variance bound v of the sampled observable.
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
        /// Shot count; may only raise the required minimum.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ComponentArg::Re)]
        component: ComponentArg,
        /// Leave the exact value out of the output.
        #[arg(long)]
        no_exact: bool,
    },
    /// Surgery invariant τ of the framed link.
    Rt {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated framings, one per component; overrides the input.
        #[arg(long)]
        framings: Option<String>,
        /// Include every colouring term.
        #[arg(long)]
        terms: bool,
    },
    /// 2π·log|J_N|/N at q = exp(2πi/N) for N = 2..=nmax.
    Volscan {
        #[arg(long, default_value = "fig8")]
        knot: String,
        #[arg(long, default_value_t = 30)]
        nmax: u32,
        /// Also write (N, |J_N|, ratio) rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the oracle cross-checks and print a pass/fail table.
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// List the (p;r) basis and its register encoding.
    Basis {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated twice-spins; overrides the input.
        #[arg(long)]
        colors: Option<String>,
    },
}

pub enum Failure {
    Input(String),
    Resource(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) | Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn settings(cli: &Cli) -> Outcome<Settings> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Input)?,
        None => FileConfig::default(),
    };
    Ok(Settings {
        k: cli.k.or(file.k).unwrap_or(DEFAULT_K),
        conjugate_q: cli.conjugate_q || file.conjugate_q.unwrap_or(false),
        rt_shift: cli.rt_shift || file.rt_shift.unwrap_or(false),
        tolerance: cli.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE),
        threads: cli.threads.or(file.threads),
    })
}

fn run(cli: Cli) -> Outcome<()> {
    let s = settings(&cli)?;
    if let Some(n) = s.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("--threads: {e}")))?;
    }
    let root = Root::with_conjugation(s.k, s.conjugate_q)?;
    let rep = KaulRep::new(root.clone());
    let result = match &cli.cmd {
        Cmd::Compute { input } => compute(&rep, &read_input(input.as_deref())?)?,
        Cmd::Sample { input, delta, confidence, variance, shots, seed, component, no_exact } => {
            let word = parse_word(&read_input(input.as_deref())?)?;
            let mut plan = SamplePlan::new(*delta, *variance, *confidence, *seed)?;
            if let Some(n) = shots {
                plan = plan.with_shots(*n)?;
            }
            sample(&rep, &word, &plan, *component, !*no_exact)?
        }
        Cmd::Rt { input, framings, terms } => rt(&rep, &read_input(input.as_deref())?, framings.as_deref(), *terms, s.rt_shift)?,
        Cmd::Volscan { knot, nmax, csv } => vol(knot, *nmax, csv.as_deref())?,
        Cmd::Verify { json } => {
            let report = verify::run(&rep, s.tolerance)?;
            let failed = report.iter().filter(|c| !c.pass).count();
            let text = if *json { verify::to_json(&report, &meta(&root, None)) } else { verify::table(&report) };
            emit(cli.out.as_deref(), &text)?;
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} cross-check(s) failed")));
            }
            return Ok(());
        }
        Cmd::Basis { input, colors } => basis(&root, input.as_deref(), colors.as_deref())?,
    };
    let mut result = result;
    if let Value::Object(m) = &mut result {
        let seed = match &cli.cmd {
            Cmd::Sample { seed, .. } => Some(*seed),
            _ => None,
        };
        m.insert("meta".into(), meta(&root, seed));
    }
    let text = serde_json::to_string_pretty(&result).expect("json serializes");
    emit(cli.out.as_deref(), &text)
}

fn read_input(path: Option<&Path>) -> Outcome<String> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("--input {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Input(format!("--out {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            writeln!(so, "{text}").map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn meta(root: &Root, seed: Option<u64>) -> Value {
    let mut pairs = vec![
        ("k", json!(root.k())),
        ("q_convention", json!(if root.is_conjugated() { "q = exp(-2πi/(k+2))" } else { "q = exp(2πi/(k+2))" })),
        ("q", complex(root.q())),
        ("library_version", json!(library().version)),
        ("version", json!(env!("CARGO_PKG_VERSION"))),
    ];
    if let Some(s) = seed {
        pairs.push(("seed", json!(s)));
    }
    object(pairs)
}

fn compute(rep: &KaulRep, text: &str) -> Outcome<Value> {
    let word = parse_word(text)?;
    let r = colored_jones(rep, &word)?;
    Ok(object(vec![
        ("V", complex(r.v)),
        ("J", complex(r.j)),
        ("writhe", json!(r.writhe)),
        ("plat_expectation", complex(plat_expectation(rep, &word)?)),
        ("components", json!(r.colors.len())),
        ("colors_twice", json!(r.colors)),
    ]))
}

fn sample(rep: &KaulRep, word: &ColoredBraidWord, plan: &SamplePlan, which: ComponentArg, with_exact: bool) -> Outcome<Value> {
    let comps: Vec<Component> = match which {
        ComponentArg::Re => vec![Component::Re],
        ComponentArg::Im => vec![Component::Im],
        ComponentArg::Both => vec![Component::Re, Component::Im],
    };
    let runs = comps.iter().map(|&c| hadamard_test(word, rep, c, plan)).collect::<kauljones::Result<Vec<_>>>()?;
    let name = |c: Component| match c {
        Component::Re => "re",
        Component::Im => "im",
    };
    let (estimate, counts) = if runs.len() == 1 {
        (num(runs[0].estimate), json!([runs[0].counts.0, runs[0].counts.1]))
    } else {
        (
            object(runs.iter().map(|r| (name(r.component), num(r.estimate))).collect()),
            object(runs.iter().map(|r| (name(r.component), json!([r.counts.0, r.counts.1]))).collect()),
        )
    };
    let mut pairs = vec![
        ("estimate", estimate),
        ("shots", json!(plan.shots)),
        ("seed", json!(plan.seed)),
        ("counts", counts),
        ("delta", num(plan.delta)),
        ("confidence", num(plan.confidence)),
        ("variance_bound", num(plan.v)),
    ];
    if with_exact {
        pairs.push(("exact", complex(plat_expectation(rep, word)?)));
    }
    Ok(object(pairs))
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Outcome<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<T>().map_err(|_| Failure::Input(format!("{flag}: cannot parse {s:?}"))))
        .collect()
}

fn rt(rep: &KaulRep, text: &str, framings: Option<&str>, with_terms: bool, shift: bool) -> Outcome<Value> {
    let raw: Value = serde_json::from_str(text).map_err(|e| Failure::Input(format!("input: {e}")))?;
    let empty = raw.get("strands").and_then(Value::as_u64) == Some(0);
    let word = if empty { None } else { Some(parse_word(text)?) };
    let fr: Vec<i64> = match (framings, &word) {
        (Some(f), _) => parse_list("--framings", f)?,
        (None, Some(w)) => w.framings().map(<[i64]>::to_vec).unwrap_or_else(|| vec![0; w.components().n_components]),
        (None, None) => Vec::new(),
    };
    let level = if shift { RtLevel::Shifted } else { RtLevel::Verbatim };
    let r = rt_invariant(rep, word.as_ref(), &fr, level)?;
    let mut pairs = vec![
        ("tau", complex(r.tau)),
        ("alpha", complex(r.alpha)),
        ("b", num(r.b)),
        ("c", complex(r.c)),
        ("k", json!(r.k)),
        ("rt_shift", json!(shift)),
        ("n_components", json!(r.n_components)),
        ("signature", json!(r.signature)),
        ("framings", json!(fr)),
        ("term_count", json!(r.terms.len())),
    ];
    if with_terms {
        let t = r
            .terms
            .iter()
            .map(|t| object(vec![("colors_twice", json!(t.colors)), ("weight", num(t.weight)), ("E", complex(t.e))]))
            .collect();
        pairs.push(("terms", Value::Array(t)));
    }
    Ok(object(pairs))
}

fn vol(knot: &str, nmax: u32, csv: Option<&Path>) -> Outcome<Value> {
    let lib = library();
    let entry = lib.get(knot)?;
    let points: Vec<VolPoint> = if entry.name == "fig8" {
        volscan(nmax)?
    } else {
        (2..=nmax.max(2))
            .map(|n| {
                let ratio = volume_ratio(entry, n)?;
                Ok(VolPoint { n, abs_j: (ratio * n as f64 / (2.0 * std::f64::consts::PI)).exp(), ratio })
            })
            .collect::<kauljones::Result<_>>()?
    };
    if let Some(p) = csv {
        let mut s = String::from("N,abs_J,ratio\n");
        for pt in &points {
            s.push_str(&format!("{},{:.16e},{:.16e}\n", pt.n, pt.abs_j, pt.ratio));
        }
        std::fs::write(p, s).map_err(|e| Failure::Input(format!("--csv {}: {e}", p.display())))?;
    }
    let rows = points
        .iter()
        .map(|p| object(vec![("N", json!(p.n)), ("abs_J", num(p.abs_j)), ("ratio", num(p.ratio))]))
        .collect();
    let volume = if entry.name == "fig8" { num(kauljones::oracle::fig8_volume()) } else { Value::Null };
    Ok(object(vec![("knot", json!(entry.name)), ("volume", volume), ("points", Value::Array(rows))]))
}

fn basis(root: &Root, input: Option<&Path>, colors: Option<&str>) -> Outcome<Value> {
    let cols: Vec<u32> = match colors {
        Some(c) => parse_list("--colors", c)?,
        None => parse_word(&read_input(input)?)?.colors().to_vec(),
    };
    let b = enumerate_basis(&cols, root)?;
    let reg = QubitRegister::new(b.m(), root.k());
    let labels = b
        .labels()
        .iter()
        .map(|l| {
            let bits: String = reg.encode(l)?.iter().map(|&x| if x { '1' } else { '0' }).collect();
            Ok(object(vec![("p", json!(l.p)), ("r", json!(l.r)), ("bits", json!(bits))]))
        })
        .collect::<kauljones::Result<Vec<_>>>()?;
    Ok(object(vec![
        ("colors_twice", json!(cols)),
        ("dim", json!(b.dim())),
        ("qubits", json!(reg.qubits())),
        ("slot_width", json!(reg.slot_width)),
        ("labels", Value::Array(labels)),
    ]))
}
