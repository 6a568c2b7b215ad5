//! `qcluster`: command-line front end for the exact cluster-algebra engine.
//!
//! Reads a seed file (JSON, 1-based indices), runs one verb and prints a
//! report on stdout. Exit status: 0 on success, 1 on a domain failure
//! (incompatible pair, non-symmetrizable matrix, failed division, ...), 2 on
//! usage or input errors. Every failure also writes a JSON object
//! `{"error": {"code": ..., "message": ..., ...}}` to stderr.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcluster::explorer::LaurentSeed;
use qcluster::io::{AnySeed, SeedFile};
use qcluster::{
    explore, laurent_report, verify_quantum_seed, Caps, ClassicalSeed, Error, ExchangeSeed, ModularSeed,
    QuantumSeed,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qcluster", version, about = "Exact arithmetic for classical and quantum cluster algebras")]
struct Cli {
    /// Output format.
    #[arg(long, short, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Find the skew-symmetrizer; for quantum seeds also check compatibility
    /// and verify the seed.
    Check { input: PathBuf },
    /// Apply a mutation sequence and report on every new variable.
    Mutate {
        input: PathBuf,
        /// Comma-separated 1-based directions, e.g. `1,2,1`.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        at: Vec<usize>,
    },
    /// Breadth-first exploration of the exchange graph.
    Explore {
        input: PathBuf,
        #[arg(long, default_value_t = Caps::default().max_seeds)]
        max_seeds: usize,
        /// Unbounded when omitted.
        #[arg(long)]
        max_depth: Option<usize>,
        /// Print every node and edge, not just the summary.
        #[arg(long)]
        full: bool,
        /// Track variables by their values at fixed points mod 2^61 - 1
        /// instead of exactly (for large explorations).
        #[arg(long)]
        modular: bool,
    },
    /// Print the q = 1 classical shadow of a quantum seed.
    Specialize { input: PathBuf },
    /// Assemble the principal-coefficient Λ from `B`, `Lambda0` and `D`.
    PrincipalLambda { input: PathBuf },
}

/// A failure: exit status plus the JSON written to stderr.
struct Failure {
    status: u8,
    body: Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { status: 2, body: json!({ "error": { "code": "Usage", "message": message.into() } }) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Shape(_) | Error::LengthMismatch { .. } | Error::NotExchangeable { .. } => 2,
            _ => 1,
        };
        Self { status, body: e.to_json() }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return fail(&Failure::usage(msg.trim_end()));
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&f.body).expect("serializable"));
    ExitCode::from(f.status)
}

fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    if fmt == Format::Dot && !matches!(cli.verb, Verb::Explore { .. }) {
        return Err(Failure::usage("--format dot is only available for explore"));
    }
    match &cli.verb {
        Verb::Check { input } => check(&load(input)?, fmt),
        Verb::Mutate { input, at } => mutate(&load(input)?, at, fmt),
        Verb::Explore { input, max_seeds, max_depth, full, modular } => {
            let caps = Caps { max_seeds: *max_seeds, max_depth: max_depth.unwrap_or(usize::MAX) };
            let file = load(input)?;
            match (file.into_seed()?, modular) {
                (AnySeed::Classical(s), false) => explore_seed(s, caps, *full, fmt),
                (AnySeed::Quantum(s), false) => explore_seed(s, caps, *full, fmt),
                (AnySeed::Classical(s), true) => explore_seed(ModularSeed::from_classical(&s)?, caps, *full, fmt),
                (AnySeed::Quantum(s), true) => explore_seed(ModularSeed::from_quantum(&s)?, caps, *full, fmt),
            }
        }
        Verb::Specialize { input } => specialize(&load(input)?, fmt),
        Verb::PrincipalLambda { input } => principal(&load(input)?, fmt),
    }
}

fn load(path: &PathBuf) -> Result<SeedFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        status: 2,
        body: json!({ "error": { "code": "Io", "message": format!("{}: {e}", path.display()) } }),
    })?;
    let file = SeedFile::parse(&text).map_err(|e| Failure {
        status: 2,
        body: json!({ "error": { "code": "Parse", "message": format!("{}: {e}", path.display()) } }),
    })?;
    file.validate_shape()?;
    Ok(file)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn matrix_text(rows: &[Vec<i64>]) -> String {
    rows.iter()
        .map(|r| format!("  [{}]", r.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn check(file: &SeedFile, fmt: Format) -> Outcome {
    let b = file.exchange_matrix()?;
    let minimal = b.skew_symmetrizer()?;
    let Some(lambda) = file.lambda_matrix()? else {
        let out = json!({ "kind": "classical", "d": minimal.as_slice(), "skew_symmetrizer": minimal.as_slice() });
        return Ok(match fmt {
            Format::Text => format!("classical seed\nskew-symmetrizer d = {:?}\n", minimal.as_slice()),
            _ => pretty(&out),
        });
    };
    let seed = QuantumSeed::initial(b, lambda)?;
    let report = verify_quantum_seed(&seed);
    let d = seed.symmetrizer().as_slice();
    let out = json!({
        "kind": "quantum",
        "d": d,
        "skew_symmetrizer": minimal.as_slice(),
        "verification": report,
        "passed": report.all_passed(),
    });
    if !report.all_passed() {
        return Err(Failure {
            status: 1,
            body: json!({ "error": { "code": "VerificationFailed", "message": "quantum seed verification failed", "report": report } }),
        });
    }
    Ok(match fmt {
        Format::Text => {
            let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
            format!(
                "quantum seed\ncompatibility: {} (d = {:?})\nskew-symmetrizer: {:?}\nquasi-commutation: {}\nbar-invariance: {}\n",
                mark(report.compatibility.passed),
                d,
                minimal.as_slice(),
                mark(report.quasi_commutation.passed),
                mark(report.bar_invariance.passed),
            )
        }
        _ => pretty(&out),
    })
}

fn mutate(file: &SeedFile, at: &[usize], fmt: Format) -> Outcome {
    let ex = file.ex.clone();
    if let Some(&k) = at.iter().find(|k| !ex.contains(k)) {
        return Err(Failure::usage(format!("--at: {k} is not an exchangeable index (ex = {ex:?})")));
    }
    let seq: Vec<usize> = at.iter().map(|k| k - 1).collect();
    match file.into_seed()? {
        AnySeed::Classical(s) => mutate_seed(&s, &seq, fmt, |s: &ClassicalSeed, i| s.vars()[i].to_string()),
        AnySeed::Quantum(s) => mutate_seed(&s, &seq, fmt, |s: &QuantumSeed, i| s.vars()[i].to_string()),
    }
}

fn mutate_seed<S: LaurentSeed>(root: &S, seq: &[usize], fmt: Format, show: impl Fn(&S, usize) -> String) -> Outcome {
    let (report, last) = laurent_report(root, seq);
    if let Some(err) = report.steps.iter().find_map(|r| r.error.clone()) {
        let mut body = err;
        body["error"]["report"] = serde_json::to_value(&report).expect("serializable");
        return Err(Failure { status: 1, body });
    }
    Ok(match fmt {
        Format::Text => {
            let mut out = String::new();
            let mut cur = root.clone();
            for row in &report.steps {
                let k = row.index - 1;
                cur = cur.mutate_at(k).expect("replays a successful sequence");
                let _ = writeln!(out, "step {} (mu_{}): x_{} = {}", row.step, row.index, row.index, show(&cur, k));
                let _ = writeln!(out, "  denominator exponents: {:?}", row.denominator);
            }
            let _ = writeln!(out, "returns to initial seed: {}", report.returns_to_initial);
            let seed = last.to_json();
            if let Some(b) = seed.get("B").and_then(|b| serde_json::from_value::<Vec<Vec<i64>>>(b.clone()).ok()) {
                let _ = writeln!(out, "final B:\n{}", matrix_text(&b));
            }
            for i in 0..last.size() {
                let _ = writeln!(out, "x_{} = {}", i + 1, show(&last, i));
            }
            out
        }
        _ => pretty(&json!({
            "seed": last.to_json(),
            "report": report,
            "returns_to_initial": report.returns_to_initial,
        })),
    })
}

fn explore_seed<S: ExchangeSeed>(root: S, caps: Caps, full: bool, fmt: Format) -> Outcome {
    let g = explore(root, caps)?;
    Ok(match fmt {
        Format::Dot => g.to_dot(),
        Format::Text => {
            let summary = g.summary_json();
            let mut out = format!(
                "status: {}\nseeds: {}\nedges: {}\ncluster variables: {}\n",
                summary["status"].as_str().unwrap_or_default(),
                summary["nodes"],
                summary["edges"],
                summary["cluster_variables"],
            );
            if full {
                for v in g.cluster_variables() {
                    let _ = writeln!(out, "  {v}");
                }
            }
            out
        }
        Format::Json if full => pretty(&g.to_json()),
        Format::Json => pretty(&g.summary_json()),
    })
}

fn specialize(file: &SeedFile, fmt: Format) -> Outcome {
    let AnySeed::Quantum(q) = file.into_seed()? else {
        return Err(Failure::usage("specialize needs a quantum seed (a Lambda, or Lambda0/D)"));
    };
    let shadow = q.shadow();
    Ok(match fmt {
        Format::Text => {
            let mut out = format!("B:\n{}\n", matrix_text(shadow.exchange_matrix().rows()));
            for (i, v) in shadow.vars().iter().enumerate() {
                let _ = writeln!(out, "x_{} = {v}", i + 1);
            }
            out
        }
        _ => pretty(&shadow.to_json()),
    })
}

fn principal(file: &SeedFile, fmt: Format) -> Outcome {
    let (b, lambda) = file.principal_lambda()?;
    let seed = QuantumSeed::initial(b, lambda)?;
    let mut out = seed.exchange_matrix().to_json();
    out["Lambda"] = json!(seed.lambda().rows());
    out["D"] = json!(seed.symmetrizer().as_slice());
    Ok(match fmt {
        Format::Text => format!(
            "B:\n{}\nLambda:\n{}\nD = {:?}\n",
            matrix_text(seed.exchange_matrix().rows()),
            matrix_text(&seed.lambda().rows()),
            seed.symmetrizer().as_slice()
        ),
        _ => pretty(&out),
    })
}
