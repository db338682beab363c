use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopfdg::hopf::antipode;
use hopfdg::invariants::{b_polynomial, edge_invariant, strict_chromatic, weak_chromatic};
use hopfdg::polytope::{cone_member_report, RationalVec};
use hopfdg::verify::{run_suite, Suite, SuiteReport};
use hopfdg::{BinPoly, CoeffRing, Digraph, Error, Limits};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hopfdg", version, about = "Hopf monoid of directed graphs: invariants, antipode, verification")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest vertex set for antipode and invariant computations.
    #[arg(long, default_value_t = 9, global = true)]
    max_vertices: usize,
    /// Enumerate compositions on several threads.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Strict,
    Weak,
    Bpoly,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    HopfAxioms,
    Morphism,
    Theorem1,
    Reciprocity,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print a polynomial invariant in the binomial and monomial bases.
    Invariant {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Print the antipode as a signed sum of graphs.
    Antipode { file: PathBuf },
    /// Run property suites against a graph.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Decide whether a vector lies in the cone of the graph.
    ConeMember {
        file: PathBuf,
        /// Comma-separated rationals, one per vertex in sorted label order.
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } | Error::WorkLimit { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let mut limits = Limits::from_env()?;
    limits.max_composition_vertices = cli.max_vertices;
    limits.parallel = cli.parallel;
    match &cli.command {
        Command::Invariant { file, which } => {
            let g = load(file)?;
            let (name, coeffs, binomial, monomial) = match which {
                Which::Strict => described("strict", &strict_chromatic(&g, &limits)?),
                Which::Weak => described("weak", &weak_chromatic(&g, &limits)?),
                Which::Bpoly => described("bpoly", &b_polynomial(&g, &limits)?),
                Which::Psi => described("psi", &edge_invariant(&g, &limits)?),
            };
            match cli.format {
                Format::Text => {
                    println!("binomial: {binomial}");
                    println!("monomial: {monomial}");
                }
                Format::Json => print_json(json!({
                    "graph": graph_json(&g),
                    "invariant": name,
                    "basis": "binomial",
                    "coeffs": coeffs,
                    "monomial": monomial,
                })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Antipode { file } => {
            let g = load(file)?;
            let s = antipode(&g, &limits)?;
            match cli.format {
                Format::Text => print!("{s}"),
                Format::Json => {
                    let terms: Vec<Value> = s
                        .terms()
                        .map(|(h, c)| json!({"coeff": c.to_string(), "edges": edges_json(h)}))
                        .collect();
                    print_json(json!({"graph": graph_json(&g), "antipode": terms}));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            suite,
            seed,
            samples,
        } => {
            let g = load(file)?;
            let suites: Vec<Suite> = match suite {
                SuiteArg::HopfAxioms => vec![Suite::HopfAxioms],
                SuiteArg::Morphism => vec![Suite::Morphism],
                SuiteArg::Theorem1 => vec![Suite::Theorem1],
                SuiteArg::Reciprocity => vec![Suite::Reciprocity],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let reports = suites
                .into_iter()
                .map(|s| run_suite(s, &g, *seed, *samples, &limits))
                .collect::<Result<Vec<_>, _>>()?;
            match cli.format {
                Format::Text => reports.iter().for_each(print_report),
                Format::Json => {
                    let rs: Vec<Value> = reports
                        .iter()
                        .map(|r| {
                            json!({
                                "suite": r.suite,
                                "passed": r.passed(),
                                "checks": r.checks,
                                "failures": r.failures,
                                "skipped": r.skipped,
                            })
                        })
                        .collect();
                    print_json(json!({"graph": graph_json(&g), "seed": seed, "reports": rs}));
                }
            }
            if reports.iter().all(SuiteReport::passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::ConeMember { file, vector } => {
            let g = load(file)?;
            let x = RationalVec::parse(g.vertices().clone(), vector)?;
            let report = cone_member_report(&g, &x)?;
            let witness: Option<Vec<(String, String, String)>> = report.witness.as_ref().map(|w| {
                g.edge_labels()
                    .zip(&w.lambda)
                    .map(|((u, v), l)| (u.to_string(), v.to_string(), l.to_string()))
                    .collect()
            });
            match cli.format {
                Format::Text => {
                    if report.is_member() {
                        println!("member");
                    } else if !report.sum_zero {
                        println!("non-member (coordinates do not sum to zero)");
                    } else {
                        println!("non-member");
                    }
                    if let Some(value) = &report.flow_value {
                        println!("flow: {value} (required {})", report.required);
                    }
                    if let Some(cert) = &report.certificate {
                        println!("min cut: {}", cert.capacity);
                    }
                    if let Some(w) = &witness {
                        println!("witness:");
                        for (u, v, l) in w {
                            println!("  {u} -> {v}: {l}");
                        }
                    }
                }
                Format::Json => print_json(json!({
                    "graph": graph_json(&g),
                    "vector": x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "member": report.is_member(),
                    "sum_zero": report.sum_zero,
                    "flow": report.flow_value.as_ref().map(|v| v.to_string()),
                    "required": report.required.to_string(),
                    "min_cut": report.certificate.as_ref().map(|c| c.capacity.to_string()),
                    "witness": witness.map(|w| w
                        .into_iter()
                        .map(|(u, v, l)| json!({"edge": [u, v], "lambda": l}))
                        .collect::<Vec<_>>()),
                })),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<Digraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Digraph::parse(&text)?)
}

fn described<R: CoeffRing>(name: &'static str, p: &BinPoly<R>) -> (&'static str, Vec<Value>, String, String) {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| json!({"k": k, "value": c.to_string()}))
        .collect();
    (name, coeffs, p.to_string(), p.monomial_string())
}

fn edges_json(g: &Digraph) -> Vec<[String; 2]> {
    g.edge_labels().map(|(u, v)| [u.to_string(), v.to_string()]).collect()
}

fn graph_json(g: &Digraph) -> Value {
    let vertices: Vec<String> = g.vertices().labels().iter().map(|l| l.to_string()).collect();
    json!({"vertices": vertices, "edges": edges_json(g)})
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string(&v).expect("json values serialize"));
}

fn print_report(r: &SuiteReport) {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    println!("{}: {verdict} ({} checks)", r.suite, r.checks);
    for s in &r.skipped {
        println!("  skipped: {s}");
    }
    for f in &r.failures {
        println!("  counterexample: {f}");
    }
}
