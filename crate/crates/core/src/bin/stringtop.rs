//! Command-line front end: parses algebra spec files, dispatches the
//! library computations, and emits deterministic JSON (or CSV for
//! dimension tables).
//!
//! Exit codes: 0 success, 1 computation/validation failure, 2 usage error
//! (clap's default). `ST_THREADS` bounds the scan worker pool (default 1).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use stringtop::error::Error;
use stringtop::frobenius::FrobeniusAlgebra;
use stringtop::homology::{homology_table, ComplexKind, Window};
use stringtop::hochschild::Cochain;
use stringtop::lens;
use stringtop::products::TateElement;
use stringtop::serialize;
use stringtop::specfile;

#[derive(Parser)]
#[command(name = "stringtop", version, about = "Exact-arithmetic string topology engine")]
struct Cli {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WindowArgs {
    /// Algebra spec file (JSON)
    spec: PathBuf,
    /// Maximum word length L
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Lowest degree of the window
    #[arg(long, allow_hyphen_values = true)]
    k_min: i64,
    /// Highest degree of the window
    #[arg(long, allow_hyphen_values = true)]
    k_max: i64,
    /// Output format: json or csv
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct BinaryArgs {
    /// Algebra spec file (JSON)
    spec: PathBuf,
    /// Left operand (element JSON file)
    #[arg(long)]
    a: PathBuf,
    /// Right operand (element JSON file)
    #[arg(long)]
    b: PathBuf,
    /// Arity cap for cochain outputs
    #[arg(long, default_value_t = 16)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the dg algebra and Frobenius axioms of a spec file
    Validate { spec: PathBuf },
    /// Chain-sector homology table over a certified window
    Hh(WindowArgs),
    /// Cochain-sector homology table over a certified window
    Cohh(WindowArgs),
    /// Full two-sided complex homology table over a certified window
    Tate(WindowArgs),
    /// Cup product of two cochains
    Cup(BinaryArgs),
    /// Chain-level loop product of two chains
    Star(BinaryArgs),
    /// Apply γ (the double-coproduct composite) to an algebra element
    Gamma {
        spec: PathBuf,
        /// Basis label to feed in (coefficient 1)
        #[arg(long)]
        label: String,
    },
    /// Element-wise coproduct pipeline through the configuration models
    Pipeline {
        spec: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Lens-space calculus
    #[command(subcommand)]
    Lens(LensCommand),
}

#[derive(Subcommand)]
enum LensCommand {
    /// Coproduct of ρ_{ℓ,m} in the β-basis
    Coproduct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u64,
    },
    /// Search for a coproduct-preserving image of ρ_{1,0}
    Invariance {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        q2: u64,
    },
    /// Exhaustive witness-vs-homeomorphism scan up to p_max
    Scan {
        #[arg(long)]
        pmax: u64,
    },
}

fn threads_from_env() -> usize {
    std::env::var("ST_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1)
}

fn load_frobenius(path: &PathBuf) -> Result<FrobeniusAlgebra, Error> {
    let parsed = specfile::from_spec_file(path)?;
    parsed.frobenius.ok_or_else(|| {
        Error::Invalid(format!(
            "{} has no pairing block; this command needs a Frobenius algebra",
            path.display()
        ))
    })
}

fn representative_json(fr: &FrobeniusAlgebra, x: &TateElement) -> serde_json::Value {
    json!({
        "degree": x.degree,
        "cochain": serialize::cochain_to_json(&fr.algebra, &x.cochain),
        "chain": serialize::chain_to_json(&fr.algebra, &x.chain),
    })
}

fn homology_report(
    kind: ComplexKind,
    args: &WindowArgs,
) -> Result<String, Error> {
    let fr = load_frobenius(&args.spec)?;
    let window = Window::new(args.max_len, args.k_min, args.k_max)?;
    let table = homology_table(&fr, kind, &window)?;
    if args.format == "csv" {
        let mut out = String::from("degree,dim,cycle_rank,boundary_rank\n");
        for (k, s) in &table.degrees {
            out.push_str(&format!("{},{},{},{}\n", k, s.dim, s.cycle_rank, s.boundary_rank));
        }
        return Ok(out);
    }
    let degrees: Vec<serde_json::Value> = table
        .degrees
        .values()
        .map(|s| {
            json!({
                "degree": s.degree,
                "dim": s.dim,
                "cycle_rank": s.cycle_rank,
                "boundary_rank": s.boundary_rank,
                "representatives": s.representatives.iter()
                    .map(|r| representative_json(&fr, r)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&json!({
        "complex": format!("{:?}", kind),
        "window": {"max_len": args.max_len, "k_min": args.k_min, "k_max": args.k_max},
        "degrees": degrees,
    }))
    .expect("json"))
}

fn run(cli: &Cli) -> Result<(String, ExitCode), Error> {
    let report = match &cli.command {
        Command::Validate { spec } => {
            let parsed = specfile::from_spec_file(spec)?;
            let dga_errors = parsed.algebra.validate();
            let (frob_errors, has_pairing) = match &parsed.frobenius {
                Some(fr) => (fr.validate(), true),
                None => (Vec::new(), false),
            };
            let ok = dga_errors.is_empty() && frob_errors.is_empty();
            let text = serde_json::to_string_pretty(&json!({
                "dg_algebra": if dga_errors.is_empty() { "ok" } else { "invalid" },
                "frobenius": if !has_pairing { "absent" }
                             else if frob_errors.is_empty() { "ok" } else { "invalid" },
                "errors": dga_errors.iter().chain(frob_errors.iter()).collect::<Vec<_>>(),
            }))
            .expect("json");
            let code = if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
            return Ok((text, code));
        }
        Command::Hh(args) => homology_report(ComplexKind::Chains, args)?,
        Command::Cohh(args) => homology_report(ComplexKind::Cochains, args)?,
        Command::Tate(args) => homology_report(ComplexKind::Tate, args)?,
        Command::Cup(args) => {
            let fr = load_frobenius(&args.spec)?;
            let f = read_cochain(&fr, &args.a)?;
            let g = read_cochain(&fr, &args.b)?;
            let out = stringtop::products::cup(&fr.algebra, &f, &g, args.cap)?;
            serialize::cochain_to_json_string(&fr.algebra, &out)
        }
        Command::Star(args) => {
            let fr = load_frobenius(&args.spec)?;
            let a = read_chain(&fr, &args.a)?;
            let b = read_chain(&fr, &args.b)?;
            let out = stringtop::products::gh_star(&fr, &a, &b)?;
            serialize::chain_to_json_string(&fr.algebra, &out)
        }
        Command::Gamma { spec, label } => {
            let fr = load_frobenius(spec)?;
            let i = fr.algebra.space.index_of(label)?;
            let out = fr.gamma(&stringtop::sparse::basis(fr.field(), i))?;
            serde_json::to_string_pretty(&json!({
                "input": label,
                "gamma": out.iter().map(|(k, c)| json!({
                    "label": fr.algebra.space.label(*k), "coeff": c.to_string()
                })).collect::<Vec<_>>(),
            }))
            .expect("json")
        }
        Command::Pipeline { spec, a, b } => {
            let fr = load_frobenius(spec)?;
            let cm = stringtop::conf::ConfModel::new(&fr)?;
            let x = read_chain(&fr, a)?;
            let y = read_chain(&fr, b)?;
            let out = cm.geometric_coproduct_pipeline(&x, &y)?;
            serialize::chain_to_json_string(&fr.algebra, &out)
        }
        Command::Lens(cmd) => match cmd {
            LensCommand::Coproduct { p, q, l, m } => {
                let space = lens::LensSpace::new(*p, *q)?;
                let out = lens::rho_coproduct(&space, *l, *m);
                serde_json::to_string_pretty(&json!({
                    "p": p, "q": q, "l": l, "m": m,
                    "beta": out.coeffs.iter().map(|((k, kp), c)| json!({
                        "k": k, "kp": kp, "coeff": c
                    })).collect::<Vec<_>>(),
                }))
                .expect("json")
            }
            LensCommand::Invariance { p, q1, q2 } => {
                let witness = lens::coproduct_invariance_search(*p, *q1, *q2)?;
                serde_json::to_string_pretty(&json!({
                    "p": p, "q1": q1, "q2": q2,
                    "degrees": lens::homotopy_equiv_degrees(*p, *q1, *q2),
                    "preserved": witness.is_some(),
                    "witness": witness,
                }))
                .expect("json")
            }
            LensCommand::Scan { pmax } => {
                let report = lens::thm_lens_scan(*pmax, threads_from_env())?;
                let text = serde_json::to_string_pretty(&json!({
                    "p_max": report.p_max,
                    "pairs_checked": report.pairs_checked,
                    "non_preserving_count": report.non_preserving.len(),
                    "non_preserving": report.non_preserving,
                    "counterexamples": report.counterexamples,
                }))
                .expect("json");
                let code = if report.counterexamples.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                };
                return Ok((text, code));
            }
        },
    };
    Ok((report, ExitCode::SUCCESS))
}

fn read_chain(
    fr: &FrobeniusAlgebra,
    path: &PathBuf,
) -> Result<stringtop::hochschild::HochschildElement, Error> {
    let text = std::fs::read_to_string(path)?;
    serialize::chain_from_json_str(&fr.algebra, &text)
}

fn read_cochain(fr: &FrobeniusAlgebra, path: &PathBuf) -> Result<Cochain, Error> {
    let text = std::fs::read_to_string(path)?;
    serialize::cochain_from_json_str(&fr.algebra, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            let text = if report.ends_with('\n') { report } else { report + "\n" };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {e}");
                        return ExitCode::FAILURE;
                    }
                }
                None => print!("{text}"),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
