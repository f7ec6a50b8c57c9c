use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cobar_kernel::diagonal::{baues_diagonal, compare, AwDiagonal, DiagonalResult};
use cobar_kernel::homology::homology_table;
use cobar_kernel::report::Report;
use cobar_kernel::spaces::SpaceSpec;
use cobar_kernel::verify::{mutation_reports, parse_properties, verify, MethodChoice, Options};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cobar", version, about = "Cobar constructions, cobar diagonals and their verification over ℤ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Aw,
    Baues,
    Both,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> MethodChoice {
        match m {
            MethodArg::Aw => MethodChoice::Aw,
            MethodArg::Baues => MethodChoice::Baues,
            MethodArg::Both => MethodChoice::Both,
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// delta:n, delta-bar:n, sphere:n, quotient:n,r, point, product:A,B, or a JSON file
    #[arg(long)]
    space: String,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the simplicial set as JSON.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Images of the cobar generators under ψ.
    Diagonal {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        #[arg(long, value_enum, default_value = "aw")]
        method: MethodArg,
    },
    /// Run registered properties; exits nonzero on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        /// Comma-separated property names, or `all`.
        #[arg(long, default_value = "all")]
        properties: String,
        #[arg(long, value_enum, default_value = "aw")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Test mode: negate one seeded term of ψ before checking it.
        #[arg(long)]
        mutate: bool,
        /// Also run this many seeded sign mutations of ψ and φ.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
    },
    /// Integral homology in degrees 0..=bound of C(K), cobar:K or twisted-cobar:K.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
}

fn emit(common: &Common, json: &Value, table: &str) -> Result<()> {
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
        Format::Table => table.to_string(),
    };
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn diagonal_table(result: &Value) -> String {
    let mut out = format!("ψ[{}] on {} (bound {})\n", result["method"].as_str().unwrap_or("?"), result["space"], result["bound"]);
    for g in result["generators"].as_array().into_iter().flatten() {
        out += &format!("s⁻¹{} (degree {}):\n", g["generator"].as_str().unwrap_or("?"), g["degree"]);
        for t in g["image"].as_array().into_iter().flatten() {
            let word = |v: &Value| -> String {
                let letters: Vec<String> = v.as_array().into_iter().flatten().map(|l| format!("s⁻¹{}", l.as_str().unwrap_or("?"))).collect();
                if letters.is_empty() { "1".into() } else { letters.join("·") }
            };
            out += &format!("  {} {} ⊗ {}\n", t["coefficient"], word(&t["left"]), word(&t["right"]));
        }
    }
    out
}

fn run_diagonal(common: &Common, bound: usize, method: MethodArg) -> Result<bool> {
    let k = common.space.parse::<SpaceSpec>()?.build()?;
    let aw = || -> Result<DiagonalResult> { Ok(AwDiagonal::new(k.clone())?.result(bound)) };
    let (json, table, ok) = match method {
        MethodArg::Aw | MethodArg::Baues => {
            let r = if matches!(method, MethodArg::Aw) { aw()? } else { baues_diagonal(&k, bound)? };
            let j = r.to_json(&k);
            let t = diagonal_table(&j);
            (j, t, true)
        }
        MethodArg::Both => {
            let (a, b) = (aw()?, baues_diagonal(&k, bound)?);
            let verdict = compare(&a, &b);
            let (ja, jb) = (a.to_json(&k), b.to_json(&k));
            let word = if verdict.passed() { "equal" } else { "different" };
            let t = format!("{}{}{word}\n{}\n", diagonal_table(&ja), diagonal_table(&jb), verdict.summary_line());
            let j = json!({"aw": ja, "baues": jb, "verdict": word, "report": verdict});
            (j, t, verdict.passed())
        }
    };
    emit(common, &json, &table)?;
    Ok(ok)
}

fn run_verify(common: &Common, properties: &str, options: &Options, seed: u64, mutations: usize) -> Result<bool> {
    let names = parse_properties(properties)?;
    let spec = common.space.parse::<SpaceSpec>()?;
    let mut reports: Vec<Report> = Vec::new();
    for p in names {
        reports.extend(verify(&spec, p, options)?);
    }
    if mutations > 0 {
        reports.extend(mutation_reports(seed, mutations)?);
    }
    let ok = reports.iter().all(Report::passed);
    let table: String = reports.iter().map(|r| r.summary_line() + "\n").collect();
    emit(common, &serde_json::to_value(&reports)?, &table)?;
    Ok(ok)
}

fn run_homology(common: &Common, bound: usize) -> Result<bool> {
    let complex = SpaceSpec::complex(&common.space, bound)?;
    let groups = homology_table(&complex, bound)?;
    let json = json!({
        "complex": common.space,
        "groups": groups.iter().map(|g| json!({"degree": g.degree, "betti": g.betti, "torsion": g.torsion, "group": g.display()})).collect::<Vec<_>>(),
    });
    let table: String = groups.iter().map(|g| format!("H_{}\t{}\n", g.degree, g.display())).collect();
    emit(common, &json, &table)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { common } => {
            let k = common.space.parse::<SpaceSpec>()?.build()?;
            let json = serde_json::to_value(k.to_json())?;
            let mut table = format!("{}\ndim\tcount\tgenerators\n", k.name());
            for d in 0..=k.top_dimension() {
                let labels: Vec<&str> = k.cells(d).map(|c| k.label(c)).collect();
                table += &format!("{d}\t{}\t{}\n", labels.len(), labels.join(" "));
            }
            emit(&common, &json, &table)?;
            Ok(true)
        }
        Command::Diagonal { common, bound, method } => run_diagonal(&common, bound as usize, method),
        Command::Verify { common, bound, properties, method, seed, mutate, mutations } => {
            let options = Options {
                bound: bound as usize,
                method: method.into(),
                mutate: mutate.then_some(seed),
            };
            run_verify(&common, &properties, &options, seed, mutations)
        }
        Command::Homology { common, bound } => run_homology(&common, bound as usize),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
