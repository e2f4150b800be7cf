//! `cbvtc`: check, run and analyze weak call-by-value rewrite systems.
//!
//! Exit status: 0 on success, 1 when a verification fails or evaluation
//! cannot finish (fuel, overflow), 2 on usage, input or parse errors.

use std::fmt;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cbvtc_core::engine::normalize_trace;
use cbvtc_core::parse::pretty_trs;
use cbvtc_core::semantics::{interpret_term, Interpretation, Natural, Valuation};
use cbvtc_core::{
    bound_vs_actual, derivation_height, normalize, parse_interpretation, parse_term, parse_trs, verify_rules, Fuel,
    Grid, ParseError, TermGenerator, Trs, VerificationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cbvtc", version, about = "Weak call-by-value rewriting with cost-size interpretations")]
struct Cli {
    /// Use arbitrary-precision naturals instead of 64-bit words.
    #[arg(long, global = true)]
    bignum: bool,
    /// Also write the result as JSON to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct FuelArgs {
    /// Maximum number of rewrite steps.
    #[arg(long, default_value_t = 100_000)]
    fuel: u64,
    /// Maximum number of distinct terms explored by the height search.
    #[arg(long, default_value_t = 10_000)]
    breadth: usize,
}

impl FuelArgs {
    fn fuel(self) -> Result<Fuel> {
        Fuel::new(self.fuel, self.breadth).map_err(|e| Usage(e.to_string()).into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a system.
    Check { trs: PathBuf },
    /// Normalize a term with the leftmost-innermost strategy.
    Eval {
        trs: PathBuf,
        term: String,
        #[command(flatten)]
        fuel: FuelArgs,
        /// Print every intermediate term.
        #[arg(long)]
        trace: bool,
    },
    /// Length of the longest reduction sequence from a term.
    Dh {
        trs: PathBuf,
        term: String,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Interpret a closed term as a cost-size tuple.
    Interpret { trs: PathBuf, csint: PathBuf, term: String },
    /// Check every rule against the interpretation on a sample grid.
    Verify {
        trs: PathBuf,
        csint: PathBuf,
        /// e.g. `nats=0,1,2,3,5,8;fns=zero,id,succ,double;budget=2000000`
        #[arg(long, value_name = "SPEC")]
        grid: Option<String>,
    },
    /// Compare derivation heights with interpreted bounds.
    Harness {
        trs: PathBuf,
        csint: PathBuf,
        /// Terms to measure, in addition to any generated ones.
        terms: Vec<String>,
        /// Generate COUNT random closed terms of size at most SIZE.
        #[arg(long, num_args = 2, value_names = ["SIZE", "COUNT"])]
        gen: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        fuel: FuelArgs,
    },
}

/// Errors in the invocation or the input files.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorChoice {
    Auto,
    Always,
    Never,
}

fn color_enabled() -> Result<bool> {
    let choice = match std::env::var("CBVTC_COLOR") {
        Ok(v) => ColorChoice::from_str(&v, true)
            .map_err(|_| Usage(format!("CBVTC_COLOR must be auto, always or never, not `{v}`")))?,
        Err(_) => ColorChoice::Auto,
    };
    Ok(match choice {
        ColorChoice::Always => true,
        ColorChoice::Never => false,
        ColorChoice::Auto => std::io::stdout().is_terminal(),
    })
}

fn paint(table: &str, color: bool) -> String {
    if !color {
        return table.to_string();
    }
    let mut out = String::new();
    for line in table.lines() {
        let mut cols: Vec<String> = line.split('\t').map(str::to_string).collect();
        if cols.len() > 3 {
            let code = match cols[3].as_str() {
                "ok" | "holds-on-samples" => Some("32"),
                "FAILS" | "VIOLATION" | "error" => Some("31"),
                _ => None,
            };
            if let Some(code) = code {
                cols[3] = format!("\x1b[{code}m{}\x1b[0m", cols[3]);
            }
        }
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn located(source: &str, e: ParseError) -> anyhow::Error {
    Usage(format!("{source}:{e}")).into()
}

fn load_trs(path: &Path) -> Result<Trs> {
    parse_trs(&read(path)?).map_err(|e| located(&path.display().to_string(), e))
}

fn load_interp<N: Natural>(trs: &Trs, path: &Path) -> Result<Interpretation<N>> {
    parse_interpretation(trs.signature(), &read(path)?).map_err(|e| located(&path.display().to_string(), e))
}

fn load_term(trs: &Trs, src: &str) -> Result<cbvtc_core::Term> {
    parse_term(trs.signature(), src).map_err(|e| located("<term>", e))
}

fn write_json(out: &Option<PathBuf>, value: serde_json::Value) -> Result<()> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&value)?;
        std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn report_out(out: &Option<PathBuf>, report: &VerificationReport) -> Result<()> {
    write_json(out, serde_json::to_value(report)?)
}

fn run<N: Natural>(cli: &Cli) -> Result<ExitCode> {
    let color = color_enabled()?;
    match &cli.command {
        Command::Check { trs } => {
            let sys = load_trs(trs)?;
            let (defined, constructors) = sys.classify_symbols();
            println!(
                "ok: {} base types, {} symbols ({} defined, {} constructors), {} rules",
                sys.signature().base_types().len(),
                sys.signature().len(),
                defined.len(),
                constructors.len(),
                sys.rules().len()
            );
            write_json(
                &cli.out,
                json!({
                    "ok": true,
                    "defined": defined,
                    "constructors": constructors,
                    "rules": sys.rules().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "source": pretty_trs(&sys),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { trs, term, fuel, trace } => {
            let sys = load_trs(trs)?;
            let t = load_term(&sys, term)?;
            let fuel = fuel.fuel()?;
            if *trace {
                let seq = normalize_trace(&t, &sys, fuel)?;
                for (i, s) in seq.iter().enumerate() {
                    println!("{i}\t{s}");
                }
            }
            let n = normalize(&t, &sys, fuel)?;
            println!("{}", n.term);
            println!("steps: {}", n.steps);
            write_json(
                &cli.out,
                json!({ "term": t.to_string(), "normal_form": n.term.to_string(), "steps": n.steps }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dh { trs, term, fuel } => {
            let sys = load_trs(trs)?;
            let t = load_term(&sys, term)?;
            let dh = derivation_height(&t, &sys, fuel.fuel()?)?;
            println!("{dh}");
            write_json(&cli.out, json!({ "term": t.to_string(), "dh": dh }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Interpret { trs, csint, term } => {
            let sys = load_trs(trs)?;
            let interp = load_interp::<N>(&sys, csint)?;
            let t = load_term(&sys, term)?;
            let v = interpret_term(&t, &interp, &Valuation::new())?;
            println!("{v}");
            write_json(
                &cli.out,
                json!({
                    "term": t.to_string(),
                    "cost": v.cost.to_string(),
                    "cost_fn": v.cost_fn.to_string(),
                    "size": v.size.to_string(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { trs, csint, grid } => {
            let sys = load_trs(trs)?;
            let interp = load_interp::<N>(&sys, csint)?;
            let grid: Grid = match grid {
                Some(spec) => spec.parse().map_err(|e| Usage(format!("--grid: {e}")))?,
                None => Grid::default(),
            };
            let report = verify_rules(&sys, &interp, &grid)?;
            print!("{}", paint(&report.to_table(), color));
            report_out(&cli.out, &report)?;
            Ok(if report.all_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Harness {
            trs,
            csint,
            terms,
            gen,
            seed,
            fuel,
        } => {
            let sys = load_trs(trs)?;
            let interp = load_interp::<N>(&sys, csint)?;
            let mut batch = terms.iter().map(|s| load_term(&sys, s)).collect::<Result<Vec<_>>>()?;
            if let Some(g) = gen {
                let (size, count) = (g[0], g[1]);
                batch.extend(TermGenerator::new(&sys, *seed).terms(size, count));
            }
            if batch.is_empty() {
                return Err(Usage("harness needs terms or --gen SIZE COUNT".into()).into());
            }
            let report = bound_vs_actual(&sys, &interp, &batch, fuel.fuel()?);
            print!("{}", paint(&report.to_table(), color));
            let errors = report.terms.iter().filter(|t| t.error.is_some()).count();
            println!(
                "# {} terms, {} violations, {} errors",
                report.terms.len(),
                report.violations().count(),
                errors
            );
            report_out(&cli.out, &report)?;
            Ok(if report.all_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = if cli.bignum { run::<BigUint>(&cli) } else { run::<u64>(&cli) };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some() || e.downcast_ref::<std::io::Error>().is_some();
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
