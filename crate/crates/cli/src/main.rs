use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zassenhaus::coefficients::{format_rational, CoeffKind, CoeffTable, Rational};
use zassenhaus::falgebra::{parse_ang_spec, FTerm};
use zassenhaus::spectral::{
    convergence_study, run_scheme, write_csv, write_state_dump, ErrorRow, LanczosPolicy, Scheme, SolveConfig,
};
use zassenhaus::splitting::{cost, kinetic_exponent, parse_sigma, potential_exponent, sbch, zassenhaus};
use zassenhaus::symfunc::{parse_expr, ClosedExpr, Symbol};
use zassenhaus::verify::{run_suite, Suite};
use zassenhaus::Error;

#[derive(Parser)]
#[command(name = "zass", version, about = "Symmetrised differential operators, splittings and a spectral TDSE solver")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for the randomised verification suites.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Strang,
    Zassenhaus,
}

#[derive(Subcommand)]
enum Command {
    /// Tables of π, λ, μ or γ for all k + l ≤ kmax.
    Coeffs {
        #[arg(long, value_parser = parse_kind)]
        kind: CoeffKind,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Expands [⟨f⟩ₖ, ⟨g⟩ₗ] for specs like `f:2` (use `1` for the unit).
    Commutator {
        #[arg(value_parser = parse_spec)]
        left: FTerm,
        #[arg(value_parser = parse_spec)]
        right: FTerm,
    },
    /// Symmetric BCH exponent of the semiclassical Hamiltonian up to t^order.
    Sbch {
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Symmetric Zassenhaus exponents W[0], …, W[n+1].
    Split {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value = "1", value_parser = parse_sigma_arg)]
        sigma: Rational,
    },
    /// Number of matrix-vector products per step.
    Cost {
        n: u32,
        #[arg(value_parser = parse_sigma_arg)]
        sigma: Rational,
    },
    /// Integrates the semiclassical TDSE and reports the error table.
    Solve {
        #[arg(long = "M", default_value_t = 128)]
        m: usize,
        #[arg(long, default_value_t = 0.0625)]
        eps: f64,
        /// One step size, or several for a convergence sweep to a shared final time.
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        dt: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Final time for a sweep; defaults to dt[0]·steps.
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long, default_value = "cos(pi*x)", value_parser = parse_expr_arg)]
        potential: ClosedExpr,
        #[arg(long, default_value = "exp(-50*x^2)", value_parser = parse_expr_arg)]
        initial: ClosedExpr,
        #[arg(long, value_enum, default_value_t = SchemeArg::Strang)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long, default_value = "1", value_parser = parse_sigma_arg)]
        sigma: Rational,
        /// Fixed Lanczos iteration count for the exponents W[k], k ≥ 2.
        #[arg(long)]
        lanczos_iters: Option<usize>,
        /// Binary dump of the final state.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Runs a verification suite and exits with 4 on failure.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
}

fn parse_kind(s: &str) -> Result<CoeffKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_spec(s: &str) -> Result<FTerm, String> {
    parse_ang_spec(s).map_err(|e| e.to_string())
}

fn parse_sigma_arg(s: &str) -> Result<Rational, String> {
    parse_sigma(s).map_err(|e| e.to_string())
}

fn parse_expr_arg(s: &str) -> Result<ClosedExpr, String> {
    parse_expr(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Domain(_) | Error::Range(_) | Error::Unsupported(_) | Error::Shape(_) | Error::Config(_) => 3,
        Error::Format(_) | Error::Io(_) => 1,
    }
}

fn unsupported_format(cmd: &str, f: Format) -> Failure {
    let name = match f {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Failure::Usage(format!("{cmd} has no {name} output"))
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value serialises"))?;
    Ok(())
}

fn fterm_out(out: &mut dyn Write, format: Format, cmd: &str, w: &FTerm) -> Outcome {
    match format {
        Format::Text => writeln!(out, "{w}")?,
        Format::Json => json_line(out, &json!({ "formula": w.to_string(), "terms": w.to_json() }))?,
        Format::Csv => return Err(unsupported_format(cmd, format)),
    }
    Ok(())
}

fn coeffs(out: &mut dyn Write, format: Format, kind: CoeffKind, kmax: u32) -> Outcome {
    let table = CoeffTable::build(kind, kmax)?;
    match format {
        Format::Text => write!(out, "{}", table.render_text())?,
        Format::Json => writeln!(out, "{}", table.to_json())?,
        Format::Csv => {
            writeln!(out, "k,l,n,i,value")?;
            for (key, v) in &table.entries {
                writeln!(out, "{},{},{},{},{}", key.k, key.l, key.n, key.i, format_rational(v))?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    out: &mut dyn Write,
    format: Format,
    cfg: SolveConfig,
    dts: &[f64],
    t_final: Option<f64>,
    dump: Option<PathBuf>,
) -> Outcome {
    let rows: Vec<ErrorRow> = if dts.len() == 1 && t_final.is_none() {
        let (row, u) = run_scheme(&cfg)?;
        if let Some(path) = dump {
            let mut f = BufWriter::new(File::create(path)?);
            write_state_dump(&mut f, &u)?;
            f.flush()?;
        }
        vec![row]
    } else {
        if dump.is_some() {
            return Err(Failure::Usage("--dump needs a single --dt without --t-final".into()));
        }
        let t = t_final.unwrap_or(dts[0] * cfg.steps as f64);
        convergence_study(&cfg, dts, t)?
    };
    match format {
        Format::Text | Format::Csv => write_csv(out, &rows)?,
        Format::Json => json_line(out, &serde_json::to_value(&rows).expect("rows serialise"))?,
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Coeffs { kind, kmax } => coeffs(out, format, kind, kmax),
        Command::Commutator { left, right } => fterm_out(out, format, "commutator", &left.commutator(&right)),
        Command::Sbch { order } => {
            let v = Symbol::new("V")?;
            let z = sbch(&kinetic_exponent(), &potential_exponent(&v), order)?;
            fterm_out(out, format, "sbch", &z)
        }
        Command::Split { n, sigma } => {
            let v = Symbol::new("V")?;
            let s = zassenhaus(&kinetic_exponent(), &potential_exponent(&v), n, &sigma)?;
            match format {
                Format::Text => write!(out, "{s}")?,
                Format::Json => json_line(out, &s.to_json())?,
                Format::Csv => return Err(unsupported_format("split", format)),
            }
            Ok(())
        }
        Command::Cost { n, sigma } => {
            let c = cost(n, &sigma)?;
            match format {
                Format::Text => writeln!(out, "{c}")?,
                Format::Json => json_line(out, &json!({ "n": n, "sigma": format_rational(&sigma), "cost": c }))?,
                Format::Csv => writeln!(out, "n,sigma,cost\n{n},{},{c}", format_rational(&sigma))?,
            }
            Ok(())
        }
        Command::Solve {
            m,
            eps,
            dt,
            steps,
            t_final,
            potential,
            initial,
            scheme,
            order,
            sigma,
            lanczos_iters,
            dump,
        } => {
            let scheme = match scheme {
                SchemeArg::Strang => Scheme::Strang,
                SchemeArg::Zassenhaus => Scheme::Zassenhaus { n: order, sigma },
            };
            let lanczos = match lanczos_iters {
                Some(k) => LanczosPolicy::Fixed(k),
                None => LanczosPolicy::OrderMatched,
            };
            let cfg = SolveConfig {
                m,
                eps,
                dt: dt[0],
                steps,
                potential,
                initial,
                scheme,
                lanczos,
            };
            solve(out, format, cfg, &dt, t_final, dump)
        }
        Command::Verify { suite } => {
            let reports = run_suite(suite, cli.seed);
            match format {
                Format::Text => {
                    for r in &reports {
                        write!(out, "{r}")?;
                    }
                }
                Format::Json => json_line(out, &serde_json::to_value(&reports).expect("reports serialise"))?,
                Format::Csv => return Err(unsupported_format("verify", format)),
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = dispatch(cli, &mut *out);
    let flushed = out.flush();
    match result {
        Ok(()) => match flushed {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(4)
        }
    }
}
