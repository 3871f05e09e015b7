use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use selmer_core::families::{biquadratic_family, density_experiment, large_rank_family};
use selmer_core::formclass::class_group;
use selmer_core::table::{check_rows, parse_csv, Status, Table2Row, TABLE2_CSV};
use selmer_core::{analyze, Error, RankInput, SelmerReport};

const EXIT_FAILURE: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_OUT_OF_RANGE: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Selmer rank bounds for y^2 = x^3 + a(x - b)^2 over Q(zeta_3).
#[derive(Parser)]
#[command(name = "selmer3", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds for one curve.
    Analyze {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        /// Known rank, "N" or "LO..HI".
        #[arg(long)]
        rank: Option<RankInput>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every row of a reference CSV; the bundled rows when no path is given.
    TableCheck { path: Option<PathBuf> },
    /// Stream members of a constructive family as JSON lines.
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// Count eligible n <= X and those with 3 not dividing h(-12n).
    Density {
        #[arg(long)]
        xmax: u64,
    },
    /// Structure of the form class group of a fundamental discriminant.
    Classgroup {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    LargeRank {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    Biquadratic {
        #[arg(long, allow_negative_numbers = true)]
        aprime: i64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateCurve { .. } => EXIT_DEGENERATE,
        Error::OutOfRange { .. } => EXIT_OUT_OF_RANGE,
        _ => EXIT_FAILURE,
    }
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn print_report(r: &SelmerReport) {
    let p = &r.params;
    let row = Table2Row::from_report(r, r.rank_input.unwrap_or(RankInput::Exact(0)));
    let sets = |s| {
        let s = selmer_core::table::format_primes(s);
        if s.is_empty() {
            "-".to_string()
        } else {
            s
        }
    };
    println!("curve        y^2 = x^3 + {}(x - {})^2", p.a, p.b);
    println!("a square     {}", r.a_square_in_k);
    println!("S1 S2 S3     {} | {} | {}", sets(&row.s1), sets(&row.s2), sets(&row.s3));
    println!("h12 h13      {} {}", fmt_opt(r.h12), fmt_opt(r.h13));
    println!("psi          {} ..= {}", r.psi_lower, r.psi_upper);
    println!("psi-hat      {} ..= {}", r.psihat_lower, r.psihat_upper);
    println!(
        "sel3         {} ..= {} (unrefined upper {})",
        r.sel3_lower, r.sel3_upper, r.sel3_upper_loose
    );
    println!("root number  {}", fmt_opt(r.root_number));
    for t in &r.theorem_trace {
        println!("  {t}");
    }
}

fn json_line<T: serde::Serialize>(v: &T) -> Result<(), Error> {
    let s = serde_json::to_string(v).map_err(|e| Error::PreconditionViolated(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze { a, b, rank, json } => {
            let r = analyze(a, b, rank)?;
            if json {
                json_line(&r)?;
            } else {
                print_report(&r);
            }
        }
        Command::TableCheck { path } => {
            let text = match path {
                Some(p) => std::fs::read_to_string(&p).map_err(|e| {
                    Error::PreconditionViolated(format!("{}: {e}", p.display()))
                })?,
                None => TABLE2_CSV.to_string(),
            };
            let rows = parse_csv(&text)?;
            let (outcomes, summary) = check_rows(&rows);
            for o in &outcomes {
                println!("{o}");
            }
            println!(
                "{} rows: {} PASS, {} FAIL, {} FLAGGED",
                rows.len(),
                summary.pass,
                summary.fail,
                summary.flagged
            );
            if outcomes.iter().any(|o| o.status == Status::Fail) {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Family { family } => match family {
            Family::LargeRank { n, count } => {
                for m in large_rank_family(n, count) {
                    json_line(&m)?;
                }
            }
            Family::Biquadratic { aprime, count } => {
                for m in biquadratic_family(aprime, count)? {
                    json_line(&m)?;
                }
            }
        },
        Command::Density { xmax } => json_line(&density_experiment(xmax)?)?,
        Command::Classgroup { d, json } => {
            let g = class_group(d)?;
            if json {
                json_line(&*g)?;
            } else {
                println!(
                    "D = {}: order {}, divisors {:?}, 3-rank {}",
                    g.disc,
                    g.order,
                    g.elementary_divisors,
                    g.three_rank()
                );
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
