use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use baryeval::bench::{self, BenchConfig, Method, Quantity};
use baryeval::element::order_basis;
use baryeval::{locate, Error, LocateConfig, LocateProblem, Shape};

#[derive(Parser)]
#[command(
    name = "baryeval",
    version,
    about = "Reference-element evaluation: verification and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the correctness suites for each (shape, order) cell.
    Verify {
        /// Comma-separated shapes (segment, quad, tri, hex, prism, pyr, tet) or `all`.
        #[arg(long, default_value = "all")]
        shapes: String,
        /// Orders as `a..b` (inclusive), a single order or a list.
        #[arg(long, default_value = "2..10")]
        orders: String,
    },
    /// Time barycentric and interpolation-matrix evaluation and write a CSV.
    Bench {
        #[arg(long, default_value = "all")]
        shapes: String,
        #[arg(long, default_value = "2..20")]
        orders: String,
        /// Sweeps per cell [default: 1000 in 1D, 100 otherwise].
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated subset of bary, matrix_cached, matrix_recomputed.
        #[arg(long)]
        methods: Option<String>,
        /// Comma-separated subset of value, value_d1, value_d1_d2.
        #[arg(long)]
        quantities: Option<String>,
    },
    /// Compute matrix_recomputed / bary ratios from a benchmark CSV.
    Speedup {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Invert the identity coordinate map of an element at a target point.
    Locate {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        order: usize,
        /// Comma-separated coordinates, e.g. `0.25,-0.5`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::UnknownShape(_) | Error::InvalidConfig(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Check(other.to_string()),
        }
    }
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>, Failure> {
    Ok(s.split(',')
        .map(str::parse)
        .collect::<Result<Vec<T>, Error>>()?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { shapes, orders } => {
            let shapes = bench::parse_shapes(&shapes)?;
            let orders = bench::parse_orders(&orders)?;
            let report = bench::run_verify(&shapes, &orders)?;
            for cell in &report.cells {
                println!("{cell}");
            }
            let failed = report.cells.iter().filter(|c| !c.passed()).count();
            println!("{} cells, {} failed", report.cells.len(), failed);
            if failed > 0 {
                return Err(Failure::Check("verification failed".into()));
            }
        }
        Command::Bench {
            shapes,
            orders,
            reps,
            seed,
            out,
            methods,
            quantities,
        } => {
            let mut cfg = BenchConfig::new(
                bench::parse_shapes(&shapes)?,
                bench::parse_orders(&orders)?,
                reps,
                seed,
            );
            if let Some(m) = methods {
                cfg.methods = parse_list::<Method>(&m)?;
            }
            if let Some(q) = quantities {
                cfg.quantities = Some(parse_list::<Quantity>(&q)?);
            }
            let records = bench::run_bench(&cfg)?;
            let file = File::create(&out)
                .map_err(|e| Failure::Check(format!("cannot create {}: {e}", out.display())))?;
            bench::write_csv(&records, BufWriter::new(file))?;
            println!("wrote {} rows to {}", records.len(), out.display());
        }
        Command::Speedup { input, out } => {
            let file = File::open(&input)
                .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", input.display())))?;
            let records = bench::read_csv(BufReader::new(file))?;
            let rows = bench::speedup_report(&records)?;
            let file = File::create(&out)
                .map_err(|e| Failure::Check(format!("cannot create {}: {e}", out.display())))?;
            bench::write_speedup_csv(&rows, BufWriter::new(file))?;
            let min = rows.iter().map(|r| r.speedup).fold(f64::INFINITY, f64::min);
            println!(
                "wrote {} rows to {} (minimum speedup {min:.2})",
                rows.len(),
                out.display()
            );
        }
        Command::Locate {
            shape,
            order,
            target,
        } => {
            let shape: Shape = shape.parse()?;
            let target = target
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| Failure::Usage(format!("bad target: {e}")))?;
            if order < bench::MIN_ORDER {
                return Err(Failure::Usage(format!(
                    "order must be at least {}",
                    bench::MIN_ORDER
                )));
            }
            let problem = LocateProblem::from_map(
                shape,
                order_basis(shape, order)?,
                |xi| xi.to_vec(),
                target,
                LocateConfig::default(),
            )?;
            let r = locate(&problem)?;
            let xi: Vec<String> = r.xi.iter().map(|v| format!("{v:.15}")).collect();
            println!("xi = ({})", xi.join(", "));
            println!("residual = {:.3e}", r.residual);
            println!("iterations = {}", r.iterations);
            println!("converged = {}", r.converged);
            if !r.converged {
                return Err(Failure::Check("did not converge".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
