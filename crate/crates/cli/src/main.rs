use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use airic::air::{build_air, euclid_chain};
use airic::codec::{decode_plan_for, encode, encoding_matrix, symbolic_listing, verify_lemma1, MessageVector};
use airic::field::PrimeField;
use airic::formats::{plan_to_text, table_row_to_csv, table_to_csv, TABLE_HEADER};
use airic::rates::{rate_table, smallest_pairs, RatePair, SniProblem, TableRow};
use airic::sim::{run, DecoderChoice, MessageBatch, SimConfig};
use airic::Error;

/// Index codes for symmetric side information built from AIR matrices.
#[derive(Parser)]
#[command(name = "airic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the λ/β chain of (m, n).
    Chain { m: usize, n: usize },
    /// Emit the m x n AIR matrix.
    Air {
        m: usize,
        n: usize,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Text)]
        format: MatrixFormat,
    },
    /// List the smallest achievable a for each b.
    Pairs {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long = "b-max", default_value_t = 35)]
        b_max: usize,
    },
    /// Best pair for every D <= D_max and U <= D, as CSV.
    Table {
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "D-max")]
        d_max: usize,
        #[arg(long = "b-max", default_value_t = 35)]
        b_max: usize,
    },
    /// Encode a message vector, or list the code symbols.
    Encode {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Print `c_i = x_{t,j} + …` instead of encoding.
        #[arg(long)]
        symbolic: bool,
        /// Comma-separated message values, in flattened order.
        #[arg(long, conflicts_with = "symbolic")]
        x: Option<String>,
        /// Seed for a random message when `--x` is absent.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Print the decoding plan of every wanted symbol.
    Plan {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Check that every receiver can decode.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Check the AIR matrix of (a, b) even when the pair is not achievable.
        #[arg(long)]
        unchecked: bool,
    },
    /// Run randomized encode/decode round trips.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = DecoderArg::Both)]
        decoder: DecoderArg,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long = "K")]
    k: usize,
    #[arg(long = "D")]
    d: usize,
    #[arg(long = "U")]
    u: usize,
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Plan,
    Oracle,
    Both,
}

impl From<DecoderArg> for DecoderChoice {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Plan => DecoderChoice::Plan,
            DecoderArg::Oracle => DecoderChoice::Oracle,
            DecoderArg::Both => DecoderChoice::Both,
        }
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;

enum Outcome {
    Ok,
    VerificationFailed,
}

impl ProblemArgs {
    fn problem(&self) -> Result<SniProblem, Error> {
        SniProblem::new(self.k, self.d, self.u)
    }
}

impl InstanceArgs {
    fn certified(&self) -> Result<(SniProblem, RatePair), Error> {
        let problem = self.problem.problem()?;
        let pair = RatePair::new(&problem, self.a, self.b)?;
        Ok((problem, pair))
    }
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn execute(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Chain { m, n } => {
            let chain = euclid_chain(m, n)?;
            println!("lambda: {}", join(chain.lambdas().iter()));
            let betas = if chain.betas().is_empty() { "-".to_string() } else { join(chain.betas().iter()) };
            println!("beta: {betas}");
            println!("gcd: {}", chain.gcd());
        }
        Command::Air { m, n, format } => {
            let air = build_air(m, n)?;
            match format {
                MatrixFormat::Text => print!("{}", air.to_text()),
                MatrixFormat::Csv => print!("{}", air.to_csv()),
            }
        }
        Command::Pairs { problem, b_max } => {
            let problem = problem.problem()?;
            if b_max == 0 {
                return Err(Error::Config("--b-max must be at least 1".into()));
            }
            println!("{TABLE_HEADER}");
            for pair in smallest_pairs(&problem, b_max) {
                println!("{}", table_row_to_csv(&TableRow { problem, pair }));
            }
        }
        Command::Table { k, d_max, b_max } => {
            if d_max == 0 || d_max >= k {
                return Err(Error::Config(format!("--D-max must lie in 1..{k}")));
            }
            print!("{}", table_to_csv(&rate_table(k, d_max, b_max)?));
        }
        Command::Encode {
            instance,
            symbolic,
            x,
            seed,
            p,
        } => {
            let (problem, pair) = instance.certified()?;
            let air = encoding_matrix(&problem, &pair)?;
            if symbolic {
                for line in symbolic_listing(&air, pair.b()) {
                    println!("{line}");
                }
                return Ok(Outcome::Ok);
            }
            let field = PrimeField::new(p)?;
            let x = match x {
                Some(text) => {
                    let values = text
                        .split(',')
                        .map(|v| {
                            v.trim()
                                .parse()
                                .map_err(|_| Error::Config(format!("--x: {v:?} is not a number")))
                        })
                        .collect::<Result<Vec<u32>, _>>()?;
                    if values.iter().any(|&v| v >= p) {
                        return Err(Error::Config(format!("--x values must lie in 0..{p}")));
                    }
                    MessageVector::from_values(problem.k(), pair.b(), field, values)?
                }
                None => MessageBatch::sample(problem.k(), pair.b(), field, 1, seed)?.trial(0),
            };
            let y = encode(&air, &x)?;
            println!("x: {}", join(x.values().iter()));
            println!("y: {}", join(y.symbols().iter()));
        }
        Command::Plan { instance } => {
            let (problem, pair) = instance.certified()?;
            let air = encoding_matrix(&problem, &pair)?;
            print!("{}", plan_to_text(&decode_plan_for(&air, &problem, pair.b())?));
        }
        Command::Verify { instance, p, unchecked } => {
            let field = PrimeField::new(p)?;
            let problem = instance.problem.problem()?;
            let (a, b) = (instance.a, instance.b);
            let air = if unchecked {
                if b == 0 {
                    return Err(Error::Config("--b must be at least 1".into()));
                }
                build_air(problem.k() * b, b * (problem.d() + 1) + a)?
            } else {
                let (_, pair) = instance.certified()?;
                encoding_matrix(&problem, &pair)?
            };
            let ok = verify_lemma1(&air, &problem, b, field)?;
            println!(
                "decodability of {}x{} AIR matrix for {problem} over {field}: {}",
                air.m(),
                air.n(),
                if ok { "PASS" } else { "FAIL" }
            );
            if !ok {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Simulate {
            instance,
            p,
            trials,
            seed,
            decoder,
            format,
        } => {
            let (problem, pair) = instance.certified()?;
            let config = SimConfig::new(problem, pair, trials, seed, PrimeField::new(p)?, decoder.into())?;
            let report = run(&config)?;
            match format {
                ReportFormat::Text => println!("{report}"),
                ReportFormat::Csv => print!("{}", report.to_csv()),
            }
            if !report.is_clean() {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFICATION),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
