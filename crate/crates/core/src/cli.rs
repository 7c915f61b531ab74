//! Command-line front end. Exit codes: 0 on success, 1 when routes disagree
//! or a lemma fails, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::experiments::{
    self, compute_records, density, ideal_of_norm, lemma_suite_with_fault, parse_class,
    partial_sum, type_i_sum, type_ii_sum, write_records_csv, CoeffMode, Fault, RecordConfig,
    Routes, TypeIIParams, H2_BUCKETS,
};
use crate::spin::DirichletCharMod8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinlab",
    version,
    about = "Spin symbols and the 16-rank of Cl(-8p)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunConfig,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunConfig {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record cache directory (default: $SPINLAB_CACHE_DIR or .spinlab-cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Compute without reading or writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coeffs {
    Ones,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    SwapSigmaTau,
}

fn parse_xmax(s: &str) -> Result<u64, String> {
    let x: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if x < 2 {
        return Err("must be at least 2".into());
    }
    Ok(x)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-prime records for p = 1 mod 4 up to xmax.
    Compute {
        #[arg(long, value_parser = parse_xmax)]
        xmax: u64,
        /// Also count forms for p up to this bound.
        #[arg(long, default_value_t = 0)]
        oracle_to: u64,
    },
    /// Proportions of p with 2^k | h(-8p) and of h_2(-8p) over all primes.
    Density {
        #[arg(long, value_parser = parse_xmax)]
        xmax: u64,
        #[arg(long, default_value_t = 0)]
        oracle_to: u64,
    },
    /// Running sums of e_p.
    PartialSum {
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
    },
    /// Sum of a(chi) over odd ideals of norm <= x divisible by an ideal of norm K.
    Type1 {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 1)]
        m_norm: u64,
        #[arg(long, default_value = "chi0")]
        chi: DirichletCharMod8,
    },
    /// Bilinear sum of (z / sigma(w))_2 over residue classes mod 16.
    Type2 {
        #[arg(long)]
        bigm: u64,
        #[arg(long)]
        bign: u64,
        /// Class of w mod 16: one integer or four comma-separated coordinates.
        #[arg(long, value_parser = parse_class, allow_hyphen_values = true)]
        omega: [u64; 4],
        #[arg(long, value_parser = parse_class, allow_hyphen_values = true)]
        zeta: [u64; 4],
        #[arg(long, value_enum, default_value_t = Coeffs::Ones)]
        coeffs: Coeffs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks that all routes to e_p agree up to xmax.
    Verify {
        #[arg(long, value_parser = parse_xmax)]
        xmax: u64,
        /// Form-counting bound (default: min(xmax, 50000)).
        #[arg(long)]
        oracle_to: Option<u64>,
    },
    /// Randomized identity checks.
    Lemmas {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
}

/// Failure modes of a run, mapped to exit codes by [`exit_code`].
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RouteDisagreement { .. } => CliError::Check(e.to_string()),
            Error::BadPrime(_) | Error::EvenModulus(_) | Error::ZeroModulus => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Runtime(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub fn exit_code(r: &Result<(), CliError>) -> i32 {
    match r {
        Ok(()) => 0,
        Err(CliError::Usage(_)) => 2,
        Err(CliError::Check(_) | CliError::Runtime(_)) => 1,
    }
}

fn record_config(run: &RunConfig, routes: Routes) -> RecordConfig {
    RecordConfig {
        routes,
        workers: run.workers as usize,
        cache_dir: if run.no_cache {
            None
        } else {
            Some(
                run.cache_dir
                    .clone()
                    .unwrap_or_else(experiments::default_cache_dir),
            )
        },
        ..RecordConfig::default()
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(out)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(Error::Cache(e.to_string()))
}

fn emit_json<T: Serialize, W: Write>(mut out: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| CliError::Runtime(Error::Cache(e.to_string())))?;
    writeln!(out)?;
    Ok(())
}

/// Emits `rows` as CSV (with a header) or as a JSON array.
fn emit_rows<T: Serialize, W: Write>(out: W, format: Format, rows: &[T]) -> Result<(), CliError> {
    match format {
        Format::Json => emit_json(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Statistic {
    statistic: String,
    num: u64,
    den: u64,
    value: f64,
}

#[derive(Serialize)]
struct VerifySummary {
    xmax: u64,
    oracle_to: u64,
    primes: usize,
    oracle_checked: usize,
    disagreements: usize,
}

#[derive(Serialize)]
struct Type1Row {
    x: u64,
    m_norm: u64,
    m: String,
    chi: String,
    re: i64,
    im: i64,
    terms: u64,
}

#[derive(Serialize)]
struct Type2Row {
    bigm: u64,
    bign: u64,
    omega: String,
    zeta: String,
    coeffs: &'static str,
    seed: u64,
    value: i64,
    swapped_value: i64,
    terms: u64,
}

#[derive(Serialize)]
struct LemmaRow {
    check: String,
    trials: usize,
    failures: usize,
    first_counterexample: String,
}

fn join(xs: &[impl ToString]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn execute<W: Write>(cli: &Cli, mut out: W) -> Result<(), CliError> {
    let run = &cli.run;
    match &cli.command {
        Command::Compute { xmax, oracle_to } => {
            let routes = Routes {
                oracle_to: *oracle_to,
                ..Routes::default()
            };
            let recs = compute_records(*xmax, &record_config(run, routes))?;
            match run.format {
                Format::Csv => write_records_csv(out, &recs)?,
                Format::Json => emit_json(out, &recs)?,
            }
        }
        Command::Density { xmax, oracle_to } => {
            let routes = Routes {
                oracle_to: *oracle_to,
                ..Routes::default()
            };
            let recs = compute_records(*xmax, &record_config(run, routes))?;
            let rep = density(*xmax, &recs, run.workers as usize)?;
            if run.format == Format::Json {
                return emit_json(out, &rep);
            }
            let mut rows = Vec::new();
            for (k, r) in rep.ratios.iter().enumerate() {
                rows.push((format!("delta({})", 2u64 << k), *r));
            }
            rows.push((
                "delta(16) among p = 1 mod 8".into(),
                rep.ratio16_given_split,
            ));
            for (label, r) in H2_BUCKETS.iter().zip(rep.h2_ratios) {
                rows.push((format!("delta'({label})"), r));
            }
            let rows: Vec<Statistic> = rows
                .into_iter()
                .map(|(statistic, r)| Statistic {
                    statistic,
                    num: r.num,
                    den: r.den,
                    value: r.value,
                })
                .collect();
            emit_rows(out, run.format, &rows)?;
        }
        Command::PartialSum { grid } => {
            let xmax = grid.iter().copied().max().unwrap_or(2).max(2);
            let recs = compute_records(xmax, &record_config(run, Routes::default()))?;
            emit_rows(out, run.format, &partial_sum(grid, &recs)?)?;
        }
        Command::Type1 { x, m_norm, chi } => {
            let m = ideal_of_norm(*m_norm)
                .ok_or_else(|| CliError::Usage(format!("no odd ideal has norm {m_norm}")))?;
            let r = type_i_sum(*x, &m, *chi)?;
            let row = Type1Row {
                x: r.x,
                m_norm: r.m_norm,
                m: join(&r.m),
                chi: r.chi.to_string(),
                re: r.re,
                im: r.im,
                terms: r.terms,
            };
            emit_rows(out, run.format, &[row])?;
        }
        Command::Type2 {
            bigm,
            bign,
            omega,
            zeta,
            coeffs,
            seed,
        } => {
            let params = TypeIIParams {
                big_m: *bigm,
                big_n: *bign,
                omega: *omega,
                zeta: *zeta,
                coeffs: match coeffs {
                    Coeffs::Ones => CoeffMode::Ones,
                    Coeffs::Random => CoeffMode::RandomPm1,
                },
                seed: *seed,
            };
            let r = type_ii_sum(&params)?;
            let row = Type2Row {
                bigm: *bigm,
                bign: *bign,
                omega: join(omega),
                zeta: join(zeta),
                coeffs: match coeffs {
                    Coeffs::Ones => "ones",
                    Coeffs::Random => "random",
                },
                seed: *seed,
                value: r.value,
                swapped_value: r.swapped_value,
                terms: r.terms,
            };
            emit_rows(out, run.format, &[row])?;
        }
        Command::Verify { xmax, oracle_to } => {
            let oracle_to = oracle_to.unwrap_or((*xmax).min(50_000));
            let routes = Routes {
                spin: true,
                lw: true,
                oracle_to,
            };
            let recs = compute_records(*xmax, &record_config(run, routes))?;
            let summary = VerifySummary {
                xmax: *xmax,
                oracle_to,
                primes: recs.len(),
                oracle_checked: recs.iter().filter(|r| r.e_oracle.is_some()).count(),
                disagreements: 0,
            };
            emit_rows(out, run.format, &[summary])?;
        }
        Command::Lemmas {
            trials,
            seed,
            fault,
        } => {
            if *trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let fault = fault.map(|FaultArg::SwapSigmaTau| Fault::SwapSigmaTau);
            let rep = lemma_suite_with_fault(*trials, *seed, fault);
            if run.format == Format::Json {
                emit_json(&mut out, &rep)?;
            } else {
                let rows: Vec<LemmaRow> = rep
                    .checks
                    .iter()
                    .map(|c| LemmaRow {
                        check: c.name.clone(),
                        trials: c.trials,
                        failures: c.failures,
                        first_counterexample: c.first_counterexample.clone().unwrap_or_default(),
                    })
                    .collect();
                emit_rows(&mut out, run.format, &rows)?;
            }
            if !rep.passed {
                return Err(CliError::Check("lemma suite failed".into()));
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.run.out {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            execute(&cli, &mut w)?;
            w.flush().map_err(CliError::from)
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            execute(&cli, &mut lock)
        }
    };
    match &result {
        Err(CliError::Usage(m)) => eprintln!("usage error: {m}"),
        Err(CliError::Check(m)) => eprintln!("check failed: {m}"),
        Err(CliError::Runtime(e)) => eprintln!("error: {e}"),
        Ok(()) => {}
    }
    exit_code(&result)
}
