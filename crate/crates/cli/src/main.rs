//! `secvar`: secant dimensions of Segre-Veronese varieties from the command line.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use secvar_core::modlinalg::derive_seed;
use secvar_core::{
    grassmann_secant_dimension, run_suite, secant_dimension, ComputeConfig, Error, GrassmannReport,
    Method, PrimeField, SecantReport, Suite, SuiteReport, VarietySpec, DEFAULT_PRIME,
    DEFAULT_SIZE_CAP,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "secvar",
    version,
    about = "Secant varieties of Segre-Veronese varieties via 2-fat points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension and defect of one secant variety.
    Dim {
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        degree: Vec<u32>,
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// All degrees with entries in 1..=degree-max and all s in 1..=s-max.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u32>,
        #[arg(long)]
        degree_max: u32,
        #[arg(long)]
        s_max: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Runs a fixed-range verification suite.
    Verify {
        /// thm2.1, thm2.5, thm1.1, prop2.3, sec3, prop3.2, grassmann, properties or all
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Grassmann secant dimension through the product with P^k.
    Grassmann {
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        degree: Vec<u32>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Defaults to a random seed; the seed used is always reported.
    #[arg(long, env = "SECANT_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    #[arg(long, default_value_t = Method::Both)]
    method: Method,
    /// Maximum number of matrix columns.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeCap { .. } | Error::Overflow(_) => EXIT_CAP,
            Error::MethodDisagreement { .. } | Error::PointCollision(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl RunArgs {
    fn config(&self) -> Result<ComputeConfig, Failure> {
        if let Some(j) = self.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build_global()
                .map_err(|e| Failure::usage(e.to_string()))?;
        }
        Ok(ComputeConfig {
            field: PrimeField::new(self.prime)?,
            seed: self.seed.unwrap_or_else(rand::random),
            trials: self.trials,
            method: self.method,
            size_cap: self.size_cap,
        })
    }

    fn reject_csv(&self) -> Result<(), Failure> {
        if self.format == Format::Csv {
            return Err(Failure::usage("csv output is only available for scan"));
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Dim {
            factors,
            degree,
            s,
            run,
        } => cmd_dim(&mut out, factors, degree, *s, run),
        Command::Scan {
            factors,
            degree_max,
            s_max,
            run,
        } => cmd_scan(&mut out, factors, *degree_max, *s_max, run),
        Command::Verify { suite, run } => cmd_verify(&mut out, suite, run),
        Command::Grassmann {
            factors,
            degree,
            k,
            s,
            run,
        } => cmd_grassmann(&mut out, factors, degree, *k, *s, run),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

type Out<'a> = std::io::StdoutLock<'a>;

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FAIL,
        message: e.to_string(),
    }
}

fn write_json<T: Serialize>(out: &mut Out, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| io(e.into()))?;
    writeln!(out).map_err(io)
}

fn list(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn write_report_text(out: &mut Out, r: &SecantReport) -> Result<(), Failure> {
    let m = &r.metadata;
    let mut lines = vec![
        format!("factors: {}", list(r.spec.shape().factors())),
        format!("degree: {}", list(r.spec.degree().degrees())),
        format!("s: {}", r.s),
        format!("N: {}", r.spec.ambient_dim()),
        format!("hilbert: {}", r.hilbert),
        format!("dim_expected: {}", r.dim_expected),
        format!("dim_actual: {}", r.dim_actual),
        format!("defect: {}", r.defect),
        format!("method: {}", r.method),
    ];
    match &r.certificate {
        Some(c) => lines.push(format!(
            "certificate: b={} c={} dim_Ib={} dim_Ic={} proves_defect={}",
            list(c.b.degrees()),
            list(c.c.degrees()),
            c.dim_ib,
            c.dim_ic,
            c.proves_defect
        )),
        None => lines.push("certificate: none".into()),
    }
    lines.push(format!("prime: {}", m.prime));
    lines.push(format!("seed: {}", m.seed));
    lines.push(format!("trials: {} {:?}", m.trials, m.per_trial_ranks));
    lines.push(format!("caveat: {}", m.caveat));
    for l in lines {
        writeln!(out, "{l}").map_err(io)?;
    }
    Ok(())
}

fn cmd_dim(
    out: &mut Out,
    factors: &[u32],
    degree: &[u32],
    s: u32,
    run: &RunArgs,
) -> Result<u8, Failure> {
    run.reject_csv()?;
    let config = run.config()?;
    let spec = VarietySpec::from_parts(factors, degree)?;
    let report = secant_dimension(&spec, s, &config)?;
    match run.format {
        Format::Text => write_report_text(out, &report)?,
        _ => write_json(out, &report)?,
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct ScanRow {
    factors: Vec<u32>,
    degree: Vec<u32>,
    s: u32,
    N: u64,
    dim_expected: Option<u64>,
    dim_actual: Option<u64>,
    defect: Option<u64>,
    certified: Option<bool>,
    prime: u64,
    seed: u64,
    trials: u32,
    status: String,
}

#[derive(Serialize)]
struct ScanTable {
    factors: Vec<u32>,
    degree_max: u32,
    s_max: u32,
    prime: u64,
    seed: u64,
    trials: u32,
    rows: Vec<ScanRow>,
}

/// All vectors in `[1, d]^t` in lex order.
fn degree_grid(t: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    let mut a = vec![1u32; t];
    loop {
        out.push(a.clone());
        let mut i = t;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if a[i] < d {
                a[i] += 1;
                break;
            }
            a[i] = 1;
        }
    }
}

fn cmd_scan(
    out: &mut Out,
    factors: &[u32],
    degree_max: u32,
    s_max: u32,
    run: &RunArgs,
) -> Result<u8, Failure> {
    let config = run.config()?;
    if degree_max == 0 || s_max == 0 {
        return Err(Failure::usage(
            "empty grid: degree-max and s-max must be at least 1",
        ));
    }
    // validates the shape
    VarietySpec::from_parts(factors, &vec![1; factors.len()])?;
    let cells: Vec<(Vec<u32>, u32)> = degree_grid(factors.len(), degree_max)
        .into_iter()
        .flat_map(|a| (1..=s_max).map(move |s| (a.clone(), s)))
        .collect();
    let rows: Vec<Result<ScanRow, Failure>> = cells
        .par_iter()
        .map(|(a, s)| {
            let mut key: Vec<u64> = a.iter().map(|&x| x as u64).collect();
            key.push(*s as u64);
            let cfg = config.reseeded(derive_seed(config.seed, &key));
            let spec = VarietySpec::from_parts(factors, a)?;
            let mut row = ScanRow {
                factors: factors.to_vec(),
                degree: a.clone(),
                s: *s,
                N: spec.ambient_dim(),
                dim_expected: None,
                dim_actual: None,
                defect: None,
                certified: None,
                prime: cfg.field.modulus(),
                seed: cfg.seed,
                trials: cfg.trials,
                status: "ok".into(),
            };
            match secant_dimension(&spec, *s, &cfg) {
                Ok(r) => {
                    row.dim_expected = Some(r.dim_expected);
                    row.dim_actual = Some(r.dim_actual);
                    row.defect = Some(r.defect);
                    row.certified = Some(r.certified());
                }
                Err(Error::SizeCap { .. }) | Err(Error::Overflow(_)) => {
                    row.status = "skipped".into()
                }
                Err(e) => return Err(e.into()),
            }
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let skipped = rows.iter().any(|r| r.status == "skipped");
    match run.format {
        Format::Json => write_json(
            out,
            &ScanTable {
                factors: factors.to_vec(),
                degree_max,
                s_max,
                prime: config.field.modulus(),
                seed: config.seed,
                trials: config.trials,
                rows,
            },
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "factors",
                "degree",
                "s",
                "N",
                "dim_expected",
                "dim_actual",
                "defect",
                "certified",
                "prime",
                "seed",
                "trials",
                "status",
            ])
            .map_err(|e| io(e.into()))?;
            let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            for r in &rows {
                w.write_record([
                    list(&r.factors),
                    list(&r.degree),
                    r.s.to_string(),
                    r.N.to_string(),
                    opt(r.dim_expected),
                    opt(r.dim_actual),
                    opt(r.defect),
                    r.certified.map(|c| c.to_string()).unwrap_or_default(),
                    r.prime.to_string(),
                    r.seed.to_string(),
                    r.trials.to_string(),
                    r.status.clone(),
                ])
                .map_err(|e| io(e.into()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Text => {
            writeln!(
                out,
                "factors {} prime {} seed {}",
                list(factors),
                config.field.modulus(),
                config.seed
            )
            .map_err(io)?;
            for r in &rows {
                let flag = if r.defect.unwrap_or(0) > 0 {
                    "  DEFECTIVE"
                } else {
                    ""
                };
                match (r.dim_actual, r.dim_expected, r.defect) {
                    (Some(d), Some(e), Some(df)) => writeln!(
                        out,
                        "a=({}) s={} dim {} expected {} defect {}{flag}",
                        list(&r.degree),
                        r.s,
                        d,
                        e,
                        df
                    ),
                    _ => writeln!(out, "a=({}) s={} skipped (size cap)", list(&r.degree), r.s),
                }
                .map_err(io)?;
            }
        }
    }
    Ok(if skipped { EXIT_CAP } else { 0 })
}

fn write_suite_text(out: &mut Out, r: &SuiteReport) -> Result<(), Failure> {
    for c in &r.cases {
        writeln!(
            out,
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.label,
            c.detail
        )
        .map_err(io)?;
    }
    writeln!(
        out,
        "{}: {} passed, {} failed (prime {}, seed {}, trials {})",
        r.suite, r.passed, r.failed, r.prime, r.seed, r.trials
    )
    .map_err(io)
}

fn cmd_verify(out: &mut Out, suite: &str, run: &RunArgs) -> Result<u8, Failure> {
    run.reject_csv()?;
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let config = run.config()?;
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, &config))
        .collect::<Result<Vec<_>, _>>()?;
    match run.format {
        Format::Text => {
            for r in &reports {
                write_suite_text(out, r)?;
            }
        }
        _ if reports.len() == 1 => write_json(out, &reports[0])?,
        _ => write_json(out, &reports)?,
    }
    Ok(if reports.iter().all(SuiteReport::all_passed) {
        0
    } else {
        EXIT_FAIL
    })
}

fn write_grassmann_text(out: &mut Out, g: &GrassmannReport) -> Result<(), Failure> {
    let p = &g.product_spec;
    let lines = [
        format!("factors: {}", list(g.base_spec.shape().factors())),
        format!("degree: {}", list(g.base_spec.degree().degrees())),
        format!("k: {}", g.k),
        format!("s: {}", g.s),
        format!(
            "product: factors {} degree {}",
            list(p.shape().factors()),
            list(p.degree().degrees())
        ),
        format!("dim_expected: {}", g.dim_expected),
        format!("dim_actual: {}", g.dim_actual),
        format!("defect: {}", g.defect),
        format!("prime: {}", g.product_report.metadata.prime),
        format!("seed: {}", g.product_report.metadata.seed),
    ];
    for l in lines {
        writeln!(out, "{l}").map_err(io)?;
    }
    Ok(())
}

fn cmd_grassmann(
    out: &mut Out,
    factors: &[u32],
    degree: &[u32],
    k: u32,
    s: u32,
    run: &RunArgs,
) -> Result<u8, Failure> {
    run.reject_csv()?;
    let config = run.config()?;
    let spec = VarietySpec::from_parts(factors, degree)?;
    let report = grassmann_secant_dimension(&spec, k, s, &config)?;
    match run.format {
        Format::Text => write_grassmann_text(out, &report)?,
        _ => write_json(out, &report)?,
    }
    Ok(0)
}
