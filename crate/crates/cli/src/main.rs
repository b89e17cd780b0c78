//! `shen`: evaluate, certify and sample the elliptic functions built from
//! `F(1/3, 2/3; 1/2; x)`.
//!
//! Exit codes: 0 on success, 1 when a verification report fails, 2 on any
//! usage or domain error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shen_elliptic::sample::{format_number, AxisSpec, SampleFunction, SampleGrid};
use shen_elliptic::verify::{self, parse_suite, VerificationReport, DEFAULT_TOLERANCE};
use shen_elliptic::{Complex64, Error, Execution, Modulus, ShenContext};

const USAGE_ERROR: u8 = 2;
const VERIFICATION_FAILURE: u8 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "shen",
    version,
    about = "Elliptic functions from F(1/3, 2/3; 1/2; x)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print g2, g3 and the discriminant.
    Invariants(SingleK),
    /// Print the half-periods K, K′, the roots e1 > e2 > e3 and the pole of d.
    Periods(SingleK),
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Run the certification suite.
    Verify(VerifyArgs),
    /// Evaluate a function on a rectangular grid.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Emit JSON instead of text / CSV.
    #[arg(long)]
    json: bool,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SingleK {
    /// Modulus, 0 < k < 1.
    #[arg(long, allow_hyphen_values = true)]
    k: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: f64,
    /// d, s2, c2, sc, wp, wp-prime, or scd (real axis, via the phase map).
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    real: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    imag: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated moduli.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    k: Vec<f64>,
    /// `all` or a comma-separated list of identity names.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Pass threshold on each report's maximum residual.
    #[arg(long, env = "SHEN_DEFAULT_TOL", default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Evaluate reports one after another.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: f64,
    /// d, s2, c2, sc or wp.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    /// Real axis `start:step:stop`, or a single value.
    #[arg(long, allow_hyphen_values = true)]
    real: String,
    /// Imaginary axis `start:step:stop`, or a single value.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    imag: String,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Periods(a) => periods(a),
        Command::Eval(a) => eval(a),
        Command::Verify(a) => run_verify(a),
        Command::Sample(a) => sample(a),
    }
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// `name = value` lines, one per field.
fn text_table(fields: &[(&str, f64)]) -> String {
    let mut s = String::new();
    for (name, v) in fields {
        let _ = writeln!(s, "{name} = {}", format_number(*v));
    }
    s
}

#[derive(Serialize)]
struct InvariantsOut {
    g2: f64,
    g3: f64,
    delta: f64,
}

fn invariants(a: SingleK) -> Result<ExitCode, CliError> {
    let k = Modulus::new(a.k)?;
    let inv = shen_elliptic::Invariants::of_modulus(k);
    let text = if a.output.json {
        to_json(&InvariantsOut {
            g2: inv.g2,
            g3: inv.g3,
            delta: inv.delta,
        })
    } else {
        text_table(&[("g2", inv.g2), ("g3", inv.g3), ("delta", inv.delta)])
    };
    emit(&a.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PeriodsOut {
    k: f64,
    big_k: f64,
    big_k_prime: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    pole_im: f64,
}

fn periods(a: SingleK) -> Result<ExitCode, CliError> {
    let ctx = ShenContext::new(Modulus::new(a.k)?)?;
    let lat = ctx.lattice();
    let out = PeriodsOut {
        k: a.k,
        big_k: lat.big_k,
        big_k_prime: lat.big_k_prime,
        e1: lat.e1,
        e2: lat.e2,
        e3: lat.e3,
        pole_im: ctx.pole_of_d().im,
    };
    let text = if a.output.json {
        to_json(&out)
    } else {
        text_table(&[
            ("K", out.big_k),
            ("K'", out.big_k_prime),
            ("e1", out.e1),
            ("e2", out.e2),
            ("e3", out.e3),
            ("pole_im", out.pole_im),
        ])
    };
    emit(&a.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EvalOut {
    function: String,
    re_z: f64,
    im_z: f64,
    re_f: Option<f64>,
    im_f: Option<f64>,
    is_pole: bool,
}

fn eval(a: EvalArgs) -> Result<ExitCode, CliError> {
    let ctx = ShenContext::new(Modulus::new(a.k)?)?;
    let z = Complex64::new(a.real, a.imag);
    if a.function == "scd" {
        if a.imag != 0.0 {
            return Err(CliError::Usage(
                "scd is defined on the real axis only".into(),
            ));
        }
        let scd = ctx.phase_map().scd(a.real)?;
        let text = if a.output.json {
            to_json(&scd)
        } else {
            text_table(&[("s", scd.s), ("c", scd.c), ("d", scd.d)])
        };
        emit(&a.output, &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    let value = if a.function == "wp-prime" {
        match ctx.weierstrass().wp_prime(z) {
            Ok(v) => Some(v),
            Err(Error::Pole { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        a.function.parse::<SampleFunction>()?.eval(&ctx, z)?
    };
    let out = EvalOut {
        function: a.function,
        re_z: z.re,
        im_z: z.im,
        re_f: value.map(|v| v.re),
        im_f: value.map(|v| v.im),
        is_pole: value.is_none(),
    };
    let text = if a.output.json {
        to_json(&out)
    } else {
        match value {
            Some(v) => text_table(&[("re", v.re), ("im", v.im)]),
            None => "pole\n".to_string(),
        }
    };
    emit(&a.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn report_line(r: &VerificationReport) -> String {
    format!(
        "{} {} k={} samples={} max_residual={} tol={}",
        if r.passed { "PASS" } else { "FAIL" },
        r.identity_name,
        format_number(r.k),
        r.samples,
        format_number(r.max_residual),
        format_number(r.tolerance),
    )
}

fn run_verify(a: VerifyArgs) -> Result<ExitCode, CliError> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            a.tol
        )));
    }
    let ids = parse_suite(&a.suite)?;
    let reports = verify::run(&a.k, &ids, a.tol, execution(a.sequential))?;
    let text = if a.output.json {
        to_json(&reports)
    } else {
        reports.iter().map(|r| report_line(r) + "\n").collect()
    };
    emit(&a.output, &text)?;
    if reports.iter().all(|r| r.passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(VERIFICATION_FAILURE))
    }
}

fn sample(a: SampleArgs) -> Result<ExitCode, CliError> {
    let function: SampleFunction = a.function.parse()?;
    let real: AxisSpec = a.real.parse()?;
    let imag: AxisSpec = a.imag.parse()?;
    let ctx = ShenContext::new(Modulus::new(a.k)?)?;
    let grid = SampleGrid::compute(&ctx, function, real, imag, execution(a.sequential))?;
    let text = if a.output.json {
        to_json(&grid)
    } else {
        grid.to_csv()
    };
    emit(&a.output, &text)?;
    Ok(ExitCode::SUCCESS)
}
