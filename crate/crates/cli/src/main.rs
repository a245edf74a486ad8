//! `matpos`: exact positivity certificates and tracial moment checks for
//! matrix polynomials on `[-1,1]`, `[0,1]`, and `[-1,1]^n`.
//!
//! Exit codes: 0 affirmative, 1 negative mathematical verdict, 2 usage or
//! parse error, 3 inconclusive (the multiplier cap was exhausted). Machine
//! output is pure JSON on the chosen output path (stdout by default); logs
//! and human-readable reports go to stderr.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use matpos::certify::{
    certify_hypercube, certify_interval, certify_unit_interval, find_violation, verify_certificate,
    CertifyError, Domain, VerifyOutcome,
};
use matpos::linalg::Witness;
use matpos::moment::{
    check_hypercube_moment, check_interval_moment, check_unit_interval_moment, riesz_eval,
    tracial_integral, CheckReport, MomentSeq,
};
use matpos::rational::Rational;
use matpos_cli::formats::{
    self, parse_domain, CertificateFile, FormatError, MeasureFile, PolyFile, SequenceFile,
};

#[derive(Parser)]
#[command(
    name = "matpos",
    version,
    about = "Exact positivity certificates and tracial moment checks for matrix polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    /// The interval [-1,1]
    Interval,
    /// The interval [0,1]
    UnitInterval,
    /// The hypercube [-1,1]^n
    Hypercube,
}

impl DomainArg {
    fn kind(&self) -> &'static str {
        match self {
            DomainArg::Interval => "interval",
            DomainArg::UnitInterval => "unit-interval",
            DomainArg::Hypercube => "hypercube",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for a positivity certificate and write it as JSON.
    Certify {
        /// Domain to certify on
        #[arg(long, value_enum)]
        domain: DomainArg,
        /// Matrix polynomial JSON file ("-" for stdin)
        #[arg(long)]
        input: String,
        /// Certificate output path (stdout when omitted or "-")
        #[arg(long)]
        output: Option<String>,
        /// Cap on Pólya multiplier applications
        #[arg(long, default_value_t = 64)]
        n_max: u32,
        /// Fast-fail grid points per axis
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Check a certificate against a matrix polynomial by exact reconstruction.
    Verify {
        /// Certificate JSON file
        #[arg(long)]
        certificate: String,
        /// Matrix polynomial JSON file ("-" for stdin)
        #[arg(long)]
        input: String,
    },
    /// Run the truncated moment-sequence check for a domain.
    MomentCheck {
        #[arg(long, value_enum)]
        domain: DomainArg,
        /// Moment sequence JSON file ("-" for stdin)
        #[arg(long)]
        input: String,
        /// Level to check up to (defaults to the sequence's stored level)
        #[arg(long)]
        level: Option<u32>,
    },
    /// Compute the truncated moment sequence of an atomic measure.
    SampleMeasure {
        /// Atomic measure JSON file ("-" for stdin)
        #[arg(long)]
        input: String,
        /// Truncation level
        #[arg(long)]
        level: u32,
        /// Sequence output path (stdout when omitted or "-")
        #[arg(long)]
        output: Option<String>,
    },
    /// Evaluate the Riesz functional of a moment sequence on a polynomial.
    Riesz {
        /// Moment sequence JSON file
        #[arg(long)]
        sequence: String,
        /// Matrix polynomial JSON file
        #[arg(long)]
        poly: String,
    },
    /// Tracial integral of a polynomial against an atomic measure.
    Integrate {
        /// Atomic measure JSON file
        #[arg(long)]
        measure: String,
        /// Matrix polynomial JSON file
        #[arg(long)]
        poly: String,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code)
}

/// `Err` carries a usage/parse failure (exit 2); `Ok` carries the exit code
/// of a completed run.
fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Certify {
            domain,
            input,
            output,
            n_max,
            grid,
        } => cmd_certify(domain, &input, output.as_deref(), n_max, grid),
        Command::Verify { certificate, input } => cmd_verify(&certificate, &input),
        Command::MomentCheck {
            domain,
            input,
            level,
        } => cmd_moment_check(domain, &input, level),
        Command::SampleMeasure {
            input,
            level,
            output,
        } => cmd_sample_measure(&input, level, output.as_deref()),
        Command::Riesz { sequence, poly } => cmd_riesz(&sequence, &poly),
        Command::Integrate { measure, poly } => cmd_integrate(&measure, &poly),
    }
}

fn cmd_certify(
    domain: DomainArg,
    input: &str,
    output: Option<&str>,
    n_max: u32,
    grid: usize,
) -> Result<u8, String> {
    if grid < 2 {
        return Err("--grid must be at least 2".into());
    }
    let poly = read_poly(input)?;
    let resolved: Domain = parse_domain(domain.kind(), poly.nvars()).map_err(|e| e.to_string())?;
    if !poly.coefficients_symmetric() {
        return Err("polynomial coefficients must be symmetric matrices".into());
    }

    // honor a non-default grid density before the fixed-density search runs
    if let Some(violation) = find_violation(&poly, &resolved, grid) {
        report_violation(&violation.point, &violation.witness);
        return Ok(EXIT_NEGATIVE);
    }

    let started = Instant::now();
    let result = match resolved {
        Domain::Interval => certify_interval(&poly, n_max),
        Domain::UnitInterval => certify_unit_interval(&poly, n_max),
        Domain::Hypercube { .. } => certify_hypercube(&poly, n_max),
    };
    match result {
        Ok(certificate) => {
            let degree = poly.degree().unwrap_or(0);
            let n = certificate.level().saturating_sub(degree);
            write_output(
                output,
                &formats::to_json(&CertificateFile::from_certificate(&certificate)),
            )?;
            eprintln!("N = {n}");
            eprintln!("terms = {}", certificate.terms.len());
            eprintln!("wall time: {:?}", started.elapsed());
            Ok(EXIT_OK)
        }
        Err(CertifyError::NotPositiveOnDomain(violation)) => {
            report_violation(&violation.point, &violation.witness);
            Ok(EXIT_NEGATIVE)
        }
        Err(CertifyError::CertificateNotFound { n_max, diagnostic }) => {
            eprintln!("no certificate found within n_max = {n_max}");
            eprintln!(
                "diagnostic: coefficient of {} is not positive definite ({})",
                diagnostic.alpha,
                format_witness(&diagnostic.witness)
            );
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(other) => Err(other.to_string()),
    }
}

fn cmd_verify(certificate_path: &str, input: &str) -> Result<u8, String> {
    let certificate_file: CertificateFile = read_json(certificate_path)?;
    let certificate = certificate_file
        .to_certificate()
        .map_err(|e| e.to_string())?;
    let poly = read_poly(input)?;
    match verify_certificate(&certificate, &poly).map_err(|e| e.to_string())? {
        VerifyOutcome::Valid => {
            println!("valid");
            Ok(EXIT_OK)
        }
        VerifyOutcome::TermNotPd { term, witness } => {
            println!(
                "invalid: term {term} is not positive definite ({})",
                format_witness(&witness)
            );
            Ok(EXIT_NEGATIVE)
        }
        VerifyOutcome::Mismatch { alpha } => {
            println!("invalid: reconstruction differs from the input at {alpha}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_moment_check(domain: DomainArg, input: &str, level: Option<u32>) -> Result<u8, String> {
    let sequence_file: SequenceFile = read_json(input)?;
    let sequence: MomentSeq = sequence_file.to_sequence().map_err(|e| e.to_string())?;
    parse_domain(domain.kind(), sequence.nvars()).map_err(|e| e.to_string())?;
    let level = level.unwrap_or_else(|| sequence.level());
    let report: CheckReport = match domain {
        DomainArg::Interval => check_interval_moment(&sequence, level),
        DomainArg::UnitInterval => check_unit_interval_moment(&sequence, level),
        DomainArg::Hypercube => check_hypercube_moment(&sequence, level),
    }
    .map_err(|e| e.to_string())?;
    if report.passed {
        println!("pass: no obstruction up to level {}", report.level_checked);
        Ok(EXIT_OK)
    } else {
        let failure = report
            .first_failure
            .expect("failed report carries a failure");
        println!(
            "fail at index {}: localization matrix is not positive semidefinite ({})",
            failure.index,
            format_witness(&failure.witness)
        );
        Ok(EXIT_NEGATIVE)
    }
}

fn cmd_sample_measure(input: &str, level: u32, output: Option<&str>) -> Result<u8, String> {
    let measure_file: MeasureFile = read_json(input)?;
    let measure = measure_file.to_measure().map_err(|e| e.to_string())?;
    let sequence = MomentSeq::from_atomic(&measure, level);
    write_output(
        output,
        &formats::to_json(&SequenceFile::from_sequence(&sequence)),
    )?;
    Ok(EXIT_OK)
}

fn cmd_riesz(sequence_path: &str, poly_path: &str) -> Result<u8, String> {
    let sequence_file: SequenceFile = read_json(sequence_path)?;
    let sequence = sequence_file.to_sequence().map_err(|e| e.to_string())?;
    let poly = read_poly(poly_path)?;
    let value = riesz_eval(&sequence, &poly).map_err(|e| e.to_string())?;
    println!("{value}");
    Ok(EXIT_OK)
}

fn cmd_integrate(measure_path: &str, poly_path: &str) -> Result<u8, String> {
    let measure_file: MeasureFile = read_json(measure_path)?;
    let measure = measure_file.to_measure().map_err(|e| e.to_string())?;
    let poly = read_poly(poly_path)?;
    let value = tracial_integral(&measure, &poly).map_err(|e| e.to_string())?;
    println!("{value}");
    Ok(EXIT_OK)
}

// ---- plumbing ---------------------------------------------------------------

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, String> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
}

fn read_poly(path: &str) -> Result<matpos::matpoly::MatPoly, String> {
    let file: PolyFile = read_json(path)?;
    file.to_matpoly().map_err(|e: FormatError| e.to_string())
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), String> {
    match path {
        None | Some("-") => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("cannot write {path}: {e}"))
        }
    }
}

fn format_rationals(values: &[Rational]) -> String {
    let mut out = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{v}");
    }
    out.push(']');
    out
}

fn format_witness(witness: &Witness) -> String {
    format!(
        "witness {} with value {}",
        format_rationals(&witness.vector),
        witness.value
    )
}

fn report_violation(point: &[Rational], witness: &Witness) {
    eprintln!(
        "not positive definite on the domain: point {}, {}",
        format_rationals(point),
        format_witness(witness)
    );
}
