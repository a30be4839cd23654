mod args;
mod output;

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use sturm_transmute::solver::{
    fd_spectrum, normalize, prepare_basis, spps_spectrum, transmutation_spectrum, PotentialSource, ProblemSpec,
    DEFAULT_MESH, EXP_ON_ZERO_PI,
};
use sturm_transmute::transmute::TransmutationChar;
use sturm_transmute::Error;

use args::{CharfnArgs, Cli, Command, MethodArg, OutputFormat, SolveArgs, TableArgs};
use output::Report;

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(a: &SolveArgs) -> Result<()> {
    let start = Instant::now();
    let spec = a.problem.spec();
    let norm = normalize(&spec)?;
    let mut spectra = Vec::new();
    if a.method == MethodArg::Oracle {
        spectra.push(fd_spectrum(&norm, &spec, DEFAULT_MESH)?);
    } else {
        let basis = prepare_basis(&norm, &spec)?;
        if matches!(a.method, MethodArg::Transmutation | MethodArg::Both) {
            spectra.push(transmutation_spectrum(&norm, &spec, &basis)?);
        }
        if matches!(a.method, MethodArg::Spps | MethodArg::Both) {
            spectra.push(spps_spectrum(&norm, &spec, &basis)?);
        }
    }
    let report = Report::merge(spec, spectra, start.elapsed().as_secs_f64() * 1e3);
    let text = match a.output {
        OutputFormat::Table => output::table(&report),
        OutputFormat::Json => output::json(&report),
        OutputFormat::Csv => output::csv(&report),
    };
    emit(&text, a.out.as_deref())
}

fn reproduce(a: &TableArgs) -> Result<()> {
    let spec = ProblemSpec {
        beta_max: a.beta_max,
        ..a.numerics.apply(ProblemSpec::new(PotentialSource::Exp, 0.0, std::f64::consts::PI))
    };
    let norm = normalize(&spec)?;
    let basis = prepare_basis(&norm, &spec)?;
    let spectrum = transmutation_spectrum(&norm, &spec, &basis)?;
    let mut text = format!(
        "q = e^x on (0, pi), N = {}, {} grid points, beta <= {}\n",
        spec.truncation, spec.n_points, spec.beta_max
    );
    text.push_str(&output::reference_table(&spectrum, &EXP_ON_ZERO_PI));
    emit(&text, a.out.as_deref())
}

fn charfn(a: &CharfnArgs) -> Result<()> {
    let spec = a.problem.spec();
    let norm = normalize(&spec)?;
    let basis = prepare_basis(&norm, &spec)?;
    let chr = TransmutationChar::from_basis(&basis, spec.truncation, false)?;
    let mut text = String::from("beta,re_phi,im_phi\n");
    let count = ((spec.beta_max - 0.5 * spec.scan_step) / spec.scan_step).floor() as usize;
    for i in 0..=count {
        let beta = (i as f64 + 0.5) * spec.scan_step;
        let v = chr.phi_char(beta)?;
        writeln!(text, "{beta:.16e},{:.16e},{:.16e}", v.re, v.im).unwrap();
    }
    emit(&text, a.out.as_deref())
}

fn is_usage_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::InvalidProblem(_)
                | Error::InvalidGrid(_)
                | Error::TabulationCoverage { .. }
                | Error::PotentialFile { .. }
                | Error::BasisTooShort { .. }
                | Error::ChebyshevRange(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::ReproducePaperTable(a) => reproduce(a),
        Command::Charfn(a) => charfn(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
