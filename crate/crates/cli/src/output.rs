use std::fmt::Write;

use serde::Serialize;
use sturm_transmute::solver::{Diagnostics, EigenRecord, Method, ProblemSpec, ReferenceRow, Spectrum};

/// What `solve` emits: every record from every method that ran, with the
/// diagnostics merged.
#[derive(Debug, Serialize)]
pub struct Report {
    pub problem: ProblemSpec,
    pub eigenvalues: Vec<EigenRecord>,
    pub diagnostics: Diagnostics,
}

impl Report {
    pub fn merge(problem: ProblemSpec, spectra: Vec<Spectrum>, wall_ms: f64) -> Self {
        let mut diagnostics = Diagnostics {
            wall_ms,
            ..Diagnostics::default()
        };
        let mut eigenvalues = Vec::new();
        for s in spectra {
            diagnostics.max_im_residual = diagnostics.max_im_residual.max(s.diagnostics.max_im_residual);
            diagnostics.terms_used = diagnostics.terms_used.max(s.diagnostics.terms_used);
            diagnostics.truncated_at_lambda = diagnostics.truncated_at_lambda.or(s.diagnostics.truncated_at_lambda);
            eigenvalues.extend(s.records);
        }
        Report {
            problem,
            eigenvalues,
            diagnostics,
        }
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Transmutation => "transmutation",
        Method::Spps => "spps",
        Method::FdOracle => "fd_oracle",
    }
}

pub fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn csv(report: &Report) -> String {
    let mut s = String::from("index,beta,lambda,residual,method\n");
    for r in &report.eigenvalues {
        writeln!(
            s,
            "{},{:.16e},{:.16e},{:.16e},{}",
            r.index,
            r.beta,
            r.lambda,
            r.residual,
            method_name(r.method)
        )
        .unwrap();
    }
    s
}

pub fn table(report: &Report) -> String {
    let p = &report.problem;
    let mut s = String::new();
    writeln!(
        s,
        "q = {} on ({}, {}), N = {}, K_max = {}, {} grid points",
        p.potential, p.interval.0, p.interval.1, p.truncation, p.k_max, p.n_points
    )
    .unwrap();
    writeln!(s, "{:<14} {:>5} {:>22} {:>18} {:>10}", "method", "index", "lambda", "beta", "residual").unwrap();
    for r in &report.eigenvalues {
        writeln!(
            s,
            "{:<14} {:>5} {:>22.12} {:>18.10} {:>10.2e}",
            method_name(r.method),
            r.index,
            r.lambda,
            r.beta,
            r.residual
        )
        .unwrap();
    }
    let d = &report.diagnostics;
    writeln!(
        s,
        "max |Im F|/(1+|F|) = {:.2e}, terms used = {}, {:.0} ms",
        d.max_im_residual, d.terms_used, d.wall_ms
    )
    .unwrap();
    if let Some(l) = d.truncated_at_lambda {
        writeln!(s, "spps series ran out of basis functions at lambda = {l:.6}").unwrap();
    }
    s
}

pub fn reference_table(spectrum: &Spectrum, rows: &[ReferenceRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{:>5} {:>20} {:>14} {:>12} {:>10}", "index", "computed", "reference", "abs err", "rel err").unwrap();
    for row in rows {
        match spectrum.records.iter().find(|r| r.index == row.index) {
            Some(r) => {
                let abs = (r.lambda - row.lambda).abs();
                writeln!(
                    s,
                    "{:>5} {:>20.10} {:>14} {:>12.3e} {:>10.2e}",
                    row.index,
                    r.lambda,
                    row.lambda,
                    abs,
                    abs / row.lambda.abs()
                )
                .unwrap();
            }
            None => writeln!(s, "{:>5} {:>20} {:>14}", row.index, "not found", row.lambda).unwrap(),
        }
    }
    s
}
