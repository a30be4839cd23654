use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sturm_transmute::quadrature::DEFAULT_POINTS;
use sturm_transmute::solver::{PotentialSource, ProblemSpec, DEFAULT_BETA_MAX, DEFAULT_SCAN_STEP};
use sturm_transmute::spps::DEFAULT_K_MAX;
use sturm_transmute::transmute::DEFAULT_TRUNCATION;

/// Dirichlet eigenvalues of -u'' + q(x) u = λ u on a finite interval.
#[derive(Debug, Parser)]
#[command(name = "sturm-transmute", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the eigenvalues of one problem.
    Solve(SolveArgs),
    /// Run q = e^x on (0, π) with N = 18 and compare with the published table.
    ReproducePaperTable(TableArgs),
    /// Sample the characteristic function Φ(β) as CSV.
    Charfn(CharfnArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Transmutation,
    Spps,
    Both,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct Numerics {
    /// Chebyshev truncation: the sine expansion keeps T_1 .. T_{2N+1}.
    #[arg(long = "N", default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    /// Highest basis index φ_K built for the series.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    pub k_max: usize,
    /// Odd number of uniform grid points on the unit interval.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub grid_points: usize,
    /// Scan step in β (unit-interval variables).
    #[arg(long, default_value_t = DEFAULT_SCAN_STEP)]
    pub scan_step: f64,
}

#[derive(Clone, Debug, Args)]
pub struct ProblemArgs {
    /// zero | const:C | exp | poly:c0,c1,... | file:PATH
    #[arg(long, value_parser = parse_potential)]
    pub potential: PotentialSource,
    /// Interval endpoints A B.
    #[arg(long, required = true, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Vec<f64>,
    /// Upper end of the β scan (unit-interval variables).
    #[arg(long, default_value_t = DEFAULT_BETA_MAX)]
    pub beta_max: f64,
    #[command(flatten)]
    pub numerics: Numerics,
}

impl ProblemArgs {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            potential: self.potential.clone(),
            interval: (self.interval[0], self.interval[1]),
            beta_max: self.beta_max,
            ..self.numerics.apply(ProblemSpec::default())
        }
    }
}

impl Numerics {
    pub fn apply(&self, spec: ProblemSpec) -> ProblemSpec {
        ProblemSpec {
            truncation: self.truncation,
            k_max: self.k_max,
            n_points: self.grid_points,
            scan_step: self.scan_step,
            ..spec
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Transmutation)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub numerics: Numerics,
    /// Upper end of the β scan; the table's row 50 sits near β = 157.
    #[arg(long, default_value_t = 160.0)]
    pub beta_max: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CharfnArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_potential(s: &str) -> Result<PotentialSource, String> {
    s.parse().map_err(|e: sturm_transmute::Error| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("sturm-transmute").chain(args.iter().copied()))
    }

    #[test]
    fn solve_defaults() {
        let cli = parse(&["solve", "--potential", "exp", "--interval", "0", "3.141592653589793", "--method", "both"])
            .unwrap();
        let Command::Solve(a) = cli.command else {
            panic!("expected solve");
        };
        assert_eq!(a.method, MethodArg::Both);
        assert_eq!(a.output, OutputFormat::Table);
        let spec = a.problem.spec();
        assert_eq!(spec.potential, PotentialSource::Exp);
        assert_eq!(spec.interval, (0.0, std::f64::consts::PI));
        assert_eq!(spec.truncation, 18);
        assert_eq!(spec.k_max, 100);
        assert_eq!(spec.beta_max, 55.0);
        assert_eq!(spec.scan_step, 0.25);
    }

    #[test]
    fn overrides_and_negative_interval() {
        let cli = parse(&[
            "solve", "--potential", "poly:1,0,1", "--interval", "-1", "1", "--N", "10", "--k-max", "40",
            "--grid-points", "2001", "--beta-max", "12", "--scan-step", "0.1", "--output", "csv",
        ])
        .unwrap();
        let Command::Solve(a) = cli.command else {
            panic!("expected solve");
        };
        let spec = a.problem.spec();
        assert_eq!(spec.interval, (-1.0, 1.0));
        assert_eq!((spec.truncation, spec.k_max, spec.n_points), (10, 40, 2001));
        assert_eq!((spec.beta_max, spec.scan_step), (12.0, 0.1));
        assert_eq!(a.output, OutputFormat::Csv);
    }

    #[test]
    fn rejects_bad_input() {
        for args in [
            &["solve", "--potential", "sin", "--interval", "0", "1"][..],
            &["solve", "--potential", "exp", "--interval", "0"],
            &["solve", "--potential", "exp", "--interval", "0", "x"],
            &["solve", "--interval", "0", "1"],
            &["solve", "--potential", "exp"],
            &["solve", "--potential", "exp", "--interval", "0", "1", "--bogus"],
            &["solve", "--potential", "file:/no/such/file.csv", "--interval", "0", "1"],
        ] {
            assert!(parse(args).is_err(), "{args:?}");
        }
    }
}
