//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::harness::config::{parse_mu_list, ExperimentConfig, Overrides, Suite};
use crate::harness::report::{summary_json, write_outputs, SuiteReport};
use crate::harness::suites::run_suite;

#[derive(Debug, Parser)]
#[command(name = "mixfrac", version, about = "Eigenvalue bounds for mixed fractional Laplacians on an interval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form constants and their cross-checks.
    Constants(CommonArgs),
    /// Discrete spectrum of the mixed (or, with --single, the plain) problem.
    Spectrum(CommonArgs),
    /// Compare computed eigenvalues with a bound.
    Verify {
        #[command(subcommand)]
        which: VerifyKind,
    },
    /// First eigenvalue as a function of the shift.
    SweepMu(CommonArgs),
    /// Randomized and sampled checks of the auxiliary inequalities.
    Lemmas(CommonArgs),
    /// Single-operator Weyl asymptotics (diagnostic).
    Weyl(CommonArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyKind {
    /// Lower bounds on sums and single eigenvalues.
    Lower(CommonArgs),
    /// Leading upper-bound term (diagnostic).
    Upper(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Spatial dimension used by the constants.
    #[arg(long = "N")]
    pub dim: Option<u32>,
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long)]
    pub s2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Left end of Ω.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Right end of Ω.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Interior grid nodes.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "k-max")]
    pub k_max: Option<usize>,
    /// Comma-separated shifts; `<f>lhat` means f times the discrete first eigenvalue of E_s2.
    #[arg(long = "mu-list", allow_hyphen_values = true)]
    pub mu_list: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Solve the single-operator problem of this order instead.
    #[arg(long)]
    pub single: Option<f64>,
    /// Directory for summary.json and the CSV tables.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    pub fn overrides(&self) -> Result<Overrides> {
        let cli = Overrides {
            dim: self.dim,
            s1: self.s1,
            s2: self.s2,
            mu: self.mu,
            a: self.a,
            b: self.b,
            n: self.n,
            k_max: self.k_max,
            mu_list: self.mu_list.as_deref().map(parse_mu_list).transpose()?,
            seed: self.seed,
            trials: self.trials,
            single: self.single,
            out: self.out.clone(),
            ..Default::default()
        };
        match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                Ok(cli.layered_over(Overrides::parse_file(&text)?))
            }
            None => Ok(cli),
        }
    }
}

impl Command {
    pub fn suite_and_args(&self) -> (Suite, &CommonArgs) {
        match self {
            Command::Constants(a) => (Suite::Constants, a),
            Command::Spectrum(a) => (Suite::Spectrum, a),
            Command::Verify { which: VerifyKind::Lower(a) } => (Suite::Lower, a),
            Command::Verify { which: VerifyKind::Upper(a) } => (Suite::Upper, a),
            Command::SweepMu(a) => (Suite::SweepMu, a),
            Command::Lemmas(a) => (Suite::Lemmas, a),
            Command::Weyl(a) => (Suite::Weyl, a),
        }
    }
}

/// Resolves, runs and (with `--out`) writes one suite; returns the report and
/// the summary that was printed.
pub fn execute(cli: &Cli) -> Result<(SuiteReport, serde_json::Value)> {
    let (suite, args) = cli.command.suite_and_args();
    let cfg = ExperimentConfig::resolve(suite, args.overrides()?)?;
    let report = run_suite(&cfg)?;
    if let Some(dir) = &cfg.output_dir {
        write_outputs(dir, &cfg, &report)?;
    }
    let summary = summary_json(&cfg, &report);
    Ok((report, summary))
}

/// Process exit code: 0 unless a gating suite failed (1) or the run errored (2).
pub fn run(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, summary)) => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            if report.blocks_run() {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
