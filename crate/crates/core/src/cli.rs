//! Command-line surface. [`run`] does all the work and returns the exit code
//! and output text, so the binary stays a thin wrapper and tests can drive
//! the CLI in-process.
//!
//! | command     | exit codes                                                    |
//! |-------------|---------------------------------------------------------------|
//! | `classify`  | 0 analysed, 2 I/O or parse failure                            |
//! | `certify`   | 0 positive definite, 1 not, 3 inconclusive, 2 I/O             |
//! | `decompose` | 0 decomposed, 4 precondition failed, 2 I/O                    |
//! | `oracle`    | 0 done, 2 I/O                                                 |
//! | `search-b0` | 0 no candidates, 1 candidates found, 2 bad flags              |

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::classify::{classify_all, ClassifyOptions};
use crate::decompose::{decompose, pd_certify, CertifyOptions, DecomposeMode, DecomposeOptions, PdVerdict};
use crate::io::{load_tensor_with_warnings, InputDigest, LoadedTensor, ReportDocument, RunFlags};
use crate::oracle::{self, conjecture_search, Normalization, OracleOptions, SearchParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_PD: i32 = 1;
pub const EXIT_CANDIDATES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "btensor", version, about = "Classify tensors into the B-tensor family and certify positive definiteness")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Slack every class inequality must clear.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub margin: f64,
    /// Suppress warnings on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Quasi,
    Double,
}

impl From<ModeArg> for DecomposeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Quasi => DecomposeMode::Quasi,
            ModeArg::Double => DecomposeMode::Double,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every class predicate and print the report.
    Classify {
        path: PathBuf,
        /// Require b_{i..i} >= beta_i in the quasi-double B0 predicate.
        #[arg(long)]
        b0_requires_diagonal: bool,
    },
    /// Certify positive definiteness through class membership.
    Certify {
        path: PathBuf,
        /// Search for a violating vector when no class route fires.
        #[arg(long)]
        oracle: bool,
        /// Random starts for the oracle.
        #[arg(long, default_value_t = 256)]
        starts: usize,
        /// Record every route that fires, not just the first.
        #[arg(long)]
        verbose: bool,
    },
    /// Split a symmetric (quasi-)double B-tensor into a Z-tensor plus
    /// multiples of partially all-one tensors.
    Decompose {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Quasi)]
        mode: ModeArg,
        /// Skip re-checking the class after every step.
        #[arg(long)]
        no_reverify: bool,
    },
    /// Minimize the form over the unit sphere (and the m-norm sphere for
    /// even order).
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = 256)]
        starts: usize,
    },
    /// Look for quasi-double B0 tensors that are not positive semi-definite.
    SearchB0 {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        /// A sample is reported when its minimum is below -tol.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Random starts per sample.
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
}

/// What a run produced: exit code, stdout text, stderr lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: Vec<String>,
}

impl Outcome {
    fn fail(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: vec![message],
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    stderr: Vec<String>,
}

impl Ctx<'_> {
    fn load(&mut self, path: &PathBuf) -> Result<LoadedTensor, Outcome> {
        let loaded = load_tensor_with_warnings(path).map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {e}")))?;
        if !self.cli.quiet {
            self.stderr.extend(loaded.warnings.iter().map(|w| format!("warning: {w}")));
        }
        Ok(loaded)
    }

    fn flags(&self) -> RunFlags {
        RunFlags {
            seed: self.cli.seed,
            margin: self.cli.margin,
            ..RunFlags::default()
        }
    }

    fn finish(self, code: i32, doc: &ReportDocument) -> Outcome {
        match doc.to_json() {
            Ok(mut text) => {
                text.push('\n');
                Outcome {
                    code,
                    stdout: text,
                    stderr: self.stderr,
                }
            }
            Err(e) => Outcome::fail(EXIT_USAGE, format!("error: {e}")),
        }
    }

    fn oracle_options(&self, starts: usize) -> OracleOptions {
        OracleOptions {
            starts,
            seed: self.cli.seed,
            ..OracleOptions::default()
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if !(cli.margin >= 0.0 && cli.margin.is_finite()) {
        return Outcome::fail(EXIT_USAGE, format!("error: --margin must be finite and >= 0, got {}", cli.margin));
    }
    let mut ctx = Ctx {
        cli,
        stderr: Vec::new(),
    };
    let classify_opts = ClassifyOptions::with_margin(cli.margin);
    match &cli.command {
        Command::Classify {
            path,
            b0_requires_diagonal,
        } => {
            let loaded = match ctx.load(path) {
                Ok(l) => l,
                Err(o) => return o,
            };
            let opts = ClassifyOptions {
                b0_requires_diagonal: *b0_requires_diagonal,
                ..classify_opts
            };
            let mut flags = ctx.flags();
            flags.b0_requires_diagonal = Some(*b0_requires_diagonal);
            let mut doc = ReportDocument::new("classify", flags);
            doc.input = Some(InputDigest::of(&loaded.tensor));
            doc.classification = Some(classify_all(&loaded.tensor, &opts));
            ctx.finish(EXIT_OK, &doc)
        }
        Command::Certify {
            path,
            oracle,
            starts,
            verbose,
        } => {
            let loaded = match ctx.load(path) {
                Ok(l) => l,
                Err(o) => return o,
            };
            let opts = CertifyOptions {
                classify: classify_opts,
                oracle_fallback: *oracle,
                confirm_with_oracle: false,
                oracle: ctx.oracle_options(*starts),
                verbose: *verbose,
            };
            let cert = pd_certify(&loaded.tensor, &opts);
            let code = match cert.verdict {
                PdVerdict::PositiveDefinite => EXIT_OK,
                PdVerdict::NotPositiveDefinite => EXIT_NOT_PD,
                PdVerdict::Inconclusive => EXIT_INCONCLUSIVE,
            };
            let mut flags = ctx.flags();
            flags.oracle = Some(*oracle);
            flags.starts = Some(*starts);
            let mut doc = ReportDocument::new("certify", flags);
            doc.input = Some(InputDigest::of(&loaded.tensor));
            doc.classification = Some(classify_all(&loaded.tensor, &classify_opts));
            doc.certificate = Some(cert);
            ctx.finish(code, &doc)
        }
        Command::Decompose {
            path,
            mode,
            no_reverify,
        } => {
            let loaded = match ctx.load(path) {
                Ok(l) => l,
                Err(o) => return o,
            };
            let opts = DecomposeOptions {
                mode: (*mode).into(),
                reverify: !no_reverify,
            };
            match decompose(&loaded.tensor, &opts) {
                Ok(dec) => {
                    let mut flags = ctx.flags();
                    flags.mode = Some(format!("{:?}", mode).to_lowercase());
                    let mut doc = ReportDocument::new("decompose", flags);
                    doc.input = Some(InputDigest::of(&loaded.tensor));
                    doc.decomposition = Some(dec);
                    ctx.finish(EXIT_OK, &doc)
                }
                Err(e) => {
                    ctx.stderr.push(format!("error: {e}"));
                    Outcome {
                        code: EXIT_PRECONDITION,
                        stdout: String::new(),
                        stderr: ctx.stderr,
                    }
                }
            }
        }
        Command::Oracle { path, starts } => {
            let loaded = match ctx.load(path) {
                Ok(l) => l,
                Err(o) => return o,
            };
            let opts = ctx.oracle_options(*starts);
            let mut flags = ctx.flags();
            flags.starts = Some(*starts);
            let mut doc = ReportDocument::new("oracle", flags);
            doc.input = Some(InputDigest::of(&loaded.tensor));
            doc.oracle = Some(oracle::sphere_minimize(&loaded.tensor, &opts));
            doc.lambda_min = oracle::minimize(&loaded.tensor, Normalization::OrderNorm, &opts).ok();
            ctx.finish(EXIT_OK, &doc)
        }
        Command::SearchB0 {
            order,
            dim,
            trials,
            tol,
            starts,
        } => {
            let mut params = SearchParams::new(*order, *dim, *trials, cli.seed, *tol);
            params.starts = *starts;
            params.classify = classify_opts;
            let report = match conjecture_search(&params) {
                Ok(r) => r,
                Err(e) => return Outcome::fail(EXIT_USAGE, format!("error: {e}")),
            };
            if !cli.quiet && report.trials < *trials {
                ctx.stderr.push(format!(
                    "warning: only {} of {} samples accepted within {} attempts",
                    report.trials, trials, report.attempts
                ));
            }
            let code = if report.candidates.is_empty() {
                EXIT_OK
            } else {
                EXIT_CANDIDATES
            };
            let mut flags = ctx.flags();
            flags.order = Some(*order);
            flags.dim = Some(*dim);
            flags.trials = Some(*trials);
            flags.tolerance = Some(*tol);
            flags.starts = Some(*starts);
            let mut doc = ReportDocument::new("search-b0", flags);
            doc.search = Some(report);
            ctx.finish(code, &doc)
        }
    }
}
