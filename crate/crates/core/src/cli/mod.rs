//! Command-line front end.
//!
//! Every subcommand builds a [`Run`] (a list of reports plus the suite
//! version) and hands it to [`emit`] for JSON, CSV or text rendering. Exit
//! codes: 0 all verdicts pass, 1 some verdict fails, 2 numerical or I/O
//! failure, 64 usage error or violated hypothesis.

mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use emit::{Report, Run};

use crate::constants::{constant_table, CaseSpec, HalfspaceVariant};
use crate::error::Error;
use crate::halfspace::{
    check_pf1, check_pf2, hardy_mazya_table, margin_halfspace, margin_hardy_mazya, pf2_grid,
    Quadrature2d, HARDY_MAZYA_WINDOWS,
};
use crate::mode_reduction::{
    check_1d_lemmas, check_estimate1, check_estimate2, check_ph1, check_trans1, default_grid,
    mode_coefficient,
};
use crate::radial::{QuadratureSpec, RadialTestFunction};
use crate::suite;
use crate::verifier::{
    margin_general, margin_poincare_hardy, margin_rellich, margin_thm21, margin_yang,
    sharpness_probe, SharpnessCase, DEFAULT_TOL,
};

/// Directory for output files when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "HYPERBOLIC_HARDY_OUTPUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "hyperbolic-hardy",
    version,
    about = "Constants and numerical checks for Poincaré–Hardy inequalities on hyperbolic space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact constant table of the order-k inequality with remainder order l.
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Inequality margins on a named suite of radial functions.
    Verify {
        #[arg(long, value_enum)]
        case: VerifyCase,
        /// One or more dimensions; defaults to 5, or 2k+1 for `general` when that is larger.
        #[arg(long = "N", num_args = 1..)]
        n: Vec<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        #[arg(long, default_value = "standard")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residuals of the mode-reduction identities on a radial suite.
    Identity {
        #[arg(long, value_enum)]
        which: IdentityKind,
        #[arg(long = "N", default_value_t = 5)]
        n: u32,
        /// spherical-harmonic degree (estimates only)
        #[arg(long = "n", default_value_t = 0)]
        mode: u32,
        #[arg(long, default_value = "standard")]
        suite: String,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Quotient table along a family approaching a sharp constant.
    Sharpness {
        #[arg(long, value_enum)]
        case: SharpnessKind,
        #[arg(long = "N", default_value_t = 5)]
        n: u32,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Half-space inequalities and transform identities on separable functions.
    Halfspace {
        #[arg(long, value_enum)]
        which: HalfspaceKind,
        #[arg(long = "N", default_value_t = 5)]
        n: u32,
        /// exponents of u = y^α v (pf1, pf2); defaults to (N−2)/2 and (N−4)/2
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value = "standard")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum VerifyCase {
    Thm21,
    Rellich,
    Poincare,
    Yang,
    General,
    Hardy1d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum IdentityKind {
    Ph1,
    Trans1,
    Estimate1,
    Estimate2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SharpnessKind {
    PoincareK1,
    Thm21R2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum HalfspaceKind {
    Rellich1,
    Rellich2,
    HardyMazya,
    Pf1,
    Pf2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout (or the directory named by HYPERBOLIC_HARDY_OUTPUT_DIR).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Overrides of the quadrature settings; unset fields keep the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct QuadArgs {
    /// panels on the first pass
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_panels: Option<usize>,
}

impl QuadArgs {
    pub fn radial(&self) -> QuadratureSpec {
        let mut s = QuadratureSpec::default();
        s.panels = self.panels.unwrap_or(s.panels);
        s.nodes_per_panel = self.nodes.unwrap_or(s.nodes_per_panel);
        s.rel_tol = self.rel_tol.unwrap_or(s.rel_tol);
        s.max_panels = self.max_panels.unwrap_or(s.max_panels);
        s
    }

    pub fn planar(&self) -> Quadrature2d {
        let mut s = Quadrature2d::default();
        s.panels = self.panels.unwrap_or(s.panels);
        s.nodes_per_panel = self.nodes.unwrap_or(s.nodes_per_panel);
        s.rel_tol = self.rel_tol.unwrap_or(s.rel_tol);
        s.max_panels = self.max_panels.unwrap_or(s.max_panels);
        s
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Reports go to stdout or a file; diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((stem, run, out)) => match write_run(&run, &stem, &out) {
            Ok(()) => run.exit_code(),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_NUMERICAL
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => EXIT_USAGE,
        Error::Quadrature(_) | Error::Internal(_) | Error::Manifest(_) => EXIT_NUMERICAL,
    }
}

/// Runs one parsed command without writing anything.
/// Returns the run, the default file stem and the output settings.
pub fn execute(command: &Command) -> crate::Result<(String, Run, OutputArgs)> {
    match command {
        Command::Constants { k, l, n, out } => {
            let case = CaseSpec::new(*k, *l, *n)?;
            let table = constant_table(&case)?;
            let stem = format!("constants-k{k}-l{l}-N{n}");
            Ok((
                stem,
                Run::new("constants", vec![Report::Constants(table)]),
                out.clone(),
            ))
        }
        Command::Verify {
            case,
            n,
            k,
            l,
            beta,
            suite: name,
            tol,
            quad,
            out,
        } => {
            let spec = quad.radial();
            let members = suite::radial_suite(name)?;
            let dims = if n.is_empty() {
                vec![match case {
                    VerifyCase::General => (2 * k.unwrap_or(1) + 1).max(5),
                    _ => 5,
                }]
            } else {
                n.clone()
            };
            let mut reports = Vec::new();
            for &dim in &dims {
                match case {
                    VerifyCase::Hardy1d => {
                        reports.extend(
                            check_1d_lemmas(&members, dim, &spec, *tol)?
                                .into_iter()
                                .map(Report::Margin),
                        );
                        continue;
                    }
                    VerifyCase::General => {
                        let (Some(k), Some(l)) = (k, l) else {
                            return Err(Error::Domain("case general requires --k and --l".into()));
                        };
                        let cs = CaseSpec::new(*k, *l, dim)?;
                        for u in &members {
                            reports.push(Report::Margin(margin_general(&cs, u, &spec, *tol)?));
                        }
                        continue;
                    }
                    _ => {}
                }
                let f = |u: &RadialTestFunction| match case {
                    VerifyCase::Thm21 => margin_thm21(u, dim, &spec, *tol),
                    VerifyCase::Rellich => margin_rellich(u, dim, &spec, *tol),
                    VerifyCase::Poincare => margin_poincare_hardy(u, dim, &spec, *tol),
                    VerifyCase::Yang => margin_yang(u, dim, *beta, &spec, *tol),
                    VerifyCase::General | VerifyCase::Hardy1d => unreachable!(),
                };
                for u in &members {
                    reports.push(Report::Margin(f(u)?));
                }
            }
            let label = case
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            let dims_label = dims
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join("-");
            let stem = format!("verify-{label}-N{dims_label}-{name}");
            Ok((stem, Run::with_suite("verify", reports), out.clone()))
        }
        Command::Identity {
            which,
            n,
            mode,
            suite: name,
            quad,
            out,
        } => {
            let spec = quad.radial();
            let members = suite::radial_suite(name)?;
            let mut reports = Vec::with_capacity(members.len());
            for u in &members {
                let r = match which {
                    IdentityKind::Ph1 => check_ph1(u, *n, &default_grid(u))?,
                    IdentityKind::Trans1 => check_trans1(u, *n, &default_grid(u))?,
                    IdentityKind::Estimate1 => {
                        check_estimate1(&mode_coefficient(u, *n), *mode, *n, &spec)?
                    }
                    IdentityKind::Estimate2 => {
                        check_estimate2(&mode_coefficient(u, *n), *mode, *n, &spec)?
                    }
                };
                reports.push(Report::Identity(r));
            }
            let label = which
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            let stem = format!("identity-{label}-N{n}-{name}");
            Ok((stem, Run::with_suite("identity", reports), out.clone()))
        }
        Command::Sharpness { case, n, quad, out } => {
            let case = match case {
                SharpnessKind::PoincareK1 => SharpnessCase::PoincareK1,
                SharpnessKind::Thm21R2 => SharpnessCase::Thm21R2,
            };
            let table = sharpness_probe(case, &case.default_family(*n), *n, &quad.radial())?;
            let stem = format!("sharpness-{}-N{n}", case.label());
            Ok((
                stem,
                Run::new("sharpness", vec![Report::Sharpness(table)]),
                out.clone(),
            ))
        }
        Command::Halfspace {
            which,
            n,
            alpha,
            suite: name,
            tol,
            quad,
            out,
        } => {
            let spec = quad.planar();
            let members = suite::separable_suite(name)?;
            let nf = *n as f64;
            let alphas = if alpha.is_empty() {
                vec![(nf - 2.0) / 2.0, (nf - 4.0) / 2.0]
            } else {
                alpha.clone()
            };
            let mut reports = Vec::new();
            for v in &members {
                match which {
                    HalfspaceKind::Rellich1 => reports.push(Report::Margin(margin_halfspace(
                        HalfspaceVariant::Rellich1,
                        v,
                        *n,
                        &spec,
                        *tol,
                    )?)),
                    HalfspaceKind::Rellich2 => reports.push(Report::Margin(margin_halfspace(
                        HalfspaceVariant::Rellich2,
                        v,
                        *n,
                        &spec,
                        *tol,
                    )?)),
                    HalfspaceKind::HardyMazya => {
                        reports.push(Report::Margin(margin_hardy_mazya(v, *n, &spec, *tol)?))
                    }
                    HalfspaceKind::Pf1 => {
                        for &a in &alphas {
                            reports.push(Report::Identity(check_pf1(v, a, *n, &spec)?));
                        }
                    }
                    HalfspaceKind::Pf2 => {
                        for &a in &alphas {
                            reports.push(Report::Identity(check_pf2(v, a, *n, &pf2_grid(v))?));
                        }
                    }
                }
            }
            if *which == HalfspaceKind::HardyMazya {
                reports.push(Report::HardyMazya {
                    n: *n,
                    rows: hardy_mazya_table(*n, &HARDY_MAZYA_WINDOWS, &spec)?,
                });
            }
            let label = which
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            let stem = format!("halfspace-{label}-N{n}-{name}");
            Ok((stem, Run::with_suite("halfspace", reports), out.clone()))
        }
    }
}

fn write_run(run: &Run, stem: &str, out: &OutputArgs) -> std::io::Result<()> {
    let body = emit::render(run, out.format)?;
    let path = match (&out.output, std::env::var_os(OUTPUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) if !dir.is_empty() => {
            let dir = PathBuf::from(dir);
            std::fs::create_dir_all(&dir)?;
            Some(dir.join(format!("{}.{}", stem, out.format.extension())))
        }
        _ => None,
    };
    match path {
        Some(p) => {
            std::fs::write(&p, body)?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
