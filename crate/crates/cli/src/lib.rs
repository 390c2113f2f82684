//! The `wavefront` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod config;
pub mod emit;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, files or inputs; exit code 2.
    #[error("{0}")]
    Validation(String),
    /// A failure inside the computation; exit code 1.
    #[error("{}: {}", .0.name(), .0)]
    Numerical(wavefront_core::Error),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) | Self::Io(_) => 1,
        }
    }

    /// Errors from parsing user-supplied text are validation errors.
    pub(crate) fn input(e: wavefront_core::Error) -> Self {
        Self::Validation(format!("{}: {e}", e.name()))
    }
}

impl From<wavefront_core::Error> for CliError {
    fn from(e: wavefront_core::Error) -> Self {
        Self::Numerical(e)
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Sampling density (grid points per axis, curve samples or strips; see the subcommand's defaults)
    #[arg(long, global = true)]
    pub seed_density: Option<usize>,
    /// Numerical tolerance (meaning and default listed per subcommand)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// TOML file supplying values for any flag; flags on the command line win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the points as CSV
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Write the curves as SVG
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// SVG viewport `xmin:xmax:ymin:ymax` (fitted to the data by default)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub viewport: Option<String>,
}

/// Where the generating family comes from.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family file (TOML with k, n, expr and optional domain, seeds, base)
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Built-in family: fold, cusp, swallowtail, hyperbolic_umbilic, elliptic_umbilic
    #[arg(long)]
    pub catalog: Option<String>,
    /// Value of x3 for families with three space variables (default: 5% of the range above its middle)
    #[arg(long, allow_negative_numbers = true)]
    pub x3: Option<f64>,
    /// Arclength step of the curve tracer [default: 0.02]
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// circle, ellipse or parabola
    #[arg(long)]
    pub curve: Option<String>,
    /// Radius (circle), first semi-axis (ellipse) or coefficient of y = a x^2 (parabola) [default: 1, 2, 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Second semi-axis of the ellipse [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Parameter half-width of the parabola [default: 2]
    #[arg(long)]
    pub half_width: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Morse-family, graph-like and non-degeneracy conditions
    #[command(after_help = "Defaults: --seed-density 12 (x-grid points per axis), --tol 1e-8 (critical-point residual)")]
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Trace the momentary front F = t
    #[command(after_help = "Defaults: --seed-density 40 (x-grid points per axis), --tol 1e-8 (residual of emitted points)")]
    Front {
        #[command(flatten)]
        family: FamilyArgs,
        /// Level t
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Trace momentary fronts over a range of levels
    #[command(after_help = "Defaults: --seed-density 40 (x-grid points per axis), --tol 1e-8 (residual of emitted points)")]
    BigFront {
        #[command(flatten)]
        family: FamilyArgs,
        /// Levels lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Trace the caustic
    #[command(after_help = "Defaults: --seed-density 40 (x-grid points per axis), --tol 1e-8 (residual of emitted points)")]
    Caustic {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Find Maxwell points (two critical points with equal values)
    #[command(after_help = "Defaults: --seed-density 40 (x-grid points per axis), --tol 1e-8 (residual of emitted points)")]
    Maxwell {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Caustic, Maxwell and delta components together
    #[command(after_help = "Defaults: --seed-density 40 (x-grid points per axis), --tol 1e-6 (delta-set threshold)")]
    Discriminant {
        #[command(flatten)]
        family: FamilyArgs,
        /// Levels lo:hi:step of the fronts searched for delta points
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Evolute of a plane curve
    #[command(after_help = "Defaults: --seed-density 2000 (curve samples), --tol 1e-8 (criticality of emitted points)")]
    Evolute {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Parallels of a plane curve, with the evolute
    #[command(after_help = "Defaults: --seed-density 2000 (curve samples), --tol 1e-8 (criticality of emitted points)")]
    Parallels {
        #[command(flatten)]
        curve: CurveArgs,
        /// Offsets lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Characteristics of the inviscid Burgers equation
    #[command(after_help = "Defaults: --seed-density 400 (strips), --tol 1e-6 (breaking-time accuracy), --t 0:1:0.001")]
    Burgers {
        /// Times lo:hi:step; the step is the RK4 step
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Print the breaking time
        #[arg(long)]
        report_breaking: bool,
        /// Start from -sin x instead of sin x
        #[arg(long)]
        negate: bool,
        /// Count the branches over `x,t`
        #[arg(long, allow_hyphen_values = true)]
        count_at: Option<String>,
        /// Write the (x, t, y) surface as CSV
        #[arg(long)]
        csv3d: Option<PathBuf>,
    },
    /// Fronts and discriminant of a normal form of an integral diagram
    #[command(after_help = "Defaults: --seed-density 41 (lines per axis), --tol 1e-10 (level residual), --t -1:1:0.1")]
    OdeGallery {
        /// Germ number, 1 to 6
        #[arg(long)]
        germ: Option<usize>,
        /// Levels lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Functional modulus in v1, v2, or 0
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Stability and determinacy of a germ with an unfolding
    #[command(after_help = "Defaults: --jet 2*deg(f), --tol 1e-8 (rank threshold); --seed-density is not used")]
    Versal {
        /// Germ f in q1..qk
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Initial velocities dF/dx_j, separated by `;`
        #[arg(long, allow_hyphen_values = true)]
        dfdx: Option<String>,
        /// Jet degree
        #[arg(long)]
        jet: Option<u32>,
        /// Number of q variables (inferred from the expressions by default)
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Debug, Parser)]
#[command(name = "wavefront", version, about = "Momentary fronts, caustics and discriminants of generating families")]
pub struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Runs the tool on `argv`, writing reports to `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let top = match Cli::try_parse_from(argv) {
        Ok(t) => t,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match commands::dispatch(top.command, &top.common, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
