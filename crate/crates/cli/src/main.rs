//! `circlet`: wavelet analysis on the circle and the line from the command line.
//!
//! Exit status: 0 on success, 2 when the computation completes with a negative
//! verdict (not admissible, not converging), 1 on any error.

mod builtins;
mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "circlet", version, about = "Continuous wavelet transforms on the circle and the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Analyzing wavelet on the circle: a signal file or a builtin name.
#[derive(Args, Clone)]
pub struct WaveletArgs {
    /// Circle signal file (CSV with a JSON sidecar).
    #[arg(long, conflicts_with = "builtin")]
    pub wavelet: Option<PathBuf>,
    /// `dog:α[:balanced]`, `gaussian`, `constant` or `mexican-hat`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Grid size for builtin wavelets.
    #[arg(long, default_value_t = 1024)]
    pub wavelet_samples: usize,
}

#[derive(Args, Clone)]
pub struct ScaleArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub scale_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub scale_max: f64,
    #[arg(long, default_value_t = 400)]
    pub scale_count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write a builtin signal to a CSV file with its metadata sidecar.
    Sample {
        /// Circle: `dog:α[:balanced]`, `gaussian`, `constant`, `mexican-hat`,
        /// `band-limited`, `mode:n`. Line (with --line): `chirp`, `bump`, `mexican-hat`.
        #[arg(long)]
        builtin: String,
        #[arg(long)]
        line: bool,
        #[arg(long, default_value_t = 1024)]
        n_samples: usize,
        /// Half-width of the line window.
        #[arg(long, default_value_t = 40.0)]
        half_width: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Λ_n sequence, weak condition and verdict for a circle wavelet.
    Admissibility {
        #[command(flatten)]
        wavelet: WaveletArgs,
        #[command(flatten)]
        scales: ScaleArgs,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scalogram of a circle signal.
    Cwt {
        #[arg(long)]
        signal: PathBuf,
        #[command(flatten)]
        wavelet: WaveletArgs,
        #[command(flatten)]
        scales: ScaleArgs,
        /// Angle grid size; defaults to the signal grid.
        #[arg(long)]
        n_angles: Option<usize>,
        /// Output stem: writes STEM.json, STEM.re.csv and STEM.im.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a circle signal from a scalogram.
    Icwt {
        /// Stem given to `cwt --out`.
        #[arg(long)]
        scalogram: PathBuf,
        #[command(flatten)]
        wavelet: WaveletArgs,
        /// Admissibility report of the same wavelet.
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Original signal; the relative error against it is printed.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Continuous frame bounds of a circle wavelet.
    Frame {
        #[command(flatten)]
        wavelet: WaveletArgs,
        #[command(flatten)]
        scales: ScaleArgs,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between the contracted circle action and the affine action, per radius.
    Euclid {
        /// Compactly supported line signal; defaults to a smooth bump.
        #[arg(long)]
        signal: Option<PathBuf>,
        #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long = "R-list", value_delimiter = ',', default_value = "10,100,1000")]
        r_list: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orthonormality and eigenvalue residuals of the Laguerre basis.
    Laguerre {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Laplace transform of the Laguerre basis against the half-plane basis.
    Laplace {
        #[arg(long)]
        k: f64,
        /// Highest mode checked.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Affine wavelet transform on the line with a round-trip check.
    LineCwt {
        /// Line signal file; defaults to a builtin.
        #[arg(long, conflicts_with = "builtin_signal")]
        signal: Option<PathBuf>,
        #[arg(long, default_value = "chirp")]
        builtin_signal: String,
        #[arg(long, default_value_t = 2048)]
        n_samples: usize,
        #[arg(long, default_value_t = 40.0)]
        half_width: f64,
        /// Line wavelet file; defaults to the Mexican hat.
        #[arg(long)]
        wavelet: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-3)]
        scale_min: f64,
        #[arg(long, default_value_t = 1e2)]
        scale_max: f64,
        #[arg(long, default_value_t = 300)]
        scale_count: usize,
        /// Output stem for the scalogram; only the JSON summary is printed otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized checks of the group law.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Whether a completed computation reached a positive verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Negative,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("CIRCLET_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("CIRCLET_THREADS must be a positive integer, got {raw:?}"))?;
        if n == 0 {
            anyhow::bail!("CIRCLET_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    configure_threads()?;
    match cli.command {
        Command::Sample {
            builtin,
            line,
            n_samples,
            half_width,
            out,
        } => commands::sample(&builtin, line, n_samples, half_width, &out),
        Command::Admissibility {
            wavelet,
            scales,
            n_max,
            out,
        } => commands::admissibility(&wavelet, &scales, n_max, out.as_deref()),
        Command::Cwt {
            signal,
            wavelet,
            scales,
            n_angles,
            out,
        } => commands::cwt(&signal, &wavelet, &scales, n_angles, &out),
        Command::Icwt {
            scalogram,
            wavelet,
            report,
            out,
            reference,
        } => commands::icwt(&scalogram, &wavelet, &report, &out, reference.as_deref()),
        Command::Frame {
            wavelet,
            scales,
            n_max,
            out,
        } => commands::frame(&wavelet, &scales, n_max, out.as_deref()),
        Command::Euclid {
            signal,
            b,
            a,
            r_list,
            out,
        } => commands::euclid(signal.as_deref(), b, a, &r_list, out.as_deref()),
        Command::Laguerre { k, n_max, out } => commands::laguerre(k, n_max, out.as_deref()),
        Command::Laplace { k, n, out } => commands::laplace(k, n, out.as_deref()),
        Command::LineCwt {
            signal,
            builtin_signal,
            n_samples,
            half_width,
            wavelet,
            scale_min,
            scale_max,
            scale_count,
            out,
        } => commands::line_cwt(commands::LineCwtArgs {
            signal: signal.as_deref(),
            builtin_signal: &builtin_signal,
            n_samples,
            half_width,
            wavelet: wavelet.as_deref(),
            scales: (scale_min, scale_max, scale_count),
            out: out.as_deref(),
        }),
        Command::Selftest { seed, count, out } => commands::selftest(seed, count, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
