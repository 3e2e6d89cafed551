//! One function per subcommand. Each returns the verdict; errors map to exit 1.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use circlet_core::circle_cwt::{
    analyze, frame_bounds, lambda_sequence, synthesize, Scalogram, ScaleGrid,
};
use circlet_core::circle_rep::Generator;
use circlet_core::discrete_series::{
    halfplane_basis, laguerre_function, laguerre_gram, laplace_transform, rplus_generators, HalfPlanePoint,
    LaguerreBasisSpec,
};
use circlet_core::euclid::{euclidean_limit_error, smooth_bump, ContractionParams};
use circlet_core::line_cwt::{line_admissibility, line_analyze, line_synthesize, mexican_hat, LineWavelet};
use circlet_core::sl2r::{compose, iwasawa_decompose, matrix};
use circlet_core::{CircleGrid, CircleSignal, GroupElement, LineGrid, LineSignal, LogGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builtins::{CircleBuiltin, LineBuiltin};
use crate::io::{self, ComplexValue, ReportFile, Staged};
use crate::{ScaleArgs, Verdict, WaveletArgs};

/// Gram residual accepted by `laguerre`.
const GRAM_TOLERANCE: f64 = 1e-10;
/// Eigenvalue residual accepted by `laguerre`, relative to the peak of `φ_n`.
const EIGEN_TOLERANCE: f64 = 1e-6;
/// Basis-mapping residual accepted by `laplace`.
const LAPLACE_MATCH_TOLERANCE: f64 = 1e-8;
/// Round-trip error above which `line-cwt` reports a negative verdict.
const ROUND_TRIP_TOLERANCE: f64 = 1e-2;
const ASSOCIATIVITY_TOLERANCE: f64 = 1e-9;
const IWASAWA_TOLERANCE: f64 = 1e-10;

/// Grid used for the eigenvalue check of the Laguerre functions.
const EIGEN_GRID: (f64, f64, usize) = (1e-3, 200.0, 4000);

/// Half-plane points for the Laplace check: `Re w ∈ [0.5, 3]`, `|Im w| ≤ 1.5`.
const LAPLACE_POINTS: [(f64, f64); 10] = [
    (0.5, 0.0),
    (0.5, 1.2),
    (0.8, -0.7),
    (1.0, 0.0),
    (1.0, 1.5),
    (1.5, -1.5),
    (2.0, 0.3),
    (2.2, -1.0),
    (2.7, 1.1),
    (3.0, -0.4),
];

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut staged = Staged::default();
            staged.add_json(path, value)?;
            staged.commit()
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut stdout, value)?;
            writeln!(stdout)?;
            Ok(())
        }
    }
}

fn scale_grid(args: &ScaleArgs) -> Result<ScaleGrid> {
    Ok(ScaleGrid::new(args.scale_min, args.scale_max, args.scale_count)?)
}

/// The wavelet and a label for reports.
fn load_wavelet(args: &WaveletArgs) -> Result<(CircleSignal, String)> {
    match (&args.wavelet, &args.builtin) {
        (Some(path), None) => Ok((io::read_circle_signal(path)?, path.display().to_string())),
        (None, Some(name)) => {
            let builtin: CircleBuiltin = name.parse()?;
            Ok((builtin.build(args.wavelet_samples)?, name.clone()))
        }
        (None, None) => bail!("give either --wavelet FILE or --builtin NAME"),
        (Some(_), Some(_)) => bail!("--wavelet and --builtin are exclusive"),
    }
}

pub fn sample(name: &str, line: bool, n_samples: usize, half_width: f64, out: &Path) -> Result<Verdict> {
    let mut staged = Staged::default();
    if line {
        let builtin: LineBuiltin = name.parse()?;
        let signal = builtin.build(LineGrid::symmetric(half_width, n_samples)?);
        io::stage_line_signal(&mut staged, out, &signal)?;
    } else {
        let builtin: CircleBuiltin = name.parse()?;
        io::stage_circle_signal(&mut staged, out, &builtin.build(n_samples)?)?;
    }
    staged.commit()?;
    Ok(Verdict::Pass)
}

pub fn admissibility(wavelet: &WaveletArgs, scales: &ScaleArgs, n_max: usize, out: Option<&Path>) -> Result<Verdict> {
    let (gamma, label) = load_wavelet(wavelet)?;
    let grid = scale_grid(scales)?;
    let report = lambda_sequence(&gamma, &grid, n_max)?;
    emit(&ReportFile::from_report(&label, &report), out)?;
    Ok(if report.admissible { Verdict::Pass } else { Verdict::Negative })
}

/// Sidecar of a scalogram: everything needed to rebuild the grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalogramMeta {
    pub wavelet: String,
    pub signal_samples: usize,
    pub n_angles: usize,
    pub n_max: usize,
    pub scale_min: f64,
    pub scale_max: f64,
    pub scale_count: usize,
}

pub fn cwt(
    signal: &Path,
    wavelet: &WaveletArgs,
    scales: &ScaleArgs,
    n_angles: Option<usize>,
    out: &Path,
) -> Result<Verdict> {
    let psi = io::read_circle_signal(signal)?;
    let (gamma, label) = load_wavelet(wavelet)?;
    let grid = scale_grid(scales)?;
    let n_angles = n_angles.unwrap_or(psi.grid().len());
    let scalogram = analyze(&psi, &gamma, &grid, n_angles)?;
    let meta = ScalogramMeta {
        wavelet: label,
        signal_samples: psi.grid().len(),
        n_angles,
        n_max: scalogram.n_max(),
        scale_min: grid.a_min(),
        scale_max: grid.a_max(),
        scale_count: grid.len(),
    };
    let (re, im) = io::matrix_csv(scalogram.data(), n_angles);
    let mut staged = Staged::default();
    staged.add_json(&io::with_suffix(out, ".json"), &meta)?;
    staged.add(&io::with_suffix(out, ".re.csv"), &re)?;
    staged.add(&io::with_suffix(out, ".im.csv"), &im)?;
    staged.commit()?;
    Ok(Verdict::Pass)
}

fn read_scalogram(stem: &Path) -> Result<(Scalogram, ScalogramMeta)> {
    let meta: ScalogramMeta = io::read_json(&io::with_suffix(stem, ".json"))?;
    let scales = ScaleGrid::new(meta.scale_min, meta.scale_max, meta.scale_count)?;
    let data = io::read_matrix(
        &io::with_suffix(stem, ".re.csv"),
        &io::with_suffix(stem, ".im.csv"),
        meta.scale_count,
        meta.n_angles,
    )?;
    let scalogram = Scalogram::from_parts(scales, CircleGrid::new(meta.n_angles)?, meta.n_max, data)?;
    Ok((scalogram, meta))
}

#[derive(Serialize)]
struct IcwtSummary {
    n_max: usize,
    skipped_modes: Vec<i64>,
    /// Against `--reference`, when given.
    relative_error: Option<f64>,
    /// Relative distance between the input scalogram and the re-analyzed output.
    consistency_residual: Option<f64>,
}

pub fn icwt(stem: &Path, wavelet: &WaveletArgs, report: &Path, out: &Path, reference: Option<&Path>) -> Result<Verdict> {
    let (scalogram, meta) = read_scalogram(stem)?;
    let (gamma, _) = load_wavelet(wavelet)?;
    let report: ReportFile = io::read_json(report)?;
    let report = report.to_report()?;
    let result = synthesize(&scalogram, &gamma, &report)?;
    let angles = scalogram.angles();

    let (relative_error, consistency_residual) = match reference {
        Some(path) => {
            let original = io::read_circle_signal(path)?;
            if original.grid().len() != meta.signal_samples {
                bail!(
                    "{}: {} samples, but the scalogram was computed from {}",
                    path.display(),
                    original.grid().len(),
                    meta.signal_samples
                );
            }
            let original = if original.grid().len() == angles.len() {
                original
            } else {
                original.resample(angles)
            };
            (Some(result.signal.relative_error(&original)?), None)
        }
        None => {
            let again = analyze(&result.signal, &gamma, scalogram.scales(), angles.len())?;
            let num: f64 = again
                .data()
                .iter()
                .zip(scalogram.data())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            let den: f64 = scalogram.data().iter().map(|v| v.norm_sqr()).sum();
            let residual = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
            (None, Some(residual))
        }
    };

    let mut staged = Staged::default();
    io::stage_circle_signal(&mut staged, out, &result.signal)?;
    staged.commit()?;
    emit(
        &IcwtSummary {
            n_max: result.n_max,
            skipped_modes: result.skipped_modes,
            relative_error,
            consistency_residual,
        },
        None,
    )?;
    Ok(Verdict::Pass)
}

#[derive(Serialize)]
struct FrameSummary {
    wavelet: String,
    c1: f64,
    c2: f64,
    tightness: f64,
    plateau: bool,
    admissible: bool,
    n_max: usize,
}

pub fn frame(wavelet: &WaveletArgs, scales: &ScaleArgs, n_max: usize, out: Option<&Path>) -> Result<Verdict> {
    let (gamma, label) = load_wavelet(wavelet)?;
    let report = lambda_sequence(&gamma, &scale_grid(scales)?, n_max)?;
    let bounds = frame_bounds(&report);
    if !bounds.plateau {
        eprintln!("warning: Λ_n has not levelled off by |n| = {n_max}; the bounds cover the tested modes only");
    }
    emit(
        &FrameSummary {
            wavelet: label,
            c1: bounds.c1,
            c2: bounds.c2,
            tightness: bounds.tightness(),
            plateau: bounds.plateau,
            admissible: report.admissible,
            n_max,
        },
        out,
    )?;
    Ok(if report.admissible { Verdict::Pass } else { Verdict::Negative })
}

/// Default signal for `euclid`: a bump on `(-1.2, 1.8)` sampled on `[-4, 4]`.
fn default_bump() -> Result<LineSignal> {
    Ok(LineSignal::from_real_fn(LineGrid::new(-4.0, 4.0, 512)?, smooth_bump(0.3, 1.5)))
}

#[derive(Serialize)]
struct EuclidRow {
    radius: f64,
    error: f64,
}

#[derive(Serialize)]
struct EuclidSummary {
    b: f64,
    a: f64,
    rows: Vec<EuclidRow>,
    strictly_decreasing: bool,
}

pub fn euclid(signal: Option<&Path>, b: f64, a: f64, radii: &[f64], out: Option<&Path>) -> Result<Verdict> {
    if radii.is_empty() {
        bail!("--R-list is empty");
    }
    let f = match signal {
        Some(path) => io::read_line_signal(path)?,
        None => default_bump()?,
    };
    let errors: Vec<f64> = radii
        .par_iter()
        .map(|&r| euclidean_limit_error(&f, b, a, ContractionParams::new(r)?))
        .collect::<circlet_core::Result<_>>()?;
    let strictly_decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let rows = radii
        .iter()
        .zip(&errors)
        .map(|(&radius, &error)| EuclidRow { radius, error })
        .collect();
    emit(
        &EuclidSummary {
            b,
            a,
            rows,
            strictly_decreasing,
        },
        out,
    )?;
    Ok(if strictly_decreasing { Verdict::Pass } else { Verdict::Negative })
}

#[derive(Serialize)]
struct LaguerreSummary {
    k: f64,
    n_max: usize,
    /// `⟨φ_n|φ_m⟩ - δ_nm`.
    gram_residual: Vec<Vec<f64>>,
    max_off_diagonal: f64,
    max_diagonal: f64,
    /// `max |-½𝒳_θ φ_n - (k+n) φ_n| / max |φ_n|` over the interior stencil.
    eigen_residuals: Vec<f64>,
}

/// Relative residual of `-½𝒳_θ φ_n = (k+n) φ_n` on the interior nodes.
pub fn eigen_residual(spec: &LaguerreBasisSpec, n: usize, grid: LogGrid) -> Result<f64> {
    let phi = laguerre_function(spec, n, grid)?;
    let applied = rplus_generators(Generator::Theta, &phi, spec)?;
    let eigen = spec.k() + n as f64;
    let peak = phi.values().iter().fold(0.0_f64, |m, v| m.max(v.norm()));
    let worst = applied
        .trusted
        .clone()
        .map(|j| (-0.5 * applied.function.values()[j] - eigen * phi.values()[j]).norm())
        .fold(0.0_f64, f64::max);
    Ok(worst / peak)
}

pub fn laguerre(k: f64, n_max: usize, out: Option<&Path>) -> Result<Verdict> {
    let spec = LaguerreBasisSpec::new(k, n_max)?;
    let gram = laguerre_gram(&spec);
    let mut max_off = 0.0_f64;
    let mut max_diag = 0.0_f64;
    let residual: Vec<Vec<f64>> = gram
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &g)| {
                    let r = if i == j { g - 1.0 } else { g };
                    if i == j {
                        max_diag = max_diag.max(r.abs());
                    } else {
                        max_off = max_off.max(r.abs());
                    }
                    r
                })
                .collect()
        })
        .collect();
    let (lo, hi, count) = EIGEN_GRID;
    let grid = LogGrid::new(lo, hi, count)?;
    let eigen: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|n| eigen_residual(&spec, n, grid))
        .collect::<Result<_>>()?;
    let pass = max_off.max(max_diag) <= GRAM_TOLERANCE && eigen.iter().all(|&e| e <= EIGEN_TOLERANCE);
    emit(
        &LaguerreSummary {
            k,
            n_max,
            gram_residual: residual,
            max_off_diagonal: max_off,
            max_diagonal: max_diag,
            eigen_residuals: eigen,
        },
        out,
    )?;
    Ok(if pass { Verdict::Pass } else { Verdict::Negative })
}

#[derive(Serialize)]
struct LaplaceRow {
    n: usize,
    w: ComplexValue,
    transform: Option<ComplexValue>,
    expected: ComplexValue,
    residual: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct LaplaceSummary {
    k: f64,
    n: usize,
    rows: Vec<LaplaceRow>,
    max_residual: f64,
    all_converged: bool,
}

pub fn laplace(k: f64, n: usize, out: Option<&Path>) -> Result<Verdict> {
    let spec = LaguerreBasisSpec::new(k, n)?;
    // The transform uses the closed form; the grid only carries it.
    let grid = LogGrid::new(1e-3, 200.0, 64)?;
    let mut rows = Vec::new();
    for m in 0..=n {
        let phi = laguerre_function(&spec, m, grid)?;
        for &(re, im) in &LAPLACE_POINTS {
            let w = HalfPlanePoint::new(Complex64::new(re, im))?;
            let expected = halfplane_basis(&spec, m, w)?;
            let (transform, residual, error) = match laplace_transform(&phi, &spec, w) {
                Ok(t) => (Some(t.into()), Some((t - expected).norm()), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            rows.push(LaplaceRow {
                n: m,
                w: w.w().into(),
                transform,
                expected: expected.into(),
                residual,
                error,
            });
        }
    }
    let all_converged = rows.iter().all(|r| r.residual.is_some());
    let max_residual = rows.iter().filter_map(|r| r.residual).fold(0.0_f64, f64::max);
    let pass = all_converged && max_residual <= LAPLACE_MATCH_TOLERANCE;
    emit(
        &LaplaceSummary {
            k,
            n,
            rows,
            max_residual,
            all_converged,
        },
        out,
    )?;
    Ok(if pass { Verdict::Pass } else { Verdict::Negative })
}

pub struct LineCwtArgs<'a> {
    pub signal: Option<&'a Path>,
    pub builtin_signal: &'a str,
    pub n_samples: usize,
    pub half_width: f64,
    pub wavelet: Option<&'a Path>,
    pub scales: (f64, f64, usize),
    pub out: Option<&'a Path>,
}

#[derive(Serialize)]
struct LineCwtSummary {
    c_gamma: f64,
    relative_error: f64,
    n_samples: usize,
    window: [f64; 2],
    scale_min: f64,
    scale_max: f64,
    scale_count: usize,
}

pub fn line_cwt(args: LineCwtArgs) -> Result<Verdict> {
    let f = match args.signal {
        Some(path) => io::read_line_signal(path)?,
        None => {
            let builtin: LineBuiltin = args.builtin_signal.parse()?;
            builtin.build(LineGrid::symmetric(args.half_width, args.n_samples)?)
        }
    };
    let grid = f.grid();
    let wavelet = match args.wavelet {
        Some(path) => {
            let w = io::read_line_signal(path)?;
            if w.grid() != grid {
                bail!("{}: wavelet grid differs from the signal grid", path.display());
            }
            LineWavelet::new(w)
        }
        None => mexican_hat(grid),
    };
    let c_gamma = line_admissibility(wavelet.signal()).context("wavelet is not admissible")?;
    let (lo, hi, count) = args.scales;
    let scales = ScaleGrid::new(lo, hi, count)?;
    let scalogram = line_analyze(&f, &wavelet, &scales)?;
    let back = line_synthesize(&scalogram, &wavelet, c_gamma)?;
    let relative_error = back.relative_error(&f)?;

    let mut staged = Staged::default();
    if let Some(stem) = args.out {
        let (re, im) = io::matrix_csv(scalogram.data(), grid.len());
        staged.add(&io::with_suffix(stem, ".re.csv"), &re)?;
        staged.add(&io::with_suffix(stem, ".im.csv"), &im)?;
    }
    let summary = LineCwtSummary {
        c_gamma,
        relative_error,
        n_samples: grid.len(),
        window: [grid.x_lo(), grid.x_hi()],
        scale_min: lo,
        scale_max: hi,
        scale_count: count,
    };
    match args.out {
        Some(stem) => {
            staged.add_json(&io::with_suffix(stem, ".json"), &summary)?;
            staged.commit()?;
        }
        None => emit(&summary, None)?,
    }
    Ok(if relative_error < ROUND_TRIP_TOLERANCE {
        Verdict::Pass
    } else {
        Verdict::Negative
    })
}

/// Worst residuals of the group law over random triples.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct GroupResiduals {
    pub associativity: f64,
    pub homomorphism: f64,
    pub iwasawa: f64,
}

/// `a` log-uniform on `[0.1, 10]`, `b` uniform on `[-5, 5]`, `θ` uniform on `(-π, π)`.
pub fn random_element(rng: &mut impl Rng) -> GroupElement {
    let a = 10f64.powf(rng.gen_range(-1.0..=1.0));
    let b = rng.gen_range(-5.0..=5.0);
    let theta = rng.gen_range(-PI..PI);
    GroupElement::new(a, b, theta).expect("parameters in range")
}

pub fn group_residuals(seed: u64, count: usize) -> Result<GroupResiduals> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = GroupResiduals::default();
    for _ in 0..count {
        let (g1, g2, g3) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
        let left = compose(&compose(&g1, &g2), &g3);
        let right = compose(&g1, &compose(&g2, &g3));
        // Compared as matrices so that θ near the branch cut cannot flip sign.
        worst.associativity = worst.associativity.max(matrix(&left).max_abs_diff(&matrix(&right)));
        let product = matrix(&g1) * matrix(&g2);
        worst.homomorphism = worst.homomorphism.max(matrix(&compose(&g1, &g2)).max_abs_diff(&product));
        let back = iwasawa_decompose(&matrix(&g1)).map_err(|e| anyhow!("{e}"))?;
        worst.iwasawa = worst.iwasawa.max(back.distance(&g1));
    }
    Ok(worst)
}

#[derive(Serialize)]
struct SelftestSummary {
    seed: u64,
    count: usize,
    residuals: GroupResiduals,
    pass: bool,
}

pub fn selftest(seed: u64, count: usize, out: Option<&Path>) -> Result<Verdict> {
    let residuals = group_residuals(seed, count)?;
    let pass = residuals.associativity < ASSOCIATIVITY_TOLERANCE
        && residuals.homomorphism < ASSOCIATIVITY_TOLERANCE
        && residuals.iwasawa < IWASAWA_TOLERANCE;
    emit(
        &SelftestSummary {
            seed,
            count,
            residuals,
            pass,
        },
        out,
    )?;
    Ok(if pass { Verdict::Pass } else { Verdict::Negative })
}
