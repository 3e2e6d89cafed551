//! Signal files, scalogram matrices and reports.
//!
//! Every output is staged in a temporary file next to its destination and
//! renamed into place only after all outputs of a command are ready.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use circlet_core::circle_cwt::AdmissibilityReport;
use circlet_core::{CircleGrid, CircleSignal, LineGrid, LineSignal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

/// Relative tolerance when matching file coordinates to the implied grid.
const COORD_TOLERANCE: f64 = 1e-9;

/// Files written together or not at all.
#[derive(Default)]
pub struct Staged {
    files: Vec<(NamedTempFile, PathBuf)>,
}

impl Staged {
    pub fn add(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = NamedTempFile::new_in(&dir).with_context(|| format!("cannot stage {}", path.display()))?;
        tmp.write_all(contents)?;
        tmp.flush()?;
        self.files.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn add_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.add(path, text.as_bytes())
    }

    pub fn commit(self) -> Result<()> {
        for (tmp, path) in self.files {
            tmp.persist(&path).map_err(|e| anyhow!("cannot write {}: {}", path.display(), e.error))?;
        }
        Ok(())
    }
}

/// `path` with `suffix` appended to the file name (`out` + `.re.csv`).
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Circle,
    Line,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalMeta {
    pub kind: GridKind,
    pub n_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

/// Samples read from a signal file, validated against its sidecar.
pub struct SignalFile {
    pub meta: SignalMeta,
    pub coords: Vec<f64>,
    pub values: Vec<Complex64>,
}

fn parse_field(field: Option<&str>, line: u64, name: &str) -> Result<f64> {
    let raw = field.ok_or_else(|| anyhow!("line {line}: missing `{name}` column"))?;
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| anyhow!("line {line}: `{name}` is not a number: {raw:?}"))?;
    if !v.is_finite() {
        bail!("line {line}: `{name}` is not finite");
    }
    Ok(v)
}

pub fn read_signal(path: &Path) -> Result<SignalFile> {
    let meta_path = sidecar(path);
    let meta_text =
        fs::read_to_string(&meta_path).with_context(|| format!("cannot read metadata {}", meta_path.display()))?;
    let meta: SignalMeta =
        serde_json::from_str(&meta_text).with_context(|| format!("invalid metadata {}", meta_path.display()))?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let headers = reader.headers().with_context(|| format!("{}: line 1", path.display()))?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let has_im = match names.as_slice() {
        ["coord", "re"] => false,
        ["coord", "re", "im"] => true,
        _ => bail!("{}: line 1: header must be `coord,re` or `coord,re,im`", path.display()),
    };

    let mut coords = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            anyhow!("{}: line {line}: {e}", path.display())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let x = parse_field(record.get(0), line, "coord").map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let re = parse_field(record.get(1), line, "re").map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let im = if has_im {
            parse_field(record.get(2), line, "im").map_err(|e| anyhow!("{}: {e}", path.display()))?
        } else {
            0.0
        };
        if let Some(&prev) = coords.last() {
            if x <= prev {
                bail!("{}: line {line}: coordinates must be strictly increasing", path.display());
            }
        }
        coords.push(x);
        values.push(Complex64::new(re, im));
    }
    if coords.len() != meta.n_samples {
        bail!(
            "{}: {} samples but metadata declares {}",
            path.display(),
            coords.len(),
            meta.n_samples
        );
    }
    Ok(SignalFile { meta, coords, values })
}

fn check_coords(coords: &[f64], expected: impl Iterator<Item = f64>, scale: f64, path: &Path) -> Result<()> {
    for (j, (x, e)) in coords.iter().zip(expected).enumerate() {
        if (x - e).abs() > COORD_TOLERANCE * scale {
            bail!(
                "{}: line {}: coordinate {x} does not match the grid node {e}",
                path.display(),
                j + 2
            );
        }
    }
    Ok(())
}

pub fn read_circle_signal(path: &Path) -> Result<CircleSignal> {
    let file = read_signal(path)?;
    if file.meta.kind != GridKind::Circle {
        bail!("{}: expected a circle signal", path.display());
    }
    let grid = CircleGrid::new(file.meta.n_samples)?;
    check_coords(&file.coords, grid.nodes(), 1.0, path)?;
    Ok(CircleSignal::from_samples(grid, file.values)?)
}

pub fn read_line_signal(path: &Path) -> Result<LineSignal> {
    let file = read_signal(path)?;
    if file.meta.kind != GridKind::Line {
        bail!("{}: expected a line signal", path.display());
    }
    let [lo, hi] = file
        .meta
        .window
        .ok_or_else(|| anyhow!("{}: line signals need a `window`", path.display()))?;
    let grid = LineGrid::new(lo, hi, file.meta.n_samples)?;
    check_coords(&file.coords, grid.nodes(), (hi - lo).abs().max(1.0), path)?;
    Ok(LineSignal::from_samples(grid, file.values)?)
}

fn signal_csv(coords: impl Iterator<Item = f64>, values: &[Complex64]) -> Vec<u8> {
    let mut out = String::from("coord,re,im\n");
    for (x, v) in coords.zip(values) {
        out.push_str(&format!("{x},{},{}\n", v.re, v.im));
    }
    out.into_bytes()
}

pub fn stage_circle_signal(staged: &mut Staged, path: &Path, signal: &CircleSignal) -> Result<()> {
    let grid = signal.grid();
    staged.add(path, &signal_csv(grid.nodes(), signal.values()))?;
    staged.add_json(
        &sidecar(path),
        &SignalMeta {
            kind: GridKind::Circle,
            n_samples: grid.len(),
            window: None,
        },
    )
}

pub fn stage_line_signal(staged: &mut Staged, path: &Path, signal: &LineSignal) -> Result<()> {
    let grid = signal.grid();
    staged.add(path, &signal_csv(grid.nodes(), signal.values()))?;
    staged.add_json(
        &sidecar(path),
        &SignalMeta {
            kind: GridKind::Line,
            n_samples: grid.len(),
            window: Some([grid.x_lo(), grid.x_hi()]),
        },
    )
}

/// Real and imaginary parts as headerless CSV matrices, `width` columns per row.
pub fn matrix_csv(data: &[Complex64], width: usize) -> (Vec<u8>, Vec<u8>) {
    let mut re = String::new();
    let mut im = String::new();
    for row in data.chunks(width) {
        let r: Vec<String> = row.iter().map(|c| c.re.to_string()).collect();
        let i: Vec<String> = row.iter().map(|c| c.im.to_string()).collect();
        re.push_str(&r.join(","));
        re.push('\n');
        im.push_str(&i.join(","));
        im.push('\n');
    }
    (re.into_bytes(), im.into_bytes())
}

pub fn read_matrix(re_path: &Path, im_path: &Path, rows: usize, cols: usize) -> Result<Vec<Complex64>> {
    let read = |path: &Path| -> Result<Vec<f64>> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut out = Vec::with_capacity(rows * cols);
        let mut count = 0;
        for (i, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols {
                bail!("{}: line {}: expected {cols} columns, found {}", path.display(), i + 1, fields.len());
            }
            for f in fields {
                let v: f64 = f
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("{}: line {}: not a number: {f:?}", path.display(), i + 1))?;
                if !v.is_finite() {
                    bail!("{}: line {}: value is not finite", path.display(), i + 1);
                }
                out.push(v);
            }
            count += 1;
        }
        if count != rows {
            bail!("{}: expected {rows} rows, found {count}", path.display());
        }
        Ok(out)
    };
    let re = read(re_path)?;
    let im = read(im_path)?;
    Ok(re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub n: i64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncationFile {
    pub a_min: f64,
    pub a_max: f64,
    pub count: usize,
    pub tail_lo: f64,
    pub tail_hi: f64,
    pub peak: f64,
}

/// Serialized [`AdmissibilityReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub wavelet: String,
    pub n_max: usize,
    pub lambda: Vec<LambdaEntry>,
    pub sup: f64,
    pub inf: f64,
    pub weak_integral: ComplexValue,
    pub weak_decay_ok: bool,
    pub converged: bool,
    pub plateau: bool,
    pub admissible: bool,
    pub wavelet_norm: f64,
    pub truncation: TruncationFile,
}

impl ReportFile {
    pub fn from_report(wavelet: &str, r: &AdmissibilityReport) -> Self {
        Self {
            wavelet: wavelet.to_string(),
            n_max: r.n_max,
            lambda: r.modes().map(|(n, value)| LambdaEntry { n, value }).collect(),
            sup: r.sup,
            inf: r.inf,
            weak_integral: r.weak_integral.into(),
            weak_decay_ok: r.weak_decay_ok,
            converged: r.converged,
            plateau: r.plateau,
            admissible: r.admissible,
            wavelet_norm: r.wavelet_norm,
            truncation: TruncationFile {
                a_min: r.truncation.a_min,
                a_max: r.truncation.a_max,
                count: r.truncation.count,
                tail_lo: r.truncation.tail_lo,
                tail_hi: r.truncation.tail_hi,
                peak: r.truncation.peak,
            },
        }
    }

    pub fn to_report(&self) -> Result<AdmissibilityReport> {
        let m = self.n_max as i64;
        if self.lambda.len() != 2 * self.n_max + 1 || self.lambda.iter().zip(-m..=m).any(|(e, n)| e.n != n) {
            bail!("report must list Λ_n for n = -{m}..={m} in order");
        }
        let finite = self.lambda.iter().all(|e| e.value.is_finite() && e.value >= 0.0);
        if !finite || !self.sup.is_finite() || !self.inf.is_finite() {
            bail!("report contains non-finite or negative Λ values");
        }
        Ok(AdmissibilityReport {
            n_max: self.n_max,
            lambda: self.lambda.iter().map(|e| e.value).collect(),
            sup: self.sup,
            inf: self.inf,
            weak_integral: Complex64::new(self.weak_integral.re, self.weak_integral.im),
            weak_decay_ok: self.weak_decay_ok,
            converged: self.converged,
            plateau: self.plateau,
            admissible: self.admissible,
            truncation: circlet_core::circle_cwt::Truncation {
                a_min: self.truncation.a_min,
                a_max: self.truncation.a_max,
                count: self.truncation.count,
                tail_lo: self.truncation.tail_lo,
                tail_hi: self.truncation.tail_hi,
                peak: self.truncation.peak,
            },
            wavelet_norm: self.wavelet_norm,
        })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}
