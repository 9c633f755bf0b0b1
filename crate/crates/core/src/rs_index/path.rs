//! Sampled paths of symplectic matrices and the constructors that build them.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::matrix::{complex_structure, embed_block, symplectic_defect, SymplecticMatrix};
use super::{IndexError, Tolerances};

/// Smallest number of grid intervals a path may have.
pub const MIN_INTERVALS: usize = 8;

/// Tolerance for matching endpoints in [`catenate`] and [`iterate`].
const ENDPOINT_TOL: f64 = 1e-9;

/// Which one-sided limit to take at a breakpoint of a piecewise path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// How `ψ̇` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    /// Finite-difference slopes at the grid, cubic Hermite in between.
    FiniteDifference,
    /// Closed-form derivative of a model path.
    Analytic,
}

#[derive(Clone, Debug)]
enum Model {
    /// `exp(rate · t · J₀)` for `n = 1`.
    Rotation {
        rate: f64,
    },
    /// `diag(e^{rate·t}, e^{−rate·t})` for `n = 1`.
    Hyperbolic {
        rate: f64,
    },
    Constant {
        matrix: DMatrix<f64>,
    },
    /// `exp(t · generator) · base`.
    Flow {
        generator: DMatrix<f64>,
        base: DMatrix<f64>,
    },
}

#[derive(Clone, Debug)]
enum Source {
    Model(Model),
    Sampled {
        slopes: Vec<DMatrix<f64>>,
    },
    BlockDiag(Vec<SymplecticPath>),
    /// Pieces with their start times.
    Catenation(Vec<(f64, SymplecticPath)>),
    /// `exp(rate · t · J₀) · inner(t)`.
    Rotated {
        rate: f64,
        inner: Box<SymplecticPath>,
    },
}

/// A path `ψ : [0, T] → Sp(2n)` sampled on a grid.
#[derive(Clone, Debug)]
pub struct SymplecticPath {
    n: usize,
    grid: Vec<f64>,
    samples: Vec<DMatrix<f64>>,
    source: Source,
}

fn uniform_grid(duration: f64, intervals: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=intervals)
        .map(|j| duration * j as f64 / intervals as f64)
        .collect();
    grid[intervals] = duration;
    grid
}

fn check_grid(grid: &[f64]) -> Result<(), IndexError> {
    if grid.len() < MIN_INTERVALS + 1 {
        return Err(IndexError::TooFewSamples {
            samples: grid.len().saturating_sub(1),
            min: MIN_INTERVALS,
        });
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(IndexError::InvalidGrid("non-finite time".into()));
    }
    if grid[0].abs() > 1e-12 {
        return Err(IndexError::InvalidGrid(format!(
            "grid must start at 0, starts at {}",
            grid[0]
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(IndexError::InvalidGrid(format!(
            "times must increase strictly ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn check_model_args(duration: f64, intervals: usize) -> Result<(), IndexError> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(IndexError::InvalidParameter(format!(
            "duration must be positive, got {duration}"
        )));
    }
    if intervals < MIN_INTERVALS {
        return Err(IndexError::TooFewSamples {
            samples: intervals,
            min: MIN_INTERVALS,
        });
    }
    Ok(())
}

/// Three-point derivative estimates on a possibly non-uniform grid.
fn finite_difference_slopes(grid: &[f64], samples: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let k = grid.len() - 1;
    (0..=k)
        .map(|j| {
            let (i0, i1, i2) = if j == 0 {
                (0, 1, 2)
            } else if j == k {
                (k - 2, k - 1, k)
            } else {
                (j - 1, j, j + 1)
            };
            let (a, b, c) = (grid[i0], grid[i1], grid[i2]);
            let t = grid[j];
            // Derivatives of the Lagrange basis polynomials through a, b, c.
            let wa = (2.0 * t - b - c) / ((a - b) * (a - c));
            let wb = (2.0 * t - a - c) / ((b - a) * (b - c));
            let wc = (2.0 * t - a - b) / ((c - a) * (c - b));
            &samples[i0] * wa + &samples[i1] * wb + &samples[i2] * wc
        })
        .collect()
}

impl Model {
    fn half_dim(&self) -> usize {
        match self {
            Model::Rotation { .. } | Model::Hyperbolic { .. } => 1,
            Model::Constant { matrix } => matrix.nrows() / 2,
            Model::Flow { base, .. } => base.nrows() / 2,
        }
    }

    fn eval(&self, t: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        match self {
            Model::Rotation { rate } => {
                let (s, c) = (rate * t).sin_cos();
                (
                    DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
                    DMatrix::from_row_slice(2, 2, &[-s, -c, c, -s]) * *rate,
                )
            }
            Model::Hyperbolic { rate } => {
                let (p, m) = ((rate * t).exp(), (-rate * t).exp());
                (
                    DMatrix::from_row_slice(2, 2, &[p, 0.0, 0.0, m]),
                    DMatrix::from_row_slice(2, 2, &[rate * p, 0.0, 0.0, -rate * m]),
                )
            }
            Model::Constant { matrix } => (
                matrix.clone(),
                DMatrix::zeros(matrix.nrows(), matrix.ncols()),
            ),
            Model::Flow { generator, base } => {
                let value = (generator * t).exp() * base;
                let deriv = generator * &value;
                (value, deriv)
            }
        }
    }
}

impl SymplecticPath {
    fn from_source(n: usize, grid: Vec<f64>, source: Source, tol: f64) -> Result<Self, IndexError> {
        check_grid(&grid)?;
        let mut path = SymplecticPath {
            n,
            grid,
            samples: Vec::new(),
            source,
        };
        let last = path.grid.len() - 1;
        path.samples = path
            .grid
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let side = if j == last { Side::Left } else { Side::Right };
                path.value(t, side)
            })
            .collect();
        path.validate(tol)?;
        Ok(path)
    }

    fn validate(&self, tol: f64) -> Result<(), IndexError> {
        for (index, (m, &t)) in self.samples.iter().zip(&self.grid).enumerate() {
            let defect = symplectic_defect(m);
            if !(defect <= tol) {
                return Err(IndexError::NonSymplecticSample { index, t, defect });
            }
        }
        Ok(())
    }

    /// Builds a path from raw samples. Derivatives come from three-point
    /// finite differences and values between grid points from cubic
    /// Hermite interpolation.
    pub fn from_samples(
        grid: Vec<f64>,
        samples: Vec<SymplecticMatrix>,
    ) -> Result<Self, IndexError> {
        Self::from_samples_with_tol(grid, samples, Tolerances::default().symplectic)
    }

    pub fn from_samples_with_tol(
        grid: Vec<f64>,
        samples: Vec<SymplecticMatrix>,
        tol: f64,
    ) -> Result<Self, IndexError> {
        check_grid(&grid)?;
        if samples.len() != grid.len() {
            return Err(IndexError::DimensionMismatch {
                expected: format!("{} samples", grid.len()),
                found: format!("{} samples", samples.len()),
            });
        }
        let n = samples[0].half_dim();
        if let Some(bad) = samples.iter().find(|m| m.half_dim() != n) {
            return Err(IndexError::DimensionMismatch {
                expected: format!("half-dimension {n}"),
                found: format!("half-dimension {}", bad.half_dim()),
            });
        }
        let samples: Vec<DMatrix<f64>> = samples.into_iter().map(|m| m.into_entries()).collect();
        let slopes = finite_difference_slopes(&grid, &samples);
        let path = SymplecticPath {
            n,
            grid,
            samples,
            source: Source::Sampled { slopes },
        };
        path.validate(tol)?;
        Ok(path)
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Number of grid intervals `K`.
    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn duration(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.samples
    }

    pub fn sample(&self, j: usize) -> SymplecticMatrix {
        SymplecticMatrix::new(self.samples[j].clone()).expect("samples are square of even size")
    }

    pub fn start(&self) -> &DMatrix<f64> {
        &self.samples[0]
    }

    pub fn end(&self) -> &DMatrix<f64> {
        &self.samples[self.samples.len() - 1]
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        let all_analytic = match &self.source {
            Source::Model(_) => true,
            Source::Sampled { .. } => false,
            Source::BlockDiag(parts) => parts
                .iter()
                .all(|p| p.derivative_mode() == DerivativeMode::Analytic),
            Source::Catenation(pieces) => pieces
                .iter()
                .all(|(_, p)| p.derivative_mode() == DerivativeMode::Analytic),
            Source::Rotated { inner, .. } => inner.derivative_mode() == DerivativeMode::Analytic,
        };
        if all_analytic {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference
        }
    }

    /// `‖ψ(T) − ψ(0)‖_max`.
    pub fn loop_defect(&self) -> f64 {
        (self.end() - self.start()).amax()
    }

    /// Interior times where the path is only piecewise smooth, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.source {
            Source::Model(_) | Source::Sampled { .. } => {}
            Source::Rotated { inner, .. } => out.extend(inner.breakpoints()),
            Source::BlockDiag(parts) => {
                for p in parts {
                    out.extend(p.breakpoints());
                }
            }
            Source::Catenation(pieces) => {
                for (i, (offset, p)) in pieces.iter().enumerate() {
                    if i > 0 {
                        out.push(*offset);
                    }
                    out.extend(p.breakpoints().into_iter().map(|b| b + offset));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        let eps = 1e-12 * self.duration().max(1.0);
        out.dedup_by(|a, b| (*a - *b).abs() <= eps);
        out
    }

    pub fn value(&self, t: f64, side: Side) -> DMatrix<f64> {
        self.eval(t, side).0
    }

    pub fn derivative(&self, t: f64, side: Side) -> DMatrix<f64> {
        self.eval(t, side).1
    }

    /// `(ψ(t), ψ̇(t))`, with one-sided limits at breakpoints chosen by `side`.
    /// Times outside `[0, T]` are clamped.
    pub fn eval(&self, t: f64, side: Side) -> (DMatrix<f64>, DMatrix<f64>) {
        let t = t.clamp(0.0, self.duration());
        match &self.source {
            Source::Model(model) => model.eval(t),
            Source::Sampled { slopes } => self.hermite(slopes, t),
            Source::BlockDiag(parts) => {
                let dim = 2 * self.n;
                let mut value = DMatrix::zeros(dim, dim);
                let mut deriv = DMatrix::zeros(dim, dim);
                let mut offset = 0;
                for p in parts {
                    let (v, d) = p.eval(t, side);
                    embed_block(&mut value, &v, offset);
                    embed_block(&mut deriv, &d, offset);
                    offset += p.n;
                }
                (value, deriv)
            }
            Source::Catenation(pieces) => {
                let eps = 1e-12 * self.duration().max(1.0);
                let idx = match side {
                    Side::Right => pieces.iter().rposition(|(o, _)| *o <= t + eps).unwrap_or(0),
                    Side::Left => pieces.iter().rposition(|(o, _)| *o < t - eps).unwrap_or(0),
                };
                let (offset, piece) = &pieces[idx];
                piece.eval(t - offset, side)
            }
            Source::Rotated { rate, inner } => {
                let (v, d) = inner.eval(t, side);
                let j = complex_structure(self.n);
                let id = DMatrix::<f64>::identity(2 * self.n, 2 * self.n);
                let (s, c) = (rate * t).sin_cos();
                let r = id * c + &j * s;
                let value = &r * &v;
                let deriv = j * &value * *rate + r * d;
                (value, deriv)
            }
        }
    }

    fn hermite(&self, slopes: &[DMatrix<f64>], t: f64) -> (DMatrix<f64>, DMatrix<f64>) {
        let k = self.intervals();
        let i = self
            .grid
            .partition_point(|&g| g <= t)
            .saturating_sub(1)
            .min(k - 1);
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let value = &self.samples[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
            + &slopes[i] * (h * (s3 - 2.0 * s2 + s))
            + &self.samples[i + 1] * (3.0 * s2 - 2.0 * s3)
            + &slopes[i + 1] * (h * (s3 - s2));
        let deriv = &self.samples[i] * ((6.0 * s2 - 6.0 * s) / h)
            + &slopes[i] * (3.0 * s2 - 4.0 * s + 1.0)
            + &self.samples[i + 1] * ((6.0 * s - 6.0 * s2) / h)
            + &slopes[i + 1] * (3.0 * s2 - 2.0 * s);
        (value, deriv)
    }
}

fn model_path(model: Model, duration: f64, intervals: usize) -> Result<SymplecticPath, IndexError> {
    check_model_args(duration, intervals)?;
    let n = model.half_dim();
    SymplecticPath::from_source(
        n,
        uniform_grid(duration, intervals),
        Source::Model(model),
        Tolerances::default().symplectic,
    )
}

/// Planar rotation `ψ(t) = exp(rate · t · J₀)` on `[0, duration]`, sampled
/// on `samples` uniform intervals.
pub fn rotation_path(
    rate: f64,
    duration: f64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    model_path(Model::Rotation { rate }, duration, samples)
}

/// `ψ(t) = diag(e^{rate·t}, e^{−rate·t})` for `n = 1`.
pub fn hyperbolic_path(
    rate: f64,
    duration: f64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    model_path(Model::Hyperbolic { rate }, duration, samples)
}

/// The constant path at `matrix`.
pub fn constant_path(
    matrix: &SymplecticMatrix,
    duration: f64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    model_path(
        Model::Constant {
            matrix: matrix.entries().clone(),
        },
        duration,
        samples,
    )
}

/// `ψ(t) = exp(t · generator) · base`. The generator must be Hamiltonian
/// (of the form `J₀S` with `S` symmetric) for the samples to be symplectic.
pub fn flow_path(
    generator: &DMatrix<f64>,
    base: &SymplecticMatrix,
    duration: f64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    if generator.shape() != base.entries().shape() {
        return Err(IndexError::DimensionMismatch {
            expected: format!("{0}x{0} generator", 2 * base.half_dim()),
            found: format!("{}x{}", generator.nrows(), generator.ncols()),
        });
    }
    model_path(
        Model::Flow {
            generator: generator.clone(),
            base: base.entries().clone(),
        },
        duration,
        samples,
    )
}

/// Block-diagonal product of paths, with the blocks placed in the
/// `(x..., y...)` slots of the combined space in order.
///
/// Parts must have the same duration. When their grids differ and every
/// part has analytic derivatives, the product lives on the union of the
/// grids; otherwise differing grids are rejected with `IncompatibleGrids`.
pub fn block_diag_path(parts: &[SymplecticPath]) -> Result<SymplecticPath, IndexError> {
    let first = parts.first().ok_or(IndexError::EmptyInput)?;
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    let duration = first.duration();
    let eps = 1e-12 * duration.max(1.0);
    if parts.iter().any(|p| (p.duration() - duration).abs() > eps) {
        return Err(IndexError::IncompatibleGrids);
    }
    let same_grid = parts.iter().all(|p| {
        p.grid.len() == first.grid.len()
            && p.grid
                .iter()
                .zip(&first.grid)
                .all(|(a, b)| (a - b).abs() <= eps)
    });
    let grid = if same_grid {
        first.grid.clone()
    } else if parts
        .iter()
        .all(|p| p.derivative_mode() == DerivativeMode::Analytic)
    {
        let mut merged: Vec<f64> = parts.iter().flat_map(|p| p.grid.iter().copied()).collect();
        merged.sort_by(f64::total_cmp);
        merged.dedup_by(|a, b| (*a - *b).abs() <= eps);
        let last = merged.len() - 1;
        merged[last] = duration;
        merged
    } else {
        return Err(IndexError::IncompatibleGrids);
    };
    let n = parts.iter().map(|p| p.n).sum();
    SymplecticPath::from_source(
        n,
        grid,
        Source::BlockDiag(parts.to_vec()),
        Tolerances::default().symplectic,
    )
}

fn pieces_of(path: &SymplecticPath, shift: f64) -> Vec<(f64, SymplecticPath)> {
    match &path.source {
        Source::Catenation(pieces) => pieces.iter().map(|(o, p)| (o + shift, p.clone())).collect(),
        _ => vec![(shift, path.clone())],
    }
}

fn catenation(n: usize, pieces: Vec<(f64, SymplecticPath)>) -> SymplecticPath {
    let mut grid = Vec::new();
    let mut samples = Vec::new();
    for (i, (offset, p)) in pieces.iter().enumerate() {
        let skip = usize::from(i > 0);
        grid.extend(p.grid.iter().skip(skip).map(|t| t + offset));
        samples.extend(p.samples.iter().skip(skip).cloned());
    }
    SymplecticPath {
        n,
        grid,
        samples,
        source: Source::Catenation(pieces),
    }
}

/// `exp(rate · t · J₀) · ψ(t)` on the grid of `path`.
pub(crate) fn rotated(path: &SymplecticPath, rate: f64) -> Result<SymplecticPath, IndexError> {
    SymplecticPath::from_source(
        path.n,
        path.grid.clone(),
        Source::Rotated {
            rate,
            inner: Box::new(path.clone()),
        },
        Tolerances::default().symplectic,
    )
}

/// The path `p1` followed by `p2` on `[0, T₁ + T₂]`.
pub fn catenate(p1: &SymplecticPath, p2: &SymplecticPath) -> Result<SymplecticPath, IndexError> {
    if p1.n != p2.n {
        return Err(IndexError::DimensionMismatch {
            expected: format!("half-dimension {}", p1.n),
            found: format!("half-dimension {}", p2.n),
        });
    }
    let defect = (p1.end() - p2.start()).amax();
    if !(defect <= ENDPOINT_TOL) {
        return Err(IndexError::EndpointMismatch { defect });
    }
    let mut pieces = pieces_of(p1, 0.0);
    pieces.extend(pieces_of(p2, p1.duration()));
    Ok(catenation(p1.n, pieces))
}

/// The `m`-fold catenation of a loop with itself.
pub fn iterate(loop_path: &SymplecticPath, m: usize) -> Result<SymplecticPath, IndexError> {
    if m == 0 {
        return Err(IndexError::InvalidParameter(
            "cover count must be at least 1".into(),
        ));
    }
    let defect = loop_path.loop_defect();
    if !(defect <= ENDPOINT_TOL) {
        return Err(IndexError::NotALoop { defect });
    }
    if m == 1 {
        return Ok(loop_path.clone());
    }
    let period = loop_path.duration();
    let pieces = (0..m)
        .flat_map(|j| pieces_of(loop_path, j as f64 * period))
        .collect();
    Ok(catenation(loop_path.n, pieces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotation_samples_and_derivative() {
        let p = rotation_path(0.5, 2.0 * PI, 64).unwrap();
        assert_eq!(p.grid().len(), 65);
        assert_eq!(p.derivative_mode(), DerivativeMode::Analytic);
        assert!((p.end() + DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
        let d = p.derivative(0.0, Side::Right);
        assert!((d[(1, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hermite_interpolation_tracks_the_model() {
        let model = rotation_path(1.0, 2.0 * PI, 256).unwrap();
        let samples = model
            .grid()
            .iter()
            .map(|&t| SymplecticMatrix::rotation(t))
            .collect();
        let sampled = SymplecticPath::from_samples(model.grid().to_vec(), samples).unwrap();
        assert_eq!(sampled.derivative_mode(), DerivativeMode::FiniteDifference);
        for &t in &[0.0, 0.013, 1.0, 3.3, 2.0 * PI] {
            let (v, d) = sampled.eval(t, Side::Right);
            let (vm, dm) = model.eval(t, Side::Right);
            assert!((v - vm).amax() < 1e-6);
            assert!((d - dm).amax() < 1e-3);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            rotation_path(1.0, 1.0, 4),
            Err(IndexError::TooFewSamples { .. })
        ));
        assert!(rotation_path(1.0, 0.0, 16).is_err());
        let bad = vec![SymplecticMatrix::identity(1); 10];
        let grid = vec![0.0, 1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        assert!(matches!(
            SymplecticPath::from_samples(grid, bad),
            Err(IndexError::InvalidGrid(_))
        ));
    }

    #[test]
    fn non_symplectic_samples_are_rejected() {
        let grid: Vec<f64> = (0..=8).map(f64::from).collect();
        let mut samples = vec![SymplecticMatrix::identity(1); 9];
        samples[3] = SymplecticMatrix::from_row_major(1, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            SymplecticPath::from_samples(grid, samples),
            Err(IndexError::NonSymplecticSample { index: 3, .. })
        ));
    }

    #[test]
    fn block_diag_rules() {
        assert!(matches!(block_diag_path(&[]), Err(IndexError::EmptyInput)));
        let a = rotation_path(1.0, 2.0 * PI, 64).unwrap();
        let b = rotation_path(2.0, 2.0 * PI, 48).unwrap();
        let ab = block_diag_path(&[a.clone(), b]).unwrap();
        assert_eq!(ab.half_dim(), 2);
        // 64 and 48 intervals share every multiple of 2π/16.
        assert_eq!(ab.intervals(), 64 + 48 - 16);
        let single = block_diag_path(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.grid(), a.grid());
        let short = rotation_path(1.0, PI, 64).unwrap();
        assert!(matches!(
            block_diag_path(&[a, short]),
            Err(IndexError::IncompatibleGrids)
        ));
    }

    #[test]
    fn catenation_and_iteration() {
        let half = rotation_path(1.0, PI, 32).unwrap();
        let second = flow_path(
            &super::super::matrix::complex_structure(1),
            &SymplecticMatrix::new(half.end().clone()).unwrap(),
            PI,
            32,
        )
        .unwrap();
        let full = catenate(&half, &second).unwrap();
        assert!((full.duration() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(full.breakpoints().len(), 1);
        assert!(catenate(&second, &second).is_err());
        assert!(matches!(
            iterate(&half, 2),
            Err(IndexError::NotALoop { .. })
        ));
        let lp = rotation_path(1.0, 2.0 * PI, 16).unwrap();
        let three = iterate(&lp, 3).unwrap();
        assert_eq!(three.intervals(), 48);
        assert_eq!(three.breakpoints().len(), 2);
        let v = three.value(5.0 * PI, Side::Right);
        assert!((v + DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
    }
}
