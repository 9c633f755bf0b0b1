//! Numerical checks of the functions used to glue an open book to a
//! Boothby–Wang bundle.
//!
//! On the collar `t ∈ ]−1, 1[` the interpolating function `ρ` equals
//! `e^{t−C}` near `0` and `t(2 − t)` near `1`. The twisting profile
//! `f = 2π(ρ − ρ')/ρ²` is the one for which
//! `ρ(t)(2π + ∫₀ᵗ e^{s−C} f) = 2π e^{t−C}`, and the mapping torus of the
//! twist uses the shift `h = A − e^{t−C} f + ∫₀ᵗ e^{s−C} f`.
//!
//! Every check reports a residual; comparing it with a tolerance is left to
//! the caller.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

const TWO_PI: f64 = 2.0 * PI;
/// `ρ` is realised on `[−T_MAX, T_MAX]`.
pub const T_MAX: f64 = 0.99;
const BLEND_START: f64 = 0.25;
const BLEND_END: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("rho is not positive at t = {t} (value {value})")]
    NonPositiveRho { t: f64, value: f64 },
    #[error("mapping torus shift is not positive at t = {t} (value {value})")]
    NonPositiveShift { t: f64, value: f64 },
    #[error("tables are sampled on different grids")]
    GridMismatch,
    #[error("grid is not uniform: {0}")]
    NonUniformGrid(String),
    #[error("grid does not contain t = 0")]
    MissingOrigin,
    #[error("contact condition `{which}` fails at s = {s}, r = {r}")]
    ConditionViolated { s: f64, r: f64, which: String },
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    /// Collar constant `C > 0`.
    #[serde(rename = "C")]
    pub c: f64,
    /// Width of the binding region, `0 < η < min{C, 1}`.
    pub eta: f64,
    /// Number of grid intervals; even, so that `t = 0` is a node.
    pub grid_size: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            c: 1.0,
            eta: 0.5,
            grid_size: 10_000,
        }
    }
}

impl ProfileConfig {
    pub fn new(c: f64, eta: f64, grid_size: usize) -> Result<Self, ProfileError> {
        let cfg = ProfileConfig { c, eta, grid_size };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ProfileError::InvalidConfig(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.eta > 0.0 && self.eta < self.c.min(1.0)) {
            return Err(ProfileError::InvalidConfig(format!(
                "need 0 < eta < min(C, 1), got eta = {}",
                self.eta
            )));
        }
        if self.grid_size < 16 || !self.grid_size.is_multiple_of(2) {
            return Err(ProfileError::InvalidConfig(format!(
                "grid size must be even and at least 16, got {}",
                self.grid_size
            )));
        }
        Ok(())
    }
}

/// Samples of a function on a uniform grid, optionally with exact slopes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<f64>>,
}

impl FunctionTable {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        if grid.len() != values.len() {
            return Err(ProfileError::NonUniformGrid(format!(
                "{} grid points for {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 3 {
            return Err(ProfileError::NonUniformGrid(
                "need at least 3 points".into(),
            ));
        }
        let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(ProfileError::NonUniformGrid(
                "grid must be increasing".into(),
            ));
        }
        for (j, &t) in grid.iter().enumerate() {
            let expected = grid[0] + j as f64 * h;
            if (t - expected).abs() > 1e-9 * h.max(expected.abs()) {
                return Err(ProfileError::NonUniformGrid(format!(
                    "node {j} is at {t}, expected {expected}"
                )));
            }
        }
        Ok(FunctionTable {
            grid,
            values,
            slopes: None,
        })
    }

    /// Samples `f` at `intervals + 1` equally spaced points of `[a, b]`.
    pub fn sample(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Self {
        let grid = uniform_grid(a, b, intervals);
        let values = grid.iter().map(|&t| f(t)).collect();
        FunctionTable {
            grid,
            values,
            slopes: None,
        }
    }

    pub fn with_slopes(mut self, slopes: Vec<f64>) -> Self {
        assert_eq!(slopes.len(), self.values.len());
        self.slopes = Some(slopes);
        self
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.grid[self.len() - 1] - self.grid[0]) / (self.len() - 1) as f64
    }

    /// Central differences, second-order one-sided at the ends.
    pub fn central_difference(&self) -> Vec<f64> {
        differentiate(&self.values, self.step())
    }

    /// Exact slopes when known, central differences otherwise.
    pub fn derivative(&self) -> Vec<f64> {
        self.slopes
            .clone()
            .unwrap_or_else(|| self.central_difference())
    }

    /// Index of the node at `t = 0`.
    pub fn origin(&self) -> Result<usize, ProfileError> {
        let h = self.step();
        let j = (-self.grid[0] / h).round();
        if j < 0.0 || j as usize >= self.len() || self.grid[j as usize].abs() > 1e-9 * h {
            return Err(ProfileError::MissingOrigin);
        }
        Ok(j as usize)
    }

    fn same_grid(&self, other: &FunctionTable) -> Result<(), ProfileError> {
        let h = self.step();
        if self.len() != other.len()
            || self
                .grid
                .iter()
                .zip(&other.grid)
                .any(|(a, b)| (a - b).abs() > 1e-9 * h)
        {
            return Err(ProfileError::GridMismatch);
        }
        Ok(())
    }

    /// Two-column CSV with header `t,value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "value"]).expect("in-memory write");
        for (t, v) in self.grid.iter().zip(&self.values) {
            w.write_record([format!("{t:?}"), format!("{v:?}")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, ProfileError> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let (mut grid, mut values) = (Vec::new(), Vec::new());
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| ProfileError::Csv(e.to_string()))?;
            if rec.len() != 2 {
                return Err(ProfileError::Csv(format!(
                    "row {} has {} columns",
                    i + 1,
                    rec.len()
                )));
            }
            let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(p) => {
                    grid.push(p[0]);
                    values.push(p[1]);
                }
                Err(_) if i == 0 => continue,
                Err(e) => return Err(ProfileError::Csv(format!("row {}: {e}", i + 1))),
            }
        }
        FunctionTable::new(grid, values)
    }
}

fn uniform_grid(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    let h = (b - a) / intervals as f64;
    (0..=intervals).map(|j| a + j as f64 * h).collect()
}

fn differentiate(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    for j in 1..n - 1 {
        d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

/// `∫_{t_origin}^{t_j} v` at every node: composite Simpson over pairs of
/// intervals, and a three-point rule for the last interval at odd offsets.
pub fn cumulative_integral(v: &[f64], h: f64, origin: usize) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    let simpson = |a: usize, m: usize, b: usize| h / 3.0 * (v[a] + 4.0 * v[m] + v[b]);
    // ∫ over [x_a, x_b] with b = a ± 1, using the neighbour c on the far side of b,
    // or the one behind a when b is the last point.
    let single = |a: usize, b: usize, ahead: Option<usize>, behind: usize| match ahead {
        Some(c) => h / 12.0 * (5.0 * v[a] + 8.0 * v[b] - v[c]),
        None => h / 12.0 * (-v[behind] + 8.0 * v[a] + 5.0 * v[b]),
    };
    let mut j = origin;
    while j + 2 < n {
        out[j + 2] = out[j] + simpson(j, j + 1, j + 2);
        j += 2;
    }
    let mut j = origin;
    while j + 1 < n {
        let ahead = (j + 2 < n).then_some(j + 2);
        let behind = if j >= 1 { j - 1 } else { j + 2 };
        out[j + 1] = out[j] + single(j, j + 1, ahead, behind);
        j += 2;
    }
    let mut j = origin;
    while j >= 2 {
        out[j - 2] = out[j] - simpson(j - 2, j - 1, j);
        j -= 2;
    }
    let mut j = origin;
    while j >= 1 {
        let ahead = (j >= 2).then(|| j - 2);
        let behind = if j + 1 < n { j + 1 } else { j - 2 };
        out[j - 1] = out[j] - single(j, j - 1, ahead, behind);
        if j < 2 {
            break;
        }
        j -= 2;
    }
    out
}

/// The smoothstep `126u⁵ − 420u⁶ + 540u⁷ − 315u⁸ + 70u⁹` on `[0, 1]`,
/// clamped outside, and its derivative `630u⁴(1 − u)⁴`. Its first four
/// derivatives vanish at both ends, so `f` stays smooth enough for Simpson's
/// rule to keep its fourth order across the joins.
fn smoothstep(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else if u >= 1.0 {
        (1.0, 0.0)
    } else {
        let v = u * (1.0 - u);
        let p = u.powi(5) * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + 70.0 * u))));
        // Rounding can put p just above 1 near u = 1.
        (p.clamp(0.0, 1.0), 630.0 * v.powi(4))
    }
}

/// `ρ(t)` and `ρ'(t)` in closed form.
pub fn rho_exact(c: f64, t: f64) -> (f64, f64) {
    let a = (t - c).exp();
    let b = t * (2.0 - t);
    let db = 2.0 - 2.0 * t;
    if t <= BLEND_START {
        return (a, a);
    }
    if t >= BLEND_END {
        return (b, db);
    }
    let width = BLEND_END - BLEND_START;
    let (s, ds) = smoothstep((t - BLEND_START) / width);
    (a + s * (b - a), a + s * (db - a) + ds / width * (b - a))
}

/// `ρ` on `[−0.99, 0.99]` with exact slopes.
pub fn build_rho(cfg: &ProfileConfig) -> Result<FunctionTable, ProfileError> {
    cfg.validate()?;
    let grid = uniform_grid(-T_MAX, T_MAX, cfg.grid_size);
    let (values, slopes): (Vec<f64>, Vec<f64>) = grid.iter().map(|&t| rho_exact(cfg.c, t)).unzip();
    if let Some((j, &v)) = values.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(ProfileError::NonPositiveRho {
            t: grid[j],
            value: v,
        });
    }
    Ok(FunctionTable {
        grid,
        values,
        slopes: Some(slopes),
    })
}

/// `f = 2π(ρ − ρ')/ρ²`.
pub fn twisting_profile(rho: &FunctionTable) -> Result<FunctionTable, ProfileError> {
    let d = rho.derivative();
    let mut values = Vec::with_capacity(rho.len());
    for (j, (&r, &dr)) in rho.values.iter().zip(&d).enumerate() {
        if !(r > 0.0) {
            return Err(ProfileError::NonPositiveRho {
                t: rho.grid[j],
                value: r,
            });
        }
        values.push(TWO_PI * (r - dr) / (r * r));
    }
    Ok(FunctionTable {
        grid: rho.grid.clone(),
        values,
        slopes: None,
    })
}

/// Largest residual of a check, and where it occurs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_residual: f64,
    pub at_t: f64,
}

impl Residual {
    fn of(grid: &[f64], residuals: impl Iterator<Item = f64>) -> Self {
        let mut best = Residual {
            max_residual: 0.0,
            at_t: grid[0],
        };
        for (j, r) in residuals.enumerate() {
            if r > best.max_residual || r.is_nan() {
                best = Residual {
                    max_residual: r,
                    at_t: grid[j],
                };
            }
        }
        best
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

fn weighted_integral(f: &FunctionTable, c: f64) -> Result<Vec<f64>, ProfileError> {
    let origin = f.origin()?;
    let w: Vec<f64> = f
        .grid
        .iter()
        .zip(&f.values)
        .map(|(&t, &v)| (t - c).exp() * v)
        .collect();
    Ok(cumulative_integral(&w, f.step(), origin))
}

/// `max |ρ(t)(2π + ∫₀ᵗ e^{s−C} f) − 2π e^{t−C}|` over the grid.
pub fn verify_profile(
    rho: &FunctionTable,
    f: &FunctionTable,
    c: f64,
) -> Result<Residual, ProfileError> {
    rho.same_grid(f)?;
    let integral = weighted_integral(f, c)?;
    Ok(Residual::of(
        &rho.grid,
        rho.grid
            .iter()
            .zip(&rho.values)
            .zip(&integral)
            .map(|((&t, &r), &i)| (r * (TWO_PI + i) - TWO_PI * (t - c).exp()).abs()),
    ))
}

/// `h(t) = A − e^{t−C} f(t) + ∫₀ᵗ e^{s−C} f(s) ds`, required to be positive.
pub fn mapping_torus_shift(
    f: &FunctionTable,
    c: f64,
    a: f64,
) -> Result<FunctionTable, ProfileError> {
    let integral = weighted_integral(f, c)?;
    let values: Vec<f64> = f
        .grid
        .iter()
        .zip(&f.values)
        .zip(&integral)
        .map(|((&t, &v), &i)| a - (t - c).exp() * v + i)
        .collect();
    let (j, &min) = values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("table is non-empty");
    if !(min > 0.0) {
        return Err(ProfileError::NonPositiveShift {
            t: f.grid[j],
            value: min,
        });
    }
    Ok(FunctionTable {
        grid: f.grid.clone(),
        values,
        slopes: None,
    })
}

/// Residual of `d/dt[A − e^t f + ∫₀ᵗ e^s f] + e^t f' = 0`, with derivatives by
/// central differences and the integral by quadrature. The grid must contain 0.
pub fn exactness_check(f: &FunctionTable) -> Result<Residual, ProfileError> {
    let integral = weighted_integral(f, 0.0)?;
    exactness_residual(f, &integral)
}

/// As [`exactness_check`] with a caller-supplied `∫₀ᵗ e^s f`.
pub fn exactness_residual(f: &FunctionTable, integral: &[f64]) -> Result<Residual, ProfileError> {
    if integral.len() != f.len() {
        return Err(ProfileError::GridMismatch);
    }
    let h = f.step();
    let primitive: Vec<f64> = f
        .grid
        .iter()
        .zip(&f.values)
        .zip(integral)
        .map(|((&t, &v), &i)| TWO_PI - t.exp() * v + i)
        .collect();
    let dp = differentiate(&primitive, h);
    let df = differentiate(&f.values, h);
    Ok(Residual::of(
        &f.grid,
        f.grid
            .iter()
            .zip(dp.iter().zip(&df))
            .map(|(&t, (&p, &d))| (p + t.exp() * d).abs()),
    ))
}

/// Twisting profile near the binding: `0` below `0.2η`, `2π` above `0.8η`.
pub fn binding_profile(eta: f64, t: f64) -> f64 {
    TWO_PI * smoothstep((t - 0.2 * eta) / (0.6 * eta)).0
}

/// Coefficients of `h₁(r)θ + h₂(r)dφ` and their `r`-derivatives on a grid of `]0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactPair {
    pub r: Vec<f64>,
    pub h1: Vec<f64>,
    pub dh1: Vec<f64>,
    pub h2: Vec<f64>,
    pub dh2: Vec<f64>,
}

impl ContactPair {
    /// `(1 − s)·self + s·other`.
    pub fn interpolate(&self, other: &ContactPair, s: f64) -> ContactPair {
        let mix = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (1.0 - s) * x + s * y)
                .collect()
        };
        ContactPair {
            r: self.r.clone(),
            h1: mix(&self.h1, &other.h1),
            dh1: mix(&self.dh1, &other.dh1),
            h2: mix(&self.h2, &other.h2),
            dh2: mix(&self.dh2, &other.dh2),
        }
    }

    /// `h₁` and `h₂` as two CSV tables over `r`.
    pub fn tables(&self) -> (FunctionTable, FunctionTable) {
        let t = |v: &[f64], d: &[f64]| FunctionTable {
            grid: self.r.clone(),
            values: v.to_vec(),
            slopes: Some(d.to_vec()),
        };
        (t(&self.h1, &self.dh1), t(&self.h2, &self.dh2))
    }
}

/// Where the extension near `r = 1 − η` ends and the germ `(1 − r², r²)` begins.
fn extension_window(eta: f64) -> (f64, f64) {
    let hi = 1.0 - eta;
    (hi / 4.0, hi)
}

fn r_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|j| j as f64 / points as f64).collect()
}

/// `α₀`: the open book form near the binding, `h₁⁰ = e^{1−r−C}` and
/// `h₂⁰ = 1 + (1/2π)∫₀^{1−r} e^{s−C} f − e^{1−r−C}` for `r` near 1, extended
/// by a smoothstep to `(1 − r², r²)` near `r = 0`.
pub fn alpha0(cfg: &ProfileConfig) -> Result<ContactPair, ProfileError> {
    cfg.validate()?;
    let c = cfg.c;
    let eta = cfg.eta;
    // ∫₀ᵗ e^{s−C} f on a fine t-grid of [0, 1]; f is 2π past 0.8η, so the
    // integral becomes 2π(e^{t−C} − e^{0.8η−C}) + const there.
    let f = FunctionTable::sample(0.0, 1.0, cfg.grid_size, |t| binding_profile(eta, t));
    let integral = weighted_integral(&f, c)?;
    let h = f.step();
    let integral_at = |t: f64| -> f64 {
        let x = (t / h).clamp(0.0, cfg.grid_size as f64);
        let j = (x.floor() as usize).min(cfg.grid_size - 1);
        let frac = x - j as f64;
        // Cubic Hermite between nodes, with slopes e^{t−C} f from the integrand.
        let (t0, t1) = (f.grid[j], f.grid[j + 1]);
        let (m0, m1) = (
            (t0 - c).exp() * f.values[j],
            (t1 - c).exp() * f.values[j + 1],
        );
        let (p0, p1) = (integral[j], integral[j + 1]);
        let (h00, h10, h01, h11) = (
            2.0 * frac.powi(3) - 3.0 * frac.powi(2) + 1.0,
            frac.powi(3) - 2.0 * frac.powi(2) + frac,
            -2.0 * frac.powi(3) + 3.0 * frac.powi(2),
            frac.powi(3) - frac.powi(2),
        );
        h00 * p0 + h10 * h * m0 + h01 * p1 + h11 * h * m1
    };
    let k = 1.0 + integral_at(eta) / TWO_PI - (eta - c).exp();
    let (lo, hi) = extension_window(eta);
    let r = r_grid(cfg.grid_size);
    let mut pair = ContactPair {
        r: r.clone(),
        h1: Vec::new(),
        dh1: Vec::new(),
        h2: Vec::new(),
        dh2: Vec::new(),
    };
    for &r in &r {
        let t = 1.0 - r;
        let e = (t - c).exp();
        let (h1, dh1, h2, dh2) = if r > hi {
            let ft = binding_profile(eta, t);
            (
                e,
                -e,
                1.0 + integral_at(t) / TWO_PI - e,
                e * (1.0 - ft / TWO_PI),
            )
        } else {
            // σ rises from 0 at r = hi to 1 at r = lo.
            let (sig, dsig_du) = smoothstep((hi - r) / (hi - lo));
            let dsig = -dsig_du / (hi - lo);
            let (g1, dg1) = (1.0 - r * r, -2.0 * r);
            let (g2, dg2) = (r * r, 2.0 * r);
            (
                (1.0 - sig) * e + sig * g1,
                (1.0 - sig) * -e + sig * dg1 + dsig * (g1 - e),
                (1.0 - sig) * k + sig * g2,
                sig * dg2 + dsig * (g2 - k),
            )
        };
        pair.h1.push(h1);
        pair.dh1.push(dh1);
        pair.h2.push(h2);
        pair.dh2.push(dh2);
    }
    Ok(pair)
}

/// `α₁`: the Boothby–Wang form, `h₁¹ = ρ(1 − r)` and `h₂¹ = 1 − ρ(1 − r)`.
pub fn alpha1(cfg: &ProfileConfig) -> Result<ContactPair, ProfileError> {
    cfg.validate()?;
    let r = r_grid(cfg.grid_size);
    let mut pair = ContactPair {
        r: r.clone(),
        h1: Vec::new(),
        dh1: Vec::new(),
        h2: Vec::new(),
        dh2: Vec::new(),
    };
    for &r in &r {
        let (p, dp) = rho_exact(cfg.c, 1.0 - r);
        pair.h1.push(p);
        pair.dh1.push(-dp);
        pair.h2.push(1.0 - p);
        pair.dh2.push(dp);
    }
    Ok(pair)
}

/// Checks `h₁' < 0`, `h₁ > 0`, `h₂' ≥ 0`, `h₂ > 0` on the grid, and
/// `(h₁, h₂) = (1 − r², r²)` for `r ≤ germ_radius`.
pub fn verify_contact_pair(
    pair: &ContactPair,
    s: f64,
    germ_radius: f64,
) -> Result<(), ProfileError> {
    let fail = |r: f64, which: &str| ProfileError::ConditionViolated {
        s,
        r,
        which: which.to_string(),
    };
    for j in 0..pair.r.len() {
        let r = pair.r[j];
        if !(pair.dh1[j] < 0.0) {
            return Err(fail(r, "h1' < 0"));
        }
        if !(pair.h1[j] > 0.0) {
            return Err(fail(r, "h1 > 0"));
        }
        if !(pair.dh2[j] >= 0.0) {
            return Err(fail(r, "h2' >= 0"));
        }
        if !(pair.h2[j] > 0.0) {
            return Err(fail(r, "h2 > 0"));
        }
        if r <= germ_radius
            && ((pair.h1[j] - (1.0 - r * r)).abs() > 1e-12 || (pair.h2[j] - r * r).abs() > 1e-12)
        {
            return Err(fail(r, "h1 = 1 - r^2, h2 = r^2 near r = 0"));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BindingReport {
    pub s_samples: usize,
    pub r_points: usize,
    pub passed: bool,
}

/// Verifies the contact conditions along `(1 − s)α₀ + sα₁` for `s_samples`
/// equally spaced `s ∈ [0, 1]`.
pub fn binding_interpolation_check(
    cfg: &ProfileConfig,
    s_samples: usize,
) -> Result<BindingReport, ProfileError> {
    if s_samples < 11 {
        return Err(ProfileError::InvalidConfig(format!(
            "need at least 11 s-samples, got {s_samples}"
        )));
    }
    let a0 = alpha0(cfg)?;
    let a1 = alpha1(cfg)?;
    // Both forms equal the germ below this radius.
    let germ = extension_window(cfg.eta).0.min(1.0 - BLEND_END);
    for i in 0..s_samples {
        let s = i as f64 / (s_samples - 1) as f64;
        verify_contact_pair(&a0.interpolate(&a1, s), s, germ)?;
    }
    Ok(BindingReport {
        s_samples,
        r_points: a0.r.len(),
        passed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(grid: usize) -> ProfileConfig {
        ProfileConfig::new(1.0, 0.5, grid).unwrap()
    }

    #[test]
    fn rho_values() {
        let rho = build_rho(&cfg(10_000)).unwrap();
        let at = |t: f64| rho_exact(1.0, t).0;
        assert!((at(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((at(0.9) - 0.99).abs() < 1e-15);
        assert!((rho.values[rho.len() - 1] - 0.9999).abs() < 1e-12);
        assert!(rho.values.iter().all(|&v| v > 0.0));
        assert_eq!(rho.origin().unwrap(), 5000);
    }

    #[test]
    fn exact_slopes_match_differences() {
        let rho = build_rho(&cfg(4000)).unwrap();
        let exact = rho.derivative();
        let fd = rho.central_difference();
        let err = exact
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn profile_values() {
        let rho = build_rho(&cfg(10_000)).unwrap();
        let f = twisting_profile(&rho).unwrap();
        for (t, v) in f.grid.iter().zip(&f.values) {
            if *t <= BLEND_START {
                assert!(v.abs() < 1e-12);
            }
        }
        let t = 0.99;
        let closed = TWO_PI * (t * (2.0 - t) - (2.0 - 2.0 * t)) / (t * (2.0 - t)).powi(2);
        assert!((f.values[f.len() - 1] - closed).abs() < 1e-6);
        let one = FunctionTable::sample(-1.0, 1.0, 64, |_| 1.0).with_slopes(vec![0.0; 65]);
        assert!(twisting_profile(&one)
            .unwrap()
            .values
            .iter()
            .all(|v| (v - TWO_PI).abs() < 1e-15));
    }

    #[test]
    fn f_leaves_the_unit_range_in_the_blend_when_c_is_one() {
        // log ρ − t equals −1 on the collar and exceeds −1 near t = 1, so
        // ρ' > ρ somewhere in between and f < 0 there.
        let f = twisting_profile(&build_rho(&cfg(10_000)).unwrap()).unwrap();
        let mut min_blend = f64::INFINITY;
        for (t, v) in f.grid.iter().zip(&f.values) {
            if *t > BLEND_START && *t < BLEND_END {
                min_blend = min_blend.min(*v);
            } else {
                assert!((-1e-12..=TWO_PI + 1e-6).contains(v), "t = {t}, f = {v}");
            }
        }
        assert!(min_blend < 0.0);
    }

    #[test]
    fn profile_identity_holds() {
        let rho = build_rho(&cfg(10_000)).unwrap();
        let f = twisting_profile(&rho).unwrap();
        let res = verify_profile(&rho, &f, 1.0).unwrap();
        assert!(res.within(1e-8), "{res:?}");
        // Collar identity with f ≡ 0.
        let collar = FunctionTable::sample(-0.5, 0.5, 1000, |t| (t - 1.0).exp());
        let zero = FunctionTable::sample(-0.5, 0.5, 1000, |_| 0.0);
        assert!(verify_profile(&collar, &zero, 1.0).unwrap().max_residual < 1e-14);
    }

    #[test]
    fn profile_fault_is_detected() {
        let rho = build_rho(&cfg(10_000)).unwrap();
        let mut f = twisting_profile(&rho).unwrap();
        for (t, v) in f.grid.iter().zip(f.values.iter_mut()) {
            if (0.3..0.5).contains(t) {
                *v += 0.1;
            }
        }
        assert!(verify_profile(&rho, &f, 1.0).unwrap().max_residual > 1e-3);
    }

    #[test]
    fn shift_is_positive_for_a_equal_two_pi() {
        let rho = build_rho(&cfg(10_000)).unwrap();
        let f = twisting_profile(&rho).unwrap();
        let h = mapping_torus_shift(&f, 1.0, TWO_PI).unwrap();
        assert_eq!(h.values[h.origin().unwrap()], TWO_PI);
        // h = 2π e^{t−C} ρ'/ρ².
        for (j, &t) in h.grid.iter().enumerate() {
            let (p, dp) = rho_exact(1.0, t);
            assert!((h.values[j] - TWO_PI * (t - 1.0).exp() * dp / (p * p)).abs() < 1e-8);
        }
        match mapping_torus_shift(&f, 1.0, 0.0) {
            Err(ProfileError::NonPositiveShift { t, .. }) => assert!(t > 0.5),
            other => panic!("{other:?}"),
        }
        let zero = FunctionTable::sample(-0.5, 0.5, 100, |_| 0.0);
        assert!(mapping_torus_shift(&zero, 1.0, TWO_PI)
            .unwrap()
            .values
            .iter()
            .all(|&v| v == TWO_PI));
    }

    #[test]
    fn exactness() {
        let f = FunctionTable::sample(0.0, 1.0, 10_000, |t| (3.0 * t).sin() + t * t);
        assert!(exactness_check(&f).unwrap().within(1e-6));
        let c = FunctionTable::sample(0.0, 1.0, 1000, |_| 2.5);
        assert!(exactness_check(&c).unwrap().max_residual < 1e-9);
        let mut integral = weighted_integral(&f, 0.0).unwrap();
        for v in integral.iter_mut().skip(5000) {
            *v += 1e-3 * *v;
        }
        assert!(!exactness_residual(&f, &integral).unwrap().within(1e-6));
    }

    #[test]
    fn residual_orders() {
        let profile_res = |n: usize| {
            let rho = build_rho(&cfg(n)).unwrap();
            verify_profile(&rho, &twisting_profile(&rho).unwrap(), 1.0)
                .unwrap()
                .max_residual
        };
        let r1 = profile_res(1024) / profile_res(2048);
        assert!((10.0..24.0).contains(&r1), "Simpson ratio {r1}");
        let exact_res = |n: usize| {
            let f = FunctionTable::sample(0.0, 1.0, n, |t| (3.0 * t).sin() + t * t);
            exactness_check(&f).unwrap().max_residual
        };
        let r2 = exact_res(1024) / exact_res(2048);
        assert!((3.0..5.0).contains(&r2), "difference ratio {r2}");
    }

    #[test]
    fn binding_check_passes() {
        let rep = binding_interpolation_check(&cfg(2000), 21).unwrap();
        assert!(rep.passed);
        let a0 = alpha0(&cfg(2000)).unwrap();
        verify_contact_pair(&a0, 0.0, 0.1).unwrap();
        // α₀ and α₁ agree near r = 1.
        let a1 = alpha1(&cfg(2000)).unwrap();
        let j = a0.r.len() - 1;
        assert!((a0.h1[j] - a1.h1[j]).abs() < 1e-12);
        assert!((a0.h2[j] - a1.h2[j]).abs() < 1e-9);
        assert!(binding_interpolation_check(&cfg(2000), 5).is_err());
    }

    #[test]
    fn binding_check_passes_on_fine_grids() {
        // r = 0.6001 sits where the binding smoothstep is within rounding of 1.
        for grid in [10_000, 40_000] {
            assert!(binding_interpolation_check(&cfg(grid), 21).unwrap().passed);
        }
    }

    #[test]
    fn smoothstep_stays_in_the_unit_interval() {
        for j in 0..=100_000 {
            let (p, _) = smoothstep(j as f64 / 100_000.0);
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn binding_fault_is_detected() {
        let mut a0 = alpha0(&cfg(2000)).unwrap();
        a0.dh2[1000] = -0.01;
        match verify_contact_pair(&a0, 0.0, 0.1) {
            Err(ProfileError::ConditionViolated { which, r, .. }) => {
                assert_eq!(which, "h2' >= 0");
                assert!((r - 0.5005).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(ProfileConfig::new(1.0, 1.0, 100).is_err());
        assert!(ProfileConfig::new(0.3, 0.4, 100).is_err());
        assert!(ProfileConfig::new(1.0, 0.5, 101).is_err());
        assert!(ProfileConfig::new(-1.0, 0.5, 100).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let f = FunctionTable::sample(0.0, 1.0, 32, |t| t.sin());
        let back = FunctionTable::from_csv(&f.to_csv()).unwrap();
        assert_eq!(back, f);
        assert!(FunctionTable::from_csv("t,value\n0,1\n0.5,2\n2,3\n").is_err());
    }
}
