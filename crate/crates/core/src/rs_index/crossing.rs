//! Crossing detection and crossing forms.
//!
//! Before searching, the common fixed space `V` of all samples is split
//! off: when `ω₀` is nondegenerate on `V`, its symplectic complement `W` is
//! invariant along the path and every crossing form vanishes on `V`, so
//! the index can be computed from the restriction to `W`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::matrix::symplectic_form;
use super::path::{Side, SymplecticPath};
use super::{IndexError, Tolerances};

/// Halving depth of the branch-and-bound inside one grid interval.
const SEARCH_DEPTH: u32 = 6;

/// Crossing form at one crossing time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub t: f64,
    pub kernel_dim: usize,
    pub signature: i64,
    pub degenerate: bool,
    /// Eigenvalues of the crossing form on the kernel, ascending.
    pub spectrum: Vec<f64>,
    /// At a breakpoint of a piecewise path: the signature of the form built
    /// from the left derivative. `signature` then uses the right derivative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_signature: Option<i64>,
}

/// A path seen through an orthonormal basis of an invariant subspace.
pub(crate) struct View<'a> {
    path: &'a SymplecticPath,
    basis: Option<DMatrix<f64>>,
    omega: DMatrix<f64>,
}

impl<'a> View<'a> {
    pub(crate) fn full(path: &'a SymplecticPath) -> Self {
        View {
            path,
            basis: None,
            omega: symplectic_form(path.half_dim()),
        }
    }

    /// Restriction to the symplectic complement of the fixed space, or the
    /// full view when nothing is fixed or the fixed space is not symplectic.
    pub(crate) fn reduced(path: &'a SymplecticPath, kernel_tol: f64) -> Self {
        let dim = 2 * path.half_dim();
        let id = DMatrix::<f64>::identity(dim, dim);
        let mut gram = DMatrix::<f64>::zeros(dim, dim);
        for m in path.samples() {
            let d = m - &id;
            gram += d.transpose() * d;
        }
        gram /= path.samples().len() as f64;
        let eig = SymmetricEigen::new(gram);
        // Gram eigenvalues carry rounding of order ε‖G‖, so candidates are
        // screened with a relative bound and then checked sample by sample.
        let scale = eig.eigenvalues.amax().max(1.0);
        let fixed: Vec<usize> = (0..dim)
            .filter(|&i| eig.eigenvalues[i] <= 1e-10 * scale)
            .collect();
        if fixed.is_empty() {
            return View::full(path);
        }
        let omega = symplectic_form(path.half_dim());
        let v = DMatrix::from_columns(
            &fixed
                .iter()
                .map(|&i| eig.eigenvectors.column(i))
                .collect::<Vec<_>>(),
        );
        let moves = path
            .samples()
            .iter()
            .any(|m| (m * &v - &v).amax() > kernel_tol);
        if moves {
            return View::full(path);
        }
        let restricted = v.transpose() * &omega * &v;
        let nondegenerate = restricted
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .all(|&s| s > 1e-6);
        if !nondegenerate {
            return View::full(path);
        }
        // W = V^ω is the orthogonal complement of ΩV; Ω is orthogonal, so ΩV
        // has orthonormal columns.
        let ov = &omega * v;
        let proj = SymmetricEigen::new(&ov * ov.transpose());
        let keep: Vec<_> = (0..dim)
            .filter(|&i| proj.eigenvalues[i] < 0.5)
            .map(|i| proj.eigenvectors.column(i).into_owned())
            .collect();
        if keep.is_empty() {
            return View {
                path,
                basis: Some(DMatrix::zeros(dim, 0)),
                omega: DMatrix::zeros(0, 0),
            };
        }
        let basis = DMatrix::from_columns(&keep);
        let omega_w = basis.transpose() * &omega * &basis;
        View {
            path,
            basis: Some(basis),
            omega: omega_w,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub(crate) fn eval(&self, t: f64, side: Side) -> (DMatrix<f64>, DMatrix<f64>) {
        let (value, deriv) = self.path.eval(t, side);
        match &self.basis {
            None => (value, deriv),
            Some(b) => {
                let bt = b.transpose();
                (&bt * value * b, bt * deriv * b)
            }
        }
    }

    /// `(σ_min(A − I), det(A − I))` at `t`.
    fn gap(&self, t: f64, side: Side) -> (f64, f64) {
        let (a, _) = self.eval(t, side);
        let shifted = a - DMatrix::<f64>::identity(self.dim(), self.dim());
        let det = shifted.determinant();
        let smin = shifted
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        (smin, det)
    }

    /// Kernel of `A − I` and the crossing form on it.
    pub(crate) fn record(&self, t: f64, side: Side, kernel_tol: f64) -> CrossingRecord {
        let (a, adot) = self.eval(t, side);
        let r = self.dim();
        let svd = (a - DMatrix::<f64>::identity(r, r)).svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let kernel: Vec<_> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] <= kernel_tol)
            .map(|i| v_t.row(i).transpose())
            .collect();
        if kernel.is_empty() {
            return CrossingRecord {
                t,
                kernel_dim: 0,
                signature: 0,
                degenerate: false,
                spectrum: Vec::new(),
                left_signature: None,
            };
        }
        let k = DMatrix::from_columns(&kernel);
        let q = k.transpose() * &self.omega * adot * &k;
        let q = (&q + q.transpose()) * 0.5;
        let mut spectrum: Vec<f64> = SymmetricEigen::new(q).eigenvalues.iter().copied().collect();
        spectrum.sort_by(f64::total_cmp);
        let pos = spectrum.iter().filter(|&&l| l > kernel_tol).count() as i64;
        let neg = spectrum.iter().filter(|&&l| l < -kernel_tol).count() as i64;
        CrossingRecord {
            t,
            kernel_dim: kernel.len(),
            signature: pos - neg,
            degenerate: spectrum.iter().any(|l| l.abs() <= kernel_tol),
            spectrum,
            left_signature: None,
        }
    }
}

/// Crossing form of the path at `t`, on the full space.
///
/// The kernel of `ψ(t) − I` is read off from the singular values at most
/// `kernel_tol`; the form `Q(v, v) = ω₀(v, ψ̇(t)v)` is symmetrized on it.
/// Degeneracy is reported in the record rather than as an error.
pub fn crossing_signature(path: &SymplecticPath, t: f64, kernel_tol: f64) -> CrossingRecord {
    let side = if t >= path.duration() {
        Side::Left
    } else {
        Side::Right
    };
    View::full(path).record(t, side, kernel_tol)
}

/// Crossings of the path, sorted by time. See [`find_crossings_with`].
pub fn find_crossings(
    path: &SymplecticPath,
    det_tol: f64,
    refine_iters: usize,
) -> Result<Vec<CrossingRecord>, IndexError> {
    let tol = Tolerances {
        det: det_tol,
        refine_iters,
        ..Tolerances::default()
    };
    find_crossings_with(path, &tol)
}

/// Crossings of the path, sorted by time, after splitting off the fixed space.
///
/// Each grid interval is searched by halving for places where
/// `g(t) = σ_min(ψ(t) − I)` can vanish under the Lipschitz bound of `g`; the
/// surviving subintervals are minimized by golden-section search and a
/// minimum is a crossing when `|det(ψ(t) − I)| ≤ tol.det`. Both endpoints
/// are always tested. Crossings that cannot be told apart on the grid, and
/// plateaus of small determinant, are reported as `UnresolvedCrossingCluster`.
pub fn find_crossings_with(
    path: &SymplecticPath,
    tol: &Tolerances,
) -> Result<Vec<CrossingRecord>, IndexError> {
    let view = View::reduced(path, tol.kernel);
    locate(&view, tol)
}

pub(crate) fn locate(view: &View<'_>, tol: &Tolerances) -> Result<Vec<CrossingRecord>, IndexError> {
    if view.dim() == 0 {
        return Ok(Vec::new());
    }
    let path = view.path;
    let grid = path.grid();
    let duration = path.duration();
    let breakpoints = path.breakpoints();
    let snap = 1e-9 * duration.max(1.0);
    let last = grid.len() - 1;
    let side_at = |j: usize| if j == last { Side::Left } else { Side::Right };

    let mut lipschitz = 0.0f64;
    let mut g_grid = Vec::with_capacity(grid.len());
    for (j, &t) in grid.iter().enumerate() {
        let (a, adot) = view.eval(t, side_at(j));
        lipschitz = lipschitz.max(adot.norm());
        if breakpoints.iter().any(|b| (b - t).abs() <= snap) {
            lipschitz = lipschitz.max(view.eval(t, Side::Left).1.norm());
        }
        let shifted = a - DMatrix::<f64>::identity(view.dim(), view.dim());
        g_grid.push(
            shifted
                .svd(false, false)
                .singular_values
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        );
    }
    let lipschitz = 1.25 * lipschitz;

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let consider = |t: f64, side: Side, out: &mut Vec<(f64, f64)>| {
        let (g, det) = view.gap(t, side);
        if det.abs() <= tol.det {
            out.push((t, g));
        }
    };
    consider(0.0, Side::Right, &mut candidates);
    consider(duration, Side::Left, &mut candidates);

    let g = |t: f64| view.gap(t, Side::Right).0;
    let mut stack = Vec::new();
    for j in 0..last {
        stack.push((grid[j], g_grid[j], grid[j + 1], g_grid[j + 1], 0u32));
        while let Some((a, ga, b, gb, depth)) = stack.pop() {
            if ga + gb > lipschitz * (b - a) + 1e-12 {
                continue;
            }
            if depth == SEARCH_DEPTH {
                let (t, gt) = golden_min(&g, a, ga, b, gb, tol.refine_iters);
                // A minimum pinned to an end of the subinterval is only a
                // candidate if g does not keep decreasing past that end; near a
                // crossing of high nullity det(ψ − I) is tiny well away from it.
                let edge = 1e-6 * (b - a);
                let step = 1e-3 * (b - a);
                if t - a <= edge && a > snap && g(a - step) < gt {
                    continue;
                }
                if b - t <= edge && b < duration - snap && g(b + step) < gt {
                    continue;
                }
                let mut t = t;
                if t <= snap {
                    t = 0.0;
                } else if duration - t <= snap {
                    t = duration;
                } else if let Some(&bp) = breakpoints.iter().find(|&&bp| (bp - t).abs() <= snap) {
                    t = bp;
                }
                let side = if t >= duration {
                    Side::Left
                } else {
                    Side::Right
                };
                consider(t, side, &mut candidates);
                continue;
            }
            let m = 0.5 * (a + b);
            let gm = g(m);
            stack.push((m, gm, b, gb, depth + 1));
            stack.push((a, ga, m, gm, depth + 1));
        }
    }

    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let h_min = grid
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let merge = h_min / 16.0;

    // Group nearby candidates; each group is one crossing.
    let mut groups: Vec<Vec<(f64, f64)>> = Vec::new();
    for c in candidates {
        match groups.last_mut() {
            Some(grp) if c.0 - grp[grp.len() - 1].0 <= merge => grp.push(c),
            _ => groups.push(vec![c]),
        }
    }

    let mut times = Vec::with_capacity(groups.len());
    for grp in &groups {
        let (t_rep, _) = grp
            .iter()
            .copied()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("groups are non-empty");
        let (lo, hi) = (grp[0].0, grp[grp.len() - 1].0);
        if hi - lo > h_min {
            return Err(IndexError::UnresolvedCrossingCluster {
                t1: lo,
                t2: hi,
                spacing: h_min,
            });
        }
        let far = 1e-7 * duration.max(1.0);
        if let Some(other) = grp
            .iter()
            .find(|c| c.1 <= tol.kernel && (c.0 - t_rep).abs() > far)
        {
            return Err(IndexError::UnresolvedCrossingCluster {
                t1: t_rep.min(other.0),
                t2: t_rep.max(other.0),
                spacing: h_min,
            });
        }
        times.push(t_rep);
    }
    for w in times.windows(2) {
        if w[1] - w[0] < h_min {
            return Err(IndexError::UnresolvedCrossingCluster {
                t1: w[0],
                t2: w[1],
                spacing: h_min,
            });
        }
    }

    let mut records = Vec::with_capacity(times.len());
    for t in times {
        let at_end = t >= duration;
        let junction = !at_end && t > 0.0 && breakpoints.contains(&t);
        let side = if at_end { Side::Left } else { Side::Right };
        let mut rec = view.record(t, side, tol.kernel);
        if rec.kernel_dim == 0 {
            let (g, det) = view.gap(t, side);
            return Err(IndexError::AmbiguousKernel {
                t,
                smallest_singular_value: g,
                det,
            });
        }
        if junction {
            let left = view.record(t, Side::Left, tol.kernel);
            if left.degenerate && !rec.degenerate {
                rec.degenerate = true;
                rec.spectrum = left.spectrum;
            }
            rec.left_signature = Some(left.signature);
        }
        records.push(rec);
    }
    Ok(records)
}

/// Golden-section minimization of `g` on `[a, b]`; the endpoint values are
/// included in the comparison so minima at grid nodes are kept.
fn golden_min(
    g: &impl Fn(f64) -> f64,
    a: f64,
    ga: f64,
    b: f64,
    gb: f64,
    iters: usize,
) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = g(x2);
        }
    }
    [(x1, f1), (x2, f2), (a, ga), (b, gb)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs_index::{constant_path, hyperbolic_path, rotation_path, SymplecticMatrix};
    use std::f64::consts::PI;

    #[test]
    fn full_rotation_crosses_at_both_ends() {
        let p = rotation_path(1.0, 2.0 * PI, 64).unwrap();
        let c = find_crossings(&p, 1e-10, 60).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].t, 0.0);
        assert_eq!(c[1].t, 2.0 * PI);
        assert!(c.iter().all(|r| r.kernel_dim == 2 && r.signature == 2));
    }

    #[test]
    fn half_rotation_and_hyperbolic_cross_only_at_zero() {
        let half = rotation_path(0.5, 2.0 * PI, 64).unwrap();
        let c = find_crossings(&half, 1e-10, 60).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].t, 0.0);
        let hyp = hyperbolic_path(1.0, 1.0, 64).unwrap();
        let c = find_crossings(&hyp, 1e-10, 60).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].t, 0.0);
    }

    #[test]
    fn interior_crossings_are_located_precisely() {
        let p = rotation_path(3.0, 2.0 * PI, 50).unwrap();
        let c = find_crossings(&p, 1e-10, 60).unwrap();
        let times: Vec<f64> = c.iter().map(|r| r.t).collect();
        assert_eq!(times.len(), 4);
        for (j, t) in times.iter().enumerate() {
            assert!((t - 2.0 * PI * j as f64 / 3.0).abs() < 1e-9, "{t}");
        }
    }

    #[test]
    fn crossing_forms() {
        let rot = rotation_path(1.0, 2.0 * PI, 64).unwrap();
        let r = crossing_signature(&rot, 0.0, 1e-8);
        assert_eq!((r.kernel_dim, r.signature, r.degenerate), (2, 2, false));
        let hyp = hyperbolic_path(1.0, 1.0, 64).unwrap();
        let r = crossing_signature(&hyp, 0.0, 1e-8);
        assert_eq!((r.kernel_dim, r.signature, r.degenerate), (2, 0, false));
        // Q((x, y)) = −2xy has eigenvalues ±1.
        assert!((r.spectrum[0] + 1.0).abs() < 1e-12 && (r.spectrum[1] - 1.0).abs() < 1e-12);
        let id = constant_path(&SymplecticMatrix::identity(1), 2.0 * PI, 16).unwrap();
        let r = crossing_signature(&id, 1.0, 1e-8);
        assert_eq!(r.kernel_dim, 2);
        assert!(r.degenerate);
    }

    #[test]
    fn constant_identity_has_no_moving_part() {
        let id = constant_path(&SymplecticMatrix::identity(2), 1.0, 16).unwrap();
        assert_eq!(View::reduced(&id, 1e-8).dim(), 0);
        assert!(find_crossings(&id, 1e-10, 60).unwrap().is_empty());
    }
}
