//! The index itself, iteration and mean index.

use serde::{Deserialize, Serialize};

use crate::exact::{HalfInteger, Rational};

use super::crossing::{locate, CrossingRecord, View};
use super::path::{iterate, rotated, SymplecticPath};
use super::{IndexError, Tolerances};

/// Index of a path together with the crossings that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub index: HalfInteger,
    pub crossings: Vec<CrossingRecord>,
}

/// `μ(ψ)` with the given detection and kernel tolerances.
pub fn rs_index(
    path: &SymplecticPath,
    det_tol: f64,
    kernel_tol: f64,
) -> Result<HalfInteger, IndexError> {
    let tol = Tolerances {
        det: det_tol,
        kernel: kernel_tol,
        ..Tolerances::default()
    };
    Ok(rs_index_with(path, &tol)?.index)
}

/// `μ(ψ) = ½ sgn Q₀ + Σ sgn Q_t + ½ sgn Q_T`, with the sum over interior
/// crossings. At a breakpoint of a catenation the two one-sided forms each
/// contribute half. A path that fixes everything has index 0.
pub fn rs_index_with(path: &SymplecticPath, tol: &Tolerances) -> Result<IndexReport, IndexError> {
    let view = View::reduced(path, tol.kernel);
    let crossings = locate(&view, tol)?;
    let duration = path.duration();
    let mut twice: i64 = 0;
    for c in &crossings {
        if c.degenerate {
            return Err(IndexError::DegenerateCrossing {
                t: c.t,
                spectrum: c.spectrum.clone(),
            });
        }
        twice += if c.t <= 0.0 || c.t >= duration {
            c.signature
        } else if let Some(left) = c.left_signature {
            left + c.signature
        } else {
            2 * c.signature
        };
    }
    Ok(IndexReport {
        index: HalfInteger::from_twice(twice),
        crossings,
    })
}

/// Indices of the covers `ψ, ψ², …, ψ^max_covers` of a loop.
pub fn iterated_indices(
    loop_path: &SymplecticPath,
    max_covers: usize,
    tol: &Tolerances,
) -> Result<Vec<HalfInteger>, IndexError> {
    (1..=max_covers)
        .map(|m| Ok(rs_index_with(&iterate(loop_path, m)?, tol)?.index))
        .collect()
}

/// Mean index estimate `μ(ψ^M)/M` for `M = max_covers`.
///
/// Also checks `|μ(ψ^m) − mΔ| ≤ n` for every `m ≤ M`, where `n` is the
/// half-dimension of the path, and fails with `IterationBoundViolated`
/// otherwise.
pub fn mean_index(loop_path: &SymplecticPath, max_covers: usize) -> Result<Rational, IndexError> {
    if max_covers < 4 {
        return Err(IndexError::InvalidParameter(format!(
            "max_covers must be at least 4, got {max_covers}"
        )));
    }
    let indices = iterated_indices(loop_path, max_covers, &Tolerances::default())?;
    let estimate =
        indices[max_covers - 1].to_rational() / Rational::from_integer(max_covers as i64);
    let bound = loop_path.half_dim();
    for (i, mu) in indices.iter().enumerate() {
        let m = i + 1;
        let deviation =
            (mu.to_rational() - Rational::from_integer(m as i64) * estimate.clone()).abs();
        if deviation > Rational::from_integer(bound as i64) {
            return Err(IndexError::IterationBoundViolated {
                m,
                deviation: deviation.to_f64(),
                bound,
            });
        }
    }
    Ok(estimate)
}

/// The path `t ↦ exp(ε t J₀) ψ(t)`, a small rotation applied on the left.
///
/// This is the standard way to break a degenerate crossing: for small `ε`
/// every crossing form gains `ε|v|²`. It moves the endpoint `ψ(T)`, so the
/// result is a different path and is never substituted silently.
pub fn perturbation_suggestion(
    path: &SymplecticPath,
    epsilon: f64,
) -> Result<SymplecticPath, IndexError> {
    rotated(path, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs_index::{
        catenate, constant_path, hyperbolic_path, rotation_path, SymplecticMatrix,
    };
    use std::f64::consts::PI;

    fn idx(p: &SymplecticPath) -> HalfInteger {
        rs_index(p, 1e-10, 1e-8).unwrap()
    }

    #[test]
    fn basic_indices() {
        assert_eq!(
            idx(&rotation_path(1.0, 2.0 * PI, 64).unwrap()),
            HalfInteger::from_integer(2)
        );
        assert_eq!(
            idx(&rotation_path(0.5, 2.0 * PI, 64).unwrap()),
            HalfInteger::from_integer(1)
        );
        assert_eq!(
            idx(&rotation_path(3.0, 2.0 * PI, 64).unwrap()),
            HalfInteger::from_integer(6)
        );
        assert_eq!(
            idx(&rotation_path(-2.0, 2.0 * PI, 64).unwrap()),
            HalfInteger::from_integer(-4)
        );
        assert_eq!(
            idx(&hyperbolic_path(1.0, 1.0, 64).unwrap()),
            HalfInteger::zero()
        );
        let id = constant_path(&SymplecticMatrix::identity(1), 2.0 * PI, 64).unwrap();
        assert_eq!(idx(&id), HalfInteger::zero());
    }

    #[test]
    fn quarter_rotation_is_a_half_integer() {
        // Only t = 0 is a crossing, with form of signature 2: μ = 1.
        assert_eq!(
            idx(&rotation_path(1.0, PI / 2.0, 64).unwrap()),
            HalfInteger::from_integer(1)
        );
    }

    #[test]
    fn half_turns_add_up() {
        let first = rotation_path(1.0, PI, 32).unwrap();
        let second = crate::rs_index::flow_path(
            &crate::rs_index::complex_structure(1),
            &first.sample(32),
            PI,
            32,
        )
        .unwrap();
        let whole = catenate(&first, &second).unwrap();
        assert_eq!(idx(&first), HalfInteger::from_integer(1));
        assert_eq!(idx(&second), HalfInteger::from_integer(1));
        assert_eq!(idx(&whole), HalfInteger::from_integer(2));
    }

    #[test]
    fn iteration_and_mean_index() {
        let lp = rotation_path(1.0, 2.0 * PI, 64).unwrap();
        assert_eq!(idx(&iterate(&lp, 3).unwrap()), HalfInteger::from_integer(6));
        assert_eq!(mean_index(&lp, 8).unwrap(), Rational::from_integer(2));
        let id = constant_path(&SymplecticMatrix::identity(1), 1.0, 16).unwrap();
        assert_eq!(mean_index(&id, 4).unwrap(), Rational::zero());
        assert!(mean_index(&lp, 3).is_err());
    }

    #[test]
    fn degenerate_crossing_is_an_error_and_perturbation_resolves_it() {
        // Rotation in the first plane, identity in the second: the
        // second plane is fixed and split off, so this is fine.
        let rot = rotation_path(1.0, 2.0 * PI, 64).unwrap();
        let id = constant_path(&SymplecticMatrix::identity(1), 2.0 * PI, 64).unwrap();
        let p = crate::rs_index::block_diag_path(&[rot, id]).unwrap();
        assert_eq!(idx(&p), HalfInteger::from_integer(2));
        // A shear x ↦ x + t y has a degenerate form at every t and is not
        // split off since its fixed line is isotropic.
        let shear = crate::rs_index::flow_path(
            &nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            &SymplecticMatrix::identity(1),
            1.0,
            32,
        )
        .unwrap();
        let err = rs_index(&shear, 1e-10, 1e-8).unwrap_err();
        assert!(matches!(
            err,
            IndexError::DegenerateCrossing { .. } | IndexError::UnresolvedCrossingCluster { .. }
        ));
        let nudged = perturbation_suggestion(&shear, 1e-3).unwrap();
        assert!(rs_index(&nudged, 1e-10, 1e-8).is_ok());
    }
}
