//! Graded dimension sequences and their mean Euler characteristic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::Rational;

use super::MecError;

/// Eventually periodic part of a graded sequence: `pattern[j]` is the
/// dimension in degree `start_degree + j + r·period` for all `r ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub start_degree: i64,
    pub period: usize,
    pub pattern: Vec<u64>,
}

/// Dimensions `b_i` of a graded vector space: finitely many explicit
/// degrees, optionally followed by a periodic tail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub finite_part: BTreeMap<i64, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
}

impl GradedDims {
    pub fn new(finite_part: BTreeMap<i64, u64>, tail: Option<Tail>) -> Result<Self, MecError> {
        if let Some(t) = &tail {
            if t.period == 0 || t.period % 2 != 0 {
                return Err(MecError::InvalidTail(format!(
                    "period must be positive and even, got {}",
                    t.period
                )));
            }
            if t.pattern.len() != t.period {
                return Err(MecError::InvalidTail(format!(
                    "pattern has {} entries for period {}",
                    t.pattern.len(),
                    t.period
                )));
            }
            if let Some((&d, _)) = finite_part.range(t.start_degree..).find(|(_, &v)| v != 0) {
                return Err(MecError::InvalidTail(format!(
                    "finite part has degree {d} at or above the tail start {}",
                    t.start_degree
                )));
            }
        }
        Ok(GradedDims { finite_part, tail })
    }

    pub fn finite(finite_part: BTreeMap<i64, u64>) -> Self {
        GradedDims {
            finite_part,
            tail: None,
        }
    }

    /// Builds a finite sequence from `(degree, dimension)` pairs.
    pub fn from_pairs(pairs: &[(i64, u64)]) -> Self {
        let mut map = BTreeMap::new();
        for &(d, v) in pairs {
            *map.entry(d).or_insert(0) += v;
        }
        GradedDims::finite(map)
    }

    pub fn dim(&self, degree: i64) -> u64 {
        if let Some(t) = &self.tail {
            if degree >= t.start_degree {
                let j = (degree - t.start_degree) as usize % t.period;
                return t.pattern[j];
            }
        }
        self.finite_part.get(&degree).copied().unwrap_or(0)
    }

    /// `Σ (−1)^i b_i` of a finite sequence.
    pub fn chi(&self) -> Result<BigInt, MecError> {
        if self.tail.is_some() {
            return Err(MecError::InfiniteSupport);
        }
        Ok(self
            .finite_part
            .iter()
            .map(|(&d, &v)| sign(d) * BigInt::from(v))
            .sum())
    }
}

fn sign(degree: i64) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact mean Euler characteristic of an eventually periodic sequence: the
/// signed sum over one period of the tail divided by the period.
pub fn chi_m_periodic(g: &GradedDims) -> Result<Rational, MecError> {
    let t = g.tail.as_ref().ok_or(MecError::MissingTail)?;
    let signed: i64 = t
        .pattern
        .iter()
        .enumerate()
        .map(|(j, &v)| sign(t.start_degree + j as i64) * v as i64)
        .sum();
    Ok(Rational::new(signed, t.period as i64))
}

/// Windowed estimate of the mean Euler characteristic: with
/// `a_N = (1/N) Σ_{i=−N}^{N} (−1)^i b_i`, the midpoint of the smallest and
/// largest `a_N` over the last quarter of `N ≤ window`.
pub fn chi_m_window(g: &GradedDims, window: usize) -> Result<f64, MecError> {
    if window < 10 {
        return Err(MecError::InvalidParameter(format!(
            "window must be at least 10, got {window}"
        )));
    }
    let w = window as i64;
    let signed = |i: i64| sign(i) as i128 * g.dim(i) as i128;
    let mut sum: i128 = signed(0);
    let from = w - w / 4;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for big_n in 1..=w {
        sum += signed(big_n) + signed(-big_n);
        if big_n >= from {
            let a = sum as f64 / big_n as f64;
            lo = lo.min(a);
            hi = hi.max(a);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(finite[shift]) ⊗ H_*(ℂP^∞)`: a class in degree `j` of `finite` sits in
/// degree `j + shift` and is repeated every two degrees upwards, so
/// `b_i = Σ finite_j` over `j + shift ≤ i` with `i − j − shift` even. The
/// tail starts at the first even degree past the shifted support, with
/// pattern `[even total, odd total]`.
pub fn tensor_cp_infinity(finite: &GradedDims, shift: i64) -> Result<GradedDims, MecError> {
    if finite.tail.is_some() {
        return Err(MecError::InfiniteSupport);
    }
    let shifted: Vec<(i64, u64)> = finite
        .finite_part
        .iter()
        .filter(|(_, &v)| v != 0)
        .map(|(&d, &v)| (d + shift, v))
        .collect();
    let Some(&(top, _)) = shifted.last() else {
        return GradedDims::new(
            BTreeMap::new(),
            Some(Tail {
                start_degree: 0,
                period: 2,
                pattern: vec![0, 0],
            }),
        );
    };
    let low = shifted[0].0;
    let start = if top.rem_euclid(2) == 0 { top } else { top + 1 };
    let dim_at = |i: i64| -> u64 {
        shifted
            .iter()
            .filter(|(d, _)| *d <= i && (i - d).rem_euclid(2) == 0)
            .map(|(_, v)| v)
            .sum()
    };
    let finite_part = (low..start)
        .map(|i| (i, dim_at(i)))
        .filter(|(_, v)| *v != 0)
        .collect();
    GradedDims::new(
        finite_part,
        Some(Tail {
            start_degree: start,
            period: 2,
            pattern: vec![dim_at(start), dim_at(start + 1)],
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tail(start: i64, pattern: &[u64]) -> GradedDims {
        GradedDims::new(
            BTreeMap::new(),
            Some(Tail {
                start_degree: start,
                period: pattern.len(),
                pattern: pattern.to_vec(),
            }),
        )
        .unwrap()
    }

    #[test]
    fn finite_euler_characteristics() {
        assert_eq!(
            GradedDims::from_pairs(&[(0, 1)]).chi().unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            GradedDims::from_pairs(&[(0, 1), (1, 2), (2, 1)])
                .chi()
                .unwrap(),
            BigInt::from(0)
        );
        let cp3 = GradedDims::from_pairs(&[(0, 1), (2, 1), (4, 1), (6, 1)]);
        assert_eq!(cp3.chi().unwrap(), BigInt::from(4));
        assert!(matches!(
            tail(0, &[1, 0]).chi(),
            Err(MecError::InfiniteSupport)
        ));
    }

    #[test]
    fn periodic_values() {
        assert_eq!(
            chi_m_periodic(&tail(0, &[1, 0])).unwrap(),
            Rational::new(1, 2)
        );
        assert_eq!(
            chi_m_periodic(&tail(0, &[0, 1])).unwrap(),
            Rational::new(-1, 2)
        );
        // Signed sum −7 over period 14.
        let mut p = vec![0u64; 14];
        p[5] = 3;
        p[11] = 4;
        assert_eq!(chi_m_periodic(&tail(0, &p)).unwrap(), Rational::new(-1, 2));
        assert!(matches!(
            chi_m_periodic(&GradedDims::default()),
            Err(MecError::MissingTail)
        ));
    }

    #[test]
    fn windowed_estimates() {
        assert!((chi_m_window(&tail(0, &[1, 0]), 2000).unwrap() - 0.5).abs() < 1e-3);
        assert!((chi_m_window(&tail(0, &[0, 1]), 2000).unwrap() + 0.5).abs() < 1e-3);
        let finite = GradedDims::from_pairs(&[(0, 1), (3, 5)]);
        assert!(chi_m_window(&finite, 2000).unwrap().abs() < 1e-2);
        assert!(chi_m_window(&finite, 5).is_err());
    }

    #[test]
    fn tensor_examples() {
        let cp = tensor_cp_infinity(&GradedDims::from_pairs(&[(0, 1)]), 0).unwrap();
        assert_eq!(cp.tail.as_ref().unwrap().pattern, vec![1, 0]);
        assert_eq!(cp.tail.as_ref().unwrap().start_degree, 0);
        let two = tensor_cp_infinity(&GradedDims::from_pairs(&[(0, 1), (2, 1)]), 0).unwrap();
        let dims: Vec<u64> = (0..6).map(|i| two.dim(i)).collect();
        assert_eq!(dims, vec![1, 0, 2, 0, 2, 0]);
        assert_eq!(two.tail.as_ref().unwrap().pattern, vec![2, 0]);
        let odd = tensor_cp_infinity(&GradedDims::from_pairs(&[(1, 1)]), 0).unwrap();
        assert_eq!(odd.tail.as_ref().unwrap().pattern, vec![0, 1]);
        assert_eq!(odd.dim(0), 0);
        assert_eq!(odd.dim(1), 1);
    }

    #[test]
    fn tail_validation() {
        let bad = Tail {
            start_degree: 0,
            period: 3,
            pattern: vec![1, 0, 0],
        };
        assert!(GradedDims::new(BTreeMap::new(), Some(bad)).is_err());
        let overlap = GradedDims::new(
            BTreeMap::from([(4, 1)]),
            Some(Tail {
                start_degree: 2,
                period: 2,
                pattern: vec![1, 0],
            }),
        );
        assert!(overlap.is_err());
    }
}
