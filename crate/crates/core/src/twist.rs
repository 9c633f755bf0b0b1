//! Obstructions to a power of a fibered Dehn twist being symplectically
//! isotopic to the identity.
//!
//! Let `τ` be the fibered Dehn twist on the Weinstein filling `W` of a
//! Boothby–Wang orbibundle with data [`BWData`]. If `τ^N` is isotopic to the
//! identity (relative to the boundary) then one of the following holds:
//!
//! 1. `c ≥ k`, `k ∤ N` and `χ(H) = χ(M) = 0`;
//! 2. `c = k`, `k | N` and `χ(H) = 0`;
//! 3. `c > k`, `k | N` and `((c − k)k + 1)χ(H) = (c − k)kχ(M)`.
//!
//! The conditions are necessary only, so when one holds the verdict is
//! "consistent" and nothing is claimed about triviality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{big_int_json, Rational};
use crate::mec::{chi_m_cover, chi_m_subcritical, BWData, MecError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TwistError {
    #[error("need n ≥ 4 (base of real dimension at least 6), got n = {n}")]
    InvalidDimension { n: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Mec(#[from] MecError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    NontrivialIndexNegative,
    NontrivialChiMismatch,
    ConsistentCase1,
    ConsistentCase2,
    ConsistentCase3,
}

impl Status {
    pub fn is_nontrivial(self) -> bool {
        matches!(
            self,
            Status::NontrivialIndexNegative | Status::NontrivialChiMismatch
        )
    }
}

/// Both sides of the comparison equation for `τ^{Nm}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSides {
    pub m: u64,
    /// `gcd(Nm, k)`.
    pub gcd: u64,
    #[serde(with = "big_int_json")]
    pub lhs: BigInt,
    #[serde(with = "big_int_json")]
    pub rhs: BigInt,
}

impl EquationSides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The condition a verdict rests on, with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    #[serde(with = "big_int_json")]
    pub lhs: BigInt,
    #[serde(with = "big_int_json")]
    pub rhs: BigInt,
    pub k_divides_n: bool,
    /// `ℓ = gcd(N, k)`.
    pub ell: u64,
    #[serde(with = "big_int_json")]
    pub mu_p: BigInt,
    /// The comparison equation at `m = 1` and `m = 1 + k`, whose gcd terms agree.
    pub equations: Vec<EquationSides>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(flatten)]
    pub witness: Witness,
    pub data: BWData,
    /// Hypotheses that cannot be checked from the integer data and are
    /// taken on the caller's word.
    pub assumptions: Vec<String>,
}

pub const ASSUMPTIONS: [&str; 2] = [
    "[omega] is a primitive integral class",
    "H is an adapted Donaldson hypersurface",
];

/// `((k(c−k)+1)Nm + k² − g²)χ(H)` and `(k(c−k)Nm + k² − g²)χ(M)` with
/// `g = gcd(Nm, k)`.
pub fn theorem_equation(d: &BWData, m: u64) -> Result<EquationSides, TwistError> {
    if m == 0 {
        return Err(TwistError::InvalidParameter("m must be at least 1".into()));
    }
    let nm = d.big_n * m;
    let g = Integer::gcd(&nm, &d.k);
    let k = BigInt::from(d.k);
    let kc = &k * (BigInt::from(d.c) - &k);
    let nm_big = BigInt::from(nm);
    let shift = &k * &k - BigInt::from(g) * BigInt::from(g);
    let lhs = ((&kc + 1) * &nm_big + &shift) * &d.chi_h;
    let rhs = (&kc * &nm_big + &shift) * &d.chi_m;
    Ok(EquationSides {
        m,
        gcd: g,
        lhs,
        rhs,
    })
}

pub fn decide_triviality(d: &BWData) -> Result<Verdict, TwistError> {
    if d.n < 4 {
        return Err(TwistError::InvalidDimension { n: d.n });
    }
    let k_divides_n = d.big_n.is_multiple_of(d.k);
    let equations = vec![theorem_equation(d, 1)?, theorem_equation(d, 1 + d.k)?];
    let witness = |condition: String, lhs: BigInt, rhs: BigInt| Witness {
        condition,
        lhs,
        rhs,
        k_divides_n,
        ell: d.ell(),
        mu_p: d.mu_p(),
        equations: equations.clone(),
    };
    let k = BigInt::from(d.k);
    let c = BigInt::from(d.c);
    let (status, w) = if d.c < d.k as i64 {
        (
            Status::NontrivialIndexNegative,
            witness("c >= k".into(), c, k),
        )
    } else if !k_divides_n {
        // f(m) = g(m) at two values of m with the same gcd forces the
        // affine functions to agree, which for g < k means χ(H) = χ(M) = 0.
        match equations.iter().find(|e| !e.holds()) {
            None => (
                Status::ConsistentCase1,
                witness(
                    "chi(H) = chi(M) = 0".into(),
                    d.chi_h.clone(),
                    d.chi_m.clone(),
                ),
            ),
            Some(e) => (
                Status::NontrivialChiMismatch,
                witness(
                    format!("comparison equation at m = {}", e.m),
                    e.lhs.clone(),
                    e.rhs.clone(),
                ),
            ),
        }
    } else {
        let ck = &c - &k;
        let lhs = (&ck * &k + 1) * &d.chi_h;
        let rhs = &ck * &k * &d.chi_m;
        let holds = lhs == rhs;
        let (status, condition) = match (d.c == d.k as i64, holds) {
            (true, true) => (Status::ConsistentCase2, "chi(H) = 0"),
            (true, false) => (Status::NontrivialChiMismatch, "chi(H) = 0"),
            (false, true) => (Status::ConsistentCase3, "((c-k)k+1) chi(H) = (c-k)k chi(M)"),
            (false, false) => (
                Status::NontrivialChiMismatch,
                "((c-k)k+1) chi(H) = (c-k)k chi(M)",
            ),
        };
        (status, witness(condition.into(), lhs, rhs))
    };
    Ok(Verdict {
        status,
        witness: w,
        data: d.clone(),
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerVerdict {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctPowersReport {
    pub verdicts: Vec<PowerVerdict>,
    /// Pairs `(M, N)` with `M > N` for which `τ^M` and `τ^N` are not
    /// isotopic, because `τ^{M−N}` is obstructed.
    pub distinct_pairs: Vec<(u64, u64)>,
    pub all_distinct: bool,
    pub conclusion: String,
}

/// Verdicts for `τ^N`, `1 ≤ N ≤ n_max`, with the template's `N` replaced.
pub fn distinct_powers(template: &BWData, n_max: u64) -> Result<DistinctPowersReport, TwistError> {
    if n_max == 0 {
        return Err(TwistError::InvalidParameter(
            "N_max must be at least 1".into(),
        ));
    }
    let mut verdicts = Vec::new();
    for big_n in 1..=n_max {
        let mut d = template.clone();
        d.big_n = big_n;
        verdicts.push(PowerVerdict {
            big_n,
            status: decide_triviality(&d)?.status,
        });
    }
    let mut distinct_pairs = Vec::new();
    for m in 2..=n_max {
        for n in 1..m {
            if verdicts[(m - n - 1) as usize].status.is_nontrivial() {
                distinct_pairs.push((m, n));
            }
        }
    }
    let all_distinct = verdicts.iter().all(|v| v.status.is_nontrivial());
    let conclusion = if all_distinct {
        format!("all powers tau^1..tau^{n_max} are nontrivial and pairwise distinct")
    } else {
        "no obstruction from this method for some powers".to_string()
    };
    Ok(DistinctPowersReport {
        verdicts,
        distinct_pairs,
        all_distinct,
        conclusion,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    /// `χ_m` of the subcritical filling `W̃ × D²`.
    pub lhs: Rational,
    /// `χ_m` of the `k`-fold cover of the boundary.
    pub rhs: Rational,
    pub equal: bool,
}

/// Compares `(−1)^{n+1} k(χ(M) − χ(H))/2` with the covering formula at `m = k`.
pub fn subcritical_crosscheck(d: &BWData) -> Result<Crosscheck, TwistError> {
    if d.mu_p().is_zero() {
        return Err(MecError::ZeroDenominator.into());
    }
    let lhs = chi_m_subcritical(d.n, &(BigInt::from(d.k) * (&d.chi_m - &d.chi_h)));
    let rhs = chi_m_cover(d, d.k)?;
    let equal = lhs == rhs;
    Ok(Crosscheck { lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(n: u64, chi_m: i64, chi_h: i64, c: i64, k: u64, big_n: u64) -> BWData {
        BWData::new(n, chi_m, chi_h, c, k, big_n).unwrap()
    }

    #[test]
    fn cp3_hyperplane_is_consistent() {
        for big_n in 1..=6 {
            let v = decide_triviality(&bw(4, 4, 3, 4, 1, big_n)).unwrap();
            assert_eq!(v.status, Status::ConsistentCase3);
            assert_eq!(
                (v.witness.lhs.clone(), v.witness.rhs.clone()),
                (12.into(), 12.into())
            );
        }
    }

    #[test]
    fn quadric_is_obstructed() {
        let v = decide_triviality(&bw(4, 4, 4, 4, 2, 2)).unwrap();
        assert_eq!(v.status, Status::NontrivialChiMismatch);
        assert_eq!(
            (v.witness.lhs.clone(), v.witness.rhs.clone()),
            (20.into(), 16.into())
        );
        let v = decide_triviality(&bw(4, 4, 4, 4, 2, 1)).unwrap();
        assert_eq!(v.status, Status::NontrivialChiMismatch);
        assert!(!v.witness.k_divides_n);
    }

    #[test]
    fn negative_index() {
        for (chi_m, chi_h) in [(0, 0), (4, 3), (-7, 11)] {
            let v = decide_triviality(&bw(5, chi_m, chi_h, 1, 2, 2)).unwrap();
            assert_eq!(v.status, Status::NontrivialIndexNegative);
        }
        assert!(matches!(
            decide_triviality(&bw(3, 4, 3, 4, 1, 1)),
            Err(TwistError::InvalidDimension { n: 3 })
        ));
    }

    #[test]
    fn remaining_cases() {
        assert_eq!(
            decide_triviality(&bw(4, 0, 0, 3, 2, 3)).unwrap().status,
            Status::ConsistentCase1
        );
        assert_eq!(
            decide_triviality(&bw(4, 5, 0, 2, 2, 4)).unwrap().status,
            Status::ConsistentCase2
        );
        assert_eq!(
            decide_triviality(&bw(4, 5, 1, 2, 2, 4)).unwrap().status,
            Status::NontrivialChiMismatch
        );
    }

    #[test]
    fn equation_examples() {
        let e = theorem_equation(&bw(4, 4, 3, 4, 1, 1), 1).unwrap();
        assert_eq!((e.lhs, e.rhs), (12.into(), 12.into()));
        let e = theorem_equation(&bw(4, 4, 4, 4, 2, 2), 1).unwrap();
        assert_eq!((e.lhs, e.rhs), (40.into(), 32.into()));
        let e = theorem_equation(&bw(4, 0, 0, 4, 2, 2), 3).unwrap();
        assert_eq!((e.lhs, e.rhs), (0.into(), 0.into()));
        assert!(theorem_equation(&bw(4, 0, 0, 4, 2, 2), 0).is_err());
    }

    #[test]
    fn powers() {
        let quadric = distinct_powers(&bw(4, 4, 4, 4, 2, 1), 10).unwrap();
        assert!(quadric.all_distinct);
        assert_eq!(quadric.distinct_pairs.len(), 45);
        let hyperplane = distinct_powers(&bw(4, 4, 3, 4, 1, 1), 10).unwrap();
        assert!(!hyperplane.all_distinct);
        assert!(hyperplane.distinct_pairs.is_empty());
        let one = distinct_powers(&bw(4, 4, 4, 4, 2, 1), 1).unwrap();
        assert_eq!(one.verdicts.len(), 1);
    }

    #[test]
    fn crosscheck_examples() {
        let c = subcritical_crosscheck(&bw(4, 4, 3, 4, 1, 1)).unwrap();
        assert_eq!(
            (c.lhs.clone(), c.rhs.clone(), c.equal),
            (Rational::new(-1, 2), Rational::new(-1, 2), true)
        );
        let c = subcritical_crosscheck(&bw(4, 4, 4, 4, 2, 2)).unwrap();
        assert_eq!(
            (c.lhs.clone(), c.rhs.clone(), c.equal),
            (Rational::zero(), Rational::new(-2, 3), false)
        );
        // χ(H) = χ(M) = 0 satisfies every bullet's equation.
        assert!(subcritical_crosscheck(&bw(5, 0, 0, 7, 1, 3)).unwrap().equal);
        assert!(subcritical_crosscheck(&bw(4, 1, 1, 1, 2, 2)).is_err());
    }

    #[test]
    fn verdict_json_is_flat() {
        let v = decide_triviality(&bw(4, 4, 4, 4, 2, 2)).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "NontrivialChiMismatch");
        assert_eq!(json["lhs"], 20);
        assert_eq!(json["rhs"], 16);
        let back: Verdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }
}
