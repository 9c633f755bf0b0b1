//! Closed formulas for the mean Euler characteristic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{big_int_json, HalfInteger, Rational};

use super::MecError;

fn parity_sign(n: u64) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(−1)^{n+1}`.
fn filling_sign(n: u64) -> Rational {
    Rational::from_integer(-parity_sign(n))
}

/// Data of a Boothby–Wang orbibundle over `M` with a period-`N` action
/// whose exceptional locus is `H`; `2n` is the dimension of the filling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BWData {
    pub n: u64,
    #[serde(with = "big_int_json")]
    pub chi_m: BigInt,
    #[serde(with = "big_int_json")]
    pub chi_h: BigInt,
    pub c: i64,
    pub k: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
}

impl BWData {
    pub fn new(
        n: u64,
        chi_m: impl Into<BigInt>,
        chi_h: impl Into<BigInt>,
        c: i64,
        k: u64,
        big_n: u64,
    ) -> Result<Self, MecError> {
        if n < 3 {
            return Err(MecError::InvalidParameter(format!(
                "n must be at least 3, got {n}"
            )));
        }
        if k == 0 || big_n == 0 {
            return Err(MecError::InvalidParameter(
                "k and N must be positive".into(),
            ));
        }
        Ok(BWData {
            n,
            chi_m: chi_m.into(),
            chi_h: chi_h.into(),
            c,
            k,
            big_n,
        })
    }

    /// `ℓ = gcd(N, k)`.
    pub fn ell(&self) -> u64 {
        Integer::gcd(&self.big_n, &self.k)
    }

    /// `N(c − k) + k`.
    pub fn principal_sum(&self) -> BigInt {
        let k = BigInt::from(self.k);
        BigInt::from(self.big_n) * (BigInt::from(self.c) - &k) + k
    }

    /// `μ_P = 2(N(c − k) + k)/ℓ`, the index of the smallest contractible
    /// cover of a principal orbit.
    pub fn mu_p(&self) -> BigInt {
        self.principal_sum() * 2 / BigInt::from(self.ell())
    }
}

/// `(−1)^{n+1} χ(W)/2` for a subcritical filling `W` of dimension `2n`.
pub fn chi_m_subcritical(n: u64, chi_w: &BigInt) -> Rational {
    filling_sign(n) * Rational::new(chi_w.clone(), 2)
}

/// `±χ(B)/2`, the mean Euler characteristic of `H^{S¹}_*(B)` from the Gysin sequence.
pub fn gysin_chi_m(chi_b: &BigInt, index_positive: bool) -> Rational {
    let half = Rational::new(chi_b.clone(), 2);
    if index_positive {
        half
    } else {
        -half
    }
}

/// `(−1)^{n+1} ((N − ℓ)χ(H) + ℓχ(M)) / (2|N(c − k) + k|)`.
pub fn chi_m_bw(d: &BWData) -> Result<Rational, MecError> {
    let denom: BigInt = d.principal_sum().abs() * 2;
    if denom.is_zero() {
        return Err(MecError::ZeroDenominator);
    }
    let ell = BigInt::from(d.ell());
    let numer = (BigInt::from(d.big_n) - &ell) * &d.chi_h + ell * &d.chi_m;
    Ok(filling_sign(d.n) * Rational::new(numer, denom))
}

/// `(−1)^{n+1} ((N/ℓ − 1)χ^{S¹}(N_{T₁}) + χ^{S¹}(N_{T₂})) / |μ_P|`.
pub fn chi_m_contact(
    n: u64,
    big_n: u64,
    ell: u64,
    chi_s1_t1: &BigInt,
    chi_s1_t2: &BigInt,
    mu_p: &BigInt,
) -> Result<Rational, MecError> {
    if mu_p.is_zero() {
        return Err(MecError::ZeroDenominator);
    }
    if ell == 0 || !big_n.is_multiple_of(ell) {
        return Err(MecError::InvalidParameter(format!(
            "ℓ = {ell} must divide N = {big_n}"
        )));
    }
    let numer = BigInt::from(big_n / ell - 1) * chi_s1_t1 + chi_s1_t2;
    Ok(filling_sign(n) * Rational::new(numer, mu_p.abs()))
}

/// Mean Euler characteristic of the connected `m`-fold cover:
/// `(−1)^{n+1} ((N/ℓ − gcd(N, m))χ(H) + gcd(N, m)χ(M)) / |μ_P|`.
pub fn chi_m_cover(d: &BWData, m: u64) -> Result<Rational, MecError> {
    if m == 0 {
        return Err(MecError::InvalidParameter(
            "cover degree must be at least 1".into(),
        ));
    }
    let mu_p = d.mu_p();
    if mu_p.is_zero() {
        return Err(MecError::ZeroDenominator);
    }
    let g = BigInt::from(Integer::gcd(&d.big_n, &m));
    let numer = (BigInt::from(d.big_n / d.ell()) - &g) * &d.chi_h + g * &d.chi_m;
    Ok(filling_sign(d.n) * Rational::new(numer, mu_p.abs()))
}

/// `(nN + 1) / (2((n − 1)N + 2))` for the Brieskorn manifold `Σ(N, 2, …, 2)`,
/// defined for `n` even and `N` odd.
pub fn chi_m_brieskorn(n: u64, big_n: u64) -> Result<Rational, MecError> {
    if !n.is_multiple_of(2) || big_n.is_multiple_of(2) || n == 0 {
        return Err(MecError::ParityViolation { n, big_n });
    }
    let (n, big_n) = (BigInt::from(n), BigInt::from(big_n));
    let numer = &n * &big_n + 1;
    let denom = ((n - 1) * big_n + 2) * 2;
    Ok(Rational::new(numer, denom))
}

/// Whether an orbit family of index `mu_t` and quotient dimension `dimq_t`
/// that is an even cover of the simple family `(mu_half, dimq_half)` is bad:
/// `μ_T − ½dim_T − μ_half + ½dim_half` is odd.
pub fn is_bad_orbit(
    mu_t: &HalfInteger,
    dimq_t: i64,
    mu_half: &HalfInteger,
    dimq_half: i64,
) -> Result<bool, MecError> {
    if dimq_t % 2 != 0 || dimq_half % 2 != 0 {
        return Err(MecError::InvalidParameter(
            "quotient dimensions must be even".into(),
        ));
    }
    let twice =
        mu_t.twice_value() - mu_half.twice_value() - BigInt::from(dimq_t) + BigInt::from(dimq_half);
    if Integer::is_odd(&twice) {
        return Err(MecError::NonIntegerCombination);
    }
    Ok(Integer::is_odd(&(twice / 2)))
}

fn require_k1(d: &BWData) -> Result<(), MecError> {
    if d.k != 1 {
        return Err(MecError::UnsupportedK { k: d.k });
    }
    Ok(())
}

/// `(N − 1)χ(H) + χ(M)`, the Euler characteristic of the inertia orbifold (`k = 1`).
pub fn inertia_chi(d: &BWData) -> Result<BigInt, MecError> {
    require_k1(d)?;
    Ok(BigInt::from(d.big_n - 1) * &d.chi_h + &d.chi_m)
}

/// `c − 1 + 1/N`, the pairing of the orbifold first Chern class with the base (`k = 1`).
pub fn c1_orb_pairing(d: &BWData) -> Result<Rational, MecError> {
    require_k1(d)?;
    Ok(Rational::from_integer(d.c - 1) + Rational::new(1, d.big_n as i64))
}
