//! Euler characteristics of the hypersurface families used as examples,
//! and the polynomial `f_n(d)` that governs the Fermat family.
//!
//! Two families are provided:
//!
//! - [`cp_hypersurface`]: `M = ℂP^{n−1}` with `H` a smooth hypersurface of
//!   degree `k`, so `χ(M) = n`, `χ(H) = ((1−k)^n − 1)/k + n` and `c = n`.
//! - [`fermat_pair`]: `M` the Fermat hypersurface of degree `d` in `ℂPⁿ`
//!   and `H = M ∩ {z_n = 0}`, a hypersurface of degree `k = 1` in `M`, with
//!   `c = n + 1 − d`.
//!
//! Records use the period `N = k` unless another value is requested.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::mec::{BWData, MecError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown family `{0}` (known: cp-hypersurface, fermat-pair)")]
    UnknownFamily(String),
    #[error("Betti number {0} does not fit in 64 bits")]
    BettiOverflow(String),
    #[error("scan failed at n = {n}, d = {d}: {reason}")]
    ScanFailure { n: u64, d: u64, reason: String },
    #[error(transparent)]
    Data(#[from] MecError),
}

/// One example with its Euler characteristic data and Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub name: String,
    pub family: String,
    pub params: Vec<u64>,
    pub data: BWData,
    /// Betti numbers of `M` in degrees `0..=dim_ℝ M`.
    pub betti_m: Vec<u64>,
    /// Betti numbers of `H` in degrees `0..=dim_ℝ H`.
    pub betti_h: Vec<u64>,
    pub provenance: String,
}

fn pow(base: i64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `((1 − k)^e − 1)/k + e`, the Euler characteristic of a smooth degree-`k`
/// hypersurface in `ℂP^{e−1}`. The division is exact.
pub fn hypersurface_chi(e: u64, k: u64) -> BigInt {
    let k_big = BigInt::from(k);
    let numer: BigInt = pow(1 - k as i64, e) - 1;
    debug_assert!(Integer::is_multiple_of(&numer, &k_big));
    numer / k_big + BigInt::from(e)
}

/// Betti numbers of a smooth hypersurface of complex dimension `dim` with
/// Euler characteristic `chi`: those of `ℂP^dim` outside the middle degree,
/// and whatever the middle degree needs to realise `chi`.
pub fn hypersurface_betti(dim: u64, chi: &BigInt) -> Result<Vec<u64>, CatalogError> {
    let len = (2 * dim + 1) as usize;
    let mut betti: Vec<u64> = (0..len).map(|i| u64::from(i % 2 == 0)).collect();
    let d = BigInt::from(dim);
    let middle = if dim.is_multiple_of(2) {
        chi - &d
    } else {
        &d + 1 - chi
    };
    if middle.is_negative() {
        return Err(CatalogError::InvalidParameter(format!(
            "χ = {chi} is impossible in complex dimension {dim}"
        )));
    }
    betti[dim as usize] = middle
        .to_u64()
        .ok_or_else(|| CatalogError::BettiOverflow(middle.to_string()))?;
    Ok(betti)
}

/// `M = ℂP^{n−1}`, `H` of degree `k`, period `N = k`.
pub fn cp_hypersurface(n: u64, k: u64) -> Result<ExampleRecord, CatalogError> {
    cp_hypersurface_with_period(n, k, k)
}

pub fn cp_hypersurface_with_period(
    n: u64,
    k: u64,
    big_n: u64,
) -> Result<ExampleRecord, CatalogError> {
    if n < 4 || k == 0 || big_n == 0 {
        return Err(CatalogError::InvalidParameter(format!(
            "need n ≥ 4, k ≥ 1 and N ≥ 1, got n = {n}, k = {k}, N = {big_n}"
        )));
    }
    let chi_m = BigInt::from(n);
    let chi_h = hypersurface_chi(n, k);
    let betti_m = (0..=2 * (n - 1)).map(|i| u64::from(i % 2 == 0)).collect();
    let betti_h = hypersurface_betti(n - 2, &chi_h)?;
    Ok(ExampleRecord {
        name: format!("cp-hypersurface({n},{k})"),
        family: "cp-hypersurface".into(),
        params: vec![n, k],
        data: BWData::new(n, chi_m, chi_h, n as i64, k, big_n)?,
        betti_m,
        betti_h,
        provenance: format!(
            "M = CP^{}, H a smooth hypersurface of degree {k}; chi(M) = n, chi(H) = ((1-k)^n - 1)/k + n, c = n",
            n - 1
        ),
    })
}

/// `M = H_d^{n−1} ⊂ ℂPⁿ`, `H = H_d^{n−2} = M ∩ {z_n = 0}`, `k = N = 1`.
pub fn fermat_pair(n: u64, d: u64) -> Result<ExampleRecord, CatalogError> {
    if n < 4 || d == 0 {
        return Err(CatalogError::InvalidParameter(format!(
            "need n ≥ 4 and d ≥ 1, got n = {n}, d = {d}"
        )));
    }
    let chi_m = hypersurface_chi(n + 1, d);
    let chi_h = hypersurface_chi(n, d);
    let betti_m = hypersurface_betti(n - 1, &chi_m)?;
    let betti_h = hypersurface_betti(n - 2, &chi_h)?;
    let c = n as i64 + 1 - d as i64;
    Ok(ExampleRecord {
        name: format!("fermat-pair({n},{d})"),
        family: "fermat-pair".into(),
        params: vec![n, d],
        data: BWData::new(n, chi_m, chi_h, c, 1, 1)?,
        betti_m,
        betti_h,
        provenance: format!(
            "M = Fermat hypersurface of degree {d} in CP^{n}, H = M cut by z_{n} = 0 (degree 1 in M); c = n + 1 - d"
        ),
    })
}

/// Looks up a record by family name and parameters `[n, k]` or `[n, d]`,
/// optionally overriding the period `N`.
pub fn lookup(
    family: &str,
    params: &[u64],
    big_n: Option<u64>,
) -> Result<ExampleRecord, CatalogError> {
    let [a, b] = params else {
        return Err(CatalogError::InvalidParameter(format!(
            "{family} takes two parameters, got {}",
            params.len()
        )));
    };
    let mut rec = match family {
        "cp-hypersurface" => cp_hypersurface(*a, *b)?,
        "fermat-pair" => fermat_pair(*a, *b)?,
        other => return Err(CatalogError::UnknownFamily(other.to_string())),
    };
    if let Some(big_n) = big_n {
        if big_n == 0 {
            return Err(CatalogError::InvalidParameter("N must be positive".into()));
        }
        rec.data.big_n = big_n;
    }
    Ok(rec)
}

/// The records listed by default: `cp-hypersurface(n, k)` for
/// `4 ≤ n ≤ 8`, `1 ≤ k ≤ 6`, and `fermat-pair(n, d)` for `4 ≤ n ≤ 12`,
/// `1 ≤ d ≤ n`.
pub fn default_catalog() -> Result<Vec<ExampleRecord>, CatalogError> {
    let mut out = Vec::new();
    for n in 4..=8 {
        for k in 1..=6 {
            out.push(cp_hypersurface(n, k)?);
        }
    }
    for n in 4..=12 {
        for d in 1..=n {
            out.push(fermat_pair(n, d)?);
        }
    }
    Ok(out)
}

/// `f_n(d) = (1 − d)^n (1 + nd − d²) − (1 − d²)`.
pub fn f_poly(n: u64, d: i64) -> BigInt {
    let d_big = BigInt::from(d);
    let n_big = BigInt::from(n);
    let sq = &d_big * &d_big;
    pow(1 - d, n) * (BigInt::one() + &n_big * &d_big - &sq) - (BigInt::one() - sq)
}

/// `f_n'(d) = (1 − d)^{n−1} d((n + 2)d − (n² + n + 2)) + 2d`.
pub fn f_poly_deriv(n: u64, d: f64) -> f64 {
    let nf = n as f64;
    (1.0 - d).powi(n as i32 - 1) * (d * ((nf + 2.0) * d - (nf * nf + nf + 2.0))) + 2.0 * d
}

/// Same as [`f_poly_deriv`] in exact integers at an integer point.
pub fn f_poly_deriv_exact(n: u64, d: i64) -> BigInt {
    let n_big = BigInt::from(n);
    let d_big = BigInt::from(d);
    let inner = &d_big * ((&n_big + 2) * &d_big - (&n_big * &n_big + &n_big + 2));
    pow(1 - d, n - 1) * inner + d_big * 2
}

/// Per-`n` outcome of [`fermat_nonvanishing_scan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatScanRow {
    pub n: u64,
    /// `f_n(d)` for `d = 2, …, n`, as decimal strings.
    pub values: Vec<String>,
    pub f_at_2_identity: bool,
    pub f_at_n_minus_1_identity: bool,
    pub f_at_n_identity: bool,
    /// `f_n(2) > 0` for even `n`, `< 0` for odd `n`.
    pub f_at_2_sign: bool,
    /// `f_n'` has the sign of `(−1)^n` at every integer of `[2, n − 2]`.
    pub derivative_sign: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatScanReport {
    pub n_max: u64,
    pub rows: Vec<FermatScanRow>,
}

/// Checks, for `4 ≤ n ≤ n_max`, that `f_n(d) ≠ 0` for `2 ≤ d ≤ n`, that
/// `f_n(2) = 3 + (−1)^n(2n − 3)`, `f_n(n − 1) = ((2 − n)^{n−1} − 1)(2 − n)n`
/// and `f_n(n) = (1 − n)^n − 1 + n²`, and the sign pattern of `f_n(2)` and
/// of `f_n'` on the integers of `[2, n − 2]`.
///
/// The monotonicity argument concerns the real interval `[2, n − 2]`; only
/// its integer points are checked, which is what nonvanishing at integers needs.
pub fn fermat_nonvanishing_scan(n_max: u64) -> Result<FermatScanReport, CatalogError> {
    if n_max < 4 {
        return Err(CatalogError::InvalidParameter(format!(
            "n_max must be at least 4, got {n_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in 4..=n_max {
        let ni = n as i64;
        let fail = |d: u64, reason: &str| CatalogError::ScanFailure {
            n,
            d,
            reason: reason.to_string(),
        };
        let values: Vec<BigInt> = (2..=ni).map(|d| f_poly(n, d)).collect();
        if let Some(i) = values.iter().position(Zero::is_zero) {
            return Err(fail(i as u64 + 2, "f_n(d) vanishes"));
        }
        let even = n % 2 == 0;
        let f2 = &values[0];
        let id2 = *f2 == BigInt::from(3 + if even { 2 * ni - 3 } else { 3 - 2 * ni });
        let id_nm1 =
            f_poly(n, ni - 1) == (pow(2 - ni, n - 1) - 1) * BigInt::from(2 - ni) * BigInt::from(ni);
        let id_n = f_poly(n, ni) == pow(1 - ni, n) - 1 + BigInt::from(ni * ni);
        let sign2 = if even {
            f2.is_positive()
        } else {
            f2.is_negative()
        };
        let deriv_sign = (2..=ni - 2).all(|d| {
            let v = f_poly_deriv_exact(n, d);
            if even {
                v.is_positive()
            } else {
                v.is_negative()
            }
        });
        for (ok, d, what) in [
            (id2, 2, "f_n(2) identity"),
            (id_nm1, n - 1, "f_n(n-1) identity"),
            (id_n, n, "f_n(n) identity"),
            (sign2, 2, "sign of f_n(2)"),
            (deriv_sign, 2, "sign of f_n' on [2, n-2]"),
        ] {
            if !ok {
                return Err(fail(d, what));
            }
        }
        rows.push(FermatScanRow {
            n,
            values: values.iter().map(BigInt::to_string).collect(),
            f_at_2_identity: id2,
            f_at_n_minus_1_identity: id_nm1,
            f_at_n_identity: id_n,
            f_at_2_sign: sign2,
            derivative_sign: deriv_sign,
        });
    }
    Ok(FermatScanReport { n_max, rows })
}
