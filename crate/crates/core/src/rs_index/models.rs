//! Linearized Reeb flows of Boothby–Wang bundles as model paths.
//!
//! On a prequantization bundle of degree `c` over a base that itself
//! carries a period-`N` circle action, the linearized flow along an orbit
//! splits into a base factor, a normal rotation and fixed directions.

use std::f64::consts::PI;

use super::matrix::SymplecticMatrix;
use super::path::{block_diag_path, constant_path, rotation_path, SymplecticPath};
use super::IndexError;

fn check(n: u64, samples: usize) -> Result<(), IndexError> {
    if n < 3 {
        return Err(IndexError::InvalidParameter(format!(
            "n must be at least 3, got {n}"
        )));
    }
    if samples < 64 {
        return Err(IndexError::TooFewSamples { samples, min: 64 });
    }
    Ok(())
}

fn assemble(
    n: u64,
    base_rate: f64,
    normal_rate: f64,
    duration: f64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    let mut parts = vec![
        rotation_path(base_rate, duration, samples)?,
        rotation_path(normal_rate, duration, samples)?,
    ];
    if n > 3 {
        let id = SymplecticMatrix::identity((n - 3) as usize);
        parts.push(constant_path(&id, duration, samples)?);
    }
    block_diag_path(&parts)
}

/// Loop over `[0, 2π]` of half-dimension `n − 1` modelling a principal
/// orbit: rotation blocks of winding `(c − k)N` and `k`, then `n − 3`
/// identity blocks.
pub fn bw_principal_model(
    n: u64,
    c: i64,
    k: u64,
    big_n: u64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    check(n, samples)?;
    if k == 0 || big_n == 0 {
        return Err(IndexError::InvalidParameter(
            "k and N must be positive".into(),
        ));
    }
    let base = (c - k as i64) as f64 * big_n as f64;
    assemble(n, base, k as f64, 2.0 * PI, samples)
}

/// Path over `[0, 2πm/N]` modelling the `m`-th cover of an exceptional
/// orbit when `k = 1`: base winding rate `(c − 1)N`, normal rate 1 and
/// identity padding.
pub fn bw_exceptional_model(
    n: u64,
    c: i64,
    big_n: u64,
    m: u64,
    samples: usize,
) -> Result<SymplecticPath, IndexError> {
    check(n, samples)?;
    if big_n < 2 || m == 0 {
        return Err(IndexError::InvalidParameter("need N ≥ 2 and m ≥ 1".into()));
    }
    if m.is_multiple_of(big_n) {
        return Err(IndexError::PrincipalNotExceptional { m, big_n });
    }
    let duration = 2.0 * PI * m as f64 / big_n as f64;
    assemble(n, (c - 1) as f64 * big_n as f64, 1.0, duration, samples)
}

/// `2(N(c − k) + k)`, the index of a principal orbit.
pub fn principal_index_formula(c: i64, k: i64, big_n: i64) -> i64 {
    2 * (big_n * (c - k) + k)
}

/// `2(c − 1)m + 2⌊m/N⌋ + 1`, the index of the `m`-th cover of an exceptional orbit.
pub fn exceptional_index_formula(c: i64, big_n: i64, m: i64) -> i64 {
    2 * (c - 1) * m + 2 * m.div_euclid(big_n) + 1
}
