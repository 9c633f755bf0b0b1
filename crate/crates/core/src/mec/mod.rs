//! Mean Euler characteristics, in exact arithmetic.
//!
//! The mean Euler characteristic of a graded space with dimensions `b_i` is
//! the average of the liminf and limsup of `(1/N) Σ_{i=−N}^{N} (−1)^i b_i`.
//! For eventually periodic data it is the signed sum over one period
//! divided by the period, which is how every exact value here is computed;
//! [`chi_m_window`] evaluates the definition directly as a cross-check.

mod e1;
mod formulas;
mod graded;

pub use e1::{
    bad_orbit_pairs, build_e1_strata_bw, check_periodicity, chi_m_from_e1, e1_page, graded_from_e1,
    BadOrbitCheck, E1Page, Stratum, StratumKind,
};
pub use formulas::{
    c1_orb_pairing, chi_m_brieskorn, chi_m_bw, chi_m_contact, chi_m_cover, chi_m_subcritical,
    gysin_chi_m, inertia_chi, is_bad_orbit, BWData,
};
pub use graded::{chi_m_periodic, chi_m_window, tensor_cp_infinity, GradedDims, Tail};

use crate::rs_index::IndexError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MecError {
    #[error("graded space has a periodic tail, so its Euler characteristic is not defined")]
    InfiniteSupport,
    #[error("graded space has no periodic tail")]
    MissingTail,
    #[error("invalid tail: {0}")]
    InvalidTail(String),
    #[error("N(c − k) + k = 0, the formula has a zero denominator")]
    ZeroDenominator,
    #[error("need n even and N odd, got n = {n}, N = {big_n}")]
    ParityViolation { n: u64, big_n: u64 },
    #[error("index combination is not an integer")]
    NonIntegerCombination,
    #[error("stratum {label} has a half-integer column")]
    NonIntegerDegree { label: String },
    #[error("only k = 1 is supported here, got k = {k}")]
    UnsupportedK { k: u64 },
    #[error("strata do not contain a full period (no principal stratum)")]
    IncompletePeriod,
    #[error("stratum {label} breaks the periodicity of the page")]
    NotPeriodic { label: String },
    #[error("Betti numbers of {space} have alternating sum {found}, expected {expected}")]
    BettiMismatch {
        space: String,
        expected: String,
        found: String,
    },
    #[error(
        "index of cover m = {cover}: closed form gives {formula}, crossing forms give {oracle}"
    )]
    OracleMismatch {
        cover: u64,
        formula: i64,
        oracle: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Index(#[from] IndexError),
}
