//! Robbin–Salamon index of paths of symplectic matrices, computed from crossing forms.
//!
//! A path is sampled on a grid and can be evaluated anywhere through its
//! source: an analytic model, cubic Hermite interpolation of samples, a
//! block-diagonal product or a catenation. Crossings are located by a
//! Lipschitz branch-and-bound on the smallest singular value of `ψ(t) − I`,
//! which sees the even-order zeros of `det(ψ(t) − I)` that a sign-change scan
//! would miss. Directions fixed by the whole path are split off before the
//! search (see [`crossing`]), so constant-identity factors contribute nothing.

mod crossing;
mod index;
pub mod io;
mod matrix;
mod models;
mod path;

pub use crossing::{crossing_signature, find_crossings, find_crossings_with, CrossingRecord};
pub use index::{
    iterated_indices, mean_index, perturbation_suggestion, rs_index, rs_index_with, IndexReport,
};
pub use matrix::{
    complex_structure, is_symplectic, symplectic_defect, symplectic_form, SymplecticMatrix,
};
pub use models::{
    bw_exceptional_model, bw_principal_model, exceptional_index_formula, principal_index_formula,
};
pub use path::{
    block_diag_path, catenate, constant_path, flow_path, hyperbolic_path, iterate, rotation_path,
    DerivativeMode, Side, SymplecticPath, MIN_INTERVALS,
};

/// Numerical thresholds used throughout the engine.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Bound on `‖MᵀJ₀M − J₀‖_max` for accepted samples.
    pub symplectic: f64,
    /// A candidate time is a crossing when `|det(ψ(t) − I)|` is at most this.
    pub det: f64,
    /// Singular values and form eigenvalues at most this count as zero.
    pub kernel: f64,
    /// Golden-section steps used to locate each crossing.
    pub refine_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symplectic: 1e-9,
            det: 1e-10,
            kernel: 1e-8,
            refine_iters: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("sample {index} at t = {t} is not symplectic (defect {defect:e})")]
    NonSymplecticSample { index: usize, t: f64, defect: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("path needs at least {min} grid intervals, got {samples}")]
    TooFewSamples { samples: usize, min: usize },
    #[error("parts are defined on different grids")]
    IncompatibleGrids,
    #[error("empty input")]
    EmptyInput,
    #[error("cover m = {m} of a period-{big_n} orbit is principal, not exceptional")]
    PrincipalNotExceptional { m: u64, big_n: u64 },
    #[error("crossings near t = {t1} and t = {t2} are not separated at grid spacing {spacing:e}; refine the grid")]
    UnresolvedCrossingCluster { t1: f64, t2: f64, spacing: f64 },
    #[error("crossing at t = {t} has |det| = {det:e} but no singular value below the kernel threshold (smallest {smallest_singular_value:e})")]
    AmbiguousKernel {
        t: f64,
        smallest_singular_value: f64,
        det: f64,
    },
    #[error("degenerate crossing at t = {t}: crossing form spectrum {spectrum:?}; perturb the path or refine the grid")]
    DegenerateCrossing { t: f64, spectrum: Vec<f64> },
    #[error("endpoint of the first path differs from the start of the second by {defect:e}")]
    EndpointMismatch { defect: f64 },
    #[error("path is not a loop: |ψ(T) − ψ(0)| = {defect:e}")]
    NotALoop { defect: f64 },
    #[error("iteration bound violated at m = {m}: |μ(ψ^m) − mΔ| = {deviation} exceeds {bound}")]
    IterationBoundViolated {
        m: usize,
        deviation: f64,
        bound: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot read path: {0}")]
    Parse(String),
}
