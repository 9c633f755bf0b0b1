//! Symplectic matrices in the coordinate order `(x_1..x_n, y_1..y_n)`.
//!
//! The standard form is `ω₀ = dx∧dy`, so `ω₀(u, v) = uᵀ Ω v` with
//! `Ω = [[0, I], [-I, 0]]`, and the complex structure `J₀ = -Ω` sends
//! `x_i` to `y_i`. A matrix is symplectic when `MᵀJ₀M = J₀`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::IndexError;

/// The complex-structure matrix `J₀ = [[0, -I], [I, 0]]` of half-dimension `n`.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(n + i, i)] = 1.0;
        j[(i, n + i)] = -1.0;
    }
    j
}

/// The matrix `Ω` of the standard symplectic form, `ω₀(u, v) = uᵀ Ω v`.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    -complex_structure(n)
}

/// Largest entry of `MᵀJ₀M − J₀` in absolute value.
pub fn symplectic_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() / 2;
    let j = complex_structure(n);
    (m.transpose() * &j * m - j).amax()
}

/// A real `2n × 2n` matrix together with its half-dimension. Serialized as
/// `{"n": n, "entries": [row-major]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct SymplecticMatrix {
    n: usize,
    entries: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Wraps a matrix, checking only its shape. Symplecticity is checked by
    /// [`is_symplectic`] or by the path constructors.
    pub fn new(entries: DMatrix<f64>) -> Result<Self, IndexError> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(IndexError::DimensionMismatch {
                expected: "a non-empty square matrix of even size".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        Ok(SymplecticMatrix {
            n: rows / 2,
            entries,
        })
    }

    pub fn from_row_major(n: usize, values: &[f64]) -> Result<Self, IndexError> {
        if n == 0 || values.len() != 4 * n * n {
            return Err(IndexError::DimensionMismatch {
                expected: format!("{} entries", 4 * n * n),
                found: format!("{} entries", values.len()),
            });
        }
        Self::new(DMatrix::from_row_slice(2 * n, 2 * n, values))
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            n,
            entries: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Planar rotation by `angle`, i.e. `exp(angle · J₀)` for `n = 1`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        SymplecticMatrix {
            n: 1,
            entries: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
        }
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn row_major(&self) -> Vec<f64> {
        self.entries.transpose().iter().copied().collect()
    }

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.entries)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<f64>,
}

impl From<SymplecticMatrix> for MatrixRepr {
    fn from(m: SymplecticMatrix) -> Self {
        MatrixRepr {
            n: m.n,
            entries: m.row_major(),
        }
    }
}

impl TryFrom<MatrixRepr> for SymplecticMatrix {
    type Error = IndexError;

    fn try_from(r: MatrixRepr) -> Result<Self, IndexError> {
        SymplecticMatrix::from_row_major(r.n, &r.entries)
    }
}

/// True iff `‖MᵀJ₀M − J₀‖_max ≤ tol`.
pub fn is_symplectic(m: &SymplecticMatrix, tol: f64) -> bool {
    m.defect() <= tol
}

/// Copies a `2m × 2m` block into `target` at block offset `offset`,
/// respecting the `(x..., y...)` coordinate order of both matrices.
pub(crate) fn embed_block(target: &mut DMatrix<f64>, block: &DMatrix<f64>, offset: usize) {
    let n = target.nrows() / 2;
    let m = block.nrows() / 2;
    let place = |i: usize| {
        if i < m {
            offset + i
        } else {
            n + offset + (i - m)
        }
    };
    for r in 0..2 * m {
        for c in 0..2 * m {
            target[(place(r), place(c))] = block[(r, c)];
        }
    }
}
