//! Exact integer matrices, relabeling and path matrices, primitivity and
//! spectral radius brackets.

mod boolean;
mod matrix;
mod spectral;

use thiserror::Error;

pub use boolean::{is_primitive, min_positive_power, wielandt_bound, BoolMatrix};
pub use matrix::IntMatrix;
pub use spectral::{collatz_wielandt, spectral_radius, spectral_radius_with, SpectralBracket, SpectralOptions};

use crate::diagram::AllowedPath;
use crate::perm::{LabeledPermutation, Letter, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("matrix has negative entries")]
    Negative,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("spectral iteration budget exhausted; best bracket width {}", crate::rational::to_decimal(&.0.width(), 20))]
    NotConverged(SpectralBracket),
    #[error("endpoints define different unlabeled permutations: ({start}) vs ({end})")]
    NotUnlabeledEqual { start: String, end: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `φ(β) = end.π_t⁻¹(start.π_t(β))`: the end letter sitting where `β` sits on the start top row.
///
/// Both permutations must already share the alphabet.
pub fn relabeling(start: &LabeledPermutation, end: &LabeledPermutation) -> Vec<Letter> {
    let start_pos = start.top_positions();
    (0..start.len()).map(|b| end.top()[start_pos[b]]).collect()
}

/// Permutation matrix `P` with `P[α][β] = 1` iff `φ(β) = α`.
pub fn relabel_matrix(start: &LabeledPermutation, end: &LabeledPermutation) -> Result<IntMatrix, LinalgError> {
    let end = end.reindexed(start.alphabet())?;
    if !start.equal_unlabeled(&end) {
        return Err(LinalgError::NotUnlabeledEqual { start: start.to_string(), end: end.to_string() });
    }
    let mut p = IntMatrix::zeros(start.len());
    for (beta, alpha) in relabeling(start, &end).into_iter().enumerate() {
        p.set(alpha.index(), beta, 1);
    }
    Ok(p)
}

/// `V_γ = V_{e_1} ⋯ V_{e_k} · P`, first edge leftmost.
pub fn path_matrix(path: &AllowedPath) -> IntMatrix {
    let n = path.start().len();
    let mut v = IntMatrix::identity(n);
    for e in path.edges() {
        if let Some((w, l)) = e.winner_loser() {
            // Right-multiplying by Id + E_{w,l} adds column w into column l.
            for i in 0..n {
                let add = v.get(i, w.index()).clone();
                if !num_traits::Zero::is_zero(&add) {
                    let cur = v.get(i, l.index()) + add;
                    v.set(i, l.index(), cur);
                }
            }
        }
    }
    let p = relabel_matrix(path.start(), path.end()).expect("allowed path endpoints are unlabeled-equal");
    v.mul_ref(&p)
}
