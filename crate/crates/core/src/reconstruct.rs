//! Mixed sampling and exact recovery.
//!
//! Given a change-of-basis matrix `A` and an index subset `J`, the weaving
//! operator `A(J)` keeps row `i` of `A` for `i` in `J` and the unit row
//! otherwise. Applying it to a coordinate vector produces the mixed
//! samples one obtains by reading indices in `J` through the second basis
//! and the rest through the first; inverting it recovers the vector. The
//! central-submatrix classification decides solvability: `det A(J)` equals
//! the determinant of the central submatrix of `A` at `J`.

use crate::cmatrix::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::linalg::solve;
use crate::precision::PrecisionConfig;

/// Samples of a vector read through a mixture of two bases.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedSamples {
    /// Indices sampled through the second basis.
    pub j: IndexSet,
    /// One sample per coordinate, in index order.
    pub values: Vec<C64>,
}

impl MixedSamples {
    pub fn new(j: IndexSet, values: Vec<C64>) -> Result<Self> {
        if values.len() != j.ambient() {
            return Err(Error::DimensionMismatch {
                left: format!("ambient of {}", j.ambient()),
                right: format!("{} samples", values.len()),
                context: "mixed samples",
            });
        }
        Ok(MixedSamples { j, values })
    }
}

/// The weaving operator `A(J)`: row `i` of `a` where `i` is in `j`, the
/// unit row elsewhere. The empty subset yields the identity.
pub fn weaving_operator(a: &CMatrix, j: &IndexSet) -> Result<CMatrix> {
    let n = a.require_square()?;
    if j.ambient() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("subset over {}", j.ambient()),
            context: "weaving operator",
        });
    }
    Ok(CMatrix::from_fn(n, n, |i, k| {
        if j.contains(i) {
            a[(i, k)]
        } else if i == k {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Mixed samples of `x`: `A(J) x` componentwise, so index `i` reads
/// `(A x)_i` when `i` is in `j` and `x_i` otherwise.
pub fn sample(a: &CMatrix, x: &[C64], j: &IndexSet) -> Result<MixedSamples> {
    let n = a.require_square()?;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("vector of {}", x.len()),
            context: "mixed sampling",
        });
    }
    let op = weaving_operator(a, j)?;
    let values = op.mul_vec(x)?;
    MixedSamples::new(j.clone(), values)
}

/// Recovers the coordinate vector from its mixed samples by solving
/// `A(J) x = y`. A singular weaving operator means the subset does not
/// weave and recovery is impossible; the subset is returned as witness.
pub fn recover(a: &CMatrix, samples: &MixedSamples, cfg: &PrecisionConfig) -> Result<Vec<C64>> {
    let op = weaving_operator(a, &samples.j)?;
    match solve(&op, &samples.values, cfg) {
        Ok(x) => Ok(x),
        Err(Error::SingularSystem { .. }) => Err(Error::RecoveryImpossible {
            witness: samples.j.clone(),
        }),
        Err(e) => Err(e),
    }
}

/// Recovers a vector sampled through two explicit bases: index `i` of
/// `mixed` holds `(A x)_i` for `i` in `j` and `(B x)_i` otherwise.
///
/// `b` must be invertible on its own, mirroring the requirement that the
/// second family is a basis; the stacked system is then solved and its
/// own singularity reported as a failed weaving witness.
pub fn two_matrix_recover(
    a: &CMatrix,
    b: &CMatrix,
    j: &IndexSet,
    mixed: &[C64],
    cfg: &PrecisionConfig,
) -> Result<Vec<C64>> {
    let n = a.require_square()?;
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("{}x{}", b.nrows(), b.ncols()),
            context: "two-basis recovery",
        });
    }
    if j.ambient() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("subset over {}", j.ambient()),
            context: "two-basis recovery",
        });
    }
    if mixed.len() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{n}x{n}"),
            right: format!("vector of {}", mixed.len()),
            context: "two-basis recovery",
        });
    }
    crate::linalg::invertibility(b, cfg).and_then(|verdict| {
        if verdict.status != crate::linalg::VerdictStatus::Invertible {
            return Err(Error::SingularSystem { verdict });
        }
        Ok(())
    })?;
    let stacked = CMatrix::from_fn(n, n, |i, k| {
        if j.contains(i) {
            a[(i, k)]
        } else {
            b[(i, k)]
        }
    });
    match solve(&stacked, mixed, cfg) {
        Ok(x) => Ok(x),
        Err(Error::SingularSystem { .. }) => Err(Error::RecoveryImpossible { witness: j.clone() }),
        Err(e) => Err(e),
    }
}
