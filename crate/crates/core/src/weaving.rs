//! Classification of matrices by invertibility of all central submatrices.
//!
//! A pair of bases is woven exactly when the change-of-basis matrix lies in
//! the class of matrices whose central (principal) submatrices are all
//! invertible. [`classify_class_w`] decides membership and returns a
//! certificate carrying the worst subset found, the evidence margins, and
//! the precision policy used. Companions cover the derived questions:
//! wovenness of a concrete basis pair, wovenness up to a column
//! permutation, nonvanishing of all minors, the symmetry transforms that
//! preserve the class, and finite perturbations of the identity.
//!
//! Enumeration walks subset bitmasks in ascending order in fixed-size
//! blocks. Blocks are evaluated in parallel but reduced sequentially, so
//! results do not depend on the worker count. A singular witness stops the
//! scan at the end of its block, and the reported witness is the smallest
//! mask in it.

use rayon::prelude::*;
use serde::Serialize;

use crate::cmatrix::{C64, CMatrix};
use crate::error::{Error, Result};
use crate::index_set::{nonempty_masks, IndexSet};
use crate::linalg::{
    ball_det, det_double, finish_raw_det, hermitian_eigen_range, invertibility, sigma_extremes,
    verdict_from_sigma, VerdictStatus,
};
use crate::precision::{Mode, PrecisionConfig};

const BLOCK: u64 = 8192;

/// Limits for the classification scans.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeavingOptions {
    /// Largest matrix size accepted by the exponential scans.
    pub max_n: usize,
}

impl Default for WeavingOptions {
    fn default() -> Self {
        WeavingOptions { max_n: 24 }
    }
}

/// Membership verdict for the class of matrices with all central
/// submatrices invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassStatus {
    InW,
    NotInW,
    Inconclusive,
}

/// Structural argument that settled membership without enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FastPath {
    /// Triangular with certified nonzero diagonal.
    Triangular,
    /// Hermitian and definite (either sign).
    HermitianDefinite,
}

/// Certificate produced by [`classify_class_w`].
///
/// `min_sigma` and `min_abs_det` are minima over the subsets actually
/// evaluated. Enumeration evaluates every nonempty subset (up to the block
/// containing a singular witness); fast paths evaluate a structural family
/// and extend the conclusion to all subsets by the argument named in
/// `fast_path`, in which case `min_abs_det` may be a lower bound rather
/// than an attained minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeavingCertificate {
    pub status: ClassStatus,
    pub n: usize,
    /// Singular witness for `NotInW`, the subset attaining `min_sigma` for
    /// `InW`, or the first unresolved subset for `Inconclusive`.
    pub worst_j: Option<IndexSet>,
    pub min_sigma: f64,
    pub min_abs_det: f64,
    pub subsets_checked: u64,
    pub precision: PrecisionConfig,
    pub fast_path: Option<FastPath>,
}

/// Decides whether every central submatrix of `a` is invertible.
pub fn classify_class_w(
    a: &CMatrix,
    opts: &WeavingOptions,
    cfg: &PrecisionConfig,
) -> Result<WeavingCertificate> {
    cfg.validate()?;
    let n = a.require_square()?;
    a.require_finite()?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "classification needs a nonempty matrix".into(),
        ));
    }
    if n > opts.max_n {
        return Err(Error::SizeLimit {
            n,
            max: opts.max_n,
            what: "central submatrix scan",
        });
    }
    if matches!(cfg.mode, Mode::Double) {
        if let Some(cert) = triangular_fast_path(a, cfg)? {
            return Ok(cert);
        }
        if let Some(cert) = hermitian_definite_fast_path(a, cfg)? {
            return Ok(cert);
        }
    }
    enumerate_subsets(a, cfg)
}

/// Change-of-basis matrix from `v` to `w`, obtained by solving `V A = W`
/// column by column.
pub fn change_of_basis(v: &CMatrix, w: &CMatrix, cfg: &PrecisionConfig) -> Result<CMatrix> {
    let n = v.require_square()?;
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: format!("{}x{}", v.nrows(), v.ncols()),
            right: format!("{}x{}", w.nrows(), w.ncols()),
            context: "change of basis",
        });
    }
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<C64> = (0..n).map(|i| w[(i, j)]).collect();
        cols.push(crate::linalg::solve(v, &col, cfg)?);
    }
    Ok(CMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// Classifies the basis pair `(v, w)` through its change-of-basis matrix.
pub fn are_woven(
    v: &CMatrix,
    w: &CMatrix,
    opts: &WeavingOptions,
    cfg: &PrecisionConfig,
) -> Result<WeavingCertificate> {
    let a = change_of_basis(v, w, cfg)?;
    classify_class_w(&a, opts, cfg)
}

fn triangular_fast_path(
    a: &CMatrix,
    cfg: &PrecisionConfig,
) -> Result<Option<WeavingCertificate>> {
    let n = a.nrows();
    let (upper, lower) = a.triangularity();
    if !upper && !lower {
        return Ok(None);
    }
    // Central submatrices of a triangular matrix are triangular with
    // diagonals drawn from the original diagonal, so their determinants
    // are subproducts of it. Certified nonzero diagonal entries settle
    // every subset at once; any banded entry falls back to enumeration.
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let v = a[(i, i)].norm();
        let one = CMatrix::from_fn(1, 1, |_, _| a[(i, i)]);
        let verdict = invertibility(&one, cfg)?;
        match verdict.status {
            VerdictStatus::Inconclusive => return Ok(None),
            VerdictStatus::Singular => {
                return Ok(Some(WeavingCertificate {
                    status: ClassStatus::NotInW,
                    n,
                    worst_j: Some(IndexSet::new(n, vec![i])?),
                    min_sigma: v,
                    min_abs_det: v,
                    subsets_checked: (i + 1) as u64,
                    precision: *cfg,
                    fast_path: Some(FastPath::Triangular),
                }));
            }
            VerdictStatus::Invertible => diag.push(v),
        }
    }
    // The smallest subproduct of |diagonal| is the product over entries
    // below one, or the single smallest entry when none are.
    let below_one: Vec<usize> = (0..n).filter(|&i| diag[i] < 1.0).collect();
    let (min_abs_det, det_members) = if below_one.is_empty() {
        let i = (0..n)
            .min_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap())
            .unwrap();
        (diag[i], vec![i])
    } else {
        (
            below_one.iter().map(|&i| diag[i]).product(),
            below_one.clone(),
        )
    };
    Ok(Some(WeavingCertificate {
        status: ClassStatus::InW,
        n,
        worst_j: Some(IndexSet::new(n, det_members)?),
        min_sigma: diag.iter().cloned().fold(f64::INFINITY, f64::min),
        min_abs_det,
        subsets_checked: n as u64,
        precision: *cfg,
        fast_path: Some(FastPath::Triangular),
    }))
}

fn hermitian_definite_fast_path(
    a: &CMatrix,
    cfg: &PrecisionConfig,
) -> Result<Option<WeavingCertificate>> {
    let n = a.nrows();
    let allowed = cfg.rel_tol * a.max_abs_upper().max(1.0);
    if a.hermitian_defect() > allowed {
        return Ok(None);
    }
    let (lo, hi) = hermitian_eigen_range(a, cfg.rel_tol)?;
    let scale = lo.abs().max(hi.abs()).max(1.0);
    // Certify only with margin clear of the inconclusive band; anything
    // closer goes through the per-subset scan and its escalation policy.
    let definite = lo > 10.0 * cfg.zero_tol * scale || hi < -10.0 * cfg.zero_tol * scale;
    if !definite {
        return Ok(None);
    }
    // Eigenvalues of central submatrices interlace with the full spectrum,
    // so every subset inherits definiteness with margin at least
    // m = min |eigenvalue|, attained by the full set. Determinants are
    // products of eigenvalues, all of magnitude at least m.
    let m = lo.abs().min(hi.abs());
    Ok(Some(WeavingCertificate {
        status: ClassStatus::InW,
        n,
        worst_j: Some(IndexSet::full(n)),
        min_sigma: m,
        min_abs_det: m.min(m.powi(n as i32)),
        subsets_checked: 1,
        precision: *cfg,
        fast_path: Some(FastPath::HermitianDefinite),
    }))
}

/// Per-subset outcome inside the enumeration.
struct SubsetEval {
    mask: u64,
    decided: VerdictStatus,
    sigma_min: f64,
    abs_det: f64,
}

fn eval_subset(a: &CMatrix, n: usize, mask: u64, cfg: &PrecisionConfig) -> Result<SubsetEval> {
    let j = IndexSet::from_mask(n, mask)?;
    let block = a.central_submatrix(&j)?;
    let (sigma_min, sigma_max) = sigma_extremes(&block)?;
    let decided;
    let abs_det;
    match cfg.mode {
        Mode::Double => {
            let d = det_double(&block);
            let verdict = verdict_from_sigma(sigma_min, sigma_max, cfg.zero_tol, &d);
            match (verdict.status, cfg.escalation_bits) {
                (VerdictStatus::Inconclusive, Some(bits)) => {
                    let raw = ball_det(&block.lift(bits));
                    if raw.is_exact_zero_witness() {
                        decided = VerdictStatus::Singular;
                        abs_det = 0.0;
                    } else if raw.certifies_invertible() {
                        decided = VerdictStatus::Invertible;
                        abs_det = finish_raw_det(&raw).abs_det;
                    } else {
                        decided = VerdictStatus::Inconclusive;
                        abs_det = d.abs_det;
                    }
                }
                (status, _) => {
                    decided = status;
                    abs_det = d.abs_det;
                }
            }
        }
        Mode::Extended { bits } => {
            let raw = ball_det(&block.lift(bits));
            if raw.is_exact_zero_witness() {
                decided = VerdictStatus::Singular;
                abs_det = 0.0;
            } else if raw.certifies_invertible() {
                decided = VerdictStatus::Invertible;
                abs_det = finish_raw_det(&raw).abs_det;
            } else {
                decided = VerdictStatus::Inconclusive;
                abs_det = finish_raw_det(&raw).abs_det;
            }
        }
    }
    Ok(SubsetEval {
        mask,
        decided,
        sigma_min,
        abs_det,
    })
}

fn enumerate_subsets(a: &CMatrix, cfg: &PrecisionConfig) -> Result<WeavingCertificate> {
    let n = a.nrows();
    let total: u64 = (1u64 << n) - 1;
    let mut checked = 0u64;
    let mut min_sigma = (f64::INFINITY, 0u64);
    let mut min_det = f64::INFINITY;
    let mut singular: Option<u64> = None;
    let mut unresolved: Option<u64> = None;

    let mut start = 1u64;
    'blocks: while start <= total {
        let end = (start + BLOCK - 1).min(total);
        let evals: Result<Vec<SubsetEval>> = (start..=end)
            .into_par_iter()
            .map(|mask| eval_subset(a, n, mask, cfg))
            .collect();
        let evals = evals?;
        checked += evals.len() as u64;
        for e in &evals {
            if e.sigma_min < min_sigma.0 {
                min_sigma = (e.sigma_min, e.mask);
            }
            min_det = min_det.min(e.abs_det);
            match e.decided {
                VerdictStatus::Singular => {
                    singular = Some(e.mask);
                    break;
                }
                VerdictStatus::Inconclusive => {
                    if unresolved.is_none() {
                        unresolved = Some(e.mask);
                    }
                }
                VerdictStatus::Invertible => {}
            }
        }
        if singular.is_some() {
            break 'blocks;
        }
        start = end + 1;
    }

    let (status, worst_j) = if let Some(mask) = singular {
        (ClassStatus::NotInW, IndexSet::from_mask(n, mask)?)
    } else if let Some(mask) = unresolved {
        (ClassStatus::Inconclusive, IndexSet::from_mask(n, mask)?)
    } else {
        (ClassStatus::InW, IndexSet::from_mask(n, min_sigma.1)?)
    };
    Ok(WeavingCertificate {
        status,
        n,
        worst_j: Some(worst_j),
        min_sigma: min_sigma.0,
        min_abs_det: min_det,
        subsets_checked: checked,
        precision: *cfg,
        fast_path: None,
    })
}

/// Searches column permutations of `w` for one that weaves with `v`,
/// returning the first such permutation in lexicographic order.
///
/// The search space is factorial; `opts.max_n` still applies but sizes
/// beyond 8 are rejected outright.
pub fn woven_up_to_permutation(
    v: &CMatrix,
    w: &CMatrix,
    opts: &WeavingOptions,
    cfg: &PrecisionConfig,
) -> Result<Option<Vec<usize>>> {
    let n = v.require_square()?;
    let limit = opts.max_n.min(8);
    if n > limit {
        return Err(Error::SizeLimit {
            n,
            max: limit,
            what: "permutation search",
        });
    }
    let a = change_of_basis(v, w, cfg)?;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if permutation_candidate_survives(&a, &perm, cfg) {
            let permuted = CMatrix::from_fn(n, n, |i, j| a[(i, perm[j])]);
            let cert = classify_class_w(&permuted, opts, cfg)?;
            if cert.status == ClassStatus::InW {
                return Ok(Some(perm));
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// Cheap rejection for the permutation search: the diagonal entries are the
/// 1x1 central minors and must all clear the singularity threshold, then
/// every 2x2 central minor gets the same test.
fn permutation_candidate_survives(a: &CMatrix, perm: &[usize], cfg: &PrecisionConfig) -> bool {
    let n = perm.len();
    let tol = cfg.zero_tol;
    for i in 0..n {
        if a[(i, perm[i])].norm() <= tol {
            return false;
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            let d = a[(i, perm[i])] * a[(k, perm[k])] - a[(i, perm[k])] * a[(k, perm[i])];
            let scale = a[(i, perm[i])]
                .norm()
                .max(a[(k, perm[k])].norm())
                .max(a[(i, perm[k])].norm())
                .max(a[(k, perm[i])].norm())
                .max(1.0);
            if d.norm() <= tol * scale * scale {
                return false;
            }
        }
    }
    true
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Verdict of the exhaustive minor scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorsStatus {
    AllNonzero,
    ZeroMinor,
    Inconclusive,
}

/// Result of scanning all square minors of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorsOutcome {
    pub status: MinorsStatus,
    /// Row and column sets of the first vanishing minor.
    pub witness: Option<(IndexSet, IndexSet)>,
    pub minors_checked: u64,
    pub min_abs_det: f64,
}

/// Checks that every square minor of `a` is nonzero, which for the woven
/// question means every column permutation of the pair weaves.
///
/// Scans by minor size, then row mask, then column mask, all ascending,
/// stopping at the first vanishing minor when `stop_on_zero` is set.
pub fn all_minors_nonzero(
    a: &CMatrix,
    opts: &WeavingOptions,
    cfg: &PrecisionConfig,
) -> Result<MinorsOutcome> {
    scan_minors(a, opts.max_n.min(12), cfg, true)
}

pub(crate) fn scan_minors(
    a: &CMatrix,
    max_n: usize,
    cfg: &PrecisionConfig,
    stop_on_zero: bool,
) -> Result<MinorsOutcome> {
    cfg.validate()?;
    let n = a.require_square()?;
    a.require_finite()?;
    if n == 0 || n > max_n {
        return Err(Error::SizeLimit { n, max: max_n, what: "minor scan" });
    }
    let mut by_popcount: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for mask in nonempty_masks(n) {
        by_popcount[mask.count_ones() as usize].push(mask);
    }
    let mut checked = 0u64;
    let mut min_abs = f64::INFINITY;
    let mut witness: Option<(u64, u64)> = None;
    let mut unresolved = false;
    'outer: for k in 1..=n {
        for &rm in &by_popcount[k] {
            let rows = IndexSet::from_mask(n, rm)?;
            for &cm in &by_popcount[k] {
                let cols = IndexSet::from_mask(n, cm)?;
                let block = a.submatrix(&rows, &cols)?;
                let eval = eval_square_block(&block, cfg)?;
                checked += 1;
                min_abs = min_abs.min(eval.abs_det);
                match eval.decided {
                    VerdictStatus::Singular => {
                        witness = Some((rm, cm));
                        if stop_on_zero {
                            break 'outer;
                        }
                    }
                    VerdictStatus::Inconclusive => unresolved = true,
                    VerdictStatus::Invertible => {}
                }
            }
        }
    }
    let status = if witness.is_some() {
        MinorsStatus::ZeroMinor
    } else if unresolved {
        MinorsStatus::Inconclusive
    } else {
        MinorsStatus::AllNonzero
    };
    Ok(MinorsOutcome {
        status,
        witness: match witness {
            Some((rm, cm)) => Some((IndexSet::from_mask(n, rm)?, IndexSet::from_mask(n, cm)?)),
            None => None,
        },
        minors_checked: checked,
        min_abs_det: min_abs,
    })
}

struct BlockEval {
    decided: VerdictStatus,
    abs_det: f64,
}

fn eval_square_block(block: &CMatrix, cfg: &PrecisionConfig) -> Result<BlockEval> {
    let (sigma_min, sigma_max) = sigma_extremes(block)?;
    match cfg.mode {
        Mode::Double => {
            let d = det_double(block);
            let verdict = verdict_from_sigma(sigma_min, sigma_max, cfg.zero_tol, &d);
            if verdict.status == VerdictStatus::Inconclusive {
                if let Some(bits) = cfg.escalation_bits {
                    let raw = ball_det(&block.lift(bits));
                    if raw.is_exact_zero_witness() {
                        return Ok(BlockEval { decided: VerdictStatus::Singular, abs_det: 0.0 });
                    }
                    if raw.certifies_invertible() {
                        return Ok(BlockEval {
                            decided: VerdictStatus::Invertible,
                            abs_det: finish_raw_det(&raw).abs_det,
                        });
                    }
                }
            }
            Ok(BlockEval { decided: verdict.status, abs_det: d.abs_det })
        }
        Mode::Extended { bits } => {
            let raw = ball_det(&block.lift(bits));
            if raw.is_exact_zero_witness() {
                return Ok(BlockEval { decided: VerdictStatus::Singular, abs_det: 0.0 });
            }
            let d = finish_raw_det(&raw);
            let decided = if raw.certifies_invertible() {
                VerdictStatus::Invertible
            } else {
                VerdictStatus::Inconclusive
            };
            Ok(BlockEval { decided, abs_det: d.abs_det })
        }
    }
}

/// Transformations that preserve membership in the class.
#[derive(Debug, Clone, PartialEq)]
pub enum Symmetry {
    Inverse,
    Transpose,
    Adjoint,
    /// `D* A D` for an invertible diagonal `D`.
    ConjDiag(Vec<C64>),
    /// `P* A P` for a permutation `P`; entry `(i, j)` of the result is
    /// `a[p(i), p(j)]`.
    ConjPerm(Vec<usize>),
}

/// Applies a class-preserving transformation to `a`.
pub fn apply_symmetry(a: &CMatrix, sym: &Symmetry, cfg: &PrecisionConfig) -> Result<CMatrix> {
    let n = a.require_square()?;
    match sym {
        Symmetry::Inverse => {
            let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
            for j in 0..n {
                let e: Vec<C64> = (0..n)
                    .map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                    .collect();
                cols.push(crate::linalg::solve(a, &e, cfg)?);
            }
            Ok(CMatrix::from_fn(n, n, |i, j| cols[j][i]))
        }
        Symmetry::Transpose => Ok(a.transpose()),
        Symmetry::Adjoint => Ok(a.adjoint()),
        Symmetry::ConjDiag(d) => {
            if d.len() != n {
                return Err(Error::DimensionMismatch {
                    left: format!("{n}x{n}"),
                    right: format!("diagonal of {}", d.len()),
                    context: "diagonal conjugation",
                });
            }
            if let Some(i) = d.iter().position(|z| z.norm() == 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "diagonal entry {i} is zero; conjugation needs an invertible diagonal"
                )));
            }
            Ok(CMatrix::from_fn(n, n, |i, j| d[i].conj() * a[(i, j)] * d[j]))
        }
        Symmetry::ConjPerm(p) => {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    left: format!("{n}x{n}"),
                    right: format!("permutation of {}", p.len()),
                    context: "permutation conjugation",
                });
            }
            let mut seen = vec![false; n];
            for &pi in p {
                if pi >= n || seen[pi] {
                    return Err(Error::InvalidArgument(
                        "not a permutation of 0..n".into(),
                    ));
                }
                seen[pi] = true;
            }
            Ok(CMatrix::from_fn(n, n, |i, j| a[(p[i], p[j])]))
        }
    }
}

/// A perturbation of the identity supported on finitely many indices.
///
/// The ambient index set may be arbitrarily large; outside `support` the
/// operator acts as the identity, so classification reduces to the block.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePerturbation {
    pub support: IndexSet,
    pub block: CMatrix,
}

impl FinitePerturbation {
    pub fn new(support: IndexSet, block: CMatrix) -> Result<Self> {
        let k = block.require_square()?;
        if support.len() != k {
            return Err(Error::DimensionMismatch {
                left: format!("support of {}", support.len()),
                right: format!("{k}x{k} block"),
                context: "finite perturbation",
            });
        }
        Ok(FinitePerturbation { support, block })
    }
}

/// Classifies `I + E` for a finite perturbation `E`.
///
/// Central submatrices split into a block part and an identity tail, so
/// classifying `I + E` on the support decides everything; the identity
/// tail caps the reported minima at one and the witness is translated back
/// to ambient indices.
pub fn classify_finite_perturbation(
    pert: &FinitePerturbation,
    opts: &WeavingOptions,
    cfg: &PrecisionConfig,
) -> Result<WeavingCertificate> {
    let k = pert.block.require_square()?;
    let shifted = CMatrix::from_fn(k, k, |i, j| {
        let e = pert.block[(i, j)];
        if i == j {
            e + C64::new(1.0, 0.0)
        } else {
            e
        }
    });
    let mut cert = classify_class_w(&shifted, opts, cfg)?;
    cert.min_sigma = cert.min_sigma.min(1.0);
    cert.min_abs_det = cert.min_abs_det.min(1.0);
    cert.worst_j = match cert.worst_j {
        Some(j) => {
            let members: Vec<usize> = j
                .iter()
                .map(|i| pert.support.as_slice()[i])
                .collect();
            Some(IndexSet::new(pert.support.ambient(), members)?)
        }
        None => None,
    };
    Ok(cert)
}

/// Diagonal-dominance style sufficient criterion for a perturbation of the
/// identity, split as diagonal plus off-diagonal remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrReport {
    /// Whether `2 * norm_r <= sup_d` holds.
    pub satisfied: bool,
    /// Largest singular value of the off-diagonal part of the block.
    pub norm_r: f64,
    /// Supremum of the perturbed diagonal magnitudes, including the
    /// identity tail outside the support.
    pub sup_d: f64,
}

/// Evaluates the split criterion for `I + E`: writing `I + E = D + R` with
/// `D` diagonal, the test `2 ||R|| <= sup |d_nn|` suffices for the woven
/// property. It is sufficient only; failing it decides nothing.
pub fn dr_criterion(pert: &FinitePerturbation) -> Result<DrReport> {
    let k = pert.block.require_square()?;
    pert.block.require_finite()?;
    let off = CMatrix::from_fn(k, k, |i, j| {
        if i == j {
            C64::new(0.0, 0.0)
        } else {
            pert.block[(i, j)]
        }
    });
    let norm_r = if k == 0 {
        0.0
    } else {
        sigma_extremes(&off)?.1
    };
    let mut sup_d = 1.0f64;
    for i in 0..k {
        sup_d = sup_d.max((pert.block[(i, i)] + C64::new(1.0, 0.0)).norm());
    }
    Ok(DrReport {
        satisfied: 2.0 * norm_r <= sup_d,
        norm_r,
        sup_d,
    })
}
