//! Dense symmetric matrices and the handful of numerical-linear-algebra
//! primitives everything else is built on: the trace-compatible `svec`
//! embedding, SVD-backed rank and nullspace decisions, principal
//! submatrices, and the plain-text matrix exchange format.
//!
//! Conventions: matrices are real symmetric with exactly symmetric storage
//! (enforced at construction), indices are 0-based throughout the library,
//! and every rank or kernel decision is made against a
//! [`TolerancePolicy`](crate::tol::TolerancePolicy).

use crate::error::{Error, Result};
use crate::tol::TolerancePolicy;
use nalgebra::{DMatrix, DVector};

/// Dense real symmetric matrix with exactly symmetric storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// Build from row-major entries, requiring symmetry up to machine-level
    /// noise (`1e-12` relative to the largest entry). The stored matrix is
    /// the exact symmetrization `(A + A^T) / 2`.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for order {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = DMatrix::from_row_slice(n, n, entries);
        let scale = m.amax().max(1.0);
        Self::symmetrize_checked(m, 1e-12 * scale)
    }

    /// Build from a function on index pairs; only the upper triangle is
    /// evaluated, so the result is symmetric by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymMatrix { m }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        SymMatrix {
            m: DMatrix::identity(n, n),
        }
    }

    /// Zero matrix of order `n`.
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            m: DMatrix::zeros(n, n),
        }
    }

    fn symmetrize_checked(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = m.nrows();
        let mut max_asym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if max_asym > tol {
            return Err(Error::NotSymmetric {
                max_asymmetry: max_asym,
                tol,
            });
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(SymMatrix { m: sym })
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// Row-major copy of all entries.
    pub fn entries_row_major(&self) -> Vec<f64> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    #[cfg(test)]
    pub(crate) fn from_dmatrix_symmetric(m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        let sym = (&m + m.transpose()) * 0.5;
        SymMatrix { m: sym }
    }

    /// Matrix-vector product `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.order();
        if x.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "matvec: order {n} matrix, length {} vector",
                x.len()
            )));
        }
        let v = &self.m * DVector::from_column_slice(x);
        Ok(v.iter().copied().collect())
    }

    /// Bilinear form `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let n = self.order();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "bilinear: order {n} matrix, lengths {} and {}",
                x.len(),
                y.len()
            )));
        }
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.m[(i, j)] * y[j];
            }
            acc += x[i] * row;
        }
        Ok(acc)
    }

    /// Quadratic form `x^T A x`.
    pub fn quadratic(&self, x: &[f64]) -> Result<f64> {
        self.bilinear(x, x)
    }

    /// Largest singular value (spectral norm).
    pub fn spectral_norm(&self) -> f64 {
        if self.order() == 0 {
            return 0.0;
        }
        self.m
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(0.0f64, |a, &s| a.max(s))
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.m.amax()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix { m: &self.m * c }
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "add: orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        Ok(SymMatrix {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "sub: orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        Ok(SymMatrix {
            m: &self.m - &other.m,
        })
    }

    /// Parse the plain-text matrix format: a first line holding the order
    /// `n`, followed by `n * n` whitespace-separated decimal entries.
    /// Asymmetry up to `tol.zero_tol` is repaired by averaging; anything
    /// larger is an error.
    pub fn from_text(s: &str, tol: &TolerancePolicy) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let head = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let n: usize = head
            .parse()
            .map_err(|_| Error::Parse(format!("first token must be the order, got {head:?}")))?;
        if n == 0 {
            return Err(Error::Parse("order must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for tok in tokens.by_ref().take(n * n) {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad matrix entry {tok:?}")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("non-finite matrix entry {tok:?}")));
            }
            entries.push(v);
        }
        if entries.len() != n * n {
            return Err(Error::Parse(format!(
                "expected {} entries for order {n}, found {}",
                n * n,
                entries.len()
            )));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse(format!(
                "trailing data after {} entries",
                n * n
            )));
        }
        let m = DMatrix::from_row_slice(n, n, &entries);
        Self::symmetrize_checked(m, tol.zero_tol)
    }

    /// Render in the plain-text matrix format. Entries use the shortest
    /// representation that round-trips exactly, so `from_text(to_text(a))`
    /// reproduces `a` bit for bit.
    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut out = String::new();
        out.push_str(&n.to_string());
        out.push('\n');
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{}", self.m[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// Length of the svec image for order `n`.
pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Isometric vectorization of a symmetric matrix: the upper triangle read
/// row-major with off-diagonal entries scaled by sqrt(2), so that
/// `svec(a) . svec(b) = trace(a b)`.
pub fn svec(a: &SymMatrix) -> Vec<f64> {
    let n = a.order();
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(svec_len(n));
    for i in 0..n {
        for j in i..n {
            let v = a.get(i, j);
            out.push(if i == j { v } else { s2 * v });
        }
    }
    out
}

/// Inverse of [`svec`]: rebuild the symmetric matrix of order `n`.
pub fn sym_from_svec(n: usize, v: &[f64]) -> Result<SymMatrix> {
    if v.len() != svec_len(n) {
        return Err(Error::DimensionMismatch(format!(
            "svec length {} does not match order {n} (expected {})",
            v.len(),
            svec_len(n)
        )));
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut k = 0;
    Ok(SymMatrix::from_fn(n, |i, j| {
        // from_fn visits (i, j) with i <= j in row-major order, matching
        // the svec layout exactly.
        let _ = (i, j);
        let val = v[k];
        k += 1;
        if i == j {
            val
        } else {
            val / s2
        }
    }))
}

/// Singular-value diagnostics behind a rank decision.
#[derive(Debug, Clone)]
pub struct RankDetails {
    pub rank: usize,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// Values strictly above this threshold counted toward the rank.
    pub threshold: f64,
}

impl RankDetails {
    /// Ratio of the smallest kept singular value to the threshold
    /// (`f64::INFINITY` when everything was dropped and the decision is
    /// trivially sharp).
    pub fn gap_over_threshold(&self) -> f64 {
        if self.rank == 0 {
            return f64::INFINITY;
        }
        self.singular_values[self.rank - 1] / self.threshold
    }
}

fn rank_details_of_rows(rows: &DMatrix<f64>, tol: &TolerancePolicy) -> RankDetails {
    if rows.nrows() == 0 || rows.ncols() == 0 {
        return RankDetails {
            rank: 0,
            singular_values: Vec::new(),
            threshold: 0.0,
        };
    }
    let svd = rows.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = sv[0];
    let threshold = tol.rank_tol_rel * smax;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    RankDetails {
        rank,
        singular_values: sv,
        threshold,
    }
}

/// Rank of a family of symmetric matrices, viewed through [`svec`]: the
/// number of singular values of the stacked coordinate vectors exceeding
/// `rank_tol_rel` times the largest. An empty family has rank 0; mixed
/// orders are an error.
pub fn rank_of_family(mats: &[SymMatrix], tol: &TolerancePolicy) -> Result<usize> {
    Ok(rank_of_family_details(mats, tol)?.rank)
}

/// [`rank_of_family`] with the singular values exposed, so callers can
/// assert how sharply the decision cleared the threshold.
pub fn rank_of_family_details(mats: &[SymMatrix], tol: &TolerancePolicy) -> Result<RankDetails> {
    if mats.is_empty() {
        return Ok(RankDetails {
            rank: 0,
            singular_values: Vec::new(),
            threshold: 0.0,
        });
    }
    let n = mats[0].order();
    for m in mats {
        if m.order() != n {
            return Err(Error::DimensionMismatch(format!(
                "rank_of_family: mixed orders {} and {n}",
                m.order()
            )));
        }
    }
    let rows: Vec<Vec<f64>> = mats.iter().map(svec).collect();
    let stacked = DMatrix::from_fn(mats.len(), svec_len(n), |r, c| rows[r][c]);
    Ok(rank_details_of_rows(&stacked, tol))
}

/// Orthonormal basis of the numerical nullspace of a symmetric matrix:
/// right singular vectors whose singular values do not exceed
/// `rank_tol_rel` times the largest one. Vectors are returned with the
/// smallest singular values first and a deterministic sign (largest
/// component positive).
pub fn kernel_basis(a: &SymMatrix, tol: &TolerancePolicy) -> Vec<Vec<f64>> {
    let n = a.order();
    if n == 0 {
        return Vec::new();
    }
    let svd = a.m.clone().svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let threshold = tol.rank_tol_rel * smax;
    let mut basis = Vec::new();
    for &idx in &order {
        if svd.singular_values[idx] <= threshold {
            let mut v: Vec<f64> = v_t.row(idx).iter().copied().collect();
            fix_sign(&mut v);
            basis.push(v);
        }
    }
    basis
}

/// Singular values of a symmetric matrix together with the nullspace
/// threshold, for gap diagnostics on kernel decisions.
pub fn kernel_details(a: &SymMatrix, tol: &TolerancePolicy) -> RankDetails {
    rank_details_of_rows(&a.m, tol)
}

/// Orthonormal basis of the nullspace of a stack of row functionals of
/// the given width, together with the singular-value diagnostics of the
/// decision.  An empty stack has the full standard basis as nullspace.
///
/// The stack is padded with zero rows up to `width` rows when needed, so
/// the SVD always returns the complete set of right singular vectors
/// (padding does not change the singular values).  Vectors are returned
/// with the smallest singular values first and a deterministic sign.
pub(crate) fn rows_nullspace_details(
    rows: &[Vec<f64>],
    width: usize,
    tol: &TolerancePolicy,
) -> (Vec<Vec<f64>>, RankDetails) {
    if width == 0 {
        return (
            Vec::new(),
            RankDetails {
                rank: 0,
                singular_values: Vec::new(),
                threshold: 0.0,
            },
        );
    }
    let nrows = rows.len().max(width);
    let stacked = DMatrix::from_fn(nrows, width, |r, c| {
        if r < rows.len() {
            rows[r][c]
        } else {
            0.0
        }
    });
    let svd = stacked.clone().svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let threshold = tol.rank_tol_rel * smax;
    let mut basis = Vec::new();
    for &idx in &order {
        if svd.singular_values[idx] <= threshold {
            let mut v: Vec<f64> = v_t.row(idx).iter().copied().collect();
            fix_sign(&mut v);
            basis.push(v);
        }
    }
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    (
        basis,
        RankDetails {
            rank,
            singular_values: sv,
            threshold,
        },
    )
}

fn fix_sign(v: &mut [f64]) {
    let mut lead = 0.0f64;
    for &x in v.iter() {
        if x.abs() > lead.abs() {
            lead = x;
        }
    }
    if lead < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Principal submatrix on a strictly increasing, in-range index set.
pub fn principal_submatrix(a: &SymMatrix, rows: &[usize]) -> Result<SymMatrix> {
    let n = a.order();
    if rows.is_empty() {
        return Err(Error::InvalidIndexSet(
            "principal submatrix needs at least one index".into(),
        ));
    }
    for w in rows.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidIndexSet(format!(
                "indices must be strictly increasing, got {:?}",
                rows
            )));
        }
    }
    if *rows.last().unwrap() >= n {
        return Err(Error::InvalidIndexSet(format!(
            "index {} out of range for order {n}",
            rows.last().unwrap()
        )));
    }
    Ok(SymMatrix::from_fn(rows.len(), |i, j| {
        a.get(rows[i], rows[j])
    }))
}
