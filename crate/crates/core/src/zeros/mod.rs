//! Zeros of copositive quadratic forms.
//!
//! A zero of a copositive matrix `A` is an entrywise nonnegative vector
//! `t != 0` with `t^T A t = 0`; it is stored normalized to coordinate sum
//! one.  A zero is minimal when no other zero has a support strictly
//! contained in its own.  Minimal zeros have pairwise incomparable supports
//! and, for each support `S`, span the one-dimensional kernel of the
//! principal submatrix `A_S`, which is what the enumeration below exploits:
//! supports are scanned in order of increasing cardinality, supersets of a
//! discovered support are skipped outright (any zero there is non-minimal),
//! and the remaining supports are settled through the kernel of `A_S`.
//!
//! The catalog records two independent qualities of the result:
//!
//! * `exhaustive`: every minimal zero was certifiably found.  This fails
//!   only when a kernel computation lands in a tolerance band or a
//!   principal kernel of dimension two or more admits a strictly positive
//!   vector, situations that cannot occur for the structured matrices this
//!   crate builds but can for nearly degenerate inputs.
//! * `complete`: the zero set of `A` consists of the minimal zeros alone.
//!   Since the zero set is the union of convex hulls of mutually
//!   orthogonal-in-the-form groups of minimal zeros, this holds exactly
//!   when no two catalog zeros are adjacent, i.e. every bilinear form
//!   `tau_i^T A tau_j` between distinct catalog zeros is bounded away from
//!   zero.

mod copositivity;

pub use copositivity::{
    is_copositive, is_copositive_with_budget, CopositivityVerdict, DEFAULT_SIMPLEX_BUDGET,
};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, principal_submatrix, SymMatrix};
use crate::lp;
use crate::tol::TolerancePolicy;

/// Largest matrix order `enumerate_minimal_zeros` accepts; the support scan
/// is exponential in the order.
pub const MAX_ENUMERATION_ORDER: usize = 12;

/// A nonnegative vector with coordinate sum one and an explicit support.
///
/// Entries at or below the zero tolerance are stored as exact zeros, so the
/// support can be read off structurally and two zeros with equal supports
/// compare entry by entry.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedZero {
    values: Vec<f64>,
    support: Vec<usize>,
}

impl NormalizedZero {
    /// Normalize a candidate vector into a zero representative.
    ///
    /// Entries within `zero_tol` of zero are clamped to exact zero (before
    /// and after scaling), the rest must be positive, and the result is
    /// scaled to coordinate sum one.  Rejects vectors with entries below
    /// `-zero_tol`, nonfinite entries, or no significant entry at all.
    pub fn new(values: &[f64], tol: &TolerancePolicy) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidZeroVector("empty vector".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidZeroVector("nonfinite entry".into()));
        }
        if let Some(bad) = values.iter().find(|&&x| x < -tol.zero_tol) {
            return Err(Error::InvalidZeroVector(format!(
                "negative entry {bad:.3e} below -{:.3e}",
                tol.zero_tol
            )));
        }
        let mut v: Vec<f64> = values
            .iter()
            .map(|&x| if x <= tol.zero_tol { 0.0 } else { x })
            .collect();
        let sum: f64 = v.iter().sum();
        if sum <= tol.zero_tol {
            return Err(Error::InvalidZeroVector(
                "all entries within the zero tolerance".into(),
            ));
        }
        for x in v.iter_mut() {
            *x /= sum;
            if *x <= tol.zero_tol {
                *x = 0.0;
            }
        }
        // Renormalize once more in case the post-scaling clamp removed mass.
        let sum: f64 = v.iter().sum();
        for x in v.iter_mut() {
            *x /= sum;
        }
        let support: Vec<usize> = (0..v.len()).filter(|&k| v[k] > 0.0).collect();
        if support.is_empty() {
            return Err(Error::InvalidZeroVector(
                "no entry survives normalization".into(),
            ));
        }
        Ok(NormalizedZero { values: v, support })
    }

    /// Length of the underlying vector (the matrix order it belongs to).
    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// The full vector, zeros included.
    pub fn vector(&self) -> &[f64] {
        &self.values
    }

    /// Indices of the nonzero entries, strictly increasing, zero-based.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The nonzero entries in support order.
    pub fn values_on_support(&self) -> Vec<f64> {
        self.support.iter().map(|&k| self.values[k]).collect()
    }

    /// Support as a bitmask; orders are capped well below 32 everywhere.
    pub(crate) fn support_mask(&self) -> u32 {
        self.support.iter().fold(0u32, |m, &k| m | (1 << k))
    }
}

/// The minimal zeros of a copositive matrix, sorted by support.
///
/// `exhaustive` asserts that the list contains every minimal zero;
/// `complete` additionally asserts the matrix has no other zeros at all
/// (no segments between catalog zeros).  Operations that reason over the
/// whole zero set check one or both flags before proceeding.
#[derive(Debug, Clone)]
pub struct MinimalZeroCatalog {
    order: usize,
    zeros: Vec<NormalizedZero>,
    complete: bool,
    exhaustive: bool,
}

impl MinimalZeroCatalog {
    /// Assemble a catalog, sorting by support and checking structural
    /// invariants: uniform order, in-range supports, pairwise incomparable
    /// supports.
    pub(crate) fn from_parts(
        order: usize,
        mut zeros: Vec<NormalizedZero>,
        complete: bool,
        exhaustive: bool,
    ) -> Result<Self> {
        for z in &zeros {
            if z.order() != order {
                return Err(Error::DimensionMismatch(format!(
                    "catalog zero has order {} in a catalog of order {order}",
                    z.order()
                )));
            }
        }
        zeros.sort_by(|a, b| a.support.cmp(&b.support));
        for w in zeros.windows(2) {
            if w[0].support == w[1].support {
                return Err(Error::InternalConsistency(
                    "two catalog zeros share a support".into(),
                ));
            }
        }
        for i in 0..zeros.len() {
            for j in 0..zeros.len() {
                if i == j {
                    continue;
                }
                let (mi, mj) = (zeros[i].support_mask(), zeros[j].support_mask());
                if mi & mj == mi {
                    return Err(Error::InternalConsistency(
                        "catalog supports are not pairwise incomparable".into(),
                    ));
                }
            }
        }
        Ok(MinimalZeroCatalog {
            order,
            zeros,
            complete,
            exhaustive,
        })
    }

    /// Order of the matrix the catalog belongs to.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The zeros, sorted lexicographically by support.
    pub fn zeros(&self) -> &[NormalizedZero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// True when the zero set of the matrix consists of exactly these
    /// zeros (no segments of zeros between them).
    pub fn complete(&self) -> bool {
        self.complete
    }

    /// True when every minimal zero is certifiably present.
    pub fn exhaustive(&self) -> bool {
        self.exhaustive
    }
}

/// The quadratic form `t^T A t`.
pub fn quadratic_form(a: &SymMatrix, t: &[f64]) -> Result<f64> {
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidZeroVector("nonfinite entry".into()));
    }
    a.quadratic(t)
}

/// Decide whether the ray through `t` is a zero of `A`: the vector must be
/// entrywise nonnegative (within `zero_tol`) and after scaling to
/// coordinate sum one the form must not exceed `zero_tol`.
///
/// The decision is scale invariant: any positive multiple of a zero is
/// accepted.  A vector with an entry below `-zero_tol`, or with no mass at
/// all, is not a zero.
pub fn verify_zero(a: &SymMatrix, t: &[f64], tol: &TolerancePolicy) -> Result<bool> {
    if t.len() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a matrix of order {}",
            t.len(),
            a.order()
        )));
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidZeroVector("nonfinite entry".into()));
    }
    let z = match NormalizedZero::new(t, tol) {
        Ok(z) => z,
        Err(_) => return Ok(false),
    };
    Ok(a.quadratic(z.vector())? <= tol.zero_tol)
}

/// Bilinear adjacency of two zeros: `tau_i^T A tau_j <= zero_tol * scale`,
/// where `scale` is the spectral norm of `A`.  Adjacent zeros span a whole
/// segment of zeros; a catalog is only `complete` when it has no adjacent
/// pair.
pub(crate) fn zeros_adjacent(
    a: &SymMatrix,
    zi: &NormalizedZero,
    zj: &NormalizedZero,
    scale: f64,
    tol: &TolerancePolicy,
) -> Result<bool> {
    let b = a.bilinear(zi.vector(), zj.vector())?;
    Ok(b <= tol.zero_tol * scale.max(1e-300))
}

/// Enumerate the minimal zeros of a copositive matrix.
///
/// Establishes copositivity first (errors with `NotCopositive` or
/// `Inconclusive` otherwise), then scans supports by increasing
/// cardinality.  Supports containing an already-found support are skipped:
/// any zero there is non-minimal.  For the rest, a zero with that exact
/// support must span the kernel of the principal submatrix, so the kernel
/// decides membership.  See the module documentation for the meaning of
/// the `complete` and `exhaustive` catalog flags.
///
/// Orders above `MAX_ENUMERATION_ORDER` are rejected.
pub fn enumerate_minimal_zeros(a: &SymMatrix, tol: &TolerancePolicy) -> Result<MinimalZeroCatalog> {
    let n = a.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::UnsupportedOrder {
            n,
            reason: format!(
                "minimal zero enumeration scans all supports and is capped at order {MAX_ENUMERATION_ORDER}"
            ),
        });
    }

    match is_copositive(a, tol) {
        CopositivityVerdict::Copositive => {}
        CopositivityVerdict::NotCopositive { form, .. } => {
            return Err(Error::NotCopositive { form });
        }
        CopositivityVerdict::Inconclusive {
            simplices_processed,
        } => {
            return Err(Error::Inconclusive(format!(
                "copositivity test exhausted its budget after {simplices_processed} simplices"
            )));
        }
    }

    let mut found: Vec<NormalizedZero> = Vec::new();
    let mut found_masks: Vec<u32> = Vec::new();
    let mut exhaustive = true;

    for card in 1..=n {
        let mut combo: Vec<usize> = (0..card).collect();
        loop {
            let mask = combo.iter().fold(0u32, |m, &k| m | (1 << k));
            if !found_masks.iter().any(|&f| f & mask == f) {
                match settle_support(a, &combo, tol)? {
                    SupportOutcome::Zero(z) => {
                        if z.support() == combo.as_slice() {
                            found_masks.push(z.support_mask());
                            found.push(z);
                        } else {
                            // Normalization moved the support; the candidate
                            // sits inside a tolerance band.
                            exhaustive = false;
                        }
                    }
                    SupportOutcome::None => {}
                    SupportOutcome::Ambiguous => exhaustive = false,
                }
            }
            if !advance_combination(&mut combo, n) {
                break;
            }
        }
    }

    // The zero set is exactly the minimal zeros iff no two of them are
    // adjacent in the form (otherwise the segment between an adjacent pair
    // consists of further zeros).
    let scale = a.spectral_norm();
    let mut edgeless = true;
    'pairs: for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            if zeros_adjacent(a, &found[i], &found[j], scale, tol)? {
                edgeless = false;
                break 'pairs;
            }
        }
    }
    let complete = exhaustive && edgeless;

    MinimalZeroCatalog::from_parts(n, found, complete, exhaustive)
}

enum SupportOutcome {
    /// The support carries a zero with exactly this support.
    Zero(NormalizedZero),
    /// Certifiably no zero with exactly this support.
    None,
    /// The kernel computation landed in a tolerance band; no sound verdict.
    Ambiguous,
}

/// Decide whether the given support carries a zero with exactly that
/// support.  Such a zero must lie in the kernel of the principal submatrix
/// and be strictly positive on the support; when a candidate exists, its
/// zero-padded extension must also satisfy `A t >= -zero_tol` entrywise
/// (automatic for exactly copositive matrices, enforced as a numerical
/// guard).
fn settle_support(a: &SymMatrix, support: &[usize], tol: &TolerancePolicy) -> Result<SupportOutcome> {
    let n = a.order();
    let sub = principal_submatrix(a, support)?;
    let basis = kernel_basis(&sub, tol);
    match basis.len() {
        0 => Ok(SupportOutcome::None),
        1 => {
            let v = &basis[0];
            let band = 10.0 * tol.zero_tol * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let has_pos = v.iter().any(|&x| x > band);
            let has_neg = v.iter().any(|&x| x < -band);
            let has_tiny = v.iter().any(|&x| x.abs() <= band);
            if has_pos && has_neg {
                return Ok(SupportOutcome::None);
            }
            if !has_pos || has_tiny {
                // Either sign pattern is unreadable or some component sits
                // inside the band: a nearby matrix has a zero with smaller
                // support here.
                return Ok(SupportOutcome::Ambiguous);
            }
            let mut full = vec![0.0f64; n];
            for (slot, &k) in support.iter().enumerate() {
                full[k] = v[slot];
            }
            let z = NormalizedZero::new(&full, tol)?;
            let image = a.matvec(z.vector())?;
            if image.iter().any(|&r| r < -tol.zero_tol) {
                // A kernel vector whose extension pushes the form negative
                // contradicts the copositivity verdict; flag, do not adopt.
                return Ok(SupportOutcome::Ambiguous);
            }
            Ok(SupportOutcome::Zero(z))
        }
        q => {
            // A minimal zero forces a one-dimensional principal kernel, so
            // a strictly positive vector inside a larger kernel means the
            // enumeration cannot certify this support either way.
            let ext_rows: Vec<Vec<f64>> = (0..n)
                .filter(|k| !support.contains(k))
                .map(|k| {
                    (0..q)
                        .map(|j| {
                            support
                                .iter()
                                .enumerate()
                                .map(|(slot, &l)| a.get(k, l) * basis[j][slot])
                                .sum()
                        })
                        .collect()
                })
                .collect();
            let margin = lp::max_min_coordinate(&basis, &ext_rows, tol.zero_tol)?;
            if margin > 10.0 * tol.zero_tol {
                Ok(SupportOutcome::Ambiguous)
            } else {
                Ok(SupportOutcome::None)
            }
        }
    }
}

/// Advance `combo` to the next subset of `{0, .., n-1}` of the same
/// cardinality in lexicographic order; false when exhausted.
fn advance_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::TolerancePolicy;

    fn sym(n: usize, entries: &[f64]) -> SymMatrix {
        SymMatrix::from_row_major(n, entries).unwrap()
    }

    /// The order-5 circulant with first row (1, -1, 1, 1, -1); its minimal
    /// zeros are the five vectors (e_i + e_{i+1}) / 2 with cyclic indexing,
    /// and consecutive ones are adjacent, so the catalog is exhaustive but
    /// not complete.
    fn horn_matrix() -> SymMatrix {
        SymMatrix::from_fn(5, |i, j| {
            if i == j {
                1.0
            } else {
                let d = if i > j { i - j } else { j - i };
                if d == 1 || d == 4 {
                    -1.0
                } else {
                    1.0
                }
            }
        })
    }

    #[test]
    fn normalization_clamps_and_scales() {
        let tol = TolerancePolicy::default();
        let z = NormalizedZero::new(&[2.0, 0.0, 1e-12, 6.0], &tol).unwrap();
        assert_eq!(z.support(), &[0, 3]);
        assert!((z.vector()[0] - 0.25).abs() < 1e-15);
        assert!((z.vector()[3] - 0.75).abs() < 1e-15);
        assert_eq!(z.vector()[2], 0.0);
        let sum: f64 = z.vector().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalization_rejects_bad_vectors() {
        let tol = TolerancePolicy::default();
        assert!(NormalizedZero::new(&[1.0, -0.5], &tol).is_err());
        assert!(NormalizedZero::new(&[0.0, 1e-12], &tol).is_err());
        assert!(NormalizedZero::new(&[f64::NAN, 1.0], &tol).is_err());
        assert!(NormalizedZero::new(&[], &tol).is_err());
    }

    #[test]
    fn singleton_zero_of_a_diagonal_matrix() {
        let tol = TolerancePolicy::default();
        let a = sym(2, &[1.0, 0.0, 0.0, 0.0]);
        let cat = enumerate_minimal_zeros(&a, &tol).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.zeros()[0].support(), &[1]);
        assert_eq!(cat.zeros()[0].vector(), &[0.0, 1.0]);
        assert!(cat.complete());
        assert!(cat.exhaustive());
    }

    #[test]
    fn rank_one_boundary_matrix_has_one_interior_zero() {
        let tol = TolerancePolicy::default();
        let a = sym(2, &[1.0, -1.0, -1.0, 1.0]);
        let cat = enumerate_minimal_zeros(&a, &tol).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.zeros()[0].support(), &[0, 1]);
        assert!((cat.zeros()[0].vector()[0] - 0.5).abs() < 1e-12);
        assert!(cat.complete());
    }

    #[test]
    fn horn_matrix_has_five_minimal_zeros_and_is_not_complete() {
        let tol = TolerancePolicy::default();
        let h = horn_matrix();
        let cat = enumerate_minimal_zeros(&h, &tol).unwrap();
        assert_eq!(cat.len(), 5);
        let supports: Vec<&[usize]> = cat.zeros().iter().map(|z| z.support()).collect();
        assert_eq!(
            supports,
            vec![
                &[0usize, 1][..],
                &[0, 4][..],
                &[1, 2][..],
                &[2, 3][..],
                &[3, 4][..]
            ]
        );
        for z in cat.zeros() {
            for &v in z.values_on_support().iter() {
                assert!((v - 0.5).abs() < 1e-12);
            }
            assert!(verify_zero(&h, z.vector(), &tol).unwrap());
        }
        assert!(cat.exhaustive());
        // Adjacent zeros (consecutive supports) span segments of further
        // zeros, so the catalog is not the whole zero set.
        assert!(!cat.complete());
    }

    #[test]
    fn strictly_positive_matrix_has_no_zeros() {
        let tol = TolerancePolicy::default();
        let a = SymMatrix::from_fn(4, |i, j| if i == j { 2.0 } else { 0.5 });
        let cat = enumerate_minimal_zeros(&a, &tol).unwrap();
        assert!(cat.is_empty());
        assert!(cat.complete());
        assert!(cat.exhaustive());
    }

    #[test]
    fn zero_matrix_catalog_is_the_vertex_set_and_incomplete() {
        let tol = TolerancePolicy::default();
        let a = SymMatrix::zeros(3);
        let cat = enumerate_minimal_zeros(&a, &tol).unwrap();
        assert_eq!(cat.len(), 3);
        for (k, z) in cat.zeros().iter().enumerate() {
            assert_eq!(z.support(), &[k]);
        }
        assert!(cat.exhaustive());
        // Every point of the simplex is a zero, so the catalog cannot be
        // the whole zero set.
        assert!(!cat.complete());
    }

    #[test]
    fn enumeration_rejects_non_copositive_input() {
        let tol = TolerancePolicy::default();
        let a = sym(2, &[1.0, 0.0, 0.0, -1.0]);
        match enumerate_minimal_zeros(&a, &tol) {
            Err(Error::NotCopositive { form }) => assert!(form < 0.0),
            other => panic!("expected NotCopositive, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_rejects_large_orders() {
        let tol = TolerancePolicy::default();
        let a = SymMatrix::identity(13);
        match enumerate_minimal_zeros(&a, &tol) {
            Err(Error::UnsupportedOrder { n, .. }) => assert_eq!(n, 13),
            other => panic!("expected UnsupportedOrder, got {other:?}"),
        }
    }

    #[test]
    fn verify_zero_accepts_rescaled_zeros_and_rejects_interior_points() {
        let tol = TolerancePolicy::default();
        let h = horn_matrix();
        // tau^1 scaled by 7 is still the same ray.
        assert!(verify_zero(&h, &[3.5, 3.5, 0.0, 0.0, 0.0], &tol).unwrap());
        // Midpoint of two non-adjacent zeros has positive form.
        let m = [0.25, 0.25, 0.25, 0.25, 0.0];
        assert!(!verify_zero(&h, &m, &tol).unwrap());
        // Negative entries beyond tolerance are not zeros at all.
        assert!(!verify_zero(&h, &[0.5, -0.5, 0.0, 0.0, 0.0], &tol).unwrap());
    }

    #[test]
    fn combination_walk_visits_every_subset_once() {
        let mut combo = vec![0usize, 1];
        let mut seen = vec![combo.clone()];
        while advance_combination(&mut combo, 4) {
            seen.push(combo.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn catalog_rejects_nested_supports() {
        let tol = TolerancePolicy::default();
        let z1 = NormalizedZero::new(&[1.0, 0.0, 0.0], &tol).unwrap();
        let z2 = NormalizedZero::new(&[0.5, 0.5, 0.0], &tol).unwrap();
        assert!(MinimalZeroCatalog::from_parts(3, vec![z1, z2], false, false).is_err());
    }
}
