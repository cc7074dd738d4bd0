//! The two constructive devices behind the dimension bounds: an explicit
//! family of extremal circulant copositive matrices of odd order, and an
//! order-raising lift that turns an exposed copositive matrix of order `n`
//! into one of order `n + 1` with a controlled zero set.
//!
//! The circulant of odd order `n >= 5` has `alpha` on the diagonal,
//! `beta` on the first cyclic off-diagonal, `1` on the second, and `0`
//! elsewhere, with `alpha` and `beta` chosen trigonometrically so that the
//! matrix is copositive with exactly `n` minimal zeros.  Each zero is
//! supported on one of the `n` index windows returned by [`index_sets`],
//! and its values on the support are cyclic shifts of a single strictly
//! positive palindromic kernel vector `u`.
//!
//! The lift of `A` by a nonempty index set `I` is the bordered matrix
//! `B = [[A, A e*], [e*^T A, e*^T A e*]]` where `e*` is the indicator
//! vector of `I`.  Its minimal zeros are the base zeros padded with a
//! trailing `0`, plus one extra zero for every base zero whose support
//! contains `I`; each extra zero is adjacent to its parent, so the full
//! zero set of `B` consists of isolated points and one segment per
//! parent/child pair.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::face::certify_extreme;
use crate::graph::{build_graph, m_set_of};
use crate::linalg::{kernel_basis, principal_submatrix, SymMatrix};
use crate::tol::TolerancePolicy;
use crate::zeros::{
    enumerate_minimal_zeros, verify_zero, MinimalZeroCatalog, NormalizedZero,
};

/// Maximum allowed deviation from exact palindromic symmetry in the
/// kernel vector.
const PALINDROME_TOL: f64 = 1e-10;

/// Infinity-norm tolerance when cross-checking constructed zeros against
/// independently enumerated ones.
const CATALOG_MATCH_TOL: f64 = 1e-8;

/// Tolerance for the exact block identity
/// `(t; t0)^T B (t; t0) = (t + t0 e*)^T A (t + t0 e*)`.
const BLOCK_IDENTITY_TOL: f64 = 1e-10;

/// Seed for the randomized non-adjacent midpoint probes in
/// [`verify_zeroset_shape`]; fixed so reports are reproducible.
const MIDPOINT_PROBE_SEED: u64 = 0x0C0FFACE;

/// Number of random non-adjacent midpoints probed per shape check.
const MIDPOINT_PROBE_COUNT: usize = 50;

/// Parameters of the odd-order extremal circulant.
#[derive(Debug, Clone, Copy)]
pub struct HildebrandParams {
    pub n: usize,
    /// Diagonal entry: `2 (1 + 2 cos(pi/(n+1)) cos(3 pi/(n+1)))`.
    pub alpha: f64,
    /// First off-diagonal entry: `-2 (cos(pi/(n+1)) + cos(3 pi/(n+1)))`.
    pub beta: f64,
}

/// The strictly positive palindromic vector spanning the kernel of every
/// support-window submatrix of the circulant, normalized to coordinate
/// sum one.
#[derive(Debug, Clone)]
pub struct PalindromicKernelVector {
    pub u: Vec<f64>,
}

/// An order-raising lift together with its derived data.
#[derive(Debug, Clone)]
pub struct LiftResult {
    /// The base matrix `A` of order `n`.
    pub base: SymMatrix,
    /// The lifting index set, zero-based, sorted.
    pub index_set: Vec<usize>,
    /// The lifted matrix `B` of order `n + 1`.
    pub lifted: SymMatrix,
    /// Indicator vector of the index set, length `n`.
    pub e_star: Vec<f64>,
    /// Base-catalog indices of the zeros whose support contains the index
    /// set; each spawns an extra lifted zero.
    pub j0: Vec<usize>,
    /// For each entry of `j0`: the smallest value of that zero on the
    /// index set.
    pub sigma: Vec<f64>,
    /// For each entry of `j0`: `1 - sigma (|I| - 1)`, the normalization
    /// mass of the extra zero.
    pub mu: Vec<f64>,
    /// The minimal zeros of `B`: every base zero padded with a trailing
    /// zero, plus the extra zeros from `j0`.
    pub lifted_catalog: MinimalZeroCatalog,
    /// Index pairs into `lifted_catalog` whose convex hulls form the
    /// one-dimensional segments of the zero set of `B`; all other zeros
    /// are isolated points.
    pub segment_pairs: Vec<(usize, usize)>,
}

/// Truth values of the order-raising hypotheses for a lift, reported
/// individually.
#[derive(Debug, Clone, Copy)]
pub struct LiftHypotheses {
    /// The base catalog is complete and nonempty.
    pub complete_catalog: bool,
    /// Every base zero satisfies `supp(tau) ∪ supp(A tau) = [n]`.
    pub supports_cover_ground_set: bool,
    /// The base matrix is certified extreme.
    pub base_extreme: bool,
    /// The supports of the `j0` zeros jointly cover `[n]`.
    pub j0_supports_cover: bool,
    /// The vanishing sets `M(j)` of the `j0` zeros jointly cover `[n]`.
    pub j0_m_sets_cover: bool,
}

impl LiftHypotheses {
    /// True when every individual hypothesis holds.
    pub fn all(&self) -> bool {
        self.complete_catalog
            && self.supports_cover_ground_set
            && self.base_extreme
            && self.j0_supports_cover
            && self.j0_m_sets_cover
    }
}

/// Outcome of comparing the predicted zero set of a lift against a fresh
/// enumeration.
#[derive(Debug, Clone)]
pub struct ZerosetShapeReport {
    /// True when every check passed.
    pub matches: bool,
    /// Human-readable descriptions of every discrepancy found.
    pub diffs: Vec<String>,
}

fn odd_order_gate(n: usize) -> Result<()> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::UnsupportedOrder {
            n,
            reason: "the circulant family is defined for odd orders >= 5".into(),
        });
    }
    Ok(())
}

/// Build the odd-order extremal circulant: diagonal `alpha`, first cyclic
/// off-diagonal `beta`, second cyclic off-diagonal `1`, zero elsewhere.
pub fn build_circulant(n: usize) -> Result<(SymMatrix, HildebrandParams)> {
    odd_order_gate(n)?;
    let t = std::f64::consts::PI / (n as f64 + 1.0);
    let alpha = 2.0 * (1.0 + 2.0 * t.cos() * (3.0 * t).cos());
    let beta = -2.0 * (t.cos() + (3.0 * t).cos());
    let a = SymMatrix::from_fn(n, |i, j| {
        let d = (i as i64 - j as i64).unsigned_abs() as usize;
        let d = d.min(n - d);
        match d {
            0 => alpha,
            1 => beta,
            2 => 1.0,
            _ => 0.0,
        }
    });
    Ok((a, HildebrandParams { n, alpha, beta }))
}

/// The `n` support windows of the circulant's minimal zeros, zero-based
/// and sorted.  Window `p` (for `p < n - 1`) is `[n]` minus the cyclically
/// consecutive pair `{n - p - 2, n - p - 1}`; the last window drops
/// `{0, n - 1}` (the pair that wraps around).  Every index is excluded
/// from exactly two windows.
pub fn index_sets(n: usize) -> Result<Vec<Vec<usize>>> {
    odd_order_gate(n)?;
    let mut sets = Vec::with_capacity(n);
    for p in 0..n {
        let (lo, hi) = if p + 1 < n {
            (n - p - 2, n - p - 1)
        } else {
            (0, n - 1)
        };
        sets.push((0..n).filter(|&k| k != lo && k != hi).collect());
    }
    Ok(sets)
}

/// The base window vector of the circulant zeros: `u` placed at positions
/// `1..n-1`, zeros at the ends, read cyclically from position `shift`.
fn shifted_zero(u: &[f64], n: usize, shift: usize) -> Vec<f64> {
    let mut base = vec![0.0; n];
    base[1..(n - 1)].copy_from_slice(u);
    (0..n).map(|k| base[(k + shift) % n]).collect()
}

/// Extract the strictly positive palindromic vector spanning the kernel
/// of the circulant restricted to its first support window, and verify
/// that its cyclic shifts span the kernels of all the other windows.
pub fn palindromic_u(
    a: &SymMatrix,
    sets: &[Vec<usize>],
    tol: &TolerancePolicy,
) -> Result<PalindromicKernelVector> {
    let n = a.order();
    if sets.len() != n || sets.iter().any(|s| s.len() != n - 2) {
        return Err(Error::InvalidIndexSet(format!(
            "expected {n} support windows of size {} for order {n}",
            n.saturating_sub(2)
        )));
    }
    let sub = principal_submatrix(a, &sets[0])?;
    let basis = kernel_basis(&sub, tol);
    if basis.len() != 1 {
        return Err(Error::ConstructionFailure(format!(
            "kernel of the first support window has dimension {}, expected 1",
            basis.len()
        )));
    }
    let mut u = basis[0].clone();
    let dominant = u
        .iter()
        .cloned()
        .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap())
        .unwrap_or(0.0);
    if dominant < 0.0 {
        for x in u.iter_mut() {
            *x = -*x;
        }
    }
    if u.iter().any(|&x| x <= tol.zero_tol) {
        return Err(Error::ConstructionFailure(
            "kernel vector of the first support window is not strictly positive".into(),
        ));
    }
    let mass: f64 = u.iter().sum();
    for x in u.iter_mut() {
        *x /= mass;
    }
    let m = u.len();
    let palindrome_residual = (0..m)
        .map(|k| (u[k] - u[m - 1 - k]).abs())
        .fold(0.0f64, f64::max);
    if palindrome_residual > PALINDROME_TOL {
        return Err(Error::ConstructionFailure(format!(
            "kernel vector is not palindromic: residual {palindrome_residual:.3e}"
        )));
    }
    // Every other window must carry the same vector, cyclically shifted:
    // the shifted vector must vanish under the window submatrix and the
    // window kernel must be one-dimensional.
    for (p, set) in sets.iter().enumerate() {
        let shift = p + 1;
        let t = shifted_zero(&u, n, shift % n);
        let support: Vec<usize> = (0..n).filter(|&k| t[k] > 0.0).collect();
        if &support != set {
            return Err(Error::ConstructionFailure(format!(
                "shift {shift} is supported on {support:?}, expected window {set:?}"
            )));
        }
        let image = a.matvec(&t)?;
        let residual = set
            .iter()
            .map(|&k| image[k].abs())
            .fold(0.0f64, f64::max);
        if residual > tol.zero_tol {
            return Err(Error::ConstructionFailure(format!(
                "shift {shift} does not vanish on its window: residual {residual:.3e}"
            )));
        }
        let window = principal_submatrix(a, set)?;
        if kernel_basis(&window, tol).len() != 1 {
            return Err(Error::ConstructionFailure(format!(
                "kernel of window {shift} is not one-dimensional"
            )));
        }
    }
    Ok(PalindromicKernelVector { u })
}

/// The minimal zeros of the odd-order circulant, built from the
/// palindromic kernel vector and cross-checked against an independent
/// enumeration.  Returns the enumerated catalog, whose flags reflect what
/// the enumeration certified.
pub fn circulant_minimal_zeros(n: usize, tol: &TolerancePolicy) -> Result<MinimalZeroCatalog> {
    let (a, _) = build_circulant(n)?;
    let sets = index_sets(n)?;
    let u = palindromic_u(&a, &sets, tol)?;
    let mut constructed = Vec::with_capacity(n);
    for shift in 1..=n {
        constructed.push(NormalizedZero::new(&shifted_zero(&u.u, n, shift % n), tol)?);
    }
    let constructed = MinimalZeroCatalog::from_parts(n, constructed, false, false)?;
    let enumerated = enumerate_minimal_zeros(&a, tol)?;
    if enumerated.len() != constructed.len() {
        return Err(Error::ConstructionFailure(format!(
            "enumeration found {} minimal zeros, construction predicts {}",
            enumerated.len(),
            constructed.len()
        )));
    }
    for (ze, zc) in enumerated.zeros().iter().zip(constructed.zeros()) {
        if ze.support() != zc.support() {
            return Err(Error::ConstructionFailure(format!(
                "support mismatch: enumerated {:?}, constructed {:?}",
                ze.support(),
                zc.support()
            )));
        }
        let gap = ze
            .vector()
            .iter()
            .zip(zc.vector())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        if gap > CATALOG_MATCH_TOL {
            return Err(Error::ConstructionFailure(format!(
                "value mismatch on support {:?}: infinity distance {gap:.3e}",
                ze.support()
            )));
        }
    }
    Ok(enumerated)
}

/// Raise the order of `a` by one: build the bordered matrix
/// `B = [[A, A e*], [e*^T A, e*^T A e*]]` for the indicator vector `e*`
/// of the index set, together with the minimal zeros of `B` derived from
/// the complete base catalog.
pub fn build_lift(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    i_set: &[usize],
    tol: &TolerancePolicy,
) -> Result<LiftResult> {
    let n = a.order();
    if catalog.order() != n {
        return Err(Error::DimensionMismatch(format!(
            "catalog of order {} against a base matrix of order {n}",
            catalog.order()
        )));
    }
    if !catalog.complete() {
        return Err(Error::IncompleteCatalog(
            "the lift needs a complete base catalog: its zero predictions \
             quantify over the whole zero set"
                .into(),
        ));
    }
    if i_set.is_empty() {
        return Err(Error::InvalidIndexSet("the lifting index set is empty".into()));
    }
    let mut index_set = i_set.to_vec();
    index_set.sort_unstable();
    index_set.dedup();
    if *index_set.last().unwrap() >= n {
        return Err(Error::InvalidIndexSet(format!(
            "index {} out of range for order {n}",
            index_set.last().unwrap()
        )));
    }

    let mut e_star = vec![0.0; n];
    for &i in &index_set {
        e_star[i] = 1.0;
    }
    let ae = a.matvec(&e_star)?;
    let corner: f64 = index_set.iter().map(|&i| ae[i]).sum();
    let lifted = SymMatrix::from_fn(n + 1, |r, c| {
        if r < n && c < n {
            a.get(r, c)
        } else if r < n {
            ae[r]
        } else if c < n {
            ae[c]
        } else {
            corner
        }
    });

    let mut j0 = Vec::new();
    let mut sigma = Vec::new();
    let mut mu = Vec::new();
    let mut lifted_zeros: Vec<NormalizedZero> = Vec::new();
    let mut segment_supports: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (j, z) in catalog.zeros().iter().enumerate() {
        let mut padded = z.vector().to_vec();
        padded.push(0.0);
        lifted_zeros.push(NormalizedZero::new(&padded, tol)?);

        if !index_set
            .iter()
            .all(|&i| z.support().binary_search(&i).is_ok())
        {
            continue;
        }
        let s = index_set
            .iter()
            .map(|&i| z.vector()[i])
            .fold(f64::INFINITY, f64::min);
        if s <= 0.0 {
            return Err(Error::InternalConsistency(
                "zero vanishes on its own support".into(),
            ));
        }
        let m = 1.0 - s * (index_set.len() as f64 - 1.0);
        if m <= tol.zero_tol {
            return Err(Error::ConstructionFailure(format!(
                "normalization mass 1 - sigma (|I| - 1) = {m:.3e} is not positive \
                 for base zero {j}"
            )));
        }
        let mut y: Vec<f64> = z
            .vector()
            .iter()
            .zip(&e_star)
            .map(|(t, e)| (t - s * e) / m)
            .collect();
        y.push(s / m);
        let y = NormalizedZero::new(&y, tol)?;
        segment_supports.push((z.support().to_vec(), y.support().to_vec()));
        lifted_zeros.push(y);
        j0.push(j);
        sigma.push(s);
        mu.push(m);
    }

    // The bordered form satisfies, for every split vector (t; t0),
    // (t; t0)^T B (t; t0) = (t + t0 e*)^T A (t + t0 e*); each predicted
    // zero must both satisfy that identity and be an actual zero of B.
    for z in &lifted_zeros {
        let v = z.vector();
        let t0 = v[n];
        let folded: Vec<f64> = (0..n).map(|k| v[k] + t0 * e_star[k]).collect();
        let via_b = lifted.quadratic(v)?;
        let via_a = a.quadratic(&folded)?;
        if (via_b - via_a).abs() > BLOCK_IDENTITY_TOL {
            return Err(Error::InternalConsistency(format!(
                "block identity violated: {via_b:.6e} vs {via_a:.6e}"
            )));
        }
        if !verify_zero(&lifted, v, tol)? {
            return Err(Error::ConstructionFailure(format!(
                "predicted zero with support {:?} has form {:.3e} on the lifted matrix",
                z.support(),
                via_b
            )));
        }
    }

    let complete = j0.is_empty();
    let lifted_catalog = MinimalZeroCatalog::from_parts(n + 1, lifted_zeros, complete, true)?;
    let find = |support: &[usize]| -> Result<usize> {
        lifted_catalog
            .zeros()
            .iter()
            .position(|z| z.support() == support)
            .ok_or_else(|| {
                Error::InternalConsistency("lifted zero lost during catalog sorting".into())
            })
    };
    let mut segment_pairs = Vec::with_capacity(segment_supports.len());
    for (tau_supp, y_supp) in &segment_supports {
        let ti = find(tau_supp)?;
        let yi = find(y_supp)?;
        segment_pairs.push((ti.min(yi), ti.max(yi)));
    }
    segment_pairs.sort_unstable();

    Ok(LiftResult {
        base: a.clone(),
        index_set,
        lifted,
        e_star,
        j0,
        sigma,
        mu,
        lifted_catalog,
        segment_pairs,
    })
}

/// The bordered matrix `[[A, A a*], [a*^T A, a*^T A a*]]` for an
/// arbitrary nonnegative weight vector `a*`.  No zero catalog is derived:
/// the zero predictions of [`build_lift`] hold for indicator vectors
/// only.
pub fn build_lift_general(a: &SymMatrix, a_star: &[f64]) -> Result<SymMatrix> {
    let n = a.order();
    if a_star.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "weight vector of length {} against a matrix of order {n}",
            a_star.len()
        )));
    }
    if a_star.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::ConstructionFailure(
            "the lift weight vector must be finite and nonnegative".into(),
        ));
    }
    let ae = a.matvec(a_star)?;
    let corner: f64 = a_star.iter().zip(&ae).map(|(x, y)| x * y).sum();
    Ok(SymMatrix::from_fn(n + 1, |r, c| {
        if r < n && c < n {
            a.get(r, c)
        } else if r < n {
            ae[r]
        } else if c < n {
            ae[c]
        } else {
            corner
        }
    }))
}

/// Check the hypotheses under which the lift of an exposed ray is again
/// exposed, reporting each one individually and never erroring on a
/// failed condition.
pub fn check_lift_hypotheses(
    lift: &LiftResult,
    catalog: &MinimalZeroCatalog,
    tol: &TolerancePolicy,
) -> Result<LiftHypotheses> {
    let a = &lift.base;
    let n = a.order();
    if catalog.order() != n {
        return Err(Error::DimensionMismatch(format!(
            "catalog of order {} against a base matrix of order {n}",
            catalog.order()
        )));
    }
    let complete_catalog = catalog.complete() && !catalog.is_empty();

    let mut supports_cover_ground_set = true;
    for z in catalog.zeros() {
        // supp(A tau) is the complement of the vanishing set M(tau), so
        // the union covers [n] exactly when M(tau) stays inside supp(tau).
        let m = m_set_of(a, z.vector(), tol)?;
        if !m.iter().all(|k| z.support().binary_search(k).is_ok()) {
            supports_cover_ground_set = false;
            break;
        }
    }

    let base_extreme = certify_extreme(a, catalog, tol)
        .map(|c| c.is_extreme())
        .unwrap_or(false);

    let mut support_union = vec![false; n];
    let mut m_union = vec![false; n];
    for &j in &lift.j0 {
        let z = &catalog.zeros()[j];
        for &k in z.support() {
            support_union[k] = true;
        }
        for k in m_set_of(a, z.vector(), tol)? {
            m_union[k] = true;
        }
    }
    let j0_supports_cover = support_union.iter().all(|&b| b);
    let j0_m_sets_cover = m_union.iter().all(|&b| b);

    Ok(LiftHypotheses {
        complete_catalog,
        supports_cover_ground_set,
        base_extreme,
        j0_supports_cover,
        j0_m_sets_cover,
    })
}

/// Compare the predicted zero set of a lift against an independent
/// enumeration of the lifted matrix: the minimal zeros must coincide,
/// the adjacency edges must be exactly the predicted segment pairs,
/// segment midpoints must be zeros, and random non-adjacent midpoints
/// must not be.
pub fn verify_zeroset_shape(lift: &LiftResult, tol: &TolerancePolicy) -> Result<ZerosetShapeReport> {
    let b = &lift.lifted;
    let predicted = &lift.lifted_catalog;
    let mut diffs: Vec<String> = Vec::new();

    let enumerated = enumerate_minimal_zeros(b, tol)?;
    if enumerated.len() != predicted.len() {
        diffs.push(format!(
            "enumeration found {} minimal zeros, the lift predicts {}",
            enumerated.len(),
            predicted.len()
        ));
    } else {
        for (ze, zp) in enumerated.zeros().iter().zip(predicted.zeros()) {
            if ze.support() != zp.support() {
                diffs.push(format!(
                    "support mismatch: enumerated {:?}, predicted {:?}",
                    ze.support(),
                    zp.support()
                ));
                continue;
            }
            let gap = ze
                .vector()
                .iter()
                .zip(zp.vector())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            if gap > CATALOG_MATCH_TOL {
                diffs.push(format!(
                    "value mismatch on support {:?}: infinity distance {gap:.3e}",
                    ze.support()
                ));
            }
        }
    }

    if !diffs.is_empty() {
        // The index correspondence below assumes matching catalogs.
        return Ok(ZerosetShapeReport { matches: false, diffs });
    }

    let graph = build_graph(b, &enumerated, tol)?;
    let edges: Vec<(usize, usize)> = graph.edges().to_vec();
    if edges != lift.segment_pairs {
        diffs.push(format!(
            "adjacency edges {:?} differ from the predicted segments {:?}",
            edges, lift.segment_pairs
        ));
    }

    for &(i, j) in &lift.segment_pairs {
        let mid: Vec<f64> = enumerated.zeros()[i]
            .vector()
            .iter()
            .zip(enumerated.zeros()[j].vector())
            .map(|(x, y)| 0.5 * (x + y))
            .collect();
        if !verify_zero(b, &mid, tol)? {
            diffs.push(format!("midpoint of segment ({i}, {j}) is not a zero"));
        }
    }

    let adjacent = |i: usize, j: usize| {
        let p = (i.min(j), i.max(j));
        lift.segment_pairs.binary_search(&p).is_ok()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(MIDPOINT_PROBE_SEED);
    let len = enumerated.len();
    let mut probed = 0;
    let mut attempts = 0;
    while probed < MIDPOINT_PROBE_COUNT && attempts < 10_000 && len >= 2 {
        attempts += 1;
        let i = rng.gen_range(0..len);
        let j = rng.gen_range(0..len);
        if i == j || adjacent(i, j) {
            continue;
        }
        let mid: Vec<f64> = enumerated.zeros()[i]
            .vector()
            .iter()
            .zip(enumerated.zeros()[j].vector())
            .map(|(x, y)| 0.5 * (x + y))
            .collect();
        let form = b.quadratic(&mid)?;
        if form <= 10.0 * tol.zero_tol {
            diffs.push(format!(
                "non-adjacent midpoint ({i}, {j}) has form {form:.3e}, \
                 expected clearly positive"
            ));
        }
        probed += 1;
    }

    Ok(ZerosetShapeReport {
        matches: diffs.is_empty(),
        diffs,
    })
}
