//! A small dense two-phase simplex solver for the tiny linear programs
//! behind the exposedness cone probe and the positive-kernel-vector test.
//!
//! Problems here have at most a dozen variables and a few hundred
//! constraints, so a dense tableau with Bland's anti-cycling rule is both
//! simple and fast. The solver is deterministic: identical inputs walk
//! identical pivot sequences.

use crate::error::{Error, Result};

/// Outcome of a maximization.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// Optimal value and an optimizer.  Production callers consume only
    /// the value; the point is asserted in the solver's own tests.
    Optimal {
        value: f64,
        #[cfg_attr(not(test), allow(dead_code))]
        x: Vec<f64>,
    },
    /// The constraints admit no point.
    Infeasible,
}

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

/// Maximize `c . x` subject to `a x <= b` and `x >= 0`.
///
/// Unbounded problems are reported as errors since every caller supplies
/// box constraints. Callers are expected to pre-scale rows to unit-ish
/// magnitude; the solver applies no scaling of its own.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let nvar = c.len();
    let ncon = a.len();
    if b.len() != ncon || a.iter().any(|row| row.len() != nvar) {
        return Err(Error::DimensionMismatch(
            "lp: constraint matrix shape does not match c and b".into(),
        ));
    }

    // Tableau layout: columns = [x (nvar) | slack (ncon) | artificial (as
    // needed)], one row per constraint plus an objective row appended by
    // each phase. Rows with negative b are negated so b >= 0, turning the
    // slack into a surplus and requiring an artificial variable.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(ncon);
    let mut rhs: Vec<f64> = Vec::with_capacity(ncon);
    let mut needs_artificial: Vec<bool> = Vec::with_capacity(ncon);
    for i in 0..ncon {
        let mut row: Vec<f64> = a[i].clone();
        let mut bi = b[i];
        let mut slack = 1.0;
        if bi < 0.0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
            bi = -bi;
            slack = -1.0;
        }
        let mut full = row;
        full.extend(std::iter::repeat(0.0).take(ncon));
        full[nvar + i] = slack;
        rows.push(full);
        rhs.push(bi);
        needs_artificial.push(slack < 0.0);
    }

    let n_art: usize = needs_artificial.iter().filter(|&&x| x).count();
    let total_cols = nvar + ncon + n_art;
    let mut basis: Vec<usize> = Vec::with_capacity(ncon);
    {
        let mut art_col = nvar + ncon;
        for i in 0..ncon {
            for row in rows.iter_mut() {
                row.resize(total_cols, 0.0);
            }
            if needs_artificial[i] {
                rows[i][art_col] = 1.0;
                basis.push(art_col);
                art_col += 1;
            } else {
                basis.push(nvar + i);
            }
        }
    }

    // Phase 1: minimize the sum of artificials (maximize its negation).
    if n_art > 0 {
        let mut obj = vec![0.0; total_cols];
        for col in (nvar + ncon)..total_cols {
            obj[col] = -1.0;
        }
        let opt = run_simplex(&mut rows, &mut rhs, &mut basis, &obj)?;
        if opt < -FEAS_EPS {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive any artificial still in the basis out (degenerate rows).
        for i in 0..basis.len() {
            if basis[i] >= nvar + ncon {
                if let Some(col) = (0..nvar + ncon)
                    .find(|&col| rows[i][col].abs() > PIVOT_EPS)
                {
                    pivot(&mut rows, &mut rhs, &mut basis, i, col);
                }
                // A row with no eligible pivot is all-zero: redundant, and
                // harmless to leave in place with its artificial at zero.
            }
        }
    }

    // Phase 2: the real objective, with artificial columns frozen.
    let mut obj = vec![0.0; total_cols];
    obj[..nvar].copy_from_slice(c);
    let frozen = nvar + ncon;
    for row in rows.iter_mut() {
        for col in frozen..total_cols {
            row[col] = 0.0;
        }
    }
    let value = run_simplex(&mut rows, &mut rhs, &mut basis, &obj)?;

    let mut x = vec![0.0; nvar];
    for (i, &bcol) in basis.iter().enumerate() {
        if bcol < nvar {
            x[bcol] = rhs[i];
        }
    }
    Ok(LpOutcome::Optimal { value, x })
}

/// Dantzig-rule simplex with a Bland fallback after a pivot budget, on the
/// tableau in `rows`/`rhs` with the given starting `basis`. Returns the
/// optimal objective value.
fn run_simplex(
    rows: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    obj: &[f64],
) -> Result<f64> {
    let ncols = obj.len();
    // Reduced objective row, kept in sync through pivots.
    let mut z: Vec<f64> = obj.to_vec();
    let mut zval = 0.0;
    for (i, &bcol) in basis.iter().enumerate() {
        let coeff = z[bcol];
        if coeff != 0.0 {
            for col in 0..ncols {
                z[col] -= coeff * rows[i][col];
            }
            zval += coeff * rhs[i];
        }
    }

    let budget = 200 * (rows.len() + ncols) + 1000;
    for iter in 0..budget {
        let bland = iter > budget / 2;
        let entering = if bland {
            (0..ncols).find(|&c| z[c] > PIVOT_EPS)
        } else {
            (0..ncols)
                .filter(|&c| z[c] > PIVOT_EPS)
                .max_by(|&a, &b| z[a].partial_cmp(&z[b]).unwrap())
        };
        let Some(col) = entering else {
            return Ok(zval);
        };
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..rows.len() {
            let aij = rows[i][col];
            if aij > PIVOT_EPS {
                let ratio = rhs[i] / aij;
                let better = match leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - PIVOT_EPS
                            || (ratio < lr + PIVOT_EPS && bland && basis[i] < basis[li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Err(Error::InternalConsistency(
                "lp: unbounded objective in a box-constrained probe".into(),
            ));
        };
        pivot_full(rows, rhs, basis, &mut z, &mut zval, row, col);
    }
    Err(Error::Inconclusive(
        "lp: pivot budget exhausted without convergence".into(),
    ))
}

fn pivot(rows: &mut [Vec<f64>], rhs: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    let piv = rows[row][col];
    let inv = 1.0 / piv;
    for v in rows[row].iter_mut() {
        *v *= inv;
    }
    rhs[row] *= inv;
    for i in 0..rows.len() {
        if i != row {
            let f = rows[i][col];
            if f != 0.0 {
                for c in 0..rows[i].len() {
                    rows[i][c] -= f * rows[row][c];
                }
                rhs[i] -= f * rhs[row];
                if rhs[i].abs() < 1e-14 {
                    rhs[i] = 0.0;
                }
            }
        }
    }
    basis[row] = col;
}

fn pivot_full(
    rows: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    z: &mut [f64],
    zval: &mut f64,
    row: usize,
    col: usize,
) {
    pivot(rows, rhs, basis, row, col);
    let f = z[col];
    if f != 0.0 {
        for c in 0..z.len() {
            z[c] -= f * rows[row][c];
        }
        *zval += f * rhs[row];
    }
}

/// True if the homogeneous cone `{ x : g x >= 0 }` contains a nonzero
/// point, decided exactly up to the probe tolerance.
///
/// The cone is nontrivial iff some coordinate function attains a positive
/// value over the cone's intersection with the unit box, so `2 * dim`
/// bounded LPs settle the question. Optima inside the ambiguous band
/// `(band, threshold)` yield an `Inconclusive` error instead of a guess.
pub fn cone_has_nonzero_point(g: &[Vec<f64>]) -> Result<bool> {
    let dim = match g.first() {
        None => return Ok(true), // no constraints: the whole space
        Some(row) => row.len(),
    };
    if dim == 0 {
        return Ok(false);
    }
    // Normalize rows to unit infinity-norm for scale-free tolerances.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(g.len());
    for r in g {
        let m = r.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if m > 0.0 {
            rows.push(r.iter().map(|&v| v / m).collect());
        }
    }

    const THRESHOLD: f64 = 1e-7;
    const BAND: f64 = 1e-9;

    let mut ambiguous = false;
    for coord in 0..dim {
        for sign in [1.0, -1.0] {
            // Variables: y = x + 1 (so y >= 0 handles the free sign),
            // box y <= 2 encodes |x| <= 1.
            // Constraints g x >= 0 become -g y <= -g 1.
            let nvar = dim;
            let mut a: Vec<Vec<f64>> = Vec::new();
            let mut b: Vec<f64> = Vec::new();
            for r in &rows {
                a.push(r.iter().map(|&v| -v).collect());
                b.push(-r.iter().sum::<f64>());
            }
            for v in 0..nvar {
                let mut box_row = vec![0.0; nvar];
                box_row[v] = 1.0;
                a.push(box_row);
                b.push(2.0);
            }
            let mut c = vec![0.0; nvar];
            c[coord] = sign;
            match maximize(&c, &a, &b)? {
                LpOutcome::Infeasible => {
                    return Err(Error::InternalConsistency(
                        "cone probe: homogeneous system reported infeasible".into(),
                    ));
                }
                LpOutcome::Optimal { value, .. } => {
                    // Undo the shift: optimum of sign * x_coord.
                    let opt = value - sign;
                    if opt > THRESHOLD {
                        return Ok(true);
                    }
                    if opt > BAND {
                        ambiguous = true;
                    }
                }
            }
        }
    }
    if ambiguous {
        return Err(Error::Inconclusive(
            "cone probe: optimum inside the tolerance band".into(),
        ));
    }
    Ok(false)
}

/// True if the column span of `basis` (rows indexed by constraint) contains
/// a vector that is strictly positive in every coordinate and satisfies
/// `extension` rows >= -slack. `basis[i]` is the i-th spanning vector.
///
/// Used to decide whether a multi-dimensional kernel admits a valid zero:
/// maximize the worst coordinate margin `t` over unit-box coefficients.
/// Returns the achieved margin so callers can apply their own thresholds.
pub fn max_min_coordinate(
    vectors: &[Vec<f64>],
    extension_rows: &[Vec<f64>],
    slack: f64,
) -> Result<f64> {
    let k = vectors.len();
    if k == 0 {
        return Err(Error::DimensionMismatch(
            "max_min_coordinate: empty spanning set".into(),
        ));
    }
    let n = vectors[0].len();
    // Variables: coefficients c (shifted to y = c + 1 >= 0, y <= 2) and the
    // margin t >= 0 (a positive margin is all we need to detect).
    let nvar = k + 1;
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    // Coordinate i of the combination, with c = y - 1:
    // sum_j c_j vectors[j][i] >= t  <=>  -sum_j y_j v_j[i] + t <= -sum_j v_j[i].
    for i in 0..n {
        let mut row = vec![0.0; nvar];
        let mut rhs = 0.0;
        for (j, v) in vectors.iter().enumerate() {
            row[j] = -v[i];
            rhs -= v[i];
        }
        row[k] = 1.0;
        a.push(row);
        b.push(rhs);
    }
    // Extension rows: sum_j c_j r[j] >= -slack
    // <=> -sum_j y_j r[j] <= slack - sum_j r[j].
    for r in extension_rows {
        debug_assert_eq!(r.len(), k);
        let mut row = vec![0.0; nvar];
        let mut rhs = slack;
        for j in 0..k {
            row[j] = -r[j];
            rhs -= r[j];
        }
        a.push(row);
        b.push(rhs);
    }
    for v in 0..k {
        let mut box_row = vec![0.0; nvar];
        box_row[v] = 1.0;
        a.push(box_row);
        b.push(2.0);
    }
    let mut c = vec![0.0; nvar];
    c[k] = 1.0;
    match maximize(&c, &a, &b)? {
        LpOutcome::Infeasible => Ok(f64::NEG_INFINITY),
        LpOutcome::Optimal { value, .. } => Ok(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximize_solves_a_textbook_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
        let c = [3.0, 5.0];
        let a = vec![
            vec![1.0, 0.0],
            vec![0.0, 2.0],
            vec![3.0, 2.0],
        ];
        let b = [4.0, 12.0, 18.0];
        match maximize(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 36.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9);
                assert!((x[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn maximize_detects_infeasibility() {
        // x <= -1 with x >= 0.
        let out = maximize(&[1.0], &[vec![1.0]], &[-1.0]).unwrap();
        assert!(matches!(out, LpOutcome::Infeasible));
    }

    #[test]
    fn maximize_handles_negative_rhs_feasible() {
        // x >= 1 encoded as -x <= -1; maximize -x: optimum -1 at x = 1.
        let out = maximize(&[-1.0], &[vec![-1.0], vec![1.0]], &[-1.0, 5.0]).unwrap();
        match out {
            LpOutcome::Optimal { value, x } => {
                assert!((value + 1.0).abs() < 1e-9);
                assert!((x[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn cone_probe_sees_a_halfspace() {
        // { x in R^2 : x_1 >= 0 } has plenty of nonzero points.
        assert!(cone_has_nonzero_point(&[vec![1.0, 0.0]]).unwrap());
    }

    #[test]
    fn cone_probe_sees_a_ray_on_a_subspace() {
        // x_1 >= 0, -x_1 >= 0, x_2 >= 0: the ray {x_1 = 0, x_2 >= 0}.
        let g = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        assert!(cone_has_nonzero_point(&g).unwrap());
    }

    #[test]
    fn cone_probe_rejects_the_trivial_cone() {
        // x >= 0 and -x >= 0 in both coordinates pins x = 0.
        let g = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        assert!(!cone_has_nonzero_point(&g).unwrap());
    }

    #[test]
    fn cone_probe_rejects_opposing_diagonals() {
        // y >= x, y <= x - eps... here: x - y >= 0, y - x >= 0, -x >= 0, and
        // x >= 0 leaves only the origin.
        let g = vec![
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
        ];
        assert!(!cone_has_nonzero_point(&g).unwrap());
    }

    #[test]
    fn max_min_coordinate_finds_positive_combination() {
        // Span of (1, 0) and (0, 1) clearly contains strictly positive vectors.
        let t = max_min_coordinate(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[], 0.0).unwrap();
        assert!(t > 0.9, "margin {t}");
    }

    #[test]
    fn max_min_coordinate_rejects_sign_locked_span() {
        // Span of (1, -1): no strictly positive combination exists.
        let t = max_min_coordinate(&[vec![1.0, -1.0]], &[], 0.0).unwrap();
        assert!(t <= 1e-9, "margin {t}");
    }
}
