//! Nonnegative least squares by the Lawson-Hanson active-set method, sized
//! for the tiny membership problems that arise when testing whether a
//! point lies in the convex hull of a handful of catalog zeros.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Minimize `|| t - sum_j c_j cols[j] ||_2` over `c >= 0`.
///
/// Returns the coefficients and the residual vector `t - T c`.
pub fn nnls(cols: &[Vec<f64>], t: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let q = cols.len();
    let n = t.len();
    if q == 0 {
        return Err(Error::DimensionMismatch("nnls: no columns".into()));
    }
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch(
            "nnls: column length does not match target".into(),
        ));
    }
    let a = DMatrix::from_fn(n, q, |i, j| cols[j][i]);
    let b = DVector::from_column_slice(t);

    let scale = a.amax().max(b.amax()).max(1.0);
    let w_tol = 1e-12 * scale * scale * (n as f64);

    let mut passive = vec![false; q];
    let mut c = DVector::<f64>::zeros(q);

    // Outer loop adds at most q columns; the inner loop only removes them,
    // so 3q iterations is a generous certainty bound for these sizes.
    for _ in 0..(3 * q + 3) {
        let resid = &b - &a * &c;
        let w = a.transpose() * &resid;
        let mut best: Option<usize> = None;
        for j in 0..q {
            if !passive[j] && w[j] > w_tol {
                best = match best {
                    Some(bj) if w[bj] >= w[j] => Some(bj),
                    _ => Some(j),
                };
            }
        }
        let Some(enter) = best else {
            let r = (&b - &a * &c).iter().copied().collect();
            return Ok((c.iter().copied().collect(), r));
        };
        passive[enter] = true;

        loop {
            let idx: Vec<usize> = (0..q).filter(|&j| passive[j]).collect();
            let ap = a.select_columns(idx.iter());
            let z_p = ap
                .clone()
                .svd(true, true)
                .solve(&b, 1e-13 * scale)
                .map_err(|e| Error::InternalConsistency(format!("nnls: svd solve: {e}")))?;
            if z_p.iter().all(|&v| v > 0.0) {
                c.fill(0.0);
                for (k, &j) in idx.iter().enumerate() {
                    c[j] = z_p[k];
                }
                break;
            }
            // Step as far toward z as feasibility allows, then drop the
            // variables pinned at zero.
            let mut alpha = 1.0f64;
            for (k, &j) in idx.iter().enumerate() {
                if z_p[k] <= 0.0 {
                    let denom = c[j] - z_p[k];
                    if denom > 0.0 {
                        alpha = alpha.min(c[j] / denom);
                    }
                }
            }
            for (k, &j) in idx.iter().enumerate() {
                c[j] += alpha * (z_p[k] - c[j]);
                if c[j] <= 1e-14 * scale || (z_p[k] <= 0.0 && c[j] < 1e-12 * scale) {
                    c[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    Err(Error::Inconclusive(
        "nnls: active-set iteration budget exhausted".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_nonnegative_combination_is_recovered() {
        let cols = vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let t = vec![0.25, 0.75, 1.0]; // 0.25 * col0 + 0.75 * col1
        let (c, r) = nnls(&cols, &t).unwrap();
        assert!((c[0] - 0.25).abs() < 1e-10);
        assert!((c[1] - 0.75).abs() < 1e-10);
        assert!(r.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn negative_directions_are_clamped() {
        // Best unconstrained fit of t = -col0 would be c = -1; NNLS must
        // return c = 0 with residual t itself.
        let cols = vec![vec![1.0, 2.0]];
        let t = vec![-1.0, -2.0];
        let (c, r) = nnls(&cols, &t).unwrap();
        assert_eq!(c[0], 0.0);
        assert!((r[0] + 1.0).abs() < 1e-12);
        assert!((r[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_columns_still_fit() {
        let cols = vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ];
        let t = vec![2.0, 3.0];
        let (_, r) = nnls(&cols, &t).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn midpoint_outside_the_hull_leaves_residual() {
        // Two separated unit vectors cannot represent a point off their span.
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let t = vec![0.0, 0.0, 1.0];
        let (_, r) = nnls(&cols, &t).unwrap();
        let rn = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((rn - 1.0).abs() < 1e-12);
    }
}
