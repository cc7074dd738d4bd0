//! Face dimensions of the completely positive cone and extreme/exposed
//! ray certificates for the copositive cone.
//!
//! A copositive matrix `A` whose ray is exposed cuts out a maximal face
//! `F = CP(n) ∩ A^⊥` of the completely positive cone; the dimension of
//! that face is the rank of the family `(tau^i + tau^j)(tau^i + tau^j)^T`
//! over all member pairs `i <= j` of every maximal clique of the
//! minimal-zeros graph.  Both certificates reduce to nullspaces of linear
//! systems on a symmetric unknown `D`, expressed in svec coordinates:
//!
//! * extremality: `e_k^T D tau = 0` for every catalog zero `tau` and
//!   every `k` outside the support of `A tau`; the ray is extreme exactly
//!   when the solution space is one-dimensional, necessarily spanned by
//!   `A` itself.
//! * exposedness, tier one (EqualityOnly): the same with `k` ranging over
//!   the clique-union set `J(tau)`; a one-dimensional solution space
//!   spanned by `A` certifies exposedness outright.
//! * tier two (SupportCriterion): when every zero satisfies
//!   `supp(tau) = [n] \ supp(A tau)`, the two systems coincide, so an
//!   extreme ray is exposed.
//! * tier three (ConeProbe): otherwise the ray is exposed iff no solution
//!   of the equality system, linearly independent from `A`, satisfies the
//!   sign conditions `e_k^T D tau >= 0` on the remaining indices; this is
//!   a homogeneous cone-nontriviality question over the nullspace
//!   coordinates orthogonal to `A`, settled by linear programming.
//!
//! All operations require an exhaustive zero catalog: the clique
//! machinery represents the complete zero set only when every minimal
//! zero is present.

use crate::error::{Error, Result};
use crate::graph::{j_set_of_support, m_set_of, CliqueCover};
use crate::linalg::{
    rank_of_family_details, rows_nullspace_details, svec, svec_len, SymMatrix,
};
use crate::lp;
use crate::tol::TolerancePolicy;
use crate::zeros::MinimalZeroCatalog;

/// A nullspace vector counts as spanned by `svec(A)` when the absolute
/// cosine of the angle between them is at least `1 - SPAN_COS_TOL`.
const SPAN_COS_TOL: f64 = 1e-8;

/// Inequality rows of the cone probe with infinity norm at or below this
/// are numerically zero (the constraint is vacuous) and are dropped.
const PROBE_ROW_TOL: f64 = 1e-12;

/// A face of the completely positive cone described through the zeros of
/// an exposing copositive matrix.
#[derive(Debug, Clone)]
pub struct FaceDescriptor {
    matrix: SymMatrix,
    dimension: usize,
    generator_pairs: Vec<Vec<(usize, usize)>>,
    maximal: bool,
    rank_gap: f64,
}

impl FaceDescriptor {
    /// The exposing copositive matrix.
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// Dimension of the face, from the clique rank formula.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Generator index pairs `(i, j)`, `i <= j`, grouped per clique in
    /// cover order.
    pub fn generator_pairs(&self) -> &[Vec<(usize, usize)>] {
        &self.generator_pairs
    }

    /// True when the exposing matrix is certified exposed, so the face is
    /// maximal.
    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    /// Ratio of the smallest counted singular value to the rank threshold
    /// in the dimension decision; large values mean a sharp decision.
    pub fn rank_gap(&self) -> f64 {
        self.rank_gap
    }
}

/// How exposedness was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExposednessMethod {
    /// The equality system over the `J(tau)` sets already has a
    /// one-dimensional solution space spanned by the matrix.
    EqualityOnly,
    /// Every zero satisfies `supp(tau) = [n] \ supp(A tau)` and the ray
    /// is extreme, so the extremality system certifies exposedness.
    SupportCriterion,
    /// A linear-programming probe over the nullspace directions
    /// orthogonal to the matrix settled the sign conditions.
    ConeProbe,
}

impl ExposednessMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExposednessMethod::EqualityOnly => "equality-only",
            ExposednessMethod::SupportCriterion => "support-criterion",
            ExposednessMethod::ConeProbe => "cone-probe",
        }
    }
}

/// Outcome of an extreme or exposed ray certification.
#[derive(Debug, Clone)]
pub struct RayCertificate {
    extreme: bool,
    exposed: bool,
    equality_nullity: usize,
    method: Option<ExposednessMethod>,
    nullspace_rep: Vec<Vec<f64>>,
    gap_over_threshold: f64,
    reconstruction_residual: Option<f64>,
}

impl RayCertificate {
    /// True when the ray through the matrix is certified extreme.
    pub fn is_extreme(&self) -> bool {
        self.extreme
    }

    /// True when the ray is certified exposed; meaningful only on
    /// certificates from [`certify_exposed`].
    pub fn is_exposed(&self) -> bool {
        self.exposed
    }

    /// Dimension of the solution space of the defining equality system.
    pub fn equality_nullity(&self) -> usize {
        self.equality_nullity
    }

    /// The tier that decided exposedness; `None` on pure extremality
    /// certificates.
    pub fn method(&self) -> Option<ExposednessMethod> {
        self.method
    }

    /// Orthonormal nullspace basis of the equality system, in svec
    /// coordinates.
    pub fn nullspace_rep(&self) -> &[Vec<f64>] {
        &self.nullspace_rep
    }

    /// Ratio of the smallest counted singular value to the threshold in
    /// the nullity decision.
    pub fn gap_over_threshold(&self) -> f64 {
        self.gap_over_threshold
    }

    /// Frobenius distance between the normalized matrix and its
    /// reconstruction from the nullspace, when the nullity is one.
    pub fn reconstruction_residual(&self) -> Option<f64> {
        self.reconstruction_residual
    }
}

/// Dimension of the face of the completely positive cone orthogonal to
/// the exposing matrix: the rank of the outer products
/// `(tau^i + tau^j)(tau^i + tau^j)^T` over all member pairs `i <= j` of
/// every maximal clique.
pub fn face_dimension(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    cover: &CliqueCover,
    tol: &TolerancePolicy,
) -> Result<FaceDescriptor> {
    check_inputs(a, catalog, cover)?;
    let mut generators: Vec<SymMatrix> = Vec::new();
    let mut generator_pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    for clique in cover.cliques() {
        let mut pairs = Vec::new();
        for (pi, &i) in clique.members.iter().enumerate() {
            for &j in clique.members.iter().skip(pi) {
                let zi = catalog.zeros()[i].vector();
                let zj = catalog.zeros()[j].vector();
                let s: Vec<f64> = zi.iter().zip(zj.iter()).map(|(x, y)| x + y).collect();
                generators.push(SymMatrix::from_fn(a.order(), |r, c| s[r] * s[c]));
                pairs.push((i, j));
            }
        }
        generator_pairs.push(pairs);
    }
    let details = rank_of_family_details(&generators, tol)?;
    Ok(FaceDescriptor {
        matrix: a.clone(),
        dimension: details.rank,
        generator_pairs,
        maximal: false,
        rank_gap: details.gap_over_threshold(),
    })
}

/// Certify that the ray through `a` is extreme in the copositive cone:
/// the homogeneous system `e_k^T D tau = 0` over all catalog zeros `tau`
/// and all `k` outside `supp(A tau)` must have a one-dimensional solution
/// space, spanned by `a` itself.
pub fn certify_extreme(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    tol: &TolerancePolicy,
) -> Result<RayCertificate> {
    check_catalog(a, catalog)?;
    let n = a.order();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for z in catalog.zeros() {
        for k in m_set_of(a, z.vector(), tol)? {
            rows.push(equality_row(n, k, z.vector()));
        }
    }
    let (basis, details) = rows_nullspace_details(&rows, svec_len(n), tol);
    certificate_from_nullspace(a, basis, &details, None)
}

/// True when every catalog zero satisfies `supp(tau) = [n] \ supp(A tau)`
/// exactly; together with extremality this certifies exposedness.
pub fn support_criterion(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    tol: &TolerancePolicy,
) -> Result<bool> {
    check_catalog(a, catalog)?;
    for z in catalog.zeros() {
        let m = m_set_of(a, z.vector(), tol)?;
        if m != z.support() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certify that the ray through `a` is exposed in the copositive cone,
/// deciding through the three tiers described in the module
/// documentation.  The certificate also carries the extremality verdict.
pub fn certify_exposed(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    cover: &CliqueCover,
    tol: &TolerancePolicy,
) -> Result<RayCertificate> {
    check_inputs(a, catalog, cover)?;
    let n = a.order();
    let extreme_cert = certify_extreme(a, catalog, tol)?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for z in catalog.zeros() {
        for k in j_set_of_support(cover, z.support()) {
            rows.push(equality_row(n, k, z.vector()));
        }
    }
    let (basis, details) = rows_nullspace_details(&rows, svec_len(n), tol);
    let nullity = basis.len();
    if nullity == 0 {
        return Err(Error::InternalConsistency(
            "exposedness system excludes the exposing matrix itself".into(),
        ));
    }

    let sa = svec(a);
    if nullity == 1 {
        if cosine(&basis[0], &sa) < 1.0 - SPAN_COS_TOL {
            return Err(Error::InternalConsistency(
                "one-dimensional exposedness nullspace is not spanned by the matrix".into(),
            ));
        }
        let residual = reconstruction_residual(&basis[0], &sa);
        return Ok(RayCertificate {
            extreme: extreme_cert.extreme,
            exposed: true,
            equality_nullity: 1,
            method: Some(ExposednessMethod::EqualityOnly),
            nullspace_rep: basis,
            gap_over_threshold: details.gap_over_threshold(),
            reconstruction_residual: Some(residual),
        });
    }

    if extreme_cert.extreme && support_criterion(a, catalog, tol)? {
        return Ok(RayCertificate {
            extreme: true,
            exposed: true,
            equality_nullity: nullity,
            method: Some(ExposednessMethod::SupportCriterion),
            nullspace_rep: basis,
            gap_over_threshold: details.gap_over_threshold(),
            reconstruction_residual: extreme_cert.reconstruction_residual,
        });
    }

    // Cone probe: directions in the nullspace orthogonal to the matrix
    // that satisfy every remaining sign condition witness non-exposedness.
    let norm_sa = sa.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_sa == 0.0 {
        return Err(Error::InternalConsistency(
            "cannot probe exposedness of the zero matrix".into(),
        ));
    }
    let a_hat: Vec<f64> = sa.iter().map(|x| x / norm_sa).collect();
    let mut w_basis: Vec<Vec<f64>> = Vec::new();
    for v in &basis {
        let mut u = v.clone();
        project_out(&mut u, &a_hat);
        for w in &w_basis {
            project_out(&mut u, w);
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 {
            for x in u.iter_mut() {
                *x /= norm;
            }
            w_basis.push(u);
        }
    }

    let mut g_rows: Vec<Vec<f64>> = Vec::new();
    for z in catalog.zeros() {
        let m = m_set_of(a, z.vector(), tol)?;
        let jset = j_set_of_support(cover, z.support());
        for k in m {
            if jset.binary_search(&k).is_ok() {
                continue;
            }
            let row = equality_row(n, k, z.vector());
            let g_row: Vec<f64> = w_basis
                .iter()
                .map(|w| w.iter().zip(row.iter()).map(|(x, y)| x * y).sum())
                .collect();
            if g_row.iter().fold(0.0f64, |m, x| m.max(x.abs())) > PROBE_ROW_TOL {
                g_rows.push(g_row);
            }
        }
    }
    let independent_ray = lp::cone_has_nonzero_point(&g_rows)?;
    Ok(RayCertificate {
        extreme: extreme_cert.extreme,
        exposed: !independent_ray,
        equality_nullity: nullity,
        method: Some(ExposednessMethod::ConeProbe),
        nullspace_rep: basis,
        gap_over_threshold: details.gap_over_threshold(),
        reconstruction_residual: extreme_cert.reconstruction_residual,
    })
}

/// The maximal face of the completely positive cone cut out by an exposed
/// copositive matrix.  Errors with `NotExposed` when the exposedness
/// certificate fails, since maximality is then not established.
pub fn maximal_face_of(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    cover: &CliqueCover,
    tol: &TolerancePolicy,
) -> Result<FaceDescriptor> {
    let cert = certify_exposed(a, catalog, cover, tol)?;
    if !cert.exposed {
        return Err(Error::NotExposed);
    }
    let mut fd = face_dimension(a, catalog, cover, tol)?;
    fd.maximal = true;
    Ok(fd)
}

/// The svec-coordinate functional of `D -> e_k^T D tau`.
fn equality_row(n: usize, k: usize, tau: &[f64]) -> Vec<f64> {
    let s2 = std::f64::consts::SQRT_2;
    let mut row = Vec::with_capacity(svec_len(n));
    for i in 0..n {
        for j in i..n {
            row.push(if i == j {
                if i == k {
                    tau[k]
                } else {
                    0.0
                }
            } else if i == k {
                tau[j] / s2
            } else if j == k {
                tau[i] / s2
            } else {
                0.0
            });
        }
    }
    row
}

fn certificate_from_nullspace(
    a: &SymMatrix,
    basis: Vec<Vec<f64>>,
    details: &crate::linalg::RankDetails,
    method: Option<ExposednessMethod>,
) -> Result<RayCertificate> {
    let nullity = basis.len();
    if nullity == 0 {
        return Err(Error::InternalConsistency(
            "extremality system excludes the exposing matrix itself".into(),
        ));
    }
    let sa = svec(a);
    let mut extreme = false;
    let mut residual = None;
    if nullity == 1 {
        if cosine(&basis[0], &sa) < 1.0 - SPAN_COS_TOL {
            return Err(Error::InternalConsistency(
                "one-dimensional extremality nullspace is not spanned by the matrix".into(),
            ));
        }
        extreme = true;
        residual = Some(reconstruction_residual(&basis[0], &sa));
    }
    Ok(RayCertificate {
        extreme,
        exposed: false,
        equality_nullity: nullity,
        method,
        nullspace_rep: basis,
        gap_over_threshold: details.gap_over_threshold(),
        reconstruction_residual: residual,
    })
}

/// Absolute cosine of the angle between two coordinate vectors.
fn cosine(v: &[f64], w: &[f64]) -> f64 {
    let dot: f64 = v.iter().zip(w.iter()).map(|(x, y)| x * y).sum();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot.abs() / (nv * nw)
}

/// Distance between the unit nullspace vector (sign-aligned with the
/// matrix) and the unit-scaled matrix, in svec coordinates.
fn reconstruction_residual(v: &[f64], sa: &[f64]) -> f64 {
    let dot: f64 = v.iter().zip(sa.iter()).map(|(x, y)| x * y).sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    let norm_sa = sa.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter()
        .zip(sa.iter())
        .map(|(x, y)| {
            let d = sign * x - y / norm_sa;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn project_out(u: &mut [f64], w: &[f64]) {
    let dot: f64 = u.iter().zip(w.iter()).map(|(x, y)| x * y).sum();
    for (x, y) in u.iter_mut().zip(w.iter()) {
        *x -= dot * y;
    }
}

fn check_catalog(a: &SymMatrix, catalog: &MinimalZeroCatalog) -> Result<()> {
    if catalog.order() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "certificate: catalog of order {} against a matrix of order {}",
            catalog.order(),
            a.order()
        )));
    }
    if !catalog.exhaustive() {
        return Err(Error::IncompleteCatalog(
            "ray certificates and face dimensions need every minimal zero".into(),
        ));
    }
    Ok(())
}

fn check_inputs(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    cover: &CliqueCover,
) -> Result<()> {
    check_catalog(a, catalog)?;
    if cover.vertex_count() != catalog.len() || cover.order() != catalog.order() {
        return Err(Error::DimensionMismatch(
            "cover and catalog describe different zero sets".into(),
        ));
    }
    Ok(())
}
