//! Serializable reports over the pipeline results, and the end-to-end
//! bound pipelines behind the command-line interface.
//!
//! Every report type derives `Serialize`/`Deserialize` with a fixed field
//! order, so serializing, parsing, and serializing again is byte
//! identical.  All indices in reports are one-based: catalog positions,
//! graph vertices, ground-set indices, and lifting index sets.  The
//! in-memory API stays zero-based; conversion happens only here.

use serde::{Deserialize, Serialize};

use crate::construct::{build_circulant, build_lift, circulant_minimal_zeros, LiftResult};
use crate::error::{Error, Result};
use crate::face::{certify_exposed, maximal_face_of, FaceDescriptor, RayCertificate};
use crate::graph::{build_graph, maximal_cliques, CliqueCover, ZerosGraph};
use crate::tol::TolerancePolicy;
use crate::zeros::{MinimalZeroCatalog, NormalizedZero};

/// One minimal zero: its support (one-based) and its values on the
/// support, in support order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub support: Vec<usize>,
    pub values: Vec<f64>,
}

/// A minimal zero catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub order: usize,
    pub complete: bool,
    pub exhaustive: bool,
    pub zeros: Vec<ZeroReport>,
}

/// One maximal clique of the minimal-zeros graph: member zeros
/// (one-based catalog positions), the union of their supports
/// (one-based), and the plain sum of the member vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueReport {
    pub members: Vec<usize>,
    pub p_star: Vec<usize>,
    pub t_s: Vec<f64>,
}

/// The minimal-zeros graph with its maximal-clique cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub order: usize,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub cliques: Vec<CliqueReport>,
}

/// Numerical sharpness diagnostics of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Smallest counted singular value over the rank threshold in the
    /// nullity decision; absent when the decision was trivial (no
    /// counted values, so no finite ratio exists).
    pub gap_over_threshold: Option<f64>,
    /// Frobenius distance between the normalized matrix and its
    /// reconstruction from the certificate nullspace, when available.
    pub reconstruction: Option<f64>,
}

/// An extreme/exposed ray certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub extreme: bool,
    pub exposed: bool,
    /// The tier that decided exposedness, when exposedness was assessed.
    pub method: Option<String>,
    pub equality_nullity: usize,
    pub residuals: ResidualReport,
}

/// A face of the completely positive cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceReport {
    pub order: usize,
    pub dimension: usize,
    pub maximal: bool,
    /// Rank-decision sharpness; absent when no generators exist.
    pub rank_gap: Option<f64>,
    /// Generator pairs per clique, one-based catalog positions.
    pub generator_pairs: Vec<Vec<(usize, usize)>>,
}

/// An order-raising lift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    /// The lifting index set, one-based.
    #[serde(rename = "I")]
    pub index_set: Vec<usize>,
    /// One-based base-catalog positions of the zeros that spawn an extra
    /// lifted zero.
    #[serde(rename = "J0")]
    pub j0: Vec<usize>,
    pub sigma: Vec<f64>,
    pub mu: Vec<f64>,
    /// The lifted matrix in the shared text format.
    #[serde(rename = "B")]
    pub lifted_matrix: String,
    pub lifted_zeros: Vec<ZeroReport>,
}

/// How a bound was realized: the circulant itself, or a lift of one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    /// "circulant" or "lift".
    pub kind: String,
    /// Order of the circulant the pipeline starts from.
    pub base_order: usize,
    /// The lifting index set (one-based) when `kind` is "lift".
    #[serde(rename = "I")]
    pub index_set: Option<Vec<usize>>,
}

/// The headline row for one order: the dimension bounds on maximal faces
/// of the completely positive cone, the construction realizing the upper
/// bound, and the certificates backing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub parity: String,
    /// Every maximal face has dimension at least `n`.
    pub lower_bound: usize,
    /// Dimension of the maximal face the construction exposes.
    pub upper_bound_constructed: usize,
    /// The previously known bound `(n^2 - 5n + 8) / 2`, defined for
    /// orders 6 and up.
    pub prior_upper: Option<usize>,
    pub construction: ConstructionReport,
    pub certificates: CertificateReport,
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|&x| x + 1).collect()
}

fn zero_report(z: &NormalizedZero) -> ZeroReport {
    ZeroReport {
        support: one_based(z.support()),
        values: z.values_on_support(),
    }
}

/// Report view of a catalog.
pub fn catalog_report(catalog: &MinimalZeroCatalog) -> CatalogReport {
    CatalogReport {
        order: catalog.order(),
        complete: catalog.complete(),
        exhaustive: catalog.exhaustive(),
        zeros: catalog.zeros().iter().map(zero_report).collect(),
    }
}

/// Report view of a graph and its clique cover.
pub fn graph_report(graph: &ZerosGraph, cover: &CliqueCover) -> GraphReport {
    GraphReport {
        order: graph.order(),
        vertices: graph.vertex_count(),
        edges: graph
            .edges()
            .iter()
            .map(|&(i, j)| (i + 1, j + 1))
            .collect(),
        cliques: cover
            .cliques()
            .iter()
            .map(|c| CliqueReport {
                members: one_based(&c.members),
                p_star: one_based(&c.p_star),
                t_s: c.t_s.clone(),
            })
            .collect(),
    }
}

/// Report view of a ray certificate.
pub fn certificate_report(cert: &RayCertificate) -> CertificateReport {
    CertificateReport {
        extreme: cert.is_extreme(),
        exposed: cert.is_exposed(),
        method: cert.method().map(|m| m.as_str().to_string()),
        equality_nullity: cert.equality_nullity(),
        residuals: ResidualReport {
            gap_over_threshold: finite_or_none(cert.gap_over_threshold()),
            reconstruction: cert.reconstruction_residual(),
        },
    }
}

/// JSON has no representation for infinities, so trivial gap ratios are
/// reported as absent.
fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Report view of a face descriptor.
pub fn face_report(face: &FaceDescriptor) -> FaceReport {
    FaceReport {
        order: face.matrix().order(),
        dimension: face.dimension(),
        maximal: face.is_maximal(),
        rank_gap: finite_or_none(face.rank_gap()),
        generator_pairs: face
            .generator_pairs()
            .iter()
            .map(|pairs| pairs.iter().map(|&(i, j)| (i + 1, j + 1)).collect())
            .collect(),
    }
}

/// Report view of a lift.
pub fn lift_report(lift: &LiftResult) -> LiftReport {
    LiftReport {
        index_set: one_based(&lift.index_set),
        j0: one_based(&lift.j0),
        sigma: lift.sigma.clone(),
        mu: lift.mu.clone(),
        lifted_matrix: lift.lifted.to_text(),
        lifted_zeros: lift.lifted_catalog.zeros().iter().map(zero_report).collect(),
    }
}

/// The previously known upper bound `(n^2 - 5n + 8) / 2`, defined for
/// orders 6 and up.
pub fn prior_upper_bound(n: usize) -> Option<usize> {
    if n >= 6 {
        Some((n * n - 5 * n + 8) / 2)
    } else {
        None
    }
}

/// Run the full pipeline for one order and emit its bounds row.
///
/// Odd orders run the circulant pipeline directly.  Even orders lift the
/// circulant of order `n - 1` by the index window `{1, ..., n - 5}`
/// (one-based) and certify the lifted matrix.  Orders outside 5..=12 are
/// rejected: the enumeration cross-checks behind the catalogs are
/// desk-scale by design.
pub fn bounds_report(n: usize, tol: &TolerancePolicy) -> Result<BoundsReport> {
    if !(5..=12).contains(&n) {
        return Err(Error::UnsupportedOrder {
            n,
            reason: "bounds rows cover orders 5 through 12".into(),
        });
    }
    let prior_upper = prior_upper_bound(n);
    if n % 2 == 1 {
        let (a, _) = build_circulant(n)?;
        let catalog = circulant_minimal_zeros(n, tol)?;
        let graph = build_graph(&a, &catalog, tol)?;
        let cover = maximal_cliques(&graph, &catalog)?;
        let cert = certify_exposed(&a, &catalog, &cover, tol)?;
        let face = maximal_face_of(&a, &catalog, &cover, tol)?;
        Ok(BoundsReport {
            n,
            parity: "odd".into(),
            lower_bound: n,
            upper_bound_constructed: face.dimension(),
            prior_upper,
            construction: ConstructionReport {
                kind: "circulant".into(),
                base_order: n,
                index_set: None,
            },
            certificates: certificate_report(&cert),
        })
    } else {
        let base_order = n - 1;
        let (a, _) = build_circulant(base_order)?;
        let catalog = circulant_minimal_zeros(base_order, tol)?;
        let i_set: Vec<usize> = (0..base_order - 4).collect();
        let lift = build_lift(&a, &catalog, &i_set, tol)?;
        let graph = build_graph(&lift.lifted, &lift.lifted_catalog, tol)?;
        let cover = maximal_cliques(&graph, &lift.lifted_catalog)?;
        let cert = certify_exposed(&lift.lifted, &lift.lifted_catalog, &cover, tol)?;
        let face = maximal_face_of(&lift.lifted, &lift.lifted_catalog, &cover, tol)?;
        Ok(BoundsReport {
            n,
            parity: "even".into(),
            lower_bound: n,
            upper_bound_constructed: face.dimension(),
            prior_upper,
            construction: ConstructionReport {
                kind: "lift".into(),
                base_order,
                index_set: Some(one_based(&i_set)),
            },
            certificates: certificate_report(&cert),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn odd_rows_reproduce_the_order_itself() {
        let row = bounds_report(5, &tol()).unwrap();
        assert_eq!(row.parity, "odd");
        assert_eq!(row.lower_bound, 5);
        assert_eq!(row.upper_bound_constructed, 5);
        assert_eq!(row.prior_upper, None);
        assert_eq!(row.construction.kind, "circulant");
        assert!(row.certificates.extreme);
        assert!(row.certificates.exposed);
    }

    #[test]
    fn even_rows_reproduce_order_plus_three() {
        let row = bounds_report(6, &tol()).unwrap();
        assert_eq!(row.parity, "even");
        assert_eq!(row.lower_bound, 6);
        assert_eq!(row.upper_bound_constructed, 9);
        assert_eq!(row.prior_upper, Some(7));
        assert_eq!(row.construction.kind, "lift");
        assert_eq!(row.construction.base_order, 5);
        assert_eq!(row.construction.index_set, Some(vec![1]));
        assert!(row.certificates.extreme);
        assert!(row.certificates.exposed);
    }

    #[test]
    fn out_of_range_orders_are_rejected() {
        assert!(matches!(
            bounds_report(4, &tol()),
            Err(Error::UnsupportedOrder { n: 4, .. })
        ));
        assert!(matches!(
            bounds_report(13, &tol()),
            Err(Error::UnsupportedOrder { n: 13, .. })
        ));
    }

    #[test]
    fn prior_bound_matches_the_quadratic_formula() {
        assert_eq!(prior_upper_bound(5), None);
        assert_eq!(prior_upper_bound(6), Some(7));
        assert_eq!(prior_upper_bound(8), Some(16));
        assert_eq!(prior_upper_bound(10), Some(29));
    }

    #[test]
    fn reports_use_one_based_indices() {
        let t = tol();
        let catalog = circulant_minimal_zeros(5, &t).unwrap();
        let cat_rep = catalog_report(&catalog);
        assert_eq!(cat_rep.zeros.len(), 5);
        for z in &cat_rep.zeros {
            assert!(z.support.iter().all(|&k| (1..=5).contains(&k)));
            assert_eq!(z.support.len(), z.values.len());
        }

        let (a, _) = build_circulant(5).unwrap();
        let graph = build_graph(&a, &catalog, &t).unwrap();
        let cover = maximal_cliques(&graph, &catalog).unwrap();
        let g_rep = graph_report(&graph, &cover);
        assert!(g_rep.edges.is_empty());
        assert_eq!(g_rep.cliques.len(), 5);
        for c in &g_rep.cliques {
            assert!(c.members.iter().all(|&m| (1..=5).contains(&m)));
            assert!(c.p_star.iter().all(|&k| (1..=5).contains(&k)));
        }
    }

    #[test]
    fn json_serialization_round_trips_byte_identically() {
        let row = bounds_report(6, &tol()).unwrap();
        let first = serde_json::to_string_pretty(&row).unwrap();
        let parsed: BoundsReport = serde_json::from_str(&first).unwrap();
        let second = serde_json::to_string_pretty(&parsed).unwrap();
        assert_eq!(first, second);
        assert_eq!(row, parsed);
    }

    #[test]
    fn repeated_pipeline_runs_are_deterministic() {
        let a = serde_json::to_string(&bounds_report(8, &tol()).unwrap()).unwrap();
        let b = serde_json::to_string(&bounds_report(8, &tol()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trivial_certificates_serialize_without_infinities() {
        // The identity has no zeros: the equality system is empty, the
        // gap ratio is infinite, and the JSON layer must drop it rather
        // than emit an unrepresentable number.
        let t = tol();
        let a = crate::linalg::SymMatrix::identity(3);
        let catalog = crate::zeros::enumerate_minimal_zeros(&a, &t).unwrap();
        let graph = build_graph(&a, &catalog, &t).unwrap();
        let cover = maximal_cliques(&graph, &catalog).unwrap();
        let cert = certify_exposed(&a, &catalog, &cover, &t).unwrap();
        let rep = certificate_report(&cert);
        assert!(!rep.extreme);
        assert!(!rep.exposed);
        assert_eq!(rep.residuals.gap_over_threshold, None);
        let json = serde_json::to_string(&rep).unwrap();
        let parsed: CertificateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(rep, parsed);

        let face = crate::face::face_dimension(&a, &catalog, &cover, &t).unwrap();
        let frep = face_report(&face);
        assert_eq!(frep.dimension, 0);
        assert_eq!(frep.rank_gap, None);
        serde_json::to_string(&frep).unwrap();
    }

    #[test]
    fn lift_report_embeds_a_parseable_matrix() {
        let t = tol();
        let (a, _) = build_circulant(5).unwrap();
        let catalog = circulant_minimal_zeros(5, &t).unwrap();
        let lift = build_lift(&a, &catalog, &[0], &t).unwrap();
        let rep = lift_report(&lift);
        assert_eq!(rep.index_set, vec![1]);
        assert_eq!(rep.j0, vec![1, 2, 3]);
        assert_eq!(rep.lifted_zeros.len(), 8);
        let parsed = crate::linalg::SymMatrix::from_text(&rep.lifted_matrix, &t).unwrap();
        assert_eq!(parsed.order(), 6);
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(parsed.get(r, c), lift.lifted.get(r, c));
            }
        }
    }
}
