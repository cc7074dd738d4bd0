//! The minimal-zeros graph and the structural index sets derived from it.
//!
//! Vertices are the catalog zeros (in catalog order); an edge joins two
//! zeros whose bilinear form vanishes, in which case the whole segment
//! between them consists of zeros.  The maximal cliques of this graph
//! generate the complete zero set as a union of convex hulls, one hull
//! per clique, which is what every operation here rests on:
//!
//! * `P*(s)` is the union of the member supports of clique `s`, equal to
//!   the support of the member sum `t(s)`;
//! * `S(tau)` collects the cliques whose `P*` covers the support of a
//!   given zero, and `J(tau)` is the union of their `P*` sets;
//! * `M(j)` is the complement of the support of `A tau^j`, and `M*(j)`
//!   the union of `P*` over cliques containing `j`.
//!
//! Hull membership is decided by a small nonnegative least-squares fit
//! per clique; since all vectors carry coordinate sum one, a nonnegative
//! combination is automatically convex.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::nnls::nnls;
use crate::tol::TolerancePolicy;
use crate::zeros::{zeros_adjacent, MinimalZeroCatalog, NormalizedZero};

/// Infinity-norm residual below which a point counts as lying in the
/// convex hull of a clique's zeros.
const HULL_TOL: f64 = 1e-8;

/// The minimal-zeros graph of a copositive matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ZerosGraph {
    order: usize,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl ZerosGraph {
    /// Order of the matrix the graph belongs to.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of vertices (catalog zeros).
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as pairs of catalog indices with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }
}

/// One maximal clique of the minimal-zeros graph together with its
/// derived data.
#[derive(Debug, Clone, PartialEq)]
pub struct Clique {
    /// Catalog indices of the member zeros, strictly increasing.
    pub members: Vec<usize>,
    /// Union of the member supports, strictly increasing.
    pub p_star: Vec<usize>,
    /// Sum of the member vectors; its support equals `p_star`.
    pub t_s: Vec<f64>,
}

/// All distinct maximal cliques of a minimal-zeros graph, sorted
/// lexicographically by member list.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueCover {
    order: usize,
    vertex_count: usize,
    cliques: Vec<Clique>,
}

impl CliqueCover {
    /// Order of the matrix the cover belongs to.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of vertices of the underlying graph.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

/// Build the minimal-zeros graph: an edge joins catalog zeros `i < j`
/// exactly when their bilinear form vanishes (within `zero_tol` scaled by
/// the spectral norm of the matrix).  An empty catalog yields the empty
/// graph.
pub fn build_graph(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    tol: &TolerancePolicy,
) -> Result<ZerosGraph> {
    if catalog.order() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "graph: catalog of order {} against a matrix of order {}",
            catalog.order(),
            a.order()
        )));
    }
    let p = catalog.len();
    let scale = a.spectral_norm();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            if zeros_adjacent(a, &catalog.zeros()[i], &catalog.zeros()[j], scale, tol)? {
                edges.push((i, j));
            }
        }
    }
    Ok(ZerosGraph {
        order: a.order(),
        vertex_count: p,
        edges,
    })
}

/// Enumerate all distinct maximal cliques and populate `P*(s)` and `t(s)`
/// from the catalog.  Cliques are sorted internally and the list is
/// sorted lexicographically, so the output is deterministic.
pub fn maximal_cliques(
    graph: &ZerosGraph,
    catalog: &MinimalZeroCatalog,
) -> Result<CliqueCover> {
    if graph.vertex_count != catalog.len() || graph.order != catalog.order() {
        return Err(Error::DimensionMismatch(
            "clique cover: graph and catalog describe different zero sets".into(),
        ));
    }
    let p = graph.vertex_count;
    let mut adj = vec![0u32; p];
    for &(i, j) in &graph.edges {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let mut masks = Vec::new();
    if p > 0 {
        let all = if p == 32 { u32::MAX } else { (1u32 << p) - 1 };
        bron_kerbosch(0, all, 0, &adj, &mut masks);
    }

    let mut cliques = Vec::with_capacity(masks.len());
    for mask in masks {
        let members: Vec<usize> = (0..p).filter(|&v| mask & (1 << v) != 0).collect();
        let n = catalog.order();
        let mut t_s = vec![0.0f64; n];
        for &v in &members {
            for (k, &x) in catalog.zeros()[v].vector().iter().enumerate() {
                t_s[k] += x;
            }
        }
        let mut p_star: Vec<usize> = Vec::new();
        for &v in &members {
            p_star.extend_from_slice(catalog.zeros()[v].support());
        }
        p_star.sort_unstable();
        p_star.dedup();
        cliques.push(Clique {
            members,
            p_star,
            t_s,
        });
    }
    cliques.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(CliqueCover {
        order: catalog.order(),
        vertex_count: p,
        cliques,
    })
}

/// Bron-Kerbosch with pivoting on adjacency bitmasks.  `r` is the clique
/// under construction, `p` the candidates, `x` the excluded vertices.
fn bron_kerbosch(r: u32, p: u32, x: u32, adj: &[u32], out: &mut Vec<u32>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // Pivot on the candidate-or-excluded vertex with the most candidate
    // neighbors, shrinking the branching set.
    let mut pivot = None;
    let mut best = -1i32;
    let mut scan = p | x;
    while scan != 0 {
        let v = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let deg = (adj[v] & p).count_ones() as i32;
        if deg > best {
            best = deg;
            pivot = Some(v);
        }
    }
    let mut candidates = p & !adj[pivot.expect("nonempty p | x")];
    let mut p = p;
    let mut x = x;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u32 << v;
        candidates &= !bit;
        bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, out);
        p &= !bit;
        x |= bit;
    }
}

/// True when `t` lies, within an infinity-norm residual of `1e-8`, in the
/// convex hull of the zeros of some clique.  Since the zero set of the
/// matrix is exactly the union of those hulls, this decides zero-set
/// membership structurally.
pub fn zero_set_contains(
    cover: &CliqueCover,
    catalog: &MinimalZeroCatalog,
    t: &NormalizedZero,
) -> Result<bool> {
    check_cover_matches(cover, catalog)?;
    if t.order() != cover.order {
        return Err(Error::DimensionMismatch(format!(
            "hull membership: vector of order {} against a cover of order {}",
            t.order(),
            cover.order
        )));
    }
    for clique in &cover.cliques {
        let cols: Vec<Vec<f64>> = clique
            .members
            .iter()
            .map(|&v| catalog.zeros()[v].vector().to_vec())
            .collect();
        let (_, residual) = nnls(&cols, t.vector())?;
        let worst = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if worst <= HULL_TOL {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The clique index set `S(tau) = {s : supp(tau) subset of P*(s)}`.
/// Errors when `tau` is not a zero of the matrix.
pub fn s_of_tau(
    a: &SymMatrix,
    cover: &CliqueCover,
    tau: &NormalizedZero,
    tol: &TolerancePolicy,
) -> Result<Vec<usize>> {
    require_zero(a, cover, tau, tol)?;
    Ok(s_of_support(cover, tau.support()))
}

/// The index set `J(tau) = union of P*(s) over s in S(tau)`.  Errors when
/// `tau` is not a zero of the matrix.
pub fn j_set(
    a: &SymMatrix,
    cover: &CliqueCover,
    tau: &NormalizedZero,
    tol: &TolerancePolicy,
) -> Result<Vec<usize>> {
    require_zero(a, cover, tau, tol)?;
    Ok(j_set_of_support(cover, tau.support()))
}

/// `M(j)`, the complement of the support of `A tau^j`, and `M*(j)`, the
/// union of `P*(s)` over cliques containing `j`.
pub fn m_sets(
    a: &SymMatrix,
    catalog: &MinimalZeroCatalog,
    cover: &CliqueCover,
    j: usize,
    tol: &TolerancePolicy,
) -> Result<(Vec<usize>, Vec<usize>)> {
    check_cover_matches(cover, catalog)?;
    if catalog.order() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "m_sets: catalog of order {} against a matrix of order {}",
            catalog.order(),
            a.order()
        )));
    }
    if j >= catalog.len() {
        return Err(Error::InvalidIndexSet(format!(
            "zero index {j} out of range for a catalog of {} zeros",
            catalog.len()
        )));
    }
    let m = m_set_of(a, catalog.zeros()[j].vector(), tol)?;
    let mut m_star: Vec<usize> = Vec::new();
    for clique in &cover.cliques {
        if clique.members.binary_search(&j).is_ok() {
            m_star.extend_from_slice(&clique.p_star);
        }
    }
    m_star.sort_unstable();
    m_star.dedup();
    Ok((m, m_star))
}

/// Complement of the support of `A t`, with entries within `zero_tol`
/// counting as zero.
pub(crate) fn m_set_of(a: &SymMatrix, t: &[f64], tol: &TolerancePolicy) -> Result<Vec<usize>> {
    let image = a.matvec(t)?;
    Ok((0..image.len())
        .filter(|&k| image[k].abs() <= tol.zero_tol)
        .collect())
}

pub(crate) fn s_of_support(cover: &CliqueCover, support: &[usize]) -> Vec<usize> {
    (0..cover.cliques.len())
        .filter(|&s| {
            support
                .iter()
                .all(|k| cover.cliques[s].p_star.binary_search(k).is_ok())
        })
        .collect()
}

pub(crate) fn j_set_of_support(cover: &CliqueCover, support: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for s in s_of_support(cover, support) {
        out.extend_from_slice(&cover.cliques[s].p_star);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn require_zero(
    a: &SymMatrix,
    cover: &CliqueCover,
    tau: &NormalizedZero,
    tol: &TolerancePolicy,
) -> Result<()> {
    if tau.order() != cover.order || a.order() != cover.order {
        return Err(Error::DimensionMismatch(
            "clique lookup: vector, matrix and cover orders differ".into(),
        ));
    }
    let form = a.quadratic(tau.vector())?;
    if form > tol.zero_tol {
        return Err(Error::NotAZero { form });
    }
    Ok(())
}

fn check_cover_matches(cover: &CliqueCover, catalog: &MinimalZeroCatalog) -> Result<()> {
    if cover.vertex_count != catalog.len() || cover.order != catalog.order() {
        return Err(Error::DimensionMismatch(
            "cover and catalog describe different zero sets".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::enumerate_minimal_zeros;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    /// Order-5 circulant with first row (1, -1, 1, 1, -1); its five minimal
    /// zeros are the consecutive-pair midpoints and its graph is a 5-cycle.
    fn horn_matrix() -> SymMatrix {
        SymMatrix::from_fn(5, |i, j| {
            if i == j {
                1.0
            } else {
                let d = (i as i64 - j as i64).unsigned_abs() as usize;
                if d == 1 || d == 4 {
                    -1.0
                } else {
                    1.0
                }
            }
        })
    }

    fn horn_setup() -> (SymMatrix, MinimalZeroCatalog, ZerosGraph, CliqueCover) {
        let a = horn_matrix();
        let catalog = enumerate_minimal_zeros(&a, &tol()).unwrap();
        let graph = build_graph(&a, &catalog, &tol()).unwrap();
        let cover = maximal_cliques(&graph, &catalog).unwrap();
        (a, catalog, graph, cover)
    }

    #[test]
    fn horn_graph_is_a_five_cycle() {
        let (_, catalog, graph, _) = horn_setup();
        assert_eq!(graph.vertex_count(), 5);
        assert_eq!(graph.edges().len(), 5);
        // Catalog order is lexicographic by support: {0,1}, {0,4}, {1,2},
        // {2,3}, {3,4}.  Adjacent zeros are those sharing a support index.
        let expect = vec![(0, 1), (0, 2), (1, 4), (2, 3), (3, 4)];
        assert_eq!(graph.edges(), expect.as_slice());
        let degrees: Vec<usize> = (0..5)
            .map(|v| {
                graph
                    .edges()
                    .iter()
                    .filter(|&&(i, j)| i == v || j == v)
                    .count()
            })
            .collect();
        assert_eq!(degrees, vec![2; 5]);
        let _ = catalog;
    }

    #[test]
    fn horn_cliques_are_the_five_edges() {
        let (_, _, _, cover) = horn_setup();
        assert_eq!(cover.len(), 5);
        for clique in cover.cliques() {
            assert_eq!(clique.members.len(), 2);
            // P*(s) is the union of two supports sharing one index.
            assert_eq!(clique.p_star.len(), 3);
            // supp(t(s)) = P*(s).
            let supp: Vec<usize> = (0..5).filter(|&k| clique.t_s[k] > 0.0).collect();
            assert_eq!(supp, clique.p_star);
        }
        // Every vertex belongs to exactly two cliques of a 5-cycle.
        for v in 0..5 {
            let count = cover
                .cliques()
                .iter()
                .filter(|c| c.members.contains(&v))
                .count();
            assert_eq!(count, 2);
        }
    }

    #[test]
    fn adjacent_singleton_zeros_form_an_edge() {
        // diag(1, 0, 0): zeros e_2 and e_3 with vanishing bilinear form.
        let d = SymMatrix::from_fn(3, |i, j| if i == j && i == 0 { 1.0 } else { 0.0 });
        let catalog = enumerate_minimal_zeros(&d, &tol()).unwrap();
        assert_eq!(catalog.len(), 2);
        let graph = build_graph(&d, &catalog, &tol()).unwrap();
        assert_eq!(graph.edges(), &[(0, 1)]);
        let cover = maximal_cliques(&graph, &catalog).unwrap();
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.cliques()[0].members, vec![0, 1]);
    }

    #[test]
    fn isolated_zero_yields_a_singleton_clique() {
        let single = SymMatrix::from_fn(2, |i, j| if i == j && i == 0 { 1.0 } else { 0.0 });
        // diag(1, 0) has the single zero e_2.
        let cat = enumerate_minimal_zeros(&single, &tol()).unwrap();
        let g = build_graph(&single, &cat, &tol()).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.is_edgeless());
        let cover = maximal_cliques(&g, &cat).unwrap();
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.cliques()[0].members, vec![0]);
    }

    #[test]
    fn clique_enumeration_respects_a_manual_edge_list() {
        // Three vertices, one edge: cliques {0,1} and {2}.
        let mut adj = vec![0u32; 3];
        adj[0] = 1 << 1;
        adj[1] = 1 << 0;
        let mut masks = Vec::new();
        bron_kerbosch(0, 0b111, 0, &adj, &mut masks);
        let mut got: Vec<Vec<usize>> = masks
            .iter()
            .map(|&m| (0..3).filter(|&v| m & (1 << v) != 0).collect())
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn hull_membership_follows_the_clique_structure() {
        let (a, catalog, _, cover) = horn_setup();
        // Every catalog zero is a hull vertex.
        for z in catalog.zeros() {
            assert!(zero_set_contains(&cover, &catalog, z).unwrap());
        }
        // Midpoint of an adjacent pair (a genuine zero).
        let zi = catalog.zeros()[0].vector();
        let zj = catalog.zeros()[2].vector();
        let mid: Vec<f64> = zi.iter().zip(zj.iter()).map(|(x, y)| 0.5 * (x + y)).collect();
        let mid = NormalizedZero::new(&mid, &tol()).unwrap();
        assert!((a.quadratic(mid.vector()).unwrap()).abs() <= tol().zero_tol);
        assert!(zero_set_contains(&cover, &catalog, &mid).unwrap());
        // Midpoint of a non-adjacent pair is not a zero and not in any hull.
        let zk = catalog.zeros()[3].vector();
        let far: Vec<f64> = zi.iter().zip(zk.iter()).map(|(x, y)| 0.5 * (x + y)).collect();
        let far = NormalizedZero::new(&far, &tol()).unwrap();
        assert!(a.quadratic(far.vector()).unwrap() > 10.0 * tol().zero_tol);
        assert!(!zero_set_contains(&cover, &catalog, &far).unwrap());
    }

    #[test]
    fn s_and_j_sets_of_a_catalog_zero() {
        let (a, catalog, _, cover) = horn_setup();
        // Vertex 0 has support {0,1}; the cliques covering it are (0,1) and
        // (0,2) in catalog indices, with P* = {0,1,4} and {0,1,2}.
        let tau = &catalog.zeros()[0];
        let s = s_of_tau(&a, &cover, tau, &tol()).unwrap();
        assert_eq!(s.len(), 2);
        let j = j_set(&a, &cover, tau, &tol()).unwrap();
        assert_eq!(j, vec![0, 1, 2, 4]);
    }

    #[test]
    fn s_of_tau_rejects_non_zeros() {
        let (a, _, _, cover) = horn_setup();
        let fake = NormalizedZero::new(&[0.2, 0.2, 0.2, 0.2, 0.2], &tol()).unwrap();
        match s_of_tau(&a, &cover, &fake, &tol()) {
            Err(Error::NotAZero { form }) => assert!(form > 0.0),
            other => panic!("expected NotAZero, got {other:?}"),
        }
    }

    #[test]
    fn m_sets_match_the_j_set_on_the_horn_matrix() {
        let (a, catalog, _, cover) = horn_setup();
        for j in 0..catalog.len() {
            let (m, m_star) = m_sets(&a, &catalog, &cover, j, &tol()).unwrap();
            // supp(tau^j) is contained in M(j).
            for k in catalog.zeros()[j].support() {
                assert!(m.contains(k));
            }
            // J(tau^j) = M*(j) here.
            let jj = j_set(&a, &cover, &catalog.zeros()[j], &tol()).unwrap();
            assert_eq!(jj, m_star);
        }
    }

    #[test]
    fn m_sets_rejects_out_of_range_indices() {
        let (a, catalog, _, cover) = horn_setup();
        assert!(matches!(
            m_sets(&a, &catalog, &cover, 99, &tol()),
            Err(Error::InvalidIndexSet(_))
        ));
    }
}
