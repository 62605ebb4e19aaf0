//! Exact lattice-polytope oracle.
//!
//! Builds `B(M(G))` / `P(M(G))` from basis or forest indicator vectors and
//! tests the Gorenstein definition directly: `P` is `δ`-Gorenstein when some
//! lattice point `v` of `δP` has `h(v) = 1` for the primitive equation `h`
//! of every facet. Everything is expressed in coordinates of the lattice
//! spanned by the homogenized vertices `(1, p)`, computed by Hermite normal
//! form, so "primitive" means primitive on the affine lattice the vertices
//! span rather than on `Z^E`.
//!
//! Arithmetic is exact (checked `i128`; overflow is a typed error).

mod facets;
mod linalg;
mod points;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use facets::{Facet, FacetMethod, BRUTE_FORCE_SUBSET_LIMIT, BRUTE_FORCE_VERTEX_LIMIT};
pub use points::{
    count_lattice_points, gorenstein_search_enumerative, hstar, lattice_points, normality_probe, HStarVector, Normality,
    DEFAULT_NODE_GUARD,
};

use crate::flats::{good_flat_masks, induced_edges};
use crate::graph::{self, mask, bases_and_forests, graphic_rank, is_two_connected, BasisKind, EdgeId, Multigraph};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeKind {
    Base,
    Independence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<i64>>,
    /// Affine dimension `d`.
    pub dim: usize,
    /// HNF basis (rows, `d+1` of them) of the lattice spanned by the
    /// homogenized vertices `(1, p)`; column 0 is the height.
    pub lattice_basis: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    /// Vertices in lattice coordinates; coordinate 0 is the height.
    pub lattice_vertices: Vec<Vec<i128>>,
    pub facets: Vec<Facet>,
    pub facet_method: Option<FacetMethod>,
}

impl LatticePolytope {
    /// Lattice data for the convex hull of `vertices`; facets are not yet
    /// computed.
    pub fn from_vertices(vertices: Vec<Vec<i64>>) -> Result<Self> {
        let ambient_dim = vertices.first().map_or(0, Vec::len);
        if vertices.is_empty() {
            return Err(Error::pre("polytope needs at least one vertex"));
        }
        let homog: Vec<Vec<i128>> = vertices
            .iter()
            .map(|v| std::iter::once(1).chain(v.iter().map(|&x| i128::from(x))).collect())
            .collect();
        let (basis, pivots) = linalg::hermite(homog.clone())?;
        if pivots.first() != Some(&0) || basis[0][0] != 1 {
            return Err(Error::Inconsistency("homogenized lattice does not start with height 1".into()));
        }
        let lattice_vertices = homog
            .iter()
            .map(|h| {
                linalg::lattice_coordinates(&basis, &pivots, h)?
                    .ok_or_else(|| Error::Inconsistency("vertex outside its own lattice".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePolytope {
            ambient_dim,
            dim: basis.len() - 1,
            vertices,
            lattice_basis: basis,
            pivots,
            lattice_vertices,
            facets: Vec::new(),
            facet_method: None,
        })
    }

    /// Computes facets with the given method (`Auto` picks brute force when
    /// its guards allow).
    pub fn compute_facets(&mut self, method: FacetMethod) -> Result<()> {
        let used = match method {
            FacetMethod::Auto if facets::brute_force_feasible(&self.lattice_vertices) => FacetMethod::BruteForce,
            FacetMethod::Auto => FacetMethod::DoubleDescription,
            m => m,
        };
        self.facets = match used {
            FacetMethod::BruteForce => facets::brute_force(&self.lattice_vertices)?,
            _ => facets::double_description(&self.lattice_vertices)?,
        };
        self.facet_method = Some(used);
        Ok(())
    }

    pub fn with_facets(mut self, method: FacetMethod) -> Result<Self> {
        self.compute_facets(method)?;
        Ok(self)
    }

    /// Every facet is valid and spans a hyperplane of tight vertices.
    pub fn facets_verified(&self) -> Result<bool> {
        facets::verify(&self.lattice_vertices, &self.facets)
    }

    /// Lattice coordinates of the homogenized point `(height, x)`.
    pub fn to_lattice(&self, height: i64, x: &[i64]) -> Result<Option<Vec<i128>>> {
        let h: Vec<i128> = std::iter::once(i128::from(height)).chain(x.iter().map(|&v| i128::from(v))).collect();
        linalg::lattice_coordinates(&self.lattice_basis, &self.pivots, &h)
    }

    /// Inverse of [`to_lattice`](Self::to_lattice): `(height, x)`.
    pub fn to_ambient(&self, y: &[i128]) -> Result<(i64, Vec<i64>)> {
        let mut out = vec![0i128; self.ambient_dim + 1];
        for (coef, row) in y.iter().zip(&self.lattice_basis) {
            for (o, &b) in out.iter_mut().zip(row) {
                *o = linalg::add(*o, linalg::mul(*coef, b)?)?;
            }
        }
        let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("ambient coordinate"));
        Ok((narrow(out[0])?, out[1..].iter().map(|&v| narrow(v)).collect::<Result<_>>()?))
    }

    /// Lattice coordinates of a homogeneous ambient functional
    /// `(c_height, c_1, ..., c_E)`, made primitive. Returns the functional
    /// and the gcd that was divided out.
    pub fn functional_to_lattice(&self, ambient: &[i128]) -> Result<(Facet, i128)> {
        let mut normal = self.lattice_basis.iter().map(|row| linalg::dot(row, ambient)).collect::<Result<Vec<_>>>()?;
        let g = linalg::make_primitive(&mut normal);
        Ok((Facet { normal }, g))
    }

    /// Whether the vertex lattice equals the standard one: `Z^E` for
    /// independence polytopes, `Z^E ∩ {Σx = r}` (affinely) for base
    /// polytopes.
    pub fn lattice_matches_standard(&self, kind: PolytopeKind) -> Result<bool> {
        let e = self.ambient_dim;
        let mut gens: Vec<Vec<i64>> = Vec::new();
        match kind {
            PolytopeKind::Independence => {
                for i in 0..e {
                    let mut v = vec![0; e];
                    v[i] = 1;
                    gens.push(v);
                }
            }
            PolytopeKind::Base => {
                for i in 1..e {
                    let mut v = vec![0; e];
                    v[i - 1] = 1;
                    v[i] = -1;
                    gens.push(v);
                }
            }
        }
        for g in gens {
            if self.to_lattice(0, &g)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Text dump: one vertex per line, `%facets`, then one facet per line in
    /// lattice coordinates (height coefficient first), then `%basis` and the
    /// lattice basis rows.
    pub fn dump(&self) -> String {
        let row = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&row(&mut v.iter().map(|x| x.to_string())));
            out.push('\n');
        }
        out.push_str("%facets\n");
        for f in &self.facets {
            out.push_str(&row(&mut f.normal.iter().map(|x| x.to_string())));
            out.push('\n');
        }
        out.push_str("%basis\n");
        for b in &self.lattice_basis {
            out.push_str(&row(&mut b.iter().map(|x| x.to_string())));
            out.push('\n');
        }
        out
    }
}

/// Vertices of `B(M(G))` or `P(M(G))` as 0/1 vectors over the edge list
/// (loops stripped first). Facets are not computed.
pub fn polytope_vertices(g: &Multigraph, kind: PolytopeKind, guard: usize) -> Result<LatticePolytope> {
    let g = g.normalize();
    let k = match kind {
        PolytopeKind::Base => BasisKind::SpanningTrees,
        PolytopeKind::Independence => BasisKind::Forests,
    };
    let sets = bases_and_forests(&g, k, guard)?;
    let index: std::collections::HashMap<EdgeId, usize> = g.edges().iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    let vertices = sets
        .iter()
        .map(|s| {
            let mut v = vec![0i64; g.edge_count()];
            for id in s {
                v[index[id]] = 1;
            }
            v
        })
        .collect();
    LatticePolytope::from_vertices(vertices)
}

/// [`polytope_vertices`] plus facets by the automatic method.
pub fn polytope_of(g: &Multigraph, kind: PolytopeKind, guard: usize) -> Result<LatticePolytope> {
    polytope_vertices(g, kind, guard)?.with_facets(FacetMethod::Auto)
}

/// Cartesian product (concatenated coordinates), facets computed afresh.
pub fn product(a: &LatticePolytope, b: &LatticePolytope) -> Result<LatticePolytope> {
    let mut vs = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for x in &a.vertices {
        for y in &b.vertices {
            vs.push(x.iter().chain(y).copied().collect());
        }
    }
    LatticePolytope::from_vertices(vs)?.with_facets(FacetMethod::Auto)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinWitness {
    pub delta: u32,
    /// `v ∈ δP` in ambient coordinates.
    pub point: Vec<i64>,
    pub lattice_point: Vec<i128>,
    /// A single point: every `δ` works; `delta` is reported as 1.
    pub any_delta: bool,
}

/// Solves `h(v) = 1` over all facets exactly. The facet normals span the
/// dual space, so the solution is unique when it exists; the polytope is
/// Gorenstein iff it is integral, with `δ` its height. Such a `δ` never
/// exceeds `d + 1` (codegree bound); a larger value is an inconsistency.
pub fn gorenstein_search(p: &LatticePolytope) -> Result<Option<GorensteinWitness>> {
    if p.facet_method.is_none() {
        return Err(Error::pre("facets not computed"));
    }
    if p.dim == 0 {
        return Ok(Some(GorensteinWitness {
            delta: 1,
            point: p.vertices[0].clone(),
            lattice_point: vec![1],
            any_delta: true,
        }));
    }
    let rows: Vec<Vec<i128>> = p.facets.iter().map(|f| f.normal.clone()).collect();
    let Some((y, t)) = linalg::solve_unique(&rows, &vec![1; rows.len()])? else {
        return Ok(None);
    };
    if y.iter().any(|&c| c % t != 0) {
        return Ok(None);
    }
    let y: Vec<i128> = y.iter().map(|&c| c / t).collect();
    if y[0] < 1 {
        return Ok(None);
    }
    if y[0] > p.dim as i128 + 1 {
        return Err(Error::Inconsistency(format!("Gorenstein index {} exceeds dim + 1", y[0])));
    }
    let (_, point) = p.to_ambient(&y)?;
    Ok(Some(GorensteinWitness { delta: y[0] as u32, point, lattice_point: y, any_delta: false }))
}

/// Whether `p` is `δ`-Gorenstein (point polytopes are, for every `δ`).
pub fn is_delta_gorenstein(p: &LatticePolytope, delta: u32) -> Result<bool> {
    Ok(gorenstein_search(p)?.is_some_and(|w| w.any_delta || w.delta == delta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CorFacetKind {
    /// `x_e >= 0`, present when `G \ e` is 2-connected.
    Nonnegativity { edge: EdgeId },
    /// `r(E(S))·Σ_E x - r(E)·Σ_{E(S)} x >= 0` for a good flat `S`.
    GoodFlat { vertices: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorFacet {
    pub kind: CorFacetKind,
    pub facet: Facet,
    /// Factor divided out when passing to lattice coordinates; 1 means the
    /// ambient integer form was already primitive on the vertex lattice.
    pub reduced_by: i128,
}

/// The two explicit facet families of `B(M(G))` for 2-connected `G`,
/// expressed on `p` (which must be the base polytope of `g`).
pub fn facets_from_cor33_on(g: &Multigraph, p: &LatticePolytope) -> Result<Vec<CorFacet>> {
    let g = g.normalize();
    if !is_two_connected(&g) {
        return Err(Error::NotTwoConnected);
    }
    if g.vertex_count() > crate::flats::FLAT_VERTEX_LIMIT {
        return Err(Error::guard("flat enumeration vertex count", crate::flats::FLAT_VERTEX_LIMIT as u64));
    }
    let m = g.edge_count();
    if p.ambient_dim != m {
        return Err(Error::pre("polytope does not belong to this graph"));
    }
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let del = graph::minor_op(&g, e.id, graph::MinorKind::Delete)?;
        if is_two_connected(&del) {
            let mut amb = vec![0i128; m + 1];
            amb[i + 1] = 1;
            let (facet, reduced_by) = p.functional_to_lattice(&amb)?;
            out.push(CorFacet { kind: CorFacetKind::Nonnegativity { edge: e.id }, facet, reduced_by });
        }
    }
    let all = g.edge_ids();
    let r_e = graphic_rank(&g, &all) as i128;
    let adj = mask::adjacency(&g);
    for s in good_flat_masks(&adj, g.vertex_count()) {
        let inside: BTreeSet<EdgeId> = induced_edges(&g, s).into_iter().collect();
        let r_f = graphic_rank(&g, &inside.iter().copied().collect::<Vec<_>>()) as i128;
        let mut amb = vec![0i128; m + 1];
        for (i, e) in g.edges().iter().enumerate() {
            amb[i + 1] = r_f - if inside.contains(&e.id) { r_e } else { 0 };
        }
        let (facet, reduced_by) = p.functional_to_lattice(&amb)?;
        let vertices = mask::bits(s).map(|v| g.label(v).to_string()).collect();
        out.push(CorFacet { kind: CorFacetKind::GoodFlat { vertices }, facet, reduced_by });
    }
    Ok(out)
}

/// [`facets_from_cor33_on`] on a freshly built base polytope.
pub fn facets_from_cor33(g: &Multigraph, guard: usize) -> Result<(LatticePolytope, Vec<CorFacet>)> {
    let p = polytope_vertices(g, PolytopeKind::Base, guard)?;
    let f = facets_from_cor33_on(g, &p)?;
    Ok((p, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, DEFAULT_ENUMERATION_GUARD as G};

    fn facet_set(f: &[Facet]) -> BTreeSet<Vec<i128>> {
        f.iter().map(|f| f.normal.clone()).collect()
    }

    #[test]
    fn triangle_base() {
        let p = polytope_of(&Multigraph::cycle(3), PolytopeKind::Base, G).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.dim, 2);
        assert_eq!(p.facets.len(), 3);
        let w = gorenstein_search(&p).unwrap().unwrap();
        assert_eq!((w.delta, w.point.clone()), (3, vec![2, 2, 2]));
        assert!(p.lattice_matches_standard(PolytopeKind::Base).unwrap());
        let (_, cor) = facets_from_cor33(&Multigraph::cycle(3), G).unwrap();
        assert_eq!(cor.len(), 3);
        assert!(cor.iter().all(|c| matches!(c.kind, CorFacetKind::GoodFlat { .. })));
        assert_eq!(facet_set(&cor.iter().map(|c| c.facet.clone()).collect::<Vec<_>>()), facet_set(&p.facets));
    }

    #[test]
    fn segment_independence() {
        let p = polytope_of(&Multigraph::path(2), PolytopeKind::Independence, G).unwrap();
        assert_eq!((p.vertices.len(), p.dim, p.facets.len()), (2, 1, 2));
        let w = gorenstein_search(&p).unwrap().unwrap();
        assert_eq!((w.delta, w.point), (2, vec![1]));
    }

    #[test]
    fn k4_base() {
        let k4 = Multigraph::complete(4);
        let p = polytope_of(&k4, PolytopeKind::Base, G).unwrap();
        assert_eq!((p.vertices.len(), p.dim, p.facets.len()), (16, 5, 16));
        assert!(p.facets_verified().unwrap());
        let dd = p.clone().with_facets(FacetMethod::DoubleDescription).unwrap();
        assert_eq!(dd.facets, p.facets);
        let cor = facets_from_cor33_on(&k4, &p).unwrap();
        let kinds = cor.iter().filter(|c| matches!(c.kind, CorFacetKind::Nonnegativity { .. })).count();
        assert_eq!((kinds, cor.len()), (6, 16));
        assert_eq!(gorenstein_search(&p).unwrap().unwrap().point, vec![1; 6]);
    }

    #[test]
    fn c4_cor33() {
        let (_, cor) = facets_from_cor33(&Multigraph::cycle(4), G).unwrap();
        assert_eq!(cor.len(), 4);
        assert!(cor.iter().all(|c| matches!(c.kind, CorFacetKind::GoodFlat { .. })));
    }

    #[test]
    fn chorded_pentagon_not_gorenstein() {
        let g = parse_graph("1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n").unwrap();
        let p = polytope_of(&g, PolytopeKind::Base, G).unwrap();
        assert_eq!(gorenstein_search(&p).unwrap(), None);
    }

    #[test]
    fn point_is_wildcard() {
        let p = polytope_of(&Multigraph::path(2), PolytopeKind::Base, G).unwrap();
        assert_eq!(p.dim, 0);
        let w = gorenstein_search(&p).unwrap().unwrap();
        assert!(w.any_delta);
        assert!(is_delta_gorenstein(&p, 7).unwrap());
    }

    #[test]
    fn base_edges_are_root_directions() {
        let p = polytope_vertices(&Multigraph::complete(4), PolytopeKind::Base, G).unwrap();
        for a in &p.vertices {
            for b in &p.vertices {
                let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                if diff.iter().filter(|&&d| d != 0).count() == 2 {
                    let mut nz: Vec<i64> = diff.into_iter().filter(|&d| d != 0).collect();
                    nz.sort_unstable();
                    assert_eq!(nz, vec![-1, 1]);
                }
            }
        }
    }

    #[test]
    fn product_of_segments_is_square() {
        let s = polytope_of(&Multigraph::path(2), PolytopeKind::Independence, G).unwrap();
        let sq = product(&s, &s).unwrap();
        assert_eq!((sq.dim, sq.facets.len()), (2, 4));
        assert_eq!(gorenstein_search(&sq).unwrap().unwrap().point, vec![1, 1]);
    }

    #[test]
    fn disconnected_base_lattice_is_smaller() {
        let bowtie = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let p = polytope_vertices(&bowtie, PolytopeKind::Base, G).unwrap();
        assert_eq!(p.dim, 4);
        assert!(!p.lattice_matches_standard(PolytopeKind::Base).unwrap());
    }

    #[test]
    fn dump_has_sections() {
        let p = polytope_of(&Multigraph::cycle(3), PolytopeKind::Base, G).unwrap();
        let d = p.dump();
        assert!(d.starts_with("1 1 0\n"));
        assert_eq!(d.lines().filter(|l| l.starts_with('%')).count(), 2);
    }
}
