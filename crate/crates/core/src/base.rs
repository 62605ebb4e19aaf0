//! Gorenstein test for base polytopes `B(M(G))` of simple graphs.
//!
//! Per block, the lattice witness `v` must be the forced edge weighting
//! `w: E -> {1, δ-1}` (`1` when deleting the edge keeps the block
//! 2-connected, `δ-1` when contracting it does) and must satisfy
//!
//! * `w(E) = δ(|V| - 1)`, and
//! * `w(E(S)) + 1 = δ(|S| - 1)` for every good flat `S`.
//!
//! The equivalent block-count form `w(E(S)) + k(S) = δ(|S| - 1)` over all
//! 2-connected sets is implemented as [`check_heart`] and serves as a
//! cross-check. Bridges (K2 blocks) have a point as base polytope and accept
//! every `δ`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::flats::{self, block_count_mask, good_flat_masks, indecomposable_masks};
use crate::graph::mask::{self, Mask};
use crate::graph::{blocks, is_two_connected, EdgeId, Multigraph};
use crate::{Error, Result};

/// Outcome of a check: the value on success, a witness on failure.
pub type Verdict<T> = std::result::Result<T, BaseWitness>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFlags {
    /// `G \ e` is 2-connected, so `x_e >= 0` is a facet.
    pub deletion: bool,
    /// `G / e` is 2-connected, so `{e}` is a good flat.
    pub contraction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateDeltas {
    /// K2 block: compatible with every `δ`.
    All,
    Set(BTreeSet<u32>),
}

impl CandidateDeltas {
    pub fn contains(&self, delta: u32) -> bool {
        match self {
            CandidateDeltas::All => true,
            CandidateDeltas::Set(s) => s.contains(&delta),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub delta: u32,
    pub weights: BTreeMap<EdgeId, u32>,
}

impl WeightAssignment {
    pub fn weight(&self, e: EdgeId) -> u32 {
        self.weights[&e]
    }

    pub fn total(&self) -> u64 {
        self.weights.values().map(|&w| u64::from(w)).sum()
    }

    pub fn sum_over(&self, edges: &[EdgeId]) -> u64 {
        edges.iter().map(|e| u64::from(self.weights[e])).sum()
    }

    /// Weights in the edge-list order of `g`, i.e. the candidate lattice
    /// point of `δ·B(M(G))`.
    pub fn vector(&self, g: &Multigraph) -> Vec<i64> {
        g.edges().iter().map(|e| i64::from(self.weights[&e.id])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseWitness {
    /// `block` admits no `δ`; `None` when every block has some `δ` but no
    /// value is shared by all of them.
    NoCandidateDelta { block: Option<usize> },
    /// Both `G \ e` and `G / e` are 2-connected while `δ != 2`.
    WeightConflict { edge: EdgeId, delta: u32 },
    TotalWeightMismatch { delta: u32, lhs: u64, rhs: u64 },
    /// `w(E(S)) + 1 != δ(|S| - 1)` at a good flat.
    FlatEqualityViolated { delta: u32, vertices: Vec<String>, lhs: u64, rhs: u64 },
    /// `w(E(S)) + k(S) != δ(|S| - 1)` at a 2-connected set.
    BlockCountEqualityViolated { delta: u32, vertices: Vec<String>, blocks: usize, lhs: u64, rhs: u64 },
}

impl BaseWitness {
    /// Recomputes the witnessed inequality on `g`; true when it still fails.
    pub fn replays_on(&self, g: &Multigraph) -> Result<bool> {
        let set = |labels: &[String]| -> Result<Mask> {
            labels.iter().try_fold(0u64, |m, l| {
                g.vertex_index(l).map(|v| m | 1 << v).ok_or_else(|| Error::UnknownVertex(l.clone()))
            })
        };
        Ok(match self {
            BaseWitness::NoCandidateDelta { .. } => true,
            BaseWitness::WeightConflict { edge, delta } => {
                let f = edge_facet_profile(g)?;
                let flags = f.get(edge).ok_or(Error::UnknownEdge(*edge))?;
                flags.deletion && flags.contraction && *delta != 2
            }
            BaseWitness::TotalWeightMismatch { delta, .. } => match weight_function(g, *delta)? {
                Ok(w) => w.total() != u64::from(*delta) * (g.vertex_count() as u64 - 1),
                Err(_) => true,
            },
            BaseWitness::FlatEqualityViolated { delta, vertices, lhs, rhs } => {
                let s = set(vertices)?;
                let w = match weight_function(g, *delta)? {
                    Ok(w) => w,
                    Err(_) => return Ok(true),
                };
                let l = w.sum_over(&flats::induced_edges(g, s)) + 1;
                let r = u64::from(*delta) * (u64::from(s.count_ones()) - 1);
                l == *lhs && r == *rhs && l != r
            }
            BaseWitness::BlockCountEqualityViolated { delta, vertices, blocks, lhs, rhs } => {
                let s = set(vertices)?;
                let w = match weight_function(g, *delta)? {
                    Ok(w) => w,
                    Err(_) => return Ok(true),
                };
                let k = block_count_mask(&mask::adjacency(g), g.vertex_count(), s);
                let l = w.sum_over(&flats::induced_edges(g, s)) + k as u64;
                let r = u64::from(*delta) * (u64::from(s.count_ones()) - 1);
                k == *blocks && l == *lhs && r == *rhs && l != r
            }
        })
    }
}

fn require_block(g: &Multigraph) -> Result<()> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if g.vertex_count() > flats::FLAT_VERTEX_LIMIT {
        return Err(Error::guard("base checker vertex count", flats::FLAT_VERTEX_LIMIT as u64));
    }
    if !is_two_connected(g) {
        return Err(Error::NotTwoConnected);
    }
    if g.edge_count() < 2 {
        return Err(Error::pre("base checker needs a block with at least two edges"));
    }
    Ok(())
}

/// Deletion/contraction 2-connectivity of every edge. In a 2-connected
/// simple graph on >= 3 vertices at least one of the two always holds; a
/// violation is reported as [`Error::Inconsistency`].
pub fn edge_facet_profile(g: &Multigraph) -> Result<BTreeMap<EdgeId, EdgeFlags>> {
    require_block(g)?;
    let adj = mask::adjacency(g);
    let all = mask::full(g.vertex_count());
    let mut out = BTreeMap::new();
    for e in g.edges() {
        let mut del = adj.clone();
        del[e.u] &= !(1 << e.v);
        del[e.v] &= !(1 << e.u);
        let flags = EdgeFlags {
            deletion: mask::two_connected(&del, all),
            contraction: mask::contraction_two_connected(&adj, all, 1 << e.u | 1 << e.v),
        };
        if !flags.deletion && !flags.contraction {
            return Err(Error::Inconsistency(format!(
                "edge {} ({}, {}): neither deletion nor contraction is 2-connected",
                e.id,
                g.label(e.u),
                g.label(e.v)
            )));
        }
        out.insert(e.id, flags);
    }
    Ok(out)
}

fn assign(profile: &BTreeMap<EdgeId, EdgeFlags>, delta: u32) -> Verdict<WeightAssignment> {
    let mut weights = BTreeMap::new();
    for (&id, f) in profile {
        // Both facets present force v_e = 1 = δ - 1.
        if f.deletion && f.contraction && delta != 2 {
            return Err(BaseWitness::WeightConflict { edge: id, delta });
        }
        weights.insert(id, if f.deletion { 1 } else { delta - 1 });
    }
    Ok(WeightAssignment { delta, weights })
}

/// The forced weight function at `δ`.
pub fn weight_function(g: &Multigraph, delta: u32) -> Result<Verdict<WeightAssignment>> {
    if delta < 2 {
        return Err(Error::pre(format!("δ must be at least 2, got {delta}")));
    }
    Ok(assign(&edge_facet_profile(g)?, delta))
}

/// Every `δ ∈ [2, |E|+1]` with a consistent weighting and `w(E) = δ(|V|-1)`.
/// K2 returns [`CandidateDeltas::All`].
pub fn candidate_deltas(g: &Multigraph) -> Result<CandidateDeltas> {
    if g.vertex_count() == 2 && g.edge_count() == 1 {
        return Ok(CandidateDeltas::All);
    }
    let profile = edge_facet_profile(g)?;
    let rank = g.vertex_count() as u64 - 1;
    let mut out = BTreeSet::new();
    for delta in 2..=g.edge_count() as u32 + 1 {
        if let Ok(w) = assign(&profile, delta) {
            if w.total() == u64::from(delta) * rank {
                out.insert(delta);
            }
        }
    }
    Ok(CandidateDeltas::Set(out))
}

/// Total-weight equality plus the good-flat equalities, in flat order (size,
/// then lexicographic). Returns the weighting on success.
pub fn check_spade(g: &Multigraph, delta: u32) -> Result<Verdict<WeightAssignment>> {
    let w = match weight_function(g, delta)? {
        Ok(w) => w,
        Err(witness) => return Ok(Err(witness)),
    };
    let d = u64::from(delta);
    let rhs = d * (g.vertex_count() as u64 - 1);
    if w.total() != rhs {
        return Ok(Err(BaseWitness::TotalWeightMismatch { delta, lhs: w.total(), rhs }));
    }
    let adj = mask::adjacency(g);
    for s in good_flat_masks(&adj, g.vertex_count()) {
        let lhs = w.sum_over(&flats::induced_edges(g, s)) + 1;
        let rhs = d * (u64::from(s.count_ones()) - 1);
        if lhs != rhs {
            return Ok(Err(BaseWitness::FlatEqualityViolated { delta, vertices: labels(g, s), lhs, rhs }));
        }
    }
    Ok(Ok(w))
}

/// `w(E(S)) + k(S) = δ(|S|-1)` over every vertex set inducing a 2-connected
/// subgraph, `S = V` (with `k = 0`) included.
pub fn check_heart(g: &Multigraph, delta: u32) -> Result<Verdict<WeightAssignment>> {
    Ok(match heart_violations(g, delta)? {
        Ok((w, v)) if v.is_empty() => Ok(w),
        Ok((_, mut v)) => Err(v.swap_remove(0)),
        Err(witness) => Err(witness),
    })
}

/// All violations of the block-count equalities, in set order.
pub fn heart_violations(g: &Multigraph, delta: u32) -> Result<Verdict<(WeightAssignment, Vec<BaseWitness>)>> {
    let w = match weight_function(g, delta)? {
        Ok(w) => w,
        Err(witness) => return Ok(Err(witness)),
    };
    let n = g.vertex_count();
    let adj = mask::adjacency(g);
    let d = u64::from(delta);
    let mut out = Vec::new();
    for s in indecomposable_masks(&adj, n) {
        let k = block_count_mask(&adj, n, s);
        let lhs = w.sum_over(&flats::induced_edges(g, s)) + k as u64;
        let rhs = d * (u64::from(s.count_ones()) - 1);
        if lhs != rhs {
            out.push(BaseWitness::BlockCountEqualityViolated { delta, vertices: labels(g, s), blocks: k, lhs, rhs });
        }
    }
    Ok(Ok((w, out)))
}

fn labels(g: &Multigraph, s: Mask) -> Vec<String> {
    mask::bits(s).map(|v| g.label(v).to_string()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Gorenstein,
    NotGorenstein,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseBlock {
    pub graph: Multigraph,
    pub candidates: CandidateDeltas,
    /// Candidates at which the block passes every equality; `None` for K2.
    pub valid_deltas: Option<BTreeSet<u32>>,
    /// Weighting at the verdict's `δ`, when Gorenstein.
    pub weights: Option<WeightAssignment>,
}

impl BaseBlock {
    pub fn is_bridge(&self) -> bool {
        self.candidates == CandidateDeltas::All
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWitness {
    pub block: usize,
    pub witness: BaseWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseVerdict {
    pub status: Status,
    /// Smallest common `δ`; `None` when every block is a bridge (or there
    /// are no edges), in which case every `δ` works.
    pub delta: Option<u32>,
    /// Every `δ` valid for all blocks; more than one value is recorded, not
    /// assumed away.
    pub valid_deltas: Vec<u32>,
    pub loops_removed: usize,
    pub blocks: Vec<BaseBlock>,
    pub witness: Option<BlockWitness>,
}

/// Block-wise decision for `B(M(G))`. Loops are stripped first; parallel
/// edges are rejected with [`Error::NotSimple`].
pub fn base_verdict(g: &Multigraph) -> Result<BaseVerdict> {
    let g = g.normalize();
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut out_blocks = Vec::new();
    let mut common: Option<BTreeSet<u32>> = None;
    let mut witness = None;
    for (i, b) in blocks(&g).into_iter().enumerate() {
        let candidates = candidate_deltas(&b)?;
        let valid = match &candidates {
            CandidateDeltas::All => None,
            CandidateDeltas::Set(set) => {
                let mut valid = BTreeSet::new();
                let mut first_failure = None;
                for &d in set {
                    match check_spade(&b, d)? {
                        Ok(_) => {
                            valid.insert(d);
                        }
                        Err(w) => {
                            first_failure.get_or_insert(w);
                        }
                    }
                }
                if witness.is_none() {
                    if set.is_empty() {
                        witness = Some(BlockWitness { block: i, witness: BaseWitness::NoCandidateDelta { block: Some(i) } });
                    } else if valid.is_empty() {
                        witness = Some(BlockWitness { block: i, witness: first_failure.unwrap() });
                    }
                }
                common = Some(match common {
                    None => valid.clone(),
                    Some(c) => c.intersection(&valid).copied().collect(),
                });
                Some(valid)
            }
        };
        out_blocks.push(BaseBlock { graph: b, candidates, valid_deltas: valid, weights: None });
    }
    let (status, delta, valid_deltas) = match common {
        None => (Status::Gorenstein, None, Vec::new()),
        Some(c) if c.is_empty() => {
            if witness.is_none() {
                witness = Some(BlockWitness { block: 0, witness: BaseWitness::NoCandidateDelta { block: None } });
            }
            (Status::NotGorenstein, None, Vec::new())
        }
        Some(c) => {
            let d = *c.iter().next().unwrap();
            (Status::Gorenstein, Some(d), c.into_iter().collect())
        }
    };
    if let Some(d) = delta {
        witness = None;
        for b in out_blocks.iter_mut().filter(|b| !b.is_bridge()) {
            b.weights = Some(weight_function(&b.graph, d)?.map_err(|w| Error::Inconsistency(format!("{w:?}")))?);
        }
    }
    Ok(BaseVerdict { status, delta, valid_deltas, loops_removed: g.loops_removed(), blocks: out_blocks, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn k4_minus_e() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    fn c5_chord() -> Multigraph {
        parse_graph("1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n").unwrap()
    }

    fn set(v: &[u32]) -> CandidateDeltas {
        CandidateDeltas::Set(v.iter().copied().collect())
    }

    #[test]
    fn facet_profiles() {
        let k4 = edge_facet_profile(&Multigraph::complete(4)).unwrap();
        assert!(k4.values().all(|f| f.deletion && f.contraction));
        let p = edge_facet_profile(&k4_minus_e()).unwrap();
        assert_eq!(p[&EdgeId(0)], EdgeFlags { deletion: true, contraction: false });
        assert_eq!(p[&EdgeId(1)], EdgeFlags { deletion: false, contraction: true });
        let c5 = edge_facet_profile(&Multigraph::cycle(5)).unwrap();
        assert!(c5.values().all(|f| !f.deletion && f.contraction));
    }

    #[test]
    fn candidates() {
        assert_eq!(candidate_deltas(&Multigraph::complete(4)).unwrap(), set(&[2]));
        assert_eq!(candidate_deltas(&k4_minus_e()).unwrap(), set(&[3]));
        for n in 3..9 {
            assert_eq!(candidate_deltas(&Multigraph::cycle(n)).unwrap(), set(&[n as u32]));
        }
        assert_eq!(candidate_deltas(&Multigraph::path(2)).unwrap(), CandidateDeltas::All);
    }

    #[test]
    fn weights() {
        let w = weight_function(&k4_minus_e(), 3).unwrap().unwrap();
        assert_eq!(w.weights.values().copied().collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
        let w = weight_function(&Multigraph::complete(4), 2).unwrap().unwrap();
        assert!(w.weights.values().all(|&x| x == 1));
        assert_eq!(
            weight_function(&Multigraph::complete(4), 3).unwrap().unwrap_err(),
            BaseWitness::WeightConflict { edge: EdgeId(0), delta: 3 }
        );
    }

    #[test]
    fn spade_examples() {
        assert!(check_spade(&Multigraph::complete(4), 2).unwrap().is_ok());
        assert!(check_spade(&Multigraph::cycle(5), 5).unwrap().is_ok());
        let w = check_spade(&c5_chord(), 4).unwrap().unwrap_err();
        assert_eq!(
            w,
            BaseWitness::FlatEqualityViolated { delta: 4, vertices: vec!["1".into(), "3".into(), "4".into(), "5".into()], lhs: 11, rhs: 12 }
        );
        assert!(w.replays_on(&c5_chord()).unwrap());
    }

    #[test]
    fn heart_examples() {
        let g = k4_minus_e();
        let (_, v) = heart_violations(&g, 3).unwrap().unwrap();
        assert!(v.is_empty());
        assert!(check_heart(&g, 3).unwrap().is_ok());
        let (_, v) = heart_violations(&c5_chord(), 4).unwrap().unwrap();
        let flat = BaseWitness::BlockCountEqualityViolated {
            delta: 4,
            vertices: vec!["1".into(), "3".into(), "4".into(), "5".into()],
            blocks: 1,
            lhs: 11,
            rhs: 12,
        };
        assert!(v.contains(&flat));
        assert!(check_heart(&c5_chord(), 4).unwrap().is_err());
        for w in &v {
            assert!(w.replays_on(&c5_chord()).unwrap());
        }
    }

    #[test]
    fn verdicts() {
        let bowtie = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let v = base_verdict(&bowtie).unwrap();
        assert_eq!((v.status, v.delta), (Status::Gorenstein, Some(3)));
        let mut pendant = bowtie.clone();
        let x = pendant.add_vertex("x");
        pendant.add_edge(4, x);
        let v = base_verdict(&pendant).unwrap();
        assert_eq!((v.status, v.delta), (Status::Gorenstein, Some(3)));
        assert_eq!(v.blocks.len(), 3);
        let v = base_verdict(&c5_chord()).unwrap();
        assert_eq!(v.status, Status::NotGorenstein);
        assert!(matches!(v.witness.unwrap().witness, BaseWitness::FlatEqualityViolated { .. }));
        assert_eq!(base_verdict(&Multigraph::complete(4)).unwrap().delta, Some(2));
    }

    #[test]
    fn mixed_blocks_without_common_delta() {
        // Triangle (δ = 3) sharing a vertex with K4 (δ = 2).
        let g = Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]);
        let v = base_verdict(&g).unwrap();
        assert_eq!(v.status, Status::NotGorenstein);
        assert_eq!(v.witness.unwrap().witness, BaseWitness::NoCandidateDelta { block: None });
    }

    #[test]
    fn multigraph_rejected_and_loops_stripped() {
        let g = parse_graph("0 1 2\n1 2\n2 0\n").unwrap();
        assert_eq!(base_verdict(&g).unwrap_err(), Error::NotSimple);
        let g = parse_graph("0 1\n1 2\n2 0\n0 0\n").unwrap();
        let v = base_verdict(&g).unwrap();
        assert_eq!((v.delta, v.loops_removed), (Some(3), 1));
    }

    #[test]
    fn forest_is_wildcard() {
        let v = base_verdict(&Multigraph::path(4)).unwrap();
        assert_eq!((v.status, v.delta), (Status::Gorenstein, None));
    }
}
