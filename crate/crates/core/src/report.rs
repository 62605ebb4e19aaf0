//! Serializable verdict reports shared by the command-line tool and the C
//! bindings. The JSON layout is versioned by [`REPORT_SCHEMA_VERSION`] and
//! described by `docs/verdict.schema.json`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::base::{base_verdict, check_spade, BaseVerdict, BaseWitness, Status};
use crate::construct::{decompose_base, is_isomorphism, replay, CertKind, ConstructionCert};
use crate::graph::{blocks, isomorphism, IsoOutcome};
use crate::indep::{indep_verdict, IndepVerdict};
use crate::oracle::{
    gorenstein_search, gorenstein_search_enumerative, hstar, normality_probe, polytope_of, FacetMethod,
    GorensteinWitness, HStarVector, Normality, PolytopeKind, DEFAULT_NODE_GUARD,
};
use crate::{EdgeId, Error, Multigraph, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Check,
    Oracle,
    Certify,
    Generate,
    Replay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source: Option<String>,
    pub vertices: usize,
    pub edges: usize,
    pub loops_removed: usize,
    pub simple: bool,
    pub blocks: usize,
}

impl InputSummary {
    pub fn of(g: &Multigraph, source: Option<String>) -> Self {
        let n = g.normalize();
        InputSummary {
            source,
            vertices: n.vertex_count(),
            edges: n.edge_count(),
            loops_removed: n.loops_removed(),
            simple: n.is_simple(),
            blocks: blocks(&n).len(),
        }
    }
}

/// Result of checking the good-flat equalities at one requested `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCheck {
    pub delta: u32,
    pub holds: bool,
    pub block: Option<usize>,
    pub witness: Option<BaseWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDetails {
    pub dim: usize,
    pub vertices: usize,
    pub facets: usize,
    pub facet_method: FacetMethod,
    pub witness: Option<GorensteinWitness>,
    /// Whether a direct search over `δ ≤ max_delta` agreed; absent when not
    /// requested.
    pub enumerative_agrees: Option<bool>,
    pub hstar: Option<HStarVector>,
    pub normality: Option<Normality>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCertificate {
    pub block: usize,
    pub description: String,
    pub certificate: ConstructionCert,
    /// Comparison of the replay with the block.
    pub replay: IsoOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayResult {
    pub description: String,
    pub delta: u32,
    pub vertices: usize,
    pub edges: usize,
    /// Checker status and `δ` of the replayed graph.
    pub status: Status,
    pub checker_delta: Option<u32>,
    pub reproduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Details {
    Base { verdict: BaseVerdict, at_delta: Option<DeltaCheck> },
    Indep { verdict: IndepVerdict },
    Oracle(OracleDetails),
    Certificates { blocks: Vec<BlockCertificate> },
    Replay { results: Vec<ReplayResult> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub command: Command,
    pub input: InputSummary,
    pub kind: PolytopeKind,
    pub status: Status,
    pub delta: Option<u32>,
    pub m: Option<usize>,
    pub details: Details,
    pub timing_us: u64,
    pub guard_notes: Vec<String>,
}

impl VerdictReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: VerdictReport = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::pre(format!("unsupported report schema_version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// DOT drawing of `g`; base weights colour edges (weight 1 blue,
    /// `δ - 1` red), as do the coordinates of an oracle witness.
    pub fn to_dot(&self, g: &Multigraph) -> String {
        let g = g.normalize();
        let mut weights: BTreeMap<EdgeId, i64> = BTreeMap::new();
        match &self.details {
            Details::Base { verdict, .. } => {
                for b in &verdict.blocks {
                    if let Some(w) = &b.weights {
                        weights.extend(w.weights.iter().map(|(&e, &x)| (e, i64::from(x))));
                    }
                }
            }
            Details::Oracle(o) => {
                if let Some(w) = &o.witness {
                    weights.extend(g.edges().iter().zip(&w.point).map(|(e, &x)| (e.id, x)));
                }
            }
            _ => {}
        }
        g.to_dot(|e| {
            weights.get(&e.id).map(|&w| if w == 1 { "blue" } else { "red" }.to_string())
        })
    }
}

fn finish(
    command: Command,
    input: InputSummary,
    kind: PolytopeKind,
    status: Status,
    delta: Option<u32>,
    m: Option<usize>,
    details: Details,
    start: Instant,
) -> VerdictReport {
    VerdictReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command,
        input,
        kind,
        status,
        delta,
        m,
        details,
        timing_us: start.elapsed().as_micros() as u64,
        guard_notes: Vec::new(),
    }
}

fn indep_status(s: crate::indep::Status) -> Status {
    match s {
        crate::indep::Status::Gorenstein => Status::Gorenstein,
        crate::indep::Status::NotGorenstein => Status::NotGorenstein,
    }
}

fn at_delta(v: &BaseVerdict, delta: u32) -> Result<DeltaCheck> {
    for (i, b) in v.blocks.iter().enumerate().filter(|(_, b)| !b.is_bridge()) {
        if let Err(w) = check_spade(&b.graph, delta)? {
            return Ok(DeltaCheck { delta, holds: false, block: Some(i), witness: Some(w) });
        }
    }
    Ok(DeltaCheck { delta, holds: true, block: None, witness: None })
}

/// Combinatorial verdict. For the base polytope, `delta` additionally
/// checks the equalities at that one value and reports the first failure.
pub fn check(g: &Multigraph, kind: PolytopeKind, delta: Option<u32>, source: Option<String>) -> Result<VerdictReport> {
    let start = Instant::now();
    let input = InputSummary::of(g, source);
    Ok(match kind {
        PolytopeKind::Base => {
            let v = base_verdict(g)?;
            let at = delta.map(|d| at_delta(&v, d)).transpose()?;
            let (status, d) = (v.status, v.delta);
            finish(Command::Check, input, kind, status, d, None, Details::Base { verdict: v, at_delta: at }, start)
        }
        PolytopeKind::Independence => {
            let v = indep_verdict(g)?;
            let (status, d, m) = (indep_status(v.status), v.delta, v.m.filter(|_| v.status == crate::indep::Status::Gorenstein));
            finish(Command::Check, input, kind, status, d, m, Details::Indep { verdict: v }, start)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_delta: Option<u32>,
    pub hstar: bool,
    /// Largest dilation checked by the normality probe.
    pub normality: Option<u32>,
    pub node_guard: u64,
    pub enumeration_guard: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_delta: None,
            hstar: false,
            normality: None,
            node_guard: DEFAULT_NODE_GUARD,
            enumeration_guard: crate::graph::DEFAULT_ENUMERATION_GUARD,
        }
    }
}

/// Verdict straight from the lattice definition.
pub fn oracle(g: &Multigraph, kind: PolytopeKind, opts: &OracleOptions, source: Option<String>) -> Result<VerdictReport> {
    let start = Instant::now();
    let input = InputSummary::of(g, source);
    let p = polytope_of(g, kind, opts.enumeration_guard)?;
    let witness = gorenstein_search(&p)?;
    let enumerative_agrees = match opts.max_delta {
        None => None,
        Some(max) => {
            let e = gorenstein_search_enumerative(&p, max, opts.node_guard)?;
            let expected = witness.as_ref().filter(|w| w.delta <= max);
            Some(e.as_ref().map(|w| w.delta) == expected.map(|w| w.delta))
        }
    };
    let hs = if opts.hstar { Some(hstar(&p, opts.node_guard)?) } else { None };
    let normality = opts.normality.map(|k| normality_probe(&p, k, opts.node_guard)).transpose()?;
    let status = if witness.is_some() { Status::Gorenstein } else { Status::NotGorenstein };
    let delta = witness.as_ref().map(|w| w.delta);
    let mut notes = Vec::new();
    if witness.as_ref().is_some_and(|w| w.any_delta) {
        notes.push("polytope is a single point: Gorenstein for every δ; δ reported as 1".to_string());
    }
    let details = OracleDetails {
        dim: p.dim,
        vertices: p.vertices.len(),
        facets: p.facets.len(),
        facet_method: p.facet_method.unwrap_or(FacetMethod::Auto),
        witness,
        enumerative_agrees,
        hstar: hs,
        normality,
    };
    let mut r = finish(Command::Oracle, input, kind, status, delta, None, Details::Oracle(details), start);
    r.guard_notes = notes;
    Ok(r)
}

/// Certificates for every block of a positive instance, each checked by
/// replay. A negative instance yields the plain checker report, whose
/// details carry the witness.
pub fn certify(g: &Multigraph, kind: PolytopeKind, source: Option<String>) -> Result<VerdictReport> {
    let start = Instant::now();
    let checked = check(g, kind, None, source)?;
    if checked.status == Status::NotGorenstein {
        let mut r = checked;
        r.command = Command::Certify;
        return Ok(r);
    }
    let mut out = Vec::new();
    let mut notes = Vec::new();
    match &checked.details {
        Details::Base { verdict, .. } => {
            let delta = verdict.delta.unwrap_or(2);
            if verdict.delta.is_none() {
                notes.push("every block is a bridge: any δ works; certificates use δ = 2".to_string());
            }
            for (i, b) in verdict.blocks.iter().enumerate() {
                let d = decompose_base(&b.graph, delta)?;
                let r = replay(&d.certificate)?;
                if !is_isomorphism(&b.graph, &r, &d.vertex_map) {
                    return Err(Error::Inconsistency(format!("replay of block {i} is not isomorphic to it")));
                }
                out.push(BlockCertificate {
                    block: i,
                    description: d.certificate.root.to_string(),
                    certificate: d.certificate,
                    replay: IsoOutcome::Isomorphic { mapping: d.vertex_map },
                });
            }
        }
        Details::Indep { verdict } => {
            for (i, b) in verdict.blocks.iter().enumerate() {
                let cert = b
                    .certificate
                    .clone()
                    .ok_or_else(|| Error::Inconsistency(format!("positive block {i} has no certificate")))?;
                let r = replay(&cert)?;
                let iso = isomorphism(&b.graph, &r);
                if !iso.accepted() {
                    return Err(Error::Inconsistency(format!("replay of block {i} is not isomorphic to it")));
                }
                out.push(BlockCertificate { block: i, description: cert.root.to_string(), certificate: cert, replay: iso });
            }
        }
        _ => unreachable!("check produces checker details"),
    }
    let mut r = finish(Command::Certify, checked.input, kind, checked.status, checked.delta, checked.m, Details::Certificates { blocks: out }, start);
    r.guard_notes = notes;
    Ok(r)
}

fn replay_one(cert: &ConstructionCert) -> Result<(Multigraph, ReplayResult)> {
    let g = replay(cert)?;
    let (status, checker_delta, reproduced) = match cert.kind {
        CertKind::Base => {
            let v = base_verdict(&g)?;
            let ok = v.status == Status::Gorenstein && (v.delta.is_none() || v.valid_deltas.contains(&cert.delta));
            (v.status, v.delta, ok)
        }
        CertKind::Indep => {
            let v = indep_verdict(&g)?;
            let ok = v.status == crate::indep::Status::Gorenstein && v.delta == Some(cert.delta);
            (indep_status(v.status), v.delta, ok)
        }
    };
    let res = ReplayResult {
        description: cert.root.to_string(),
        delta: cert.delta,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        status,
        checker_delta,
        reproduced,
    };
    Ok((g, res))
}

/// Replays certificates and re-runs the checker on each result. The
/// returned graphs are the replays, in order.
pub fn replay_certificates(certs: &[ConstructionCert]) -> Result<(VerdictReport, Vec<Multigraph>)> {
    let start = Instant::now();
    if certs.is_empty() {
        return Err(Error::Certificate("nothing to replay".into()));
    }
    let mut graphs = Vec::new();
    let mut results = Vec::new();
    for c in certs {
        let (g, r) = replay_one(c)?;
        graphs.push(g);
        results.push(r);
    }
    let kind = match certs[0].kind {
        CertKind::Base => PolytopeKind::Base,
        CertKind::Indep => PolytopeKind::Independence,
    };
    let all = results.iter().all(|r| r.reproduced);
    let status = if all { Status::Gorenstein } else { Status::NotGorenstein };
    let delta = if all { Some(certs[0].delta) } else { None };
    let m = match (&certs[0].root, kind) {
        (crate::construct::CertNode::BlowUp { m, .. }, _) => Some(*m as usize),
        (_, PolytopeKind::Independence) => Some(1),
        _ => None,
    };
    let input = InputSummary::of(&graphs[0], None);
    let r = finish(Command::Replay, input, kind, status, delta, m.filter(|_| all), Details::Replay { results }, start);
    Ok((r, graphs))
}

/// Certificates carried by a report, if any.
pub fn certificates_of(r: &VerdictReport) -> Vec<ConstructionCert> {
    match &r.details {
        Details::Certificates { blocks } => blocks.iter().map(|b| b.certificate.clone()).collect(),
        _ => Vec::new(),
    }
}

/// Checker status reported under `report`'s kind for a graph, used to
/// confirm generated graphs.
pub fn status_line(r: &VerdictReport) -> String {
    match (r.status, r.delta) {
        (Status::Gorenstein, Some(d)) => format!("gorenstein delta={d}"),
        (Status::Gorenstein, None) => "gorenstein (any delta)".to_string(),
        (Status::NotGorenstein, _) => "not gorenstein".to_string(),
    }
}
