//! Problem instances, structural witnesses, kernel results, and the
//! canonical JSON wire format.

use crate::graph::{Graph, LabeledMultigraph};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "long-cycle")]
    LongCycle,
    #[serde(rename = "long-path")]
    LongPath,
    #[serde(rename = "hamiltonian-cycle")]
    HamiltonianCycle,
    #[serde(rename = "hamiltonian-path")]
    HamiltonianPath,
    #[serde(rename = "disjoint-paths")]
    DisjointPaths,
    #[serde(rename = "disjoint-cycles")]
    DisjointCycles,
    #[serde(rename = "fp-st-path")]
    FpStPath,
    #[serde(rename = "fp-st-path-shortest")]
    FpStPathShortest,
    #[serde(rename = "fp-st-path-longest")]
    FpStPathLongest,
    #[serde(rename = "fp-longest-path")]
    FpLongestPath,
}

impl Problem {
    pub fn tag(&self) -> &'static str {
        match self {
            Problem::LongCycle => "long-cycle",
            Problem::LongPath => "long-path",
            Problem::HamiltonianCycle => "hamiltonian-cycle",
            Problem::HamiltonianPath => "hamiltonian-path",
            Problem::DisjointPaths => "disjoint-paths",
            Problem::DisjointCycles => "disjoint-cycles",
            Problem::FpStPath => "fp-st-path",
            Problem::FpStPathShortest => "fp-st-path-shortest",
            Problem::FpStPathLongest => "fp-st-path-longest",
            Problem::FpLongestPath => "fp-longest-path",
        }
    }

    pub fn needs_k(&self) -> bool {
        matches!(
            self,
            Problem::LongCycle
                | Problem::LongPath
                | Problem::DisjointPaths
                | Problem::DisjointCycles
                | Problem::FpStPathShortest
                | Problem::FpStPathLongest
                | Problem::FpLongestPath
        )
    }

    pub fn needs_st(&self) -> bool {
        matches!(
            self,
            Problem::FpStPath | Problem::FpStPathShortest | Problem::FpStPathLongest
        )
    }

    pub fn is_forbidden_pairs(&self) -> bool {
        matches!(
            self,
            Problem::FpStPath
                | Problem::FpStPathShortest
                | Problem::FpStPathLongest
                | Problem::FpLongestPath
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    #[serde(rename = "vertex-cover")]
    VertexCover,
    #[serde(rename = "cluster-modulator")]
    ClusterModulator,
    #[serde(rename = "bipaths-modulator")]
    BipathsModulator,
    #[serde(rename = "outerplanar-modulator")]
    OuterplanarModulator,
    #[serde(rename = "max-leaf-bound")]
    MaxLeafBound,
    #[serde(rename = "vc-of-H")]
    VcOfH,
}

/// Structural witness: a modulator vertex set `X` (empty for the max-leaf
/// promise) and the declared parameter value `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: Vec<usize>,
    pub ell: usize,
}

impl Witness {
    pub fn new(kind: WitnessKind, mut vertices: Vec<usize>, ell: usize) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let w = Witness { kind, vertices, ell };
        w.validate_shape()?;
        Ok(w)
    }

    pub fn modulator(kind: WitnessKind, vertices: Vec<usize>) -> Result<Self> {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let ell = vertices.len();
        Witness::new(kind, vertices, ell)
    }

    pub fn max_leaf(ell: usize) -> Result<Self> {
        Witness::new(WitnessKind::MaxLeafBound, Vec::new(), ell)
    }

    fn validate_shape(&self) -> Result<()> {
        match self.kind {
            WitnessKind::MaxLeafBound => {
                if !self.vertices.is_empty() {
                    return Err(Error::Witness("max-leaf-bound witness carries no vertices".into()));
                }
                if self.ell < 1 {
                    return Err(Error::Witness("max-leaf-bound requires ell >= 1".into()));
                }
            }
            _ => {
                if self.ell != self.vertices.len() {
                    return Err(Error::Witness(format!(
                        "ell = {} does not match |vertices| = {}",
                        self.ell,
                        self.vertices.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A problem instance: graph (possibly labeled / with stand-ins), numeric
/// target, terminal or forbidden pairs, endpoints, and a structural witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub problem: Problem,
    pub graph: Graph,
    /// Present iff the graph is a labeled multigraph (labels aligned with edges).
    pub labels: Option<Vec<u64>>,
    pub k: Option<u64>,
    pub pairs: Option<Vec<(usize, usize)>>,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub witness: Witness,
    /// Labeled stand-in vertices of compressed cluster instances. A stand-in
    /// counts as `1 + label` vertices when traversed and may be used once.
    pub stand_ins: Option<Vec<StandIn>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandIn {
    pub clique_id: usize,
    pub vertex_id: usize,
    pub label: u64,
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n;
        if self.problem.needs_k() && self.k.is_none() {
            return Err(Error::Parse(format!("problem {} requires k", self.problem.tag())));
        }
        if !self.problem.needs_k() && self.k.is_some() {
            return Err(Error::Parse(format!("problem {} does not take k", self.problem.tag())));
        }
        let has_st = self.s.is_some() && self.t.is_some();
        if self.problem.needs_st() && !has_st {
            return Err(Error::Parse(format!("problem {} requires s and t", self.problem.tag())));
        }
        if self.s.is_some() != self.t.is_some() {
            return Err(Error::Parse("s and t must be given together".into()));
        }
        // s,t are also accepted on hamiltonian-path (the s-t path variant used
        // by the composition inputs); all other problems reject them.
        if has_st && !self.problem.needs_st() && self.problem != Problem::HamiltonianPath {
            return Err(Error::Parse(format!("problem {} does not take s/t", self.problem.tag())));
        }
        if let (Some(s), Some(t)) = (self.s, self.t) {
            if s >= n || t >= n {
                return Err(Error::Parse("vertex out of range: s/t".into()));
            }
            if s == t {
                return Err(Error::Parse("s and t must be distinct".into()));
            }
        }
        match self.problem {
            Problem::DisjointPaths => {
                let pairs = self
                    .pairs
                    .as_ref()
                    .ok_or_else(|| Error::Parse("disjoint-paths requires pairs".into()))?;
                if self.k != Some(pairs.len() as u64) {
                    return Err(Error::Parse("disjoint-paths requires k == |pairs|".into()));
                }
                let mut seen = std::collections::HashSet::new();
                for &(u, v) in pairs {
                    if u >= n || v >= n {
                        return Err(Error::Parse("vertex out of range: pair".into()));
                    }
                    if !seen.insert(u) || !seen.insert(v) {
                        return Err(Error::Parse(
                            "disjoint-paths terminals must be pairwise distinct".into(),
                        ));
                    }
                }
            }
            p if p.is_forbidden_pairs() => {
                for &(u, v) in self.pairs.as_deref().unwrap_or(&[]) {
                    if u >= n || v >= n {
                        return Err(Error::Parse("vertex out of range: forbidden pair".into()));
                    }
                    if u == v {
                        return Err(Error::Parse("forbidden pair with equal members".into()));
                    }
                }
            }
            _ => {
                if self.pairs.is_some() {
                    return Err(Error::Parse(format!(
                        "problem {} does not take pairs",
                        self.problem.tag()
                    )));
                }
            }
        }
        if let Some(labels) = &self.labels {
            // constructing the multigraph performs the alignment/simple-expansion checks
            LabeledMultigraph::new(self.graph.clone(), labels.clone())?;
        }
        self.witness.validate_shape()?;
        for &v in &self.witness.vertices {
            if v >= n {
                return Err(Error::Parse("vertex out of range: witness".into()));
            }
        }
        if let Some(stand_ins) = &self.stand_ins {
            for s in stand_ins {
                if s.vertex_id >= n {
                    return Err(Error::Parse("vertex out of range: stand-in".into()));
                }
            }
        }
        Ok(())
    }

    pub fn labeled_multigraph(&self) -> Option<LabeledMultigraph> {
        self.labels
            .as_ref()
            .map(|l| LabeledMultigraph::new(self.graph.clone(), l.clone()).expect("validated"))
    }

    pub fn forbidden_pairs(&self) -> &[(usize, usize)] {
        if self.problem.is_forbidden_pairs() {
            self.pairs.as_deref().unwrap_or(&[])
        } else {
            &[]
        }
    }
}

// ---------------------------------------------------------------------------
// canonical JSON form
// ---------------------------------------------------------------------------

/// Wire format with fixed key order; serialization through this struct is
/// the canonical byte form.
#[derive(Serialize, Deserialize)]
struct InstanceJson {
    problem: Problem,
    directed: bool,
    multigraph: bool,
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pairs: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t: Option<usize>,
    witness: Witness,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    stand_ins: Option<Vec<StandIn>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    certificate: Option<Vec<usize>>,
}

/// Parse the JSON instance format (UTF-8). A trailing `certificate` key is
/// tolerated and ignored.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: InstanceJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
    let graph = Graph::new(raw.n, raw.directed, raw.multigraph, raw.edges)?;
    let inst = Instance {
        problem: raw.problem,
        graph,
        labels: raw.labels,
        k: raw.k,
        pairs: raw.pairs,
        s: raw.s,
        t: raw.t,
        witness: Witness::new(raw.witness.kind, raw.witness.vertices, raw.witness.ell)?,
        stand_ins: raw.stand_ins,
    };
    inst.validate()?;
    Ok(inst)
}

/// Canonical JSON serialization: fixed key order, sorted edge list, compact.
pub fn serialize_instance(inst: &Instance) -> String {
    serialize_instance_with_certificate(inst, None)
}

pub fn serialize_instance_with_certificate(inst: &Instance, cert: Option<&[usize]>) -> String {
    let raw = InstanceJson {
        problem: inst.problem,
        directed: inst.graph.directed,
        multigraph: inst.graph.multigraph,
        n: inst.graph.n,
        edges: inst.graph.edges().to_vec(),
        labels: inst.labels.clone(),
        k: inst.k,
        pairs: inst.pairs.clone(),
        s: inst.s,
        t: inst.t,
        witness: inst.witness.clone(),
        stand_ins: inst.stand_ins.clone(),
        certificate: cert.map(|c| c.to_vec()),
    };
    serde_json::to_string(&raw).expect("instance serialization cannot fail")
}

// ---------------------------------------------------------------------------
// kernel results
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelStatus {
    Reduced,
    SolvedYes,
    SolvedNo,
    PromiseViolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub vertices: usize,
    pub edges: usize,
    pub bits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelStats {
    pub before: SizeStats,
    pub after: SizeStats,
}

/// One rule application in the reduction trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub rule: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub removed: Vec<usize>,
    /// `new index -> old index` after this event's deletions.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub remap: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub added_edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl TraceEvent {
    pub fn rule(name: &str) -> Self {
        TraceEvent {
            rule: name.to_string(),
            removed: Vec::new(),
            remap: None,
            added_edges: Vec::new(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug)]
pub struct KernelResult {
    pub status: KernelStatus,
    pub instance: Instance,
    pub trace: Vec<TraceEvent>,
    pub stats: KernelStats,
}

pub fn size_stats(inst: &Instance) -> SizeStats {
    SizeStats {
        vertices: inst.graph.n,
        edges: inst.graph.edge_count(),
        bits: 8 * serialize_instance(inst).len() as u64,
    }
}

impl KernelResult {
    pub fn finish(
        status: KernelStatus,
        before: &Instance,
        after: Instance,
        trace: Vec<TraceEvent>,
    ) -> KernelResult {
        let stats = KernelStats { before: size_stats(before), after: size_stats(&after) };
        KernelResult { status, instance: after, trace, stats }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            status: KernelStatus,
            instance: serde_json::Value,
            trace: &'a [TraceEvent],
            stats: KernelStats,
        }
        let inst: serde_json::Value =
            serde_json::from_str(&serialize_instance(&self.instance)).expect("canonical json");
        serde_json::to_string_pretty(&Out {
            status: self.status,
            instance: inst,
            trace: &self.trace,
            stats: self.stats,
        })
        .expect("kernel result serialization")
    }
}

// ---------------------------------------------------------------------------
// canonical dummy instances
// ---------------------------------------------------------------------------

fn dummy_witness(kind: WitnessKind, graph: &Graph) -> Witness {
    match kind {
        WitnessKind::VertexCover => {
            // greedy cover of the tiny dummy graph
            let mut cover = Vec::new();
            for &(u, v) in graph.edges() {
                if !cover.contains(&u) && !cover.contains(&v) {
                    cover.push(u);
                }
            }
            Witness::modulator(WitnessKind::VertexCover, cover).expect("dummy witness")
        }
        WitnessKind::MaxLeafBound => {
            // tiny dummies have max leaf number <= 2
            Witness::max_leaf(2).expect("dummy witness")
        }
        // empty modulators are valid for the tiny dummies of the remaining kinds
        k => Witness::modulator(k, Vec::new()).expect("dummy witness"),
    }
}

fn triangle(directed: bool) -> Graph {
    if directed {
        Graph::new(3, true, false, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    } else {
        Graph::simple_undirected(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }
}

/// The canonical dummy instance returned by rules that fully solve an
/// instance: a fixed trivially-YES or trivially-NO instance of the same
/// problem, carrying a valid witness of the same kind.
pub fn canonical_dummy(problem: Problem, yes: bool, kind: WitnessKind, directed: bool) -> Instance {
    let (graph, k, pairs, s, t) = match (problem, yes) {
        (Problem::LongCycle, true) => (triangle(directed), Some(3), None, None, None),
        (Problem::LongCycle, false) => {
            (Graph::new(1, directed, false, vec![]).unwrap(), Some(2), None, None, None)
        }
        (Problem::LongPath, true) => (triangle(directed), Some(3), None, None, None),
        (Problem::LongPath, false) => {
            (Graph::new(1, directed, false, vec![]).unwrap(), Some(2), None, None, None)
        }
        (Problem::HamiltonianCycle, true) => (triangle(directed), None, None, None, None),
        (Problem::HamiltonianCycle, false) => {
            (Graph::new(1, directed, false, vec![]).unwrap(), None, None, None, None)
        }
        (Problem::HamiltonianPath, true) => (triangle(directed), None, None, None, None),
        (Problem::HamiltonianPath, false) => {
            (Graph::new(2, directed, false, vec![]).unwrap(), None, None, None, None)
        }
        (Problem::DisjointPaths, true) => (
            Graph::new(2, false, false, vec![(0, 1)]).unwrap(),
            Some(1),
            Some(vec![(0, 1)]),
            None,
            None,
        ),
        (Problem::DisjointPaths, false) => (
            Graph::new(2, false, false, vec![]).unwrap(),
            Some(1),
            Some(vec![(0, 1)]),
            None,
            None,
        ),
        (Problem::DisjointCycles, true) => (triangle(false), Some(1), None, None, None),
        (Problem::DisjointCycles, false) => {
            (Graph::new(1, false, false, vec![]).unwrap(), Some(1), None, None, None)
        }
        (Problem::FpStPath, true) => {
            (Graph::new(2, false, false, vec![(0, 1)]).unwrap(), None, Some(vec![]), Some(0), Some(1))
        }
        (Problem::FpStPath, false) => {
            (Graph::new(2, false, false, vec![]).unwrap(), None, Some(vec![]), Some(0), Some(1))
        }
        (Problem::FpStPathShortest | Problem::FpStPathLongest, true) => (
            Graph::new(2, false, false, vec![(0, 1)]).unwrap(),
            Some(2),
            Some(vec![]),
            Some(0),
            Some(1),
        ),
        (Problem::FpStPathShortest | Problem::FpStPathLongest, false) => (
            Graph::new(2, false, false, vec![]).unwrap(),
            Some(2),
            Some(vec![]),
            Some(0),
            Some(1),
        ),
        (Problem::FpLongestPath, true) => (
            Graph::new(2, false, false, vec![(0, 1)]).unwrap(),
            Some(2),
            Some(vec![]),
            None,
            None,
        ),
        (Problem::FpLongestPath, false) => (
            Graph::new(1, false, false, vec![]).unwrap(),
            Some(2),
            Some(vec![]),
            None,
            None,
        ),
    };
    let witness = dummy_witness(kind, &graph);
    let inst = Instance {
        problem,
        graph,
        labels: None,
        k,
        pairs,
        s,
        t,
        witness,
        stand_ins: None,
    };
    inst.validate().expect("canonical dummies are valid");
    inst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn parse_minimal_long_cycle() {
        let text = r#"{"problem":"long-cycle","directed":false,"multigraph":false,"n":3,
            "edges":[[0,1],[1,2],[2,0]],"k":3,
            "witness":{"kind":"vertex-cover","vertices":[0,1],"ell":2}}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.problem, Problem::LongCycle);
        assert_eq!(inst.witness.ell, 2);
        assert_eq!(inst.k, Some(3));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let text = r#"{"problem":"long-cycle","directed":false,"multigraph":false,"n":3,
            "edges":[[0,5]],"k":3,
            "witness":{"kind":"vertex-cover","vertices":[0],"ell":1}}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("vertex out of range"));
    }

    #[test]
    fn parse_rejects_missing_k_and_duplicate_edges() {
        let no_k = r#"{"problem":"long-cycle","directed":false,"multigraph":false,"n":3,
            "edges":[[0,1]],"witness":{"kind":"vertex-cover","vertices":[0],"ell":1}}"#;
        assert!(parse_instance(no_k).is_err());
        let dup = r#"{"problem":"hamiltonian-cycle","directed":false,"multigraph":false,"n":3,
            "edges":[[0,1],[1,0]],"witness":{"kind":"vertex-cover","vertices":[0],"ell":1}}"#;
        assert!(parse_instance(dup).is_err());
    }

    #[test]
    fn round_trip_is_identity_on_canonical_form() {
        let text = r#"{"problem":"disjoint-paths","directed":false,"multigraph":false,"n":4,
            "edges":[[0,1],[1,2],[2,3]],"k":1,"pairs":[[0,3]],
            "witness":{"kind":"vertex-cover","vertices":[1,2],"ell":2}}"#;
        let inst = parse_instance(text).unwrap();
        let canon = serialize_instance(&inst);
        let inst2 = parse_instance(&canon).unwrap();
        assert_eq!(inst, inst2);
        assert_eq!(canon, serialize_instance(&inst2));
    }

    #[test]
    fn dummies_match_their_advertised_answers() {
        use Problem::*;
        for problem in [
            LongCycle,
            LongPath,
            HamiltonianCycle,
            HamiltonianPath,
            DisjointPaths,
            DisjointCycles,
            FpStPath,
            FpStPathShortest,
            FpStPathLongest,
            FpLongestPath,
        ] {
            for yes in [true, false] {
                let d = canonical_dummy(problem, yes, WitnessKind::VertexCover, false);
                let ans = oracle::solve_instance(&d, &crate::caps::Caps::default()).unwrap();
                assert_eq!(ans.yes, yes, "dummy for {problem:?} yes={yes}");
            }
        }
    }
}
