//! Exchange-graph exploration and Laurent-phenomenon reporting.
//!
//! Seeds are deduplicated up to relabeling of exchangeable indices through
//! [`CanonicalKey`]. Exploration is breadth-first with children in ascending
//! direction order; a level's mutations may be computed in parallel, but
//! nodes are committed one at a time in task order, so the node set, ids
//! and edges are identical for every run and every [`Parallelism`].

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::par::{map_ordered, Parallelism};
use crate::seeds::{ClassicalSeed, QuantumSeed};

/// Canonical serialization of a seed up to relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Hex SHA-256 of the key, for display.
    pub fn digest_hex(&self) -> String {
        hex::encode(Sha256::digest(&self.0))
    }
}

/// What the explorer needs from a seed.
pub trait ExchangeSeed: Clone + Send + Sync + Sized {
    /// Number of variables `m`.
    fn size(&self) -> usize;

    fn exchangeable(&self) -> &[usize];

    fn mutate_at(&self, k: usize) -> Result<Self>;

    /// Sort key for exchangeable index `i` in canonical relabeling.
    fn variable_label(&self, i: usize) -> String;

    /// Column `k` of `B̃`, used to break ties between equal labels.
    fn column_label(&self, k: usize) -> String;

    /// The seed with exchangeable indices permuted (old `i` becomes `perm[i]`).
    fn relabeled(&self, perm: &[usize]) -> Self;

    fn to_json(&self) -> Value;

    /// Short human-readable description of variable `i`.
    fn variable_summary(&self, i: usize) -> String;

    fn canonical_key(&self) -> CanonicalKey {
        canonical_key(self)
    }
}

/// Sorts exchangeable indices by `(variable label, column label)`; frozen
/// indices keep their position. Returns the permutation.
pub fn canonical_permutation<S: ExchangeSeed>(s: &S) -> Vec<usize> {
    let ex = s.exchangeable();
    let m = s.size();
    let mut labeled: Vec<(String, String, usize)> = ex
        .iter()
        .map(|&i| (s.variable_label(i), s.column_label(i), i))
        .collect();
    labeled.sort();
    let mut perm: Vec<usize> = (0..m).collect();
    for (slot, (_, _, old)) in labeled.into_iter().enumerate() {
        perm[old] = ex[slot];
    }
    perm
}

pub fn canonical_key<S: ExchangeSeed>(s: &S) -> CanonicalKey {
    let perm = canonical_permutation(s);
    let canon = s.relabeled(&perm);
    CanonicalKey(serde_json::to_vec(&canon.to_json()).expect("serializable"))
}

impl ExchangeSeed for ClassicalSeed {
    fn size(&self) -> usize {
        self.exchange_matrix().m()
    }

    fn exchangeable(&self) -> &[usize] {
        self.exchange_matrix().ex()
    }

    fn mutate_at(&self, k: usize) -> Result<Self> {
        self.mutate(k)
    }

    fn variable_label(&self, i: usize) -> String {
        serde_json::to_string(&self.vars()[i]).expect("serializable")
    }

    fn column_label(&self, k: usize) -> String {
        format!("{:?}", self.exchange_matrix().column(k).unwrap_or_default())
    }

    fn relabeled(&self, perm: &[usize]) -> Self {
        ClassicalSeed::relabeled(self, perm)
    }

    fn to_json(&self) -> Value {
        ClassicalSeed::to_json(self)
    }

    fn variable_summary(&self, i: usize) -> String {
        self.vars()[i].to_string()
    }
}

impl ExchangeSeed for QuantumSeed {
    fn size(&self) -> usize {
        self.exchange_matrix().m()
    }

    fn exchangeable(&self) -> &[usize] {
        self.exchange_matrix().ex()
    }

    fn mutate_at(&self, k: usize) -> Result<Self> {
        self.mutate(k)
    }

    fn variable_label(&self, i: usize) -> String {
        serde_json::to_string(&self.vars()[i]).expect("serializable")
    }

    fn column_label(&self, k: usize) -> String {
        format!("{:?}", self.exchange_matrix().column(k).unwrap_or_default())
    }

    fn relabeled(&self, perm: &[usize]) -> Self {
        QuantumSeed::relabeled(self, perm)
    }

    fn to_json(&self) -> Value {
        QuantumSeed::to_json(self)
    }

    fn variable_summary(&self, i: usize) -> String {
        self.vars()[i].to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_seeds: usize,
    pub max_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_seeds: 10_000, max_depth: 32 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Closed,
    CappedBySeeds,
    CappedByDepth,
}

#[derive(Clone, Debug)]
pub struct Node<S> {
    pub key: CanonicalKey,
    pub seed: S,
    pub depth: usize,
    /// `(parent id, direction)` for every node but the root.
    pub parent: Option<(usize, usize)>,
}

/// Edge `from --k--> to` (ids are node indices, `direction` is 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub direction: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph<S> {
    nodes: Vec<Node<S>>,
    index: HashMap<CanonicalKey, usize>,
    edges: BTreeSet<Edge>,
    status: Status,
}

impl<S: ExchangeSeed> ExchangeGraph<S> {
    pub fn nodes(&self) -> &[Node<S>] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn node_id(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// 0-based mutation path from the root to node `id`.
    pub fn path_to(&self, id: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = id;
        while let Some((p, k)) = self.nodes[cur].parent {
            path.push(k);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Distinct exchangeable cluster variables over all stored seeds.
    pub fn cluster_variables(&self) -> BTreeSet<String> {
        self.nodes
            .iter()
            .flat_map(|n| n.seed.exchangeable().iter().map(|&i| n.seed.variable_label(i)))
            .collect()
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "status": self.status,
            "nodes": self.nodes.len(),
            "edges": self.edges.len(),
            "cluster_variables": self.cluster_variables().len(),
        })
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                json!({
                    "id": id,
                    "key": n.key.digest_hex(),
                    "depth": n.depth,
                    "parent": n.parent.map(|(p, k)| json!({ "id": p, "direction": k + 1 })),
                    "seed": n.seed.to_json(),
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({ "from": e.from, "direction": e.direction + 1, "to": e.to }))
            .collect();
        let mut out = self.summary_json();
        out["nodes"] = Value::Array(nodes);
        out["edges"] = Value::Array(edges);
        out
    }

    pub fn to_dot(&self) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph exchange_graph {\n  node [shape=box];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let vars: Vec<String> = n
                .seed
                .exchangeable()
                .iter()
                .map(|&i| n.seed.variable_summary(i))
                .collect();
            let label = format!("#{id} {}\\n{}", &n.key.digest_hex()[..8], esc(&vars.join(" | ")));
            let _ = writeln!(out, "  n{id} [label=\"{label}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.direction + 1);
        }
        out.push_str("}\n");
        out
    }
}

pub fn explore<S: ExchangeSeed>(root: S, caps: Caps) -> Result<ExchangeGraph<S>> {
    explore_with(root, caps, Parallelism::default())
}

/// Breadth-first closure of `root` under all mutations.
///
/// A node at depth `max_depth` is still mutated so that edges back into the
/// graph are recorded, but no deeper node is stored; if one would be, the
/// status is `CappedByDepth`. Hitting `max_seeds` stops immediately.
pub fn explore_with<S: ExchangeSeed>(root: S, caps: Caps, mode: Parallelism) -> Result<ExchangeGraph<S>> {
    let max_seeds = caps.max_seeds.max(1);
    let key = root.canonical_key();
    let mut graph = ExchangeGraph {
        nodes: vec![Node { key: key.clone(), seed: root, depth: 0, parent: None }],
        index: HashMap::from([(key, 0)]),
        edges: BTreeSet::new(),
        status: Status::Closed,
    };
    let mut frontier = vec![0usize];
    let mut depth = 0;
    while !frontier.is_empty() {
        let tasks: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&id| graph.nodes[id].seed.exchangeable().iter().map(move |&k| (id, k)))
            .collect();
        let nodes = &graph.nodes;
        let results = map_ordered(mode, &tasks, |&(id, k)| {
            nodes[id].seed.mutate_at(k).map(|s| (s.canonical_key(), s))
        });

        let mut next = Vec::new();
        for (&(id, k), res) in tasks.iter().zip(results) {
            let (key, seed) = match res {
                Ok(x) => x,
                Err(Error::LaurentViolation { direction, seed, .. }) => {
                    return Err(Error::LaurentViolation { direction, path: graph.path_to(id), seed });
                }
                Err(e) => return Err(e),
            };
            if let Some(&to) = graph.index.get(&key) {
                graph.edges.insert(Edge { from: id, direction: k, to });
                continue;
            }
            if depth >= caps.max_depth {
                graph.status = Status::CappedByDepth;
                continue;
            }
            if graph.nodes.len() >= max_seeds {
                graph.status = Status::CappedBySeeds;
                return Ok(graph);
            }
            let to = graph.nodes.len();
            graph.index.insert(key.clone(), to);
            graph.nodes.push(Node { key, seed, depth: depth + 1, parent: Some((id, k)) });
            graph.edges.insert(Edge { from: id, direction: k, to });
            next.push(to);
        }
        frontier = next;
        depth += 1;
    }
    Ok(graph)
}

/// Seeds whose variables can be inspected as Laurent polynomials.
pub trait LaurentSeed: ExchangeSeed {
    fn support(&self, i: usize) -> Vec<Vec<i64>>;
}

impl LaurentSeed for ClassicalSeed {
    fn support(&self, i: usize) -> Vec<Vec<i64>> {
        self.vars()[i].support().map(|a| a.as_slice().to_vec()).collect()
    }
}

impl LaurentSeed for QuantumSeed {
    fn support(&self, i: usize) -> Vec<Vec<i64>> {
        self.vars()[i].support().map(|a| a.as_slice().to_vec()).collect()
    }
}

/// One produced (or initial) variable. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentRow {
    pub step: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<usize>,
    pub index: usize,
    /// Whether the exchange relation divided exactly.
    pub laurent: bool,
    pub support: Vec<Vec<i64>>,
    /// Exponents of the denominator monomial, `max(0, -min_i)` per coordinate.
    pub denominator: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentReport {
    pub generators: Vec<LaurentRow>,
    pub steps: Vec<LaurentRow>,
    pub completed: bool,
    /// Final seed coincides with the root up to relabeling.
    pub returns_to_initial: bool,
}

impl LaurentReport {
    pub fn all_laurent(&self) -> bool {
        self.completed && self.steps.iter().all(|r| r.laurent)
    }
}

fn denominator(support: &[Vec<i64>], m: usize) -> Vec<i64> {
    (0..m)
        .map(|i| support.iter().map(|a| a[i]).min().map_or(0, |lo| (-lo).max(0)))
        .collect()
}

fn row<S: LaurentSeed>(s: &S, step: usize, direction: Option<usize>, index: usize, m: usize) -> LaurentRow {
    let support = s.support(index);
    LaurentRow {
        step,
        direction: direction.map(|k| k + 1),
        index: index + 1,
        laurent: true,
        denominator: denominator(&support, m),
        support,
        error: None,
    }
}

/// Applies `sequence` (0-based directions) and reports on every variable
/// produced. A division failure ends the report with a failing row.
pub fn laurent_report<S: LaurentSeed>(root: &S, sequence: &[usize]) -> (LaurentReport, S) {
    let m = root.size();
    let generators = root.exchangeable().iter().map(|&i| row(root, 0, None, i, m)).collect();
    let mut steps = Vec::new();
    let mut cur = root.clone();
    let mut completed = true;
    for (t, &k) in sequence.iter().enumerate() {
        match cur.mutate_at(k) {
            Ok(next) => {
                steps.push(row(&next, t + 1, Some(k), k, m));
                cur = next;
            }
            Err(e) => {
                let e = match e {
                    Error::LaurentViolation { direction, seed, .. } => {
                        Error::LaurentViolation { direction, path: sequence[..t].to_vec(), seed }
                    }
                    e => e,
                };
                steps.push(LaurentRow {
                    step: t + 1,
                    direction: Some(k + 1),
                    index: k + 1,
                    laurent: false,
                    support: Vec::new(),
                    denominator: Vec::new(),
                    error: Some(e.to_json()),
                });
                completed = false;
                break;
            }
        }
    }
    let returns_to_initial = completed && cur.canonical_key() == root.canonical_key();
    (LaurentReport { generators, steps, completed, returns_to_initial }, cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::ExchangeMatrix;
    use crate::torus::SkewMatrix;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_principal(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn quantum_a2() -> QuantumSeed {
        QuantumSeed::initial(a2(), SkewMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn key_is_relabeling_invariant() {
        let s = ClassicalSeed::initial(a2()).mutate(0).unwrap();
        assert_eq!(s.canonical_key(), ExchangeSeed::relabeled(&s, &[1, 0]).canonical_key());
        let q = quantum_a2().mutate(1).unwrap();
        assert_eq!(q.canonical_key(), ExchangeSeed::relabeled(&q, &[1, 0]).canonical_key());
        assert_ne!(s.canonical_key(), ClassicalSeed::initial(a2()).canonical_key());
    }

    #[test]
    fn pentagon_walk_returns() {
        let s = ClassicalSeed::initial(a2());
        let t = s.mutate_sequence(&[0, 1, 0, 1, 0]).unwrap();
        assert_ne!(t.vars(), s.vars());
        assert_eq!(t.canonical_key(), s.canonical_key());
        let q = quantum_a2();
        assert_eq!(q.mutate_sequence(&[0, 1, 0, 1, 0]).unwrap().canonical_key(), q.canonical_key());
    }

    #[test]
    fn small_explorations() {
        let a1 = ClassicalSeed::initial(ExchangeMatrix::from_principal(vec![vec![0]]).unwrap());
        let g = explore(a1, Caps::default()).unwrap();
        assert_eq!((g.nodes().len(), g.status()), (2, Status::Closed));

        let g = explore(ClassicalSeed::initial(a2()), Caps::default()).unwrap();
        assert_eq!((g.nodes().len(), g.status()), (5, Status::Closed));
        assert_eq!(g.edges().len(), 10);
        assert_eq!(g.cluster_variables().len(), 5);

        let g = explore(quantum_a2(), Caps { max_seeds: 3, max_depth: 32 }).unwrap();
        assert_eq!((g.nodes().len(), g.status()), (3, Status::CappedBySeeds));
        let g = explore(quantum_a2(), Caps { max_seeds: 100, max_depth: 1 }).unwrap();
        assert_eq!((g.nodes().len(), g.status()), (3, Status::CappedByDepth));
        let g = explore(quantum_a2(), Caps { max_seeds: 100, max_depth: 2 }).unwrap();
        assert_eq!((g.nodes().len(), g.status()), (5, Status::Closed));
    }

    #[test]
    fn laurent_report_a2() {
        let (r, _) = laurent_report(&ClassicalSeed::initial(a2()), &[0, 1]);
        assert!(r.all_laurent());
        assert_eq!(r.steps[0].denominator, vec![1, 0]);
        assert_eq!(r.steps[1].denominator, vec![1, 1]);
        assert!(!r.returns_to_initial);

        let (r, _) = laurent_report(&ClassicalSeed::initial(a2()), &[]);
        assert!(r.steps.is_empty());
        assert!(r.generators.iter().all(|g| g.denominator == vec![0, 0]));
        assert!(r.returns_to_initial);

        let (r, _) = laurent_report(&quantum_a2(), &[0, 1, 0, 1, 0]);
        assert!(r.all_laurent());
        assert!(r.returns_to_initial);
    }

    #[test]
    fn dot_and_json_exports() {
        let g = explore(ClassicalSeed::initial(a2()), Caps::default()).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph exchange_graph {"));
        assert_eq!(dot.matches("->").count(), 10);
        let js = g.to_json();
        assert_eq!(js["status"], "Closed");
        assert_eq!(js["nodes"].as_array().unwrap().len(), 5);
        assert_eq!(js["edges"][0]["direction"], 1);
    }
}
