//! Connected components of the labeled (augmented) Rauzy diagram, and paths in it.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::induction::{EdgeRecord, InductionError, Move, MoveWord, Reading};
use crate::perm::{LabeledPermutation, Letter, UnlabeledPermutation};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("seed permutation is reducible: {0}")]
    ReducibleSeed(String),
    #[error("enumeration cap exceeded: more than {0} vertices")]
    CapExceeded(usize),
    #[error(transparent)]
    Induction(#[from] InductionError),
    #[error("path is not allowed: start ({start}) and end ({end}) define different unlabeled permutations")]
    NotAllowed { start: String, end: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: Move,
    pub winner: Option<Letter>,
    pub loser: Option<Letter>,
}

/// One connected component, vertices numbered in BFS order from the seed.
#[derive(Debug, Clone)]
pub struct RauzyDiagram {
    vertices: Vec<LabeledPermutation>,
    index: HashMap<LabeledPermutation, usize>,
    edges: Vec<Edge>,
    augmented: bool,
}

fn moves_for(augmented: bool) -> &'static [Move] {
    if augmented {
        &Move::ALL
    } else {
        &Move::ALL[..2]
    }
}

/// Breadth-first closure of `seed` under `t`, `b` (and `f` when augmented).
pub fn explore(seed: &LabeledPermutation, augmented: bool, cap: usize) -> Result<RauzyDiagram, DiagramError> {
    if !seed.is_irreducible() {
        return Err(DiagramError::ReducibleSeed(seed.to_string()));
    }
    let mut vertices = vec![seed.clone()];
    let mut index = HashMap::from([(seed.clone(), 0usize)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    if cap == 0 {
        return Err(DiagramError::CapExceeded(cap));
    }
    while let Some(src) = queue.pop_front() {
        for &m in moves_for(augmented) {
            let e = m.apply(&vertices[src])?;
            let dst = match index.get(&e.target) {
                Some(&d) => d,
                None => {
                    if vertices.len() >= cap {
                        return Err(DiagramError::CapExceeded(cap));
                    }
                    let d = vertices.len();
                    index.insert(e.target.clone(), d);
                    vertices.push(e.target.clone());
                    queue.push_back(d);
                    d
                }
            };
            edges.push(Edge { src, dst, kind: m, winner: e.winner, loser: e.loser });
        }
    }
    Ok(RauzyDiagram { vertices, index, edges, augmented })
}

impl RauzyDiagram {
    pub fn vertices(&self) -> &[LabeledPermutation] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, p: &LabeledPermutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &LabeledPermutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.src == v)
    }

    /// Every vertex whose unlabeled permutation equals that of `p`.
    pub fn unlabeled_matches(&self, p: &LabeledPermutation) -> Vec<usize> {
        let u = p.unlabeled();
        (0..self.len()).filter(|&i| self.vertices[i].unlabeled() == u).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rauzy {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = v.two_row().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
            let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.src, e.dst, e.kind.symbol());
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let name = |l: Option<Letter>| l.map(|l| self.vertices[0].name(l).to_string());
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "src": e.src,
                    "dst": e.dst,
                    "kind": e.kind,
                    "winner": name(e.winner),
                    "loser": name(e.loser),
                })
            })
            .collect();
        let vertices: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        serde_json::json!({ "augmented": self.augmented, "vertices": vertices, "edges": edges })
    }
}

/// True iff no two distinct vertices share an unlabeled permutation.
pub fn injectivity_check(d: &RauzyDiagram) -> bool {
    injective_on(d.vertices())
}

pub fn injective_on(vertices: &[LabeledPermutation]) -> bool {
    let mut seen: HashSet<UnlabeledPermutation> = HashSet::new();
    let distinct: HashSet<&LabeledPermutation> = vertices.iter().collect();
    distinct.into_iter().all(|v| seen.insert(v.unlabeled()))
}

/// A path given by its start and its moves in execution order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RauzyPath {
    start: LabeledPermutation,
    word: MoveWord,
    end: LabeledPermutation,
}

impl RauzyPath {
    pub fn new(start: &LabeledPermutation, word: MoveWord) -> Result<RauzyPath, DiagramError> {
        let mut end = start.clone();
        for &m in word.moves() {
            end = m.apply(&end)?.target;
        }
        Ok(RauzyPath { start: start.clone(), word, end })
    }

    pub fn start(&self) -> &LabeledPermutation {
        &self.start
    }

    pub fn end(&self) -> &LabeledPermutation {
        &self.end
    }

    pub fn word(&self) -> &MoveWord {
        &self.word
    }

    pub fn moves(&self) -> &[Move] {
        self.word.moves()
    }

    /// Edges re-derived from the start and the word.
    pub fn edges(&self) -> Vec<EdgeRecord> {
        let mut cur = self.start.clone();
        let mut out = Vec::with_capacity(self.word.len());
        for &m in self.word.moves() {
            let e = m.apply(&cur).expect("moves validated at construction");
            cur = e.target.clone();
            out.push(e);
        }
        out
    }

    pub fn is_allowed(&self) -> bool {
        self.start.equal_unlabeled(&self.end)
    }

    pub fn into_allowed(self) -> Result<AllowedPath, DiagramError> {
        if self.is_allowed() {
            Ok(AllowedPath(self))
        } else {
            Err(DiagramError::NotAllowed { start: self.start.to_string(), end: self.end.to_string() })
        }
    }
}

/// A path whose endpoints define the same unlabeled permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowedPath(RauzyPath);

impl AllowedPath {
    pub fn start(&self) -> &LabeledPermutation {
        self.0.start()
    }

    pub fn end(&self) -> &LabeledPermutation {
        self.0.end()
    }

    pub fn word(&self) -> &MoveWord {
        self.0.word()
    }

    pub fn moves(&self) -> &[Move] {
        self.0.moves()
    }

    pub fn edges(&self) -> Vec<EdgeRecord> {
        self.0.edges()
    }

    pub fn path(&self) -> &RauzyPath {
        &self.0
    }

    /// Winners of all `t`/`b` edges.
    pub fn winners(&self) -> BTreeSet<Letter> {
        self.edges().iter().filter_map(|e| e.winner).collect()
    }
}

/// Parses `word` with the given reading and walks it from `start`.
pub fn build_path(start: &LabeledPermutation, word: &str, reading: Reading) -> Result<RauzyPath, DiagramError> {
    if !start.is_irreducible() {
        return Err(DiagramError::ReducibleSeed(start.to_string()));
    }
    RauzyPath::new(start, MoveWord::parse(word, reading)?)
}

#[derive(Serialize)]
struct PathJson<'a> {
    start: &'a LabeledPermutation,
    end: &'a LabeledPermutation,
    execution_order: String,
    allowed: bool,
    edges: Vec<EdgeRecord>,
}

impl Serialize for RauzyPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PathJson {
            start: &self.start,
            end: &self.end,
            execution_order: self.word.execution_string(),
            allowed: self.is_allowed(),
            edges: self.edges(),
        }
        .serialize(serializer)
    }
}

impl Serialize for AllowedPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}
