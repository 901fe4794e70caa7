//! Finite bipartite graphs and the bipartite posets they describe.
//!
//! A [`BipartiteStructure`] has an `up` sort (the maximal elements), a `down`
//! sort, and edges from `up` to `down`. Read as a poset, `b < a` iff `(a, b)`
//! is an edge.

mod sentence;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::term::{PrintStyle, TermArena, TermId};

pub use sentence::{
    eval_ae_sentence, AESentence, Evaluation, Literal, LiteralKind, SentenceError, Var,
    XTupleOutcome,
};

#[derive(Debug, Error)]
pub enum BipartiteError {
    #[error("duplicate element name '{0}'")]
    DuplicateName(String),
    #[error("'{0}' is declared in both sorts")]
    Overlap(String),
    #[error("edge ({0}, {1}) must go from an up element to a down element")]
    EdgeEndpoint(String, String),
    #[error("three-element chain {0} > {1} > {2}")]
    ThreeChain(String, String, String),
    #[error("order relation is not a partial order: {0}")]
    NotAnOrder(String),
    #[error("invalid structure document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Serialized form: `{"up": [..], "down": [..], "edges": [[a, b], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub up: Vec<String>,
    pub down: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteStructure {
    up: Vec<String>,
    down: Vec<String>,
    /// `(up index, down index)`.
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteStructure {
    pub fn new(
        up: Vec<String>,
        down: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BipartiteError> {
        let mut seen = HashSet::new();
        for name in up.iter() {
            if !seen.insert(name.as_str()) {
                return Err(BipartiteError::DuplicateName(name.clone()));
            }
        }
        let mut down_seen = HashSet::new();
        for name in down.iter() {
            if seen.contains(name.as_str()) {
                return Err(BipartiteError::Overlap(name.clone()));
            }
            if !down_seen.insert(name.as_str()) {
                return Err(BipartiteError::DuplicateName(name.clone()));
            }
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= up.len() || b >= down.len())
        {
            return Err(BipartiteError::EdgeEndpoint(a.to_string(), b.to_string()));
        }
        Ok(BipartiteStructure { up, down, edges })
    }

    pub fn from_doc(doc: StructureDoc) -> Result<Self, BipartiteError> {
        let up_index: HashMap<&str, usize> = doc
            .up
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let down_index: HashMap<&str, usize> = doc
            .down
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for [a, b] in &doc.edges {
            match (up_index.get(a.as_str()), down_index.get(b.as_str())) {
                (Some(&i), Some(&j)) => edges.push((i, j)),
                _ => return Err(BipartiteError::EdgeEndpoint(a.clone(), b.clone())),
            }
        }
        Self::new(doc.up, doc.down, edges)
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            up: self.up.clone(),
            down: self.down.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [self.up[a].clone(), self.down[b].clone()])
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BipartiteError> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("structure serializes")
    }

    pub fn up(&self) -> &[String] {
        &self.up
    }

    pub fn down(&self) -> &[String] {
        &self.down
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    /// Number of elements, `|up| + |down|`.
    pub fn len(&self) -> usize {
        self.up.len() + self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element names in index order: up sort first, then down.
    pub fn elements(&self) -> impl Iterator<Item = &str> {
        self.up.iter().chain(self.down.iter()).map(String::as_str)
    }

    pub fn name(&self, i: usize) -> &str {
        if i < self.up.len() {
            &self.up[i]
        } else {
            &self.down[i - self.up.len()]
        }
    }

    /// Order on element indices (up first, then down): reflexive, plus
    /// `b <= a` for every edge `(a, b)`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        let n_up = self.up.len();
        i == j || (i >= n_up && j < n_up && self.edges.contains(&(j, i - n_up)))
    }

    pub fn up_neighbors(&self, a: usize) -> usize {
        self.edges.range((a, 0)..(a + 1, 0)).count()
    }

    pub fn down_neighbors(&self, b: usize) -> usize {
        self.edges.iter().filter(|&&(_, d)| d == b).count()
    }

    /// Complete bipartite graph `K_{n,n}` minus a perfect matching, with
    /// `up = a1..an`, `down = b1..bn` and `(ai, bj)` an edge iff `i != j`.
    /// For `n = 3` this is the hexagon.
    pub fn crown(n: usize) -> Self {
        let up = (1..=n).map(|i| format!("a{i}")).collect();
        let down = (1..=n).map(|i| format!("b{i}")).collect();
        let edges = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
        Self::new(up, down, edges).expect("crown is well formed")
    }

    pub fn is_nice(&self) -> NiceReport {
        let mut failures = Vec::new();
        let (n_up, n_down) = (self.up.len(), self.down.len());
        let up_size = n_up >= 3;
        if !up_size {
            failures.push(format!("only {n_up} up elements"));
        }
        let down_size = n_down >= 3;
        if !down_size {
            failures.push(format!("only {n_down} down elements"));
        }
        let mut up_degrees = true;
        for (a, name) in self.up.iter().enumerate() {
            let deg = self.up_neighbors(a);
            if deg < 2 || deg == n_down {
                up_degrees = false;
                failures.push(degree_note(name, deg, n_down));
            }
        }
        let mut down_degrees = true;
        for (b, name) in self.down.iter().enumerate() {
            let deg = self.down_neighbors(b);
            if deg < 2 || deg == n_up {
                down_degrees = false;
                failures.push(degree_note(name, deg, n_up));
            }
        }
        NiceReport {
            nice: up_size && down_size && up_degrees && down_degrees,
            up_size,
            down_size,
            up_degrees,
            down_degrees,
            failures,
        }
    }

    pub fn to_poset(&self) -> PosetView {
        let n = self.len();
        let elements = self.elements().map(str::to_string).collect();
        let less = (0..n)
            .map(|i| (0..n).map(|j| i != j && self.leq(i, j)).collect())
            .collect();
        PosetView { elements, less }
    }

    /// Poset on given terms ordered by the free-lattice order: the maximal
    /// terms form the up sort, the rest the down sort. Terms are
    /// canonicalized and deduplicated first.
    pub fn from_terms(
        arena: &mut TermArena,
        terms: &[TermId],
    ) -> Result<(Self, TermLabels), BipartiteError> {
        let mut ts: Vec<TermId> = terms.iter().map(|&t| arena.canonical_form(t)).collect();
        arena.sort_terms(&mut ts);
        let n = ts.len();
        let mut less = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                less[i][j] = i != j && arena.leq(ts[i], ts[j]);
            }
        }
        let names: Vec<String> = ts
            .iter()
            .map(|&t| arena.print(t, PrintStyle::Ascii))
            .collect();
        let view = PosetView {
            elements: names,
            less,
        };
        let s = view.to_graph()?;
        let labels = s
            .elements()
            .map(|name| ts[view.elements.iter().position(|e| e == name).unwrap()])
            .collect();
        Ok((s, TermLabels(labels)))
    }
}

/// Term for each element of a structure built by
/// [`BipartiteStructure::from_terms`], in element index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermLabels(pub Vec<TermId>);

fn degree_note(name: &str, deg: usize, other: usize) -> String {
    if deg < 2 {
        format!("{name} has {deg} neighbor(s), needs at least 2")
    } else {
        format!("{name} is adjacent to all {other} elements of the other sort")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceReport {
    pub nice: bool,
    /// At least three up elements.
    pub up_size: bool,
    /// At least three down elements.
    pub down_size: bool,
    /// Every up element has two neighbors and one non-neighbor.
    pub up_degrees: bool,
    /// Every down element has two neighbors and one non-neighbor.
    pub down_degrees: bool,
    pub failures: Vec<String>,
}

impl NiceReport {
    pub fn to_json(&self) -> Value {
        json!({ "definition": "2.2", "report": self })
    }
}

/// A finite poset given by its strict order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetView {
    pub elements: Vec<String>,
    /// `less[i][j]` iff element `i < j`.
    pub less: Vec<Vec<bool>>,
}

impl PosetView {
    /// Split into maximal elements (up) and the rest (down). Every non-maximal
    /// element must be minimal. Isolated elements are maximal, so they land in
    /// the up sort. Element order within each sort is preserved.
    pub fn to_graph(&self) -> Result<BipartiteStructure, BipartiteError> {
        let n = self.elements.len();
        for i in 0..n {
            if self.less[i][i] {
                return Err(BipartiteError::NotAnOrder(format!(
                    "{} < itself",
                    self.elements[i]
                )));
            }
            for j in 0..n {
                if self.less[i][j] && self.less[j][i] {
                    return Err(BipartiteError::NotAnOrder(format!(
                        "{} and {} are mutually below",
                        self.elements[i], self.elements[j]
                    )));
                }
                if !self.less[i][j] {
                    continue;
                }
                if let Some(k) = (0..n).find(|&k| self.less[j][k]) {
                    return Err(BipartiteError::ThreeChain(
                        self.elements[k].clone(),
                        self.elements[j].clone(),
                        self.elements[i].clone(),
                    ));
                }
            }
        }
        let maximal: Vec<usize> = (0..n)
            .filter(|&i| !(0..n).any(|j| self.less[i][j]))
            .collect();
        let rest: Vec<usize> = (0..n).filter(|i| !maximal.contains(i)).collect();
        let edges = maximal.iter().enumerate().flat_map(|(a, &i)| {
            rest.iter()
                .enumerate()
                .filter(move |&(_, &j)| self.less[j][i])
                .map(move |(b, _)| (a, b))
        });
        BipartiteStructure::new(
            maximal.iter().map(|&i| self.elements[i].clone()).collect(),
            rest.iter().map(|&i| self.elements[i].clone()).collect(),
            edges.collect::<Vec<_>>(),
        )
    }
}
