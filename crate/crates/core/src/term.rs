//! Hash-consed free-lattice terms.
//!
//! Every term lives in a [`TermArena`]. Meets and joins are stored flattened
//! (no meet directly under a meet, no join directly under a join), with
//! duplicate children removed and children sorted by a fixed node order, so
//! two construction sequences that describe the same flattened shape always
//! return the same [`TermId`].

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of a free generator `x_index`. Always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId(u32);

impl GeneratorId {
    pub fn new(index: u32) -> Result<Self, TermError> {
        if index == 0 {
            return Err(TermError::ZeroGenerator);
        }
        Ok(GeneratorId(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Handle to an interned node. Only meaningful together with the arena that
/// produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermId(u32);

impl TermId {
    pub fn raw(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Gen(GeneratorId),
    Meet(Box<[TermId]>),
    Join(Box<[TermId]>),
}

impl Node {
    fn rank(&self) -> u8 {
        match self {
            Node::Gen(_) => 0,
            Node::Meet(_) => 1,
            Node::Join(_) => 2,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("cannot build a meet or join of an empty list")]
    EmptyParts,
    #[error("generator index must be at least 1")]
    ZeroGenerator,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("substitution has no image for generator {0}")]
    MissingGenerator(GeneratorId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintStyle {
    /// `x1*(x2+x3)`; re-parses to the same node.
    Ascii,
    /// Meet as juxtaposition: `x1(x2+x3)`.
    Juxtaposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum OrderMemo {
    InProgress,
    Done(bool),
}

/// Interning table plus per-arena caches for the order and canonical-form
/// computations.
#[derive(Debug, Default)]
pub struct TermArena {
    nodes: Vec<Node>,
    intern: HashMap<Node, TermId>,
    pub(crate) order_cache: HashMap<(TermId, TermId), OrderMemo>,
    pub(crate) canon_cache: HashMap<TermId, TermId>,
    pub(crate) canonical_flags: HashMap<TermId, bool>,
}

impl TermArena {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of distinct nodes interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: TermId) -> &Node {
        &self.nodes[t.0 as usize]
    }

    /// Children of a meet or join; empty for generators.
    pub fn children(&self, t: TermId) -> &[TermId] {
        match self.node(t) {
            Node::Gen(_) => &[],
            Node::Meet(cs) | Node::Join(cs) => cs,
        }
    }

    pub fn is_gen(&self, t: TermId) -> bool {
        matches!(self.node(t), Node::Gen(_))
    }

    pub fn is_meet(&self, t: TermId) -> bool {
        matches!(self.node(t), Node::Meet(_))
    }

    pub fn is_join(&self, t: TermId) -> bool {
        matches!(self.node(t), Node::Join(_))
    }

    pub fn generator(&self, t: TermId) -> Option<GeneratorId> {
        match self.node(t) {
            Node::Gen(g) => Some(*g),
            _ => None,
        }
    }

    fn intern(&mut self, node: Node) -> TermId {
        if let Some(&id) = self.intern.get(&node) {
            return id;
        }
        let id = TermId(u32::try_from(self.nodes.len()).expect("arena overflow"));
        self.nodes.push(node.clone());
        self.intern.insert(node, id);
        id
    }

    /// Total node order: generators by index, then meets, then joins; within
    /// a kind, lexicographic on the child id sequence.
    pub fn cmp_nodes(&self, a: TermId, b: TermId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (na, nb) = (self.node(a), self.node(b));
        na.rank().cmp(&nb.rank()).then_with(|| match (na, nb) {
            (Node::Gen(x), Node::Gen(y)) => x.cmp(y),
            _ => self.children(a).cmp(self.children(b)),
        })
    }

    pub fn sort_terms(&self, ts: &mut Vec<TermId>) {
        ts.sort_by(|&a, &b| self.cmp_nodes(a, b));
        ts.dedup();
    }

    pub fn mk_gen(&mut self, g: GeneratorId) -> TermId {
        self.intern(Node::Gen(g))
    }

    /// Shorthand for `mk_gen` with a raw index; panics on 0.
    pub fn var(&mut self, index: u32) -> TermId {
        let g = GeneratorId::new(index).expect("generator index must be >= 1");
        self.mk_gen(g)
    }

    pub fn mk_meet(&mut self, parts: &[TermId]) -> Result<TermId, TermError> {
        if parts.is_empty() {
            return Err(TermError::EmptyParts);
        }
        Ok(self.build(parts, true))
    }

    pub fn mk_join(&mut self, parts: &[TermId]) -> Result<TermId, TermError> {
        if parts.is_empty() {
            return Err(TermError::EmptyParts);
        }
        Ok(self.build(parts, false))
    }

    pub fn meet2(&mut self, a: TermId, b: TermId) -> TermId {
        self.build(&[a, b], true)
    }

    pub fn join2(&mut self, a: TermId, b: TermId) -> TermId {
        self.build(&[a, b], false)
    }

    /// Flatten, deduplicate, sort and intern. `parts` must be nonempty.
    pub(crate) fn build(&mut self, parts: &[TermId], meet: bool) -> TermId {
        debug_assert!(!parts.is_empty());
        let mut flat = Vec::with_capacity(parts.len());
        for &p in parts {
            match self.node(p) {
                Node::Meet(cs) if meet => flat.extend_from_slice(cs),
                Node::Join(cs) if !meet => flat.extend_from_slice(cs),
                _ => flat.push(p),
            }
        }
        self.sort_terms(&mut flat);
        if flat.len() == 1 {
            return flat[0];
        }
        let cs = flat.into_boxed_slice();
        self.intern(if meet { Node::Meet(cs) } else { Node::Join(cs) })
    }

    pub fn vars(&self, t: TermId) -> BTreeSet<GeneratorId> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            if !seen.insert(s) {
                continue;
            }
            match self.node(s) {
                Node::Gen(g) => {
                    out.insert(*g);
                }
                Node::Meet(cs) | Node::Join(cs) => stack.extend(cs.iter().copied()),
            }
        }
        out
    }

    /// Homomorphic image of `t` under a generator assignment.
    pub fn substitute(
        &mut self,
        t: TermId,
        sub: &HashMap<GeneratorId, TermId>,
    ) -> Result<TermId, TermError> {
        let mut memo = HashMap::new();
        self.substitute_memo(t, sub, &mut memo)
    }

    fn substitute_memo(
        &mut self,
        t: TermId,
        sub: &HashMap<GeneratorId, TermId>,
        memo: &mut HashMap<TermId, TermId>,
    ) -> Result<TermId, TermError> {
        if let Some(&r) = memo.get(&t) {
            return Ok(r);
        }
        let r = match self.node(t).clone() {
            Node::Gen(g) => *sub.get(&g).ok_or(TermError::MissingGenerator(g))?,
            Node::Meet(cs) | Node::Join(cs) => {
                let meet = self.is_meet(t);
                let mut parts = Vec::with_capacity(cs.len());
                for &c in cs.iter() {
                    parts.push(self.substitute_memo(c, sub, memo)?);
                }
                self.build(&parts, meet)
            }
        };
        memo.insert(t, r);
        Ok(r)
    }

    /// Number of distinct nodes reachable from `t`.
    pub fn dag_size(&self, t: TermId) -> usize {
        self.shared_dag_size(&[t])
    }

    /// Number of distinct nodes reachable from any of `ts`.
    pub fn shared_dag_size(&self, ts: &[TermId]) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = ts.to_vec();
        while let Some(s) = stack.pop() {
            if seen.insert(s) {
                stack.extend(self.children(s).iter().copied());
            }
        }
        seen.len()
    }

    /// Number of symbols (generator occurrences plus operator nodes) of the
    /// fully expanded tree; saturates instead of overflowing.
    pub fn tree_size(&self, t: TermId) -> u64 {
        fn go(a: &TermArena, t: TermId, memo: &mut HashMap<TermId, u64>) -> u64 {
            if let Some(&n) = memo.get(&t) {
                return n;
            }
            let n = a
                .children(t)
                .iter()
                .fold(1u64, |acc, &c| acc.saturating_add(go(a, c, memo)));
            memo.insert(t, n);
            n
        }
        go(self, t, &mut HashMap::new())
    }

    pub fn print(&self, t: TermId, style: PrintStyle) -> String {
        let mut out = String::new();
        self.write_term(t, style, &mut out);
        out
    }

    fn write_term(&self, t: TermId, style: PrintStyle, out: &mut String) {
        match self.node(t) {
            Node::Gen(g) => out.push_str(&g.to_string()),
            Node::Join(cs) => {
                for (i, &c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push('+');
                    }
                    self.write_term(c, style, out);
                }
            }
            Node::Meet(cs) => {
                for (i, &c) in cs.iter().enumerate() {
                    if i > 0 && style == PrintStyle::Ascii {
                        out.push('*');
                    }
                    if self.is_join(c) {
                        out.push('(');
                        self.write_term(c, style, out);
                        out.push(')');
                    } else {
                        self.write_term(c, style, out);
                    }
                }
            }
        }
    }

    /// One line per reachable composite node, children before parents, for
    /// terms whose expanded tree is too large to print.
    pub fn print_dag(&self, t: TermId) -> Vec<String> {
        let mut order = Vec::new();
        let mut seen = std::collections::HashSet::new();
        self.post_order(t, &mut seen, &mut order);
        let name = |s: TermId| match self.node(s) {
            Node::Gen(g) => g.to_string(),
            _ => format!("t{}", s.0),
        };
        order
            .into_iter()
            .filter(|&s| !self.is_gen(s))
            .map(|s| {
                let op = if self.is_meet(s) { "*" } else { "+" };
                let body: Vec<String> = self.children(s).iter().map(|&c| name(c)).collect();
                format!("{} = {}", name(s), body.join(op))
            })
            .collect()
    }

    fn post_order(
        &self,
        t: TermId,
        seen: &mut std::collections::HashSet<TermId>,
        out: &mut Vec<TermId>,
    ) {
        if !seen.insert(t) {
            return;
        }
        for &c in self.children(t) {
            self.post_order(c, seen, out);
        }
        out.push(t);
    }
}
