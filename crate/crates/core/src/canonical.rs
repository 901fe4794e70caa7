//! Canonical forms.
//!
//! A meet `t = t_1 * ... * t_k` (k > 1) is canonical iff
//!
//! 1. each `t_i` is a generator or a join,
//! 2. each `t_i` is canonical,
//! 3. `t_i <= t_j` fails for `i != j`,
//! 4. no joinand `t_ij` of a join meetand `t_i` satisfies `t_ij >= t`.
//!
//! Joins are the dual. Canonical forms are unique, so in an arena two
//! canonical terms are equivalent exactly when they are the same node.

use crate::parse::RawTerm;
use crate::term::{Node, TermArena, TermId};

/// A term certified to be in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalTerm {
    term: TermId,
}

impl CanonicalTerm {
    pub fn term(self) -> TermId {
        self.term
    }
}

impl TermArena {
    pub fn canonicalize(&mut self, t: TermId) -> CanonicalTerm {
        CanonicalTerm {
            term: self.canonical_form(t),
        }
    }

    /// Canonical form of `t` as a plain id.
    pub fn canonical_form(&mut self, t: TermId) -> TermId {
        if let Some(&c) = self.canon_cache.get(&t) {
            return c;
        }
        let c = match self.node(t) {
            Node::Gen(_) => t,
            Node::Meet(_) | Node::Join(_) => {
                let meet = self.is_meet(t);
                let kids = self.children(t).to_vec();
                let kids: Vec<TermId> = kids.into_iter().map(|k| self.canonical_form(k)).collect();
                self.reduce(kids, meet)
            }
        };
        self.canon_cache.insert(t, c);
        self.canon_cache.insert(c, c);
        self.canonical_flags.insert(c, true);
        c
    }

    /// Combine canonical parts into the canonical form of their meet (or
    /// join). Each replacement restarts the scan from flattening.
    fn reduce(&mut self, mut parts: Vec<TermId>, meet: bool) -> TermId {
        loop {
            // flatten same-kind parts; their children are already canonical
            let mut items = Vec::with_capacity(parts.len());
            for &p in &parts {
                if self.is_meet(p) == meet && !self.is_gen(p) {
                    items.extend_from_slice(self.children(p));
                } else {
                    items.push(p);
                }
            }
            self.sort_terms(&mut items);

            // keep only the minimal meetands (maximal joinands)
            let mut kept = Vec::with_capacity(items.len());
            for i in 0..items.len() {
                let redundant = (0..items.len()).any(|j| {
                    j != i
                        && if meet {
                            self.leq(items[j], items[i])
                        } else {
                            self.leq(items[i], items[j])
                        }
                });
                if !redundant {
                    kept.push(items[i]);
                }
            }
            if kept.len() == 1 {
                return kept[0];
            }
            let current = self.build(&kept, meet);

            // replacement rule: a meetand's joinand above the whole meet
            // (dually a joinand's meetand below the whole join) replaces it
            let mut replacement = None;
            'scan: for (pos, &item) in kept.iter().enumerate() {
                let opposite = if meet {
                    self.is_join(item)
                } else {
                    self.is_meet(item)
                };
                if !opposite {
                    continue;
                }
                for k in 0..self.children(item).len() {
                    let sub = self.children(item)[k];
                    let fires = if meet {
                        self.leq(current, sub)
                    } else {
                        self.leq(sub, current)
                    };
                    if fires {
                        replacement = Some((pos, sub));
                        break 'scan;
                    }
                }
            }
            match replacement {
                Some((pos, sub)) => {
                    kept[pos] = sub;
                    parts = kept;
                }
                None => return current,
            }
        }
    }

    pub fn is_canonical(&mut self, t: TermId) -> bool {
        if let Some(&b) = self.canonical_flags.get(&t) {
            return b;
        }
        let ok = match self.node(t) {
            Node::Gen(_) => true,
            Node::Meet(_) | Node::Join(_) => {
                let meet = self.is_meet(t);
                let kids = self.children(t).to_vec();
                self.check_conditions(t, &kids, meet) && kids.iter().all(|&k| self.is_canonical(k))
            }
        };
        self.canonical_flags.insert(t, ok);
        ok
    }

    /// Conditions (3) and (4) for the node `whole` with the given children.
    /// Condition (1) is the caller's job.
    fn check_conditions(&mut self, whole: TermId, kids: &[TermId], meet: bool) -> bool {
        for i in 0..kids.len() {
            for j in 0..kids.len() {
                if i != j && self.leq(kids[i], kids[j]) {
                    return false;
                }
            }
        }
        for &k in kids {
            let opposite = if meet {
                self.is_join(k)
            } else {
                self.is_meet(k)
            };
            if !opposite {
                continue;
            }
            for n in 0..self.children(k).len() {
                let sub = self.children(k)[n];
                let bad = if meet {
                    self.leq(whole, sub)
                } else {
                    self.leq(sub, whole)
                };
                if bad {
                    return false;
                }
            }
        }
        true
    }

    /// Canonicity of a term exactly as written, bypassing the constructor's
    /// flattening and duplicate removal.
    pub fn is_canonical_raw(&mut self, raw: &RawTerm) -> bool {
        match raw {
            RawTerm::Gen(_) => true,
            RawTerm::Meet(parts) | RawTerm::Join(parts) => {
                let meet = matches!(raw, RawTerm::Meet(_));
                if parts.len() < 2 {
                    return false;
                }
                // (1): no meet directly under a meet, no join under a join
                let same_kind = parts.iter().any(|p| match p {
                    RawTerm::Meet(_) => meet,
                    RawTerm::Join(_) => !meet,
                    RawTerm::Gen(_) => false,
                });
                if same_kind {
                    return false;
                }
                if !parts.iter().all(|p| self.is_canonical_raw(p)) {
                    return false;
                }
                let kids: Vec<TermId> = parts.iter().map(|p| self.intern_raw(p)).collect();
                let whole = self.intern_raw(raw);
                self.check_conditions(whole, &kids, meet)
            }
        }
    }

    /// Joinands of the canonical form of `v` when it is a proper join, else
    /// empty.
    pub fn canonical_joinands(&mut self, v: TermId) -> Vec<TermId> {
        let c = self.canonical_form(v);
        if self.is_join(c) {
            self.children(c).to_vec()
        } else {
            Vec::new()
        }
    }

    /// Generators and proper meets.
    pub fn is_join_irreducible(&mut self, t: TermId) -> bool {
        let c = self.canonical_form(t);
        !self.is_join(c)
    }

    pub fn is_meet_irreducible(&mut self, t: TermId) -> bool {
        let c = self.canonical_form(t);
        !self.is_meet(c)
    }

    pub fn clear_canonical_cache(&mut self) {
        self.canon_cache.clear();
        self.canonical_flags.clear();
    }
}
