//! The order of the free lattice, decided by Whitman's recursion.

use crate::term::{Node, OrderMemo, TermArena, TermId};

impl TermArena {
    /// Decide `s <= t` in the free lattice.
    ///
    /// Results are memoized on id pairs for the lifetime of the arena, which
    /// keeps the recursion polynomial on heavily shared DAGs.
    pub fn leq(&mut self, s: TermId, t: TermId) -> bool {
        if s == t {
            return true;
        }
        match self.order_cache.get(&(s, t)) {
            Some(OrderMemo::Done(b)) => return *b,
            Some(OrderMemo::InProgress) => {
                unreachable!("cyclic order query on {s:?} <= {t:?}")
            }
            None => {}
        }
        self.order_cache.insert((s, t), OrderMemo::InProgress);
        let result = self.leq_step(s, t);
        self.order_cache.insert((s, t), OrderMemo::Done(result));
        result
    }

    fn leq_step(&mut self, s: TermId, t: TermId) -> bool {
        let (s_join, t_meet) = (self.is_join(s), self.is_meet(t));
        if s_join {
            return (0..self.children(s).len()).all(|i| {
                let c = self.children(s)[i];
                self.leq(c, t)
            });
        }
        if t_meet {
            return (0..self.children(t).len()).all(|j| {
                let c = self.children(t)[j];
                self.leq(s, c)
            });
        }
        match (self.node(s), self.node(t)) {
            (Node::Gen(a), Node::Gen(b)) => a == b,
            // s is a meet or generator, t a join or generator, not both
            // generators: Whitman's condition.
            _ => {
                let below_some_meetand = (0..self.children(s).len()).any(|i| {
                    let c = self.children(s)[i];
                    self.leq(c, t)
                });
                below_some_meetand
                    || (0..self.children(t).len()).any(|j| {
                        let c = self.children(t)[j];
                        self.leq(s, c)
                    })
            }
        }
    }

    pub fn equiv(&mut self, s: TermId, t: TermId) -> bool {
        self.leq(s, t) && self.leq(t, s)
    }

    /// Strict order: `s <= t` and not `t <= s`.
    pub fn lt(&mut self, s: TermId, t: TermId) -> bool {
        self.leq(s, t) && !self.leq(t, s)
    }

    /// Whether no member lies below the join, or above the meet, of any
    /// nonempty subset of the others.
    ///
    /// Only the full complement is tested: for `Y` a subset of the others,
    /// `join(Y) <= join(others)` and `meet(others) <= meet(Y)`, so
    /// `x <= join(Y)` implies `x <= join(others)` and `x >= meet(Y)` implies
    /// `x >= meet(others)`. That turns `2^n` subset tests into `n`.
    pub fn is_independent(&mut self, xs: &[TermId]) -> bool {
        for (i, &x) in xs.iter().enumerate() {
            let others: Vec<TermId> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &y)| y)
                .collect();
            if others.is_empty() {
                continue;
            }
            let join = self.build(&others, false);
            let meet = self.build(&others, true);
            if self.leq(x, join) || self.leq(meet, x) {
                return false;
            }
        }
        true
    }

    /// Drop the order memo table.
    pub fn clear_order_cache(&mut self) {
        self.order_cache.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_order() {
        let mut a = TermArena::new();
        let s = a.parse("x1*x2").unwrap();
        let x1 = a.var(1);
        assert!(a.leq(s, x1));
        assert!(!a.leq(x1, s));
    }

    // Hand run: x1 <= (x1+x2) and x1 <= (x1+x3) gives x1 <= the meet; the
    // converse needs (x1+x2)*(x1+x3) <= x1, a meet against a generator, so
    // some meetand x1+xk <= x1, which fails because xk <= x1 fails.
    #[test]
    fn distributive_failure_witness() {
        let mut a = TermArena::new();
        let x1 = a.var(1);
        let t = a.parse("(x1+x2)*(x1+x3)").unwrap();
        assert!(a.leq(x1, t));
        assert!(!a.leq(t, x1));
    }

    #[test]
    fn whitman_condition_case() {
        let mut a = TermArena::new();
        // x1*x2 <= x1+x3 via the meetand x1.
        let s = a.parse("x1*x2").unwrap();
        let t = a.parse("x1+x3").unwrap();
        assert!(a.leq(s, t));
        // (x1+x2)*(x1+x3) <= x1 + x2*x3 fails in a free lattice.
        let s = a.parse("(x1+x2)*(x1+x3)").unwrap();
        let t = a.parse("x1+x2*x3").unwrap();
        assert!(!a.leq(s, t));
        assert!(a.leq(t, s));
    }

    #[test]
    fn equivalence() {
        let mut a = TermArena::new();
        let s = a.parse("x1*(x2+x3)").unwrap();
        let t = a.parse("x1*(x3+x2)").unwrap();
        assert!(a.equiv(s, t));
        let s = a.parse("(x1+x2)+x3").unwrap();
        let t = a.parse("x1+(x2+x3)").unwrap();
        assert_eq!(s, t);
        let (x1, x2) = (a.var(1), a.var(2));
        assert!(!a.equiv(x1, x2));
        // Absorption is an equivalence between distinct nodes.
        let s = a.parse("x1*(x1+x2)").unwrap();
        assert!(a.equiv(s, x1));
    }

    #[test]
    fn independence() {
        let mut a = TermArena::new();
        let xs: Vec<TermId> = (1..=3).map(|i| a.var(i)).collect();
        assert!(a.is_independent(&xs));
        let x1 = a.var(1);
        let j = a.parse("x1+x2").unwrap();
        assert!(!a.is_independent(&[x1, j]));
        assert!(a.is_independent(&[x1]));
    }

    #[test]
    fn cache_is_transparent() {
        let mut a = TermArena::new();
        let s = a.parse("(x1+x2*x3)*(x2+x1*x3)").unwrap();
        let t = a.parse("x1*(x2+x3)+x2*(x1+x3)").unwrap();
        let first = (a.leq(s, t), a.leq(t, s));
        a.clear_order_cache();
        let second = (a.leq(s, t), a.leq(t, s));
        assert_eq!(first, second);
    }
}
