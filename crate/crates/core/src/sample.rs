//! Seeded random terms, structures and sentences for property checks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bipartite::{AESentence, BipartiteStructure, Literal, Var};
use crate::term::{TermArena, TermId};

/// A generator for reproducible samples; the same seed gives the same stream.
pub struct Sampler {
    rng: StdRng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    /// A term over `x1..x{gens}` of depth at most `depth` (a generator has
    /// depth 0). Operations have two or three arguments.
    pub fn term(&mut self, arena: &mut TermArena, gens: u32, depth: u32) -> TermId {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return arena.var(self.rng.gen_range(1..=gens));
        }
        let arity = self.rng.gen_range(2..=3);
        let parts: Vec<TermId> = (0..arity)
            .map(|_| self.term(arena, gens, depth - 1))
            .collect();
        if self.rng.gen_bool(0.5) {
            arena.build(&parts, true)
        } else {
            arena.build(&parts, false)
        }
    }

    /// A random bipartite structure with 1 to `max_side` elements per sort in
    /// which every down element has at least one neighbor.
    pub fn structure(&mut self, max_side: usize) -> BipartiteStructure {
        let n_up = self.rng.gen_range(1..=max_side);
        let n_down = self.rng.gen_range(1..=max_side);
        let mut edges = Vec::new();
        for b in 0..n_down {
            let forced = self.rng.gen_range(0..n_up);
            for a in 0..n_up {
                if a == forced || self.rng.gen_bool(0.4) {
                    edges.push((a, b));
                }
            }
        }
        let up = (1..=n_up).map(|i| format!("a{i}")).collect();
        let down = (1..=n_down).map(|i| format!("b{i}")).collect();
        BipartiteStructure::new(up, down, edges).expect("generated names are distinct")
    }

    /// A random sentence with 1 or 2 variables per block and 1 to 3
    /// disjuncts of 1 to 3 literals.
    pub fn sentence(&mut self) -> AESentence {
        let exists = self.rng.gen_range(1..=2);
        let forall = self.rng.gen_range(1..=2);
        let disjuncts = self.rng.gen_range(1..=3);
        let dnf = (0..disjuncts)
            .map(|_| {
                let len = self.rng.gen_range(1..=3);
                (0..len).map(|_| self.literal(exists, forall)).collect()
            })
            .collect();
        AESentence::new(exists, forall, dnf).expect("variables are declared")
    }

    pub fn literal(&mut self, exists: usize, forall: usize) -> Literal {
        let lhs = self.var(exists, forall);
        let rhs = self.var(exists, forall);
        if self.rng.gen_bool(0.5) {
            Literal::le(lhs, rhs)
        } else {
            Literal::nle(lhs, rhs)
        }
    }

    fn var(&mut self, exists: usize, forall: usize) -> Var {
        let i = self.rng.gen_range(0..exists + forall);
        if i < exists {
            Var::X(i + 1)
        } else {
            Var::Y(i - exists + 1)
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let (mut a, mut b) = (TermArena::new(), TermArena::new());
        let (mut s, mut t) = (Sampler::new(7), Sampler::new(7));
        for _ in 0..50 {
            let x = s.term(&mut a, 4, 5);
            let y = t.term(&mut b, 4, 5);
            assert_eq!(
                a.print(x, crate::term::PrintStyle::Ascii),
                b.print(y, crate::term::PrintStyle::Ascii)
            );
        }
        assert_eq!(s.structure(4), t.structure(4));
        assert_eq!(s.sentence(), t.sentence());
    }

    #[test]
    fn structures_have_no_isolated_down_elements() {
        let mut s = Sampler::new(1);
        for _ in 0..100 {
            let q = s.structure(5);
            assert!((0..q.down().len()).all(|b| q.down_neighbors(b) > 0));
        }
    }
}
