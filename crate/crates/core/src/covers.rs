//! Join covers, refinement, the `E` relation and the semantic `Psi` check.
//!
//! `E` is only computed for canonical proper meets all of whose meetands are
//! proper joins. For such `t = prod_i sum_j t_ij` the doubly minimal join
//! covers are exactly the joinand sets `{t_i1, ..., t_im_i}`, so `t E u`
//! holds exactly for the `t_ij`. Anything else is reported as
//! [`CoverError::UnsupportedShape`] rather than guessed.

use serde_json::{json, Value};
use thiserror::Error;

use crate::term::{PrintStyle, TermArena, TermId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
}

/// `base <= join(elements)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinCover {
    pub base: TermId,
    pub elements: Vec<TermId>,
}

impl JoinCover {
    pub fn covers(&self, arena: &mut TermArena) -> bool {
        if self.elements.is_empty() {
            return false;
        }
        let j = arena.build(&self.elements, false);
        arena.leq(self.base, j)
    }

    pub fn is_nontrivial(&self, arena: &mut TermArena) -> bool {
        self.elements.iter().all(|&a| !arena.leq(self.base, a))
    }
}

impl TermArena {
    /// `A << B`: every member of `A` is below some member of `B`.
    pub fn refines(&mut self, a: &[TermId], b: &[TermId]) -> bool {
        a.iter().all(|&x| b.iter().any(|&y| self.leq(x, y)))
    }

    pub fn doubly_minimal_join_covers(&mut self, t: TermId) -> Result<Vec<JoinCover>, CoverError> {
        let c = self.canonical_form(t);
        if self.is_gen(c) {
            return Err(CoverError::UnsupportedShape(format!(
                "{} is a generator",
                self.print(c, PrintStyle::Ascii)
            )));
        }
        if self.is_join(c) {
            return Err(CoverError::UnsupportedShape(format!(
                "{} is a proper join, not join irreducible",
                self.print(c, PrintStyle::Ascii)
            )));
        }
        let meetands = self.children(c).to_vec();
        if let Some(&g) = meetands.iter().find(|&&m| !self.is_join(m)) {
            return Err(CoverError::UnsupportedShape(format!(
                "meetand {} of {} is not a proper join",
                self.print(g, PrintStyle::Ascii),
                self.print(c, PrintStyle::Ascii)
            )));
        }
        Ok(meetands
            .into_iter()
            .map(|m| JoinCover {
                base: c,
                elements: self.children(m).to_vec(),
            })
            .collect())
    }

    /// `{ u : t E u }`, each element in canonical form, sorted by node order.
    pub fn e_set(&mut self, t: TermId) -> Result<Vec<TermId>, CoverError> {
        let covers = self.doubly_minimal_join_covers(t)?;
        let mut out: Vec<TermId> = covers.into_iter().flat_map(|c| c.elements).collect();
        self.sort_terms(&mut out);
        Ok(out)
    }

    pub fn psi_check(&mut self, w: TermId) -> PsiReport {
        let mut report = PsiReport {
            outcome: false,
            canonical: self.canonical_form(w),
            conditions: [None; 7],
            u_set: Vec::new(),
            maximal: Vec::new(),
            minimal: Vec::new(),
            failure: None,
        };
        let c = report.canonical;

        // (a) proper meet
        let a_ok = self.is_meet(c);
        report.conditions[0] = Some(a_ok);
        if !a_ok {
            report.failure = Some(PsiFailure::new(PsiCondition::A, vec![c]));
            return report;
        }

        // (b) below no generator. The doubly prime elements of a free lattice
        // are the generators, and the recursion for w <= x only succeeds when
        // x occurs in w, so vars(w) is enough.
        let gens: Vec<TermId> = self.vars(c).into_iter().map(|g| self.mk_gen(g)).collect();
        let below: Vec<TermId> = gens.into_iter().filter(|&x| self.leq(c, x)).collect();
        let b_ok = below.is_empty();
        report.conditions[1] = Some(b_ok);
        if !b_ok {
            report.failure = Some(PsiFailure::new(PsiCondition::B, below));
            return report;
        }

        // A generator meetand x would give w <= x, so every meetand is a
        // proper join here and the E-set is computable.
        let u = self
            .e_set(c)
            .expect("canonical meet below no generator has only join meetands");
        let n = u.len();
        let mut le = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                le[i][j] = i == j || self.leq(u[i], u[j]);
            }
        }
        let lt = |i: usize, j: usize| i != j && le[i][j];
        let maximal: Vec<usize> = (0..n).filter(|&i| !(0..n).any(|j| lt(i, j))).collect();
        let minimal: Vec<usize> = (0..n).filter(|&i| !(0..n).any(|j| lt(j, i))).collect();
        report.u_set = u.clone();
        report.maximal = maximal.iter().map(|&i| u[i]).collect();
        report.minimal = minimal.iter().map(|&i| u[i]).collect();

        // (c) no three-element chain
        let chain = (0..n).find_map(|a| {
            (0..n).find_map(|b| {
                if !lt(b, a) {
                    return None;
                }
                (0..n).find(|&c| lt(c, b)).map(|c| vec![u[a], u[b], u[c]])
            })
        });
        report.record(PsiCondition::C, chain.is_none(), chain.unwrap_or_default());

        // (d), (e) at least three maximal / minimal elements
        let d_ok = maximal.len() >= 3;
        report.record(PsiCondition::D, d_ok, report.maximal.clone());
        let e_ok = minimal.len() >= 3;
        report.record(PsiCondition::E, e_ok, report.minimal.clone());

        // (f) every maximal is above two distinct minimals and not above some
        // minimal; (g) dually
        let f_bad: Vec<TermId> = maximal
            .iter()
            .filter(|&&m| {
                let above = minimal.iter().filter(|&&s| le[s][m]).count();
                above < 2 || above == minimal.len()
            })
            .map(|&m| u[m])
            .collect();
        report.record(PsiCondition::F, f_bad.is_empty(), f_bad);
        let g_bad: Vec<TermId> = minimal
            .iter()
            .filter(|&&m| {
                let below = maximal.iter().filter(|&&s| le[m][s]).count();
                below < 2 || below == maximal.len()
            })
            .map(|&m| u[m])
            .collect();
        report.record(PsiCondition::G, g_bad.is_empty(), g_bad);

        report.outcome = report.conditions.iter().all(|c| *c == Some(true));
        report
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiCondition {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
    E = 4,
    F = 5,
    G = 6,
}

impl PsiCondition {
    pub const ALL: [PsiCondition; 7] = [
        PsiCondition::A,
        PsiCondition::B,
        PsiCondition::C,
        PsiCondition::D,
        PsiCondition::E,
        PsiCondition::F,
        PsiCondition::G,
    ];

    pub fn label(self) -> &'static str {
        ["a", "b", "c", "d", "e", "f", "g"][self as usize]
    }

    pub fn describe(self) -> &'static str {
        match self {
            PsiCondition::A => "w is a proper meet",
            PsiCondition::B => "w is below no generator",
            PsiCondition::C => "U has no three-element chain",
            PsiCondition::D => "U has at least three maximal elements",
            PsiCondition::E => "U has at least three minimal elements",
            PsiCondition::F => "each maximal is above two minimals and misses one",
            PsiCondition::G => "each minimal is below two maximals and misses one",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiFailure {
    pub condition: PsiCondition,
    pub witnesses: Vec<TermId>,
}

impl PsiFailure {
    fn new(condition: PsiCondition, witnesses: Vec<TermId>) -> Self {
        PsiFailure {
            condition,
            witnesses,
        }
    }
}

/// Outcome of evaluating `Psi(w)` on a concrete element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiReport {
    pub outcome: bool,
    /// Canonical form of the checked element.
    pub canonical: TermId,
    /// Conditions (a) through (g); `None` when not reached.
    pub conditions: [Option<bool>; 7],
    /// `U = { u : w E u }`, populated once (a) and (b) pass.
    pub u_set: Vec<TermId>,
    pub maximal: Vec<TermId>,
    pub minimal: Vec<TermId>,
    /// The first failed condition.
    pub failure: Option<PsiFailure>,
}

impl PsiReport {
    fn record(&mut self, cond: PsiCondition, ok: bool, witnesses: Vec<TermId>) {
        self.conditions[cond as usize] = Some(ok);
        if !ok && self.failure.is_none() {
            self.failure = Some(PsiFailure::new(cond, witnesses));
        }
    }

    pub fn condition(&self, c: PsiCondition) -> Option<bool> {
        self.conditions[c as usize]
    }

    pub fn failed_at(&self) -> Option<PsiCondition> {
        self.failure.as_ref().map(|f| f.condition)
    }

    pub fn to_json(&self, arena: &TermArena) -> Value {
        let show = |ts: &[TermId]| -> Vec<String> {
            ts.iter()
                .map(|&t| arena.print(t, PrintStyle::Ascii))
                .collect()
        };
        let conditions: serde_json::Map<String, Value> = PsiCondition::ALL
            .iter()
            .map(|&c| (c.label().to_string(), json!(self.condition(c))))
            .collect();
        json!({
            "lemma": "3.3",
            "outcome": self.outcome,
            "conditions": conditions,
            "u_set": show(&self.u_set),
            "maximal": show(&self.maximal),
            "minimal": show(&self.minimal),
            "failure": self.failure.as_ref().map(|f| json!({
                "condition": f.condition.label(),
                "description": f.condition.describe(),
                "witnesses": show(&f.witnesses),
            })),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(a: &mut TermArena, items: &[&str]) -> Vec<TermId> {
        let mut v: Vec<TermId> = items.iter().map(|s| a.parse(s).unwrap()).collect();
        a.sort_terms(&mut v);
        v
    }

    #[test]
    fn refinement() {
        let mut a = TermArena::new();
        let s = set(&mut a, &["x1*x2"]);
        let t = set(&mut a, &["x1"]);
        assert!(a.refines(&s, &t));
        assert!(a.refines(&s, &s));
        let x2 = set(&mut a, &["x2"]);
        assert!(!a.refines(&t, &x2));
    }

    #[test]
    fn covers_of_simple_meet() {
        let mut a = TermArena::new();
        let t = a.parse("(x1+x2)*(x1+x3)").unwrap();
        let covers = a.doubly_minimal_join_covers(t).unwrap();
        let sets: Vec<Vec<TermId>> = covers.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(
            sets,
            vec![set(&mut a, &["x1", "x2"]), set(&mut a, &["x1", "x3"])]
        );
        for c in &covers {
            assert!(c.covers(&mut a));
            assert!(c.is_nontrivial(&mut a));
        }
        assert_eq!(a.e_set(t).unwrap(), set(&mut a, &["x1", "x2", "x3"]));
    }

    #[test]
    fn unsupported_shapes() {
        let mut a = TermArena::new();
        let x1 = a.var(1);
        assert!(matches!(
            a.doubly_minimal_join_covers(x1),
            Err(CoverError::UnsupportedShape(_))
        ));
        let j = a.parse("x1+x2").unwrap();
        assert!(a.e_set(j).is_err());
        let m = a.parse("x1*(x2+x3)").unwrap();
        let err = a.e_set(m).unwrap_err();
        assert!(err.to_string().contains("meetand x1"));
    }

    #[test]
    fn psi_on_generator_fails_at_a() {
        let mut a = TermArena::new();
        let x1 = a.var(1);
        let r = a.psi_check(x1);
        assert!(!r.outcome);
        assert_eq!(r.failed_at(), Some(PsiCondition::A));
        assert!(r.u_set.is_empty());
    }

    #[test]
    fn generator_meetand_fails_b() {
        let mut a = TermArena::new();
        let w = a.parse("x1*(x2+x3)*(x3+x4)").unwrap();
        let x1 = a.var(1);
        assert!(a.leq(w, x1));
        let r = a.psi_check(w);
        assert_eq!(r.failed_at(), Some(PsiCondition::B));
        assert_eq!(r.failure.unwrap().witnesses, vec![x1]);
        assert!(r.u_set.is_empty());
    }

    // Brute force for the hexagon word: U = {x1, x2, x3, x2x3x4, x1x3x5,
    // x1x2x6}; the three generators are maximal, the meets minimal, each
    // meet below exactly the two generators it contains.
    #[test]
    fn psi_on_hexagon_word() {
        let mut a = TermArena::new();
        let w = a
            .parse("(x1+x2*x3*x4)*(x2+x1*x3*x5)*(x3+x1*x2*x6)")
            .unwrap();
        let r = a.psi_check(w);
        assert!(r.outcome, "{:?}", r);
        assert_eq!(r.u_set.len(), 6);
        assert_eq!(r.maximal, set(&mut a, &["x1", "x2", "x3"]));
        assert_eq!(
            r.minimal,
            set(&mut a, &["x2*x3*x4", "x1*x3*x5", "x1*x2*x6"])
        );
        let json = r.to_json(&a);
        assert_eq!(json["conditions"]["f"], json!(true));
    }
}
