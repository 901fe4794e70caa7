//! Embedding finite bipartite posets into free lattices and checking, on
//! concrete instances, that the embedded poset is recovered as an `E`-set.
//!
//! Elements of a structure are numbered `q_1, ..., q_m` in declaration order,
//! up sort first. `xi(q_i)` is the meet of the generators `x_j` with
//! `q_j >= q_i`, and
//!
//! ```text
//! w_Q = prod_{a maximal} ( xi(a) + sum_{b minimal, b !<= a} xi(b) ).
//! ```

pub mod formula;
pub mod phi_star;

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::bipartite::{
    eval_ae_sentence, AESentence, BipartiteError, BipartiteStructure, Evaluation,
};
use crate::covers::PsiReport;
use crate::term::{PrintStyle, TermArena, TermId};
use crate::whitman_embed::{ChainError, GeneratorChain, DEFAULT_VERIFY_BOUND};

pub use phi_star::{translate_phi_star, PhiStar};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("maximal element {0} is above every minimal element, so its joinand sum is empty")]
    EmptyJoin(String),
    #[error("structure is not nice: {0}")]
    NotNice(String),
    #[error(transparent)]
    Structure(#[from] BipartiteError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Work in `F_m`, `m = |Q|`.
    Direct,
    /// Push everything into `F_3` along Whitman's embedding.
    F3,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::F3 => "f3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// All lattice-side checks pass and `phi` fails on `Q`, so `phi*` fails at
    /// the constructed word.
    PhiStarFailsAtW,
    /// `phi` holds on `Q`; this instance refutes nothing.
    PhiHoldsOnInstance,
    /// `phi` fails on `Q` but some lattice-side check did not pass.
    Inconclusive,
}

impl Conclusion {
    pub fn label(self) -> &'static str {
        match self {
            Conclusion::PhiStarFailsAtW => "phi_star_fails_at_w",
            Conclusion::PhiHoldsOnInstance => "phi_holds_on_instance",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

/// `xi(q)` for every element, in element index order.
pub fn xi_embed(arena: &mut TermArena, q: &BipartiteStructure) -> Vec<TermId> {
    let m = q.len();
    (0..m)
        .map(|i| {
            let above: Vec<TermId> = (0..m)
                .filter(|&j| q.leq(i, j))
                .map(|j| arena.var(j as u32 + 1))
                .collect();
            arena.build(&above, true)
        })
        .collect()
}

/// `w_Q` from given element images (`xi`, or `zeta . xi` in `F_3`).
fn word_from_images(
    arena: &mut TermArena,
    q: &BipartiteStructure,
    images: &[TermId],
) -> Result<TermId, ReductionError> {
    let n_up = q.up().len();
    let mut meetands = Vec::with_capacity(n_up);
    for a in 0..n_up {
        let mut joinands = vec![images[a]];
        joinands.extend(
            (0..q.down().len())
                .filter(|&b| !q.is_edge(a, b))
                .map(|b| images[n_up + b]),
        );
        if joinands.len() == 1 {
            return Err(ReductionError::EmptyJoin(q.up()[a].clone()));
        }
        meetands.push(arena.build(&joinands, false));
    }
    if meetands.is_empty() {
        return Err(ReductionError::EmptyJoin("<no maximal elements>".into()));
    }
    Ok(arena.build(&meetands, true))
}

pub fn build_wq(arena: &mut TermArena, q: &BipartiteStructure) -> Result<TermId, ReductionError> {
    let images = xi_embed(arena, q);
    word_from_images(arena, q, &images)
}

/// Evidence for the three items of the `w_Q` lemma on one instance, plus the
/// optional `phi` comparison.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub mode: Mode,
    /// The word as built: `w_Q` in direct mode, `zeta(w_Q)` in f3 mode.
    pub word: TermId,
    /// Its canonical form.
    pub wq: TermId,
    /// Item (1): the word is in canonical form (in f3 mode, after each
    /// `zeta . xi(q)` is replaced by its canonical form).
    pub canonical_ok: bool,
    /// Canonical images of the elements of `Q`, in element index order.
    pub images: Vec<TermId>,
    /// `{ u : wq E u }`, or the reason it could not be computed.
    pub eset_terms: Result<Vec<TermId>, String>,
    /// Item (2), elementwise: the `E`-set is exactly the image set.
    pub eset_ok: bool,
    /// Item (2), order: the recovered poset is isomorphic to `Q` via the
    /// image map, and the image map is an order embedding.
    pub iso_ok: bool,
    /// Item (3).
    pub psi: PsiReport,
    pub phi: Option<PhiCheck>,
    pub conclusion: Option<Conclusion>,
    recovered: Option<BipartiteStructure>,
}

#[derive(Clone, Debug)]
pub struct PhiCheck {
    pub on_q: Evaluation,
    pub on_recovered: Evaluation,
    /// Every existential tuple gets the same verdict on both sides.
    pub agree: bool,
}

impl ReductionReport {
    pub fn items_ok(&self) -> bool {
        self.canonical_ok && self.eset_ok && self.iso_ok && self.psi.outcome
    }

    pub fn recovered(&self) -> Option<&BipartiteStructure> {
        self.recovered.as_ref()
    }

    pub fn to_json(&self, arena: &TermArena, q: &BipartiteStructure) -> Value {
        let show = |t: TermId| term_json(arena, t);
        let (item_lemma, psi_lemma) = match self.mode {
            Mode::Direct => ("4.3", "4.3(3)"),
            Mode::F3 => ("5.5", "5.5(3)"),
        };
        let images: serde_json::Map<String, Value> = q
            .elements()
            .zip(&self.images)
            .map(|(name, &t)| (name.to_string(), show(t)))
            .collect();
        let mut doc = json!({
            "mode": self.mode.label(),
            "wq": show(self.wq),
            "checks": [
                { "lemma": format!("{item_lemma}(1)"), "item": "canonical form", "ok": self.canonical_ok },
                { "lemma": format!("{item_lemma}(2)"), "item": "E-set equals image set", "ok": self.eset_ok },
                { "lemma": format!("{item_lemma}(2)"), "item": "E-set order isomorphic to Q", "ok": self.iso_ok },
                { "lemma": psi_lemma, "item": "Psi holds", "ok": self.psi.outcome },
            ],
            "images": images,
            "eset_terms": match &self.eset_terms {
                Ok(ts) => json!(ts.iter().map(|&t| show(t)).collect::<Vec<_>>()),
                Err(e) => json!({ "error": e }),
            },
            "psi": self.psi.to_json(arena),
        });
        if let Some(phi) = &self.phi {
            doc["phi_eval"] = json!({
                "lemma": "4.4(2)",
                "on_q": phi.on_q.to_json(q),
                "on_recovered_agrees": phi.agree,
            });
        }
        if let Some(c) = self.conclusion {
            doc["conclusion"] = json!(c.label());
        }
        doc
    }
}

/// Terms whose expanded form would be unreasonably long are shown as a DAG.
pub const MAX_PRINTED_TREE: u64 = 4096;

pub fn term_json(arena: &TermArena, t: TermId) -> Value {
    if arena.tree_size(t) <= MAX_PRINTED_TREE {
        json!(arena.print(t, PrintStyle::Ascii))
    } else {
        json!({
            "root": format!("t{}", t.raw()),
            "tree_size": arena.tree_size(t),
            "dag": arena.print_dag(t),
        })
    }
}

/// Check the `w_Q` lemma items on `q`. In f3 mode a chain of `|Q|` Whitman
/// generators is built (or extended) in the same arena.
pub fn verify_lemma_wq(
    arena: &mut TermArena,
    q: &BipartiteStructure,
    mode: Mode,
) -> Result<ReductionReport, ReductionError> {
    let xi = xi_embed(arena, q);
    let word = word_from_images(arena, q, &xi)?;

    let (word, images, canonical_ok) = match mode {
        Mode::Direct => {
            let images: Vec<TermId> = xi.iter().map(|&t| arena.canonical_form(t)).collect();
            let ok = arena.is_canonical(word);
            (word, images, ok)
        }
        Mode::F3 => {
            let chain = GeneratorChain::build(arena, q.len(), DEFAULT_VERIFY_BOUND)?;
            let zw = chain.zeta(arena, word)?;
            let mut images = Vec::with_capacity(xi.len());
            for &t in &xi {
                let z = chain.zeta(arena, t)?;
                images.push(arena.canonical_form(z));
            }
            // zeta(xi(b)) is a proper meet of z's but not necessarily written
            // canonically; rewrite each joinand into canonical form and
            // certify the resulting meet of joins.
            let rebuilt = word_from_images(arena, q, &images)?;
            let ok = arena.is_canonical(rebuilt) && arena.canonical_form(zw) == rebuilt;
            (zw, images, ok)
        }
    };
    let wq = arena.canonical_form(word);

    let eset_terms = arena.e_set(wq).map_err(|e| e.to_string());
    let mut sorted_images = images.clone();
    arena.sort_terms(&mut sorted_images);
    let distinct = sorted_images.len() == images.len();
    let eset_ok = distinct && eset_terms.as_ref().is_ok_and(|es| *es == sorted_images);

    let mut iso_ok = false;
    let mut recovered = None;
    if let Ok(es) = &eset_terms {
        let embeds = (0..q.len())
            .all(|i| (0..q.len()).all(|j| q.leq(i, j) == arena.leq(images[i], images[j])));
        if let Ok((s, labels)) = BipartiteStructure::from_terms(arena, es) {
            iso_ok = embeds && eset_ok && isomorphic_via(q, &images, &s, &labels.0).is_some();
            recovered = Some(s);
        }
    }
    let psi = arena.psi_check(wq);

    Ok(ReductionReport {
        mode,
        word,
        wq,
        canonical_ok,
        images,
        eset_terms,
        eset_ok,
        iso_ok,
        psi,
        phi: None,
        conclusion: None,
        recovered,
    })
}

/// Index map `Q -> S` sending each element to the element labelled with its
/// image, if that map is an isomorphism preserving sorts and order.
fn isomorphic_via(
    q: &BipartiteStructure,
    images: &[TermId],
    s: &BipartiteStructure,
    labels: &[TermId],
) -> Option<Vec<usize>> {
    if q.len() != s.len() || q.up().len() != s.up().len() {
        return None;
    }
    let position: HashMap<TermId, usize> =
        labels.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let map: Vec<usize> = images
        .iter()
        .map(|t| position.get(t).copied())
        .collect::<Option<_>>()?;
    let n_up = q.up().len();
    let sorts_ok = map
        .iter()
        .enumerate()
        .all(|(i, &j)| (i < n_up) == (j < n_up));
    let order_ok = (0..q.len()).all(|i| (0..q.len()).all(|j| q.leq(i, j) == s.leq(map[i], map[j])));
    (sorts_ok && order_ok).then_some(map)
}

/// Run the lemma checks, then evaluate `phi` on `Q` and on the poset
/// recovered from the `E`-set, which must agree tuple by tuple.
pub fn verify_counterexample(
    arena: &mut TermArena,
    phi: &AESentence,
    q: &BipartiteStructure,
    mode: Mode,
) -> Result<ReductionReport, ReductionError> {
    let nice = q.is_nice();
    if !nice.nice {
        return Err(ReductionError::NotNice(nice.failures.join("; ")));
    }
    let mut report = verify_lemma_wq(arena, q, mode)?;
    let on_q = eval_ae_sentence(phi, q);

    let (recovered, es) = match (&report.recovered, &report.eset_terms) {
        (Some(s), Ok(es)) => (s.clone(), es.clone()),
        _ => {
            report.conclusion = Some(if on_q.holds {
                Conclusion::PhiHoldsOnInstance
            } else {
                Conclusion::Inconclusive
            });
            return Ok(report);
        }
    };
    let (_, labels) = BipartiteStructure::from_terms(arena, &es)?;
    let map = isomorphic_via(q, &report.images, &recovered, &labels.0).ok_or_else(|| {
        ReductionError::Inconsistent("recovered poset is not isomorphic to Q".into())
    })?;
    let on_recovered = eval_ae_sentence(phi, &recovered);
    let verdicts: HashMap<&[usize], bool> = on_recovered
        .outcomes
        .iter()
        .map(|o| (o.x.as_slice(), o.refuted_by.is_none()))
        .collect();
    let agree = on_q.holds == on_recovered.holds
        && on_q.outcomes.iter().all(|o| {
            let image: Vec<usize> = o.x.iter().map(|&i| map[i]).collect();
            verdicts.get(image.as_slice()) == Some(&o.refuted_by.is_none())
        });
    if !agree {
        return Err(ReductionError::Inconsistent(
            "phi evaluates differently on Q and on the recovered E-set poset".into(),
        ));
    }
    report.conclusion = Some(if on_q.holds {
        Conclusion::PhiHoldsOnInstance
    } else if report.items_ok() {
        Conclusion::PhiStarFailsAtW
    } else {
        Conclusion::Inconclusive
    });
    report.phi = Some(PhiCheck {
        on_q,
        on_recovered,
        agree,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::{Literal, Var};
    use crate::covers::PsiCondition;

    pub(crate) const ZIGZAG: &str = r#"{
        "up": ["q1", "q2", "q3", "q4"],
        "down": ["q5", "q6", "q7", "q8"],
        "edges": [["q1","q5"],["q2","q5"],["q2","q6"],["q3","q6"],
                  ["q3","q7"],["q4","q7"],["q4","q8"],["q4","q6"]]
    }"#;

    #[test]
    fn xi_on_zigzag() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::from_json(ZIGZAG).unwrap();
        let xi = xi_embed(&mut a, &q);
        let shown: Vec<String> = xi
            .iter()
            .map(|&t| a.print(t, PrintStyle::Juxtaposed))
            .collect();
        assert_eq!(
            shown,
            ["x1", "x2", "x3", "x4", "x1x2x5", "x2x3x4x6", "x3x4x7", "x4x8"]
        );
    }

    #[test]
    fn hexagon_word() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::crown(3);
        let w = build_wq(&mut a, &q).unwrap();
        let expected = a
            .parse("(x1+x2*x3*x4)*(x2+x1*x3*x5)*(x3+x1*x2*x6)")
            .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn complete_bipartite_has_empty_join() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["d".into(), "e".into(), "f".into()],
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))),
        )
        .unwrap();
        assert!(matches!(build_wq(&mut a, &q), Err(ReductionError::EmptyJoin(n)) if n == "a"));
    }

    #[test]
    fn zigzag_direct() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::from_json(ZIGZAG).unwrap();
        let r = verify_lemma_wq(&mut a, &q, Mode::Direct).unwrap();
        assert!(r.canonical_ok && r.eset_ok && r.iso_ok);
        assert!(!r.psi.outcome);
        assert_eq!(r.psi.failed_at(), Some(PsiCondition::F));
    }

    #[test]
    fn hexagon_direct_all_items() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::crown(3);
        let r = verify_lemma_wq(&mut a, &q, Mode::Direct).unwrap();
        assert!(r.items_ok(), "{r:?}");
        assert_eq!(r.word, r.wq);
    }

    #[test]
    fn counterexample_and_holding_sentence() {
        let mut a = TermArena::new();
        let q = BipartiteStructure::crown(3);
        let no_top = AESentence::new(1, 1, vec![vec![Literal::le(Var::Y(1), Var::X(1))]]).unwrap();
        let r = verify_counterexample(&mut a, &no_top, &q, Mode::Direct).unwrap();
        assert_eq!(r.conclusion, Some(Conclusion::PhiStarFailsAtW));
        assert!(r.phi.as_ref().unwrap().agree);

        let refl = AESentence::new(1, 1, vec![vec![Literal::le(Var::X(1), Var::X(1))]]).unwrap();
        let r = verify_counterexample(&mut a, &refl, &q, Mode::Direct).unwrap();
        assert_eq!(r.conclusion, Some(Conclusion::PhiHoldsOnInstance));

        let fig = BipartiteStructure::from_json(ZIGZAG).unwrap();
        assert!(matches!(
            verify_counterexample(&mut a, &no_top, &fig, Mode::Direct),
            Err(ReductionError::NotNice(_))
        ));
    }
}
