use std::collections::{BTreeSet, HashMap};

use freelat::bipartite::{eval_ae_sentence, Literal, Var};
use freelat::covers::PsiCondition;
use freelat::reduction::phi_star::{matrix, translate_phi_star};
use freelat::reduction::{build_wq, xi_embed};
use freelat::whitman_embed::{GeneratorChain, DEFAULT_VERIFY_BOUND};
use freelat::{AESentence, BipartiteStructure, GeneratorId, PrintStyle, TermArena, TermId};

const ZIGZAG: &str = include_str!("../../../data/zigzag.json");
const HEXAGON: &str = include_str!("../../../data/hexagon.json");

fn zigzag() -> BipartiteStructure {
    BipartiteStructure::from_json(ZIGZAG).unwrap()
}

fn terms(a: &mut TermArena, items: &[&str]) -> Vec<TermId> {
    let mut v: Vec<TermId> = items.iter().map(|s| a.parse(s).unwrap()).collect();
    a.sort_terms(&mut v);
    v
}

#[test]
fn hexagon_file_is_the_crown() {
    assert_eq!(
        BipartiteStructure::from_json(HEXAGON).unwrap(),
        BipartiteStructure::crown(3)
    );
}

#[test]
fn zigzag_word_and_variables() {
    let mut a = TermArena::new();
    let q = zigzag();
    let w = build_wq(&mut a, &q).unwrap();
    let gens: BTreeSet<u32> = a.vars(w).into_iter().map(GeneratorId::index).collect();
    assert_eq!(gens, (1..=8).collect());
    assert!(a.is_canonical(w));
    assert_eq!(a.canonical_form(w), w);

    let xi = xi_embed(&mut a, &q);
    let x2 = a.var(2);
    assert!(a.leq(xi[5], x2), "q6 lies below q2");
    for (i, &t) in xi.iter().enumerate().take(4) {
        assert_eq!(t, a.var(i as u32 + 1), "maximal elements map to generators");
    }
}

#[test]
fn zigzag_covers_and_eset() {
    let mut a = TermArena::new();
    let w = build_wq(&mut a, &zigzag()).unwrap();
    let covers: Vec<Vec<TermId>> = a
        .doubly_minimal_join_covers(w)
        .unwrap()
        .into_iter()
        .map(|c| c.elements)
        .collect();
    let expected = [
        terms(&mut a, &["x1", "x2*x3*x4*x6", "x3*x4*x7", "x4*x8"]),
        terms(&mut a, &["x2", "x3*x4*x7", "x4*x8"]),
        terms(&mut a, &["x3", "x1*x2*x5", "x4*x8"]),
        terms(&mut a, &["x4", "x1*x2*x5"]),
    ];
    assert_eq!(covers.len(), 4);
    for e in &expected {
        assert!(covers.contains(e), "missing cover {e:?}");
    }
    let es = a.e_set(w).unwrap();
    let xi_set = terms(
        &mut a,
        &[
            "x1",
            "x2",
            "x3",
            "x4",
            "x1*x2*x5",
            "x2*x3*x4*x6",
            "x3*x4*x7",
            "x4*x8",
        ],
    );
    assert_eq!(es, xi_set);
    let wv = a.vars(w);
    assert!(es.iter().all(|&u| a.vars(u).is_subset(&wv)));

    let psi = a.psi_check(w);
    assert_eq!(psi.failed_at(), Some(PsiCondition::F));
    let x1 = a.var(1);
    assert!(psi.failure.unwrap().witnesses.contains(&x1));
}

#[test]
fn psi_small_cases() {
    let mut a = TermArena::new();
    let x1 = a.var(1);
    assert_eq!(a.psi_check(x1).failed_at(), Some(PsiCondition::A));
    let hex = a
        .parse("(x1+x2*x3*x4)*(x2+x1*x3*x5)*(x3+x1*x2*x6)")
        .unwrap();
    let r = a.psi_check(hex);
    assert!(r.outcome);
    assert_eq!(r.maximal.len(), 3);
    assert_eq!(r.minimal.len(), 3);
}

#[test]
fn hexagon_images_and_recovery() {
    let mut a = TermArena::new();
    let q = BipartiteStructure::crown(3);
    let xi = xi_embed(&mut a, &q);
    let shown: Vec<String> = xi[3..]
        .iter()
        .map(|&t| a.print(t, PrintStyle::Ascii))
        .collect();
    assert_eq!(shown, ["x2*x3*x4", "x1*x3*x5", "x1*x2*x6"]);
    for i in 0..q.len() {
        for j in 0..q.len() {
            assert_eq!(q.leq(i, j), a.leq(xi[i], xi[j]));
        }
    }
    let w = build_wq(&mut a, &q).unwrap();
    let es = a.e_set(w).unwrap();
    let (s, _) = BipartiteStructure::from_terms(&mut a, &es).unwrap();
    assert_eq!(s.up().len(), 3);
    assert_eq!(s.down().len(), 3);
    assert!(s.is_nice().nice);
}

#[test]
fn posets_from_terms() {
    let mut a = TermArena::new();
    let x1 = a.var(1);
    let (s, labels) = BipartiteStructure::from_terms(&mut a, &[x1]).unwrap();
    assert_eq!(s.up(), ["x1"]);
    assert!(s.down().is_empty());
    assert_eq!(labels.0, vec![x1]);
    let chain = terms(&mut a, &["x1", "x1*x2", "x1*x2*x3"]);
    assert!(BipartiteStructure::from_terms(&mut a, &chain).is_err());
}

#[test]
fn niceness_goldens() {
    assert!(BipartiteStructure::crown(3).is_nice().nice);
    let fig = zigzag().is_nice();
    assert!(!fig.nice);
    assert!(fig.failures.iter().any(|f| f.starts_with("q1 ")));
    assert!(fig.failures.iter().any(|f| f.starts_with("q8 ")));
    let complete = BipartiteStructure::new(
        vec!["a1".into(), "a2".into(), "a3".into()],
        vec!["b1".into(), "b2".into(), "b3".into()],
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))),
    )
    .unwrap();
    assert!(!complete.is_nice().nice);
}

#[test]
fn sentence_goldens() {
    let hex = BipartiteStructure::crown(3);
    let strict_pair = AESentence::new(
        2,
        0,
        vec![vec![
            Literal::le(Var::X(1), Var::X(2)),
            Literal::nle(Var::X(2), Var::X(1)),
        ]],
    )
    .unwrap();
    assert!(eval_ae_sentence(&strict_pair, &hex).holds);
    let refl = AESentence::new(1, 1, vec![vec![Literal::le(Var::X(1), Var::X(1))]]).unwrap();
    assert!(eval_ae_sentence(&refl, &hex).holds);
    assert!(eval_ae_sentence(&refl, &zigzag()).holds);

    let single = AESentence::new(1, 1, vec![vec![Literal::le(Var::X(1), Var::Y(1))]]).unwrap();
    let star = translate_phi_star(&single);
    assert!(star.has_expected_shape());
    assert_eq!(matrix(&single).size(), 1);
}

#[test]
fn zeta_of_the_word_is_the_substituted_word() {
    let mut a = TermArena::new();
    let q = BipartiteStructure::crown(3);
    let w = build_wq(&mut a, &q).unwrap();
    let chain = GeneratorChain::build(&mut a, q.len(), DEFAULT_VERIFY_BOUND).unwrap();
    let sub: HashMap<GeneratorId, TermId> = (1..=6)
        .map(|j| (GeneratorId::new(j).unwrap(), chain.z[j as usize - 1]))
        .collect();
    assert_eq!(
        a.substitute(w, &sub).unwrap(),
        chain.zeta(&mut a, w).unwrap()
    );
}

#[test]
fn chain_stage_members() {
    let mut a = TermArena::new();
    let chain = GeneratorChain::build(&mut a, 5, DEFAULT_VERIFY_BOUND).unwrap();
    for (i, stage) in chain.stages.iter().enumerate() {
        assert_eq!(stage.len(), i + 3);
        assert!(a.is_independent(stage));
    }
    for (k, &z) in chain.z.iter().enumerate() {
        for later in &chain.stages[k + 1..] {
            assert_eq!(later[k], z, "z{} is stable from X_{} on", k + 1, k + 4);
        }
    }
}
