//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use freelat::bipartite::{eval_ae_sentence, Literal, Var};
use freelat::covers::PsiCondition;
use freelat::reduction::phi_star::{read_phi_star_tptp, translate_phi_star};
use freelat::reduction::{build_wq, verify_counterexample, verify_lemma_wq, xi_embed};
use freelat::whitman_embed::{f_poly, lemma_fk_canonical, GeneratorChain, DEFAULT_VERIFY_BOUND};
use freelat::{AESentence, BipartiteStructure, Conclusion, Mode, PrintStyle, Sampler, TermArena};

const ZIGZAG: &str = r#"{
    "up": ["q1", "q2", "q3", "q4"],
    "down": ["q5", "q6", "q7", "q8"],
    "edges": [["q1","q5"],["q2","q5"],["q2","q6"],["q3","q6"],
              ["q3","q7"],["q4","q7"],["q4","q8"],["q4","q6"]]
}"#;

const ZIGZAG_LABELS: [&str; 8] = [
    "x1", "x2", "x3", "x4", "x1x2x5", "x2x3x4x6", "x3x4x7", "x4x8",
];

/// The four-meetand product for zigzag, transcribed with explicit `*`.
const ZIGZAG_WORD: &str = "(x1 + x2*x3*x4*x6 + x3*x4*x7 + x4*x8) * (x2 + x3*x4*x7 + x4*x8) \
                             * (x3 + x1*x2*x5 + x4*x8) * (x4 + x1*x2*x5)";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{took:.2?}"))
}

fn no_top() -> AESentence {
    AESentence::new(1, 1, vec![vec![Literal::le(Var::Y(1), Var::X(1))]]).unwrap()
}

fn zigzag_golden() -> Outcome {
    let start = Instant::now();
    let mut a = TermArena::new();
    let q = BipartiteStructure::from_json(ZIGZAG).map_err(|e| e.to_string())?;
    let xi = xi_embed(&mut a, &q);
    let shown: Vec<String> = xi
        .iter()
        .map(|&t| a.print(t, PrintStyle::Juxtaposed))
        .collect();
    ensure(shown == ZIGZAG_LABELS, format!("xi labels {shown:?}"))?;
    let w = build_wq(&mut a, &q).map_err(|e| e.to_string())?;
    let display = a.parse(ZIGZAG_WORD).map_err(|e| e.to_string())?;
    ensure(w == display, "w_Q differs from the displayed product")?;
    ensure(
        a.canonical_form(w) == display,
        "canonical form of w_Q changed it",
    )?;
    within(start, Duration::from_secs(1))
}

fn lemma_items_direct() -> Outcome {
    let start = Instant::now();
    let mut a = TermArena::new();
    let fig = BipartiteStructure::from_json(ZIGZAG).map_err(|e| e.to_string())?;
    let r = verify_lemma_wq(&mut a, &fig, Mode::Direct).map_err(|e| e.to_string())?;
    ensure(r.canonical_ok, "zigzag: w_Q not canonical")?;
    ensure(r.eset_ok && r.iso_ok, "zigzag: E-set does not recover Q")?;
    ensure(
        !r.psi.outcome && r.psi.failed_at() == Some(PsiCondition::F),
        format!("zigzag: Psi failed at {:?}", r.psi.failed_at()),
    )?;
    let hex = BipartiteStructure::crown(3);
    let r = verify_lemma_wq(&mut a, &hex, Mode::Direct).map_err(|e| e.to_string())?;
    ensure(
        r.canonical_ok && r.eset_ok && r.iso_ok && r.psi.outcome,
        "hexagon: some item failed",
    )?;
    within(start, Duration::from_secs(5))
}

fn lemma_items_f3() -> Outcome {
    let start = Instant::now();
    let mut a = TermArena::new();
    let hex = BipartiteStructure::crown(3);
    let r = verify_lemma_wq(&mut a, &hex, Mode::F3).map_err(|e| e.to_string())?;
    ensure(r.canonical_ok, "zeta(w_hex) not canonical")?;
    ensure(
        r.eset_ok && r.iso_ok,
        "E-set of zeta(w_hex) is not the image of the hexagon",
    )?;
    ensure(
        r.psi.outcome,
        format!("Psi failed at {:?}", r.psi.failed_at()),
    )?;
    let took = within(start, Duration::from_secs(120))?;
    Ok(format!("{took}, word has {} DAG nodes", a.dag_size(r.wq)))
}

fn whitman_goldens() -> Outcome {
    let mut a = TermArena::new();
    let (x1, x2, x3) = (a.var(1), a.var(2), a.var(3));
    let displayed = [
        "(x1+x2*x3)*(x2+x1*x3)",
        "(x1+x2*x3)*(x3+x1*x2)",
        "x1*(x2+x3)+x2*(x1+x3)",
        "x1*(x2+x3)+x3*(x1+x2)",
    ];
    let mut us = Vec::new();
    for (i, text) in (1..=4).zip(displayed) {
        let u = f_poly(&mut a, i, x1, x2, x3).map_err(|e| e.to_string())?;
        ensure(
            u == a.parse(text).unwrap(),
            format!("u{i} differs from its display"),
        )?;
        us.push(u);
    }
    ensure(a.is_independent(&us), "u1..u4 not independent")?;

    let chain =
        GeneratorChain::build(&mut a, 5, DEFAULT_VERIFY_BOUND).map_err(|e| e.to_string())?;
    ensure(
        chain.verified_stages == chain.stages.len(),
        "not every stage certified",
    )?;
    for (k, &z) in chain.z.iter().enumerate() {
        let prev = &chain.stages[k];
        let n = prev.len();
        let f1 = f_poly(&mut a, 1, prev[n - 3], prev[n - 2], prev[n - 1]).unwrap();
        ensure(
            z == f1,
            format!("z{} is not f1 of the last three of X_{}", k + 1, n),
        )?;
        ensure(
            a.is_join_irreducible(z),
            format!("z{} not join irreducible", k + 1),
        )?;
        let c = a.canonical_form(z);
        let shaped =
            a.is_meet(c) && a.children(c).len() == 2 && a.children(c).iter().all(|&m| a.is_join(m));
        ensure(
            shaped,
            format!("z{} canonical form is not a meet of two joins", k + 1),
        )?;
    }
    ensure(
        lemma_fk_canonical(&mut a, [x1, x2, x3]) == [true; 4],
        "Lemma 5.1 on x1,x2,x3",
    )?;
    let zs = [chain.z[0], chain.z[1], chain.z[2]];
    ensure(
        lemma_fk_canonical(&mut a, zs) == [true; 4],
        "Lemma 5.1 on z1,z2,z3",
    )?;
    Ok(format!("{} stages certified", chain.verified_stages))
}

fn kernel_properties() -> Outcome {
    const TERMS: usize = 1000;
    let start = Instant::now();
    let mut a = TermArena::new();
    let mut s = Sampler::new(0x5eed);
    let terms: Vec<_> = (0..TERMS).map(|_| s.term(&mut a, 4, 5)).collect();
    let mut checks = 0usize;
    for &t in &terms {
        let c = a.canonical_form(t);
        ensure(
            a.equiv(t, c),
            format!("unsound: {}", a.print(t, PrintStyle::Ascii)),
        )?;
        ensure(a.canonical_form(c) == c, "not idempotent")?;
        ensure(
            a.is_canonical(c),
            format!("uncertified: {}", a.print(c, PrintStyle::Ascii)),
        )?;
        ensure(a.leq(t, t), "reflexivity")?;
        checks += 4;
    }
    for w in terms.windows(3) {
        let (p, q, r) = (w[0], w[1], w[2]);
        let same = a.canonical_form(p) == a.canonical_form(q);
        ensure(
            same == a.equiv(p, q),
            "canonical equality disagrees with equiv",
        )?;
        let pq = a.join2(p, q);
        let absorbed = a.meet2(p, pq);
        ensure(
            a.canonical_form(absorbed) == a.canonical_form(p),
            "absorption",
        )?;
        if a.leq(p, q) && a.leq(q, r) {
            ensure(a.leq(p, r), "transitivity")?;
        }
        let m = a.meet2(p, q);
        let j = a.join2(p, q);
        ensure(
            a.leq(m, p) && a.leq(m, q) && a.leq(p, j) && a.leq(q, j),
            "bounds",
        )?;
        ensure(
            (a.leq(r, p) && a.leq(r, q)) == a.leq(r, m),
            "greatest lower bound",
        )?;
        ensure(
            (a.leq(p, r) && a.leq(q, r)) == a.leq(j, r),
            "least upper bound",
        )?;
        checks += 6;
    }
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!("{TERMS} terms, {checks} checks, {took}"))
}

fn end_to_end() -> Outcome {
    let hex = BipartiteStructure::crown(3);
    let phi = no_top();
    for mode in [Mode::Direct, Mode::F3] {
        let mut a = TermArena::new();
        let r = verify_counterexample(&mut a, &phi, &hex, mode).map_err(|e| e.to_string())?;
        let label = mode.label();
        ensure(
            r.conclusion == Some(Conclusion::PhiStarFailsAtW),
            format!("{label}: {:?}", r.conclusion),
        )?;
        let check = r
            .phi
            .as_ref()
            .ok_or(format!("{label}: no phi evaluation"))?;
        ensure(check.agree, format!("{label}: evaluations disagree"))?;
        ensure(
            check.on_q.outcomes.len() == hex.len()
                && check.on_q.outcomes.iter().all(|o| o.refuted_by.is_some()),
            format!("{label}: some x-tuple lacks a refutation"),
        )?;
    }
    Ok("direct and f3".into())
}

fn phi_star_emission() -> Outcome {
    let samples = [
        no_top(),
        AESentence::new(
            2,
            1,
            vec![
                vec![
                    Literal::le(Var::X(1), Var::X(2)),
                    Literal::nle(Var::X(2), Var::X(1)),
                ],
                vec![Literal::nle(Var::Y(1), Var::X(1))],
            ],
        )
        .unwrap(),
        AESentence::new(
            1,
            2,
            vec![vec![
                Literal::le(Var::Y(1), Var::Y(2)),
                Literal::nle(Var::X(1), Var::Y(2)),
            ]],
        )
        .unwrap(),
    ];
    for (i, phi) in samples.iter().enumerate() {
        let star = translate_phi_star(phi);
        ensure(
            star.has_expected_shape(),
            format!("sample {}: wrong top-level shape", i + 1),
        )?;
        let back = read_phi_star_tptp(&star.to_tptp()).map_err(|e| e.to_string())?;
        ensure(
            back == star,
            format!("sample {}: TPTP does not read back", i + 1),
        )?;
    }
    Ok(format!("{} sentences", samples.len()))
}

fn conversions_and_evaluator() -> Outcome {
    let mut s = Sampler::new(2024);
    for i in 0..100 {
        let q = s.structure(6);
        let back = q.to_poset().to_graph().map_err(|e| e.to_string())?;
        ensure(back == q, format!("structure {i} does not round-trip"))?;
    }
    for i in 0..100 {
        let q = s.structure(4);
        let phi = s.sentence();
        let extra = vec![s.literal(phi.exists(), phi.forall())];
        let wider = phi.with_disjunct(extra).unwrap();
        let (before, after) = (eval_ae_sentence(&phi, &q), eval_ae_sentence(&wider, &q));
        ensure(
            !before.holds || after.holds,
            format!("pair {i}: extra disjunct flipped truth"),
        )?;
    }
    Ok("100 structures, 100 sentence pairs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("zigzag xi labels and w_Q golden", zigzag_golden),
        ("w_Q lemma items, direct mode", lemma_items_direct),
        ("w_Q lemma items for the hexagon in F_3", lemma_items_f3),
        ("Whitman generators u1..u4, z1..z5", whitman_goldens),
        ("kernel property suite", kernel_properties),
        ("phi* fails at w for the hexagon, both modes", end_to_end),
        ("phi* emission round-trip and shape", phi_star_emission),
        (
            "graph/poset round-trip and matrix monotonicity",
            conversions_and_evaluator,
        ),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(note) => println!("PASS criterion {}: {name} ({note})", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
