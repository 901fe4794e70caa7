//! The sentence `phi*` in the language of posets.
//!
//! Given `phi = exists x forall y (S_1 | ... | S_p)`,
//!
//! ```text
//! phi* = forall w ( Psi(w) =>
//!          exists x ( (&_j w E x_j) &
//!                     forall y ( (&_k w E y_k) => (S_1 | ... | S_p) ) ) )
//! ```
//!
//! `E`, `Psi`, joins and meets are all expanded into `<=` and `=` atoms.
//! Joins and meets appear only through "`z` is the least upper bound of
//! `a, b, ..`" subformulas. The result is emitted for external tools and
//! never evaluated here.

use super::formula::*;
use crate::bipartite::{AESentence, LiteralKind, Var};

/// Fresh variable supply. Generated names are `V1, V2, ...`, disjoint from
/// the sentence's own `W`, `X<i>`, `Y<i>`.
#[derive(Debug, Default)]
struct Fresh(usize);

impl Fresh {
    fn var(&mut self) -> String {
        self.0 += 1;
        format!("V{}", self.0)
    }

    fn vars<const N: usize>(&mut self) -> [String; N] {
        std::array::from_fn(|_| self.var())
    }
}

fn strs(vs: &[&String]) -> Vec<String> {
    vs.iter().map(|s| s.to_string()).collect()
}

/// `z` is the join of `parts`.
fn is_join(fresh: &mut Fresh, z: &str, parts: &[&str]) -> Formula {
    let c = fresh.var();
    let mut upper: Vec<Formula> = parts.iter().map(|p| le(p, z)).collect();
    let bounded = and(parts.iter().map(|p| le(p, &c)).collect());
    upper.push(forall(vec![c.clone()], implies(bounded, le(z, &c))));
    and(upper)
}

/// `z` is the meet of `parts`.
fn is_meet(fresh: &mut Fresh, z: &str, parts: &[&str]) -> Formula {
    let c = fresh.var();
    let mut lower: Vec<Formula> = parts.iter().map(|p| le(z, p)).collect();
    let bounded = and(parts.iter().map(|p| le(&c, p)).collect());
    lower.push(forall(vec![c.clone()], implies(bounded, le(&c, z))));
    and(lower)
}

/// `t <= join(parts)`.
fn le_join(fresh: &mut Fresh, t: &str, parts: &[&str]) -> Formula {
    let s = fresh.var();
    let body = and(vec![is_join(fresh, &s, parts), le(t, &s)]);
    exists(vec![s], body)
}

/// `t E u` for join irreducible `t`: some `v` with
/// (i) `t <= u + v`, (ii) `t !<= u`, `t !<= v`,
/// (iii) `r, s < u` implies `t !<= r + s + v`,
/// (iv) `t <= y + z <= u + v` with `t !<= y`, `t !<= z` forces `y + z = u + v`.
pub fn e_relation(t: &str, u: &str) -> Formula {
    let mut fresh = Fresh::default();
    e_relation_in(&mut fresh, t, u)
}

fn e_relation_in(fresh: &mut Fresh, t: &str, u: &str) -> Formula {
    let v = fresh.var();
    let i = le_join(fresh, t, &[u, &v]);
    let ii = and(vec![nle(t, u), nle(t, &v)]);

    let [r, s, rsv] = fresh.vars();
    let iii = forall(
        strs(&[&r, &s, &rsv]),
        implies(
            and(vec![
                lt(&r, u),
                lt(&s, u),
                is_join(fresh, &rsv, &[&r, &s, &v]),
            ]),
            nle(t, &rsv),
        ),
    );

    let [y, z, yz, uv] = fresh.vars();
    let iv = forall(
        strs(&[&y, &z, &yz, &uv]),
        implies(
            and(vec![
                is_join(fresh, &yz, &[&y, &z]),
                is_join(fresh, &uv, &[u, &v]),
                le(t, &yz),
                le(&yz, &uv),
                nle(t, &y),
                nle(t, &z),
            ]),
            eq(&yz, &uv),
        ),
    );
    exists(vec![v], and(vec![i, ii, iii, iv]))
}

fn join_prime(fresh: &mut Fresh, x: &str) -> Formula {
    let [a, b, s] = fresh.vars();
    let cover = and(vec![is_join(fresh, &s, &[&a, &b]), le(x, &s)]);
    forall(
        strs(&[&a, &b, &s]),
        implies(cover, or(vec![le(x, &a), le(x, &b)])),
    )
}

fn meet_prime(fresh: &mut Fresh, x: &str) -> Formula {
    let [a, b, m] = fresh.vars();
    let cover = and(vec![is_meet(fresh, &m, &[&a, &b]), le(&m, x)]);
    forall(
        strs(&[&a, &b, &m]),
        implies(cover, or(vec![le(&a, x), le(&b, x)])),
    )
}

fn in_max(fresh: &mut Fresh, w: &str, u: &str) -> Formula {
    let t = fresh.var();
    let above = and(vec![lt(u, &t), e_relation_in(fresh, w, &t)]);
    and(vec![
        e_relation_in(fresh, w, u),
        forall(vec![t], not(above)),
    ])
}

fn in_min(fresh: &mut Fresh, w: &str, u: &str) -> Formula {
    let t = fresh.var();
    let below = and(vec![lt(&t, u), e_relation_in(fresh, w, &t)]);
    and(vec![
        e_relation_in(fresh, w, u),
        forall(vec![t], not(below)),
    ])
}

/// `Psi(w)`, conjuncts in the order (a) through (g).
pub fn psi(w: &str) -> Formula {
    let mut fresh = Fresh::default();
    psi_in(&mut fresh, w)
}

fn psi_in(fresh: &mut Fresh, w: &str) -> Formula {
    // (a) proper meet
    let [a, b] = fresh.vars();
    let meet = is_meet(fresh, w, &[&a, &b]);
    let cond_a = exists(strs(&[&a, &b]), and(vec![meet, neq(w, &a), neq(w, &b)]));

    // (b) below no doubly prime element
    let x = fresh.var();
    let prime = and(vec![join_prime(fresh, &x), meet_prime(fresh, &x)]);
    let cond_b = forall(vec![x.clone()], implies(prime, nle(w, &x)));

    // (c) no three-element chain in U
    let [u1, u2, u3] = fresh.vars();
    let chain = and(vec![
        e_relation_in(fresh, w, &u1),
        e_relation_in(fresh, w, &u2),
        e_relation_in(fresh, w, &u3),
        lt(&u2, &u1),
        lt(&u3, &u2),
    ]);
    let cond_c = not(exists(strs(&[&u1, &u2, &u3]), chain));

    // (d), (e) three distinct maximal / minimal elements
    let three = |fresh: &mut Fresh, maximal: bool| {
        let [p, q, r] = fresh.vars();
        let mut parts: Vec<Formula> = [&p, &q, &r]
            .iter()
            .map(|v| {
                if maximal {
                    in_max(fresh, w, v)
                } else {
                    in_min(fresh, w, v)
                }
            })
            .collect();
        parts.extend([neq(&p, &q), neq(&p, &r), neq(&q, &r)]);
        exists(strs(&[&p, &q, &r]), and(parts))
    };
    let cond_d = three(fresh, true);
    let cond_e = three(fresh, false);

    // (f) each maximal u has s1 != s2 minimal below it and a minimal s3 not
    // below it; (g) dually
    let spread = |fresh: &mut Fresh, maximal: bool| {
        let u = fresh.var();
        let [s1, s2, s3] = fresh.vars();
        let head = if maximal {
            in_max(fresh, w, &u)
        } else {
            in_min(fresh, w, &u)
        };
        let mut parts: Vec<Formula> = [&s1, &s2, &s3]
            .iter()
            .map(|s| {
                if maximal {
                    in_min(fresh, w, s)
                } else {
                    in_max(fresh, w, s)
                }
            })
            .collect();
        if maximal {
            parts.extend([le(&s1, &u), le(&s2, &u), neq(&s1, &s2), nle(&s3, &u)]);
        } else {
            parts.extend([le(&u, &s1), le(&u, &s2), neq(&s1, &s2), nle(&u, &s3)]);
        }
        forall(
            vec![u],
            implies(head, exists(strs(&[&s1, &s2, &s3]), and(parts))),
        )
    };
    let cond_f = spread(fresh, true);
    let cond_g = spread(fresh, false);

    and(vec![cond_a, cond_b, cond_c, cond_d, cond_e, cond_f, cond_g])
}

fn var_name(v: Var) -> String {
    match v {
        Var::X(i) => format!("X{i}"),
        Var::Y(i) => format!("Y{i}"),
    }
}

/// `S_1 | ... | S_p` with the sentence's variables renamed to `X<i>`, `Y<i>`.
pub fn matrix(phi: &AESentence) -> Formula {
    or(phi
        .dnf()
        .iter()
        .map(|conj| {
            and(conj
                .iter()
                .map(|lit| {
                    let (l, r) = (var_name(lit.lhs), var_name(lit.rhs));
                    match lit.kind {
                        LiteralKind::Le => le(&l, &r),
                        LiteralKind::Nle => nle(&l, &r),
                    }
                })
                .collect())
        })
        .collect())
}

pub const W: &str = "W";

/// The translated sentence as an abstract formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiStar {
    pub formula: Formula,
}

impl PhiStar {
    pub fn to_tptp(&self) -> String {
        FofStatement {
            name: "phi_star".into(),
            role: "conjecture".into(),
            formula: self.formula.clone(),
        }
        .to_tptp()
    }

    pub fn to_sexp(&self) -> String {
        self.formula.to_sexp()
    }

    /// `forall W (Psi(W) => ...)`: the top-level shape of the translation.
    pub fn has_expected_shape(&self) -> bool {
        match &self.formula {
            Formula::Forall(vs, body) if vs.len() == 1 && vs[0] == W => {
                matches!(body.as_ref(), Formula::Implies(ante, _) if **ante == psi(W))
            }
            _ => false,
        }
    }

    /// The part after the implication: `exists x (... forall y (... => matrix))`.
    pub fn conclusion(&self) -> Option<&Formula> {
        match &self.formula {
            Formula::Forall(_, body) => match body.as_ref() {
                Formula::Implies(_, concl) => Some(concl),
                _ => None,
            },
            _ => None,
        }
    }
}

pub fn translate_phi_star(phi: &AESentence) -> PhiStar {
    // Psi gets its own fresh-name supply so that it is literally psi(W); the
    // conclusion continues numbering past it.
    let mut fresh = Fresh::default();
    let antecedent = psi_in(&mut fresh, W);

    let xs: Vec<String> = (1..=phi.exists()).map(|i| var_name(Var::X(i))).collect();
    let ys: Vec<String> = (1..=phi.forall()).map(|i| var_name(Var::Y(i))).collect();
    let x_in_u = and(xs.iter().map(|x| e_relation_in(&mut fresh, W, x)).collect());
    let y_in_u = and(ys.iter().map(|y| e_relation_in(&mut fresh, W, y)).collect());
    let inner = if ys.is_empty() {
        matrix(phi)
    } else {
        forall(ys, implies(y_in_u, matrix(phi)))
    };
    let body = if xs.is_empty() {
        inner
    } else {
        exists(xs, and(vec![x_in_u, inner]))
    };
    PhiStar {
        formula: forall(vec![W.to_string()], implies(antecedent, body)),
    }
}

/// Read back a `phi_star` statement emitted by [`PhiStar::to_tptp`].
pub fn read_phi_star_tptp(text: &str) -> Result<PhiStar, FormulaSyntaxError> {
    let stmts = read_tptp(text)?;
    match stmts.as_slice() {
        [one] => Ok(PhiStar {
            formula: one.formula.clone(),
        }),
        _ => Err(FormulaSyntaxError {
            pos: 0,
            msg: format!("expected exactly one statement, found {}", stmts.len()),
        }),
    }
}

pub fn read_phi_star_sexp(text: &str) -> Result<PhiStar, FormulaSyntaxError> {
    Ok(PhiStar {
        formula: read_sexp_formula(text.trim())?,
    })
}
