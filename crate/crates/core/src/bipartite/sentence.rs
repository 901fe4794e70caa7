//! Sentences `exists x1..xk forall y1..yl (S_1 OR ... OR S_p)` over posets,
//! each `S_j` a conjunction of literals `v <= w` or `v !<= w`, and their
//! exhaustive evaluation on finite structures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::BipartiteStructure;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SentenceError {
    #[error("bad variable name '{0}': expected x<i> or y<i>")]
    BadVariable(String),
    #[error("variable {0} is not declared")]
    Undeclared(Var),
    #[error("the matrix needs at least one disjunct")]
    EmptyMatrix,
    #[error("invalid sentence document: {0}")]
    Json(String),
}

/// A bound variable: `X(i)` is existential `x_i`, `Y(i)` universal `y_i`,
/// both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = SentenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SentenceError::BadVariable(s.to_string());
        let (ctor, digits): (fn(usize) -> Var, &str) = if let Some(d) = s.strip_prefix('x') {
            (Var::X, d)
        } else if let Some(d) = s.strip_prefix('y') {
            (Var::Y, d)
        } else {
            return Err(bad());
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        match digits.parse::<usize>() {
            Ok(i) if i > 0 => Ok(ctor(i)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiteralKind {
    Le,
    Nle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub kind: LiteralKind,
    pub lhs: Var,
    pub rhs: Var,
}

impl Literal {
    pub fn le(lhs: Var, rhs: Var) -> Self {
        Literal {
            kind: LiteralKind::Le,
            lhs,
            rhs,
        }
    }

    pub fn nle(lhs: Var, rhs: Var) -> Self {
        Literal {
            kind: LiteralKind::Nle,
            lhs,
            rhs,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum LiteralDoc {
    Le([String; 2]),
    Nle([String; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SentenceDoc {
    exists: usize,
    forall: usize,
    dnf: Vec<Vec<LiteralDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AESentence {
    exists: usize,
    forall: usize,
    dnf: Vec<Vec<Literal>>,
}

impl AESentence {
    pub fn new(
        exists: usize,
        forall: usize,
        dnf: Vec<Vec<Literal>>,
    ) -> Result<Self, SentenceError> {
        if dnf.is_empty() {
            return Err(SentenceError::EmptyMatrix);
        }
        let declared = |v: Var| match v {
            Var::X(i) => i <= exists,
            Var::Y(i) => i <= forall,
        };
        for lit in dnf.iter().flatten() {
            for v in [lit.lhs, lit.rhs] {
                if !declared(v) {
                    return Err(SentenceError::Undeclared(v));
                }
            }
        }
        Ok(AESentence {
            exists,
            forall,
            dnf,
        })
    }

    pub fn exists(&self) -> usize {
        self.exists
    }

    pub fn forall(&self) -> usize {
        self.forall
    }

    pub fn dnf(&self) -> &[Vec<Literal>] {
        &self.dnf
    }

    /// The same sentence with one more disjunct.
    pub fn with_disjunct(&self, conj: Vec<Literal>) -> Result<Self, SentenceError> {
        let mut dnf = self.dnf.clone();
        dnf.push(conj);
        Self::new(self.exists, self.forall, dnf)
    }

    pub fn from_json(text: &str) -> Result<Self, SentenceError> {
        let doc: SentenceDoc =
            serde_json::from_str(text).map_err(|e| SentenceError::Json(e.to_string()))?;
        let mut dnf = Vec::with_capacity(doc.dnf.len());
        for conj in doc.dnf {
            let mut lits = Vec::with_capacity(conj.len());
            for lit in conj {
                let (kind, [l, r]) = match lit {
                    LiteralDoc::Le(p) => (LiteralKind::Le, p),
                    LiteralDoc::Nle(p) => (LiteralKind::Nle, p),
                };
                lits.push(Literal {
                    kind,
                    lhs: l.parse()?,
                    rhs: r.parse()?,
                });
            }
            dnf.push(lits);
        }
        Self::new(doc.exists, doc.forall, dnf)
    }

    pub fn to_json(&self) -> String {
        let doc = SentenceDoc {
            exists: self.exists,
            forall: self.forall,
            dnf: self
                .dnf
                .iter()
                .map(|conj| {
                    conj.iter()
                        .map(|lit| {
                            let pair = [lit.lhs.to_string(), lit.rhs.to_string()];
                            match lit.kind {
                                LiteralKind::Le => LiteralDoc::Le(pair),
                                LiteralKind::Nle => LiteralDoc::Nle(pair),
                            }
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("sentence serializes")
    }
}

/// Verdict for one assignment of the existential block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XTupleOutcome {
    pub x: Vec<usize>,
    /// Lexicographically first universal tuple falsifying every disjunct,
    /// if any.
    pub refuted_by: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub holds: bool,
    /// Lexicographically first existential tuple that works.
    pub witness: Option<Vec<usize>>,
    /// Every existential tuple, in lexicographic order.
    pub outcomes: Vec<XTupleOutcome>,
}

impl Evaluation {
    pub fn to_json(&self, s: &BipartiteStructure) -> Value {
        let names = |t: &[usize]| -> Vec<&str> { t.iter().map(|&i| s.name(i)).collect() };
        let refutations: Vec<Value> = self
            .outcomes
            .iter()
            .filter_map(|o| {
                o.refuted_by
                    .as_ref()
                    .map(|y| json!({ "x": names(&o.x), "y": names(y) }))
            })
            .collect();
        json!({
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| names(w)),
            "refutations": if self.holds { Value::Null } else { Value::Array(refutations) },
        })
    }
}

/// Lexicographic enumeration of `n^k` index tuples.
fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if k == 0 || n > 0 {
        Some(vec![0; k])
    } else {
        None
    };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for pos in (0..k).rev() {
            succ[pos] += 1;
            if succ[pos] < n {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(cur)
    })
}

/// Brute force over all assignments, in the order of `s`.
pub fn eval_ae_sentence(phi: &AESentence, s: &BipartiteStructure) -> Evaluation {
    let n = s.len();
    let value = |v: Var, x: &[usize], y: &[usize]| match v {
        Var::X(i) => x[i - 1],
        Var::Y(i) => y[i - 1],
    };
    let satisfied = |x: &[usize], y: &[usize]| {
        phi.dnf.iter().any(|conj| {
            conj.iter().all(|lit| {
                let le = s.leq(value(lit.lhs, x, y), value(lit.rhs, x, y));
                match lit.kind {
                    LiteralKind::Le => le,
                    LiteralKind::Nle => !le,
                }
            })
        })
    };
    let outcomes: Vec<XTupleOutcome> = tuples(n, phi.exists)
        .map(|x| {
            let refuted_by = tuples(n, phi.forall).find(|y| !satisfied(&x, y));
            XTupleOutcome { x, refuted_by }
        })
        .collect();
    let witness = outcomes
        .iter()
        .find(|o| o.refuted_by.is_none())
        .map(|o| o.x.clone());
    Evaluation {
        holds: witness.is_some(),
        witness,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> BipartiteStructure {
        BipartiteStructure::crown(3)
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(
            tuples(2, 2).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(tuples(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(tuples(0, 1).count(), 0);
        assert_eq!(tuples(0, 0).count(), 1);
    }

    #[test]
    fn reflexive_sentence_holds() {
        let phi = AESentence::new(1, 1, vec![vec![Literal::le(Var::X(1), Var::X(1))]]).unwrap();
        let e = eval_ae_sentence(&phi, &hexagon());
        assert!(e.holds);
        assert_eq!(e.witness, Some(vec![0]));
    }

    // Six elements, three of them maximal: no x is above every y.
    #[test]
    fn no_top_in_hexagon() {
        let phi = AESentence::new(1, 1, vec![vec![Literal::le(Var::Y(1), Var::X(1))]]).unwrap();
        let s = hexagon();
        let e = eval_ae_sentence(&phi, &s);
        assert!(!e.holds);
        assert_eq!(e.outcomes.len(), 6);
        // x = a1 is refuted by a2 (index 1), x = b1 by a1.
        assert_eq!(e.outcomes[0].refuted_by, Some(vec![1]));
        assert_eq!(e.outcomes[3].refuted_by, Some(vec![0]));
        for o in &e.outcomes {
            let y = o.refuted_by.as_ref().unwrap()[0];
            assert!(!s.leq(y, o.x[0]));
        }
    }

    #[test]
    fn strict_pair_exists() {
        let phi = AESentence::new(
            2,
            0,
            vec![vec![
                Literal::le(Var::X(1), Var::X(2)),
                Literal::nle(Var::X(2), Var::X(1)),
            ]],
        )
        .unwrap();
        let s = hexagon();
        let e = eval_ae_sentence(&phi, &s);
        assert!(e.holds);
        // first strict pair in lexicographic order: b1 < a2
        assert_eq!(e.witness, Some(vec![3, 1]));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let text = r#"{"exists":1,"forall":2,"dnf":[[{"le":["y1","x1"]},{"nle":["x1","y2"]}],[]]}"#;
        let phi = AESentence::from_json(text).unwrap();
        assert_eq!(phi.dnf()[0][1], Literal::nle(Var::X(1), Var::Y(2)));
        assert_eq!(AESentence::from_json(&phi.to_json()).unwrap(), phi);

        let undeclared = r#"{"exists":1,"forall":0,"dnf":[[{"le":["y1","x1"]}]]}"#;
        assert_eq!(
            AESentence::from_json(undeclared),
            Err(SentenceError::Undeclared(Var::Y(1)))
        );
        let empty = r#"{"exists":1,"forall":0,"dnf":[]}"#;
        assert_eq!(
            AESentence::from_json(empty),
            Err(SentenceError::EmptyMatrix)
        );
        for bad in ["z1", "x0", "x", "x1a", "", "é1", "x+1"] {
            assert!(bad.parse::<Var>().is_err(), "{bad}");
        }
    }
}
