//! Whitman's embedding of a countably generated free lattice into `F_3`.
//!
//! ```text
//! f1(p,q,r) = (p + qr)(q + pr)      f3(p,q,r) = p(q + r) + q(p + r)
//! f2(p,q,r) = (p + qr)(r + pq)      f4(p,q,r) = p(q + r) + r(p + q)
//! ```
//!
//! Starting from `X_3 = (x1, x2, x3)`, each stage keeps all but the last three
//! members and appends `f1..f4` of those three. The k-th member never changes
//! from `X_{k+3}` on; it is `z_k`, and `x_k -> z_k` extends to an embedding.
//!
//! Applying `f1..f4` to the first three members instead would reuse members
//! that are kept, and the stage would not be independent. Every stage is
//! certified independent up to a bound as a guard.

use std::collections::HashMap;

use thiserror::Error;

use crate::bipartite::BipartiteStructure;
use crate::reduction::{verify_lemma_wq, Mode, ReductionError, ReductionReport};
use crate::term::{GeneratorId, TermArena, TermId};

/// Stages up to `X_11` are certified independent by default, enough for
/// posets with up to eight elements.
pub const DEFAULT_VERIFY_BOUND: usize = 11;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("stage X_{0} is not independent")]
    NotIndependent(usize),
    #[error("z_{0} is not a proper meet of two joins")]
    NotMeetShaped(usize),
    #[error("chain has {have} generators but the term uses x{need}")]
    TooShort { need: u32, have: usize },
    #[error("polynomial index must be 1..=4, got {0}")]
    BadPolynomial(u8),
}

pub fn f_poly(
    arena: &mut TermArena,
    i: u8,
    p: TermId,
    q: TermId,
    r: TermId,
) -> Result<TermId, ChainError> {
    let t = match i {
        1 => {
            let qr = arena.meet2(q, r);
            let pr = arena.meet2(p, r);
            let a = arena.join2(p, qr);
            let b = arena.join2(q, pr);
            arena.meet2(a, b)
        }
        2 => {
            let qr = arena.meet2(q, r);
            let pq = arena.meet2(p, q);
            let a = arena.join2(p, qr);
            let b = arena.join2(r, pq);
            arena.meet2(a, b)
        }
        3 => {
            let qr = arena.join2(q, r);
            let pr = arena.join2(p, r);
            let a = arena.meet2(p, qr);
            let b = arena.meet2(q, pr);
            arena.join2(a, b)
        }
        4 => {
            let qr = arena.join2(q, r);
            let pq = arena.join2(p, q);
            let a = arena.meet2(p, qr);
            let b = arena.meet2(r, pq);
            arena.join2(a, b)
        }
        other => return Err(ChainError::BadPolynomial(other)),
    };
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct GeneratorChain {
    /// `X_3, X_4, ...`; `stages[i]` has `i + 3` members.
    pub stages: Vec<Vec<TermId>>,
    pub z: Vec<TermId>,
    /// Number of leading stages certified independent.
    pub verified_stages: usize,
}

impl GeneratorChain {
    /// Build `z_1..z_n`, certifying independence of every stage `X_k` with
    /// `k <= verify_bound`, and that each `z_k` is a proper meet of two
    /// joins.
    pub fn build(arena: &mut TermArena, n: usize, verify_bound: usize) -> Result<Self, ChainError> {
        let mut stages = vec![(1..=3).map(|i| arena.var(i)).collect::<Vec<_>>()];
        while stages.len() < n.max(1) + 1 {
            let prev = stages.last().unwrap();
            let k = prev.len();
            let (p, q, r) = (prev[k - 3], prev[k - 2], prev[k - 1]);
            let mut next = prev[..k - 3].to_vec();
            for i in 1..=4 {
                next.push(f_poly(arena, i, p, q, r)?);
            }
            stages.push(next);
        }
        let mut verified_stages = 0;
        for stage in &stages {
            if stage.len() > verify_bound {
                break;
            }
            if !arena.is_independent(stage) {
                return Err(ChainError::NotIndependent(stage.len()));
            }
            verified_stages += 1;
        }
        let z: Vec<TermId> = stages.last().unwrap()[..n].to_vec();
        for (k, &zk) in z.iter().enumerate() {
            let c = arena.canonical_form(zk);
            let shaped = arena.is_meet(c)
                && arena.children(c).len() == 2
                && arena.children(c).iter().all(|&m| arena.is_join(m));
            if !shaped {
                return Err(ChainError::NotMeetShaped(k + 1));
            }
        }
        Ok(GeneratorChain {
            stages,
            z,
            verified_stages,
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Substitute `x_j -> z_j`.
    pub fn zeta(&self, arena: &mut TermArena, t: TermId) -> Result<TermId, ChainError> {
        let vars = arena.vars(t);
        if let Some(&g) = vars.iter().find(|g| g.index() as usize > self.z.len()) {
            return Err(ChainError::TooShort {
                need: g.index(),
                have: self.z.len(),
            });
        }
        let sub: HashMap<GeneratorId, TermId> = vars
            .into_iter()
            .map(|g| (g, self.z[g.index() as usize - 1]))
            .collect();
        Ok(arena
            .substitute(t, &sub)
            .expect("substitution covers every variable"))
    }
}

/// Build `f_j(y1, y2, y3)` for `j = 1..4` with every `y_i`, pairwise meet and
/// pairwise join replaced by its canonical form, and report for each whether
/// the result is already canonical.
pub fn lemma_fk_canonical(arena: &mut TermArena, ys: [TermId; 3]) -> [bool; 4] {
    let y = ys.map(|t| arena.canonical_form(t));
    let meet = |arena: &mut TermArena, i: usize, j: usize| {
        let m = arena.meet2(y[i], y[j]);
        arena.canonical_form(m)
    };
    let m23 = meet(arena, 1, 2);
    let m13 = meet(arena, 0, 2);
    let m12 = meet(arena, 0, 1);
    let join = |arena: &mut TermArena, i: usize, j: usize| {
        let s = arena.join2(y[i], y[j]);
        arena.canonical_form(s)
    };
    let j23 = join(arena, 1, 2);
    let j13 = join(arena, 0, 2);
    let j12 = join(arena, 0, 1);

    let prod = |arena: &mut TermArena, a: TermId, b: TermId, c: TermId, d: TermId| {
        let l = arena.join2(a, b);
        let r = arena.join2(c, d);
        arena.meet2(l, r)
    };
    let sum = |arena: &mut TermArena, a: TermId, b: TermId, c: TermId, d: TermId| {
        let l = arena.meet2(a, b);
        let r = arena.meet2(c, d);
        arena.join2(l, r)
    };
    let fs = [
        prod(arena, y[0], m23, y[1], m13),
        prod(arena, y[0], m23, y[2], m12),
        sum(arena, y[0], j23, y[1], j13),
        sum(arena, y[0], j23, y[2], j12),
    ];
    fs.map(|f| arena.is_canonical(f) && arena.canonical_form(f) == f)
}

/// The `w_Q` lemma items for `zeta(w_Q)` in `F_3`. Requires a nice `Q`.
pub fn verify_f3_lemma(
    arena: &mut TermArena,
    q: &BipartiteStructure,
) -> Result<ReductionReport, ReductionError> {
    let nice = q.is_nice();
    if !nice.nice {
        return Err(ReductionError::NotNice(nice.failures.join("; ")));
    }
    verify_lemma_wq(arena, q, Mode::F3)
}
