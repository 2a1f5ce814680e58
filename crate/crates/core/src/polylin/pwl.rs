use serde::{Deserialize, Serialize};

use super::lp::{Constraint, LinearProgram, LpSolution, Relation, solve_lp};
use super::rat::Rat;
use crate::error::{Error, Result};

/// Norm given as `a -> max_j |l_j(a)|` over finitely many rational linear
/// functionals. Pieces are kept sign-canonical (first nonzero entry
/// positive), sorted and deduplicated; all-zero pieces are dropped unless the
/// norm is identically zero, which keeps a single zero piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwlNorm {
    arity: usize,
    pieces: Vec<Vec<Rat>>,
}

impl PwlNorm {
    pub fn new(arity: usize, raw: Vec<Vec<Rat>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::BadArgument("norm arity must be positive".into()));
        }
        if raw.is_empty() {
            return Err(Error::EmptyInput("piece list"));
        }
        let mut pieces: Vec<Vec<Rat>> = Vec::new();
        for mut p in raw {
            if p.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: p.len(),
                });
            }
            match p.iter().find(|v| !v.is_zero()) {
                None => continue,
                Some(first) => {
                    if first.is_negative() {
                        for v in p.iter_mut() {
                            *v = -&*v;
                        }
                    }
                }
            }
            pieces.push(p);
        }
        if pieces.is_empty() {
            pieces.push(vec![Rat::zero(); arity]);
        }
        pieces.sort();
        pieces.dedup();
        Ok(PwlNorm { arity, pieces })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn pieces(&self) -> &[Vec<Rat>] {
        &self.pieces
    }

    pub fn is_zero_norm(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].iter().all(Rat::is_zero)
    }

    pub fn eval(&self, a: &[Rat]) -> Rat {
        assert_eq!(a.len(), self.arity, "eval arity mismatch");
        self.pieces
            .iter()
            .map(|p| dot(p, a).abs())
            .max()
            .expect("non-empty piece list")
    }
}

fn dot(p: &[Rat], a: &[Rat]) -> Rat {
    p.iter().zip(a).map(|(x, y)| x * y).sum()
}

/// Weighted l1 functional `a -> sum_n w_n |a_n|` with strictly positive
/// weights, used as the slack side of dominance checks. Kept separate from
/// `PwlNorm`: spelling it as max-of-pieces would need 2^arity functionals,
/// while the LP encoding below needs one epigraph variable per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedL1 {
    weights: Vec<Rat>,
}

impl WeightedL1 {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("weight vector"));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::BadArgument(format!(
                "weight {i} must be strictly positive"
            )));
        }
        Ok(WeightedL1 { weights })
    }

    pub fn uniform(arity: usize) -> Self {
        WeightedL1 {
            weights: vec![Rat::one(); arity],
        }
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn eval(&self, a: &[Rat]) -> Rat {
        assert_eq!(a.len(), self.weights.len(), "eval arity mismatch");
        self.weights
            .iter()
            .zip(a)
            .map(|(w, x)| w * &x.abs())
            .sum()
    }
}

/// One-sided comparison constant `sup { A(a) : B(a) <= 1 }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupOverBall {
    Bounded(Rat),
    Unbounded,
}

impl SupOverBall {
    pub fn bounded(&self) -> Option<&Rat> {
        match self {
            SupOverBall::Bounded(v) => Some(v),
            SupOverBall::Unbounded => None,
        }
    }
}

/// Exact supremum of A over the unit ball of B, one LP per piece of A.
/// The ball is symmetric under `a -> -a`, so each sign-canonical piece covers
/// its negation. Degenerate B (ball unbounded in a direction A sees) comes
/// back as `Unbounded`, never clamped.
pub fn sup_norm_over_unit_ball(a: &PwlNorm, b: &PwlNorm) -> Result<SupOverBall> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
        });
    }
    let mut constraints = Vec::with_capacity(2 * b.pieces().len());
    for m in b.pieces() {
        constraints.push(Constraint::new(m.clone(), Relation::Le, Rat::one()));
        let neg: Vec<Rat> = m.iter().map(|v| -v).collect();
        constraints.push(Constraint::new(neg, Relation::Le, Rat::one()));
    }
    let mut best = Rat::zero();
    for l in a.pieces() {
        let lp = LinearProgram::new(l.clone(), constraints.clone());
        match solve_lp(&lp) {
            LpSolution::Optimal { value, .. } => best = best.max(value),
            LpSolution::Unbounded => return Ok(SupOverBall::Unbounded),
            LpSolution::Infeasible => unreachable!("the origin is always in the unit ball"),
        }
    }
    Ok(SupOverBall::Bounded(best))
}

/// Exact minimum of A over the sphere `sum_n w_n |a_n| = 1`, one LP per sign
/// orthant face. The substitution `a_n = sign_n * b_n` with `b >= 0` makes
/// each face a simplex; fixing the first sign positive uses the `a <-> -a`
/// symmetry to halve the face count. On a face, any piece vector dominated
/// componentwise by another can never attain the max and its epigraph rows
/// are dropped before solving.
pub fn min_norm_over_l1_sphere(a: &PwlNorm, weights: &[Rat]) -> Result<Rat> {
    let v = a.arity();
    if weights.len() != v {
        return Err(Error::ArityMismatch {
            expected: v,
            got: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
        return Err(Error::BadArgument(format!(
            "sphere weight {i} must be strictly positive"
        )));
    }

    let mut best: Option<Rat> = None;
    for mask in 0u64..(1u64 << (v - 1)) {
        let signs: Vec<bool> = std::iter::once(true)
            .chain((0..v - 1).map(|i| mask & (1 << i) == 0))
            .collect();

        let mut face_vecs: Vec<Vec<Rat>> = Vec::new();
        for p in a.pieces() {
            let tilted: Vec<Rat> = p
                .iter()
                .zip(&signs)
                .map(|(x, &pos)| if pos { x.clone() } else { -x })
                .collect();
            let neg: Vec<Rat> = tilted.iter().map(|x| -x).collect();
            face_vecs.push(tilted);
            face_vecs.push(neg);
        }
        face_vecs.sort();
        face_vecs.dedup();
        let kept: Vec<&Vec<Rat>> = face_vecs
            .iter()
            .filter(|u| {
                !face_vecs
                    .iter()
                    .any(|w| w != *u && w.iter().zip(u.iter()).all(|(a, b)| a >= b))
            })
            .collect();

        // Variables: b_0..b_{v-1} >= 0, then t >= 0. Minimize t via max -t.
        let mut objective = vec![Rat::zero(); v + 1];
        objective[v] = -Rat::one();
        let mut constraints = Vec::with_capacity(kept.len() + 1);
        for u in kept {
            let mut row = (*u).clone();
            row.push(-Rat::one());
            constraints.push(Constraint::new(row, Relation::Le, Rat::zero()));
        }
        let mut sphere = weights.to_vec();
        sphere.push(Rat::zero());
        constraints.push(Constraint::new(sphere, Relation::Eq, Rat::one()));
        let bounds = vec![(Some(Rat::zero()), None); v + 1];
        let lp = LinearProgram::new(objective, constraints).with_bounds(bounds);
        let face_min = match solve_lp(&lp) {
            LpSolution::Optimal { value, .. } => -value,
            other => unreachable!("face LP is feasible and bounded, got {other:?}"),
        };
        best = Some(match best {
            None => face_min,
            Some(b) => b.min(face_min),
        });
    }
    Ok(best.expect("at least one face"))
}

/// Exact counterexample to a dominance claim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominanceViolation {
    pub witness: Vec<Rat>,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominanceReport {
    pub holds: bool,
    /// `max over the unit box of A(a) - B(a) - eps * slack(a)`; dominance is
    /// `margin <= 0`, and 1-homogeneity extends the box verdict to all of R^n.
    pub margin: Rat,
    pub violation: Option<DominanceViolation>,
}

/// Decides `A(a) <= B(a) + eps * slack(a)` for every `a`, by one LP per piece
/// of A over the box `-1 <= a <= 1`. The box, B's epigraph rows and the slack
/// rows are all symmetric under `a -> -a`, so sign-canonical pieces of A
/// suffice.
pub fn check_pwl_dominance(
    a: &PwlNorm,
    b: &PwlNorm,
    slack: &WeightedL1,
    eps: &Rat,
) -> Result<DominanceReport> {
    let v = a.arity();
    if b.arity() != v {
        return Err(Error::ArityMismatch {
            expected: v,
            got: b.arity(),
        });
    }
    if slack.arity() != v {
        return Err(Error::ArityMismatch {
            expected: v,
            got: slack.arity(),
        });
    }
    if eps.is_negative() {
        return Err(Error::BadArgument("eps must be nonnegative".into()));
    }

    // Variables: a_0..a_{v-1} in [-1,1], t >= 0, u_0..u_{v-1} >= 0.
    let nvars = 2 * v + 1;
    let tcol = v;
    let ucol = |n: usize| v + 1 + n;

    let mut constraints = Vec::new();
    for m in b.pieces() {
        for sign in [false, true] {
            let mut row = vec![Rat::zero(); nvars];
            for (i, x) in m.iter().enumerate() {
                row[i] = if sign { -x } else { x.clone() };
            }
            row[tcol] = -Rat::one();
            constraints.push(Constraint::new(row, Relation::Le, Rat::zero()));
        }
    }
    for (n, w) in slack.weights().iter().enumerate() {
        for sign in [false, true] {
            let mut row = vec![Rat::zero(); nvars];
            row[n] = if sign { -w } else { w.clone() };
            row[ucol(n)] = -Rat::one();
            constraints.push(Constraint::new(row, Relation::Le, Rat::zero()));
        }
    }
    let mut bounds = vec![(Some(-Rat::one()), Some(Rat::one())); v];
    bounds.resize(nvars, (Some(Rat::zero()), None));

    let mut margin: Option<Rat> = None;
    let mut witness: Option<Vec<Rat>> = None;
    for l in a.pieces() {
        let mut objective = vec![Rat::zero(); nvars];
        objective[..v].clone_from_slice(l);
        objective[tcol] = -Rat::one();
        for n in 0..v {
            objective[ucol(n)] = -eps;
        }
        let lp = LinearProgram::new(objective, constraints.clone()).with_bounds(bounds.clone());
        let (value, point) = match solve_lp(&lp) {
            LpSolution::Optimal { value, point } => (value, point),
            other => unreachable!("dominance LP is feasible and bounded, got {other:?}"),
        };
        let improved = margin.as_ref().is_none_or(|m| value > *m);
        if improved {
            margin = Some(value);
            witness = Some(point[..v].to_vec());
        }
    }
    let margin = margin.expect("at least one piece");
    if margin.is_positive() {
        let w = witness.expect("witness accompanies the positive margin");
        let lhs = a.eval(&w);
        let rhs = b.eval(&w) + &(eps * &slack.eval(&w));
        assert!(
            lhs > rhs,
            "positive margin must re-substitute to a strict violation"
        );
        Ok(DominanceReport {
            holds: false,
            margin,
            violation: Some(DominanceViolation { witness: w, lhs, rhs }),
        })
    } else {
        Ok(DominanceReport {
            holds: true,
            margin,
            violation: None,
        })
    }
}
