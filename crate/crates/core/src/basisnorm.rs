//! Basis constants for function windows, two-sided norm equivalence, and the
//! prefix-maximum norm with its coordinate basis.

use serde::Serialize;

use crate::ell1::FnWindow;
use crate::error::{Error, Result};
use crate::par::map_ordered;
use crate::polylin::{
    sup_norm_over_unit_ball, PwlNorm, Rat, SupOverBall,
};
use crate::stepfn::{combination_norm, prefix_max_norm, StepFn};

/// Least K bounding every prefix sum against every longer sum, or the
/// verdict that no such K exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasisConstant {
    Basic(Rat),
    NotBasic,
}

impl BasisConstant {
    pub fn constant(&self) -> Option<&Rat> {
        match self {
            BasisConstant::Basic(k) => Some(k),
            BasisConstant::NotBasic => None,
        }
    }
}

fn validate_window_like(fns: &[StepFn]) -> Result<()> {
    if fns.is_empty() {
        return Err(Error::EmptyInput("function list"));
    }
    for (i, f) in fns.iter().enumerate() {
        if f.space() != fns[0].space() {
            return Err(Error::SpaceMismatch);
        }
        if f.is_zero() {
            return Err(Error::ZeroFunction(i));
        }
    }
    Ok(())
}

/// The combination norm of `fns[..=m]` viewed on `arity` coordinates, the
/// trailing ones ignored.
fn padded_combination_norm(fns: &[StepFn], m: usize, arity: usize) -> Result<PwlNorm> {
    let short = combination_norm(&fns[..=m])?;
    let rows = short
        .pieces()
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.resize(arity, Rat::zero());
            r
        })
        .collect();
    PwlNorm::new(arity, rows)
}

/// Least K with `||sum_{n<=m} a_n f_n|| <= K ||sum_{n<=k} a_n f_n||` over all
/// `m < k` and all coefficient vectors, as a max of per-pair ball suprema.
/// `NotBasic` when any supremum is unbounded (some longer sum degenerates on
/// a direction a prefix sees). Duplicates are allowed here, unlike in
/// `FnWindow`; a repeated function is the canonical non-basic input.
pub fn basis_constant(fns: &[StepFn]) -> Result<BasisConstant> {
    validate_window_like(fns)?;
    let mut pairs = Vec::new();
    for k in 1..fns.len() {
        for m in 0..k {
            pairs.push((m, k));
        }
    }
    let sups = map_ordered(&pairs, |&(m, k)| -> Result<SupOverBall> {
        let prefix = padded_combination_norm(fns, m, k + 1)?;
        let full = combination_norm(&fns[..=k])?;
        sup_norm_over_unit_ball(&prefix, &full)
    });
    // Trailing zeros turn the k-sum into the m-sum, so every pair supremum
    // is at least 1 and the empty-pair case (single function) is exactly 1.
    let mut best = Rat::one();
    for sup in sups {
        match sup? {
            SupOverBall::Bounded(v) => best = best.max(v),
            SupOverBall::Unbounded => return Ok(BasisConstant::NotBasic),
        }
    }
    Ok(BasisConstant::Basic(best))
}

/// Two-sided comparison of norms on a shared coordinate space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// Least C with `x <= C y`, when bounded.
    pub forward: SupOverBall,
    /// Least C with `y <= C x`, when bounded.
    pub backward: SupOverBall,
}

impl EquivalenceReport {
    /// The equivalence constant `max(forward, backward)`; `None` when either
    /// direction is unbounded. At least 1 for nonzero norms.
    pub fn best(&self) -> Option<Rat> {
        match (self.forward.bounded(), self.backward.bounded()) {
            (Some(f), Some(b)) => Some(f.clone().max(b.clone())),
            _ => None,
        }
    }
}

pub fn equivalence_between_norms(x: &PwlNorm, y: &PwlNorm) -> Result<EquivalenceReport> {
    Ok(EquivalenceReport {
        forward: sup_norm_over_unit_ball(x, y)?,
        backward: sup_norm_over_unit_ball(y, x)?,
    })
}

/// Equivalence constants between the combination norms of two windows of
/// equal length.
pub fn equivalence_constants(x: &FnWindow, y: &FnWindow) -> Result<EquivalenceReport> {
    if x.len() != y.len() {
        return Err(Error::ArityMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    equivalence_between_norms(&combination_norm(x.fns())?, &combination_norm(y.fns())?)
}

/// A window together with its prefix-maximum norm
/// `||x|| = max_k ||sum_{n<=k} x(n) g_n||`, the norm under which the
/// coordinate vectors form a monotone basis.
#[derive(Clone, Debug)]
pub struct PrefixNormSystem {
    window: FnWindow,
    norm: PwlNorm,
}

impl PrefixNormSystem {
    pub fn new(window: FnWindow) -> Result<Self> {
        let norm = prefix_max_norm(window.fns())?;
        Ok(PrefixNormSystem { window, norm })
    }

    pub fn window(&self) -> &FnWindow {
        &self.window
    }

    pub fn norm(&self) -> &PwlNorm {
        &self.norm
    }

    /// Exact prefix-maximum norm of a coefficient vector supported within
    /// the window; shorter vectors are read as zero-padded.
    pub fn prefix_norm(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() > self.window.len() {
            return Err(Error::BadArgument(format!(
                "support of length {} escapes the window of length {}",
                x.len(),
                self.window.len()
            )));
        }
        let mut padded = x.to_vec();
        padded.resize(self.window.len(), Rat::zero());
        Ok(self.norm.eval(&padded))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1Report {
    pub holds: bool,
    /// Basis constant of the coordinate vectors under the prefix norm,
    /// exactly 1 when the check passes.
    pub coordinate_basis_constant: Rat,
    /// `||e_n|| = ||g_n||` under the prefix norm, so the coordinate basis is
    /// normalized exactly when the window is.
    pub coordinate_norms: Vec<Rat>,
    pub window_norms: Vec<Rat>,
}

/// Checks that the coordinate vectors form a monotone basis for the prefix
/// norm: basis constant exactly 1, and coordinate norms equal to the window
/// sup norms.
pub fn verify_p1(sys: &PrefixNormSystem) -> Result<P1Report> {
    let g = sys.window().fns();
    let len = g.len();

    let mut pairs = Vec::new();
    for k in 1..len {
        for m in 0..k {
            pairs.push((m, k));
        }
    }
    let sups = map_ordered(&pairs, |&(m, k)| -> Result<SupOverBall> {
        let short = prefix_max_norm(&g[..=m])?;
        let rows = short
            .pieces()
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.resize(k + 1, Rat::zero());
                r
            })
            .collect();
        let prefix = PwlNorm::new(k + 1, rows)?;
        let full = prefix_max_norm(&g[..=k])?;
        sup_norm_over_unit_ball(&prefix, &full)
    });
    let mut constant = Rat::one();
    for sup in sups {
        match sup? {
            SupOverBall::Bounded(v) => constant = constant.max(v),
            SupOverBall::Unbounded => {
                return Err(Error::PreconditionFailed(
                    "prefix norm degenerate on a coordinate direction".into(),
                ))
            }
        }
    }

    let mut coordinate_norms = Vec::with_capacity(len);
    for n in 0..len {
        let mut e = vec![Rat::zero(); len];
        e[n] = Rat::one();
        coordinate_norms.push(sys.prefix_norm(&e)?);
    }
    let window_norms: Vec<Rat> = g.iter().map(StepFn::sup_norm).collect();

    Ok(P1Report {
        holds: constant == Rat::one() && coordinate_norms == window_norms,
        coordinate_basis_constant: constant,
        coordinate_norms,
        window_norms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P2Report {
    pub holds: bool,
    pub basis_constant: Rat,
    pub equivalence: EquivalenceReport,
}

/// For a basic window with constant K, checks that the prefix-norm
/// coordinate basis is K-equivalent to the window itself: the two-sided
/// constant between the prefix-maximum norm and the combination norm is at
/// most K.
pub fn verify_p2(w: &FnWindow) -> Result<P2Report> {
    let k = match basis_constant(w.fns())? {
        BasisConstant::Basic(k) => k,
        BasisConstant::NotBasic => return Err(Error::NotBasic),
    };
    let equivalence = equivalence_between_norms(
        &prefix_max_norm(w.fns())?,
        &combination_norm(w.fns())?,
    )?;
    let holds = equivalence.best().map(|c| c <= k).unwrap_or(false);
    Ok(P2Report {
        holds,
        basis_constant: k,
        equivalence,
    })
}
