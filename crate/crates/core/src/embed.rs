//! The strong-embedding inequality as an LP-certified predicate over all
//! coefficient vectors, with its consequences: an extracted two-sided
//! equivalence constant, a monotone map between the windows' trees, and
//! near-isometric equivalence of the prefix basis with the selected window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basisnorm::{
    basis_constant, equivalence_between_norms, BasisConstant, EquivalenceReport,
};
use crate::ell1::{build_l1_tree, FnWindow};
use crate::error::{Error, Result};
use crate::polylin::{check_pwl_dominance, DominanceReport, Rat, WeightedL1};
use crate::seqtree::check_monotone;
use crate::stepfn::{combination_norm, prefix_max_norm};

/// The inequality's slack weights `1/2^(n+1)`, one per window position.
pub fn srce1_slack(len: usize) -> Result<WeightedL1> {
    WeightedL1::new((0..len).map(|n| Rat::pow2_recip(n as u32 + 1)).collect())
}

/// Proof object for one run of the inequality
/// `|max_i ||sum_{n<=i} a_n g_n|| - ||sum_n a_n f_n||| <= eps sum |a_n|/2^(n+1)`
/// over all coefficient vectors: one dominance report per direction, each
/// carrying an exact witness on failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrongEmbeddingCertificate {
    pub eps: Rat,
    pub g: FnWindow,
    pub f_sel: FnWindow,
    /// Prefix-maximum norm of g against the combination norm of the
    /// selection, plus slack.
    pub forward: DominanceReport,
    /// The reverse direction.
    pub backward: DominanceReport,
}

impl StrongEmbeddingCertificate {
    pub fn holds(&self) -> bool {
        self.forward.holds && self.backward.holds
    }
}

/// Decides the inequality for every coefficient vector via two piecewise
/// linear dominance checks; `eps >= 0` exact.
pub fn check_srce1(g: &FnWindow, f_sel: &FnWindow, eps: &Rat) -> Result<StrongEmbeddingCertificate> {
    if g.len() != f_sel.len() {
        return Err(Error::ArityMismatch {
            expected: g.len(),
            got: f_sel.len(),
        });
    }
    if eps.is_negative() {
        return Err(Error::BadArgument(format!(
            "slack scale must be nonnegative, got {eps}"
        )));
    }
    let prefix = prefix_max_norm(g.fns())?;
    let full = combination_norm(f_sel.fns())?;
    let slack = srce1_slack(g.len())?;
    Ok(StrongEmbeddingCertificate {
        eps: eps.clone(),
        g: g.clone(),
        f_sel: f_sel.clone(),
        forward: check_pwl_dominance(&prefix, &full, &slack, eps)?,
        backward: check_pwl_dominance(&full, &prefix, &slack, eps)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtractionReport {
    pub holds: bool,
    /// Basis constant K of the g-window.
    pub basis_constant: Rat,
    /// The asserted bound 2K.
    pub bound: Rat,
    pub equivalence: EquivalenceReport,
}

/// For normalized basic g with constant K and an embedding certified at
/// `eps < 1/(4K)`, re-derives that g and the selection are 2K-equivalent.
pub fn extract_2k_equivalence(
    g: &FnWindow,
    f_sel: &FnWindow,
    eps: &Rat,
) -> Result<ExtractionReport> {
    let k = match basis_constant(g.fns())? {
        BasisConstant::Basic(k) => k,
        BasisConstant::NotBasic => return Err(Error::NotBasic),
    };
    if let Some(i) = g.fns().iter().position(|f| f.sup_norm() != Rat::one()) {
        return Err(Error::PreconditionFailed(format!(
            "window entry {i} is not normalized"
        )));
    }
    let limit = (Rat::from_int(4) * &k).recip();
    if *eps >= limit {
        return Err(Error::PreconditionFailed(format!(
            "need eps < 1/(4K) = {limit}, got {eps}"
        )));
    }
    let certificate = check_srce1(g, f_sel, eps)?;
    if !certificate.holds() {
        return Err(Error::PreconditionFailed(format!(
            "the embedding inequality fails at eps = {eps}"
        )));
    }
    let equivalence = equivalence_between_norms(
        &combination_norm(g.fns())?,
        &combination_norm(f_sel.fns())?,
    )?;
    let bound = Rat::from_int(2) * &k;
    let holds = equivalence.best().map(|c| c <= bound).unwrap_or(false);
    Ok(ExtractionReport {
        holds,
        basis_constant: k,
        bound,
        equivalence,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotoneMapReport {
    pub holds: bool,
    pub g_tree_order: usize,
    pub f_tree_order: usize,
    /// Nodes of the g-tree whose image fails the 2d-membership test; empty
    /// on a pass.
    pub escaped: Vec<Vec<usize>>,
    pub witness: BTreeMap<Vec<usize>, Vec<usize>>,
}

/// Builds the witness `(m_0 < ... < m_j) -> (l_{m_0} < ... < l_{m_j})` and
/// verifies it maps the scale-d tree of g monotonely into the scale-2d tree
/// of f, so the g-tree order is bounded by the f-tree order. Requires
/// `eps < 1/(2d)` and a holding embedding certificate for the selection.
/// Both trees are truncated at the g-window length.
pub fn monotone_map_iv(
    g: &FnWindow,
    f: &FnWindow,
    selection: &[usize],
    eps: &Rat,
    d: &Rat,
) -> Result<MonotoneMapReport> {
    if selection.len() != g.len() {
        return Err(Error::ArityMismatch {
            expected: g.len(),
            got: selection.len(),
        });
    }
    let limit = (Rat::from_int(2) * d).recip();
    if *eps >= limit {
        return Err(Error::PreconditionFailed(format!(
            "need eps < 1/(2d) = {limit}, got {eps}"
        )));
    }
    let f_sel = f.select(selection)?;
    let certificate = check_srce1(g, &f_sel, eps)?;
    if !certificate.holds() {
        return Err(Error::PreconditionFailed(format!(
            "the embedding inequality fails at eps = {eps}"
        )));
    }

    let t_g = build_l1_tree(g, d, g.len())?;
    let double = Rat::from_int(2) * d;
    let t_f = build_l1_tree(f, &double, g.len())?;
    let witness: BTreeMap<Vec<usize>, Vec<usize>> = t_g
        .nodes()
        .map(|s| (s.clone(), s.iter().map(|&m| selection[m]).collect()))
        .collect();

    let (holds, escaped) = match check_monotone(&witness, &t_g, &t_f) {
        Ok(ok) => (ok, Vec::new()),
        Err(Error::ImageOutsideTarget { .. }) => {
            let escaped: Vec<Vec<usize>> = witness
                .iter()
                .filter(|(_, image)| !t_f.contains(image))
                .map(|(s, _)| s.clone())
                .collect();
            (false, escaped)
        }
        Err(e) => return Err(e),
    };
    Ok(MonotoneMapReport {
        holds,
        g_tree_order: t_g.order(),
        f_tree_order: t_f.order(),
        escaped,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NearIsometryReport {
    pub holds: bool,
    /// Requested closeness: the two-sided constant must be at most 1 + eps.
    pub eps: Rat,
    /// Largest schedule entry `eps/2^j` at which the inequality still
    /// certifies; the search descends while it holds.
    pub eps_used: Rat,
    pub equivalence: EquivalenceReport,
}

/// Certifies the embedding at the smallest slack on a descending schedule
/// `eps/2^j`, `j = 0..=10`, then checks that the prefix-maximum norm of g
/// and the combination norm of the selection are (1+eps)-equivalent.
pub fn check_propnew(g: &FnWindow, f_sel: &FnWindow, eps: &Rat) -> Result<NearIsometryReport> {
    if !eps.is_positive() {
        return Err(Error::BadArgument(format!(
            "closeness scale must be positive, got {eps}"
        )));
    }
    let mut eps_used: Option<Rat> = None;
    for j in 0..=10u32 {
        let probe = eps.clone() * Rat::pow2_recip(j);
        if check_srce1(g, f_sel, &probe)?.holds() {
            eps_used = Some(probe);
        } else {
            break;
        }
    }
    let eps_used = eps_used.ok_or_else(|| Error::ScheduleExhausted(eps.to_string()))?;
    let equivalence = equivalence_between_norms(
        &prefix_max_norm(g.fns())?,
        &combination_norm(f_sel.fns())?,
    )?;
    let bound = Rat::one() + eps;
    let holds = equivalence.best().map(|c| c <= bound).unwrap_or(false);
    Ok(NearIsometryReport {
        holds,
        eps: eps.clone(),
        eps_used,
        equivalence,
    })
}

/// If every coordinate of r is within delta of theta, the maxima are within
/// `max delta`: checked arithmetic, no LP.
pub fn max_diff_lemma(r: &[Rat], theta: &[Rat], delta: &[Rat]) -> Result<bool> {
    if r.len() != theta.len() || r.len() != delta.len() {
        return Err(Error::ArityMismatch {
            expected: r.len(),
            got: theta.len().max(delta.len()),
        });
    }
    if r.is_empty() {
        return Err(Error::EmptyInput("lemma vectors"));
    }
    for (i, ((ri, ti), di)) in r.iter().zip(theta).zip(delta).enumerate() {
        if !ri.is_positive() || !ti.is_positive() || !di.is_positive() {
            return Err(Error::PreconditionFailed(format!(
                "entries must be positive, offending index {i}"
            )));
        }
        if (ri.clone() - ti).abs() > *di {
            return Err(Error::PreconditionFailed(format!(
                "|r - theta| exceeds delta at index {i}"
            )));
        }
    }
    let max = |xs: &[Rat]| xs.iter().cloned().reduce(Rat::max).unwrap();
    Ok((max(r) - max(theta)).abs() <= max(delta))
}
