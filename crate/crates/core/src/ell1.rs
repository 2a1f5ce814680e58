//! Trees of index tuples whose function sub-lists are d-equivalent to the
//! unit ell-1 basis, the glued tree over a range of d, and its order.
//!
//! Computed trees are windowed: the index range is the window and node length
//! is capped, so every order here is a lower approximation of the rank of the
//! corresponding unbounded tree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::map_ordered;
use crate::polylin::{min_norm_over_l1_sphere, PwlNorm, Rat};
use crate::seqtree::{glue, SeqTree};
use crate::stepfn::{combination_norm, AtomSpace, StepFn};

/// A finite window of functions on one atom space: nonzero, pairwise
/// distinct, every sup norm at most 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<StepFn>", into = "Vec<StepFn>")]
pub struct FnWindow {
    fns: Vec<StepFn>,
}

impl FnWindow {
    pub fn new(fns: Vec<StepFn>) -> Result<Self> {
        if fns.is_empty() {
            return Err(Error::EmptyInput("function window"));
        }
        let space = fns[0].space().clone();
        for (i, f) in fns.iter().enumerate() {
            if *f.space() != space {
                return Err(Error::SpaceMismatch);
            }
            if f.is_zero() {
                return Err(Error::ZeroFunction(i));
            }
            if f.sup_norm() > Rat::one() {
                return Err(Error::NormExceedsOne(i));
            }
        }
        for i in 0..fns.len() {
            for j in i + 1..fns.len() {
                if fns[i] == fns[j] {
                    return Err(Error::DuplicateFunction(i, j));
                }
            }
        }
        Ok(FnWindow { fns })
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }

    pub fn fns(&self) -> &[StepFn] {
        &self.fns
    }

    pub fn space(&self) -> &AtomSpace {
        self.fns[0].space()
    }

    /// Sub-window along strictly increasing in-range indices.
    pub fn select(&self, indices: &[usize]) -> Result<FnWindow> {
        if indices.is_empty() {
            return Err(Error::EmptyInput("selection"));
        }
        for pair in indices.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::BadArgument(format!(
                    "selection must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= self.fns.len()) {
            return Err(Error::BadArgument(format!(
                "selection index {i} outside window of length {}",
                self.fns.len()
            )));
        }
        FnWindow::new(indices.iter().map(|&i| self.fns[i].clone()).collect())
    }
}

impl TryFrom<Vec<StepFn>> for FnWindow {
    type Error = Error;

    fn try_from(fns: Vec<StepFn>) -> Result<Self> {
        FnWindow::new(fns)
    }
}

impl From<FnWindow> for Vec<StepFn> {
    fn from(w: FnWindow) -> Self {
        w.fns
    }
}

/// Best constants tying a function list to the unit ell-1 basis: the list is
/// d-equivalent iff `lower >= 1/d` and `upper <= d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct L1Constants {
    pub lower: Rat,
    pub upper: Rat,
}

/// Exact constants for a sub-list. The upper constant is `max ||f_i||` (the
/// sup of `||sum a f|| / sum |a|` is attained at a sphere vertex); the lower
/// constant is the exact minimum of the combination norm over the unit
/// ell-1 sphere.
pub fn l1_equivalence_constants(sub: &[StepFn]) -> Result<L1Constants> {
    let norm = combination_norm(sub)?;
    let upper = sub
        .iter()
        .map(StepFn::sup_norm)
        .max()
        .expect("combination_norm rejects empty input");
    let lower = min_norm_over_l1_sphere(&norm, &vec![Rat::one(); sub.len()])?;
    Ok(L1Constants { lower, upper })
}

/// Whether the sub-list is d-equivalent to the unit ell-1 basis, `d >= 1`.
pub fn is_l1_equivalent(sub: &[StepFn], d: &Rat) -> Result<bool> {
    if *d < Rat::one() {
        return Err(Error::BadArgument(format!(
            "equivalence scale must be at least 1, got {d}"
        )));
    }
    let c = l1_equivalence_constants(sub)?;
    Ok(c.lower >= d.recip() && c.upper <= *d)
}

/// Atom value table of the window, one row per atom, duplicate rows merged.
/// Projecting a row set to a tuple's columns and re-canonicalizing gives the
/// same piece set as building the combination norm of the sub-list directly.
fn window_matrix(w: &FnWindow) -> Vec<Vec<Rat>> {
    let atoms = w.space().atom_count();
    let mut rows: Vec<Vec<Rat>> = (0..atoms)
        .map(|x| w.fns().iter().map(|f| f.values()[x].clone()).collect())
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

fn tuple_is_equivalent(
    matrix: &[Vec<Rat>],
    sups: &[Rat],
    tuple: &[usize],
    d: &Rat,
) -> Result<bool> {
    let upper = tuple
        .iter()
        .map(|&i| sups[i].clone())
        .max()
        .expect("tuples under test are non-empty");
    if upper > *d {
        return Ok(false);
    }
    let rows: Vec<Vec<Rat>> = matrix
        .iter()
        .map(|r| tuple.iter().map(|&i| r[i].clone()).collect())
        .collect();
    let norm = PwlNorm::new(tuple.len(), rows)?;
    let lower = min_norm_over_l1_sphere(&norm, &vec![Rat::one(); tuple.len()])?;
    Ok(lower >= d.recip())
}

/// The tree of strictly increasing index tuples (length at most `max_len`)
/// whose sub-lists are d-equivalent to the unit ell-1 basis.
///
/// Grown breadth-first from the root, extending member nodes only: dropping
/// the last index of a member keeps membership (zero out the trailing
/// coefficient for the lower constant; the upper constant is a max over a
/// smaller set), so no node outside the grown set can be a member.
/// Membership tests within a level are independent and fan out.
pub fn build_l1_tree(w: &FnWindow, d: &Rat, max_len: usize) -> Result<SeqTree> {
    if *d < Rat::one() {
        return Err(Error::BadArgument(format!(
            "equivalence scale must be at least 1, got {d}"
        )));
    }
    let matrix = window_matrix(w);
    let sups: Vec<Rat> = w.fns().iter().map(StepFn::sup_norm).collect();
    let mut nodes: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        for node in &frontier {
            if node.len() >= max_len {
                continue;
            }
            let start = node.last().map_or(0, |&i| i + 1);
            for i in start..w.len() {
                let mut child = node.clone();
                child.push(i);
                candidates.push(child);
            }
        }
        let verdicts = map_ordered(&candidates, |c| tuple_is_equivalent(&matrix, &sups, c, d));
        let mut next = Vec::new();
        for (child, verdict) in candidates.into_iter().zip(verdicts) {
            if verdict? {
                nodes.push(child.clone());
                next.push(child);
            }
        }
        frontier = next;
    }
    SeqTree::from_nodes(nodes)
}

/// Glue of the trees for integer scales `1..=d_max`, with the scale-d tree
/// hanging under the root child labeled d.
pub fn build_glued_tree(w: &FnWindow, d_max: usize, max_len: usize) -> Result<SeqTree> {
    if d_max == 0 {
        return Err(Error::BadArgument(
            "scale range must contain at least d = 1".into(),
        ));
    }
    let mut components = BTreeMap::new();
    for d in 1..=d_max {
        components.insert(d, build_l1_tree(w, &Rat::from_int(d as i64), max_len)?);
    }
    glue(&components)
}

/// Order of the glued tree over scales `1..=d_max`.
pub fn rank(w: &FnWindow, d_max: usize, max_len: usize) -> Result<usize> {
    Ok(build_glued_tree(w, d_max, max_len)?.order())
}
