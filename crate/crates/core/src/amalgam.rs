//! The universal construction: encode member windows as branches of a pair
//! tree over a dense window, realize the tree as tensor functions on a
//! product space, and certify that every encoded member strongly embeds into
//! the resulting sequence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ell1::FnWindow;
use crate::embed::{check_srce1, srce1_slack, StrongEmbeddingCertificate};
use crate::error::{Error, Result};
use crate::polylin::{check_pwl_dominance, DominanceReport, Rat};
use crate::stepfn::{
    combination_norm, lin_comb, prefix_max_norm, AtomSpace, BinWord, StepFn,
};

/// Tree node: per stage a (dense index, block index) pair.
pub type PairNode = Vec<(usize, usize)>;

fn show_pair_node(node: &[(usize, usize)]) -> String {
    let body: Vec<String> = node.iter().map(|(s, w)| format!("({s},{w})")).collect();
    format!("[{}]", body.join(""))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawPairTree {
    nodes: Vec<PairNode>,
    branches: Vec<PairNode>,
}

/// Finite downward-closed set of pair nodes pruned to its marked branches:
/// every node is a prefix of some branch. Branches keep their given order,
/// which pairs them with the members that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPairTree", into = "RawPairTree")]
pub struct PairTree {
    /// Sorted by (length, lex): breadth-first order.
    nodes: Vec<PairNode>,
    branches: Vec<PairNode>,
}

impl PairTree {
    pub fn new<I>(nodes: I, branches: Vec<PairNode>) -> Result<Self>
    where
        I: IntoIterator<Item = PairNode>,
    {
        let set: BTreeSet<PairNode> = nodes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyInput("pair tree"));
        }
        for node in &set {
            if !node.is_empty() && !set.contains(&node[..node.len() - 1]) {
                return Err(Error::BadArgument(format!(
                    "pair tree is not downward closed: {} present without its parent",
                    show_pair_node(node)
                )));
            }
        }
        for branch in &branches {
            if !set.contains(branch) {
                return Err(Error::BadArgument(format!(
                    "marked branch {} is not a tree node",
                    show_pair_node(branch)
                )));
            }
        }
        for node in &set {
            if !branches.iter().any(|b| b.starts_with(node)) {
                return Err(Error::BadArgument(format!(
                    "node {} lies below no marked branch",
                    show_pair_node(node)
                )));
            }
        }
        let mut nodes: Vec<PairNode> = set.into_iter().collect();
        nodes.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(PairTree { nodes, branches })
    }

    pub fn nodes(&self) -> &[PairNode] {
        &self.nodes
    }

    pub fn branches(&self) -> &[PairNode] {
        &self.branches
    }

    pub fn contains(&self, node: &[(usize, usize)]) -> bool {
        self.nodes.iter().any(|n| n == node)
    }
}

impl TryFrom<RawPairTree> for PairTree {
    type Error = Error;

    fn try_from(raw: RawPairTree) -> Result<Self> {
        PairTree::new(raw.nodes, raw.branches)
    }
}

impl From<PairTree> for RawPairTree {
    fn from(t: PairTree) -> Self {
        RawPairTree {
            nodes: t.nodes,
            branches: t.branches,
        }
    }
}

/// Candidate functions for tree nodes: nonzero, pairwise distinct, sup norm
/// at most 1, all on one dyadic space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<StepFn>", into = "Vec<StepFn>")]
pub struct DenseWindow {
    fns: Vec<StepFn>,
}

impl DenseWindow {
    pub fn new(fns: Vec<StepFn>) -> Result<Self> {
        if fns.is_empty() {
            return Err(Error::EmptyInput("dense window"));
        }
        if !matches!(fns[0].space(), AtomSpace::Dyadic(_)) {
            return Err(Error::BadArgument(
                "dense window must live on a dyadic space".into(),
            ));
        }
        for (i, f) in fns.iter().enumerate() {
            if f.space() != fns[0].space() {
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
        Ok(DenseWindow { fns })
    }

    pub fn fns(&self) -> &[StepFn] {
        &self.fns
    }

    pub fn len(&self) -> usize {
        self.fns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fns.is_empty()
    }

    pub fn space(&self) -> &AtomSpace {
        self.fns[0].space()
    }
}

impl TryFrom<Vec<StepFn>> for DenseWindow {
    type Error = Error;

    fn try_from(fns: Vec<StepFn>) -> Result<Self> {
        DenseWindow::new(fns)
    }
}

impl From<DenseWindow> for Vec<StepFn> {
    fn from(w: DenseWindow) -> Self {
        w.fns
    }
}

/// Every nonzero function on `dyadic(level)` with values in
/// `{0, 1/2, 1, -1/2, -1}`, enumerated as a base-5 counter over the atoms
/// (atom 0 least significant, digits in the value order just given). Levels
/// above 2 are rejected: the census grows as `5^(2^level)`.
pub fn grid_dense(level: u32) -> Result<DenseWindow> {
    if level > 2 {
        return Err(Error::BadArgument(format!(
            "grid dense window at level {level} would have 5^{} entries",
            1usize << level
        )));
    }
    let values = [
        Rat::zero(),
        Rat::new(1, 2),
        Rat::one(),
        Rat::new(-1, 2),
        -Rat::one(),
    ];
    let atoms = 1usize << level;
    let total = 5usize.pow(atoms as u32);
    let mut fns = Vec::with_capacity(total - 1);
    for code in 1..total {
        let mut digits = code;
        let vals: Vec<Rat> = (0..atoms)
            .map(|_| {
                let v = values[digits % 5].clone();
                digits /= 5;
                v
            })
            .collect();
        if vals.iter().all(Rat::is_zero) {
            continue;
        }
        fns.push(StepFn::new(AtomSpace::dyadic(level), vals)?);
    }
    DenseWindow::new(fns)
}

/// A window to encode, with the tolerance scale its branch must meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub window: FnWindow,
    pub eps: Rat,
}

impl Member {
    pub fn new(window: FnWindow, eps: Rat) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::BadArgument(format!(
                "member tolerance must be positive, got {eps}"
            )));
        }
        Ok(Member { window, eps })
    }
}

/// `blocks[n] = {m < range : m = n mod count}`: disjoint, covering, each
/// non-empty once `range >= count`.
pub fn build_partition(count: usize, range: usize) -> Result<Vec<Vec<usize>>> {
    if count == 0 {
        return Err(Error::BadArgument("partition needs at least one block".into()));
    }
    if range < count {
        return Err(Error::BadArgument(format!(
            "partition range {range} is smaller than the block count {count}"
        )));
    }
    let mut blocks = vec![Vec::new(); count];
    for m in 0..range {
        blocks[m % count].push(m);
    }
    Ok(blocks)
}

fn stage_count(members: &[Member]) -> Result<usize> {
    if members.is_empty() {
        return Err(Error::EmptyInput("member list"));
    }
    Ok(members.iter().map(|m| m.window.len()).max().unwrap())
}

/// Extends `base` so that every member admits a branch of the given depth:
/// per window position, one exact copy of the function plus scaled copies
/// `(1 - eta) g` with `eta` far below the tightest stage tolerance, enough
/// for the stages the position owns (fresh `eta` per copy keeps everything
/// distinct). Deterministic in its inputs.
pub fn enrich_for_members(
    base: &[StepFn],
    members: &[Member],
    depth: usize,
) -> Result<DenseWindow> {
    let count = stage_count(members)?;
    if depth < count {
        return Err(Error::BadArgument(format!(
            "depth {depth} cannot reach all {count} window positions"
        )));
    }
    let mut fns: Vec<StepFn> = base.to_vec();
    for member in members {
        let mut ladder = 0u32;
        let window_len = member.window.len();
        for n in 0..count {
            let stages = (n..depth).step_by(count).count();
            let g = &member.window.fns()[n.min(window_len - 1)];
            let mut pool = Vec::with_capacity(stages);
            if n < window_len {
                pool.push(g.clone());
            }
            while pool.len() < stages {
                // eta < eps/2^depth, so scaled copies pass every stage.
                let eta = member.eps.clone() * Rat::pow2_recip(depth as u32 + 1 + ladder);
                ladder += 1;
                let scaled = (Rat::one() - eta)
                    .pipe_scale(g)
                    .expect("scaling stays on the same space");
                pool.push(scaled);
            }
            for candidate in pool {
                if !fns.contains(&candidate) {
                    fns.push(candidate);
                }
            }
        }
    }
    DenseWindow::new(fns)
}

trait PipeScale {
    fn pipe_scale(&self, g: &StepFn) -> Result<StepFn>;
}

impl PipeScale for Rat {
    fn pipe_scale(&self, g: &StepFn) -> Result<StepFn> {
        lin_comb(std::slice::from_ref(self), std::slice::from_ref(g))
    }
}

/// One branch per member: stage k serves window position `k mod count`, and
/// the branch greedily takes the smallest dense index, unused on this branch,
/// within `eps/2^(k+1)` of that position's function (any unused index when
/// the position falls beyond the member's window). Prefixes of the branches
/// form the tree.
pub fn encode_members(
    members: &[Member],
    dense: &DenseWindow,
    depth: usize,
) -> Result<PairTree> {
    let count = stage_count(members)?;
    if depth < count {
        return Err(Error::BadArgument(format!(
            "depth {depth} cannot reach all {count} window positions"
        )));
    }
    for member in members {
        if member.window.space() != dense.space() {
            return Err(Error::SpaceMismatch);
        }
        if !member.eps.is_positive() {
            return Err(Error::BadArgument(format!(
                "member tolerance must be positive, got {}",
                member.eps
            )));
        }
    }

    let mut nodes: BTreeSet<PairNode> = BTreeSet::new();
    nodes.insert(Vec::new());
    let mut branches = Vec::with_capacity(members.len());
    for (mi, member) in members.iter().enumerate() {
        let mut used = BTreeSet::new();
        let mut branch: PairNode = Vec::with_capacity(depth);
        for k in 0..depth {
            let n = k % count;
            let choice = if n < member.window.len() {
                let tolerance = member.eps.clone() * Rat::pow2_recip(k as u32 + 1);
                let g = &member.window.fns()[n];
                let found = (0..dense.len()).find(|j| {
                    !used.contains(j) && {
                        let diff = lin_comb(
                            &[Rat::one(), -Rat::one()],
                            &[g.clone(), dense.fns()[*j].clone()],
                        )
                        .expect("dense and member share a space");
                        diff.sup_norm() <= tolerance
                    }
                });
                found.ok_or(Error::DenseTooCoarse {
                    member: mi,
                    stage: k,
                    fn_index: n,
                    tolerance: tolerance.to_string(),
                })?
            } else {
                (0..dense.len()).find(|j| !used.contains(j)).ok_or_else(|| {
                    Error::BadArgument(format!(
                        "dense window exhausted at stage {k} of member {mi}"
                    ))
                })?
            };
            used.insert(choice);
            branch.push((choice, n));
            nodes.insert(branch.clone());
        }
        branches.push(branch);
    }
    PairTree::new(nodes, branches)
}

/// Bookkeeping for one realized node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeInfo {
    pub node: PairNode,
    /// Image under the order embedding into binary words: the i-th child
    /// (breadth-first order) of a node appends `1^i 0` to its parent's word,
    /// so children are pairwise incomparable and prefixes are preserved
    /// exactly.
    pub word: BinWord,
    /// The zero function at the root, else the dense entry the node's last
    /// stage selected.
    pub h: StepFn,
}

/// The realized construction over a pair tree.
#[derive(Clone, Debug, Serialize)]
pub struct AmalgamOutput {
    pub tree: PairTree,
    pub dense: DenseWindow,
    /// Cylinder level of the first tensor factor: the longest word length.
    pub level: u32,
    /// Number of partition blocks (window positions served).
    pub count: usize,
    /// `blocks[n]` lists the stages serving position n.
    pub blocks: Vec<Vec<usize>>,
    /// Breadth-first enumeration; `nodes[0]` is the root.
    pub nodes: Vec<NodeInfo>,
    /// `f` for `nodes[1..]`: the function of `nodes[i]` sits at `f` index
    /// `i - 1` (the root's zero function is bookkeeping only).
    pub f: FnWindow,
}

impl AmalgamOutput {
    /// Breadth-first rank of a node.
    pub fn node_rank(&self, node: &[(usize, usize)]) -> Option<usize> {
        self.nodes.iter().position(|info| info.node == node)
    }
}

/// Realizes a pair tree: words by the child-index scheme, breadth-first
/// enumeration, `h` from the dense window, and
/// `f = (cylinder indicator at the word) tensor h` for every non-root node.
pub fn build_amalgam(tree: &PairTree, dense: &DenseWindow) -> Result<AmalgamOutput> {
    if tree.nodes().len() < 2 {
        return Err(Error::BadArgument(
            "pair tree needs at least one non-root node".into(),
        ));
    }
    for node in tree.nodes() {
        for &(s, w) in node {
            if s >= dense.len() {
                return Err(Error::BadArgument(format!(
                    "node {} selects dense index {s} outside the window",
                    show_pair_node(node)
                )));
            }
            let _ = w;
        }
    }
    let count = tree
        .nodes()
        .iter()
        .flat_map(|n| n.iter().map(|&(_, w)| w))
        .max()
        .expect("a non-root node exists")
        + 1;
    for node in tree.nodes() {
        if let Some(k) = (0..node.len()).find(|&k| node[k].1 != k % count) {
            return Err(Error::BadArgument(format!(
                "node {} labels stage {k} with block {}, expected {}",
                show_pair_node(node),
                node[k].1,
                k % count
            )));
        }
    }
    let range = tree.nodes().iter().map(Vec::len).max().unwrap();
    let blocks = build_partition(count, range)?;

    // Words first: parent word plus 1^i 0, i the child's rank among its
    // siblings in node order.
    let mut words: BTreeMap<PairNode, BinWord> = BTreeMap::new();
    words.insert(Vec::new(), BinWord::empty());
    let mut child_counts: BTreeMap<PairNode, usize> = BTreeMap::new();
    for node in tree.nodes() {
        if node.is_empty() {
            continue;
        }
        let parent = node[..node.len() - 1].to_vec();
        let rank = child_counts.entry(parent.clone()).or_insert(0);
        let mut word = words[&parent].clone();
        for _ in 0..*rank {
            word = word.child(true);
        }
        word = word.child(false);
        *rank += 1;
        words.insert(node.clone(), word);
    }
    let level = words.values().map(BinWord::len).max().unwrap() as u32;

    let mut nodes = Vec::with_capacity(tree.nodes().len());
    let mut f = Vec::with_capacity(tree.nodes().len() - 1);
    for node in tree.nodes() {
        let word = words[node].clone();
        let h = if node.is_empty() {
            StepFn::zero(dense.space().clone())?
        } else {
            dense.fns()[node.last().unwrap().0].clone()
        };
        if !node.is_empty() {
            let cylinder = StepFn::cylinder_indicator(level, &word)?;
            f.push(StepFn::tensor(&cylinder, &h)?);
        }
        nodes.push(NodeInfo {
            node: node.clone(),
            word,
            h,
        });
    }

    // The word map must be an order isomorphism onto its image.
    for a in &nodes {
        for b in &nodes {
            let node_prefix = a.node.len() < b.node.len() && b.node.starts_with(&a.node);
            let word_prefix = a.word.len() < b.word.len() && a.word.is_prefix_of(&b.word);
            assert_eq!(
                node_prefix, word_prefix,
                "word scheme broke the order at {} vs {}",
                show_pair_node(&a.node),
                show_pair_node(&b.node)
            );
        }
    }

    Ok(AmalgamOutput {
        tree: tree.clone(),
        dense: dense.clone(),
        level,
        count,
        blocks,
        nodes,
        f: FnWindow::new(f)?,
    })
}

/// Chain selection for one member along its branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSelection {
    /// Breadth-first ranks of the branch prefixes of length 1, 2, ...
    pub node_indices: Vec<usize>,
    /// The same nodes as indices into the f-window (rank minus the root).
    pub f_indices: Vec<usize>,
}

/// Selects the branch prefixes of length n+1 for each window position n and
/// re-checks the construction facts exactly: stage n serves block n, and the
/// node function is within `eps/2^(n+1)` of the member function.
pub fn select_chain(
    out: &AmalgamOutput,
    branch: &PairNode,
    member: &Member,
) -> Result<ChainSelection> {
    if !out.tree.branches().contains(branch) {
        return Err(Error::BadArgument(format!(
            "branch {} is not marked in the tree",
            show_pair_node(branch)
        )));
    }
    let len = member.window.len();
    if branch.len() < len {
        return Err(Error::BranchTooShort {
            depth: branch.len(),
            needed: len,
        });
    }
    let mut node_indices = Vec::with_capacity(len);
    let mut f_indices = Vec::with_capacity(len);
    for n in 0..len {
        // The chain picks the prefix of length m_n = n + 1, whose last stage
        // m_n - 1 = n must serve block n.
        if !out.blocks[n % out.count].contains(&n) {
            return Err(Error::PreconditionFailed(format!(
                "stage {n} does not lie in block {n}"
            )));
        }
        let node = &branch[..n + 1];
        let rank = out
            .node_rank(node)
            .expect("branch prefixes are tree nodes");
        let h = &out.nodes[rank].h;
        let g = &member.window.fns()[n];
        let distance = lin_comb(&[Rat::one(), -Rat::one()], &[g.clone(), h.clone()])?.sup_norm();
        let bound = member.eps.clone() * Rat::pow2_recip(n as u32 + 1);
        if distance > bound {
            return Err(Error::PreconditionFailed(format!(
                "node function for position {n} is {distance} from the member \
                 function, beyond {bound}"
            )));
        }
        if let Some(&prev) = node_indices.last() {
            assert!(prev < rank, "breadth-first ranks grow along a chain");
        }
        node_indices.push(rank);
        f_indices.push(rank - 1);
    }
    Ok(ChainSelection {
        node_indices,
        f_indices,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub holds: bool,
    pub forward: DominanceReport,
    pub backward: DominanceReport,
}

/// Exact equality of the prefix-maximum norm of the node-function chain with
/// the combination norm of the selected tensor functions: dominance both
/// ways at zero slack.
pub fn norm_identity_report(h_chain: &FnWindow, f_sel: &FnWindow) -> Result<IdentityReport> {
    if h_chain.len() != f_sel.len() {
        return Err(Error::ArityMismatch {
            expected: h_chain.len(),
            got: f_sel.len(),
        });
    }
    let prefix = prefix_max_norm(h_chain.fns())?;
    let full = combination_norm(f_sel.fns())?;
    let slack = srce1_slack(h_chain.len())?;
    let zero = Rat::zero();
    let forward = check_pwl_dominance(&prefix, &full, &slack, &zero)?;
    let backward = check_pwl_dominance(&full, &prefix, &slack, &zero)?;
    Ok(IdentityReport {
        holds: forward.holds && backward.holds,
        forward,
        backward,
    })
}

/// The norm identity along a selected chain of the built construction.
pub fn verify_norm_identity(
    out: &AmalgamOutput,
    selection: &ChainSelection,
) -> Result<IdentityReport> {
    let h_chain = FnWindow::new(
        selection
            .node_indices
            .iter()
            .map(|&r| out.nodes[r].h.clone())
            .collect(),
    )?;
    let f_sel = out.f.select(&selection.f_indices)?;
    norm_identity_report(&h_chain, &f_sel)
}

/// Full strong-embedding certificate for one encoded member: select its
/// chain, then certify the inequality at the member's own tolerance.
pub fn verify_member_strong_embedding(
    out: &AmalgamOutput,
    branch: &PairNode,
    member: &Member,
) -> Result<StrongEmbeddingCertificate> {
    let selection = select_chain(out, branch, member)?;
    let f_sel = out.f.select(&selection.f_indices)?;
    check_srce1(&member.window, &f_sel, &member.eps)
}

/// The image `(x, y) -> [x = tau] g(y)` of a function under the star map at
/// a full-length word; distinct functions get distinct images and the sup
/// norm is preserved.
pub fn star_embed_image(g: &StepFn, tau: &BinWord, out: &AmalgamOutput) -> Result<StepFn> {
    if tau.len() != out.level as usize {
        return Err(Error::BadArgument(format!(
            "star word has length {}, the construction level is {}",
            tau.len(),
            out.level
        )));
    }
    let dirac = StepFn::dirac_at(out.level, tau)?;
    StepFn::tensor(&dirac, g)
}
