//! Finite downward-closed trees of natural-number sequences, ordered by
//! end-extension. The derivative keeps exactly the nodes that have a proper
//! extension; iterating it to the empty tree yields the order, the finite
//! stand-in for the ordinal rank everything upstream compares against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Node = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTree {
    nodes: BTreeSet<Node>,
}

impl SeqTree {
    pub fn empty() -> Self {
        SeqTree {
            nodes: BTreeSet::new(),
        }
    }

    pub fn root_only() -> Self {
        let mut nodes = BTreeSet::new();
        nodes.insert(Vec::new());
        SeqTree { nodes }
    }

    /// Builds from an explicit node set; input that is not downward closed is
    /// rejected rather than repaired, to surface caller bugs.
    pub fn from_nodes<I>(nodes: I) -> Result<Self>
    where
        I: IntoIterator<Item = Node>,
    {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        for n in &nodes {
            if !n.is_empty() {
                let parent = n[..n.len() - 1].to_vec();
                if !nodes.contains(&parent) {
                    return Err(Error::NotDownwardClosed(parent));
                }
            }
        }
        Ok(SeqTree { nodes })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &[usize]) -> bool {
        self.nodes.contains(node)
    }

    /// `{ t : t is a proper prefix of some node }`, i.e. the tree minus its
    /// maximal nodes. Stays downward closed.
    pub fn derivative(&self) -> SeqTree {
        let mut keep: BTreeSet<Node> = BTreeSet::new();
        for n in &self.nodes {
            for l in 0..n.len() {
                keep.insert(n[..l].to_vec());
            }
        }
        SeqTree { nodes: keep }
    }

    /// Least `n` with the n-th derivative empty. For these finite trees this
    /// equals 1 + the longest node length, with `order(empty) = 0`.
    pub fn order(&self) -> usize {
        let mut t = self.clone();
        let mut n = 0;
        while !t.is_empty() {
            t = t.derivative();
            n += 1;
        }
        n
    }
}

impl fmt::Display for SeqTree {
    /// One node per line as `(l_0 l_1 ...)`, the root as `()`, in the set's
    /// canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            write!(f, "(")?;
            for (i, l) in n.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
            }
            writeln!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for SeqTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let inner = line
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad tree node line {line:?}")))?;
            let mut node = Vec::new();
            for tok in inner.split_whitespace() {
                let l: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad label {tok:?}")))?;
                node.push(l);
            }
            nodes.push(node);
        }
        SeqTree::from_nodes(nodes)
    }
}

/// Checks that an explicit node map `witness: s -> t` is strictly monotone
/// for end-extension. Totality on `s` and image inside `t` are input
/// contracts (errors); a non-monotone pair makes the check return false.
/// A passing check certifies `order(s) <= order(t)`, asserted here.
pub fn check_monotone(
    witness: &BTreeMap<Node, Node>,
    s: &SeqTree,
    t: &SeqTree,
) -> Result<bool> {
    for n in s.nodes() {
        let img = witness
            .get(n)
            .ok_or_else(|| Error::MapNotTotal(n.clone()))?;
        if !t.contains(img) {
            return Err(Error::ImageOutsideTarget(img.clone()));
        }
    }
    let nodes: Vec<&Node> = s.nodes().collect();
    for (i, a) in nodes.iter().enumerate() {
        for b in nodes.iter().skip(i + 1) {
            let (shorter, longer) = if a.len() < b.len() { (a, b) } else { (b, a) };
            if shorter.len() == longer.len() || longer[..shorter.len()] != shorter[..] {
                continue;
            }
            let (ws, wl) = (&witness[*shorter], &witness[*longer]);
            let extends = wl.len() > ws.len() && wl[..ws.len()] == ws[..];
            if !extends {
                return Ok(false);
            }
        }
    }
    assert!(
        s.order() <= t.order(),
        "monotone witness with order(s) > order(t)"
    );
    Ok(true)
}

/// Attaches each component tree `T_d` below a fresh root along the edge `d`:
/// nodes are the root plus `d ++ s` for `s` in `T_d`. An empty index map
/// glues to the empty tree; with components present the result always holds
/// the root, and its order is 1 + the largest component order.
pub fn glue(components: &BTreeMap<usize, SeqTree>) -> Result<SeqTree> {
    if let Some(d) = components.keys().find(|&&d| d == 0) {
        return Err(Error::BadArgument(format!("glue label {d} must be >= 1")));
    }
    if components.is_empty() {
        return Ok(SeqTree::empty());
    }
    let mut nodes = BTreeSet::new();
    nodes.insert(Vec::new());
    for (&d, tree) in components {
        for s in tree.nodes() {
            let mut n = Vec::with_capacity(s.len() + 1);
            n.push(d);
            n.extend_from_slice(s);
            nodes.insert(n);
        }
    }
    Ok(SeqTree { nodes })
}
