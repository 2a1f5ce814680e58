//! Hereditary families of finite sets, their enumeration trees, and the
//! projection windows whose member sub-lists are 2-equivalent to the unit
//! ell-1 basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ell1::{build_l1_tree, l1_equivalence_constants, FnWindow, L1Constants};
use crate::error::{Error, Result};
use crate::par::map_ordered;
use crate::polylin::Rat;
use crate::seqtree::{check_monotone, SeqTree};
use crate::stepfn::{AtomSpace, StepFn};

/// Ground sets larger than this blow up the explicit member enumeration.
const MAX_GROUND: usize = 20;

/// A finite family of subsets of `{0..=ground_max}` containing the empty set
/// and closed under subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HereditaryFamily {
    ground_max: usize,
    members: BTreeSet<BTreeSet<usize>>,
}

fn set_label(s: &BTreeSet<usize>) -> String {
    let body: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", body.join(" "))
}

impl HereditaryFamily {
    pub fn new<I>(ground_max: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = BTreeSet<usize>>,
    {
        let members: BTreeSet<BTreeSet<usize>> = members.into_iter().collect();
        if !members.contains(&BTreeSet::new()) {
            return Err(Error::MissingEmptySet);
        }
        for f in &members {
            if let Some(&x) = f.iter().find(|&&x| x > ground_max) {
                let _ = x;
                return Err(Error::OutsideGround { ground: ground_max });
            }
            // One-element deletions suffice: any missing subset has a
            // missing superset one element below f.
            for &x in f {
                let mut g = f.clone();
                g.remove(&x);
                if !members.contains(&g) {
                    return Err(Error::NotHereditary {
                        member: f.iter().copied().collect(),
                        missing: g.iter().copied().collect(),
                    });
                }
            }
        }
        Ok(HereditaryFamily {
            ground_max,
            members,
        })
    }

    pub fn ground_max(&self) -> usize {
        self.ground_max
    }

    pub fn members(&self) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.members.iter()
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        self.members.contains(set)
    }

    pub fn has_all_singletons(&self) -> bool {
        (0..=self.ground_max).all(|n| self.members.contains(&BTreeSet::from([n])))
    }

    pub fn max_member_len(&self) -> usize {
        self.members.iter().map(BTreeSet::len).max().unwrap_or(0)
    }
}

fn guard_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::BadArgument(format!(
            "ground maximum {n} exceeds the enumeration cap {MAX_GROUND}"
        )));
    }
    Ok(())
}

fn mask_to_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// `{F subset of {0..=n} : F empty or |F| <= min F + 1}`. Hereditary and
/// contains every singleton.
pub fn schreier_restricted(n: usize) -> Result<HereditaryFamily> {
    guard_ground(n)?;
    let mut members = BTreeSet::new();
    for mask in 0u32..(1 << (n + 1)) {
        let f = mask_to_set(mask);
        if f.is_empty() || f.len() <= f.first().unwrap() + 1 {
            members.insert(f);
        }
    }
    HereditaryFamily::new(n, members)
}

/// All subsets of `{0..=n}` of size at most `k`.
pub fn uniform_family(n: usize, k: usize) -> Result<HereditaryFamily> {
    guard_ground(n)?;
    let mut members = BTreeSet::new();
    for mask in 0u32..(1 << (n + 1)) {
        if mask.count_ones() as usize <= k {
            members.insert(mask_to_set(mask));
        }
    }
    HereditaryFamily::new(n, members)
}

/// Seed-stable random family: `maximal_count` sets of size up to `max_size`
/// are sampled and closed downward, on top of the empty set and every
/// singleton. The same `(arguments, seed)` always produce the same family.
pub fn random_hereditary(
    ground_max: usize,
    maximal_count: usize,
    max_size: usize,
    seed: u64,
) -> Result<HereditaryFamily> {
    guard_ground(ground_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    members.insert(BTreeSet::new());
    for n in 0..=ground_max {
        members.insert(BTreeSet::from([n]));
    }
    for _ in 0..maximal_count {
        let size = rng.gen_range(0..=max_size.min(ground_max + 1));
        let mut maximal = BTreeSet::new();
        while maximal.len() < size {
            maximal.insert(rng.gen_range(0..=ground_max));
        }
        let elems: Vec<usize> = maximal.iter().copied().collect();
        for mask in 0u32..(1 << elems.len()) {
            members.insert(
                (0..elems.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| elems[i])
                    .collect(),
            );
        }
    }
    HereditaryFamily::new(ground_max, members)
}

/// Nodes are the strictly increasing enumerations of the members; heredity
/// makes the node set prefix-closed.
pub fn family_tree(f: &HereditaryFamily) -> SeqTree {
    SeqTree::from_nodes(f.members().map(|m| m.iter().copied().collect::<Vec<_>>()))
        .expect("initial segments of members are members")
}

/// The window `(pi_n)` for `n <= ground_max` on the discrete space whose
/// atoms are the members: `pi_n(G) = 1` if `n` is in `G`, else 0. Requires
/// every singleton, which makes the entries nonzero and pairwise distinct.
pub fn projection_functions(f: &HereditaryFamily) -> Result<FnWindow> {
    for n in 0..=f.ground_max {
        if !f.members.contains(&BTreeSet::from([n])) {
            return Err(Error::MissingSingleton(n));
        }
    }
    let atoms: Vec<&BTreeSet<usize>> = f.members().collect();
    let space = AtomSpace::discrete(atoms.iter().map(|m| set_label(m)).collect())?;
    let mut fns = Vec::with_capacity(f.ground_max + 1);
    for n in 0..=f.ground_max {
        let values = atoms
            .iter()
            .map(|m| {
                if m.contains(&n) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        fns.push(StepFn::new(space.clone(), values)?);
    }
    FnWindow::new(fns)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberConstants {
    pub member: Vec<usize>,
    pub constants: L1Constants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimFailure {
    /// A member's projection sub-list misses 2-equivalence.
    MemberNotEquivalent {
        member: Vec<usize>,
        constants: L1Constants,
    },
    /// A member enumeration is not a node of the scale-2 tree.
    EnumerationNotInTree { member: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub holds: bool,
    /// Fixed equivalence scale d = 2.
    pub scale: Rat,
    pub family_tree_order: usize,
    pub l1_tree_order: usize,
    /// Identity witness maps the family tree into the scale-2 tree.
    pub monotone: bool,
    pub member_constants: Vec<MemberConstants>,
    pub failures: Vec<ClaimFailure>,
}

/// Checks that every member's projection sub-list is 2-equivalent to the
/// unit ell-1 basis and that the identity witness maps the family tree
/// monotonely into the scale-2 tree of the projection window, which bounds
/// the family tree order by the scale-2 tree order.
pub fn verify_hereditary_claim(f: &HereditaryFamily) -> Result<ClaimReport> {
    let scale = Rat::from_int(2);
    let window = projection_functions(f)?;
    let t_family = family_tree(f);

    let members: Vec<Vec<usize>> = f
        .members()
        .filter(|m| !m.is_empty())
        .map(|m| m.iter().copied().collect())
        .collect();
    let all_constants = map_ordered(&members, |m| {
        let sub: Vec<StepFn> = m.iter().map(|&n| window.fns()[n].clone()).collect();
        l1_equivalence_constants(&sub)
    });

    let mut member_constants = Vec::with_capacity(members.len());
    let mut failures = Vec::new();
    let threshold = scale.recip();
    for (member, constants) in members.iter().zip(all_constants) {
        let constants = constants?;
        if constants.lower < threshold || constants.upper > scale {
            failures.push(ClaimFailure::MemberNotEquivalent {
                member: member.clone(),
                constants: constants.clone(),
            });
        }
        member_constants.push(MemberConstants {
            member: member.clone(),
            constants,
        });
    }

    let t2 = build_l1_tree(&window, &scale, f.max_member_len())?;
    let witness: BTreeMap<Vec<usize>, Vec<usize>> =
        t_family.nodes().map(|n| (n.clone(), n.clone())).collect();
    let monotone = match check_monotone(&witness, &t_family, &t2) {
        Ok(b) => b,
        Err(Error::ImageOutsideTarget { .. }) => {
            for m in &members {
                if !t2.contains(m) {
                    failures.push(ClaimFailure::EnumerationNotInTree { member: m.clone() });
                }
            }
            false
        }
        Err(e) => return Err(e),
    };

    Ok(ClaimReport {
        holds: failures.is_empty() && monotone,
        scale,
        family_tree_order: t_family.order(),
        l1_tree_order: t2.order(),
        monotone,
        member_constants,
        failures,
    })
}

impl fmt::Display for HereditaryFamily {
    /// One member per line, elements ascending, e.g. `{}` then `{0}` then
    /// `{0 2}`. Members print in canonical sorted order.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.members {
            writeln!(out, "{}", set_label(m))?;
        }
        Ok(())
    }
}

impl FromStr for HereditaryFamily {
    type Err = Error;

    /// Parses the `Display` format. The ground maximum is the largest
    /// element seen (0 for the family `{{}}`).
    fn from_str(text: &str) -> Result<Self> {
        let mut members = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let body = line
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| {
                    Error::Parse(format!("line {}: expected {{...}}, got {line:?}", lineno + 1))
                })?;
            let mut set = BTreeSet::new();
            for tok in body.split_whitespace() {
                let n: usize = tok.parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad element {tok:?}", lineno + 1))
                })?;
                if !set.insert(n) {
                    return Err(Error::Parse(format!(
                        "line {}: repeated element {n}",
                        lineno + 1
                    )));
                }
            }
            members.insert(set);
        }
        if members.is_empty() {
            return Err(Error::EmptyInput("family text"));
        }
        let ground_max = members
            .iter()
            .filter_map(|m| m.last().copied())
            .max()
            .unwrap_or(0);
        HereditaryFamily::new(ground_max, members)
    }
}
