//! Rational step functions over finite atom spaces. Atoms stand in for the
//! clopen cells of a compact domain: level-k dyadic words, a finite discrete
//! label set, or a product of the two, always in lexicographic order. All
//! sup-norm statements about these functions are exact max computations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polylin::{PwlNorm, Rat};

/// Hard cap on atom counts; anything larger is a caller bug, not a workload.
const MAX_ATOMS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomSpace {
    Dyadic(u32),
    Discrete(Vec<String>),
    Product(Box<AtomSpace>, Box<AtomSpace>),
}

impl AtomSpace {
    pub fn dyadic(level: u32) -> Self {
        AtomSpace::Dyadic(level)
    }

    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        let s = AtomSpace::Discrete(labels);
        s.validate()?;
        Ok(s)
    }

    pub fn product(left: AtomSpace, right: AtomSpace) -> Self {
        AtomSpace::Product(Box::new(left), Box::new(right))
    }

    pub fn validate(&self) -> Result<()> {
        self.atom_count_checked().map(|_| ())
    }

    fn atom_count_checked(&self) -> Result<usize> {
        let count = match self {
            AtomSpace::Dyadic(k) => {
                if *k >= 24 {
                    return Err(Error::BadArgument(format!("dyadic level {k} too large")));
                }
                1usize << k
            }
            AtomSpace::Discrete(labels) => {
                if labels.is_empty() {
                    return Err(Error::EmptyInput("discrete atom labels"));
                }
                let mut seen = labels.clone();
                seen.sort();
                seen.dedup();
                if seen.len() != labels.len() {
                    return Err(Error::BadArgument("duplicate discrete atom label".into()));
                }
                labels.len()
            }
            AtomSpace::Product(l, r) => {
                let a = l.atom_count_checked()?;
                let b = r.atom_count_checked()?;
                a.checked_mul(b)
                    .filter(|c| *c <= MAX_ATOMS)
                    .ok_or_else(|| Error::BadArgument("product space too large".into()))?
            }
        };
        if count > MAX_ATOMS {
            return Err(Error::BadArgument("atom space too large".into()));
        }
        Ok(count)
    }

    pub fn atom_count(&self) -> usize {
        match self {
            AtomSpace::Dyadic(k) => 1usize << k,
            AtomSpace::Discrete(labels) => labels.len(),
            AtomSpace::Product(l, r) => l.atom_count() * r.atom_count(),
        }
    }
}

/// Finite binary word, most significant bit first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinWord(Vec<bool>);

impl BinWord {
    pub fn empty() -> Self {
        BinWord(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BinWord(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        BinWord(bits)
    }

    pub fn is_prefix_of(&self, other: &BinWord) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Numeric value of the word read as a binary number.
    fn value(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }
}

impl fmt::Display for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl FromStr for BinWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Parse(format!("bad binary word {s:?}"))),
            }
        }
        Ok(BinWord(bits))
    }
}

impl Serialize for BinWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawStepFn")]
pub struct StepFn {
    space: AtomSpace,
    values: Vec<Rat>,
}

#[derive(Deserialize)]
struct RawStepFn {
    space: AtomSpace,
    values: Vec<Rat>,
}

impl TryFrom<RawStepFn> for StepFn {
    type Error = Error;

    fn try_from(raw: RawStepFn) -> Result<Self> {
        StepFn::new(raw.space, raw.values)
    }
}

impl StepFn {
    pub fn new(space: AtomSpace, values: Vec<Rat>) -> Result<Self> {
        space.validate()?;
        let expected = space.atom_count();
        if values.len() != expected {
            return Err(Error::ValueCountMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(StepFn { space, values })
    }

    pub fn zero(space: AtomSpace) -> Result<Self> {
        space.validate()?;
        let n = space.atom_count();
        Ok(StepFn {
            space,
            values: vec![Rat::zero(); n],
        })
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rat::is_zero)
    }

    pub fn sup_norm(&self) -> Rat {
        self.values
            .iter()
            .map(Rat::abs)
            .max()
            .expect("atom spaces are non-empty")
    }

    /// Indicator of the atoms whose dyadic word extends `word`.
    pub fn cylinder_indicator(level: u32, word: &BinWord) -> Result<Self> {
        let space = AtomSpace::Dyadic(level);
        space.validate()?;
        if word.len() > level as usize {
            return Err(Error::WordTooLong {
                word: word.to_string(),
                level,
            });
        }
        let gap = level as usize - word.len();
        let start = word.value() << gap;
        let len = 1usize << gap;
        let mut values = vec![Rat::zero(); 1 << level];
        for v in values.iter_mut().skip(start).take(len) {
            *v = Rat::one();
        }
        Ok(StepFn { space, values })
    }

    /// Indicator of the single atom named by a full-length word.
    pub fn dirac_at(level: u32, word: &BinWord) -> Result<Self> {
        if word.len() != level as usize {
            return Err(Error::WordTooLong {
                word: word.to_string(),
                level,
            });
        }
        Self::cylinder_indicator(level, word)
    }

    /// `(x, y) -> f(x) * g(y)` on the product space; atom order is
    /// lexicographic, left index major.
    pub fn tensor(f: &StepFn, g: &StepFn) -> Result<Self> {
        let space = AtomSpace::product(f.space.clone(), g.space.clone());
        space.validate()?;
        let mut values = Vec::with_capacity(f.values.len() * g.values.len());
        for x in &f.values {
            for y in &g.values {
                values.push(x * y);
            }
        }
        Ok(StepFn { space, values })
    }

    /// Composition with an onto atom map `e: target -> self.space`, i.e.
    /// `(f o e)(z) = f(e(z))`. Surjectivity makes every sup norm of every
    /// linear combination carry over exactly.
    pub fn pullback(&self, target: &AtomSpace, map: &[usize]) -> Result<Self> {
        target.validate()?;
        if map.len() != target.atom_count() {
            return Err(Error::ValueCountMismatch {
                expected: target.atom_count(),
                got: map.len(),
            });
        }
        let n = self.values.len();
        let mut hit = vec![false; n];
        for &img in map {
            if img >= n {
                return Err(Error::BadArgument(format!(
                    "atom map image {img} out of range (base has {n} atoms)"
                )));
            }
            hit[img] = true;
        }
        if let Some(missing) = hit.iter().position(|h| !h) {
            return Err(Error::NotOnto { missing });
        }
        let values = map.iter().map(|&img| self.values[img].clone()).collect();
        Ok(StepFn {
            space: target.clone(),
            values,
        })
    }

    /// Re-expresses a dyadic step function at a finer level; each value is
    /// replicated across the 2^(new-old) refined atoms.
    pub fn refine(&self, new_level: u32) -> Result<Self> {
        let old_level = match &self.space {
            AtomSpace::Dyadic(k) => *k,
            _ => {
                return Err(Error::BadArgument(
                    "refine applies to dyadic spaces only".into(),
                ))
            }
        };
        if new_level < old_level {
            return Err(Error::BadArgument(format!(
                "cannot refine level {old_level} down to {new_level}"
            )));
        }
        let space = AtomSpace::Dyadic(new_level);
        space.validate()?;
        let rep = 1usize << (new_level - old_level);
        let mut values = Vec::with_capacity(self.values.len() * rep);
        for v in &self.values {
            for _ in 0..rep {
                values.push(v.clone());
            }
        }
        Ok(StepFn { space, values })
    }
}

/// `sum_n coeffs[n] * fns[n]` over a shared atom space.
pub fn lin_comb(coeffs: &[Rat], fns: &[StepFn]) -> Result<StepFn> {
    if fns.is_empty() {
        return Err(Error::EmptyInput("linear combination"));
    }
    if coeffs.len() != fns.len() {
        return Err(Error::ArityMismatch {
            expected: fns.len(),
            got: coeffs.len(),
        });
    }
    let space = fns[0].space.clone();
    if fns.iter().any(|f| f.space != space) {
        return Err(Error::SpaceMismatch);
    }
    let n = space.atom_count();
    let mut values = vec![Rat::zero(); n];
    for (c, f) in coeffs.iter().zip(fns) {
        if c.is_zero() {
            continue;
        }
        for (v, x) in values.iter_mut().zip(&f.values) {
            *v += &(c * x);
        }
    }
    Ok(StepFn { space, values })
}

/// `a -> || sum_n a_n f_n ||_inf` as a pwl norm: one piece per atom, the
/// canonicalization in `PwlNorm::new` collapses atoms with equal rows.
pub fn combination_norm(fns: &[StepFn]) -> Result<PwlNorm> {
    if fns.is_empty() {
        return Err(Error::EmptyInput("combination norm window"));
    }
    let space = fns[0].space.clone();
    if fns.iter().any(|f| f.space != space) {
        return Err(Error::SpaceMismatch);
    }
    let atoms = space.atom_count();
    let mut pieces = Vec::with_capacity(atoms);
    for i in 0..atoms {
        pieces.push(fns.iter().map(|f| f.values[i].clone()).collect());
    }
    PwlNorm::new(fns.len(), pieces)
}

/// `a -> max_k || sum_{n<=k} a_n f_n ||_inf`: one piece per (prefix, atom)
/// with the tail of the row zeroed out.
pub fn prefix_max_norm(fns: &[StepFn]) -> Result<PwlNorm> {
    if fns.is_empty() {
        return Err(Error::EmptyInput("prefix norm window"));
    }
    let space = fns[0].space.clone();
    if fns.iter().any(|f| f.space != space) {
        return Err(Error::SpaceMismatch);
    }
    let atoms = space.atom_count();
    let len = fns.len();
    let mut pieces = Vec::with_capacity(atoms * len);
    for k in 0..len {
        for i in 0..atoms {
            let mut row = Vec::with_capacity(len);
            for f in fns.iter().take(k + 1) {
                row.push(f.values[i].clone());
            }
            row.resize(len, Rat::zero());
            pieces.push(row);
        }
    }
    PwlNorm::new(len, pieces)
}
