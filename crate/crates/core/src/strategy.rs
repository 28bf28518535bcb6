//! Strategies: one rearrangement rule per possible number of incorrect
//! positions.
//!
//! A strategy of length `n` is a list `[s_1, ..., s_n]` where `s_k` is a
//! permutation of length `k`. When `k` positions of the current guess are
//! wrong, `s_k` decides how their values move (see [`crate::engine::next_guess`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, invert_slice, PermClass, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyClass {
    /// Every component of length at least 2 is a single cycle.
    Cyclic,
    /// Every component of length at least 2 is a derangement.
    Deranged,
    /// Cyclic shift below the top, arbitrary single cycle on top.
    Inductive,
}

impl StrategyClass {
    pub const ALL: [StrategyClass; 3] = [StrategyClass::Cyclic, StrategyClass::Deranged, StrategyClass::Inductive];

    pub fn name(self) -> &'static str {
        match self {
            StrategyClass::Cyclic => "cyclic",
            StrategyClass::Deranged => "deranged",
            StrategyClass::Inductive => "inductive",
        }
    }
}

impl fmt::Display for StrategyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyClass::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s.trim())).ok_or_else(|| Error::Parse {
            column: 1,
            message: format!("unknown strategy class `{s}` (expected cyclic, deranged or inductive)"),
        })
    }
}

#[derive(Clone)]
pub struct Strategy {
    components: Vec<Permutation>,
    class: StrategyClass,
    /// `guesses[k]` is the inverse of `s_k`, zero-based: the relative guess
    /// produced from a relative identity when all `k` positions are wrong.
    guesses: Vec<Vec<u8>>,
}

impl Strategy {
    fn build(components: Vec<Permutation>, class: StrategyClass) -> Self {
        let mut guesses = vec![Vec::new()];
        guesses.extend(components.iter().map(|c| invert_slice(c.as_slice())));
        Strategy { components, class, guesses }
    }

    /// Cyclic shift: every component is `[2, 3, ..., k, 1]`.
    pub fn cyclic_shift(n: usize) -> Result<Self> {
        let components = (1..=n).map(Permutation::right_shift).collect::<Result<Vec<_>>>()?;
        if components.is_empty() {
            return Err(Error::InvalidLength { len: 0, max: perm::MAX_LEN });
        }
        Ok(Self::build(components, StrategyClass::Cyclic))
    }

    /// Right shift below the top, left shift `[n, 1, ..., n-1]` on top.
    pub fn cyclic_shift_left_top(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::OutOfRange {
                what: "left-topped shift length",
                detail: format!("needs n >= 3, got {n}"),
            });
        }
        Self::inductive(Permutation::left_shift(n)?)
    }

    /// Cyclic shift on every length below `top.len()`, `top` on top.
    pub fn inductive(top: Permutation) -> Result<Self> {
        let n = top.len();
        if n < 3 {
            return Err(Error::OutOfRange { what: "inductive top length", detail: format!("needs n >= 3, got {n}") });
        }
        if !top.is_cyclic() {
            return Err(Error::NotCyclic(top.to_string()));
        }
        let mut components = (1..n).map(Permutation::right_shift).collect::<Result<Vec<_>>>()?;
        components.push(top);
        Ok(Self::build(components, StrategyClass::Inductive))
    }

    /// General strategy. Component `i` (one-based) must have length `i`, and
    /// every component of length at least 2 must be a derangement.
    pub fn from_components(components: Vec<Permutation>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::StrategyTooShort { min: 1, got: 0 });
        }
        for (i, c) in components.iter().enumerate() {
            if c.len() != i + 1 {
                return Err(Error::ComponentLength { index: i + 1, len: c.len() });
            }
            if i >= 1 {
                if let Some(position) = c.first_fixed_point() {
                    return Err(Error::NotDerangement { len: c.len(), position });
                }
            }
        }
        let class =
            if components.iter().all(Permutation::is_cyclic) { StrategyClass::Cyclic } else { StrategyClass::Deranged };
        Ok(Self::build(components, class))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn class(&self) -> StrategyClass {
        self.class
    }

    pub fn components(&self) -> &[Permutation] {
        &self.components
    }

    /// Component for `k` incorrect positions, one-based.
    pub fn component(&self, k: usize) -> &Permutation {
        &self.components[k - 1]
    }

    pub fn top(&self) -> &Permutation {
        self.components.last().expect("strategies are never empty")
    }

    pub(crate) fn guess(&self, k: usize) -> &[u8] {
        &self.guesses[k]
    }

    pub fn is_cyclic_shift(&self) -> bool {
        self.components.iter().enumerate().all(|(i, c)| {
            let k = i + 1;
            c.as_slice().iter().enumerate().all(|(j, &v)| v as usize == (j + 1) % k)
        })
    }

    /// Cyclic shift below the top with a single-cycle top of length >= 3.
    pub fn is_inductive(&self) -> bool {
        let n = self.len();
        n >= 3
            && self.top().is_cyclic()
            && self.components[..n - 1].iter().enumerate().all(|(i, c)| *c == Permutation::right_shift(i + 1).unwrap())
    }

    /// Mirror image under reversing positions: each component is conjugated
    /// by `j -> k + 1 - j`. The mirror of cyclic shift shifts left everywhere
    /// and solves every secret's mirror in the same number of guesses.
    pub fn mirror(&self) -> Strategy {
        let components = self
            .components
            .iter()
            .map(|c| {
                let k = c.len() as u8;
                let s = c.as_slice();
                Permutation::from_zero_based_unchecked((0..k).map(|j| k - 1 - s[(k - 1 - j) as usize]).collect())
            })
            .collect();
        Strategy::build(components, self.class)
    }

    /// Canonical textual identity, e.g. `1;2,1;2,3,1`.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for Strategy {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for Strategy {}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            perm::write_one_line(f, c.as_slice())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strategy({}, {self})", self.class)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Explicit component list, `1;2,1;2,3,1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            components.push(perm::parse_one_line(part, offset)?);
            offset += part.len() + 1;
        }
        Strategy::from_components(components).map_err(|e| match e {
            Error::ComponentLength { index, len } => Error::Parse {
                column: column_of_component(s, index),
                message: format!("component {index} has length {len}, expected {index}"),
            },
            Error::NotDerangement { len, position } => Error::Parse {
                column: column_of_component(s, len),
                message: format!("component {len} fixes position {position}; components must be derangements"),
            },
            other => other,
        })
    }
}

fn column_of_component(s: &str, index: usize) -> usize {
    s.split(';').take(index - 1).map(|p| p.len() + 1).sum::<usize>() + 1
}

/// A strategy as named on the command line, possibly still missing its
/// length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategySpec {
    CyclicShift,
    CyclicShiftLeftTop,
    Inductive(Permutation),
    Explicit(Strategy),
}

impl StrategySpec {
    /// Length fixed by the spec itself, if any.
    pub fn fixed_len(&self) -> Option<usize> {
        match self {
            StrategySpec::CyclicShift | StrategySpec::CyclicShiftLeftTop => None,
            StrategySpec::Inductive(top) => Some(top.len()),
            StrategySpec::Explicit(s) => Some(s.len()),
        }
    }

    pub fn resolve(&self, n: usize) -> Result<Strategy> {
        if let Some(len) = self.fixed_len() {
            if len != n {
                return Err(Error::LengthMismatch { left: len, right: n });
            }
        }
        match self {
            StrategySpec::CyclicShift => Strategy::cyclic_shift(n),
            StrategySpec::CyclicShiftLeftTop => Strategy::cyclic_shift_left_top(n),
            StrategySpec::Inductive(top) => Strategy::inductive(top.clone()),
            StrategySpec::Explicit(s) => Ok(s.clone()),
        }
    }
}

impl FromStr for StrategySpec {
    type Err = Error;

    /// `cs`, `csl`, `inductive:<top>` or an explicit component list.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed.to_ascii_lowercase().as_str() {
            "cs" | "cyclic-shift" => return Ok(StrategySpec::CyclicShift),
            "csl" | "cyclic-shift-left-top" => return Ok(StrategySpec::CyclicShiftLeftTop),
            _ => {}
        }
        if let Some(rest) = trimmed.strip_prefix("inductive:") {
            let top = perm::parse_one_line(rest, "inductive:".len())?;
            if top.len() < 3 || !top.is_cyclic() {
                return Err(Error::Parse {
                    column: "inductive:".len() + 1,
                    message: format!("inductive top {top} must be a single cycle of length >= 3"),
                });
            }
            return Ok(StrategySpec::Inductive(top));
        }
        Ok(StrategySpec::Explicit(trimmed.parse()?))
    }
}

/// Every strategy of one class and length, in lexicographic order of the
/// component concatenation. Components `s_1` and `s_2` are forced, so only
/// lengths 3 and up vary; the top component varies fastest.
pub struct StrategySpace {
    n: usize,
    class: StrategyClass,
    /// Candidate components for lengths `3..=n`.
    levels: Vec<Vec<Permutation>>,
}

impl StrategySpace {
    pub fn new(n: usize, class: StrategyClass) -> Result<Self> {
        if n == 0 || n > perm::MAX_LEN {
            return Err(Error::InvalidLength { len: n, max: perm::MAX_LEN });
        }
        if class == StrategyClass::Inductive && n < 3 {
            return Err(Error::OutOfRange {
                what: "inductive strategy length",
                detail: format!("needs n >= 3, got {n}"),
            });
        }
        let levels = (3..=n)
            .map(|k| -> Result<Vec<Permutation>> {
                Ok(match class {
                    StrategyClass::Cyclic => perm::enumerate(k, PermClass::Cyclic)?.collect(),
                    StrategyClass::Deranged => perm::enumerate(k, PermClass::Derangements)?.collect(),
                    StrategyClass::Inductive if k < n => vec![Permutation::right_shift(k)?],
                    StrategyClass::Inductive => perm::enumerate(k, PermClass::Cyclic)?.collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrategySpace { n, class, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class(&self) -> StrategyClass {
        self.class
    }

    pub fn len(&self) -> u64 {
        self.levels.iter().map(|l| l.len() as u64).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of choices for the top component.
    pub fn top_count(&self) -> u64 {
        self.levels.last().map_or(1, |l| l.len() as u64)
    }

    /// Strategies sharing all components below the top form one block of
    /// `top_count()` consecutive indices.
    pub fn block_count(&self) -> u64 {
        self.len() / self.top_count()
    }

    pub fn get(&self, mut index: u64) -> Strategy {
        assert!(index < self.len(), "strategy index {index} out of range");
        let mut picks = vec![0usize; self.levels.len()];
        for (slot, level) in picks.iter_mut().zip(&self.levels).rev() {
            *slot = (index % level.len() as u64) as usize;
            index /= level.len() as u64;
        }
        let mut components: Vec<Permutation> = Vec::with_capacity(self.n);
        components.push(Permutation::identity(1).unwrap());
        if self.n >= 2 {
            components.push(Permutation::right_shift(2).unwrap());
        }
        components.extend(picks.iter().zip(&self.levels).map(|(&i, level)| level[i].clone()));
        Strategy::build(components, self.class)
    }

    pub fn iter(&self) -> impl Iterator<Item = Strategy> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Index of `strategy` in this space, if it belongs to it.
    pub fn index_of(&self, strategy: &Strategy) -> Option<u64> {
        if strategy.len() != self.n {
            return None;
        }
        let mut index = 0u64;
        for (level, comp) in self.levels.iter().zip(&strategy.components[2.min(self.n)..]) {
            let pos = level.iter().position(|c| c == comp)?;
            index = index * level.len() as u64 + pos as u64;
        }
        Some(index)
    }
}
