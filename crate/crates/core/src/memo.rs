//! Memoized evaluation of "all positions wrong" subgames.
//!
//! Once the correct positions of a guess are locked they never move again,
//! so what is left of a game is fully described by the unlocked values of
//! the secret relabelled against the current guess: a derangement `d` of
//! length `k`. `T(d)` is the number of further guesses needed from that
//! state. Every game decomposes as `1 + T(d)` where `d` is the relative
//! derangement of the secret's non-fixed points.
//!
//! A memo is bound to the components it was filled with. [`SubgameMemo::sync`]
//! drops exactly the tables invalidated by a change of strategy, so walking
//! strategies in enumeration order (top component fastest) keeps lower
//! tables warm. For parallel scans a fully populated memo can be frozen in
//! an `Arc` and shared read-only as the base of per-worker memos.

use std::collections::HashMap;
use std::sync::Arc;

use crate::engine::Outcome;
use crate::error::{Error, Result};
use crate::perm::{lehmer_rank, Permutation, MAX_LEN};
use crate::strategy::Strategy;

const UNKNOWN: u16 = 0;
const IN_PROGRESS: u16 = u16::MAX;
const LOOP: u16 = u16::MAX - 1;

/// Largest subgame size stored in a dense `k!`-entry table.
const DENSE_MAX: usize = 10;

#[derive(Clone, Default)]
enum Table {
    #[default]
    Empty,
    Dense(Vec<u16>),
    Sparse(HashMap<u64, u16>),
}

impl Table {
    fn get(&self, key: u64) -> u16 {
        match self {
            Table::Empty => UNKNOWN,
            Table::Dense(v) => v[key as usize],
            Table::Sparse(m) => m.get(&key).copied().unwrap_or(UNKNOWN),
        }
    }

    fn set(&mut self, k: usize, key: u64, value: u16) {
        if let Table::Empty = self {
            *self = if k <= DENSE_MAX {
                Table::Dense(vec![UNKNOWN; (1..=k as u64).product::<u64>() as usize])
            } else {
                Table::Sparse(HashMap::new())
            };
        }
        match self {
            Table::Dense(v) => v[key as usize] = value,
            Table::Sparse(m) => {
                m.insert(key, value);
            }
            Table::Empty => unreachable!(),
        }
    }

    fn entries(&self) -> usize {
        match self {
            Table::Empty => 0,
            Table::Dense(v) => v.iter().filter(|&&x| x != UNKNOWN).count(),
            Table::Sparse(m) => m.len(),
        }
    }
}

fn key_of(d: &[u8]) -> u64 {
    if d.len() <= DENSE_MAX {
        lehmer_rank(d)
    } else {
        crate::engine::pack(d)
    }
}

/// Distribution of `T(d)` over all derangements of one length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SizeHistogram {
    /// `counts[t]` is the number of derangements with `T(d) = t`.
    pub counts: Vec<u64>,
    pub loops: u64,
}

#[derive(Clone)]
pub struct SubgameMemo {
    base: Option<Arc<SubgameMemo>>,
    base_upto: usize,
    /// Relative guess (inverse component) each table was filled with.
    bound: Vec<Option<Vec<u8>>>,
    tables: Vec<Table>,
    chain: Vec<(u8, u64)>,
}

impl Default for SubgameMemo {
    fn default() -> Self {
        Self::new()
    }
}

impl SubgameMemo {
    pub fn new() -> Self {
        SubgameMemo {
            base: None,
            base_upto: 0,
            bound: vec![None; MAX_LEN + 1],
            tables: vec![Table::Empty; MAX_LEN + 1],
            chain: Vec::new(),
        }
    }

    /// Private memo reading sizes `<= upto` from a frozen `base`.
    pub fn layered(base: Arc<SubgameMemo>, upto: usize) -> Self {
        let mut memo = SubgameMemo::new();
        memo.base_upto = upto.min(MAX_LEN);
        memo.base = Some(base);
        memo
    }

    /// Number of memoized states, including those visible through the base.
    pub fn len(&self) -> usize {
        let own: usize = self.tables.iter().map(Table::entries).sum();
        own + self.base.as_ref().map_or(0, |b| (0..=self.base_upto).map(|k| b.tables[k].entries()).sum::<usize>())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rebinds the memo to `strategy`, keeping every table whose components
    /// (at its own size and all smaller sizes) are unchanged.
    pub fn sync(&mut self, strategy: &Strategy) {
        let n = strategy.len();
        if let Some(base) = &self.base {
            let upto = self.base_upto.min(n);
            let agrees = (2..=upto).all(|k| base.bound[k].as_deref() == Some(strategy.guess(k)));
            if !agrees {
                self.base = None;
                self.base_upto = 0;
            }
        }
        let first_change = (2..=n).find(|&k| self.bound[k].as_deref() != Some(strategy.guess(k)));
        if let Some(j) = first_change {
            for k in j..=MAX_LEN {
                self.tables[k] = Table::Empty;
                self.bound[k] = None;
            }
            for k in j..=n {
                self.bound[k] = Some(strategy.guess(k).to_vec());
            }
        }
    }

    #[inline]
    fn lookup(&self, k: usize, key: u64) -> u16 {
        if k <= self.base_upto {
            if let Some(base) = &self.base {
                let v = base.tables[k].get(key);
                if v != UNKNOWN {
                    return v;
                }
            }
        }
        self.tables[k].get(key)
    }

    /// `T(d)` for a zero-based derangement `d`. The memo must already be
    /// synced to `strategy`.
    pub(crate) fn resolve(&mut self, strategy: &Strategy, d: &[u8]) -> Outcome {
        let mut cur = [0u8; MAX_LEN];
        let mut len = d.len();
        cur[..len].copy_from_slice(d);
        self.chain.clear();
        let mut tail = loop {
            let key = key_of(&cur[..len]);
            match self.lookup(len, key) {
                UNKNOWN => {}
                IN_PROGRESS | LOOP => break LOOP,
                t => break t,
            }
            self.tables[len].set(len, key, IN_PROGRESS);
            self.chain.push((len as u8, key));

            let guess = strategy.guess(len);
            let mut label = [0u8; MAX_LEN];
            let mut open = [0u8; MAX_LEN];
            let mut m = 0;
            for i in 0..len {
                if guess[i] != cur[i] {
                    open[m] = i as u8;
                    label[guess[i] as usize] = m as u8;
                    m += 1;
                }
            }
            if m == 0 {
                break 0;
            }
            let mut next = [0u8; MAX_LEN];
            for j in 0..m {
                next[j] = label[cur[open[j] as usize] as usize];
            }
            cur = next;
            len = m;
        };
        for &(k, key) in self.chain.iter().rev() {
            tail = if tail == LOOP { LOOP } else { tail + 1 };
            debug_assert!(tail != IN_PROGRESS);
            self.tables[k as usize].set(k as usize, key, tail);
        }
        match tail {
            LOOP => Outcome::Looped,
            t => Outcome::Solved(t as u32),
        }
    }

    /// Histogram of `T` over every derangement of length `k`.
    pub fn histogram(&mut self, strategy: &Strategy, k: usize) -> SizeHistogram {
        self.sync(strategy);
        let mut hist = SizeHistogram::default();
        for d in crate::perm::derangement_table(k).iter() {
            match self.resolve(strategy, d) {
                Outcome::Solved(t) => {
                    let t = t as usize;
                    if hist.counts.len() <= t {
                        hist.counts.resize(t + 1, 0);
                    }
                    hist.counts[t] += 1;
                }
                Outcome::Looped => hist.loops += 1,
            }
        }
        hist
    }
}

/// Number of guesses needed to finish from the state where every position
/// is wrong and the secret, relabelled against the current guess, is `d`.
pub fn subgame_guesses(d: &Permutation, strategy: &Strategy, memo: &mut SubgameMemo) -> Result<Outcome> {
    if d.len() < 2 {
        return Err(Error::OutOfRange { what: "subgame size", detail: format!("needs k >= 2, got {}", d.len()) });
    }
    if let Some(position) = d.first_fixed_point() {
        return Err(Error::NotDerangement { len: d.len(), position });
    }
    if d.len() > strategy.len() {
        return Err(Error::LengthMismatch { left: strategy.len(), right: d.len() });
    }
    memo.sync(strategy);
    Ok(memo.resolve(strategy, d.as_slice()))
}

/// Relative derangement of the non-fixed points of `secret`, or `None` for
/// the identity.
pub fn residual_derangement(secret: &Permutation) -> Option<Permutation> {
    let s = secret.as_slice();
    let open: Vec<usize> = (0..s.len()).filter(|&i| s[i] as usize != i).collect();
    if open.is_empty() {
        return None;
    }
    let mut label = vec![0u8; s.len()];
    for (j, &i) in open.iter().enumerate() {
        label[i] = j as u8;
    }
    Some(Permutation::from_zero_based_unchecked(open.iter().map(|&i| label[s[i] as usize]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::play;
    use crate::perm::{enumerate, PermClass};

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v).unwrap()
    }

    #[test]
    fn subgame_examples() {
        let mut memo = SubgameMemo::new();
        let cs4 = Strategy::cyclic_shift(4).unwrap();
        assert_eq!(subgame_guesses(&p(&[2, 1]), &cs4, &mut memo).unwrap(), Outcome::Solved(1));
        assert_eq!(subgame_guesses(&p(&[4, 1, 2, 3]), &cs4, &mut memo).unwrap(), Outcome::Solved(1));
        assert_eq!(subgame_guesses(&p(&[2, 1, 4, 3]), &cs4, &mut memo).unwrap(), Outcome::Solved(2));
        assert!(subgame_guesses(&p(&[1, 2]), &cs4, &mut memo).is_err());
        assert!(subgame_guesses(&p(&[2, 3, 4, 5, 1]), &cs4, &mut memo).is_err());
    }

    #[test]
    fn loops_are_marked() {
        let swaps = Strategy::from_components(vec![p(&[1]), p(&[2, 1]), p(&[2, 3, 1]), p(&[2, 1, 4, 3])]).unwrap();
        let mut memo = SubgameMemo::new();
        assert_eq!(subgame_guesses(&p(&[3, 4, 1, 2]), &swaps, &mut memo).unwrap(), Outcome::Looped);
        // second query hits the memo
        assert_eq!(subgame_guesses(&p(&[3, 4, 1, 2]), &swaps, &mut memo).unwrap(), Outcome::Looped);
    }

    #[test]
    fn decomposition_matches_playback() {
        let strategies = [
            Strategy::cyclic_shift(6).unwrap(),
            Strategy::cyclic_shift_left_top(6).unwrap(),
            "1;2,1;3,1,2;2,1,4,3;2,3,4,5,1;2,1,4,3,6,5".parse().unwrap(),
        ];
        let mut memo = SubgameMemo::new();
        for s in &strategies {
            for secret in enumerate(6, PermClass::All).unwrap() {
                let direct = play(&secret, s).unwrap().status;
                let via_memo = match residual_derangement(&secret) {
                    None => Outcome::Solved(1),
                    Some(d) => match subgame_guesses(&d, s, &mut memo).unwrap() {
                        Outcome::Solved(t) => Outcome::Solved(t + 1),
                        Outcome::Looped => Outcome::Looped,
                    },
                };
                assert_eq!(direct, via_memo, "{s} secret {secret}");
            }
        }
    }

    #[test]
    fn sync_keeps_unchanged_lower_tables() {
        let mut memo = SubgameMemo::new();
        let a = Strategy::cyclic_shift(5).unwrap();
        let b = Strategy::cyclic_shift_left_top(5).unwrap();
        memo.histogram(&a, 4);
        let lower = memo.len();
        assert!(lower > 0);
        memo.histogram(&a, 5);
        memo.sync(&b);
        assert_eq!(memo.len(), lower);
    }

    #[test]
    fn layered_memo_reads_frozen_base() {
        let cs = Strategy::cyclic_shift(5).unwrap();
        let mut base = SubgameMemo::new();
        for k in 2..=4 {
            base.histogram(&cs, k);
        }
        let base = Arc::new(base);
        let csl = Strategy::cyclic_shift_left_top(5).unwrap();
        let mut worker = SubgameMemo::layered(base.clone(), 4);
        let h = worker.histogram(&csl, 5);
        let mut fresh = SubgameMemo::new();
        assert_eq!(h, fresh.histogram(&csl, 5));
        assert_eq!(worker.tables[4].entries(), 0);

        // a strategy disagreeing below the top detaches the base
        let other: Strategy = "1;2,1;3,1,2;2,3,4,1;2,3,4,5,1".parse().unwrap();
        let mut worker = SubgameMemo::layered(base, 4);
        let h = worker.histogram(&other, 5);
        assert_eq!(h, SubgameMemo::new().histogram(&other, 5));
    }

    #[test]
    fn residual_relabels_by_rank() {
        assert_eq!(residual_derangement(&p(&[1, 2, 3])), None);
        assert_eq!(residual_derangement(&p(&[4, 2, 1, 5, 3])).unwrap(), p(&[3, 1, 4, 2]));
    }
}
