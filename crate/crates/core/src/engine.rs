//! Deterministic game playback.
//!
//! The first guess is always the identity. After each guess the positions
//! that match the secret are locked; the remaining `k` values are moved by
//! the strategy component `s_k`: with incorrect positions `p_1 < ... < p_k`,
//! the value at `p_j` moves to `p_{s_k(j)}`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_LEN};
use crate::strategy::Strategy;

/// Set of one-based positions, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PositionSet(u32);

impl PositionSet {
    pub fn empty() -> Self {
        PositionSet(0)
    }

    pub fn full(n: usize) -> Self {
        PositionSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_positions(positions: impl IntoIterator<Item = usize>) -> Self {
        PositionSet(positions.into_iter().fold(0, |m, p| m | 1 << (p - 1)))
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        PositionSet(mask)
    }

    pub fn contains(self, position: usize) -> bool {
        position >= 1 && self.0 & (1 << (position - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0).map(|i| i + 1)
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PositionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PositionSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let positions = Vec::<usize>::deserialize(deserializer)?;
        if positions.iter().any(|&p| p == 0 || p > 32) {
            return Err(serde::de::Error::custom("positions must lie in 1..=32"));
        }
        Ok(PositionSet::from_positions(positions))
    }
}

/// How a game (or subgame) ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// Solved with this many guesses.
    Solved(u32),
    /// The deterministic process revisits a state and never finishes.
    Looped,
}

impl Outcome {
    pub fn rounds(self) -> Option<u32> {
        match self {
            Outcome::Solved(r) => Some(r),
            Outcome::Looped => None,
        }
    }
}

/// First guess index with a non-empty correct set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    At(u32),
    /// Looped before any position was ever correct.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub secret: Permutation,
    pub guesses: Vec<Permutation>,
    pub correct_sets: Vec<PositionSet>,
    pub status: Outcome,
}

impl GameTrace {
    pub fn rho(&self) -> Rho {
        self.correct_sets.iter().position(|j| !j.is_empty()).map_or(Rho::Undefined, |i| Rho::At(i as u32 + 1))
    }
}

pub fn feedback(guess: &Permutation, secret: &Permutation) -> Result<PositionSet> {
    if guess.len() != secret.len() {
        return Err(Error::LengthMismatch { left: guess.len(), right: secret.len() });
    }
    let set = PositionSet::from_mask(match_mask(guess.as_slice(), secret.as_slice()));
    debug_assert!(guess.len() < 2 || set.len() != guess.len() - 1);
    Ok(set)
}

#[inline]
fn match_mask(a: &[u8], b: &[u8]) -> u32 {
    a.iter().zip(b).enumerate().fold(0, |m, (i, (x, y))| if x == y { m | 1 << i } else { m })
}

/// Next guess after `current` drew feedback `correct`.
pub fn next_guess(current: &Permutation, correct: PositionSet, strategy: &Strategy) -> Result<Permutation> {
    let n = current.len();
    if correct.iter().any(|p| p > n) {
        return Err(Error::OutOfRange { what: "correct position", detail: format!("{correct} exceeds length {n}") });
    }
    let incorrect = n - correct.len();
    if incorrect < 2 {
        return Err(Error::NoLegalMove { incorrect });
    }
    if incorrect > strategy.len() {
        return Err(Error::LengthMismatch { left: strategy.len(), right: incorrect });
    }
    let mut next = current.as_slice().to_vec();
    advance(&mut next, current.as_slice(), correct.0, strategy);
    Ok(Permutation::from_zero_based_unchecked(next))
}

/// Writes into `next` the guess that follows `current` given the locked
/// mask. Positions in the mask are copied unchanged.
#[inline]
fn advance(next: &mut [u8], current: &[u8], locked: u32, strategy: &Strategy) {
    let mut open = [0u8; MAX_LEN];
    let mut k = 0;
    for i in 0..current.len() {
        if locked & (1 << i) == 0 {
            open[k] = i as u8;
            k += 1;
        }
    }
    let sigma = strategy.component(k).as_slice();
    for j in 0..k {
        next[open[sigma[j] as usize] as usize] = current[open[j] as usize];
    }
}

fn check_lengths(secret: &Permutation, strategy: &Strategy) -> Result<()> {
    if secret.len() != strategy.len() {
        return Err(Error::LengthMismatch { left: secret.len(), right: strategy.len() });
    }
    Ok(())
}

/// Plays a full game. The process state is the current guess (the locked set
/// is a function of it and the secret), so a repeated guess means a loop.
pub fn play(secret: &Permutation, strategy: &Strategy) -> Result<GameTrace> {
    check_lengths(secret, strategy)?;
    let n = secret.len();
    let mut guess = Permutation::identity(n)?;
    let mut seen = HashSet::new();
    let mut guesses = Vec::new();
    let mut correct_sets = Vec::new();
    let status = loop {
        if !seen.insert(guess.clone()) {
            break Outcome::Looped;
        }
        let correct = feedback(&guess, secret)?;
        guesses.push(guess.clone());
        correct_sets.push(correct);
        if correct.len() == n {
            break Outcome::Solved(guesses.len() as u32);
        }
        guess = next_guess(&guess, correct, strategy)?;
    };
    Ok(GameTrace { secret: secret.clone(), guesses, correct_sets, status })
}

pub fn rho(secret: &Permutation, strategy: &Strategy) -> Result<Rho> {
    Ok(play(secret, strategy)?.rho())
}

/// Allocation-light playback returning only the outcome and the first guess
/// index with a correct position.
pub(crate) fn play_outcome(secret: &[u8], strategy: &Strategy) -> (Outcome, Rho) {
    let n = secret.len();
    let mut guess = [0u8; MAX_LEN];
    let mut scratch = [0u8; MAX_LEN];
    for (i, g) in guess.iter_mut().enumerate().take(n) {
        *g = i as u8;
    }
    let full = ((1u64 << n) - 1) as u32;
    let mut seen: Vec<u64> = Vec::new();
    let mut rho = Rho::Undefined;
    let mut round = 0u32;
    loop {
        let key = pack(&guess[..n]);
        if seen.contains(&key) {
            return (Outcome::Looped, rho);
        }
        seen.push(key);
        round += 1;
        let mask = match_mask(&guess[..n], secret);
        if mask != 0 && rho == Rho::Undefined {
            rho = Rho::At(round);
        }
        if mask == full {
            return (Outcome::Solved(round), rho);
        }
        scratch[..n].copy_from_slice(&guess[..n]);
        advance(&mut guess[..n], &scratch[..n], mask, strategy);
    }
}

#[inline]
pub(crate) fn pack(p: &[u8]) -> u64 {
    p.iter().fold(0u64, |acc, &v| acc << 4 | v as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v).unwrap()
    }

    fn set(v: &[usize]) -> PositionSet {
        PositionSet::from_positions(v.iter().copied())
    }

    #[test]
    fn feedback_examples() {
        assert_eq!(feedback(&p(&[4, 1, 2, 3]), &p(&[2, 1, 4, 3])).unwrap(), set(&[2, 4]));
        assert_eq!(feedback(&p(&[2, 1, 4, 3]), &p(&[3, 4, 1, 2])).unwrap(), PositionSet::empty());
        let q = p(&[3, 1, 2, 5, 4]);
        assert_eq!(feedback(&q, &q).unwrap(), PositionSet::full(5));
        assert!(feedback(&p(&[1]), &p(&[1, 2])).is_err());
    }

    #[test]
    fn next_guess_examples() {
        let cs5 = Strategy::cyclic_shift(5).unwrap();
        let g = next_guess(&Permutation::identity(5).unwrap(), set(&[2]), &cs5).unwrap();
        assert_eq!(g, p(&[5, 2, 1, 3, 4]));

        let cs4 = Strategy::cyclic_shift(4).unwrap();
        let id4 = Permutation::identity(4).unwrap();
        assert_eq!(next_guess(&id4, PositionSet::empty(), &cs4).unwrap(), p(&[4, 1, 2, 3]));

        let swaps = Strategy::from_components(vec![p(&[1]), p(&[2, 1]), p(&[2, 3, 1]), p(&[2, 1, 4, 3])]).unwrap();
        assert_eq!(next_guess(&id4, PositionSet::empty(), &swaps).unwrap(), p(&[2, 1, 4, 3]));
    }

    #[test]
    fn next_guess_errors() {
        let cs4 = Strategy::cyclic_shift(4).unwrap();
        let id4 = Permutation::identity(4).unwrap();
        assert!(matches!(next_guess(&id4, set(&[1, 2, 3]), &cs4), Err(Error::NoLegalMove { incorrect: 1 })));
        assert!(matches!(next_guess(&id4, PositionSet::full(4), &cs4), Err(Error::NoLegalMove { incorrect: 0 })));
    }

    #[test]
    fn play_examples() {
        let cs4 = Strategy::cyclic_shift(4).unwrap();
        let trace = play(&Permutation::identity(4).unwrap(), &cs4).unwrap();
        assert_eq!(trace.status, Outcome::Solved(1));

        let trace = play(&p(&[4, 1, 2, 3]), &cs4).unwrap();
        assert_eq!(trace.status, Outcome::Solved(2));
        assert_eq!(trace.correct_sets[1], PositionSet::full(4));

        let trace = play(&p(&[3, 4, 1, 2]), &cs4).unwrap();
        assert_eq!(trace.status, Outcome::Solved(3));
        assert_eq!(trace.correct_sets[1], PositionSet::empty());
        assert_eq!(trace.guesses[2], p(&[3, 4, 1, 2]));
    }

    #[test]
    fn involution_top_loops() {
        let swaps = Strategy::from_components(vec![p(&[1]), p(&[2, 1]), p(&[2, 3, 1]), p(&[2, 1, 4, 3])]).unwrap();
        let trace = play(&p(&[3, 4, 1, 2]), &swaps).unwrap();
        assert_eq!(trace.status, Outcome::Looped);
        assert_eq!(trace.guesses, vec![Permutation::identity(4).unwrap(), p(&[2, 1, 4, 3])]);
        assert_eq!(trace.rho(), Rho::Undefined);
    }

    #[test]
    fn worked_example_first_two_guesses() {
        // secret chosen so that only position 2 is right at first
        let secret = p(&[4, 2, 1, 5, 3]);
        let trace = play(&secret, &Strategy::cyclic_shift(5).unwrap()).unwrap();
        assert_eq!(trace.correct_sets[0], set(&[2]));
        assert_eq!(trace.guesses[1], p(&[5, 2, 1, 3, 4]));
    }

    #[test]
    fn rho_examples() {
        let cs4 = Strategy::cyclic_shift(4).unwrap();
        assert_eq!(rho(&Permutation::identity(4).unwrap(), &cs4).unwrap(), Rho::At(1));
        assert_eq!(rho(&p(&[2, 1, 4, 3]), &cs4).unwrap(), Rho::At(2));
        assert_eq!(rho(&p(&[3, 4, 1, 2]), &cs4).unwrap(), Rho::At(3));
    }

    #[test]
    fn fast_playback_agrees_with_trace() {
        let strategies = [
            Strategy::cyclic_shift(5).unwrap(),
            Strategy::cyclic_shift_left_top(5).unwrap(),
            Strategy::inductive(p(&[3, 5, 2, 1, 4])).unwrap(),
        ];
        for s in &strategies {
            for secret in crate::perm::enumerate(5, crate::perm::PermClass::All).unwrap() {
                let trace = play(&secret, s).unwrap();
                assert_eq!(play_outcome(secret.as_slice(), s), (trace.status, trace.rho()));
            }
        }
    }

    #[test]
    fn position_set_display() {
        assert_eq!(set(&[2, 4]).to_string(), "{2,4}");
        assert_eq!(PositionSet::empty().to_string(), "∅");
        assert_eq!(PositionSet::full(3).iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    }
}
