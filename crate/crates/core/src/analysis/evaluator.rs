//! Interchangeable ways of computing a strategy's generating function.
//!
//! Two evaluators ship by default and must always agree:
//!
//! * [`Playback`] plays every one of the `n!` secrets to the end.
//! * [`Decomposition`] counts, for each number `k` of incorrect first-guess
//!   positions, how many derangements of length `k` need `t` more guesses,
//!   then sums `C(n, k)` copies of each: `a_{1+t} = sum_k C(n,k) #{d in D_k : T(d) = t}`.

use crate::closedform::binomial;
use crate::engine::{play_outcome, Outcome};
use crate::memo::{SizeHistogram, SubgameMemo};
use crate::perm::{enumerate, PermClass};
use crate::strategy::Strategy;

use super::GfCoefficients;

pub trait GfEvaluator: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn evaluate(&self, strategy: &Strategy) -> GfCoefficients;
}

pub struct Playback;

impl GfEvaluator for Playback {
    fn name(&self) -> &'static str {
        "playback"
    }

    fn description(&self) -> &'static str {
        "play all n! secrets to completion"
    }

    fn evaluate(&self, strategy: &Strategy) -> GfCoefficients {
        let n = strategy.len();
        let mut gf = GfCoefficients::new(n);
        for secret in enumerate(n, PermClass::All).expect("strategy length is valid") {
            match play_outcome(secret.as_slice(), strategy).0 {
                Outcome::Solved(r) => gf.add(r as usize, 1),
                Outcome::Looped => gf.loops += 1,
            }
        }
        gf
    }
}

pub struct Decomposition;

impl GfEvaluator for Decomposition {
    fn name(&self) -> &'static str {
        "decomposition"
    }

    fn description(&self) -> &'static str {
        "memoized derangement subgames weighted by binomial position choices"
    }

    fn evaluate(&self, strategy: &Strategy) -> GfCoefficients {
        let n = strategy.len();
        let mut memo = SubgameMemo::new();
        let hists: Vec<SizeHistogram> =
            (0..=n).map(|k| if k >= 2 { memo.histogram(strategy, k) } else { SizeHistogram::default() }).collect();
        combine(n, &hists)
    }
}

/// Assembles coefficients from per-size subgame histograms (`hists[k]` for
/// `k` incorrect positions; entries below 2 are ignored).
pub(crate) fn combine(n: usize, hists: &[SizeHistogram]) -> GfCoefficients {
    let mut gf = GfCoefficients::new(n);
    gf.add(1, 1);
    for (k, hist) in hists.iter().enumerate().take(n + 1).skip(2) {
        let ways = binomial(n, k);
        for (t, &count) in hist.counts.iter().enumerate() {
            gf.add(1 + t, ways * count);
        }
        gf.loops += ways * hist.loops;
    }
    gf
}

/// Generating function via the memoized decomposition.
pub fn generating_function(strategy: &Strategy) -> GfCoefficients {
    Decomposition.evaluate(strategy)
}

/// Named evaluators, selectable at runtime.
pub struct EvaluatorRegistry {
    entries: Vec<Box<dyn GfEvaluator>>,
}

impl Default for EvaluatorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl EvaluatorRegistry {
    pub fn empty() -> Self {
        EvaluatorRegistry { entries: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(Decomposition));
        registry.register(Box::new(Playback));
        registry
    }

    /// Adds an evaluator, replacing any existing one with the same name.
    pub fn register(&mut self, evaluator: Box<dyn GfEvaluator>) {
        self.entries.retain(|e| e.name() != evaluator.name());
        self.entries.push(evaluator);
    }

    pub fn get(&self, name: &str) -> Option<&dyn GfEvaluator> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn GfEvaluator> {
        self.entries.iter().map(|e| e.as_ref())
    }
}
