//! Performance measures for strategies.

mod evaluator;
mod scan;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::engine::{Outcome, Rho};
use crate::error::{Error, Result};
use crate::perm::{derangement_table, Permutation};
use crate::strategy::Strategy;

pub use evaluator::{generating_function, Decomposition, EvaluatorRegistry, GfEvaluator, Playback};
pub use scan::{
    estimate_cost, scan, scan_each, Extremum, ScanConfig, ScanResult, ScanRow, ScanSummary, DEFAULT_MAX_COST,
};

/// Coefficients of the guess-count generating function: `coefficient(r)`
/// secrets are solved in exactly `r` guesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfCoefficients {
    pub n: usize,
    /// Indexed by guess count; entry 0 is always zero.
    coeffs: Vec<u64>,
    /// Secrets on which the strategy never finishes.
    pub loops: u64,
}

impl GfCoefficients {
    pub(crate) fn new(n: usize) -> Self {
        GfCoefficients { n, coeffs: vec![0], loops: 0 }
    }

    pub(crate) fn add(&mut self, r: usize, count: u64) {
        if count == 0 {
            return;
        }
        if self.coeffs.len() <= r {
            self.coeffs.resize(r + 1, 0);
        }
        self.coeffs[r] += count;
    }

    pub fn from_coefficients(n: usize, coeffs: &[u64], loops: u64) -> Self {
        let mut gf = GfCoefficients::new(n);
        for (i, &a) in coeffs.iter().enumerate() {
            gf.add(i + 1, a);
        }
        gf.loops = loops;
        gf
    }

    pub fn coefficient(&self, r: usize) -> u64 {
        self.coeffs.get(r).copied().unwrap_or(0)
    }

    /// Largest guess count with a non-zero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_1, ..., a_degree`.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs[1..]
    }

    /// Secrets accounted for, solved or looping. Always `n!`.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum::<u64>() + self.loops
    }

    /// Polynomial in descending powers, e.g. `x^4 + 11x^3 + 11x^2 + x`.
    pub fn polynomial(&self) -> String {
        let terms: Vec<String> = (1..=self.degree())
            .rev()
            .filter(|&r| self.coefficient(r) > 0)
            .map(|r| {
                let a = self.coefficient(r);
                let coef = if a == 1 { String::new() } else { a.to_string() };
                match r {
                    1 => format!("{coef}x"),
                    _ => format!("{coef}x^{r}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl Serialize for GfCoefficients {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: BTreeMap<usize, u64> = (1..=self.degree()).map(|r| (r, self.coefficient(r))).collect();
        let mut st = serializer.serialize_struct("GfCoefficients", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("loops", &self.loops)?;
        st.end()
    }
}

/// Mean number of guesses over all `n!` secrets; infinite when some secret
/// loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Average {
    Finite(Ratio<u64>),
    Infinite,
}

impl Ord for Average {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Average::Finite(a), Average::Finite(b)) => a.cmp(b),
            (Average::Finite(_), Average::Infinite) => Ordering::Less,
            (Average::Infinite, Average::Finite(_)) => Ordering::Greater,
            (Average::Infinite, Average::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Average {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Average {
    pub fn ratio(self) -> Option<Ratio<u64>> {
        match self {
            Average::Finite(r) => Some(r),
            Average::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Average::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Average::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Average::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Average::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Average::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Average {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Average::Finite(r) => {
                let mut st = serializer.serialize_struct("Average", 2)?;
                st.serialize_field("num", r.numer())?;
                st.serialize_field("den", r.denom())?;
                st.end()
            }
            Average::Infinite => serializer.serialize_str("inf"),
        }
    }
}

pub fn average_guesses(gf: &GfCoefficients) -> Average {
    if gf.loops > 0 {
        return Average::Infinite;
    }
    let weighted: u64 = (1..=gf.degree()).map(|r| r as u64 * gf.coefficient(r)).sum();
    Average::Finite(Ratio::new(weighted, gf.total()))
}

/// Secrets solved in exactly `total_guesses` guesses, split by the first
/// guess with a correct position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoCounts {
    pub total_guesses: u32,
    /// `counts[i - 1]` holds the class with first correct guess `i`.
    pub counts: Vec<u64>,
}

impl RhoCounts {
    pub fn get(&self, rho: u32) -> u64 {
        self.counts.get(rho as usize - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Classifies every secret by direct playback.
pub fn rho_class_counts(strategy: &Strategy, total_guesses: u32) -> RhoCounts {
    let mut counts = vec![0u64; total_guesses as usize];
    for secret in crate::perm::enumerate(strategy.len(), crate::perm::PermClass::All).expect("valid strategy length") {
        if let (Outcome::Solved(r), Rho::At(i)) = crate::engine::play_outcome(secret.as_slice(), strategy) {
            if r == total_guesses {
                counts[i as usize - 1] += 1;
            }
        }
    }
    RhoCounts { total_guesses, counts }
}

fn require_derangement(p: &Permutation) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::OutOfRange { what: "derangement length", detail: format!("needs n >= 2, got {}", p.len()) });
    }
    match p.first_fixed_point() {
        Some(position) => Err(Error::NotDerangement { len: p.len(), position }),
        None => Ok(()),
    }
}

/// Mean size of the second correct set when the secret ranges over all
/// derangements and `component` drives the second guess.
pub fn average_j2_over_derangements(component: &Permutation) -> Result<Ratio<u64>> {
    require_derangement(component)?;
    let second = component.invert();
    let table = derangement_table(component.len());
    let total: u64 =
        table.iter().map(|secret| second.as_slice().iter().zip(secret).filter(|(a, b)| a == b).count() as u64).sum();
    Ok(Ratio::new(total, table.len() as u64))
}

/// `sum over d in D_n of |{i : d(i) = delta(i)}|`.
pub fn agreement_sum(delta: &Permutation) -> Result<u64> {
    require_derangement(delta)?;
    let delta = delta.as_slice();
    Ok(derangement_table(delta.len()).iter().map(|d| d.iter().zip(delta).filter(|(a, b)| a == b).count() as u64).sum())
}
