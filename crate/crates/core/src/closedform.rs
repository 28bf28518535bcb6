//! Closed forms and reference sequences, all in exact integer arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};

/// Eulerian number `A(n, k)`: permutations of length `n` with `k` excedances.
pub fn eulerian(n: usize, k: usize) -> Result<u64> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange { what: "Eulerian index", detail: format!("need 0 <= k < n, got n={n}, k={k}") });
    }
    let mut row = vec![1u64];
    for m in 2..=n {
        let mut next = vec![0u64; m];
        for (j, slot) in next.iter_mut().enumerate() {
            let stay = row.get(j).map_or(0, |&a| (j as u64 + 1) * a);
            let grow = if j > 0 { (m - j) as u64 * row[j - 1] } else { 0 };
            *slot = stay + grow;
        }
        row = next;
    }
    Ok(row[k])
}

/// `A(n, 1) = 2^n - n - 1`.
pub fn eulerian_second(n: usize) -> u64 {
    (1u64 << n) - n as u64 - 1
}

/// Lucas numbers with `L_1 = 1`, `L_2 = 3`.
pub fn lucas(n: usize) -> u64 {
    let (mut a, mut b) = (2u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

pub fn derangement_count(n: usize) -> u64 {
    let (mut prev, mut cur) = (1u64, 0u64);
    if n == 0 {
        return 1;
    }
    for m in 2..=n as u64 {
        (prev, cur) = (cur, (m - 1) * (cur + prev));
    }
    cur
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u64).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Secrets with a correct first guess position that finish in exactly three
/// guesses under any inductive strategy:
/// `1 - 2^(n+1) + 3^n + n^2/2 + 5n/2 - n 2^n`.
pub fn rho1_closed_form(n: usize) -> i128 {
    let n = n as i128;
    let half_terms = n * n + 5 * n;
    debug_assert!(half_terms % 2 == 0);
    1 - (1i128 << (n + 1)) + 3i128.pow(n as u32) + half_terms / 2 - n * (1i128 << n)
}

/// The same count as a binomial sum,
/// `sum_{k=1}^{n-3} C(n,k) (2^(n-k) - (2(n-k) + 1))`.
pub fn rho1_binomial_sum(n: usize) -> i128 {
    (1..=n.saturating_sub(3))
        .map(|k| {
            let m = (n - k) as i128;
            binomial(n, k) as i128 * ((1i128 << m) - (2 * m + 1))
        })
        .sum()
}

/// Derangements of length `n` solved by cyclic shift in exactly three guesses.
pub fn der2ex_count(n: usize) -> u64 {
    (1u64 << n) - 2 * n as u64 - 1
}

pub fn cs_rho2_count(n: usize) -> u64 {
    (1u64 << n) - 2 * n as u64 - 2
}

pub fn csl_rho2_count(n: usize) -> u64 {
    lucas(n) - n as u64 - 1
}

/// Cubic coefficient of the left-topped shift: `1 + rho1 + (L_n - n - 1)`.
pub fn csl_cubic(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "cubic coefficient length", detail: format!("needs n >= 3, got {n}") });
    }
    Ok(1 + rho1_closed_form(n) as u64 + csl_rho2_count(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceTable {
    pub name: &'static str,
    /// `n` of the first value.
    pub offset: usize,
    pub values: &'static [u64],
}

impl SequenceTable {
    pub fn get(&self, n: usize) -> Option<u64> {
        n.checked_sub(self.offset).and_then(|i| self.values.get(i).copied())
    }

    pub fn range(&self) -> std::ops::RangeInclusive<usize> {
        self.offset..=self.offset + self.values.len() - 1
    }
}

/// Summed agreement of a fixed derangement with every derangement (A284843).
pub const A284843: SequenceTable =
    SequenceTable { name: "A284843", offset: 1, values: &[0, 2, 3, 12, 55, 318, 2163, 16952] };

pub const CSL_CUBIC: SequenceTable =
    SequenceTable { name: "csl-cubic", offset: 3, values: &[1, 7, 51, 263, 1100, 4093] };
