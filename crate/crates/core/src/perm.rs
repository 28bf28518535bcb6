//! Permutations in one-line notation.
//!
//! A [`Permutation`] of length `n` is written the usual way, as the list
//! `[p(1), p(2), ..., p(n)]`. Internally entries are stored zero-based in a
//! `Vec<u8>`; every public constructor and accessor speaks one-based values.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported permutation length. `12!` still fits comfortably in a
/// `u64`, which keeps every count in this crate in machine integers.
pub const MAX_LEN: usize = 12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u8>);

/// Which permutations [`enumerate`] yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermClass {
    All,
    Derangements,
    Cyclic,
}

impl Permutation {
    /// Builds a permutation from one-based one-line notation.
    pub fn new(one_line: &[usize]) -> Result<Self> {
        let len = one_line.len();
        check_len(len)?;
        let mut seen = [false; MAX_LEN];
        let mut entries = Vec::with_capacity(len);
        for (i, &v) in one_line.iter().enumerate() {
            if v == 0 || v > len {
                return Err(Error::NotAPermutation {
                    len,
                    reason: format!("entry {v} at position {} is outside 1..{len}", i + 1),
                });
            }
            if seen[v - 1] {
                return Err(Error::NotAPermutation { len, reason: format!("value {v} appears twice") });
            }
            seen[v - 1] = true;
            entries.push((v - 1) as u8);
        }
        Ok(Permutation(entries))
    }

    /// Wraps zero-based entries that are already known to form a bijection.
    pub(crate) fn from_zero_based_unchecked(entries: Vec<u8>) -> Self {
        debug_assert!(is_bijection(&entries));
        Permutation(entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Permutation((0..n as u8).collect()))
    }

    /// `[2, 3, ..., n, 1]`: every entry moves one slot to the right, wrapping.
    pub fn right_shift(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Permutation((0..n).map(|i| ((i + 1) % n) as u8).collect()))
    }

    /// `[n, 1, 2, ..., n-1]`.
    pub fn left_shift(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Permutation((0..n).map(|i| ((i + n - 1) % n) as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One-based value at one-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize + 1
    }

    /// Zero-based entries.
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// One-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    /// `result[i] = self[other[i]]`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(Permutation(other.0.iter().map(|&j| self.0[j as usize]).collect()))
    }

    pub fn invert(&self) -> Permutation {
        Permutation(invert_slice(&self.0))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn is_derangement(&self) -> bool {
        self.first_fixed_point().is_none()
    }

    /// One-based position of the first fixed point, if any.
    pub fn first_fixed_point(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &v)| i == v as usize).map(|i| i + 1)
    }

    /// True iff the permutation is a single cycle through all `n` points.
    pub fn is_cyclic(&self) -> bool {
        let n = self.len();
        let mut at = 0usize;
        for step in 1..=n {
            at = self.0[at] as usize;
            if at == 0 {
                return step == n;
            }
        }
        false
    }

    pub fn excedance_count(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &v)| v as usize > i).count()
    }

    /// Index of this permutation in lexicographic order among all
    /// permutations of the same length.
    pub fn lex_rank(&self) -> u64 {
        lehmer_rank(&self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_one_line(f, &self.0)?;
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `2,3,1` or `[2,3,1]`, whitespace tolerated.
    fn from_str(s: &str) -> Result<Self> {
        parse_one_line(s, 0)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.one_line())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(&entries).map_err(serde::de::Error::custom)
    }
}

/// Comma-separated one-based values, without brackets.
pub(crate) fn write_one_line(f: &mut impl fmt::Write, entries: &[u8]) -> fmt::Result {
    for (i, v) in entries.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{}", *v as usize + 1)?;
    }
    Ok(())
}

/// Parses one-line notation; `offset` shifts reported columns so callers
/// embedding a permutation in a larger string get accurate diagnostics.
pub(crate) fn parse_one_line(s: &str, offset: usize) -> Result<Permutation> {
    let trimmed_start = s.len() - s.trim_start().len();
    let mut body = s.trim();
    let mut base = offset + trimmed_start;
    if let Some(rest) = body.strip_prefix('[') {
        body = rest
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse { column: offset + s.len(), message: "missing closing `]`".into() })?;
        base += 1;
    }
    if body.trim().is_empty() {
        return Err(Error::Parse { column: base + 1, message: "empty permutation".into() });
    }
    let mut values = Vec::new();
    let mut col = base;
    for field in body.split(',') {
        let value = field.trim().parse::<usize>().map_err(|_| Error::Parse {
            column: col + 1,
            message: format!("expected a positive integer, found `{}`", field.trim()),
        })?;
        values.push(value);
        col += field.len() + 1;
    }
    Permutation::new(&values).map_err(|e| match e {
        Error::NotAPermutation { reason, .. } => {
            Error::Parse { column: base + 1, message: format!("not a permutation: {reason}") }
        }
        other => other,
    })
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LEN {
        return Err(Error::InvalidLength { len: n, max: MAX_LEN });
    }
    Ok(())
}

fn is_bijection(entries: &[u8]) -> bool {
    let mut seen = [false; 256];
    entries.iter().all(|&v| (v as usize) < entries.len() && !std::mem::replace(&mut seen[v as usize], true))
}

pub(crate) fn invert_slice(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

/// Lexicographic rank of a zero-based permutation.
pub(crate) fn lehmer_rank(p: &[u8]) -> u64 {
    let n = p.len();
    let mut used: u32 = 0;
    let mut rank = 0u64;
    for (i, &v) in p.iter().enumerate() {
        let smaller_unused = (v as u32) - (used & ((1u32 << v) - 1)).count_ones();
        rank = rank * (n - i) as u64 + smaller_unused as u64;
        used |= 1 << v;
    }
    rank
}

/// In-place lexicographic successor. Returns false after the last permutation.
pub(crate) fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn in_class(p: &[u8], class: PermClass) -> bool {
    match class {
        PermClass::All => true,
        PermClass::Derangements => p.iter().enumerate().all(|(i, &v)| i != v as usize),
        PermClass::Cyclic => Permutation(p.to_vec()).is_cyclic(),
    }
}

/// Lexicographic stream over one class of permutations of length `n`.
pub struct Permutations {
    current: Vec<u8>,
    class: PermClass,
    done: bool,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        while !self.done {
            let candidate = in_class(&self.current, self.class).then(|| Permutation(self.current.clone()));
            self.done = !next_permutation(&mut self.current);
            if candidate.is_some() {
                return candidate;
            }
        }
        None
    }
}

/// Every permutation of length `n` in `class`, each exactly once, in
/// lexicographic order.
pub fn enumerate(n: usize, class: PermClass) -> Result<Permutations> {
    check_len(n)?;
    Ok(Permutations { current: (0..n as u8).collect(), class, done: false })
}

/// All derangements of one length packed into one contiguous buffer.
pub struct DerangementTable {
    len: usize,
    data: Vec<u8>,
}

impl DerangementTable {
    pub fn len(&self) -> usize {
        self.data.len() / self.len.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn perm_len(&self) -> usize {
        self.len
    }

    /// Zero-based entries of each derangement, in lexicographic order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.len)
    }
}

const CACHED_TABLES: usize = 11;

/// Cached derangement list for length `k`. Lengths above 10 are built on
/// every call since they run to tens of millions of entries.
pub fn derangement_table(k: usize) -> std::sync::Arc<DerangementTable> {
    static CACHE: [OnceLock<std::sync::Arc<DerangementTable>>; CACHED_TABLES] =
        [const { OnceLock::new() }; CACHED_TABLES];
    let build = || {
        let mut data = Vec::new();
        if k >= 1 {
            for p in enumerate(k, PermClass::Derangements).expect("length checked by caller") {
                data.extend_from_slice(&p.0);
            }
        }
        std::sync::Arc::new(DerangementTable { len: k, data })
    };
    if k < CACHED_TABLES {
        CACHE[k].get_or_init(build).clone()
    } else {
        build()
    }
}
