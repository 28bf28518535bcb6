//! Exhaustive scans over a strategy family.
//!
//! Strategies are processed in blocks that share every component below the
//! top. Each block fills one memo for the lower sizes, freezes it, and hands
//! it to the workers, which only evaluate top-size subgames privately.
//! Rows come back in enumeration order regardless of the thread count.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::derangement_count;
use crate::engine::Outcome;
use crate::error::{Error, Result};
use crate::memo::{SizeHistogram, SubgameMemo};
use crate::perm::derangement_table;
use crate::strategy::{Strategy, StrategyClass, StrategySpace};

use super::evaluator::combine;
use super::{average_guesses, Average, GfCoefficients};

pub const DEFAULT_MAX_COST: u128 = 10_000_000_000;

/// Strategies handed to the pool at a time.
const WAVE: u64 = 16_384;
/// Top components evaluated per work unit.
const UNIT: u64 = 128;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Worker threads; `None` uses all available cores.
    pub threads: Option<usize>,
    /// Refusal threshold on [`estimate_cost`].
    pub max_cost: u128,
    /// Run even when the estimate exceeds `max_cost`.
    pub allow_large: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { threads: None, max_cost: DEFAULT_MAX_COST, allow_large: false }
    }
}

/// Strategies times memoized subgame states per strategy.
pub fn estimate_cost(n: usize, class: StrategyClass) -> Result<u128> {
    let strategies = StrategySpace::new(n, class)?.len() as u128;
    let states: u128 = (2..=n).map(|k| derangement_count(k) as u128).sum();
    Ok(strategies * states.max(1))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    /// Position in enumeration order.
    pub index: u64,
    #[serde(serialize_with = "serialize_id")]
    pub strategy: Strategy,
    pub gf: GfCoefficients,
    pub average: Average,
    /// Secrets solved in exactly three guesses whose first correct position
    /// appeared on guess 1, 2, 3.
    pub rho: [u64; 3],
}

fn serialize_id<S: serde::Serializer>(s: &Strategy, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&s.id())
}

impl ScanRow {
    pub fn a3(&self) -> u64 {
        self.gf.coefficient(3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extremum<T> {
    pub value: T,
    /// Enumeration indices of every strategy attaining `value`.
    pub indices: Vec<u64>,
}

impl<T: Ord + Copy> Extremum<T> {
    fn offer(slot: &mut Option<Self>, value: T, index: u64, want: std::cmp::Ordering) {
        match slot {
            None => *slot = Some(Extremum { value, indices: vec![index] }),
            Some(e) => match value.cmp(&e.value) {
                std::cmp::Ordering::Equal => e.indices.push(index),
                o if o == want => *slot = Some(Extremum { value, indices: vec![index] }),
                _ => {}
            },
        }
    }

    pub fn unique(&self) -> Option<u64> {
        (self.indices.len() == 1).then(|| self.indices[0])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub n: usize,
    pub class: StrategyClass,
    pub strategies: u64,
    pub min_average: Option<Extremum<Average>>,
    pub max_a3: Option<Extremum<u64>>,
    pub min_a3: Option<Extremum<u64>>,
    pub max_rho2: Option<Extremum<u64>>,
    pub min_rho2: Option<Extremum<u64>>,
    pub a1_values: BTreeSet<u64>,
    pub a2_values: BTreeSet<u64>,
    pub rho1_values: BTreeSet<u64>,
    pub rho3_values: BTreeSet<u64>,
    pub looping_strategies: u64,
    pub first_looping: Option<u64>,
}

impl ScanSummary {
    fn new(n: usize, class: StrategyClass) -> Self {
        ScanSummary {
            n,
            class,
            strategies: 0,
            min_average: None,
            max_a3: None,
            min_a3: None,
            max_rho2: None,
            min_rho2: None,
            a1_values: BTreeSet::new(),
            a2_values: BTreeSet::new(),
            rho1_values: BTreeSet::new(),
            rho3_values: BTreeSet::new(),
            looping_strategies: 0,
            first_looping: None,
        }
    }

    fn absorb(&mut self, row: &ScanRow) {
        use std::cmp::Ordering::{Greater, Less};
        self.strategies += 1;
        Extremum::offer(&mut self.min_average, row.average, row.index, Less);
        Extremum::offer(&mut self.max_a3, row.a3(), row.index, Greater);
        Extremum::offer(&mut self.min_a3, row.a3(), row.index, Less);
        Extremum::offer(&mut self.max_rho2, row.rho[1], row.index, Greater);
        Extremum::offer(&mut self.min_rho2, row.rho[1], row.index, Less);
        self.a1_values.insert(row.gf.coefficient(1));
        self.a2_values.insert(row.gf.coefficient(2));
        self.rho1_values.insert(row.rho[0]);
        self.rho3_values.insert(row.rho[2]);
        if row.gf.loops > 0 {
            self.looping_strategies += 1;
            self.first_looping.get_or_insert(row.index);
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

pub fn scan(n: usize, class: StrategyClass, config: &ScanConfig) -> Result<ScanResult> {
    let mut rows = Vec::new();
    let summary = scan_each(n, class, config, |row| rows.push(row.clone()))?;
    Ok(ScanResult { rows, summary })
}

struct BlockBase {
    memo: Arc<SubgameMemo>,
    lower: Vec<SizeHistogram>,
}

fn build_base(space: &StrategySpace, block: u64) -> BlockBase {
    let n = space.n();
    let first = space.get(block * space.top_count());
    let mut memo = SubgameMemo::new();
    let mut lower = vec![SizeHistogram::default(); n + 1];
    for (k, slot) in lower.iter_mut().enumerate().take(n).skip(2) {
        *slot = memo.histogram(&first, k);
    }
    BlockBase { memo: Arc::new(memo), lower }
}

fn evaluate_top(index: u64, strategy: Strategy, base: &BlockBase, memo: &mut SubgameMemo) -> ScanRow {
    let n = strategy.len();
    memo.sync(&strategy);
    let mut hists = base.lower.clone();
    let mut top = SizeHistogram::default();
    let mut rho = [0u64; 3];
    if n >= 2 {
        let second = strategy.guess(n).to_vec();
        for d in derangement_table(n).iter() {
            match memo.resolve(&strategy, d) {
                Outcome::Solved(t) => {
                    let t = t as usize;
                    if top.counts.len() <= t {
                        top.counts.resize(t + 1, 0);
                    }
                    top.counts[t] += 1;
                    if t == 2 {
                        let hit = second.iter().zip(d).any(|(a, b)| a == b);
                        rho[if hit { 1 } else { 2 }] += 1;
                    }
                }
                Outcome::Looped => top.loops += 1,
            }
        }
        hists[n] = top;
    }
    let gf = combine(n, &hists);
    if n >= 3 {
        rho[0] = gf.coefficient(3) - rho[1] - rho[2];
    }
    let average = average_guesses(&gf);
    ScanRow { index, strategy, gf, average, rho }
}

/// Streams every row of the scan to `visit` in enumeration order and returns
/// the summary.
pub fn scan_each(
    n: usize,
    class: StrategyClass,
    config: &ScanConfig,
    mut visit: impl FnMut(&ScanRow),
) -> Result<ScanSummary> {
    let space = StrategySpace::new(n, class)?;
    let estimate = estimate_cost(n, class)?;
    if estimate > config.max_cost && !config.allow_large {
        return Err(Error::Refused { estimate, threshold: config.max_cost });
    }
    let threads = config.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |c| c.get())).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::OutOfRange { what: "thread pool", detail: e.to_string() })?;

    let mut summary = ScanSummary::new(n, class);
    let tops = space.top_count();
    let blocks = space.block_count();
    let blocks_per_wave = (WAVE / tops).max(1);

    let mut start = 0;
    while start < blocks {
        let end = (start + blocks_per_wave).min(blocks);
        let chunks: Vec<Vec<ScanRow>> = pool.install(|| {
            let bases: Vec<BlockBase> = (start..end).into_par_iter().map(|b| build_base(&space, b)).collect();
            let units: Vec<(u64, u64, u64)> = (start..end)
                .flat_map(|b| (0..tops).step_by(UNIT as usize).map(move |t| (b, t, (t + UNIT).min(tops))))
                .collect();
            units
                .par_iter()
                .map_init(
                    || None::<(u64, SubgameMemo)>,
                    |worker, &(block, lo, hi)| {
                        let base = &bases[(block - start) as usize];
                        if worker.as_ref().map(|(b, _)| *b) != Some(block) {
                            *worker = Some((block, SubgameMemo::layered(base.memo.clone(), n - 1)));
                        }
                        let memo = &mut worker.as_mut().unwrap().1;
                        (lo..hi)
                            .map(|t| {
                                let index = block * tops + t;
                                evaluate_top(index, space.get(index), base, memo)
                            })
                            .collect()
                    },
                )
                .collect()
        });
        for row in chunks.iter().flatten() {
            summary.absorb(row);
            visit(row);
        }
        start = end;
    }
    Ok(summary)
}
