//! Acceptance gate. Prints one line per criterion and fails if any criterion
//! fails or overruns its time budget.
//!
//! Set `PERMWORDLE_ACCEPT_EXTENDED=1` to add the expensive scales: deranged
//! scans at n = 6 and the cyclic n = 7 scan (hours of CPU).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use permwordle::analysis::{
    agreement_sum, average_j2_over_derangements, generating_function, rho_class_counts, scan, Decomposition,
    GfEvaluator, Playback, ScanConfig, ScanResult,
};
use permwordle::closedform::csl_cubic;
use permwordle::engine::{feedback, play, Outcome, PositionSet};
use permwordle::perm::{enumerate, PermClass};
use permwordle::tables::table1;
use permwordle::{Permutation, Strategy, StrategyClass, StrategySpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_SEED: u64 = 0x5eed_2024;
const ORACLE_SAMPLES: usize = 500;

fn extended() -> bool {
    std::env::var("PERMWORDLE_ACCEPT_EXTENDED").is_ok_and(|v| v == "1")
}

fn p(v: &[usize]) -> Permutation {
    Permutation::new(v).unwrap()
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Eulerian number by the alternating sum, independent of the library's
/// recurrence.
fn eulerian_oracle(n: u64, k: u64) -> u64 {
    let mut total: i128 = 0;
    for j in 0..=k + 1 {
        let term = binomial(n + 1, j) as i128 * ((k + 1 - j) as i128).pow(n as u32);
        total += if j % 2 == 0 { term } else { -term };
    }
    total as u64
}

fn lucas_oracle(n: usize) -> u64 {
    let mut l = vec![2u64, 1];
    while l.len() <= n {
        l.push(l[l.len() - 1] + l[l.len() - 2]);
    }
    l[n]
}

fn derangements(n: usize) -> Vec<Permutation> {
    enumerate(n, PermClass::All).unwrap().filter(|q| (1..=n).all(|i| q.at(i) != i)).collect()
}

fn full_scan(n: usize, class: StrategyClass) -> ScanResult {
    let config = ScanConfig { allow_large: true, ..ScanConfig::default() };
    scan(n, class, &config).unwrap()
}

type Verdict = Result<String, String>;

fn check(ok: bool, pass: String, fail: String) -> Verdict {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn c1_table2() -> Verdict {
    let rows: [(&[usize], &[u64]); 7] = [
        (&[2, 3, 4, 1], &[1, 11, 11, 1]),
        (&[2, 4, 1, 3], &[1, 11, 9, 3]),
        (&[4, 1, 2, 3], &[1, 11, 7, 5]),
        (&[2, 3, 4, 5, 1], &[1, 26, 66, 26, 1]),
        (&[4, 3, 1, 5, 2], &[1, 26, 60, 25, 8]),
        (&[3, 5, 2, 1, 4], &[1, 26, 55, 27, 10, 1]),
        (&[5, 1, 2, 3, 4], &[1, 26, 51, 26, 11, 5]),
    ];
    for (top, want) in rows {
        let s = Strategy::inductive(p(top)).unwrap();
        for gf in [generating_function(&s), Playback.evaluate(&s)] {
            if gf.coefficients() != want || gf.loops != 0 {
                return Err(format!("top {}: got {:?}, want {want:?}", p(top), gf.coefficients()));
            }
        }
    }
    Ok("7 distinct rows match, by decomposition and by playback".into())
}

fn c2_table1() -> Verdict {
    let grid: [([usize; 4], &[usize], &[usize]); 9] = [
        ([2, 1, 4, 3], &[2, 4], &[1, 2, 3, 4]),
        ([2, 3, 4, 1], &[], &[1, 3]),
        ([2, 4, 1, 3], &[4], &[1, 4]),
        ([3, 1, 4, 2], &[2], &[2, 3]),
        ([3, 4, 1, 2], &[], &[]),
        ([3, 4, 2, 1], &[3], &[]),
        ([4, 1, 2, 3], &[1, 2, 3, 4], &[2, 4]),
        ([4, 3, 1, 2], &[1], &[]),
        ([4, 3, 2, 1], &[1, 3], &[]),
    ];
    let guesses = [p(&[2, 3, 4, 1]).invert(), p(&[2, 1, 4, 3]).invert()];
    if guesses != [p(&[4, 1, 2, 3]), p(&[2, 1, 4, 3])] {
        return Err(format!("second guesses {guesses:?}"));
    }
    let secrets = derangements(4);
    if secrets.len() != 9 {
        return Err(format!("{} derangements of length 4", secrets.len()));
    }
    let table = table1();
    for ((secret, left, right), row) in grid.iter().zip(&table.rows) {
        let want =
            [PositionSet::from_positions(left.iter().copied()), PositionSet::from_positions(right.iter().copied())];
        let secret = p(secret);
        let got = [feedback(&guesses[0], &secret).unwrap(), feedback(&guesses[1], &secret).unwrap()];
        if got != want || row.secret != secret || row.correct != want {
            return Err(format!("secret {secret}: got {got:?} / table {:?}, want {want:?}", row.correct));
        }
    }
    check(table.rows.len() == 9, "18 cells match".into(), format!("{} table rows", table.rows.len()))
}

fn c3_eulerian() -> Verdict {
    for n in 1..=8usize {
        let gf = Playback.evaluate(&Strategy::cyclic_shift(n).unwrap());
        let want: Vec<u64> = (0..n as u64).map(|k| eulerian_oracle(n as u64, k)).collect();
        if gf.coefficients() != want || gf.loops != 0 {
            return Err(format!("n={n}: got {:?}, want {want:?}", gf.coefficients()));
        }
    }
    Ok("n=1..8 by full playback".into())
}

fn c4_excedance_law() -> Verdict {
    let mut games = 0u64;
    for n in 1..=8usize {
        let cs = Strategy::cyclic_shift(n).unwrap();
        for secret in enumerate(n, PermClass::All).unwrap() {
            let excedances = (1..=n).filter(|&i| secret.at(i) > i).count() as u32;
            let trace = play(&secret, &cs).unwrap();
            if trace.status != Outcome::Solved(excedances + 1) {
                return Err(format!("secret {secret}: {:?}, excedances {excedances}", trace.status));
            }
            games += 1;
        }
    }
    Ok(format!("{games} games, rounds = excedances + 1"))
}

fn c5_linquad() -> Verdict {
    let mut families = vec![];
    families.extend((1..=6).map(|n| (n, StrategyClass::Cyclic)));
    families.extend((1..=5).map(|n| (n, StrategyClass::Deranged)));
    families.extend((3..=8).map(|n| (n, StrategyClass::Inductive)));
    let mut total = 0usize;
    for (n, class) in families {
        let expected_count: u64 = match class {
            StrategyClass::Cyclic => (3..=n as u64).map(|i| factorial(i - 1)).product(),
            StrategyClass::Deranged => (3..=n).map(|i| derangements(i).len() as u64).product(),
            StrategyClass::Inductive => factorial(n as u64 - 1),
        };
        let result = full_scan(n, class);
        if result.rows.len() as u64 != expected_count {
            return Err(format!("{class} n={n}: {} strategies, want {expected_count}", result.rows.len()));
        }
        let a2 = (1u64 << n) - n as u64 - 1;
        if let Some(row) = result.rows.iter().find(|r| r.gf.coefficient(1) != 1 || r.gf.coefficient(2) != a2) {
            return Err(format!("{class} n={n}: {} has {:?}", row.strategy, row.gf.coefficients()));
        }
        total += result.rows.len();
    }
    Ok(format!("{total} strategies (cyclic 34560 at n=6, deranged 792 at n=5, inductive 5040 at n=8)"))
}

fn c6_rho_classes() -> Verdict {
    for n in 4..=7usize {
        let ni = n as i128;
        let rho1 = 1 - (1i128 << (n + 1)) + 3i128.pow(n as u32) + (ni * ni + 5 * ni) / 2 - ni * (1i128 << n);
        let result = full_scan(n, StrategyClass::Inductive);
        if let Some(row) = result.rows.iter().find(|r| r.rho[0] as i128 != rho1 || r.rho[2] != 1) {
            return Err(format!("n={n}: {} has rho classes {:?}, want rho1={rho1}, rho3=1", row.strategy, row.rho));
        }
        let cs = rho_class_counts(&Strategy::cyclic_shift(n).unwrap(), 3);
        let csl = rho_class_counts(&Strategy::cyclic_shift_left_top(n).unwrap(), 3);
        let (want_cs, want_csl) = ((1u64 << n) - 2 * n as u64 - 2, lucas_oracle(n) - n as u64 - 1);
        if cs.get(2) != want_cs || csl.get(2) != want_csl || cs.get(1) as i128 != rho1 || cs.get(3) != 1 {
            return Err(format!(
                "n={n}: CS {:?} (rho2 want {want_cs}), CSL {:?} (rho2 want {want_csl})",
                cs.counts, csl.counts
            ));
        }
    }
    Ok("n=4..7: rho1 closed form and rho3 = 1 for every inductive strategy; CS and CSL rho2 match".into())
}

fn unique_index(indices: &[u64]) -> Option<u64> {
    (indices.len() == 1).then(|| indices[0])
}

fn c7_dominance() -> Verdict {
    for n in 4..=7usize {
        let space = StrategySpace::new(n, StrategyClass::Inductive).unwrap();
        let result = full_scan(n, StrategyClass::Inductive);
        let (cs, csl) = (Strategy::cyclic_shift(n).unwrap(), Strategy::cyclic_shift_left_top(n).unwrap());
        let a3 = |s: &Strategy| result.rows[space.index_of(s).unwrap() as usize].a3();
        let (top, bottom) = (a3(&cs), a3(&csl));
        let above: Vec<_> =
            result.rows.iter().filter(|r| r.a3() >= top && r.strategy != cs).map(|r| r.strategy.id()).collect();
        let below: Vec<_> =
            result.rows.iter().filter(|r| r.a3() <= bottom && r.strategy != csl).map(|r| r.strategy.id()).collect();
        let summary = &result.summary;
        let by_summary = summary.max_a3.as_ref().and_then(|e| unique_index(&e.indices)) == space.index_of(&cs)
            && summary.min_a3.as_ref().and_then(|e| unique_index(&e.indices)) == space.index_of(&csl);
        if !above.is_empty() || !below.is_empty() || !by_summary {
            return Err(format!("n={n}: rivals of CS {above:?}, rivals of CSL {below:?}"));
        }
    }
    Ok("n=4..7: max a3 only at CS, min a3 only at CSL".into())
}

fn c8_csl_cubic() -> Verdict {
    let want = [1u64, 7, 51, 263, 1100, 4093];
    let closed: Vec<u64> = (3..=8).map(|n| csl_cubic(n).unwrap()).collect();
    let brute: Vec<u64> =
        (3..=8).map(|n| Playback.evaluate(&Strategy::cyclic_shift_left_top(n).unwrap()).coefficient(3)).collect();
    check(closed == want && brute == want, format!("{want:?}"), format!("closed {closed:?}, brute {brute:?}"))
}

fn c9_prop_derange() -> Verdict {
    for n in 3..=7usize {
        let expected = Ratio::new(n as u64, n as u64 - 1);
        for component in derangements(n) {
            let got = average_j2_over_derangements(&component).unwrap();
            if got != expected {
                return Err(format!("component {component}: {got}, want {expected}"));
            }
        }
    }
    let want = [0u64, 2, 3, 12, 55, 318, 2163, 16952];
    for n in 1..=8usize {
        let ds = derangements(n);
        let sums: BTreeSet<u64> = if ds.is_empty() {
            BTreeSet::from([0])
        } else {
            ds.iter().map(|delta| agreement_sum(delta).unwrap()).collect()
        };
        if sums != BTreeSet::from([want[n - 1]]) {
            return Err(format!("n={n}: sums {sums:?}, want {}", want[n - 1]));
        }
    }
    Ok("n/(n-1) for every deranged component n=3..7; sums 0,2,3,12,55,318,2163,16952".into())
}

/// All strategies attaining the extremum, with CS required to be alone.
fn cs_alone(n: usize, class: StrategyClass, indices: &[u64]) -> Result<(), String> {
    let space = StrategySpace::new(n, class).unwrap();
    let cs = space.index_of(&Strategy::cyclic_shift(n).unwrap());
    if cs.is_some() && indices == [cs.unwrap()] {
        return Ok(());
    }
    let ids: Vec<String> = indices.iter().map(|&i| space.get(i).id()).collect();
    let mut pair: Vec<u64> = [Strategy::cyclic_shift(n).unwrap(), Strategy::cyclic_shift(n).unwrap().mirror()]
        .iter()
        .filter_map(|s| space.index_of(s))
        .collect();
    pair.sort_unstable();
    let note = if indices == pair { " = {CS, mirror(CS)}" } else { "" };
    Err(format!("{class} n={n}: attained by {ids:?}{note}"))
}

fn c10_average_optimality() -> Verdict {
    let mut families = vec![];
    families.extend((3..=if extended() { 7 } else { 6 }).map(|n| (n, StrategyClass::Cyclic)));
    families.extend((3..=5).map(|n| (n, StrategyClass::Deranged)));
    families.extend((3..=8).map(|n| (n, StrategyClass::Inductive)));
    let mut failures = vec![];
    for (n, class) in families {
        let result = full_scan(n, class);
        let best = result.rows.iter().map(|r| r.average).min().unwrap();
        let at: Vec<u64> = result.rows.iter().filter(|r| r.average == best).map(|r| r.index).collect();
        if let Err(e) = cs_alone(n, class, &at) {
            failures.push(e);
        }
    }
    check(failures.is_empty(), "CS is the strict minimum in every family".into(), failures.join("; "))
}

fn c11_loops() -> Verdict {
    let strategy = Strategy::from_components(vec![p(&[1]), p(&[2, 1]), p(&[2, 3, 1]), p(&[2, 1, 4, 3])]).unwrap();
    let trace = play(&p(&[3, 4, 1, 2]), &strategy).unwrap();
    let result = full_scan(4, StrategyClass::Deranged);
    let looping = result.rows.iter().filter(|r| r.gf.loops > 0).count();
    check(
        trace.status == Outcome::Looped && looping > 0 && result.summary.looping_strategies == looping as u64,
        format!("[3,4,1,2] loops; {looping} of {} deranged n=4 strategies loop somewhere", result.rows.len()),
        format!("status {:?}, {looping} looping strategies", trace.status),
    )
}

fn random_strategy(rng: &mut ChaCha8Rng) -> Strategy {
    let n = rng.gen_range(1..=7);
    let cyclic = rng.gen_bool(0.5);
    let components = (1..=n)
        .map(|k| loop {
            let mut v: Vec<usize> = (1..=k).collect();
            for i in (1..k).rev() {
                v.swap(i, rng.gen_range(0..=i));
            }
            let q = p(&v);
            let ok = match k {
                1 => true,
                _ if cyclic => q.is_cyclic(),
                _ => q.is_derangement(),
            };
            if ok {
                break q;
            }
        })
        .collect();
    Strategy::from_components(components).unwrap()
}

fn c12_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut looping = 0;
    for i in 0..ORACLE_SAMPLES {
        let s = random_strategy(&mut rng);
        let (a, b) = (Playback.evaluate(&s), Decomposition.evaluate(&s));
        if a != b || a.total() != factorial(s.len() as u64) {
            return Err(format!("sample {i} {s}: playback {a:?}, decomposition {b:?}"));
        }
        looping += usize::from(a.loops > 0);
    }
    Ok(format!("{ORACLE_SAMPLES} pairs agree ({looping} with loops), seed {ORACLE_SEED:#x}"))
}

fn c13_conjecture() -> Verdict {
    let mut failures = vec![];
    for n in 4..=if extended() { 6 } else { 5 } {
        let result = full_scan(n, StrategyClass::Deranged);
        let best = result.rows.iter().map(|r| r.a3()).max().unwrap();
        let at: Vec<u64> = result.rows.iter().filter(|r| r.a3() == best).map(|r| r.index).collect();
        if let Err(e) = cs_alone(n, StrategyClass::Deranged, &at) {
            failures.push(format!("{e} (a3 = {best})"));
        }
    }
    check(failures.is_empty(), "CS is the unique a3 maximum".into(), failures.join("; "))
}

/// Id, name, time budget in seconds, body.
type Criterion = (u32, &'static str, u64, fn() -> Verdict);

#[test]
fn acceptance() {
    let criteria: [Criterion; 13] = [
        (1, "Table 2 generating functions", 1, c1_table2),
        (2, "Table 1 second-guess grid", 1, c2_table1),
        (3, "Eulerian coefficients of cyclic shift", 60, c3_eulerian),
        (4, "per-secret law: rounds = excedances + 1", 60, c4_excedance_law),
        (5, "linear and quadratic coefficients over whole families", 300, c5_linquad),
        (6, "rho-class closed forms", 120, c6_rho_classes),
        (7, "strict cubic dominance among inductive strategies", 120, c7_dominance),
        (8, "left-topped shift cubic sequence", 60, c8_csl_cubic),
        (9, "mean second-guess agreement and its sum sequence", 120, c9_prop_derange),
        (10, "strict average-guess optimality of cyclic shift", 600, c10_average_optimality),
        (11, "loop pathology", 1, c11_loops),
        (12, "playback vs memoized decomposition", 60, c12_oracle),
        (13, "cubic conjecture over deranged strategies", 300, c13_conjecture),
    ];
    let mut failed = vec![];
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(budget);
        let (mark, detail) = match (&outcome, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget: {d}")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        println!("[{mark}] {id:>2} {name} ({:.2}s, limit {budget}s): {detail}", elapsed.as_secs_f64());
        if mark == "FAIL" {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
