use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde_json::{json, Value};

use super::{Check, CheckContext, ReportRow};
use crate::analysis::{average_guesses, generating_function, rho_class_counts, GfCoefficients, GfEvaluator, Playback};
use crate::closedform::{
    cs_rho2_count, csl_cubic, csl_rho2_count, der2ex_count, derangement_count, eulerian, eulerian_second, lucas,
    rho1_binomial_sum, rho1_closed_form, A284843, CSL_CUBIC,
};
use crate::engine::{play_outcome, Outcome};
use crate::error::Result;
use crate::perm::{derangement_table, enumerate, invert_slice, PermClass, Permutation};
use crate::strategy::{Strategy, StrategyClass, StrategySpace};
use crate::tables::{compare_table2, table1, table1_reference, table2};

/// How many strategy ids an extremum row lists.
const LISTED: usize = 8;

pub fn builtin_checks() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(PropDerange),
        Box::new(EqDerangeSum),
        Box::new(LinQuad),
        Box::new(EulerianCs),
        Box::new(Rho1),
        Box::new(Der2Ex),
        Box::new(Rho3),
        Box::new(CsRho2),
        Box::new(BestRho2),
        Box::new(CslRho2),
        Box::new(WorstRho2),
        Box::new(CslCubic),
        Box::new(CubicDeranged),
        Box::new(AvgOptimality),
        Box::new(MirrorOptimality),
        Box::new(Table1Check),
        Box::new(Table2Check),
    ]
}

pub fn sequence_checks() -> Vec<Box<dyn Check>> {
    vec![Box::new(A284843Sequence), Box::new(CslCubicSequence), Box::new(Rho1Sequence)]
}

fn cs(n: usize) -> Strategy {
    Strategy::cyclic_shift(n).expect("valid length")
}

fn csl(n: usize) -> Strategy {
    Strategy::cyclic_shift_left_top(n).expect("valid length")
}

fn ratio_text(r: Ratio<u64>) -> String {
    r.to_string()
}

/// Row asserting that the strategies in `indices` are exactly `{target}`
/// and that the extremal value is `expected`.
fn extremum_row(
    n: usize,
    class: StrategyClass,
    indices: &[u64],
    observed: Value,
    expected: Value,
    target: &Strategy,
) -> Result<ReportRow> {
    let space = StrategySpace::new(n, class)?;
    let target_index = space.index_of(target);
    let unique = target_index.is_some() && indices == [target_index.unwrap()];
    let ids: Vec<String> = indices.iter().take(LISTED).map(|&i| space.get(i).id()).collect();
    let counterexample = if unique {
        None
    } else {
        let mirror = target.mirror();
        indices.iter().map(|&i| space.get(i)).find(|s| s != target).map(|s| {
            let relation = if s == mirror { " (mirror image of the expected strategy)" } else { "" };
            if target_index.is_some_and(|t| indices.contains(&t)) {
                format!("ties with {s}{relation}")
            } else {
                format!("attained by {s} instead{relation}")
            }
        })
    };
    let ok = unique && observed == expected;
    Ok(ReportRow::new(
        n,
        json!({ "value": observed, "count": indices.len(), "strategies": ids }),
        json!({ "value": expected, "count": 1, "strategies": [target.id()] }),
        ok,
    )
    .label(class.name())
    .counterexample(counterexample))
}

fn set_row(n: usize, values: &BTreeSet<u64>, expected: u64) -> ReportRow {
    let ok = values.len() == 1 && values.contains(&expected);
    ReportRow::new(n, json!({ "values": values }), json!({ "values": [expected] }), ok)
}

struct PropDerange;

impl Check for PropDerange {
    fn id(&self) -> &'static str {
        "prop-derange"
    }

    fn title(&self) -> &'static str {
        "every deranged component gives mean second-guess agreement n/(n-1)"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        3..=7
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        2..=8
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let table = derangement_table(n);
        let expected = Ratio::new(n as u64, n as u64 - 1);
        let mut averages = BTreeSet::new();
        let mut counterexample = None;
        for component in table.iter() {
            let second = invert_slice(component);
            let total: u64 = table.iter().map(|d| second.iter().zip(d).filter(|(a, b)| a == b).count() as u64).sum();
            let average = Ratio::new(total, table.len() as u64);
            if average != expected && counterexample.is_none() {
                counterexample =
                    Some(format!("component {}", Permutation::from_zero_based_unchecked(component.to_vec())));
            }
            averages.insert(average);
        }
        let observed: Vec<String> = averages.iter().copied().map(ratio_text).collect();
        Ok(vec![ReportRow::new(
            n,
            json!({ "components": table.len(), "averages": observed }),
            json!({ "components": derangement_count(n), "averages": [ratio_text(expected)] }),
            counterexample.is_none() && table.len() as u64 == derangement_count(n),
        )
        .counterexample(counterexample)])
    }

    fn erratum(&self, _: &RangeInclusive<usize>) -> Option<&'static str> {
        Some("the stated prose average (n-1)/n is a misprint; n/(n-1) is the value that holds")
    }
}

/// `sum over d in D_n of |{i : d(i) = delta(i)}|` for every `delta`.
fn agreement_sums(n: usize) -> BTreeSet<u64> {
    let table = derangement_table(n);
    if table.is_empty() {
        return BTreeSet::from([0]);
    }
    table
        .iter()
        .map(|delta| table.iter().map(|d| d.iter().zip(delta).filter(|(a, b)| a == b).count() as u64).sum())
        .collect()
}

struct EqDerangeSum;

impl Check for EqDerangeSum {
    fn id(&self) -> &'static str {
        "eq-derange-sum"
    }

    fn title(&self) -> &'static str {
        "summed agreement of a fixed derangement with all derangements"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        A284843.range()
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        A284843.range()
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let sums = agreement_sums(n);
        let reference = A284843.get(n).expect("within reference range");
        let mut row = set_row(n, &sums, reference);
        if n >= 2 {
            // n D_n / (n - 1), the sum predicted by the mean agreement
            let identity = n as u64 * derangement_count(n) / (n as u64 - 1);
            row.observed["identity"] = json!(identity);
            row.expected["identity"] = json!(reference);
            row.ok &= identity == reference;
        }
        Ok(vec![row])
    }
}

struct LinQuad;

impl Check for LinQuad {
    fn id(&self) -> &'static str {
        "linquad"
    }

    fn title(&self) -> &'static str {
        "a_1 = 1 and a_2 = 2^n - n - 1 for every strategy"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        1..=8
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        1..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        ctx.classes_at(n)
            .into_iter()
            .map(|class| {
                let s = ctx.summary(n, class)?;
                let a2 = eulerian_second(n);
                let ok = s.a1_values == BTreeSet::from([1]) && s.a2_values == BTreeSet::from([a2]);
                Ok(ReportRow::new(
                    n,
                    json!({ "strategies": s.strategies, "a1": s.a1_values, "a2": s.a2_values }),
                    json!({ "strategies": StrategySpace::new(n, class)?.len(), "a1": [1], "a2": [a2] }),
                    ok,
                )
                .label(class.name()))
            })
            .collect()
    }
}

struct EulerianCs;

impl Check for EulerianCs {
    fn id(&self) -> &'static str {
        "eulerian-cs"
    }

    fn title(&self) -> &'static str {
        "cyclic shift solves a secret with e excedances in e + 1 guesses"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        1..=8
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        1..=9
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let strategy = cs(n);
        let mut gf = GfCoefficients::new(n);
        let mut violations = 0u64;
        let mut counterexample = None;
        for secret in enumerate(n, PermClass::All)? {
            let outcome = play_outcome(secret.as_slice(), &strategy).0;
            let predicted = secret.excedance_count() as u32 + 1;
            match outcome {
                Outcome::Solved(r) => gf.add(r as usize, 1),
                Outcome::Looped => gf.loops += 1,
            }
            if outcome != Outcome::Solved(predicted) {
                violations += 1;
                counterexample
                    .get_or_insert_with(|| format!("secret {secret}: {outcome:?}, expected {predicted} guesses"));
            }
        }
        let row: Vec<u64> = (0..n).map(|k| eulerian(n, k)).collect::<Result<_>>()?;
        let coefficients = ReportRow::new(
            n,
            json!({ "coeffs": gf.coefficients(), "loops": gf.loops }),
            json!({ "coeffs": row, "loops": 0 }),
            gf.coefficients() == row && gf.loops == 0,
        )
        .label("coefficients");
        let law = ReportRow::new(n, json!({ "violations": violations }), json!({ "violations": 0 }), violations == 0)
            .label("excedance-law")
            .counterexample(counterexample);
        Ok(vec![coefficients, law])
    }
}

struct Rho1;

impl Check for Rho1 {
    fn id(&self) -> &'static str {
        "rho1"
    }

    fn title(&self) -> &'static str {
        "three-guess secrets with a correct first guess position, across inductive strategies"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=7
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        3..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let s = ctx.summary(n, StrategyClass::Inductive)?;
        Ok(vec![set_row(n, &s.rho1_values, rho1_closed_form(n) as u64).label(StrategyClass::Inductive.name())])
    }
}

struct Der2Ex;

impl Check for Der2Ex {
    fn id(&self) -> &'static str {
        "der2ex"
    }

    fn title(&self) -> &'static str {
        "derangements solved by cyclic shift in exactly three guesses"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        3..=8
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        3..=10
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let strategy = cs(n);
        let (mut three, mut two_excedances) = (0u64, 0u64);
        for d in enumerate(n, PermClass::Derangements)? {
            three += u64::from(play_outcome(d.as_slice(), &strategy).0 == Outcome::Solved(3));
            two_excedances += u64::from(d.excedance_count() == 2);
        }
        let expected = der2ex_count(n);
        Ok(vec![ReportRow::new(
            n,
            json!({ "solved_in_three": three, "two_excedances": two_excedances }),
            json!({ "solved_in_three": expected, "two_excedances": expected }),
            three == expected && two_excedances == expected,
        )])
    }
}

struct Rho3;

impl Check for Rho3 {
    fn id(&self) -> &'static str {
        "rho3"
    }

    fn title(&self) -> &'static str {
        "exactly one secret is wrong everywhere on two guesses and solved on the third"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=7
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        4..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        [StrategyClass::Cyclic, StrategyClass::Inductive]
            .into_iter()
            .filter(|&c| n <= ctx.class_limit(c))
            .map(|class| Ok(set_row(n, &ctx.summary(n, class)?.rho3_values, 1).label(class.name())))
            .collect()
    }
}

/// Three-guess secrets whose first correct position appears on guess 2.
fn rho2_row(n: usize, strategy: &Strategy, expected: u64) -> ReportRow {
    let counts = rho_class_counts(strategy, 3);
    ReportRow::new(
        n,
        json!({ "rho2": counts.get(2), "a3": counts.total() }),
        json!({ "rho2": expected }),
        counts.get(2) == expected,
    )
    .label(strategy.id())
}

struct CsRho2;

impl Check for CsRho2 {
    fn id(&self) -> &'static str {
        "cs-rho2"
    }

    fn title(&self) -> &'static str {
        "cyclic shift has 2^n - 2n - 2 three-guess secrets first hit on guess 2"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=8
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        4..=9
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        Ok(vec![rho2_row(n, &cs(n), cs_rho2_count(n))])
    }
}

struct CslRho2;

impl Check for CslRho2 {
    fn id(&self) -> &'static str {
        "csl-rho2"
    }

    fn title(&self) -> &'static str {
        "the left-topped shift has L_n - n - 1 three-guess secrets first hit on guess 2"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=8
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        4..=9
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let mut row = rho2_row(n, &csl(n), csl_rho2_count(n));
        row.expected["lucas"] = json!(lucas(n));
        Ok(vec![row])
    }
}

struct BestRho2;

impl Check for BestRho2 {
    fn id(&self) -> &'static str {
        "best-rho2"
    }

    fn title(&self) -> &'static str {
        "cyclic shift is the unique inductive strategy maximizing the guess-2 class"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=7
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        4..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let class = StrategyClass::Inductive;
        let e = ctx.summary(n, class)?.max_rho2.clone().expect("non-empty family");
        Ok(vec![extremum_row(n, class, &e.indices, json!(e.value), json!(cs_rho2_count(n)), &cs(n))?])
    }
}

struct WorstRho2;

impl Check for WorstRho2 {
    fn id(&self) -> &'static str {
        "worst-rho2"
    }

    fn title(&self) -> &'static str {
        "the left-topped shift is the unique inductive strategy minimizing the guess-2 class"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=7
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        4..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let class = StrategyClass::Inductive;
        let e = ctx.summary(n, class)?.min_rho2.clone().expect("non-empty family");
        Ok(vec![extremum_row(n, class, &e.indices, json!(e.value), json!(csl_rho2_count(n)), &csl(n))?])
    }
}

fn csl_cubic_row(n: usize) -> Result<ReportRow> {
    let brute = Playback.evaluate(&csl(n)).coefficient(3);
    let closed = csl_cubic(n)?;
    let reference = CSL_CUBIC.get(n).expect("within reference range");
    Ok(ReportRow::new(
        n,
        json!({ "closed_form": closed, "brute_force": brute }),
        json!({ "closed_form": reference, "brute_force": reference }),
        closed == reference && brute == reference,
    ))
}

struct CslCubic;

impl Check for CslCubic {
    fn id(&self) -> &'static str {
        "csl-cubic"
    }

    fn title(&self) -> &'static str {
        "cubic coefficient of the left-topped shift"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        CSL_CUBIC.range()
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        CSL_CUBIC.range()
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        Ok(vec![csl_cubic_row(n)?])
    }
}

struct CubicDeranged;

impl Check for CubicDeranged {
    fn id(&self) -> &'static str {
        "conjecture-cubic-deranged"
    }

    fn title(&self) -> &'static str {
        "cyclic shift uniquely maximizes a_3 over deranged strategies (conjectured)"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=5
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        4..=ctx.class_limit(StrategyClass::Deranged)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let class = StrategyClass::Deranged;
        let e = ctx.summary(n, class)?.max_a3.clone().expect("non-empty family");
        Ok(vec![extremum_row(n, class, &e.indices, json!(e.value), json!(eulerian(n, 2)?), &cs(n))?])
    }
}

struct AvgOptimality;

impl Check for AvgOptimality {
    fn id(&self) -> &'static str {
        "avg-optimality"
    }

    fn title(&self) -> &'static str {
        "cyclic shift uniquely minimizes the average guess count"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        3..=8
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        3..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let target = cs(n);
        let expected = average_guesses(&generating_function(&target)).to_string();
        ctx.classes_at(n)
            .into_iter()
            .map(|class| {
                let e = ctx.summary(n, class)?.min_average.clone().expect("non-empty family");
                extremum_row(n, class, &e.indices, json!(e.value.to_string()), json!(expected), &target)
            })
            .collect()
    }
}

/// Reversing positions maps cyclic shift to the all-left shift without
/// changing any guess count, so in the cyclic and deranged families the
/// optimum can be at best unique up to that reflection.
struct MirrorOptimality;

impl MirrorOptimality {
    fn row(n: usize, class: StrategyClass, indices: &[u64], what: &str) -> Result<ReportRow> {
        let space = StrategySpace::new(n, class)?;
        let target = cs(n);
        let mut allowed: Vec<u64> =
            [Some(&target), Some(&target.mirror())].into_iter().flatten().filter_map(|s| space.index_of(s)).collect();
        allowed.sort_unstable();
        allowed.dedup();
        let ids = |v: &[u64]| v.iter().map(|&i| space.get(i).id()).collect::<Vec<_>>();
        let stray = indices.iter().find(|i| !allowed.contains(i)).map(|&i| format!("{} also attains it", space.get(i)));
        Ok(ReportRow::new(n, json!(ids(indices)), json!(ids(&allowed)), indices == allowed.as_slice())
            .label(format!("{what} {}", class.name()))
            .counterexample(stray))
    }
}

impl Check for MirrorOptimality {
    fn id(&self) -> &'static str {
        "optimality-up-to-mirror"
    }

    fn title(&self) -> &'static str {
        "the optimizers are exactly cyclic shift and its mirror image"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        3..=8
    }

    fn limits(&self, ctx: &CheckContext) -> RangeInclusive<usize> {
        3..=ctx.class_limit(StrategyClass::Inductive)
    }

    fn rows(&self, n: usize, ctx: &CheckContext) -> Result<Vec<ReportRow>> {
        let mut rows = Vec::new();
        for class in ctx.classes_at(n) {
            let s = ctx.summary(n, class)?;
            let e = s.min_average.as_ref().expect("non-empty family");
            rows.push(Self::row(n, class, &e.indices, "min-average")?);
            if class == StrategyClass::Deranged && n >= 4 {
                let e = s.max_a3.as_ref().expect("non-empty family");
                rows.push(Self::row(n, class, &e.indices, "max-a3")?);
            }
        }
        Ok(rows)
    }
}

struct Table1Check;

impl Check for Table1Check {
    fn id(&self) -> &'static str {
        "table1"
    }

    fn title(&self) -> &'static str {
        "second-guess feedback grid over the length-4 derangements"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=4
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        4..=4
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let (ours, theirs) = (table1(), table1_reference());
        let mut rows = vec![ReportRow::new(
            n,
            json!(ours.columns.iter().map(|c| c.second_guess.to_string()).collect::<Vec<_>>()),
            json!(theirs.columns.iter().map(|c| c.second_guess.to_string()).collect::<Vec<_>>()),
            ours.columns == theirs.columns,
        )
        .label("second guesses")];
        for (a, b) in ours.rows.iter().zip(&theirs.rows) {
            let cells = |r: &crate::tables::Table1Row| json!(r.correct.map(|c| c.to_string()));
            rows.push(ReportRow::new(n, cells(a), cells(b), a == b).label(b.secret.to_string()));
        }
        rows.push(
            ReportRow::new(n, json!(ours.rows.len()), json!(theirs.rows.len()), ours.rows.len() == theirs.rows.len())
                .label("rows"),
        );
        Ok(rows)
    }
}

struct Table2Check;

impl Check for Table2Check {
    fn id(&self) -> &'static str {
        "table2"
    }

    fn title(&self) -> &'static str {
        "generating functions of small inductive strategies"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        4..=5
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        4..=5
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        Ok(compare_table2(&table2())
            .into_iter()
            .filter(|c| c.top.len() == n)
            .map(|c| {
                let observed = c.observed.as_ref().map(|g| json!(g.coefficients())).unwrap_or(Value::Null);
                let label = if c.duplicate { format!("{} (repeated row)", c.top) } else { c.top.to_string() };
                ReportRow::new(n, observed, json!(c.expected.coefficients()), c.ok).label(label)
            })
            .collect())
    }

    fn erratum(&self, range: &RangeInclusive<usize>) -> Option<&'static str> {
        range.contains(&4).then_some(
            "the published length-4 block prints top [2,4,1,3] twice and omits three tops; all six are computed",
        )
    }
}

struct A284843Sequence;

impl Check for A284843Sequence {
    fn id(&self) -> &'static str {
        "A284843"
    }

    fn title(&self) -> &'static str {
        "agreement of the left shift with every derangement"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        A284843.range()
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        A284843.range()
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let observed = match n {
            1 => 0,
            _ => {
                let delta = Permutation::left_shift(n)?;
                derangement_table(n)
                    .iter()
                    .map(|d| d.iter().zip(delta.as_slice()).filter(|(a, b)| a == b).count() as u64)
                    .sum()
            }
        };
        let expected = A284843.get(n).expect("within reference range");
        Ok(vec![ReportRow::new(n, json!(observed), json!(expected), observed == expected)])
    }
}

struct CslCubicSequence;

impl Check for CslCubicSequence {
    fn id(&self) -> &'static str {
        "csl-cubic"
    }

    fn title(&self) -> &'static str {
        "cubic coefficients of the left-topped shift"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        CSL_CUBIC.range()
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        CSL_CUBIC.range()
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        Ok(vec![csl_cubic_row(n)?])
    }
}

struct Rho1Sequence;

impl Check for Rho1Sequence {
    fn id(&self) -> &'static str {
        "A385588-prefix"
    }

    fn title(&self) -> &'static str {
        "three-guess secrets with a correct first guess position under cyclic shift"
    }

    fn default_range(&self) -> RangeInclusive<usize> {
        3..=8
    }

    fn limits(&self, _: &CheckContext) -> RangeInclusive<usize> {
        3..=8
    }

    fn rows(&self, n: usize, _: &CheckContext) -> Result<Vec<ReportRow>> {
        let brute = rho_class_counts(&cs(n), 3).get(1) as i128;
        let sum = rho1_binomial_sum(n);
        let closed = rho1_closed_form(n);
        Ok(vec![ReportRow::new(
            n,
            json!({ "binomial_sum": sum as u64, "brute_force": brute as u64 }),
            json!({ "binomial_sum": closed as u64, "brute_force": closed as u64 }),
            sum == closed && brute == closed,
        )])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{Status, Verifier, VerifyOptions};

    fn verifier() -> Verifier {
        Verifier::new(VerifyOptions::default())
    }

    #[test]
    fn ids_are_unique() {
        let v = verifier();
        let ids: Vec<_> = v.registry().ids().collect();
        let set: BTreeSet<_> = ids.iter().collect();
        assert_eq!(ids.len(), set.len());
        assert_eq!(ids.len(), 17);
    }

    #[test]
    fn default_ranges_fit_limits() {
        let v = verifier();
        for check in v.registry().iter() {
            let (d, l) = (check.default_range(), check.limits(v.context()));
            assert!(l.start() <= d.start() && d.end() <= l.end(), "{}", check.id());
        }
    }

    #[test]
    fn small_reports() {
        let v = verifier();
        let r = v.verify("eulerian-cs", Some(4..=4)).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.rows[0].observed["coeffs"], json!([1, 11, 11, 1]));
        assert_eq!(v.verify("prop-derange", Some(3..=4)).unwrap().status, Status::ErratumNoted);
        assert_eq!(v.verify("table2", Some(5..=5)).unwrap().status, Status::Pass);
        assert_eq!(v.verify("table2", None).unwrap().status, Status::ErratumNoted);
        assert_eq!(v.verify("rho3", Some(4..=5)).unwrap().status, Status::Pass);
    }

    #[test]
    fn ties_name_the_mirror() {
        let r = verifier().verify("avg-optimality", Some(4..=4)).unwrap();
        let cyclic = r.rows.iter().find(|row| row.label.as_deref() == Some("cyclic")).unwrap();
        assert!(!cyclic.ok);
        assert!(cyclic.counterexample.as_ref().unwrap().contains("mirror"));
        let inductive = r.rows.iter().find(|row| row.label.as_deref() == Some("inductive")).unwrap();
        assert!(inductive.ok);
        let mirrored = verifier().verify("optimality-up-to-mirror", Some(3..=5)).unwrap();
        assert_eq!(mirrored.status, Status::Pass);
    }
}
