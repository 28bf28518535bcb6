//! The two worked tables: second-guess feedback over the length-4
//! derangements for two top components, and generating functions of a few
//! small inductive strategies. Each is computed from scratch and can be
//! compared against the published values kept here.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{generating_function, GfCoefficients};
use crate::engine::{feedback, PositionSet};
use crate::perm::{enumerate, PermClass, Permutation};
use crate::strategy::{Strategy, StrategyClass, StrategySpace};

fn perm(entries: &[usize]) -> Permutation {
    Permutation::new(entries).expect("reference permutation")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Column {
    pub component: Permutation,
    pub second_guess: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub secret: Permutation,
    /// Correct positions after the second guess, one entry per column.
    pub correct: [PositionSet; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1 {
    pub columns: [Table1Column; 2],
    pub rows: Vec<Table1Row>,
}

const TABLE1_COMPONENTS: [[usize; 4]; 2] = [[2, 3, 4, 1], [2, 1, 4, 3]];

/// Feedback on the second guess `component^-1` for every length-4 derangement.
pub fn table1() -> Table1 {
    let columns = TABLE1_COMPONENTS.map(|c| {
        let component = perm(&c);
        Table1Column { second_guess: component.invert(), component }
    });
    let rows = enumerate(4, PermClass::Derangements)
        .expect("length 4")
        .map(|secret| {
            let correct = [0, 1].map(|i| feedback(&columns[i].second_guess, &secret).expect("same length"));
            Table1Row { secret, correct }
        })
        .collect();
    Table1 { columns, rows }
}

/// The published grid, transcribed.
pub fn table1_reference() -> Table1 {
    const ROWS: [([usize; 4], &[usize], &[usize]); 9] = [
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
    let columns = [
        Table1Column { component: perm(&[2, 3, 4, 1]), second_guess: perm(&[4, 1, 2, 3]) },
        Table1Column { component: perm(&[2, 1, 4, 3]), second_guess: perm(&[2, 1, 4, 3]) },
    ];
    let rows = ROWS
        .iter()
        .map(|(secret, left, right)| Table1Row {
            secret: perm(secret),
            correct: [
                PositionSet::from_positions(left.iter().copied()),
                PositionSet::from_positions(right.iter().copied()),
            ],
        })
        .collect();
    Table1 { columns, rows }
}

impl Table1 {
    pub fn render_text(&self) -> String {
        let header = [
            "secret".to_string(),
            format!("S[n] = {}", self.columns[0].component),
            format!("S[n] = {}", self.columns[1].component),
        ];
        let guesses = [
            String::new(),
            format!("g2 = {}", self.columns[0].second_guess),
            format!("g2 = {}", self.columns[1].second_guess),
        ];
        let body: Vec<[String; 3]> = self
            .rows
            .iter()
            .map(|r| [r.secret.to_string(), r.correct[0].to_string(), r.correct[1].to_string()])
            .collect();
        let widths: Vec<usize> = (0..3)
            .map(|c| {
                body.iter().map(|r| r[c].chars().count()).chain([header[c].len(), guesses[c].len()]).max().unwrap()
            })
            .collect();
        let mut out = String::new();
        let mut line = |cells: &[String; 3]| {
            let _ =
                writeln!(out, "{:<w0$} | {:<w1$} | {}", cells[0], cells[1], cells[2], w0 = widths[0], w1 = widths[1]);
        };
        line(&header);
        line(&guesses);
        for row in &body {
            line(row);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub top: Permutation,
    pub gf: GfCoefficients,
}

/// Every inductive top of length 4 in lexicographic order, then the four
/// length-5 tops that were published, in published order.
pub fn table2() -> Vec<Table2Row> {
    let space = StrategySpace::new(4, StrategyClass::Inductive).expect("length 4");
    let mut strategies: Vec<Strategy> = space.iter().collect();
    strategies.extend(
        [[2, 3, 4, 5, 1], [4, 3, 1, 5, 2], [3, 5, 2, 1, 4], [5, 1, 2, 3, 4]]
            .iter()
            .map(|top| Strategy::inductive(perm(top)).expect("cyclic top")),
    );
    strategies
        .into_iter()
        .map(|s| Table2Row { n: s.len(), top: s.top().clone(), gf: generating_function(&s) })
        .collect()
}

/// A published row: top component and `a_1, a_2, ...`.
#[derive(Debug, Clone, Copy)]
pub struct Table2Reference {
    pub top: &'static [usize],
    pub coeffs: &'static [u64],
}

/// As printed, including the length-4 row that appears twice.
pub const TABLE2_REFERENCE: [Table2Reference; 8] = [
    Table2Reference { top: &[2, 3, 4, 1], coeffs: &[1, 11, 11, 1] },
    Table2Reference { top: &[2, 4, 1, 3], coeffs: &[1, 11, 9, 3] },
    Table2Reference { top: &[2, 4, 1, 3], coeffs: &[1, 11, 9, 3] },
    Table2Reference { top: &[4, 1, 2, 3], coeffs: &[1, 11, 7, 5] },
    Table2Reference { top: &[2, 3, 4, 5, 1], coeffs: &[1, 26, 66, 26, 1] },
    Table2Reference { top: &[4, 3, 1, 5, 2], coeffs: &[1, 26, 60, 25, 8] },
    Table2Reference { top: &[3, 5, 2, 1, 4], coeffs: &[1, 26, 55, 27, 10, 1] },
    Table2Reference { top: &[5, 1, 2, 3, 4], coeffs: &[1, 26, 51, 26, 11, 5] },
];

#[derive(Debug, Clone, Serialize)]
pub struct Table2Comparison {
    pub top: Permutation,
    pub expected: GfCoefficients,
    pub observed: Option<GfCoefficients>,
    pub ok: bool,
    /// This published row repeats an earlier one.
    pub duplicate: bool,
}

pub fn compare_table2(rows: &[Table2Row]) -> Vec<Table2Comparison> {
    let mut seen: Vec<Permutation> = Vec::new();
    TABLE2_REFERENCE
        .iter()
        .map(|r| {
            let top = perm(r.top);
            let expected = GfCoefficients::from_coefficients(r.top.len(), r.coeffs, 0);
            let observed = rows.iter().find(|row| row.top == top).map(|row| row.gf.clone());
            let duplicate = seen.contains(&top);
            seen.push(top.clone());
            Table2Comparison { ok: observed.as_ref() == Some(&expected), top, expected, observed, duplicate }
        })
        .collect()
}

pub fn render_table2(rows: &[Table2Row]) -> String {
    let width = rows.iter().map(|r| r.top.to_string().len()).max().unwrap_or(0);
    let mut out = String::new();
    let mut last = 0;
    for row in rows {
        let label = if row.n != last { format!("n={}", row.n) } else { String::new() };
        last = row.n;
        let _ = writeln!(out, "{label:<4} {:<width$}  {}", row.top.to_string(), row.gf.polynomial());
    }
    out
}
