use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use permwordle::analysis::{
    average_guesses, scan, Average, EvaluatorRegistry, Extremum, GfCoefficients, ScanConfig, ScanRow, ScanSummary,
};
use permwordle::engine::{play, Outcome};
use permwordle::tables::{compare_table2, render_table2, table1, table2};
use permwordle::verify::{VerificationReport, Verifier, VerifyOptions};
use permwordle::{Error, Strategy, StrategyClass, StrategySpace};
use serde::Serialize;

use crate::output::{emit, json_line};
use crate::{Command, Format, OutputArgs, ScanArgs, StrategyArgs, EXIT_LOOPED, EXIT_VERIFY_FAILED};

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Play { secret, strategy, out } => {
            let strategy = strategy.resolve(secret.len())?;
            let trace = play(&secret, &strategy)?;
            let text = match out.format {
                Format::Json => json_line(&PlayJson { strategy: strategy.id(), trace: &trace })?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["round", "guess", "correct"])?;
                    for (r, (g, c)) in trace.guesses.iter().zip(&trace.correct_sets).enumerate() {
                        w.write_record([(r + 1).to_string(), g.to_string(), c.to_string()])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
                Format::Text => {
                    let mut s = format!("secret {} strategy {}\n", trace.secret, strategy);
                    for (r, (g, c)) in trace.guesses.iter().zip(&trace.correct_sets).enumerate() {
                        let _ = writeln!(s, "guess {}: {g} correct {c}", r + 1);
                    }
                    match trace.status {
                        Outcome::Solved(r) => {
                            let _ = writeln!(s, "solved in {r} guess{}", if r == 1 { "" } else { "es" });
                        }
                        Outcome::Looped => s.push_str("looped: the next guess repeats an earlier one\n"),
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(if trace.status == Outcome::Looped { EXIT_LOOPED } else { 0 })
        }
        Command::Gf { target, method, out } => {
            let strategy = resolve(&target)?;
            let registry = EvaluatorRegistry::builtin();
            let evaluator = registry.get(&method).ok_or_else(|| {
                anyhow!("unknown method `{method}`; available: {}", registry.names().collect::<Vec<_>>().join(", "))
            })?;
            let gf = evaluator.evaluate(&strategy);
            let text = match out.format {
                Format::Json => json_line(&gf)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let mut header = vec!["n".to_string()];
                    header.extend((1..=gf.degree()).map(|r| format!("a_{r}")));
                    header.push("loops".into());
                    w.write_record(&header)?;
                    let mut row = vec![gf.n.to_string()];
                    row.extend(gf.coefficients().iter().map(u64::to_string));
                    row.push(gf.loops.to_string());
                    w.write_record(&row)?;
                    String::from_utf8(w.into_inner()?)?
                }
                Format::Text => gf_text(&gf),
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Avg { target, out } => {
            let strategy = resolve(&target)?;
            let gf = permwordle::analysis::generating_function(&strategy);
            let average = average_guesses(&gf);
            let text = match out.format {
                Format::Json => json_line(&AvgJson { strategy: strategy.id(), n: strategy.len(), average })?,
                Format::Csv => {
                    let (num, den) = average_fields(average);
                    format!("strategy_id,n,avg_num,avg_den\n{},{},{num},{den}\n", strategy.id(), strategy.len())
                }
                Format::Text => match average {
                    Average::Finite(_) => format!("{average} ({:.6})\n", average.to_f64()),
                    Average::Infinite => format!("inf ({} secrets loop)\n", gf.loops),
                },
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Scan { n, class, scan: args, out } => {
            let result = scan(n, class, &scan_config(&args)).map_err(refusal_hint)?;
            let text = match out.format {
                Format::Csv => scan_csv(n, &result.rows)?,
                Format::Json => json_line(&ScanJson { n, class, rows: &result.rows, summary: &result.summary })?,
                Format::Text => scan_text(&result.summary)?,
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Verify { id, min, max, all, list, extended, no_timing, scan: args, out } => {
            let verifier = Verifier::new(VerifyOptions { scan: scan_config(&args), extended });
            if list {
                let ctx = verifier.context();
                let entries: Vec<CheckEntry> = verifier
                    .registry()
                    .iter()
                    .map(|c| CheckEntry {
                        id: c.id(),
                        title: c.title(),
                        default_range: [*c.default_range().start(), *c.default_range().end()],
                        limits: [*c.limits(ctx).start(), *c.limits(ctx).end()],
                    })
                    .collect();
                emit(&out, &list_text(&entries, out.format)?)?;
                return Ok(0);
            }
            let reports = if all {
                let ids: Vec<&str> = verifier.registry().ids().collect();
                ids.into_iter().map(|id| verifier.verify(id, None)).collect::<permwordle::Result<Vec<_>>>()
            } else {
                let id = id.expect("required by the parser");
                let range = match (min, max) {
                    (None, None) => None,
                    (lo, hi) => {
                        let check = verifier.registry().get(&id).ok_or_else(|| Error::UnknownCheck(id.clone()))?;
                        let d = check.default_range();
                        Some(lo.unwrap_or(*d.start())..=hi.unwrap_or(*d.end()))
                    }
                };
                verifier.verify(&id, range).map(|r| vec![r])
            }
            .map_err(refusal_hint)?;
            report_exit(&out, reports, no_timing, all)
        }
        Command::Sequence { name, list, no_timing, out } => {
            let verifier = Verifier::new(VerifyOptions::default());
            if list {
                let names: Vec<&str> = verifier.sequence_names().collect();
                emit(&out, &(names.join("\n") + "\n"))?;
                return Ok(0);
            }
            let report = verifier.check_sequence(&name.expect("required by the parser"))?;
            report_exit(&out, vec![report], no_timing, false)
        }
        Command::Tables { which, out } => {
            let text = match (which, out.format) {
                (1, Format::Json) => json_line(&table1())?,
                (1, Format::Csv) => {
                    let t = table1();
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record([
                        "secret".to_string(),
                        format!("J2 for {}", t.columns[0].component),
                        format!("J2 for {}", t.columns[1].component),
                    ])?;
                    for row in &t.rows {
                        w.write_record([
                            row.secret.to_string(),
                            row.correct[0].to_string(),
                            row.correct[1].to_string(),
                        ])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
                (1, Format::Text) => table1().render_text(),
                (_, Format::Json) => {
                    let rows = table2();
                    json_line(&Table2Json { comparison: compare_table2(&rows), rows })?
                }
                (_, Format::Csv) => {
                    let rows = table2();
                    let width = rows.iter().map(|r| r.gf.degree()).max().unwrap_or(0);
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let mut header = vec!["n".to_string(), "top".into()];
                    header.extend((1..=width).map(|r| format!("a_{r}")));
                    w.write_record(&header)?;
                    for row in &rows {
                        let mut rec = vec![row.n.to_string(), row.top.to_string()];
                        rec.extend((1..=width).map(|r| row.gf.coefficient(r).to_string()));
                        w.write_record(&rec)?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
                (_, Format::Text) => {
                    let rows = table2();
                    let mut s = render_table2(&rows);
                    for c in compare_table2(&rows).iter().filter(|c| !c.ok || c.duplicate) {
                        let what = if c.ok { "printed twice in the published table" } else { "MISMATCH" };
                        let _ = writeln!(s, "note: top {} {what}", c.top);
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(0)
        }
    }
}

fn resolve(target: &StrategyArgs) -> Result<Strategy> {
    let n = match (target.n, target.strategy.fixed_len()) {
        (Some(n), _) => n,
        (None, Some(n)) => n,
        (None, None) => bail!("--n is required for this strategy"),
    };
    Ok(target.strategy.resolve(n)?)
}

fn scan_config(args: &ScanArgs) -> ScanConfig {
    ScanConfig { threads: args.threads, max_cost: args.max_cost, allow_large: args.allow_large }
}

fn refusal_hint(e: Error) -> anyhow::Error {
    match e {
        Error::Refused { .. } => anyhow!("{e} (use --allow-large, or raise --max-cost)"),
        other => other.into(),
    }
}

fn report_exit(out: &OutputArgs, reports: Vec<VerificationReport>, no_timing: bool, many: bool) -> Result<u8> {
    let reports: Vec<VerificationReport> =
        reports.into_iter().map(|r| if no_timing { r.without_timing() } else { r }).collect();
    let failed = reports.iter().any(|r| !r.passed());
    let text = match out.format {
        Format::Json if many => json_line(&reports)?,
        Format::Json => json_line(&reports[0])?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "n", "label", "ok", "observed", "expected", "counterexample"])?;
            for r in &reports {
                for row in &r.rows {
                    w.write_record([
                        r.id.clone(),
                        row.n.to_string(),
                        row.label.clone().unwrap_or_default(),
                        row.ok.to_string(),
                        row.observed.to_string(),
                        row.expected.to_string(),
                        row.counterexample.clone().unwrap_or_default(),
                    ])?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => reports.iter().map(VerificationReport::render_text).collect(),
    };
    emit(out, &text)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { 0 })
}

fn gf_text(gf: &GfCoefficients) -> String {
    let mut s = format!("n={} f(x) = {}\n", gf.n, gf.polynomial());
    if gf.loops > 0 {
        let _ = writeln!(s, "looping secrets: {}", gf.loops);
    }
    s
}

fn average_fields(a: Average) -> (String, String) {
    match a.ratio() {
        Some(r) => (r.numer().to_string(), r.denom().to_string()),
        None => ("inf".into(), String::new()),
    }
}

fn scan_csv(n: usize, rows: &[ScanRow]) -> Result<String> {
    let width = rows.iter().map(|r| r.gf.degree()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["strategy_id".to_string(), "n".into()];
    header.extend((1..=width).map(|r| format!("a_{r}")));
    header.extend(["loops", "avg_num", "avg_den", "rho1", "rho2", "rho3"].map(String::from));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![row.strategy.id(), n.to_string()];
        rec.extend((1..=width).map(|r| row.gf.coefficient(r).to_string()));
        let (num, den) = average_fields(row.average);
        rec.extend([row.gf.loops.to_string(), num, den]);
        rec.extend(row.rho.iter().map(u64::to_string));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn scan_text(s: &ScanSummary) -> Result<String> {
    let space = StrategySpace::new(s.n, s.class)?;
    let mut out =
        format!("{} n={}: {} strategies, {} with looping secrets\n", s.class, s.n, s.strategies, s.looping_strategies);
    fn line<T: std::fmt::Display>(out: &mut String, space: &StrategySpace, what: &str, e: &Option<Extremum<T>>) {
        if let Some(e) = e {
            let shown: Vec<String> = e.indices.iter().take(5).map(|&i| space.get(i).id()).collect();
            let more = e.indices.len().saturating_sub(shown.len());
            let tail = if more > 0 { format!(" (+{more} more)") } else { String::new() };
            let _ = writeln!(out, "{what} {} at {}{tail}", e.value, shown.join(" | "));
        }
    }
    line(&mut out, &space, "min average", &s.min_average);
    line(&mut out, &space, "max a_3", &s.max_a3);
    line(&mut out, &space, "min a_3", &s.min_a3);
    line(&mut out, &space, "max rho2", &s.max_rho2);
    line(&mut out, &space, "min rho2", &s.min_rho2);
    Ok(out)
}

#[derive(Serialize)]
struct CheckEntry {
    id: &'static str,
    title: &'static str,
    default_range: [usize; 2],
    limits: [usize; 2],
}

fn list_text(entries: &[CheckEntry], format: Format) -> Result<String> {
    if format == Format::Json {
        return json_line(&entries);
    }
    let width = entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
    Ok(entries
        .iter()
        .map(|e| {
            format!(
                "{:<width$}  n={}..{} (max {})  {}\n",
                e.id, e.default_range[0], e.default_range[1], e.limits[1], e.title
            )
        })
        .collect())
}

#[derive(Serialize)]
struct PlayJson<'a> {
    strategy: String,
    #[serde(flatten)]
    trace: &'a permwordle::engine::GameTrace,
}

#[derive(Serialize)]
struct AvgJson {
    strategy: String,
    n: usize,
    average: Average,
}

#[derive(Serialize)]
struct ScanJson<'a> {
    n: usize,
    class: StrategyClass,
    rows: &'a [ScanRow],
    summary: &'a ScanSummary,
}

#[derive(Serialize)]
struct Table2Json {
    rows: Vec<permwordle::tables::Table2Row>,
    comparison: Vec<permwordle::tables::Table2Comparison>,
}
