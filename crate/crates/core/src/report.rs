//! Outcome files and report rendering.
//!
//! An outcome file is the per-query record of an evaluation run: a few `#`
//! metadata lines, a header, then one tab-separated row per scored query:
//!
//! ```text
//! record  relation  top_guess  correct  n_answers  n_valid  n_in_index  positions
//! ```
//!
//! `positions` is a comma-separated list of 1-based ranks, or `-` when no
//! valid answer is in the candidate index. Metrics are recomputed from the
//! positions, so reports rendered from a file match the original run.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::evaluate::{group_outcomes, EvaluationRun};
use crate::metrics::{summarize, QueryOutcome, Summary};

const HEADER: &str = "record\trelation\ttop_guess\tcorrect\tn_answers\tn_valid\tn_in_index\tpositions";

pub fn write_outcomes<W: Write>(mut w: W, run: &EvaluationRun) -> io::Result<()> {
    let o = &run.options;
    writeln!(w, "# analogy outcomes")?;
    writeln!(
        w,
        "# setting={} method={} epsilon={} shift_cosines={} normalize={}",
        o.setting, o.scoring.method, o.scoring.epsilon, o.scoring.shift_cosines, o.normalize_queries
    )?;
    writeln!(w, "# scored={} skipped={}", run.queries.len(), run.skipped.len())?;
    writeln!(w, "{HEADER}")?;
    for q in &run.queries {
        let positions = if q.outcome.answer_positions.is_empty() {
            "-".to_owned()
        } else {
            q.outcome
                .answer_positions
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            q.record,
            q.relation,
            q.top_guess,
            u8::from(q.outcome.top_guess_correct),
            q.outcome.n_answers,
            q.outcome.n_valid,
            q.outcome.n_answers_in_index,
            positions
        )?;
    }
    Ok(())
}

pub fn outcomes_to_string(run: &EvaluationRun) -> String {
    let mut buf = Vec::new();
    write_outcomes(&mut buf, run).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("outcomes are UTF-8")
}

/// Parses an outcome file into per-relation groups (first-appearance order).
pub fn parse_outcomes(text: &str, origin: &str) -> Result<Vec<(String, Vec<QueryOutcome>)>> {
    let mut rows: Vec<(String, QueryOutcome)> = Vec::new();
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != HEADER {
                return Err(Error::parse(origin, lineno, "missing outcome header"));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(Error::parse(
                origin,
                lineno,
                format!("expected 8 fields, found {}", f.len()),
            ));
        }
        let num = |s: &str, name: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(origin, lineno, format!("invalid {name} {s:?}")))
        };
        let correct = match f[3] {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(origin, lineno, format!("invalid correct flag {other:?}"))),
        };
        let answer_positions = if f[7] == "-" {
            Vec::new()
        } else {
            f[7].split(',')
                .map(|p| num(p, "position"))
                .collect::<Result<Vec<_>>>()?
        };
        if answer_positions.windows(2).any(|w| w[0] >= w[1]) || answer_positions.contains(&0) {
            return Err(Error::parse(
                origin,
                lineno,
                "positions must be increasing 1-based ranks",
            ));
        }
        let outcome = QueryOutcome {
            top_guess_correct: correct,
            n_answers: num(f[4], "n_answers")?,
            n_valid: num(f[5], "n_valid")?,
            n_answers_in_index: num(f[6], "n_in_index")?,
            answer_positions,
        };
        if outcome.n_answers_in_index != outcome.answer_positions.len() || outcome.n_answers_in_index > outcome.n_valid
        {
            return Err(Error::parse(origin, lineno, "inconsistent answer counts"));
        }
        rows.push((f[1].to_owned(), outcome));
    }
    if !seen_header {
        return Err(Error::parse(origin, 1, "missing outcome header"));
    }
    Ok(group_outcomes(rows.iter().map(|(r, o)| (r.as_str(), o))))
}

/// Summarizes an outcome file.
pub fn summarize_outcomes(text: &str, origin: &str) -> Result<Summary> {
    summarize(&parse_outcomes(text, origin)?)
}

/// Fixed-width table: one row per relation, then the macro "mean (std)" row
/// and the per-query (micro) row.
pub fn render_table(summary: &Summary) -> String {
    let width = summary
        .relations
        .iter()
        .map(|r| r.relation.chars().count())
        .chain(["relation".len(), "overall".len(), "micro".len()])
        .max()
        .unwrap_or(8);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>11}  {:>11}  {:>11}  {:>11}  {:>7}",
        "relation", "n", "RelAcc", "MAP", "MRR", "Amb", "missing"
    );
    for r in &summary.relations {
        let _ = writeln!(
            out,
            "{:<width$}  {:>7}  {:>11.3}  {:>11.3}  {:>11.3}  {:>11.2}  {:>7}",
            r.relation, r.n_queries, r.rel_acc, r.map, r.mrr, r.ambiguity, r.missing_answers
        );
    }
    let o = &summary.overall;
    let ms = |m: crate::metrics::MeanStd| format!("{:.2} ({:.2})", m.mean, m.std);
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>11}  {:>11}  {:>11}  {:>11}",
        "overall",
        o.n_relations,
        ms(o.rel_acc),
        ms(o.map),
        ms(o.mrr),
        ms(o.ambiguity)
    );
    let m = &summary.micro;
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>11.3}  {:>11.3}  {:>11.3}",
        "micro", m.n_queries, m.rel_acc, m.map, m.mrr
    );
    out
}

/// Per-relation CSV with columns `relation,n,rel_acc,map,mrr,ambiguity`.
pub fn render_csv(summary: &Summary) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = std::iter::once(["relation", "n", "rel_acc", "map", "mrr", "ambiguity"].map(String::from)).chain(
        summary.relations.iter().map(|r| {
            [
                r.relation.clone(),
                r.n_queries.to_string(),
                format!("{:.6}", r.rel_acc),
                format!("{:.6}", r.map),
                format!("{:.6}", r.mrr),
                format!("{:.6}", r.ambiguity),
            ]
        }),
    );
    for row in rows {
        w.write_record(&row).expect("writing to a Vec cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to a Vec")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::EvaluationSetting;
    use crate::evaluate::{EvaluateOptions, EvaluatedQuery};

    fn q(record: usize, relation: &str, correct: bool, positions: &[usize], n_valid: usize) -> EvaluatedQuery {
        EvaluatedQuery {
            record,
            relation: relation.into(),
            top_guess: "x y".into(),
            outcome: QueryOutcome {
                top_guess_correct: correct,
                answer_positions: positions.to_vec(),
                n_answers_in_index: positions.len(),
                n_valid,
                n_answers: n_valid,
            },
        }
    }

    fn run() -> EvaluationRun {
        EvaluationRun {
            options: EvaluateOptions {
                setting: EvaluationSetting::AllInfo,
                ..Default::default()
            },
            queries: vec![
                q(0, "A", false, &[5], 1),
                q(1, "B", true, &[2], 1),
                q(3, "B", false, &[2, 9], 3),
                q(4, "B", false, &[], 1),
                q(5, "A", true, &[1], 2),
            ],
            skipped: vec![],
        }
    }

    #[test]
    fn outcome_file_round_trips_metrics() {
        let text = outcomes_to_string(&run());
        assert!(text.contains("setting=all-info"));
        let groups = parse_outcomes(&text, "o").unwrap();
        assert_eq!(groups, run().groups());
        assert_eq!(summarize_outcomes(&text, "o").unwrap(), run().summary().unwrap());
    }

    #[test]
    fn malformed_outcomes_are_rejected() {
        assert!(parse_outcomes("", "o").is_err());
        let bad = format!("{HEADER}\n0\tA\tx\t2\t1\t1\t1\t1\n");
        assert!(parse_outcomes(&bad, "o").unwrap_err().to_string().contains("o:2"));
        let bad = format!("{HEADER}\n0\tA\tx\t1\t1\t1\t2\t3,2\n");
        assert!(parse_outcomes(&bad, "o").is_err());
        let empty = format!("{HEADER}\n");
        assert!(summarize_outcomes(&empty, "o").is_err());
    }

    #[test]
    fn table_and_csv() {
        let summary = run().summary().unwrap();
        let table = render_table(&summary);
        assert!(table.lines().next().unwrap().starts_with("relation"));
        assert_eq!(table.lines().count(), 5);
        let csv = render_csv(&summary);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "relation,n,rel_acc,map,mrr,ambiguity");
        assert_eq!(lines[1], "A,2,0.500000,0.600000,0.600000,1.500000");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn overall_row_uses_mean_and_population_std() {
        use crate::metrics::{MeanStd, MicroSummary, OverallSummary, RelationSummary};
        let rel = |name: &str, v: f64| RelationSummary {
            relation: name.into(),
            n_queries: 1,
            rel_acc: v,
            map: v,
            mrr: v,
            ambiguity: 1.0,
            missing_answers: 0,
        };
        let relations = vec![rel("A", 0.2), rel("B", 0.4)];
        let m = MeanStd::of(&[0.2, 0.4]);
        let summary = Summary {
            overall: OverallSummary {
                n_relations: 2,
                rel_acc: m,
                map: m,
                mrr: m,
                ambiguity: MeanStd::of(&[1.0, 1.0]),
            },
            micro: MicroSummary {
                n_queries: 2,
                rel_acc: 0.3,
                map: 0.3,
                mrr: 0.3,
            },
            relations,
        };
        let table = render_table(&summary);
        let overall = table.lines().find(|l| l.starts_with("overall")).unwrap();
        assert_eq!(overall.matches("0.30 (0.10)").count(), 3, "{overall}");
        assert!(overall.contains("1.00 (0.00)"));
    }
}
