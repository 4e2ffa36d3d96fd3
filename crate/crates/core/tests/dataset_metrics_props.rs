use analogy_core::dataset::{apply_setting, combine_pairs, parse_dataset_str, write_dataset};
use analogy_core::metrics::{average_precision, reciprocal_rank, relaxed_accuracy_hit};
use analogy_core::{AnalogyRecord, EvaluationSetting};
use proptest::prelude::*;

fn term() -> impl Strategy<Value = String> {
    "[a-z0-9][a-z0-9 .'-]{0,12}[a-z0-9]".prop_map(|s| s)
}

fn distinct_terms(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set(term(), 1..max).prop_map(|s| s.into_iter().collect())
}

fn record() -> impl Strategy<Value = AnalogyRecord> {
    ("[A-Z][0-9]{1,2}", term(), distinct_terms(4), term(), distinct_terms(5))
        .prop_filter("a != c", |(_, a, _, c, _)| a != c)
        .prop_map(|(relation, a, b_list, c, d_list)| AnalogyRecord {
            relation,
            a,
            b_list,
            c,
            d_list,
        })
}

proptest! {
    #[test]
    fn parse_inverts_write(records in prop::collection::vec(record(), 0..20)) {
        let mut buf = Vec::new();
        write_dataset(&mut buf, &records).unwrap();
        let parsed = parse_dataset_str(std::str::from_utf8(&buf).unwrap(), "p").unwrap();
        prop_assert_eq!(parsed.records, records);
    }

    #[test]
    fn views_are_sublists(r in record()) {
        let single = apply_setting(&r, EvaluationSetting::SingleAnswer);
        let multi = apply_setting(&r, EvaluationSetting::MultiAnswer);
        let all = apply_setting(&r, EvaluationSetting::AllInfo);
        for v in [single, multi, all] {
            prop_assert!(v.b_used.iter().all(|b| r.b_list.contains(b)));
            prop_assert!(v.d_valid.iter().all(|d| r.d_list.contains(d)));
            prop_assert!(!v.b_used.is_empty() && !v.d_valid.is_empty());
        }
        prop_assert!(multi.d_valid.starts_with(single.d_valid));
        prop_assert_eq!(multi.b_used, single.b_used);
    }

    #[test]
    fn combination_counts(sizes in prop::collection::vec(1usize..4, 2..12)) {
        let n = sizes.len();
        let pairs: Vec<(String, Vec<String>)> = sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| (format!("s{i}"), (0..k).map(|j| format!("o{i}.{j}")).collect()))
            .collect();
        let records = combine_pairs("R", &pairs).unwrap();
        prop_assert_eq!(records.len(), n * (n - 1));
        for (s, objects) in &pairs {
            prop_assert_eq!(records.iter().filter(|r| &r.a == s).count(), n - 1);
            prop_assert_eq!(records.iter().filter(|r| &r.c == s).count(), n - 1);
            prop_assert!(records.iter().filter(|r| &r.c == s).all(|r| &r.d_list == objects));
        }
    }

    #[test]
    fn metric_identities(positions in prop::collection::btree_set(1usize..10_000, 0..20)) {
        let positions: Vec<usize> = positions.into_iter().collect();
        let ap = average_precision(&positions);
        let rr = reciprocal_rank(&positions);
        prop_assert!((0.0..=1.0).contains(&ap));
        prop_assert!((0.0..=1.0).contains(&rr));
        // AP is bounded below by RR / n; it is not bounded above by RR once
        // there are two or more answers (positions [2, 3] give AP 0.583 > RR 0.5).
        if !positions.is_empty() {
            prop_assert!(ap >= rr / positions.len() as f64 - 1e-15);
        }
        if positions.len() == 1 {
            prop_assert_eq!(ap, rr);
        }
    }

    #[test]
    fn more_answers_never_lose_a_hit(top in 0usize..50, answers in prop::collection::vec(0usize..50, 1..5),
                                     extra in prop::collection::vec(0usize..50, 0..5)) {
        let single = &answers[..1];
        let mut multi = answers.clone();
        multi.extend(extra);
        prop_assert!(relaxed_accuracy_hit(top, &multi) >= relaxed_accuracy_hit(top, single));
    }
}

#[test]
fn average_precision_can_exceed_reciprocal_rank() {
    assert!(average_precision(&[2, 3]) > reciprocal_rank(&[2, 3]));
}

#[test]
fn comment_lines_and_crlf() {
    let ds = parse_dataset_str("# generated\r\nR\ta\tb\tc\td1|d2\r\n", "crlf").unwrap();
    assert_eq!(ds.records[0].d_list, ["d1", "d2"]);
}
