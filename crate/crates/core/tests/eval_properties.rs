mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trevl::{Evaluator, Execution, MeasureSelection, QrelSet, RunSet};

const RATE_MEASURES: [&str; 5] = ["map", "ndcg", "ndcg_cut", "P", "recip_rank"];

/// One query with up to 10 documents: integer scores and relevance 0..=3.
fn single_query() -> impl Strategy<Value = Vec<(i32, i64)>> {
    prop::collection::vec((-20i32..20, 0i64..=3), 1..10)
}

fn build(docs: &[(i32, i64)], transform: impl Fn(f64) -> f64) -> (QrelSet, RunSet) {
    let mut qrel = QrelSet::new();
    let mut run = RunSet::new();
    for (i, &(score, rel)) in docs.iter().enumerate() {
        let doc = format!("doc{i}");
        qrel.insert("q", doc.clone(), rel).unwrap();
        run.insert("q", doc, transform(score as f64)).unwrap();
    }
    (qrel, run)
}

fn values(qrel: QrelSet, run: &RunSet, measures: &[&str]) -> BTreeMap<String, f64> {
    let results = Evaluator::with_measures(qrel, measures)
        .unwrap()
        .evaluate(run)
        .unwrap();
    results
        .query("q")
        .map(|it| it.map(|(m, v)| (m.to_string(), v)).collect())
        .unwrap_or_default()
}

proptest! {
    #[test]
    fn matches_brute_force_oracle(seed in any::<u64>()) {
        let instance = random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let gap = max_oracle_gap(&instance);
        prop_assert!(gap.is_some_and(|g| g <= 1e-9), "gap {gap:?}");
    }

    #[test]
    fn positive_affine_transform_preserves_values(
        docs in single_query(), scale in 1u32..8, shift in -50i32..50,
    ) {
        let (qrel, run) = build(&docs, |s| s);
        let (qrel2, run2) = build(&docs, |s| s * scale as f64 + shift as f64);
        prop_assert_eq!(values(qrel, &run, &RATE_MEASURES), values(qrel2, &run2, &RATE_MEASURES));
    }

    #[test]
    fn promoting_a_relevant_document_never_hurts(docs in single_query(), a in 0usize..10, b in 0usize..10) {
        let (a, b) = (a % docs.len(), b % docs.len());
        let (qrel, run) = build(&docs, |s| s);
        let ranking = trevl::rank_documents(run.get("q").unwrap()).unwrap();
        let order: Vec<usize> = ranking.doc_ids().map(|d| d[3..].parse().unwrap()).collect();
        let (hi, lo) = (a.min(b), a.max(b));
        let (upper, lower) = (order[hi], order[lo]);
        prop_assume!(docs[lower].1 > docs[upper].1);
        // Give the lower document the upper one's rank position by swapping
        // their ranks through fresh, strictly ordered scores.
        let mut swapped = RunSet::new();
        for (pos, &doc) in order.iter().enumerate() {
            let doc = if doc == upper { lower } else if doc == lower { upper } else { doc };
            swapped.insert("q", format!("doc{doc}"), (order.len() - pos) as f64).unwrap();
        }
        let mut original = RunSet::new();
        for (pos, &doc) in order.iter().enumerate() {
            original.insert("q", format!("doc{doc}"), (order.len() - pos) as f64).unwrap();
        }
        let before = values(qrel.clone(), &original, &["map", "ndcg"]);
        let after = values(qrel, &swapped, &["map", "ndcg"]);
        for m in ["map", "ndcg"] {
            prop_assert!(after[m] >= before[m] - 1e-12, "{m}: {} -> {}", before[m], after[m]);
        }
    }

    #[test]
    fn perfect_ranking_scores_one(rels in prop::collection::vec(0i64..=3, 1..12)) {
        prop_assume!(rels.iter().any(|&r| r > 0));
        let mut sorted = rels.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        let docs: Vec<(i32, i64)> = sorted.iter().enumerate().map(|(i, &r)| (100 - i as i32, r)).collect();
        let (qrel, run) = build(&docs, |s| s);
        let v = values(qrel, &run, &["map", "ndcg"]);
        prop_assert!((v["map"] - 1.0).abs() < 1e-12);
        prop_assert!((v["ndcg"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn values_are_bounded(seed in any::<u64>()) {
        let (qrel, run) = random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let results = Evaluator::new(to_qrel(&qrel), MeasureSelection::all()).evaluate(&to_run(&run)).unwrap();
        for (q, vals) in results.iter() {
            for (m, &v) in results.measure_ids().iter().zip(vals) {
                if m.starts_with("num_") {
                    prop_assert!(v >= 0.0 && v.fract() == 0.0, "{q} {m} {v}");
                } else {
                    prop_assert!((0.0..=1.0).contains(&v), "{q} {m} {v}");
                }
            }
            let get = |m: &str| results.get(q, m).unwrap();
            prop_assert!(get("num_rel_ret") <= get("num_rel").min(get("num_ret")));
        }
    }

    #[test]
    fn repeated_and_parallel_evaluation_agree(seed in any::<u64>()) {
        let (qrel, run) = random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let evaluator = Evaluator::new(to_qrel(&qrel), MeasureSelection::all());
        let run = to_run(&run);
        let a = evaluator.evaluate_with(&run, Execution::Sequential).unwrap();
        let b = evaluator.evaluate_with(&run, Execution::Parallel).unwrap();
        let c = evaluator.evaluate_with(&run, Execution::Parallel).unwrap();
        prop_assert_eq!(&a.to_nested(), &b.to_nested());
        for ((_, x), (_, y)) in a.iter().zip(c.iter()) {
            prop_assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}

#[test]
fn shared_evaluator_across_threads() {
    let (qrel, run) = random_instance(&mut ChaCha8Rng::seed_from_u64(11));
    let evaluator = Evaluator::new(to_qrel(&qrel), MeasureSelection::all());
    let run = to_run(&run);
    let expected = evaluator.evaluate(&run).unwrap().to_nested();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|_| s.spawn(|| evaluator.evaluate(&run).unwrap().to_nested()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    });
}
