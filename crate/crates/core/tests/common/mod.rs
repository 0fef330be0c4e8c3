//! Brute-force reference measures and random instances shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use trevl::{QrelSet, RunSet};

pub const CUTOFFS: [usize; 9] = [5, 10, 15, 20, 30, 100, 200, 500, 1000];

/// Ranks by repeatedly picking the best remaining document: higher score
/// first, then the byte-wise larger id.
pub fn oracle_ranking(scores: &BTreeMap<String, f64>) -> Vec<String> {
    let mut left: Vec<(&String, f64)> = scores.iter().map(|(d, &s)| (d, s)).collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let mut best = 0;
        for i in 1..left.len() {
            let (d, s) = left[i];
            let (bd, bs) = left[best];
            if s > bs || (s == bs && d.as_bytes() > bd.as_bytes()) {
                best = i;
            }
        }
        out.push(left.remove(best).0.clone());
    }
    out
}

fn rel(judgments: &BTreeMap<String, i64>, doc: &str) -> i64 {
    judgments.get(doc).copied().unwrap_or(0).max(0)
}

pub fn oracle_num_rel(judgments: &BTreeMap<String, i64>) -> usize {
    judgments.values().filter(|&&r| r > 0).count()
}

pub fn oracle_ap(ranking: &[String], judgments: &BTreeMap<String, i64>) -> f64 {
    let num_rel = oracle_num_rel(judgments);
    if num_rel == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for (i, doc) in ranking.iter().enumerate() {
        if rel(judgments, doc) > 0 {
            let hits = ranking[..=i]
                .iter()
                .filter(|d| rel(judgments, d) > 0)
                .count();
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / num_rel as f64
}

fn dcg_of(gains: impl Iterator<Item = i64>) -> f64 {
    gains
        .enumerate()
        .map(|(i, g)| g as f64 / ((i + 2) as f64).log2())
        .sum()
}

pub fn oracle_ndcg(
    ranking: &[String],
    judgments: &BTreeMap<String, i64>,
    cutoff: Option<usize>,
) -> f64 {
    let k = cutoff.unwrap_or(usize::MAX);
    let mut ideal: Vec<i64> = judgments.values().copied().filter(|&r| r > 0).collect();
    ideal.sort_by(|a, b| b.cmp(a));
    let idcg = dcg_of(ideal.into_iter().take(k));
    if idcg == 0.0 {
        return 0.0;
    }
    dcg_of(ranking.iter().take(k).map(|d| rel(judgments, d))) / idcg
}

pub fn oracle_precision(ranking: &[String], judgments: &BTreeMap<String, i64>, k: usize) -> f64 {
    ranking
        .iter()
        .take(k)
        .filter(|d| rel(judgments, d) > 0)
        .count() as f64
        / k as f64
}

/// Every measure id with its brute-force value, per query in both sets.
pub fn oracle_measures(
    qrel: &BTreeMap<String, BTreeMap<String, i64>>,
    run: &BTreeMap<String, BTreeMap<String, f64>>,
) -> BTreeMap<String, BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (q, scores) in run {
        let Some(j) = qrel.get(q) else { continue };
        let ranking = oracle_ranking(scores);
        let mut m = BTreeMap::new();
        m.insert("map".to_string(), oracle_ap(&ranking, j));
        m.insert("ndcg".to_string(), oracle_ndcg(&ranking, j, None));
        for k in CUTOFFS {
            m.insert(format!("ndcg_cut_{k}"), oracle_ndcg(&ranking, j, Some(k)));
            m.insert(format!("P_{k}"), oracle_precision(&ranking, j, k));
        }
        out.insert(q.clone(), m);
    }
    out
}

pub type Instance = (
    BTreeMap<String, BTreeMap<String, i64>>,
    BTreeMap<String, BTreeMap<String, f64>>,
);

/// Up to 4 queries, 8 documents and relevance levels 0..=2 (plus the odd
/// negative judgment); scores come from a small grid so ties are common.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let mut qrel = BTreeMap::new();
    let mut run = BTreeMap::new();
    let n_queries = rng.random_range(1..=4);
    for q in 0..n_queries {
        let qid = format!("q{q}");
        let n_docs = rng.random_range(1..=8);
        let mut judgments = BTreeMap::new();
        let mut scores = BTreeMap::new();
        for d in 0..n_docs {
            let doc = format!("d{}", rng.random_range(0..12) * 100 + d);
            if rng.random_bool(0.8) {
                let level = if rng.random_bool(0.05) {
                    -1
                } else {
                    rng.random_range(0..=2)
                };
                judgments.insert(doc.clone(), level);
            }
            if rng.random_bool(0.85) {
                scores.insert(doc, rng.random_range(-3..=3) as f64 * 0.5);
            }
        }
        if !judgments.is_empty() {
            qrel.insert(qid.clone(), judgments);
        }
        if !scores.is_empty() {
            run.insert(qid, scores);
        }
    }
    (qrel, run)
}

pub fn to_qrel(qrel: &BTreeMap<String, BTreeMap<String, i64>>) -> QrelSet {
    QrelSet::from_queries(
        qrel.iter()
            .map(|(q, j)| (q.clone(), j.iter().map(|(d, &r)| (d.clone(), r)))),
    )
    .unwrap()
}

pub fn to_run(run: &BTreeMap<String, BTreeMap<String, f64>>) -> RunSet {
    RunSet::from_queries(
        run.iter()
            .map(|(q, s)| (q.clone(), s.iter().map(|(d, &v)| (d.clone(), v)))),
    )
    .unwrap()
}

/// Largest absolute difference between the engine and the oracle over the
/// oracle's measures, or `None` if the two disagree on which queries exist.
pub fn max_oracle_gap(instance: &Instance) -> Option<f64> {
    let (qrel, run) = instance;
    let expected = oracle_measures(qrel, run);
    let ids: Vec<String> = ["map", "ndcg", "ndcg_cut", "P"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let results = trevl::Evaluator::with_measures(to_qrel(qrel), &ids)
        .unwrap()
        .evaluate(&to_run(run))
        .unwrap();
    if results.evaluated_query_count() != expected.len() {
        return None;
    }
    let mut gap: f64 = 0.0;
    for (q, measures) in &expected {
        for (m, &v) in measures {
            gap = gap.max((results.get(q, m)? - v).abs());
        }
    }
    Some(gap)
}
