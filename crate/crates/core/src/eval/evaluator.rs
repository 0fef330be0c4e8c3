use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::measures::{
    average_precision_kernel, ideal_gains, ndcg_kernel, precision_kernel, reciprocal_rank_kernel,
    relevance_by_rank,
};
use super::ranking::sorted_refs;
use super::selection::is_count_measure;
use super::{DocScores, EvalError, Judgments, Measure, MeasureSelection, QrelSet, RunSet};
use crate::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Map,
    Ndcg,
    NdcgCut(usize),
    Precision(usize),
    RecipRank,
    NumRel,
    NumRet,
    NumRelRet,
}

fn slots(selection: &MeasureSelection) -> Vec<Slot> {
    let mut out = Vec::new();
    for m in selection.measures() {
        match m {
            Measure::Map => out.push(Slot::Map),
            Measure::Ndcg => out.push(Slot::Ndcg),
            Measure::NdcgCut(ks) => out.extend(ks.iter().map(|&k| Slot::NdcgCut(k))),
            Measure::Precision(ks) => out.extend(ks.iter().map(|&k| Slot::Precision(k))),
            Measure::RecipRank => out.push(Slot::RecipRank),
            Measure::NumRel => out.push(Slot::NumRel),
            Measure::NumRet => out.push(Slot::NumRet),
            Measure::NumRelRet => out.push(Slot::NumRelRet),
        }
    }
    out
}

#[derive(Debug, Clone)]
struct QueryStats {
    num_rel: usize,
    ideal: Vec<i64>,
}

/// Evaluates runs against a fixed set of relevance judgments.
///
/// The judgments are frozen at construction; `evaluate` takes `&self` and may
/// be called concurrently.
#[derive(Debug, Clone)]
pub struct Evaluator {
    qrel: QrelSet,
    selection: MeasureSelection,
    ids: Vec<String>,
    slots: Vec<Slot>,
    stats: Vec<QueryStats>,
    depth: Option<usize>,
}

impl Evaluator {
    pub fn new(qrel: QrelSet, selection: MeasureSelection) -> Self {
        let stats = qrel
            .iter()
            .map(|(_, judgments)| {
                let ideal = ideal_gains(judgments);
                QueryStats {
                    num_rel: ideal.len(),
                    ideal,
                }
            })
            .collect();
        Self {
            ids: selection.output_ids(),
            slots: slots(&selection),
            qrel,
            selection,
            stats,
            depth: None,
        }
    }

    /// Shorthand for `Evaluator::new(qrel, MeasureSelection::parse(ids)?)`.
    pub fn with_measures<I, S>(qrel: QrelSet, ids: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Ok(Self::new(qrel, MeasureSelection::parse(ids)?))
    }

    /// Caps how many documents per query are considered, after ranking.
    /// `None` (the default) keeps every document.
    pub fn with_depth(mut self, depth: Option<usize>) -> Self {
        self.depth = depth;
        self
    }

    pub fn qrel(&self) -> &QrelSet {
        &self.qrel
    }

    pub fn selection(&self) -> &MeasureSelection {
        &self.selection
    }

    pub fn evaluate(&self, run: &RunSet) -> Result<ResultSet, EvalError> {
        self.evaluate_with(run, Execution::default())
    }

    /// Evaluates every query present in both the run and the judgments.
    pub fn evaluate_with(&self, run: &RunSet, exec: Execution) -> Result<ResultSet, EvalError> {
        let work: Vec<(&str, &DocScores, &Judgments, &QueryStats)> = run
            .iter()
            .filter_map(|(q, scores)| {
                let (i, judgments) = self.qrel.get_full(q)?;
                Some((q, scores, judgments, &self.stats[i]))
            })
            .collect();
        let values = exec.map(&work, |&(_, scores, judgments, stats)| {
            self.evaluate_query(scores, judgments, stats)
        });
        let mut per_query = BTreeMap::new();
        for ((query, ..), vals) in work.iter().zip(values) {
            per_query.insert(query.to_string(), vals?);
        }
        Ok(ResultSet {
            measure_ids: self.ids.clone(),
            per_query,
            qrel_query_count: self.qrel.len(),
        })
    }

    fn evaluate_query(
        &self,
        scores: &DocScores,
        judgments: &Judgments,
        stats: &QueryStats,
    ) -> Result<Vec<f64>, EvalError> {
        let mut ranked = sorted_refs(scores)?;
        if let Some(depth) = self.depth {
            ranked.truncate(depth);
        }
        let rels = relevance_by_rank(ranked.iter().map(|(d, _)| *d), judgments);
        let values = self
            .slots
            .iter()
            .map(|slot| match *slot {
                Slot::Map => average_precision_kernel(&rels, stats.num_rel),
                Slot::Ndcg => ndcg_kernel(&rels, &stats.ideal, None),
                Slot::NdcgCut(k) => ndcg_kernel(&rels, &stats.ideal, Some(k)),
                Slot::Precision(k) => precision_kernel(&rels, k),
                Slot::RecipRank => reciprocal_rank_kernel(&rels),
                Slot::NumRel => stats.num_rel as f64,
                Slot::NumRet => rels.len() as f64,
                Slot::NumRelRet => rels.iter().filter(|&&r| r > 0).count() as f64,
            })
            .collect();
        Ok(values)
    }
}

/// Per-query measure values from one `evaluate` call.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    measure_ids: Vec<String>,
    per_query: BTreeMap<String, Vec<f64>>,
    qrel_query_count: usize,
}

impl ResultSet {
    /// Output ids, in the order values are stored for every query.
    pub fn measure_ids(&self) -> &[String] {
        &self.measure_ids
    }

    pub fn get(&self, query: &str, measure: &str) -> Option<f64> {
        let i = self.measure_ids.iter().position(|m| m == measure)?;
        self.per_query.get(query).map(|v| v[i])
    }

    /// `(measure, value)` pairs for one query.
    pub fn query(&self, query: &str) -> Option<impl Iterator<Item = (&str, f64)>> {
        let values = self.per_query.get(query)?;
        Some(
            self.measure_ids
                .iter()
                .map(String::as_str)
                .zip(values.iter().copied()),
        )
    }

    /// Queries in ascending id order with their values, aligned with
    /// [`measure_ids`](Self::measure_ids).
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.per_query
            .iter()
            .map(|(q, v)| (q.as_str(), v.as_slice()))
    }

    pub fn evaluated_query_count(&self) -> usize {
        self.per_query.len()
    }

    /// Number of queries in the judgments the run was evaluated against.
    pub fn qrel_query_count(&self) -> usize {
        self.qrel_query_count
    }

    pub fn is_empty(&self) -> bool {
        self.per_query.is_empty()
    }

    pub fn to_nested(&self) -> BTreeMap<String, BTreeMap<String, f64>> {
        self.per_query
            .keys()
            .map(|q| {
                let values = self
                    .query(q)
                    .expect("key exists")
                    .map(|(m, v)| (m.to_string(), v))
                    .collect();
                (q.clone(), values)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregateMode {
    /// Average over evaluated queries only.
    #[default]
    JudgedOnly,
    /// Average over every query in the judgments; queries without results
    /// contribute 0.
    Complete,
}

/// Summary row over all queries, in measure order.
///
/// Rate measures are averaged. `num_rel`, `num_ret` and `num_rel_ret` are
/// summed, as `trec_eval` reports them.
pub fn aggregate(
    results: &ResultSet,
    mode: AggregateMode,
) -> Result<IndexMap<String, f64>, EvalError> {
    let denominator = match mode {
        AggregateMode::JudgedOnly => results.evaluated_query_count(),
        AggregateMode::Complete => results.qrel_query_count(),
    };
    if denominator == 0 {
        return Err(EvalError::EmptyAggregate);
    }
    let mut sums = vec![0.0; results.measure_ids.len()];
    for values in results.per_query.values() {
        for (s, v) in sums.iter_mut().zip(values) {
            *s += v;
        }
    }
    Ok(results
        .measure_ids
        .iter()
        .zip(sums)
        .map(|(id, sum)| {
            let v = if is_count_measure(id) {
                sum
            } else {
                sum / denominator as f64
            };
            (id.clone(), v)
        })
        .collect())
}
