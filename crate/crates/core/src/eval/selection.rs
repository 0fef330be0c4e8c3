use std::collections::BTreeSet;
use std::fmt;

use super::EvalError;

/// Cutoffs used by `ndcg_cut` and `P` when none are given.
pub const DEFAULT_CUTOFFS: [usize; 9] = [5, 10, 15, 20, 30, 100, 200, 500, 1000];

const SUPPORTED: [&str; 8] = [
    "map",
    "ndcg",
    "ndcg_cut",
    "P",
    "recip_rank",
    "num_rel",
    "num_ret",
    "num_rel_ret",
];

/// Measure identifiers this engine implements, named as in `trec_eval`.
pub fn supported_measures() -> BTreeSet<&'static str> {
    SUPPORTED.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    Map,
    Ndcg,
    NdcgCut(Vec<usize>),
    Precision(Vec<usize>),
    RecipRank,
    NumRel,
    NumRet,
    NumRelRet,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Map => "map",
            Measure::Ndcg => "ndcg",
            Measure::NdcgCut(_) => "ndcg_cut",
            Measure::Precision(_) => "P",
            Measure::RecipRank => "recip_rank",
            Measure::NumRel => "num_rel",
            Measure::NumRet => "num_ret",
            Measure::NumRelRet => "num_rel_ret",
        }
    }

    /// Parses `name` or `name.k1,k2,...`.
    pub fn parse(id: &str) -> Result<Self, EvalError> {
        let (name, params) = match id.split_once('.') {
            Some((name, params)) => (name, Some(params)),
            None => (id, None),
        };
        let cutoffs = || match params {
            Some(p) => parse_cutoffs(id, p),
            None => Ok(DEFAULT_CUTOFFS.to_vec()),
        };
        let no_params = |m: Measure| match params {
            Some(_) => Err(EvalError::UnknownMeasure { name: id.into() }),
            None => Ok(m),
        };
        match name {
            "map" => no_params(Measure::Map),
            "ndcg" => no_params(Measure::Ndcg),
            "ndcg_cut" => Ok(Measure::NdcgCut(cutoffs()?)),
            "P" => Ok(Measure::Precision(cutoffs()?)),
            "recip_rank" => no_params(Measure::RecipRank),
            "num_rel" => no_params(Measure::NumRel),
            "num_ret" => no_params(Measure::NumRet),
            "num_rel_ret" => no_params(Measure::NumRelRet),
            _ => Err(EvalError::UnknownMeasure { name: id.into() }),
        }
    }

    fn cutoffs_mut(&mut self) -> Option<&mut Vec<usize>> {
        match self {
            Measure::NdcgCut(k) | Measure::Precision(k) => Some(k),
            _ => None,
        }
    }

    /// Per-cutoff output ids, e.g. `P_5`, `P_10`.
    pub fn output_ids(&self) -> Vec<String> {
        match self {
            Measure::NdcgCut(ks) | Measure::Precision(ks) => {
                ks.iter().map(|k| format!("{}_{k}", self.name())).collect()
            }
            _ => vec![self.name().to_string()],
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::NdcgCut(ks) | Measure::Precision(ks) => {
                let ks: Vec<String> = ks.iter().map(usize::to_string).collect();
                write!(f, "{}.{}", self.name(), ks.join(","))
            }
            _ => f.write_str(self.name()),
        }
    }
}

fn parse_cutoffs(id: &str, params: &str) -> Result<Vec<usize>, EvalError> {
    let mut ks = Vec::new();
    for p in params.split(',') {
        match p.trim().parse::<usize>() {
            Ok(k) if k > 0 => ks.push(k),
            _ => {
                return Err(EvalError::InvalidCutoff {
                    measure: id.into(),
                    value: p.into(),
                })
            }
        }
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

/// An ordered, deduplicated set of measures.
///
/// Measures keep the order they were first requested in; repeated requests
/// for a cutoff measure merge their cutoff lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSelection {
    measures: Vec<Measure>,
}

impl MeasureSelection {
    /// Parses measure ids. `all` (or `all_trec`) expands to every supported
    /// measure with default cutoffs.
    pub fn parse<I, S>(ids: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut measures: Vec<Measure> = Vec::new();
        for id in ids {
            let id = id.as_ref().trim();
            let parsed = if id == "all" || id == "all_trec" {
                Self::all().measures
            } else {
                vec![Measure::parse(id)?]
            };
            for m in parsed {
                merge(&mut measures, m);
            }
        }
        if measures.is_empty() {
            return Err(EvalError::EmptySelection);
        }
        Ok(Self { measures })
    }

    pub fn all() -> Self {
        let measures = SUPPORTED
            .iter()
            .map(|id| Measure::parse(id).expect("supported ids parse"))
            .collect();
        Self { measures }
    }

    pub fn measures(&self) -> &[Measure] {
        &self.measures
    }

    /// Every value id this selection produces, in output order.
    pub fn output_ids(&self) -> Vec<String> {
        self.measures.iter().flat_map(Measure::output_ids).collect()
    }

    /// `-m` arguments reproducing this selection on the command line.
    pub fn flag_values(&self) -> Vec<String> {
        self.measures.iter().map(Measure::to_string).collect()
    }
}

fn merge(measures: &mut Vec<Measure>, m: Measure) {
    match measures.iter_mut().find(|x| x.name() == m.name()) {
        None => measures.push(m),
        Some(existing) => {
            if let (Some(into), Measure::NdcgCut(ks) | Measure::Precision(ks)) =
                (existing.cutoffs_mut(), m)
            {
                into.extend(ks);
                into.sort_unstable();
                into.dedup();
            }
        }
    }
}

/// Measures whose aggregate is a sum rather than a mean, as in `trec_eval`.
pub(crate) fn is_count_measure(id: &str) -> bool {
    matches!(id, "num_rel" | "num_ret" | "num_rel_ret")
}
