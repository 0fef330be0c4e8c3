use std::fmt::Write as _;
use std::io::BufRead;

use super::SynthError;

const MIB: u64 = 1024 * 1024;

/// Parameters of a synthetic collection.
///
/// [`Default`] is a desk-scale setup (|V| = 1000); [`SynthConfig::full_scale`]
/// uses a 10 000-term vocabulary and 100 000 queries.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub vocab_size: usize,
    pub collection_size: usize,
    pub mean_doc_length: f64,
    pub mean_query_length: f64,
    pub relevant_per_query: usize,
    pub query_count: usize,
    /// Rate of the exponential distribution pseudo counts are drawn from.
    pub exponential_rate: f64,
    /// Probability of emitting a unigram and a bigram, in that order.
    pub ngram_size_probs: [f64; 2],
    pub seed: u64,
    /// Upper bound on the dense bigram pseudo-count table, in MiB.
    pub bigram_budget_mib: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            vocab_size: 1000,
            collection_size: 100,
            mean_doc_length: 200.0,
            mean_query_length: 3.0,
            relevant_per_query: 5,
            query_count: 2000,
            exponential_rate: 1.0,
            ngram_size_probs: [0.9, 0.1],
            seed: 1,
            bigram_budget_mib: 512,
        }
    }
}

impl SynthConfig {
    pub fn full_scale() -> Self {
        Self {
            vocab_size: 10_000,
            query_count: 100_000,
            ..Self::default()
        }
    }

    /// Bytes the bigram table would occupy (0 when bigrams are disabled).
    pub fn bigram_table_bytes(&self) -> u64 {
        if self.ngram_size_probs[1] > 0.0 {
            let v = self.vocab_size as u64;
            v * v * std::mem::size_of::<f32>() as u64
        } else {
            0
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: String| Err(SynthError::InvalidConfig(msg));
        if self.vocab_size == 0 || self.collection_size == 0 || self.query_count == 0 {
            return bad("vocab_size, collection_size and query_count must be >= 1".into());
        }
        if self.vocab_size > u32::MAX as usize {
            return bad(format!(
                "vocab_size {} does not fit token ids",
                self.vocab_size
            ));
        }
        if self.relevant_per_query == 0 || self.relevant_per_query > self.collection_size {
            return bad(format!(
                "relevant_per_query must be in 1..={}, got {}",
                self.collection_size, self.relevant_per_query
            ));
        }
        for (name, mean) in [
            ("mean_doc_length", self.mean_doc_length),
            ("mean_query_length", self.mean_query_length),
        ] {
            if !(mean > 1.0 && mean.is_finite()) {
                return bad(format!("{name} must be finite and > 1, got {mean}"));
            }
        }
        if !(self.exponential_rate > 0.0 && self.exponential_rate.is_finite()) {
            return bad(format!(
                "exponential_rate must be > 0, got {}",
                self.exponential_rate
            ));
        }
        let [p1, p2] = self.ngram_size_probs;
        if p1 < 0.0 || p2 < 0.0 || ((p1 + p2) - 1.0).abs() > 1e-9 {
            return bad(format!(
                "ngram_size_probs must be non-negative and sum to 1, got {p1}, {p2}"
            ));
        }
        let needed = self.bigram_table_bytes();
        let budget = self.bigram_budget_mib.saturating_mul(MIB);
        if needed > budget {
            return Err(SynthError::BigramBudget { needed, budget });
        }
        Ok(())
    }

    /// Reads `key = value` lines. Blank lines and `#` comments are skipped;
    /// missing keys keep their defaults.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, SynthError> {
        let mut config = Self::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |message: String| SynthError::ConfigParse {
                line: lineno,
                message,
            };
            let (key, value) = text
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {text:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
                v.parse().map_err(|_| format!("invalid number {v:?}"))
            }
            match key {
                "vocab_size" => config.vocab_size = num(value).map_err(err)?,
                "collection_size" => config.collection_size = num(value).map_err(err)?,
                "mean_doc_length" => config.mean_doc_length = num(value).map_err(err)?,
                "mean_query_length" => config.mean_query_length = num(value).map_err(err)?,
                "relevant_per_query" => config.relevant_per_query = num(value).map_err(err)?,
                "query_count" => config.query_count = num(value).map_err(err)?,
                "exponential_rate" => config.exponential_rate = num(value).map_err(err)?,
                "seed" => config.seed = num(value).map_err(err)?,
                "bigram_budget_mib" => config.bigram_budget_mib = num(value).map_err(err)?,
                "ngram_size_probs" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(err(format!("expected two probabilities, got {value:?}")));
                    }
                    config.ngram_size_probs =
                        [num(parts[0]).map_err(err)?, num(parts[1]).map_err(err)?];
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let [p1, p2] = self.ngram_size_probs;
        let _ = writeln!(s, "vocab_size = {}", self.vocab_size);
        let _ = writeln!(s, "collection_size = {}", self.collection_size);
        let _ = writeln!(s, "mean_doc_length = {}", self.mean_doc_length);
        let _ = writeln!(s, "mean_query_length = {}", self.mean_query_length);
        let _ = writeln!(s, "relevant_per_query = {}", self.relevant_per_query);
        let _ = writeln!(s, "query_count = {}", self.query_count);
        let _ = writeln!(s, "exponential_rate = {}", self.exponential_rate);
        let _ = writeln!(s, "ngram_size_probs = {p1}, {p2}");
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "bigram_budget_mib = {}", self.bigram_budget_mib);
        s
    }
}
