//! Iterative erasure decoding and its relation to stopping sets.
//!
//! At each constraint the decoder fills every erased position whose value is
//! the same in all local codewords consistent with the known positions, and
//! repeats until nothing changes. For single parity checks this is the usual
//! peeling rule (exactly one erasure is resolvable).

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::polytope::{is_generalized_stopping_set, is_simple_stopping_set, StoppingKind};
use crate::seeds::{fnv1a, substream};
use crate::tanner::TannerGraph;

/// Variable guard for the exhaustive scan on simple graphs.
pub const SCAN_MAX_N: usize = 20;
/// Variable guard for the exhaustive scan on generalized graphs.
pub const SCAN_GENERALIZED_MAX_N: usize = 14;
/// Examples kept per category in an equivalence report.
pub const MAX_EXAMPLES: usize = 16;
/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959964;

#[derive(Debug, Error, PartialEq)]
pub enum BecError {
    #[error("erased index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("erased index {0} listed twice")]
    Duplicate(usize),
    #[error("known bits violate constraint {constraint}")]
    InvalidKnownBits { constraint: usize },
    #[error("word has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{n} variables exceed the scan guard {max}")]
    SearchSpaceTooLarge { n: usize, max: usize },
    #[error("erasure probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

/// A set of erased variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasurePattern {
    erased: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl ErasurePattern {
    pub fn new(mut erased: Vec<usize>, n: usize) -> Result<Self, BecError> {
        if let Some(&index) = erased.iter().find(|&&i| i >= n) {
            return Err(BecError::IndexOutOfRange { index, n });
        }
        erased.sort_unstable();
        if let Some(w) = erased.windows(2).find(|w| w[0] == w[1]) {
            return Err(BecError::Duplicate(w[0]));
        }
        Ok(Self { erased, seed: None })
    }

    pub fn from_mask(mask: u64) -> Self {
        Self {
            erased: (0..64).filter(|&i| mask >> i & 1 == 1).collect(),
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    /// FNV-1a of the sorted indices as little-endian `u32`s.
    pub fn hash(&self) -> u64 {
        let bytes: Vec<u8> = self.erased.iter().flat_map(|&i| (i as u32).to_le_bytes()).collect();
        fnv1a(&bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BecOutcome {
    Recovered { word: Vec<bool> },
    Stuck { residual: Vec<usize> },
}

impl BecOutcome {
    pub fn is_stuck(&self) -> bool {
        matches!(self, BecOutcome::Stuck { .. })
    }

    pub fn residual(&self) -> &[usize] {
        match self {
            BecOutcome::Recovered { .. } => &[],
            BecOutcome::Stuck { residual } => residual,
        }
    }
}

enum LocalRule {
    Parity,
    Words(Vec<u64>),
}

/// Erasure decoder for one Tanner graph.
pub struct BecDecoder<'a> {
    g: &'a TannerGraph,
    rules: Vec<LocalRule>,
}

enum Schedule<'r, R> {
    Fifo,
    Random(&'r mut R),
}

impl<'a> BecDecoder<'a> {
    pub fn new(g: &'a TannerGraph) -> Self {
        let rules = g
            .constraints()
            .iter()
            .map(|c| {
                if c.kind.is_parity() {
                    LocalRule::Parity
                } else {
                    LocalRule::Words(c.kind.local_codewords(c.degree()))
                }
            })
            .collect();
        Self { g, rules }
    }

    /// Positions filled at constraint `j`.
    fn resolve(&self, j: usize, values: &[bool], erased: &[bool]) -> Result<Vec<(usize, bool)>, BecError> {
        let c = self.g.constraint(j);
        match &self.rules[j] {
            LocalRule::Parity => {
                let mut open = None;
                let mut opens = 0;
                let mut parity = false;
                for &v in &c.vars {
                    if erased[v] {
                        opens += 1;
                        open = Some(v);
                    } else {
                        parity ^= values[v];
                    }
                }
                match (opens, open) {
                    (0, _) if parity => Err(BecError::InvalidKnownBits { constraint: j }),
                    (1, Some(v)) => Ok(vec![(v, parity)]),
                    _ => Ok(Vec::new()),
                }
            }
            LocalRule::Words(words) => {
                let mut known = 0u64;
                let mut bits = 0u64;
                for (t, &v) in c.vars.iter().enumerate() {
                    if !erased[v] {
                        known |= 1 << t;
                        bits |= u64::from(values[v]) << t;
                    }
                }
                let (mut all, mut any, mut found) = (u64::MAX, 0u64, false);
                for &w in words.iter().filter(|&&w| w & known == bits) {
                    all &= w;
                    any |= w;
                    found = true;
                }
                if !found {
                    return Err(BecError::InvalidKnownBits { constraint: j });
                }
                Ok(c.vars
                    .iter()
                    .enumerate()
                    .filter(|&(t, &v)| erased[v] && (all ^ any) >> t & 1 == 0)
                    .map(|(t, &v)| (v, all >> t & 1 == 1))
                    .collect())
            }
        }
    }

    fn run<R: Rng>(
        &self,
        values: &mut [bool],
        erased: &mut [bool],
        mut schedule: Schedule<'_, R>,
    ) -> Result<(), BecError> {
        let m = self.g.constraint_count();
        let mut queue: VecDeque<usize> = (0..m).collect();
        let mut queued = vec![true; m];
        loop {
            let j = match &mut schedule {
                Schedule::Fifo => queue.pop_front(),
                Schedule::Random(rng) => {
                    if queue.is_empty() {
                        None
                    } else {
                        let k = rng.gen_range(0..queue.len());
                        queue.swap_remove_back(k)
                    }
                }
            };
            let Some(j) = j else { return Ok(()) };
            queued[j] = false;
            for (v, bit) in self.resolve(j, values, erased)? {
                values[v] = bit;
                erased[v] = false;
                for &k in self.g.var_checks(v) {
                    if !queued[k] {
                        queued[k] = true;
                        queue.push_back(k);
                    }
                }
            }
        }
    }

    fn outcome(values: Vec<bool>, erased: &[bool]) -> BecOutcome {
        let residual: Vec<usize> = (0..erased.len()).filter(|&i| erased[i]).collect();
        if residual.is_empty() {
            BecOutcome::Recovered { word: values }
        } else {
            BecOutcome::Stuck { residual }
        }
    }

    fn setup(&self, word: &[bool], pattern: &ErasurePattern) -> Result<(Vec<bool>, Vec<bool>), BecError> {
        let n = self.g.var_count();
        if word.len() != n {
            return Err(BecError::LengthMismatch {
                expected: n,
                found: word.len(),
            });
        }
        let mut erased = vec![false; n];
        for &i in pattern.erased() {
            if i >= n {
                return Err(BecError::IndexOutOfRange { index: i, n });
            }
            erased[i] = true;
        }
        let values = (0..n).map(|i| word[i] && !erased[i]).collect();
        Ok((values, erased))
    }

    /// Decodes `word` (erased entries ignored) in constraint order.
    pub fn decode(&self, word: &[bool], pattern: &ErasurePattern) -> Result<BecOutcome, BecError> {
        let (mut values, mut erased) = self.setup(word, pattern)?;
        self.run::<rand_chacha::ChaCha8Rng>(&mut values, &mut erased, Schedule::Fifo)?;
        Ok(Self::outcome(values, &erased))
    }

    /// As [`Self::decode`], visiting pending constraints in random order.
    pub fn decode_scheduled<R: Rng>(
        &self,
        word: &[bool],
        pattern: &ErasurePattern,
        rng: &mut R,
    ) -> Result<BecOutcome, BecError> {
        let (mut values, mut erased) = self.setup(word, pattern)?;
        self.run(&mut values, &mut erased, Schedule::Random(rng))?;
        Ok(Self::outcome(values, &erased))
    }

    /// Residual erasures of the all-zero codeword under the erasure mask.
    pub fn residual_mask(&self, mask: u64) -> u64 {
        let n = self.g.var_count();
        let mut values = vec![false; n];
        let mut erased: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        self.run::<rand_chacha::ChaCha8Rng>(&mut values, &mut erased, Schedule::Fifo)
            .expect("the zero word satisfies every constraint");
        (0..n).filter(|&i| erased[i]).fold(0, |m, i| m | 1 << i)
    }
}

/// Decodes the all-zero codeword (the outcome of erasure decoding on a linear
/// code does not depend on the transmitted codeword).
pub fn decode_bec(g: &TannerGraph, pattern: &ErasurePattern) -> Result<BecOutcome, BecError> {
    BecDecoder::new(g).decode(&vec![false; g.var_count()], pattern)
}

/// Decodes a received word whose non-erased entries must extend to a
/// codeword locally.
pub fn decode_bec_word(g: &TannerGraph, word: &[bool], pattern: &ErasurePattern) -> Result<BecOutcome, BecError> {
    BecDecoder::new(g).decode(word, pattern)
}

fn indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub kind: StoppingKind,
    pub variables: usize,
    pub patterns: u64,
    pub sampled: bool,
    pub stuck: u64,
    pub containing_stopping_set: u64,
    /// Patterns violating an asserted implication: both directions for
    /// simple graphs, "contains a stopping set ⇒ stuck" for generalized ones.
    pub counterexamples: u64,
    pub counterexample_examples: Vec<Vec<usize>>,
    /// Generalized graphs: stuck patterns containing no stopping set.
    pub converse_gaps: u64,
    pub gap_examples: Vec<Vec<usize>>,
    /// Stuck patterns whose residual is not itself a stopping set.
    pub residuals_not_stopping: u64,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

/// `contains[mask]`: some nonempty stopping set lies inside `mask`.
fn containment_table(g: &TannerGraph, simple: bool) -> Vec<bool> {
    let n = g.var_count();
    let size = 1usize << n;
    let mut contains: Vec<bool> = (0..size as u64)
        .map(|m| {
            m != 0
                && if simple {
                    is_simple_stopping_set(g, m)
                } else {
                    is_generalized_stopping_set(g, m).is_some()
                }
        })
        .collect();
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..size {
            if m & bit != 0 && contains[m ^ bit] {
                contains[m] = true;
            }
        }
    }
    contains
}

struct Tally {
    report: EquivalenceReport,
    simple: bool,
}

impl Tally {
    fn record(&mut self, g: &TannerGraph, mask: u64, residual: u64, contains: bool, is_stopping: impl Fn(u64) -> bool) {
        let n = g.var_count();
        let r = &mut self.report;
        r.patterns += 1;
        let stuck = residual != 0;
        r.stuck += u64::from(stuck);
        r.containing_stopping_set += u64::from(contains);
        if stuck && !is_stopping(residual) {
            r.residuals_not_stopping += 1;
        }
        let violated = if self.simple {
            stuck != contains || (stuck && !is_stopping(residual))
        } else {
            contains && !stuck
        };
        if violated {
            r.counterexamples += 1;
            if r.counterexample_examples.len() < MAX_EXAMPLES {
                r.counterexample_examples.push(indices(mask, n));
            }
        }
        if !self.simple && stuck && !contains {
            r.converse_gaps += 1;
            if r.gap_examples.len() < MAX_EXAMPLES {
                r.gap_examples.push(indices(mask, n));
            }
        }
    }
}

fn scan_setup(g: &TannerGraph) -> Result<(bool, Tally), BecError> {
    let n = g.var_count();
    let simple = g.is_simple();
    let max = if simple { SCAN_MAX_N } else { SCAN_GENERALIZED_MAX_N };
    if n > max {
        return Err(BecError::SearchSpaceTooLarge { n, max });
    }
    let report = EquivalenceReport {
        kind: if simple {
            StoppingKind::Simple
        } else {
            StoppingKind::Generalized
        },
        variables: n,
        patterns: 0,
        sampled: false,
        stuck: 0,
        containing_stopping_set: 0,
        counterexamples: 0,
        counterexample_examples: Vec::new(),
        converse_gaps: 0,
        gap_examples: Vec::new(),
        residuals_not_stopping: 0,
    };
    Ok((simple, Tally { report, simple }))
}

fn stopping_predicate(g: &TannerGraph, simple: bool) -> impl Fn(u64) -> bool + '_ {
    move |m| {
        if simple {
            is_simple_stopping_set(g, m)
        } else {
            is_generalized_stopping_set(g, m).is_some()
        }
    }
}

/// Decodes every erasure pattern and compares getting stuck with containing
/// a nonempty stopping set.
pub fn failure_equivalence_scan(g: &TannerGraph) -> Result<EquivalenceReport, BecError> {
    let (simple, mut tally) = scan_setup(g)?;
    let contains = containment_table(g, simple);
    let decoder = BecDecoder::new(g);
    let is_stopping = stopping_predicate(g, simple);
    for mask in 0..1u64 << g.var_count() {
        let residual = decoder.residual_mask(mask);
        tally.record(g, mask, residual, contains[mask as usize], &is_stopping);
    }
    Ok(tally.report)
}

/// As [`failure_equivalence_scan`] on `samples` uniformly random patterns.
pub fn failure_equivalence_sampled(g: &TannerGraph, samples: u64, seed: u64) -> Result<EquivalenceReport, BecError> {
    let (simple, mut tally) = scan_setup(g)?;
    tally.report.sampled = true;
    let contains = containment_table(g, simple);
    let decoder = BecDecoder::new(g);
    let is_stopping = stopping_predicate(g, simple);
    let n = g.var_count();
    let mut rng = substream(seed, "simulation");
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for _ in 0..samples {
        let mask = rng.gen::<u64>() & full;
        let residual = decoder.residual_mask(mask);
        tally.record(g, mask, residual, contains[mask as usize], &is_stopping);
    }
    Ok(tally.report)
}

/// One simulated transmission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub trial: u64,
    pub erased_hash: u64,
    pub erased: usize,
    pub stuck: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FerEstimate {
    pub erasure_prob: f64,
    pub trials: u64,
    pub failures: u64,
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let p = failures as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Frame error rate of the erasure decoder at erasure probability `p`, with
/// the per-trial log. Trial `k` draws from its own substream, so any subset
/// of trials can be replayed independently.
pub fn monte_carlo_fer_logged(
    g: &TannerGraph,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<(FerEstimate, Vec<TrialRecord>), BecError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(BecError::InvalidProbability(p));
    }
    let n = g.var_count();
    let decoder = BecDecoder::new(g);
    let zero = vec![false; n];
    let mut log = Vec::with_capacity(trials as usize);
    let mut failures = 0;
    for trial in 0..trials {
        let mut rng = substream(seed, &format!("simulation/{trial}"));
        let erased: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
        let pattern = ErasurePattern { erased, seed: Some(seed) };
        let stuck = decoder.decode(&zero, &pattern)?.is_stuck();
        failures += u64::from(stuck);
        log.push(TrialRecord {
            seed,
            trial,
            erased_hash: pattern.hash(),
            erased: pattern.len(),
            stuck,
        });
    }
    let (ci_low, ci_high) = wilson_interval(failures, trials, WILSON_Z);
    Ok((
        FerEstimate {
            erasure_prob: p,
            trials,
            failures,
            fer: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
            ci_low,
            ci_high,
            seed,
        },
        log,
    ))
}

pub fn monte_carlo_fer(g: &TannerGraph, p: f64, trials: u64, seed: u64) -> Result<FerEstimate, BecError> {
    monte_carlo_fer_logged(g, p, trials, seed).map(|(e, _)| e)
}

/// CSV rendering of a trial log.
pub fn trial_log_csv(log: &[TrialRecord]) -> String {
    let mut out = String::from("seed,trial,erased_hash,erased,outcome\n");
    for r in log {
        out.push_str(&format!(
            "{},{},{:016x},{},{}\n",
            r.seed,
            r.trial,
            r.erased_hash,
            r.erased,
            if r.stuck { "stuck" } else { "recovered" }
        ));
    }
    out
}
