//! Seeded Monte-Carlo retrieval-capacity experiments.
//!
//! A trial draws `m` distinct random memories and a fresh neuron layout,
//! trains the network, identifies active sites, then clamps each memory's
//! sites with that memory's own bits and recalls under the configured
//! strategy. A memory counts as retrieved when the recalled pattern equals it
//! exactly.
//!
//! Every random stream is derived from `(master_seed, trial_index)` with
//! SplitMix64, so any single trial can be replayed on its own, and trials can
//! run in parallel without changing the aggregated result.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{BipolarVector, MemorySet, Spin};
use crate::retrieval::{retrieve, Combine, Strategy, StrategyKind};
use crate::sites::identify_sites;
use crate::training::{build_proximity, train_hebbian, Geometry, GeometryKind, ProximityModel};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` below `parent`: `splitmix64(parent + γ·index)`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index)))
}

/// Seed for trial `trial_index` of an experiment.
pub fn trial_seed(master_seed: u64, trial_index: usize) -> u64 {
    derive_seed(master_seed, trial_index as u64)
}

// Sub-streams of a trial seed.
const STREAM_MEMORIES: u64 = 0;
const STREAM_GEOMETRY: u64 = 1;
const STREAM_ORDER_BASE: u64 = 2;

/// Draws `m` pairwise distinct uniform random patterns of length `n`.
pub fn generate_memories(n: usize, m: usize, seed: u64) -> Result<MemorySet> {
    if m == 0 {
        return Err(Error::Validation("memory count must be at least 1".into()));
    }
    if n < 64 && m as u128 > 1u128 << n {
        return Err(Error::Infeasible(format!(
            "cannot draw {m} distinct patterns over {n} neurons"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut memories = Vec::with_capacity(m);
    while memories.len() < m {
        let values: Vec<Spin> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        if seen.insert(values.clone()) {
            memories.push(BipolarVector::new(values)?);
        }
    }
    MemorySet::new(memories)
}

/// Which neurons are clamped for each memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteSelection {
    /// The memory's active sites (classical uses only the top-ranked one).
    #[default]
    ActiveSites,
    /// Every neuron.
    AllNeurons,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub trials: usize,
    pub strategy: StrategyKind,
    pub combine: Combine,
    pub geometry: GeometryKind,
    pub master_seed: u64,
    pub selection: SiteSelection,
}

impl ExperimentConfig {
    /// Config with the default independent-combine rule, uniform 2-D layout and
    /// active-site clamping.
    pub fn new(n: usize, m: usize, r: usize, trials: usize, strategy: StrategyKind) -> Self {
        Self {
            n,
            m,
            r,
            trials,
            strategy,
            combine: Combine::default(),
            geometry: GeometryKind::default(),
            master_seed: 0,
            selection: SiteSelection::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Domain(format!("need at least 2 neurons, got {}", self.n)));
        }
        if self.m < 2 {
            return Err(Error::Domain(format!("need at least 2 memories, got {}", self.m)));
        }
        if self.r == 0 || self.r > self.n {
            return Err(Error::Domain(format!(
                "fragment size {} outside 1..={}",
                self.r, self.n
            )));
        }
        if self.strategy == StrategyKind::Classical && self.selection == SiteSelection::AllNeurons
        {
            return Err(Error::Contract(
                "classical retrieval cannot clamp every neuron".into(),
            ));
        }
        Ok(())
    }
}

/// Counts from one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Memories recalled exactly from their own sites.
    pub successes: usize,
    /// Recalls that landed on any stored memory.
    pub any_matches: usize,
    /// Memories whose site set was entirely strict.
    pub strict_memories: usize,
}

/// Runs trial `trial_index` of `config`.
pub fn run_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    config.validate()?;
    let seed = trial_seed(config.master_seed, trial_index);
    let memories = generate_memories(config.n, config.m, derive_seed(seed, STREAM_MEMORIES))?;
    let prox = build_proximity(
        config.n,
        Geometry::new(config.geometry, derive_seed(seed, STREAM_GEOMETRY)),
    )?;
    evaluate_memory_set(config, &memories, &prox, seed)
}

/// Trains on `memories` and tries to recall each one from its own sites under
/// `config`'s strategy and site selection. `order_seed` feeds the per-memory
/// arbitrary orders.
pub fn evaluate_memory_set(
    config: &ExperimentConfig,
    memories: &MemorySet,
    prox: &ProximityModel,
    order_seed: u64,
) -> Result<TrialOutcome> {
    let t = train_hebbian(memories);
    let map = identify_sites(memories, config.r)?;
    let n = memories.n();

    let mut outcome = TrialOutcome {
        successes: 0,
        any_matches: 0,
        strict_memories: 0,
    };
    for (i, memory) in memories.memories().iter().enumerate() {
        if map.fully_strict(i) {
            outcome.strict_memories += 1;
        }
        let sites: Vec<usize> = match (config.selection, config.strategy) {
            (SiteSelection::AllNeurons, _) => (0..n).collect(),
            (SiteSelection::ActiveSites, StrategyKind::Classical) => {
                vec![map.entries()[i].sites[0].neuron]
            }
            (SiteSelection::ActiveSites, _) => map.entries()[i].neurons_sorted(),
        };
        let values: Vec<Spin> = sites.iter().map(|&s| memory[s]).collect();
        let strategy = Strategy::from_kind(
            config.strategy,
            derive_seed(order_seed, STREAM_ORDER_BASE + i as u64),
            config.combine,
        );
        let result = retrieve(&t, prox, &sites, &values, strategy, memories)?;
        if result.output == *memory {
            outcome.successes += 1;
        }
        if result.matched.is_some() {
            outcome.any_matches += 1;
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentStats {
    /// Mean memories recalled per trial.
    pub mean_success: f64,
    /// Population standard deviation of the per-trial counts.
    pub stddev: f64,
    /// Fraction of memories whose sites were all strict.
    pub strict_site_rate: f64,
    /// Mean recalls per trial that matched any stored memory.
    pub mean_any_match: f64,
    pub per_trial: Vec<usize>,
    pub outcomes: Vec<TrialOutcome>,
}

impl ExperimentStats {
    fn from_outcomes(m: usize, outcomes: Vec<TrialOutcome>) -> Self {
        let count = outcomes.len() as f64;
        let per_trial: Vec<usize> = outcomes.iter().map(|o| o.successes).collect();
        let mean_success = per_trial.iter().sum::<usize>() as f64 / count;
        let variance = per_trial
            .iter()
            .map(|&s| (s as f64 - mean_success).powi(2))
            .sum::<f64>()
            / count;
        let strict: usize = outcomes.iter().map(|o| o.strict_memories).sum();
        let any: usize = outcomes.iter().map(|o| o.any_matches).sum();
        Self {
            mean_success,
            stddev: variance.sqrt(),
            strict_site_rate: strict as f64 / (count * m as f64),
            mean_any_match: any as f64 / count,
            per_trial,
            outcomes,
        }
    }
}

/// Runs all trials (in parallel) and aggregates them in trial order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentStats> {
    config.validate()?;
    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentStats::from_outcomes(config.m, outcomes))
}

/// One cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: ExperimentConfig,
    pub stats: ExperimentStats,
}

impl SweepRow {
    pub fn record(&self) -> SweepRecord {
        SweepRecord {
            strategy: self.config.strategy,
            n: self.config.n,
            m: self.config.m,
            r: self.config.r,
            trials: self.config.trials,
            mean_success: self.stats.mean_success,
            stddev: self.stats.stddev,
            strict_site_rate: self.stats.strict_site_rate,
            master_seed: self.config.master_seed,
        }
    }
}

/// Runs every `(strategy, n, m)` cell with `base`'s remaining settings.
/// Rows are ordered by strategy, then `n`, then `m`.
pub fn run_grid(
    base: &ExperimentConfig,
    n_values: &[usize],
    m_values: &[usize],
    strategies: &[StrategyKind],
) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() || m_values.is_empty() || strategies.is_empty() {
        return Err(Error::Validation("sweep lists must be nonempty".into()));
    }
    let mut rows = Vec::with_capacity(n_values.len() * m_values.len() * strategies.len());
    for &strategy in strategies {
        for &n in n_values {
            for &m in m_values {
                let config = ExperimentConfig {
                    n,
                    m,
                    strategy,
                    ..base.clone()
                };
                let stats = run_experiment(&config)?;
                rows.push(SweepRow { config, stats });
            }
        }
    }
    Ok(rows)
}

/// Sweep over network sizes and strategies at `base.m`.
pub fn run_sweep(
    base: &ExperimentConfig,
    n_values: &[usize],
    strategies: &[StrategyKind],
) -> Result<Vec<SweepRow>> {
    run_grid(base, n_values, &[base.m], strategies)
}

/// The persisted summary of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub strategy: StrategyKind,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub trials: usize,
    pub mean_success: f64,
    pub stddev: f64,
    pub strict_site_rate: f64,
    pub master_seed: u64,
}

impl SweepRecord {
    pub const CSV_HEADER: &'static str =
        "strategy,n,m,r,trials,mean_success,stddev,strict_site_rate,master_seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            self.strategy,
            self.n,
            self.m,
            self.r,
            self.trials,
            self.mean_success,
            self.stddev,
            self.strict_site_rate,
            self.master_seed
        )
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    records_csv(&rows.iter().map(SweepRow::record).collect::<Vec<_>>())
}

pub fn records_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SweepRecord::CSV_HEADER);
    out.push('\n');
    for rec in records {
        out.push_str(&rec.csv_row());
        out.push('\n');
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>> {
    use crate::csv::field;
    crate::csv::records(text, SweepRecord::CSV_HEADER)?
        .into_iter()
        .map(|(line, f)| {
            let strategy = f[0].parse().map_err(|_| Error::Parse {
                line,
                message: format!("unknown strategy {:?}", f[0]),
            })?;
            Ok(SweepRecord {
                strategy,
                n: field(f[1], line, "n")?,
                m: field(f[2], line, "m")?,
                r: field(f[3], line, "r")?,
                trials: field(f[4], line, "trials")?,
                mean_success: field(f[5], line, "mean_success")?,
                stddev: field(f[6], line, "stddev")?,
                strict_site_rate: field(f[7], line, "strict_site_rate")?,
                master_seed: field(f[8], line, "master_seed")?,
            })
        })
        .collect()
}

/// Per-trial plot data: one row per (cell, trial).
pub fn trials_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("strategy,n,m,r,trial,successes,any_matches,strict_memories\n");
    for row in rows {
        let c = &row.config;
        for (i, o) in row.stats.outcomes.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{i},{},{},{}\n",
                c.strategy, c.n, c.m, c.r, o.successes, o.any_matches, o.strict_memories
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::hamming;

    #[test]
    fn exhaustive_memory_draw() {
        let set = generate_memories(2, 4, 11).unwrap();
        let mut all: Vec<_> = set.memories().to_vec();
        all.sort();
        assert_eq!(all.len(), 4);
        all.dedup();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn memory_draw_is_seeded_and_distinct() {
        let a = generate_memories(12, 8, 5).unwrap();
        assert_eq!(a, generate_memories(12, 8, 5).unwrap());
        for i in 0..8 {
            for j in 0..i {
                assert!(hamming(&a.memories()[i], &a.memories()[j]).unwrap() >= 1);
            }
        }
        assert!(matches!(
            generate_memories(2, 5, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn single_trial_stats() {
        let mut config = ExperimentConfig::new(12, 8, 4, 1, StrategyKind::Independent);
        config.master_seed = 3;
        let stats = run_experiment(&config).unwrap();
        assert_eq!(stats.per_trial.len(), 1);
        assert_eq!(stats.mean_success, stats.per_trial[0] as f64);
        assert_eq!(stats.stddev, 0.0);
    }

    #[test]
    fn trials_are_replayable() {
        let config = ExperimentConfig::new(12, 8, 4, 10, StrategyKind::Arbitrary);
        let stats = run_experiment(&config).unwrap();
        for i in [0, 7] {
            assert_eq!(run_trial(&config, i).unwrap(), stats.outcomes[i]);
        }
    }

    #[test]
    fn full_clamp_recalls_everything() {
        for strategy in [
            StrategyKind::Arbitrary,
            StrategyKind::Averaged,
            StrategyKind::Independent,
        ] {
            let mut config = ExperimentConfig::new(10, 6, 10, 5, strategy);
            config.selection = SiteSelection::AllNeurons;
            let stats = run_experiment(&config).unwrap();
            assert!(stats.per_trial.iter().all(|&s| s == 6), "{strategy}");
        }
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(12, 8, 4, 1, StrategyKind::Averaged);
        assert!(ok.validate().is_ok());
        for bad in [
            ExperimentConfig { trials: 0, ..ok.clone() },
            ExperimentConfig { r: 13, ..ok.clone() },
            ExperimentConfig { r: 0, ..ok.clone() },
            ExperimentConfig { m: 1, ..ok.clone() },
            ExperimentConfig {
                strategy: StrategyKind::Classical,
                selection: SiteSelection::AllNeurons,
                ..ok.clone()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        let infeasible = ExperimentConfig::new(3, 9, 2, 1, StrategyKind::Averaged);
        assert!(matches!(
            run_trial(&infeasible, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn worked_pair_independent_recalls_both() {
        let memories = MemorySet::parse("1100\n1010\n").unwrap();
        let prox = build_proximity(4, Geometry::new(GeometryKind::Grid2d, 0)).unwrap();
        let config = ExperimentConfig::new(4, 2, 2, 1, StrategyKind::Independent);
        let outcome = evaluate_memory_set(&config, &memories, &prox, 0).unwrap();
        assert_eq!(outcome.successes, 2);
        assert_eq!(outcome.strict_memories, 2);
    }

    #[test]
    fn classical_trial_runs() {
        let config = ExperimentConfig::new(12, 4, 3, 3, StrategyKind::Classical);
        let stats = run_experiment(&config).unwrap();
        assert!(stats.per_trial.iter().all(|&s| s <= 4));
    }

    #[test]
    fn sweep_shape_and_csv_round_trip() {
        let base = ExperimentConfig::new(12, 4, 3, 3, StrategyKind::Averaged);
        let rows = run_sweep(
            &base,
            &[8, 10],
            &[StrategyKind::Arbitrary, StrategyKind::Independent],
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        let text = sweep_csv(&rows);
        let parsed = parse_sweep_csv(&text).unwrap();
        assert_eq!(parsed.len(), 4);
        assert_eq!(records_csv(&parsed), text);
        assert_eq!(trials_csv(&rows).lines().count(), 1 + 4 * 3);
        assert!(run_sweep(&base, &[], &[StrategyKind::Averaged]).is_err());
    }

    #[test]
    fn degenerate_sweep_equals_experiment() {
        let base = ExperimentConfig::new(12, 8, 4, 4, StrategyKind::Independent);
        let rows = run_sweep(&base, &[12], &[StrategyKind::Independent]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].stats, run_experiment(&base).unwrap());
    }

    #[test]
    fn seed_derivation_spreads() {
        let seeds: HashSet<u64> = (0..1000).map(|i| trial_seed(0, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(0, 0), trial_seed(1, 0));
    }
}
