//! Seeded Monte Carlo trials and parameter-grid sweeps.
//!
//! A trial is a pure function of its parameters and seed. Sweeps derive one
//! seed per `(cell, trial)` from the master seed and a key built from the
//! cell's parameter values, so results do not depend on worker count,
//! execution order, or the order in which grid axes are listed.

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sample_null, sample_planted, ModelParams, NoiseOrder, Prefactors};
use crate::reconstruct::{
    clique_estimator_capped, recon_metrics, ReconMetrics, DEFAULT_CLIQUE_CAP,
};
use crate::rng::{hash_words, stream_seed, trial_seed, Stream};
use crate::stats::{
    clique_count, clique_count_threshold, edge_count, edge_count_threshold_with,
    matched_null_density, Decision, ThresholdRule,
};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Default cap on `cells * trials` for one sweep.
pub const DEFAULT_TRIAL_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionStatistic {
    /// `f(A)` against `G(n, q)`.
    EdgeCount,
    /// `g(A)` against the density-matched `G(n, q~)`.
    CliqueCountMatchedNull,
}

impl DetectionStatistic {
    pub fn name(&self) -> &'static str {
        match self {
            DetectionStatistic::EdgeCount => "edge-count",
            DetectionStatistic::CliqueCountMatchedNull => "clique-count-matched-null",
        }
    }
}

/// What a sweep runs in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialKind {
    Detection(DetectionStatistic),
    Reconstruction,
}

impl TrialKind {
    pub fn name(&self) -> &'static str {
        match self {
            TrialKind::Detection(s) => s.name(),
            TrialKind::Reconstruction => "reconstruction",
        }
    }
}

/// One trial. Detection trials fill both the planted and the null side;
/// reconstruction trials record the clique count `g(A)` of the planted draw
/// against the clique-count threshold and leave the null side empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub params: ModelParams,
    pub seed: u64,
    pub kind: TrialKind,
    pub planted_stat: f64,
    pub null_stat: Option<f64>,
    pub threshold: f64,
    pub planted_decision: Decision,
    pub null_decision: Option<Decision>,
    pub recon: Option<ReconMetrics>,
    /// Not part of the reproducibility contract.
    pub wall_time_ms: u64,
}

impl TrialRecord {
    /// The planted draw was called `Null`.
    pub fn missed(&self) -> bool {
        self.planted_decision == Decision::Null
    }

    /// The null draw was called `Planted`.
    pub fn false_alarm(&self) -> bool {
        self.null_decision == Some(Decision::Planted)
    }
}

pub fn run_detection_trial(
    params: &ModelParams,
    statistic: DetectionStatistic,
    seed: u64,
) -> Result<TrialRecord> {
    run_detection_trial_with(params, statistic, ThresholdRule::Verbatim, seed)
}

/// As [`run_detection_trial`] with a choice of edge-count threshold. The rule
/// is ignored by the clique-count statistic.
pub fn run_detection_trial_with(
    params: &ModelParams,
    statistic: DetectionStatistic,
    rule: ThresholdRule,
    seed: u64,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let planted = sample_planted(
        params,
        stream_seed(seed, Stream::Hypergraph),
        stream_seed(seed, Stream::Noise),
    )?;
    let null_seed = stream_seed(seed, Stream::Null);
    let (planted_stat, null_stat, threshold) = match statistic {
        DetectionStatistic::EdgeCount => {
            let null = sample_null(params.n, params.q, null_seed);
            (
                edge_count(&planted.observation) as f64,
                edge_count(&null) as f64,
                edge_count_threshold_with(params, rule)?,
            )
        }
        DetectionStatistic::CliqueCountMatchedNull => {
            let q_tilde = matched_null_density(params).density;
            let null = sample_null(params.n, q_tilde, null_seed);
            (
                clique_count(&planted.observation, params.d) as f64,
                clique_count(&null, params.d) as f64,
                clique_count_threshold(params)?,
            )
        }
    };
    Ok(TrialRecord {
        params: *params,
        seed,
        kind: TrialKind::Detection(statistic),
        planted_stat,
        null_stat: Some(null_stat),
        threshold,
        planted_decision: Decision::from_threshold(planted_stat, threshold),
        null_decision: Some(Decision::from_threshold(null_stat, threshold)),
        recon: None,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn run_reconstruction_trial(params: &ModelParams, seed: u64) -> Result<TrialRecord> {
    run_reconstruction_trial_capped(params, seed, DEFAULT_CLIQUE_CAP)
}

pub fn run_reconstruction_trial_capped(
    params: &ModelParams,
    seed: u64,
    clique_cap: u64,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let planted = sample_planted(
        params,
        stream_seed(seed, Stream::Hypergraph),
        stream_seed(seed, Stream::Noise),
    )?;
    let estimate = clique_estimator_capped(&planted.observation, params.d, clique_cap)?;
    let metrics = recon_metrics(&planted.hypergraph, &estimate, params.s)?;
    let planted_stat = estimate.len() as f64;
    let threshold = clique_count_threshold(params)?;
    Ok(TrialRecord {
        params: *params,
        seed,
        kind: TrialKind::Reconstruction,
        planted_stat,
        null_stat: None,
        threshold,
        planted_decision: Decision::from_threshold(planted_stat, threshold),
        null_decision: None,
        recon: Some(metrics),
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Wilson score interval at 95% for `k` successes in `m` trials.
pub fn wilson_interval(k: u64, m: u64) -> (f64, f64) {
    assert!(m > 0 && k <= m, "need 0 <= k <= m, m > 0");
    let (k, m) = (k as f64, m as f64);
    let phat = k / m;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / m;
    let center = (phat + z2 / (2.0 * m)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    N,
    Delta,
    Alpha,
    Beta,
}

/// Cartesian grid over `(n, delta, alpha, beta)` at fixed `d`. `order` lists
/// the axes from outermost to innermost and only affects row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub d: usize,
    pub n: Vec<usize>,
    pub delta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub order: [Axis; 4],
    #[serde(default)]
    pub prefactors: Prefactors,
}

impl SweepGrid {
    pub fn new(d: usize, n: Vec<usize>, delta: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        SweepGrid {
            d,
            n,
            delta,
            alpha,
            beta,
            order: [Axis::N, Axis::Delta, Axis::Alpha, Axis::Beta],
            prefactors: Prefactors::default(),
        }
    }

    pub fn with_order(mut self, order: [Axis; 4]) -> Self {
        self.order = order;
        self
    }

    fn axis_len(&self, a: Axis) -> usize {
        match a {
            Axis::N => self.n.len(),
            Axis::Delta => self.delta.len(),
            Axis::Alpha => self.alpha.len(),
            Axis::Beta => self.beta.len(),
        }
    }

    pub fn num_cells(&self) -> usize {
        self.order.iter().map(|&a| self.axis_len(a)).product()
    }

    /// Cell coordinates `(n, delta, alpha, beta)` in row order.
    pub fn cells(&self) -> Vec<(usize, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.num_cells());
        let lens = self.order.map(|a| self.axis_len(a));
        let mut idx = [0usize; 4];
        if lens.contains(&0) {
            return out;
        }
        loop {
            let mut pick = [0usize; 4];
            for (pos, &a) in self.order.iter().enumerate() {
                pick[a as usize] = idx[pos];
            }
            out.push((
                self.n[pick[0]],
                self.delta[pick[1]],
                self.alpha[pick[2]],
                self.beta[pick[3]],
            ));
            // Innermost axis varies fastest.
            let mut pos = 3;
            loop {
                idx[pos] += 1;
                if idx[pos] < lens[pos] {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    return out;
                }
                pos -= 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: SweepGrid,
    pub trials: usize,
    pub kind: TrialKind,
    pub master_seed: u64,
    #[serde(default)]
    pub threshold_rule: ThresholdRule,
    pub clique_cap: u64,
    /// Largest `cells * trials` accepted.
    pub trial_budget: u64,
    /// Admit `q > p` (the sampler is fine with it; thresholds assume otherwise).
    #[serde(default)]
    pub allow_q_above_p: bool,
}

impl SweepConfig {
    pub fn new(grid: SweepGrid, trials: usize, kind: TrialKind, master_seed: u64) -> Self {
        SweepConfig {
            grid,
            trials,
            kind,
            master_seed,
            threshold_rule: ThresholdRule::Verbatim,
            clique_cap: DEFAULT_CLIQUE_CAP,
            trial_budget: DEFAULT_TRIAL_BUDGET,
            allow_q_above_p: false,
        }
    }
}

/// Per-cell aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub params: ModelParams,
    pub statistic: TrialKind,
    /// Configured trials for the cell.
    pub trials: usize,
    /// Trials that errored (for instance on the clique cap) and were left out
    /// of the aggregates.
    pub failures: usize,
    pub failure: Option<String>,
    /// `P^(miss) + Q^(false alarm)` over the completed trials, in `[0, 2]`.
    pub error_rate: Option<f64>,
    pub miss_rate: Option<f64>,
    pub false_alarm_rate: Option<f64>,
    /// Wilson 95% bounds for `error_rate`, from the pooled error proportion
    /// over `2m` decisions, scaled by 2.
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub mean_norm_error: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub cells: Vec<CellResult>,
}

/// Seed-derivation key of a cell. Built from the cell's values rather than its
/// position so that reordering axes keeps every cell's seeds.
pub fn cell_key(d: usize, n: usize, delta: f64, alpha: f64, beta: f64) -> u64 {
    hash_words(&[
        d as u64,
        n as u64,
        delta.to_bits(),
        alpha.to_bits(),
        beta.to_bits(),
    ])
}

/// Seed handed to the trial routine for trial `t` of a cell.
pub fn sweep_trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    // Sub-streams are split further inside the trial.
    trial_seed(master, cell, trial, Stream::Hypergraph)
}

/// Contention-safe cap on trials claimed by concurrent sweeps.
#[derive(Debug)]
pub struct TrialBudget {
    used: AtomicU64,
    cap: u64,
}

impl TrialBudget {
    pub fn new(cap: u64) -> Self {
        TrialBudget {
            used: AtomicU64::new(0),
            cap,
        }
    }

    /// Reserves `amount` trials or fails without reserving anything.
    pub fn claim(&self, amount: u64) -> Result<()> {
        self.used
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |used| {
                used.checked_add(amount).filter(|&total| total <= self.cap)
            })
            .map(|_| ())
            .map_err(|used| Error::BudgetExceeded {
                what: "sweep trials",
                requested: used as u128 + amount as u128,
                cap: self.cap as u128,
            })
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::SeqCst)
    }
}

/// Runs the sweep on the current rayon pool.
pub fn sweep(config: &SweepConfig, keep_records: bool) -> Result<SweepResult> {
    sweep_with_budget(config, keep_records, &TrialBudget::new(config.trial_budget))
}

/// Runs the sweep on a dedicated pool of `workers` threads.
pub fn sweep_with_workers(
    config: &SweepConfig,
    keep_records: bool,
    workers: usize,
) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| sweep(config, keep_records))
}

pub fn sweep_with_budget(
    config: &SweepConfig,
    keep_records: bool,
    budget: &TrialBudget,
) -> Result<SweepResult> {
    if config.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let grid = &config.grid;
    let order = if config.allow_q_above_p {
        NoiseOrder::Unchecked
    } else {
        NoiseOrder::Enforced
    };
    let cells = grid.cells();
    let total = cells.len() as u128 * config.trials as u128;
    if total > config.trial_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "sweep trials",
            requested: total,
            cap: config.trial_budget as u128,
        });
    }
    budget.claim(total as u64)?;

    let params: Vec<ModelParams> = cells
        .iter()
        .map(|&(n, delta, alpha, beta)| {
            ModelParams::resolve_with_order(n, grid.d, delta, alpha, beta, grid.prefactors, order)
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..config.trials as u64).map(move |t| (c, t)))
        .collect();
    let outcomes: Vec<std::result::Result<TrialRecord, String>> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let p = &params[c];
            let key = cell_key(p.d, p.n, p.delta, p.alpha, p.beta);
            let seed = sweep_trial_seed(config.master_seed, key, t);
            run_trial(p, config, seed).map_err(|e| e.to_string())
        })
        .collect();

    let cells = params
        .iter()
        .zip(outcomes.chunks(config.trials))
        .map(|(p, chunk)| aggregate(p, config, chunk, keep_records))
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        cells,
    })
}

fn run_trial(params: &ModelParams, config: &SweepConfig, seed: u64) -> Result<TrialRecord> {
    match config.kind {
        TrialKind::Detection(stat) => {
            run_detection_trial_with(params, stat, config.threshold_rule, seed)
        }
        TrialKind::Reconstruction => {
            run_reconstruction_trial_capped(params, seed, config.clique_cap)
        }
    }
}

fn aggregate(
    params: &ModelParams,
    config: &SweepConfig,
    outcomes: &[std::result::Result<TrialRecord, String>],
    keep_records: bool,
) -> CellResult {
    let ok: Vec<&TrialRecord> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let failure = outcomes.iter().find_map(|o| o.as_ref().err().cloned());
    let m = ok.len() as u64;
    let mut cell = CellResult {
        params: *params,
        statistic: config.kind,
        trials: outcomes.len(),
        failures: outcomes.len() - ok.len(),
        failure,
        error_rate: None,
        miss_rate: None,
        false_alarm_rate: None,
        ci_lo: None,
        ci_hi: None,
        mean_norm_error: None,
        records: if keep_records {
            ok.iter().map(|r| (*r).clone()).collect()
        } else {
            Vec::new()
        },
    };
    if m == 0 {
        return cell;
    }
    match config.kind {
        TrialKind::Detection(_) => {
            let misses = ok.iter().filter(|r| r.missed()).count() as u64;
            let alarms = ok.iter().filter(|r| r.false_alarm()).count() as u64;
            let (lo, hi) = wilson_interval(misses + alarms, 2 * m);
            cell.miss_rate = Some(misses as f64 / m as f64);
            cell.false_alarm_rate = Some(alarms as f64 / m as f64);
            cell.error_rate = Some(misses as f64 / m as f64 + alarms as f64 / m as f64);
            cell.ci_lo = Some(2.0 * lo);
            cell.ci_hi = Some(2.0 * hi);
        }
        TrialKind::Reconstruction => {
            let total: f64 = ok
                .iter()
                .map(|r| r.recon.map_or(0.0, |x| x.normalized_error))
                .sum();
            cell.mean_norm_error = Some(total / m as f64);
        }
    }
    cell
}

/// CSV column order.
pub const CSV_COLUMNS: [&str; 17] = [
    "d",
    "n",
    "delta",
    "alpha",
    "beta",
    "s",
    "p",
    "q",
    "statistic",
    "trials",
    "failures",
    "error_rate",
    "miss_rate",
    "false_alarm_rate",
    "ci_lo",
    "ci_hi",
    "mean_norm_error",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepResult {
    /// One row per cell; empty fields for aggregates that do not apply.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_COLUMNS)?;
        for c in &self.cells {
            let p = &c.params;
            out.write_record([
                p.d.to_string(),
                p.n.to_string(),
                p.delta.to_string(),
                p.alpha.to_string(),
                p.beta.to_string(),
                p.s.to_string(),
                p.p.to_string(),
                p.q.to_string(),
                c.statistic.name().to_string(),
                c.trials.to_string(),
                c.failures.to_string(),
                opt(c.error_rate),
                opt(c.miss_rate),
                opt(c.false_alarm_rate),
                opt(c.ci_lo),
                opt(c.ci_hi),
                opt(c.mean_norm_error),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}
