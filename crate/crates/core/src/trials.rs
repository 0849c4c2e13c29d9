//! Deterministic trial-by-trial simulation over a grid of phase settings.
//!
//! Reproducibility contract: every trial owns a counter-based random stream
//! keyed by `(seed, setting_index, trial_index)`, so trial `(s, t)` produces
//! the same record no matter how many threads run the experiment or in what
//! order trials execute. Within a trial the draw order is fixed:
//!
//! 1. coin flip (only in coin-randomized modes),
//! 2. phase noise (only in noisy modes),
//! 3. one uniform for the detector choice.
//!
//! Gaussian draws use `rand_distr::Normal` (ziggurat method), which consumes
//! a variable amount of the stream; that is harmless here because nothing
//! shares a stream with a trial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::interferometer::{detection_probabilities, DeviceConfig, PhaseShifter};
use crate::qmath::StateVector2;

/// Stream cipher behind every random draw; small, fast, and keyed per trial.
pub type TrialRng = ChaCha8Rng;

// Key-domain tags keep trial streams and other consumers of the same seed
// (e.g. ensemble-average sampling) statistically independent.
pub(crate) const DOMAIN_TRIAL: u64 = 0x4d5a_5349_4d00_0001;
pub(crate) const DOMAIN_MIXTURE: u64 = 0x4d5a_5349_4d00_0002;

/// Builds the ChaCha stream for one `(seed, a, b)` cell of a key domain.
pub(crate) fn keyed_stream(domain: u64, seed: u64, a: u64, b: u64) -> TrialRng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.to_le_bytes());
    key[16..24].copy_from_slice(&b.to_le_bytes());
    key[24..32].copy_from_slice(&domain.to_le_bytes());
    TrialRng::from_seed(key)
}

/// The independent random stream owned by trial `(setting_index, trial_index)`.
pub fn rng_stream(seed: u64, setting_index: u64, trial_index: u64) -> TrialRng {
    keyed_stream(DOMAIN_TRIAL, seed, setting_index, trial_index)
}

/// What varies from trial to trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Heads device every trial, phase exactly at its nominal value.
    Ideal,
    /// Fair coin picks the device orientation per trial.
    Randomized,
    /// Heads device with Gaussian jitter on the realized phase.
    Noisy,
    /// Coin randomization and phase jitter together.
    RandomizedNoisy,
}

impl Mode {
    pub fn randomizes_coin(self) -> bool {
        matches!(self, Mode::Randomized | Mode::RandomizedNoisy)
    }

    pub fn has_phase_noise(self) -> bool {
        matches!(self, Mode::Noisy | Mode::RandomizedNoisy)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ideal => "ideal",
            Mode::Randomized => "randomized",
            Mode::Noisy => "noisy",
            Mode::RandomizedNoisy => "randomized-noisy",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, PlanError> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "randomized" => Ok(Mode::Randomized),
            "noisy" => Ok(Mode::Noisy),
            "randomized-noisy" => Ok(Mode::RandomizedNoisy),
            other => Err(PlanError::UnknownMode(other.to_string())),
        }
    }
}

/// Coin value selecting the device orientation for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coin {
    Heads,
    Tails,
}

/// Which detector fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    DetectorL,
    DetectorR,
}

/// Full description of an experiment; two runs of an identical plan produce
/// identical records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentPlan {
    pub mode: Mode,
    pub phi_start: f64,
    pub phi_step: f64,
    pub n_settings: usize,
    pub trials_per_setting: usize,
    /// Standard deviation of the phase jitter; used only in noisy modes.
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("unknown mode {0:?}; expected ideal, randomized, noisy, or randomized-noisy")]
    UnknownMode(String),
    #[error("n_settings must be at least 1")]
    NoSettings,
    #[error("trials_per_setting must be at least 1")]
    NoTrials,
    #[error("phi_start and phi_step must be finite")]
    NonFinitePhase,
    #[error("sigma must be finite and non-negative, got {0}")]
    InvalidSigma(f64),
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), PlanError> {
        if self.n_settings == 0 {
            return Err(PlanError::NoSettings);
        }
        if self.trials_per_setting == 0 {
            return Err(PlanError::NoTrials);
        }
        if !self.phi_start.is_finite() || !self.phi_step.is_finite() {
            return Err(PlanError::NonFinitePhase);
        }
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(PlanError::InvalidSigma(self.sigma));
        }
        Ok(())
    }

    /// Nominal phase of a setting: `phi_start + phi_step * setting_index`.
    pub fn phi_at(&self, setting_index: usize) -> f64 {
        self.phi_start + self.phi_step * setting_index as f64
    }

    pub fn total_trials(&self) -> usize {
        self.n_settings * self.trials_per_setting
    }
}

/// Everything recorded about a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub setting_index: usize,
    pub trial_index: usize,
    pub phi_nominal: f64,
    /// Realized phase; equals `phi_nominal` outside noisy modes.
    pub phi_realized: f64,
    /// `None` in modes without coin randomization.
    pub coin: Option<Coin>,
    pub outcome: Outcome,
}

/// Detector totals for one setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountsRow {
    pub phi_nominal: f64,
    pub n_l: u64,
    pub n_r: u64,
}

/// Per-setting detector totals in setting order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountsTable {
    pub rows: Vec<CountsRow>,
}

impl CountsTable {
    pub fn total_trials(&self) -> u64 {
        self.rows.iter().map(|r| r.n_l + r.n_r).sum()
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum AggregateError {
    #[error("records at setting {setting_index} disagree on phi_nominal; mixed experiment plans")]
    MixedPlans { setting_index: usize },
}

/// Fair coin: heads with probability 1/2.
pub fn sample_coin<R: Rng>(rng: &mut R) -> Coin {
    if rng.random::<bool>() {
        Coin::Heads
    } else {
        Coin::Tails
    }
}

/// One draw from `Normal(mu, sigma)`; `sigma = 0` returns `mu` exactly.
pub fn sample_phase<R: Rng>(rng: &mut R, mu: f64, sigma: f64) -> f64 {
    assert!(sigma.is_finite() && sigma >= 0.0, "sigma must be finite and non-negative");
    Normal::new(mu, sigma).expect("valid parameters").sample(rng)
}

/// Runs one trial of the plan; pure function of `(plan, setting, trial)`.
pub fn run_trial(plan: &ExperimentPlan, setting_index: usize, trial_index: usize) -> TrialRecord {
    debug_assert!(setting_index < plan.n_settings && trial_index < plan.trials_per_setting);
    let mut rng = rng_stream(plan.seed, setting_index as u64, trial_index as u64);
    let phi_nominal = plan.phi_at(setting_index);

    let coin = if plan.mode.randomizes_coin() { Some(sample_coin(&mut rng)) } else { None };
    let phi_realized = if plan.mode.has_phase_noise() {
        sample_phase(&mut rng, phi_nominal, plan.sigma)
    } else {
        phi_nominal
    };

    let phase = PhaseShifter::from_phi(phi_realized);
    let device = match coin {
        Some(Coin::Tails) => DeviceConfig::tails(phase),
        _ => DeviceConfig::heads(phase),
    };
    let state = device
        .final_state(&StateVector2::basis_l())
        .expect("device matrices are unitary");
    let (p_l, _) = detection_probabilities(&state);

    let u: f64 = rng.random();
    let outcome = if u < p_l { Outcome::DetectorL } else { Outcome::DetectorR };

    TrialRecord { setting_index, trial_index, phi_nominal, phi_realized, coin, outcome }
}

/// Runs the whole plan in parallel. Records come back sorted by
/// `(setting_index, trial_index)` and are bitwise independent of the thread
/// count because each trial owns its stream.
pub fn run_experiment(plan: &ExperimentPlan) -> (Vec<TrialRecord>, CountsTable) {
    plan.validate().expect("experiment plan must be valid");
    let per_setting = plan.trials_per_setting;
    let records: Vec<TrialRecord> = (0..plan.total_trials())
        .into_par_iter()
        .map(|k| run_trial(plan, k / per_setting, k % per_setting))
        .collect();
    let counts = aggregate(&records).expect("single-plan records aggregate cleanly");
    (records, counts)
}

/// Collapses records to per-setting detector totals, rejecting record sets
/// whose settings disagree on the nominal phase (a sign that two different
/// plans were concatenated).
pub fn aggregate(records: &[TrialRecord]) -> Result<CountsTable, AggregateError> {
    let mut by_setting: BTreeMap<usize, CountsRow> = BTreeMap::new();
    for r in records {
        let row = by_setting.entry(r.setting_index).or_insert(CountsRow {
            phi_nominal: r.phi_nominal,
            n_l: 0,
            n_r: 0,
        });
        // Bitwise comparison on purpose: the same plan recomputes the same
        // nominal phase exactly.
        if row.phi_nominal != r.phi_nominal {
            return Err(AggregateError::MixedPlans { setting_index: r.setting_index });
        }
        match r.outcome {
            Outcome::DetectorL => row.n_l += 1,
            Outcome::DetectorR => row.n_r += 1,
        }
    }
    Ok(CountsTable { rows: by_setting.into_values().collect() })
}
