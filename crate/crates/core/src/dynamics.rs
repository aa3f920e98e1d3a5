//! Logit and relaxed logit dynamics, and the weighted draw every chain uses.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{CongestionGame, Extended, StrategyProfile};
use crate::numeric::log_sum_exp;

/// Draws index `i` with probability `q_i e^{a_i} / Σ_j q_j e^{a_j}`.
///
/// Entries with `q_i = 0` or `a_i = -inf` are never drawn.
pub fn suitable_sample<R: Rng + ?Sized>(q: &[f64], a: &[f64], rng: &mut R) -> Result<usize> {
    debug_assert_eq!(q.len(), a.len());
    let logs: Vec<f64> = q
        .iter()
        .zip(a)
        .map(|(&qi, &ai)| if qi > 0.0 { qi.ln() + ai } else { f64::NEG_INFINITY })
        .collect();
    sample_log_weights(&logs, rng)
}

/// Draws an index with probability proportional to `exp(log_weights[i])`.
pub fn sample_log_weights<R: Rng + ?Sized>(log_weights: &[f64], rng: &mut R) -> Result<usize> {
    let z = log_sum_exp(log_weights);
    if !z.is_finite() {
        return Err(Error::ZeroWeight);
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = None;
    for (i, &l) in log_weights.iter().enumerate() {
        if l == f64::NEG_INFINITY {
            continue;
        }
        acc += (l - z).exp();
        if u < acc {
            return Ok(i);
        }
        last = Some(i);
    }
    // rounding left the cumulative sum a hair below one
    last.ok_or(Error::ZeroWeight)
}

/// `-T Φ` with the sentinel mapped to `-inf` (also at `T = 0`).
pub fn log_gibbs_weight(potential: Extended, temperature: f64) -> f64 {
    match potential {
        Extended::Infinite => f64::NEG_INFINITY,
        Extended::Finite(_) if temperature == 0.0 => 0.0,
        finite => -temperature * finite.to_f64(),
    }
}

/// Deterministic per-chain generator: the master seed selects the key, the
/// chain index selects the stream.
pub fn chain_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dynamics {
    Logit,
    RelaxedLogit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub temperature: f64,
    pub seed: u64,
    pub steps: u64,
    /// Record every `thinning`-th state; 0 records only the final state.
    pub thinning: u64,
}

impl ChainConfig {
    pub fn new(temperature: f64, seed: u64, steps: u64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be finite and non-negative, got {temperature}"
            )));
        }
        Ok(ChainConfig {
            temperature,
            seed,
            steps,
            thinning: 0,
        })
    }

    pub fn with_thinning(mut self, thinning: u64) -> Self {
        self.thinning = thinning;
        self
    }
}

#[derive(Debug, Clone)]
pub struct ChainState {
    pub profile: StrategyProfile,
    pub rng: ChaCha8Rng,
    pub steps: u64,
}

impl ChainState {
    pub fn new(profile: StrategyProfile, rng: ChaCha8Rng) -> Self {
        ChainState {
            profile,
            rng,
            steps: 0,
        }
    }
}

/// One logit step: a uniform player resamples her strategy with probability
/// proportional to `e^{-T Φ(t, s_{-i})}`.
pub fn logit_step(game: &CongestionGame, state: &mut ChainState, temperature: f64) -> Result<()> {
    let i = state.rng.gen_range(0..game.players());
    let weights: Vec<f64> = game
        .deviation_potentials(&state.profile, i)
        .into_iter()
        .map(|phi| log_gibbs_weight(phi, temperature))
        .collect();
    let t = sample_log_weights(&weights, &mut state.rng)?;
    state.profile.set(i, t);
    state.steps += 1;
    Ok(())
}

/// With probability 1/2 swap the strategies of an ordered pair of players
/// drawn with replacement, otherwise take a logit step.
pub fn relaxed_logit_step(
    game: &CongestionGame,
    state: &mut ChainState,
    temperature: f64,
) -> Result<()> {
    if !game.is_symmetric() {
        return Err(Error::Unsupported(
            "relaxed logit dynamics need a symmetric game".into(),
        ));
    }
    if state.rng.gen::<bool>() {
        let n = game.players();
        let i = state.rng.gen_range(0..n);
        let j = state.rng.gen_range(0..n);
        #[cfg(debug_assertions)]
        let before = game.potential(&state.profile);
        state.profile.swap(i, j);
        debug_assert_eq!(before, game.potential(&state.profile));
        state.steps += 1;
        Ok(())
    } else {
        logit_step(game, state, temperature)
    }
}

pub fn step(
    game: &CongestionGame,
    dynamics: Dynamics,
    state: &mut ChainState,
    temperature: f64,
) -> Result<()> {
    match dynamics {
        Dynamics::Logit => logit_step(game, state, temperature),
        Dynamics::RelaxedLogit => relaxed_logit_step(game, state, temperature),
    }
}

#[derive(Debug, Clone)]
pub struct ChainTrace {
    pub config: ChainConfig,
    pub dynamics: Dynamics,
    pub start: StrategyProfile,
    pub last: StrategyProfile,
    /// Thinned states, ending with the final one.
    pub samples: Vec<StrategyProfile>,
}

/// Runs one chain from `start` (a feasible profile by default) for the
/// configured number of steps.
pub fn run_chain(
    game: &CongestionGame,
    config: &ChainConfig,
    dynamics: Dynamics,
    start: Option<StrategyProfile>,
) -> Result<ChainTrace> {
    run_chain_with_rng(game, config, dynamics, start, chain_rng(config.seed, 0))
}

/// [`run_chain`] driven by a caller-supplied generator.
pub fn run_chain_with_rng(
    game: &CongestionGame,
    config: &ChainConfig,
    dynamics: Dynamics,
    start: Option<StrategyProfile>,
    rng: ChaCha8Rng,
) -> Result<ChainTrace> {
    let start = match start {
        Some(s) => {
            game.validate_profile(&s)?;
            if !game.potential(&s).is_finite() {
                return Err(Error::InvalidArgument(
                    "start profile violates a capacity".into(),
                ));
            }
            s
        }
        None => game.feasible_profile()?,
    };
    let mut state = ChainState::new(start.clone(), rng);
    let mut samples = Vec::new();
    for t in 1..=config.steps {
        step(game, dynamics, &mut state, config.temperature)?;
        if config.thinning > 0 && t % config.thinning == 0 && t != config.steps {
            samples.push(state.profile.clone());
        }
    }
    samples.push(state.profile.clone());
    Ok(ChainTrace {
        config: config.clone(),
        dynamics,
        start,
        last: state.profile,
        samples,
    })
}

/// Final states of `count` independent chains, chain `c` seeded from
/// `(config.seed, c)`. The result does not depend on the thread count.
pub fn run_independent_chains(
    game: &CongestionGame,
    config: &ChainConfig,
    dynamics: Dynamics,
    count: usize,
) -> Result<Vec<StrategyProfile>> {
    let start = game.feasible_profile()?;
    (0..count as u64)
        .into_par_iter()
        .map(|c| {
            let rng = chain_rng(config.seed, c);
            let mut state = ChainState::new(start.clone(), rng);
            for _ in 0..config.steps {
                step(game, dynamics, &mut state, config.temperature)?;
            }
            Ok(state.profile)
        })
        .collect()
}
