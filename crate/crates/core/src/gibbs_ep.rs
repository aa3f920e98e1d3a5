//! Two-stage Gibbs sampler for extension-parallel games: draw a strategy load
//! profile with the base-exchange walk, then hand out the paths by a uniform
//! permutation of the players. Also the rejection sampler for uniformly
//! random pure Nash equilibria built on top of it.

use std::f64::consts::LN_2;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::{chain_rng, log_gibbs_weight};
use crate::error::{Error, Result};
use crate::game::{CongestionGame, Extended, LoadKind, LoadProfile, StrategyProfile};
use crate::matroid::{step_budget, BaseExchangeSampler, CachedWeight, LogWeight, PolymatroidBaseSet};
use crate::numeric::ln_factorial;

/// `ln(n!/α!) - T Φ(α)` on strategy load profiles of an EP game.
#[derive(Debug, Clone, Copy)]
pub struct EpLogWeight<'g> {
    game: &'g CongestionGame,
    temperature: f64,
}

impl<'g> EpLogWeight<'g> {
    pub fn new(game: &'g CongestionGame, temperature: f64) -> Self {
        EpLogWeight { game, temperature }
    }
}

impl LogWeight for EpLogWeight<'_> {
    fn log_weight(&self, alpha: &[usize]) -> f64 {
        let phi = self
            .game
            .rosenthal_potential(&self.game.resource_counts_of_strategy_loads(alpha));
        let lw = log_gibbs_weight(phi, self.temperature);
        if lw == f64::NEG_INFINITY {
            return lw;
        }
        let n = alpha.iter().sum::<usize>();
        ln_factorial(n) - alpha.iter().map(|&a| ln_factorial(a)).sum::<f64>() + lw
    }
}

fn require_ep(game: &CongestionGame) -> Result<usize> {
    game.paths()
        .map(|p| p.len())
        .ok_or_else(|| Error::Unsupported("this sampler needs an extension-parallel game".into()))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")))
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "temperature must be finite and non-negative, got {t}"
        )))
    }
}

/// Gibbs sampler for one EP game at one temperature; the start base, step
/// budget and weight table are computed once.
pub struct EpGibbsSampler<'g> {
    game: &'g CongestionGame,
    temperature: f64,
    chain: BaseExchangeSampler<CachedWeight<EpLogWeight<'g>>>,
}

impl<'g> EpGibbsSampler<'g> {
    pub fn new(game: &'g CongestionGame, temperature: f64, eps: f64, mix_constant: f64) -> Result<Self> {
        let q = require_ep(game)?;
        check_eps(eps)?;
        check_temperature(temperature)?;
        let n = game.players();
        let set = PolymatroidBaseSet::new(vec![n; q], n)?;
        let spec = set.polarize(n)?;
        let weight = CachedWeight::new(&set, EpLogWeight::new(game, temperature));
        let chain = BaseExchangeSampler::new(spec, weight, step_budget(n, eps, mix_constant))?;
        Ok(EpGibbsSampler {
            game,
            temperature,
            chain,
        })
    }

    pub fn game(&self) -> &CongestionGame {
        self.game
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Base-exchange steps per draw.
    pub fn steps(&self) -> u64 {
        self.chain.steps()
    }

    pub fn chain(&self) -> &BaseExchangeSampler<CachedWeight<EpLogWeight<'g>>> {
        &self.chain
    }

    pub fn sample_load_profile<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LoadProfile> {
        Ok(LoadProfile {
            kind: LoadKind::Strategy,
            counts: self.chain.sample(rng)?,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StrategyProfile> {
        let alpha = self.sample_load_profile(rng)?;
        assign_players_uniform(&alpha, rng)
    }

    /// `count` independent draws, draw `c` using stream `c` of `seed`.
    pub fn sample_many(&self, count: usize, seed: u64) -> Result<Vec<StrategyProfile>> {
        (0..count as u64)
            .into_par_iter()
            .map(|c| self.sample(&mut chain_rng(seed, c)))
            .collect()
    }
}

/// Draws a strategy load profile close to `π'(α) ∝ (n!/α!) e^{-T Φ(α)}`.
pub fn sample_load_profile_ep<R: Rng + ?Sized>(
    game: &CongestionGame,
    temperature: f64,
    eps: f64,
    mix_constant: f64,
    rng: &mut R,
) -> Result<LoadProfile> {
    EpGibbsSampler::new(game, temperature, eps, mix_constant)?.sample_load_profile(rng)
}

/// A uniformly random profile with strategy loads `α`: the first `α_0`
/// players of a uniform permutation take strategy 0, the next `α_1` take
/// strategy 1, and so on.
pub fn assign_players_uniform<R: Rng + ?Sized>(alpha: &LoadProfile, rng: &mut R) -> Result<StrategyProfile> {
    if alpha.kind != LoadKind::Strategy {
        return Err(Error::InvalidArgument("players are assigned from strategy loads".into()));
    }
    let n = alpha.modulus();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut choices = vec![0; n];
    let mut next = order.into_iter();
    for (p, &count) in alpha.counts.iter().enumerate() {
        for player in next.by_ref().take(count) {
            choices[player] = p;
        }
    }
    Ok(StrategyProfile::new(choices))
}

/// One draw from the two-stage Gibbs sampler.
pub fn sample_gibbs_ep<R: Rng + ?Sized>(
    game: &CongestionGame,
    temperature: f64,
    eps: f64,
    mix_constant: f64,
    rng: &mut R,
) -> Result<StrategyProfile> {
    EpGibbsSampler::new(game, temperature, eps, mix_constant)?.sample(rng)
}

/// `ceil(n log2 q + log2(2/ε))`, the base-2 temperature of the equilibrium
/// sampler.
pub fn pne_temperature(players: usize, strategies: usize, eps: f64) -> f64 {
    (players as f64 * (strategies as f64).log2() + (2.0 / eps).log2()).ceil()
}

/// Rejection sampler for a uniformly random pure Nash equilibrium of an EP
/// game with integer costs.
pub struct PneSampler<'g> {
    inner: EpGibbsSampler<'g>,
    min_potential: Extended,
    base2_temperature: f64,
    rerun_cap: usize,
}

impl<'g> PneSampler<'g> {
    pub fn new(game: &'g CongestionGame, eps: f64, mix_constant: f64) -> Result<Self> {
        let q = require_ep(game)?;
        check_eps(eps)?;
        if !game.is_integer_valued() {
            return Err(Error::Unsupported(
                "equilibrium sampling needs integer-valued costs".into(),
            ));
        }
        let base2_temperature = pne_temperature(game.players(), q, eps);
        let min_potential = game.potential(&game.min_potential_profile()?);
        let inner = EpGibbsSampler::new(game, base2_temperature * LN_2, eps / 2.0, mix_constant)?;
        let rerun_cap = 64 * (1.0 / (1.0 - eps / 2.0)).ceil() as usize;
        Ok(PneSampler {
            inner,
            min_potential,
            base2_temperature,
            rerun_cap,
        })
    }

    /// The integer temperature `T` of the base-2 Gibbs distribution.
    pub fn temperature(&self) -> f64 {
        self.base2_temperature
    }

    pub fn min_potential(&self) -> Extended {
        self.min_potential
    }

    pub fn rerun_cap(&self) -> usize {
        self.rerun_cap
    }

    pub fn steps(&self) -> u64 {
        self.inner.steps()
    }

    /// An equilibrium and the number of Gibbs draws it took.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(StrategyProfile, usize)> {
        let game = self.inner.game();
        for attempt in 1..=self.rerun_cap {
            let s = self.inner.sample(rng)?;
            if game.potential(&s) == self.min_potential {
                return Ok((s, attempt));
            }
        }
        Err(Error::RerunCapExceeded(self.rerun_cap))
    }

    pub fn sample_many(&self, count: usize, seed: u64) -> Result<Vec<(StrategyProfile, usize)>> {
        (0..count as u64)
            .into_par_iter()
            .map(|c| self.sample(&mut chain_rng(seed, c)))
            .collect()
    }
}

pub fn sample_uniform_pne<R: Rng + ?Sized>(
    game: &CongestionGame,
    eps: f64,
    mix_constant: f64,
    rng: &mut R,
) -> Result<StrategyProfile> {
    Ok(PneSampler::new(game, eps, mix_constant)?.sample(rng)?.0)
}
