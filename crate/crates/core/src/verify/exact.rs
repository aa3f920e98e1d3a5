use std::collections::HashMap;
use std::hash::Hash;

use crate::cap_uniform::{exact_bipartite_count, load_profile_set, CapLogWeight, DegreeSequence, WeightMode};
use crate::dynamics::log_gibbs_weight;
use crate::error::{Error, Result};
use crate::game::{CongestionGame, StrategyProfile};
use crate::gibbs_ep::EpLogWeight;
use crate::matroid::{LogWeight, PolymatroidBaseSet};
use crate::numeric::{ln_biguint, ln_factorial, log_sum_exp, NeumaierSum};

/// Largest number of profiles the exact oracles enumerate.
pub const ENUMERATION_LIMIT: usize = 1_000_000;

/// A finite distribution stored as normalized log-probabilities.
#[derive(Debug, Clone)]
pub struct ExactDistribution<S> {
    support: Vec<S>,
    log_probs: Vec<f64>,
    index: HashMap<S, usize>,
}

impl<S: Clone + Eq + Hash> ExactDistribution<S> {
    /// Normalizes log-weights; states of weight zero are dropped and repeated
    /// states are merged.
    pub fn from_log_weights(states: Vec<S>, log_weights: Vec<f64>) -> Result<Self> {
        let mut merged: Vec<(S, Vec<f64>)> = Vec::new();
        let mut index: HashMap<S, usize> = HashMap::new();
        for (s, w) in states.into_iter().zip(log_weights) {
            if w == f64::NEG_INFINITY {
                continue;
            }
            match index.get(&s) {
                Some(&i) => merged[i].1.push(w),
                None => {
                    index.insert(s.clone(), merged.len());
                    merged.push((s, vec![w]));
                }
            }
        }
        let combined: Vec<f64> = merged.iter().map(|(_, ws)| log_sum_exp(ws)).collect();
        let z = log_sum_exp(&combined);
        if !z.is_finite() {
            return Err(Error::ZeroWeight);
        }
        Ok(ExactDistribution {
            support: merged.into_iter().map(|(s, _)| s).collect(),
            log_probs: combined.iter().map(|w| w - z).collect(),
            index,
        })
    }

    pub fn uniform(states: Vec<S>) -> Result<Self> {
        let n = states.len();
        Self::from_log_weights(states, vec![0.0; n])
    }

    pub fn support(&self) -> &[S] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn log_prob(&self, s: &S) -> f64 {
        self.index.get(s).map_or(f64::NEG_INFINITY, |&i| self.log_probs[i])
    }

    pub fn prob(&self, s: &S) -> f64 {
        self.log_prob(s).exp()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, f64)> {
        self.support.iter().zip(self.log_probs.iter().map(|l| l.exp()))
    }

    /// `|Σ p - 1|`, a normalization check.
    pub fn mass_defect(&self) -> f64 {
        let total: NeumaierSum = self.log_probs.iter().map(|l| l.exp()).collect();
        (total.value() - 1.0).abs()
    }

    /// Probability of the states satisfying `pred`.
    pub fn mass(&self, mut pred: impl FnMut(&S) -> bool) -> f64 {
        let acc: NeumaierSum = self.iter().filter(|(s, _)| pred(s)).map(|(_, p)| p).collect();
        acc.value()
    }
}

/// `½ Σ_x |p(x) - q(x)|` over the union of the supports.
pub fn tv_distance<S: Clone + Eq + Hash>(p: &ExactDistribution<S>, q: &ExactDistribution<S>) -> f64 {
    let mut acc = NeumaierSum::default();
    for (s, ps) in p.iter() {
        acc.add((ps - q.prob(s)).abs());
    }
    for (s, qs) in q.iter() {
        if !p.index.contains_key(s) {
            acc.add(qs);
        }
    }
    (0.5 * acc.value()).min(1.0)
}

/// Sample counts.
#[derive(Debug, Clone)]
pub struct Histogram<S> {
    pub counts: HashMap<S, usize>,
    pub total: usize,
}

impl<S: Clone + Eq + Hash> Histogram<S> {
    pub fn new<I: IntoIterator<Item = S>>(samples: I) -> Self {
        let mut counts = HashMap::new();
        let mut total = 0;
        for s in samples {
            *counts.entry(s).or_insert(0) += 1;
            total += 1;
        }
        Histogram { counts, total }
    }

    pub fn to_distribution(&self) -> Result<ExactDistribution<S>> {
        if self.total == 0 {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        let (states, weights): (Vec<S>, Vec<f64>) = self
            .counts
            .iter()
            .map(|(s, &c)| (s.clone(), (c as f64).ln()))
            .unzip();
        ExactDistribution::from_log_weights(states, weights)
    }
}

/// Empirical distribution of a sample; fails on an empty sample.
pub fn empirical_distribution<S: Clone + Eq + Hash, I: IntoIterator<Item = S>>(samples: I) -> Result<ExactDistribution<S>> {
    Histogram::new(samples).to_distribution()
}

/// `π(s) ∝ e^{-T Φ(s)}` over all feasible profiles.
pub fn exact_gibbs(game: &CongestionGame, temperature: f64) -> Result<ExactDistribution<StrategyProfile>> {
    let profiles = game.all_profiles(ENUMERATION_LIMIT)?;
    let weights = profiles
        .iter()
        .map(|s| log_gibbs_weight(game.potential(s), temperature))
        .collect();
    ExactDistribution::from_log_weights(profiles, weights)
}

/// Uniform distribution over the pure Nash equilibria.
pub fn uniform_over_nash(game: &CongestionGame) -> Result<ExactDistribution<StrategyProfile>> {
    let equilibria: Vec<StrategyProfile> = game
        .all_profiles(ENUMERATION_LIMIT)?
        .into_iter()
        .filter(|s| game.potential(s).is_finite() && game.is_nash(s))
        .collect();
    ExactDistribution::uniform(equilibria)
}

/// The load-profile target `π'(α) ∝ (n!/α!) e^{-T Φ(α)}` of an EP game.
pub fn exact_ep_load_distribution(game: &CongestionGame, temperature: f64) -> Result<ExactDistribution<Vec<usize>>> {
    let q = game
        .paths()
        .ok_or_else(|| Error::Unsupported("needs an extension-parallel game".into()))?
        .len();
    let n = game.players();
    let set = PolymatroidBaseSet::new(vec![n; q], n)?;
    guard_members(&set)?;
    let w = EpLogWeight::new(game, temperature);
    let members = set.members();
    let weights = members.iter().map(|a| w.log_weight(a)).collect();
    ExactDistribution::from_log_weights(members, weights)
}

/// Spreads a strategy-load distribution uniformly over each fibre:
/// `π̄(s) = σ(α) α!/n!` with `α` the strategy loads of `s`.
pub fn compose_ep(
    game: &CongestionGame,
    loads: &ExactDistribution<Vec<usize>>,
) -> Result<ExactDistribution<StrategyProfile>> {
    let n = game.players();
    let profiles = game.all_profiles(ENUMERATION_LIMIT)?;
    let mut weights = Vec::with_capacity(profiles.len());
    for s in &profiles {
        let alpha = game.strategy_loads(s)?.counts;
        let fibre = ln_factorial(n) - alpha.iter().map(|&a| ln_factorial(a)).sum::<f64>();
        weights.push(loads.log_prob(&alpha) - fibre);
    }
    ExactDistribution::from_log_weights(profiles, weights)
}

/// The load-profile target of a k-uniform game under the given weights.
pub fn exact_cap_load_distribution(
    game: &CongestionGame,
    temperature: f64,
    mode: WeightMode,
) -> Result<ExactDistribution<Vec<usize>>> {
    let set = load_profile_set(game)?;
    guard_members(&set)?;
    let w = CapLogWeight::new(game, temperature, mode)?;
    let members = set.members();
    let weights = members.iter().map(|a| w.log_weight(a)).collect();
    ExactDistribution::from_log_weights(members, weights)
}

/// `π̄(s) = σ(α) / |G(k, α)|` with `α` the resource loads of `s`.
pub fn compose_cap(
    game: &CongestionGame,
    loads: &ExactDistribution<Vec<usize>>,
) -> Result<ExactDistribution<StrategyProfile>> {
    let k = game
        .k_uniform()
        .ok_or_else(|| Error::Unsupported("needs a k-uniform game".into()))?
        .to_vec();
    let profiles = game.all_profiles(ENUMERATION_LIMIT)?;
    let mut fibres: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut weights = Vec::with_capacity(profiles.len());
    for s in &profiles {
        let alpha = game.resource_loads(s).counts;
        let lp = loads.log_prob(&alpha);
        if lp == f64::NEG_INFINITY {
            weights.push(lp);
            continue;
        }
        let fibre = match fibres.get(&alpha) {
            Some(&f) => f,
            None => {
                let c = exact_bipartite_count(&DegreeSequence::new(k.clone(), alpha.clone()))?;
                let f = ln_biguint(&c);
                fibres.insert(alpha.clone(), f);
                f
            }
        };
        weights.push(lp - fibre);
    }
    ExactDistribution::from_log_weights(profiles, weights)
}

fn guard_members(set: &PolymatroidBaseSet) -> Result<()> {
    set.count_members(ENUMERATION_LIMIT)
        .map(|_| ())
        .ok_or_else(|| Error::GuardExceeded(format!("more than {ENUMERATION_LIMIT} load profiles")))
}
