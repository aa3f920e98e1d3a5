//! Structural predicates checked by brute force.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use crate::cap_uniform::load_profile_set;
use crate::combin::compositions;
use crate::error::{Error, Result};
use crate::game::{CongestionGame, CostFunction, Extended, Resource, Structure};
use crate::gibbs_ep::pne_temperature;
use crate::verify::exact::{exact_gibbs, ENUMERATION_LIMIT};

/// Largest domain [`check_m_convex`] searches.
pub const M_CONVEX_LIMIT: usize = 10_000;

/// A violated exchange: no `j` with `α_j < β_j` repairs coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeWitness {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub i: usize,
}

/// Checks that `f` (with `None` for `+inf`) is M-convex on `domain`: for all
/// `α, β` and `i` with `α_i > β_i` some `j` with `α_j < β_j` has
/// `f(α) + f(β) ≥ f(α - e_i + e_j) + f(β + e_i - e_j)`.
/// Points outside `domain` count as `+inf`. Returns the first violation.
pub fn check_m_convex<F>(domain: &[Vec<usize>], f: F) -> Result<Option<ExchangeWitness>>
where
    F: Fn(&[usize]) -> Extended,
{
    exchange_search(domain, |a| Some(f(a)).filter(Extended::is_finite), |lhs_a, lhs_b, rhs_a, rhs_b| {
        match (rhs_a, rhs_b) {
            (Some(x), Some(y)) => lhs_a + lhs_b >= x + y,
            _ => false,
        }
    })
}

/// [`check_m_convex`] for real-valued functions, allowing `tol` of rounding.
pub fn check_m_convex_f64<F>(domain: &[Vec<usize>], f: F, tol: f64) -> Result<Option<ExchangeWitness>>
where
    F: Fn(&[usize]) -> f64,
{
    exchange_search(domain, |a| Some(f(a)).filter(|v| v.is_finite()), |lhs_a, lhs_b, rhs_a, rhs_b| {
        match (rhs_a, rhs_b) {
            (Some(x), Some(y)) => lhs_a + lhs_b >= x + y - tol,
            _ => false,
        }
    })
}

fn exchange_search<V: Copy>(
    domain: &[Vec<usize>],
    f: impl Fn(&[usize]) -> Option<V>,
    holds: impl Fn(V, V, Option<V>, Option<V>) -> bool,
) -> Result<Option<ExchangeWitness>> {
    if domain.len() > M_CONVEX_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "{} points exceed the exchange-check limit {M_CONVEX_LIMIT}",
            domain.len()
        )));
    }
    let values: HashMap<&[usize], V> = domain
        .iter()
        .filter_map(|a| f(a).map(|v| (a.as_slice(), v)))
        .collect();
    let lookup = |a: &[usize]| values.get(a).copied();
    let finite: Vec<(&Vec<usize>, V)> = domain
        .iter()
        .filter_map(|a| lookup(a).map(|v| (a, v)))
        .collect();
    let mut a2 = Vec::new();
    let mut b2 = Vec::new();
    for &(alpha, fa) in &finite {
        for &(beta, fb) in &finite {
            for i in 0..alpha.len() {
                if alpha[i] <= beta[i] {
                    continue;
                }
                let repaired = (0..alpha.len()).filter(|&j| alpha[j] < beta[j]).any(|j| {
                    a2.clone_from(alpha);
                    b2.clone_from(beta);
                    a2[i] -= 1;
                    a2[j] += 1;
                    b2[i] += 1;
                    b2[j] -= 1;
                    holds(fa, fb, lookup(&a2), lookup(&b2))
                });
                if !repaired {
                    return Ok(Some(ExchangeWitness {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        i,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// All strategy load vectors of a symmetric game.
pub fn strategy_load_domain(game: &CongestionGame) -> Result<Vec<Vec<usize>>> {
    let q = game.common_strategy_count()?;
    Ok(compositions(game.players(), q))
}

/// Rosenthal's potential as a function of strategy loads.
pub fn check_potential_m_convex(game: &CongestionGame) -> Result<Option<ExchangeWitness>> {
    let domain = strategy_load_domain(game)?;
    check_m_convex(&domain, |a| {
        game.strategy_load_potential(a).unwrap_or(Extended::Infinite)
    })
}

/// Rosenthal's potential on the resource load profiles of a capacitated
/// k-uniform game.
pub fn check_resource_potential_m_convex(game: &CongestionGame) -> Result<Option<ExchangeWitness>> {
    let set = load_profile_set(game)?;
    if set.count_members(M_CONVEX_LIMIT).is_none() {
        return Err(Error::GuardExceeded(format!(
            "more than {M_CONVEX_LIMIT} load profiles"
        )));
    }
    check_m_convex(&set.members(), |l| game.rosenthal_potential(l))
}

/// `C_i(s) - C_i(t, s_{-i}) = Φ(s) - Φ(t, s_{-i})` for every profile, player
/// and deviation between feasible profiles. Returns the first violation.
pub fn check_exact_potential(game: &CongestionGame) -> Result<Option<(Vec<usize>, usize, usize)>> {
    for s in game.all_profiles(ENUMERATION_LIMIT)? {
        let phi = game.potential(&s);
        let Some(phi) = phi.finite() else { continue };
        for i in 0..game.players() {
            let own = game.player_cost(&s, i).finite();
            for t in 0..game.num_strategies(i) {
                let d = s.with_choice(i, t);
                let (Some(phi_d), Some(own)) = (game.potential(&d).finite(), own) else {
                    continue;
                };
                let Some(own_d) = game.player_cost(&d, i).finite() else {
                    return Ok(Some((s.choices().to_vec(), i, t)));
                };
                if own - own_d != phi - phi_d {
                    return Ok(Some((s.choices().to_vec(), i, t)));
                }
            }
        }
    }
    Ok(None)
}

/// Per-resource second differences of the cumulative cost are non-negative
/// up to the player count.
pub fn check_separable_convexity(game: &CongestionGame) -> bool {
    game.resources().iter().all(|r| {
        (1..game.players()).all(|x| {
            let a = r.cost.cumulative(x - 1);
            let b = r.cost.cumulative(x);
            let c = r.cost.cumulative(x + 1);
            match (a, b, c) {
                (Extended::Finite(a), Extended::Finite(b), Extended::Finite(c)) => c - b >= b - a,
                // the sentinel only ever appears above a capacity
                _ => true,
            }
        })
    })
}

/// Greedy insertion reaches the minimum of Φ over all profiles.
pub fn check_greedy_minimum(game: &CongestionGame) -> Result<bool> {
    let greedy = game.potential(&game.min_potential_profile()?);
    let best = game
        .all_profiles(ENUMERATION_LIMIT)?
        .iter()
        .map(|s| game.potential(s))
        .min()
        .unwrap_or(Extended::Infinite);
    Ok(greedy == best)
}

/// In EP games the equilibria are exactly the minimizers of Φ.
pub fn check_nash_iff_minimum(game: &CongestionGame) -> Result<bool> {
    let profiles = game.all_profiles(ENUMERATION_LIMIT)?;
    let best = profiles.iter().map(|s| game.potential(s)).min().unwrap_or(Extended::Infinite);
    Ok(profiles
        .iter()
        .filter(|s| game.potential(s).is_finite())
        .all(|s| game.is_nash(s) == (game.potential(s) == best)))
}

/// `|S(α)| = n!/α!` for every strategy load profile of a symmetric game.
pub fn check_fibre_sizes(game: &CongestionGame) -> Result<bool> {
    let n = game.players();
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for s in game.all_profiles(ENUMERATION_LIMIT)? {
        *counts.entry(game.strategy_loads(&s)?.counts).or_default() += 1;
    }
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    Ok(counts
        .iter()
        .all(|(alpha, &c)| c == fact(n) / alpha.iter().map(|&a| fact(a)).product::<u64>()))
}

/// `n³ (ln n + max(0, ln ln q) + ln(2 T Φ_max / ε²)) + n³`.
pub fn relaxed_mixing_budget(players: usize, strategies: usize, temperature: f64, phi_max: f64, eps: f64) -> f64 {
    let n = players as f64;
    let loglog = if strategies >= 2 {
        (strategies as f64).ln().ln().max(0.0)
    } else {
        0.0
    };
    let tail = (2.0 * temperature * phi_max / (eps * eps)).max(1.0).ln();
    n.powi(3) * (n.ln() + loglog + tail) + n.powi(3)
}

/// Largest finite potential over all profiles.
pub fn max_potential(game: &CongestionGame) -> Result<f64> {
    Ok(game
        .all_profiles(ENUMERATION_LIMIT)?
        .iter()
        .filter_map(|s| game.potential(s).finite())
        .map(crate::game::rational_to_f64)
        .fold(0.0, f64::max))
}

/// `(π(S \ NE), (ε/2) π(NE))` for the base-2 Gibbs distribution at the
/// equilibrium sampler's temperature.
pub fn pne_separation(game: &CongestionGame, eps: f64) -> Result<(f64, f64)> {
    let q = game
        .paths()
        .ok_or_else(|| Error::Unsupported("needs an extension-parallel game".into()))?
        .len();
    let t = pne_temperature(game.players(), q, eps);
    let pi = exact_gibbs(game, t * LN_2)?;
    let ne = pi.mass(|s| game.is_nash(s));
    let rest = pi.mass(|s| !game.is_nash(s));
    Ok((rest, eps / 2.0 * ne))
}

/// Two players routing through two gadgets of two parallel arcs placed in
/// series, the smallest network that is not extension-parallel. All arcs
/// share the cost table `costs`.
pub fn two_gadget_series_game(costs: &[i64]) -> Result<CongestionGame> {
    let names = ["a1", "a2", "b1", "b2"];
    let resources = names
        .iter()
        .map(|n| CostFunction::from_integers(costs, None).map(|c| Resource::new(*n, c)))
        .collect::<Result<Vec<_>>>()?;
    let paths: Vec<Vec<usize>> = (0..2)
        .flat_map(|x| (0..2).map(move |y| vec![x, 2 + y]))
        .collect();
    CongestionGame::new(2, resources, Structure::Explicit(vec![paths.clone(), paths]))
}

/// Searches small non-decreasing cost tables for one under which the
/// two-gadget series game breaks the exchange property.
pub fn find_series_counterexample() -> Result<Option<(Vec<i64>, ExchangeWitness)>> {
    for c1 in 0..=2i64 {
        for c2 in c1..=c1 + 3 {
            let costs = vec![c1, c2];
            let game = two_gadget_series_game(&costs)?;
            if let Some(w) = check_potential_m_convex(&game)? {
                return Ok(Some((costs, w)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::EpNetwork;

    #[test]
    fn separable_convex_passes() {
        let domain = compositions(4, 3);
        let f = |a: &[usize]| Extended::from(a.iter().map(|&x| (x * x) as i64).sum::<i64>());
        assert_eq!(check_m_convex(&domain, f).unwrap(), None);
        // a concave term breaks it
        let g = |a: &[usize]| Extended::from(-((a[0] * a[0]) as i64));
        assert!(check_m_convex(&domain, g).unwrap().is_some());
    }

    #[test]
    fn series_gadgets_violate_exchange() {
        let game = two_gadget_series_game(&[0, 1]).unwrap();
        let w = check_potential_m_convex(&game).unwrap().expect("a violation");
        // paths are (a1,b1), (a1,b2), (a2,b1), (a2,b2)
        assert_eq!(w.alpha.iter().sum::<usize>(), 2);
        let (costs, _) = find_series_counterexample().unwrap().expect("some table breaks it");
        assert!(costs[0] < costs[1]);
    }

    #[test]
    fn example_one_structure() {
        let cost = CostFunction::from_integers(&[0, 5], None).unwrap();
        let g = CongestionGame::new(
            2,
            vec![Resource::new("a", cost.clone()), Resource::new("b", cost)],
            Structure::Ep(EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(1))),
        )
        .unwrap();
        assert_eq!(check_exact_potential(&g).unwrap(), None);
        assert!(check_separable_convexity(&g));
        assert!(check_greedy_minimum(&g).unwrap());
        assert!(check_nash_iff_minimum(&g).unwrap());
        assert!(check_fibre_sizes(&g).unwrap());
        assert_eq!(check_potential_m_convex(&g).unwrap(), None);
        let (rest, bound) = pne_separation(&g, 0.05).unwrap();
        assert!(rest <= bound);
    }

    #[test]
    fn budget_clamps_loglog() {
        let b = relaxed_mixing_budget(2, 2, 1.0, 12.0, 0.01);
        let expected = 8.0 * (2f64.ln() + (2.0 * 12.0 / 1e-4f64).ln()) + 8.0;
        assert!((b - expected).abs() < 1e-9);
    }
}
