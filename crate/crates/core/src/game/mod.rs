//! Congestion games: strategy structures, loads, Rosenthal's potential, costs
//! and Nash predicates.

mod cost;
mod network;
pub mod parse;

use std::borrow::Cow;
use std::collections::HashMap;

pub use cost::{rational_to_f64, CostFunction, Extended};
pub use network::{enumerate_paths, EpNetwork};

use crate::combin::{rank_subset, unrank_subset};
use crate::error::{Error, Result};
use crate::numeric::binomial_u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub name: String,
    pub cost: CostFunction,
}

impl Resource {
    pub fn new(name: impl Into<String>, cost: CostFunction) -> Self {
        Resource {
            name: name.into(),
            cost,
        }
    }
}

/// How players' strategy sets are described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// Symmetric game whose common strategy set is the path set of an
    /// extension-parallel network.
    Ep(EpNetwork),
    /// Player `i` picks any `k[i]` distinct resources.
    KUniform(Vec<usize>),
    /// Per-player strategy lists, each strategy a set of resource ids.
    Explicit(Vec<Vec<Vec<usize>>>),
}

#[derive(Debug, Clone)]
enum StrategySpace {
    Shared(Vec<Vec<usize>>),
    PerPlayer(Vec<Vec<Vec<usize>>>),
    Subsets { k: Vec<usize>, counts: Vec<usize> },
}

/// One strategy per player, stored as an index into that player's strategy
/// list: a path index for EP games, the colex rank of the chosen k-subset for
/// k-uniform games, the list position for explicit games.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    choices: Vec<usize>,
}

impl StrategyProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        StrategyProfile { choices }
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// The profile with player `i` switched to strategy `t`.
    pub fn with_choice(&self, i: usize, t: usize) -> Self {
        let mut choices = self.choices.clone();
        choices[i] = t;
        StrategyProfile { choices }
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.choices.swap(i, j);
    }

    pub(crate) fn set(&mut self, i: usize, t: usize) {
        self.choices[i] = t;
    }
}

impl From<Vec<usize>> for StrategyProfile {
    fn from(choices: Vec<usize>) -> Self {
        StrategyProfile::new(choices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoadKind {
    /// Players per resource.
    Resource,
    /// Players per strategy of a symmetric game.
    Strategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoadProfile {
    pub kind: LoadKind,
    pub counts: Vec<usize>,
}

impl LoadProfile {
    pub fn modulus(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct CongestionGame {
    players: usize,
    resources: Vec<Resource>,
    structure: Structure,
    space: StrategySpace,
}

impl CongestionGame {
    pub fn new(players: usize, resources: Vec<Resource>, structure: Structure) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        if resources.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one resource".into()));
        }
        let m = resources.len();
        for r in &resources {
            let reachable = r.cost.capacity().map_or(players, |u| u.min(players));
            if r.cost.values().len() < reachable {
                return Err(Error::InvalidGame(format!(
                    "resource {} tabulates {} cost values but can carry {} players",
                    r.name,
                    r.cost.values().len(),
                    reachable
                )));
            }
        }
        let space = match &structure {
            Structure::Ep(net) => {
                net.validate(m)?;
                StrategySpace::Shared(enumerate_paths(net))
            }
            Structure::KUniform(k) => {
                if k.len() != players {
                    return Err(Error::InvalidGame(format!(
                        "k lists {} entries for {players} players",
                        k.len()
                    )));
                }
                if let Some(bad) = k.iter().find(|&&ki| ki == 0 || ki > m) {
                    return Err(Error::InvalidGame(format!(
                        "k_i = {bad} outside 1..={m}"
                    )));
                }
                let counts = k
                    .iter()
                    .map(|&ki| {
                        binomial_u64(m, ki)
                            .and_then(|c| usize::try_from(c).ok())
                            .ok_or_else(|| {
                                Error::GuardExceeded(format!("C({m}, {ki}) strategies"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                StrategySpace::Subsets {
                    k: k.clone(),
                    counts,
                }
            }
            Structure::Explicit(sets) => {
                if sets.len() != players {
                    return Err(Error::InvalidGame(format!(
                        "explicit structure lists {} players, expected {players}",
                        sets.len()
                    )));
                }
                let mut normalized = Vec::with_capacity(players);
                for (i, set) in sets.iter().enumerate() {
                    if set.is_empty() {
                        return Err(Error::InvalidGame(format!(
                            "player {} has no strategies",
                            i + 1
                        )));
                    }
                    let mut list: Vec<Vec<usize>> = Vec::with_capacity(set.len());
                    for strategy in set {
                        let mut s = strategy.clone();
                        s.sort_unstable();
                        s.dedup();
                        if s.is_empty() {
                            return Err(Error::InvalidGame(format!(
                                "player {} has an empty strategy",
                                i + 1
                            )));
                        }
                        if let Some(bad) = s.iter().find(|&&e| e >= m) {
                            return Err(Error::InvalidGame(format!("unknown resource id {bad}")));
                        }
                        if list.contains(&s) {
                            return Err(Error::InvalidGame(format!(
                                "player {} lists a strategy twice",
                                i + 1
                            )));
                        }
                        list.push(s);
                    }
                    normalized.push(list);
                }
                if normalized.iter().all(|l| *l == normalized[0]) {
                    StrategySpace::Shared(normalized.swap_remove(0))
                } else {
                    StrategySpace::PerPlayer(normalized)
                }
            }
        };
        let game = CongestionGame {
            players,
            resources,
            structure,
            space,
        };
        game.feasible_profile()?;
        Ok(game)
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn resource_count(&self) -> usize {
        self.resources.len()
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn is_ep(&self) -> bool {
        matches!(self.structure, Structure::Ep(_))
    }

    /// Per-player resource counts of a k-uniform game.
    pub fn k_uniform(&self) -> Option<&[usize]> {
        match &self.structure {
            Structure::KUniform(k) => Some(k),
            _ => None,
        }
    }

    /// Path set of an EP game, in the network's depth-first order.
    pub fn paths(&self) -> Option<&[Vec<usize>]> {
        match (&self.structure, &self.space) {
            (Structure::Ep(_), StrategySpace::Shared(paths)) => Some(paths),
            _ => None,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.space {
            StrategySpace::Shared(_) => true,
            StrategySpace::PerPlayer(_) => false,
            StrategySpace::Subsets { k, .. } => k.iter().all(|&ki| ki == k[0]),
        }
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        match &self.space {
            StrategySpace::Shared(list) => list.len(),
            StrategySpace::PerPlayer(lists) => lists[player].len(),
            StrategySpace::Subsets { counts, .. } => counts[player],
        }
    }

    /// Resource set of strategy `index` of `player`, sorted.
    pub fn strategy(&self, player: usize, index: usize) -> Cow<'_, [usize]> {
        match &self.space {
            StrategySpace::Shared(list) => Cow::Borrowed(&list[index]),
            StrategySpace::PerPlayer(lists) => Cow::Borrowed(&lists[player][index]),
            StrategySpace::Subsets { k, .. } => Cow::Owned(unrank_subset(index, k[player])),
        }
    }

    /// Index of the strategy with the given resource set, if it belongs to
    /// the player's strategy set.
    pub fn strategy_index(&self, player: usize, resources: &[usize]) -> Option<usize> {
        let mut sorted = resources.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        match &self.space {
            StrategySpace::Shared(list) => list.iter().position(|s| *s == sorted),
            StrategySpace::PerPlayer(lists) => lists[player].iter().position(|s| *s == sorted),
            StrategySpace::Subsets { k, .. } => {
                let m = self.resources.len();
                (sorted.len() == k[player] && sorted.iter().all(|&e| e < m))
                    .then(|| rank_subset(&sorted))
            }
        }
    }

    /// Size of the common strategy set of a symmetric game.
    pub fn common_strategy_count(&self) -> Result<usize> {
        if !self.is_symmetric() {
            return Err(Error::Unsupported(
                "strategy loads need a symmetric game".into(),
            ));
        }
        Ok(self.num_strategies(0))
    }

    pub fn validate_profile(&self, s: &StrategyProfile) -> Result<()> {
        if s.len() != self.players {
            return Err(Error::InvalidArgument(format!(
                "profile has {} entries for {} players",
                s.len(),
                self.players
            )));
        }
        for (i, &t) in s.choices().iter().enumerate() {
            if t >= self.num_strategies(i) {
                return Err(Error::InvalidArgument(format!(
                    "player {} strategy index {t} out of range",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn resource_loads(&self, s: &StrategyProfile) -> LoadProfile {
        LoadProfile {
            kind: LoadKind::Resource,
            counts: self.resource_counts(s),
        }
    }

    pub(crate) fn resource_counts(&self, s: &StrategyProfile) -> Vec<usize> {
        let mut loads = vec![0usize; self.resources.len()];
        for (i, &t) in s.choices().iter().enumerate() {
            for &e in self.strategy(i, t).iter() {
                loads[e] += 1;
            }
        }
        loads
    }

    pub fn strategy_loads(&self, s: &StrategyProfile) -> Result<LoadProfile> {
        let q = self.common_strategy_count()?;
        let mut counts = vec![0usize; q];
        for &t in s.choices() {
            counts[t] += 1;
        }
        Ok(LoadProfile {
            kind: LoadKind::Strategy,
            counts,
        })
    }

    /// Resource loads induced by a strategy load vector of a symmetric game.
    pub fn resource_counts_of_strategy_loads(&self, alpha: &[usize]) -> Vec<usize> {
        let mut loads = vec![0usize; self.resources.len()];
        for (p, &count) in alpha.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for &e in self.strategy(0, p).iter() {
                loads[e] += count;
            }
        }
        loads
    }

    /// Rosenthal's potential of a resource load vector; the sentinel iff some
    /// load exceeds its capacity.
    pub fn rosenthal_potential(&self, loads: &[usize]) -> Extended {
        loads
            .iter()
            .zip(&self.resources)
            .fold(Extended::ZERO, |acc, (&x, r)| match acc {
                Extended::Infinite => acc,
                _ => acc + r.cost.cumulative(x),
            })
    }

    pub fn potential(&self, s: &StrategyProfile) -> Extended {
        self.rosenthal_potential(&self.resource_counts(s))
    }

    /// Potential as a function of strategy loads of a symmetric game.
    pub fn strategy_load_potential(&self, alpha: &[usize]) -> Result<Extended> {
        let q = self.common_strategy_count()?;
        if alpha.len() != q {
            return Err(Error::InvalidArgument(format!(
                "strategy load vector has {} entries, expected {q}",
                alpha.len()
            )));
        }
        Ok(self.rosenthal_potential(&self.resource_counts_of_strategy_loads(alpha)))
    }

    pub fn player_cost(&self, s: &StrategyProfile, player: usize) -> Extended {
        let loads = self.resource_counts(s);
        self.strategy(player, s.choices()[player])
            .iter()
            .fold(Extended::ZERO, |acc, &e| acc + self.resources[e].cost.cost(loads[e]))
    }

    /// `Φ(t, s_{-i})` for every strategy `t` of player `i`, exactly.
    pub fn deviation_potentials(&self, s: &StrategyProfile, player: usize) -> Vec<Extended> {
        let mut loads = self.resource_counts(s);
        for &e in self.strategy(player, s.choices()[player]).iter() {
            loads[e] -= 1;
        }
        let base = self.rosenthal_potential(&loads);
        (0..self.num_strategies(player))
            .map(|t| {
                self.strategy(player, t)
                    .iter()
                    .fold(base, |acc, &e| acc + self.resources[e].cost.cost(loads[e] + 1))
            })
            .collect()
    }

    /// No player can strictly lower her own cost by a unilateral deviation.
    pub fn is_nash(&self, s: &StrategyProfile) -> bool {
        (0..self.players).all(|i| {
            let current = self.player_cost(s, i);
            (0..self.num_strategies(i))
                .all(|t| current <= self.player_cost(&s.with_choice(i, t), i))
        })
    }

    pub fn is_integer_valued(&self) -> bool {
        self.resources.iter().all(|r| r.cost.is_integer_valued())
    }

    /// Global minimizer of Rosenthal's potential of an EP game by greedy
    /// insertion: players enter one at a time, each on a path with the
    /// smallest potential increment (ties go to the lowest path index).
    pub fn min_potential_profile(&self) -> Result<StrategyProfile> {
        let paths = self
            .paths()
            .ok_or_else(|| Error::Unsupported("greedy minimization needs an EP game".into()))?;
        let mut loads = vec![0usize; self.resources.len()];
        let mut choices = Vec::with_capacity(self.players);
        for _ in 0..self.players {
            let (best, increment) = paths
                .iter()
                .enumerate()
                .map(|(p, path)| {
                    let inc = path.iter().fold(Extended::ZERO, |acc, &e| {
                        acc + self.resources[e].cost.cost(loads[e] + 1)
                    });
                    (p, inc)
                })
                .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("an EP network has at least one path");
            if !increment.is_finite() {
                return Err(Error::Infeasible(
                    "capacities leave no room for every player".into(),
                ));
            }
            for &e in &paths[best] {
                loads[e] += 1;
            }
            choices.push(best);
        }
        Ok(StrategyProfile::new(choices))
    }

    /// Some profile with finite potential; an error when none exists.
    pub fn feasible_profile(&self) -> Result<StrategyProfile> {
        match &self.structure {
            Structure::Ep(_) => self.min_potential_profile(),
            Structure::KUniform(k) => self.feasible_k_uniform(k),
            Structure::Explicit(_) => self.feasible_by_search(),
        }
    }

    fn capacity_of(&self, e: usize) -> usize {
        self.resources[e]
            .cost
            .capacity()
            .map_or(self.players, |u| u.min(self.players))
    }

    fn feasible_k_uniform(&self, k: &[usize]) -> Result<StrategyProfile> {
        let m = self.resources.len();
        let caps: Vec<usize> = (0..m).map(|e| self.capacity_of(e)).collect();
        // Rows with demands k and columns bounded by caps are realizable iff
        // the t largest demands fit into Σ_j min(cap_j, t) for every t.
        let mut sorted = k.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut top = 0;
        for (t, &kt) in sorted.iter().enumerate() {
            top += kt;
            let room: usize = caps.iter().map(|&u| u.min(t + 1)).sum();
            if top > room {
                return Err(Error::Infeasible(format!(
                    "the {} largest demands need {top} slots but only {room} fit",
                    t + 1
                )));
            }
        }
        let mut order: Vec<usize> = (0..self.players).collect();
        order.sort_by(|&a, &b| k[b].cmp(&k[a]).then(a.cmp(&b)));
        let mut residual = caps;
        let mut choices = vec![0; self.players];
        for i in order {
            let mut by_room: Vec<usize> = (0..m).collect();
            by_room.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
            let mut chosen: Vec<usize> = by_room[..k[i]].to_vec();
            if chosen.iter().any(|&e| residual[e] == 0) {
                return Err(Error::Infeasible("greedy realization ran out of capacity".into()));
            }
            for &e in &chosen {
                residual[e] -= 1;
            }
            chosen.sort_unstable();
            choices[i] = rank_subset(&chosen);
        }
        Ok(StrategyProfile::new(choices))
    }

    fn feasible_by_search(&self) -> Result<StrategyProfile> {
        let caps: Vec<usize> = (0..self.resources.len()).map(|e| self.capacity_of(e)).collect();
        let mut loads = vec![0usize; caps.len()];
        let mut choices = Vec::with_capacity(self.players);
        if self.search(0, &caps, &mut loads, &mut choices) {
            Ok(StrategyProfile::new(choices))
        } else {
            Err(Error::Infeasible("no strategy profile respects the capacities".into()))
        }
    }

    fn search(
        &self,
        player: usize,
        caps: &[usize],
        loads: &mut [usize],
        choices: &mut Vec<usize>,
    ) -> bool {
        if player == self.players {
            return true;
        }
        for t in 0..self.num_strategies(player) {
            let strategy = self.strategy(player, t);
            if strategy.iter().any(|&e| loads[e] >= caps[e]) {
                continue;
            }
            strategy.iter().for_each(|&e| loads[e] += 1);
            choices.push(t);
            if self.search(player + 1, caps, loads, choices) {
                return true;
            }
            choices.pop();
            strategy.iter().for_each(|&e| loads[e] -= 1);
        }
        false
    }

    /// Number of strategy profiles `Π |S_i|`, saturating.
    pub fn profile_count(&self) -> u128 {
        (0..self.players).fold(1u128, |acc, i| {
            acc.saturating_mul(self.num_strategies(i) as u128)
        })
    }

    /// Every strategy profile (feasible or not) in mixed-radix order, player 0
    /// varying slowest. Fails when there are more than `limit`.
    pub fn all_profiles(&self, limit: usize) -> Result<Vec<StrategyProfile>> {
        let total = self.profile_count();
        if total > limit as u128 {
            return Err(Error::GuardExceeded(format!(
                "{total} strategy profiles exceed the enumeration limit {limit}"
            )));
        }
        let radix: Vec<usize> = (0..self.players).map(|i| self.num_strategies(i)).collect();
        let mut out = Vec::with_capacity(total as usize);
        let mut current = vec![0usize; self.players];
        loop {
            out.push(StrategyProfile::new(current.clone()));
            let mut i = self.players;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                current[i] += 1;
                if current[i] < radix[i] {
                    break;
                }
                current[i] = 0;
            }
        }
    }

    /// Feasible profiles grouped by their strategy load vector.
    pub fn profiles_by_strategy_loads(
        &self,
        limit: usize,
    ) -> Result<HashMap<Vec<usize>, Vec<StrategyProfile>>> {
        let mut groups: HashMap<Vec<usize>, Vec<StrategyProfile>> = HashMap::new();
        for s in self.all_profiles(limit)? {
            if self.potential(&s).is_finite() {
                groups.entry(self.strategy_loads(&s)?.counts).or_default().push(s);
            }
        }
        Ok(groups)
    }

    /// Human-readable strategy: the path index for EP games, resource names
    /// joined by `;` otherwise.
    pub fn describe_strategy(&self, player: usize, index: usize) -> String {
        if self.is_ep() {
            return index.to_string();
        }
        self.strategy(player, index)
            .iter()
            .map(|&e| self.resources[e].name.as_str())
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    pub(crate) fn example_one(phi: i64) -> CongestionGame {
        let cost = CostFunction::from_integers(&[0, phi], None).unwrap();
        CongestionGame::new(
            2,
            vec![Resource::new("a", cost.clone()), Resource::new("b", cost)],
            Structure::Ep(EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(1))),
        )
        .unwrap()
    }

    fn profile(v: &[usize]) -> StrategyProfile {
        StrategyProfile::new(v.to_vec())
    }

    #[test]
    fn example_one_loads_and_potential() {
        let g = example_one(5);
        let ab = profile(&[0, 1]);
        let aa = profile(&[0, 0]);
        assert_eq!(g.resource_loads(&ab).counts, vec![1, 1]);
        assert_eq!(g.strategy_loads(&ab).unwrap().counts, vec![1, 1]);
        assert_eq!(g.potential(&ab), Extended::from(0));
        assert_eq!(g.potential(&aa), Extended::from(5));
        assert_eq!(g.player_cost(&aa, 0), Extended::from(5));
        assert!(g.is_nash(&ab));
        assert!(!g.is_nash(&aa));
        let min = g.min_potential_profile().unwrap();
        assert_eq!(g.potential(&min), Extended::from(0));
    }

    #[test]
    fn identical_strategies_load_every_resource_n_times() {
        let g = example_one(1);
        let s = profile(&[1, 1]);
        assert_eq!(g.resource_loads(&s).counts, vec![0, 2]);
        assert_eq!(g.strategy_loads(&s).unwrap().counts, vec![0, 2]);
        assert_eq!(g.rosenthal_potential(&[0, 0]), Extended::ZERO);
    }

    #[test]
    fn single_player_single_arc() {
        let c = CostFunction::new(vec![Rational64::new(3, 2)], None).unwrap();
        let g = CongestionGame::new(
            1,
            vec![Resource::new("x", c)],
            Structure::Ep(EpNetwork::arc(0)),
        )
        .unwrap();
        let s = profile(&[0]);
        assert_eq!(g.player_cost(&s, 0), Extended::Finite(Rational64::new(3, 2)));
        assert_eq!(g.min_potential_profile().unwrap(), s);
    }

    #[test]
    fn rejects_degenerate_games() {
        let c = CostFunction::from_integers(&[1, 2], None).unwrap();
        assert!(CongestionGame::new(0, vec![Resource::new("a", c.clone())], Structure::Ep(EpNetwork::arc(0))).is_err());
        // two players, each needs both resources, capacity one each
        let capped = CostFunction::from_integers(&[1], Some(1)).unwrap();
        let err = CongestionGame::new(
            2,
            vec![Resource::new("a", capped.clone()), Resource::new("b", capped)],
            Structure::KUniform(vec![2, 1]),
        );
        assert!(matches!(err, Err(Error::Infeasible(_))));
        // k outside 1..=m
        assert!(CongestionGame::new(
            1,
            vec![Resource::new("a", c)],
            Structure::KUniform(vec![2])
        )
        .is_err());
    }

    #[test]
    fn k_uniform_strategies_round_trip() {
        let c = CostFunction::from_integers(&[0, 1, 2], None).unwrap();
        let res: Vec<_> = (0..4).map(|e| Resource::new(format!("r{e}"), c.clone())).collect();
        let g = CongestionGame::new(3, res, Structure::KUniform(vec![2, 1, 3])).unwrap();
        assert_eq!(g.num_strategies(0), 6);
        assert_eq!(g.num_strategies(2), 4);
        for i in 0..3 {
            for t in 0..g.num_strategies(i) {
                let set = g.strategy(i, t).into_owned();
                assert_eq!(g.strategy_index(i, &set), Some(t));
            }
        }
        assert!(!g.is_symmetric());
        assert!(g.strategy_loads(&g.feasible_profile().unwrap()).is_err());
    }

    #[test]
    fn greedy_k_uniform_realization_respects_capacities() {
        let capped = CostFunction::from_integers(&[0, 1], Some(2)).unwrap();
        let res: Vec<_> = (0..3).map(|e| Resource::new(format!("r{e}"), capped.clone())).collect();
        let g = CongestionGame::new(3, res, Structure::KUniform(vec![2, 2, 2])).unwrap();
        let s = g.feasible_profile().unwrap();
        assert_eq!(g.resource_loads(&s).counts, vec![2, 2, 2]);
        assert!(g.potential(&s).is_finite());
    }

    #[test]
    fn explicit_symmetric_detection() {
        let c = CostFunction::from_integers(&[0, 1], None).unwrap();
        let res = vec![Resource::new("a", c.clone()), Resource::new("b", c)];
        let sets = vec![vec![vec![0], vec![1]], vec![vec![0], vec![1]]];
        let g = CongestionGame::new(2, res.clone(), Structure::Explicit(sets)).unwrap();
        assert!(g.is_symmetric());
        let asym = vec![vec![vec![0], vec![1]], vec![vec![1]]];
        let g = CongestionGame::new(2, res, Structure::Explicit(asym)).unwrap();
        assert!(!g.is_symmetric());
        assert_eq!(g.all_profiles(10).unwrap().len(), 2);
    }
}
