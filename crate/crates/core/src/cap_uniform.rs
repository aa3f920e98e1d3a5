//! Capacitated k-uniform games: bipartite degree-sequence counting and
//! sampling, McKay's estimate, and the two-stage Gibbs sampler built on the
//! base-exchange walk over resource load profiles.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::{chain_rng, log_gibbs_weight};
use crate::error::{Error, Result};
use crate::game::{CongestionGame, LoadKind, LoadProfile, StrategyProfile};
use crate::matroid::{step_budget, BaseExchangeSampler, CachedWeight, LogWeight, PolymatroidBaseSet};
use crate::numeric::{binomial, binomial_u64, ln_biguint, ln_factorial};

/// Row degrees `k` (players) and column degrees `α` (resources) of a
/// bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        DegreeSequence { rows, cols }
    }

    pub fn row_total(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn col_total(&self) -> usize {
        self.cols.iter().sum()
    }

    /// Whether some simple bipartite graph has these degrees (Gale–Ryser).
    pub fn is_realizable(&self) -> bool {
        let n = self.rows.len();
        if self.row_total() != self.col_total() || self.cols.iter().any(|&a| a > n) {
            return false;
        }
        let m = self.cols.len();
        if self.rows.iter().any(|&k| k > m) {
            return false;
        }
        let mut cols = self.cols.clone();
        cols.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = 0;
        for (t, &a) in cols.iter().enumerate() {
            prefix += a;
            let room: usize = self.rows.iter().map(|&k| k.min(t + 1)).sum();
            if prefix > room {
                return false;
            }
        }
        true
    }
}

/// Ingredients of McKay's estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct McKayTerms {
    /// `K = Σ k_i`.
    pub total: u64,
    /// `K_2 = Σ k_i (k_i - 1)`.
    pub row_pairs: u64,
    /// `A_2 = Σ α_j (α_j - 1)`.
    pub col_pairs: u64,
    /// `ln(K! / (Π k_i! Π α_j!))`.
    pub ln_prefactor: f64,
}

impl McKayTerms {
    pub fn new(seq: &DegreeSequence) -> Self {
        let falling2 = |x: usize| (x * x.saturating_sub(1)) as u64;
        let total = seq.row_total() as u64;
        McKayTerms {
            total,
            row_pairs: seq.rows.iter().map(|&k| falling2(k)).sum(),
            col_pairs: seq.cols.iter().map(|&a| falling2(a)).sum(),
            ln_prefactor: ln_factorial(total as usize)
                - seq.rows.iter().map(|&k| ln_factorial(k)).sum::<f64>()
                - seq.cols.iter().map(|&a| ln_factorial(a)).sum::<f64>(),
        }
    }

    /// `K_2 A_2 / K^2`.
    pub fn correction(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.row_pairs as f64 * self.col_pairs as f64 / (self.total as f64).powi(2)
    }

    pub fn log_estimate(&self) -> f64 {
        self.ln_prefactor - self.correction()
    }
}

/// `ln φ(k, α) = ln K! - Σ ln k_i! - Σ ln α_j! - (K_2/K^2) A_2`.
pub fn mckay_estimate(seq: &DegreeSequence) -> f64 {
    McKayTerms::new(seq).log_estimate()
}

/// Residual row demands as counts per demand value, `state[d]` rows still
/// needing `d` more edges.
type State = Vec<u32>;

/// Largest `C(n + k_max, k_max) · m` the counting tables may span.
pub const DP_STATE_LIMIT: u128 = 50_000_000;

fn check_guard(seq: &DegreeSequence) -> Result<()> {
    let n = seq.rows.len();
    let kmax = seq.rows.iter().copied().max().unwrap_or(0);
    let states = binomial_u64(n + kmax, kmax).map_or(u128::MAX, u128::from);
    if states.saturating_mul(seq.cols.len().max(1) as u128) > DP_STATE_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "C({}, {kmax}) residual-demand states over {} columns",
            n + kmax,
            seq.cols.len()
        )));
    }
    Ok(())
}

fn initial_state(rows: &[usize]) -> State {
    let kmax = rows.iter().copied().max().unwrap_or(0);
    let mut s = vec![0u32; kmax + 1];
    for &k in rows {
        s[k] += 1;
    }
    s
}

/// Every way to serve a column of degree `a` from `state`: how many rows of
/// each residual demand `d ≥ 1` it takes, with the number of row subsets
/// realizing that choice and the successor state.
fn column_moves(state: &State, a: usize) -> Vec<(Vec<u32>, BigUint, State)> {
    let mut out = Vec::new();
    let mut take = vec![0u32; state.len()];
    fn go(d: usize, left: usize, state: &State, take: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, BigUint, State)>) {
        if d == state.len() {
            if left == 0 {
                let mut ways = BigUint::one();
                let mut next = state.clone();
                for dd in 1..state.len() {
                    let x = take[dd];
                    if x > 0 {
                        ways *= binomial(state[dd] as usize, x as usize);
                        next[dd] -= x;
                        next[dd - 1] += x;
                    }
                }
                out.push((take.clone(), ways, next));
            }
            return;
        }
        let hi = (state[d] as usize).min(left);
        for x in 0..=hi {
            take[d] = x as u32;
            go(d + 1, left - x, state, take, out);
        }
        take[d] = 0;
    }
    if state.is_empty() {
        if a == 0 {
            out.push((Vec::new(), BigUint::one(), state.clone()));
        }
        return out;
    }
    go(1, a, state, &mut take, &mut out);
    out
}

/// `|G(k, α)|`, the number of 0/1 matrices with row sums `k` and column sums
/// `α`, by a column-by-column sweep over residual row-demand multisets.
pub fn exact_bipartite_count(seq: &DegreeSequence) -> Result<BigUint> {
    if seq.row_total() != seq.col_total() {
        return Ok(BigUint::zero());
    }
    check_guard(seq)?;
    let mut layer: HashMap<State, BigUint> = HashMap::new();
    layer.insert(initial_state(&seq.rows), BigUint::one());
    for &a in &seq.cols {
        let mut next: HashMap<State, BigUint> = HashMap::new();
        for (state, count) in &layer {
            for (_, ways, succ) in column_moves(state, a) {
                *next.entry(succ).or_insert_with(BigUint::zero) += count * &ways;
            }
        }
        layer = next;
        if layer.is_empty() {
            return Ok(BigUint::zero());
        }
    }
    let done: State = {
        let mut s = vec![0u32; seq.rows.iter().copied().max().unwrap_or(0) + 1];
        s[0] = seq.rows.len() as u32;
        s
    };
    Ok(layer.remove(&done).unwrap_or_else(BigUint::zero))
}

/// Completion counts for one degree sequence, ready for exact uniform
/// sampling of its bipartite graphs.
#[derive(Debug, Clone)]
pub struct BipartiteCounter {
    seq: DegreeSequence,
    /// `completions[c][state]`: ways to finish columns `c..` from `state`.
    completions: Vec<HashMap<State, BigUint>>,
    total: BigUint,
}

impl BipartiteCounter {
    pub fn new(seq: DegreeSequence) -> Result<Self> {
        check_guard(&seq)?;
        let m = seq.cols.len();
        let mut completions: Vec<HashMap<State, BigUint>> = vec![HashMap::new(); m + 1];
        let start = initial_state(&seq.rows);
        let total = if seq.row_total() == seq.col_total() {
            Self::fill(&seq, 0, &start, &mut completions)
        } else {
            BigUint::zero()
        };
        Ok(BipartiteCounter {
            seq,
            completions,
            total,
        })
    }

    fn fill(seq: &DegreeSequence, c: usize, state: &State, memo: &mut [HashMap<State, BigUint>]) -> BigUint {
        if let Some(v) = memo[c].get(state) {
            return v.clone();
        }
        let value = if c == seq.cols.len() {
            if state.iter().skip(1).all(|&x| x == 0) {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        } else {
            let mut acc = BigUint::zero();
            for (_, ways, succ) in column_moves(state, seq.cols[c]) {
                let rest = Self::fill(seq, c + 1, &succ, memo);
                if !rest.is_zero() {
                    acc += ways * rest;
                }
            }
            acc
        };
        memo[c].insert(state.clone(), value.clone());
        value
    }

    pub fn sequence(&self) -> &DegreeSequence {
        &self.seq
    }

    pub fn count(&self) -> &BigUint {
        &self.total
    }

    /// A uniformly random graph as the sorted column list of each row.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Vec<usize>>> {
        if self.total.is_zero() {
            return Err(Error::Infeasible(format!(
                "no bipartite graph has row degrees {:?} and column degrees {:?}",
                self.seq.rows, self.seq.cols
            )));
        }
        let n = self.seq.rows.len();
        let mut residual = self.seq.rows.clone();
        let mut state = initial_state(&self.seq.rows);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (c, &a) in self.seq.cols.iter().enumerate() {
            let here = &self.completions[c][&state];
            let mut u = rng.gen_biguint_below(here);
            let moves = column_moves(&state, a);
            let mut chosen = None;
            for (take, ways, succ) in moves {
                let rest = self.completions[c + 1].get(&succ).cloned().unwrap_or_else(BigUint::zero);
                let weight = ways * rest;
                if u < weight {
                    chosen = Some((take, succ));
                    break;
                }
                u -= weight;
            }
            let (take, succ) = chosen.expect("completion counts are consistent");
            for (d, &x) in take.iter().enumerate().skip(1) {
                if x == 0 {
                    continue;
                }
                let pool: Vec<usize> = (0..n).filter(|&i| residual[i] == d).collect();
                for idx in sample_indices(rng, pool.len(), x as usize) {
                    let i = pool[idx];
                    residual[i] -= 1;
                    adjacency[i].push(c);
                }
            }
            state = succ;
        }
        Ok(adjacency)
    }
}

/// One uniformly random bipartite graph with the given degrees, as the
/// column list of each row.
pub fn sample_bipartite_uniform<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    BipartiteCounter::new(seq.clone())?.sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// McKay's estimate of the number of profiles per load profile.
    McKay,
    /// The exact count.
    Exact,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mckay" => Ok(WeightMode::McKay),
            "exact" => Ok(WeightMode::Exact),
            other => Err(Error::InvalidArgument(format!(
                "weight mode must be mckay or exact, got {other}"
            ))),
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::McKay => "mckay",
            WeightMode::Exact => "exact",
        })
    }
}

/// `ln(profile count estimate) - T Φ(α)` on resource load profiles of a
/// k-uniform game.
pub struct CapLogWeight<'g> {
    game: &'g CongestionGame,
    temperature: f64,
    mode: WeightMode,
    memo: Mutex<HashMap<Vec<usize>, f64>>,
}

impl<'g> CapLogWeight<'g> {
    pub fn new(game: &'g CongestionGame, temperature: f64, mode: WeightMode) -> Result<Self> {
        if game.k_uniform().is_none() {
            return Err(Error::Unsupported("this sampler needs a k-uniform game".into()));
        }
        Ok(CapLogWeight {
            game,
            temperature,
            mode,
            memo: Mutex::new(HashMap::new()),
        })
    }

    fn compute(&self, alpha: &[usize]) -> f64 {
        let lw = log_gibbs_weight(self.game.rosenthal_potential(alpha), self.temperature);
        if lw == f64::NEG_INFINITY {
            return lw;
        }
        let seq = DegreeSequence::new(self.game.k_uniform().unwrap_or(&[]).to_vec(), alpha.to_vec());
        let ln_count = match self.mode {
            WeightMode::McKay if seq.is_realizable() => mckay_estimate(&seq),
            WeightMode::McKay => f64::NEG_INFINITY,
            WeightMode::Exact => exact_bipartite_count(&seq).map_or(f64::NEG_INFINITY, |c| ln_biguint(&c)),
        };
        ln_count + lw
    }
}

impl LogWeight for CapLogWeight<'_> {
    fn log_weight(&self, alpha: &[usize]) -> f64 {
        if let Some(&v) = self.memo.lock().expect("weight memo poisoned").get(alpha) {
            return v;
        }
        let v = self.compute(alpha);
        self.memo
            .lock()
            .expect("weight memo poisoned")
            .insert(alpha.to_vec(), v);
        v
    }
}

/// `{α : 0 ≤ α ≤ min(u, n), |α| = K}` of a k-uniform game.
pub fn load_profile_set(game: &CongestionGame) -> Result<PolymatroidBaseSet> {
    let k = game
        .k_uniform()
        .ok_or_else(|| Error::Unsupported("this sampler needs a k-uniform game".into()))?;
    let n = game.players();
    let caps = game
        .resources()
        .iter()
        .map(|r| r.cost.capacity().map_or(n, |u| u.min(n)))
        .collect();
    PolymatroidBaseSet::new(caps, k.iter().sum())
}

/// Gibbs sampler for one capacitated k-uniform game; counting tables for the
/// second stage are built once per load profile and shared between draws.
pub struct CapGibbsSampler<'g> {
    game: &'g CongestionGame,
    mode: WeightMode,
    chain: BaseExchangeSampler<CachedWeight<CapLogWeight<'g>>>,
    counters: Mutex<HashMap<Vec<usize>, Arc<BipartiteCounter>>>,
}

impl<'g> CapGibbsSampler<'g> {
    pub fn new(
        game: &'g CongestionGame,
        temperature: f64,
        eps: f64,
        mix_constant: f64,
        mode: WeightMode,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be finite and non-negative, got {temperature}"
            )));
        }
        let set = load_profile_set(game)?;
        let spec = set.polarize(game.players())?;
        let weight = CachedWeight::new(&set, CapLogWeight::new(game, temperature, mode)?);
        let chain = BaseExchangeSampler::new(spec, weight, step_budget(set.rank, eps, mix_constant))?;
        Ok(CapGibbsSampler {
            game,
            mode,
            chain,
            counters: Mutex::new(HashMap::new()),
        })
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn steps(&self) -> u64 {
        self.chain.steps()
    }

    pub fn sample_load_profile<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LoadProfile> {
        Ok(LoadProfile {
            kind: LoadKind::Resource,
            counts: self.chain.sample(rng)?,
        })
    }

    fn counter(&self, alpha: &[usize]) -> Result<Arc<BipartiteCounter>> {
        if let Some(c) = self.counters.lock().expect("counter cache poisoned").get(alpha) {
            return Ok(Arc::clone(c));
        }
        let k = self.game.k_uniform().unwrap_or(&[]).to_vec();
        let counter = Arc::new(BipartiteCounter::new(DegreeSequence::new(k, alpha.to_vec()))?);
        self.counters
            .lock()
            .expect("counter cache poisoned")
            .insert(alpha.to_vec(), Arc::clone(&counter));
        Ok(counter)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StrategyProfile> {
        let alpha = self.sample_load_profile(rng)?;
        let graph = self.counter(&alpha.counts)?.sample(rng)?;
        let choices = graph
            .iter()
            .enumerate()
            .map(|(i, cols)| {
                self.game
                    .strategy_index(i, cols)
                    .expect("row degrees match the players' k")
            })
            .collect();
        Ok(StrategyProfile::new(choices))
    }

    pub fn sample_many(&self, count: usize, seed: u64) -> Result<Vec<StrategyProfile>> {
        (0..count as u64)
            .into_par_iter()
            .map(|c| self.sample(&mut chain_rng(seed, c)))
            .collect()
    }
}

pub fn sample_load_profile_cap<R: Rng + ?Sized>(
    game: &CongestionGame,
    temperature: f64,
    eps: f64,
    mix_constant: f64,
    mode: WeightMode,
    rng: &mut R,
) -> Result<LoadProfile> {
    CapGibbsSampler::new(game, temperature, eps, mix_constant, mode)?.sample_load_profile(rng)
}

pub fn sample_gibbs_cap<R: Rng + ?Sized>(
    game: &CongestionGame,
    temperature: f64,
    eps: f64,
    mix_constant: f64,
    mode: WeightMode,
    rng: &mut R,
) -> Result<StrategyProfile> {
    CapGibbsSampler::new(game, temperature, eps, mix_constant, mode)?.sample(rng)
}
