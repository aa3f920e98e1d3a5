use std::collections::HashMap;
use std::hash::Hash;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dynamics::log_gibbs_weight;
use crate::error::{Error, Result};
use crate::game::{CongestionGame, StrategyProfile};
use crate::matroid::{base_exchange_transitions, enumerate_bases, polarized_log_weight, LogWeight, MatroidSpec, PolarizedBase};
use crate::numeric::{normalize_log, NeumaierSum};

/// Largest state space a dense kernel is built for.
pub const KERNEL_LIMIT: usize = 2000;

/// Steps past which [`exact_mixing_time`] gives up.
pub const MIXING_HORIZON: u64 = 1 << 30;

/// Dense transition matrix over an enumerated state space, with the
/// distribution it is meant to leave invariant.
#[derive(Debug, Clone)]
pub struct KernelMatrix<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    matrix: DMatrix<f64>,
    stationary: DVector<f64>,
}

impl<S: Clone + Eq + Hash> KernelMatrix<S> {
    fn assemble(states: Vec<S>, stationary_log: Vec<f64>, mut row: impl FnMut(&S) -> Result<Vec<(S, f64)>>) -> Result<Self> {
        let size = states.len();
        if size > KERNEL_LIMIT {
            return Err(Error::GuardExceeded(format!(
                "{size} states exceed the kernel limit {KERNEL_LIMIT}"
            )));
        }
        let index: HashMap<S, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut matrix = DMatrix::zeros(size, size);
        for (x, s) in states.iter().enumerate() {
            for (t, p) in row(s)? {
                let y = *index.get(&t).ok_or_else(|| {
                    Error::InvalidArgument("a transition leaves the enumerated state space".into())
                })?;
                matrix[(x, y)] += p;
            }
        }
        let stationary = DVector::from_iterator(size, normalize_log(&stationary_log).into_iter().map(f64::exp));
        Ok(KernelMatrix {
            states,
            index,
            matrix,
            stationary,
        })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn stationary(&self) -> &DVector<f64> {
        &self.stationary
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `max_x |Σ_y P(x,y) - 1|` with compensated row sums.
    pub fn stochasticity_residual(&self) -> f64 {
        (0..self.len())
            .map(|x| {
                let s: NeumaierSum = self.matrix.row(x).iter().copied().collect();
                (s.value() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max_{x,y} |π(x) P(x,y) - π(y) P(y,x)|`.
    pub fn reversibility_residual(&self) -> f64 {
        let pi = &self.stationary;
        let mut worst: f64 = 0.0;
        for x in 0..self.len() {
            for y in (x + 1)..self.len() {
                worst = worst.max((pi[x] * self.matrix[(x, y)] - pi[y] * self.matrix[(y, x)]).abs());
            }
        }
        worst
    }

    /// `‖πP - π‖_1`.
    pub fn stationarity_residual(&self) -> f64 {
        let moved = self.matrix.tr_mul(&self.stationary);
        let acc: NeumaierSum = moved.iter().zip(self.stationary.iter()).map(|(a, b)| (a - b).abs()).collect();
        acc.value()
    }

    /// Eigenvalues of the kernel, largest first. The kernel must be
    /// reversible; it is symmetrized by `D^{1/2} P D^{-1/2}` with `D = diag(π)`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sqrt_pi: Vec<f64> = self.stationary.iter().map(|p| p.sqrt()).collect();
        let n = self.len();
        let sym = DMatrix::from_fn(n, n, |x, y| {
            if sqrt_pi[x] == 0.0 || sqrt_pi[y] == 0.0 {
                return 0.0;
            }
            // average the two triangles to wash out rounding asymmetry
            0.5 * (sqrt_pi[x] / sqrt_pi[y] * self.matrix[(x, y)] + sqrt_pi[y] / sqrt_pi[x] * self.matrix[(y, x)])
        });
        let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// `1 - λ_2`.
    pub fn spectral_gap(&self) -> f64 {
        let ev = self.eigenvalues();
        if ev.len() < 2 {
            return 1.0;
        }
        1.0 - ev[1]
    }

    /// Distribution after `t` steps from `start`, by repeated squaring.
    pub fn distribution_after(&self, start: usize, t: u64) -> DVector<f64> {
        let mut v = DVector::zeros(self.len());
        v[start] = 1.0;
        let mut power = self.matrix.clone();
        let mut t = t;
        while t > 0 {
            if t & 1 == 1 {
                v = power.tr_mul(&v);
            }
            t >>= 1;
            if t > 0 {
                power = &power * &power;
            }
        }
        v
    }

    fn tv_to_stationary(&self, v: &DVector<f64>) -> f64 {
        let acc: NeumaierSum = v.iter().zip(self.stationary.iter()).map(|(a, b)| (a - b).abs()).collect();
        0.5 * acc.value()
    }

    /// `TV(P^t(start, ·), π)`.
    pub fn tv_after(&self, start: usize, t: u64) -> f64 {
        self.tv_to_stationary(&self.distribution_after(start, t))
    }
}

/// Smallest `t` with `TV(P^t(start, ·), π) ≤ ε`. The distance from a point
/// mass is non-increasing in `t`, so the search doubles to a bracket, bisects
/// with the stored powers `P^{2^j}`, and confirms the distance is still below
/// `ε` at `2t`.
pub fn exact_mixing_time<S: Clone + Eq + Hash>(kernel: &KernelMatrix<S>, start: usize, eps: f64) -> Result<u64> {
    let n = kernel.len();
    let mut v0 = DVector::zeros(n);
    v0[start] = 1.0;
    if kernel.tv_to_stationary(&v0) <= eps {
        return Ok(0);
    }
    let mut powers = vec![kernel.matrix.clone()];
    loop {
        let k = powers.len() - 1;
        if kernel.tv_to_stationary(&powers[k].tr_mul(&v0)) <= eps {
            break;
        }
        if (1u64 << k) >= MIXING_HORIZON {
            return Err(Error::NoConvergence(MIXING_HORIZON));
        }
        let next = &powers[k] * &powers[k];
        powers.push(next);
    }
    let mut v = v0;
    let mut t = 0u64;
    for j in (0..powers.len() - 1).rev() {
        let w = powers[j].tr_mul(&v);
        if kernel.tv_to_stationary(&w) > eps {
            v = w;
            t += 1 << j;
        }
    }
    let mixed = t + 1;
    if kernel.tv_after(start, 2 * mixed) > eps {
        return Err(Error::NoConvergence(2 * mixed));
    }
    Ok(mixed)
}

/// `max_x τ_x(ε)` over every state in the support of `π`.
pub fn worst_case_mixing_time<S: Clone + Eq + Hash>(kernel: &KernelMatrix<S>, eps: f64) -> Result<u64> {
    let mut worst = 0;
    for x in 0..kernel.len() {
        if kernel.stationary[x] > 0.0 {
            worst = worst.max(exact_mixing_time(kernel, x, eps)?);
        }
    }
    Ok(worst)
}

fn feasible_profiles(game: &CongestionGame) -> Result<Vec<StrategyProfile>> {
    Ok(game
        .all_profiles(KERNEL_LIMIT * 64)?
        .into_iter()
        .filter(|s| game.potential(s).is_finite())
        .collect())
}

fn logit_row(game: &CongestionGame, s: &StrategyProfile, temperature: f64, scale: f64) -> Vec<(StrategyProfile, f64)> {
    let n = game.players() as f64;
    let mut out = Vec::new();
    for i in 0..game.players() {
        let logs: Vec<f64> = game
            .deviation_potentials(s, i)
            .into_iter()
            .map(|phi| log_gibbs_weight(phi, temperature))
            .collect();
        for (t, lp) in normalize_log(&logs).into_iter().enumerate() {
            if lp > f64::NEG_INFINITY {
                out.push((s.with_choice(i, t), scale * lp.exp() / n));
            }
        }
    }
    out
}

fn gibbs_logs(game: &CongestionGame, profiles: &[StrategyProfile], temperature: f64) -> Vec<f64> {
    profiles
        .iter()
        .map(|s| log_gibbs_weight(game.potential(s), temperature))
        .collect()
}

/// Exact kernel of logit dynamics on the feasible profiles.
pub fn logit_kernel(game: &CongestionGame, temperature: f64) -> Result<KernelMatrix<StrategyProfile>> {
    let profiles = feasible_profiles(game)?;
    let logs = gibbs_logs(game, &profiles, temperature);
    KernelMatrix::assemble(profiles, logs, |s| Ok(logit_row(game, s, temperature, 1.0)))
}

/// Exact kernel of relaxed logit dynamics: half swap of an ordered pair drawn
/// with replacement, half logit step.
pub fn relaxed_logit_kernel(game: &CongestionGame, temperature: f64) -> Result<KernelMatrix<StrategyProfile>> {
    if !game.is_symmetric() {
        return Err(Error::Unsupported("relaxed logit dynamics need a symmetric game".into()));
    }
    let profiles = feasible_profiles(game)?;
    let logs = gibbs_logs(game, &profiles, temperature);
    let n = game.players();
    let pair = 0.5 / (n * n) as f64;
    KernelMatrix::assemble(profiles, logs, |s| {
        let mut row = logit_row(game, s, temperature, 0.5);
        for i in 0..n {
            for j in 0..n {
                let mut t = s.clone();
                t.swap(i, j);
                row.push((t, pair));
            }
        }
        Ok(row)
    })
}

/// Exact kernel of the base-exchange walk on the finite-weight bases of the
/// polarized matroid, with stationary weights `w_Π`.
pub fn base_exchange_kernel<W: LogWeight + ?Sized>(spec: &MatroidSpec, weight: &W) -> Result<KernelMatrix<PolarizedBase>> {
    let bases: Vec<PolarizedBase> = enumerate_bases(spec, KERNEL_LIMIT * 64)?
        .into_iter()
        .filter(|b| polarized_log_weight(spec, weight, b) > f64::NEG_INFINITY)
        .collect();
    let logs = bases.iter().map(|b| polarized_log_weight(spec, weight, b)).collect();
    KernelMatrix::assemble(bases, logs, |b| Ok(base_exchange_transitions(spec, weight, b)))
}
