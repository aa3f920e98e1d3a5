//! Exact oracles and brute-force checks used to validate the samplers.

pub mod exact;
pub mod kernel;
pub mod structure;

use std::fmt;

pub use exact::{
    compose_cap, compose_ep, empirical_distribution, exact_cap_load_distribution, exact_ep_load_distribution,
    exact_gibbs, tv_distance, uniform_over_nash, ExactDistribution, Histogram, ENUMERATION_LIMIT,
};
pub use kernel::{
    base_exchange_kernel, exact_mixing_time, logit_kernel, relaxed_logit_kernel, worst_case_mixing_time,
    KernelMatrix, KERNEL_LIMIT, MIXING_HORIZON,
};
pub use structure::{
    check_exact_potential, check_fibre_sizes, check_greedy_minimum, check_m_convex, check_m_convex_f64,
    check_nash_iff_minimum, check_potential_m_convex, check_resource_potential_m_convex, check_separable_convexity, find_series_counterexample,
    max_potential, pne_separation, relaxed_mixing_budget, strategy_load_domain, two_gadget_series_game,
    ExchangeWitness,
};

use crate::error::Result;
use crate::game::CongestionGame;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Finding {
    pub fn new(check: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Finding {
            check: check.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.check, self.detail)
    }
}

/// Runs every structural check that applies to `game`.
pub fn verify_game(game: &CongestionGame, temperature: f64, eps: f64) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    match check_exact_potential(game)? {
        None => out.push(Finding::new("exact-potential", true, "cost differences match potential differences")),
        Some((s, i, t)) => out.push(Finding::new(
            "exact-potential",
            false,
            format!("profile {s:?}, player {}, deviation to {t}", i + 1),
        )),
    }
    out.push(Finding::new(
        "separable-convexity",
        check_separable_convexity(game),
        "cumulative costs have non-negative second differences",
    ));
    if game.is_symmetric() {
        out.push(Finding::new(
            "fibre-sizes",
            check_fibre_sizes(game)?,
            "each strategy load class has n!/alpha! profiles",
        ));
        let witness = if game.k_uniform().is_some() {
            check_resource_potential_m_convex(game)?
        } else {
            check_potential_m_convex(game)?
        };
        match witness {
            None => out.push(Finding::new("m-convexity", true, "potential is M-convex on load profiles")),
            Some(w) => out.push(Finding::new(
                "m-convexity",
                false,
                format!("alpha {:?}, beta {:?}, coordinate {}", w.alpha, w.beta, w.i),
            )),
        }
    }
    if game.is_ep() {
        out.push(Finding::new(
            "greedy-minimum",
            check_greedy_minimum(game)?,
            "greedy insertion attains the minimum potential",
        ));
        out.push(Finding::new(
            "nash-iff-minimum",
            check_nash_iff_minimum(game)?,
            "equilibria are exactly the potential minimizers",
        ));
        if game.is_integer_valued() {
            let (rest, bound) = pne_separation(game, eps)?;
            out.push(Finding::new(
                "pne-separation",
                rest <= bound,
                format!("non-equilibrium mass {rest:.3e} vs bound {bound:.3e}"),
            ));
        }
    }
    if game.is_symmetric() && game.profile_count() <= KERNEL_LIMIT as u128 {
        let kernel = relaxed_logit_kernel(game, temperature)?;
        let residual = kernel
            .stochasticity_residual()
            .max(kernel.reversibility_residual())
            .max(kernel.stationarity_residual());
        out.push(Finding::new(
            "relaxed-logit-reversible",
            residual < 1e-10,
            format!("largest residual {residual:.2e}"),
        ));
    }
    Ok(out)
}
