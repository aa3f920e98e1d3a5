//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use congestion_gibbs::cap_uniform::{
    exact_bipartite_count, load_profile_set, mckay_estimate, CapGibbsSampler, CapLogWeight, DegreeSequence,
    WeightMode,
};
use congestion_gibbs::cli;
use congestion_gibbs::game::{CongestionGame, StrategyProfile};
use congestion_gibbs::gibbs_ep::{EpGibbsSampler, EpLogWeight, PneSampler};
use congestion_gibbs::matroid::{PolymatroidBaseSet, DEFAULT_MIX_CONSTANT};
use congestion_gibbs::numeric::ln_biguint;
use congestion_gibbs::verify::{
    base_exchange_kernel, check_potential_m_convex, compose_cap, compose_ep, empirical_distribution,
    exact_cap_load_distribution, exact_ep_load_distribution, exact_gibbs, logit_kernel, max_potential,
    pne_separation, relaxed_logit_kernel, relaxed_mixing_budget, tv_distance, two_gadget_series_game,
    uniform_over_nash, worst_case_mixing_time, KernelMatrix,
};
use congestion_gibbs::Error;
use rand::Rng;

use common::*;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

type Check = fn() -> Result<Outcome, Error>;

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 10] = [
        ("two-link example probabilities", Duration::from_secs(1), example_one_probabilities),
        ("slow logit, fast relaxed logit", Duration::from_secs(30), slow_fast_separation),
        ("EP two-stage sampler", Duration::from_secs(300), ep_pipeline),
        ("exchange property of the potential", Duration::from_secs(60), exchange_property),
        ("uniform equilibrium sampler", Duration::from_secs(600), pne_sampler),
        ("stage composition identities", Duration::from_secs(60), stage_composition),
        ("bipartite count estimate envelope", Duration::from_secs(120), count_envelope),
        ("capacitated k-uniform sampler", Duration::from_secs(600), cap_sampler),
        ("kernel hygiene", Duration::from_secs(60), kernel_hygiene),
        ("CLI determinism", Duration::from_secs(600), cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        let timing = if in_time {
            format!("{:.2}s", elapsed.as_secs_f64())
        } else {
            format!("{:.2}s exceeds {}s", elapsed.as_secs_f64(), limit.as_secs())
        };
        println!(
            "criterion {:>2} {}: {} ({}; {timing})",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn profile(choices: &[usize]) -> StrategyProfile {
    StrategyProfile::new(choices.to_vec())
}

fn example_one_probabilities() -> Result<Outcome, Error> {
    let pi = exact_gibbs(&example_one(6), 1.0)?;
    let half_tail = 0.5 * (-6f64).exp();
    let off = [[0, 1], [1, 0]].map(|s| (pi.prob(&profile(&s)) - 0.5).abs());
    let on = [[0, 0], [1, 1]].map(|s| (pi.prob(&profile(&s)) - half_tail).abs());
    let worst_off = off.iter().cloned().fold(0.0, f64::max);
    let worst_on = on.iter().cloned().fold(0.0, f64::max);
    Ok(Outcome::new(
        worst_off <= 1e-3 && worst_on <= 1e-4,
        format!("|p(a,b) - 1/2| = {worst_off:.3e} vs 1e-3, |p(a,a) - e^-6/2| = {worst_on:.3e} vs 1e-4"),
    ))
}

fn slow_fast_separation() -> Result<Outcome, Error> {
    let eps = 0.01;
    let game = example_one(12);
    let slow = worst_case_mixing_time(&logit_kernel(&game, 1.0)?, eps)?;
    let fast = worst_case_mixing_time(&relaxed_logit_kernel(&game, 1.0)?, eps)?;
    let floor = 12f64.exp() / 100.0;
    let budget = relaxed_mixing_budget(2, 2, 1.0, max_potential(&game)?, eps);
    Ok(Outcome::new(
        slow as f64 >= floor && fast as f64 <= budget,
        format!("logit {slow} >= {floor:.1}, relaxed {fast} <= {budget:.1}"),
    ))
}

fn random_temperature<R: Rng>(rng: &mut R) -> f64 {
    [0.25, 0.5, 1.0][rng.gen_range(0..3)]
}

fn ep_pipeline() -> Result<Outcome, Error> {
    let games = random_ep_games(0xe9, 20);
    let mut temps = rng(0x7e);
    let mut worst: f64 = 0.0;
    for (g, game) in games.iter().enumerate() {
        let t = random_temperature(&mut temps);
        let sampler = EpGibbsSampler::new(game, t, 0.01, DEFAULT_MIX_CONSTANT)?;
        let samples = sampler.sample_many(200_000, 1000 + g as u64)?;
        worst = worst.max(tv_distance(&empirical_distribution(samples)?, &exact_gibbs(game, t)?));
    }
    Ok(Outcome::new(worst <= 0.03, format!("max TV {worst:.4} over {} games", games.len())))
}

fn exchange_property() -> Result<Outcome, Error> {
    let mut games = random_ep_games(0xe9, 20);
    games.extend(pne_games());
    games.push(example_one(6));
    let mut broken = 0;
    for game in &games {
        if check_potential_m_convex(game)?.is_some() {
            broken += 1;
        }
    }
    let witness = check_potential_m_convex(&two_gadget_series_game(&[0, 1])?)?;
    let detail = match &witness {
        Some(w) => format!(
            "{broken} of {} EP games violate; series witness alpha {:?} beta {:?} i {}",
            games.len(),
            w.alpha,
            w.beta,
            w.i
        ),
        None => format!("{broken} of {} EP games violate; no series witness", games.len()),
    };
    Ok(Outcome::new(broken == 0 && witness.is_some(), detail))
}

/// Random integer-cost EP games with between 2 and 24 equilibria.
fn pne_games() -> Vec<CongestionGame> {
    let mut r = rng(0x9e);
    let mut out = Vec::new();
    while out.len() < 20 {
        let n = r.gen_range(2..=4);
        let q = r.gen_range(2..=4);
        let game = random_ep_game(&mut r, n, q, 8);
        let count = uniform_over_nash(&game).map(|d| d.len()).unwrap_or(0);
        if (2..=24).contains(&count) {
            out.push(game);
        }
    }
    out
}

fn pne_sampler() -> Result<Outcome, Error> {
    let eps = 0.05;
    let mut worst: f64 = 0.0;
    let mut separated = 0;
    let games = pne_games();
    for (g, game) in games.iter().enumerate() {
        let sampler = PneSampler::new(game, eps, DEFAULT_MIX_CONSTANT)?;
        let draws = sampler.sample_many(100_000, 2000 + g as u64)?;
        let empirical = empirical_distribution(draws.into_iter().map(|(s, _)| s))?;
        worst = worst.max(tv_distance(&empirical, &uniform_over_nash(game)?));
        let (rest, bound) = pne_separation(game, eps)?;
        if rest <= bound {
            separated += 1;
        }
    }
    Ok(Outcome::new(
        worst <= eps + 0.02 && separated == games.len(),
        format!(
            "max TV {worst:.4} vs {:.2}; separation holds on {separated} of {}",
            eps + 0.02,
            games.len()
        ),
    ))
}

fn stage_composition() -> Result<Outcome, Error> {
    let mut temps = rng(0x7e);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for game in random_ep_games(0xe9, 20).iter().chain(pne_games().iter()) {
        let t = random_temperature(&mut temps);
        let composed = compose_ep(game, &exact_ep_load_distribution(game, t)?)?;
        worst = worst.max(tv_distance(&composed, &exact_gibbs(game, t)?));
        checked += 1;
    }
    for game in &small_cap_games() {
        let composed = compose_cap(game, &exact_cap_load_distribution(game, 0.5, WeightMode::Exact)?)?;
        worst = worst.max(tv_distance(&composed, &exact_gibbs(game, 0.5)?));
        checked += 1;
    }
    Ok(Outcome::new(worst <= 1e-10, format!("max TV {worst:.2e} over {checked} instances")))
}

fn repeat(value: usize, times: usize) -> Vec<usize> {
    vec![value; times]
}

fn joined(parts: &[(usize, usize)]) -> Vec<usize> {
    parts.iter().flat_map(|&(v, t)| repeat(v, t)).collect()
}

fn count_envelope() -> Result<Outcome, Error> {
    let sequences: Vec<(Vec<usize>, Vec<usize>)> = vec![
        (repeat(1, 16), repeat(2, 8)),
        (repeat(2, 8), repeat(1, 16)),
        (repeat(1, 81), repeat(3, 27)),
        (repeat(3, 27), repeat(1, 81)),
        (repeat(2, 128), repeat(2, 128)),
        (joined(&[(2, 64), (1, 128)]), joined(&[(2, 64), (1, 128)])),
        (joined(&[(2, 100), (1, 56)]), repeat(2, 128)),
        (joined(&[(2, 150), (1, 100)]), repeat(2, 200)),
        (joined(&[(2, 200), (1, 225)]), joined(&[(2, 300), (1, 25)])),
        (joined(&[(2, 312), (1, 1)]), joined(&[(2, 312), (1, 1)])),
    ];
    let mut ratios = Vec::new();
    for (k, alpha) in sequences {
        let total: usize = k.iter().sum();
        let kmax = *k.iter().max().unwrap() as f64;
        let umax = *alpha.iter().max().unwrap() as f64;
        assert!(total >= 16 && kmax * umax <= (total as f64).powf(0.25) + 1e-12);
        let seq = DegreeSequence::new(k, alpha);
        let exact = exact_bipartite_count(&seq)?;
        ratios.push((mckay_estimate(&seq) - ln_biguint(&exact)).exp());
    }
    let unit = DegreeSequence::new(vec![1, 1], vec![1, 1]);
    let unit_ratio = (mckay_estimate(&unit) - ln_biguint(&exact_bipartite_count(&unit)?)).exp();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(Outcome::new(
        lo >= 0.5 && hi <= 1.5 && unit_ratio == 1.0,
        format!("ratios in [{lo:.4}, {hi:.4}] over {} sequences; unit ratio {unit_ratio}", ratios.len()),
    ))
}

fn cap_sampler() -> Result<Outcome, Error> {
    let t = 0.5;
    let mut worst_exact: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let games = small_cap_games();
    for (g, game) in games.iter().enumerate() {
        let pi = exact_gibbs(game, t)?;
        let exact = CapGibbsSampler::new(game, t, 0.01, DEFAULT_MIX_CONSTANT, WeightMode::Exact)?
            .sample_many(200_000, 3000 + g as u64)?;
        let approx = CapGibbsSampler::new(game, t, 0.01, DEFAULT_MIX_CONSTANT, WeightMode::McKay)?
            .sample_many(200_000, 4000 + g as u64)?;
        let exact = empirical_distribution(exact)?;
        worst_exact = worst_exact.max(tv_distance(&exact, &pi));
        worst_gap = worst_gap.max(tv_distance(&empirical_distribution(approx)?, &exact));
    }
    Ok(Outcome::new(
        worst_exact <= 0.03 && worst_gap <= 0.1,
        format!(
            "exact-mode max TV {worst_exact:.4} vs 0.03, estimate-mode gap {worst_gap:.4} vs 0.1 over {} games",
            games.len()
        ),
    ))
}

fn residual<S: Clone + Eq + std::hash::Hash>(k: &KernelMatrix<S>) -> f64 {
    k.stochasticity_residual()
        .max(k.reversibility_residual())
        .max(k.stationarity_residual())
}

fn kernel_hygiene() -> Result<Outcome, Error> {
    let mut worst: f64 = 0.0;
    let mut kernels = 0;
    let mut skipped = 0;
    let mut keep = |r: Result<f64, Error>| -> Result<(), Error> {
        match r {
            Ok(v) => {
                worst = worst.max(v);
                kernels += 1;
                Ok(())
            }
            Err(Error::GuardExceeded(_)) => {
                skipped += 1;
                Ok(())
            }
            Err(e) => Err(e),
        }
    };
    let mut games = random_ep_games(0xe9, 20);
    games.push(example_one(6));
    games.push(two_gadget_series_game(&[0, 1])?);
    games.extend(small_cap_games());
    for game in &games {
        keep(logit_kernel(game, 0.5).map(|k| residual(&k)))?;
        if game.is_symmetric() {
            keep(relaxed_logit_kernel(game, 0.5).map(|k| residual(&k)))?;
        }
        if let Some(paths) = game.paths() {
            let n = game.players();
            let spec = PolymatroidBaseSet::new(vec![n; paths.len()], n)?.polarize(n)?;
            keep(base_exchange_kernel(&spec, &EpLogWeight::new(game, 0.5)).map(|k| residual(&k)))?;
        } else if game.k_uniform().is_some() {
            let spec = load_profile_set(game)?.polarize(game.players())?;
            for mode in [WeightMode::Exact, WeightMode::McKay] {
                let w = CapLogWeight::new(game, 0.5, mode)?;
                keep(base_exchange_kernel(&spec, &w).map(|k| residual(&k)))?;
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-10 && kernels > 0,
        format!("largest residual {worst:.2e} over {kernels} kernels; {skipped} over the size limit"),
    ))
}

fn run_cli(args: &[String]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("congestion-gibbs".to_string()).chain(args.iter().cloned());
    let code = cli::run(argv, &mut out, &mut err);
    out.extend_from_slice(&err);
    (code, out)
}

fn cli_determinism() -> Result<Outcome, Error> {
    let dir = games_dir();
    let game = |name: &str| dir.join(name).display().to_string();
    let commands: Vec<Vec<String>> = [
        vec!["sample-gibbs", "--game", &game("ex1.game"), "--T", "1", "--eps", "0.01", "--n", "1000", "--seed", "7"],
        vec!["sample-gibbs", "--game", &game("kuniform.game"), "--n", "300", "--mode", "exact"],
        vec!["sample-gibbs", "--game", &game("kuniform.game"), "--n", "300", "--mode", "mckay"],
        vec!["sample-pne", "--game", &game("ex1.game"), "--n", "300", "--seed", "3"],
        vec!["run-dynamics", "--game", &game("series.game"), "--steps", "200", "--thinning", "20", "--n", "8"],
        vec!["run-dynamics", "--game", &game("ex1.game"), "--dynamics", "logit", "--steps", "50", "--n", "8"],
        vec!["verify", "--game", &game("ex1.game")],
        vec!["verify", "--game", &game("series.game")],
        vec!["mixing", "--game", &game("ex1.game"), "--T", "2"],
        vec!["count-bipartite", "--k", "2,2,1", "--alpha", "1,1,1,1,1"],
        vec!["mckay", "--k", "2,2,1", "--alpha", "1,1,1,1,1"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let mut differing = Vec::new();
    for cmd in &commands {
        let first = run_cli(cmd);
        let mut threaded = cmd.clone();
        threaded.extend(["--threads".to_string(), "1".to_string()]);
        let again = run_cli(cmd);
        let single = run_cli(&threaded);
        if first != again || first != single || first.0 == cli::EXIT_INPUT {
            differing.push(cmd[0].clone());
        }
    }
    Ok(Outcome::new(
        differing.is_empty(),
        format!("{} commands rerun byte-identically; differing: {differing:?}", commands.len() - differing.len()),
    ))
}
