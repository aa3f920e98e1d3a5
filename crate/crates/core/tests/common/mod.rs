// Not every test target uses every helper.
#![allow(dead_code)]

use std::path::PathBuf;

use congestion_gibbs::game::{CongestionGame, CostFunction, EpNetwork, Resource, Structure};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two players on two parallel links; a shared link costs `phi` each.
pub fn example_one(phi: i64) -> CongestionGame {
    let cost = CostFunction::from_integers(&[0, phi], None).unwrap();
    CongestionGame::new(
        2,
        vec![Resource::new("a", cost.clone()), Resource::new("b", cost)],
        Structure::Ep(EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(1))),
    )
    .unwrap()
}

/// Non-decreasing integer costs in `0..=max` for loads `1..=players`.
pub fn random_costs<R: Rng>(rng: &mut R, players: usize, max: i64) -> Vec<i64> {
    let mut c: Vec<i64> = (0..players).map(|_| rng.gen_range(0..=max)).collect();
    c.sort_unstable();
    c
}

/// A random extension-parallel network with exactly `paths` source-sink
/// paths, grown by parallel composition and series extension.
pub fn random_network<R: Rng>(rng: &mut R, paths: usize) -> (EpNetwork, usize) {
    let mut arcs = 1;
    let mut net = EpNetwork::arc(0);
    let mut count = 1;
    while count < paths {
        let fresh = arcs;
        net = match rng.gen_range(0..4) {
            0 => {
                arcs += 1;
                EpNetwork::parallel(net, EpNetwork::arc(fresh))
            }
            1 => {
                arcs += 1;
                EpNetwork::parallel(EpNetwork::arc(fresh), net)
            }
            2 => {
                arcs += 1;
                EpNetwork::series(fresh, net)
            }
            _ => {
                arcs += 2;
                EpNetwork::parallel(net, EpNetwork::series(fresh, EpNetwork::arc(fresh + 1)))
            }
        };
        count = congestion_gibbs::game::enumerate_paths(&net).len();
    }
    if rng.gen_bool(0.3) {
        net = EpNetwork::series(arcs, net);
        arcs += 1;
    }
    (net, arcs)
}

pub fn random_ep_game<R: Rng>(rng: &mut R, players: usize, paths: usize, max_cost: i64) -> CongestionGame {
    let (net, arcs) = random_network(rng, paths);
    let resources = (0..arcs)
        .map(|e| {
            let c = CostFunction::from_integers(&random_costs(rng, players, max_cost), None).unwrap();
            Resource::new(format!("e{e}"), c)
        })
        .collect();
    CongestionGame::new(players, resources, Structure::Ep(net)).unwrap()
}

/// `count` random EP games with at most four players, at most four paths
/// and integer costs up to 8.
pub fn random_ep_games(seed: u64, count: usize) -> Vec<CongestionGame> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(2..=4);
            let q = r.gen_range(2..=4);
            random_ep_game(&mut r, n, q, 8)
        })
        .collect()
}

/// A capacitated k-uniform game.
pub fn kuniform_game(k: &[usize], caps: &[usize], costs: &[Vec<i64>]) -> CongestionGame {
    let resources = caps
        .iter()
        .zip(costs)
        .enumerate()
        .map(|(e, (&u, c))| Resource::new(format!("r{e}"), CostFunction::from_integers(c, Some(u)).unwrap()))
        .collect();
    CongestionGame::new(k.len(), resources, Structure::KUniform(k.to_vec())).unwrap()
}

/// Small capacitated instances: at most four players, four resources and
/// capacity three.
pub fn small_cap_games() -> Vec<CongestionGame> {
    let mut r = rng(0xca9);
    let shapes: [(&[usize], &[usize]); 5] = [
        (&[2, 2, 1], &[2, 2, 1, 2]),
        (&[1, 1, 1, 1], &[1, 1, 1, 1]),
        (&[2, 1, 1, 1], &[2, 2, 3]),
        (&[2, 2], &[1, 2, 1, 2]),
        (&[3, 2, 2, 1], &[3, 2, 2, 3]),
    ];
    shapes
        .iter()
        .map(|(k, caps)| {
            let costs: Vec<Vec<i64>> = caps.iter().map(|_| random_costs(&mut r, k.len(), 6)).collect();
            kuniform_game(k, caps, &costs)
        })
        .collect()
}

/// The bundled example game files.
pub fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games")
}
