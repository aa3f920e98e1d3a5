use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Composition tree of an extension-parallel network. Leaves carry resource
/// ids (indices into the game's resource list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpNetwork {
    Arc(usize),
    Parallel(Box<EpNetwork>, Box<EpNetwork>),
    /// A single arc in series with a sub-network.
    Series(usize, Box<EpNetwork>),
}

impl EpNetwork {
    pub fn arc(id: usize) -> Self {
        EpNetwork::Arc(id)
    }

    pub fn parallel(left: EpNetwork, right: EpNetwork) -> Self {
        EpNetwork::Parallel(Box::new(left), Box::new(right))
    }

    pub fn series(arc: usize, rest: EpNetwork) -> Self {
        EpNetwork::Series(arc, Box::new(rest))
    }

    /// All arc ids, in depth-first order.
    pub fn arcs(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_arcs(&mut out);
        out
    }

    fn collect_arcs(&self, out: &mut Vec<usize>) {
        match self {
            EpNetwork::Arc(a) => out.push(*a),
            EpNetwork::Parallel(l, r) => {
                l.collect_arcs(out);
                r.collect_arcs(out);
            }
            EpNetwork::Series(a, rest) => {
                out.push(*a);
                rest.collect_arcs(out);
            }
        }
    }

    /// Checks that the arcs are exactly the resources `0..m`, each used once.
    pub fn validate(&self, m: usize) -> Result<()> {
        let arcs = self.arcs();
        let distinct: BTreeSet<usize> = arcs.iter().copied().collect();
        if distinct.len() != arcs.len() {
            return Err(Error::InvalidGame(
                "an arc appears more than once in the network".into(),
            ));
        }
        if let Some(bad) = arcs.iter().find(|a| **a >= m) {
            return Err(Error::InvalidGame(format!("unknown resource id {bad}")));
        }
        if arcs.len() != m {
            return Err(Error::InvalidGame(format!(
                "network uses {} arcs but the game declares {m} resources",
                arcs.len()
            )));
        }
        Ok(())
    }
}

/// All o,d-paths of the network as sorted resource sets, in depth-first,
/// left-before-right order.
pub fn enumerate_paths(net: &EpNetwork) -> Vec<Vec<usize>> {
    match net {
        EpNetwork::Arc(a) => vec![vec![*a]],
        EpNetwork::Parallel(l, r) => {
            let mut paths = enumerate_paths(l);
            paths.extend(enumerate_paths(r));
            paths
        }
        EpNetwork::Series(a, rest) => enumerate_paths(rest)
            .into_iter()
            .map(|mut p| {
                p.push(*a);
                p.sort_unstable();
                p
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        assert_eq!(enumerate_paths(&EpNetwork::arc(0)), vec![vec![0]]);
    }

    #[test]
    fn two_links() {
        let net = EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(1));
        assert_eq!(enumerate_paths(&net), vec![vec![0], vec![1]]);
    }

    #[test]
    fn figure_one_network_has_four_paths() {
        // (two parallel arcs, then an arc) in parallel with (an arc, then two
        // parallel arcs)
        let net = EpNetwork::parallel(
            EpNetwork::series(2, EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(1))),
            EpNetwork::series(3, EpNetwork::parallel(EpNetwork::arc(4), EpNetwork::arc(5))),
        );
        net.validate(6).unwrap();
        let paths = enumerate_paths(&net);
        assert_eq!(paths.len(), 4);
        assert_eq!(paths, vec![vec![0, 2], vec![1, 2], vec![3, 4], vec![3, 5]]);
        assert!(paths.len() <= net.arcs().len());
    }

    #[test]
    fn validate_rejects_duplicates_and_gaps() {
        let dup = EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(0));
        assert!(dup.validate(1).is_err());
        let gap = EpNetwork::parallel(EpNetwork::arc(0), EpNetwork::arc(2));
        assert!(gap.validate(3).is_err());
    }
}
