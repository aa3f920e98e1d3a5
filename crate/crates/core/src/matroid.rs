//! Polarization of polymatroid base sets into matroids and the base-exchange
//! walk on the polarized bases.
//!
//! A vector `α` with `|α| = r` is lifted to the sets `B` of pairs
//! `(coordinate i, copy j)` with `α_i` copies of coordinate `i`. Spreading the
//! weight `w(α)` evenly over its `Π_i C(d_i, α_i)` lifts makes the projection
//! `α(B)` of a walk on bases distributed as `w`.

use num_bigint::BigUint;
use rand::Rng;

use crate::combin::bounded_compositions;
use crate::dynamics::suitable_sample;
use crate::error::{Error, Result};
use crate::numeric::{binomial, ln_binomial};

/// `Π_i C(d, α_i)`, the number of polarized sets projecting to `α`.
pub fn multichoose(d: usize, alpha: &[usize]) -> BigUint {
    alpha
        .iter()
        .fold(BigUint::from(1u32), |acc, &a| acc * binomial(d, a))
}

/// `ln Π_i C(sizes[i], α_i)`.
pub fn ln_multichoose(sizes: &[usize], alpha: &[usize]) -> f64 {
    sizes.iter().zip(alpha).map(|(&d, &a)| ln_binomial(d, a)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub size: usize,
    pub cap: usize,
}

/// A matroid on the ground set of pairs `(coordinate, copy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidSpec {
    /// Every set of at most `rank` pairs from a `coordinates × copies` grid.
    Uniform {
        rank: usize,
        coordinates: usize,
        copies: usize,
    },
    /// Coordinate `i` owns `blocks[i].size` copies of which at most
    /// `blocks[i].cap` may be chosen, truncated at `rank`.
    TruncatedPartition { blocks: Vec<Block>, rank: usize },
}

impl MatroidSpec {
    pub fn uniform(rank: usize, coordinates: usize, copies: usize) -> Result<Self> {
        if rank > coordinates * copies {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} exceeds the ground set size {}",
                coordinates * copies
            )));
        }
        Ok(MatroidSpec::Uniform {
            rank,
            coordinates,
            copies,
        })
    }

    pub fn truncated_partition(blocks: Vec<Block>, rank: usize) -> Result<Self> {
        let room: usize = blocks.iter().map(|b| b.size.min(b.cap)).sum();
        if rank > room {
            return Err(Error::InvalidArgument(format!(
                "truncation rank {rank} exceeds the partition rank {room}"
            )));
        }
        Ok(MatroidSpec::TruncatedPartition { blocks, rank })
    }

    pub fn rank(&self) -> usize {
        match self {
            MatroidSpec::Uniform { rank, .. } | MatroidSpec::TruncatedPartition { rank, .. } => *rank,
        }
    }

    pub fn coordinates(&self) -> usize {
        match self {
            MatroidSpec::Uniform { coordinates, .. } => *coordinates,
            MatroidSpec::TruncatedPartition { blocks, .. } => blocks.len(),
        }
    }

    /// Number of copies of coordinate `i`.
    pub fn block_size(&self, i: usize) -> usize {
        match self {
            MatroidSpec::Uniform { copies, .. } => *copies,
            MatroidSpec::TruncatedPartition { blocks, .. } => blocks[i].size,
        }
    }

    /// Largest number of copies of coordinate `i` an independent set holds.
    pub fn cap(&self, i: usize) -> usize {
        match self {
            MatroidSpec::Uniform { copies, rank, .. } => (*copies).min(*rank),
            MatroidSpec::TruncatedPartition { blocks, rank } => blocks[i].size.min(blocks[i].cap).min(*rank),
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        (0..self.coordinates()).map(|i| self.block_size(i)).collect()
    }

    pub fn ground_size(&self) -> usize {
        (0..self.coordinates()).map(|i| self.block_size(i)).sum()
    }

    pub fn is_independent(&self, set: &[(usize, usize)]) -> bool {
        let mut per = vec![0usize; self.coordinates()];
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for &(i, j) in &sorted {
            if i >= per.len() || j >= self.block_size(i) {
                return false;
            }
            per[i] += 1;
        }
        set.len() <= self.rank() && per.iter().enumerate().all(|(i, &c)| c <= self.cap(i))
    }

    pub fn is_base(&self, set: &[(usize, usize)]) -> bool {
        set.len() == self.rank() && self.is_independent(set)
    }

    /// The projected base set `{α(B)}`.
    pub fn projection(&self) -> PolymatroidBaseSet {
        PolymatroidBaseSet {
            caps: (0..self.coordinates()).map(|i| self.cap(i)).collect(),
            rank: self.rank(),
        }
    }
}

/// Integer vectors `α` with `|α| = rank` and `0 ≤ α ≤ caps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatroidBaseSet {
    pub caps: Vec<usize>,
    pub rank: usize,
}

impl PolymatroidBaseSet {
    pub fn new(caps: Vec<usize>, rank: usize) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::InvalidArgument("a base set needs a coordinate".into()));
        }
        let room = caps.iter().fold(0usize, |acc, &c| acc.saturating_add(c));
        if room < rank {
            return Err(Error::Infeasible(format!(
                "caps sum to {room}, below the rank {rank}"
            )));
        }
        Ok(PolymatroidBaseSet { caps, rank })
    }

    pub fn dimension(&self) -> usize {
        self.caps.len()
    }

    pub fn contains(&self, alpha: &[usize]) -> bool {
        alpha.len() == self.caps.len()
            && alpha.iter().sum::<usize>() == self.rank
            && alpha.iter().zip(&self.caps).all(|(a, c)| a <= c)
    }

    /// Every member, the greedy left-to-right fill first.
    pub fn members(&self) -> Vec<Vec<usize>> {
        bounded_compositions(self.rank, &self.caps)
    }

    /// Number of members, `None` past `limit`.
    pub fn count_members(&self, limit: usize) -> Option<usize> {
        // dp over coordinates of the number of partial sums
        let mut ways = vec![0usize; self.rank + 1];
        ways[0] = 1;
        for &c in &self.caps {
            let mut next = vec![0usize; self.rank + 1];
            for (s, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for a in 0..=c.min(self.rank - s) {
                    next[s + a] = next[s + a].checked_add(w)?;
                }
            }
            ways = next;
        }
        (ways[self.rank] <= limit).then_some(ways[self.rank])
    }

    /// The polarized matroid with `copies` copies per coordinate. The caps
    /// must not exceed `copies`.
    pub fn polarize(&self, copies: usize) -> Result<MatroidSpec> {
        if let Some(c) = self.caps.iter().find(|&&c| c.min(self.rank) > copies) {
            return Err(Error::InvalidArgument(format!(
                "cap {c} does not fit into {copies} copies"
            )));
        }
        if self.caps.iter().all(|&c| c >= copies.min(self.rank)) {
            MatroidSpec::uniform(self.rank, self.caps.len(), copies)
        } else {
            MatroidSpec::truncated_partition(
                self.caps
                    .iter()
                    .map(|&cap| Block { size: copies, cap })
                    .collect(),
                self.rank,
            )
        }
    }

    /// Brute-force check of the exchange axiom: for members `α, β` and `i`
    /// with `α_i > β_i` some `j` with `β_j > α_j` keeps `α - e_i + e_j` inside.
    pub fn check_exchange(&self) -> bool {
        let members = self.members();
        members.iter().all(|a| {
            members.iter().all(|b| {
                (0..a.len()).filter(|&i| a[i] > b[i]).all(|i| {
                    (0..a.len()).filter(|&j| b[j] > a[j]).any(|j| {
                        let mut c = a.clone();
                        c[i] -= 1;
                        c[j] += 1;
                        self.contains(&c)
                    })
                })
            })
        })
    }
}

/// `α ↦ ln w(α) ∈ R ∪ {-inf}`.
pub trait LogWeight {
    fn log_weight(&self, alpha: &[usize]) -> f64;
}

impl<F: Fn(&[usize]) -> f64> LogWeight for F {
    fn log_weight(&self, alpha: &[usize]) -> f64 {
        self(alpha)
    }
}

/// Dense table of log-weights over the box `0 ≤ α ≤ caps`, filled on the
/// members of a base set and `-inf` elsewhere.
#[derive(Debug, Clone)]
pub struct WeightTable {
    caps: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<f64>,
}

impl WeightTable {
    /// `None` when the box has more than `limit` cells.
    pub fn build<W: LogWeight + ?Sized>(set: &PolymatroidBaseSet, weight: &W, limit: usize) -> Option<Self> {
        let mut strides = Vec::with_capacity(set.caps.len());
        let mut size = 1usize;
        for &c in &set.caps {
            strides.push(size);
            size = size.checked_mul(c.min(set.rank) + 1)?;
            if size > limit {
                return None;
            }
        }
        let caps: Vec<usize> = set.caps.iter().map(|&c| c.min(set.rank)).collect();
        let mut table = WeightTable {
            caps,
            strides,
            values: vec![f64::NEG_INFINITY; size],
        };
        for alpha in set.members() {
            let idx = table.index(&alpha).expect("members lie in the box");
            table.values[idx] = weight.log_weight(&alpha);
        }
        Some(table)
    }

    fn index(&self, alpha: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for ((&a, &c), &s) in alpha.iter().zip(&self.caps).zip(&self.strides) {
            if a > c {
                return None;
            }
            idx += a * s;
        }
        Some(idx)
    }
}

impl LogWeight for WeightTable {
    fn log_weight(&self, alpha: &[usize]) -> f64 {
        self.index(alpha).map_or(f64::NEG_INFINITY, |i| self.values[i])
    }
}

/// A base of the polarized matroid together with its projection.
#[derive(Debug, Clone)]
pub struct PolarizedBase {
    offsets: Vec<usize>,
    occupied: Vec<bool>,
    elements: Vec<(usize, usize)>,
    projection: Vec<usize>,
}

impl PartialEq for PolarizedBase {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.occupied == other.occupied
    }
}

impl Eq for PolarizedBase {}

impl std::hash::Hash for PolarizedBase {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.offsets.hash(state);
        self.occupied.hash(state);
    }
}

impl PolarizedBase {
    fn empty(sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &d in sizes {
            acc += d;
            offsets.push(acc);
        }
        PolarizedBase {
            offsets,
            occupied: vec![false; acc],
            elements: Vec::new(),
            projection: vec![0; sizes.len()],
        }
    }

    /// The set holding copies `0..α_i` of each coordinate `i`.
    pub fn from_projection(spec: &MatroidSpec, alpha: &[usize]) -> Result<Self> {
        let sizes = spec.block_sizes();
        if alpha.len() != sizes.len() {
            return Err(Error::InvalidArgument("projection has the wrong dimension".into()));
        }
        let mut base = PolarizedBase::empty(&sizes);
        for (i, &a) in alpha.iter().enumerate() {
            for j in 0..a {
                if j >= sizes[i] {
                    return Err(Error::InvalidArgument(format!(
                        "coordinate {i} has only {} copies",
                        sizes[i]
                    )));
                }
                base.insert(i, j);
            }
        }
        if !spec.is_base(&base.elements) {
            return Err(Error::InvalidArgument(format!("{alpha:?} is not the projection of a base")));
        }
        Ok(base)
    }

    pub fn from_elements(spec: &MatroidSpec, elements: &[(usize, usize)]) -> Result<Self> {
        if !spec.is_base(elements) {
            return Err(Error::InvalidArgument("not a base".into()));
        }
        let mut base = PolarizedBase::empty(&spec.block_sizes());
        for &(i, j) in elements {
            base.insert(i, j);
        }
        Ok(base)
    }

    fn insert(&mut self, i: usize, j: usize) {
        let slot = self.offsets[i] + j;
        debug_assert!(!self.occupied[slot]);
        self.occupied[slot] = true;
        self.elements.push((i, j));
        self.projection[i] += 1;
    }

    fn remove_at(&mut self, k: usize) -> (usize, usize) {
        let (i, j) = self.elements.swap_remove(k);
        self.occupied[self.offsets[i] + j] = false;
        self.projection[i] -= 1;
        (i, j)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.occupied[self.offsets[i] + j]
    }

    /// The pairs of the base, sorted.
    pub fn elements(&self) -> Vec<(usize, usize)> {
        let mut e = self.elements.clone();
        e.sort_unstable();
        e
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The cached `α(B)`.
    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// `α(B)` recounted from the element set.
    pub fn recompute_projection(&self) -> Vec<usize> {
        let mut alpha = vec![0; self.projection.len()];
        for i in 0..alpha.len() {
            alpha[i] = self.occupied[self.offsets[i]..self.offsets[i + 1]]
                .iter()
                .filter(|&&b| b)
                .count();
        }
        alpha
    }

    fn free_copy(&self, i: usize, mut nth: usize) -> usize {
        for (j, &taken) in self.occupied[self.offsets[i]..self.offsets[i + 1]].iter().enumerate() {
            if !taken {
                if nth == 0 {
                    return j;
                }
                nth -= 1;
            }
        }
        unreachable!("fewer free copies than counted")
    }
}

/// `ln w(α(B)) - ln Π C(d_i, α_i(B))`.
pub fn polarized_log_weight<W: LogWeight + ?Sized>(spec: &MatroidSpec, weight: &W, base: &PolarizedBase) -> f64 {
    let alpha = base.projection();
    let lw = weight.log_weight(alpha);
    if lw == f64::NEG_INFINITY {
        return lw;
    }
    lw - ln_multichoose(&spec.block_sizes(), alpha)
}

/// Re-add menu after removing an element: for each coordinate `i` the number
/// of free copies and the polarized log-weight of `β + e_i`.
fn completion_menu<W: LogWeight + ?Sized>(
    spec: &MatroidSpec,
    weight: &W,
    beta: &mut [usize],
) -> (Vec<f64>, Vec<f64>) {
    let q = beta.len();
    let mut counts = vec![0.0; q];
    let mut logs = vec![f64::NEG_INFINITY; q];
    let sizes = spec.block_sizes();
    let base_mc = ln_multichoose(&sizes, beta);
    for i in 0..q {
        if beta[i] >= spec.cap(i) {
            continue;
        }
        beta[i] += 1;
        let lw = weight.log_weight(beta);
        beta[i] -= 1;
        if lw == f64::NEG_INFINITY {
            continue;
        }
        let d = sizes[i];
        let mc = base_mc - ln_binomial(d, beta[i]) + ln_binomial(d, beta[i] + 1);
        counts[i] = (d - beta[i]) as f64;
        logs[i] = lw - mc;
    }
    (counts, logs)
}

/// One step of the base-exchange walk: drop a uniform element, then re-add
/// a pair with probability proportional to the polarized weight of the
/// resulting base (the dropped pair included).
pub fn base_exchange_step<W: LogWeight + ?Sized, R: Rng + ?Sized>(
    spec: &MatroidSpec,
    weight: &W,
    base: &mut PolarizedBase,
    rng: &mut R,
) -> Result<()> {
    if base.is_empty() {
        return Ok(());
    }
    let k = rng.gen_range(0..base.len());
    let (i0, j0) = base.remove_at(k);
    let mut beta = base.projection.clone();
    let (counts, logs) = completion_menu(spec, weight, &mut beta);
    let i = match suitable_sample(&counts, &logs, rng) {
        Ok(i) => i,
        Err(e) => {
            base.insert(i0, j0);
            return Err(e);
        }
    };
    let free = base.offsets[i + 1] - base.offsets[i] - base.projection[i];
    let j = base.free_copy(i, rng.gen_range(0..free));
    base.insert(i, j);
    Ok(())
}

/// Exact transition probabilities out of `base`, as (target, probability)
/// pairs with distinct targets.
pub fn base_exchange_transitions<W: LogWeight + ?Sized>(
    spec: &MatroidSpec,
    weight: &W,
    base: &PolarizedBase,
) -> Vec<(PolarizedBase, f64)> {
    let r = base.len();
    let mut out: Vec<(PolarizedBase, f64)> = Vec::new();
    for k in 0..r {
        let mut reduced = base.clone();
        reduced.remove_at(k);
        let mut beta = reduced.projection.clone();
        let (counts, logs) = completion_menu(spec, weight, &mut beta);
        let lse = crate::numeric::log_sum_exp(
            &counts
                .iter()
                .zip(&logs)
                .map(|(&c, &l)| if c > 0.0 { c.ln() + l } else { f64::NEG_INFINITY })
                .collect::<Vec<_>>(),
        );
        for i in 0..counts.len() {
            if counts[i] == 0.0 {
                continue;
            }
            let per_copy = (logs[i] - lse).exp() / r as f64;
            for j in 0..spec.block_size(i) {
                if reduced.contains(i, j) {
                    continue;
                }
                let mut next = reduced.clone();
                next.insert(i, j);
                match out.iter_mut().find(|(b, _)| *b == next) {
                    Some((_, p)) => *p += per_copy,
                    None => out.push((next, per_copy)),
                }
            }
        }
    }
    out
}

/// Every base of the polarized matroid, grouped by projection in the order of
/// [`PolymatroidBaseSet::members`]. Fails past `limit` bases.
pub fn enumerate_bases(spec: &MatroidSpec, limit: usize) -> Result<Vec<PolarizedBase>> {
    let sizes = spec.block_sizes();
    let mut out = Vec::new();
    for alpha in spec.projection().members() {
        let per_coord: Vec<Vec<Vec<usize>>> = alpha
            .iter()
            .zip(&sizes)
            .map(|(&a, &d)| crate::combin::subsets(d, a))
            .collect();
        extend_bases(0, &per_coord, PolarizedBase::empty(&sizes), &mut out, limit)?;
    }
    Ok(out)
}

fn extend_bases(
    i: usize,
    per_coord: &[Vec<Vec<usize>>],
    partial: PolarizedBase,
    out: &mut Vec<PolarizedBase>,
    limit: usize,
) -> Result<()> {
    if i == per_coord.len() {
        if out.len() >= limit {
            return Err(Error::GuardExceeded(format!("more than {limit} polarized bases")));
        }
        out.push(partial);
        return Ok(());
    }
    for copies in &per_coord[i] {
        let mut next = partial.clone();
        for &j in copies {
            next.insert(i, j);
        }
        extend_bases(i + 1, per_coord, next, out, limit)?;
    }
    Ok(())
}

/// `ceil(C r (ln r + ln(1/ε)) + C r)`.
pub fn step_budget(rank: usize, eps: f64, mix_constant: f64) -> u64 {
    if rank == 0 {
        return 0;
    }
    let r = rank as f64;
    (mix_constant * r * (r.ln() + (1.0 / eps).ln()) + mix_constant * r).ceil() as u64
}

pub const DEFAULT_MIX_CONSTANT: f64 = 4.0;

/// First member with finite weight in greedy order, by depth-first search.
pub fn first_finite_member<W: LogWeight + ?Sized>(
    set: &PolymatroidBaseSet,
    weight: &W,
    node_limit: usize,
) -> Result<Vec<usize>> {
    let q = set.caps.len();
    let mut suffix = vec![0usize; q + 1];
    for i in (0..q).rev() {
        suffix[i] = suffix[i + 1].saturating_add(set.caps[i]);
    }
    let mut current = vec![0usize; q];
    let mut visited = 0usize;
    fn go<W: LogWeight + ?Sized>(
        i: usize,
        remaining: usize,
        set: &PolymatroidBaseSet,
        suffix: &[usize],
        current: &mut Vec<usize>,
        weight: &W,
        visited: &mut usize,
        limit: usize,
    ) -> Result<bool> {
        *visited += 1;
        if *visited > limit {
            return Err(Error::GuardExceeded(format!(
                "no finite-weight start found within {limit} search nodes"
            )));
        }
        if i == current.len() {
            return Ok(remaining == 0 && weight.log_weight(current) > f64::NEG_INFINITY);
        }
        if suffix[i] < remaining {
            return Ok(false);
        }
        for v in (0..=set.caps[i].min(remaining)).rev() {
            current[i] = v;
            if go(i + 1, remaining - v, set, suffix, current, weight, visited, limit)? {
                return Ok(true);
            }
        }
        current[i] = 0;
        Ok(false)
    }
    if go(0, set.rank, set, &suffix, &mut current, weight, &mut visited, node_limit)? {
        Ok(current)
    } else {
        Err(Error::Infeasible("every member of the base set has weight zero".into()))
    }
}

const START_SEARCH_LIMIT: usize = 10_000_000;
const TABLE_LIMIT: usize = 1 << 20;

/// Base-exchange sampler with a fixed start base and step budget, reusable
/// across many independent draws.
#[derive(Debug, Clone)]
pub struct BaseExchangeSampler<W> {
    spec: MatroidSpec,
    weight: W,
    start: PolarizedBase,
    steps: u64,
}

impl<W: LogWeight> BaseExchangeSampler<W> {
    pub fn new(spec: MatroidSpec, weight: W, steps: u64) -> Result<Self> {
        let alpha = first_finite_member(&spec.projection(), &weight, START_SEARCH_LIMIT)?;
        let start = PolarizedBase::from_projection(&spec, &alpha)?;
        Ok(BaseExchangeSampler {
            spec,
            weight,
            start,
            steps,
        })
    }

    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    pub fn weight(&self) -> &W {
        &self.weight
    }

    pub fn start(&self) -> &PolarizedBase {
        &self.start
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn sample_base<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PolarizedBase> {
        let mut base = self.start.clone();
        for _ in 0..self.steps {
            base_exchange_step(&self.spec, &self.weight, &mut base, rng)?;
        }
        Ok(base)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        Ok(self.sample_base(rng)?.projection)
    }
}

/// Either a dense table or the weight function itself.
#[derive(Debug, Clone)]
pub enum CachedWeight<W> {
    Table(WeightTable),
    Direct(W),
}

impl<W: LogWeight> CachedWeight<W> {
    pub fn new(set: &PolymatroidBaseSet, weight: W) -> Self {
        match WeightTable::build(set, &weight, TABLE_LIMIT) {
            Some(t) => CachedWeight::Table(t),
            None => CachedWeight::Direct(weight),
        }
    }
}

impl<W: LogWeight> LogWeight for CachedWeight<W> {
    fn log_weight(&self, alpha: &[usize]) -> f64 {
        match self {
            CachedWeight::Table(t) => t.log_weight(alpha),
            CachedWeight::Direct(w) => w.log_weight(alpha),
        }
    }
}

/// Draws `α` from the base set approximately proportional to `w`, running the
/// polarized walk for [`step_budget`] steps with `copies` copies per
/// coordinate (at least the largest effective cap).
pub fn sample_polymatroid_base<W: LogWeight, R: Rng + ?Sized>(
    set: &PolymatroidBaseSet,
    copies: usize,
    weight: W,
    eps: f64,
    mix_constant: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε must lie in (0, 1), got {eps}")));
    }
    let spec = set.polarize(copies)?;
    let steps = step_budget(set.rank, eps, mix_constant);
    BaseExchangeSampler::new(spec, weight, steps)?.sample(rng)
}
