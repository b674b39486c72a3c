//! Exhaustive and randomized search for rank-`d` subsets of a grid
//! `{0, …, g}^d` minimizing `|A + q·A|`.
//!
//! Exhaustive runs visit each canonical class (translation plus box
//! symmetries) exactly once. Work is split into chunks by the first two
//! indices of the lexicographic subset enumeration; random runs are split
//! into fixed-size sample blocks with seeds derived from the block index.
//! Chunk results merge by an associative, commutative minimum, so the
//! record does not depend on the number of worker threads.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{lemma_fd_bound, q2_bound, slope_catalog};
use crate::constructions::construct_an;
use crate::error::{check_modulus, Error, Result};
use crate::lattice::coset_partition;
use crate::pointset::{affine_rank, canonical_form, canonical_of_normalized, sum_of_dilates_len, Point, PointSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Samples per random block. Fixed so that block seeds, and therefore
/// results, do not depend on the worker count.
const SAMPLE_BLOCK: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub d: usize,
    pub q: i64,
    /// Target cardinality.
    pub n: usize,
    /// Per-axis bound: points range over `{0, …, grid}^d`.
    pub grid: i64,
    pub mode: SearchMode,
    pub budget: u64,
}

impl SearchTask {
    pub fn exhaustive(d: usize, q: i64, n: usize, grid: i64) -> Self {
        SearchTask { d, q, n, grid, mode: SearchMode::Exhaustive, budget: DEFAULT_BUDGET }
    }

    pub fn random(d: usize, q: i64, n: usize, grid: i64, samples: u64, seed: u64) -> Self {
        SearchTask { d, q, n, grid, mode: SearchMode::Random { samples, seed }, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn grid_len(&self) -> Result<u128> {
        let side = u128::try_from(self.grid)? + 1;
        side.checked_pow(u32::try_from(self.d)?).ok_or(Error::Overflow)
    }

    /// Number of `n`-subsets of the grid, saturating at `u128::MAX`.
    pub fn subset_count(&self) -> Result<u128> {
        Ok(binomial(self.grid_len()?, self.n as u128))
    }

    pub fn validate(&self) -> Result<()> {
        check_modulus(self.q)?;
        if !(1..=4).contains(&self.d) {
            return Err(Error::InvalidParameter(format!("search supports 1 <= d <= 4, got {}", self.d)));
        }
        if self.n < self.d + 1 {
            return Err(Error::InvalidParameter(format!(
                "a rank-{} set needs at least {} points, got n = {}",
                self.d,
                self.d + 1,
                self.n
            )));
        }
        if self.grid < 1 {
            return Err(Error::InvalidParameter(format!("grid bound must be >= 1, got {}", self.grid)));
        }
        let required = match self.mode {
            SearchMode::Exhaustive => self.subset_count()?,
            SearchMode::Random { samples, .. } => samples as u128,
        };
        if required > self.budget as u128 {
            return Err(Error::BudgetExceeded { required, budget: self.budget as u128 });
        }
        if self.grid_len()? < self.n as u128 {
            return Err(Error::EmptySearchSpace { dim: self.d, size: self.n });
        }
        Ok(())
    }
}

fn binomial(m: u128, k: u128) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (m - i) is divisible by (i + 1) after the multiplication
        acc = match acc.checked_mul(m - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn grid_points(d: usize, g: i64) -> Vec<Point> {
    let mut pts = vec![Point::origin(d)];
    for axis in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..=g).map(move |c| {
                    let mut v = p.coords().to_vec();
                    v[axis] = c;
                    Point::new(v)
                })
            })
            .collect();
    }
    pts.sort();
    pts
}

/// Lexicographic `k`-combinations of `0..m` with a fixed prefix.
struct Combinations {
    idx: Vec<usize>,
    fixed: usize,
    m: usize,
    started: bool,
    done: bool,
}

impl Combinations {
    fn with_prefix(prefix: &[usize], k: usize, m: usize) -> Self {
        let mut idx = prefix.to_vec();
        let start = prefix.last().map_or(0, |&l| l + 1);
        idx.extend(start..start + (k - prefix.len()));
        let done = idx.last().is_some_and(|&l| l >= m) || prefix.windows(2).any(|w| w[0] >= w[1]);
        Combinations { idx, fixed: prefix.len(), m, started: false, done }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        while i > self.fixed {
            i -= 1;
            if self.idx[i] < self.m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

fn touches_origin_walls(points: &[Point], d: usize) -> bool {
    (0..d).all(|k| points.iter().any(|p| p.coords()[k] == 0))
}

/// Whether a grid subset (sorted) is the representative of its class.
fn is_class_representative(set: &PointSet) -> bool {
    let d = set.dim();
    if !touches_origin_walls(set.points(), d) {
        return false;
    }
    let widths: Vec<i64> = (0..d).map(|k| set.iter().map(|p| p.coords()[k]).max().unwrap_or(0)).collect();
    canonical_of_normalized(set, &widths) == *set
}

fn subset(grid: &[Point], d: usize, idx: &[usize]) -> PointSet {
    // grid is sorted and indices increase, so the points are already sorted
    PointSet::from_sorted_unchecked(d, idx.iter().map(|&i| grid[i].clone()).collect())
}

/// One representative per canonical class of rank-`d` `n`-subsets of the grid.
pub struct CanonicalSubsets {
    grid: Vec<Point>,
    d: usize,
    combos: Combinations,
    /// Subsets visited so far.
    pub subsets: u64,
    /// Class representatives skipped for having rank below `d`.
    pub rank_deficient: u64,
}

impl Iterator for CanonicalSubsets {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        while let Some(idx) = self.combos.advance() {
            self.subsets += 1;
            let set = subset(&self.grid, self.d, idx);
            if !is_class_representative(&set) {
                continue;
            }
            if affine_rank(&set).expect("grid coordinates are small") < self.d {
                self.rank_deficient += 1;
                continue;
            }
            return Some(set);
        }
        None
    }
}

pub fn enumerate_canonical(d: usize, n: usize, grid: i64, budget: u64) -> Result<CanonicalSubsets> {
    // q only matters for validation here
    SearchTask { d, q: 2, n, grid, mode: SearchMode::Exhaustive, budget }.validate()?;
    let pts = grid_points(d, grid);
    let m = pts.len();
    Ok(CanonicalSubsets { grid: pts, d, combos: Combinations::with_prefix(&[], n, m), subsets: 0, rank_deficient: 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackRow {
    pub name: String,
    pub slope: i64,
    /// `min_value - slope·n`
    pub slack: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub task: SearchTask,
    /// Smallest `|A + q·A|` over the grid and the injected construction.
    pub min_value: usize,
    /// Canonical set attaining `min_value`.
    pub witness: PointSet,
    pub witness_in_grid: bool,
    /// Smallest value among sets drawn from the grid, if any had rank `d`.
    pub grid_min: Option<usize>,
    pub grid_witness: Option<PointSet>,
    /// `|A_N + q·A_N|` for `N = n - d + 2`, injected into every run.
    pub construction_value: usize,
    pub construction_in_grid: bool,
    /// Lower bound `(2d+1)n - d(d+1)²/2` that every minimum must respect.
    pub floor: i64,
    pub slack: Vec<SlackRow>,
    /// Subsets (exhaustive) or samples (random) examined.
    pub subsets_examined: u64,
    /// Distinct rank-`d` canonical classes evaluated.
    pub classes_examined: u64,
    /// Classes (exhaustive) or samples (random) skipped for rank below `d`.
    pub rank_deficient: u64,
}

/// Best `(value, set)` seen; ties go to the lexicographically smaller set.
type Best = Option<(usize, PointSet)>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if y.cmp(&x) == Ordering::Less { y } else { x }),
    }
}

#[derive(Default)]
struct Tally {
    subsets: u64,
    rank_deficient: u64,
    classes: u64,
    /// Random mode only: distinct classes, merged by union.
    seen: BTreeSet<PointSet>,
    best: Best,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.subsets += other.subsets;
        self.rank_deficient += other.rank_deficient;
        self.classes += other.classes;
        if self.seen.len() < other.seen.len() {
            self.seen = std::mem::take(&mut self.seen).into_iter().chain(other.seen).collect();
        } else {
            self.seen.extend(other.seen);
        }
        self.best = better(self.best, other.best);
        self
    }
}

fn exhaustive_chunk(grid: &[Point], task: &SearchTask, prefix: &[usize]) -> Result<Tally> {
    let mut combos = Combinations::with_prefix(prefix, task.n, grid.len());
    let mut tally = Tally::default();
    while let Some(idx) = combos.advance() {
        tally.subsets += 1;
        let set = subset(grid, task.d, idx);
        if !is_class_representative(&set) {
            continue;
        }
        if affine_rank(&set)? < task.d {
            tally.rank_deficient += 1;
            continue;
        }
        tally.classes += 1;
        let v = sum_of_dilates_len(&set, task.q)?;
        tally.best = better(tally.best, Some((v, set)));
    }
    Ok(tally)
}

fn random_block(grid: &[Point], task: &SearchTask, seed: u64, block: u64, count: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut tally = Tally::default();
    for _ in 0..count {
        tally.subsets += 1;
        let mut idx = sample(&mut rng, grid.len(), task.n).into_vec();
        idx.sort_unstable();
        let set = subset(grid, task.d, &idx);
        if affine_rank(&set)? < task.d {
            tally.rank_deficient += 1;
            continue;
        }
        let canon = canonical_form(&set)?;
        if tally.seen.contains(&canon) {
            continue;
        }
        let v = sum_of_dilates_len(&canon, task.q)?;
        tally.seen.insert(canon.clone());
        tally.best = better(tally.best, Some((v, canon)));
    }
    Ok(tally)
}

fn run_chunks(task: &SearchTask) -> Result<Tally> {
    let grid = grid_points(task.d, task.grid);
    let m = grid.len();
    match task.mode {
        SearchMode::Exhaustive => {
            let prefixes: Vec<[usize; 2]> = (0..m).flat_map(|i| (i + 1..m).map(move |j| [i, j])).collect();
            prefixes
                .par_iter()
                .map(|p| exhaustive_chunk(&grid, task, p))
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
        }
        SearchMode::Random { samples, seed } => {
            let blocks = samples.div_ceil(SAMPLE_BLOCK);
            let mut tally = (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let count = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
                    random_block(&grid, task, seed, b, count)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            tally.classes = tally.seen.len() as u64;
            Ok(tally)
        }
    }
}

fn check_floors(task: &SearchTask, value: usize, witness: &PointSet) -> Result<()> {
    let floor = q2_bound(task.n, task.d)?;
    let r = coset_partition(witness, task.q)?.r();
    let fd = lemma_fd_bound(task.n, r, task.d)?;
    for (name, bound) in [("q2", floor), ("lemma_fd", fd)] {
        if (value as i64) < bound {
            return Err(Error::TheoremViolation {
                name: name.into(),
                detail: format!("search minimum {value} below {bound} (n = {}, d = {}, q = {})", task.n, task.d, task.q),
                witness: Box::new(witness.clone()),
            });
        }
    }
    Ok(())
}

/// `A_N` with `|A_N| = n`; in one dimension, the interval `{0, …, n-1}`.
fn injected_candidate(d: usize, n: usize) -> Result<PointSet> {
    if d == 1 {
        return PointSet::from_coords(1, (0..i64::try_from(n)?).map(|x| vec![x]));
    }
    construct_an(d, i64::try_from(n + 2 - d)?)
}

/// Minimum of `|A + q·A|` over the task's search space, with the `A_N`
/// construction injected as an additional candidate.
pub fn search_min(task: &SearchTask) -> Result<ExtremalRecord> {
    task.validate()?;
    let tally = run_chunks(task)?;

    let construction = canonical_form(&injected_candidate(task.d, task.n)?)?;
    let construction_value = sum_of_dilates_len(&construction, task.q)?;
    let construction_in_grid = construction.within_box(task.grid);

    if let Some((v, w)) = &tally.best {
        check_floors(task, *v, w)?;
    }
    check_floors(task, construction_value, &construction)?;

    let (min_value, witness, witness_in_grid) = match &tally.best {
        Some((v, w)) if *v <= construction_value => (*v, w.clone(), true),
        _ => (construction_value, construction.clone(), construction_in_grid),
    };

    let slack = slope_catalog(task.q, task.d)?
        .into_iter()
        .map(|s| SlackRow { slack: min_value as i64 - s.slope * task.n as i64, name: s.name, slope: s.slope })
        .collect();

    Ok(ExtremalRecord {
        task: task.clone(),
        min_value,
        witness,
        witness_in_grid,
        grid_min: tally.best.as_ref().map(|b| b.0),
        grid_witness: tally.best.map(|b| b.1),
        construction_value,
        construction_in_grid,
        floor: q2_bound(task.n, task.d)?,
        slack,
        subsets_examined: tally.subsets,
        classes_examined: tally.classes,
        rank_deficient: tally.rank_deficient,
    })
}

/// Runs [`search_min`] on a dedicated pool with `workers` threads.
pub fn search_min_with_workers(task: &SearchTask, workers: usize) -> Result<ExtremalRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| search_min(task))
}

/// One observed minimum: `min |A + q·A| = value` at cardinality `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub d: usize,
    pub q: i64,
    pub n: usize,
    pub value: usize,
}

impl From<&ExtremalRecord> for Observation {
    fn from(r: &ExtremalRecord) -> Self {
        Observation { d: r.task.d, q: r.task.q, n: r.task.n, value: r.min_value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantFit {
    /// Smallest `C` with `value ≥ slope·n - C` for every observation.
    pub constant: i64,
    /// Cardinality at which the maximum is attained (smallest on ties).
    pub at_n: usize,
}

pub fn fit_additive_constant(observations: impl IntoIterator<Item = Observation>, slope: i64) -> Result<ConstantFit> {
    let obs: Vec<Observation> = observations.into_iter().collect();
    let first = obs.first().ok_or_else(|| Error::InvalidParameter("no observations to fit".into()))?;
    if obs.iter().any(|o| o.d != first.d || o.q != first.q) {
        return Err(Error::MixedRecords);
    }
    obs.iter()
        .map(|o| -> Result<(i64, std::cmp::Reverse<usize>)> {
            let scaled = slope.checked_mul(i64::try_from(o.n)?).ok_or(Error::Overflow)?;
            Ok((scaled - i64::try_from(o.value)?, std::cmp::Reverse(o.n)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .map(|(constant, at)| ConstantFit { constant, at_n: at.0 })
        .ok_or(Error::InvalidParameter("no observations to fit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::q2_identity_value;

    #[test]
    fn binomials() {
        assert_eq!(binomial(25, 7), 480_700);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(1 << 100, 10), u128::MAX);
    }

    #[test]
    fn combinations_with_prefix() {
        let mut c = Combinations::with_prefix(&[1], 3, 5);
        let mut seen = Vec::new();
        while let Some(x) = c.advance() {
            seen.push(x.to_vec());
        }
        assert_eq!(seen, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4]]);
        let mut c = Combinations::with_prefix(&[3, 4], 3, 5);
        assert!(c.advance().is_none());
    }

    #[test]
    fn unit_grid_classes() {
        let mut e = enumerate_canonical(2, 3, 1, DEFAULT_BUDGET).unwrap();
        let classes: Vec<PointSet> = e.by_ref().collect();
        assert_eq!(classes.len(), 1);
        assert_eq!(e.subsets, 4);
        assert_eq!(e.rank_deficient, 0);

        let classes: Vec<PointSet> = enumerate_canonical(2, 4, 1, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 4);
    }

    #[test]
    fn canonical_enumeration_matches_naive_collapse() {
        for (d, n, g) in [(2, 3, 2), (2, 4, 2), (3, 4, 1), (2, 5, 3)] {
            let grid = grid_points(d, g);
            let mut naive = BTreeSet::new();
            let mut naive_deficient = BTreeSet::new();
            let mut c = Combinations::with_prefix(&[], n, grid.len());
            while let Some(idx) = c.advance() {
                let s = subset(&grid, d, idx);
                let canon = canonical_form(&s).unwrap();
                if affine_rank(&s).unwrap() == d {
                    naive.insert(canon);
                } else {
                    naive_deficient.insert(canon);
                }
            }
            let mut e = enumerate_canonical(d, n, g, DEFAULT_BUDGET).unwrap();
            let fast: Vec<PointSet> = e.by_ref().collect();
            let fast_set: BTreeSet<PointSet> = fast.iter().cloned().collect();
            assert_eq!(fast.len(), fast_set.len(), "no class repeated");
            assert_eq!(fast_set, naive, "d={d} n={n} g={g}");
            assert_eq!(e.rank_deficient as usize, naive_deficient.len());
        }
    }

    #[test]
    fn budget_refusal_reports_count() {
        let err = enumerate_canonical(2, 7, 4, 1000).err().unwrap();
        assert_eq!(err, Error::BudgetExceeded { required: 480_700, budget: 1000 });
        let task = SearchTask::random(2, 2, 4, 3, 5000, 1).with_budget(10);
        assert!(matches!(search_min(&task), Err(Error::BudgetExceeded { required: 5000, .. })));
    }

    #[test]
    fn invalid_tasks() {
        assert_eq!(search_min(&SearchTask::exhaustive(2, 1, 4, 2)).err(), Some(Error::InvalidModulus(1)));
        assert!(matches!(search_min(&SearchTask::exhaustive(2, 2, 2, 2)), Err(Error::InvalidParameter(_))));
        assert!(matches!(search_min(&SearchTask::exhaustive(2, 2, 5, 1)), Err(Error::EmptySearchSpace { .. })));
    }

    #[test]
    fn search_examples() {
        let r = search_min(&SearchTask::exhaustive(2, 2, 3, 2)).unwrap();
        assert_eq!(r.min_value, 9);
        assert_eq!(r.floor, 6);
        assert_eq!(r.construction_value, 9);

        let r = search_min(&SearchTask::exhaustive(2, 2, 4, 1)).unwrap();
        assert_eq!(r.grid_min, Some(16));
        assert_eq!(r.classes_examined, 1);
        // the injected A_4 beats the only grid candidate
        assert_eq!(r.min_value, 14);
        assert!(!r.witness_in_grid);

        let r = search_min(&SearchTask::exhaustive(2, 2, 6, 3)).unwrap();
        assert!((21..=24).contains(&r.min_value));
        assert!(r.grid_min.unwrap() >= 21);
    }

    #[test]
    fn random_mode_is_reproducible_and_worker_independent() {
        let task = SearchTask::random(2, 3, 5, 4, 3000, 42);
        let a = search_min_with_workers(&task, 1).unwrap();
        let b = search_min_with_workers(&task, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.subsets_examined, 3000);
        let other = search_min_with_workers(&SearchTask::random(2, 3, 5, 4, 3000, 43), 2).unwrap();
        assert_eq!(other.task.mode, SearchMode::Random { samples: 3000, seed: 43 });
    }

    #[test]
    fn exhaustive_is_worker_independent() {
        let task = SearchTask::exhaustive(3, -2, 5, 1);
        assert_eq!(search_min_with_workers(&task, 1).unwrap(), search_min_with_workers(&task, 3).unwrap());
    }

    #[test]
    fn fit_examples() {
        let obs = (3..=12).map(|n| Observation {
            d: 2,
            q: 2,
            n: n as usize,
            value: q2_identity_value(2, n).unwrap() as usize,
        });
        assert_eq!(fit_additive_constant(obs, 5).unwrap(), ConstantFit { constant: 6, at_n: 3 });
        let single = [Observation { d: 2, q: 2, n: 3, value: 9 }];
        assert_eq!(fit_additive_constant(single, 5).unwrap().constant, 6);
        let mixed = [Observation { d: 2, q: 2, n: 3, value: 9 }, Observation { d: 2, q: 3, n: 4, value: 9 }];
        assert_eq!(fit_additive_constant(mixed, 5), Err(Error::MixedRecords));
        assert!(fit_additive_constant([], 5).is_err());
    }

    #[test]
    fn fitted_constant_respects_floor() {
        let records: Vec<ExtremalRecord> =
            (3..=6).map(|n| search_min(&SearchTask::exhaustive(2, 2, n, 3)).unwrap()).collect();
        let fit = fit_additive_constant(records.iter().map(Observation::from), 5).unwrap();
        assert!(fit.constant <= 9);
    }
}
