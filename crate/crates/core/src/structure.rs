//! Covers of a point set by translates of a single line or hyperplane.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::cofactor_normal;
use crate::pointset::{affine_rank, Point, PointSet};

/// Primitive integer vector with positive first nonzero coordinate; one
/// representative per line through the origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Direction(Vec<i64>);

impl Direction {
    /// Normalizes any nonzero vector; `None` for the zero vector and for
    /// vectors whose primitive form does not fit in `i64`.
    pub fn new(v: &[i64]) -> Option<Direction> {
        let g = v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs()));
        if g == 0 {
            return None;
        }
        let first_negative = v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
        let coords = v
            .iter()
            .map(|&x| {
                let m = i64::try_from(x.unsigned_abs() / g).ok()?;
                Some(if (x < 0) != first_negative { -m } else { m })
            })
            .collect::<Option<_>>()?;
        Some(Direction(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<i64>> for Direction {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        match Direction::new(&v) {
            Some(d) if d.0 == v => Ok(d),
            _ => Err(Error::InvalidParameter(format!("{v:?} is not a normalized primitive direction"))),
        }
    }
}

impl From<Direction> for Vec<i64> {
    fn from(d: Direction) -> Self {
        d.0
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    Lines,
    Hyperplanes,
}

/// A partition of `A` into parallel lines (witness is the line direction)
/// or parallel hyperplanes (witness is the normal).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub kind: CoverKind,
    pub count: usize,
    pub witness: Direction,
    pub classes: Vec<PointSet>,
}

/// Key identifying the line `p + R·v`: the 2×2 minors of `(p, v)` against
/// the pivot coordinate of `v`.
fn line_key(p: &Point, v: &[i64], pivot: usize) -> Result<Vec<i64>> {
    let c = p.coords();
    (0..v.len())
        .filter(|&j| j != pivot)
        .map(|j| {
            let a = c[j].checked_mul(v[pivot]).ok_or(Error::Overflow)?;
            let b = c[pivot].checked_mul(v[j]).ok_or(Error::Overflow)?;
            a.checked_sub(b).ok_or(Error::Overflow)
        })
        .collect()
}

fn classes_by<K: Ord>(a: &PointSet, key: impl Fn(&Point) -> Result<K>) -> Result<Vec<PointSet>> {
    let mut groups: BTreeMap<K, Vec<Point>> = BTreeMap::new();
    for p in a {
        groups.entry(key(p)?).or_default().push(p.clone());
    }
    groups.into_values().map(|pts| PointSet::new(a.dim(), pts)).collect()
}

fn line_classes(a: &PointSet, v: &Direction) -> Result<Vec<PointSet>> {
    let pivot = v.0.iter().position(|&x| x != 0).expect("directions are nonzero");
    classes_by(a, |p| line_key(p, &v.0, pivot))
}

fn line_count(a: &PointSet, v: &Direction) -> Result<usize> {
    let pivot = v.0.iter().position(|&x| x != 0).expect("directions are nonzero");
    let keys = a.iter().map(|p| line_key(p, &v.0, pivot)).collect::<Result<BTreeSet<_>>>()?;
    Ok(keys.len())
}

fn difference_directions(a: &PointSet) -> Result<BTreeSet<Direction>> {
    let mut dirs = BTreeSet::new();
    for (x, y) in a.iter().tuple_combinations() {
        let diff = y.checked_sub(x)?;
        // distinct points, so only an unrepresentable primitive vector fails
        dirs.insert(Direction::new(diff.coords()).ok_or(Error::Overflow)?);
    }
    Ok(dirs)
}

/// Smallest `(count, direction)` pair, ties broken by direction.
fn best<'a>(scored: impl ParallelIterator<Item = Result<(usize, &'a Direction)>>) -> Result<Option<(usize, Direction)>> {
    let found = scored
        .map(|r| r.map(Some))
        .try_reduce(|| None, |x, y| Ok(match (x, y) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => Some(a.min(b)),
        }))?;
    Ok(found.map(|(c, d)| (c, d.clone())))
}

/// Minimum number of parallel lines covering `A`.
///
/// A line through two points of `A` has a pairwise difference as direction,
/// so only those directions can beat one line per point.
pub fn line_cover_number(a: &PointSet) -> Result<CoverReport> {
    if a.len() < 2 {
        return Err(Error::InvalidParameter(format!("line cover needs at least 2 points, got {}", a.len())));
    }
    let dirs: Vec<Direction> = difference_directions(a)?.into_iter().collect();
    let (count, witness) = best(dirs.par_iter().map(|v| Ok((line_count(a, v)?, v))))?
        .expect("two distinct points give a direction");
    let classes = line_classes(a, &witness)?;
    debug_assert_eq!(classes.len(), count);
    Ok(CoverReport { kind: CoverKind::Lines, count, witness, classes })
}

fn check_normal(a: &PointSet, normal: &Direction) -> Result<()> {
    if normal.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: normal.dim() });
    }
    Ok(())
}

/// Number of hyperplanes `⟨normal, x⟩ = c` needed to cover `A`.
pub fn hyperplane_cover_count(a: &PointSet, normal: &Direction) -> Result<usize> {
    if a.dim() < 2 {
        return Err(Error::InvalidParameter("hyperplane covers need d >= 2".into()));
    }
    check_normal(a, normal)?;
    let values = a.iter().map(|p| p.dot(normal.coords())).collect::<Result<BTreeSet<_>>>()?;
    Ok(values.len())
}

pub fn hyperplane_classes(a: &PointSet, normal: &Direction) -> Result<Vec<PointSet>> {
    check_normal(a, normal)?;
    classes_by(a, |p| p.dot(normal.coords()))
}

/// Candidate normals: primitive normals of the hyperplanes spanned by
/// `d - 1` linearly independent pairwise differences.
fn candidate_normals(a: &PointSet) -> Result<BTreeSet<Direction>> {
    let d = a.dim();
    let dirs: Vec<Direction> = difference_directions(a)?.into_iter().collect();
    let normals = dirs
        .iter()
        .combinations(d - 1)
        .par_bridge()
        .map(|vs| {
            let n = cofactor_normal(&vs.iter().map(|v| v.coords()).collect::<Vec<_>>(), d)?;
            Ok(Direction::new(&n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(normals.into_iter().flatten().collect())
}

/// Minimum number of parallel hyperplanes covering a rank-`d` set.
pub fn min_hyperplane_cover(a: &PointSet) -> Result<CoverReport> {
    let d = a.dim();
    if d < 2 {
        return Err(Error::InvalidParameter("hyperplane covers need d >= 2".into()));
    }
    let rank = affine_rank(a)?;
    if rank < d {
        return Err(Error::RankDeficient { rank, dim: d });
    }
    let normals: Vec<Direction> = candidate_normals(a)?.into_iter().collect();
    let (count, witness) = best(normals.par_iter().map(|n| Ok((hyperplane_cover_count(a, n)?, n))))?
        .expect("a rank-d set has d independent differences");
    let classes = hyperplane_classes(a, &witness)?;
    Ok(CoverReport { kind: CoverKind::Hyperplanes, count, witness, classes })
}
