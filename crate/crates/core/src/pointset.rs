//! Finite subsets of `Z^d` and exact arithmetic on them.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_modulus, Error, Result};
use crate::matrix::{bareiss, IntMatrix};

/// A lattice point; coordinates are exact 64-bit integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    /// The standard basis vector `e_axis` (zero-based axis).
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut p = Self::origin(dim);
        p.0[axis] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    fn check_dim(&self, other: &Point) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Point) -> Result<Point> {
        self.check_dim(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Point)
    }

    pub fn checked_sub(&self, other: &Point) -> Result<Point> {
        self.check_dim(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Point)
    }

    pub fn checked_scale(&self, q: i64) -> Result<Point> {
        self.0.iter().map(|a| a.checked_mul(q).ok_or(Error::Overflow)).collect::<Result<_>>().map(Point)
    }

    pub fn dot(&self, v: &[i64]) -> Result<i64> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        self.0.iter().zip(v).try_fold(0i64, |acc, (a, b)| {
            a.checked_mul(*b).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
        })
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Point(v.to_vec())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite set of points of `Z^dim`. Points are kept sorted
/// lexicographically and deduplicated, so equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet", into = "RawPointSet")]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Point>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::new(raw.dim, raw.points)
    }
}

impl From<PointSet> for RawPointSet {
    fn from(s: PointSet) -> Self {
        RawPointSet { dim: s.dim, points: s.points }
    }
}

impl PointSet {
    /// Collects points into a set, dropping duplicates.
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut points: Vec<Point> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    pub fn from_coords<I, C>(dim: usize, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<i64>>,
    {
        Self::new(dim, coords.into_iter().map(|c| Point(c.into())))
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, std::iter::empty())
    }

    /// Caller guarantees sorted, deduplicated points of dimension `dim`.
    pub(crate) fn from_sorted_unchecked(dim: usize, points: Vec<Point>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Lexicographically smallest point.
    pub fn lex_min(&self) -> Option<&Point> {
        self.points.first()
    }

    pub fn to_coord_vecs(&self) -> Vec<Vec<i64>> {
        self.points.iter().map(|p| p.0.clone()).collect()
    }

    /// Points whose coordinates all lie in `0..=bound`.
    pub fn within_box(&self, bound: i64) -> bool {
        self.points.iter().all(|p| p.0.iter().all(|&c| (0..=bound).contains(&c)))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let pts = self.points.iter().filter(|p| !other.contains(p)).cloned().collect();
        PointSet::from_sorted_unchecked(self.dim, pts)
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        Ok(())
    }

    fn nonempty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.points).finish()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

pub fn translate(a: &PointSet, x: &Point) -> Result<PointSet> {
    a.check_point(x)?;
    // translation preserves lexicographic order
    let pts = a.points.iter().map(|p| p.checked_add(x)).collect::<Result<_>>()?;
    Ok(PointSet::from_sorted_unchecked(a.dim, pts))
}

pub fn dilate(a: &PointSet, q: i64) -> Result<PointSet> {
    if q == 0 {
        return Err(Error::ZeroDilation);
    }
    let mut pts: Vec<Point> = a.points.iter().map(|p| p.checked_scale(q)).collect::<Result<_>>()?;
    if q < 0 {
        pts.reverse();
    }
    Ok(PointSet::from_sorted_unchecked(a.dim, pts))
}

/// Mixed-radix packing of the bounding box of `A + B` into `u64`.
///
/// The key of a sum `a + b` is `key_a + key_b`, so keys for the two
/// summands are computed once and combined with a single integer add.
struct BoxCodec {
    lo: Vec<i64>,
    strides: Vec<u64>,
}

/// The codec plus the keys of every point of `A` and of `B`.
type PackedSummands = (BoxCodec, Vec<u64>, Vec<u64>);

impl BoxCodec {
    fn for_sum(a: &PointSet, b: &PointSet) -> Result<Option<PackedSummands>> {
        let dim = a.dim;
        let (amin, amax) = bounds(a);
        let (bmin, bmax) = bounds(b);
        let mut lo = Vec::with_capacity(dim);
        let mut extents = Vec::with_capacity(dim);
        for k in 0..dim {
            let l = amin[k].checked_add(bmin[k]).ok_or(Error::Overflow)?;
            let h = amax[k].checked_add(bmax[k]).ok_or(Error::Overflow)?;
            lo.push(l);
            extents.push((h as i128 - l as i128 + 1) as u128);
        }
        let mut strides = Vec::with_capacity(dim);
        let mut volume: u128 = 1;
        for &e in extents.iter().rev() {
            strides.push(volume as u64);
            volume = match volume.checked_mul(e) {
                Some(v) if v <= u64::MAX as u128 => v,
                _ => return Ok(None),
            };
        }
        strides.reverse();
        let keys = |s: &PointSet, min: &[i64]| -> Vec<u64> {
            s.points
                .iter()
                .map(|p| {
                    p.0.iter()
                        .zip(min)
                        .zip(&strides)
                        .map(|((&c, &m), &st)| (c as i128 - m as i128) as u64 * st)
                        .sum()
                })
                .collect()
        };
        let ka = keys(a, &amin);
        let kb = keys(b, &bmin);
        Ok(Some((BoxCodec { lo, strides }, ka, kb)))
    }

    fn decode(&self, mut key: u64) -> Point {
        let coords = self
            .strides
            .iter()
            .zip(&self.lo)
            .map(|(&st, &l)| {
                let c = key / st;
                key %= st;
                // in range by construction of the box
                (l as i128 + c as i128) as i64
            })
            .collect();
        Point(coords)
    }
}

fn bounds(s: &PointSet) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![i64::MAX; s.dim];
    let mut hi = vec![i64::MIN; s.dim];
    for p in &s.points {
        for (k, &c) in p.0.iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (lo, hi)
}

fn check_sum_inputs(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    a.nonempty()?;
    b.nonempty()
}

fn sum_keys(ka: &[u64], kb: &[u64]) -> Vec<u64> {
    let mut keys = Vec::with_capacity(ka.len() * kb.len());
    for &x in ka {
        keys.extend(kb.iter().map(|&y| x + y));
    }
    keys.sort_unstable();
    keys.dedup();
    keys
}

fn sumset_hashed(a: &PointSet, b: &PointSet) -> Result<HashSet<Point>> {
    let mut out = HashSet::with_capacity(a.len() * b.len());
    for x in &a.points {
        for y in &b.points {
            out.insert(x.checked_add(y)?);
        }
    }
    Ok(out)
}

/// `A + B = {a + b}`.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_sum_inputs(a, b)?;
    match BoxCodec::for_sum(a, b)? {
        Some((codec, ka, kb)) => {
            // keys are increasing in lexicographic order of the decoded points
            let pts = sum_keys(&ka, &kb).into_iter().map(|k| codec.decode(k)).collect();
            Ok(PointSet::from_sorted_unchecked(a.dim, pts))
        }
        None => PointSet::new(a.dim, sumset_hashed(a, b)?),
    }
}

/// `|A + B|` without materializing the points.
pub fn sumset_len(a: &PointSet, b: &PointSet) -> Result<usize> {
    check_sum_inputs(a, b)?;
    match BoxCodec::for_sum(a, b)? {
        Some((_, ka, kb)) => Ok(sum_keys(&ka, &kb).len()),
        None => Ok(sumset_hashed(a, b)?.len()),
    }
}

/// `A + q·A`.
pub fn sum_of_dilates(a: &PointSet, q: i64) -> Result<PointSet> {
    check_modulus(q)?;
    a.nonempty()?;
    sumset(a, &dilate(a, q)?)
}

/// `|A + q·A|`.
pub fn sum_of_dilates_len(a: &PointSet, q: i64) -> Result<usize> {
    check_modulus(q)?;
    a.nonempty()?;
    sumset_len(a, &dilate(a, q)?)
}

/// Dimension of the smallest affine subspace containing `A`, computed by
/// fraction-free elimination on the difference vectors `a - a_0`.
pub fn affine_rank(a: &PointSet) -> Result<usize> {
    let base = a.lex_min().ok_or(Error::EmptySet)?;
    let rows: Vec<Vec<i128>> = a.points[1..]
        .iter()
        .map(|p| p.0.iter().zip(&base.0).map(|(&x, &y)| x as i128 - y as i128).collect())
        .collect();
    Ok(bareiss(rows, a.dim)?.rank)
}

/// Image `{M·a}` under an invertible integer matrix.
pub fn apply_linear(a: &PointSet, m: &IntMatrix) -> Result<PointSet> {
    if m.rows() != a.dim || m.cols() != a.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: m.rows().max(m.cols()) });
    }
    if m.det()? == 0 {
        return Err(Error::SingularMatrix);
    }
    let pts = a.points.iter().map(|p| m.mul_vec(&p.0).map(Point)).collect::<Result<Vec<_>>>()?;
    PointSet::new(a.dim, pts)
}

/// Canonical representative under translations and the symmetries of the
/// bounding box (axis permutations and reflections).
///
/// The set is first translated so its coordinate-wise minimum is the origin;
/// the result is the lexicographically smallest sorted point list over all
/// `2^d · d!` box symmetries.
pub fn canonical_form(a: &PointSet) -> Result<PointSet> {
    a.nonempty()?;
    let (lo, hi) = bounds(a);
    let shift = Point(lo.iter().map(|c| c.checked_neg().ok_or(Error::Overflow)).collect::<Result<_>>()?);
    let base = translate(a, &shift)?;
    let widths: Vec<i64> =
        lo.iter().zip(&hi).map(|(l, h)| h.checked_sub(*l).ok_or(Error::Overflow)).collect::<Result<_>>()?;
    Ok(canonical_of_normalized(&base, &widths))
}

/// Canonical form of a set already translated to have minimum at the origin.
pub(crate) fn canonical_of_normalized(base: &PointSet, widths: &[i64]) -> PointSet {
    let dim = base.dim;
    let mut best: Option<Vec<Point>> = None;
    let mut scratch: Vec<Point> = base.points.clone();
    for perm in (0..dim).permutations(dim) {
        for mask in 0u32..(1 << dim) {
            for (dst, src) in scratch.iter_mut().zip(&base.points) {
                for (k, &axis) in perm.iter().enumerate() {
                    let c = src.0[axis];
                    dst.0[k] = if mask & (1 << k) != 0 { widths[axis] - c } else { c };
                }
            }
            scratch.sort_unstable();
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        }
    }
    PointSet::from_sorted_unchecked(dim, best.expect("at least the identity symmetry"))
}
