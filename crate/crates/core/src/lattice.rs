//! Difference lattices, Hermite normal form, reduction of a point set to one
//! whose differences generate `Z^d`, and partitions modulo `q·Z^d`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_modulus, Error, Result};
use crate::matrix::IntMatrix;
use crate::pointset::{affine_rank, dilate, sumset_len, Point, PointSet};

/// Basis of a full-rank sublattice of `Z^d` in column-style Hermite normal
/// form: lower triangular, positive diagonal, and every entry left of the
/// diagonal reduced into `[0, diagonal)` of its row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBasis {
    basis: IntMatrix,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.basis
    }

    /// Index of the lattice in `Z^d`.
    pub fn det(&self) -> Result<i64> {
        (0..self.dim()).try_fold(1i64, |acc, i| acc.checked_mul(self.basis[(i, i)]).ok_or(Error::Overflow))
    }

    pub fn is_full(&self) -> Result<bool> {
        Ok(self.det()? == 1)
    }

    /// Integer coordinates of `v` in this basis, or `None` when `v` is not a
    /// lattice vector.
    pub fn coordinates(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        let d = self.dim();
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
        let mut x: Vec<i128> = Vec::with_capacity(d);
        for i in 0..d {
            let mut rest = v[i] as i128;
            for (j, xj) in x.iter().enumerate() {
                let t = (self.basis[(i, j)] as i128).checked_mul(*xj).ok_or(Error::Overflow)?;
                rest = rest.checked_sub(t).ok_or(Error::Overflow)?;
            }
            let diag = self.basis[(i, i)] as i128;
            if rest % diag != 0 {
                return Ok(None);
            }
            x.push(rest / diag);
        }
        x.into_iter().map(|c| i64::try_from(c).map_err(Error::from)).collect::<Result<Vec<_>>>().map(Some)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    fn check(&self) {
        let d = self.dim();
        for i in 0..d {
            assert!(self.basis[(i, i)] > 0, "HNF diagonal must be positive: {:?}", self.basis);
            for j in 0..d {
                let e = self.basis[(i, j)];
                if j > i {
                    assert_eq!(e, 0, "HNF must be lower triangular: {:?}", self.basis);
                } else if j < i {
                    assert!((0..self.basis[(i, i)]).contains(&e), "HNF entry not reduced: {:?}", self.basis);
                }
            }
        }
    }
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    Ok((i64::try_from(r0)?, i64::try_from(s0)?, i64::try_from(t0)?))
}

fn combine(x: i64, u: &[i64], y: i64, v: &[i64]) -> Result<Vec<i64>> {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| {
            let l = x.checked_mul(a).ok_or(Error::Overflow)?;
            let r = y.checked_mul(b).ok_or(Error::Overflow)?;
            l.checked_add(r).ok_or(Error::Overflow)
        })
        .collect()
}

/// Subtracts the multiple of `pivot` (pivot entry at `row`) that brings
/// `col[row]` into `[0, pivot[row])`.
fn reduce_against(col: &mut [i64], pivot: &[i64], row: usize) -> Result<()> {
    let k = col[row].div_euclid(pivot[row]);
    if k != 0 {
        let updated = combine(1, col, k.checked_neg().ok_or(Error::Overflow)?, pivot)?;
        col.copy_from_slice(&updated);
    }
    Ok(())
}

/// Hermite normal form of the lattice generated by the columns of `m`.
///
/// Columns are inserted one at a time into a triangular pivot table, with
/// extended-gcd column operations clearing each row below an existing pivot.
pub fn hnf(m: &IntMatrix) -> Result<LatticeBasis> {
    let d = m.rows();
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut pivots: Vec<Option<Vec<i64>>> = vec![None; d];
    for j in 0..m.cols() {
        let mut v = m.column(j);
        for i in 0..d {
            if v[i] == 0 {
                continue;
            }
            match pivots[i].take() {
                None => {
                    pivots[i] = Some(v);
                    break;
                }
                Some(p) => {
                    let (g, s, t) = ext_gcd(p[i], v[i])?;
                    let new_p = combine(s, &p, t, &v)?;
                    let new_v = combine(v[i] / g, &p, -(p[i] / g), &v)?;
                    debug_assert_eq!(new_v[i], 0);
                    pivots[i] = Some(new_p);
                    v = new_v;
                    // keep the remaining entries small using later pivots
                    for k in i + 1..d {
                        if let Some(pk) = &pivots[k] {
                            reduce_against(&mut v, pk, k)?;
                        }
                    }
                }
            }
        }
    }
    let rank = pivots.iter().filter(|p| p.is_some()).count();
    if rank < d {
        return Err(Error::RankDeficient { rank, dim: d });
    }
    let mut cols: Vec<Vec<i64>> = pivots.into_iter().map(|p| p.expect("checked above")).collect();
    for (i, c) in cols.iter_mut().enumerate() {
        if c[i] < 0 {
            for x in c.iter_mut() {
                *x = x.checked_neg().ok_or(Error::Overflow)?;
            }
        }
    }
    for i in 1..d {
        let (left, right) = cols.split_at_mut(i);
        let pivot = &right[0];
        for c in left.iter_mut() {
            reduce_against(c, pivot, i)?;
        }
    }
    let basis = LatticeBasis { basis: IntMatrix::from_columns(d, &cols)? };
    basis.check();
    Ok(basis)
}

fn require_full_rank(a: &PointSet) -> Result<()> {
    let rank = affine_rank(a)?;
    if rank < a.dim() {
        return Err(Error::RankDeficient { rank, dim: a.dim() });
    }
    Ok(())
}

/// HNF basis of the lattice spanned by the differences of `A`.
///
/// Generated by `a - a_0` for the lexicographically smallest `a_0`; every
/// pairwise difference is an integer combination of these.
pub fn difference_lattice(a: &PointSet) -> Result<LatticeBasis> {
    require_full_rank(a)?;
    let anchor = a.lex_min().expect("rank check rejects empty sets");
    let diffs: Vec<Vec<i64>> =
        a.points()[1..].iter().map(|p| p.checked_sub(anchor).map(Point::into_coords)).collect::<Result<_>>()?;
    hnf(&IntMatrix::from_columns(a.dim(), &diffs)?)
}

/// True when the differences of `A` generate all of `Z^d`.
pub fn is_reduced(a: &PointSet) -> Result<bool> {
    difference_lattice(a)?.is_full()
}

/// Outcome of replacing `A` by `L⁻¹(A - a)` where `L` is a basis of the
/// difference lattice of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub input: PointSet,
    pub output: PointSet,
    pub anchor: Point,
    pub transform: IntMatrix,
    /// Index of the difference lattice; 1 when the input was already reduced.
    pub det: i64,
}

/// One-shot reduction. The HNF basis `L` spans the whole difference lattice,
/// so `L⁻¹(A - a)` has difference lattice `Z^d` immediately.
pub fn reduce(a: &PointSet) -> Result<ReductionRecord> {
    let lattice = difference_lattice(a)?;
    let anchor = a.lex_min().expect("nonempty").clone();
    let mut pts = Vec::with_capacity(a.len());
    for p in a {
        let shifted = p.checked_sub(&anchor)?;
        let coords = lattice
            .coordinates(shifted.coords())?
            .unwrap_or_else(|| panic!("difference {shifted:?} outside its own difference lattice"));
        pts.push(Point::new(coords));
    }
    let output = PointSet::new(a.dim(), pts)?;
    debug_assert_eq!(output.len(), a.len());
    let det = lattice.det()?;
    Ok(ReductionRecord { input: a.clone(), output, anchor, transform: lattice.into_matrix(), det })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPart {
    /// Representative in `{0, …, |q|-1}^d`.
    pub residue: Point,
    /// The points of `A` in this coset.
    pub part: PointSet,
    /// `(part - residue) / q`.
    pub quotient: PointSet,
}

/// `A` split by cosets of `q·Z^d`, parts ordered by residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPartition {
    q: i64,
    dim: usize,
    parts: Vec<CosetPart>,
}

impl CosetPartition {
    pub fn q(&self) -> i64 {
        self.q
    }

    /// Number of cosets met.
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[CosetPart] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Option<&CosetPart> {
        self.parts.get(i)
    }

    pub fn min_part_len(&self) -> usize {
        self.parts.iter().map(|p| p.part.len()).min().unwrap_or(0)
    }

    /// Rebuilds `A` as the union of `residue + q·quotient`.
    pub fn reassemble(&self) -> Result<PointSet> {
        let mut pts = Vec::new();
        for p in &self.parts {
            for y in &p.quotient {
                pts.push(p.residue.checked_add(&y.checked_scale(self.q)?)?);
            }
        }
        PointSet::new(self.dim, pts)
    }
}

pub fn coset_partition(a: &PointSet, q: i64) -> Result<CosetPartition> {
    check_modulus(q)?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = q.abs();
    let mut classes: BTreeMap<Point, (Vec<Point>, Vec<Point>)> = BTreeMap::new();
    for x in a {
        let residue = Point::new(x.coords().iter().map(|c| c.rem_euclid(m)).collect());
        let diff = x.checked_sub(&residue)?;
        let y: Vec<i64> = diff
            .coords()
            .iter()
            .map(|&c| {
                assert_eq!(c % q, 0, "residue {residue:?} does not divide out of {x:?}");
                c / q
            })
            .collect();
        let entry = classes.entry(residue).or_default();
        entry.0.push(x.clone());
        entry.1.push(Point::new(y));
    }
    let parts = classes
        .into_iter()
        .map(|(residue, (part, quotient))| {
            Ok(CosetPart { residue, part: PointSet::new(a.dim(), part)?, quotient: PointSet::new(a.dim(), quotient)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetPartition { q, dim: a.dim(), parts })
}

/// True when `A` meets all `|q|^d` cosets of `q·Z^d`.
pub fn is_fully_distributed(a: &PointSet, q: i64) -> Result<bool> {
    check_modulus(q)?;
    let cosets = u32::try_from(a.dim()).ok().and_then(|d| (q.unsigned_abs() as u128).checked_pow(d));
    match cosets {
        // more cosets than points: pigeonhole
        Some(c) if c <= a.len() as u128 => Ok(coset_partition(a, q)?.r() as u128 == c),
        _ => Ok(false),
    }
}

/// Which side of the dichotomy holds for one coset part of a reduced set:
/// the quotient is fully distributed, or
/// `|A_i + q·A| ≥ |A_i + q·A_i| + min_w |A_w|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistVerdict {
    pub part_index: usize,
    pub residue: Point,
    pub quotient_fd: bool,
    /// `|A_i + q·A|`
    pub lhs: usize,
    /// `|A_i + q·A_i| + min_w |A_w|`
    pub rhs: usize,
    pub inequality_holds: bool,
}

impl DistVerdict {
    pub fn holds(&self) -> bool {
        self.quotient_fd || self.inequality_holds
    }
}

pub fn check_dist_lemma(a: &PointSet, q: i64, i: usize) -> Result<DistVerdict> {
    check_modulus(q)?;
    let lattice = difference_lattice(a)?;
    let det = lattice.det()?;
    if det != 1 {
        return Err(Error::NotReduced { det });
    }
    let partition = coset_partition(a, q)?;
    dist_verdict(a, q, &partition, i)
}

/// Verdicts for every part of a reduced set.
pub fn check_dist_lemma_all(a: &PointSet, q: i64) -> Result<Vec<DistVerdict>> {
    check_modulus(q)?;
    let det = difference_lattice(a)?.det()?;
    if det != 1 {
        return Err(Error::NotReduced { det });
    }
    let partition = coset_partition(a, q)?;
    (0..partition.r()).map(|i| dist_verdict(a, q, &partition, i)).collect()
}

fn dist_verdict(a: &PointSet, q: i64, partition: &CosetPartition, i: usize) -> Result<DistVerdict> {
    let part = partition
        .part(i)
        .ok_or_else(|| Error::InvalidParameter(format!("part index {i} out of range (r = {})", partition.r())))?;
    let lhs = sumset_len(&part.part, &dilate(a, q)?)?;
    let rhs = sumset_len(&part.part, &dilate(&part.part, q)?)? + partition.min_part_len();
    let verdict = DistVerdict {
        part_index: i,
        residue: part.residue.clone(),
        quotient_fd: is_fully_distributed(&part.quotient, q)?,
        lhs,
        rhs,
        inequality_holds: lhs >= rhs,
    };
    if !verdict.holds() {
        return Err(Error::TheoremViolation {
            name: "dist".into(),
            detail: format!("part {i}: quotient not fully distributed and {lhs} < {rhs}"),
            witness: Box::new(a.clone()),
        });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::pointset::{apply_linear, sum_of_dilates_len, translate};

    fn set(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::from_coords(dim, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    fn cols(d: usize, c: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_columns(d, c).unwrap()
    }

    #[test]
    fn hnf_examples() {
        let h = hnf(&cols(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(h.matrix(), &IntMatrix::identity(2));
        assert_eq!(h.det().unwrap(), 1);

        let h = hnf(&cols(2, &[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(h.matrix(), &IntMatrix::diagonal(&[2, 2]));
        assert_eq!(h.det().unwrap(), 4);
        assert!(h.contains(&[2, -4]).unwrap());
        assert!(!h.contains(&[1, 0]).unwrap());

        let h = hnf(&cols(2, &[&[2, 0], &[3, 0], &[0, 1]])).unwrap();
        assert_eq!(h.matrix(), &IntMatrix::identity(2));

        assert_eq!(hnf(&cols(2, &[&[1, 2], &[2, 4]])), Err(Error::RankDeficient { rank: 1, dim: 2 }));
    }

    #[test]
    fn hnf_reduces_off_diagonal() {
        let h = hnf(&cols(2, &[&[1, 7], &[0, 3]])).unwrap();
        assert_eq!(h.matrix().to_rows(), vec![vec![1, 0], vec![1, 3]]);
        let h = hnf(&cols(3, &[&[2, 5, -7], &[0, 3, 4], &[0, 0, -5]])).unwrap();
        assert_eq!(h.det().unwrap(), 30);
        for c in [[2, 5, -7], [0, 3, 4], [0, 0, -5]] {
            assert!(h.contains(&c).unwrap());
        }
    }

    #[test]
    fn difference_lattice_examples() {
        assert_eq!(difference_lattice(&set(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap().det().unwrap(), 1);
        let expected = IntMatrix::diagonal(&[2, 2]);
        assert_eq!(difference_lattice(&set(2, &[&[0, 0], &[2, 0], &[0, 2]])).unwrap().matrix(), &expected);
        assert_eq!(difference_lattice(&set(2, &[&[5, 5], &[7, 5], &[5, 7]])).unwrap().matrix(), &expected);
        assert!(matches!(
            difference_lattice(&set(2, &[&[0, 0], &[1, 1], &[2, 2]])),
            Err(Error::RankDeficient { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn is_reduced_examples() {
        assert!(is_reduced(&set(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
        assert!(!is_reduced(&set(2, &[&[0, 0], &[2, 0], &[0, 2]])).unwrap());
        assert!(is_reduced(&set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[3, 0, 0]])).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let a = set(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let rec = reduce(&a).unwrap();
        assert_eq!(rec.output, a);
        assert_eq!(rec.transform, IntMatrix::identity(2));
        assert_eq!(rec.det, 1);

        let a = set(2, &[&[0, 0], &[2, 0], &[0, 2]]);
        let rec = reduce(&a).unwrap();
        assert_eq!(rec.output, set(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(rec.det, 4);
        assert_eq!(sum_of_dilates_len(&a, 2).unwrap(), 9);
        assert_eq!(sum_of_dilates_len(&rec.output, 2).unwrap(), 9);

        assert!(matches!(reduce(&set(2, &[&[0, 0], &[3, 3]])), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn coset_partition_examples() {
        let p = coset_partition(&set(2, &[&[0, 0], &[1, 0], &[2, 1]]), 2).unwrap();
        assert_eq!(p.r(), 3);
        let got: Vec<(Point, PointSet)> = p.parts().iter().map(|c| (c.residue.clone(), c.quotient.clone())).collect();
        assert_eq!(
            got,
            vec![
                (Point::from([0, 0]), set(2, &[&[0, 0]])),
                (Point::from([0, 1]), set(2, &[&[1, 0]])),
                (Point::from([1, 0]), set(2, &[&[0, 0]])),
            ]
        );

        let sq = set(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let p = coset_partition(&sq, 2).unwrap();
        assert_eq!(p.r(), 4);
        assert!(p.parts().iter().all(|c| c.quotient.len() == 1));

        let p = coset_partition(&set(2, &[&[0, 0], &[2, 0], &[4, 2]]), 2).unwrap();
        assert_eq!(p.r(), 1);
        assert_eq!(p.parts()[0].quotient, set(2, &[&[0, 0], &[1, 0], &[2, 1]]));

        assert_eq!(coset_partition(&sq, 1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn coset_partition_negative_q_and_coordinates() {
        let a = set(2, &[&[-1, -2], &[3, 5], &[-4, 0]]);
        let p = coset_partition(&a, -3).unwrap();
        for c in p.parts() {
            assert!(c.residue.coords().iter().all(|&x| (0..3).contains(&x)));
        }
        assert_eq!(p.reassemble().unwrap(), a);
        // -1 = 2 + (-3)·1
        let first = p.parts().iter().find(|c| c.part.contains(&Point::from([-1, -2]))).unwrap();
        assert_eq!(first.residue, Point::from([2, 1]));
        assert!(first.quotient.contains(&Point::from([1, 1])));
    }

    #[test]
    fn fully_distributed_examples() {
        let sq = set(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(is_fully_distributed(&sq, 2).unwrap());
        assert!(!is_fully_distributed(&set(2, &[&[0, 0], &[1, 0], &[0, 1]]), 2).unwrap());
        assert!(!is_fully_distributed(&sq, 3).unwrap());
        assert!(!is_fully_distributed(&sq, i64::MAX).unwrap());
        assert_eq!(is_fully_distributed(&sq, -1), Err(Error::InvalidModulus(-1)));
    }

    #[test]
    fn dist_lemma_examples() {
        let sq = set(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        for i in 0..4 {
            let v = check_dist_lemma(&sq, 2, i).unwrap();
            assert!(!v.quotient_fd);
            assert!(v.inequality_holds);
            // each A_i is one point: |A_i + 2A| = 4, |A_i + 2A_i| + 1 = 2
            assert_eq!((v.lhs, v.rhs), (4, 2));
        }
        let a5: Vec<Vec<i64>> = vec![vec![0, 1], vec![1, 0], vec![2, 0], vec![3, 0], vec![4, 0]];
        let a5 = PointSet::from_coords(2, a5).unwrap();
        let all = check_dist_lemma_all(&a5, 2).unwrap();
        assert_eq!(all.len(), coset_partition(&a5, 2).unwrap().r());
        assert!(all.iter().all(DistVerdict::holds));

        let not_reduced = set(2, &[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(check_dist_lemma(&not_reduced, 2, 0), Err(Error::NotReduced { det: 4 }));
        assert!(matches!(check_dist_lemma(&sq, 2, 9), Err(Error::InvalidParameter(_))));
    }

    fn arb_matrix(d: usize, m: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(prop::collection::vec(-9i64..=9, d), m)
            .prop_map(move |c| IntMatrix::from_columns(d, &c).unwrap())
    }

    fn arb_unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec((0..n, 0..n, -2i64..=2), 0..12).prop_map(move |ops| {
            let mut u = IntMatrix::identity(n);
            for (i, j, c) in ops {
                let mut e = IntMatrix::identity(n);
                if i == j {
                    e[(i, i)] = -1;
                } else {
                    e[(i, j)] = c;
                }
                u = u.mul(&e).unwrap();
            }
            u
        })
    }

    fn arb_full_rank_set(d: usize) -> impl Strategy<Value = PointSet> {
        prop::collection::vec(prop::collection::vec(-6i64..=6, d), d + 1..12)
            .prop_map(move |pts| PointSet::from_coords(d, pts).unwrap())
            .prop_filter("rank d", move |a| affine_rank(a).unwrap() == d)
    }

    proptest! {
        #[test]
        fn hnf_is_unique_under_column_operations(m in arb_matrix(3, 5), u in arb_unimodular(5)) {
            prop_assume!(m.rank().unwrap() == 3);
            let h = hnf(&m).unwrap();
            prop_assert_eq!(&hnf(&m.mul(&u).unwrap()).unwrap(), &h);
            for j in 0..m.cols() {
                prop_assert!(h.contains(&m.column(j)).unwrap());
            }
            // every HNF column lies in the column lattice of m: the HNF of m
            // with the HNF columns appended is unchanged
            let mut all: Vec<Vec<i64>> = (0..m.cols()).map(|j| m.column(j)).collect();
            all.extend((0..3).map(|j| h.matrix().column(j)));
            prop_assert_eq!(&hnf(&IntMatrix::from_columns(3, &all).unwrap()).unwrap(), &h);
            prop_assert_eq!(h.det().unwrap() as i128, {
                let d = h.matrix().det().unwrap() as i128;
                d.abs()
            });
        }

        #[test]
        fn difference_lattice_matches_pairwise_generators(a in arb_full_rank_set(3)) {
            let mut diffs = Vec::new();
            for x in &a {
                for y in &a {
                    diffs.push(x.checked_sub(y).unwrap().into_coords());
                }
            }
            let pairwise = hnf(&IntMatrix::from_columns(3, &diffs).unwrap()).unwrap();
            prop_assert_eq!(difference_lattice(&a).unwrap(), pairwise);
        }

        #[test]
        fn reduce_contract(a in arb_full_rank_set(2), s in prop::collection::vec(1i64..=4, 2), q in 2i64..=3) {
            let scaled = apply_linear(&a, &IntMatrix::diagonal(&s)).unwrap();
            let rec = reduce(&scaled).unwrap();
            prop_assert!(is_reduced(&rec.output).unwrap());
            prop_assert_eq!(
                sum_of_dilates_len(&rec.output, q).unwrap(),
                sum_of_dilates_len(&scaled, q).unwrap()
            );
            // output = L⁻¹(input - anchor)
            let back: Vec<Point> = rec.output.iter()
                .map(|p| Point::new(rec.transform.mul_vec(p.coords()).unwrap()).checked_add(&rec.anchor).unwrap())
                .collect();
            prop_assert_eq!(PointSet::new(2, back).unwrap(), scaled);
        }

        #[test]
        fn partition_reassembles(a in arb_full_rank_set(3), q in prop_oneof![-4i64..=-2, 2i64..=4]) {
            let p = coset_partition(&a, q).unwrap();
            prop_assert_eq!(p.reassemble().unwrap(), a.clone());
            prop_assert_eq!(p.parts().iter().map(|c| c.part.len()).sum::<usize>(), a.len());
            for c in p.parts() {
                prop_assert_eq!(c.part.len(), c.quotient.len());
            }
            prop_assert!(p.r() >= 1 && p.r() as i64 <= q.abs().pow(3));
        }

        #[test]
        fn reduced_sets_meet_d_plus_one_cosets(a in arb_full_rank_set(2), q in prop_oneof![Just(-2i64), 2i64..=4]) {
            let out = reduce(&a).unwrap().output;
            prop_assert!(coset_partition(&out, q).unwrap().r() >= 3);
            let shifted = translate(&out, &Point::from([7, -3])).unwrap();
            prop_assert!(is_reduced(&shifted).unwrap());
        }

        #[test]
        fn dist_lemma_never_fails(a in arb_full_rank_set(2)) {
            let out = reduce(&a).unwrap().output;
            prop_assert!(check_dist_lemma_all(&out, 2).is_ok());
        }
    }
}
