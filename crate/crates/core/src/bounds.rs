//! Lower bounds for `|A + q·A|` evaluated against concrete sets.
//!
//! Bounds with an explicit additive constant produce a PASS/FAIL verdict.
//! Bounds known only up to an unspecified `O(1)` produce a slack value
//! `|A + q·A| - slope·|A|` and can never fail.

use serde::{Deserialize, Serialize};

use crate::error::{check_modulus, Error, Result};
use crate::lattice::coset_partition;
use crate::pointset::{affine_rank, sum_of_dilates_len, PointSet};
use crate::structure::{line_cover_number, min_hyperplane_cover};

fn to_i128(x: usize) -> i128 {
    x as i128
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

/// `d(d+1)/2`.
fn triangular(d: i128) -> i128 {
    let p = d * (d + 1);
    assert_eq!(p % 2, 0);
    p / 2
}

/// `d(d+1)²/2`.
fn q2_constant(d: i128) -> i128 {
    let p = d * (d + 1) * (d + 1);
    assert_eq!(p % 2, 0);
    p / 2
}

/// `|A| + d|B| - d(d+1)/2`, valid when `|A| ≥ |B|` and `A + B` has rank `d`.
pub fn ruzsa_bound(n_a: usize, n_b: usize, d: usize) -> Result<i64> {
    if n_b == 0 || d == 0 {
        return Err(Error::InvalidParameter("ruzsa bound needs |B| >= 1 and d >= 1".into()));
    }
    if n_a < n_b {
        return Err(Error::InvalidParameter(format!("ruzsa bound needs |A| >= |B|, got {n_a} < {n_b}")));
    }
    let d = to_i128(d);
    narrow(to_i128(n_a) + d * to_i128(n_b) - triangular(d))
}

/// `(d+r)|A| - r·d(d+1)/2` for a rank-`d` set meeting `r` cosets.
pub fn lemma_fd_bound(n: usize, r: usize, d: usize) -> Result<i64> {
    if n == 0 || r == 0 || d == 0 {
        return Err(Error::InvalidParameter("coset bound needs n, r, d >= 1".into()));
    }
    if r > n {
        return Err(Error::InvalidParameter(format!("{r} cosets cannot hold only {n} points")));
    }
    let (n, r, d) = (to_i128(n), to_i128(r), to_i128(d));
    narrow((d + r) * n - r * triangular(d))
}

/// `(2d+1)|A| - d(d+1)²/2` for a rank-`d` set.
pub fn q2_bound(n: usize, d: usize) -> Result<i64> {
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidParameter(format!("a rank-{d} set has at least {} points, got {n}", d + 1)));
    }
    let d = to_i128(d);
    narrow((2 * d + 1) * to_i128(n) - q2_constant(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constant {
    Explicit(i64),
    Unspecified,
}

/// A bound of the form `|A + q·A| ≥ slope·|A| - constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub name: String,
    pub slope: i64,
    pub constant: Constant,
    pub hypothesis: String,
}

impl BoundSpec {
    fn slope_only(name: &str, slope: i64, hypothesis: &str) -> Self {
        BoundSpec { name: name.into(), slope, constant: Constant::Unspecified, hypothesis: hypothesis.into() }
    }
}

/// Bounds whose additive constant is not known, applicable to every rank-`d`
/// set for the given `q` and `d`.
pub fn slope_catalog(q: i64, d: usize) -> Result<Vec<BoundSpec>> {
    check_modulus(q)?;
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let q = q.abs();
    let d = i64::try_from(d)?;
    let mut specs = vec![BoundSpec::slope_only("baseline", q + 1, "|q| > 1")];
    if d >= 2 {
        specs.push(BoundSpec::slope_only("main", q + d + 1, "rank d >= 2"));
    }
    if d == 3 {
        specs.push(BoundSpec::slope_only("d3", q + 5, "rank 3, d = 3"));
    }
    if d >= 2 {
        specs.push(BoundSpec::slope_only("conjecture", q + 2 * d - 1, "rank d >= 2 (conjectured)"));
    }
    Ok(specs)
}

/// Slope-only bounds that need a structural hypothesis on `A`.
fn structural_catalog(q: i64, d: usize) -> Vec<BoundSpec> {
    let q = q.abs();
    let di = d as i64;
    let mut specs = vec![BoundSpec::slope_only("special", q + 2 * di - 1, "rank d, A in d parallel lines")];
    if d == 3 {
        specs.push(BoundSpec::slope_only("two_hyperplanes", q + 5, "rank 3, A in 2 parallel planes"));
        specs.push(BoundSpec::slope_only("four_lines", q + 5, "rank 3, A in 4 parallel lines"));
    }
    specs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Slack,
    #[serde(rename = "N/A")]
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub slope: i64,
    pub constant: Constant,
    pub hypothesis: String,
    /// The bound for explicit rows, `slope·|A|` for slope-only rows.
    pub required: Option<i64>,
    pub verdict: Verdict,
    /// `computed - required`.
    pub slack: Option<i64>,
}

impl BoundRow {
    fn not_applicable(spec: BoundSpec) -> Self {
        BoundRow {
            name: spec.name,
            slope: spec.slope,
            constant: spec.constant,
            hypothesis: spec.hypothesis,
            required: None,
            verdict: Verdict::NotApplicable,
            slack: None,
        }
    }

    fn evaluate(spec: BoundSpec, n: usize, computed: usize) -> Result<Self> {
        let scaled = spec.slope.checked_mul(i64::try_from(n)?).ok_or(Error::Overflow)?;
        let (required, verdict) = match spec.constant {
            Constant::Explicit(c) => {
                let req = scaled.checked_sub(c).ok_or(Error::Overflow)?;
                (req, if computed as i64 >= req { Verdict::Pass } else { Verdict::Fail })
            }
            Constant::Unspecified => (scaled, Verdict::Slack),
        };
        Ok(BoundRow {
            name: spec.name,
            slope: spec.slope,
            constant: spec.constant,
            hypothesis: spec.hypothesis,
            required: Some(required),
            verdict,
            slack: Some(i64::try_from(computed)? - required),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    pub rank: usize,
    pub r: usize,
    pub q: i64,
    /// `|A + q·A|`
    pub computed: usize,
    /// Minimum number of parallel lines covering `A`, when `|A| ≥ 2`.
    pub line_cover: Option<usize>,
    /// Minimum number of parallel hyperplanes, for rank-`d` sets with `2 ≤ d ≤ 3`.
    pub hyperplane_cover: Option<usize>,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn row(&self, name: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Runs every bound against `A` with `|A + q·A|` computed by brute force.
pub fn evaluate_bounds(a: &PointSet, q: i64) -> Result<BoundReport> {
    let computed = sum_of_dilates_len(a, q)?;
    evaluate_bounds_for(a, q, computed)
}

/// Runs every bound against `A` using a caller-supplied value of `|A + q·A|`.
pub fn evaluate_bounds_for(a: &PointSet, q: i64, computed: usize) -> Result<BoundReport> {
    check_modulus(q)?;
    let d = a.dim();
    let n = a.len();
    let rank = affine_rank(a)?;
    let r = coset_partition(a, q)?.r();
    let full = rank == d;

    let line_cover = if n >= 2 { Some(line_cover_number(a)?.count) } else { None };
    let hyperplane_cover = if full && (2..=3).contains(&d) { Some(min_hyperplane_cover(a)?.count) } else { None };

    let di = i64::try_from(d)?;
    let tri = narrow(triangular(to_i128(d)))?;
    let explicit = [
        BoundSpec {
            name: "ruzsa".into(),
            slope: di + 1,
            constant: Constant::Explicit(tri),
            hypothesis: "B = q·A, |A| >= |B|, A + B of rank d".into(),
        },
        BoundSpec {
            name: "lemma_fd".into(),
            slope: di + i64::try_from(r)?,
            constant: Constant::Explicit(narrow(to_i128(r) * triangular(to_i128(d)))?),
            hypothesis: "rank d, r cosets of q·Z^d".into(),
        },
        BoundSpec {
            name: "q2".into(),
            slope: 2 * di + 1,
            constant: Constant::Explicit(narrow(q2_constant(to_i128(d)))?),
            hypothesis: "rank d, |q| > 1".into(),
        },
    ];

    let mut rows = Vec::new();
    for spec in explicit {
        // the sumset A + q·A has the same rank as A
        rows.push(if full { BoundRow::evaluate(spec, n, computed)? } else { BoundRow::not_applicable(spec) });
    }
    for spec in slope_catalog(q, d)? {
        let applies = match spec.name.as_str() {
            "baseline" => true,
            _ => full,
        };
        rows.push(if applies { BoundRow::evaluate(spec, n, computed)? } else { BoundRow::not_applicable(spec) });
    }
    if d >= 2 {
        for spec in structural_catalog(q, d) {
            let applies = full
                && match spec.name.as_str() {
                    "special" => line_cover.is_some_and(|c| c <= d),
                    "two_hyperplanes" => hyperplane_cover.is_some_and(|c| c <= 2),
                    "four_lines" => line_cover.is_some_and(|c| c <= 4),
                    _ => false,
                };
            rows.push(if applies { BoundRow::evaluate(spec, n, computed)? } else { BoundRow::not_applicable(spec) });
        }
    }
    Ok(BoundReport { n, d, rank, r, q, computed, line_cover, hyperplane_cover, rows })
}
