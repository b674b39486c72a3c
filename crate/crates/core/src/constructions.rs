//! The family `A_N = {e_1, …, e_d} ∪ {n·e_1 : 0 < n < N}`, a near-one-
//! dimensional set with small sum of dilates.

use serde::{Deserialize, Serialize};

use crate::error::{check_modulus, Error, Result};
use crate::pointset::{affine_rank, sum_of_dilates_len, Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: i64,
    pub q: i64,
}

impl FamilyParams {
    pub fn new(d: usize, n: i64, q: i64) -> Result<Self> {
        check_family(d, n)?;
        check_modulus(q)?;
        Ok(FamilyParams { d, n, q })
    }

    /// `|A_N| = N + d - 2`; `e_1` is counted once.
    pub fn set_len(&self) -> usize {
        an_len(self.d, self.n)
    }
}

fn check_family(d: usize, n: i64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("A_N needs d >= 2, got {d}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("A_N needs N >= 2, got {n}")));
    }
    Ok(())
}

pub fn an_len(d: usize, n: i64) -> usize {
    n as usize + d - 2
}

/// `A_2 = {e_1, …, e_d}` has only `d` points and affine rank `d - 1`.
pub fn below_rank_floor(d: usize, n: i64) -> bool {
    an_len(d, n) < d + 1
}

pub fn construct_an(d: usize, n: i64) -> Result<PointSet> {
    check_family(d, n)?;
    let mut pts: Vec<Point> = (0..d).map(|i| Point::basis(d, i)).collect();
    pts.extend((2..n).map(|k| {
        let mut p = vec![0; d];
        p[0] = k;
        Point::new(p)
    }));
    let set = PointSet::new(d, pts)?;
    debug_assert_eq!(set.len(), an_len(d, n));
    Ok(set)
}

/// `(|q| + 2d - 1)|A_N| - (d-1)(|q| - 2(d-1) + 1)`, an upper bound for
/// `|A_N + q·A_N|`.
pub fn example_upper_bound(d: usize, n: i64, q: i64) -> Result<i64> {
    check_family(d, n)?;
    check_modulus(q)?;
    let (d, q) = (d as i128, q.unsigned_abs() as i128);
    let len = an_len(d as usize, n) as i128;
    let v = (q + 2 * d - 1) * len - (d - 1) * (q - 2 * (d - 1) + 1);
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// `(2d+1)|A_N| - d(d+1)`, the exact value of `|A_N ± 2·A_N|`.
pub fn q2_identity_value(d: usize, n: i64) -> Result<i64> {
    check_family(d, n)?;
    let d = d as i64;
    Ok((2 * d + 1) * an_len(d as usize, n) as i64 - d * (d + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    pub params: FamilyParams,
    pub size: usize,
    pub rank: usize,
    pub below_rank_floor: bool,
    /// `|A_N + q·A_N|`
    pub computed: usize,
    pub upper_bound: i64,
    /// Expected exact value, present when `|q| = 2`.
    pub identity: Option<i64>,
}

/// Computes `|A_N + q·A_N|` and checks it against the upper bound and,
/// for `|q| = 2`, the exact identity.
pub fn verify_construction(d: usize, n: i64, q: i64) -> Result<ConstructionRecord> {
    let params = FamilyParams::new(d, n, q)?;
    let set = construct_an(d, n)?;
    let computed = sum_of_dilates_len(&set, q)?;
    let upper_bound = example_upper_bound(d, n, q)?;
    let identity = if q.abs() == 2 { Some(q2_identity_value(d, n)?) } else { None };
    let violation = |name: &str, detail: String| Error::TheoremViolation {
        name: name.into(),
        detail,
        witness: Box::new(set.clone()),
    };
    if computed as i64 > upper_bound {
        return Err(violation("example_upper_bound", format!("|A+qA| = {computed} > {upper_bound}")));
    }
    if let Some(expected) = identity {
        if computed as i64 != expected {
            return Err(violation("q2_identity", format!("|A+qA| = {computed} != {expected}")));
        }
    }
    Ok(ConstructionRecord {
        params,
        size: set.len(),
        rank: affine_rank(&set)?,
        below_rank_floor: below_rank_floor(d, n),
        computed,
        upper_bound,
        identity,
    })
}
