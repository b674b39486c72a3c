//! Exact computation of sums of dilates `A + q·A = {a + q·b : a, b ∈ A}` for
//! finite `A ⊂ Z^d`, together with the lattice and covering structure that
//! governs how small such a sum can be.
//!
//! ```
//! use dilates::{sum_of_dilates_len, PointSet};
//!
//! let a = PointSet::from_coords(2, vec![vec![0, 1], vec![1, 0], vec![2, 0]]).unwrap();
//! assert_eq!(sum_of_dilates_len(&a, 2).unwrap(), 9);
//! ```

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod pointset;
pub mod search;
pub mod structure;

pub use bounds::{evaluate_bounds, evaluate_bounds_for, BoundReport, BoundRow, Verdict};
pub use constructions::{construct_an, verify_construction, ConstructionRecord};
pub use error::{Error, Result};
pub use lattice::{
    check_dist_lemma, check_dist_lemma_all, coset_partition, difference_lattice, hnf, is_fully_distributed,
    is_reduced, reduce, CosetPartition, DistVerdict, LatticeBasis, ReductionRecord,
};
pub use matrix::IntMatrix;
pub use pointset::{
    affine_rank, apply_linear, canonical_form, dilate, sum_of_dilates, sum_of_dilates_len, sumset, sumset_len,
    translate, Point, PointSet,
};
pub use search::{
    enumerate_canonical, fit_additive_constant, search_min, search_min_with_workers, ExtremalRecord, SearchMode,
    SearchTask,
};
pub use structure::{line_cover_number, min_hyperplane_cover, CoverReport, Direction};
