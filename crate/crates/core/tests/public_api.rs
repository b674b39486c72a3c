use std::collections::BTreeSet;

use proptest::prelude::*;

use dilates::search::{fit_additive_constant, Observation};
use dilates::{
    affine_rank, canonical_form, construct_an, coset_partition, evaluate_bounds, is_reduced, line_cover_number, reduce,
    search_min, sum_of_dilates, sum_of_dilates_len, PointSet, SearchTask, Verdict,
};

fn points(d: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, d), 1..=12)
        .prop_map(move |v| PointSet::from_coords(d, v).unwrap())
}

proptest! {
    #[test]
    fn reduction_keeps_every_derived_quantity(a in points(2), q in prop::sample::select(vec![2i64, -2, 3, -3, 4])) {
        prop_assume!(affine_rank(&a).unwrap() == 2);
        let out = reduce(&a).unwrap().output;
        prop_assert!(is_reduced(&out).unwrap());
        prop_assert_eq!(sum_of_dilates_len(&out, q).unwrap(), sum_of_dilates_len(&a, q).unwrap());
        prop_assert_eq!(line_cover_number(&out).unwrap().count, line_cover_number(&a).unwrap().count);
        let before = evaluate_bounds(&a, q).unwrap();
        let after = evaluate_bounds(&out, q).unwrap();
        prop_assert_eq!(before.computed, after.computed);
        prop_assert!(after.r >= before.r);
        prop_assert!(after.rows.iter().all(|r| r.verdict != Verdict::Fail));
    }

    #[test]
    fn sum_of_dilates_matches_definition(a in points(3), q in -4i64..=4) {
        prop_assume!(q.abs() > 1);
        let expect: BTreeSet<Vec<i64>> = a
            .iter()
            .flat_map(|x| a.iter().map(move |y| x.coords().iter().zip(y.coords()).map(|(u, v)| u + q * v).collect()))
            .collect();
        let got: BTreeSet<Vec<i64>> = sum_of_dilates(&a, q).unwrap().to_coord_vecs().into_iter().collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn coset_parts_partition_the_set(a in points(2), q in 2i64..=4) {
        let p = coset_partition(&a, q).unwrap();
        prop_assert_eq!(p.reassemble().unwrap(), a.clone());
        prop_assert_eq!(p.parts().iter().map(|x| x.part.len()).sum::<usize>(), a.len());
    }
}

#[test]
fn search_never_beats_construction_by_more_than_floor_allows() {
    let mut obs = Vec::new();
    for n in 3..=6 {
        let r = search_min(&SearchTask::exhaustive(2, 2, n, 3)).unwrap();
        assert!(r.min_value as i64 >= r.floor);
        assert!(r.min_value <= r.construction_value);
        let canon = canonical_form(&construct_an(2, n as i64).unwrap()).unwrap();
        assert_eq!(sum_of_dilates_len(&canon, 2).unwrap(), r.construction_value);
        obs.push(Observation::from(&r));
    }
    // A_N attains 5n - 6 and the floor is 5n - 9
    let fit = fit_additive_constant(obs, 5).unwrap();
    assert!((6..=9).contains(&fit.constant), "{fit:?}");
}
