mod common;

use circlesquare::geometry::{intersect, GeometryError};
use common::{expected_count, object, same_points};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn intersections_are_exact(a in object(), b in object()) {
        prop_assume!(a.is_some() && b.is_some());
        let (a, b) = (a.unwrap(), b.unwrap());
        let expected = expected_count(&a, &b);
        match intersect(&a, &b) {
            Err(GeometryError::InfiniteIntersection) => prop_assert_eq!(expected, None),
            Err(e) => prop_assert!(false, "unexpected {e}"),
            Ok(points) => {
                prop_assert_eq!(Some(points.len()), expected);
                for p in &points {
                    prop_assert!(a.contains(p) && b.contains(p));
                }
                if points.len() == 2 {
                    prop_assert!(!points[0].same(&points[1]));
                }
                let again = intersect(&a, &b).unwrap();
                prop_assert!(points.iter().zip(&again).all(|(p, q)| p.same(q)));
                let swapped = intersect(&b, &a).unwrap();
                prop_assert!(same_points(&points, &swapped));
            }
        }
    }
}
