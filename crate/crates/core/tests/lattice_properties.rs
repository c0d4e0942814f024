use fhe_lattice::arith::norm_sq;
use fhe_lattice::lattice::{
    determinant, enumerate_shortest, gram_matrix, is_lll_reduced, lll_reduce, mat_mul, shortest_vector, volume, Delta,
    LatticeBasis,
};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

/// Square bases with full rank, entries in `[-bound, bound]`.
fn basis(max_dim: usize, bound: i64) -> impl Strategy<Value = LatticeBasis> {
    (2..=max_dim)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-bound..=bound, n), n))
        .prop_filter_map("singular", |rows| {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            let b = LatticeBasis::new(rows).ok()?;
            (determinant(b.rows()).ok()? != BigInt::from(0)).then_some(b)
        })
}

fn deltas() -> impl Strategy<Value = Delta> {
    prop_oneof![Just(Delta::default()), Just(Delta::new(99, 100).unwrap()), Just(Delta::new(1, 2).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_reduced_and_unimodular(b in basis(6, 1 << 20), delta in deltas()) {
        let out = lll_reduce(&b, delta).unwrap();
        prop_assert!(is_lll_reduced(&out.reduced, delta).unwrap());
        prop_assert!(determinant(&out.transform).unwrap().abs().is_one());
        prop_assert_eq!(mat_mul(&out.transform, b.rows()).unwrap(), out.reduced.rows().to_vec());
    }

    #[test]
    fn reduction_preserves_the_lattice(b in basis(5, 1000)) {
        let out = lll_reduce(&b, Delta::default()).unwrap();
        prop_assert_eq!(volume(&out.reduced).unwrap().gram_det, volume(&b).unwrap().gram_det);
        for row in b.rows() {
            prop_assert!(out.reduced.coefficients_of(row).unwrap().is_some());
        }
    }

    #[test]
    fn reduction_is_idempotent(b in basis(6, 1 << 16)) {
        let once = lll_reduce(&b, Delta::default()).unwrap();
        let twice = lll_reduce(&once.reduced, Delta::default()).unwrap();
        prop_assert_eq!(twice.swaps, 0);
        prop_assert_eq!(&twice.reduced, &once.reduced);
    }

    #[test]
    fn first_vector_meets_the_worst_case_bound(b in basis(5, 1 << 12)) {
        let n = b.rank() as u32;
        let out = lll_reduce(&b, Delta::default()).unwrap();
        let lambda1 = norm_sq(&shortest_vector(&out.reduced).unwrap());
        // ‖b1‖² ≤ 2^{n-1}·λ1²
        prop_assert!(norm_sq(out.reduced.row(0)) <= lambda1 << (n - 1));
    }

    #[test]
    fn gram_matrix_is_invariant_up_to_transform(b in basis(4, 100)) {
        let out = lll_reduce(&b, Delta::default()).unwrap();
        let g = gram_matrix(b.rows());
        let u = &out.transform;
        let ut: Vec<Vec<BigInt>> = (0..u.len()).map(|j| u.iter().map(|r| r[j].clone()).collect()).collect();
        let expected = mat_mul(&mat_mul(u, &g).unwrap(), &ut).unwrap();
        prop_assert_eq!(gram_matrix(out.reduced.rows()), expected);
    }
}

#[test]
fn certified_enumeration_matches_a_wide_search() {
    let b = LatticeBasis::from_i64(&[&[7, 3, 1], &[2, -8, 5], &[-4, 1, 9]]).unwrap();
    let out = lll_reduce(&b, Delta::default()).unwrap();
    let a = norm_sq(&shortest_vector(&out.reduced).unwrap());
    let wide = norm_sq(&enumerate_shortest(&b, 400).unwrap());
    assert_eq!(a, wide);
}
