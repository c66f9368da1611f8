use std::sync::OnceLock;

use pn_core::complexes::k_n;
use pn_core::lie_module::{
    character, character_via_hopf_trace, extract_ln, inner_product, tensor_sign, IntegralRepresentation, Twist,
};
use pn_core::linalg::{kernel_basis, SparseIntMatrix};
use pn_core::partitions::{mobius_partition_lattice, Permutation};
use proptest::prelude::*;

fn lie(n: usize) -> &'static IntegralRepresentation {
    static CACHE: OnceLock<Vec<IntegralRepresentation>> = OnceLock::new();
    &CACHE.get_or_init(|| (2..=6).map(|n| extract_ln(n).unwrap()).collect())[n - 2]
}

fn values(rep: &IntegralRepresentation) -> Vec<i64> {
    character(rep).unwrap().into_iter().map(|c| c.value).collect()
}

#[test]
fn rank_is_the_mobius_number() {
    for n in 2..=6 {
        let l = lie(n);
        assert_eq!(l.dim as i64, mobius_partition_lattice(n).unwrap().abs());
        l.check_relations().unwrap();
        tensor_sign(l).check_relations().unwrap();
    }
}

#[test]
fn trace_channels_agree() {
    for n in 2..=6 {
        for twist in [Twist::None, Twist::Sign] {
            let rep = match twist {
                Twist::None => lie(n).clone(),
                Twist::Sign => tensor_sign(lie(n)),
            };
            let a = character(&rep).unwrap();
            let b = character_via_hopf_trace(n, twist).unwrap();
            assert_eq!(a, b, "n = {n}, {twist:?}");
        }
    }
}

#[test]
fn known_characters() {
    // classes ordered 1^n, …, (n)
    assert_eq!(values(lie(2)), vec![1, 1]);
    assert_eq!(values(&tensor_sign(lie(2))), vec![1, -1]);
    assert_eq!(values(lie(3)), vec![2, 0, -1]);
    assert_eq!(values(lie(4)), vec![6, 0, -2, 0, 0]);
    assert_eq!(values(&tensor_sign(lie(3))), vec![2, 0, -1]);
}

#[test]
fn characters_are_genuine() {
    for n in 2..=6 {
        let chi = character(lie(n)).unwrap();
        let norm = inner_product(&chi, &chi).unwrap();
        assert!(norm >= 1, "n = {n}");
        let trivial = character(&IntegralRepresentation::rank_one(n, Twist::None)).unwrap();
        let sign = character(&IntegralRepresentation::rank_one(n, Twist::Sign)).unwrap();
        assert!(inner_product(&chi, &trivial).unwrap() >= 0);
        assert!(inner_product(&chi, &sign).unwrap() >= 0);
    }
    // the n-cycle acts as a primitive n-th root of unity on L_n, so there
    // are no invariants for n ≥ 3
    for n in 3..=6 {
        let chi = character(lie(n)).unwrap();
        let trivial = character(&IntegralRepresentation::rank_one(n, Twist::None)).unwrap();
        assert_eq!(inner_product(&chi, &trivial), Some(0));
    }
}

#[test]
fn matrices_agree_with_the_action_on_cycles() {
    for n in 3..=5 {
        let k = k_n(n).unwrap();
        let top = n - 2;
        let basis = kernel_basis(k.boundary(top).unwrap()).unwrap();
        let rep = lie(n);
        for sigma in [Permutation::from_images(&(1..=n).rev().collect::<Vec<_>>()).unwrap(), Permutation::long_cycle(n)] {
            let moved = k.act(&sigma).unwrap()[top].to_matrix().mul(&basis).unwrap();
            let via = basis.mul(&SparseIntMatrix::from_dense(&rep.matrix_of(&sigma).unwrap())).unwrap();
            assert_eq!(moved, via, "n = {n}, {sigma}");
        }
    }
}

#[test]
fn bundle_round_trips() {
    for n in 2..=5 {
        for rep in [lie(n).clone(), tensor_sign(lie(n))] {
            let back = IntegralRepresentation::from_bundle(&rep.to_bundle()).unwrap();
            assert_eq!(back, rep);
        }
    }
    assert!(IntegralRepresentation::from_bundle("garbage").is_err());
}

#[test]
fn out_of_range_degrees_are_rejected() {
    assert!(extract_ln(1).is_err());
    assert!(extract_ln(8).is_err());
    assert!(lie(3).matrix_of(&Permutation::identity(4)).is_err());
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn representation_is_a_homomorphism(
        (s, t) in (2usize..=5).prop_flat_map(|n| (permutation(n), permutation(n)))
    ) {
        let rep = lie(s.n());
        let lhs = rep.matrix_of(&s.compose(&t)).unwrap();
        let rhs = rep.matrix_of(&s).unwrap().mul(&rep.matrix_of(&t).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sign_twist_scales_by_the_sign(s in (2usize..=5).prop_flat_map(permutation)) {
        let rep = lie(s.n());
        let twisted = tensor_sign(rep).matrix_of(&s).unwrap();
        let scaled = rep.matrix_of(&s).unwrap().scale(&s.sign().into());
        prop_assert_eq!(twisted, scaled);
    }
}
