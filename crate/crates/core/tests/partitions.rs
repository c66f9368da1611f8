use pn_core::partitions::{
    all_partitions, apply, common_refinement, conjugacy_class_reps, integer_partitions, mobius_partition_lattice,
    refines, Permutation, SetPartition,
};
use proptest::prelude::*;

fn partition_from_labels(labels: &[usize]) -> SetPartition {
    let n = labels.len();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &l) in labels.iter().enumerate() {
        blocks[l].push(i + 1);
    }
    blocks.retain(|b| !b.is_empty());
    SetPartition::from_blocks(n, &blocks).unwrap()
}

fn partition(n: usize) -> impl Strategy<Value = SetPartition> {
    prop::collection::vec(0..n, n).prop_map(|l| partition_from_labels(&l))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn bell_triangle(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    *row.last().unwrap()
}

fn stirling2(n: usize, k: usize) -> u64 {
    match (n, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => k as u64 * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

#[test]
fn counts_match_bell_triangle_and_stirling_numbers() {
    for n in 1..=9 {
        let all = all_partitions(n, true, true).unwrap();
        assert_eq!(all.len() as u64, bell_triangle(n), "n = {n}");
        for k in 1..=n {
            let with_k = all.iter().filter(|p| p.num_blocks() == k).count() as u64;
            assert_eq!(with_k, stirling2(n, k), "S({n}, {k})");
        }
        if n >= 2 {
            assert_eq!(all_partitions(n, false, false).unwrap().len() as u64, bell_triangle(n) - 2);
        }
    }
    assert!(all_partitions(10, true, true).is_err());
    assert!(all_partitions(0, true, true).is_err());
}

#[test]
fn listing_is_a_linear_extension() {
    for n in 1..=6 {
        let all = all_partitions(n, true, true).unwrap();
        assert!(all[0].is_one_block() && all.last().unwrap().is_discrete());
        for (i, a) in all.iter().enumerate() {
            for b in &all[..i] {
                // an earlier entry is never strictly finer than a later one
                let strictly_finer = refines(b, a).unwrap() && !refines(a, b).unwrap();
                assert!(!strictly_finer, "{b} listed before {a}");
            }
        }
    }
}

#[test]
fn common_refinement_is_the_meet() {
    for n in 1..=5 {
        let all = all_partitions(n, true, true).unwrap();
        for a in &all {
            for b in &all {
                let m = common_refinement(&[a.clone(), b.clone()]).unwrap();
                assert!(refines(&m, a).unwrap() && refines(&m, b).unwrap());
                for c in &all {
                    if refines(c, a).unwrap() && refines(c, b).unwrap() {
                        assert!(refines(c, &m).unwrap(), "{c} below {a} and {b} but not {m}");
                    }
                }
            }
        }
    }
}

#[test]
fn mobius_has_alternating_sign_and_factorial_size() {
    let mut fact = 1i64;
    for n in 2..=8 {
        fact *= n as i64 - 1;
        let mu = mobius_partition_lattice(n).unwrap();
        assert_eq!(mu.abs(), fact, "n = {n}");
        assert_eq!(mu.signum(), if n % 2 == 0 { -1 } else { 1 }, "n = {n}");
    }
}

#[test]
fn class_sizes_sum_to_group_order() {
    let mut fact = 1u128;
    for n in 1..=12 {
        fact *= n as u128;
        let reps = conjugacy_class_reps(n).unwrap();
        assert_eq!(reps.len(), integer_partitions(n).len());
        assert_eq!(reps.iter().map(|r| r.1).sum::<u128>(), fact);
        for (sigma, _) in &reps {
            assert_eq!(sigma.cycle_type().iter().sum::<usize>(), n);
        }
    }
}

proptest! {
    #[test]
    fn refinement_is_invariant_under_relabelling(
        (a, b, s) in (1usize..=7).prop_flat_map(|n| (partition(n), partition(n), permutation(n)))
    ) {
        let sa = apply(&s, &a).unwrap();
        let sb = apply(&s, &b).unwrap();
        prop_assert_eq!(refines(&a, &b).unwrap(), refines(&sa, &sb).unwrap());
        prop_assert_eq!(sa.block_sizes().len(), a.num_blocks());
    }

    #[test]
    fn action_is_a_left_action(
        (a, s, t) in (1usize..=7).prop_flat_map(|n| (partition(n), permutation(n), permutation(n)))
    ) {
        let lhs = apply(&s.compose(&t), &a).unwrap();
        let rhs = apply(&s, &apply(&t, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(apply(&s.inverse(), &apply(&s, &a).unwrap()).unwrap(), a);
    }

    #[test]
    fn text_form_round_trips(a in (1usize..=9).prop_flat_map(partition)) {
        let back: SetPartition = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn adjacent_word_is_reduced(s in (1usize..=8).prop_flat_map(permutation)) {
        let word = s.adjacent_word();
        let n = s.n();
        let inversions = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| s.image(i) > s.image(j))
            .count();
        prop_assert_eq!(word.len(), inversions);
        let product = word.iter().fold(Permutation::identity(n), |acc, &i| {
            acc.compose(&Permutation::from_cycles(n, &[vec![i, i + 1]]).unwrap())
        });
        prop_assert_eq!(product, s.clone());
        prop_assert_eq!(s.sign(), if inversions % 2 == 0 { 1 } else { -1 });
    }
}
