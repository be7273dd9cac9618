use std::sync::Arc;

use proptest::prelude::*;
use ucayley::cayley::{ell_by_classes, two_sided_ideals};
use ucayley::orbits::{OrbitPartition, Subgroup};
use ucayley::orbits::SubgroupSpec;
use ucayley::ring::{ell, radical, Ring, RingSpec};

fn small_spec() -> impl Strategy<Value = RingSpec> {
    let leaf = prop_oneof![
        (2u64..=12).prop_map(RingSpec::zmod),
        (1u32..=3).prop_map(|k| RingSpec::gf(2, k)),
        (1u32..=2).prop_map(|k| RingSpec::gf(3, k)),
    ];
    prop_oneof![
        3 => leaf.clone(),
        1 => prop_oneof![Just(RingSpec::zmod(2)), Just(RingSpec::zmod(3)), Just(RingSpec::gf(2, 2))]
            .prop_map(|b| RingSpec::matrix(2, b)),
        1 => (leaf.clone(), leaf).prop_map(|(a, b)| RingSpec::product(vec![a, b])),
    ]
}

fn ring_with_elements() -> impl Strategy<Value = (Arc<Ring>, usize, usize, usize)> {
    small_spec().prop_flat_map(|spec| {
        let ring = Arc::new(Ring::build(spec).unwrap());
        let n = ring.size();
        (Just(ring), 0..n, 0..n, 0..n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((r, a, b, c) in ring_with_elements()) {
        prop_assert_eq!(r.add_idx(a, b), r.add_idx(b, a));
        prop_assert_eq!(r.add_idx(r.add_idx(a, b), c), r.add_idx(a, r.add_idx(b, c)));
        prop_assert_eq!(r.mul_idx(r.mul_idx(a, b), c), r.mul_idx(a, r.mul_idx(b, c)));
        prop_assert_eq!(r.mul_idx(a, r.add_idx(b, c)), r.add_idx(r.mul_idx(a, b), r.mul_idx(a, c)));
        prop_assert_eq!(r.mul_idx(r.add_idx(a, b), c), r.add_idx(r.mul_idx(a, c), r.mul_idx(b, c)));
        prop_assert_eq!(r.mul_idx(r.one_idx(), a), a);
        prop_assert_eq!(r.mul_idx(a, r.one_idx()), a);
        prop_assert_eq!(r.add_idx(a, r.neg_idx(a)), r.zero_idx());
        prop_assert_eq!(r.sub_idx(a, b), r.add_idx(a, r.neg_idx(b)));
        if r.spec().is_commutative() {
            prop_assert_eq!(r.mul_idx(a, b), r.mul_idx(b, a));
        }
    }

    #[test]
    fn descriptors_round_trip((r, a, _b, _c) in ring_with_elements()) {
        prop_assert_eq!(r.parse_idx(&r.render_idx(a)).unwrap(), a);
    }

    /// Units are exactly the elements with a two-sided inverse, found by search.
    #[test]
    fn units_by_search(spec in small_spec()) {
        let r = Ring::build(spec).unwrap();
        let one = r.one_idx();
        for a in 0..r.size() {
            let invertible = (0..r.size()).any(|b| r.mul_idx(a, b) == one && r.mul_idx(b, a) == one);
            prop_assert_eq!(r.is_unit_idx(a), invertible);
        }
    }

    /// `x ∈ rad(R)` iff `1 + r x` is a unit for every `r`; the ideal must also be two-sided.
    #[test]
    fn radical_matches_definition(spec in small_spec()) {
        let r = Ring::build(spec).unwrap();
        let rad = radical(&r);
        prop_assert!(rad.is_two_sided_ideal(&r));
        for x in 0..r.size() {
            let quasi = (0..r.size()).all(|y| r.is_unit_idx(r.add_idx(r.one_idx(), r.mul_idx(y, x))));
            prop_assert_eq!(rad.contains(x), quasi);
        }
    }

    /// Two-sided ideals are fixed by multiplication with units on either side.
    #[test]
    fn ideals_are_unit_invariant(spec in small_spec()) {
        let r = Arc::new(Ring::build(spec).unwrap());
        let part = OrbitPartition::compute(&Arc::new(Subgroup::full_units(&r)));
        let units = r.unit_list();
        for ideal in two_sided_ideals(&part) {
            prop_assert!(ideal.is_two_sided_ideal(&r));
            for x in ideal.member_list() {
                for &u in &units {
                    prop_assert!(ideal.contains(r.mul_idx(u, x)) && ideal.contains(r.mul_idx(x, u)));
                }
            }
        }
    }
}

#[test]
fn m2_z4_radical_and_units() {
    let r = Ring::build(RingSpec::matrix(2, RingSpec::zmod(4))).unwrap();
    assert_eq!(r.size(), 256);
    assert_eq!(radical(&r).len(), 16);
    // |GL2(Z/4)| = 16 · |GL2(F2)| = 16 · 6
    assert_eq!(r.unit_list().len(), 96);
    for x in radical(&r).member_list() {
        let e = r.matrix_entries(x).unwrap();
        assert!(e.iter().all(|&b| b % 2 == 0), "radical member {} has an odd entry", r.label_idx(x));
    }
}

#[test]
fn matrices_over_fields_are_sums_of_two_units() {
    for spec in [
        RingSpec::matrix(2, RingSpec::gf(2, 1)),
        RingSpec::matrix(2, RingSpec::gf(3, 1)),
        RingSpec::matrix(2, RingSpec::gf(2, 2)),
        RingSpec::matrix(3, RingSpec::gf(2, 1)),
    ] {
        let r = Ring::build(spec.clone()).unwrap();
        let units = r.unit_list();
        let mut hit = vec![false; r.size()];
        for &u in &units {
            for &v in &units {
                hit[r.add_idx(u, v)] = true;
            }
        }
        assert!(hit.iter().all(|&h| h), "{spec}");
    }
    // F2 itself is not: 1 = u + v has no solution with u = v = 1.
    let f2 = Ring::build(RingSpec::zmod(2)).unwrap();
    assert_ne!(f2.add_idx(1, 1), 1);
}

#[test]
fn unit_counts_of_matrix_groups() {
    // |GL_n(F_q)| = ∏ (q^n - q^i)
    let gl = |n: u32, q: u64| (0..n).map(|i| q.pow(n) - q.pow(i)).product::<u64>() as usize;
    for (n, p, k) in [(2u32, 2u64, 1u32), (2, 3, 1), (3, 2, 1), (2, 2, 2), (2, 5, 1)] {
        let r = Ring::build(RingSpec::matrix(n as usize, RingSpec::gf(p, k))).unwrap();
        assert_eq!(r.unit_list().len(), gl(n, p.pow(k)), "GL{n}({p}^{k})");
    }
}

/// The class-based length agrees with the elementwise sumset, under the full
/// unit group and under smaller subgroups.
#[test]
fn ell_on_classes_matches_elementwise() {
    let f = |p| RingSpec::gf(p, 1);
    for (spec, u) in [
        (RingSpec::matrix(2, f(2)), SubgroupSpec::Units),
        (RingSpec::matrix(2, f(2)), SubgroupSpec::PermutationMatrices),
        (RingSpec::matrix(2, f(3)), SubgroupSpec::SpecialLinear),
        (RingSpec::matrix(2, RingSpec::zmod(4)), SubgroupSpec::Units),
        (RingSpec::zmod(24), SubgroupSpec::Units),
        (RingSpec::product(vec![RingSpec::zmod(4), f(3)]), SubgroupSpec::Units),
    ] {
        let r = Arc::new(Ring::build(spec.clone()).unwrap());
        let part = OrbitPartition::compute(&Arc::new(Subgroup::from_spec(&r, &u).unwrap()));
        for x in 0..r.size() {
            assert_eq!(ell_by_classes(&part, x), ell(&r, x), "{spec} {u:?} x={}", r.label_idx(x));
        }
    }
}
