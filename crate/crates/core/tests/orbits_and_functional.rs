use std::sync::Arc;

use proptest::prelude::*;
use serde_json::json;
use ucayley::frobenius::{CycloValue, FrobeniusFunctional};
use ucayley::orbits::{OrbitPartition, Subgroup, SubgroupSpec};
use ucayley::ring::{gcd, Ring, RingSpec};

fn partition(spec: RingSpec, u: SubgroupSpec) -> Arc<OrbitPartition> {
    let ring = Arc::new(Ring::build(spec).unwrap());
    Arc::new(OrbitPartition::compute(&Arc::new(Subgroup::from_spec(&ring, &u).unwrap())))
}

/// Classes partition the ring, are closed under `x ↦ u x v`, and any two
/// members of a class are related by some `u x v`.
fn check_partition(p: &OrbitPartition) {
    let ring = p.ring();
    let u = p.subgroup().member_list();
    let mut seen = vec![false; ring.size()];
    assert_eq!(p.class(0), &[0]);
    for (i, class) in p.classes().iter().enumerate() {
        assert_eq!(p.rep(i), class[0]);
        for &x in class {
            assert!(!seen[x]);
            seen[x] = true;
            assert_eq!(p.class_of(x), i);
        }
        let rep = class[0];
        let mut orbit: Vec<usize> = u.iter().flat_map(|&a| u.iter().map(move |&b| (a, b))).map(|(a, b)| ring.mul_idx(ring.mul_idx(a, rep), b)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        assert_eq!(&orbit, class);
    }
    assert!(seen.iter().all(|&s| s));
    assert!(p.verify());
}

#[test]
fn partition_axioms_on_standard_instances() {
    let f = |p| RingSpec::gf(p, 1);
    for (spec, u) in [
        (RingSpec::matrix(2, f(2)), SubgroupSpec::Units),
        (RingSpec::matrix(2, f(2)), SubgroupSpec::PermutationMatrices),
        (RingSpec::matrix(2, f(3)), SubgroupSpec::SpecialLinear),
        (RingSpec::matrix(2, RingSpec::zmod(4)), SubgroupSpec::Units),
        (RingSpec::zmod(12), SubgroupSpec::Generated(vec![json!(5)])),
        (RingSpec::product(vec![RingSpec::zmod(4), f(3)]), SubgroupSpec::Units),
    ] {
        check_partition(&partition(spec, u));
    }
}

/// The singular matrices split into the same classes under SL and GL; only
/// the invertible class breaks up, by determinant.
#[test]
fn special_linear_and_general_linear_agree_off_the_units() {
    for p in [3u64, 5] {
        let spec = RingSpec::matrix(2, RingSpec::gf(p, 1));
        let gl = partition(spec.clone(), SubgroupSpec::Units);
        let sl = partition(spec, SubgroupSpec::SpecialLinear);
        let ring = gl.ring();
        let singular = |part: &OrbitPartition| -> Vec<Vec<usize>> {
            part.classes().iter().filter(|c| !ring.is_unit_idx(c[0])).cloned().collect()
        };
        let sl_ring = sl.ring();
        let sl_singular: Vec<Vec<usize>> = sl.classes().iter().filter(|c| !sl_ring.is_unit_idx(c[0])).cloned().collect();
        assert_eq!(singular(&gl), sl_singular);
        let invertible = sl.classes().len() - sl_singular.len();
        assert_eq!(invertible, p as usize - 1, "one SL class per determinant");
    }
}

/// Over `Z/n` with all units, classes are the sets of elements with a given
/// gcd with `n`.
#[test]
fn zmod_classes_are_divisors() {
    for n in 2u64..=40 {
        let p = partition(RingSpec::zmod(n), SubgroupSpec::Units);
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        assert_eq!(p.len(), divisors, "Z/{n}");
        for class in p.classes() {
            let g = gcd(class[0] as u64, n);
            assert!(class.iter().all(|&x| gcd(x as u64, n) == g));
        }
    }
}

fn functional(spec: RingSpec) -> FrobeniusFunctional {
    FrobeniusFunctional::build(&Arc::new(Ring::build(spec).unwrap())).unwrap()
}

/// `Σ_s χ_r(s) = |R|` for `r = 0` and `0` otherwise.
#[test]
fn character_orthogonality() {
    for spec in [
        RingSpec::zmod(12),
        RingSpec::gf(2, 3),
        RingSpec::matrix(2, RingSpec::zmod(4)),
        RingSpec::matrix(2, RingSpec::gf(2, 2)),
        RingSpec::product(vec![RingSpec::zmod(4), RingSpec::gf(3, 2)]),
    ] {
        let psi = functional(spec.clone());
        let n = psi.ring().size() as i64;
        for r in 0..psi.ring().size() {
            let expect = if r == 0 { n } else { 0 };
            assert_eq!(psi.character_sum(r).as_integer().unwrap(), expect, "{spec} r={r}");
        }
    }
}

/// On `M_k(GF(p^m))` the functional is the field trace of the matrix trace.
/// The field trace is recomputed here as `a + a^p + ... + a^(p^(m-1))`.
#[test]
fn matrix_functional_is_composed_trace() {
    for (k, p, m) in [(2usize, 2u64, 2u32), (2, 3, 2), (3, 2, 1), (2, 2, 3), (2, 2, 4)] {
        let base_spec = RingSpec::gf(p, m);
        let field = Ring::build(base_spec.clone()).unwrap();
        let psi = functional(RingSpec::matrix(k, base_spec));
        let ring = psi.ring().clone();
        let frob_trace = |a: usize| -> u64 {
            let (mut x, mut acc) = (a, field.zero_idx());
            for _ in 0..m {
                acc = field.add_idx(acc, x);
                let mut y = field.one_idx();
                for _ in 0..p {
                    y = field.mul_idx(y, x);
                }
                x = y;
            }
            (0..p).find(|&c| field.scale_idx(c as i64, field.one_idx()) == acc).expect("trace lies in the prime field")
        };
        for a in 0..ring.size() {
            let entries = ring.matrix_entries(a).unwrap();
            let diag = (0..k).fold(field.zero_idx(), |s, i| {
                let e = field.parse_idx(&ring.render_base_idx(entries[i * k + i]).unwrap()).unwrap();
                field.add_idx(s, e)
            });
            assert_eq!(psi.value_idx(a), frob_trace(diag), "M{k}(GF({p}^{m})) element {a}");
        }
    }
}

fn cyclo(order: u32) -> impl Strategy<Value = CycloValue> {
    proptest::collection::vec(-5i64..=5, 0..(order as usize + 3)).prop_map(move |c| CycloValue::from_coefficients(order, &c))
}

fn triple() -> impl Strategy<Value = (CycloValue, CycloValue, CycloValue)> {
    prop_oneof![Just(1u32), Just(4), Just(5), Just(6), Just(8), Just(9), Just(12), Just(15)]
        .prop_flat_map(|n| (cyclo(n), cyclo(n), cyclo(n)))
}

proptest! {
    #[test]
    fn cyclotomic_ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.negate().negate(), a.clone());
    }

    /// Evaluation at `e^{2πi/n}` is a ring homomorphism, so equal canonical
    /// forms have equal values and sums and products commute with evaluation.
    #[test]
    fn complex_evaluation_is_a_homomorphism((a, b, _c) in triple()) {
        let close = |x: num_complex::Complex64, y: num_complex::Complex64| (x - y).norm() < 1e-6 * (1.0 + y.norm());
        prop_assert!(close(a.add(&b).unwrap().to_complex(), a.to_complex() + b.to_complex()));
        prop_assert!(close(a.mul(&b).unwrap().to_complex(), a.to_complex() * b.to_complex()));
        prop_assert_eq!(a.is_zero(), a.to_complex().norm() < 1e-9);
    }
}
