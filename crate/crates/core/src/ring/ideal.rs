//! Two-sided ideals, the product-length `ell` and the Jacobson radical.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::Ring;

/// Two-sided ideal stored as a membership bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    ring: u64,
    members: FixedBitSet,
    generator: Option<usize>,
}

impl Ideal {
    pub fn ring_id(&self) -> u64 {
        self.ring
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn member_list(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.members.len()
    }

    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    /// Sum of two ideals of the same ring.
    pub fn sum(&self, other: &Ideal, ring: &Ring) -> Ideal {
        let gens = self.members.ones().chain(other.members.ones());
        Ideal { ring: ring.id(), members: additive_closure(ring, gens), generator: None }
    }

    /// Checks closure under addition and two-sided multiplication.
    pub fn is_two_sided_ideal(&self, ring: &Ring) -> bool {
        if !self.members.contains(0) {
            return false;
        }
        let list = self.member_list();
        list.par_iter().all(|&x| {
            list.iter().all(|&y| self.members.contains(ring.add_idx(x, y)))
                && (0..ring.size())
                    .all(|r| self.members.contains(ring.mul_idx(r, x)) && self.members.contains(ring.mul_idx(x, r)))
        })
    }
}

/// Additive subgroup generated by `gens`, grown one cyclic extension at a time:
/// `H + <g>` is the union of the cosets `H + k g` up to the first `k` with `k g ∈ H`.
pub fn additive_closure(ring: &Ring, gens: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(ring.size());
    set.insert(0);
    let mut members = vec![0usize];
    for g in gens {
        if set.contains(g) {
            continue;
        }
        let base = members.clone();
        let mut c = g;
        while !set.contains(c) {
            for &h in &base {
                let x = ring.add_idx(h, c);
                set.insert(x);
                members.push(x);
            }
            c = ring.add_idx(c, g);
        }
    }
    set
}

/// Smallest two-sided ideal containing `x`.
///
/// `a x b` is biadditive in `(a, b)`, so the products of `x` with the
/// additive basis on both sides already generate the ideal additively.
pub fn two_sided_ideal(ring: &Ring, x: usize) -> Ideal {
    let basis = ring.additive_basis();
    let mut gens = Vec::with_capacity(basis.len() * basis.len());
    for &a in &basis {
        let ax = ring.mul_idx(a, x);
        for &b in &basis {
            gens.push(ring.mul_idx(ax, b));
        }
    }
    Ideal { ring: ring.id(), members: additive_closure(ring, gens), generator: Some(x) }
}

/// Smallest `L` such that every element of the ideal generated by `x` is a sum
/// of at most `L` products `a x b`; zero for `x = 0`.
pub fn ell(ring: &Ring, x: usize) -> usize {
    if x == 0 {
        return 0;
    }
    let n = ring.size();
    let target = two_sided_ideal(ring, x).len();
    let mut left = FixedBitSet::with_capacity(n);
    for a in 0..n {
        left.insert(ring.mul_idx(a, x));
    }
    let mut products = FixedBitSet::with_capacity(n);
    for y in left.ones() {
        for b in 0..n {
            products.insert(ring.mul_idx(y, b));
        }
    }
    let products: Vec<usize> = products.ones().collect();
    let mut reach = FixedBitSet::with_capacity(n);
    for &p in &products {
        reach.insert(p);
    }
    let mut length = 1;
    while reach.count_ones(..) < target {
        let mut next = reach.clone();
        for s in reach.ones() {
            for &p in &products {
                next.insert(ring.add_idx(s, p));
            }
        }
        reach = next;
        length += 1;
    }
    length
}

/// Jacobson radical as a checked two-sided ideal (cached on the ring).
pub fn radical(ring: &Ring) -> &Ideal {
    ring.radical()
}

/// `x ∈ Rad(R)` iff `1 + r x` is a unit for every `r`.
pub(super) fn compute_radical(ring: &Ring) -> Ideal {
    let n = ring.size();
    let one = ring.one_idx();
    let units = ring.units();
    let flags: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|x| (0..n).all(|r| units.contains(ring.add_idx(one, ring.mul_idx(r, x)))))
        .collect();
    let mut members = FixedBitSet::with_capacity(n);
    for (x, f) in flags.into_iter().enumerate() {
        members.set(x, f);
    }
    let ideal = Ideal { ring: ring.id(), members, generator: None };
    assert!(ideal.is_two_sided_ideal(ring), "radical failed the two-sided ideal check");
    ideal
}

#[cfg(test)]
mod tests {
    use super::super::RingSpec;
    use super::*;
    use serde_json::json;

    #[test]
    fn principal_ideals() {
        let z4 = Ring::build(RingSpec::zmod(4)).unwrap();
        assert_eq!(two_sided_ideal(&z4, 0).member_list(), vec![0]);
        assert_eq!(two_sided_ideal(&z4, 2).member_list(), vec![0, 2]);
        assert!(two_sided_ideal(&z4, 3).is_whole());

        let m2 = Ring::build(RingSpec::matrix(2, RingSpec::gf(2, 1))).unwrap();
        let e11 = m2.parse_idx(&json!([[1, 0], [0, 0]])).unwrap();
        assert!(two_sided_ideal(&m2, e11).is_whole());

        let m2z4 = Ring::build(RingSpec::matrix(2, RingSpec::zmod(4))).unwrap();
        let d2 = m2z4.parse_idx(&json!([[2, 0], [0, 0]])).unwrap();
        let ideal = two_sided_ideal(&m2z4, d2);
        assert_eq!(ideal.len(), 16);
        assert!(ideal.is_two_sided_ideal(&m2z4));
    }

    #[test]
    fn closure_of_nothing_is_zero() {
        let z6 = Ring::build(RingSpec::zmod(6)).unwrap();
        let s = additive_closure(&z6, std::iter::empty());
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0]);
        let s = additive_closure(&z6, [2, 3]);
        assert_eq!(s.count_ones(..), 6);
    }

    #[test]
    fn ell_values() {
        let z6 = Ring::build(RingSpec::zmod(6)).unwrap();
        for x in 1..6 {
            assert_eq!(ell(&z6, x), 1);
        }
        assert_eq!(ell(&z6, 0), 0);
        let m2 = Ring::build(RingSpec::matrix(2, RingSpec::gf(2, 1))).unwrap();
        assert_eq!(ell(&m2, m2.one_idx()), 1);
    }

    #[test]
    fn radicals() {
        let z4 = Ring::build(RingSpec::zmod(4)).unwrap();
        assert_eq!(radical(&z4).member_list(), vec![0, 2]);
        let m2 = Ring::build(RingSpec::matrix(2, RingSpec::gf(2, 1))).unwrap();
        assert!(radical(&m2).is_zero());
        let z12 = Ring::build(RingSpec::zmod(12)).unwrap();
        assert_eq!(radical(&z12).member_list(), vec![0, 6]);
    }
}
