//! Symmetric Frobenius functionals `ψ: R → Z/n` and the generating character
//! `χ(s) = ζ_n^{ψ(s)}`.
//!
//! The functional is assembled from the ring's constructor tree: the identity
//! on `Z/n`, the absolute trace on `GF(p^k)`, matrix trace followed by the base
//! functional, and for products the cofactor-weighted sum
//! `ψ(x_1, .., x_t) = Σ (n / n_i) ψ_i(x_i)` with `n = lcm(n_i)`.

pub mod cyclo;

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ring::node::Node;
use crate::ring::{Element, Ring, RingError};

pub use cyclo::{cyclotomic_polynomial, CycloError, CycloValue};

/// Rings up to this size are checked on every pair; larger ones on samples.
pub const EXHAUSTIVE_CHECK_CAP: usize = 256;
const SAMPLED_PAIRS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("functional failed verification: {0}")]
    DegenerateFunctional(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Outcome of checking the three functional axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalCheck {
    pub additive: bool,
    pub symmetric: bool,
    pub nondegenerate: bool,
    /// Whether all pairs were checked (otherwise a seeded sample).
    pub exhaustive: bool,
}

impl FunctionalCheck {
    pub fn passed(&self) -> bool {
        self.additive && self.symmetric && self.nondegenerate
    }
}

pub struct FrobeniusFunctional {
    ring: Arc<Ring>,
    modulus: u64,
    table: Vec<u32>,
}

impl std::fmt::Debug for FrobeniusFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrobeniusFunctional").field("ring", &self.ring).field("modulus", &self.modulus).finish()
    }
}

fn psi_node(node: &Node, a: usize) -> u64 {
    match node {
        Node::ZMod { .. } => a as u64,
        Node::Field(f) => {
            if f.k == 1 {
                return a as u64;
            }
            // Tr(a) = a + a^p + ... + a^{p^{k-1}}, a constant polynomial.
            let mut acc = 0;
            let mut power = a;
            for _ in 0..f.k {
                acc = node.add(acc, power);
                let mut next = 1;
                for _ in 0..f.p {
                    next = node.mul(next, power);
                }
                power = next;
            }
            debug_assert!(acc < f.p, "field trace lands in the prime field");
            acc as u64
        }
        Node::Matrix { dim, base, base_size } => {
            let mut x = a;
            let mut tr = 0;
            for e in 0..dim * dim {
                if e / dim == e % dim {
                    tr = base.add(tr, x % base_size);
                }
                x /= base_size;
            }
            psi_node(base, tr)
        }
        Node::Product { factors, sizes } => {
            let n = node.characteristic();
            let mut x = a;
            let mut acc = 0;
            for (f, &s) in factors.iter().zip(sizes) {
                let weight = n / f.characteristic();
                acc = (acc + weight * psi_node(f, x % s)) % n;
                x /= s;
            }
            acc
        }
    }
}

impl FrobeniusFunctional {
    /// Builds the structural functional and verifies it.
    pub fn build(ring: &Arc<Ring>) -> Result<FrobeniusFunctional, FrobeniusError> {
        let table = (0..ring.size()).into_par_iter().map(|a| psi_node(ring.root(), a) as u32).collect();
        let psi = FrobeniusFunctional { ring: ring.clone(), modulus: ring.characteristic(), table };
        let check = psi.verify();
        if !check.passed() {
            return Err(FrobeniusError::DegenerateFunctional(format!("{check:?} on {}", ring.spec())));
        }
        Ok(psi)
    }

    /// Wraps an arbitrary table of residues mod the characteristic, unchecked.
    pub fn from_table(ring: &Arc<Ring>, table: Vec<u32>) -> Result<FrobeniusFunctional, FrobeniusError> {
        if table.len() != ring.size() {
            return Err(FrobeniusError::DegenerateFunctional(format!(
                "table has {} entries for a ring of size {}",
                table.len(),
                ring.size()
            )));
        }
        let n = ring.characteristic();
        let table = table.into_iter().map(|v| (v as u64 % n) as u32).collect();
        Ok(FrobeniusFunctional { ring: ring.clone(), modulus: n, table })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// The order `n` of the roots of unity, equal to the ring characteristic.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn root_order(&self) -> u32 {
        self.modulus as u32
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn value_idx(&self, a: usize) -> u64 {
        self.table[a] as u64
    }

    pub fn value(&self, a: Element) -> Result<u64, FrobeniusError> {
        if a.ring_id() != self.ring.id() {
            return Err(RingError::ForeignElement.into());
        }
        Ok(self.value_idx(a.index()))
    }

    /// `ψ(r s)`, the exponent of `χ_r(s)`.
    #[inline]
    pub fn chi_exponent_idx(&self, r: usize, s: usize) -> u64 {
        self.value_idx(self.ring.mul_idx(r, s))
    }

    pub fn chi_exponent(&self, r: Element, s: Element) -> Result<u64, FrobeniusError> {
        let rs = self.ring.mul(r, s)?;
        self.value(rs)
    }

    fn pairs(&self) -> (bool, Vec<(usize, usize)>) {
        let n = self.ring.size();
        if n <= EXHAUSTIVE_CHECK_CAP {
            (true, (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect())
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed ^ n as u64);
            (false, (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect())
        }
    }

    /// Checks additivity and symmetry (all pairs up to
    /// [`EXHAUSTIVE_CHECK_CAP`] elements, seeded samples beyond) and
    /// nondegeneracy (always complete).
    pub fn verify(&self) -> FunctionalCheck {
        let ring = &self.ring;
        let n = self.modulus;
        let (exhaustive, pairs) = self.pairs();
        let additive = pairs
            .par_iter()
            .all(|&(a, b)| self.value_idx(ring.add_idx(a, b)) == (self.value_idx(a) + self.value_idx(b)) % n);
        let symmetric = pairs.par_iter().all(|&(a, b)| self.chi_exponent_idx(a, b) == self.chi_exponent_idx(b, a));
        // ψ(r x) is additive in r, so testing r over an additive basis decides
        // whether the left ideal R x lies in the kernel.
        let basis = ring.additive_basis();
        let nondegenerate = (1..ring.size())
            .into_par_iter()
            .all(|x| basis.iter().any(|&r| self.chi_exponent_idx(r, x) != 0));
        FunctionalCheck { additive, symmetric, nondegenerate, exhaustive }
    }

    /// Whether `r ↦ χ_r` is injective, i.e. every `r != 0` has some `s`
    /// with `ψ(r s) != 0`.
    pub fn verify_generating(&self) -> bool {
        let basis = self.ring.additive_basis();
        (1..self.ring.size())
            .into_par_iter()
            .all(|r| basis.iter().any(|&s| self.chi_exponent_idx(r, s) != 0))
    }

    /// `Σ_{s ∈ R} χ_r(s)`, exactly.
    pub fn character_sum(&self, r: usize) -> CycloValue {
        CycloValue::from_exponents(self.root_order(), (0..self.ring.size()).map(|s| self.chi_exponent_idx(r, s)))
    }
}
