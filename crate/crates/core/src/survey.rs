//! Search for graphs `Γ(R, U)` that are prime yet have `0` as an eigenvalue.
//!
//! Primeness of `G_R` forces all eigenvalues to be nonzero; whether the same
//! holds for an arbitrary unit subgroup `U` is open. The survey runs over
//! instance families, records the prime verdict next to the multiplicity of
//! `0`, and flags every instance where both occur. It also checks the known
//! direction: a connected, anti-connected, non-prime `Γ(R, U)` has `0` in its
//! spectrum.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cayley::PrimeVerdict;
use crate::instance::{Error, Instance};
use crate::orbits::SubgroupSpec;
use crate::ring::RingSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyInstance {
    pub name: String,
    pub ring: RingSpec,
    pub subgroup: SubgroupSpec,
}

impl SurveyInstance {
    pub fn new(name: impl Into<String>, ring: RingSpec, subgroup: SubgroupSpec) -> SurveyInstance {
        SurveyInstance { name: name.into(), ring, subgroup }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRecord {
    pub name: String,
    pub ring_size: usize,
    pub subgroup_size: usize,
    pub class_count: usize,
    pub connected: bool,
    pub anti_connected: bool,
    pub prime: PrimeVerdict,
    pub zero_multiplicity: usize,
    /// Prime with `0` in the spectrum.
    pub counterexample_candidate: bool,
    /// `None` unless connected, anti-connected and not prime; then whether
    /// `0` is an eigenvalue as it must be.
    pub nonprime_zero_holds: Option<bool>,
}

pub fn survey_instance(inst: &SurveyInstance) -> Result<SurveyRecord, Error> {
    let instance = Instance::build(&inst.ring, &inst.subgroup)?;
    let graph = instance.unit_graph();
    let spectrum = instance.spectrum(&graph)?;
    let zero_multiplicity: usize =
        spectrum.entries().iter().filter(|e| e.eigenvalue.is_zero()).map(|e| e.size).sum();
    let prime = graph.prime_check();
    let (connected, anti_connected) = (prime.hypotheses.connected, prime.hypotheses.anti_connected);
    let nonprime_zero_holds = (connected && anti_connected && prime.verdict == PrimeVerdict::NotPrime)
        .then_some(zero_multiplicity > 0);
    Ok(SurveyRecord {
        name: inst.name.clone(),
        ring_size: graph.order(),
        subgroup_size: instance.subgroup().len(),
        class_count: instance.partition().len(),
        connected,
        anti_connected,
        prime: prime.verdict,
        zero_multiplicity,
        counterexample_candidate: prime.verdict == PrimeVerdict::Prime && zero_multiplicity > 0,
        nonprime_zero_holds,
    })
}

fn primitive_root(p: u64) -> u64 {
    let order = |g: u64| {
        let (mut x, mut k) = (g % p, 1u64);
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    (2..p).find(|&g| order(g) == p - 1).unwrap_or(1)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Default families: full unit groups of `Z/n` and small products, every
/// even-order subgroup of `F_p^×` for small primes, small fields, and the
/// matrix rings with their three standard subgroups.
pub fn default_families() -> Vec<SurveyInstance> {
    let mut out = Vec::new();
    for n in 2..=60u64 {
        out.push(SurveyInstance::new(format!("Z/{n} units"), RingSpec::zmod(n), SubgroupSpec::Units));
    }
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let g = primitive_root(p);
        for m in (2..p - 1).filter(|m| m % 2 == 0 && (p - 1) % m == 0) {
            let h = pow_mod(g, (p - 1) / m, p);
            out.push(SurveyInstance::new(
                format!("Z/{p} subgroup of order {m}"),
                RingSpec::zmod(p),
                SubgroupSpec::Generated(vec![json!(h)]),
            ));
        }
    }
    for (p, k) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (5, 2)] {
        out.push(SurveyInstance::new(format!("GF({p}^{k}) units"), RingSpec::gf(p, k), SubgroupSpec::Units));
    }
    let small = [RingSpec::zmod(2), RingSpec::zmod(3), RingSpec::zmod(4), RingSpec::gf(2, 2), RingSpec::zmod(5)];
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            out.push(SurveyInstance::new(
                format!("{a} x {b} units"),
                RingSpec::product(vec![a.clone(), b.clone()]),
                SubgroupSpec::Units,
            ));
        }
    }
    for base in [RingSpec::gf(2, 1), RingSpec::gf(3, 1), RingSpec::zmod(4)] {
        let m = RingSpec::matrix(2, base);
        out.push(SurveyInstance::new(format!("{m} units"), m.clone(), SubgroupSpec::Units));
        out.push(SurveyInstance::new(format!("{m} special linear"), m.clone(), SubgroupSpec::SpecialLinear));
        out.push(SurveyInstance::new(format!("{m} permutation"), m, SubgroupSpec::PermutationMatrices));
    }
    out
}

/// Surveys every instance that builds; instances rejected by their
/// constructors (for example `SL` without `-1`) are skipped.
pub fn run_survey(instances: &[SurveyInstance]) -> Vec<SurveyRecord> {
    instances.par_iter().filter_map(|i| survey_instance(i).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_unit_graph_has_no_zero() {
        let ring = RingSpec::product(vec![RingSpec::zmod(2), RingSpec::gf(3, 1)]);
        let r = survey_instance(&SurveyInstance::new("Z/2 x F3", ring, SubgroupSpec::Units)).unwrap();
        assert_eq!((r.prime, r.zero_multiplicity, r.counterexample_candidate), (PrimeVerdict::Prime, 0, false));
        let k7 = survey_instance(&SurveyInstance::new("F7", RingSpec::zmod(7), SubgroupSpec::Units)).unwrap();
        assert_eq!((k7.prime, k7.anti_connected), (PrimeVerdict::NotPrime, false));
    }

    #[test]
    fn z4_has_zero_eigenvalue() {
        // C4 = K_{2,2}: not anti-connected, eigenvalues 2, 0, 0, -2.
        let r = survey_instance(&SurveyInstance::new("Z/4", RingSpec::zmod(4), SubgroupSpec::Units)).unwrap();
        assert_eq!(r.zero_multiplicity, 2);
        assert!(!r.anti_connected);
        assert_eq!(r.nonprime_zero_holds, None);
    }

    #[test]
    fn subgroups_of_prime_fields() {
        let fam = default_families();
        let z13: Vec<_> = fam.iter().filter(|i| i.name.starts_with("Z/13 subgroup")).collect();
        // even proper divisors of 12: 2, 4, 6
        assert_eq!(z13.len(), 3);
        assert_eq!(primitive_root(13), 2);
        assert_eq!(pow_mod(2, 12, 13), 1);
    }
}
