//! Compositional description of a finite ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::RingError;

/// Default bound on the number of elements of a ring that may be built.
pub const DEFAULT_SIZE_CAP: usize = 65536;

/// Expression tree describing a finite unital ring.
///
/// The JSON form is externally tagged:
///
/// ```json
/// {"zmod": 4}
/// {"gf": {"p": 2, "k": 2, "modulus": [1, 1, 1]}}
/// {"matrix": {"size": 2, "base": {"zmod": 4}}}
/// {"product": [{"zmod": 2}, {"gf": {"p": 3, "k": 1}}]}
/// ```
///
/// A Galois field modulus is given by its coefficients in ascending degree and
/// must be monic of degree `k`; when omitted the lexicographically smallest
/// monic irreducible polynomial is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum RingSpec {
    #[serde(rename = "zmod")]
    ZMod(u64),
    #[serde(rename = "gf")]
    GaloisField {
        p: u64,
        k: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
    },
    #[serde(rename = "matrix")]
    MatrixRing { size: usize, base: Box<RingSpec> },
    #[serde(rename = "product")]
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn zmod(n: u64) -> Self {
        RingSpec::ZMod(n)
    }

    pub fn gf(p: u64, k: u32) -> Self {
        RingSpec::GaloisField { p, k, modulus: None }
    }

    pub fn matrix(size: usize, base: RingSpec) -> Self {
        RingSpec::MatrixRing { size, base: Box::new(base) }
    }

    pub fn product(factors: Vec<RingSpec>) -> Self {
        RingSpec::Product(factors)
    }

    /// Number of elements, or `None` on overflow.
    pub fn element_count(&self) -> Option<u128> {
        match self {
            RingSpec::ZMod(n) => Some(*n as u128),
            RingSpec::GaloisField { p, k, .. } => (*p as u128).checked_pow(*k),
            RingSpec::MatrixRing { size, base } => {
                let b = base.element_count()?;
                let e = u32::try_from(size.checked_mul(*size)?).ok()?;
                b.checked_pow(e)
            }
            RingSpec::Product(fs) => fs
                .iter()
                .try_fold(1u128, |acc, f| acc.checked_mul(f.element_count()?)),
        }
    }

    /// Checks the structural invariants that do not depend on the size cap.
    pub fn validate(&self) -> Result<(), RingError> {
        match self {
            RingSpec::ZMod(n) => {
                if *n < 2 {
                    return Err(RingError::InvalidSpec(format!("zmod modulus must be >= 2, got {n}")));
                }
            }
            RingSpec::GaloisField { p, k, modulus } => {
                if !is_prime(*p) {
                    return Err(RingError::InvalidSpec(format!("gf characteristic {p} is not prime")));
                }
                if *k == 0 {
                    return Err(RingError::InvalidSpec("gf degree k must be >= 1".into()));
                }
                if let Some(m) = modulus {
                    check_modulus(*p, *k, m)?;
                }
            }
            RingSpec::MatrixRing { size, base } => {
                if *size == 0 {
                    return Err(RingError::InvalidSpec("matrix size must be >= 1".into()));
                }
                base.validate()?;
            }
            RingSpec::Product(fs) => {
                if fs.is_empty() {
                    return Err(RingError::InvalidSpec("product needs at least one factor".into()));
                }
                for f in fs {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Whether multiplication is commutative.
    pub fn is_commutative(&self) -> bool {
        match self {
            RingSpec::ZMod(_) | RingSpec::GaloisField { .. } => true,
            RingSpec::MatrixRing { size, base } => *size == 1 && base.is_commutative(),
            RingSpec::Product(fs) => fs.iter().all(RingSpec::is_commutative),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "Z/{n}"),
            RingSpec::GaloisField { p, k, .. } => {
                if *k == 1 {
                    write!(f, "GF({p})")
                } else {
                    write!(f, "GF({p}^{k})")
                }
            }
            RingSpec::MatrixRing { size, base } => write!(f, "M{size}({base})"),
            RingSpec::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(p: u64, k: u32, m: &[u64]) -> Result<(), RingError> {
    if m.len() != k as usize + 1 {
        return Err(RingError::InvalidSpec(format!(
            "gf modulus must have k + 1 = {} coefficients, got {}",
            k + 1,
            m.len()
        )));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(RingError::InvalidSpec(format!("gf modulus coefficients must lie in 0..{p}")));
    }
    if m[k as usize] != 1 {
        return Err(RingError::InvalidSpec("gf modulus must be monic".into()));
    }
    let poly: Vec<u64> = m.to_vec();
    if !is_irreducible(p, &poly) {
        return Err(RingError::InvalidSpec(format!("gf modulus {m:?} is reducible over Z/{p}")));
    }
    Ok(())
}

/// Remainder of `a` modulo the monic polynomial `m` over Z/p (ascending coefficients).
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - (c * mj) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility over Z/p by trial division with every monic polynomial of
/// degree at most half the degree of `poly`.
pub(crate) fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push(c % p);
                c /= p;
            }
            divisor.push(1);
            if poly_rem(p, poly, &divisor).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `k` over Z/p, ordering
/// candidates by the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
pub(crate) fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for code in 0..count {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            poly.push(c % p);
            c /= p;
        }
        poly.push(1);
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
