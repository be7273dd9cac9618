//! Exact sums of `n`-th roots of unity.
//!
//! A value `Σ c_j ζ^j` is stored as its remainder modulo the `n`-th
//! cyclotomic polynomial, i.e. in the basis `1, ζ, ..., ζ^{φ(n)-1}`, with
//! trailing zero coefficients dropped. That representation is unique, so
//! equality and integrality are decided on coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("root-of-unity orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("value is not a rational integer")]
    NotAnInteger,
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial, obtained by
/// dividing `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial order must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    let result = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, result.clone());
    result
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let dq = num.len() - 1 - dd;
    let mut quot = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "division by a cyclotomic factor is exact");
    quot
}

/// Exact element of `Z[ζ_n]`. The derived order is lexicographic on the
/// canonical form and only serves to sort multisets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloValue {
    order: u32,
    coeffs: Vec<i64>,
}

impl CycloValue {
    /// Canonical form of `Σ c_j ζ^j` for arbitrary exponents `j` (taken mod `n`).
    pub fn from_coefficients(order: u32, raw: &[i64]) -> CycloValue {
        let n = order as usize;
        let mut folded = vec![0i64; n];
        for (j, &c) in raw.iter().enumerate() {
            folded[j % n] += c;
        }
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let terms: Vec<(usize, i64)> =
            phi[..deg].iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
        for top in (deg..n).rev() {
            let c = folded[top];
            if c == 0 {
                continue;
            }
            let shift = top - deg;
            folded[top] = 0;
            for &(j, pj) in &terms {
                folded[shift + j] -= c * pj;
            }
        }
        folded.truncate(deg);
        CycloValue::trimmed(order, folded)
    }

    fn trimmed(order: u32, mut coeffs: Vec<i64>) -> CycloValue {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CycloValue { order, coeffs }
    }

    /// `Σ_j counts[j] ζ^j`, where `counts` is indexed by exponent.
    pub fn from_exponent_counts(order: u32, counts: &[i64]) -> CycloValue {
        CycloValue::from_coefficients(order, counts)
    }

    /// Sum of `ζ^e` over a multiset of exponents.
    pub fn from_exponents(order: u32, exps: impl IntoIterator<Item = u64>) -> CycloValue {
        let mut counts = vec![0i64; order as usize];
        for e in exps {
            counts[(e % order as u64) as usize] += 1;
        }
        CycloValue::from_coefficients(order, &counts)
    }

    pub fn zero(order: u32) -> CycloValue {
        CycloValue::from_integer(order, 0)
    }

    pub fn from_integer(order: u32, m: i64) -> CycloValue {
        CycloValue::from_coefficients(order, &[m])
    }

    /// `ζ^e`.
    pub fn root(order: u32, e: u64) -> CycloValue {
        CycloValue::from_exponents(order, [e])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients in the basis `1, ζ, ..., ζ^{φ(n)-1}`, without
    /// trailing zeros (empty for zero).
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    fn same_order(&self, other: &CycloValue) -> Result<(), CycloError> {
        if self.order != other.order {
            return Err(CycloError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycloValue) -> Result<CycloValue, CycloError> {
        self.same_order(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[i64], i: usize| v.get(i).copied().unwrap_or(0);
        let coeffs = (0..len).map(|i| at(&self.coeffs, i) + at(&other.coeffs, i)).collect();
        Ok(CycloValue::trimmed(self.order, coeffs))
    }

    pub fn sub(&self, other: &CycloValue) -> Result<CycloValue, CycloError> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> CycloValue {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> CycloValue {
        CycloValue::trimmed(self.order, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &CycloValue) -> Result<CycloValue, CycloError> {
        self.same_order(other)?;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(CycloValue::zero(self.order));
        }
        let mut prod = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(CycloValue::from_coefficients(self.order, &prod))
    }

    pub fn is_integer(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_integer(&self) -> Result<i64, CycloError> {
        if !self.is_integer() {
            return Err(CycloError::NotAnInteger);
        }
        Ok(self.coeffs.first().copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Numeric value with `ζ = e^{2πi/n}`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * j as f64 / n))
            .sum()
    }
}

/// Serialized as `{"integer": m}` when rational, else `{"cyclo": [c_0, ...]}`.
impl Serialize for CycloValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self.as_integer() {
            Ok(m) => map.serialize_entry("integer", &m)?,
            Err(_) => map.serialize_entry("cyclo", &self.coeffs)?,
        }
        map.end()
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(m) = self.as_integer() {
            return write!(f, "{m}");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (j, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "z{}^{j}", self.order)?,
                _ => write!(f, "{a}*z{}^{j}", self.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(7).len(), 7);
    }

    #[test]
    fn root_sums() {
        let full = CycloValue::from_exponents(4, [0, 1, 2, 3]);
        assert!(full.is_zero());
        let conj = CycloValue::from_exponents(4, [1, 3]);
        assert_eq!(conj.as_integer(), Ok(0));
        let phi3 = CycloValue::from_exponents(3, [1, 2]);
        assert_eq!(phi3.as_integer(), Ok(-1));
        let i = CycloValue::root(4, 1);
        assert!(!i.is_integer());
        assert_eq!(i.as_integer(), Err(CycloError::NotAnInteger));
        assert_eq!(i.mul(&i).unwrap().as_integer(), Ok(-1));
    }

    #[test]
    fn order_mismatch() {
        let a = CycloValue::from_integer(4, 1);
        let b = CycloValue::from_integer(3, 1);
        assert_eq!(a.add(&b), Err(CycloError::OrderMismatch(4, 3)));
    }

    #[test]
    fn canonical_forms_are_trimmed() {
        let v = CycloValue::from_exponents(8, [0, 4]);
        assert!(v.is_zero());
        assert_eq!(v.coefficients(), &[] as &[i64]);
        let w = CycloValue::from_integer(7, 5).add(&CycloValue::root(7, 3)).unwrap();
        assert_eq!(w.sub(&CycloValue::root(7, 3)).unwrap(), CycloValue::from_integer(7, 5));
        // ζ^6 = -(1 + ζ + ... + ζ^5) for n = 7
        assert_eq!(CycloValue::root(7, 6).coefficients(), &[-1, -1, -1, -1, -1, -1]);
        let big = CycloValue::from_exponents(65536, [0, 32768]);
        assert!(big.is_zero());
    }

    #[test]
    fn numeric_value() {
        let v = CycloValue::from_exponents(5, [1, 4]);
        let expected = 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos();
        assert!((v.to_complex().re - expected).abs() < 1e-12);
        assert!(v.to_complex().im.abs() < 1e-12);
    }

    #[test]
    fn display() {
        assert_eq!(CycloValue::from_integer(4, -3).to_string(), "-3");
        assert_eq!(CycloValue::from_coefficients(5, &[1, -2, 1]).to_string(), "1 - 2*z5^1 + z5^2");
    }
}
