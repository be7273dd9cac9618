//! Index-level arithmetic for each ring constructor.
//!
//! Every node encodes its elements as integers in `0..size` using a mixed
//! radix: residues for `Z/n`, base-`p` coefficient digits for `GF(p^k)`,
//! row-major base indices for matrices (entry `(0, 0)` least significant) and
//! radix tuples for products (first factor least significant).

use super::spec::{default_modulus, RingSpec};

/// Matrices never exceed 16 entries under the 65536 element cap, but the
/// buffers are sized by the actual entry count anyway.
pub(crate) const MAX_INLINE_ENTRIES: usize = 16;

/// Prime-field extension `GF(p^k)` with optional cached multiplication table.
#[derive(Debug, Clone)]
pub(crate) struct GaloisField {
    pub p: usize,
    pub k: usize,
    pub q: usize,
    /// Monic modulus, ascending coefficients, length `k + 1`.
    pub modulus: Vec<usize>,
    mul_table: Option<Vec<u16>>,
}

impl GaloisField {
    fn new(p: usize, k: usize, modulus: Vec<usize>) -> Self {
        let q = p.pow(k as u32);
        let mut field = GaloisField { p, k, q, modulus, mul_table: None };
        if k > 1 && q <= 256 {
            let mut table = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = field.mul_poly(a, b) as u16;
                }
            }
            field.mul_table = Some(table);
        }
        field
    }

    fn digits(&self, mut a: usize, out: &mut [usize]) {
        for d in out.iter_mut().take(self.k) {
            *d = a % self.p;
            a /= self.p;
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return (a * b) % self.p;
        }
        match &self.mul_table {
            Some(t) => t[a * self.q + b] as usize,
            None => self.mul_poly(a, b),
        }
    }

    /// Schoolbook product followed by reduction modulo the field modulus.
    fn mul_poly(&self, a: usize, b: usize) -> usize {
        let (p, k) = (self.p, self.k);
        let mut da = [0usize; 16];
        let mut db = [0usize; 16];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0usize; 32];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            let shift = top - k;
            for j in 0..=k {
                prod[shift + j] = (prod[shift + j] + p * p - c * self.modulus[j] % p) % p;
            }
        }
        let mut out = 0;
        for i in (0..k).rev() {
            out = out * p + prod[i];
        }
        out
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    ZMod { n: usize },
    Field(GaloisField),
    Matrix { dim: usize, base: Box<Node>, base_size: usize },
    Product { factors: Vec<Node>, sizes: Vec<usize> },
}

impl Node {
    /// Builds the node for an already validated spec.
    pub fn from_spec(spec: &RingSpec) -> Node {
        match spec {
            RingSpec::ZMod(n) => Node::ZMod { n: *n as usize },
            RingSpec::GaloisField { p, k, modulus } => {
                let m = modulus.clone().unwrap_or_else(|| default_modulus(*p, *k));
                Node::Field(GaloisField::new(
                    *p as usize,
                    *k as usize,
                    m.into_iter().map(|c| c as usize).collect(),
                ))
            }
            RingSpec::MatrixRing { size, base } => {
                let base = Node::from_spec(base);
                let base_size = base.size();
                Node::Matrix { dim: *size, base: Box::new(base), base_size }
            }
            RingSpec::Product(fs) => {
                let factors: Vec<Node> = fs.iter().map(Node::from_spec).collect();
                let sizes = factors.iter().map(Node::size).collect();
                Node::Product { factors, sizes }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::ZMod { n } => *n,
            Node::Field(f) => f.q,
            Node::Matrix { dim, base_size, .. } => base_size.pow((dim * dim) as u32),
            Node::Product { sizes, .. } => sizes.iter().product(),
        }
    }

    /// Additive exponent of the ring.
    pub fn characteristic(&self) -> u64 {
        match self {
            Node::ZMod { n } => *n as u64,
            Node::Field(f) => f.p as u64,
            Node::Matrix { base, .. } => base.characteristic(),
            Node::Product { factors, .. } => factors.iter().map(Node::characteristic).fold(1, lcm),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            Node::ZMod { .. } | Node::Field(_) => true,
            Node::Matrix { dim, base, .. } => *dim == 1 && base.is_commutative(),
            Node::Product { factors, .. } => factors.iter().all(Node::is_commutative),
        }
    }

    /// Radices of the additive digits, least significant first.
    pub fn push_radices(&self, out: &mut Vec<usize>) {
        match self {
            Node::ZMod { n } => out.push(*n),
            Node::Field(f) => out.extend(std::iter::repeat(f.p).take(f.k)),
            Node::Matrix { dim, base, .. } => {
                for _ in 0..dim * dim {
                    base.push_radices(out);
                }
            }
            Node::Product { factors, .. } => {
                for f in factors {
                    f.push_radices(out);
                }
            }
        }
    }

    pub fn one(&self) -> usize {
        match self {
            Node::ZMod { .. } | Node::Field(_) => 1,
            Node::Matrix { dim, base, base_size } => {
                let one = base.one();
                let mut idx = 0;
                let mut place = 1;
                for e in 0..dim * dim {
                    if e / dim == e % dim {
                        idx += one * place;
                    }
                    place *= base_size;
                }
                idx
            }
            Node::Product { factors, sizes } => {
                let mut idx = 0;
                let mut place = 1;
                for (f, s) in factors.iter().zip(sizes) {
                    idx += f.one() * place;
                    place *= s;
                }
                idx
            }
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match self {
            Node::ZMod { n } => (a + b) % n,
            Node::Field(f) => f.add(a, b),
            Node::Matrix { dim, base, base_size } => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for _ in 0..dim * dim {
                    out += base.add(a % base_size, b % base_size) * place;
                    a /= base_size;
                    b /= base_size;
                    place *= base_size;
                }
                out
            }
            Node::Product { factors, sizes } => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for (f, &s) in factors.iter().zip(sizes) {
                    out += f.add(a % s, b % s) * place;
                    a /= s;
                    b /= s;
                    place *= s;
                }
                out
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match self {
            Node::ZMod { n } => (n - a % n) % n,
            Node::Field(f) => f.neg(a),
            Node::Matrix { dim, base, base_size } => {
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..dim * dim {
                    out += base.neg(a % base_size) * place;
                    a /= base_size;
                    place *= base_size;
                }
                out
            }
            Node::Product { factors, sizes } => {
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for (f, &s) in factors.iter().zip(sizes) {
                    out += f.neg(a % s) * place;
                    a /= s;
                    place *= s;
                }
                out
            }
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Node::ZMod { n } => (a * b) % n,
            Node::Field(f) => f.mul(a, b),
            Node::Matrix { dim, base, base_size } => {
                let d = *dim;
                let mut ea = [0usize; MAX_INLINE_ENTRIES];
                let mut eb = [0usize; MAX_INLINE_ENTRIES];
                decode_entries(a, *base_size, &mut ea[..d * d]);
                decode_entries(b, *base_size, &mut eb[..d * d]);
                let mut out = 0;
                let mut place = 1;
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0;
                        for k in 0..d {
                            acc = base.add(acc, base.mul(ea[i * d + k], eb[k * d + j]));
                        }
                        out += acc * place;
                        place *= base_size;
                    }
                }
                out
            }
            Node::Product { factors, sizes } => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for (f, &s) in factors.iter().zip(sizes) {
                    out += f.mul(a % s, b % s) * place;
                    a /= s;
                    b /= s;
                    place *= s;
                }
                out
            }
        }
    }

    /// Determinant over a commutative base, by cofactor expansion.
    pub fn determinant(base: &Node, dim: usize, entries: &[usize]) -> usize {
        fn rec(base: &Node, dim: usize, entries: &[usize], rows: &[usize], cols: &mut Vec<usize>) -> usize {
            if rows.is_empty() {
                return base.one();
            }
            let row = rows[0];
            let mut acc = 0;
            for ci in 0..cols.len() {
                let col = cols.remove(ci);
                let a = entries[row * dim + col];
                if a != 0 {
                    let minor = rec(base, dim, entries, &rows[1..], cols);
                    let term = base.mul(a, minor);
                    acc = if ci % 2 == 0 { base.add(acc, term) } else { base.add(acc, base.neg(term)) };
                }
                cols.insert(ci, col);
            }
            acc
        }
        let rows: Vec<usize> = (0..dim).collect();
        let mut cols: Vec<usize> = (0..dim).collect();
        rec(base, dim, entries, &rows, &mut cols)
    }

    /// Unit test that avoids searching for an inverse. `None` means the
    /// structure gives no shortcut (matrices over noncommutative bases).
    pub fn is_unit_structural(&self, a: usize) -> Option<bool> {
        match self {
            Node::ZMod { n } => Some(gcd(a as u64, *n as u64) == 1),
            Node::Field(_) => Some(a != 0),
            Node::Matrix { dim, base, base_size } => {
                if !base.is_commutative() {
                    return None;
                }
                let mut e = [0usize; MAX_INLINE_ENTRIES];
                decode_entries(a, *base_size, &mut e[..dim * dim]);
                base.is_unit_structural(Node::determinant(base, *dim, &e[..dim * dim]))
            }
            Node::Product { factors, sizes } => {
                let mut a = a;
                let mut all = true;
                for (f, &s) in factors.iter().zip(sizes) {
                    all &= f.is_unit_structural(a % s)?;
                    a /= s;
                }
                Some(all)
            }
        }
    }
}

pub(crate) fn decode_entries(mut a: usize, base_size: usize, out: &mut [usize]) {
    for e in out.iter_mut() {
        *e = a % base_size;
        a /= base_size;
    }
}

pub(crate) fn encode_entries(entries: &[usize], base_size: usize) -> usize {
    entries.iter().rev().fold(0, |acc, &e| acc * base_size + e)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_reduction() {
        // x * x = x + 1 modulo x^2 + x + 1; x encodes as 2, x + 1 as 3.
        let f = GaloisField::new(2, 2, vec![1, 1, 1]);
        assert_eq!(f.mul_poly(2, 2), 3);
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn gf9_table_matches_poly() {
        let f = GaloisField::new(3, 2, vec![1, 0, 1]);
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(a, b), f.mul_poly(a, b));
            }
        }
    }

    #[test]
    fn determinant_3x3() {
        let base = Node::ZMod { n: 7 };
        // [[2,0,1],[1,3,2],[1,1,2]] has determinant 6.
        let m = [2, 0, 1, 1, 3, 2, 1, 1, 2];
        assert_eq!(Node::determinant(&base, 3, &m), 6);
    }
}
