//! Matrix invariants over local principal ideal bases: `Z/p^e` and `GF(q)`.

use serde::Serialize;

use super::node::Node;
use super::Ring;

/// Description of a local principal ideal ring `B` with uniformizer `π`,
/// `π^m = 0` and `π^{m-1} != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalBase {
    /// Residue characteristic.
    pub prime: u64,
    /// Nilpotency index `m` of the maximal ideal (1 for fields).
    pub nilpotency: u32,
    /// Size of the residue field.
    pub residue_size: u64,
}

impl LocalBase {
    pub fn is_field(&self) -> bool {
        self.nilpotency == 1
    }

    /// `π`-adic valuation of a base element, with `v(0) = m`.
    fn valuation(&self, base: &Node, x: usize) -> u32 {
        if x == 0 {
            return self.nilpotency;
        }
        match base {
            Node::ZMod { .. } => {
                let mut v = 0;
                let mut y = x as u64;
                while y % self.prime == 0 {
                    y /= self.prime;
                    v += 1;
                }
                v
            }
            _ => 0,
        }
    }
}

pub(crate) fn local_base(root: &Node) -> Option<LocalBase> {
    let Node::Matrix { base, .. } = root else {
        return None;
    };
    match base.as_ref() {
        Node::Field(f) => Some(LocalBase { prime: f.p as u64, nilpotency: 1, residue_size: f.q as u64 }),
        Node::ZMod { n } => {
            let n = *n as u64;
            let p = (2..=n).find(|d| n % d == 0)?;
            let mut e = 0;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            (m == 1).then_some(LocalBase { prime: p, nilpotency: e, residue_size: p })
        }
        _ => None,
    }
}

/// Smith normal form `diag(π^{a_1}, ..., π^{a_d})` with `a_1 <= ... <= a_d <= m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SmithForm {
    pub exponents: Vec<u32>,
}

impl SmithForm {
    /// Number of unit diagonal entries; the rank when the base is a field.
    pub fn unit_count(&self) -> usize {
        self.exponents.iter().filter(|&&a| a == 0).count()
    }
}

impl Ring {
    /// Smith normal form of a matrix over a local PIR base, by pivoting on an
    /// entry of least valuation and clearing its row and column.
    pub fn smith_form(&self, a: usize) -> Option<SmithForm> {
        let lb = self.local_base()?;
        let Node::Matrix { dim, base, .. } = self.root() else {
            return None;
        };
        let (d, base) = (*dim, base.as_ref());
        let mut m = self.matrix_entries(a)?;
        let divide = |x: usize, y: usize| -> usize {
            (0..base.size())
                .find(|&c| base.mul(c, y) == x)
                .expect("pivot of least valuation divides every remaining entry")
        };
        let mut exps = Vec::with_capacity(d);
        for k in 0..d {
            let mut best = (u32::MAX, k, k);
            for i in k..d {
                for j in k..d {
                    let v = lb.valuation(base, m[i * d + j]);
                    if v < best.0 {
                        best = (v, i, j);
                    }
                }
            }
            let (v, pi, pj) = best;
            if v >= lb.nilpotency {
                exps.extend(std::iter::repeat(lb.nilpotency).take(d - k));
                break;
            }
            for j in 0..d {
                m.swap(k * d + j, pi * d + j);
            }
            for i in 0..d {
                m.swap(i * d + k, i * d + pj);
            }
            let pivot = m[k * d + k];
            for i in k + 1..d {
                let c = divide(m[i * d + k], pivot);
                for j in k..d {
                    let t = base.mul(c, m[k * d + j]);
                    m[i * d + j] = base.add(m[i * d + j], base.neg(t));
                }
            }
            for j in k + 1..d {
                let c = divide(m[k * d + j], pivot);
                for i in k..d {
                    let t = base.mul(m[i * d + k], c);
                    m[i * d + j] = base.add(m[i * d + j], base.neg(t));
                }
            }
            exps.push(v);
        }
        Some(SmithForm { exponents: exps })
    }

    /// Rank of a matrix over a field base.
    pub fn matrix_rank(&self, a: usize) -> Option<usize> {
        let lb = self.local_base()?;
        if !lb.is_field() {
            return None;
        }
        Some(self.smith_form(a)?.unit_count())
    }

    pub fn local_base_info(&self) -> Option<LocalBase> {
        self.local_base()
    }
}
