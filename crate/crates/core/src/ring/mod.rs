//! Finite unital rings built from `Z/n`, `GF(p^k)`, matrix rings and products.
//!
//! Elements are addressed by a canonical index in `0..|R|` (zero is index 0).
//! The hot paths of the other modules work on raw indices through the
//! `*_idx` methods; the [`Element`] API checks ring membership.

mod ideal;
mod matrix;
pub(crate) mod node;
mod spec;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

pub use ideal::{additive_closure, ell, radical, two_sided_ideal, Ideal};
pub use matrix::{LocalBase, SmithForm};
pub use node::{gcd, lcm};
pub use spec::{RingSpec, DEFAULT_SIZE_CAP};

use node::{decode_entries, encode_entries, Node, MAX_INLINE_ENTRIES};

/// Rings up to this size get full addition and multiplication tables.
pub const TABLE_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("ring has {size} elements, above the cap of {cap}")]
    SizeCapExceeded { size: u128, cap: usize },
    #[error("element belongs to a different ring")]
    ForeignElement,
    #[error("index {index} out of range for a ring of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid element descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("operation {op} needs {operand}")]
    MissingOperand { op: &'static str, operand: &'static str },
}

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

/// Element of a specific [`Ring`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    ring: u64,
    index: u32,
}

impl Element {
    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn ring_id(&self) -> u64 {
        self.ring
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Neg,
    Mul,
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

pub struct Ring {
    id: u64,
    spec: RingSpec,
    root: Node,
    size: usize,
    characteristic: u64,
    radices: Vec<usize>,
    one: usize,
    neg: Vec<u32>,
    tables: Option<Tables>,
    units: OnceLock<FixedBitSet>,
    radical: OnceLock<Ideal>,
}

impl std::fmt::Debug for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ring")
            .field("spec", &self.spec.to_string())
            .field("size", &self.size)
            .field("characteristic", &self.characteristic)
            .finish()
    }
}

impl Ring {
    pub fn build(spec: RingSpec) -> Result<Ring, RingError> {
        Ring::build_with_cap(spec, DEFAULT_SIZE_CAP)
    }

    pub fn build_with_cap(spec: RingSpec, cap: usize) -> Result<Ring, RingError> {
        spec.validate()?;
        let count = spec.element_count().ok_or(RingError::SizeCapExceeded { size: u128::MAX, cap })?;
        // Element indices are stored as u32.
        let cap = cap.min(u32::MAX as usize);
        if count > cap as u128 {
            return Err(RingError::SizeCapExceeded { size: count, cap });
        }
        let root = Node::from_spec(&spec);
        let size = root.size();
        let mut radices = Vec::new();
        root.push_radices(&mut radices);
        let neg = (0..size).map(|a| root.neg(a) as u32).collect();
        let tables = (size <= TABLE_CAP).then(|| {
            let mut add = vec![0u16; size * size];
            let mut mul = vec![0u16; size * size];
            add.par_chunks_mut(size)
                .zip(mul.par_chunks_mut(size))
                .enumerate()
                .for_each(|(a, (add_row, mul_row))| {
                    for b in 0..size {
                        add_row[b] = root.add(a, b) as u16;
                        mul_row[b] = root.mul(a, b) as u16;
                    }
                });
            Tables { add, mul }
        });
        Ok(Ring {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            characteristic: root.characteristic(),
            one: root.one(),
            spec,
            root,
            size,
            radices,
            neg,
            tables,
            units: OnceLock::new(),
            radical: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Additive exponent `n` of the ring: the least positive `n` with `n x = 0` for all `x`.
    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_commutative(&self) -> bool {
        self.root.is_commutative()
    }

    /// Radices of the mixed-radix additive digits, least significant first.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// The elements with a single additive digit equal to one. They generate `(R, +)`.
    pub fn additive_basis(&self) -> Vec<usize> {
        let mut place = 1;
        self.radices
            .iter()
            .map(|r| {
                let e = place;
                place *= r;
                e
            })
            .collect()
    }

    pub fn zero_idx(&self) -> usize {
        0
    }

    pub fn one_idx(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        match &self.tables {
            Some(t) => t.add[a * self.size + b] as usize,
            None => self.root.add(a, b),
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    #[inline]
    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        match &self.tables {
            Some(t) => t.mul[a * self.size + b] as usize,
            None => self.root.mul(a, b),
        }
    }

    /// `k * a` for an integer `k`.
    pub fn scale_idx(&self, k: i64, a: usize) -> usize {
        let n = self.characteristic as i64;
        let k = k.rem_euclid(n);
        let mut acc = 0;
        for _ in 0..k {
            acc = self.add_idx(acc, a);
        }
        acc
    }

    pub fn element(&self, index: usize) -> Result<Element, RingError> {
        if index >= self.size {
            return Err(RingError::IndexOutOfRange { index, size: self.size });
        }
        Ok(Element { ring: self.id, index: index as u32 })
    }

    fn wrap(&self, index: usize) -> Element {
        Element { ring: self.id, index: index as u32 }
    }

    fn check(&self, a: Element) -> Result<usize, RingError> {
        if a.ring != self.id {
            return Err(RingError::ForeignElement);
        }
        Ok(a.index())
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn one(&self) -> Element {
        self.wrap(self.one)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(|i| self.wrap(i))
    }

    pub fn arith(&self, op: ArithOp, a: Element, b: Option<Element>) -> Result<Element, RingError> {
        let a = self.check(a)?;
        let need = |op| b.ok_or(RingError::MissingOperand { op, operand: "a second operand" });
        let r = match op {
            ArithOp::Add => self.add_idx(a, self.check(need("add")?)?),
            ArithOp::Mul => self.mul_idx(a, self.check(need("mul")?)?),
            ArithOp::Neg => self.neg_idx(a),
        };
        Ok(self.wrap(r))
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element, RingError> {
        self.arith(ArithOp::Add, a, Some(b))
    }

    pub fn neg(&self, a: Element) -> Result<Element, RingError> {
        self.arith(ArithOp::Neg, a, None)
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element, RingError> {
        let nb = self.neg(b)?;
        self.add(a, nb)
    }

    pub fn mul(&self, a: Element, b: Element) -> Result<Element, RingError> {
        self.arith(ArithOp::Mul, a, Some(b))
    }

    /// Bitset of all units, computed once.
    ///
    /// Matrices over commutative bases are tested through the determinant,
    /// products componentwise; otherwise an inverse is searched for. A
    /// one-sided inverse suffices in a finite ring.
    pub fn units(&self) -> &FixedBitSet {
        self.units.get_or_init(|| {
            let mut set = FixedBitSet::with_capacity(self.size);
            let structural: Option<Vec<bool>> =
                (0..self.size).map(|a| self.root.is_unit_structural(a)).collect();
            match structural {
                Some(flags) => {
                    for (a, u) in flags.into_iter().enumerate() {
                        set.set(a, u);
                    }
                }
                None => {
                    let one = self.one;
                    let flags: Vec<bool> = (0..self.size)
                        .into_par_iter()
                        .map(|a| (0..self.size).any(|b| self.mul_idx(a, b) == one))
                        .collect();
                    for (a, u) in flags.into_iter().enumerate() {
                        set.set(a, u);
                    }
                }
            }
            set
        })
    }

    pub fn unit_list(&self) -> Vec<usize> {
        self.units().ones().collect()
    }

    pub fn is_unit_idx(&self, a: usize) -> bool {
        self.units().contains(a)
    }

    pub fn is_unit(&self, a: Element) -> Result<bool, RingError> {
        Ok(self.is_unit_idx(self.check(a)?))
    }

    /// Units as checked elements.
    pub fn unit_elements(&self) -> Vec<Element> {
        self.units().ones().map(|i| self.wrap(i)).collect()
    }

    /// Jacobson radical, computed once.
    pub fn radical(&self) -> &Ideal {
        self.radical.get_or_init(|| ideal::compute_radical(self))
    }

    /// Matrix dimension when the ring is `M_d(B)`.
    pub fn matrix_dim(&self) -> Option<usize> {
        match &self.root {
            Node::Matrix { dim, .. } => Some(*dim),
            _ => None,
        }
    }

    /// Base-ring indices of the entries of a matrix, row-major.
    pub fn matrix_entries(&self, a: usize) -> Option<Vec<usize>> {
        match &self.root {
            Node::Matrix { dim, base_size, .. } => {
                let mut out = vec![0; dim * dim];
                decode_entries(a, *base_size, &mut out);
                Some(out)
            }
            _ => None,
        }
    }

    pub fn matrix_from_entries(&self, entries: &[usize]) -> Option<usize> {
        match &self.root {
            Node::Matrix { dim, base_size, .. } if entries.len() == dim * dim => {
                if entries.iter().any(|e| e >= base_size) {
                    return None;
                }
                Some(encode_entries(entries, *base_size))
            }
            _ => None,
        }
    }

    /// Determinant as a base-ring index, for matrices over a commutative base.
    pub fn determinant(&self, a: usize) -> Option<usize> {
        match &self.root {
            Node::Matrix { dim, base, base_size } if base.is_commutative() => {
                let mut e = [0usize; MAX_INLINE_ENTRIES];
                decode_entries(a, *base_size, &mut e[..dim * dim]);
                Some(Node::determinant(base, *dim, &e[..dim * dim]))
            }
            _ => None,
        }
    }

    /// Index of the base-ring identity, for matrix rings.
    pub fn matrix_base_one(&self) -> Option<usize> {
        match &self.root {
            Node::Matrix { base, .. } => Some(base.one()),
            _ => None,
        }
    }

    /// Permutation matrices, when the ring is a matrix ring.
    pub fn permutation_matrices(&self) -> Option<Vec<usize>> {
        let d = self.matrix_dim()?;
        let one = self.matrix_base_one()?;
        let mut perm: Vec<usize> = (0..d).collect();
        let mut out = Vec::new();
        loop {
            let mut entries = vec![0; d * d];
            for (i, &j) in perm.iter().enumerate() {
                entries[i * d + j] = one;
            }
            out.push(self.matrix_from_entries(&entries)?);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out.sort_unstable();
        Some(out)
    }

    /// Structured rendering of an element as JSON: integers for `Z/n` and
    /// prime fields, ascending coefficient lists for `GF(p^k)`, row lists for
    /// matrices and component lists for products.
    pub fn render_idx(&self, a: usize) -> Value {
        render(&self.root, a)
    }

    /// Rendering of a base-ring element of a matrix ring, such as a determinant.
    pub fn render_base_idx(&self, b: usize) -> Option<Value> {
        match &self.root {
            Node::Matrix { base, base_size, .. } if b < *base_size => Some(render(base, b)),
            _ => None,
        }
    }

    pub fn render(&self, a: Element) -> Result<Value, RingError> {
        Ok(self.render_idx(self.check(a)?))
    }

    /// Compact text form of [`Ring::render_idx`].
    pub fn label_idx(&self, a: usize) -> String {
        self.render_idx(a).to_string()
    }

    /// Parses the structured form accepted by [`Ring::render_idx`]. Any ring
    /// also accepts `{"index": i}`; integers for `Z/n` are reduced modulo `n`.
    pub fn parse_idx(&self, v: &Value) -> Result<usize, RingError> {
        if let Some(obj) = v.as_object() {
            let i = obj
                .get("index")
                .and_then(Value::as_u64)
                .filter(|_| obj.len() == 1)
                .ok_or_else(|| RingError::InvalidDescriptor(format!("expected {{\"index\": i}}, got {v}")))?
                as usize;
            if i >= self.size {
                return Err(RingError::IndexOutOfRange { index: i, size: self.size });
            }
            return Ok(i);
        }
        parse(&self.root, v)
    }

    pub fn parse(&self, v: &Value) -> Result<Element, RingError> {
        Ok(self.wrap(self.parse_idx(v)?))
    }

    pub(crate) fn local_base(&self) -> Option<LocalBase> {
        matrix::local_base(&self.root)
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn render(node: &Node, a: usize) -> Value {
    match node {
        Node::ZMod { .. } => Value::from(a),
        Node::Field(f) => {
            if f.k == 1 {
                Value::from(a)
            } else {
                let mut x = a;
                let coeffs: Vec<Value> = (0..f.k)
                    .map(|_| {
                        let c = x % f.p;
                        x /= f.p;
                        Value::from(c)
                    })
                    .collect();
                Value::Array(coeffs)
            }
        }
        Node::Matrix { dim, base, base_size } => {
            let mut e = vec![0; dim * dim];
            decode_entries(a, *base_size, &mut e);
            Value::Array(
                e.chunks(*dim)
                    .map(|row| Value::Array(row.iter().map(|&x| render(base, x)).collect()))
                    .collect(),
            )
        }
        Node::Product { factors, sizes } => {
            let mut x = a;
            Value::Array(
                factors
                    .iter()
                    .zip(sizes)
                    .map(|(f, &s)| {
                        let c = x % s;
                        x /= s;
                        render(f, c)
                    })
                    .collect(),
            )
        }
    }
}

fn parse(node: &Node, v: &Value) -> Result<usize, RingError> {
    let bad = |what: &str| RingError::InvalidDescriptor(format!("expected {what}, got {v}"));
    match node {
        Node::ZMod { n } => {
            let x = v.as_i64().ok_or_else(|| bad("an integer"))?;
            Ok(x.rem_euclid(*n as i64) as usize)
        }
        Node::Field(f) => {
            if let Some(x) = v.as_i64() {
                if f.k == 1 {
                    return Ok(x.rem_euclid(f.p as i64) as usize);
                }
                if x < 0 || x as usize >= f.q {
                    return Err(bad("a field element index"));
                }
                return Ok(x as usize);
            }
            let coeffs = v.as_array().ok_or_else(|| bad("a coefficient list"))?;
            if coeffs.len() > f.k {
                return Err(bad("at most k coefficients"));
            }
            let mut idx = 0;
            for c in coeffs.iter().rev() {
                let c = c.as_i64().ok_or_else(|| bad("integer coefficients"))?;
                idx = idx * f.p + c.rem_euclid(f.p as i64) as usize;
            }
            Ok(idx)
        }
        Node::Matrix { dim, base, base_size } => {
            let rows = v.as_array().filter(|r| r.len() == *dim).ok_or_else(|| bad("a list of matrix rows"))?;
            let mut entries = Vec::with_capacity(dim * dim);
            for row in rows {
                let row = row.as_array().filter(|r| r.len() == *dim).ok_or_else(|| bad("square matrix rows"))?;
                for x in row {
                    entries.push(parse(base, x)?);
                }
            }
            Ok(encode_entries(&entries, *base_size))
        }
        Node::Product { factors, sizes } => {
            let comps = v
                .as_array()
                .filter(|c| c.len() == factors.len())
                .ok_or_else(|| bad("one component per product factor"))?;
            let mut idx = 0;
            let mut place = 1;
            for ((f, &s), c) in factors.iter().zip(sizes).zip(comps) {
                idx += parse(f, c)? * place;
                place *= s;
            }
            Ok(idx)
        }
    }
}
