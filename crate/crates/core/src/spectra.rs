//! Superclass character sums and exact spectra of U-unitary Cayley graphs.
//!
//! For class representatives `x_i` the table entry
//! `Ω_{ji} = Σ_{k ∈ K_j} χ(x_i k)` does not depend on the representative, and
//! the eigenvalue of `Γ(R, S)` on the character `χ_{x_i}` is the sum of the
//! rows `j` with `K_j ⊆ S`, with multiplicity `|K_i|`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cayley::CayleyGraph;
use crate::frobenius::{CycloValue, FrobeniusFunctional};
use crate::orbits::{ClassSelection, OrbitPartition};

/// Largest `m · n` (classes times root order) for which the table is built.
pub const OMEGA_COUNT_CAP: usize = 1 << 26;
/// Superclass axioms are checked on every element up to this ring size.
pub const AXIOM_EXHAUSTIVE_CAP: usize = 4096;
/// Dense floating eigen-decomposition cap.
pub const DENSE_ORACLE_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("spectrum is not integral")]
    NonIntegralSpectrum,
    #[error("functional and partition belong to different rings")]
    RingMismatch,
    #[error("table entry for class {0} depends on the chosen representative")]
    RepresentativeDependence(usize),
    #[error("too large: {0}")]
    TooLarge(String),
}

/// The `m × m` table of exact superclass character sums.
#[derive(Debug)]
pub struct OmegaTable {
    partition: Arc<OrbitPartition>,
    functional: Arc<FrobeniusFunctional>,
    /// `entries[j][i] = Ω_{ji}`.
    entries: Vec<Vec<CycloValue>>,
}

/// Column `i` computed from an arbitrary member `x` of `K_i`.
fn column(partition: &OrbitPartition, psi: &FrobeniusFunctional, x: usize) -> Vec<CycloValue> {
    let ring = partition.ring();
    let n = psi.modulus() as usize;
    let m = partition.len();
    let mut counts = vec![0i64; m * n];
    for k in 0..ring.size() {
        let j = partition.class_of(k);
        counts[j * n + psi.chi_exponent_idx(x, k) as usize] += 1;
    }
    counts.chunks(n).map(|c| CycloValue::from_exponent_counts(psi.root_order(), c)).collect()
}

impl OmegaTable {
    /// Builds the table column by column in parallel and recomputes every
    /// column of a class with more than one member from its largest member.
    pub fn build(
        partition: &Arc<OrbitPartition>,
        functional: &Arc<FrobeniusFunctional>,
    ) -> Result<OmegaTable, SpectraError> {
        if partition.ring().id() != functional.ring().id() {
            return Err(SpectraError::RingMismatch);
        }
        let m = partition.len();
        let work = m.saturating_mul(functional.modulus() as usize);
        if work > OMEGA_COUNT_CAP {
            return Err(SpectraError::TooLarge(format!("{m} classes with root order {}", functional.modulus())));
        }
        let columns: Vec<Result<Vec<CycloValue>, SpectraError>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let col = column(partition, functional, partition.rep(i));
                let class = partition.class(i);
                if class.len() > 1 && column(partition, functional, class[class.len() - 1]) != col {
                    return Err(SpectraError::RepresentativeDependence(i));
                }
                Ok(col)
            })
            .collect();
        let columns = columns.into_iter().collect::<Result<Vec<_>, _>>()?;
        let entries = (0..m).map(|j| columns.iter().map(|c| c[j].clone()).collect()).collect();
        Ok(OmegaTable { partition: partition.clone(), functional: functional.clone(), entries })
    }

    pub fn partition(&self) -> &Arc<OrbitPartition> {
        &self.partition
    }

    pub fn functional(&self) -> &Arc<FrobeniusFunctional> {
        &self.functional
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Ω_{ji}`.
    pub fn entry(&self, j: usize, i: usize) -> &CycloValue {
        &self.entries[j][i]
    }

    /// Spectrum of the graph whose connection set is the given union of classes.
    pub fn spectrum(&self, selection: &ClassSelection) -> Spectrum {
        let n = self.functional.root_order();
        let entries: Vec<SpectrumEntry> = (0..self.len())
            .map(|i| {
                let mut lambda = CycloValue::zero(n);
                for &j in selection.classes() {
                    lambda = lambda.add(&self.entries[j][i]).expect("uniform root order");
                }
                SpectrumEntry {
                    class: i,
                    rep: self.partition.rep(i),
                    size: self.partition.class_size(i),
                    eigenvalue: lambda,
                }
            })
            .collect();
        Spectrum::new(n, entries)
    }

    /// Checks the four superclass axioms directly.
    pub fn check_axioms(&self) -> SupercharacterCheck {
        check_axioms(&self.partition, &self.functional)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub class: usize,
    pub rep: usize,
    pub size: usize,
    pub eigenvalue: CycloValue,
}

/// Eigenvalue per class, with the class size as multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    order: u32,
    entries: Vec<SpectrumEntry>,
    integral: bool,
}

/// `∏ (x - root)^multiplicity`, roots ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    pub factors: Vec<(i64, usize)>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.1).sum()
    }

    /// Expanded integer coefficients, constant term first. Uses `i128` and
    /// panics on overflow, so it is meant for small graphs.
    pub fn coefficients(&self) -> Vec<i128> {
        let mut poly = vec![1i128];
        for &(root, mult) in &self.factors {
            for _ in 0..mult {
                let mut next = vec![0i128; poly.len() + 1];
                for (i, &c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] = next[i].checked_sub(c.checked_mul(root as i128).expect("overflow")).expect("overflow");
                }
                poly = next;
            }
        }
        poly
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for &(root, mult) in &self.factors {
            let base = match root {
                0 => "x".to_string(),
                r if r > 0 => format!("(x-{r})"),
                r => format!("(x+{})", -r),
            };
            if mult == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}^{mult}")?;
            }
        }
        Ok(())
    }
}

impl Spectrum {
    pub fn new(order: u32, entries: Vec<SpectrumEntry>) -> Spectrum {
        let integral = entries.iter().all(|e| e.eigenvalue.is_integer());
        Spectrum { order, entries, integral }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn eigenvalue(&self, class: usize) -> &CycloValue {
        &self.entries[class].eigenvalue
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.size).sum()
    }

    /// Equal eigenvalues merged, in the order of first occurrence by class.
    pub fn distinct(&self) -> Vec<(CycloValue, usize)> {
        let mut out: Vec<(CycloValue, usize)> = Vec::new();
        for e in &self.entries {
            match out.iter_mut().find(|(v, _)| *v == e.eigenvalue) {
                Some(slot) => slot.1 += e.size,
                None => out.push((e.eigenvalue.clone(), e.size)),
            }
        }
        out
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct().len()
    }

    /// The eigenvalue multiset, one copy per element, sorted.
    pub fn multiset(&self) -> Vec<CycloValue> {
        let mut out: Vec<CycloValue> =
            self.entries.iter().flat_map(|e| std::iter::repeat(e.eigenvalue.clone()).take(e.size)).collect();
        out.sort();
        out
    }

    pub fn char_poly(&self) -> Result<CharPoly, SpectraError> {
        let mut merged: BTreeMap<i64, usize> = BTreeMap::new();
        for e in &self.entries {
            let v = e.eigenvalue.as_integer().map_err(|_| SpectraError::NonIntegralSpectrum)?;
            *merged.entry(v).or_default() += e.size;
        }
        Ok(CharPoly { factors: merged.into_iter().collect() })
    }

    /// `Σ λ_i |K_i|` and `Σ λ_i^2 |K_i|`, exactly.
    pub fn moments(&self) -> (CycloValue, CycloValue) {
        let mut first = CycloValue::zero(self.order);
        let mut second = CycloValue::zero(self.order);
        for e in &self.entries {
            let k = e.size as i64;
            first = first.add(&e.eigenvalue.scale(k)).expect("uniform root order");
            let sq = e.eigenvalue.mul(&e.eigenvalue).expect("uniform root order");
            second = second.add(&sq.scale(k)).expect("uniform root order");
        }
        (first, second)
    }

    /// Eigenvalues as floats, one per element, ascending.
    pub fn sorted_real_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.eigenvalue.to_complex().re).take(e.size))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// `{"root_of_unity_order", "integral", "eigenvalues": [{class, rep, size, eigenvalue}]}`
    /// with eigenvalues as `{"integer": v}` or `{"cyclo": [c_0, ...]}`.
    pub fn to_json(&self, partition: &OrbitPartition) -> Value {
        let ring = partition.ring();
        let list: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "class": e.class,
                    "rep": ring.render_idx(e.rep),
                    "size": e.size,
                    "eigenvalue": e.eigenvalue,
                })
            })
            .collect();
        json!({
            "root_of_unity_order": self.order,
            "integral": self.integral,
            "eigenvalues": list,
        })
    }
}

/// `λ_r = Σ_{s ∈ S} χ(r s)` for every element `r`, straight from the definition.
pub fn spectrum_oracle(graph: &CayleyGraph, functional: &FrobeniusFunctional) -> Vec<CycloValue> {
    let s: Vec<usize> = graph.connection_set().ones().collect();
    (0..graph.order())
        .into_par_iter()
        .map(|r| CycloValue::from_exponents(functional.root_order(), s.iter().map(|&x| functional.chi_exponent_idx(r, x))))
        .collect()
}

/// Whether every element's oracle eigenvalue equals the eigenvalue of its class.
pub fn oracle_agrees(spectrum: &Spectrum, partition: &OrbitPartition, oracle: &[CycloValue]) -> bool {
    oracle.len() == partition.ring().size()
        && oracle.iter().enumerate().all(|(r, v)| *v == spectrum.entries[partition.class_of(r)].eigenvalue)
}

/// Eigenvalues of the dense adjacency matrix, ascending, for `|R| <= DENSE_ORACLE_CAP`.
pub fn dense_eigenvalues(graph: &CayleyGraph) -> Option<Vec<f64>> {
    let n = graph.order();
    if n > DENSE_ORACLE_CAP {
        return None;
    }
    let a = DMatrix::from_fn(n, n, |i, j| if graph.adjacent(i, j) { 1.0 } else { 0.0 });
    let mut vals: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Some(vals)
}

/// Largest absolute difference between the exact spectrum and the dense
/// eigenvalues, both sorted.
pub fn dense_deviation(spectrum: &Spectrum, graph: &CayleyGraph) -> Option<f64> {
    let dense = dense_eigenvalues(graph)?;
    let exact = spectrum.sorted_real_values();
    Some(exact.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Results of evaluating the superclass axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SupercharacterCheck {
    /// `{0}` is a class.
    pub zero_class: bool,
    /// `x ↦ χ_x` is injective, so the blocks `X_i = {χ_x : x ∈ K_i}` are
    /// disjoint and as many as the classes.
    pub block_count_matches: bool,
    /// `σ_i = Σ_{x ∈ K_i} χ_x` is constant on every class.
    pub sigma_constant: bool,
    /// `Σ_{k ∈ K_j} χ(k)` is the same for every `χ ∈ X_i`.
    pub omega_independent: bool,
    /// Whether every element was evaluated (otherwise the representative and
    /// the largest member of each class).
    pub exhaustive: bool,
}

impl SupercharacterCheck {
    pub fn passed(&self) -> bool {
        self.zero_class && self.block_count_matches && self.sigma_constant && self.omega_independent
    }
}

pub fn check_axioms(partition: &OrbitPartition, psi: &FrobeniusFunctional) -> SupercharacterCheck {
    let ring = partition.ring();
    let m = partition.len();
    let exhaustive = ring.size() <= AXIOM_EXHAUSTIVE_CAP;
    let probes = |i: usize| -> Vec<usize> {
        let c = partition.class(i);
        if exhaustive {
            c.to_vec()
        } else {
            let mut v = vec![c[0], c[c.len() - 1]];
            v.dedup();
            v
        }
    };
    let order = psi.root_order();
    let sigma = |i: usize, y: usize| {
        CycloValue::from_exponents(order, partition.class(i).iter().map(|&x| psi.chi_exponent_idx(x, y)))
    };
    let sigma_constant = (0..m).into_par_iter().all(|i| {
        (0..m).all(|c| {
            let ys = probes(c);
            let first = sigma(i, ys[0]);
            ys[1..].iter().all(|&y| sigma(i, y) == first)
        })
    });
    let omega_independent = (0..m).into_par_iter().all(|i| {
        let xs = probes(i);
        let first = column(partition, psi, xs[0]);
        xs[1..].iter().all(|&x| column(partition, psi, x) == first)
    });
    SupercharacterCheck {
        zero_class: partition.class(0) == [0],
        block_count_matches: psi.verify_generating(),
        sigma_constant,
        omega_independent,
        exhaustive,
    }
}
