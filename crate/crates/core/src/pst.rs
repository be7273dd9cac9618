//! Perfect state transfer for the walk `F(t) = exp(i A t)` on a U-unitary
//! Cayley graph.
//!
//! With eigenvalues `λ_r` on the characters `χ_r`, transfer from `0` to `s`
//! at time `t = 2πτ` happens iff `(λ_r - λ_0) τ + ψ(r s)/n ∈ Z` for every `r`.
//! Elements with equal eigenvalues force `ψ(d s) = 0` for every `d` in the
//! subgroup `Δ` generated by their differences, which rules out most `s`
//! before any time is considered.

use std::collections::HashSet;
use std::f64::consts::PI;

use fixedbitset::FixedBitSet;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::CayleyGraph;
use crate::frobenius::FrobeniusFunctional;
use crate::ring::{gcd, Ring};
use crate::spectra::Spectrum;

/// Additive subgroup generated by differences of equal-eigenvalue elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSubgroup {
    members: FixedBitSet,
    /// Differences `r - b` that enlarged the subgroup when adjoined, as `(r, b)`.
    generating_pairs: Vec<(usize, usize)>,
}

impl DeltaSubgroup {
    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn generating_pairs(&self) -> &[(usize, usize)] {
        &self.generating_pairs
    }

    pub fn generators<'a>(&'a self, ring: &'a Ring) -> impl Iterator<Item = usize> + 'a {
        self.generating_pairs.iter().map(move |&(r, b)| ring.sub_idx(r, b))
    }
}

/// `Δ` for the graph. Eigenvalues are constant on classes, so elements are
/// grouped by the eigenvalue of their class; within a group with base `b`,
/// the differences `r - b` generate all pairwise differences.
pub fn delta_subgroup(graph: &CayleyGraph, spectrum: &Spectrum) -> DeltaSubgroup {
    let ring = graph.ring();
    let partition = graph.partition();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (value, _) in spectrum.distinct() {
        let classes: Vec<usize> = spectrum.entries().iter().filter(|e| e.eigenvalue == value).map(|e| e.class).collect();
        groups.push(classes.iter().flat_map(|&c| partition.class(c).iter().copied()).collect());
    }
    let mut members = FixedBitSet::with_capacity(ring.size());
    members.insert(0);
    let mut list = vec![0usize];
    let mut generating_pairs = Vec::new();
    for group in &groups {
        let base = group[0];
        for &r in &group[1..] {
            let g = ring.sub_idx(r, base);
            if members.contains(g) {
                continue;
            }
            generating_pairs.push((r, base));
            let coset_base = list.clone();
            let mut c = g;
            while !members.contains(c) {
                for &h in &coset_base {
                    let x = ring.add_idx(h, c);
                    members.insert(x);
                    list.push(x);
                }
                c = ring.add_idx(c, g);
            }
        }
    }
    DeltaSubgroup { members, generating_pairs }
}

/// Nonzero `s` with `ψ(d s) = 0` for all generators `d` of `Δ`.
pub fn pst_candidates(graph: &CayleyGraph, delta: &DeltaSubgroup, psi: &FrobeniusFunctional) -> Vec<usize> {
    let ring = graph.ring();
    let gens: Vec<usize> = delta.generators(ring).collect();
    (1..ring.size()).into_par_iter().filter(|&s| gens.iter().all(|&d| psi.chi_exponent_idx(d, s) == 0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PstVerdict {
    Exists,
    NotExists,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PstWitness {
    pub s: usize,
    /// `τ = t / 2π` as a reduced fraction.
    pub tau: (i64, i64),
    pub t: f64,
    /// `|F(t)_{0,s}|` from the character-sum formula.
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PstReport {
    pub verdict: PstVerdict,
    pub witnesses: Vec<PstWitness>,
    pub delta_size: usize,
    pub candidate_count: usize,
    pub obstruction: Option<String>,
    pub note: Option<String>,
}

impl PstReport {
    /// `{"verdict", "witnesses": [{"s", "tau", "t", "amplitude"}], "obstruction", ...}`.
    pub fn to_json(&self, ring: &Ring) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "s": ring.render_idx(w.s),
                    "s_index": w.s,
                    "tau": format!("{}/{}", w.tau.0, w.tau.1),
                    "t": w.t,
                    "amplitude": w.amplitude,
                })
            })
            .collect();
        json!({
            "verdict": self.verdict,
            "witnesses": witnesses,
            "delta_size": self.delta_size,
            "candidate_count": self.candidate_count,
            "obstruction": self.obstruction,
            "note": self.note,
        })
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Solution set `{j : j ≡ j0 (mod l)}` of `a_k j ≡ b_k (mod m)` for all
/// constraints, or `None` if inconsistent.
fn solve_congruences(constraints: impl IntoIterator<Item = (i128, i128)>, m: i128) -> Option<(i128, i128)> {
    let (mut j0, mut l) = (0i128, 1i128);
    for (a, b) in constraints {
        let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
        let g = gcd128(a, m);
        if b % g != 0 {
            return None;
        }
        let p = m / g;
        let c = if p == 1 { 0 } else { (b / g) * mod_inverse(a / g, p) % p };
        // Merge j ≡ j0 (mod l) with j ≡ c (mod p).
        let g2 = gcd128(l, p);
        if (c - j0).rem_euclid(g2) != 0 {
            return None;
        }
        let p2 = p / g2;
        let k = if p2 == 1 { 0 } else { ((c - j0) / g2).rem_euclid(p2) * mod_inverse(l / g2, p2) % p2 };
        let lcm = l * p2;
        j0 = (j0 + l * k).rem_euclid(lcm);
        l = lcm;
    }
    Some((j0, l))
}

/// Eigenvalue per element, as integers.
fn integer_eigenvalues(graph: &CayleyGraph, spectrum: &Spectrum) -> Option<Vec<i64>> {
    let per_class: Vec<i64> =
        spectrum.entries().iter().map(|e| e.eigenvalue.as_integer().ok()).collect::<Option<Vec<_>>>()?;
    let p = graph.partition();
    Some((0..graph.order()).map(|r| per_class[p.class_of(r)]).collect())
}

/// `D`: lcm of the nonzero `|λ_i - λ_0|`, or `None` on overflow.
fn difference_lcm(spectrum: &Spectrum) -> Option<i128> {
    let l0 = spectrum.eigenvalue(0).as_integer().ok()? as i128;
    let mut d = 1i128;
    for e in spectrum.entries() {
        let diff = (e.eigenvalue.as_integer().ok()? as i128 - l0).abs();
        if diff != 0 {
            d = (d / gcd128(d, diff)).checked_mul(diff)?;
        }
    }
    Some(d)
}

/// Smallest `τ ∈ (0, 1]` with `(λ_r - λ_0) τ + ψ(r s)/n ∈ Z` for all `r`, as
/// a reduced fraction. Any solution has the form `j/(nD)`, and the condition
/// reads `d_r j + m_r D ≡ 0 (mod nD)`, a system of linear congruences with a
/// common modulus. `None` when there is no solution or the spectrum is not
/// integral.
pub fn solve_tau(graph: &CayleyGraph, spectrum: &Spectrum, psi: &FrobeniusFunctional, s: usize) -> Option<(i64, i64)> {
    let lambdas = integer_eigenvalues(graph, spectrum)?;
    let big_d = difference_lcm(spectrum)?;
    let n = psi.modulus() as i128;
    let m = n.checked_mul(big_d)?;
    let l0 = lambdas[0] as i128;
    let mut seen = HashSet::new();
    for (r, &l) in lambdas.iter().enumerate() {
        seen.insert((l as i128 - l0, psi.chi_exponent_idx(r, s) as i128));
    }
    let (j0, l) = solve_congruences(seen.into_iter().map(|(d, mr)| (d, -mr * big_d)), m)?;
    let j = if j0 == 0 { l } else { j0 };
    let g = gcd128(j, m);
    Some(((j / g) as i64, (m / g) as i64))
}

/// Numeric walk amplitudes through the character sum
/// `F(t)_{a,b} = (1/|R|) Σ_r e^{i λ_r t} χ_r(a - b)`.
pub struct QuantumWalk<'a> {
    graph: &'a CayleyGraph,
    psi: &'a FrobeniusFunctional,
    lambdas: Vec<f64>,
}

impl<'a> QuantumWalk<'a> {
    pub fn new(graph: &'a CayleyGraph, spectrum: &Spectrum, psi: &'a FrobeniusFunctional) -> QuantumWalk<'a> {
        let per_class: Vec<f64> = spectrum.entries().iter().map(|e| e.eigenvalue.to_complex().re).collect();
        let p = graph.partition();
        let lambdas = (0..graph.order()).map(|r| per_class[p.class_of(r)]).collect();
        QuantumWalk { graph, psi, lambdas }
    }

    pub fn amplitude(&self, a: usize, b: usize, t: f64) -> f64 {
        let ring = self.graph.ring();
        let d = ring.sub_idx(a, b);
        let n = self.psi.modulus() as f64;
        let sum: Complex64 = self
            .lambdas
            .iter()
            .enumerate()
            .map(|(r, &l)| Complex64::from_polar(1.0, l * t + 2.0 * PI * self.psi.chi_exponent_idx(r, d) as f64 / n))
            .sum();
        sum.norm() / ring.size() as f64
    }

    /// Largest amplitude on the grid `t = step, 2·step, ...` up to `t_max`.
    pub fn max_amplitude(&self, a: usize, b: usize, t_max: f64, step: f64) -> f64 {
        let steps = (t_max / step).floor() as usize;
        (1..=steps).into_par_iter().map(|k| self.amplitude(a, b, k as f64 * step)).reduce(|| 0.0, f64::max)
    }
}

/// `|F(t)_{a,b}|`.
pub fn walk_amplitude(
    graph: &CayleyGraph,
    spectrum: &Spectrum,
    psi: &FrobeniusFunctional,
    a: usize,
    b: usize,
    t: f64,
) -> f64 {
    QuantumWalk::new(graph, spectrum, psi).amplitude(a, b, t)
}

/// Amplitude threshold for numeric confirmation of a transfer.
pub const CONFIRM_TOLERANCE: f64 = 1e-9;

/// Decides transfer from `0` (and hence, by translation, between any pair).
pub fn decide_pst(graph: &CayleyGraph, spectrum: &Spectrum, psi: &FrobeniusFunctional) -> PstReport {
    let delta = delta_subgroup(graph, spectrum);
    let candidates = pst_candidates(graph, &delta, psi);
    let mut report = PstReport {
        verdict: PstVerdict::NotExists,
        witnesses: Vec::new(),
        delta_size: delta.len(),
        candidate_count: candidates.len(),
        obstruction: None,
        note: None,
    };
    if candidates.is_empty() {
        report.obstruction = Some(if delta.is_whole() {
            "delta subgroup is the whole ring".into()
        } else {
            "every nonzero s has psi(d s) != 0 for some d in the delta subgroup".into()
        });
        return report;
    }
    if !spectrum.is_integral() {
        report.verdict = PstVerdict::Undecided;
        report.note = Some("spectrum is not integral; only the delta obstruction is decided".into());
        return report;
    }
    if difference_lcm(spectrum).and_then(|d| d.checked_mul(psi.modulus() as i128)).is_none() {
        report.verdict = PstVerdict::Undecided;
        report.note = Some("time grid modulus overflows".into());
        return report;
    }
    let walk = QuantumWalk::new(graph, spectrum, psi);
    let solved: Vec<PstWitness> = candidates
        .par_iter()
        .filter_map(|&s| {
            let tau = solve_tau(graph, spectrum, psi, s)?;
            let t = 2.0 * PI * tau.0 as f64 / tau.1 as f64;
            Some(PstWitness { s, tau, t, amplitude: walk.amplitude(0, s, t) })
        })
        .collect();
    if solved.is_empty() {
        report.obstruction = Some("no time solves the congruences for any candidate".into());
        return report;
    }
    if solved.iter().any(|w| w.amplitude < 1.0 - CONFIRM_TOLERANCE) {
        report.verdict = PstVerdict::Undecided;
        report.note = Some("exact solution found but the numeric amplitude disagrees".into());
    } else {
        report.verdict = PstVerdict::Exists;
    }
    report.witnesses = solved;
    report
}

/// Reduces `num/den` to lowest terms.
pub fn reduce_fraction(num: i64, den: i64) -> (i64, i64) {
    let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
    (num / g, den / g)
}
