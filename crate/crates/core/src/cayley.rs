//! Cayley graphs `Γ(R, S)` on `(R, +)` whose connection set is a union of
//! double cosets: `a ~ b` iff `a - b ∈ S`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::orbits::{ClassSelection, OrbitError, OrbitPartition, Selector, Subgroup, SubgroupKind};
use crate::ring::{additive_closure, two_sided_ideal, Ideal, Ring, RingSpec};

/// Representatives of the orbits of `x ↦ u x` (`left`) or `x ↦ x u` on `set`,
/// which must be closed under that action.
fn one_sided_reps(part: &OrbitPartition, set: &FixedBitSet, left: bool) -> Vec<usize> {
    let ring = part.ring();
    let gens = part.subgroup().generators();
    let mut seen = FixedBitSet::with_capacity(ring.size());
    let mut reps = Vec::new();
    for start in set.ones() {
        if seen.contains(start) {
            continue;
        }
        reps.push(start);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(y) = stack.pop() {
            for &g in gens {
                let z = if left { ring.mul_idx(g, y) } else { ring.mul_idx(y, g) };
                if !seen.put(z) {
                    stack.push(z);
                }
            }
        }
    }
    reps
}

/// Least `ℓ` such that every element of `RxR` is a sum of `ℓ` products
/// `a x b`, computed on classes of `part`.
///
/// `R x R` and each partial sumset are unions of double cosets, so products
/// only need one representative per one-sided orbit and the sumset grows by
/// one representative per newly reached class.
pub fn ell_by_classes(part: &OrbitPartition, x: usize) -> usize {
    if x == 0 {
        return 0;
    }
    let ring = part.ring();
    let n = ring.size();
    let target = two_sided_ideal(ring, x).len();
    let whole = {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        b
    };
    let mut left_ideal = FixedBitSet::with_capacity(n);
    for a in one_sided_reps(part, &whole, true) {
        left_ideal.insert(ring.mul_idx(a, x));
    }
    // close under left units so the orbit walk sees the whole of R x
    let mut stack: Vec<usize> = left_ideal.ones().collect();
    while let Some(y) = stack.pop() {
        for &g in part.subgroup().generators() {
            let z = ring.mul_idx(g, y);
            if !left_ideal.put(z) {
                stack.push(z);
            }
        }
    }
    let right_reps = one_sided_reps(part, &whole, false);
    let mut product_classes = FixedBitSet::with_capacity(part.len());
    for y in one_sided_reps(part, &left_ideal, true) {
        for &b in &right_reps {
            product_classes.insert(part.class_of(ring.mul_idx(y, b)));
        }
    }
    let products: Vec<usize> = product_classes.ones().flat_map(|c| part.class(c).iter().copied()).collect();
    let mut reached = product_classes;
    let mut frontier: Vec<usize> = reached.ones().collect();
    let mut count = products.len();
    let mut length = 1;
    while count < target {
        let mut next = Vec::new();
        for &c in &frontier {
            let r = part.rep(c);
            for &p in &products {
                let k = part.class_of(ring.add_idx(r, p));
                if !reached.put(k) {
                    count += part.class(k).len();
                    next.push(k);
                }
            }
        }
        frontier = next;
        length += 1;
    }
    length
}

/// Adjacency rows are stored explicitly up to this many vertices.
pub const ADJACENCY_ROW_CAP: usize = 4096;
/// The exhaustive homogeneous-set search runs up to this many vertices.
pub const GENERAL_SEARCH_CAP: usize = 1024;
/// Edge budget for DOT export.
pub const DOT_EDGE_CAP: usize = 250_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("criterion does not apply: {0}")]
    Inapplicable(String),
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

#[derive(Debug)]
pub struct CayleyGraph {
    partition: Arc<OrbitPartition>,
    selection: ClassSelection,
    rows: Option<Vec<FixedBitSet>>,
}

/// Components and distances. All components are translates of the one
/// containing `0`, so they share size and diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub component_count: usize,
    pub component_size: usize,
    /// Diameter of the graph; `None` when disconnected (infinite).
    pub diameter: Option<usize>,
    /// Diameter of each component.
    pub component_diameter: usize,
}

/// Outcome of the ideal-sum test for connectedness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCriterion {
    pub connected: bool,
    /// Selected classes whose principal ideals were summed.
    pub classes: Vec<usize>,
    /// Size of `Σ I_i`.
    pub ideal_sum_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeVerdict {
    Prime,
    NotPrime,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    TwoSidedIdeal,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeHypotheses {
    pub unit_graph_connected: bool,
    pub connected: bool,
    pub anti_connected: bool,
}

impl PrimeHypotheses {
    pub fn all_hold(&self) -> bool {
        self.unit_graph_connected && self.connected && self.anti_connected
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousSetReport {
    pub verdict: PrimeVerdict,
    /// Verified homogeneous set with `2 <= |X| < |R|`.
    pub witness: Option<Vec<usize>>,
    pub witness_kind: Option<WitnessKind>,
    pub hypotheses: PrimeHypotheses,
    /// Whether some proper nonzero two-sided ideal is homogeneous, when scanned.
    pub homogeneous_ideal_found: Option<bool>,
    /// Whether the exhaustive module search found a nontrivial module, when run.
    pub general_search_found: Option<bool>,
    pub note: Option<String>,
}

impl CayleyGraph {
    pub fn new(partition: &Arc<OrbitPartition>, selector: &Selector) -> Result<CayleyGraph, CayleyError> {
        let selection = partition.select(selector)?;
        Ok(CayleyGraph::from_selection(partition, selection))
    }

    pub fn from_selection(partition: &Arc<OrbitPartition>, selection: ClassSelection) -> CayleyGraph {
        let ring = partition.ring();
        let n = ring.size();
        let rows = (n <= ADJACENCY_ROW_CAP).then(|| {
            (0..n)
                .into_par_iter()
                .map(|a| {
                    let mut row = FixedBitSet::with_capacity(n);
                    for s in selection.set().ones() {
                        row.insert(ring.add_idx(a, s));
                    }
                    row
                })
                .collect()
        });
        CayleyGraph { partition: partition.clone(), selection, rows }
    }

    /// `Γ(R, U)`: the subgroup is the double coset of `1`.
    pub fn unit_graph(partition: &Arc<OrbitPartition>) -> CayleyGraph {
        CayleyGraph::new(partition, &Selector::Subgroup(true)).expect("the class of 1 is a valid selection")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.partition.ring()
    }

    pub fn partition(&self) -> &Arc<OrbitPartition> {
        &self.partition
    }

    pub fn selection(&self) -> &ClassSelection {
        &self.selection
    }

    /// Selected class indices.
    pub fn classes(&self) -> &[usize] {
        self.selection.classes()
    }

    pub fn connection_set(&self) -> &FixedBitSet {
        self.selection.set()
    }

    pub fn order(&self) -> usize {
        self.ring().size()
    }

    pub fn degree(&self) -> usize {
        self.selection.len()
    }

    pub fn rows(&self) -> Option<&[FixedBitSet]> {
        self.rows.as_deref()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.connection_set().contains(self.ring().sub_idx(a, b))
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        let ring = self.ring();
        let mut out: Vec<usize> = self.connection_set().ones().map(|s| ring.add_idx(a, s)).collect();
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.order() * self.degree() / 2
    }

    /// Graph on the remaining nonzero classes.
    pub fn complement(&self) -> CayleyGraph {
        CayleyGraph::from_selection(&self.partition, self.selection.complement(&self.partition))
    }

    /// Vertex set of the component of `0`: the subgroup generated by `S`.
    pub fn component_subgroup(&self) -> FixedBitSet {
        additive_closure(self.ring(), self.connection_set().ones())
    }

    pub fn is_connected(&self) -> bool {
        self.component_subgroup().count_ones(..) == self.order()
    }

    pub fn is_anti_connected(&self) -> bool {
        self.complement().is_connected()
    }

    /// Components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let ring = self.ring();
        let h: Vec<usize> = self.component_subgroup().ones().collect();
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut out = Vec::new();
        for v in 0..self.order() {
            if seen.contains(v) {
                continue;
            }
            let mut comp: Vec<usize> = h.iter().map(|&x| ring.add_idx(v, x)).collect();
            for &c in &comp {
                seen.insert(c);
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether every component is a cycle of length `len`. Components are
    /// translates of each other, so it suffices to walk the one through `0`.
    pub fn is_disjoint_cycles(&self, len: usize) -> bool {
        if len < 3 || self.degree() != 2 {
            return false;
        }
        let (mut prev, mut cur, mut steps) = (0usize, self.neighbors(0)[0], 1usize);
        while cur != 0 {
            let next = self.neighbors(cur).into_iter().find(|&w| w != prev);
            let Some(next) = next else { return false };
            (prev, cur) = (cur, next);
            steps += 1;
            if steps > len {
                return false;
            }
        }
        steps == len && self.component_subgroup().count_ones(..) == len
    }

    /// BFS distances from `0` (`u32::MAX` when unreachable), switching to
    /// bottom-up steps once the frontier is large.
    pub fn distances_from_zero(&self) -> Vec<u32> {
        let ring = self.ring();
        let n = self.order();
        let s: Vec<usize> = self.connection_set().ones().collect();
        let mut dist = vec![u32::MAX; n];
        dist[0] = 0;
        let mut frontier = vec![0usize];
        let mut unvisited = n - 1;
        let mut level = 0;
        while !frontier.is_empty() && unvisited > 0 {
            level += 1;
            let next: Vec<usize> = if frontier.len() * s.len() <= 4 * unvisited {
                let mut next = Vec::new();
                for &f in &frontier {
                    for &x in &s {
                        let y = ring.add_idx(f, x);
                        if dist[y] == u32::MAX {
                            dist[y] = level;
                            next.push(y);
                        }
                    }
                }
                next
            } else {
                let mut bits = FixedBitSet::with_capacity(n);
                for &f in &frontier {
                    bits.insert(f);
                }
                let next: Vec<usize> = (0..n)
                    .into_par_iter()
                    .filter(|&v| dist[v] == u32::MAX && s.iter().any(|&x| bits.contains(ring.sub_idx(v, x))))
                    .collect();
                for &v in &next {
                    dist[v] = level;
                }
                next
            };
            unvisited -= next.len();
            frontier = next;
        }
        dist
    }

    pub fn connectivity(&self) -> Connectivity {
        let n = self.order();
        let dist = self.distances_from_zero();
        let reached: Vec<u32> = dist.iter().copied().filter(|&d| d != u32::MAX).collect();
        let component_size = reached.len();
        let component_diameter = reached.iter().copied().max().unwrap_or(0) as usize;
        let connected = component_size == n;
        Connectivity {
            connected,
            component_count: n / component_size,
            component_size,
            diameter: connected.then_some(component_diameter),
            component_diameter,
        }
    }

    /// Two-colourability. Walks of even length from `0` reach exactly the
    /// subgroup generated by `{s + s_0 : s ∈ S}`, so the graph is bipartite
    /// iff that subgroup misses `S`; the colouring is membership in it.
    pub fn is_bipartite(&self) -> bool {
        let ring = self.ring();
        let Some(s0) = self.connection_set().ones().next() else {
            return true;
        };
        let even = additive_closure(ring, self.connection_set().ones().map(|s| ring.add_idx(s, s0)));
        self.connection_set().ones().all(|s| !even.contains(s))
    }

    /// Decides connectedness from `Σ_{K_i ⊆ S} I_{K_i} = R`, valid when
    /// `Γ(R, U)` is connected.
    pub fn connected_by_ideal_criterion(&self) -> Result<IdealCriterion, CayleyError> {
        let ring = self.ring();
        let units = self.partition.subgroup().member_list();
        if additive_closure(ring, units.iter().copied()).count_ones(..) != ring.size() {
            return Err(CayleyError::Inapplicable("the unit subgroup graph is disconnected".into()));
        }
        let mut gens = Vec::new();
        for &i in self.classes() {
            gens.extend(two_sided_ideal(ring, self.partition.rep(i)).member_list());
        }
        let size = additive_closure(ring, gens).count_ones(..);
        Ok(IdealCriterion { connected: size == ring.size(), classes: self.classes().to_vec(), ideal_sum_size: size })
    }

    /// `diam(Γ(R,U))^2 · Σ_{K_i ⊆ S} ℓ(K_i)`, when both graphs are connected.
    pub fn diameter_bound(&self) -> Option<usize> {
        let unit = CayleyGraph::unit_graph(&self.partition).connectivity();
        let d = unit.diameter?;
        self.connectivity().diameter?;
        let full = match self.partition.subgroup().kind() {
            SubgroupKind::FullUnits => self.partition.clone(),
            _ => Arc::new(OrbitPartition::compute(&Arc::new(Subgroup::full_units(self.ring())))),
        };
        let ells: usize = self.classes().iter().map(|&i| ell_by_classes(&full, self.partition.rep(i))).sum();
        Some(d * d * ells)
    }

    /// Every vertex outside `set` is adjacent to all of it or to none of it.
    pub fn is_homogeneous(&self, set: &FixedBitSet) -> bool {
        let members: Vec<usize> = set.ones().collect();
        let k = members.len();
        (0..self.order()).into_par_iter().filter(|&v| !set.contains(v)).all(|v| {
            let c = members.iter().filter(|&&x| self.adjacent(v, x)).count();
            c == 0 || c == k
        })
    }

    /// Homogeneity of an additive subgroup `H`: adjacency of `v` to `H` is
    /// membership of the coset `v + H` in `S`, so `S` must be constant on
    /// every coset other than `H`.
    pub fn is_homogeneous_subgroup(&self, h: &FixedBitSet) -> bool {
        let ring = self.ring();
        let s = self.connection_set();
        let list: Vec<usize> = h.ones().collect();
        let mut seen = h.clone();
        for v in 0..self.order() {
            if seen.contains(v) {
                continue;
            }
            let first = s.contains(v);
            for &x in &list {
                let y = ring.add_idx(v, x);
                seen.insert(y);
                if s.contains(y) != first {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest set containing `{0, v}` that no outside vertex splits.
    fn smallest_module(&self, rows: &[FixedBitSet], v: usize) -> FixedBitSet {
        let n = self.order();
        let mut inside = FixedBitSet::with_capacity(n);
        let mut count = vec![0u32; n];
        let mut size = 0u32;
        let mut pending = vec![0, v];
        while !pending.is_empty() {
            for y in pending.drain(..) {
                if inside.contains(y) {
                    continue;
                }
                inside.insert(y);
                size += 1;
                for w in rows[y].ones() {
                    count[w] += 1;
                }
            }
            if size as usize == n {
                break;
            }
            pending = (0..n).filter(|&w| !inside.contains(w) && count[w] > 0 && count[w] < size).collect();
        }
        inside
    }

    /// Nontrivial module found by the exhaustive search, if any. Left and
    /// right multiplication by units fix `0` and preserve the graph, so one
    /// vertex `v` per class suffices for the pairs `{0, v}`, and translation
    /// covers all other pairs.
    fn general_module(&self) -> Option<Option<FixedBitSet>> {
        let rows = self.rows()?;
        if self.order() > GENERAL_SEARCH_CAP {
            return None;
        }
        let n = self.order();
        let reps: Vec<usize> = (1..self.partition.len()).map(|i| self.partition.rep(i)).collect();
        Some(reps.par_iter().find_map_first(|&v| {
            let m = self.smallest_module(rows, v);
            (m.count_ones(..) < n).then_some(m)
        }))
    }

    /// Decides primeness, reporting the hypotheses of the ideal reduction and
    /// a verified witness when not prime.
    pub fn prime_check(&self) -> HomogeneousSetReport {
        let ring = self.ring();
        let n = self.order();
        let units = self.partition.subgroup().member_list();
        let hypotheses = PrimeHypotheses {
            unit_graph_connected: additive_closure(ring, units.iter().copied()).count_ones(..) == n,
            connected: self.is_connected(),
            anti_connected: self.is_anti_connected(),
        };
        let mut report = HomogeneousSetReport {
            verdict: PrimeVerdict::Prime,
            witness: None,
            witness_kind: None,
            hypotheses,
            homogeneous_ideal_found: None,
            general_search_found: None,
            note: None,
        };
        if n <= 2 {
            report.note = Some("at most two vertices: no set X with 2 <= |X| < |R| exists".into());
            return report;
        }
        if !hypotheses.connected || !hypotheses.anti_connected {
            let graph = if hypotheses.connected { self.complement() } else { self.complement().complement() };
            let mut h = graph.component_subgroup();
            if h.count_ones(..) == 1 {
                // Edgeless in `graph`: any pair is a module.
                h.insert(1);
            }
            let which = if hypotheses.connected { "complement" } else { "graph" };
            return self.finish_not_prime(
                report,
                h,
                WitnessKind::General,
                format!("the {which} is disconnected; a component (or a pair when it has no edges) is homogeneous"),
            );
        }
        let ideal_witness = two_sided_ideals(&self.partition)
            .into_iter()
            .filter(|i| !i.is_zero() && !i.is_whole())
            .find(|i| self.is_homogeneous_subgroup(i.members()));
        report.homogeneous_ideal_found = Some(ideal_witness.is_some());
        let general = self.general_module();
        report.general_search_found = general.as_ref().map(Option::is_some);
        match (ideal_witness, general) {
            (Some(ideal), _) => {
                self.finish_not_prime(report, ideal.members().clone(), WitnessKind::TwoSidedIdeal, String::new())
            }
            (None, Some(Some(module))) => {
                let note = if hypotheses.all_hold() {
                    "module found although no proper ideal is homogeneous; the ideal reduction disagrees".into()
                } else {
                    "the unit subgroup graph is disconnected, so modules need not be ideals".into()
                };
                self.finish_not_prime(report, module, WitnessKind::General, note)
            }
            (None, Some(None)) => report,
            (None, None) if hypotheses.all_hold() => report,
            (None, None) => {
                report.verdict = PrimeVerdict::Inconclusive;
                report.note = Some(format!(
                    "the unit subgroup graph is disconnected and {n} vertices exceed the general search cap"
                ));
                report
            }
        }
    }

    fn finish_not_prime(
        &self,
        mut report: HomogeneousSetReport,
        witness: FixedBitSet,
        kind: WitnessKind,
        note: String,
    ) -> HomogeneousSetReport {
        let size = witness.count_ones(..);
        assert!(size >= 2 && size < self.order(), "witness size out of range");
        let subgroup = additive_closure(self.ring(), witness.ones()) == witness;
        let homogeneous =
            if subgroup { self.is_homogeneous_subgroup(&witness) } else { self.is_homogeneous(&witness) };
        assert!(homogeneous, "witness failed the homogeneity check");
        report.verdict = PrimeVerdict::NotPrime;
        report.witness = Some(witness.ones().collect());
        report.witness_kind = Some(kind);
        if !note.is_empty() {
            report.note = Some(note);
        }
        report
    }

    /// Graphviz rendering with vertex labels `index: element`.
    pub fn to_dot(&self, max_edges: usize) -> Result<String, CayleyError> {
        if self.edge_count() > max_edges {
            return Err(CayleyError::TooLarge(format!("{} edges exceed the limit {max_edges}", self.edge_count())));
        }
        let ring = self.ring();
        let mut out = String::from("graph cayley {\n  node [shape=circle];\n");
        for v in 0..self.order() {
            let label = ring.render_idx(v).to_string().replace('"', "\\\"");
            let _ = writeln!(out, "  {v} [label=\"{v}: {label}\"];");
        }
        for a in 0..self.order() {
            for b in self.neighbors(a) {
                if a < b {
                    let _ = writeln!(out, "  {a} -- {b};");
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// All two-sided ideals, smallest first: principal ideals of the class
/// representatives (equal for all members of a class) closed under sums.
pub fn two_sided_ideals(partition: &OrbitPartition) -> Vec<Ideal> {
    let ring = partition.ring();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut ideals: Vec<Ideal> = Vec::new();
    for i in 0..partition.len() {
        let ideal = two_sided_ideal(ring, partition.rep(i));
        if seen.insert(ideal.members().clone()) {
            ideals.push(ideal);
        }
    }
    let mut start = 0;
    loop {
        let mut fresh = Vec::new();
        for a in 0..ideals.len() {
            for b in start.max(a + 1)..ideals.len() {
                let sum = ideals[a].sum(&ideals[b], ring);
                if seen.insert(sum.members().clone()) {
                    fresh.push(sum);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        start = ideals.len();
        ideals.extend(fresh);
    }
    ideals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.member_list().cmp(&b.member_list())));
    ideals
}

/// A simple factor `M_dim(GF(field_size))` of the semisimple quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SimplePiece {
    pub dim: usize,
    pub field_size: u64,
}

/// Simple factors of `R / Rad(R)`, read off the constructor tree: `Z/n`
/// contributes `GF(p)` per prime `p | n`, matrix rings scale the dimension of
/// every factor of their base, and products concatenate.
pub fn semisimple_pieces(spec: &RingSpec) -> Vec<SimplePiece> {
    let mut out = match spec {
        RingSpec::ZMod(n) => {
            let mut m = *n;
            let mut primes = Vec::new();
            let mut p = 2;
            while p * p <= m {
                if m % p == 0 {
                    primes.push(p);
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += 1;
            }
            if m > 1 {
                primes.push(m);
            }
            primes.into_iter().map(|p| SimplePiece { dim: 1, field_size: p }).collect()
        }
        RingSpec::GaloisField { p, k, .. } => vec![SimplePiece { dim: 1, field_size: p.pow(*k) }],
        RingSpec::MatrixRing { size, base } => semisimple_pieces(base)
            .into_iter()
            .map(|s| SimplePiece { dim: s.dim * size, field_size: s.field_size })
            .collect(),
        RingSpec::Product(factors) => factors.iter().flat_map(semisimple_pieces).collect(),
    };
    out.sort();
    out
}

/// `|GL_d(F_q)|`.
fn general_linear_order(d: usize, q: u64) -> u128 {
    let qd = (q as u128).pow(d as u32);
    (0..d).map(|i| qd - (q as u128).pow(i as u32)).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub connected: bool,
    pub anti_connected: bool,
    pub prime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitaryClassification {
    pub pieces: Vec<SimplePiece>,
    pub radical_size: usize,
    /// `|R| / |Rad R|` and `|R^×| / |Rad R|` match the decomposition.
    pub quotient_consistent: bool,
    pub predicted: StructuralFlags,
    /// Measured on the unitary Cayley graph when `|R| <= ADJACENCY_ROW_CAP`.
    pub observed: Option<StructuralFlags>,
    pub radical_homogeneous: Option<bool>,
    pub agrees: Option<bool>,
    pub note: Option<String>,
}

/// Predicts connectedness, anti-connectedness and primeness of the unitary
/// Cayley graph `G_R = Γ(R, R^×)` from the semisimple decomposition, and
/// compares with the graph itself on small rings.
pub fn unitary_classification(ring: &Arc<Ring>) -> UnitaryClassification {
    let pieces = semisimple_pieces(ring.spec());
    let radical_size = ring.radical().len();
    let n = ring.size();
    let quotient_size: u128 = pieces.iter().map(|s| (s.field_size as u128).pow((s.dim * s.dim) as u32)).product();
    let quotient_units: u128 = pieces.iter().map(|s| general_linear_order(s.dim, s.field_size)).product();
    let unit_count = ring.units().count_ones(..) as u128;
    let quotient_consistent = (n / radical_size) as u128 == quotient_size
        && n % radical_size == 0
        && unit_count == quotient_units * radical_size as u128;

    let f2_fields = pieces.iter().filter(|s| s.dim == 1 && s.field_size == 2).count();
    let is_field = pieces.len() == 1 && pieces[0].dim == 1;
    let connected = f2_fields <= 1;
    let anti_connected = !is_field;
    let predicted = StructuralFlags { connected, anti_connected, prime: radical_size == 1 && connected && anti_connected };

    let mut out = UnitaryClassification {
        pieces,
        radical_size,
        quotient_consistent,
        predicted,
        observed: None,
        radical_homogeneous: None,
        agrees: None,
        note: None,
    };
    if n > ADJACENCY_ROW_CAP {
        return out;
    }
    let subgroup = Arc::new(Subgroup::full_units(ring));
    let partition = Arc::new(OrbitPartition::compute(&subgroup));
    let graph = CayleyGraph::new(&partition, &Selector::Units(true)).expect("unit classes form a valid selection");
    let report = graph.prime_check();
    let observed = StructuralFlags {
        connected: report.hypotheses.connected,
        anti_connected: report.hypotheses.anti_connected,
        prime: report.verdict == PrimeVerdict::Prime,
    };
    out.radical_homogeneous = Some(graph.is_homogeneous_subgroup(ring.radical().members()));
    let mut agrees = observed.connected == predicted.connected && observed.anti_connected == predicted.anti_connected;
    if n == 2 {
        out.note = Some("two vertices: the graph is prime vacuously, so the primeness prediction is not compared".into());
    } else {
        agrees &= observed.prime == predicted.prime;
    }
    out.observed = Some(observed);
    out.agrees = Some(agrees);
    out
}
