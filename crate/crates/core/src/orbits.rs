//! Unit subgroups `U ∋ -1` and the double quotient `U\R/U`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::ring::{Ring, RingError, SmithForm};

/// Above this many members, double cosets are grown from a small generating
/// set of `U` instead of the full member list.
pub const FULL_MULTIPLIER_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("-1 does not lie in the requested subgroup")]
    MinusOneAbsent,
    #[error("generator {0} is not a unit")]
    NonUnitGenerator(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("the zero class cannot be part of a connection set")]
    ZeroClassSelected,
    #[error("class index {0} does not exist")]
    UnknownClass(usize),
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Configuration form of a subgroup: `"units"`, `"special_linear"`,
/// `"permutation_matrices"` or `{"generated": [descriptors]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SubgroupSpec {
    Units,
    SpecialLinear,
    PermutationMatrices,
    Generated(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    FullUnits,
    SpecialLinear,
    PermutationMatrices,
    /// Closure of user generators; `adjoined_minus_one` records whether `-1`
    /// had to be added because the generators alone did not produce it.
    Generated { generators: Vec<usize>, adjoined_minus_one: bool },
}

#[derive(Debug)]
pub struct Subgroup {
    ring: Arc<Ring>,
    kind: SubgroupKind,
    members: FixedBitSet,
    list: Vec<usize>,
    generators: Vec<usize>,
}

/// Multiplicative closure of `gens` (containing 1); for a finite set of
/// units this is the generated group.
fn closure(ring: &Ring, gens: &[usize]) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(ring.size());
    let one = ring.one_idx();
    set.insert(one);
    let mut stack = vec![one];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = ring.mul_idx(x, g);
            if !set.contains(y) {
                set.insert(y);
                stack.push(y);
            }
        }
    }
    set
}

impl Subgroup {
    fn assemble(ring: &Arc<Ring>, kind: SubgroupKind, members: FixedBitSet, generators: Option<Vec<usize>>) -> Subgroup {
        let list: Vec<usize> = members.ones().collect();
        let generators = match generators {
            Some(g) => g,
            None if list.len() > FULL_MULTIPLIER_CAP => greedy_generators(ring, &list),
            None => list.clone(),
        };
        Subgroup { ring: ring.clone(), kind, members, list, generators }
    }

    pub fn full_units(ring: &Arc<Ring>) -> Subgroup {
        Subgroup::assemble(ring, SubgroupKind::FullUnits, ring.units().clone(), None)
    }

    /// Invertible matrices of determinant one over a commutative base.
    pub fn special_linear(ring: &Arc<Ring>) -> Result<Subgroup, OrbitError> {
        let base_one = ring.matrix_base_one();
        let minus_one = ring.neg_idx(ring.one_idx());
        match (base_one, ring.determinant(minus_one)) {
            (Some(one), Some(det)) => {
                if det != one {
                    return Err(OrbitError::MinusOneAbsent);
                }
                let mut members = FixedBitSet::with_capacity(ring.size());
                for u in ring.units().ones() {
                    if ring.determinant(u) == Some(one) {
                        members.insert(u);
                    }
                }
                Ok(Subgroup::assemble(ring, SubgroupKind::SpecialLinear, members, None))
            }
            _ => Err(OrbitError::Unsupported(
                "the special linear group needs a matrix ring over a commutative base".into(),
            )),
        }
    }

    pub fn permutation_matrices(ring: &Arc<Ring>) -> Result<Subgroup, OrbitError> {
        let perms = ring
            .permutation_matrices()
            .ok_or_else(|| OrbitError::Unsupported("permutation matrices need a matrix ring".into()))?;
        let mut members = FixedBitSet::with_capacity(ring.size());
        for &p in &perms {
            members.insert(p);
        }
        if !members.contains(ring.neg_idx(ring.one_idx())) {
            return Err(OrbitError::MinusOneAbsent);
        }
        Ok(Subgroup::assemble(ring, SubgroupKind::PermutationMatrices, members, None))
    }

    /// Group generated by `gens`, with `-1` adjoined if needed.
    pub fn generated(ring: &Arc<Ring>, gens: &[usize]) -> Result<Subgroup, OrbitError> {
        for &g in gens {
            if g >= ring.size() || !ring.is_unit_idx(g) {
                let shown = if g < ring.size() { ring.label_idx(g) } else { format!("index {g}") };
                return Err(OrbitError::NonUnitGenerator(shown));
            }
        }
        let minus_one = ring.neg_idx(ring.one_idx());
        let mut all = gens.to_vec();
        let mut members = closure(ring, &all);
        let adjoined = !members.contains(minus_one);
        if adjoined {
            all.push(minus_one);
            members = closure(ring, &all);
        }
        if all.is_empty() {
            all.push(ring.one_idx());
        }
        let kind = SubgroupKind::Generated { generators: gens.to_vec(), adjoined_minus_one: adjoined };
        Ok(Subgroup::assemble(ring, kind, members, Some(all)))
    }

    pub fn from_spec(ring: &Arc<Ring>, spec: &SubgroupSpec) -> Result<Subgroup, OrbitError> {
        match spec {
            SubgroupSpec::Units => Ok(Subgroup::full_units(ring)),
            SubgroupSpec::SpecialLinear => Subgroup::special_linear(ring),
            SubgroupSpec::PermutationMatrices => Subgroup::permutation_matrices(ring),
            SubgroupSpec::Generated(descs) => {
                let gens = descs.iter().map(|d| ring.parse_idx(d)).collect::<Result<Vec<_>, _>>()?;
                Subgroup::generated(ring, &gens)
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.contains(u)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn member_list(&self) -> &[usize] {
        &self.list
    }

    /// A set of elements generating the subgroup.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Multipliers used to grow double cosets.
    pub fn multipliers(&self) -> &[usize] {
        if self.list.len() <= FULL_MULTIPLIER_CAP {
            &self.list
        } else {
            &self.generators
        }
    }

    /// Checks that the members are units forming a group that contains `-1`.
    pub fn is_valid(&self) -> bool {
        let ring = &self.ring;
        let minus_one = ring.neg_idx(ring.one_idx());
        self.contains(ring.one_idx())
            && self.contains(minus_one)
            && self.list.iter().all(|&u| ring.is_unit_idx(u))
            && self.list.iter().all(|&u| self.generators.iter().all(|&g| self.contains(ring.mul_idx(u, g))))
            && closure(ring, &self.generators) == self.members
    }
}

fn greedy_generators(ring: &Ring, list: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = closure(ring, &gens);
    for &u in list {
        if !current.contains(u) {
            gens.push(u);
            current = closure(ring, &gens);
            if current.count_ones(..) == list.len() {
                break;
            }
        }
    }
    gens
}

/// Invariant attached to a class of a matrix ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Rank(usize),
    Smith(Vec<u32>),
    /// Invertible class under the special linear group.
    Determinant(Value),
}

/// The double quotient `U\R/U`, ordered with the zero class first and then
/// by least member index.
#[derive(Debug)]
pub struct OrbitPartition {
    subgroup: Arc<Subgroup>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<u32>,
    labels: Option<Vec<ClassLabel>>,
}

impl OrbitPartition {
    /// Grows each class from its least unassigned element under left and
    /// right multiplication by the subgroup's multipliers.
    pub fn compute(subgroup: &Arc<Subgroup>) -> OrbitPartition {
        let ring = subgroup.ring();
        let n = ring.size();
        let mult = subgroup.multipliers();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        let mut stack = Vec::new();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = vec![x];
            class_of[x] = id;
            stack.push(x);
            while let Some(y) = stack.pop() {
                for &u in mult {
                    for z in [ring.mul_idx(u, y), ring.mul_idx(y, u)] {
                        if class_of[z] == u32::MAX {
                            class_of[z] = id;
                            members.push(z);
                            stack.push(z);
                        }
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let mut partition = OrbitPartition { subgroup: subgroup.clone(), classes, class_of, labels: None };
        partition.labels = partition
            .label_fn()
            .map(|f| partition.classes.iter().map(|c| f(c[0])).collect());
        partition
    }

    /// The invariant that classifies classes, when one is known.
    fn label_fn(&self) -> Option<Box<dyn Fn(usize) -> ClassLabel + '_>> {
        let ring = self.ring();
        let lb = ring.local_base_info()?;
        match (self.subgroup.kind(), lb.is_field()) {
            (SubgroupKind::FullUnits, true) => Some(Box::new(|x| ClassLabel::Rank(ring.matrix_rank(x).unwrap()))),
            (SubgroupKind::FullUnits, false) => {
                Some(Box::new(|x| ClassLabel::Smith(ring.smith_form(x).unwrap().exponents)))
            }
            (SubgroupKind::SpecialLinear, true) => Some(Box::new(|x| {
                if ring.is_unit_idx(x) {
                    let det = ring.determinant(x).unwrap();
                    ClassLabel::Determinant(ring.render_base_idx(det).unwrap())
                } else {
                    ClassLabel::Rank(ring.matrix_rank(x).unwrap())
                }
            })),
            _ => None,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.subgroup.ring()
    }

    pub fn subgroup(&self) -> &Arc<Subgroup> {
        &self.subgroup
    }

    /// Number of classes `m`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    /// Least member of class `i`.
    pub fn rep(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn labels(&self) -> Option<&[ClassLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&ClassLabel> {
        self.labels.as_ref().map(|l| &l[i])
    }

    /// Checks the partition axioms: a disjoint cover with `{0}` first, stable
    /// under multiplication by the subgroup on either side.
    pub fn verify(&self) -> bool {
        let ring = self.ring();
        let covered: usize = self.classes.iter().map(Vec::len).sum();
        let consistent = self
            .classes
            .iter()
            .enumerate()
            .all(|(i, c)| c.iter().all(|&x| self.class_of(x) == i));
        let gens = self.subgroup.generators();
        let stable = (0..ring.size()).all(|x| {
            gens.iter().all(|&u| {
                self.class_of(ring.mul_idx(u, x)) == self.class_of(x)
                    && self.class_of(ring.mul_idx(x, u)) == self.class_of(x)
            })
        });
        covered == ring.size() && self.classes[0] == [0] && consistent && stable
    }

    /// Whether the invariant labels reproduce the partition exactly: the label
    /// of every element equals its class label and labels are pairwise distinct.
    pub fn labels_match(&self) -> Option<bool> {
        let labels = self.labels.as_ref()?;
        let f = self.label_fn()?;
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Some(false);
            }
        }
        Some((0..self.ring().size()).all(|x| f(x) == labels[self.class_of(x)]))
    }

    /// Class indices whose union contains exactly the units.
    pub fn unit_classes(&self) -> Vec<usize> {
        let ring = self.ring();
        (1..self.len()).filter(|&i| ring.is_unit_idx(self.rep(i))).collect()
    }

    pub fn select(&self, selector: &Selector) -> Result<ClassSelection, OrbitError> {
        orbit_union(self, selector)
    }
}

/// Constraint on class invariants; every given field must match.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantSelector {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smith: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<Vec<Value>>,
}

/// Choice of classes forming a connection set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Selector {
    Classes(Vec<usize>),
    Reps(Vec<Value>),
    Invariant(InvariantSelector),
    AllNonzero(bool),
    Units(bool),
    /// The subgroup itself, i.e. the class of `1`.
    Subgroup(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSelection {
    classes: Vec<usize>,
    set: FixedBitSet,
}

impl ClassSelection {
    /// Sorted class indices.
    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn set(&self) -> &FixedBitSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains_class(&self, i: usize) -> bool {
        self.classes.binary_search(&i).is_ok()
    }

    /// All nonzero classes not in this selection.
    pub fn complement(&self, partition: &OrbitPartition) -> ClassSelection {
        let rest: Vec<usize> = (1..partition.len()).filter(|i| !self.contains_class(*i)).collect();
        ClassSelection::from_classes(partition, rest)
    }

    fn from_classes(partition: &OrbitPartition, mut classes: Vec<usize>) -> ClassSelection {
        classes.sort_unstable();
        classes.dedup();
        let mut set = FixedBitSet::with_capacity(partition.ring().size());
        for &i in &classes {
            for &x in partition.class(i) {
                set.insert(x);
            }
        }
        ClassSelection { classes, set }
    }
}

/// Union of the chosen classes.
pub fn orbit_union(partition: &OrbitPartition, selector: &Selector) -> Result<ClassSelection, OrbitError> {
    let ring = partition.ring();
    let m = partition.len();
    let classes: Vec<usize> = match selector {
        Selector::Classes(ids) => {
            for &i in ids {
                if i >= m {
                    return Err(OrbitError::UnknownClass(i));
                }
                if i == 0 {
                    return Err(OrbitError::ZeroClassSelected);
                }
            }
            ids.clone()
        }
        Selector::Reps(descs) => {
            let mut out = Vec::with_capacity(descs.len());
            for d in descs {
                let i = partition.class_of(ring.parse_idx(d)?);
                if i == 0 {
                    return Err(OrbitError::ZeroClassSelected);
                }
                out.push(i);
            }
            out
        }
        Selector::AllNonzero(true) => (1..m).collect(),
        Selector::Units(true) => partition.unit_classes(),
        Selector::Subgroup(true) => vec![partition.class_of(ring.one_idx())],
        Selector::AllNonzero(false) | Selector::Units(false) | Selector::Subgroup(false) => {
            return Err(OrbitError::InvalidSelector("flag selectors must be true".into()))
        }
        Selector::Invariant(inv) => select_by_invariant(partition, inv)?,
    };
    Ok(ClassSelection::from_classes(partition, classes))
}

fn select_by_invariant(partition: &OrbitPartition, inv: &InvariantSelector) -> Result<Vec<usize>, OrbitError> {
    let ring = partition.ring();
    if inv.rank.is_none() && inv.smith.is_none() && inv.determinant.is_none() {
        return Err(OrbitError::InvalidSelector("invariant selector names no invariant".into()));
    }
    let holds = |x: usize| -> Result<bool, OrbitError> {
        if let Some(ranks) = &inv.rank {
            let r = ring
                .matrix_rank(x)
                .ok_or_else(|| OrbitError::InvalidSelector("rank needs a matrix ring over a field".into()))?;
            if !ranks.contains(&r) {
                return Ok(false);
            }
        }
        if let Some(forms) = &inv.smith {
            let SmithForm { exponents } = ring.smith_form(x).ok_or_else(|| {
                OrbitError::InvalidSelector("Smith forms need a matrix ring over Z/p^e or a field".into())
            })?;
            if !forms.contains(&exponents) {
                return Ok(false);
            }
        }
        if let Some(dets) = &inv.determinant {
            let det = ring
                .determinant(x)
                .and_then(|d| ring.render_base_idx(d))
                .ok_or_else(|| OrbitError::InvalidSelector("determinant needs a commutative matrix base".into()))?;
            if !dets.contains(&det) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut out = Vec::new();
    for i in 1..partition.len() {
        let class = partition.class(i);
        let first = holds(class[0])?;
        for &x in &class[1..] {
            if holds(x)? != first {
                return Err(OrbitError::InvalidSelector(format!("invariant is not constant on class {i}")));
            }
        }
        if first {
            out.push(i);
        }
    }
    Ok(out)
}
