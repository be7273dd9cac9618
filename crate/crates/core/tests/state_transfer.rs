use std::f64::consts::PI;

use serde_json::json;
use ucayley::cayley::CayleyGraph;
use ucayley::instance::Instance;
use ucayley::orbits::{Selector, SubgroupSpec};
use ucayley::pst::{decide_pst, delta_subgroup, pst_candidates, solve_tau, PstVerdict, QuantumWalk};
use ucayley::ring::{lcm, RingSpec};
use ucayley::spectra::{spectrum_oracle, Spectrum};

fn all_graphs(inst: &Instance) -> Vec<CayleyGraph> {
    let k = inst.partition().len() - 1;
    (1u32..(1 << k))
        .map(|mask| {
            let classes = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            inst.graph(&Selector::Classes(classes)).unwrap()
        })
        .collect()
}

fn small_instances() -> Vec<Instance> {
    let f = |p| RingSpec::gf(p, 1);
    [
        (RingSpec::zmod(4), SubgroupSpec::Units),
        (RingSpec::zmod(4), SubgroupSpec::Generated(vec![json!(1)])),
        (RingSpec::zmod(8), SubgroupSpec::Units),
        (RingSpec::zmod(8), SubgroupSpec::Generated(vec![json!(1)])),
        (RingSpec::zmod(12), SubgroupSpec::Units),
        (RingSpec::product(vec![RingSpec::zmod(2), RingSpec::zmod(4)]), SubgroupSpec::Units),
        (RingSpec::product(vec![RingSpec::zmod(2), RingSpec::zmod(2), RingSpec::zmod(2)]), SubgroupSpec::Units),
        (RingSpec::gf(2, 2), SubgroupSpec::Units),
        (RingSpec::matrix(2, f(2)), SubgroupSpec::Units),
        (RingSpec::matrix(2, f(2)), SubgroupSpec::PermutationMatrices),
    ]
    .into_iter()
    .map(|(r, u)| Instance::build(&r, &u).unwrap())
    .collect()
}

/// Smallest `j` in `1..=nD` with `d_r j / (nD) + m_r / n ∈ Z` for all `r`,
/// found by scanning the whole grid.
fn grid_tau(g: &CayleyGraph, spectrum: &Spectrum, inst: &Instance, s: usize) -> Option<(i64, i64)> {
    let per_elem: Vec<i64> = (0..g.order()).map(|r| spectrum.eigenvalue(inst.partition().class_of(r)).as_integer().unwrap()).collect();
    let d: Vec<i64> = per_elem.iter().map(|l| l - per_elem[0]).collect();
    let big_d = d.iter().filter(|&&x| x != 0).fold(1u64, |acc, &x| lcm(acc, x.unsigned_abs())) as i64;
    let n = inst.functional().modulus() as i64;
    let modulus = n * big_d;
    (1..=modulus)
        .find(|&j| (0..g.order()).all(|r| (d[r] * j + inst.functional().chi_exponent_idx(r, s) as i64 * big_d).rem_euclid(modulus) == 0))
        .map(|j| {
            let g = ucayley::ring::gcd(j as u64, modulus as u64) as i64;
            (j / g, modulus / g)
        })
}

#[test]
fn congruence_solver_matches_grid_scan() {
    let mut exists = 0;
    for inst in small_instances() {
        for g in all_graphs(&inst) {
            let spectrum = inst.spectrum(&g).unwrap();
            if !spectrum.is_integral() {
                continue;
            }
            for s in 1..g.order() {
                let exact = solve_tau(&g, &spectrum, inst.functional(), s);
                assert_eq!(exact, grid_tau(&g, &spectrum, &inst, s), "{} classes {:?} s={s}", inst.ring().spec(), g.classes());
                exists += exact.is_some() as usize;
            }
        }
    }
    assert!(exists > 0);
}

/// `Δ` is generated by equal-eigenvalue differences; building it from the
/// per-element eigenvalues gives the same group.
#[test]
fn delta_from_per_element_eigenvalues() {
    for inst in small_instances() {
        for g in all_graphs(&inst) {
            let spectrum = inst.spectrum(&g).unwrap();
            let delta = delta_subgroup(&g, &spectrum);
            let lam = spectrum_oracle(&g, inst.functional());
            let ring = inst.ring();
            let mut gens = Vec::new();
            for a in 0..g.order() {
                for b in 0..g.order() {
                    if lam[a] == lam[b] {
                        gens.push(ring.sub_idx(a, b));
                    }
                }
            }
            let closure = ucayley::ring::additive_closure(ring, gens);
            assert_eq!(&closure, delta.members());
        }
    }
}

/// Any `s` ruled out by `Δ` admits no transfer time.
#[test]
fn delta_obstruction_is_sound() {
    let mut excluded = 0;
    for inst in small_instances() {
        for g in all_graphs(&inst) {
            let spectrum = inst.spectrum(&g).unwrap();
            if !spectrum.is_integral() {
                continue;
            }
            let delta = delta_subgroup(&g, &spectrum);
            let candidates = pst_candidates(&g, &delta, inst.functional());
            for s in 1..g.order() {
                let blocked = delta.members().ones().any(|d| inst.functional().chi_exponent_idx(d, s) != 0);
                assert_eq!(blocked, !candidates.contains(&s));
                if blocked {
                    assert_eq!(solve_tau(&g, &spectrum, inst.functional(), s), None);
                    excluded += 1;
                }
            }
        }
    }
    assert!(excluded > 0);
}

/// Amplitudes depend only on the difference of the two vertices.
#[test]
fn translation_symmetry() {
    for inst in small_instances() {
        let g = inst.unit_graph();
        let spectrum = inst.spectrum(&g).unwrap();
        let walk = QuantumWalk::new(&g, &spectrum, inst.functional());
        let ring = inst.ring();
        let report = decide_pst(&g, &spectrum, inst.functional());
        for t in [0.3, 1.1, PI / 2.0, 2.9] {
            for a in 0..g.order() {
                for x in [1usize, g.order() - 1] {
                    let lhs = walk.amplitude(a, 0, t);
                    let rhs = walk.amplitude(ring.add_idx(a, x), x, t);
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
        for w in &report.witnesses {
            for x in 0..g.order() {
                assert!(walk.amplitude(x, ring.add_idx(x, w.s), w.t) > 1.0 - 1e-9);
            }
        }
    }
}

/// Every `NotExists` verdict on an integral spectrum with `|R| <= 64` is
/// backed by a time scan that never gets close to 1. Integer eigenvalues make
/// the walk `2π`-periodic, so one period covers any longer horizon such as
/// `(0, 2π n D]`; the periodicity is checked directly.
#[test]
fn negative_verdicts_survive_numeric_scan() {
    let mut scanned = 0;
    for inst in small_instances() {
        for g in all_graphs(&inst) {
            let spectrum = inst.spectrum(&g).unwrap();
            if !spectrum.is_integral() || g.order() > 64 {
                continue;
            }
            let report = decide_pst(&g, &spectrum, inst.functional());
            if report.verdict != PstVerdict::NotExists {
                continue;
            }
            let walk = QuantumWalk::new(&g, &spectrum, inst.functional());
            for s in 1..g.order() {
                for t in [0.7, 2.3, 5.1] {
                    assert!((walk.amplitude(0, s, t) - walk.amplitude(0, s, t + 2.0 * PI * 7.0)).abs() < 1e-9);
                }
                let peak = walk.max_amplitude(0, s, 2.0 * PI, 1e-3);
                assert!(peak < 1.0 - 1e-6, "{} classes {:?} s={s} peak {peak}", inst.ring().spec(), g.classes());
            }
            scanned += 1;
        }
    }
    assert!(scanned > 5);
}

#[test]
fn c4_walk_closed_form() {
    let inst = Instance::build(&RingSpec::zmod(4), &SubgroupSpec::Units).unwrap();
    let g = inst.unit_graph();
    let spectrum = inst.spectrum(&g).unwrap();
    let walk = QuantumWalk::new(&g, &spectrum, inst.functional());
    assert!((walk.amplitude(0, 2, PI / 2.0) - 1.0).abs() < 1e-12);
    assert!((walk.amplitude(1, 3, PI / 2.0) - 1.0).abs() < 1e-12);
    assert!(walk.amplitude(0, 1, PI / 2.0) < 1e-12);
}

#[test]
fn gcd_graphs_over_m2f2_have_whole_delta() {
    let inst = Instance::build(&RingSpec::matrix(2, RingSpec::gf(2, 1)), &SubgroupSpec::Units).unwrap();
    for g in all_graphs(&inst) {
        let spectrum = inst.spectrum(&g).unwrap();
        let delta = delta_subgroup(&g, &spectrum);
        assert!(delta.is_whole());
        assert!(pst_candidates(&g, &delta, inst.functional()).is_empty());
    }
    let perm = Instance::build(&RingSpec::matrix(2, RingSpec::gf(2, 1)), &SubgroupSpec::PermutationMatrices).unwrap();
    let g = perm.unit_graph();
    let spectrum = perm.spectrum(&g).unwrap();
    let delta = delta_subgroup(&g, &spectrum);
    let candidates = pst_candidates(&g, &delta, perm.functional());
    let antipode = perm.ring().add_idx(perm.ring().one_idx(), perm.ring().parse_idx(&json!([[0, 1], [1, 0]])).unwrap());
    assert!(candidates.contains(&antipode));
}
