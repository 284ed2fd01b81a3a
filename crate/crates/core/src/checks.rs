//! The acceptance suite as library code, shared by the test target and the
//! `selftest` command.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    convergent_sum_identity_holds, euclid_subtractive, euclid_trace, gcd, mod_inverse, remainder_bounds_hold,
    reversal_identity_holds, rotation_congruences_hold,
};
use crate::bounds::{certify, extremal_profile, lemma5_bound, lemma9_oracle_min_with_cap};
use crate::construct::optimal_triangulation;
use crate::error::Result;
use crate::farey::{crossing_count, crossing_count_geodesic, crossing_count_tree_walk, ExtendedRational};
use crate::flipdist::{distance_bfs, distance_bounded, FlipGraph};
use crate::spinehull::{
    basepoint_invariance, brute_force_hull, convex_hull_4d, orbit_points, spine_summary_generic,
    sphere_voronoi_restriction_check, OrbitConfig,
};
use crate::triangulation::{enumerate_all, Triangulation};

/// Ranges and sample sizes of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub euclid_max_p: u64,
    pub farey_max: u64,
    pub exhaustive_max_p: usize,
    pub oracle_cap: u64,
    pub spine_max_p: usize,
    pub property_max_p: usize,
    pub voronoi_samples: usize,
    pub metric_triples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            euclid_max_p: 500,
            farey_max: 200,
            exhaustive_max_p: 12,
            oracle_cap: 14,
            spine_max_p: 20,
            property_max_p: 12,
            voronoi_samples: 10_000,
            metric_triples: 300,
            seed: 20_240_601,
        }
    }
}

impl SuiteConfig {
    /// Caps every polygon-size range at `max_p`.
    pub fn with_max_p(max_p: usize) -> Self {
        let d = SuiteConfig::default();
        SuiteConfig {
            exhaustive_max_p: d.exhaustive_max_p.min(max_p),
            spine_max_p: d.spine_max_p.min(max_p),
            property_max_p: d.property_max_p.min(max_p),
            ..d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} criterion {}: {} ({}; {:.1}s)", self.id, self.name, self.detail, self.seconds)
    }
}

fn timed(id: u8, name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult { id, name: name.into(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn first_failure<T: std::fmt::Debug>(failures: Vec<T>, checked: usize, what: &str) -> (bool, String) {
    match failures.first() {
        None => (true, format!("{checked} {what}")),
        Some(f) => (false, format!("{} of {checked} {what} failed, first {f:?}", failures.len())),
    }
}

fn coprime_pairs(max_p: u64) -> Vec<(u64, u64)> {
    (2..=max_p).flat_map(|p| (1..p).filter(move |&q| gcd(p, q) == 1).map(move |q| (p, q))).collect()
}

pub fn euclid_identities(cfg: &SuiteConfig) -> CheckResult {
    timed(1, "Euclid symmetry and convergent identities", || {
        let pairs = coprime_pairs(cfg.euclid_max_p);
        let failures: Vec<(u64, u64)> = pairs
            .par_iter()
            .copied()
            .filter(|&(p, q)| {
                let ok = || -> Result<bool> {
                    let e = euclid_subtractive(p, q)?;
                    let trace = euclid_trace(p, q)?;
                    Ok(e == euclid_subtractive(p, p - q)?
                        && e == euclid_subtractive(p, mod_inverse(q, p)?)?
                        && rotation_congruences_hold(&trace)
                        && convergent_sum_identity_holds(&trace)
                        && remainder_bounds_hold(&trace)
                        && reversal_identity_holds(p, q)? != Some(false))
                };
                !ok().unwrap_or(false)
            })
            .collect();
        Ok(first_failure(failures, pairs.len(), "pairs"))
    })
}

pub fn farey_crossings(cfg: &SuiteConfig) -> CheckResult {
    timed(2, "Farey crossing count equals E", || {
        let n = cfg.farey_max;
        let pairs: Vec<(u64, u64)> =
            (1..=n).flat_map(|a| (1..=n).filter(move |&b| gcd(a, b) == 1).map(move |b| (a, b))).collect();
        let failures: Vec<(u64, u64)> = pairs
            .par_iter()
            .copied()
            .filter(|&(a, b)| {
                let ok = || -> Result<bool> {
                    let e = euclid_subtractive(a, b)?;
                    let x = ExtendedRational::new(a as i64, b as i64).expect("nonzero denominator");
                    let tree = crossing_count_tree_walk(x);
                    let geodesic_agrees = crossing_count_geodesic(x).is_none_or(|g| g == tree);
                    Ok(crossing_count(a as i64, b)? == e && tree == e && geodesic_agrees)
                };
                !ok().unwrap_or(false)
            })
            .collect();
        Ok(first_failure(failures, pairs.len(), "fractions"))
    })
}

/// `max(0, E(p, q) - 3)`, with `E(p, 0) = 0`.
fn expected_distance(p: usize, q: usize) -> usize {
    if q == 0 {
        return 0;
    }
    (euclid_subtractive(p as u64, q as u64).expect("nonzero pair") as usize).saturating_sub(3)
}

pub fn exhaustive_rotation_distance(cfg: &SuiteConfig) -> CheckResult {
    timed(3, "exhaustive minimum rotation distance", || {
        let mut failures = Vec::new();
        let mut cases = 0;
        for p in 3..=cfg.exhaustive_max_p {
            let graph = FlipGraph::build(p)?;
            for q in 0..p {
                cases += 1;
                let (d, _) = graph.min_rotation_distance(q);
                let expected = expected_distance(p, q);
                if d != expected {
                    failures.push(format!("({p},{q}) min {d} expected {expected}"));
                }
                if q > 0 && gcd(p as u64, q as u64) == 1 {
                    let bad = graph.nodes().par_iter().filter(|t| t.destroyed_count(q as i64) < expected).count();
                    if bad > 0 {
                        failures.push(format!("({p},{q}) {bad} triangulations destroy fewer than {expected}"));
                    }
                }
            }
        }
        Ok(first_failure(failures, cases, "(p,q) cases"))
    })
}

pub fn profile_oracle(cfg: &SuiteConfig) -> CheckResult {
    timed(4, "length profile minimum oracle", || {
        // Σ n_i <= cap forces p <= F_{cap+1}.
        let (mut a, mut b) = (1u64, 1u64);
        for _ in 0..cfg.oracle_cap {
            (a, b) = (b, a + b);
        }
        let max_p = a;
        let pairs: Vec<(u64, u64)> = coprime_pairs(max_p)
            .into_iter()
            .filter(|&(p, q)| p >= 3 && 2 * q < p && euclid_subtractive(p, q).is_ok_and(|e| e <= cfg.oracle_cap))
            .collect();
        let failures: Vec<String> = pairs
            .par_iter()
            .filter_map(|&(p, q)| {
                let check = || -> Result<Option<String>> {
                    let trace = euclid_trace(p, q)?;
                    let oracle = lemma9_oracle_min_with_cap(&trace, cfg.oracle_cap)?;
                    let target = trace.complexity() - 3;
                    let extremal = if trace.k() == 1 { oracle.minimizer.clone() } else { extremal_profile(&trace)? };
                    let ok = oracle.minimum == target && oracle.minimizers == 1 && oracle.minimizer == extremal;
                    Ok((!ok).then(|| format!("({p},{q}) min {} of {target}, {} minimisers", oracle.minimum, oracle.minimizers)))
                };
                check().unwrap_or_else(|e| Some(format!("({p},{q}) {e}")))
            })
            .collect();
        Ok(first_failure(failures, pairs.len(), "pairs"))
    })
}

pub fn figure_instance() -> CheckResult {
    timed(5, "optimal triangulation for (34,13)", || {
        let c = optimal_triangulation(34, 13)?;
        let cert = c.certificate.as_ref().expect("p > 3");
        let rotated = c.triangulation.rotate(13);
        let no_shorter = distance_bounded(&c.triangulation, &rotated, 4)?.is_none();
        let ok = cert.destroyed_count == 5
            && cert.target == 5
            && cert.is_sound()
            && cert.profile.counts == [0, 2, 3, 5, 8, 13]
            && c.witness.len() == 5
            && c.witness.start == c.triangulation
            && c.witness.end()? == rotated
            && no_shorter;
        Ok((
            ok,
            format!(
                "destroyed {}, profile {:?}, witness {} flips, no 4-flip path {no_shorter}",
                cert.destroyed_count,
                cert.profile.counts,
                c.witness.len()
            ),
        ))
    })
}

pub fn spine_counts(cfg: &SuiteConfig) -> CheckResult {
    timed(6, "spine vertex counts from 4D hulls", || {
        let pairs: Vec<(usize, usize)> = (5..=cfg.spine_max_p)
            .flat_map(|p| (2..p - 1).filter(move |&q| gcd(p as u64, q as u64) == 1).map(move |q| (p, q)))
            .collect();
        let failures: Vec<String> = pairs
            .par_iter()
            .filter_map(|&(p, q)| {
                let check = || -> Result<Option<String>> {
                    let s = spine_summary_generic(p, q)?;
                    let config = OrbitConfig::new(p, q).with_angles(s.theta, 0.1, 0.2);
                    let points = orbit_points(&config)?;
                    let agree = convex_hull_4d(&points)?.facet_sets() == brute_force_hull(&points)?.facet_sets();
                    let ok = s.count_matches() == Some(true)
                        && s.facet_count == p * s.expected_vertex_count
                        && s.euler_characteristic == 0
                        && (s.monodromy_r * q) % p == 1
                        && agree;
                    Ok((!ok).then(|| format!("{s:?} oracle agrees {agree}")))
                };
                check().unwrap_or_else(|e| Some(format!("({p},{q}) {e}")))
            })
            .collect();
        let anchors = || -> Result<bool> {
            let a = spine_summary_generic(5, 2)?;
            let b = spine_summary_generic(7, 2)?;
            Ok((a.facet_count, a.spine_vertex_count, b.facet_count, b.spine_vertex_count) == (5, 1, 14, 2))
        };
        let (mut ok, mut detail) = first_failure(failures, pairs.len(), "pairs");
        if !anchors()? {
            ok = false;
            detail.push_str(", anchors (5,2) and (7,2) wrong");
        }
        Ok((ok, detail))
    })
}

pub fn basepoint_checks() -> CheckResult {
    timed(7, "base point invariance", || {
        let a = basepoint_invariance(7, 2, 5)?;
        let b = basepoint_invariance(11, 3, 3)?;
        Ok((a && b, format!("(7,2) x5 {a}, (11,3) x3 {b}")))
    })
}

pub fn voronoi_restriction(cfg: &SuiteConfig) -> CheckResult {
    timed(8, "spherical and ambient Voronoi agree", || {
        let points: Vec<Vec<f64>> = orbit_points(&OrbitConfig::new(5, 2))?.iter().map(|x| x.to_vec()).collect();
        let c = sphere_voronoi_restriction_check(&points, cfg.voronoi_samples, cfg.seed);
        Ok((
            c.agrees() && c.agreements + c.ties == cfg.voronoi_samples,
            format!("{} samples, {} agree, {} ties", c.samples, c.agreements, c.ties),
        ))
    })
}

fn flip_properties(t: &Triangulation) -> Result<bool> {
    let p = t.p();
    for d in t.diagonals() {
        let f = t.flip(d)?;
        if t.difference_count(&f) != 1 {
            return Ok(false);
        }
        let created = f.diagonals().iter().find(|e| !t.contains(e)).expect("one new diagonal");
        if f.flip(created)? != *t {
            return Ok(false);
        }
        for q in 0..p {
            if t.rotate(q as i64).flip(&d.rotated(p, q))? != f.rotate(q as i64) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn bound_properties(t: &Triangulation) -> Result<bool> {
    let p = t.p();
    for x in 2..=p / 2 {
        if (t.long_diagonal_count(x)? as i64) < lemma5_bound(p, x)? {
            return Ok(false);
        }
    }
    for q in (1..p).filter(|&q| gcd(p as u64, q as u64) == 1) {
        let cert = certify(t, q)?;
        if !cert.partial_sum_checks.iter().all(|&c| c) || !cert.is_sound() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn metric_axioms(cfg: &SuiteConfig) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sizes: Vec<usize> = (4..=cfg.property_max_p.min(9)).collect();
    let mut failures = Vec::new();
    if sizes.is_empty() {
        return Ok((0, failures));
    }
    let pools: Vec<Vec<Triangulation>> =
        sizes.iter().map(|&p| enumerate_all(p).map(Iterator::collect)).collect::<Result<_>>()?;
    for i in 0..cfg.metric_triples {
        let pool = &pools[i % pools.len()];
        let [a, b, c] = [0; 3].map(|_| &pool[rng.gen_range(0..pool.len())]);
        let (ab, _) = distance_bfs(a, b)?;
        let (ba, _) = distance_bfs(b, a)?;
        let (bc, _) = distance_bfs(b, c)?;
        let (ac, _) = distance_bfs(a, c)?;
        let (aa, _) = distance_bfs(a, a)?;
        let ok = aa == 0 && ab == ba && (ab == 0) == (a == b) && ac <= ab + bc;
        if !ok {
            failures.push(format!("{} {} {}", a.to_text(), b.to_text(), c.to_text()));
        }
    }
    Ok((cfg.metric_triples, failures))
}

pub fn property_suites(cfg: &SuiteConfig) -> CheckResult {
    timed(9, "flip, rotation, long diagonal, partial sum and metric properties", || {
        let mut failures = Vec::new();
        let mut count = 0;
        for p in 4..=cfg.property_max_p {
            let all: Vec<Triangulation> = enumerate_all(p)?.collect();
            count += all.len();
            let bad = all
                .par_iter()
                .filter(|t| !(flip_properties(t).unwrap_or(false) && bound_properties(t).unwrap_or(false)))
                .count();
            if bad > 0 {
                failures.push(format!("p={p}: {bad} triangulations"));
            }
        }
        let (triples, metric) = metric_axioms(cfg)?;
        failures.extend(metric);
        let (ok, detail) = first_failure(failures, count, "triangulations");
        Ok((ok, format!("{detail}, {triples} metric triples")))
    })
}

/// Every criterion in order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        euclid_identities(cfg),
        farey_crossings(cfg),
        exhaustive_rotation_distance(cfg),
        profile_oracle(cfg),
        figure_instance(),
        spine_counts(cfg),
        basepoint_checks(),
        voronoi_restriction(cfg),
        property_suites(cfg),
    ]
}
