//! Convex hulls of cyclic orbits on the unit sphere of `C^2`.
//!
//! The orbit of `(z, w)` under `(z, w) -> (ξ z, ξ^q w)` is a set of `p`
//! points on `S^3 ⊂ R^4`. Facets of its convex hull are dual to vertices of
//! the Voronoi diagram on the sphere, so after dividing by the free cyclic
//! action they count the vertices of the cut locus in the lens space.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::arith::{euclid_subtractive, gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::predicates::{orient4d, Sign, DEFAULT_COORD_UNCERTAINTY};

const GOLDEN: f64 = 1.618_033_988_749_895;

/// Attempts made by the reseed rule and by random sampling before giving up.
pub const MAX_RESEEDS: usize = 16;

/// `θ_n = atan(φ_g^(n+1))`: the default base point is `n = 0`, later values
/// are used when the previous one turns out degenerate.
pub fn reseed_theta(n: usize) -> f64 {
    GOLDEN.powi(n as i32 + 1).atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub p: usize,
    pub q: usize,
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// Allow `θ = 0` or `θ = π/2`, where the orbit is a flat regular polygon.
    pub allow_core_circle: bool,
}

impl OrbitConfig {
    pub fn new(p: usize, q: usize) -> Self {
        OrbitConfig { p, q, theta: reseed_theta(0), phi1: 0.1, phi2: 0.2, allow_core_circle: false }
    }

    pub fn with_angles(mut self, theta: f64, phi1: f64, phi2: f64) -> Self {
        self.theta = theta;
        self.phi1 = phi1;
        self.phi2 = phi2;
        self
    }
}

/// Point `k` is `(Re ξ^k z, Im ξ^k z, Re ξ^{kq} w, Im ξ^{kq} w)`.
pub fn orbit_points(config: &OrbitConfig) -> Result<Vec<[f64; 4]>> {
    let OrbitConfig { p, q, theta, phi1, phi2, allow_core_circle } = *config;
    if p < 3 {
        return Err(Error::TooFewVertices(p));
    }
    let inside = theta > 0.0 && theta < FRAC_PI_2;
    let on_core = theta == 0.0 || theta == FRAC_PI_2;
    if !(inside || allow_core_circle && on_core) {
        return Err(Error::CoreCircle(theta));
    }
    let (rz, rw) = (theta.cos(), theta.sin());
    Ok((0..p)
        .map(|k| {
            let a = phi1 + TAU * k as f64 / p as f64;
            let b = phi2 + TAU * ((k * q) % p) as f64 / p as f64;
            [rz * a.cos(), rz * a.sin(), rw * b.cos(), rw * b.sin()]
        })
        .collect())
}

pub fn orbit_csv(points: &[[f64; 4]]) -> String {
    let mut out = String::from("k,x1,x2,x3,x4\n");
    for (k, x) in points.iter().enumerate() {
        let _ = writeln!(out, "{k},{:.17},{:.17},{:.17},{:.17}", x[0], x[1], x[2], x[3]);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Unit outward normal of the supporting hyperplane.
    pub normal: [f64; 4],
    /// Some other input point lies on the supporting hyperplane.
    pub non_simplicial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    pub point_count: usize,
    /// Sorted by vertex set.
    pub facets: Vec<Facet>,
    /// Points that are not vertices of the hull.
    pub interior: Vec<usize>,
}

impl Hull {
    pub fn facet_sets(&self) -> Vec<[usize; 4]> {
        self.facets.iter().map(|f| [f.vertices[0], f.vertices[1], f.vertices[2], f.vertices[3]]).collect()
    }

    pub fn all_simplicial(&self) -> bool {
        self.facets.iter().all(|f| !f.non_simplicial)
    }

    /// `(V, E, F, C)` of the boundary complex; meaningful when all facets are
    /// simplicial.
    pub fn face_counts(&self) -> (usize, usize, usize, usize) {
        let mut verts = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut triangles = BTreeSet::new();
        for f in self.facet_sets() {
            for i in 0..4 {
                verts.insert(f[i]);
                for j in i + 1..4 {
                    edges.insert((f[i], f[j]));
                    for k in j + 1..4 {
                        triangles.insert((f[i], f[j], f[k]));
                    }
                }
            }
        }
        (verts.len(), edges.len(), triangles.len(), self.facets.len())
    }

    /// `V - E + F - C`, zero for the boundary of a 4-polytope.
    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f, c) = self.face_counts();
        v as i64 - e as i64 + f as i64 - c as i64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v0,v1,v2,v3,n1,n2,n3,n4,non_simplicial\n");
        for f in &self.facets {
            let v = &f.vertices;
            let n = f.normal;
            let _ = writeln!(
                out,
                "{},{},{},{},{:.17},{:.17},{:.17},{:.17},{}",
                v[0], v[1], v[2], v[3], n[0], n[1], n[2], n[3], f.non_simplicial
            );
        }
        out
    }
}

fn side(points: &[[f64; 4]], f: &[usize; 4], x: usize) -> Sign {
    orient4d([&points[f[0]], &points[f[1]], &points[f[2]], &points[f[3]], &points[x]], DEFAULT_COORD_UNCERTAINTY)
}

fn side_of(points: &[[f64; 4]], f: &[usize; 4], x: &[f64; 4]) -> Sign {
    orient4d([&points[f[0]], &points[f[1]], &points[f[2]], &points[f[3]], x], DEFAULT_COORD_UNCERTAINTY)
}

fn flip_sign(s: Sign) -> Sign {
    match s {
        Sign::Positive => Sign::Negative,
        Sign::Negative => Sign::Positive,
        Sign::Uncertain => Sign::Uncertain,
    }
}

/// Unnormalised normal of the hyperplane through four points, by cofactor
/// expansion; zero when the points are affinely dependent.
fn cofactor_normal(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4], d: &[f64; 4]) -> [f64; 4] {
    let rows = [0, 1, 2].map(|r| {
        let v = [b, c, d][r];
        [v[0] - a[0], v[1] - a[1], v[2] - a[2], v[3] - a[3]]
    });
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let m = |r: usize, c: usize| rows[r][cols[c]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    [minor(0), -minor(1), minor(2), -minor(3)]
}

fn hyperplane_normal(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4], d: &[f64; 4]) -> [f64; 4] {
    let n = cofactor_normal(a, b, c, d);
    let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    n.map(|x| x / len)
}

fn oriented_normal(points: &[[f64; 4]], f: &[usize; 4], inside: &[f64; 4]) -> [f64; 4] {
    let n = hyperplane_normal(&points[f[0]], &points[f[1]], &points[f[2]], &points[f[3]]);
    let a = points[f[0]];
    let dot: f64 = (0..4).map(|i| n[i] * (inside[i] - a[i])).sum();
    if dot > 0.0 {
        n.map(|x| -x)
    } else {
        n
    }
}

fn finish(points: &[[f64; 4]], mut sets: Vec<[usize; 4]>, inside: [f64; 4]) -> Hull {
    for s in &mut sets {
        s.sort_unstable();
    }
    sets.sort_unstable();
    sets.dedup();
    let on_hull: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    let facets = sets
        .iter()
        .map(|f| Facet {
            vertices: f.to_vec(),
            normal: oriented_normal(points, f, &inside),
            non_simplicial: (0..points.len()).any(|x| !f.contains(&x) && side(points, f, x) == Sign::Uncertain),
        })
        .collect();
    let interior = (0..points.len()).filter(|i| !on_hull.contains(i)).collect();
    Hull { point_count: points.len(), facets, interior }
}

fn initial_simplex(points: &[[f64; 4]]) -> Option<[usize; 5]> {
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        if side(points, &[a, b, c, d], e).is_certain() {
                            return Some([a, b, c, d, e]);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Incremental beneath-beyond hull. A facet is visible from a new point when
/// the point is strictly beyond it or on its hyperplane; the horizon is the
/// set of ridges lying on exactly one visible facet.
pub fn convex_hull_4d(points: &[[f64; 4]]) -> Result<Hull> {
    if points.len() < 5 {
        return Err(Error::TooFewPoints { need: 5, got: points.len() });
    }
    let simplex = initial_simplex(points).ok_or(Error::DegenerateHull)?;
    let mut inside = [0.0; 4];
    for &i in &simplex {
        for c in 0..4 {
            inside[c] += points[i][c] / 5.0;
        }
    }
    // Facets are stored with their orientation sign towards `inside`, so a
    // point is beyond a facet when its sign differs.
    let mut facets: Vec<([usize; 4], Sign)> = Vec::new();
    for skip in 0..5 {
        let f: Vec<usize> = simplex.iter().copied().filter(|&v| v != simplex[skip]).collect();
        let f = [f[0], f[1], f[2], f[3]];
        facets.push((f, side_of(points, &f, &inside)));
    }
    for x in 0..points.len() {
        if simplex.contains(&x) {
            continue;
        }
        let visible: Vec<bool> = facets
            .iter()
            .map(|(f, inner)| {
                let s = side(points, f, x);
                s == Sign::Uncertain || s == flip_sign(*inner)
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for (i, (f, _)) in facets.iter().enumerate() {
            if !visible[i] {
                continue;
            }
            for skip in 0..4 {
                let mut r = [0; 3];
                let mut k = 0;
                for (j, &v) in f.iter().enumerate() {
                    if j != skip {
                        r[k] = v;
                        k += 1;
                    }
                }
                r.sort_unstable();
                *ridges.entry(r).or_default() += 1;
            }
        }
        let mut kept: Vec<([usize; 4], Sign)> =
            facets.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        for (r, count) in ridges {
            if count == 1 {
                let f = [r[0], r[1], r[2], x];
                kept.push((f, side_of(points, &f, &inside)));
            }
        }
        facets = kept;
    }
    Ok(finish(points, facets.into_iter().map(|(f, _)| f).collect(), inside))
}

/// Every 4-subset whose hyperplane has all other points strictly on one side
/// or on it; subsets with a point on the hyperplane are flagged.
pub fn brute_force_hull(points: &[[f64; 4]]) -> Result<Hull> {
    if points.len() < 5 {
        return Err(Error::TooFewPoints { need: 5, got: points.len() });
    }
    let simplex = initial_simplex(points).ok_or(Error::DegenerateHull)?;
    let mut inside = [0.0; 4];
    for &i in &simplex {
        for c in 0..4 {
            inside[c] += points[i][c] / 5.0;
        }
    }
    let n = points.len();
    let mut sets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let f = [a, b, c, d];
                    let mut pos = false;
                    let mut neg = false;
                    for x in (0..n).filter(|x| !f.contains(x)) {
                        match side(points, &f, x) {
                            Sign::Positive => pos = true,
                            Sign::Negative => neg = true,
                            Sign::Uncertain => {}
                        }
                    }
                    if !(pos && neg) && (pos || neg) {
                        sets.push(f);
                    }
                }
            }
        }
    }
    Ok(finish(points, sets, inside))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpineSummary {
    pub p: usize,
    pub q: usize,
    pub theta: f64,
    pub facet_count: usize,
    pub all_facets_simplicial: bool,
    /// Every facet orbit under `k -> k + 1` has exactly `p` members.
    pub action_free: bool,
    pub spine_vertex_count: usize,
    pub expected_vertex_count: usize,
    pub monodromy_r: usize,
    pub euler_characteristic: i64,
}

impl SpineSummary {
    /// The count law, asserted only when its hypotheses hold.
    pub fn count_matches(&self) -> Option<bool> {
        (self.all_facets_simplicial && self.action_free).then_some(self.spine_vertex_count == self.expected_vertex_count)
    }
}

fn shift_facet(f: &[usize; 4], p: usize, c: usize) -> [usize; 4] {
    let mut g = f.map(|v| (v + c) % p);
    g.sort_unstable();
    g
}

fn action_is_free(sets: &[[usize; 4]], p: usize) -> bool {
    let all: BTreeSet<[usize; 4]> = sets.iter().copied().collect();
    sets.iter().all(|f| {
        (1..p).all(|c| {
            let g = shift_facet(f, p, c);
            all.contains(&g) && g != *f
        })
    })
}

pub fn spine_summary(config: &OrbitConfig) -> Result<SpineSummary> {
    let OrbitConfig { p, q, .. } = *config;
    if p < 5 || q <= 1 || q >= p - 1 {
        return Err(Error::OutOfRange { p: p as u64, q: q as u64 });
    }
    let g = gcd(p as u64, q as u64);
    if g != 1 {
        return Err(Error::NotCoprime { a: p as u64, b: q as u64, gcd: g });
    }
    let points = orbit_points(config)?;
    let hull = convex_hull_4d(&points)?;
    let sets = hull.facet_sets();
    let action_free = action_is_free(&sets, p);
    Ok(SpineSummary {
        p,
        q,
        theta: config.theta,
        facet_count: sets.len(),
        all_facets_simplicial: hull.all_simplicial() && hull.interior.is_empty(),
        action_free,
        spine_vertex_count: sets.len() / p,
        expected_vertex_count: euclid_subtractive(p as u64, q as u64)? as usize - 3,
        monodromy_r: mod_inverse(q as u64, p as u64)? as usize,
        euler_characteristic: hull.euler_characteristic(),
    })
}

/// Summary at the default base point, moving `θ` along the reseed sequence
/// while the hull has non-simplicial facets.
pub fn spine_summary_generic(p: usize, q: usize) -> Result<SpineSummary> {
    let mut last = None;
    for n in 0..MAX_RESEEDS {
        let config = OrbitConfig::new(p, q).with_angles(reseed_theta(n), 0.1, 0.2);
        let s = spine_summary(&config)?;
        if s.all_facets_simplicial {
            return Ok(s);
        }
        last = Some(s);
    }
    last.ok_or(Error::NoGenericBasePoint(MAX_RESEEDS))
}

/// Smallest `c` with `shift(a, c) == b`, if any.
fn cyclic_match(a: &[[usize; 4]], b: &[[usize; 4]], p: usize) -> Option<usize> {
    (0..p).find(|&c| {
        let mut s: Vec<[usize; 4]> = a.iter().map(|f| shift_facet(f, p, c)).collect();
        s.sort_unstable();
        s == b
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    /// `(θ, φ₁, φ₂)` of each accepted sample.
    pub base_points: Vec<[f64; 3]>,
    /// Index shift matching each sample to the first, `None` when no shift
    /// works.
    pub shifts: Vec<Option<usize>>,
    pub resampled: usize,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.shifts.iter().all(Option::is_some)
    }
}

pub fn basepoint_invariance(p: usize, q: usize, trials: usize) -> Result<bool> {
    Ok(basepoint_invariance_seeded(p, q, trials, 0)?.invariant())
}

/// Hulls for `trials` random base points, compared up to `k -> k + c`.
pub fn basepoint_invariance_seeded(p: usize, q: usize, trials: usize, seed: u64) -> Result<InvarianceReport> {
    if trials < 2 {
        return Err(Error::TooFewPoints { need: 2, got: trials });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base_points = Vec::new();
    let mut complexes: Vec<Vec<[usize; 4]>> = Vec::new();
    let mut resampled = 0;
    while complexes.len() < trials {
        if resampled > MAX_RESEEDS * trials {
            return Err(Error::NoGenericBasePoint(resampled));
        }
        let theta = rng.gen_range(0.05..FRAC_PI_2 - 0.05);
        let phi1 = rng.gen_range(0.0..TAU);
        let phi2 = rng.gen_range(0.0..TAU);
        let config = OrbitConfig::new(p, q).with_angles(theta, phi1, phi2);
        let hull = convex_hull_4d(&orbit_points(&config)?)?;
        if !hull.all_simplicial() {
            resampled += 1;
            continue;
        }
        base_points.push([theta, phi1, phi2]);
        complexes.push(hull.facet_sets());
    }
    let shifts = complexes.iter().map(|c| cyclic_match(&complexes[0], c, p)).collect();
    Ok(InvarianceReport { p, q, seed, base_points, shifts, resampled })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiCheck {
    pub samples: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Samples whose two nearest points are equidistant within precision.
    pub ties: usize,
}

impl VoronoiCheck {
    pub fn agrees(&self) -> bool {
        self.disagreements == 0
    }
}

/// Relative gap below which two distances count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn nearest(points: &[Vec<f64>], dist: impl Fn(&[f64]) -> f64) -> (usize, bool) {
    let mut ds: Vec<(f64, usize)> = points.iter().enumerate().map(|(i, x)| (dist(x), i)).collect();
    ds.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tie = ds.len() > 1 && ds[1].0 - ds[0].0 <= TIE_TOLERANCE * (1.0 + ds[0].0);
    (ds[0].1, tie)
}

/// Nearest point to a unit direction `s` by geodesic and by chord distance.
/// The second component reports a tie under either distance.
pub fn nearest_pair(points: &[Vec<f64>], s: &[f64]) -> (usize, usize, bool) {
    let dot = |x: &[f64]| x.iter().zip(s).map(|(a, b)| a * b).sum::<f64>();
    let (g, tg) = nearest(points, |x| dot(x).clamp(-1.0, 1.0).acos());
    let (e, te) = nearest(points, |x| x.iter().zip(s).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt());
    (g, e, tg || te)
}

/// Compares nearest sites under geodesic and chord distance for `samples`
/// uniform random directions on the sphere containing `points`.
pub fn sphere_voronoi_restriction_check(points: &[Vec<f64>], samples: usize, seed: u64) -> VoronoiCheck {
    let dim = points.first().map_or(0, Vec::len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = VoronoiCheck { samples, agreements: 0, disagreements: 0, ties: 0 };
    for _ in 0..samples {
        let mut s: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let len = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        s.iter_mut().for_each(|x| *x /= len);
        match nearest_pair(points, &s) {
            (_, _, true) => check.ties += 1,
            (g, e, false) if g == e => check.agreements += 1,
            _ => check.disagreements += 1,
        }
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norms_are_unit(points: &[[f64; 4]]) -> bool {
        points.iter().all(|x| (x.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-14)
    }

    #[test]
    fn orbit_basics() {
        let c = OrbitConfig::new(5, 2);
        let pts = orbit_points(&c).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(norms_are_unit(&pts));
        let (t, a, b) = (c.theta, 0.1f64, 0.2f64);
        let expected = [t.cos() * a.cos(), t.cos() * a.sin(), t.sin() * b.cos(), t.sin() * b.sin()];
        for i in 0..4 {
            assert!((pts[0][i] - expected[i]).abs() < 1e-15);
        }
        for i in 0..5 {
            for j in i + 1..5 {
                let d: f64 = (0..4).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
                assert!(d > 1e-3);
            }
        }
        assert!(orbit_points(&OrbitConfig::new(2, 1)).is_err());
        assert_eq!(orbit_points(&c.with_angles(0.0, 0.1, 0.2)).unwrap_err(), Error::CoreCircle(0.0));
    }

    #[test]
    fn core_circle_orbit_is_flat_polygon() {
        let mut c = OrbitConfig::new(7, 3).with_angles(0.0, 0.0, 0.0);
        c.allow_core_circle = true;
        let pts = orbit_points(&c).unwrap();
        for (k, x) in pts.iter().enumerate() {
            let a = TAU * k as f64 / 7.0;
            assert!((x[0] - a.cos()).abs() < 1e-15 && (x[1] - a.sin()).abs() < 1e-15);
            assert_eq!((x[2], x[3]), (0.0, 0.0));
        }
        assert_eq!(convex_hull_4d(&pts).unwrap_err(), Error::DegenerateHull);
    }

    #[test]
    fn q_one_is_degenerate() {
        for (p, q) in [(7, 1), (7, 6), (9, 1)] {
            let pts = orbit_points(&OrbitConfig::new(p, q)).unwrap();
            assert_eq!(convex_hull_4d(&pts).unwrap_err(), Error::DegenerateHull);
        }
    }

    #[test]
    fn simplex_and_small_anchors() {
        let pts = orbit_points(&OrbitConfig::new(5, 2)).unwrap();
        let h = convex_hull_4d(&pts).unwrap();
        assert_eq!(h.facets.len(), 5);
        assert!(h.all_simplicial());
        let h = convex_hull_4d(&orbit_points(&OrbitConfig::new(7, 2)).unwrap()).unwrap();
        assert_eq!(h.facets.len(), 14);
    }

    /// Independent facet test: the hyperplane through four points, from the
    /// cofactor normal, leaves every other point on one side.
    fn one_sided_by_normal(points: &[[f64; 4]], f: [usize; 4]) -> bool {
        let raw = cofactor_normal(&points[f[0]], &points[f[1]], &points[f[2]], &points[f[3]]);
        if raw.iter().map(|x| x * x).sum::<f64>() < 1e-18 {
            return false;
        }
        let n = hyperplane_normal(&points[f[0]], &points[f[1]], &points[f[2]], &points[f[3]]);
        let offset: f64 = (0..4).map(|i| n[i] * points[f[0]][i]).sum();
        let vals: Vec<f64> = (0..points.len())
            .filter(|x| !f.contains(x))
            .map(|x| (0..4).map(|i| n[i] * points[x][i]).sum::<f64>() - offset)
            .collect();
        vals.iter().all(|&v| v < -1e-9) || vals.iter().all(|&v| v > 1e-9)
    }

    #[test]
    fn incremental_matches_oracles() {
        for p in 5..=13usize {
            for q in 2..p - 1 {
                if gcd(p as u64, q as u64) != 1 {
                    continue;
                }
                let pts = orbit_points(&OrbitConfig::new(p, q)).unwrap();
                let inc = convex_hull_4d(&pts).unwrap();
                let brute = brute_force_hull(&pts).unwrap();
                assert_eq!(inc.facet_sets(), brute.facet_sets(), "({p},{q})");
                let mut by_normal = Vec::new();
                for a in 0..p {
                    for b in a + 1..p {
                        for c in b + 1..p {
                            for d in c + 1..p {
                                if one_sided_by_normal(&pts, [a, b, c, d]) {
                                    by_normal.push([a, b, c, d]);
                                }
                            }
                        }
                    }
                }
                assert_eq!(inc.facet_sets(), by_normal, "({p},{q})");
                assert_eq!(inc.euler_characteristic(), 0);
            }
        }
    }

    #[test]
    fn normals_point_outward() {
        let pts = orbit_points(&OrbitConfig::new(11, 3)).unwrap();
        let h = convex_hull_4d(&pts).unwrap();
        for f in &h.facets {
            let a = pts[f.vertices[0]];
            for x in &pts {
                let v: f64 = (0..4).map(|i| f.normal[i] * (x[i] - a[i])).sum();
                assert!(v < 1e-12);
            }
        }
    }

    #[test]
    fn summary_anchors() {
        let s = spine_summary_generic(5, 2).unwrap();
        assert_eq!((s.facet_count, s.spine_vertex_count, s.monodromy_r), (5, 1, 3));
        assert_eq!(s.count_matches(), Some(true));
        let s = spine_summary_generic(7, 2).unwrap();
        assert_eq!((s.facet_count, s.spine_vertex_count, s.monodromy_r), (14, 2, 4));
        assert!(spine_summary(&OrbitConfig::new(7, 1)).is_err());
        assert!(spine_summary(&OrbitConfig::new(8, 2)).is_err());
    }

    #[test]
    fn invariance_small() {
        assert!(basepoint_invariance(5, 2, 5).unwrap());
        assert!(basepoint_invariance(7, 2, 5).unwrap());
        assert!(basepoint_invariance(7, 2, 1).is_err());
    }

    #[test]
    fn voronoi_restriction() {
        let pts = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let s = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        assert_eq!(nearest_pair(&pts, &s), (0, 0, false));
        let pts2 = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(nearest_pair(&pts2, &s).2);
        let orbit: Vec<Vec<f64>> =
            orbit_points(&OrbitConfig::new(5, 2)).unwrap().iter().map(|x| x.to_vec()).collect();
        let check = sphere_voronoi_restriction_check(&orbit, 2000, 7);
        assert!(check.agrees());
        assert_eq!(check.agreements + check.ties, 2000);
    }

    #[test]
    fn csv_shapes() {
        let pts = orbit_points(&OrbitConfig::new(5, 2)).unwrap();
        assert_eq!(orbit_csv(&pts).lines().count(), 6);
        let h = convex_hull_4d(&pts).unwrap();
        assert_eq!(h.to_csv().lines().count(), 6);
    }
}
