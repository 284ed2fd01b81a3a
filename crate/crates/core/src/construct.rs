//! Triangulations whose rotation by `q` costs exactly `E(p, q) - 3` flips.
//!
//! For `q = 1` the fan at a vertex is flipped diagonal by diagonal into the
//! fan at the next vertex. For `1 < q < p - 1` the candidate is the Delaunay
//! triangulation of points on a slightly eccentric circle,
//! `(1 + e sin(2πks/p)) (cos(2πk/p), sin(2πk/p))` where `s = q^{-1} mod p`
//! (the monodromy of the lens space; for `(34, 13)` it equals `-q`, and the
//! sign of `s` does not matter because rotations by `±q` cost the same);
//! a candidate is accepted
//! only when its certificate is tight and a witness of the right length has
//! been found by bounded search.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{euclid_subtractive, mod_inverse};
use crate::bounds::{certify, BoundCertificate};
use crate::error::{Error, Result};
use crate::flipdist::{distance_bounded, FlipSequence};
use crate::predicates::{incircle, orient2d, Sign, DEFAULT_COORD_UNCERTAINTY};
use crate::triangulation::{require_coprime, Diagonal, Triangulation};

/// Eccentricities tried in order by [`optimal_triangulation`].
pub const DEFAULT_ECCENTRICITY_GRID: [f64; 6] = [0.02, 0.01, 0.007, 0.005, 0.003, 0.001];

/// The `p - 3` flips turning the fan at vertex 0 into the fan at vertex 1.
/// The `k`-th flip (from 0) removes `0-(k+2)` and creates `1-(k+3)`.
pub fn fan_flip_sequence(p: usize) -> Result<FlipSequence> {
    let start = Triangulation::fan(p, 0)?;
    let flips = (2..p.saturating_sub(1)).map(|i| Diagonal::new(0, i)).collect();
    Ok(FlipSequence { start, flips })
}

/// Points on the eccentric circle, in cyclic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedCirclePoints {
    pub p: usize,
    pub q: usize,
    pub eccentricity: f64,
    pub points: Vec<[f64; 2]>,
    /// Every consecutive triple turns strictly left with a certified sign.
    pub convex: bool,
}

impl PerturbedCirclePoints {
    /// `k,x,y` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x,y\n");
        for (k, [x, y]) in self.points.iter().enumerate() {
            let _ = writeln!(out, "{k},{x:.17},{y:.17}");
        }
        out
    }
}

pub fn perturbed_points(p: usize, q: usize, eccentricity: f64) -> PerturbedCirclePoints {
    let points: Vec<[f64; 2]> = (0..p)
        .map(|k| {
            // Reduce kq mod p before scaling so the angle stays in [0, 2π).
            let bump = ((k * q) % p) as f64 / p as f64;
            let radius = 1.0 + eccentricity * (TAU * bump).sin();
            let angle = TAU * k as f64 / p as f64;
            [radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    let convex = is_strictly_convex(&points);
    PerturbedCirclePoints { p, q, eccentricity, points, convex }
}

fn is_strictly_convex(points: &[[f64; 2]]) -> bool {
    let n = points.len();
    n >= 3
        && (0..n).all(|i| {
            orient2d(points[i], points[(i + 1) % n], points[(i + 2) % n], DEFAULT_COORD_UNCERTAINTY)
                == Sign::Positive
        })
}

/// Delaunay triangulation of a convex polygon's vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaunayResult {
    pub triangulation: Triangulation,
    /// Diagonals whose empty-circle test could not be decided: the four
    /// points are cocircular to within the certified precision.
    pub ties: Vec<Diagonal>,
}

impl DelaunayResult {
    pub fn is_unique(&self) -> bool {
        self.ties.is_empty()
    }
}

fn edge_status(t: &Triangulation, d: &Diagonal, points: &[[f64; 2]]) -> Sign {
    let (inner, outer) = t.quadrilateral(d).expect("own diagonal");
    // (lo, inner, hi) is counterclockwise since lo < inner < hi.
    incircle(points[d.lo()], points[inner], points[d.hi()], points[outer], DEFAULT_COORD_UNCERTAINTY)
}

/// Lawson flipping from the fan at vertex 0 until every diagonal passes the
/// empty-circle test.
pub fn delaunay_of_convex_points(points: &[[f64; 2]]) -> Result<DelaunayResult> {
    let p = points.len();
    if p < 3 {
        return Err(Error::TooFewVertices(p));
    }
    if !is_strictly_convex(points) {
        return Err(Error::NotConvex);
    }
    let mut t = Triangulation::fan(p, 0)?;
    // Each certified flip strictly lowers the lifted surface, so the number
    // of flips is bounded by the number of diagonal pairs.
    let limit = p * p * p;
    for _ in 0..limit {
        let illegal = t.diagonals().iter().copied().find(|d| edge_status(&t, d, points) == Sign::Positive);
        match illegal {
            Some(d) => t = t.flip(&d)?,
            None => break,
        }
    }
    let ties = t.diagonals().iter().copied().filter(|d| edge_status(&t, d, points) == Sign::Uncertain).collect();
    Ok(DelaunayResult { triangulation: t, ties })
}

/// Cap on the Delaunay triangulations explored when cocircular quadruples
/// leave the choice open.
pub const MAX_TIE_ALTERNATIVES: usize = 256;

/// Every triangulation reachable from the Lawson result by flipping
/// diagonals whose empty-circle test is undecided, in breadth-first order
/// starting with the Lawson result itself. All of them are Delaunay up to the
/// certified precision.
pub fn delaunay_alternatives(points: &[[f64; 2]], result: &DelaunayResult, cap: usize) -> Vec<Triangulation> {
    let mut seen = vec![result.triangulation.clone()];
    let mut next = 0;
    while next < seen.len() && seen.len() < cap {
        let t = seen[next].clone();
        next += 1;
        for d in t.diagonals().iter().filter(|d| edge_status(&t, d, points) == Sign::Uncertain) {
            let flipped = t.flip(d).expect("own diagonal");
            if !seen.contains(&flipped) && seen.len() < cap {
                seen.push(flipped);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Method {
    /// The fan flipped into the next fan.
    Fan,
    /// Mirror image of the fan sequence, for `q = p - 1`.
    MirroredFan,
    /// Delaunay triangulation of the eccentric circle points built with
    /// `point_parameter` in place of `q` in the radius formula.
    Delaunay { eccentricity: f64, point_parameter: usize },
}

/// Outcome of one eccentricity in the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub eccentricity: f64,
    pub point_parameter: usize,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalConstruction {
    pub p: usize,
    pub q: usize,
    pub method: Method,
    pub triangulation: Triangulation,
    pub witness: FlipSequence,
    /// `None` for the triangle, which has nothing to certify.
    pub certificate: Option<BoundCertificate>,
    pub points: Option<PerturbedCirclePoints>,
    pub attempts: Vec<Attempt>,
}

pub fn optimal_triangulation(p: usize, q: usize) -> Result<OptimalConstruction> {
    optimal_triangulation_with_grid(p, q, &DEFAULT_ECCENTRICITY_GRID)
}

pub fn optimal_triangulation_with_grid(p: usize, q: usize, grid: &[f64]) -> Result<OptimalConstruction> {
    if p < 3 {
        return Err(Error::TooFewVertices(p));
    }
    require_coprime(p, q)?;
    let target = euclid_subtractive(p as u64, q as u64)? as usize - 3;
    let done = |method, triangulation: Triangulation, witness, points, attempts| {
        let certificate = if p > 3 { Some(certify(&triangulation, q)?) } else { None };
        Ok(OptimalConstruction { p, q, method, triangulation, witness, certificate, points, attempts })
    };

    if p == 3 || q == 1 {
        let seq = fan_flip_sequence(p)?;
        return done(Method::Fan, seq.start.clone(), seq, None, Vec::new());
    }
    if q == p - 1 {
        let fan = fan_flip_sequence(p)?;
        let seq = FlipSequence {
            start: fan.start.mirror(),
            flips: fan.flips.iter().map(|d| d.mirrored(p)).collect(),
        };
        return done(Method::MirroredFan, seq.start.clone(), seq, None, Vec::new());
    }

    // The points built from s are optimal for rotation by s^{-1} mod p, so the
    // monodromy parameter q^{-1} comes first; q itself is kept as a fallback.
    let inverse = mod_inverse(q as u64, p as u64)? as usize;
    let mut parameters = vec![inverse];
    if inverse != q {
        parameters.push(q);
    }
    let mut attempts = Vec::new();
    for (&e, &s) in grid.iter().flat_map(|e| parameters.iter().map(move |s| (e, s))) {
        let points = perturbed_points(p, s, e);
        let mut note = |outcome: String| attempts.push(Attempt { eccentricity: e, point_parameter: s, outcome });
        if !points.convex {
            note("points not in convex position".into());
            continue;
        }
        let delaunay = delaunay_of_convex_points(&points.points)?;
        let ties = delaunay.ties.len();
        let mut rejected = Vec::new();
        for t in delaunay_alternatives(&points.points, &delaunay, MAX_TIE_ALTERNATIVES) {
            let cert = certify(&t, q)?;
            if cert.destroyed_count != target || !cert.extremal {
                rejected.push(format!("destroys {} (profile {:?})", cert.destroyed_count, cert.profile.counts));
                continue;
            }
            match distance_bounded(&t, &t.rotate(q as i64), target)? {
                Some((_, witness)) => {
                    note(format!("accepted ({ties} cocircular quadruples)"));
                    let method = Method::Delaunay { eccentricity: e, point_parameter: s };
                    return done(method, t, witness, Some(points), attempts);
                }
                None => rejected.push(format!("no flip sequence of length {target}")),
            }
        }
        note(format!("target {target}, {ties} cocircular quadruples: {}", rejected.join(", ")));
    }
    let diagnostics = attempts
        .iter()
        .map(|a| format!("e={} s={}: {}", a.eccentricity, a.point_parameter, a.outcome))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::ConstructionFailed { p, q, diagnostics })
}

/// A line segment or ray piece of the Voronoi diagram, clipped to a box.
pub type Segment = ([f64; 2], [f64; 2]);

fn circumcenter(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> [f64; 2] {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let (a2, b2, c2) = (a[0] * a[0] + a[1] * a[1], b[0] * b[0] + b[1] * b[1], c[0] * c[0] + c[1] * c[1]);
    [
        (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
        (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d,
    ]
}

/// Voronoi diagram of the polygon vertices read off its Delaunay dual:
/// circumcenters of triangles sharing a diagonal are joined, and each side
/// contributes a ray leaving its triangle's circumcenter outward, cut at
/// `reach` from the origin.
pub fn voronoi_overlay(points: &[[f64; 2]], t: &Triangulation, reach: f64) -> Vec<Segment> {
    let p = t.p();
    let tris = t.triangles();
    let centers: Vec<[f64; 2]> =
        tris.iter().map(|&[a, b, c]| circumcenter(points[a], points[b], points[c])).collect();
    let owner = |u: usize, v: usize| {
        tris.iter()
            .enumerate()
            .filter(|(_, tri)| tri.contains(&u) && tri.contains(&v))
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
    };
    let mut segments = Vec::new();
    for d in t.diagonals() {
        if let [i, j] = owner(d.lo(), d.hi())[..] {
            segments.push((centers[i], centers[j]));
        }
    }
    for v in 0..p {
        let w = (v + 1) % p;
        let Some(&i) = owner(v, w).first() else { continue };
        let (a, b) = (points[v], points[w]);
        // Outward normal of a counterclockwise side.
        let (nx, ny) = (b[1] - a[1], a[0] - b[0]);
        let norm = (nx * nx + ny * ny).sqrt();
        let start = centers[i];
        let dir = [nx / norm, ny / norm];
        // Solve |start + s dir| = reach for the positive root.
        let bdot = start[0] * dir[0] + start[1] * dir[1];
        let c = start[0] * start[0] + start[1] * start[1] - reach * reach;
        let s = -bdot + (bdot * bdot - c).max(0.0).sqrt();
        segments.push((start, [start[0] + s * dir[0], start[1] + s * dir[1]]));
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_sequence_examples() {
        let s = fan_flip_sequence(4).unwrap();
        assert_eq!(s.flips, vec![Diagonal::new(0, 2)]);
        assert_eq!(s.end().unwrap().diagonals(), &[Diagonal::new(1, 3)]);

        let s = fan_flip_sequence(6).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.end().unwrap(), Triangulation::fan(6, 1).unwrap());

        assert_eq!(fan_flip_sequence(3).unwrap().len(), 0);
        assert!(fan_flip_sequence(2).is_err());
    }

    #[test]
    fn fan_sequence_creates_expected_diagonals() {
        for p in 4..=20 {
            let s = fan_flip_sequence(p).unwrap();
            assert_eq!(s.len(), p - 3);
            assert_eq!(s.end().unwrap(), s.start.rotate(1));
            let created = s.created().unwrap();
            for (k, d) in created.iter().enumerate() {
                assert_eq!(*d, Diagonal::new(1, (k + 3) % p));
            }
        }
    }

    #[test]
    fn perturbed_points_examples() {
        let flat = perturbed_points(12, 5, 0.0);
        for [x, y] in &flat.points {
            assert!((x.hypot(*y) - 1.0).abs() < 1e-15);
        }
        let pts = perturbed_points(34, 13, 0.007);
        assert!(pts.convex);
        assert_eq!(pts.points[0], [1.0, 0.0]);
        assert!(perturbed_points(7, 2, 0.5).points[0] == [1.0, 0.0]);
        assert!(pts.to_csv().starts_with("k,x,y\n0,1.0"));
        assert_eq!(pts.to_csv().lines().count(), 35);
    }

    #[test]
    fn regular_polygon_is_cocircular() {
        let r = delaunay_of_convex_points(&perturbed_points(8, 3, 0.0).points).unwrap();
        assert!(!r.is_unique());
    }

    #[test]
    fn square_with_pushed_vertex() {
        // Pushing vertex 2 outward makes {0, 2} the longer diagonal, so the
        // circle through 0, 1, 2 contains 3 and {1, 3} is chosen.
        let pts = [[1.0, 0.0], [0.0, 1.0], [-1.3, 0.0], [0.0, -1.0]];
        let r = delaunay_of_convex_points(&pts).unwrap();
        assert!(r.is_unique());
        assert_eq!(r.triangulation.diagonals(), &[Diagonal::new(1, 3)]);
    }

    #[test]
    fn rejects_non_convex() {
        let pts = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.0, -1.0]];
        assert_eq!(delaunay_of_convex_points(&pts).unwrap_err(), Error::NotConvex);
    }

    /// Brute-force empty-circle check for every triangle against every point:
    /// no vertex may lie certifiably inside a circumcircle.
    fn is_delaunay(points: &[[f64; 2]], t: &Triangulation) -> bool {
        t.triangles().iter().all(|&[a, b, c]| {
            (0..points.len())
                .filter(|v| ![a, b, c].contains(v))
                .all(|v| incircle(points[a], points[b], points[c], points[v], DEFAULT_COORD_UNCERTAINTY) != Sign::Positive)
        })
    }

    #[test]
    fn lawson_result_is_globally_delaunay() {
        for (p, q, e) in [(11, 3, 0.01), (9, 2, 0.02), (13, 5, 0.005), (13, 8, 0.003)] {
            let pts = perturbed_points(p, q, e);
            let r = delaunay_of_convex_points(&pts.points).unwrap();
            assert!(r.is_unique(), "ties ({p},{q},{e}): {:?}", r.ties);
            assert!(is_delaunay(&pts.points, &r.triangulation), "({p},{q},{e})");
        }
    }

    #[test]
    fn even_p_has_mirror_symmetric_ties() {
        // k -> 17 - k preserves the radii, so symmetric trapezoids are cocircular.
        let pts = perturbed_points(34, 13, 0.007);
        for k in 0..34 {
            let m = (17 + 34 - k) % 34;
            let (a, b) = (pts.points[k], pts.points[m]);
            assert!((a[0].hypot(a[1]) - b[0].hypot(b[1])).abs() < 1e-12);
        }
        let r = delaunay_of_convex_points(&pts.points).unwrap();
        assert!(!r.is_unique());
        let alts = delaunay_alternatives(&pts.points, &r, MAX_TIE_ALTERNATIVES);
        assert!(alts.len() > 1);
        for t in &alts {
            assert!(is_delaunay(&pts.points, t));
        }
    }

    #[test]
    fn fig6_instance() {
        let pts = perturbed_points(34, 13, 0.007);
        let r = delaunay_of_convex_points(&pts.points).unwrap();
        assert_eq!(r.triangulation.destroyed_count(13), 5);
    }

    #[test]
    fn optimal_small_cases() {
        let c = optimal_triangulation(4, 1).unwrap();
        assert_eq!((c.method.clone(), c.witness.len()), (Method::Fan, 1));
        let c = optimal_triangulation(7, 6).unwrap();
        assert_eq!(c.method, Method::MirroredFan);
        assert_eq!(c.witness.len(), 4);
        assert_eq!(c.witness.end().unwrap(), c.triangulation.rotate(6));
        let c = optimal_triangulation(7, 2).unwrap();
        assert_eq!(c.witness.len(), 2);
        assert_eq!(c.witness.end().unwrap(), c.triangulation.rotate(2));
        let c = optimal_triangulation(3, 2).unwrap();
        assert_eq!(c.witness.len(), 0);
        assert!(optimal_triangulation(8, 2).is_err());
    }

    #[test]
    fn voronoi_overlay_shape() {
        let pts = perturbed_points(9, 2, 0.02);
        let t = delaunay_of_convex_points(&pts.points).unwrap().triangulation;
        let segs = voronoi_overlay(&pts.points, &t, 1.2);
        assert_eq!(segs.len(), (9 - 3) + 9);
        for (_, end) in segs.iter().skip(6) {
            assert!((end[0].hypot(end[1]) - 1.2).abs() < 1e-9);
        }
    }
}
