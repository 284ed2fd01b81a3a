//! Exact navigation of the Farey tessellation of the hyperbolic plane.
//!
//! Vertices are points of the extended rational line; `∞` is stored as `1/0`
//! and `-1/0` is identified with it. Everything is integer arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{euclid_subtractive, gcd};
use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den > 0`, or `∞ = 1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtendedRational {
    num: i64,
    den: u64,
}

impl ExtendedRational {
    pub const INFINITY: Self = Self { num: 1, den: 0 };
    pub const ZERO: Self = Self { num: 0, den: 1 };
    pub const ONE: Self = Self { num: 1, den: 1 };

    /// Builds the canonical form of `num/den`. Returns `None` for `0/0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        Self::from_i128(i128::from(num), i128::from(den))
    }

    fn from_i128(num: i128, den: i128) -> Option<Self> {
        if num == 0 && den == 0 {
            return None;
        }
        if den == 0 {
            return Some(Self::INFINITY);
        }
        let g = gcd(num.unsigned_abs() as u64, den.unsigned_abs() as u64) as i128;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Some(Self { num: i64::try_from(num).ok()?, den: u64::try_from(den).ok()? })
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    fn parts(&self) -> (i128, i128) {
        (i128::from(self.num), i128::from(self.den))
    }
}

/// Order of the extended line with `∞` placed after every finite value. Read
/// cyclically, it is the order of the boundary circle of the upper half-plane.
impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let (a, b) = self.parts();
                let (c, d) = other.parts();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "∞")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn determinant(x: ExtendedRational, y: ExtendedRational) -> i128 {
    let (a, b) = x.parts();
    let (c, d) = y.parts();
    a * d - b * c
}

pub fn is_farey_edge(x: ExtendedRational, y: ExtendedRational) -> bool {
    x != y && determinant(x, y).abs() == 1
}

/// Third vertices of the two Farey triangles on the edge `(x, y)`: the
/// mediant and the difference fraction.
pub fn farey_neighbors(
    x: ExtendedRational,
    y: ExtendedRational,
) -> Result<(ExtendedRational, ExtendedRational)> {
    if !is_farey_edge(x, y) {
        return Err(Error::NotFareyEdge(x.to_string(), y.to_string()));
    }
    let (m, n) = x.parts();
    let (p, q) = y.parts();
    // Both results are nonzero pairs because |mq - np| = 1.
    let mediant = ExtendedRational::from_i128(m + p, n + q).expect("mediant of an edge");
    let difference = ExtendedRational::from_i128(m - p, n - q).expect("difference of an edge");
    Ok((mediant, difference))
}

/// Vertices in `[0, 1]` after `depth` rounds of reflecting triangles across
/// their free sides, sorted ascending.
pub fn farey_sequence(depth: usize) -> Vec<ExtendedRational> {
    let mut seq = vec![ExtendedRational::ZERO, ExtendedRational::ONE];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(2 * seq.len() - 1);
        for pair in seq.windows(2) {
            next.push(pair[0]);
            let (mediant, _) = farey_neighbors(pair[0], pair[1]).expect("consecutive terms are edges");
            next.push(mediant);
        }
        next.push(*seq.last().unwrap());
        seq = next;
    }
    seq
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// `z ↦ (az + b)/(cz + d)` (preserving) or `z ↦ (a z̄ + b)/(c z̄ + d)`
/// (reversing), with determinant `+1` or `-1` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub orientation: Orientation,
}

impl ModularMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64, orientation: Orientation) -> Option<Self> {
        let det = i128::from(a) * i128::from(d) - i128::from(b) * i128::from(c);
        let expected = match orientation {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        };
        (det == expected).then_some(Self { a, b, c, d, orientation })
    }

    /// `T: z ↦ z + 1`.
    pub fn translation() -> Self {
        Self { a: 1, b: 1, c: 0, d: 1, orientation: Orientation::Preserving }
    }

    /// `S: z ↦ -1/z`.
    pub fn inversion() -> Self {
        Self { a: 0, b: -1, c: 1, d: 0, orientation: Orientation::Preserving }
    }

    /// `z ↦ (r z̄ - p)/(k z̄ - q)` where `r q = k p + 1`: sends `0` to `p/q`
    /// and `p/r` to `0`.
    pub fn inverse_swap(p: u64, q: u64) -> Result<Self> {
        let r = crate::arith::mod_inverse(q, p)?;
        let k = (u128::from(r) * u128::from(q) - 1) / u128::from(p);
        let to_i64 = |v: u128| i64::try_from(v).map_err(|_| Error::OutOfRange { p, q });
        let (r, k, p, q) = (to_i64(r.into())?, to_i64(k)?, to_i64(p.into())?, to_i64(q.into())?);
        Ok(Self::new(r, -p, k, -q, Orientation::Reversing).expect("rq - kp = 1"))
    }

    pub fn compose(&self, inner: &Self) -> Self {
        let orientation = if self.orientation == inner.orientation {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Self {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
            orientation,
        }
    }
}

/// Applies the map to a boundary point. Conjugation fixes the real line, so
/// orientation does not enter the formula.
pub fn apply_modular(map: &ModularMap, x: ExtendedRational) -> ExtendedRational {
    let (m, n) = x.parts();
    let (a, b, c, d) = (i128::from(map.a), i128::from(map.b), i128::from(map.c), i128::from(map.d));
    // The image pair cannot be (0, 0): the matrix is invertible.
    ExtendedRational::from_i128(a * m + b * n, c * m + d * n).expect("invertible matrix")
}

/// True iff `{a, b}` separates `x` from `y` on the boundary circle.
fn separates(a: ExtendedRational, b: ExtendedRational, x: ExtendedRational, y: ExtendedRational) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |z: ExtendedRational| lo < z && z < hi;
    inside(x) != inside(y)
}

/// Walks the dual binary tree from the base edge `(0, ∞)` towards `x`,
/// counting triangles entered.
pub fn crossing_count_tree_walk(x: ExtendedRational) -> u64 {
    let (mut a, mut b) = (ExtendedRational::ZERO, ExtendedRational::INFINITY);
    if x == a || x == b {
        return 0;
    }
    let mut count = 0;
    loop {
        let (mediant, difference) = farey_neighbors(a, b).expect("walk stays on edges");
        let c = if mediant == x || !separates(a, b, x, mediant) { mediant } else { difference };
        count += 1;
        if c == x {
            return count;
        }
        if separates(a, c, x, b) {
            b = c;
        } else {
            a = c;
        }
    }
}

/// True iff the geodesics with ideal endpoints `{a, b}` and `{c, d}` cross in
/// the interior of the plane.
fn geodesics_cross(
    a: ExtendedRational,
    b: ExtendedRational,
    c: ExtendedRational,
    d: ExtendedRational,
) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    separates(a, b, c, d)
}

/// Counts triangles met by the geodesic joining `0` to `x`, for `|x| > 1`.
///
/// The geodesic leaves `0` through one of the candidate triangles
/// `(0, ±1, ∞)`; from then on it is tracked edge to edge, choosing at each
/// triangle the side it crosses.
pub fn crossing_count_geodesic(x: ExtendedRational) -> Option<u64> {
    if x.is_infinite() {
        return Some(0);
    }
    if x.num().unsigned_abs() <= x.den() {
        return None;
    }
    let zero = ExtendedRational::ZERO;
    let inf = ExtendedRational::INFINITY;
    let (mut a, mut b) = [ExtendedRational::ONE, ExtendedRational::integer(-1)]
        .into_iter()
        .find(|&v| geodesics_cross(zero, x, v, inf))
        .map(|v| (v, inf))?;
    // The first triangle (0, ±1, ∞) is entered before the loop.
    let mut count = 1;
    let mut behind = zero;
    loop {
        let (mediant, difference) = farey_neighbors(a, b).expect("walk stays on edges");
        let c = if mediant == behind { difference } else { mediant };
        count += 1;
        if c == x {
            return Some(count);
        }
        if geodesics_cross(zero, x, a, c) {
            behind = b;
            b = c;
        } else {
            debug_assert!(geodesics_cross(zero, x, c, b));
            behind = a;
            a = c;
        }
    }
}

/// Number of Farey triangles cut by the geodesic from the base edge `(0, ∞)`
/// to `p/q`. The tree walk is always computed; when `|p| > |q|` the count
/// along the geodesic from `0` is computed too and the two must agree.
pub fn crossing_count(p: i64, q: u64) -> Result<u64> {
    let g = gcd(p.unsigned_abs(), q);
    if g != 1 {
        return Err(Error::NotCoprime { a: p.unsigned_abs(), b: q, gcd: g });
    }
    let q_signed = i64::try_from(q).map_err(|_| Error::OutOfRange { p: p.unsigned_abs(), q })?;
    let x = ExtendedRational::new(p, q_signed).expect("coprime pair is nonzero");
    let walk = crossing_count_tree_walk(x);
    if let Some(geodesic) = crossing_count_geodesic(x) {
        if geodesic != walk {
            return Err(Error::CrossingMismatch { p, q, walk, geodesic });
        }
    }
    Ok(walk)
}

/// Convenience check that `crossing_count(p, q) == E(p, q)`.
pub fn crossing_matches_complexity(p: i64, q: u64) -> Result<bool> {
    Ok(crossing_count(p, q)? == euclid_subtractive(p.unsigned_abs(), q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExtendedRational {
        ExtendedRational::new(n, d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(r(-1, 0), ExtendedRational::INFINITY);
        assert_eq!(r(2, -4), r(-1, 2));
        assert_eq!(r(0, -3), ExtendedRational::ZERO);
        assert!(ExtendedRational::new(0, 0).is_none());
        assert!(r(1, 2) < r(2, 3));
        assert!(r(1000, 1) < ExtendedRational::INFINITY);
    }

    #[test]
    fn edge_predicate_examples() {
        assert!(is_farey_edge(r(0, 1), r(1, 0)));
        assert!(is_farey_edge(r(0, 1), r(1, 2)));
        assert!(!is_farey_edge(r(1, 3), r(2, 3)));
        assert!(!is_farey_edge(r(1, 2), r(1, 2)));
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(farey_neighbors(r(0, 1), r(1, 1)).unwrap(), (r(1, 2), ExtendedRational::INFINITY));
        assert_eq!(farey_neighbors(r(0, 1), r(1, 0)).unwrap(), (r(1, 1), r(-1, 1)));
        assert_eq!(farey_neighbors(r(1, 2), r(1, 1)).unwrap(), (r(2, 3), r(0, 1)));
        assert!(matches!(farey_neighbors(r(1, 3), r(2, 3)), Err(Error::NotFareyEdge(..))));
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(farey_sequence(0), vec![r(0, 1), r(1, 1)]);
        assert_eq!(farey_sequence(1), vec![r(0, 1), r(1, 2), r(1, 1)]);
        assert_eq!(farey_sequence(2), vec![r(0, 1), r(1, 3), r(1, 2), r(2, 3), r(1, 1)]);
    }

    #[test]
    fn sequence_edges_and_mediant_closure() {
        for depth in 0..8 {
            let seq = farey_sequence(depth);
            assert!(seq.windows(2).all(|w| w[0] < w[1] && is_farey_edge(w[0], w[1])));
            let next = farey_sequence(depth + 1);
            for w in seq.windows(2) {
                let (mediant, _) = farey_neighbors(w[0], w[1]).unwrap();
                assert!(next.contains(&mediant));
            }
        }
    }

    #[test]
    fn modular_examples() {
        assert_eq!(apply_modular(&ModularMap::translation(), r(0, 1)), r(1, 1));
        assert_eq!(apply_modular(&ModularMap::inversion(), ExtendedRational::INFINITY), r(0, 1));
        let m = ModularMap::inverse_swap(5, 2).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (3, -5, 1, -2));
        assert_eq!(apply_modular(&m, r(5, 3)), r(0, 1));
        assert_eq!(apply_modular(&m, r(0, 1)), r(5, 2));
        assert!(ModularMap::new(1, 1, 1, 1, Orientation::Preserving).is_none());
    }

    #[test]
    fn inverse_swap_exchanges_endpoints() {
        for p in 2..80u64 {
            for q in 1..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                let m = ModularMap::inverse_swap(p, q).unwrap();
                let r_inv = crate::arith::mod_inverse(q, p).unwrap();
                let pr = ExtendedRational::new(p as i64, r_inv as i64).unwrap();
                assert_eq!(apply_modular(&m, ExtendedRational::ZERO), r(p as i64, q as i64));
                assert_eq!(apply_modular(&m, pr), ExtendedRational::ZERO);
            }
        }
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(crossing_count(1, 1).unwrap(), 1);
        assert_eq!(crossing_count(0, 1).unwrap(), 0);
        assert_eq!(crossing_count(34, 13).unwrap(), 8);
        assert_eq!(crossing_count(-34, 13).unwrap(), 8);
        assert_eq!(crossing_count(13, 34).unwrap(), 8);
        assert!(matches!(crossing_count(6, 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn geodesic_count_only_for_large_ratio() {
        assert_eq!(crossing_count_geodesic(r(1, 2)), None);
        assert_eq!(crossing_count_geodesic(r(1, 1)), None);
        assert_eq!(crossing_count_geodesic(r(2, 1)), Some(2));
        assert_eq!(crossing_count_geodesic(r(-7, 3)), Some(5));
    }

    #[test]
    fn both_algorithms_match_complexity() {
        for p in 1..120i64 {
            for q in 1..120u64 {
                if gcd(p as u64, q) == 1 {
                    assert!(crossing_matches_complexity(p, q).unwrap(), "{p}/{q}");
                    assert!(crossing_matches_complexity(-p, q).unwrap(), "-{p}/{q}");
                }
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn preserving_map() -> impl Strategy<Value = ModularMap> {
            prop::collection::vec(prop_oneof![Just(0u8), Just(1), Just(2)], 0..12).prop_map(|word| {
                let t_inv = ModularMap { a: 1, b: -1, c: 0, d: 1, orientation: Orientation::Preserving };
                word.into_iter().fold(ModularMap::new(1, 0, 0, 1, Orientation::Preserving).unwrap(), |acc, g| {
                    let gen = match g {
                        0 => ModularMap::translation(),
                        1 => ModularMap::inversion(),
                        _ => t_inv,
                    };
                    acc.compose(&gen)
                })
            })
        }

        proptest! {
            #[test]
            fn modular_maps_preserve_edges(map in preserving_map(), depth in 0usize..5, idx in 0usize..64) {
                let seq = farey_sequence(depth);
                let i = idx % (seq.len() - 1);
                let (x, y) = (seq[i], seq[i + 1]);
                prop_assert!(is_farey_edge(apply_modular(&map, x), apply_modular(&map, y)));
            }
        }
    }
}
