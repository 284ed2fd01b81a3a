//! Triangulations of a convex polygon with vertices `0..p` labeled
//! counterclockwise.
//!
//! Only the cyclic order of vertices matters. Rotation by `q` shifts every
//! label by `+q mod p`; lengths are arc counts, not Euclidean lengths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{euclid_trace, gcd, EuclidTrace};
use crate::error::{Error, Result};

/// Largest polygon accepted by exhaustive operations unless raised explicitly.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 13;

/// An unordered vertex pair stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagonal {
    lo: u32,
    hi: u32,
}

impl Diagonal {
    pub fn new(a: usize, b: usize) -> Self {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Self { lo: lo as u32, hi: hi as u32 }
    }

    pub fn lo(&self) -> usize {
        self.lo as usize
    }

    pub fn hi(&self) -> usize {
        self.hi as usize
    }

    pub fn is_valid_in(&self, p: usize) -> bool {
        let (a, b) = (self.lo(), self.hi());
        b < p && b - a >= 2 && b - a <= p - 2
    }

    pub fn rotated(&self, p: usize, shift: usize) -> Self {
        Self::new((self.lo() + shift) % p, (self.hi() + shift) % p)
    }

    pub fn mirrored(&self, p: usize) -> Self {
        Self::new((p - self.lo()) % p, (p - self.hi()) % p)
    }

    /// Strict interior intersection; diagonals sharing an endpoint do not cross.
    pub fn crosses(&self, other: &Self) -> bool {
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    pub fn length(&self, p: usize) -> usize {
        let span = self.hi() - self.lo();
        span.min(p - span)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

fn normalize_shift(p: usize, q: i64) -> usize {
    q.rem_euclid(p as i64) as usize
}

/// Number of polygon sides on the shorter arc between the endpoints.
pub fn diagonal_length(p: usize, d: Diagonal) -> Result<usize> {
    if !d.is_valid_in(p) {
        return Err(Error::NotADiagonal { p, a: d.lo(), b: d.hi() });
    }
    Ok(d.length(p))
}

/// A maximal set of pairwise non-crossing diagonals, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    p: usize,
    diagonals: Vec<Diagonal>,
}

impl Triangulation {
    pub fn new(p: usize, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        if p < 3 {
            return Err(Error::TooFewVertices(p));
        }
        let mut diagonals: Vec<Diagonal> = diagonals.into_iter().collect();
        diagonals.sort_unstable();
        for d in &diagonals {
            if !d.is_valid_in(p) {
                return Err(Error::NotADiagonal { p, a: d.lo(), b: d.hi() });
            }
        }
        if let Some(w) = diagonals.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateDiagonal(w[0].to_string()));
        }
        for (i, d) in diagonals.iter().enumerate() {
            if let Some(e) = diagonals[i + 1..].iter().find(|e| d.crosses(e)) {
                return Err(Error::Crossing(d.to_string(), e.to_string()));
            }
        }
        if diagonals.len() != p - 3 {
            return Err(Error::WrongDiagonalCount { p, expected: p - 3, got: diagonals.len() });
        }
        Ok(Self { p, diagonals })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_sorted_unchecked(p: usize, diagonals: Vec<Diagonal>) -> Self {
        debug_assert!(diagonals.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(diagonals.len(), p - 3);
        Self { p, diagonals }
    }

    /// All diagonals from `apex`.
    pub fn fan(p: usize, apex: usize) -> Result<Self> {
        if p < 3 {
            return Err(Error::TooFewVertices(p));
        }
        let apex = apex % p;
        let diagonals = (2..p - 1).map(|i| Diagonal::new(apex, (apex + i) % p));
        Self::new(p, diagonals)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn contains(&self, d: &Diagonal) -> bool {
        self.diagonals.binary_search(d).is_ok()
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        let span = a.abs_diff(b);
        span == 1 || span == self.p - 1 || self.contains(&Diagonal::new(a, b))
    }

    /// The two apexes of the triangles on either side of `d`.
    pub fn quadrilateral(&self, d: &Diagonal) -> Result<(usize, usize)> {
        if !self.contains(d) {
            return Err(Error::MissingDiagonal(d.to_string()));
        }
        let (a, b) = (d.lo(), d.hi());
        let inner = (a + 1..b).find(|&c| self.is_edge(a, c) && self.is_edge(c, b));
        let outer = (b + 1..a + self.p).map(|c| c % self.p).find(|&c| self.is_edge(a, c) && self.is_edge(c, b));
        Ok((inner.expect("triangulated inner side"), outer.expect("triangulated outer side")))
    }

    /// The `p - 2` triangles as counterclockwise vertex triples `a < b < c`.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let closing = Diagonal { lo: 0, hi: self.p as u32 - 1 };
        self.diagonals
            .iter()
            .chain(std::iter::once(&closing))
            .map(|d| {
                let (a, b) = (d.lo(), d.hi());
                let apex = (a + 1..b).find(|&c| self.is_edge(a, c) && self.is_edge(c, b)).expect("triangulated");
                [a, apex, b]
            })
            .collect()
    }

    /// Replaces `d` by the other diagonal of its quadrilateral.
    pub fn flip(&self, d: &Diagonal) -> Result<Self> {
        let (c, e) = self.quadrilateral(d)?;
        let replacement = Diagonal::new(c, e);
        let mut diagonals: Vec<Diagonal> = self.diagonals.iter().copied().filter(|x| x != d).collect();
        let pos = diagonals.binary_search(&replacement).unwrap_err();
        diagonals.insert(pos, replacement);
        Ok(Self { p: self.p, diagonals })
    }

    /// Every triangulation one flip away, in the order of the flipped diagonal.
    pub fn neighbors(&self) -> impl Iterator<Item = (Diagonal, Triangulation)> + '_ {
        self.diagonals.iter().map(move |d| (*d, self.flip(d).expect("own diagonal")))
    }

    pub fn rotate(&self, q: i64) -> Self {
        let shift = normalize_shift(self.p, q);
        let mut diagonals: Vec<Diagonal> = self.diagonals.iter().map(|d| d.rotated(self.p, shift)).collect();
        diagonals.sort_unstable();
        Self { p: self.p, diagonals }
    }

    /// Reflection `v ↦ -v mod p`, reversing the cyclic order.
    pub fn mirror(&self) -> Self {
        let mut diagonals: Vec<Diagonal> = self.diagonals.iter().map(|d| d.mirrored(self.p)).collect();
        diagonals.sort_unstable();
        Self { p: self.p, diagonals }
    }

    /// Diagonals present here but absent from `other`.
    pub fn difference_count(&self, other: &Self) -> usize {
        let (mut i, mut j, mut missing) = (0, 0, 0);
        let (a, b) = (&self.diagonals, &other.diagonals);
        while i < a.len() {
            if j >= b.len() || a[i] < b[j] {
                missing += 1;
                i += 1;
            } else if a[i] == b[j] {
                i += 1;
                j += 1;
            } else {
                j += 1;
            }
        }
        missing
    }

    /// Number of diagonals that the rotation by `q` does not map onto
    /// diagonals of `self`.
    pub fn destroyed_count(&self, q: i64) -> usize {
        self.difference_count(&self.rotate(q))
    }

    pub fn long_diagonal_count(&self, x: usize) -> Result<usize> {
        if x < 2 || 2 * x > self.p {
            return Err(Error::LengthOutOfRange { p: self.p, x });
        }
        Ok(self.diagonals.iter().filter(|d| d.length(self.p) > x).count())
    }

    /// Sizes of the length groups `(r_i, r_{i-1}]` for the Euclid remainders
    /// of `(p, q)`.
    pub fn length_profile(&self, q: usize) -> Result<LengthProfile> {
        let trace = euclid_trace(self.p as u64, q as u64)?;
        Ok(self.length_profile_for(&trace))
    }

    pub(crate) fn length_profile_for(&self, trace: &EuclidTrace) -> LengthProfile {
        let k = trace.k();
        let mut counts = vec![0u64; k];
        for d in &self.diagonals {
            let len = d.length(self.p) as u64;
            let group = (1..=k)
                .find(|&i| trace.r(i) < len && len <= trace.r(i - 1))
                .expect("every length lies in (r_k, r_0]");
            counts[group - 1] += 1;
        }
        LengthProfile { counts }
    }

    /// Diagonals grouped by length group, in group order.
    pub(crate) fn groups_for(&self, trace: &EuclidTrace) -> Vec<Vec<Diagonal>> {
        let k = trace.k();
        let mut groups = vec![Vec::new(); k];
        for d in &self.diagonals {
            let len = d.length(self.p) as u64;
            if let Some(i) = (1..=k).find(|&i| trace.r(i) < len && len <= trace.r(i - 1)) {
                groups[i - 1].push(*d);
            }
        }
        groups
    }

    /// Text form: `p=<n>` then one `a-b` line per diagonal.
    pub fn to_text(&self) -> String {
        let mut out = format!("p={}\n", self.p);
        for d in &self.diagonals {
            out.push_str(&format!("{d}\n"));
        }
        out
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diagonals.iter().map(ToString::to_string).collect();
        write!(f, "p={} {{{}}}", self.p, parts.join(", "))
    }
}

impl FromStr for Triangulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut diagonals = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            if p.is_none() {
                let value = line.strip_prefix("p=").ok_or_else(|| parse_err("expected `p=<n>`"))?;
                p = Some(value.trim().parse::<usize>().map_err(|_| parse_err("bad polygon size"))?);
                continue;
            }
            let (a, b) = line.split_once('-').ok_or_else(|| parse_err("expected `a-b`"))?;
            let a = a.trim().parse::<usize>().map_err(|_| parse_err("bad vertex"))?;
            let b = b.trim().parse::<usize>().map_err(|_| parse_err("bad vertex"))?;
            diagonals.push(Diagonal::new(a, b));
        }
        let p = p.ok_or(Error::Parse { line: 0, msg: "missing `p=<n>` header".into() })?;
        Triangulation::new(p, diagonals)
    }
}

/// Counts `s_1..s_k` of diagonals per length group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LengthProfile {
    pub counts: Vec<u64>,
}

impl LengthProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `s_1 + ... + s_i > p_i - 3` for every `i < k`.
    pub fn partial_sum_checks(&self, trace: &EuclidTrace) -> Vec<bool> {
        let mut acc = 0i64;
        (1..self.counts.len())
            .map(|i| {
                acc += self.counts[i - 1] as i64;
                acc > trace.conv_num(i) as i64 - 3
            })
            .collect()
    }
}

pub fn catalan(n: usize) -> u128 {
    (0..n).fold(1u128, |c, i| c * 2 * (2 * i as u128 + 1) / (i as u128 + 2))
}

/// Every triangulation of the `p`-gon, each exactly once, for `p` up to the
/// default cap.
pub fn enumerate_all(p: usize) -> Result<impl Iterator<Item = Triangulation>> {
    enumerate_all_with_cap(p, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn enumerate_all_with_cap(p: usize, cap: usize) -> Result<impl Iterator<Item = Triangulation>> {
    if p < 3 {
        return Err(Error::TooFewVertices(p));
    }
    if p > cap {
        return Err(Error::AboveCap { p, cap });
    }
    let mut all: Vec<Vec<Diagonal>> = triangulate_range(0, p - 1);
    for d in &mut all {
        d.sort_unstable();
    }
    Ok(all.into_iter().map(move |d| Triangulation::from_sorted_unchecked(p, d)))
}

/// Triangulations of the sub-polygon `lo, lo+1, ..., hi` whose base `lo-hi`
/// is already present: pick the apex of the triangle on the base and recurse
/// into both ears.
fn triangulate_range(lo: usize, hi: usize) -> Vec<Vec<Diagonal>> {
    if hi - lo < 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for apex in lo + 1..hi {
        let left = triangulate_range(lo, apex);
        let right = triangulate_range(apex, hi);
        for l in &left {
            for r in &right {
                let mut d = Vec::with_capacity(l.len() + r.len() + 2);
                d.extend_from_slice(l);
                d.extend_from_slice(r);
                if apex - lo >= 2 {
                    d.push(Diagonal::new(lo, apex));
                }
                if hi - apex >= 2 {
                    d.push(Diagonal::new(apex, hi));
                }
                out.push(d);
            }
        }
    }
    out
}

/// Checks `p` and `q` are coprime with `0 < q < p`.
pub(crate) fn require_coprime(p: usize, q: usize) -> Result<()> {
    if q == 0 || q >= p {
        return Err(Error::OutOfRange { p: p as u64, q: q as u64 });
    }
    let g = gcd(p as u64, q as u64);
    if g != 1 {
        return Err(Error::NotCoprime { a: p as u64, b: q as u64, gcd: g });
    }
    Ok(())
}
