//! Exact rotation distance on the flip graph.
//!
//! Three searches share the same contract (exact geodesic distance plus a
//! witness flip sequence):
//!
//! - [`distance_bfs`]: bidirectional breadth-first search on hashed
//!   triangulations, for polygons up to the exhaustive cap.
//! - [`distance_bounded`]: iterative deepening with the admissible heuristic
//!   "diagonals still missing from the target", usable at any `p` when the
//!   budget is small. Its witness is the lexicographically least geodesic.
//! - [`FlipGraph`]: the whole flip graph indexed in memory, used for
//!   exhaustive minimisation over every triangulation.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{enumerate_all_with_cap, Diagonal, Triangulation, DEFAULT_EXHAUSTIVE_CAP};

/// A start triangulation and the diagonals flipped in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequence {
    pub start: Triangulation,
    pub flips: Vec<Diagonal>,
}

impl FlipSequence {
    pub fn empty(start: Triangulation) -> Self {
        Self { start, flips: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Start, every intermediate triangulation, and the end.
    pub fn triangulations(&self) -> Result<Vec<Triangulation>> {
        let mut out = Vec::with_capacity(self.flips.len() + 1);
        out.push(self.start.clone());
        for d in &self.flips {
            let next = out.last().unwrap().flip(d)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<Triangulation> {
        Ok(self.triangulations()?.pop().unwrap())
    }

    /// Diagonal created by each flip.
    pub fn created(&self) -> Result<Vec<Diagonal>> {
        let states = self.triangulations()?;
        Ok(states
            .windows(2)
            .map(|w| *w[1].diagonals().iter().find(|d| !w[0].contains(d)).expect("flip adds one diagonal"))
            .collect())
    }
}

fn check_pair(t1: &Triangulation, t2: &Triangulation) -> Result<()> {
    if t1.p() != t2.p() {
        return Err(Error::PolygonMismatch(t1.p(), t2.p()));
    }
    Ok(())
}

pub fn distance_bfs(t1: &Triangulation, t2: &Triangulation) -> Result<(usize, FlipSequence)> {
    distance_bfs_with_cap(t1, t2, DEFAULT_EXHAUSTIVE_CAP)
}

struct Side {
    nodes: Vec<Triangulation>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    index: HashMap<Triangulation, usize>,
    frontier: Vec<usize>,
    level: usize,
}

impl Side {
    fn new(root: &Triangulation) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Self {
            nodes: vec![root.clone()],
            parent: vec![usize::MAX],
            depth: vec![0],
            index,
            frontier: vec![0],
            level: 0,
        }
    }

    fn path_to_root(&self, mut idx: usize) -> Vec<Triangulation> {
        let mut path = vec![self.nodes[idx].clone()];
        while self.parent[idx] != usize::MAX {
            idx = self.parent[idx];
            path.push(self.nodes[idx].clone());
        }
        path
    }

    /// Expands one full level; returns the best meeting `(total, here, there)`.
    fn expand(&mut self, other: &Side) -> Option<(usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        let mut next = Vec::new();
        for &u in &std::mem::take(&mut self.frontier) {
            let neighbors: Vec<_> = self.nodes[u].neighbors().collect();
            for (_, v) in neighbors {
                if self.index.contains_key(&v) {
                    continue;
                }
                let id = self.nodes.len();
                self.index.insert(v.clone(), id);
                self.parent.push(u);
                self.depth.push(self.level + 1);
                if let Some(&there) = other.index.get(&v) {
                    let total = self.level + 1 + other.depth[there];
                    if best.is_none_or(|(b, _, _)| total < b) {
                        best = Some((total, id, there));
                    }
                }
                self.nodes.push(v);
                next.push(id);
            }
        }
        self.frontier = next;
        self.level += 1;
        best
    }
}

fn sequence_from_states(states: &[Triangulation]) -> FlipSequence {
    let flips = states
        .windows(2)
        .map(|w| *w[0].diagonals().iter().find(|d| !w[1].contains(d)).expect("adjacent states differ"))
        .collect();
    FlipSequence { start: states[0].clone(), flips }
}

/// Bidirectional search; the smaller frontier is expanded first.
pub fn distance_bfs_with_cap(
    t1: &Triangulation,
    t2: &Triangulation,
    cap: usize,
) -> Result<(usize, FlipSequence)> {
    check_pair(t1, t2)?;
    if t1.p() > cap {
        return Err(Error::AboveCap { p: t1.p(), cap });
    }
    if t1 == t2 {
        return Ok((0, FlipSequence::empty(t1.clone())));
    }
    let mut forward = Side::new(t1);
    let mut backward = Side::new(t2);
    loop {
        let expand_forward = forward.frontier.len() <= backward.frontier.len();
        let meeting = if expand_forward {
            forward.expand(&backward)
        } else {
            backward.expand(&forward).map(|(d, b, f)| (d, f, b))
        };
        if let Some((distance, f, b)) = meeting {
            let mut states = forward.path_to_root(f);
            states.reverse();
            states.extend(backward.path_to_root(b).into_iter().skip(1));
            let witness = sequence_from_states(&states);
            debug_assert_eq!(witness.len(), distance);
            return Ok((distance, witness));
        }
        if forward.frontier.is_empty() || backward.frontier.is_empty() {
            unreachable!("the flip graph is connected");
        }
    }
}

/// Adjacency bitsets of a triangulated polygon, sides included.
#[derive(Clone)]
struct Adjacency {
    p: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Adjacency {
    fn new(t: &Triangulation) -> Self {
        let p = t.p();
        let words = p.div_ceil(64);
        let mut adj = Self { p, words, bits: vec![0; p * words] };
        for v in 0..p {
            adj.set(v, (v + 1) % p, true);
        }
        for d in t.diagonals() {
            adj.set(d.lo(), d.hi(), true);
        }
        adj
    }

    fn set(&mut self, a: usize, b: usize, on: bool) {
        for (x, y) in [(a, b), (b, a)] {
            let word = &mut self.bits[x * self.words + y / 64];
            if on {
                *word |= 1 << (y % 64);
            } else {
                *word &= !(1 << (y % 64));
            }
        }
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    /// The two vertices adjacent to both endpoints of `d`.
    fn apexes(&self, d: Diagonal) -> (usize, usize) {
        let (a, b) = (d.lo(), d.hi());
        let mut found = [0usize; 2];
        let mut n = 0;
        for w in 0..self.words {
            let mut common = self.bits[a * self.words + w] & self.bits[b * self.words + w];
            while common != 0 {
                let bit = common.trailing_zeros() as usize;
                found[n] = w * 64 + bit;
                n += 1;
                common &= common - 1;
            }
        }
        debug_assert_eq!(n, 2);
        (found[0], found[1])
    }

    fn diagonals(&self) -> Vec<Diagonal> {
        let mut out = Vec::with_capacity(self.p - 3);
        for a in 0..self.p {
            for b in a + 2..self.p {
                if (a, b) != (0, self.p - 1) && self.has(a, b) {
                    out.push(Diagonal::new(a, b));
                }
            }
        }
        out
    }
}

/// Iterative-deepening search for a geodesic of length at most `budget`.
///
/// Returns `None` when the distance exceeds the budget. The witness is the
/// lexicographically least geodesic (compared by flipped diagonals).
pub fn distance_bounded(
    t1: &Triangulation,
    t2: &Triangulation,
    budget: usize,
) -> Result<Option<(usize, FlipSequence)>> {
    check_pair(t1, t2)?;
    let h0 = t1.difference_count(t2);
    if h0 > budget {
        return Ok(None);
    }
    let target = Adjacency::new(t2);
    let mut state = Adjacency::new(t1);
    let mut path = Vec::new();
    let mut threshold = h0;
    loop {
        match ida_step(&mut state, &target, 0, h0, threshold, None, &mut path) {
            Probe::Found => {
                let witness = FlipSequence { start: t1.clone(), flips: path };
                return Ok(Some((witness.len(), witness)));
            }
            Probe::Exceeded(next) if next <= budget => threshold = next,
            Probe::Exceeded(_) | Probe::Exhausted => return Ok(None),
        }
    }
}

enum Probe {
    Found,
    Exceeded(usize),
    Exhausted,
}

fn ida_step(
    state: &mut Adjacency,
    target: &Adjacency,
    g: usize,
    h: usize,
    threshold: usize,
    last_created: Option<Diagonal>,
    path: &mut Vec<Diagonal>,
) -> Probe {
    if g + h > threshold {
        return Probe::Exceeded(g + h);
    }
    if h == 0 {
        return Probe::Found;
    }
    let mut next_threshold: Option<usize> = None;
    for d in state.diagonals() {
        if Some(d) == last_created {
            continue;
        }
        let (c, e) = state.apexes(d);
        let created = Diagonal::new(c, e);
        let new_h = h - usize::from(!target.has(d.lo(), d.hi())) + usize::from(!target.has(c, e));
        state.set(d.lo(), d.hi(), false);
        state.set(c, e, true);
        path.push(d);
        match ida_step(state, target, g + 1, new_h, threshold, Some(created), path) {
            Probe::Found => return Probe::Found,
            Probe::Exceeded(f) => next_threshold = Some(next_threshold.map_or(f, |n| n.min(f))),
            Probe::Exhausted => {}
        }
        path.pop();
        state.set(c, e, false);
        state.set(d.lo(), d.hi(), true);
    }
    next_threshold.map_or(Probe::Exhausted, Probe::Exceeded)
}

/// The flip graph of the `p`-gon held in memory: nodes in enumeration order,
/// adjacency lists, and the rotation-by-one permutation of nodes.
pub struct FlipGraph {
    p: usize,
    nodes: Vec<Triangulation>,
    adjacency: Vec<u32>,
    degree: usize,
    rotate_one: Vec<u32>,
}

impl FlipGraph {
    pub fn build(p: usize) -> Result<Self> {
        Self::build_with_cap(p, DEFAULT_EXHAUSTIVE_CAP)
    }

    pub fn build_with_cap(p: usize, cap: usize) -> Result<Self> {
        let nodes: Vec<Triangulation> = enumerate_all_with_cap(p, cap)?.collect();
        let index: HashMap<&Triangulation, u32> =
            nodes.iter().enumerate().map(|(i, t)| (t, i as u32)).collect();
        let degree = p - 3;
        let adjacency: Vec<u32> = nodes
            .par_iter()
            .flat_map_iter(|t| t.neighbors().map(|(_, n)| index[&n]).collect::<Vec<_>>())
            .collect();
        let rotate_one = nodes.par_iter().map(|t| index[&t.rotate(1)]).collect();
        Ok(Self { p, nodes, adjacency, degree, rotate_one })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Triangulation] {
        &self.nodes
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v * self.degree..(v + 1) * self.degree]
    }

    /// Node index of the rotation of node `v` by `q` steps.
    pub fn rotated(&self, v: usize, q: usize) -> usize {
        (0..q % self.p).fold(v, |acc, _| self.rotate_one[acc] as usize)
    }

    /// Breadth-first search from `source`, stopping early once every target
    /// has been reached (or `max_depth` is exceeded). Unreached targets keep
    /// `u8::MAX`.
    fn bfs_to_targets(&self, source: usize, targets: &[usize], max_depth: u8, dist: &mut [u8]) -> Vec<u8> {
        dist.fill(u8::MAX);
        dist[source] = 0;
        let mut pending: Vec<usize> = targets.iter().copied().filter(|&t| t != source).collect();
        pending.sort_unstable();
        pending.dedup();
        let mut remaining = pending.len();
        let mut queue = VecDeque::from([source]);
        while remaining > 0 {
            let Some(u) = queue.pop_front() else { break };
            if dist[u] >= max_depth {
                break;
            }
            let next = dist[u] + 1;
            for &v in self.neighbors(u) {
                let v = v as usize;
                if dist[v] == u8::MAX {
                    dist[v] = next;
                    if pending.binary_search(&v).is_ok() {
                        remaining -= 1;
                    }
                    queue.push_back(v);
                }
            }
        }
        targets.iter().map(|&t| dist[t]).collect()
    }

    /// `table[v][q] = d(v, rotate(v, q))` for every node and every `q < p`.
    pub fn rotation_distance_table(&self) -> Vec<Vec<u8>> {
        let p = self.p;
        (0..self.len())
            .into_par_iter()
            .map_init(
                || vec![u8::MAX; self.len()],
                |dist, v| {
                    let targets: Vec<usize> = (0..p).map(|q| self.rotated(v, q)).collect();
                    self.bfs_to_targets(v, &targets, u8::MAX - 1, dist)
                },
            )
            .collect()
    }

    /// Minimum over all nodes of `d(v, rotate(v, q))`, with the first node in
    /// enumeration order attaining it.
    ///
    /// Nodes are visited in order of the lower bound "diagonals destroyed by
    /// the rotation", and each search is cut off below the best value found
    /// so far, so the result is exact without searching every node fully.
    pub fn min_rotation_distance(&self, q: usize) -> (usize, usize) {
        let q = q % self.p;
        let mut order: Vec<(usize, usize)> =
            (0..self.len()).map(|v| (self.nodes[v].destroyed_count(q as i64), v)).collect();
        order.sort_unstable();
        let mut dist = vec![u8::MAX; self.len()];
        let mut best: Option<(usize, usize)> = None;
        for (lower, v) in order {
            if best.is_some_and(|(b, _)| lower > b) {
                break;
            }
            let target = self.rotated(v, q);
            let cutoff = best.map_or(u8::MAX - 1, |(b, _)| b as u8);
            let d = self.bfs_to_targets(v, &[target], cutoff, &mut dist)[0];
            if d == u8::MAX {
                continue;
            }
            let d = d as usize;
            if best.is_none_or(|(b, bv)| d < b || (d == b && v < bv)) {
                best = Some((d, v));
            }
        }
        best.expect("the graph is non-empty")
    }
}

/// Minimum over all triangulations `t` of `d(t, rotate(t, q))`.
pub fn min_rotation_distance(p: usize, q: usize) -> Result<(usize, Triangulation)> {
    min_rotation_distance_with_cap(p, q, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn min_rotation_distance_with_cap(p: usize, q: usize, cap: usize) -> Result<(usize, Triangulation)> {
    if q >= p {
        return Err(Error::OutOfRange { p: p as u64, q: q as u64 });
    }
    let graph = FlipGraph::build_with_cap(p, cap)?;
    let (d, v) = graph.min_rotation_distance(q);
    Ok((d, graph.nodes[v].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euclid_subtractive;

    fn tri(p: usize, pairs: &[(usize, usize)]) -> Triangulation {
        Triangulation::new(p, pairs.iter().map(|&(a, b)| Diagonal::new(a, b))).unwrap()
    }

    /// Plain single-source BFS returning the full distance map.
    fn bfs_oracle(start: &Triangulation) -> HashMap<Triangulation, usize> {
        let mut dist = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for (_, v) in u.neighbors() {
                if !dist.contains_key(&v) {
                    dist.insert(v.clone(), du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    #[test]
    fn bfs_examples() {
        let t = Triangulation::fan(7, 3).unwrap();
        assert_eq!(distance_bfs(&t, &t).unwrap().0, 0);
        let (d, w) = distance_bfs(&tri(4, &[(0, 2)]), &tri(4, &[(1, 3)])).unwrap();
        assert_eq!((d, w.flips.clone()), (1, vec![Diagonal::new(0, 2)]));
        let fan0 = Triangulation::fan(6, 0).unwrap();
        let fan1 = Triangulation::fan(6, 1).unwrap();
        let (d, w) = distance_bfs(&fan0, &fan1).unwrap();
        assert_eq!(d, 3);
        assert_eq!(w.end().unwrap(), fan1);
        assert_eq!(bfs_oracle(&fan0)[&fan1], 3);
    }

    #[test]
    fn bfs_errors() {
        let a = Triangulation::fan(6, 0).unwrap();
        let b = Triangulation::fan(7, 0).unwrap();
        assert_eq!(distance_bfs(&a, &b).unwrap_err(), Error::PolygonMismatch(6, 7));
        let big = Triangulation::fan(14, 0).unwrap();
        assert!(matches!(distance_bfs(&big, &big.rotate(1)), Err(Error::AboveCap { .. })));
        assert!(distance_bounded(&a, &b, 3).is_err());
    }

    #[test]
    fn bfs_matches_oracle_exhaustively_at_seven() {
        let all: Vec<_> = crate::triangulation::enumerate_all(7).unwrap().collect();
        let oracle = bfs_oracle(&all[0]);
        for t in &all {
            let (d, w) = distance_bfs(&all[0], t).unwrap();
            assert_eq!(d, oracle[t]);
            assert_eq!(w.len(), d);
            assert_eq!(&w.end().unwrap(), t);
        }
    }

    #[test]
    fn bounded_examples() {
        let t = Triangulation::fan(9, 0).unwrap();
        let (d, w) = distance_bounded(&t, &t, 0).unwrap().unwrap();
        assert_eq!((d, w.len()), (0, 0));
        assert!(distance_bounded(&tri(4, &[(0, 2)]), &tri(4, &[(1, 3)]), 0).unwrap().is_none());
        let (d, _) = distance_bounded(&tri(4, &[(0, 2)]), &tri(4, &[(1, 3)]), 1).unwrap().unwrap();
        assert_eq!(d, 1);
    }

    #[test]
    fn bounded_matches_bfs() {
        let all: Vec<_> = crate::triangulation::enumerate_all(8).unwrap().collect();
        let oracle = bfs_oracle(&all[3]);
        for t in all.iter().step_by(7) {
            let d = oracle[t];
            let (found, w) = distance_bounded(&all[3], t, d).unwrap().unwrap();
            assert_eq!(found, d);
            assert_eq!(&w.end().unwrap(), t);
            if d > 0 {
                assert!(distance_bounded(&all[3], t, d - 1).unwrap().is_none());
            }
        }
    }

    #[test]
    fn bounded_witness_is_lexicographically_least() {
        let all: Vec<_> = crate::triangulation::enumerate_all(7).unwrap().collect();
        let start = &all[0];
        let oracle_from_target = |t: &Triangulation| bfs_oracle(t);
        for target in all.iter().step_by(5) {
            let to_target = oracle_from_target(target);
            let d = to_target[start];
            // Greedy least descent along the distance field is the lex-least geodesic.
            let mut cur = start.clone();
            let mut expected = Vec::new();
            for step in (0..d).rev() {
                let (flip, next) = cur.neighbors().find(|(_, n)| to_target[n] == step).unwrap();
                expected.push(flip);
                cur = next;
            }
            let (_, w) = distance_bounded(start, target, d).unwrap().unwrap();
            assert_eq!(w.flips, expected);
        }
    }

    #[test]
    fn min_rotation_examples() {
        assert_eq!(min_rotation_distance(6, 0).unwrap().0, 0);
        assert_eq!(min_rotation_distance(6, 1).unwrap().0, 3);
        let (d, t) = min_rotation_distance(7, 2).unwrap();
        assert_eq!(d, 2);
        assert_eq!(distance_bfs(&t, &t.rotate(2)).unwrap().0, 2);
        assert!(min_rotation_distance(6, 6).is_err());
        assert!(min_rotation_distance(14, 1).is_err());
    }

    #[test]
    fn pruned_minimum_matches_full_table() {
        for p in 4..=9 {
            let g = FlipGraph::build(p).unwrap();
            let table = g.rotation_distance_table();
            for q in 0..p {
                let full = table.iter().map(|row| row[q] as usize).min().unwrap();
                let (d, v) = g.min_rotation_distance(q);
                assert_eq!(d, full, "p={p} q={q}");
                assert_eq!(table[v][q] as usize, d);
                let expected = euclid_subtractive(p as u64, q as u64).unwrap().saturating_sub(3);
                assert_eq!(d as u64, expected, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn graph_rotation_is_a_permutation() {
        let g = FlipGraph::build(8).unwrap();
        for v in 0..g.len() {
            assert_eq!(g.nodes()[g.rotated(v, 3)], g.nodes()[v].rotate(3));
            assert_eq!(g.rotated(v, 8), v);
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn walk(p: usize) -> impl Strategy<Value = Triangulation> {
            prop::collection::vec(any::<prop::sample::Index>(), 0..25).prop_map(move |steps| {
                let mut t = Triangulation::fan(p, 0).unwrap();
                for s in steps {
                    let d = t.diagonals()[s.index(p - 3)];
                    t = t.flip(&d).unwrap();
                }
                t
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn metric_axioms(a in walk(9), b in walk(9), c in walk(9)) {
                let ab = distance_bfs(&a, &b).unwrap().0;
                let ba = distance_bfs(&b, &a).unwrap().0;
                let bc = distance_bfs(&b, &c).unwrap().0;
                let ac = distance_bfs(&a, &c).unwrap().0;
                prop_assert_eq!(ab, ba);
                prop_assert!(ac <= ab + bc);
                prop_assert_eq!(ab == 0, a == b);
            }

            #[test]
            fn rotation_distance_dominates_destroyed(t in walk(10), q in 0i64..10) {
                let (d, _) = distance_bfs(&t, &t.rotate(q)).unwrap();
                prop_assert!(d >= t.destroyed_count(q));
            }
        }
    }
}
