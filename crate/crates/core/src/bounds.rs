//! Lower-bound certificates for the rotation distance `d(Δ, rot_q Δ)`.
//!
//! Diagonals are sorted into length groups `S_i = (r_i, r_{i-1}]` using the
//! Euclid remainders of `(p, q)`. Rotating by `q` a total of `p_{i-1}` times
//! is a rotation by `±r_i`, which no diagonal of `S_i` survives, so a single
//! rotation destroys at least `⌈s_i / p_{i-1}⌉` diagonals of each group. The
//! sum of those ceilings is at least `E(p, q) - 3` under the partial-sum
//! constraints, with equality exactly for one profile.

use serde::{Deserialize, Serialize};

use crate::arith::{euclid_subtractive, euclid_trace, EuclidTrace};
use crate::error::{Error, Result};
use crate::triangulation::{require_coprime, LengthProfile, Triangulation};

/// Default cap on `Σ n_i` for the brute-force profile minimiser.
pub const DEFAULT_ORACLE_CAP: u64 = 14;

/// `⌈p/x⌉ - 3`; values `<= 0` carry no information.
pub fn lemma5_bound(p: usize, x: usize) -> Result<i64> {
    if x < 2 || 2 * x > p {
        return Err(Error::LengthOutOfRange { p, x });
    }
    Ok(p.div_ceil(x) as i64 - 3)
}

/// `s_1 + Σ_{i>=2} ⌈s_i / p_{i-1}⌉`.
pub fn lemma9_value(profile: &LengthProfile, trace: &EuclidTrace) -> Result<u64> {
    if profile.len() != trace.k() {
        return Err(Error::ProfileLength { profile: profile.len(), trace: trace.k() });
    }
    Ok(profile
        .counts
        .iter()
        .enumerate()
        .map(|(idx, &s)| s.div_ceil(trace.conv_num(idx)))
        .sum())
}

/// The unique profile attaining the bound: `s_1 = n_1 - 2`,
/// `s_l = p_{l-1} n_l` for `1 < l < k`, `s_k = p_{k-1}(n_k - 1)`.
pub fn extremal_profile(trace: &EuclidTrace) -> Result<LengthProfile> {
    extremal_profile_with_excess(trace, 0)
}

fn extremal_profile_with_excess(trace: &EuclidTrace, excess: u64) -> Result<LengthProfile> {
    let k = trace.k();
    if k < 2 || trace.n(1) < 2 {
        return Err(Error::SingleTermTrace);
    }
    let mut counts = Vec::with_capacity(k);
    counts.push(trace.n(1) - 2);
    for l in 2..k {
        counts.push(trace.conv_num(l - 1) * trace.n(l));
    }
    counts.push(trace.conv_num(k - 1) * (trace.n(k) - 1 + excess));
    Ok(LengthProfile { counts })
}

/// Target value `E(p, q) - 3`, which may be negative for tiny polygons.
pub fn target(p: usize, q: usize) -> i64 {
    euclid_subtractive(p as u64, q as u64).map_or(0, |e| e as i64 - 3)
}

/// Everything known about the rotation of one triangulation by `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub p: usize,
    pub q: usize,
    /// True when the polygon was reflected so that the certificate works
    /// with `p - q < p/2` instead of `q`.
    pub mirrored: bool,
    pub normalized_q: usize,
    pub trace: EuclidTrace,
    pub profile: LengthProfile,
    pub partial_sum_checks: Vec<bool>,
    pub bound_value: u64,
    pub target: i64,
    pub extremal: bool,
    pub destroyed_count: usize,
    /// Diagonals of each length group not mapped onto diagonals.
    pub group_destroyed: Vec<u64>,
    /// `⌈s_i / p_{i-1}⌉` per group.
    pub group_required: Vec<u64>,
    pub per_group_holds: bool,
}

impl BoundCertificate {
    /// All recorded inequalities hold and the bound reaches the target.
    pub fn is_sound(&self) -> bool {
        self.partial_sum_checks.iter().all(|&c| c)
            && self.per_group_holds
            && self.destroyed_count as u64 >= self.bound_value
            && self.bound_value as i64 >= self.target
    }

    /// Destroyed count equals the target, so no rotation distance can beat it.
    pub fn is_tight(&self) -> bool {
        self.destroyed_count as i64 == self.target.max(0)
    }
}

/// Builds the certificate for `t` rotated by `q` (coprime, `0 < q < p`).
pub fn certify(t: &Triangulation, q: usize) -> Result<BoundCertificate> {
    let p = t.p();
    require_coprime(p, q)?;
    let (work, normalized_q, mirrored) = if 2 * q > p { (t.mirror(), p - q, true) } else { (t.clone(), q, false) };
    let trace = euclid_trace(p as u64, normalized_q as u64)?;
    let profile = work.length_profile_for(&trace);
    let partial_sum_checks = profile.partial_sum_checks(&trace);
    let bound_value = lemma9_value(&profile, &trace)?;
    let extremal = if trace.k() == 1 { true } else { extremal_profile(&trace)? == profile };

    let rotated = work.rotate(normalized_q as i64);
    let groups = work.groups_for(&trace);
    let group_destroyed: Vec<u64> =
        groups.iter().map(|g| g.iter().filter(|d| !rotated.contains(d)).count() as u64).collect();
    let group_required: Vec<u64> =
        profile.counts.iter().enumerate().map(|(i, &s)| s.div_ceil(trace.conv_num(i))).collect();
    let per_group_holds = group_destroyed.iter().zip(&group_required).all(|(d, r)| d >= r);

    Ok(BoundCertificate {
        p,
        q,
        mirrored,
        normalized_q,
        target: trace.complexity() as i64 - 3,
        trace,
        profile,
        partial_sum_checks,
        bound_value,
        extremal,
        destroyed_count: work.difference_count(&rotated),
        group_destroyed,
        group_required,
        per_group_holds,
    })
}

/// Result of exhaustive minimisation over admissible profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleMinimum {
    pub minimum: u64,
    /// Number of admissible profiles attaining the minimum (saturating).
    pub minimizers: u128,
    /// The least minimiser in lexicographic order.
    pub minimizer: LengthProfile,
}

/// Exhaustive minimum of [`lemma9_value`] over all nonnegative profiles with
/// `Σ s_i = p - 3` and `s_1 + ... + s_i > p_i - 3` for `i < k`.
pub fn lemma9_oracle_min(trace: &EuclidTrace) -> Result<OracleMinimum> {
    lemma9_oracle_min_with_cap(trace, DEFAULT_ORACLE_CAP)
}

pub fn lemma9_oracle_min_with_cap(trace: &EuclidTrace, cap: u64) -> Result<OracleMinimum> {
    let sum = trace.complexity();
    if sum > cap {
        return Err(Error::OracleCap { sum, cap });
    }
    Ok(profile_minimum(trace, trace.p.saturating_sub(3)).expect("the extremal profile is admissible"))
}

/// Same minimisation with the total fixed at `p - 3 + excess · p_{k-1}`.
pub fn lemma9_oracle_min_with_excess(trace: &EuclidTrace, excess: u64, cap: u64) -> Result<OracleMinimum> {
    let sum = trace.complexity();
    if sum > cap {
        return Err(Error::OracleCap { sum, cap });
    }
    let k = trace.k();
    let total = trace.p.saturating_sub(3) + excess * trace.conv_num(k.saturating_sub(1));
    Ok(profile_minimum(trace, total).expect("feasible total"))
}

/// Profile with the extra `excess · p_{k-1}` diagonals placed in the last group.
pub fn extremal_profile_with_surplus(trace: &EuclidTrace, excess: u64) -> Result<LengthProfile> {
    extremal_profile_with_excess(trace, excess)
}

/// Dynamic program over partial sums, run from the last group backwards:
/// `rest[i][S]` is the cheapest way to choose `s_{i+1}..s_k` after the first
/// `i` groups used `S` diagonals. Every profile is a unique path, so carrying
/// counts alongside yields the number of optimal profiles.
fn profile_minimum(trace: &EuclidTrace, total: u64) -> Option<OracleMinimum> {
    const NONE: u64 = u64::MAX;
    let k = trace.k();
    let total = total as usize;
    // Smallest admissible partial sum after group i: s_1 + ... + s_i > p_i - 3.
    let floor = |i: usize| if i < k { (trace.conv_num(i) as i64 - 2).max(0) as usize } else { total };
    let cost = |i: usize, s: usize| (s as u64).div_ceil(trace.conv_num(i - 1));

    let mut rest = vec![vec![NONE; total + 1]; k + 1];
    let mut ways = vec![vec![0u128; total + 1]; k + 1];
    rest[k][total] = 0;
    ways[k][total] = 1;
    for i in (1..=k).rev() {
        for prev in 0..=total {
            let mut best = NONE;
            let mut count = 0u128;
            for sum in prev.max(floor(i))..=total {
                if rest[i][sum] == NONE {
                    continue;
                }
                let c = cost(i, sum - prev) + rest[i][sum];
                if c < best {
                    best = c;
                    count = ways[i][sum];
                } else if c == best {
                    count = count.saturating_add(ways[i][sum]);
                }
            }
            rest[i - 1][prev] = best;
            ways[i - 1][prev] = count;
        }
    }
    let minimum = rest[0][0];
    if minimum == NONE {
        return None;
    }
    let mut counts = Vec::with_capacity(k);
    let mut prev = 0usize;
    let mut remaining = minimum;
    for i in 1..=k {
        let sum = (prev.max(floor(i))..=total)
            .find(|&sum| rest[i][sum] != NONE && cost(i, sum - prev) + rest[i][sum] == remaining)
            .expect("an optimal continuation exists");
        remaining -= cost(i, sum - prev);
        counts.push((sum - prev) as u64);
        prev = sum;
    }
    Some(OracleMinimum { minimum, minimizers: ways[0][0], minimizer: LengthProfile { counts } })
}
