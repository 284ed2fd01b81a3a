//! Sign-certified determinant predicates.
//!
//! Coordinates here come from trigonometric formulas, so they carry an input
//! uncertainty on top of floating rounding. Each predicate evaluates the
//! determinant together with a rigorous bound on its total error; the sign is
//! reported only when the value clears that bound, otherwise the predicate
//! answers [`Sign::Uncertain`] and callers treat the configuration as
//! degenerate.

use std::sync::OnceLock;

/// Sign of a certified determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Uncertain,
    Positive,
}

impl Sign {
    pub fn is_certain(self) -> bool {
        self != Sign::Uncertain
    }
}

/// Absolute uncertainty attached to coordinates produced by `sin`/`cos` of
/// moderate arguments followed by a few multiplications.
pub const DEFAULT_COORD_UNCERTAINTY: f64 = 16.0 * f64::EPSILON;

const UNIT: f64 = f64::EPSILON / 2.0;

fn permutations(n: usize) -> &'static [(Vec<usize>, f64)] {
    static P3: OnceLock<Vec<(Vec<usize>, f64)>> = OnceLock::new();
    static P4: OnceLock<Vec<(Vec<usize>, f64)>> = OnceLock::new();
    let cell = match n {
        3 => &P3,
        4 => &P4,
        _ => unreachable!("only 3x3 and 4x4 determinants are used"),
    };
    cell.get_or_init(|| {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        generate(n, &mut perm, 0, &mut out);
        out
    })
}

fn generate(n: usize, perm: &mut Vec<usize>, start: usize, out: &mut Vec<(Vec<usize>, f64)>) {
    if start == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        out.push((perm.clone(), if inversions % 2 == 0 { 1.0 } else { -1.0 }));
        return;
    }
    for i in start..n {
        perm.swap(start, i);
        generate(n, perm, start + 1, out);
        perm.swap(start, i);
    }
}

/// Leibniz expansion of `det(m)` with an upper bound on `|det(m) - det(m*)|`
/// for any `m*` with `|m*_ij - m_ij| <= err_ij`, including rounding in the
/// evaluation itself.
pub fn certified_det<const N: usize>(m: &[[f64; N]; N], err: &[[f64; N]; N]) -> (f64, f64) {
    let perms = permutations(N);
    let mut det = 0.0;
    let mut magnitude = 0.0;
    let mut inflated = 0.0;
    for (perm, sign) in perms {
        let mut term = *sign;
        let mut abs_term = 1.0;
        let mut abs_inflated = 1.0;
        for (row, &col) in perm.iter().enumerate() {
            term *= m[row][col];
            abs_term *= m[row][col].abs();
            abs_inflated *= m[row][col].abs() + err[row][col];
        }
        det += term;
        magnitude += abs_term;
        inflated += abs_inflated;
    }
    let gamma = (N + perms.len() + 2) as f64 * UNIT * 1.01;
    let bound = (inflated - magnitude).max(0.0) * (1.0 + 4.0 * gamma) + 2.0 * gamma * inflated;
    (det, bound)
}

fn classify(det: f64, bound: f64) -> Sign {
    if det > bound {
        Sign::Positive
    } else if det < -bound {
        Sign::Negative
    } else {
        Sign::Uncertain
    }
}

/// Positive when `a, b, c` turn counterclockwise.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2], uncertainty: f64) -> Sign {
    let m = [[b[0] - a[0], b[1] - a[1], 0.0], [c[0] - a[0], c[1] - a[1], 0.0], [0.0, 0.0, 1.0]];
    let e = 2.0 * uncertainty;
    let err = [
        [e + UNIT * m[0][0].abs(), e + UNIT * m[0][1].abs(), 0.0],
        [e + UNIT * m[1][0].abs(), e + UNIT * m[1][1].abs(), 0.0],
        [0.0, 0.0, 0.0],
    ];
    let (det, bound) = certified_det(&m, &err);
    classify(det, bound)
}

/// Positive when `d` lies strictly inside the circle through the
/// counterclockwise triangle `a, b, c`.
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], uncertainty: f64) -> Sign {
    let mut m = [[0.0; 3]; 3];
    let mut err = [[0.0; 3]; 3];
    for (row, pt) in [a, b, c].iter().enumerate() {
        let dx = pt[0] - d[0];
        let dy = pt[1] - d[1];
        let ex = 2.0 * uncertainty + UNIT * dx.abs();
        let ey = 2.0 * uncertainty + UNIT * dy.abs();
        let lifted = dx * dx + dy * dy;
        m[row] = [dx, dy, lifted];
        err[row] = [
            ex,
            ey,
            2.0 * dx.abs() * ex + ex * ex + 2.0 * dy.abs() * ey + ey * ey + 3.0 * UNIT * lifted,
        ];
    }
    let (det, bound) = certified_det(&m, &err);
    classify(det, bound)
}

/// Sign of `det[b - a, c - a, d - a, e - a]` for points of `R^4`: which side
/// of the hyperplane through `a, b, c, d` the point `e` lies on.
pub fn orient4d(pts: [&[f64; 4]; 5], uncertainty: f64) -> Sign {
    let base = pts[0];
    let mut m = [[0.0; 4]; 4];
    let mut err = [[0.0; 4]; 4];
    for row in 0..4 {
        for col in 0..4 {
            let v = pts[row + 1][col] - base[col];
            m[row][col] = v;
            err[row][col] = 2.0 * uncertainty + UNIT * v.abs();
        }
    }
    let (det, bound) = certified_det(&m, &err);
    classify(det, bound)
}
