//! Subtractive Euclid complexity, continued fractions and convergents.
//!
//! All sequences produced here are bounded by the larger input, so `u64`
//! storage cannot overflow; products that appear in congruence checks are
//! widened to `u128`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Number of subtractions the subtractive Euclid algorithm needs to turn the
/// unordered pair `(p, q)` into `(gcd, 0)`.
///
/// Quotients are summed, so the cost is logarithmic even for large inputs.
pub fn euclid_subtractive(p: u64, q: u64) -> Result<u64> {
    let (mut a, mut b) = if p >= q { (p, q) } else { (q, p) };
    if a == 0 {
        return Err(Error::ZeroPair);
    }
    let mut count = 0u64;
    while b != 0 {
        count += a / b;
        let r = a % b;
        a = b;
        b = r;
    }
    Ok(count)
}

fn check_reduced(p: u64, q: u64) -> Result<()> {
    if q == 0 || q >= p {
        return Err(Error::OutOfRange { p, q });
    }
    let g = gcd(p, q);
    if g != 1 {
        return Err(Error::NotCoprime { a: p, b: q, gcd: g });
    }
    Ok(())
}

/// Canonical continued fraction `n1 + 1/(n2 + ... + 1/nk)` with `nk >= 2`
/// whenever `k > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContinuedFraction {
    coefficients: Vec<u64>,
}

impl ContinuedFraction {
    /// Wraps a coefficient list. Returns `None` if a coefficient is zero or
    /// the list is empty.
    pub fn from_coefficients(coefficients: Vec<u64>) -> Option<Self> {
        if coefficients.is_empty() || coefficients.contains(&0) {
            return None;
        }
        Some(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    /// Evaluates the fraction back to a reduced `(numerator, denominator)`.
    pub fn value(&self) -> (u64, u64) {
        let mut num = 1u64;
        let mut den = 0u64;
        for &n in self.coefficients.iter().rev() {
            let next = n * num + den;
            den = num;
            num = next;
        }
        (num, den)
    }

    pub fn reversed(&self) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.reverse();
        Self { coefficients }
    }
}

pub fn continued_fraction(p: u64, q: u64) -> Result<ContinuedFraction> {
    check_reduced(p, q)?;
    let mut coefficients = Vec::new();
    let (mut a, mut b) = (p, q);
    while b != 0 {
        coefficients.push(a / b);
        let r = a % b;
        a = b;
        b = r;
    }
    Ok(ContinuedFraction { coefficients })
}

/// Remainders and convergents of the Euclid algorithm on `p/q`.
///
/// Indices follow the usual convention: `remainders[i] = r_i` for
/// `i = 0..=k+1` with `r_0 = p`, `r_1 = q`, `r_{k+1} = 0`; and
/// `numerators[i] = p_i`, `denominators[i] = q_i` for `i = 0..=k` with
/// `p_0 = 1`, `q_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidTrace {
    pub p: u64,
    pub q: u64,
    pub coefficients: Vec<u64>,
    pub remainders: Vec<u64>,
    pub numerators: Vec<u64>,
    pub denominators: Vec<u64>,
}

impl EuclidTrace {
    /// Number of continued-fraction terms `k`.
    pub fn k(&self) -> usize {
        self.coefficients.len()
    }

    /// `n_i` for `1 <= i <= k`.
    pub fn n(&self, i: usize) -> u64 {
        self.coefficients[i - 1]
    }

    /// `r_i` for `0 <= i <= k + 1`.
    pub fn r(&self, i: usize) -> u64 {
        self.remainders[i]
    }

    /// `p_i` for `0 <= i <= k`.
    pub fn conv_num(&self, i: usize) -> u64 {
        self.numerators[i]
    }

    pub fn complexity(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    pub fn continued_fraction(&self) -> ContinuedFraction {
        ContinuedFraction { coefficients: self.coefficients.clone() }
    }
}

pub fn euclid_trace(p: u64, q: u64) -> Result<EuclidTrace> {
    let cf = continued_fraction(p, q)?;
    let coefficients = cf.coefficients;
    let k = coefficients.len();

    let mut remainders = vec![p, q];
    for i in 1..=k {
        let next = remainders[i - 1] - coefficients[i - 1] * remainders[i];
        remainders.push(next);
    }

    let mut numerators = vec![1u64];
    let mut denominators = vec![0u64];
    let (mut p_prev2, mut q_prev2) = (0u64, 1u64);
    for &n in &coefficients {
        let p_prev = *numerators.last().unwrap();
        let q_prev = *denominators.last().unwrap();
        numerators.push(n * p_prev + p_prev2);
        denominators.push(n * q_prev + q_prev2);
        p_prev2 = p_prev;
        q_prev2 = q_prev;
    }

    Ok(EuclidTrace { p, q, coefficients, remainders, numerators, denominators })
}

/// The unique `r` in `(0, p)` with `r * q ≡ 1 (mod p)`.
pub fn mod_inverse(q: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::SmallModulus(p));
    }
    let (mut old_r, mut r) = (i128::from(q % p), i128::from(p));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    if old_r != 1 {
        return Err(Error::NotCoprime { a: q, b: p, gcd: old_r as u64 });
    }
    Ok(old_s.rem_euclid(i128::from(p)) as u64)
}

/// Checks `p_i * q ≡ (-1)^i r_{i+1} (mod p)` for `i = 0..=k`.
pub fn rotation_congruences_hold(trace: &EuclidTrace) -> bool {
    let p = u128::from(trace.p);
    (0..=trace.k()).all(|i| {
        let lhs = u128::from(trace.conv_num(i)) * u128::from(trace.q) % p;
        let r = u128::from(trace.r(i + 1)) % p;
        let rhs = if i % 2 == 0 { r } else { (p - r) % p };
        lhs == rhs
    })
}

/// Checks `sum_{i=1}^{j} p_{i-1} n_i = p_j + p_{j-1} - 1` for `2 <= j <= k`.
pub fn convergent_sum_identity_holds(trace: &EuclidTrace) -> bool {
    let mut acc = 0u128;
    for j in 1..=trace.k() {
        acc += u128::from(trace.conv_num(j - 1)) * u128::from(trace.n(j));
        if j >= 2 {
            let rhs = u128::from(trace.conv_num(j)) + u128::from(trace.conv_num(j - 1)) - 1;
            if acc != rhs {
                return false;
            }
        }
    }
    true
}

/// Checks `p = p_i r_i + p_{i-1} r_{i+1}` and `p / r_i > p_i` for `1 <= i < k`.
pub fn remainder_bounds_hold(trace: &EuclidTrace) -> bool {
    let p = u128::from(trace.p);
    (1..trace.k()).all(|i| {
        let pi = u128::from(trace.conv_num(i));
        let ri = u128::from(trace.r(i));
        let decomposition =
            pi * ri + u128::from(trace.conv_num(i - 1)) * u128::from(trace.r(i + 1));
        decomposition == p && p > pi * ri
    })
}

/// Reversing the coefficients of `p/q` gives `p/s` with
/// `s ≡ (-1)^{k-1} q^{-1} (mod p)`, provided `n_1 >= 2` and `n_k >= 2`.
///
/// Returns `None` when the coefficient conditions do not apply.
pub fn reversal_identity_holds(p: u64, q: u64) -> Result<Option<bool>> {
    let cf = continued_fraction(p, q)?;
    let k = cf.len();
    let coeffs = cf.coefficients();
    if coeffs[0] < 2 || coeffs[k - 1] < 2 {
        return Ok(None);
    }
    let r = mod_inverse(q, p)?;
    let (num, s) = cf.reversed().value();
    let expected = if (k - 1) % 2 == 0 { r % p } else { (p - r % p) % p };
    Ok(Some(num == p && s % p == expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One subtraction at a time, exactly as the definition reads.
    fn subtract_one_at_a_time(p: u64, q: u64) -> u64 {
        let (mut a, mut b) = (p.max(q), p.min(q));
        let mut steps = 0;
        while b != 0 {
            a -= b;
            steps += 1;
            if a < b {
                std::mem::swap(&mut a, &mut b);
            }
        }
        steps
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(euclid_subtractive(5, 1).unwrap(), 5);
        assert_eq!(euclid_subtractive(7, 0).unwrap(), 0);
        assert_eq!(subtract_one_at_a_time(34, 13), 8);
        assert_eq!(euclid_subtractive(34, 13).unwrap(), 8);
        assert_eq!(euclid_subtractive(13, 34).unwrap(), 8);
        assert_eq!(euclid_subtractive(0, 0), Err(Error::ZeroPair));
        assert_eq!(euclid_subtractive(0, 4).unwrap(), 0);
    }

    #[test]
    fn euclid_matches_one_step_oracle_on_non_coprime_pairs() {
        for p in 1..60 {
            for q in 0..60 {
                assert_eq!(euclid_subtractive(p, q).unwrap(), subtract_one_at_a_time(p, q));
            }
        }
        // 6,4 -> 2,4 -> 2,2 -> 2,0
        assert_eq!(euclid_subtractive(6, 4).unwrap(), 3);
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction(34, 13).unwrap().coefficients(), &[2, 1, 1, 1, 1, 2]);
        assert_eq!(continued_fraction(5, 1).unwrap().coefficients(), &[5]);
        assert_eq!(continued_fraction(5, 2).unwrap().coefficients(), &[2, 2]);
        assert_eq!(continued_fraction(34, 13).unwrap().value(), (34, 13));
    }

    #[test]
    fn continued_fraction_rejects_bad_input() {
        assert!(matches!(continued_fraction(5, 5), Err(Error::OutOfRange { .. })));
        assert!(matches!(continued_fraction(5, 7), Err(Error::OutOfRange { .. })));
        assert!(matches!(continued_fraction(5, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(continued_fraction(6, 4), Err(Error::NotCoprime { gcd: 2, .. })));
    }

    #[test]
    fn trace_examples() {
        let t = euclid_trace(34, 13).unwrap();
        assert_eq!(t.remainders, vec![34, 13, 8, 5, 3, 2, 1, 0]);
        assert_eq!(t.numerators, vec![1, 2, 3, 5, 8, 13, 34]);
        assert_eq!(*t.denominators.last().unwrap(), 13);

        let t = euclid_trace(5, 2).unwrap();
        assert_eq!(t.remainders, vec![5, 2, 1, 0]);
        assert_eq!(t.numerators, vec![1, 2, 5]);

        let t = euclid_trace(9, 1).unwrap();
        assert_eq!(t.remainders, vec![9, 1, 0]);
        assert_eq!(t.numerators, vec![1, 9]);
        assert_eq!(t.denominators, vec![0, 1]);
    }

    #[test]
    fn trace_satisfies_recurrences() {
        for p in 2..150u64 {
            for q in 1..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                let t = euclid_trace(p, q).unwrap();
                let k = t.k();
                for i in 1..=k {
                    assert_eq!(t.r(i - 1), t.n(i) * t.r(i) + t.r(i + 1));
                    assert!(t.r(i + 1) < t.r(i));
                }
                assert_eq!(t.r(k), 1);
                assert_eq!(t.numerators[k], p);
                assert_eq!(t.denominators[k], q);
                assert!(rotation_congruences_hold(&t));
                assert!(convergent_sum_identity_holds(&t));
                assert!(remainder_bounds_hold(&t));
            }
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(13, 34).unwrap(), 21);
        assert_eq!(mod_inverse(1, 17).unwrap(), 1);
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert!(matches!(mod_inverse(4, 6), Err(Error::NotCoprime { gcd: 2, .. })));
        assert_eq!(mod_inverse(1, 1), Err(Error::SmallModulus(1)));
    }

    #[test]
    fn reversal_identity_examples() {
        // 34/13 has n1 = 2, n6 = 2; reversal [2,1,1,1,1,2] is a palindrome, so
        // s = 13 and 13 ≡ -21 (mod 34) with k - 1 = 5 odd.
        assert_eq!(reversal_identity_holds(34, 13).unwrap(), Some(true));
        // 7/3 = [2, 3]; reversed [3, 2] = 7/2; r = 5, s ≡ -5 ≡ 2.
        assert_eq!(reversal_identity_holds(7, 3).unwrap(), Some(true));
        // n_k = 1 cannot occur canonically, but n_1 = 1 can.
        assert_eq!(reversal_identity_holds(5, 3).unwrap(), None);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn coefficient_sum_is_complexity(p in 2u64..5000, q in 1u64..5000) {
                prop_assume!(q < p && gcd(p, q) == 1);
                let cf = continued_fraction(p, q).unwrap();
                prop_assert_eq!(cf.sum(), euclid_subtractive(p, q).unwrap());
                prop_assert_eq!(cf.value(), (p, q));
                if cf.len() > 1 {
                    prop_assert!(*cf.coefficients().last().unwrap() >= 2);
                }
            }

            #[test]
            fn complexity_symmetries(p in 2u64..100_000, q in 1u64..100_000) {
                prop_assume!(q < p && gcd(p, q) == 1);
                let e = euclid_subtractive(p, q).unwrap();
                prop_assert_eq!(e, euclid_subtractive(p, p - q).unwrap());
                let r = mod_inverse(q, p).unwrap();
                prop_assert_eq!(r as u128 * q as u128 % p as u128, 1 % p as u128);
                prop_assert_eq!(e, euclid_subtractive(p, r).unwrap());
            }
        }
    }
}
