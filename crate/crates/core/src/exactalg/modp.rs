//! Reduction modulo the Mersenne prime 2^61 − 1, used as a cheap filter
//! before attempting exact division by a linear form.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::One;

use super::linear::LinearForm;
use super::monomial::Monomial;

pub(crate) const P: u64 = (1u64 << 61) - 1;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    fold(a as u128 * b as u128)
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

#[inline]
fn fold(x: u128) -> u64 {
    // 2^61 ≡ 1
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let s = lo + (hi & P) + (hi >> 61);
    let s = (s & P) + (s >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

fn reduce_int(x: &BigInt) -> u64 {
    let (sign, digits) = x.to_u64_digits();
    // 2^64 ≡ 8
    let m = digits.iter().rev().fold(0u64, |acc, &d| fold(((acc as u128) << 3) + fold(d as u128) as u128));
    if sign == Sign::Minus && m != 0 {
        P - m
    } else {
        m
    }
}

/// `x mod P`, or `None` when the denominator vanishes modulo `P`.
pub(crate) fn reduce(x: &BigRational) -> Option<u64> {
    let n = reduce_int(x.numer());
    if x.denom().is_one() {
        return Some(n);
    }
    let d = reduce_int(x.denom());
    if d == 0 {
        return None;
    }
    Some(mul(n, inv(d)))
}

/// Residues of integer coefficients.
pub(crate) fn int_residues(terms: &[(Monomial, BigInt)]) -> Vec<u64> {
    terms.iter().map(|(_, c)| reduce_int(c)).collect()
}

/// Returns `true` when the polynomial with `terms` certainly does not vanish on the hyperplane
/// `f = 0`, judged at one deterministic point of that hyperplane mod `P`.
/// A `false` answer is inconclusive.
pub(crate) fn surely_not_divisible<C>(terms: &[(Monomial, C)], nvars: usize, res: &[u64], f: &LinearForm, salt: u64) -> bool {
    let Some((lead, c)) = f.terms().next() else {
        return false;
    };
    let Some(c) = reduce(c) else {
        return false;
    };
    if c == 0 {
        return false;
    }
    let mut point = vec![0u64; nvars];
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ salt;
    for (v, slot) in point.iter_mut().enumerate() {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407 ^ v as u64);
        *slot = (state >> 3) % P;
    }
    // solve f(point) = 0 for the leading variable
    point[lead] = 0;
    let mut rest = match reduce(f.constant_term()) {
        Some(r) => r,
        None => return false,
    };
    for (v, k) in f.terms() {
        if v == lead {
            continue;
        }
        let Some(k) = reduce(k) else {
            return false;
        };
        rest = add(rest, mul(k, point[v]));
    }
    point[lead] = mul(P - rest % P, inv(c)) % P;

    let mut maxdeg = vec![0usize; nvars];
    for (m, _) in terms {
        for (v, d) in maxdeg.iter_mut().enumerate() {
            *d = (*d).max(m.exponent(v) as usize);
        }
    }
    let powers: Vec<Vec<u64>> = (0..nvars)
        .map(|v| {
            let mut pw = vec![1u64; maxdeg[v] + 1];
            for k in 1..=maxdeg[v] {
                pw[k] = mul(pw[k - 1], point[v]);
            }
            pw
        })
        .collect();
    let mut acc = 0u64;
    for ((m, _), &r) in terms.iter().zip(res) {
        let mut t = r;
        for (v, pw) in powers.iter().enumerate() {
            let e = m.exponent(v) as usize;
            if e > 0 {
                t = mul(t, pw[e]);
            }
        }
        acc = add(acc, t);
    }
    acc != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    #[test]
    fn filter_never_rejects_true_divisors() {
        let f = LinearForm::from_terms(q(0), &[(0, 2, 1), (2, -3, 1)]);
        let g = LinearForm::from_terms(q(1), &[(1, 1, 1)]);
        let p = f.to_poly(3).mul(&g.to_poly(3)).scale(&BigRational::new(1.into(), 7.into()));
        let (ints, _) = p.integer_terms();
        let res = int_residues(&ints);
        for salt in 0..20 {
            assert!(!surely_not_divisible(&ints, 3, &res, &f, salt));
            assert!(!surely_not_divisible(&ints, 3, &res, &g, salt));
        }
        let h = LinearForm::var(1);
        assert!(surely_not_divisible(&ints, 3, &res, &h, 3));
    }

    #[test]
    fn limb_reduction_matches_remainder() {
        let big = BigInt::from(P);
        let mut x = BigInt::from(0x1234_5678_9abc_def1u64);
        for k in 0..40 {
            x = &x * &x + BigInt::from(k);
            for y in [x.clone(), -x.clone(), BigInt::from(P) * k, BigInt::from(P) - 1u32] {
                let want = ((&y % &big) + &big) % &big;
                assert_eq!(BigInt::from(reduce_int(&y)), want, "{y}");
            }
            if x.bits() > 4000 {
                x = x.sqrt() + k;
            }
        }
    }
}
