//! Packed exponent vectors.
//!
//! A monomial is stored in a single `u128`: the top 16 bits hold the total
//! degree, followed by one byte per variable with variable 0 in the most
//! significant byte. Integer comparison of the packed word is therefore the
//! graded lexicographic order with `x0 > x1 > ...`, and multiplication of
//! monomials is plain addition of the packed words.

use std::fmt;

/// Maximum number of variables a packed monomial can hold.
pub const MAX_VARS: usize = 14;

/// Maximum total degree of a monomial. Keeping the total degree within one
/// byte guarantees that no per-variable field can carry into its neighbour.
pub const MAX_DEGREE: u32 = 255;

const DEGREE_SHIFT: u32 = 112;

#[inline]
fn shift(var: usize) -> u32 {
    debug_assert!(var < MAX_VARS);
    104 - 8 * var as u32
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: usize) -> Self {
        assert!(v < MAX_VARS, "variable index {v} exceeds packed monomial capacity");
        Monomial((1u128 << DEGREE_SHIFT) | (1u128 << shift(v)))
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        assert!(v < MAX_VARS, "variable index {v} exceeds packed monomial capacity");
        assert!(e <= MAX_DEGREE, "monomial degree {e} exceeds {MAX_DEGREE}");
        Monomial(((e as u128) << DEGREE_SHIFT) | ((e as u128) << shift(v)))
    }

    /// Builds a monomial from an explicit exponent vector. Returns `None` when
    /// the vector is too long or the total degree overflows.
    pub fn from_exponents(exps: &[u32]) -> Option<Self> {
        if exps.len() > MAX_VARS {
            return None;
        }
        let total: u32 = exps.iter().sum();
        if total > MAX_DEGREE {
            return None;
        }
        let mut packed = (total as u128) << DEGREE_SHIFT;
        for (v, &e) in exps.iter().enumerate() {
            packed |= (e as u128) << shift(v);
        }
        Some(Monomial(packed))
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEGREE_SHIFT) as u32
    }

    #[inline]
    pub fn exponent(self, v: usize) -> u32 {
        ((self.0 >> shift(v)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exponent(v)).collect()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let deg = self.degree() + other.degree();
        assert!(deg <= MAX_DEGREE, "monomial degree {deg} exceeds {MAX_DEGREE}");
        Monomial(self.0 + other.0)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        for v in 0..MAX_VARS {
            if other.exponent(v) > self.exponent(v) {
                return None;
            }
        }
        Some(Monomial(self.0 - other.0))
    }

    pub fn gcd(self, other: Monomial) -> Monomial {
        let mut total = 0u32;
        let mut packed = 0u128;
        for v in 0..MAX_VARS {
            let e = self.exponent(v).min(other.exponent(v));
            total += e;
            packed |= (e as u128) << shift(v);
        }
        Monomial(packed | ((total as u128) << DEGREE_SHIFT))
    }

    /// Splits off variable `v`, returning the remaining monomial and the
    /// exponent that was removed.
    pub fn split_var(self, v: usize) -> (Monomial, u32) {
        let e = self.exponent(v);
        if e == 0 {
            return (self, 0);
        }
        (Monomial(self.0 - Monomial::var_pow(v, e).0), e)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<u32> = (0..MAX_VARS).map(|v| self.exponent(v)).collect();
        let last = exps.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "Monomial({:?})", &exps[..last])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_order_is_grlex() {
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        // degree first
        assert!(x0 < x1.mul(x1));
        // lex with x0 > x1 inside a degree
        assert!(x1 < x0);
        assert!(x0.mul(x1) < x0.mul(x0));
        assert!(Monomial::ONE < x1);
    }

    #[test]
    fn exponents_round_trip() {
        let m = Monomial::from_exponents(&[3, 0, 2, 1]).unwrap();
        assert_eq!(m.exponents(4), vec![3, 0, 2, 1]);
        assert_eq!(m.degree(), 6);
        let (rest, e) = m.split_var(2);
        assert_eq!(e, 2);
        assert_eq!(rest.exponents(4), vec![3, 0, 0, 1]);
        assert_eq!(rest.degree(), 4);
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::from_exponents(&[2, 1]).unwrap();
        let b = Monomial::from_exponents(&[1, 3]).unwrap();
        assert_eq!(a.gcd(b), Monomial::from_exponents(&[1, 1]).unwrap());
        assert_eq!(a.div(b), None);
        assert_eq!(a.div(Monomial::var(0)), Monomial::from_exponents(&[1, 1]));
    }

    #[test]
    fn capacity_limits() {
        assert!(Monomial::from_exponents(&[0; 15]).is_none());
        assert!(Monomial::from_exponents(&[200, 56]).is_none());
    }
}
