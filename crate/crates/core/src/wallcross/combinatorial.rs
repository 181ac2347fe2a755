//! The composition-sum identity and the decomposition counting lemma.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::exactalg::{MultiPoly, RationalFunction};
use crate::partitions::{count_decomposition_types, enumerate_compositions};

fn u_poly() -> MultiPoly {
    MultiPoly::var(1, 0)
}

/// `Σ_{p₁+⋯+p_i=k} (−1)^i u^i / Π_j (p₁+⋯+p_j)` over the ring `Q[u]`.
pub fn composition_sum(k: usize) -> RationalFunction {
    let u = u_poly();
    let mut acc = MultiPoly::zero(1);
    for c in enumerate_compositions(k as u32) {
        let den: BigInt = c.partial_sums().into_iter().map(BigInt::from).product();
        let sign = if c.len() % 2 == 0 { 1 } else { -1 };
        let coeff = BigRational::new(BigInt::from(sign), den);
        acc = acc.add(&u.pow(c.len() as u32).scale(&coeff));
    }
    RationalFunction::from_poly(acc)
}

/// `(−1)^k u(u−1)⋯(u−k+1)/k!`.
pub fn goal_rhs(k: usize) -> RationalFunction {
    let u = u_poly();
    let mut acc = MultiPoly::one(1);
    for j in 0..k {
        acc = acc.mul(&u.sub(&MultiPoly::constant(1, BigRational::from_integer(BigInt::from(j)))));
    }
    let fact: BigInt = (1..=k).map(BigInt::from).product();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    RationalFunction::from_poly(acc.scale(&BigRational::new(BigInt::from(sign), fact)))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Checks `|ρ⁻¹(p)| · Π(p_h − 1)! · (n − |p|)! / n! = 1/Π_j(p₁+⋯+p_j)` for every
/// composition with `|p| ≤ n`. Returns the number of compositions checked
/// and the first failure.
pub fn counting_identity_holds(n: u32) -> (usize, Option<Value>) {
    let mut checked = 0;
    for size in 1..=n {
        for p in enumerate_compositions(size) {
            checked += 1;
            let count = count_decomposition_types(n, &p);
            let mut num = count.clone() * factorial(n - size);
            for &ph in p.parts() {
                num *= factorial(ph - 1);
            }
            let lhs = BigRational::new(BigInt::from(num), BigInt::from(factorial(n)));
            let den: BigInt = p.partial_sums().into_iter().map(BigInt::from).product();
            let rhs = BigRational::new(BigInt::one(), den);
            if lhs != rhs || lhs.is_zero() {
                return (
                    checked,
                    Some(json!({
                        "composition": p.parts(),
                        "count": count.to_string(),
                        "left": lhs.to_string(),
                        "right": rhs.to_string(),
                    })),
                );
            }
        }
    }
    (checked, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goal_small() {
        for k in 1..=6 {
            assert_eq!(composition_sum(k), goal_rhs(k));
        }
    }

    #[test]
    fn counting_small() {
        for n in 1..=6 {
            assert!(counting_identity_holds(n).1.is_none());
        }
    }
}
