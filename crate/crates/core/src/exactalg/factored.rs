//! Products of canonical linear forms with integer exponents.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linear::LinearForm;
use super::monomial::Monomial;
use super::poly::{expand_integer_product, MultiPoly};
use super::ratfun::RationalFunction;
use super::ExactError;

/// `scalar · Π factor^exponent`, every factor a canonical linear form and
/// no exponent zero. The zero value has scalar 0 and no factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredRational {
    scalar: BigRational,
    factors: BTreeMap<LinearForm, i32>,
}

impl FactoredRational {
    pub fn one() -> Self {
        Self::from_scalar(BigRational::one())
    }

    pub fn from_scalar(scalar: BigRational) -> Self {
        FactoredRational {
            scalar,
            factors: BTreeMap::new(),
        }
    }

    /// `f^exp`. A zero form with positive exponent gives zero.
    pub fn from_form(f: &LinearForm, exp: i32) -> Result<Self, ExactError> {
        if exp == 0 {
            return Ok(Self::one());
        }
        match f.canonical() {
            Ok((g, c)) => {
                let mut out = FactoredRational::from_scalar(pow_signed(&c, exp));
                out.factors.insert(g, exp);
                Ok(out)
            }
            Err(_) if exp > 0 => Ok(Self::from_scalar(BigRational::zero())),
            Err(_) => Err(ExactError::DivideByZero),
        }
    }

    /// `Π num / Π den` for lists of linear forms.
    pub fn from_forms<'a>(
        num: impl IntoIterator<Item = &'a LinearForm>,
        den: impl IntoIterator<Item = &'a LinearForm>,
    ) -> Result<Self, ExactError> {
        let mut out = Self::one();
        for f in den {
            out.mul_form(f, -1)?;
        }
        for f in num {
            out.mul_form(f, 1)?;
        }
        Ok(out)
    }

    fn mul_form(&mut self, f: &LinearForm, exp: i32) -> Result<(), ExactError> {
        match f.canonical() {
            Ok((g, c)) => {
                if !self.scalar.is_zero() {
                    self.scalar *= pow_signed(&c, exp);
                    self.bump(g, exp);
                }
                Ok(())
            }
            Err(_) if exp > 0 => {
                self.scalar = BigRational::zero();
                self.factors.clear();
                Ok(())
            }
            Err(_) => Err(ExactError::DivideByZero),
        }
    }

    fn bump(&mut self, g: LinearForm, exp: i32) {
        match self.factors.entry(g) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += exp;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(exp);
            }
        }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinearForm, i32)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Number of linear factors counted with multiplicity, numerator and
    /// denominator separately.
    pub fn degree_counts(&self) -> (u32, u32) {
        let mut num = 0;
        let mut den = 0;
        for &e in self.factors.values() {
            if e > 0 {
                num += e as u32;
            } else {
                den += (-e) as u32;
            }
        }
        (num, den)
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        if self.is_zero() || other.is_zero() {
            return Self::from_scalar(BigRational::zero());
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (g, &e) in &other.factors {
            out.bump(g.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> Result<FactoredRational, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivideByZeroScalar);
        }
        Ok(FactoredRational {
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(g, &e)| (g.clone(), -e)).collect(),
        })
    }

    pub fn div(&self, other: &FactoredRational) -> Result<FactoredRational, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<FactoredRational, ExactError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 { Self::one() } else { self.clone() });
        }
        Ok(FactoredRational {
            scalar: pow_signed(&self.scalar, e),
            factors: self
                .factors
                .iter()
                .filter(|_| e != 0)
                .map(|(g, &k)| (g.clone(), k * e))
                .collect(),
        })
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ExactError> {
        let mut num = self.scalar.clone();
        let mut den = BigRational::one();
        for (g, &e) in &self.factors {
            let v = g.eval(point);
            if e > 0 {
                num *= pow_signed(&v, e);
            } else {
                if v.is_zero() {
                    return Err(ExactError::ZeroDenominatorAtPoint);
                }
                den *= pow_signed(&v, -e);
            }
        }
        Ok(num / den)
    }

    /// Expands into a canonical rational function over `nvars` variables.
    pub fn expand(&self, nvars: usize) -> RationalFunction {
        if self.is_zero() {
            return RationalFunction::zero(nvars);
        }
        let num_forms: Vec<(&LinearForm, u32)> = self
            .factors
            .iter()
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| (g, e as u32))
            .collect();
        let den: BTreeMap<LinearForm, u32> = self
            .factors
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(g, &e)| (g.clone(), (-e) as u32))
            .collect();
        let num = expand_forms(nvars, num_forms.iter().map(|(g, e)| (*g, *e)))
            .scale(&self.scalar);
        RationalFunction::from_factored_den(num, BigRational::one(), den)
    }
}

/// Expands `Π f^e` into a polynomial. Canonical forms have integer
/// coefficients, so the expansion runs over the integers.
pub(crate) fn expand_forms<'a>(
    nvars: usize,
    forms: impl IntoIterator<Item = (&'a LinearForm, u32)>,
) -> MultiPoly {
    let mut int_factors = Vec::new();
    let mut rational = MultiPoly::one(nvars);
    for (f, e) in forms {
        match f.integer_terms() {
            Some(t) => int_factors.extend(std::iter::repeat_n(t, e as usize)),
            None => {
                for _ in 0..e {
                    rational = rational.mul_linear(f);
                }
            }
        }
    }
    let expanded = expand_integer_product(vec![(Monomial::ONE, BigInt::one())], &int_factors);
    MultiPoly::from_integer_terms(nvars, expanded, &BigRational::one()).mul(&rational)
}

fn pow_signed(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    fn e1() -> LinearForm {
        LinearForm::var(0)
    }

    fn e2() -> LinearForm {
        LinearForm::var(1)
    }

    #[test]
    fn cancellation_to_one() {
        let x = FactoredRational::from_form(&e1(), 1).unwrap();
        let y = FactoredRational::from_form(&e1(), -1).unwrap();
        assert_eq!(x.mul(&y), FactoredRational::one());
    }

    #[test]
    fn scalar_collects_from_forms() {
        let x = FactoredRational::from_form(&e1().scale(&q(2)), 1).unwrap();
        let y = FactoredRational::from_form(&e2(), 1).unwrap();
        let p = x.mul(&y);
        assert_eq!(p.scalar(), &q(2));
        let fs: Vec<_> = p.factors().map(|(g, e)| (g.clone(), e)).collect();
        assert_eq!(fs, vec![(e2(), 1), (e1(), 1)].into_iter().rev().collect::<Vec<_>>());
    }

    #[test]
    fn exponent_arithmetic() {
        let s = e1().add(&e2());
        let num = FactoredRational::from_forms([&s, &s], [&e1()]).unwrap();
        let den = FactoredRational::from_forms([&s], [&e1()]).unwrap();
        assert_eq!(num.div(&den).unwrap(), FactoredRational::from_form(&s, 1).unwrap());
        assert!(matches!(
            num.div(&FactoredRational::from_scalar(q(0))),
            Err(ExactError::DivideByZeroScalar)
        ));
    }

    #[test]
    fn expand_examples() {
        // 3 e1 / e2
        let x = FactoredRational::from_forms([&e1()], [&e2()])
            .unwrap()
            .mul(&FactoredRational::from_scalar(q(3)));
        let rf = x.expand(2);
        let expected = RationalFunction::from_parts(
            MultiPoly::var(2, 0).scale(&q(3)),
            MultiPoly::var(2, 1),
        )
        .unwrap();
        assert!(rf.symbolic_eq(&expected));
        // (e1 + e2)^2
        let s = e1().add(&e2());
        let rf = FactoredRational::from_form(&s, 2).unwrap().expand(2);
        assert_eq!(rf.num(), &s.to_poly(2).pow(2));
        assert!(rf.den().constant_value().unwrap().is_one());
        // -1
        let rf = FactoredRational::from_scalar(q(-1)).expand(2);
        assert_eq!(rf.num().constant_value(), Some(q(-1)));
    }

    #[test]
    fn eval_matches_expansion() {
        let s = e1().add(&e2().scale(&q(3)));
        let x = FactoredRational::from_forms([&s, &e2()], [&e1(), &e1()]).unwrap();
        let pt = [q(5), q(-2)];
        let direct = x.eval(&pt).unwrap();
        assert_eq!(direct, x.expand(2).eval(&pt).unwrap());
        assert!(matches!(
            x.eval(&[q(0), q(1)]),
            Err(ExactError::ZeroDenominatorAtPoint)
        ));
    }
}
