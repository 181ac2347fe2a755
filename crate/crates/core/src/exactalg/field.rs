//! The coefficient-field abstraction shared by exact scalars and rational
//! functions, so identities can be checked either symbolically or at
//! sampled points with the same code.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratfun::RationalFunction;
use super::ExactError;

pub trait Field: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn rational_like(&self, q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn over(&self, other: &Self) -> Result<Self, ExactError>;
    /// Exact equality in the field.
    fn same(&self, other: &Self) -> bool;

    fn scaled(&self, q: &BigRational) -> Self {
        self.times(&self.rational_like(q))
    }
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn over(&self, other: &Self) -> Result<Self, ExactError> {
        if Zero::is_zero(other) {
            return Err(ExactError::DivideByZero);
        }
        Ok(self / other)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn scaled(&self, q: &BigRational) -> Self {
        self * q
    }
}

impl Field for RationalFunction {
    fn zero_like(&self) -> Self {
        RationalFunction::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RationalFunction::one(self.nvars())
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        RationalFunction::constant(self.nvars(), q.clone())
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn over(&self, other: &Self) -> Result<Self, ExactError> {
        self.div(other)
    }
    fn same(&self, other: &Self) -> bool {
        self.symbolic_eq(other)
    }
    fn scaled(&self, q: &BigRational) -> Self {
        self.scale(q)
    }
}
