//! Truncated power series in `q` over an exact coefficient field.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactalg::{ExactError, Field, RationalFunction, RationalFunctionJson, VarTable};
use crate::localization::{alpha_n, psi_other, Context, LocalizationError, PsiKind, Workers};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term must be {0}")]
    BadConstantTerm(&'static str),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

fn int(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `c₀ + c₁q + … + c_N q^N`; there is always at least one coefficient.
#[derive(Clone, Debug)]
pub struct QSeries<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> QSeries<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        QSeries { coeffs }
    }

    pub fn from_fn<E>(order: usize, f: impl FnMut(usize) -> Result<F, E>) -> Result<Self, E> {
        Ok(QSeries::new((0..=order).map(f).collect::<Result<_, _>>()?))
    }

    /// `c` as a constant series of the given order.
    pub fn constant(c: F, order: usize) -> Self {
        let z = c.zero_like();
        let mut coeffs = vec![z; order + 1];
        coeffs[0] = c;
        QSeries { coeffs }
    }

    /// `c₀ + c₁ q` to the given order.
    pub fn linear(c0: F, c1: F, order: usize) -> Self {
        let mut s = Self::constant(c0, order);
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    fn zero_coeff(&self) -> F {
        self.coeffs[0].zero_like()
    }

    pub fn map(&self, f: impl FnMut(&F) -> F) -> Self {
        QSeries::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<E>(&self, f: impl FnMut(&F) -> Result<F, E>) -> Result<Self, E> {
        Ok(QSeries::new(self.coeffs.iter().map(f).collect::<Result<_, _>>()?))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries::new((0..=n).map(|k| self.coeffs[k].plus(&other.coeffs[k])).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries::new((0..=n).map(|k| self.coeffs[k].minus(&other.coeffs[k])).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(F::negated)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(self.zero_coeff(), |acc, i| {
                    let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.plus(&a.times(b))
                    }
                })
            })
            .collect();
        QSeries::new(coeffs)
    }

    /// `self / other`; needs an invertible constant term in `other`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if other.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm("nonzero"));
        }
        let n = self.order().min(other.order());
        let mut out: Vec<F> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                if !other.coeffs[i].is_zero() {
                    acc = acc.minus(&other.coeffs[i].times(&out[k - i]));
                }
            }
            out.push(acc.over(&other.coeffs[0])?);
        }
        Ok(QSeries::new(out))
    }

    /// `log(self)` for constant term 1, via `k L_k = k f_k − Σ_{j<k} j L_j f_{k−j}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let one = self.coeffs[0].one_like();
        if !self.coeffs[0].same(&one) {
            return Err(SeriesError::BadConstantTerm("1"));
        }
        let n = self.order();
        let mut out = vec![self.zero_coeff()];
        for k in 1..=n {
            let mut acc = self.coeffs[k].scaled(&int(k));
            for j in 1..k {
                if !out[j].is_zero() && !self.coeffs[k - j].is_zero() {
                    acc = acc.minus(&out[j].times(&self.coeffs[k - j]).scaled(&int(j)));
                }
            }
            out.push(acc.scaled(&int(k).recip()));
        }
        Ok(QSeries::new(out))
    }

    /// `exp(self)` for constant term 0, via `k E_k = Σ_{j≤k} j g_j E_{k−j}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm("0"));
        }
        let n = self.order();
        let mut out = vec![self.coeffs[0].one_like()];
        for k in 1..=n {
            let mut acc = self.zero_coeff();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc.plus(&self.coeffs[j].times(&out[k - j]).scaled(&int(j)));
                }
            }
            out.push(acc.scaled(&int(k).recip()));
        }
        Ok(QSeries::new(out))
    }

    /// `(1 − s q)^u = Σ_k (−s)^k u(u−1)⋯(u−k+1)/k! q^k` with `s = ±1`.
    pub fn binom_pow(s: i8, u: &F, order: usize) -> Self {
        assert!(s == 1 || s == -1, "sign must be ±1");
        let mut coeffs = vec![u.one_like()];
        let mut falling = u.one_like();
        for k in 1..=order {
            let factor = u.minus(&u.rational_like(&int(k - 1)));
            falling = falling.times(&factor).scaled(&int(k).recip());
            coeffs.push(if s == 1 && k % 2 == 1 { falling.negated() } else { falling.clone() });
        }
        QSeries::new(coeffs)
    }

    /// `f(q) ↦ f(q^step)`, truncated at the same order.
    pub fn dilate(&self, step: usize) -> Self {
        assert!(step >= 1, "dilation step must be positive");
        let n = self.order();
        let mut coeffs = vec![self.zero_coeff(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * step > n {
                break;
            }
            coeffs[k * step] = c.clone();
        }
        QSeries::new(coeffs)
    }

    /// Index of the first coefficient that differs, up to the common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| !self.coeffs[k].same(&other.coeffs[k]))
    }

    pub fn same(&self, other: &Self) -> bool {
        self.order() == other.order() && self.first_mismatch(other).is_none()
    }
}

impl QSeries<RationalFunction> {
    pub fn to_json(&self, vars: &VarTable) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self
                .coeffs
                .iter()
                .map(|c| serde_json::to_value(RationalFunctionJson::from_rf(c, vars)).expect("serializable"))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<(Self, VarTable), ExactError> {
        let bad = |m: &str| ExactError::Json(m.to_string());
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("missing order"))?;
        let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
        if coeffs.len() as u64 != order + 1 {
            return Err(bad("coefficient count does not match order"));
        }
        let mut vars = None;
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            let j: RationalFunctionJson = serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?;
            let (rf, vt) = j.to_rf()?;
            if vars.as_ref().is_some_and(|v: &VarTable| v.names() != vt.names()) {
                return Err(bad("coefficients over different variables"));
            }
            vars = Some(vt);
            out.push(rf);
        }
        Ok((QSeries::new(out), vars.expect("at least one coefficient")))
    }
}

/// Which partition function to assemble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZVariant {
    /// `Σ α_n qⁿ` with the first `flavors` flavors.
    Standard { flavors: usize },
    /// The same with `ε ↦ −ε`.
    NegatedEps { flavors: usize },
    Psi(PsiKind),
}

/// Symbolic partition function to order `order`.
pub fn assemble_z(
    ctx: &Context,
    order: usize,
    variant: &ZVariant,
    workers: &Workers,
) -> Result<QSeries<RationalFunction>, SeriesError> {
    QSeries::from_fn(order, |n| -> Result<RationalFunction, SeriesError> {
        Ok(match variant {
            ZVariant::Standard { flavors } => alpha_n(ctx, n, *flavors, workers)?,
            ZVariant::NegatedEps { flavors } => {
                alpha_n(ctx, n, *flavors, workers)?.substitute(&ctx.negate_eps())?
            }
            ZVariant::Psi(kind) => psi_other(ctx, n, kind, workers)?,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::MultiPoly;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn s(v: &[(i64, i64)]) -> QSeries<BigRational> {
        QSeries::new(v.iter().map(|&(p, d)| q(p, d)).collect())
    }

    #[test]
    fn log_of_one_plus_q() {
        let x = s(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert!(x.log().unwrap().same(&s(&[(0, 1), (1, 1), (-1, 2), (1, 3)])));
    }

    #[test]
    fn product_and_quotient() {
        let a = s(&[(1, 1), (1, 1), (0, 1)]);
        let b = s(&[(1, 1), (-1, 1), (0, 1)]);
        let p = a.mul(&b);
        assert!(p.same(&s(&[(1, 1), (0, 1), (-1, 1)])));
        assert!(p.div(&b).unwrap().same(&a));
        assert!(matches!(a.div(&s(&[(0, 1), (1, 1), (0, 1)])), Err(SeriesError::BadConstantTerm(_))));
    }

    #[test]
    fn exp_log_round_trip_over_functions() {
        let nv = 2;
        let alpha = RationalFunction::from_parts(MultiPoly::var(nv, 0), MultiPoly::var(nv, 1)).unwrap();
        let x = QSeries::linear(RationalFunction::one(nv), alpha, 4);
        assert!(x.log().unwrap().exp().unwrap().same(&x));
        assert!(matches!(x.exp(), Err(SeriesError::BadConstantTerm(_))));
    }

    #[test]
    fn binomial_powers() {
        let one = q(1, 1);
        assert!(QSeries::binom_pow(1, &one, 2).same(&s(&[(1, 1), (-1, 1), (0, 1)])));
        let u = q(5, 3);
        assert_eq!(QSeries::binom_pow(1, &u, 1).coeff(1), &-u.clone());
        // log((1 − sq)^u) = u log(1 − sq)
        for sign in [1i8, -1] {
            let lhs = QSeries::binom_pow(sign, &u, 6).log().unwrap();
            let base = QSeries::linear(one.clone(), q(-(sign as i64), 1), 6).log().unwrap();
            assert!(lhs.same(&base.scale(&u)));
        }
    }

    #[test]
    fn dilation() {
        let x = s(&[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1)]);
        assert!(x.dilate(2).same(&s(&[(1, 1), (0, 1), (2, 1), (0, 1), (3, 1)])));
    }

    #[test]
    fn json_round_trip() {
        let ctx = Context::new(1).unwrap();
        let z = assemble_z(&ctx, 2, &ZVariant::Standard { flavors: 2 }, &Workers::new(1)).unwrap();
        let j = z.to_json(ctx.vars());
        let (back, vars) = QSeries::from_json(&j).unwrap();
        assert_eq!(vars.names(), ctx.vars().names());
        assert!(back.same(&z));
        assert_eq!(back.to_json(&vars), j);
    }
}
