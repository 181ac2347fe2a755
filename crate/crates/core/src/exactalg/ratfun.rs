//! Rational functions `num / den` over big rationals.
//!
//! There is no multivariate gcd. The canonical form fixes the scalar
//! freedom (the leading coefficient of `den` is 1) and cancels common
//! monomials. When the denominator is known as a product of linear forms
//! (always the case for localization sums) that factorization is carried
//! along and numerator factors are cancelled by exact trial division.
//! Equality is decided by cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factored::expand_forms;
use super::linear::{LinearForm, Substitution, VarIndex, VarTable};
use super::modp;
use super::monomial::Monomial;
use super::poly::{div_unit_linear, MultiPoly};
use super::ExactError;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
    /// When present, `den = Π f^e / lc(Π f^e)`.
    den_factors: Option<BTreeMap<LinearForm, u32>>,
}

fn leading_coeff_of_form(f: &LinearForm) -> BigRational {
    match f.terms().next() {
        Some((_, c)) => c.clone(),
        None => f.constant_term().clone(),
    }
}

fn factor_lc(factors: &BTreeMap<LinearForm, u32>) -> BigRational {
    let mut lc = BigRational::one();
    for (f, &e) in factors {
        lc *= num_traits::pow(leading_coeff_of_form(f), e as usize);
    }
    lc
}

/// `a / b` on exponent maps, assuming `b ≤ a` entry-wise.
fn cofactor(a: &BTreeMap<LinearForm, u32>, b: &BTreeMap<LinearForm, u32>) -> Vec<(LinearForm, u32)> {
    a.iter()
        .filter_map(|(f, &e)| {
            let k = e - b.get(f).copied().unwrap_or(0);
            (k > 0).then(|| (f.clone(), k))
        })
        .collect()
}

fn lcm_map(a: &BTreeMap<LinearForm, u32>, b: &BTreeMap<LinearForm, u32>) -> BTreeMap<LinearForm, u32> {
    let mut out = a.clone();
    for (f, &e) in b {
        let slot = out.entry(f.clone()).or_insert(0);
        *slot = (*slot).max(e);
    }
    out
}

fn mul_by_forms(p: &MultiPoly, forms: &[(LinearForm, u32)]) -> MultiPoly {
    if forms.is_empty() || p.is_zero() {
        return p.clone();
    }
    p.mul(&expand_forms(p.nvars(), forms.iter().map(|(f, e)| (f, *e))))
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: MultiPoly::zero(nvars),
            den: MultiPoly::one(nvars),
            den_factors: Some(BTreeMap::new()),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let nvars = num.nvars();
        RationalFunction {
            num,
            den: MultiPoly::one(nvars),
            den_factors: Some(BTreeMap::new()),
        }
    }

    pub fn from_linear(nvars: usize, f: &LinearForm) -> Self {
        Self::from_poly(f.to_poly(nvars))
    }

    /// `num / den` in canonical form.
    pub fn from_parts(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivideByZero);
        }
        assert_eq!(num.nvars(), den.nvars(), "numerator and denominator rings differ");
        let den_factors = monomial_factors(&den);
        let mut rf = RationalFunction {
            num,
            den,
            den_factors: None,
        };
        if let Some((scale, factors)) = den_factors {
            rf = Self::from_factored_den(rf.num, scale.recip(), factors);
        } else {
            rf.normalize();
        }
        Ok(rf)
    }

    /// `num · scale / Π f^e`.
    pub fn from_factored_den(num: MultiPoly, scale: BigRational, factors: BTreeMap<LinearForm, u32>) -> Self {
        let nvars = num.nvars();
        debug_assert!(factors.keys().all(LinearForm::is_canonical));
        let num = if scale.is_one() { num } else { num.scale(&scale) };
        let mut rf = RationalFunction {
            num,
            den: MultiPoly::one(nvars),
            den_factors: Some(factors.into_iter().filter(|(_, e)| *e > 0).collect()),
        };
        rf.normalize();
        rf
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn den_factors(&self) -> Option<&BTreeMap<LinearForm, u32>> {
        self.den_factors.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    /// Numerator relative to the bare product of denominator factors:
    /// `self = raw / Π f^e`.
    fn raw_num(&self) -> MultiPoly {
        let map = self.den_factors.as_ref().expect("factored denominator");
        let lc = factor_lc(map);
        if lc.is_one() {
            self.num.clone()
        } else {
            self.num.scale(&lc)
        }
    }

    fn normalize(&mut self) {
        let nvars = self.nvars();
        if self.num.is_zero() {
            *self = Self::zero(nvars);
            return;
        }
        if let Some(map) = self.den_factors.take() {
            // `num` is relative to the bare product Π f^e here
            let (num, map) = cancel_linear_factors(std::mem::replace(&mut self.num, MultiPoly::zero(nvars)), map);
            let raw_den = expand_forms(nvars, map.iter().map(|(f, e)| (f, *e)));
            let lc = raw_den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
            let inv = lc.recip();
            self.num = num.scale(&inv);
            self.den = raw_den.scale(&inv);
            self.den_factors = Some(map);
        } else {
            let g = self.num.monomial_content().gcd(self.den.monomial_content());
            if !g.is_one() {
                self.num = self.num.div_monomial(g).expect("content divides");
                self.den = self.den.div_monomial(g).expect("content divides");
            }
            let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
            if !lc.is_one() {
                let inv = lc.recip();
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
    }

    /// Re-runs canonicalization; idempotent.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        if out.den_factors.is_some() {
            out.num = out.raw_num();
        }
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
            den_factors: self.den_factors.clone(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
            den_factors: self.den_factors.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "rational functions over different rings");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Some(ma), Some(mb)) = (&self.den_factors, &other.den_factors) {
            let l = lcm_map(ma, mb);
            let left = mul_by_forms(&self.raw_num(), &cofactor(&l, ma));
            let right = mul_by_forms(&other.raw_num(), &cofactor(&l, mb));
            return Self::from_factored_den(left.add(&right), BigRational::one(), l);
        }
        if self.den == other.den {
            let mut out = RationalFunction {
                num: self.num.add(&other.num),
                den: self.den.clone(),
                den_factors: None,
            };
            out.normalize();
            return out;
        }
        let g = self.den.monomial_content().gcd(other.den.monomial_content());
        let da = self.den.div_monomial(g).expect("content divides");
        let db = other.den.div_monomial(g).expect("content divides");
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = da.mul(&db).mul_monomial(g, &BigRational::one());
        let mut out = RationalFunction {
            num,
            den,
            den_factors: None,
        };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "rational functions over different rings");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        if let (Some(ma), Some(mb)) = (&self.den_factors, &other.den_factors) {
            let mut map = ma.clone();
            for (f, &e) in mb {
                *map.entry(f.clone()).or_insert(0) += e;
            }
            return Self::from_factored_den(self.raw_num().mul(&other.raw_num()), BigRational::one(), map);
        }
        let mut out = RationalFunction {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
            den_factors: None,
        };
        out.normalize();
        out
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivideByZero);
        }
        let nvars = self.nvars();
        if let Some((scale, factors)) = monomial_factors(&self.num) {
            // numerator is c·monomial: the inverse keeps a factored denominator
            let raw = match &self.den_factors {
                Some(map) => expand_forms(nvars, map.iter().map(|(f, e)| (f, *e))),
                None => self.den.clone(),
            };
            let lc_num = if self.den_factors.is_some() {
                // self = raw_num/Π, so 1/self = Π/raw_num and raw_num = num·lcΠ
                factor_lc(self.den_factors.as_ref().unwrap())
            } else {
                BigRational::one()
            };
            return Ok(Self::from_factored_den(raw, (scale * lc_num).recip(), factors));
        }
        let mut out = RationalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
            den_factors: None,
        };
        out.normalize();
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ExactError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ExactError::ZeroDenominatorAtPoint);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Self, ExactError> {
        if let Some(map) = &self.den_factors {
            let mut scale = factor_lc(map);
            let mut out_map: BTreeMap<LinearForm, u32> = BTreeMap::new();
            for (f, &e) in map {
                let (g, c) = f
                    .substitute(sub)
                    .canonical()
                    .map_err(|_| ExactError::ZeroDenominatorAfterSubstitution)?;
                scale /= num_traits::pow(c, e as usize);
                *out_map.entry(g).or_insert(0) += e;
            }
            let num = self.num.substitute(sub);
            return Ok(Self::from_factored_den(num, scale, out_map));
        }
        let den = self.den.substitute(sub);
        if den.is_zero() {
            return Err(ExactError::ZeroDenominatorAfterSubstitution);
        }
        Self::from_parts(self.num.substitute(sub), den)
    }

    /// Exact equality by cross-multiplication.
    pub fn symbolic_eq(&self, other: &Self) -> bool {
        assert_eq!(self.nvars(), other.nvars(), "rational functions over different rings");
        if let (Some(ma), Some(mb)) = (&self.den_factors, &other.den_factors) {
            let l = lcm_map(ma, mb);
            let left = mul_by_forms(&self.raw_num(), &cofactor(&l, ma));
            let right = mul_by_forms(&other.raw_num(), &cofactor(&l, mb));
            return left == right;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Highest power of `x_v` in the numerator together with its coefficient,
    /// for a denominator free of `x_v`.
    pub fn leading_coefficient_in(&self, v: VarIndex) -> Result<(u32, Self), ExactError> {
        if self.den.degree_in(v) > 0 {
            return Err(ExactError::VariableInDenominator(v));
        }
        let d = self.num.degree_in(v);
        let c = self.num.coefficient_in(v, d);
        let out = RationalFunction {
            num: c,
            den: self.den.clone(),
            den_factors: self.den_factors.clone(),
        };
        Ok((d, out.canonical()))
    }

    /// Coefficient of `x_v^k` in the numerator over the same denominator,
    /// for a denominator free of `x_v`.
    pub fn coefficient_in(&self, v: VarIndex, k: u32) -> Result<Self, ExactError> {
        if self.den.degree_in(v) > 0 {
            return Err(ExactError::VariableInDenominator(v));
        }
        let out = RationalFunction {
            num: self.num.coefficient_in(v, k),
            den: self.den.clone(),
            den_factors: self.den_factors.clone(),
        };
        Ok(out.canonical())
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> DisplayRational<'a> {
        DisplayRational { rf: self, vars }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.symbolic_eq(other)
    }
}

/// Factorization of a single-term polynomial `c·Π x_v^{e_v}`.
fn monomial_factors(p: &MultiPoly) -> Option<(BigRational, BTreeMap<LinearForm, u32>)> {
    match p.terms() {
        [(m, c)] => {
            let mut map = BTreeMap::new();
            for v in 0..p.nvars() {
                let e = m.exponent(v);
                if e > 0 {
                    map.insert(LinearForm::var(v), e);
                }
            }
            Some((c.clone(), map))
        }
        _ => None,
    }
}

/// Divides `num` by as many denominator factors as divide it exactly.
fn cancel_linear_factors(
    mut num: MultiPoly,
    mut map: BTreeMap<LinearForm, u32>,
) -> (MultiPoly, BTreeMap<LinearForm, u32>) {
    if map.is_empty() || num.is_constant() {
        return (num, map);
    }
    // plain variables first: monomial content is free to read off
    let content = num.monomial_content();
    if !content.is_one() {
        let mut take = Monomial::ONE;
        for (f, e) in map.iter_mut() {
            let Some(v) = single_var(f) else { continue };
            let k = content.exponent(v).min(*e);
            if k > 0 {
                take = take.mul(Monomial::var_pow(v, k));
                *e -= k;
            }
        }
        if !take.is_one() {
            num = num.div_monomial(take).expect("content divides");
        }
    }
    let nvars = num.nvars();
    let (mut ints, mut scale) = num.integer_terms();
    let mut residues = modp::int_residues(&ints);
    for (f, e) in map.iter_mut() {
        if single_var(f).is_some() {
            continue;
        }
        let mut salt = 0u64;
        while *e > 0 {
            if modp::surely_not_divisible(&ints, nvars, &residues, f, salt) {
                break;
            }
            salt += 1;
            let quotient = match div_unit_linear(&ints, f) {
                Some(q) => q,
                None => MultiPoly::from_integer_terms(nvars, ints.clone(), &BigRational::one())
                    .div_linear(f)
                    .map(|q| {
                        let (q, s) = q.integer_terms();
                        scale *= s;
                        q
                    }),
            };
            match quotient {
                Some(q) => {
                    ints = q;
                    *e -= 1;
                    residues = modp::int_residues(&ints);
                }
                None => break,
            }
        }
    }
    let num = MultiPoly::from_integer_terms(nvars, ints, &scale);
    map.retain(|_, e| *e > 0);
    (num, map)
}

fn single_var(f: &LinearForm) -> Option<VarIndex> {
    let mut it = f.terms();
    let (v, c) = it.next()?;
    (it.next().is_none() && f.constant_term().is_zero() && c.is_one()).then_some(v)
}

pub struct DisplayRational<'a> {
    rf: &'a RationalFunction,
    vars: &'a VarTable,
}

impl fmt::Display for DisplayRational<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.rf.num.display(self.vars);
        if self.rf.den.constant_value().is_some_and(|c| c.is_one()) {
            return write!(f, "{num}");
        }
        match &self.rf.den_factors {
            Some(map) if !map.is_empty() => {
                let lc = factor_lc(map);
                write!(f, "({num})")?;
                if !lc.is_one() {
                    write!(f, "*{lc}")?;
                }
                write!(f, "/(")?;
                for (i, (g, e)) in map.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "({})", g.display(self.vars))?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
                write!(f, ")")
            }
            _ => write!(f, "({num})/({})", self.rf.den.display(self.vars)),
        }
    }
}
