//! Affine-linear forms over the equivariant variables, variable tables and
//! linear substitutions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MAX_VARS};
use super::poly::MultiPoly;
use super::ExactError;

/// Index into a [`VarTable`].
pub type VarIndex = usize;

/// Ordered list of variable names shared by every polynomial of one
/// computation context.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarTable {
    names: Arc<Vec<String>>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert!(
            names.len() <= MAX_VARS,
            "at most {MAX_VARS} variables are supported, got {}",
            names.len()
        );
        VarTable {
            names: Arc::new(names),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarIndex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<VarIndex> {
        self.names.iter().position(|n| n == name)
    }
}

/// `constant + Σ coeffs[v]·x_v` with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LinearForm {
    constant: BigRational,
    coeffs: BTreeMap<VarIndex, BigRational>,
}

impl Default for LinearForm {
    fn default() -> Self {
        Self::zero()
    }
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm {
            constant: BigRational::zero(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        LinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(v: VarIndex) -> Self {
        Self::zero().with_term(v, BigRational::one())
    }

    /// Convenience constructor from small integer/fraction data:
    /// `terms` are `(var, numerator, denominator)`.
    pub fn from_terms(constant: BigRational, terms: &[(VarIndex, i64, i64)]) -> Self {
        let mut f = LinearForm::constant(constant);
        for &(v, p, q) in terms {
            f.add_term(v, &BigRational::new(p.into(), q.into()));
        }
        f
    }

    pub fn with_term(mut self, v: VarIndex, c: BigRational) -> Self {
        self.add_term(v, &c);
        self
    }

    pub fn add_term(&mut self, v: VarIndex, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.constant
    }

    pub fn coeff(&self, v: VarIndex) -> BigRational {
        self.coeffs.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarIndex, &BigRational)> {
        self.coeffs.iter().map(|(&v, c)| (v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<VarIndex> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (&v, c) in &other.coeffs {
            out.add_term(v, c);
        }
        out
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|(&v, c)| (v, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> LinearForm {
        if s.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            constant: &self.constant * s,
            coeffs: self.coeffs.iter().map(|(&v, c)| (v, c * s)).collect(),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = self.constant.clone();
        for (&v, c) in &self.coeffs {
            acc += c * &point[v];
        }
        acc
    }

    /// Replaces every variable by its image under `sub`.
    pub fn substitute(&self, sub: &Substitution) -> LinearForm {
        let mut out = LinearForm::constant(self.constant.clone());
        for (&v, c) in &self.coeffs {
            out = out.add(&sub.image(v).scale(c));
        }
        out
    }

    /// Splits `self = scale · canonical` where the canonical form has
    /// coprime integer coefficients and a positive leading coefficient.
    /// The leading coefficient is the one of the lowest-indexed variable,
    /// or the constant when no variable occurs.
    pub fn canonical(&self) -> Result<(LinearForm, BigRational), ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroForm);
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.coeffs.values().chain(std::iter::once(&self.constant)) {
            if c.is_zero() {
                continue;
            }
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        // content = gcd(numerators) / lcm(denominators)
        let mut content = BigRational::new(num_gcd, den_lcm);
        let leading = match self.coeffs.values().next() {
            Some(c) => c,
            None => &self.constant,
        };
        if leading.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        Ok((self.scale(&inv), content))
    }

    pub fn is_canonical(&self) -> bool {
        match self.canonical() {
            Ok((_, s)) => s.is_one(),
            Err(_) => false,
        }
    }

    /// The form as a degree-≤1 polynomial.
    pub fn to_poly(&self, nvars: usize) -> MultiPoly {
        let mut terms: Vec<(Monomial, BigRational)> = Vec::with_capacity(self.coeffs.len() + 1);
        if !self.constant.is_zero() {
            terms.push((Monomial::ONE, self.constant.clone()));
        }
        // ascending packed order: higher variable index is smaller
        for (&v, c) in self.coeffs.iter().rev() {
            assert!(v < nvars, "variable {v} outside a {nvars}-variable ring");
            terms.push((Monomial::var(v), c.clone()));
        }
        MultiPoly::from_sorted_terms(nvars, terms)
    }

    /// Integer terms of a form whose coefficients are all integers, sorted
    /// ascending in the monomial order. Returns `None` for fractional forms.
    pub(crate) fn integer_terms(&self) -> Option<Vec<(Monomial, BigInt)>> {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        if !self.constant.is_zero() {
            if !self.constant.is_integer() {
                return None;
            }
            out.push((Monomial::ONE, self.constant.to_integer()));
        }
        for (&v, c) in self.coeffs.iter().rev() {
            if !c.is_integer() {
                return None;
            }
            out.push((Monomial::var(v), c.to_integer()));
        }
        Some(out)
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> DisplayLinear<'a> {
        DisplayLinear { form: self, vars }
    }
}

pub struct DisplayLinear<'a> {
    form: &'a LinearForm,
    vars: &'a VarTable,
}

impl fmt::Display for DisplayLinear<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.form.terms() {
            let name = self.vars.name(v);
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if abs.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{abs}*{name}")?;
            }
            first = false;
        }
        let c = self.form.constant_term();
        if first {
            write!(f, "{c}")?;
        } else if !c.is_zero() {
            write!(f, " {} {}", if c.is_negative() { "-" } else { "+" }, c.abs())?;
        }
        Ok(())
    }
}

/// A map sending each variable to a linear form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    images: Vec<LinearForm>,
}

impl Substitution {
    pub fn identity(nvars: usize) -> Self {
        Substitution {
            images: (0..nvars).map(LinearForm::var).collect(),
        }
    }

    pub fn from_images(images: Vec<LinearForm>) -> Self {
        Substitution { images }
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn with(mut self, v: VarIndex, image: LinearForm) -> Self {
        self.images[v] = image;
        self
    }

    /// `x_v ↦ -x_v` for every listed variable.
    pub fn negating(nvars: usize, vars: impl IntoIterator<Item = VarIndex>) -> Self {
        let mut s = Self::identity(nvars);
        for v in vars {
            s.images[v] = LinearForm::var(v).neg();
        }
        s
    }

    /// `x_v ↦ x_{perm[v]}`.
    pub fn permuting(perm: &[VarIndex]) -> Self {
        Substitution {
            images: perm.iter().map(|&w| LinearForm::var(w)).collect(),
        }
    }

    pub fn image(&self, v: VarIndex) -> &LinearForm {
        &self.images[v]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(v, f)| *f == LinearForm::var(v))
    }

    /// `(self ∘ inner)(x) = self(inner(x))`: apply `inner` first.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        Substitution {
            images: inner.images.iter().map(|f| f.substitute(self)).collect(),
        }
    }

    /// The point `p'` with `f(p') = (f ∘ self)(p)`, i.e. `p'_v = image_v(p)`.
    pub fn apply_to_point(&self, point: &[BigRational]) -> Vec<BigRational> {
        self.images.iter().map(|f| f.eval(point)).collect()
    }

    /// When every image is `c·x_w` for a single variable, returns the
    /// `(w, c)` pairs; such substitutions act term-wise on polynomials.
    pub(crate) fn as_monomial_map(&self) -> Option<Vec<(VarIndex, BigRational)>> {
        self.images
            .iter()
            .map(|f| {
                if !f.constant_term().is_zero() || f.coeffs.len() != 1 {
                    return None;
                }
                let (&w, c) = f.coeffs.iter().next()?;
                Some((w, c.clone()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn canonical_examples() {
        // 2e1 + 2e2 -> (e1 + e2, 2)
        let f = LinearForm::from_terms(q(0, 1), &[(0, 2, 1), (1, 2, 1)]);
        let (g, c) = f.canonical().unwrap();
        assert_eq!(g, LinearForm::from_terms(q(0, 1), &[(0, 1, 1), (1, 1, 1)]));
        assert_eq!(c, q(2, 1));
        // -e1 -> (e1, -1)
        let (g, c) = LinearForm::var(0).neg().canonical().unwrap();
        assert_eq!(g, LinearForm::var(0));
        assert_eq!(c, q(-1, 1));
        // e1/2 + m1/2 -> (e1 + m1, 1/2)
        let f = LinearForm::from_terms(q(0, 1), &[(0, 1, 2), (4, 1, 2)]);
        let (g, c) = f.canonical().unwrap();
        assert_eq!(g, LinearForm::from_terms(q(0, 1), &[(0, 1, 1), (4, 1, 1)]));
        assert_eq!(c, q(1, 2));
    }

    #[test]
    fn canonical_rejects_zero_and_is_idempotent() {
        assert!(matches!(
            LinearForm::zero().canonical(),
            Err(ExactError::ZeroForm)
        ));
        let f = LinearForm::from_terms(q(-3, 4), &[(1, -6, 5), (3, 9, 10)]);
        let (g, c) = f.canonical().unwrap();
        assert_eq!(g.scale(&c), f);
        let (g2, c2) = g.canonical().unwrap();
        assert_eq!(g2, g);
        assert!(c2.is_one());
        // proportional inputs share a canonical form
        let (h, _) = f.scale(&q(-7, 3)).canonical().unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn constant_forms_canonicalize_to_one() {
        let (g, c) = LinearForm::constant(q(-5, 2)).canonical().unwrap();
        assert_eq!(g, LinearForm::constant(q(1, 1)));
        assert_eq!(c, q(-5, 2));
    }

    #[test]
    fn substitution_composes() {
        // sigma: x0 -> x0 + x1, tau: x1 -> 2 x0
        let sigma = Substitution::identity(2).with(0, LinearForm::from_terms(q(0, 1), &[(0, 1, 1), (1, 1, 1)]));
        let tau = Substitution::identity(2).with(1, LinearForm::from_terms(q(0, 1), &[(0, 2, 1)]));
        let f = LinearForm::from_terms(q(1, 1), &[(0, 3, 1), (1, -1, 1)]);
        let stepwise = f.substitute(&tau).substitute(&sigma);
        let composed = f.substitute(&sigma.compose(&tau));
        assert_eq!(stepwise, composed);
    }

    #[test]
    fn display_uses_names() {
        let vars = VarTable::new(["e1", "e2", "a1"]);
        let f = LinearForm::from_terms(q(0, 1), &[(2, 1, 1), (0, -1, 2), (1, -3, 2)]);
        assert_eq!(f.display(&vars).to_string(), "-1/2*e1 - 3/2*e2 + a1");
    }
}
