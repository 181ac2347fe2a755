//! Sparse multivariate polynomials with big-rational coefficients.
//!
//! Terms are kept in a vector sorted ascending in the graded lexicographic
//! order, so the leading term is the last one. Multiplying every term by a
//! fixed monomial preserves the order, which lets products be assembled by
//! merging sorted runs instead of hashing.

use std::fmt;
use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linear::{LinearForm, Substitution, VarIndex, VarTable};
use super::monomial::Monomial;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, BigRational)>,
}

/// Merges two ascending term lists, adding coefficients of equal monomials
/// and dropping cancellations.
pub(crate) fn merge_sorted<C>(a: Vec<(Monomial, C)>, b: Vec<(Monomial, C)>) -> Vec<(Monomial, C)>
where
    C: Zero + AddAssign,
{
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ma, _)), Some((mb, _))) => {
                if ma < mb {
                    out.push(ia.next().unwrap());
                } else if mb < ma {
                    out.push(ib.next().unwrap());
                } else {
                    let (m, mut c) = ia.next().unwrap();
                    c += ib.next().unwrap().1;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
            (Some(_), None) => {
                out.extend(ia);
                break;
            }
            (None, Some(_)) => {
                out.extend(ib);
                break;
            }
            (None, None) => break,
        }
    }
    out
}

/// Merges any number of ascending term lists pairwise.
pub(crate) fn merge_many<C>(mut lists: Vec<Vec<(Monomial, C)>>) -> Vec<(Monomial, C)>
where
    C: Zero + AddAssign,
{
    if lists.is_empty() {
        return Vec::new();
    }
    while lists.len() > 1 {
        let mut next = Vec::with_capacity(lists.len().div_ceil(2));
        let mut it = lists.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge_sorted(a, b)),
                None => next.push(a),
            }
        }
        lists = next;
    }
    lists.pop().unwrap()
}

/// Multiplies an ascending term list by a (short) ascending factor.
pub(crate) fn mul_sorted<C>(acc: &[(Monomial, C)], factor: &[(Monomial, C)]) -> Vec<(Monomial, C)>
where
    C: Zero + AddAssign + Clone,
    for<'a> &'a C: Mul<&'a C, Output = C>,
{
    let lists = factor
        .iter()
        .map(|(mf, cf)| {
            acc.iter()
                .map(|(m, c)| (m.mul(*mf), c * cf))
                .collect::<Vec<_>>()
        })
        .collect();
    merge_many(lists)
}

/// Expands `init · Π factors` over the integers.
pub(crate) fn expand_integer_product(
    init: Vec<(Monomial, BigInt)>,
    factors: &[Vec<(Monomial, BigInt)>],
) -> Vec<(Monomial, BigInt)> {
    let mut acc = init;
    for f in factors {
        if acc.is_empty() {
            break;
        }
        if f.len() == 1 {
            let (mf, cf) = &f[0];
            for (m, c) in acc.iter_mut() {
                *m = m.mul(*mf);
                *c *= cf;
            }
        } else {
            acc = mul_sorted(&acc, f);
        }
    }
    acc
}

/// Exact quotient of an integer polynomial by an integral linear form whose
/// leading coefficient is ±1. The outer `None` means the form is not of
/// that shape, the inner one that it does not divide.
pub(crate) fn div_unit_linear(terms: &[(Monomial, BigInt)], f: &LinearForm) -> Option<Option<Vec<(Monomial, BigInt)>>> {
    let (v, c) = f.terms().next()?;
    if !c.is_integer() || !c.numer().magnitude().is_one() {
        return None;
    }
    let negate = c.is_negative();
    let rest: Vec<(Monomial, BigInt)> = f.integer_terms()?.into_iter().filter(|(m, _)| m.exponent(v) == 0).collect();
    if terms.is_empty() {
        return Some(Some(Vec::new()));
    }
    let deg = terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0) as usize;
    if deg == 0 {
        return Some(None);
    }
    let mut groups: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
    for (m, k) in terms {
        let (r, e) = m.split_var(v);
        groups[e as usize].push((r, k.clone()));
    }
    let mut quotient = Vec::with_capacity(deg);
    let mut carry = groups.pop().expect("degree group");
    for k in (0..deg).rev() {
        let qk = if negate { carry.into_iter().map(|(m, x)| (m, -x)).collect() } else { carry };
        let prod: Vec<(Monomial, BigInt)> = mul_sorted(&qk, &rest).into_iter().map(|(m, x)| (m, -x)).collect();
        carry = merge_sorted(std::mem::take(&mut groups[k]), prod);
        quotient.push((k, qk));
    }
    if !carry.is_empty() {
        return Some(None);
    }
    let lists = quotient
        .into_iter()
        .map(|(k, q)| {
            let shift = Monomial::var_pow(v, k as u32);
            q.into_iter().map(|(m, x)| (m.mul(shift), x)).collect()
        })
        .collect();
    Some(Some(merge_many(lists)))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::ONE, c)]
        };
        MultiPoly { nvars, terms }
    }

    pub fn var(nvars: usize, v: VarIndex) -> Self {
        assert!(v < nvars);
        MultiPoly {
            nvars,
            terms: vec![(Monomial::var(v), BigRational::one())],
        }
    }

    /// Trusts the caller that `terms` is strictly ascending; zero
    /// coefficients are dropped.
    pub(crate) fn from_sorted_terms(nvars: usize, mut terms: Vec<(Monomial, BigRational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        terms.retain(|(_, c)| !c.is_zero());
        MultiPoly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly { nvars, terms: out }
    }

    pub(crate) fn from_integer_terms(nvars: usize, terms: Vec<(Monomial, BigInt)>, scale: &BigRational) -> Self {
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                let c = BigRational::from_integer(c);
                (m, if scale.is_one() { c } else { c * scale })
            })
            .collect();
        Self::from_sorted_terms(nvars, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.last()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: VarIndex) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, v: VarIndex, k: u32) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (rest, e) = m.split_var(v);
                (e == k).then(|| (rest, c.clone()))
            })
            .collect();
        MultiPoly::from_sorted_terms(self.nvars, terms)
    }

    /// Greatest monomial dividing every term (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::ONE;
        };
        let mut g = *first;
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(*m);
        }
        g
    }

    pub fn div_monomial(&self, d: Monomial) -> Option<MultiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| m.div(d).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(MultiPoly::from_sorted_terms(self.nvars, terms))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        MultiPoly {
            nvars: self.nvars,
            terms: merge_sorted(self.terms.clone(), other.terms.clone()),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: Monomial, s: &BigRational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_monomial(*m, c);
        }
        let (li, ls) = large.integer_terms();
        let (si, ss) = small.integer_terms();
        Self::from_integer_terms(self.nvars, mul_sorted(&li, &si), &(ls * ss))
    }

    /// `self = scale · Σ c·m` with integer `c`.
    pub(crate) fn integer_terms(&self) -> (Vec<(Monomial, BigInt)>, BigRational) {
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let k = if den.is_one() { c.numer().clone() } else { c.numer() * (&den / c.denom()) };
                (*m, k)
            })
            .collect();
        (terms, BigRational::new(BigInt::one(), den))
    }

    pub fn mul_linear(&self, f: &LinearForm) -> MultiPoly {
        self.mul(&f.to_poly(self.nvars))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert!(point.len() >= self.nvars, "evaluation point has too few coordinates");
        let mut maxdeg = vec![0u32; self.nvars];
        for (m, _) in &self.terms {
            for (v, d) in maxdeg.iter_mut().enumerate() {
                *d = (*d).max(m.exponent(v));
            }
        }
        let powers: Vec<Vec<BigRational>> = maxdeg
            .iter()
            .enumerate()
            .map(|(v, &d)| {
                let mut p = Vec::with_capacity(d as usize + 1);
                p.push(BigRational::one());
                for k in 1..=d as usize {
                    let next = &p[k - 1] * &point[v];
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, pw) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    t *= &pw[e];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact substitution of linear forms for variables.
    pub fn substitute(&self, sub: &Substitution) -> MultiPoly {
        assert_eq!(sub.nvars(), self.nvars, "substitution over a different variable table");
        if let Some(map) = sub.as_monomial_map() {
            let terms = self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0u32; self.nvars];
                let mut coeff = c.clone();
                for (v, (w, s)) in map.iter().enumerate() {
                    let e = m.exponent(v);
                    if e > 0 {
                        exps[*w] += e;
                        if !s.is_one() {
                            coeff *= num_traits::pow(s.clone(), e as usize);
                        }
                    }
                }
                (Monomial::from_exponents(&exps).expect("degree is preserved"), coeff)
            });
            return MultiPoly::from_terms(self.nvars, terms);
        }
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|v| sub.image(v).to_poly(self.nvars))
            .collect();
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(self.nvars), p.clone()])
            .collect();
        let mut lists = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(self.nvars, c.clone());
            for v in 0..self.nvars {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while cache[v].len() <= e {
                    let next = cache[v].last().unwrap().mul(&images[v]);
                    cache[v].push(next);
                }
                t = t.mul(&cache[v][e]);
            }
            lists.push(t.terms);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: merge_many(lists),
        }
    }

    /// Exact quotient by a nonzero linear form, or `None` when the form does
    /// not divide `self`.
    pub fn div_linear(&self, f: &LinearForm) -> Option<MultiPoly> {
        assert!(!f.is_zero(), "division by the zero form");
        let Some((v, c)) = f.terms().next().map(|(v, c)| (v, c.clone())) else {
            return Some(self.scale(&f.constant_term().recip()));
        };
        if self.is_zero() {
            return Some(self.clone());
        }
        let (ints, scale) = self.integer_terms();
        if let Some(q) = div_unit_linear(&ints, f) {
            return q.map(|q| Self::from_integer_terms(self.nvars, q, &scale));
        }
        // f = c·x_v + rest, rest free of x_v
        let rest = f.sub(&LinearForm::var(v).scale(&c)).to_poly(self.nvars);
        let deg = self.degree_in(v) as usize;
        if deg == 0 {
            return None;
        }
        let mut groups: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, coeff) in &self.terms {
            let (r, e) = m.split_var(v);
            groups[e as usize].push((r, coeff.clone()));
        }
        let groups: Vec<MultiPoly> = groups
            .into_iter()
            .map(|t| MultiPoly::from_sorted_terms(self.nvars, t))
            .collect();
        let inv_c = c.recip();
        // synthetic division from the top x_v-degree down
        let mut quotient: Vec<MultiPoly> = vec![MultiPoly::zero(self.nvars); deg];
        let mut carry = groups[deg].clone();
        for k in (1..=deg).rev() {
            let qk = carry.scale(&inv_c);
            carry = groups[k - 1].sub(&rest.mul(&qk));
            quotient[k - 1] = qk;
        }
        if !carry.is_zero() {
            return None;
        }
        let lists = quotient
            .into_iter()
            .enumerate()
            .map(|(k, q)| {
                let shift = Monomial::var_pow(v, k as u32);
                q.terms.into_iter().map(|(m, c)| (m.mul(shift), c)).collect()
            })
            .collect();
        Some(MultiPoly {
            nvars: self.nvars,
            terms: merge_many(lists),
        })
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> DisplayPoly<'a> {
        DisplayPoly { poly: self, vars }
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials from rings with different variable counts"
        );
    }
}

pub struct DisplayPoly<'a> {
    poly: &'a MultiPoly,
    vars: &'a VarTable,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for v in 0..self.poly.nvars {
                match m.exponent(v) {
                    0 => {}
                    1 => parts.push(self.vars.name(v).to_string()),
                    e => parts.push(format!("{}^{e}", self.vars.name(v))),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    fn lin(c: i64, terms: &[(usize, i64)]) -> LinearForm {
        let mut f = LinearForm::constant(q(c));
        for &(v, k) in terms {
            f.add_term(v, &q(k));
        }
        f
    }

    #[test]
    fn square_of_sum() {
        let s = lin(0, &[(0, 1), (1, 1)]).to_poly(2);
        let sq = s.mul(&s);
        let expected = MultiPoly::from_terms(
            2,
            [
                (Monomial::from_exponents(&[2, 0]).unwrap(), q(1)),
                (Monomial::from_exponents(&[1, 1]).unwrap(), q(2)),
                (Monomial::from_exponents(&[0, 2]).unwrap(), q(1)),
            ],
        );
        assert_eq!(sq, expected);
        assert_eq!(sq.leading().unwrap().0, Monomial::from_exponents(&[2, 0]).unwrap());
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = MultiPoly::var(3, 0);
        assert!(x.sub(&x).is_zero());
        let a = lin(1, &[(0, 1)]).to_poly(3);
        let b = lin(-1, &[(0, 1)]).to_poly(3);
        assert_eq!(a.mul(&b), x.mul(&x).sub(&MultiPoly::one(3)));
    }

    #[test]
    fn exact_linear_division() {
        let f = lin(0, &[(0, 2), (1, -3), (2, 1)]);
        let g = lin(5, &[(1, 1), (2, 4)]);
        let p = f.to_poly(3).mul(&g.to_poly(3)).mul(&g.to_poly(3));
        let quo = p.div_linear(&g).unwrap();
        assert_eq!(quo, f.to_poly(3).mul(&g.to_poly(3)));
        assert!(quo.div_linear(&lin(1, &[(0, 1)])).is_none());
        // scaled divisor still divides
        assert!(p.div_linear(&f.scale(&q(-7))).is_some());
    }

    #[test]
    fn integer_product_matches_rational_product() {
        let forms = [lin(0, &[(0, 1), (1, 2)]), lin(3, &[(1, -1)]), lin(0, &[(2, 5)])];
        let ints: Vec<_> = forms.iter().map(|f| f.integer_terms().unwrap()).collect();
        let expanded = expand_integer_product(vec![(Monomial::ONE, BigInt::one())], &ints);
        let via_int = MultiPoly::from_integer_terms(3, expanded, &q(1));
        let mut via_rat = MultiPoly::one(3);
        for f in &forms {
            via_rat = via_rat.mul_linear(f);
        }
        assert_eq!(via_int, via_rat);
    }

    #[test]
    fn substitution_sign_flip_and_general() {
        // (x0 + x1)^2 with x0 -> -x0, x1 -> -x1 is unchanged
        let s = lin(0, &[(0, 1), (1, 1)]).to_poly(2).pow(2);
        let flip = Substitution::negating(2, [0, 1]);
        assert_eq!(s.substitute(&flip), s);
        // x0 -> x0 + 1 applied to x0^2 gives x0^2 + 2 x0 + 1
        let shift = Substitution::identity(2).with(0, lin(1, &[(0, 1)]));
        let x2 = MultiPoly::var(2, 0).pow(2);
        assert_eq!(x2.substitute(&shift), lin(1, &[(0, 1)]).to_poly(2).pow(2));
    }

    #[test]
    fn coefficient_extraction() {
        // (x0 + x1)^3, coefficient of x1^2 is 3 x0
        let p = lin(0, &[(0, 1), (1, 1)]).to_poly(2).pow(3);
        assert_eq!(p.degree_in(1), 3);
        assert_eq!(p.coefficient_in(1, 2), MultiPoly::var(2, 0).scale(&q(3)));
    }
}
