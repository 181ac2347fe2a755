//! The identities under test, written once for any evaluator.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::eval::{Eval, Sub};
use super::CheckError;
use crate::exactalg::{Field, LinearForm, MultiPoly, RationalFunction};
use crate::localization::{hilbert_closed_form, Context, Integrand, PsiKind};
use crate::series::QSeries;

/// Where two sides first differ.
#[derive(Clone, Debug)]
pub struct Mismatch<F> {
    pub at: String,
    pub left: F,
    pub right: F,
}

pub type Outcome<F> = Option<Mismatch<F>>;

pub trait Identity: Sync {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError>;
}

fn q(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

fn compare<F: Field>(at: impl Into<String>, left: F, right: F) -> Outcome<F> {
    (!left.same(&right)).then(|| Mismatch {
        at: at.into(),
        left,
        right,
    })
}

fn compare_series<F: Field>(left: &QSeries<F>, right: &QSeries<F>) -> Outcome<F> {
    left.first_mismatch(right).map(|k| Mismatch {
        at: format!("q^{k}"),
        left: left.coeff(k).clone(),
        right: right.coeff(k).clone(),
    })
}

fn series<E: Eval>(e: &E, order: usize, integrand: &Integrand, sub: &Sub) -> Result<QSeries<E::F>, CheckError> {
    QSeries::from_fn(order, |n| e.integral(n, integrand, sub))
}

/// `u(u−1)⋯(u−k+1)/k!` for `k = 0..=n`.
pub fn binomials<F: Field>(u: &F, n: usize) -> Vec<F> {
    let mut out = vec![u.one_like()];
    for k in 1..=n {
        let next = out[k - 1]
            .times(&u.minus(&u.rational_like(&q(k as i64 - 1))))
            .scaled(&BigRational::new(1.into(), BigInt::from(k)));
        out.push(next);
    }
    out
}

fn e1e2(ctx: &Context) -> MultiPoly {
    let nv = ctx.nvars();
    MultiPoly::var(nv, ctx.e1()).mul(&MultiPoly::var(nv, ctx.e2()))
}

/// `u_r = ε₊(2Σa_α + Σm_f)/(ε₁ε₂)`.
pub fn u_r(ctx: &Context) -> RationalFunction {
    let nv = ctx.nvars();
    let mut mass = LinearForm::zero();
    for alpha in 0..ctx.rank() {
        mass = mass.add(&ctx.a_form(alpha).scale(&q(2)));
    }
    for f in 0..ctx.max_flavors() {
        mass = mass.add(&ctx.m_form(f));
    }
    RationalFunction::from_parts(ctx.eps_plus().to_poly(nv).mul(&mass.to_poly(nv)), e1e2(ctx))
        .expect("nonzero denominator")
}

/// `(a − ε₊/2 + m₁)(a − ε₊/2 + m₂)/(ε₁ε₂)` for rank one.
pub fn alpha1_closed_form(ctx: &Context) -> RationalFunction {
    assert_eq!(ctx.rank(), 1, "rank-one formula");
    let nv = ctx.nvars();
    let shift = ctx.a_form(0).sub(&ctx.eps_plus().scale(&BigRational::new(1.into(), 2.into())));
    let num = shift.add(&ctx.m_form(0)).to_poly(nv).mul(&shift.add(&ctx.m_form(1)).to_poly(nv));
    RationalFunction::from_parts(num, e1e2(ctx)).expect("nonzero denominator")
}

/// `(ε₊²/4 − m₁²)/(ε₁ε₂) − 1`.
pub fn co_exponent(ctx: &Context) -> RationalFunction {
    let nv = ctx.nvars();
    let ep = ctx.eps_plus().to_poly(nv);
    let m = MultiPoly::var(nv, ctx.m(0));
    let num = ep.pow(2).scale(&BigRational::new(1.into(), 4.into())).sub(&m.pow(2));
    RationalFunction::from_parts(num, e1e2(ctx))
        .expect("nonzero denominator")
        .sub(&RationalFunction::one(nv))
}

/// `−m₁m₂/(ε₁ε₂)` in the context with `a = 0`.
pub fn hilbert_exponent(ctx: &Context) -> RationalFunction {
    let nv = ctx.nvars();
    let num = MultiPoly::var(nv, ctx.m(0)).mul(&MultiPoly::var(nv, ctx.m(1))).neg();
    RationalFunction::from_parts(num, e1e2(ctx)).expect("nonzero denominator")
}

/// `(−1)^{r+1} ε₊/(ε₁ε₂)`.
pub fn odd_log_coefficient(ctx: &Context) -> RationalFunction {
    let nv = ctx.nvars();
    let x = RationalFunction::from_parts(ctx.eps_plus().to_poly(nv), e1e2(ctx)).expect("nonzero denominator");
    if ctx.rank() % 2 == 1 {
        x
    } else {
        x.neg()
    }
}

/// The right-hand side `Σ_{k=1}^{n} (−1)^{k(r+1)} binom(u_r, k) α_{n−k}`.
pub fn wallcross_rhs<E: Eval>(e: &E, n: usize) -> Result<E::F, CheckError> {
    let ctx = e.ctx();
    let r = ctx.rank();
    let u = e.embed(&u_r(ctx))?;
    let b = binomials(&u, n);
    let mut acc = u.zero_like();
    for k in 1..=n {
        let term = b[k].times(&e.alpha(n - k, 2 * r, &Sub::Id)?);
        acc = if (k * (r + 1)) % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
    }
    Ok(acc)
}

/// `β_n − α_n` equals the falling-factorial sum.
pub struct MainTheorem {
    pub n: usize,
}

impl Identity for MainTheorem {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let nf = 2 * e.ctx().rank();
        let lhs = e.alpha(self.n, nf, &Sub::NegAM)?.minus(&e.alpha(self.n, nf, &Sub::Id)?);
        let rhs = wallcross_rhs(e, self.n)?;
        Ok(compare(format!("n={}", self.n), lhs, rhs))
    }
}

/// `Z(−ε) = (1 − (−1)^r q)^{u_r} Z(ε)`.
pub struct EvenIdentity {
    pub order: usize,
}

impl Identity for EvenIdentity {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let matter = Integrand::Matter { flavors: 2 * ctx.rank() };
        let z = series(e, self.order, &matter, &Sub::Id)?;
        let zneg = series(e, self.order, &matter, &Sub::NegEps)?;
        let s = if ctx.rank() % 2 == 0 { 1 } else { -1 };
        let u = e.embed(&u_r(ctx))?;
        let rhs = QSeries::binom_pow(s, &u, self.order).mul(&z);
        Ok(compare_series(&zneg, &rhs))
    }
}

/// `α_n` with `flavors` flavors is even in `ε` for `1 ≤ n ≤ max_n`.
pub struct EpsParity {
    pub flavors: usize,
    pub max_n: usize,
}

impl Identity for EpsParity {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        for n in 1..=self.max_n {
            let flipped = e.alpha(n, self.flavors, &Sub::NegEps)?;
            let plain = e.alpha(n, self.flavors, &Sub::Id)?;
            if let Some(m) = compare(format!("n={n}"), flipped, plain) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// `log(Z(−ε)/Z(ε)) = (−1)^{r+1} ε₊/(ε₁ε₂) q` with `2r − 1` flavors.
pub struct OddLogRatio {
    pub order: usize,
}

impl Identity for OddLogRatio {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let matter = Integrand::Matter { flavors: 2 * ctx.rank() - 1 };
        let z = series(e, self.order, &matter, &Sub::Id)?;
        let zneg = series(e, self.order, &matter, &Sub::NegEps)?;
        let log = zneg.div(&z)?.log()?;
        let c = e.embed(&odd_log_coefficient(ctx))?;
        let expected = QSeries::linear(c.zero_like(), c, self.order);
        Ok(compare_series(&log, &expected))
    }
}

/// A non-matter partition function is even in `ε`.
pub struct PsiParity {
    pub kind: PsiKind,
    pub order: usize,
}

impl Identity for PsiParity {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let integrand = self.kind.integrand();
        let z = series(e, self.order, &integrand, &Sub::Id)?;
        let zneg = series(e, self.order, &integrand, &Sub::NegEps)?;
        Ok(compare_series(&zneg, &z))
    }
}

/// The Hilbert-scheme integrals against their product formula.
pub struct HilbertProduct {
    pub max_n: usize,
}

impl Identity for HilbertProduct {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let integrand = Integrand::Hilbert {
            mu1: ctx.m_form(0),
            mu2: ctx.m_form(1),
        };
        for n in 0..=self.max_n {
            let lhs = e.integral(n, &integrand, &Sub::Id)?;
            let rhs = e.embed(&hilbert_closed_form(n))?;
            if let Some(m) = compare(format!("n={n}"), lhs, rhs) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// `Σ qⁿ ∫_{M(1,n)} … = (1 − q)^{−m₁m₂/(ε₁ε₂)}`.
pub struct HilbertSeries {
    pub order: usize,
}

impl Identity for HilbertSeries {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let integrand = Integrand::Hilbert {
            mu1: ctx.m_form(0),
            mu2: ctx.m_form(1),
        };
        let z = series(e, self.order, &integrand, &Sub::Id)?;
        let expo = e.embed(&hilbert_exponent(ctx))?;
        Ok(compare_series(&z, &QSeries::binom_pow(1, &expo, self.order)))
    }
}

/// Rank one: `Z = (1 + q)^{α₁}` with `α₁` in closed form.
pub struct RankOneBinomial {
    pub order: usize,
}

impl Identity for RankOneBinomial {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let z = series(e, self.order, &Integrand::Matter { flavors: 2 }, &Sub::Id)?;
        let a1 = e.embed(&alpha1_closed_form(ctx))?;
        Ok(compare_series(&z, &QSeries::binom_pow(-1, &a1, self.order)))
    }
}

/// Rank one, tangent twist: `Z^ψ = Π_{n≥1} (1 − qⁿ)^{(ε₊²/4 − m₁²)/(ε₁ε₂) − 1}`.
pub struct CoProduct {
    pub twist: LinearForm,
    pub order: usize,
}

impl Identity for CoProduct {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let ctx = e.ctx();
        let integrand = Integrand::TangentTwist { twist: self.twist.clone() };
        let z = series(e, self.order, &integrand, &Sub::Id)?;
        let expo = e.embed(&co_exponent(ctx))?;
        let base = QSeries::binom_pow(1, &expo, self.order);
        let mut prod = QSeries::constant(expo.one_like(), self.order);
        for step in 1..=self.order {
            prod = prod.mul(&base.dilate(step));
        }
        Ok(compare_series(&z, &prod))
    }
}

/// `α_n` is unchanged by each mass permutation, for `1 ≤ n ≤ max_n`.
pub struct FlavorSymmetry {
    pub max_n: usize,
    pub perms: Vec<Vec<usize>>,
}

impl Identity for FlavorSymmetry {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let nf = e.ctx().max_flavors();
        for n in 1..=self.max_n {
            let plain = e.alpha(n, nf, &Sub::Id)?;
            for p in &self.perms {
                let moved = e.alpha(n, nf, &Sub::PermMasses(p.clone()))?;
                if let Some(m) = compare(format!("n={n} perm={p:?}"), moved, plain.clone()) {
                    return Ok(Some(m));
                }
            }
        }
        Ok(None)
    }
}

/// `α_n` is unchanged by `ε₁ ↔ ε₂`, for `1 ≤ n ≤ max_n`.
pub struct ExchangeSymmetry {
    pub max_n: usize,
}

impl Identity for ExchangeSymmetry {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let nf = e.ctx().max_flavors();
        for n in 1..=self.max_n {
            let swapped = e.alpha(n, nf, &Sub::SwapEps)?;
            let plain = e.alpha(n, nf, &Sub::Id)?;
            if let Some(m) = compare(format!("n={n}"), swapped, plain) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// `Z(−ε, −a, −m) = Z(ε, a, m)`.
pub struct SignSymmetry {
    pub order: usize,
}

impl Identity for SignSymmetry {
    fn check<E: Eval>(&self, e: &E) -> Result<Outcome<E::F>, CheckError> {
        let matter = Integrand::Matter { flavors: e.ctx().max_flavors() };
        let z = series(e, self.order, &matter, &Sub::Id)?;
        let flipped = series(e, self.order, &matter, &Sub::NegAll)?;
        Ok(compare_series(&flipped, &z))
    }
}
