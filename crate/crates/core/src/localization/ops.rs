//! The named localization integrals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::sum::{localize, localize_at, Integrand, Workers};
use super::weights::Context;
use super::LocalizationError;
use crate::exactalg::{ExactError, LinearForm, MultiPoly, PointSampler, RationalFunction, MAX_REDRAWS};

fn q(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// `α_n` for the first `flavors` matter flavors; `flavors = 2r` is the
/// full matter content.
pub fn alpha_n(
    ctx: &Context,
    n: usize,
    flavors: usize,
    workers: &Workers,
) -> Result<RationalFunction, LocalizationError> {
    localize(ctx, n, &Integrand::Matter { flavors }, workers)
}

/// `β_n = α_n(ε, −a, −m)`.
pub fn beta_n(
    ctx: &Context,
    n: usize,
    flavors: usize,
    workers: &Workers,
) -> Result<RationalFunction, LocalizationError> {
    Ok(alpha_n(ctx, n, flavors, workers)?.substitute(&ctx.negate_a_m())?)
}

pub fn alpha_n_at(
    ctx: &Context,
    n: usize,
    flavors: usize,
    point: &[BigRational],
    workers: &Workers,
) -> Result<BigRational, LocalizationError> {
    localize_at(ctx, n, &Integrand::Matter { flavors }, point, workers)
}

/// `α_n` at `points` seeded sample points, as an exact fingerprint.
pub fn alpha_fingerprint(
    ctx: &Context,
    n: usize,
    flavors: usize,
    points: usize,
    seed: u64,
    workers: &Workers,
) -> Result<serde_json::Value, LocalizationError> {
    fingerprint(ctx, n, flavors, points, seed, workers, false)
}

/// `β_n` at the same points as [`alpha_fingerprint`], evaluated as `α_n`
/// at `(ε, −a, −m)`.
pub fn beta_fingerprint(
    ctx: &Context,
    n: usize,
    flavors: usize,
    points: usize,
    seed: u64,
    workers: &Workers,
) -> Result<serde_json::Value, LocalizationError> {
    fingerprint(ctx, n, flavors, points, seed, workers, true)
}

fn fingerprint(
    ctx: &Context,
    n: usize,
    flavors: usize,
    points: usize,
    seed: u64,
    workers: &Workers,
    beta: bool,
) -> Result<serde_json::Value, LocalizationError> {
    let mut sampler = PointSampler::new(ctx.nvars(), seed);
    let mut values = Vec::with_capacity(points);
    let mut redraws = 0;
    while values.len() < points {
        let pt = sampler.draw();
        let mut at = pt.values.clone();
        if beta {
            for v in ctx.a_indices().into_iter().chain(ctx.m_indices()) {
                at[v] = -at[v].clone();
            }
        }
        match alpha_n_at(ctx, n, flavors, &at, workers) {
            Ok(v) => values.push(serde_json::json!({"point": pt.to_json(), "value": v.to_string()})),
            Err(LocalizationError::Exact(ExactError::ZeroDenominatorAtPoint | ExactError::DivideByZero)) => {
                redraws += 1;
                if redraws > MAX_REDRAWS {
                    return Err(ExactError::SamplingExhausted(MAX_REDRAWS).into());
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(serde_json::json!({
        "quantity": if beta { "beta" } else { "alpha" },
        "r": ctx.rank(),
        "nf": flavors,
        "n": n,
        "values": values,
        "certificate": {
            "mode": "randomized",
            "seed": seed,
            "points": points,
            "provenance": "exact values at seeded random points, not a symbolic result",
        },
    }))
}

/// Integrands other than the matter class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PsiKind {
    Unit,
    TangentTwist(LinearForm),
}

impl PsiKind {
    pub fn integrand(&self) -> Integrand {
        match self {
            PsiKind::Unit => Integrand::Unit,
            PsiKind::TangentTwist(t) => Integrand::TangentTwist { twist: t.clone() },
        }
    }
}

/// `m₁ + ε₊/2`.
pub fn default_twist(ctx: &Context) -> LinearForm {
    ctx.m_form(0).add(&ctx.eps_plus().scale(&BigRational::new(1.into(), 2.into())))
}

/// `m₁ − ε₊/2`.
pub fn alternate_twist(ctx: &Context) -> LinearForm {
    ctx.m_form(0).sub(&ctx.eps_plus().scale(&BigRational::new(1.into(), 2.into())))
}

pub fn psi_other(
    ctx: &Context,
    n: usize,
    kind: &PsiKind,
    workers: &Workers,
) -> Result<RationalFunction, LocalizationError> {
    localize(ctx, n, &kind.integrand(), workers)
}

/// `∫_{M(1,n)} e(V⊗e^{m₁} ⊕ V^∨⊗e^{m₂})` in the context with `a = 0`.
pub fn hilbert_integral(n: usize, workers: &Workers) -> Result<RationalFunction, LocalizationError> {
    let ctx = Context::hilbert();
    let integrand = Integrand::Hilbert {
        mu1: ctx.m_form(0),
        mu2: ctx.m_form(1),
    };
    localize(&ctx, n, &integrand, workers)
}

/// `Π_{i=1}^{n} (m₁m₂/(ε₁ε₂) + i − 1) / n!` in the context with `a = 0`.
pub fn hilbert_closed_form(n: usize) -> RationalFunction {
    let ctx = Context::hilbert();
    let nv = ctx.nvars();
    let x = RationalFunction::from_parts(
        MultiPoly::var(nv, ctx.m(0)).mul(&MultiPoly::var(nv, ctx.m(1))),
        MultiPoly::var(nv, ctx.e1()).mul(&MultiPoly::var(nv, ctx.e2())),
    )
    .expect("nonzero denominator");
    let mut acc = RationalFunction::one(nv);
    for i in 1..=n {
        acc = acc.mul(&x.add(&RationalFunction::constant(nv, q(i as i64 - 1))));
        acc = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(i)));
    }
    acc
}

/// The residue sum over `M(1,p)` by direct localization.
pub fn residue_sum(p: usize, workers: &Workers) -> Result<RationalFunction, LocalizationError> {
    assert!(p >= 1, "residue sum needs p ≥ 1");
    localize(&Context::hilbert(), p, &Integrand::Residue, workers)
}

/// The same sum as `(1/μ₁) · ∫ e(V⊗e^{μ₁} ⊕ V^∨⊗e^{ε₊})` at `μ₁ → 0`, i.e. the
/// coefficient of `μ₁` in that integral.
pub fn residue_sum_via_hilbert(p: usize, workers: &Workers) -> Result<RationalFunction, LocalizationError> {
    assert!(p >= 1, "residue sum needs p ≥ 1");
    let ctx = Context::hilbert();
    let integrand = Integrand::Hilbert {
        mu1: ctx.m_form(0),
        mu2: ctx.eps_plus(),
    };
    let full = localize(&ctx, p, &integrand, workers)?;
    Ok(full.coefficient_in(ctx.m(0), 1)?)
}

/// `ε₊ / (p ε₁ ε₂)` in the context with `a = 0`.
pub fn residue_expected(p: usize) -> RationalFunction {
    let ctx = Context::hilbert();
    let nv = ctx.nvars();
    RationalFunction::from_parts(
        ctx.eps_plus().to_poly(nv),
        MultiPoly::var(nv, ctx.e1()).mul(&MultiPoly::var(nv, ctx.e2())).scale(&q(p as i64)),
    )
    .expect("nonzero denominator")
}
