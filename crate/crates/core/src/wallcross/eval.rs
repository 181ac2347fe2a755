//! Two interchangeable evaluators for localization integrals: exact
//! rational functions, or exact rationals at one sampled point.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use serde_json::Value;

use super::CheckError;
use crate::exactalg::{Field, RationalFunction, RationalFunctionJson, Substitution, VarTable};
use crate::localization::{
    localize, localize_at, AlphaCache, CacheKey, Context, Integrand, Workers,
};

/// A change of variables applied to an integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sub {
    Id,
    /// `ε ↦ −ε`
    NegEps,
    /// `(a, m) ↦ (−a, −m)`
    NegAM,
    /// `(ε, a, m) ↦ (−ε, −a, −m)`
    NegAll,
    /// `ε₁ ↔ ε₂`
    SwapEps,
    /// `m_f ↦ m_{perm[f]}`
    PermMasses(Vec<usize>),
}

impl Sub {
    pub fn substitution(&self, ctx: &Context) -> Substitution {
        match self {
            Sub::Id => Substitution::identity(ctx.nvars()),
            Sub::NegEps => ctx.negate_eps(),
            Sub::NegAM => ctx.negate_a_m(),
            Sub::NegAll => ctx.negate_all(),
            Sub::SwapEps => ctx.swap_eps(),
            Sub::PermMasses(p) => ctx.permute_masses(p),
        }
    }
}

/// Values that can be shown as a failure witness.
pub trait Witness {
    fn witness_json(&self, vars: &VarTable) -> Value;
}

impl Witness for BigRational {
    fn witness_json(&self, _: &VarTable) -> Value {
        Value::String(self.to_string())
    }
}

impl Witness for RationalFunction {
    fn witness_json(&self, vars: &VarTable) -> Value {
        serde_json::to_value(RationalFunctionJson::from_rf(self, vars)).expect("serializable")
    }
}

pub trait Eval: Sync {
    type F: Field + Witness;

    fn ctx(&self) -> &Context;

    /// The localization integral of weight `n`, after the substitution.
    fn integral(&self, n: usize, integrand: &Integrand, sub: &Sub) -> Result<Self::F, CheckError>;

    /// A fixed rational function of the context variables.
    fn embed(&self, x: &RationalFunction) -> Result<Self::F, CheckError>;

    fn alpha(&self, n: usize, flavors: usize, sub: &Sub) -> Result<Self::F, CheckError> {
        self.integral(n, &Integrand::Matter { flavors }, sub)
    }
}

type Key = (usize, Integrand, Sub);

/// Symbolic evaluator; every integral is computed once and kept.
pub struct SymbolicEval {
    ctx: Context,
    workers: Workers,
    cache: Option<AlphaCache>,
    memo: Mutex<HashMap<Key, Arc<RationalFunction>>>,
}

impl SymbolicEval {
    pub fn new(ctx: Context, workers: Workers, cache: Option<AlphaCache>) -> Self {
        SymbolicEval {
            ctx,
            workers,
            cache,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn cache_key(&self, n: usize, integrand: &Integrand) -> Option<CacheKey> {
        match integrand {
            Integrand::Matter { flavors } if !self.ctx.is_hilbert() => Some(CacheKey {
                r: self.ctx.rank(),
                nf: *flavors,
                n,
                mode: "symbolic".into(),
            }),
            _ => None,
        }
    }

    fn compute(&self, n: usize, integrand: &Integrand) -> Result<RationalFunction, CheckError> {
        let cached = match (&self.cache, self.cache_key(n, integrand)) {
            (Some(c), Some(k)) => Some((c, k)),
            _ => None,
        };
        if let Some((cache, key)) = &cached {
            if let Some(v) = cache.load(key)? {
                let j: RationalFunctionJson = serde_json::from_value(v)
                    .map_err(|_| CheckError::CacheCorrupt(cache.path(key).display().to_string()))?;
                let (rf, vars) = j.to_rf()?;
                if vars.names() != self.ctx.vars().names() {
                    return Err(CheckError::CacheCorrupt(cache.path(key).display().to_string()));
                }
                return Ok(rf);
            }
        }
        let rf = localize(&self.ctx, n, integrand, &self.workers)?;
        if let Some((cache, key)) = &cached {
            let j = RationalFunctionJson::from_rf(&rf, self.ctx.vars());
            cache.store(key, &serde_json::to_value(j).expect("serializable"))?;
        }
        Ok(rf)
    }

    pub fn get(&self, n: usize, integrand: &Integrand, sub: &Sub) -> Result<Arc<RationalFunction>, CheckError> {
        let key = (n, integrand.clone(), sub.clone());
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let value = if *sub == Sub::Id {
            self.compute(n, integrand)?
        } else {
            let base = self.get(n, integrand, &Sub::Id)?;
            base.substitute(&sub.substitution(&self.ctx))?
        };
        let value = Arc::new(value);
        self.memo.lock().expect("memo lock").insert(key, value.clone());
        Ok(value)
    }
}

impl Eval for SymbolicEval {
    type F = RationalFunction;

    fn ctx(&self) -> &Context {
        &self.ctx
    }

    fn integral(&self, n: usize, integrand: &Integrand, sub: &Sub) -> Result<RationalFunction, CheckError> {
        Ok((*self.get(n, integrand, sub)?).clone())
    }

    fn embed(&self, x: &RationalFunction) -> Result<RationalFunction, CheckError> {
        Ok(x.clone())
    }
}

/// Evaluator at a single point; fixed-point terms are evaluated directly.
pub struct PointEval<'a> {
    ctx: &'a Context,
    workers: &'a Workers,
    point: Vec<BigRational>,
    memo: Mutex<HashMap<Key, BigRational>>,
}

impl<'a> PointEval<'a> {
    pub fn new(ctx: &'a Context, workers: &'a Workers, point: Vec<BigRational>) -> Self {
        assert_eq!(point.len(), ctx.nvars(), "point dimension");
        PointEval {
            ctx,
            workers,
            point,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn point(&self) -> &[BigRational] {
        &self.point
    }
}

impl Eval for PointEval<'_> {
    type F = BigRational;

    fn ctx(&self) -> &Context {
        self.ctx
    }

    fn integral(&self, n: usize, integrand: &Integrand, sub: &Sub) -> Result<BigRational, CheckError> {
        let key = (n, integrand.clone(), sub.clone());
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let at = sub.substitution(self.ctx).apply_to_point(&self.point);
        let v = localize_at(self.ctx, n, integrand, &at, self.workers)?;
        self.memo.lock().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    fn embed(&self, x: &RationalFunction) -> Result<BigRational, CheckError> {
        Ok(x.eval(&self.point)?)
    }
}
