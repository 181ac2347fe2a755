//! Computation contexts and the torus weights at a fixed point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::LocalizationError;
use crate::exactalg::{FactoredRational, LinearForm, Substitution, VarIndex, VarTable, MAX_VARS};
use crate::partitions::PartitionTuple;

/// Variable layout `ε₁, ε₂, a₁..a_r, m₁..m_{2r}`, or `ε₁, ε₂, m₁, m₂` for the
/// rank-one context with `a = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    rank: usize,
    with_a: bool,
    vars: VarTable,
}

pub const MAX_RANK: usize = (MAX_VARS - 2) / 3;

impl Context {
    pub fn new(rank: usize) -> Result<Self, LocalizationError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(LocalizationError::UnsupportedRank(rank));
        }
        let mut names = vec!["e1".to_string(), "e2".to_string()];
        names.extend((1..=rank).map(|k| format!("a{k}")));
        names.extend((1..=2 * rank).map(|k| format!("m{k}")));
        Ok(Context {
            rank,
            with_a: true,
            vars: VarTable::new(names),
        })
    }

    /// Rank one with the Coulomb parameter set to zero.
    pub fn hilbert() -> Self {
        Context {
            rank: 1,
            with_a: false,
            vars: VarTable::new(["e1", "e2", "m1", "m2"]),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_hilbert(&self) -> bool {
        !self.with_a
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Number of mass variables.
    pub fn max_flavors(&self) -> usize {
        2 * self.rank
    }

    pub fn e1(&self) -> VarIndex {
        0
    }

    pub fn e2(&self) -> VarIndex {
        1
    }

    /// `a_α` for 0-based `α`; `None` when `a = 0`.
    pub fn a(&self, alpha: usize) -> Option<VarIndex> {
        assert!(alpha < self.rank, "a-index out of range");
        self.with_a.then_some(2 + alpha)
    }

    /// `m_f` for 0-based `f`.
    pub fn m(&self, f: usize) -> VarIndex {
        assert!(f < self.max_flavors(), "mass index out of range");
        let base = if self.with_a { 2 + self.rank } else { 2 };
        base + f
    }

    pub fn a_indices(&self) -> Vec<VarIndex> {
        (0..self.rank).filter_map(|k| self.a(k)).collect()
    }

    pub fn m_indices(&self) -> Vec<VarIndex> {
        (0..self.max_flavors()).map(|f| self.m(f)).collect()
    }

    pub fn a_form(&self, alpha: usize) -> LinearForm {
        match self.a(alpha) {
            Some(v) => LinearForm::var(v),
            None => LinearForm::zero(),
        }
    }

    pub fn m_form(&self, f: usize) -> LinearForm {
        LinearForm::var(self.m(f))
    }

    /// `ε₊ = ε₁ + ε₂`.
    pub fn eps_plus(&self) -> LinearForm {
        LinearForm::var(self.e1()).add(&LinearForm::var(self.e2()))
    }

    /// `ε ↦ −ε`.
    pub fn negate_eps(&self) -> Substitution {
        Substitution::negating(self.nvars(), [self.e1(), self.e2()])
    }

    /// `(a, m) ↦ (−a, −m)`.
    pub fn negate_a_m(&self) -> Substitution {
        Substitution::negating(self.nvars(), self.a_indices().into_iter().chain(self.m_indices()))
    }

    /// `(ε, a, m) ↦ (−ε, −a, −m)`.
    pub fn negate_all(&self) -> Substitution {
        Substitution::negating(self.nvars(), 0..self.nvars())
    }

    /// `ε₁ ↔ ε₂`.
    pub fn swap_eps(&self) -> Substitution {
        let mut perm: Vec<VarIndex> = (0..self.nvars()).collect();
        perm.swap(0, 1);
        Substitution::permuting(&perm)
    }

    /// Sends `m_f` to `m_{perm[f]}`.
    pub fn permute_masses(&self, perm: &[usize]) -> Substitution {
        assert_eq!(perm.len(), self.max_flavors(), "mass permutation length");
        let mut map: Vec<VarIndex> = (0..self.nvars()).collect();
        for (f, &g) in perm.iter().enumerate() {
            map[self.m(f)] = self.m(g);
        }
        Substitution::permuting(&map)
    }
}

fn q(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `a_α + (1−i)ε₁ + (1−j)ε₂` for every box `(i, j)` of every `Y_α`.
pub fn taut_character(ctx: &Context, y: &PartitionTuple) -> Vec<LinearForm> {
    assert_eq!(y.rank(), ctx.rank(), "tuple rank differs from context rank");
    let mut out = Vec::with_capacity(y.weight() as usize);
    for (alpha, yd) in y.components().iter().enumerate() {
        for (i, j) in yd.boxes() {
            out.push(
                ctx.a_form(alpha)
                    .with_term(ctx.e1(), q(1 - i as i64))
                    .with_term(ctx.e2(), q(1 - j as i64)),
            );
        }
    }
    out
}

/// `a_α + (−i+½)ε₁ + (−j+½)ε₂ + m_f` per box; `f` is 0-based.
pub fn matter_factors(ctx: &Context, y: &PartitionTuple, f: usize) -> Vec<LinearForm> {
    let m = ctx.m_form(f);
    let c = LinearForm::var(ctx.e1())
        .add(&LinearForm::var(ctx.e2()))
        .scale(&half());
    taut_character(ctx, y)
        .into_iter()
        .map(|w| w.sub(&c).add(&m))
        .collect()
}

/// The `2rn` weights of the tangent space at `y`.
pub fn tangent_factors(ctx: &Context, y: &PartitionTuple) -> Result<Vec<LinearForm>, LocalizationError> {
    assert_eq!(y.rank(), ctx.rank(), "tuple rank differs from context rank");
    let comps = y.components();
    let mut out = Vec::with_capacity(2 * ctx.rank() * y.weight() as usize);
    for (alpha, ya) in comps.iter().enumerate() {
        for (beta, yb) in comps.iter().enumerate() {
            let base = ctx.a_form(beta).sub(&ctx.a_form(alpha));
            for (i, j) in ya.boxes() {
                out.push(
                    base.clone()
                        .with_term(ctx.e1(), q(-yb.leg(i, j)))
                        .with_term(ctx.e2(), q(ya.arm(i, j) + 1)),
                );
            }
            for (i, j) in yb.boxes() {
                out.push(
                    base.clone()
                        .with_term(ctx.e1(), q(ya.leg(i, j) + 1))
                        .with_term(ctx.e2(), q(-yb.arm(i, j))),
                );
            }
        }
    }
    if out.iter().any(LinearForm::is_zero) {
        return Err(LocalizationError::DegenerateWeight(y.to_string()));
    }
    Ok(out)
}

/// All weights at one fixed point, for `flavors` matter flavors.
#[derive(Clone, Debug)]
pub struct FixedPointWeights {
    pub tuple: PartitionTuple,
    pub tangent: FactoredRational,
    pub matter: FactoredRational,
    pub taut_char: Vec<LinearForm>,
}

impl FixedPointWeights {
    pub fn new(ctx: &Context, y: &PartitionTuple, flavors: usize) -> Result<Self, LocalizationError> {
        check_flavors(ctx, flavors)?;
        let tangent = tangent_factors(ctx, y)?;
        let matter: Vec<LinearForm> = (0..flavors).flat_map(|f| matter_factors(ctx, y, f)).collect();
        Ok(FixedPointWeights {
            tuple: y.clone(),
            tangent: FactoredRational::from_forms(&tangent, [])?,
            matter: FactoredRational::from_forms(&matter, [])?,
            taut_char: taut_character(ctx, y),
        })
    }
}

pub(crate) fn check_flavors(ctx: &Context, flavors: usize) -> Result<(), LocalizationError> {
    if flavors > ctx.max_flavors() {
        return Err(LocalizationError::TooManyFlavors {
            flavors,
            max: ctx.max_flavors(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(s: &str) -> PartitionTuple {
        s.parse().unwrap()
    }

    fn show(ctx: &Context, forms: &[LinearForm]) -> Vec<String> {
        let mut v: Vec<String> = forms.iter().map(|f| f.display(ctx.vars()).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn layout() {
        let c = Context::new(2).unwrap();
        assert_eq!(c.vars().names(), ["e1", "e2", "a1", "a2", "m1", "m2", "m3", "m4"]);
        assert_eq!(Context::hilbert().vars().names(), ["e1", "e2", "m1", "m2"]);
        assert!(Context::new(0).is_err());
        assert!(Context::new(MAX_RANK + 1).is_err());
    }

    #[test]
    fn taut_examples() {
        let c1 = Context::new(1).unwrap();
        let t = taut_character(&c1, &tuple("[1]"));
        assert_eq!(t, vec![LinearForm::var(2)]);
        let t = taut_character(&c1, &tuple("[2]"));
        assert_eq!(t, vec![LinearForm::var(2), LinearForm::var(2).with_term(1, q(-1))]);
        let c2 = Context::new(2).unwrap();
        let t = taut_character(&c2, &tuple("[1|1]"));
        assert_eq!(t, vec![LinearForm::var(2), LinearForm::var(3)]);
    }

    #[test]
    fn matter_examples() {
        let c1 = Context::new(1).unwrap();
        let h = half();
        let m = matter_factors(&c1, &tuple("[1]"), 0);
        let expected = LinearForm::var(2)
            .with_term(0, -h.clone())
            .with_term(1, -h.clone())
            .with_term(3, q(1));
        assert_eq!(m, vec![expected]);
        assert!(matter_factors(&c1, &tuple("[-]"), 0).is_empty());
        // column heights (1,1): boxes (1,1) and (2,1)
        let m = matter_factors(&c1, &tuple("[1,1]"), 1);
        let second = LinearForm::var(2)
            .with_term(0, BigRational::new((-3).into(), 2.into()))
            .with_term(1, -h)
            .with_term(4, q(1));
        assert_eq!(m.len(), 2);
        assert_eq!(m[1], second);
    }

    #[test]
    fn tangent_multisets() {
        let c1 = Context::new(1).unwrap();
        assert_eq!(show(&c1, &tangent_factors(&c1, &tuple("[1]")).unwrap()), ["e1", "e2"]);
        assert_eq!(
            show(&c1, &tangent_factors(&c1, &tuple("[2]")).unwrap()),
            ["2*e2", "e1", "e1 - e2", "e2"]
        );
        assert_eq!(
            show(&c1, &tangent_factors(&c1, &tuple("[1,1]")).unwrap()),
            ["-e1 + e2", "2*e1", "e1", "e2"]
        );
        let c2 = Context::new(2).unwrap();
        assert_eq!(
            show(&c2, &tangent_factors(&c2, &tuple("[1|-]")).unwrap()),
            ["a1 - a2", "e1", "e1 + e2 - a1 + a2", "e2"]
        );
    }
}
