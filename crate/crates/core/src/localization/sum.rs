//! Localization sums over the fixed points of a given instanton number.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use super::weights::{check_flavors, matter_factors, tangent_factors, taut_character, Context};
use super::LocalizationError;
use crate::exactalg::{FactoredRational, LinearForm, RationalFunction};
use crate::partitions::{enumerate_tuples, PartitionTuple};

/// What is integrated over the moduli space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Integrand {
    /// Euler class of the first `flavors` matter summands.
    Matter { flavors: usize },
    /// The constant class 1.
    Unit,
    /// `Π (w + twist) / Π w` over tangent weights `w`.
    TangentTwist { twist: LinearForm },
    /// `Π (w + μ₁)(−w + μ₂)` over tautological weights `w`.
    Hilbert { mu1: LinearForm, mu2: LinearForm },
    /// `Π_{w≠0} w · Π (ε₊ − w)` over tautological weights `w`.
    Residue,
}

/// A fixed-size worker pool. Results never depend on its size.
#[derive(Clone)]
pub struct Workers {
    pool: Arc<ThreadPool>,
    count: usize,
}

impl Workers {
    pub fn new(count: usize) -> Self {
        let count = count.max(1);
        let pool = ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .expect("thread pool");
        Workers {
            pool: Arc::new(pool),
            count,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::new(std::thread::available_parallelism().map_or(1, usize::from))
    }
}

impl std::fmt::Debug for Workers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Workers({})", self.count)
    }
}

/// The localization term of `integrand` at the fixed point `y`.
pub fn fixed_point_term(
    ctx: &Context,
    y: &PartitionTuple,
    integrand: &Integrand,
) -> Result<FactoredRational, LocalizationError> {
    let tangent = tangent_factors(ctx, y)?;
    let num: Vec<LinearForm> = match integrand {
        Integrand::Matter { flavors } => {
            check_flavors(ctx, *flavors)?;
            (0..*flavors).flat_map(|f| matter_factors(ctx, y, f)).collect()
        }
        Integrand::Unit => Vec::new(),
        Integrand::TangentTwist { twist } => tangent.iter().map(|w| w.add(twist)).collect(),
        Integrand::Hilbert { mu1, mu2 } => taut_character(ctx, y)
            .iter()
            .flat_map(|w| [w.add(mu1), w.neg().add(mu2)])
            .collect(),
        Integrand::Residue => {
            let taut = taut_character(ctx, y);
            let zeros = taut.iter().filter(|w| w.is_zero()).count();
            let expected = y.components().iter().filter(|d| !d.is_empty()).count();
            if zeros != expected {
                return Err(LocalizationError::ZeroWeightMiscount {
                    tuple: y.to_string(),
                    zeros,
                    expected,
                });
            }
            let ep = ctx.eps_plus();
            taut.iter()
                .filter(|w| !w.is_zero())
                .cloned()
                .chain(taut.iter().map(|w| ep.sub(w)))
                .collect()
        }
    };
    Ok(FactoredRational::from_forms(&num, &tangent)?)
}

/// Every fixed-point term of weight `n`, in enumeration order.
pub fn fixed_point_terms(
    ctx: &Context,
    n: usize,
    integrand: &Integrand,
    workers: &Workers,
) -> Result<Vec<FactoredRational>, LocalizationError> {
    let tuples: Vec<PartitionTuple> = enumerate_tuples(ctx.rank(), n).collect();
    workers.install(|| {
        tuples
            .par_iter()
            .map(|y| fixed_point_term(ctx, y, integrand))
            .collect()
    })
}

/// The exact localization sum as a canonical rational function.
pub fn localize(
    ctx: &Context,
    n: usize,
    integrand: &Integrand,
    workers: &Workers,
) -> Result<RationalFunction, LocalizationError> {
    let terms = fixed_point_terms(ctx, n, integrand, workers)?;
    let nvars = ctx.nvars();
    let expanded: Vec<RationalFunction> =
        workers.install(|| terms.par_iter().map(|t| t.expand(nvars)).collect());
    Ok(workers.install(|| pairwise_sum(expanded, nvars)).canonical())
}

/// Total degree of the least common multiple of two factored denominators.
fn lcm_degree(x: &RationalFunction, y: &RationalFunction) -> u32 {
    match (x.den_factors(), y.den_factors()) {
        (Some(a), Some(b)) => {
            let mut d: u32 = a.iter().map(|(f, &e)| e.max(b.get(f).copied().unwrap_or(0))).sum();
            d += b.iter().filter(|(f, _)| !a.contains_key(*f)).map(|(_, &e)| e).sum::<u32>();
            d
        }
        _ => x.den().total_degree() + y.den().total_degree(),
    }
}

/// Sums in rounds, each round adding disjoint pairs whose denominators
/// overlap most, so that cancellations happen before the common
/// denominator grows.
fn pairwise_sum(mut items: Vec<RationalFunction>, nvars: usize) -> RationalFunction {
    while items.len() > 1 {
        let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                pairs.push((lcm_degree(&items[i], &items[j]), i, j));
            }
        }
        pairs.sort_unstable();
        let mut taken = vec![false; items.len()];
        let mut chosen = Vec::new();
        for (_, i, j) in pairs {
            if !taken[i] && !taken[j] {
                taken[i] = true;
                taken[j] = true;
                chosen.push((i, j));
            }
        }
        let mut next: Vec<RationalFunction> = chosen
            .par_iter()
            .map(|&(i, j)| items[i].add(&items[j]))
            .collect();
        next.extend(items.iter().zip(&taken).filter(|(_, t)| !**t).map(|(x, _)| x.clone()));
        items = next;
    }
    items.pop().unwrap_or_else(|| RationalFunction::zero(nvars))
}

/// The localization sum evaluated at one point, without expansion.
pub fn localize_at(
    ctx: &Context,
    n: usize,
    integrand: &Integrand,
    point: &[BigRational],
    workers: &Workers,
) -> Result<BigRational, LocalizationError> {
    let terms = fixed_point_terms(ctx, n, integrand, workers)?;
    workers.install(|| {
        terms
            .par_iter()
            .map(|t| t.eval(point).map_err(LocalizationError::from))
            .try_reduce(BigRational::zero, |x, y| Ok(x + y))
    })
}
