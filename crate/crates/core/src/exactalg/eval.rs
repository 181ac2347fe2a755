//! Seeded evaluation points and randomized identity testing.
//!
//! Sampled coordinates are rationals `p/q` with `p` and `q` drawn uniformly
//! from `[-10^6, 10^6] \ {0}`. A point is redrawn when some denominator
//! vanishes there, at most [`MAX_REDRAWS`] times.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::ratfun::RationalFunction;
use super::ExactError;

pub const SAMPLE_BOUND: i64 = 1_000_000;
pub const MAX_REDRAWS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    /// Seed of the sampler that produced the point.
    pub seed: u64,
    /// Position of the draw in the sampler's stream (redraws included).
    pub draw: u64,
    pub values: Vec<BigRational>,
}

impl EvalPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "draw": self.draw,
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Deterministic point source; one sampler per worker.
#[derive(Clone, Debug)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    seed: u64,
    nvars: usize,
    draws: u64,
}

impl PointSampler {
    pub fn new(nvars: usize, seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            nvars,
            draws: 0,
        }
    }

    fn nonzero(&mut self) -> BigInt {
        loop {
            let x: i64 = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
            if x != 0 {
                return BigInt::from(x);
            }
        }
    }

    pub fn draw(&mut self) -> EvalPoint {
        let values = (0..self.nvars)
            .map(|_| {
                let p = self.nonzero();
                let q = self.nonzero();
                BigRational::new(p, q)
            })
            .collect();
        let draw = self.draws;
        self.draws += 1;
        EvalPoint {
            seed: self.seed,
            draw,
            values,
        }
    }

    /// Draws until `admissible` accepts the point.
    pub fn draw_admissible(
        &mut self,
        mut admissible: impl FnMut(&[BigRational]) -> bool,
    ) -> Result<EvalPoint, ExactError> {
        for _ in 0..=MAX_REDRAWS {
            let p = self.draw();
            if admissible(&p.values) {
                return Ok(p);
            }
        }
        Err(ExactError::SamplingExhausted(MAX_REDRAWS))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqMode {
    Symbolic,
    Randomized { points: usize, seed: u64 },
}

impl EqMode {
    pub fn to_json(&self) -> Value {
        match self {
            EqMode::Symbolic => json!({"mode": "symbolic"}),
            EqMode::Randomized { points, seed } => {
                json!({"mode": "randomized", "points": points, "seed": seed})
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub point: EvalPoint,
    pub left: BigRational,
    pub right: BigRational,
}

#[derive(Clone, Debug)]
pub struct EqCertificate {
    pub mode: EqMode,
    /// Points at which both sides agreed.
    pub points: Vec<EvalPoint>,
    /// Present exactly when a randomized comparison failed.
    pub witness: Option<Witness>,
}

impl EqCertificate {
    pub fn to_json(&self) -> Value {
        let mut v = self.mode.to_json();
        if let EqMode::Randomized { .. } = self.mode {
            v["matching_points"] = json!(self.points.len());
        }
        if let Some(w) = &self.witness {
            v["witness"] = json!({
                "point": w.point.to_json(),
                "left": w.left.to_string(),
                "right": w.right.to_string(),
            });
        }
        v
    }
}

/// Compares two rational functions. A randomized `true` is probabilistic;
/// a randomized `false` carries the witnessing point.
pub fn rf_eq(
    x: &RationalFunction,
    y: &RationalFunction,
    mode: EqMode,
) -> Result<(bool, EqCertificate), ExactError> {
    match mode {
        EqMode::Symbolic => Ok((
            x.symbolic_eq(y),
            EqCertificate {
                mode,
                points: Vec::new(),
                witness: None,
            },
        )),
        EqMode::Randomized { points, seed } => {
            if points == 0 {
                return Err(ExactError::SamplingExhausted(0));
            }
            assert_eq!(x.nvars(), y.nvars(), "rational functions over different rings");
            let mut sampler = PointSampler::new(x.nvars(), seed);
            let mut seen = Vec::with_capacity(points);
            for _ in 0..points {
                let pt = sampler.draw_admissible(|p| {
                    !num_traits::Zero::is_zero(&x.den().eval(p))
                        && !num_traits::Zero::is_zero(&y.den().eval(p))
                })?;
                let left = x.eval(&pt.values)?;
                let right = y.eval(&pt.values)?;
                if left != right {
                    return Ok((
                        false,
                        EqCertificate {
                            mode,
                            points: seen,
                            witness: Some(Witness {
                                point: pt,
                                left,
                                right,
                            }),
                        },
                    ));
                }
                seen.push(pt);
            }
            Ok((
                true,
                EqCertificate {
                    mode,
                    points: seen,
                    witness: None,
                },
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::MultiPoly;

    #[test]
    fn sampler_is_deterministic_and_bounded() {
        let mut a = PointSampler::new(4, 11);
        let mut b = PointSampler::new(4, 11);
        for _ in 0..50 {
            let p = a.draw();
            assert_eq!(p, b.draw());
            for v in &p.values {
                assert!(!num_traits::Zero::is_zero(v));
                assert!(v.numer().magnitude() <= &num_bigint::BigUint::from(SAMPLE_BOUND as u64));
            }
        }
    }

    #[test]
    fn exhausted_sampler_reports() {
        let mut s = PointSampler::new(2, 3);
        assert!(matches!(
            s.draw_admissible(|_| false),
            Err(ExactError::SamplingExhausted(MAX_REDRAWS))
        ));
    }

    #[test]
    fn randomized_inequality_has_witness() {
        let e1 = RationalFunction::from_poly(MultiPoly::var(2, 0));
        let e2 = RationalFunction::from_poly(MultiPoly::var(2, 1));
        let (same, cert) = rf_eq(&e1, &e2, EqMode::Randomized { points: 1, seed: 5 }).unwrap();
        assert!(!same);
        let w = cert.witness.unwrap();
        assert_ne!(w.left, w.right);
        assert_eq!(w.left, w.point.values[0]);
    }

    #[test]
    fn randomized_self_equality() {
        let x = RationalFunction::from_parts(
            MultiPoly::var(2, 0).add(&MultiPoly::one(2)),
            MultiPoly::var(2, 1),
        )
        .unwrap();
        let (same, cert) = rf_eq(&x, &x, EqMode::Randomized { points: 20, seed: 9 }).unwrap();
        assert!(same);
        assert_eq!(cert.points.len(), 20);
    }
}
