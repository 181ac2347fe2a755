//! Canonical JSON for polynomials and rational functions.
//!
//! ```json
//! {"vars": ["e1", "e2"], "num": [[[1, 0], "2"]], "den": [[[0, 1], "1"]]}
//! ```
//!
//! Terms are listed in descending monomial order and coefficients are
//! reduced rationals written `p` or `p/q`, so equal canonical values give
//! byte-identical output.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::linear::VarTable;
use super::monomial::Monomial;
use super::poly::MultiPoly;
use super::ratfun::RationalFunction;
use super::ExactError;

/// `[exponents, coefficient]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyJson(pub Vec<(Vec<u32>, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub vars: Vec<String>,
    pub num: PolyJson,
    pub den: PolyJson,
}

impl PolyJson {
    pub fn from_poly(p: &MultiPoly) -> Self {
        let n = p.nvars();
        PolyJson(
            p.terms()
                .iter()
                .rev()
                .map(|(m, c)| (m.exponents(n), c.to_string()))
                .collect(),
        )
    }

    pub fn to_poly(&self, nvars: usize) -> Result<MultiPoly, ExactError> {
        let mut terms = Vec::with_capacity(self.0.len());
        for (exps, c) in &self.0 {
            if exps.len() != nvars {
                return Err(ExactError::Json(format!(
                    "exponent vector of length {} in a ring of {} variables",
                    exps.len(),
                    nvars
                )));
            }
            let mono = Monomial::from_exponents(exps)
                .ok_or_else(|| ExactError::Json(format!("exponents {exps:?} out of range")))?;
            let coeff = BigRational::from_str(c)
                .map_err(|_| ExactError::Json(format!("bad coefficient {c:?}")))?;
            terms.push((mono, coeff));
        }
        Ok(MultiPoly::from_terms(nvars, terms))
    }
}

impl RationalFunctionJson {
    pub fn from_rf(x: &RationalFunction, vars: &VarTable) -> Self {
        assert_eq!(vars.len(), x.nvars(), "variable table does not match the ring");
        let x = x.canonical();
        RationalFunctionJson {
            vars: vars.names().to_vec(),
            num: PolyJson::from_poly(x.num()),
            den: PolyJson::from_poly(x.den()),
        }
    }

    pub fn to_rf(&self) -> Result<(RationalFunction, VarTable), ExactError> {
        let n = self.vars.len();
        let num = self.num.to_poly(n)?;
        let den = self.den.to_poly(n)?;
        let rf = RationalFunction::from_parts(num, den).map_err(|_| ExactError::Json("zero denominator".into()))?;
        Ok((rf, VarTable::new(self.vars.iter().cloned())))
    }

    pub fn to_string_canonical(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        serde_json::from_str(s).map_err(|e| ExactError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn round_trip() {
        let vars = VarTable::new(["e1", "e2"]);
        let e1 = MultiPoly::var(2, 0);
        let e2 = MultiPoly::var(2, 1);
        let num = e1.mul(&e1).scale(&q(3, 2)).add(&e2.scale(&q(-1, 1)));
        let den = e1.mul(&e2).add(&MultiPoly::constant(2, q(7, 1)));
        let x = RationalFunction::from_parts(num, den).unwrap();
        let j = RationalFunctionJson::from_rf(&x, &vars);
        let s = j.to_string_canonical();
        let back = RationalFunctionJson::parse(&s).unwrap();
        assert_eq!(back, j);
        let (y, vt) = back.to_rf().unwrap();
        assert_eq!(vt.names(), vars.names());
        assert!(x.symbolic_eq(&y));
        assert_eq!(RationalFunctionJson::from_rf(&y, &vt).to_string_canonical(), s);
    }

    #[test]
    fn descending_order() {
        let vars = VarTable::new(["x", "y"]);
        let p = MultiPoly::var(2, 1).add(&MultiPoly::var(2, 0).pow(2)).add(&MultiPoly::one(2));
        let x = RationalFunction::from_poly(p);
        let s = RationalFunctionJson::from_rf(&x, &vars).to_string_canonical();
        assert_eq!(
            s,
            r#"{"vars":["x","y"],"num":[[[2,0],"1"],[[0,1],"1"],[[0,0],"1"]],"den":[[[0,0],"1"]]}"#
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(RationalFunctionJson::parse("{").is_err());
        let j = RationalFunctionJson {
            vars: vec!["x".into()],
            num: PolyJson(vec![(vec![1, 2], "1".into())]),
            den: PolyJson(vec![(vec![0], "1".into())]),
        };
        assert!(j.to_rf().is_err());
        let j = RationalFunctionJson {
            vars: vec!["x".into()],
            num: PolyJson(vec![(vec![1], "1/0".into())]),
            den: PolyJson(vec![(vec![0], "1".into())]),
        };
        assert!(j.to_rf().is_err());
    }
}
