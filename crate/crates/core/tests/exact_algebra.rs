use nekrasov::exactalg::{
    rf_eq, EqMode, FactoredRational, LinearForm, RationalFunction, RationalFunctionJson, Substitution, VarTable,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const NVARS: usize = 3;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn vars() -> VarTable {
    VarTable::new(["x", "y", "z"])
}

fn form() -> impl Strategy<Value = LinearForm> {
    (-3i64..=3, prop::collection::vec(-3i64..=3, NVARS)).prop_map(|(c, ks)| {
        let terms: Vec<(usize, i64, i64)> = ks.iter().enumerate().filter(|(_, &k)| k != 0).map(|(v, &k)| (v, k, 1)).collect();
        LinearForm::from_terms(q(c), &terms)
    })
}

fn nonzero_form() -> impl Strategy<Value = LinearForm> {
    form().prop_filter("nonzero", |f| !f.is_zero())
}

fn product(forms: &[LinearForm]) -> RationalFunction {
    forms
        .iter()
        .fold(RationalFunction::one(NVARS), |acc, f| acc.mul(&RationalFunction::from_linear(NVARS, f)))
}

/// A sum of two products of linear forms over a product of nonzero forms.
fn ratfun() -> impl Strategy<Value = RationalFunction> {
    (
        prop::collection::vec(form(), 0..3),
        prop::collection::vec(form(), 0..3),
        prop::collection::vec(nonzero_form(), 0..3),
    )
        .prop_map(|(a, b, d)| product(&a).add(&product(&b)).div(&product(&d)).expect("nonzero denominator"))
}

/// A sum of two terms whose denominators are products of linear forms, the
/// shape every localization sum has.
fn factored_ratfun() -> impl Strategy<Value = RationalFunction> {
    (
        prop::collection::vec(form(), 0..3),
        prop::collection::vec(nonzero_form(), 0..3),
        prop::collection::vec(form(), 0..3),
        prop::collection::vec(nonzero_form(), 0..3),
    )
        .prop_map(|(a, b, c, d)| {
            let f = FactoredRational::from_forms(&a, &b).unwrap().expand(NVARS);
            let g = FactoredRational::from_forms(&c, &d).unwrap().expand(NVARS);
            f.add(&g)
        })
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-50i64..=50, 1i64..=20), NVARS)
        .prop_map(|v| v.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
}

fn json(x: &RationalFunction) -> String {
    RationalFunctionJson::from_rf(x, &vars()).to_string_canonical()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn proportional_forms_share_a_canonical_form(f in nonzero_form(), n in -7i64..=7, d in 1i64..=5) {
        prop_assume!(n != 0);
        let k = BigRational::new(n.into(), d.into());
        let (g, c) = f.canonical().unwrap();
        let (h, e) = f.scale(&k).canonical().unwrap();
        prop_assert_eq!(&g, &h);
        prop_assert_eq!(g.scale(&c), f.clone());
        prop_assert_eq!(e, c * k);
        prop_assert!(g.is_canonical());
    }

    #[test]
    fn addition_is_commutative_and_associative(x in ratfun(), y in ratfun(), z in ratfun()) {
        prop_assert!(x.add(&y).symbolic_eq(&y.add(&x)));
        prop_assert!(x.add(&y).add(&z).symbolic_eq(&x.add(&y.add(&z))));
    }

    #[test]
    fn multiplication_distributes(x in ratfun(), y in ratfun(), z in ratfun()) {
        let left = x.mul(&y.add(&z));
        let right = x.mul(&y).add(&x.mul(&z));
        prop_assert!(left.symbolic_eq(&right));
        prop_assert!(x.mul(&y).symbolic_eq(&y.mul(&x)));
    }

    #[test]
    fn additive_and_multiplicative_inverses(x in ratfun()) {
        prop_assert!(x.sub(&x).is_zero());
        if !x.is_zero() {
            let one = x.mul(&x.inv().unwrap());
            prop_assert!(one.symbolic_eq(&RationalFunction::one(NVARS)));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in ratfun(), y in ratfun(), p in point()) {
        if let (Ok(a), Ok(b)) = (x.eval(&p), y.eval(&p)) {
            prop_assert_eq!(x.add(&y).eval(&p).unwrap(), &a + &b);
            prop_assert_eq!(x.mul(&y).eval(&p).unwrap(), &a * &b);
        }
    }

    #[test]
    fn canonical_form_is_idempotent(x in ratfun(), y in factored_ratfun()) {
        prop_assert_eq!(json(&y.canonical()), json(&y.canonical().canonical()));
        let c = x.canonical();
        prop_assert_eq!(json(&c), json(&c.canonical()));
        prop_assert_eq!(json(&c), json(&x));
    }

    #[test]
    fn equal_values_serialize_identically(x in factored_ratfun(), y in factored_ratfun()) {
        // the same function reached by two routes
        let a = x.add(&y).sub(&y);
        prop_assert_eq!(json(&a), json(&x));
        let b = y.add(&x).sub(&y);
        prop_assert_eq!(json(&b), json(&x));
    }

    #[test]
    fn json_round_trip(x in ratfun()) {
        let text = json(&x);
        let (back, names) = RationalFunctionJson::parse(&text).unwrap().to_rf().unwrap();
        prop_assert_eq!(names.names(), ["x", "y", "z"]);
        prop_assert!(back.symbolic_eq(&x));
        prop_assert_eq!(json(&back), text);
    }

    #[test]
    fn substitution_commutes_with_evaluation(x in ratfun(), images in prop::collection::vec(form(), NVARS), p in point()) {
        let sub = Substitution::from_images(images);
        let moved = sub.apply_to_point(&p);
        if let (Ok(s), Ok(v)) = (x.substitute(&sub), x.eval(&moved)) {
            if let Ok(w) = s.eval(&p) {
                prop_assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn factored_product_expands_to_product(a in prop::collection::vec(form(), 0..4), b in prop::collection::vec(nonzero_form(), 0..3),
                                           c in prop::collection::vec(form(), 0..3), d in prop::collection::vec(nonzero_form(), 0..3)) {
        let f = FactoredRational::from_forms(&a, &b).unwrap();
        let g = FactoredRational::from_forms(&c, &d).unwrap();
        let left = f.mul(&g).expand(NVARS);
        let right = f.expand(NVARS).mul(&g.expand(NVARS));
        prop_assert!(left.symbolic_eq(&right));
    }

    #[test]
    fn randomized_equality_agrees_with_symbolic(x in ratfun(), y in ratfun(), seed in any::<u64>()) {
        let mode = EqMode::Randomized { points: 8, seed };
        let (same, _) = rf_eq(&x, &x.add(&y).sub(&y), mode).unwrap();
        prop_assert!(same);
        let (sym, _) = rf_eq(&x, &y, EqMode::Symbolic).unwrap();
        let (rnd, cert) = rf_eq(&x, &y, mode).unwrap();
        prop_assert_eq!(sym, rnd);
        if !rnd {
            prop_assert!(cert.witness.is_some());
        }
    }
}

#[test]
fn witness_is_reproducible_from_the_seed() {
    let x = RationalFunction::from_linear(NVARS, &LinearForm::var(0));
    let y = x.add(&RationalFunction::constant(NVARS, BigRational::new(1.into(), 1000.into())));
    let mode = EqMode::Randomized { points: 5, seed: 99 };
    let (a, ca) = rf_eq(&x, &y, mode).unwrap();
    let (b, cb) = rf_eq(&x, &y, mode).unwrap();
    assert!(!a && !b);
    assert_eq!(ca.to_json(), cb.to_json());
}
