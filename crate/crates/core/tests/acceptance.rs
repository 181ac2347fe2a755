//! One line per acceptance criterion. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use nekrasov::exactalg::{EqMode, LinearForm, RationalFunction, RationalFunctionJson};
use nekrasov::localization::{alpha_fingerprint, alpha_n, sha256_hex, Context, Workers};
use nekrasov::wallcross::{CheckError, CheckReport, Verifier};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

/// Every comparison is exact; randomized checks use this many points.
const POINTS: usize = 20;
const SEED: u64 = 20240917;
const RANDOMIZED: EqMode = EqMode::Randomized { points: POINTS, seed: SEED };
const WORKER_COUNTS: [usize; 3] = [1, 4, 8];

enum Outcome {
    Pass(String),
    Fail(String),
    Discrepancy(String),
}

fn all_pass(reports: Vec<Result<CheckReport, CheckError>>) -> Outcome {
    let mut count = 0;
    for r in reports {
        match r {
            Ok(r) if r.passed() => count += 1,
            Ok(r) => return Outcome::Fail(r.to_json(false).to_string()),
            Err(e) => return Outcome::Fail(format!("error: {e}")),
        }
    }
    Outcome::Pass(format!("{count} checks"))
}

fn first_coefficient() -> Outcome {
    let ctx = Context::new(1).unwrap();
    let alpha = match alpha_n(&ctx, 1, 2, &Workers::new(1)) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(format!("error: {e}")),
    };
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let factor = |m: usize| {
        let f = LinearForm::var(ctx.a(0).unwrap())
            .add(&LinearForm::var(ctx.e1()).scale(&half))
            .add(&LinearForm::var(ctx.e2()).scale(&half))
            .add(&LinearForm::var(ctx.m(m)));
        RationalFunction::from_linear(ctx.nvars(), &f)
    };
    let eps = RationalFunction::from_linear(ctx.nvars(), &LinearForm::var(ctx.e1()))
        .mul(&RationalFunction::from_linear(ctx.nvars(), &LinearForm::var(ctx.e2())));
    let expected = factor(0).mul(&factor(1)).div(&eps).unwrap();
    let text = RationalFunctionJson::from_rf(&alpha, ctx.vars()).to_string_canonical();
    if alpha.symbolic_eq(&expected) {
        Outcome::Pass(text)
    } else {
        Outcome::Fail(text)
    }
}

fn main_symbolic(v: &Verifier) -> Outcome {
    let mut reports: Vec<_> = (1..=6).map(|n| v.main(1, n, EqMode::Symbolic)).collect();
    reports.extend((1..=3).map(|n| v.main(2, n, EqMode::Symbolic)));
    all_pass(reports)
}

fn main_randomized(v: &Verifier) -> Outcome {
    let mut reports = Vec::new();
    for (r, max_n) in [(1, 10), (2, 6), (3, 4)] {
        reports.extend((1..=max_n).map(|n| v.main(r, n, RANDOMIZED)));
    }
    all_pass(reports)
}

fn odd(v: &Verifier) -> Outcome {
    let mut reports = Vec::new();
    for nf in 0..=1 {
        reports.push(v.odd(1, nf, 4, EqMode::Symbolic));
    }
    for nf in 0..=3 {
        reports.push(v.odd(2, nf, 4, RANDOMIZED));
    }
    all_pass(reports)
}

fn tangent_twist(v: &Verifier) -> Outcome {
    match v.rank1_co(4, EqMode::Symbolic) {
        Ok(r) if r.passed() => Outcome::Pass("default twist".into()),
        Ok(r) => {
            let alternate = r.details.get("alternate_matches") == Some(&json!(true));
            match (&r.witness, &r.note) {
                (Some(_), Some(note)) => Outcome::Discrepancy(format!("{note} (alternate matches: {alternate})")),
                _ => Outcome::Fail(r.to_json(false).to_string()),
            }
        }
        Err(e) => Outcome::Fail(format!("error: {e}")),
    }
}

fn hashes(r: usize, n: usize, symbolic: bool, workers: usize) -> String {
    let ctx = Context::new(r).unwrap();
    let pool = Workers::new(workers);
    let text = if symbolic {
        let a = alpha_n(&ctx, n, 2 * r, &pool).unwrap();
        RationalFunctionJson::from_rf(&a, ctx.vars()).to_string_canonical()
    } else {
        alpha_fingerprint(&ctx, n, 2 * r, POINTS, SEED, &pool).unwrap().to_string()
    };
    sha256_hex(text.as_bytes())
}

fn determinism() -> Outcome {
    let mut cases: Vec<(usize, usize, bool)> = (1..=5).map(|n| (1, n, true)).collect();
    cases.extend((1..=3).map(|n| (2, n, true)));
    // symbolic r = 2, n ≥ 4 does not fit in memory here; exact values at seeded points instead
    cases.extend((4..=5).map(|n| (2, n, false)));
    for &(r, n, symbolic) in &cases {
        let seen: Vec<String> = WORKER_COUNTS.iter().map(|&w| hashes(r, n, symbolic, w)).collect();
        if seen.windows(2).any(|w| w[0] != w[1]) {
            return Outcome::Fail(format!("r={r} n={n}: {seen:?}"));
        }
    }
    Outcome::Pass(format!("{} cases, workers {WORKER_COUNTS:?}", cases.len()))
}

fn main() -> ExitCode {
    let v = Verifier::new(Workers::new(std::thread::available_parallelism().map_or(1, usize::from)), None);
    let sym = EqMode::Symbolic;
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("first coefficient in closed form", Box::new(first_coefficient)),
        ("wall-crossing formula, symbolic", Box::new(|| main_symbolic(&v))),
        ("wall-crossing formula, randomized", Box::new(|| main_randomized(&v))),
        ("reflection of epsilon, even flavors", Box::new(|| all_pass(vec![v.even(1, 6, RANDOMIZED), v.even(2, 4, RANDOMIZED)]))),
        ("Hilbert scheme integrals", Box::new(|| all_pass(vec![v.hilbert(8, sym), v.rank1_hilbert(8, sym)]))),
        ("residue sums, both routes", Box::new(|| all_pass((1..=6).map(|p| v.residue(p)).collect()))),
        ("composition sums", Box::new(|| all_pass((1..=10).map(|k| v.goal(k)).collect()))),
        ("decomposition counts", Box::new(|| all_pass(vec![v.counting(8)]))),
        ("parity in the number of flavors", Box::new(|| odd(&v))),
        ("rank one binomial", Box::new(|| all_pass(vec![v.rank1_binomial(8, sym)]))),
        ("unit integrand parity", Box::new(|| all_pass(vec![v.parity_unit(1, 5, sym), v.parity_unit(2, 5, sym)]))),
        ("tangent twisted product", Box::new(|| tangent_twist(&v))),
        ("determinism across worker counts", Box::new(determinism)),
        (
            "symmetries",
            Box::new(|| {
                all_pass(vec![
                    v.flavor_symmetry(1, 4, sym),
                    v.exchange_symmetry(1, 4, sym),
                    v.sign_symmetry(1, 4, sym),
                    v.flavor_symmetry(2, 4, RANDOMIZED),
                    v.exchange_symmetry(2, 4, RANDOMIZED),
                    v.sign_symmetry(2, 4, RANDOMIZED),
                ])
            }),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, info) = match outcome {
            Outcome::Pass(s) => ("PASS", s),
            Outcome::Discrepancy(s) => ("DISCREPANCY (documented)", s),
            Outcome::Fail(s) => {
                failed += 1;
                ("FAIL", s)
            }
        };
        println!("criterion {:>2} {tag}: {name} [{secs:.1}s] {info}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
