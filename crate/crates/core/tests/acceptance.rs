//! One line per acceptance criterion, each with its time budget. Exits
//! nonzero if any criterion fails or overruns.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use equistark::corpus::{self, DEFAULT_SEED};
use equistark::fitting::laws;
use equistark::fixture::{self, Fixture, ModuleKind};
use equistark::stark::{smoothed_value, strong_stark_check};
use equistark::stickelberger::{
    check_integrality, containment_check, factor_at_v_check, sku_ideal, theta,
};
use equistark::verify::{cn_trick_check, dk_verify, ray_sequence_check};
use equistark::{CycloNumber, ExtensionDatum, LValueProvider, PlaceSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;
/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn p_part(n: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut out = BigInt::one();
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        out *= &p;
    }
    out
}

fn v_p(x: &BigRational, p: u64) -> i64 {
    let count = |n: &BigInt| {
        let mut k = 0i64;
        let mut m = n.abs();
        let p = BigInt::from(p);
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        k
    };
    count(x.numer()) - count(x.denom())
}

fn legendre(a: u64, p: u64) -> i64 {
    match (0..(p - 1) / 2).fold(1u64, |r, _| r * (a % p) % p) {
        1 => 1,
        0 => 0,
        _ => -1,
    }
}

/// Fraction-free elimination over Z.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stickelberger_crosscheck() -> Outcome {
    let conductors = [3u64, 4, 5, 7, 8, 9, 12, 15, 23];
    for f in conductors {
        let ext = ExtensionDatum::from_conductor(f, &[]).map_err(|e| e.to_string())?;
        let s = PlaceSet::infinite_and_ramified(&ext);
        let th = theta(&ext, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet)
            .map_err(|e| e.to_string())?;
        for a in (1..f).filter(|&a| gcd(a, f) == 1) {
            let inv = (1..f).find(|b| a * b % f == 1).unwrap();
            let at = ext.group().index_of(&ext.sigma(inv));
            let expected = q(1, 2) - q(a as i64, f as i64);
            ensure(th.coeffs()[at] == expected, || {
                format!("f = {f}: coefficient at σ_{inv} is {}", th.coeffs()[at])
            })?;
        }
    }
    Ok(format!("{} conductors", conductors.len()))
}

fn integrality() -> Outcome {
    let mut checked = 0;
    for c in corpus::integrality_cases() {
        let r = check_integrality(&c.ext, &c.s, &c.t, c.p).map_err(|e| e.to_string())?;
        if !r.hypotheses_hold() {
            continue;
        }
        let p = BigInt::from(c.p);
        let bad = r.theta.coeffs().iter().find(|x| (x.denom() % &p).is_zero());
        ensure(bad.is_none(), || {
            format!(
                "{} p = {} S = {} T = {}: coefficient {}",
                c.ext.id(),
                c.p,
                c.s,
                c.t,
                bad.unwrap()
            )
        })?;
        checked += 1;
    }
    ensure(checked >= 20, || {
        format!("only {checked} tuples satisfy the hypotheses")
    })?;
    Ok(format!("{checked} tuples"))
}

fn sku_integrality() -> Outcome {
    let cases = corpus::sku_cases();
    for (ext, t0) in &cases {
        let ideal = sku_ideal(ext, t0).map_err(|e| format!("{} T0 = {t0}: {e}", ext.id()))?;
        ensure(ideal.is_integral() && ideal.is_ideal(), || {
            format!("{} T0 = {t0}: not an integral ideal", ext.id())
        })?;
    }
    Ok(format!("{} fields and T0", cases.len()))
}

fn containment() -> Outcome {
    let required = [("f9", 3u64), ("f23", 3), ("f23", 5), ("f23", 11)];
    let mut seen = Vec::new();
    let mut checked = 0;
    for (ext, setup, hypothesis) in corpus::containment_cases() {
        if !hypothesis {
            continue;
        }
        let r = containment_check(&ext, &setup).map_err(|e| e.to_string())?;
        ensure(r.member, || {
            format!("{} p = {}: theta^# not in SKu", ext.id(), setup.p)
        })?;
        seen.push((ext.id(), setup.p));
        checked += 1;
    }
    for (id, p) in required {
        ensure(seen.iter().any(|(i, q)| i == id && *q == p), || {
            format!("{id} at p = {p} missing")
        })?;
    }
    let wild = ExtensionDatum::from_conductor(9, &[]).map_err(|e| e.to_string())?;
    ensure(wild.local(3).decomposition.contains(wild.j()), || {
        "j not in G_3 for conductor 9".into()
    })?;
    Ok(format!("{checked} instances"))
}

fn factor_at_v() -> Outcome {
    let configs = corpus::random_local_configs(200, DEFAULT_SEED);
    for (i, c) in configs.iter().enumerate() {
        let r = factor_at_v_check(
            &c.group,
            &c.decomposition,
            &c.inertia,
            &c.frobenius,
            c.norm,
            c.p,
        )
        .map_err(|e| format!("configuration {i}: {e}"))?;
        ensure(r.holds(), || format!("configuration {i}: {r:?}"))?;
    }
    Ok(format!("{} configurations", configs.len()))
}

fn fitting_laws() -> Outcome {
    let primes = [3u64, 5, 11];
    let mut total = 0;
    for n in [2u64, 6, 22] {
        let ambient = corpus::cyclic_minus(n);
        let mut rng = corpus::rng(DEFAULT_SEED ^ n);
        for i in 0..100 {
            let p = primes[i % primes.len()];
            let a = corpus::random_square_presentation(&ambient, 2, &mut rng);
            let b = corpus::random_square_presentation(&ambient, 2, &mut rng);
            let extra = vec![(0..a.generators())
                .map(|_| corpus::random_element_of(&ambient, 3, &mut rng))
                .collect()];
            let at = |law: &str| format!("C{n} sample {i} p = {p}: {law}");
            let run = |r: equistark::Result<bool>, law: &str| match r {
                Ok(true) => Ok(()),
                Ok(false) => Err(at(law)),
                Err(e) => Err(format!("{}: {e}", at(law))),
            };

            let index = a
                .fitting_ideal()
                .and_then(|f| f.p_part_index(p))
                .map_err(|e| at(&e.to_string()))?;
            let order = p_part(&bareiss(a.z_linearization()), p);
            ensure(index == order, || {
                at(&format!("index {index}, determinant oracle {order}"))
            })?;
            let (_, card) =
                laws::index_equals_cardinality(&a, p).map_err(|e| at(&e.to_string()))?;
            ensure(card == order, || {
                at(&format!("cardinality {card}, determinant oracle {order}"))
            })?;
            run(laws::dual_fitting(&a, p), "dual")?;
            run(laws::direct_sum(&a, &b), "direct sum")?;
            run(laws::surjection(&a, extra, p), "surjection")?;
            total += 1;
        }
    }
    Ok(format!("{total} presentations, 4 laws"))
}

fn load_all() -> Result<Vec<Fixture>, String> {
    fixture::COMMITTED
        .iter()
        .map(|(stem, _)| fixture::committed(stem).map_err(|e| format!("{stem}: {e}")))
        .collect()
}

fn dasgupta_kakde() -> Outcome {
    let mut seen = Vec::new();
    for fx in load_all()? {
        let r = dk_verify(&fx).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("{}: {r:?}", fx.id()))?;
        seen.push((fx.ext.conductor(), fx.p()));
    }
    for need in [(4u64, 3u64), (23, 3), (23, 5)] {
        ensure(seen.contains(&need), || {
            format!("no fixture for f = {}, p = {}", need.0, need.1)
        })?;
    }
    Ok(format!("{} fixtures", seen.len()))
}

/// The index of `(theta)` in the minus ring is the norm of `theta` there:
/// the product of its values at the odd characters.
fn class_number_index() -> Outcome {
    let all = load_all()?;
    for fx in &all {
        let ext = &fx.ext;
        let th = theta(
            ext,
            &PlaceSet::infinite(),
            &fx.t0(),
            &LValueProvider::Dirichlet,
        )
        .map_err(|e| e.to_string())?;
        let e = ext.group().exponent();
        let norm = ext
            .group()
            .dual_characters()
            .iter()
            .filter(|c| c.is_odd(ext.j()))
            .fold(CycloNumber::one(e), |acc, chi| {
                acc.mul(&th.char_eval(chi).coerce(e))
            })
            .as_rational()
            .ok_or_else(|| format!("{}: norm is not rational", fx.id()))?;
        ensure(norm.is_integer(), || {
            format!("{}: norm {norm} is not integral", fx.id())
        })?;
        let oracle = p_part(&norm.to_integer(), fx.p());
        let cardinality = fx
            .module(ModuleKind::RayClassGroup)
            .p_cardinality(fx.p())
            .map_err(|e| e.to_string())?;
        let r = cn_trick_check(fx).map_err(|e| e.to_string())?;
        ensure(
            r.holds() && r.theta_index == oracle && cardinality == oracle,
            || {
                format!(
                    "{}: {r:?}, norm oracle {oracle}, presentation {cardinality}",
                    fx.id()
                )
            },
        )?;
    }
    Ok(format!("{} fixtures", all.len()))
}

fn strong_stark() -> Outcome {
    let fx = fixture::committed("f23_p3_t07").map_err(|e| e.to_string())?;
    let ext = &fx.ext;
    let t0 = fx.t0();
    // L(0, chi) (1 - chi(7) 7) for the Legendre symbol mod 23
    let b1: BigRational = (1..23u64).map(|a| q(a as i64 * legendre(a, 23), 23)).sum();
    let quadratic = v_p(&(-b1 * q(1 - legendre(7, 23) * 7, 1)), 3);
    ensure(quadratic == 1, || {
        format!("quadratic oracle valuation {quadratic}")
    })?;

    let odd: Vec<_> = ext
        .group()
        .dual_characters()
        .into_iter()
        .filter(|c| c.is_odd(ext.j()))
        .collect();
    ensure(odd.len() == 11, || format!("{} odd characters", odd.len()))?;
    for chi in &odd {
        let c =
            strong_stark_check(ext, &fx.a_t0, &t0, chi, 3).map_err(|e| format!("{chi}: {e}"))?;
        let expected = if chi.order() == 2 {
            quadratic
        } else {
            let value = smoothed_value(ext, chi, &t0).map_err(|e| e.to_string())?;
            ensure(v_p(&value.norm(), 3) == 0, || {
                format!("{chi}: norm of L-value divisible by 3")
            })?;
            0
        };
        ensure(c.holds(), || {
            format!(
                "{chi}: Fitting {:?} against L-value {:?}",
                c.fitting, c.l_value
            )
        })?;
        ensure(c.fitting.iter().all(|&(_, v)| v == expected), || {
            format!("{chi}: {:?}, expected {expected}", c.fitting)
        })?;
    }
    Ok(format!("{} odd characters", odd.len()))
}

fn ray_sequence() -> Outcome {
    let all = load_all()?;
    for fx in &all {
        let p = fx.p();
        let card = |k| fx.module(k).p_cardinality(p).map_err(|e| e.to_string());
        let mu = p_part(&BigInt::from(fx.file.w_l), p);
        let left = mu * card(ModuleKind::RayClassGroup)?;
        let right = card(ModuleKind::ResidueUnits)? * card(ModuleKind::ClassGroup)?;
        let r = ray_sequence_check(fx);
        ensure(r.holds() && left == right && r.left == left, || {
            format!("{}: {r:?}, oracle {left} = {right}", fx.id())
        })?;
    }
    Ok(format!("{} fixtures", all.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("stickelberger-crosscheck", 1, stickelberger_crosscheck),
        ("integrality", 5, integrality),
        ("sku-integrality", 5, sku_integrality),
        ("containment", 10, containment),
        ("factor-at-v", 5, factor_at_v),
        ("fitting-laws", 30, fitting_laws),
        ("dasgupta-kakde", 5, dasgupta_kakde),
        ("class-number-index", 2, class_number_index),
        ("strong-stark", 5, strong_stark),
        ("ray-sequence", 2, ray_sequence),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= Duration::from_secs(budget) => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] {name}: {detail} ({:.3} s, budget {budget} s)",
            elapsed.as_secs_f64()
        );
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
