//! Worked examples checked against values computed independently here:
//! partial zeta sums, Legendre symbols and literature class numbers.

use equistark::fixture::{self, validate, FixtureFile, JsonInt, ModuleKind};
use equistark::lvalues::{b1, l0, minus_class_number_product};
use equistark::stark::{residue_module, residue_module_minus, strong_stark_check};
use equistark::stickelberger::{
    check_integrality, containment_check, containment_setup, sku_generators, sku_ideal, theta,
    theta_factorization_check,
};
use equistark::verify::{cn_trick_check, dk_verify, ray_sequence_check};
use equistark::{
    Ambient, DirichletChar, ExtensionDatum, GroupRingElt, LValueProvider, PlaceSet, ZLattice,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

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

fn inverse_mod(a: u64, f: u64) -> u64 {
    (1..f).find(|b| a * b % f == 1).unwrap()
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    for _ in 0..(p - 1) / 2 {
        r = r * (a % p) % p;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

fn v_p(mut n: BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

fn v_p_rational(x: &BigRational, p: u64) -> i64 {
    v_p(x.numer().clone(), p) - v_p(x.denom().clone(), p)
}

#[test]
fn theta_matches_partial_zeta_sum() {
    for f in [3u64, 4, 5, 7, 8, 9, 12, 15, 23] {
        let ext = ExtensionDatum::from_conductor(f, &[]).unwrap();
        let s = PlaceSet::infinite_and_ramified(&ext);
        let th = theta(&ext, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet).unwrap();
        let group = ext.group();
        for a in (1..f).filter(|&a| gcd(a, f) == 1) {
            let at = group.index_of(&ext.sigma(inverse_mod(a, f)));
            assert_eq!(
                th.coeffs()[at],
                q(1, 2) - q(a as i64, f as i64),
                "f = {f}, a = {a}"
            );
        }
    }
}

#[test]
fn gaussian_field_examples() {
    let ext = ExtensionDatum::from_conductor(4, &[]).unwrap();
    let g = ext.group();
    let s: PlaceSet = "inf,2".parse().unwrap();
    let th = theta(&ext, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet).unwrap();
    assert_eq!(th, GroupRingElt::from_coeffs(g, vec![q(1, 4), q(-1, 4)]));
    // T = {5}: multiply by 1 - 5 sigma_5^{-1}, and sigma_5 is the identity
    let th5 = theta(&ext, &s, &PlaceSet::finite([5]), &LValueProvider::Dirichlet).unwrap();
    assert_eq!(th5, th.scale(&q(-4, 1)));
    assert!(th5.is_integral());

    let gens = sku_generators(&ext, &PlaceSet::finite([5])).unwrap();
    let full = ZLattice::from_generators(&Ambient::Full(g.clone()), &gens).unwrap();
    // generators 2 + 2 sigma and -1 + sigma span a lattice of determinant 4
    assert_eq!(full.covolume(), q(4, 1));
    let minus = sku_ideal(&ext, &PlaceSet::finite([5])).unwrap();
    assert_eq!(minus.covolume(), q(2, 1));
}

#[test]
fn bernoulli_numbers_by_definition() {
    for f in [3u64, 4, 5, 7, 8, 11, 12, 13] {
        for chi in DirichletChar::all(f)
            .into_iter()
            .filter(|c| c.is_primitive() && !c.is_trivial())
        {
            let n = chi.value(1).order();
            let mut sum = equistark::CycloNumber::zero(n);
            for a in (1..f).filter(|&a| gcd(a, f) == 1) {
                sum = sum.add(&chi.value(a).coerce(n).scale(&q(a as i64, f as i64)));
            }
            assert_eq!(b1(&chi).unwrap().coerce(n), sum, "conductor {f}");
        }
    }
}

#[test]
fn quadratic_l_values_are_class_numbers() {
    // L(0, chi_{-d}) = 2 h / w for imaginary quadratic fields
    for (f, gens, h, w) in [
        (23u64, vec![2u64], 3i64, 2i64),
        (7, vec![2], 1, 2),
        (4, vec![], 1, 4),
        (3, vec![], 1, 6),
    ] {
        let ext = ExtensionDatum::from_conductor(f, &gens).unwrap();
        let chi = ext
            .group()
            .dual_characters()
            .into_iter()
            .find(|c| !c.is_trivial())
            .unwrap();
        let value = l0(&DirichletChar::from_character(&ext, &chi));
        assert_eq!(value.as_rational(), Some(q(2 * h, w)), "f = {f}");
    }
}

#[test]
fn minus_class_numbers_match_tables() {
    // h^- of Q(zeta_p); the unit index is 1 for prime conductors
    for (f, h) in [
        (3u64, 1i64),
        (5, 1),
        (7, 1),
        (11, 1),
        (13, 1),
        (17, 1),
        (19, 1),
        (23, 3),
        (29, 8),
        (31, 9),
    ] {
        let ext = ExtensionDatum::from_conductor(f, &[]).unwrap();
        assert_eq!(
            minus_class_number_product(&ext).unwrap(),
            q(h, 1),
            "f = {f}"
        );
    }
}

#[test]
fn integrality_examples() {
    let ext = ExtensionDatum::from_conductor(4, &[]).unwrap();
    let r = check_integrality(&ext, &"inf,2".parse().unwrap(), &PlaceSet::finite([5]), 3).unwrap();
    assert!(r.hypotheses_hold() && r.integral_at_p);
    // without T the coefficient 1/4 is not 2-integral
    let r = check_integrality(&ext, &"inf,2".parse().unwrap(), &PlaceSet::empty(), 2).unwrap();
    assert!(!r.hypotheses_hold());
    assert_eq!(r.offending.map(|(_, c)| c.abs()), Some(q(1, 4)));
}

#[test]
fn containment_tame_and_wild() {
    for (f, p) in [(23u64, 3u64), (23, 5), (23, 11), (9, 3)] {
        let ext = ExtensionDatum::from_conductor(f, &[]).unwrap();
        let setup = containment_setup(&ext, p, None).unwrap();
        if f == 9 {
            // wild: 3 stays in S1, and j lies in the decomposition group at 3
            assert!(setup.s1.contains_prime(3));
            assert!(ext.local(3).decomposition.contains(ext.j()));
        }
        assert!(theta_factorization_check(&ext, &setup).unwrap());
        assert!(
            containment_check(&ext, &setup).unwrap().member,
            "f = {f}, p = {p}"
        );
    }
}

#[test]
fn residue_module_orders() {
    // (O/v)^x for v over l in Q(zeta_23): g places of residue degree f
    let ext = ExtensionDatum::from_conductor(23, &[]).unwrap();
    for l in [2u64, 3, 5, 7, 47] {
        let order = (1..=22u32)
            .find(|&k| num_traits::pow(BigInt::from(l), k as usize) % 23u32 == BigInt::one())
            .unwrap();
        let g = 22 / order as usize;
        let expected = num_traits::pow(num_traits::pow(BigInt::from(l), order as usize) - 1, g);
        assert_eq!(
            residue_module(&ext, l).unwrap().cardinality().unwrap(),
            expected,
            "l = {l}"
        );
    }
    // the minus part at 5: 5^11 + 1, since j acts as Frob^11
    let m = residue_module_minus(&ext, 5).unwrap();
    assert_eq!(
        m.cardinality().unwrap(),
        num_traits::pow(BigInt::from(5), 11) + 1
    );
}

#[test]
fn committed_fixtures_validate() {
    for &(stem, text) in fixture::COMMITTED {
        let file = FixtureFile::parse(text).unwrap();
        let fx = validate(&file).unwrap_or_else(|v| panic!("{stem}: {v:?}"));
        let value: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(
            file.to_canonical_json(),
            fixture::canonical_json(&value),
            "{stem} round trip"
        );
        for kind in ModuleKind::ALL {
            assert_eq!(
                fx.module(kind).p_cardinality(fx.p()).unwrap(),
                *fx.declared(kind)
            );
        }
    }
    let fx = fixture::committed("f23_p3_t07").unwrap();
    assert_eq!(fx.declared(ModuleKind::RayClassGroup), &BigInt::from(3));
    let fx = fixture::committed("f4_p3_t05").unwrap();
    assert_eq!(fx.declared(ModuleKind::ClassGroup), &BigInt::one());
}

#[test]
fn corrupted_fixture_names_the_invariant() {
    let (_, text) = fixture::COMMITTED
        .iter()
        .find(|(s, _)| *s == "f23_p3_t07")
        .unwrap();
    let mut file = FixtureFile::parse(text).unwrap();
    file.modules.a.cardinality = JsonInt(BigInt::from(9));
    let violations = validate(&file).unwrap_err();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0].invariant, "cardinality");

    let mut file = FixtureFile::parse(text).unwrap();
    let entry = file.modules.a_t0.relations[0][0].clone();
    file.modules.a_t0.relations[0].push(entry);
    let names: Vec<_> = validate(&file)
        .unwrap_err()
        .into_iter()
        .map(|v| v.invariant)
        .collect();
    assert_eq!(names, vec!["shape"]);
}

#[test]
fn fixture_identities() {
    for &(stem, _) in fixture::COMMITTED {
        let fx = fixture::committed(stem).unwrap();
        let dk = dk_verify(&fx).unwrap();
        assert!(dk.holds(), "{stem}: {dk:?}");
        let cn = cn_trick_check(&fx).unwrap();
        assert!(cn.holds(), "{stem}: {cn:?}");
        let ray = ray_sequence_check(&fx);
        assert!(ray.holds(), "{stem}: {ray:?}");
    }
}

#[test]
fn strong_stark_for_conductor_23() {
    for (stem, t0, quadratic_valuation) in [("f23_p3_t07", 7u64, 1i64), ("f23_p3_t05", 5, 2)] {
        let fx = fixture::committed(stem).unwrap();
        let ext = &fx.ext;
        // L(0, chi) (1 - chi(t0) t0) with chi the Legendre symbol mod 23
        let b1: BigRational = (1..23u64).map(|a| q(a as i64 * legendre(a, 23), 23)).sum();
        let smoothed = -b1 * q(1 - legendre(t0, 23) * t0 as i64, 1);
        assert_eq!(v_p_rational(&smoothed, 3), quadratic_valuation);

        let odd: Vec<_> = ext
            .group()
            .dual_characters()
            .into_iter()
            .filter(|c| c.is_odd(ext.j()))
            .collect();
        assert_eq!(odd.len(), 11);
        for chi in odd {
            let c = strong_stark_check(ext, &fx.a_t0, &fx.t0(), &chi, 3).unwrap();
            assert!(c.holds(), "{stem} {chi}");
            let expected = if chi.order() == 2 {
                quadratic_valuation
            } else {
                // the norm of the L-value is prime to 3
                let value = equistark::stark::smoothed_value(ext, &chi, &fx.t0()).unwrap();
                assert_eq!(v_p_rational(&value.norm(), 3), 0);
                0
            };
            assert!(
                c.l_value.iter().all(|&(_, v)| v == expected),
                "{stem} {chi}: {:?}",
                c.l_value
            );
        }
    }
}
