//! Verification pipelines producing verdicts, shared by the command line
//! and the self test.

use std::time::Instant;

use rayon::prelude::*;

use crate::arith;
use crate::corpus::{self, LocalConfig};
use crate::error::{Error, Result};
use crate::extension::ExtensionDatum;
use crate::fitting::{laws, ModulePresentation};
use crate::fixture::{self, Fixture, ModuleKind};
use crate::group_ring::GroupRingElt;
use crate::lvalues::LValueProvider;
use crate::places::PlaceSet;
use crate::report::{format_element, Verdict};
use crate::stickelberger::{
    check_integrality, containment_check, containment_hypothesis, containment_setup,
    factor_at_v_check, sku_ideal, theta, theta_factorization_sides,
};
use crate::verify;

/// Two presentations, an extra relation row for the first, and a prime.
type Sample = (
    ModulePresentation,
    ModulePresentation,
    Vec<Vec<GroupRingElt>>,
    u64,
);
type Law = dyn Fn(&Sample) -> Result<Option<String>> + Sync;

fn target(ext: &ExtensionDatum, p: u64) -> String {
    format!("{}-p{p}", ext.id())
}

/// `theta` with `S` the infinite and ramified places and `T` empty, against
/// the partial zeta values `1/2 - a/f` of the full cyclotomic field.
pub fn stickelberger_crosscheck(f: u64) -> Result<Verdict> {
    let start = Instant::now();
    let ext = ExtensionDatum::from_conductor(f, &[])?;
    let s = PlaceSet::infinite_and_ramified(&ext);
    let group = ext.group();
    let mut values = vec![arith::rational(0, 1); group.order() as usize];
    for a in (1..f).filter(|&a| arith::gcd(a, f) == 1) {
        values[group.index_of(&ext.sigma(a))] =
            arith::rational(1, 2) - arith::rational(a as i64, f as i64);
    }
    let provider = LValueProvider::partial_zeta(&ext, s.clone(), values)?;
    let lhs = theta(&ext, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet)?;
    let rhs = theta(&ext, &s, &PlaceSet::empty(), &provider)?;
    Ok(Verdict::outcome(
        "stickelberger-crosscheck",
        &ext.id(),
        lhs == rhs,
        vec![
            ("theta", format_element(&ext, &lhs)),
            ("partial_zeta", format_element(&ext, &rhs)),
        ],
    )
    .timed(start))
}

pub fn integrality(ext: &ExtensionDatum, s: &PlaceSet, t: &PlaceSet, p: u64) -> Result<Verdict> {
    let start = Instant::now();
    let r = check_integrality(ext, s, t, p)?;
    let name = format!("{}-S{s}-T{t}", target(ext, p));
    if !r.hypotheses_hold() {
        let labels = [
            "S u T covers tame ramification",
            "S covers wild p-adic ramification",
            "infinity in S",
            "E^T torsion free",
        ];
        let failed: Vec<&str> = r
            .hypotheses
            .iter()
            .zip(labels)
            .filter(|(h, _)| !**h)
            .map(|(_, l)| l)
            .collect();
        return Ok(Verdict::skip(
            "integrality",
            &name,
            format!("hypotheses fail: {}", failed.join(", ")),
        )
        .timed(start));
    }
    let mut witness = vec![("denominator", r.theta.denominator().to_string())];
    if let Some((g, c)) = &r.offending {
        witness.push((
            "coefficient",
            format!("{} at σ_{}", arith::format_rational(c), ext.label(g)),
        ));
    }
    Ok(Verdict::outcome("integrality", &name, r.integral_at_p, witness).timed(start))
}

pub fn sku_integrality(ext: &ExtensionDatum, t0: &PlaceSet) -> Result<Verdict> {
    let start = Instant::now();
    let name = format!("{}-T0{t0}", ext.id());
    match sku_ideal(ext, t0) {
        Ok(l) => Ok(Verdict::outcome(
            "sku-integral",
            &name,
            true,
            vec![("covolume", l.covolume().to_string())],
        )),
        Err(Error::Invariant(msg)) => Ok(Verdict::outcome(
            "sku-integral",
            &name,
            false,
            vec![("reason", msg)],
        )),
        Err(e) => Err(e),
    }
    .map(|v| v.timed(start))
}

/// The containment pipeline at `p`: integrality of `theta_{S1}^T`, its
/// factorization through `theta_{S_inf}^{T0}`, the local factors at `T`,
/// integrality of the Sinnott-Kurihara ideal, and membership.
pub fn etnc(ext: &ExtensionDatum, p: u64, t0: Option<u64>) -> Result<Vec<Verdict>> {
    let setup = containment_setup(ext, p, t0)?;
    let name = format!("{}-t0{}", target(ext, p), setup.t0);
    let mut out = vec![integrality(ext, &setup.s1, &setup.t, p)?];

    let start = Instant::now();
    let (lhs, rhs) = theta_factorization_sides(ext, &setup)?;
    out.push(
        Verdict::outcome(
            "theta-factorization",
            &name,
            lhs == rhs,
            vec![
                ("lhs", format_element(ext, &lhs)),
                ("rhs", format_element(ext, &rhs)),
            ],
        )
        .timed(start),
    );

    for l in setup.t.primes().filter(|&l| ext.is_ramified(l)) {
        let local = ext.local(l);
        let config = LocalConfig {
            group: ext.group().clone(),
            decomposition: local.decomposition.clone(),
            inertia: local.inertia.clone(),
            frobenius: local.frobenius.clone(),
            norm: l,
            p,
        };
        out.push(factor_at_v(&config, &format!("{name}-v{l}"))?);
    }

    out.push(sku_integrality(ext, &setup.t0_set())?);

    let start = Instant::now();
    match containment_hypothesis(ext, p) {
        Err(why) => out.push(Verdict::skip("containment", &name, why)),
        Ok(()) => {
            let r = containment_check(ext, &setup)?;
            out.push(
                Verdict::outcome(
                    "containment",
                    &name,
                    r.member,
                    vec![
                        ("theta_sharp", format_element(ext, &r.theta_sharp)),
                        ("S1", setup.s1.to_string()),
                        ("T", setup.t.to_string()),
                    ],
                )
                .timed(start),
            );
        }
    }
    Ok(out)
}

pub fn factor_at_v(c: &LocalConfig, name: &str) -> Result<Verdict> {
    let start = Instant::now();
    match factor_at_v_check(
        &c.group,
        &c.decomposition,
        &c.inertia,
        &c.frobenius,
        c.norm,
        c.p,
    ) {
        Ok(r) => Ok(Verdict::outcome(
            "factor-at-v",
            name,
            r.holds(),
            vec![
                ("identity", r.identity.to_string()),
                ("member", r.member.to_string()),
            ],
        )
        .timed(start)),
        Err(Error::NonAdmissible(why)) => Ok(Verdict::skip("factor-at-v", name, why)),
        Err(e) => Err(e),
    }
}

/// The four Fitting-ideal laws over `count` random presentations in the
/// minus ring of the cyclic group of order `n`, one verdict per law.
pub fn fitting_laws(n: u64, count: usize, seed: u64) -> Result<Vec<Verdict>> {
    let ambient = corpus::cyclic_minus(n);
    let name = format!("C{n}-minus");
    let mut rng = corpus::rng(seed ^ n);
    let primes = [3u64, 5, 11];
    let cases: Vec<Sample> = (0..count)
        .map(|i| {
            let a = corpus::random_square_presentation(&ambient, 2, &mut rng);
            let b = corpus::random_square_presentation(&ambient, 2, &mut rng);
            let extra = vec![(0..a.generators())
                .map(|_| corpus::random_element_of(&ambient, 3, &mut rng))
                .collect()];
            (a, b, extra, primes[i % primes.len()])
        })
        .collect();

    let run = |law: &str, f: &Law| -> Result<Verdict> {
        let start = Instant::now();
        let failures: Vec<(usize, String)> = cases
            .par_iter()
            .enumerate()
            .map(|(i, sample)| f(sample).map(|w| w.map(|w| (i, w))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut witness = vec![("samples", count.to_string())];
        if let Some((i, w)) = failures.first() {
            witness.push(("first_failure", format!("sample {i}: {w}")));
            witness.push(("failures", failures.len().to_string()));
        }
        Ok(Verdict::outcome(law, &name, failures.is_empty(), witness).timed(start))
    };

    Ok(vec![
        run("fitting-index-equals-cardinality", &|(a, _, _, p)| {
            let (index, card) = laws::index_equals_cardinality(a, *p)?;
            Ok((index != card).then(|| format!("index {index}, cardinality {card} at p = {p}")))
        })?,
        run("fitting-dual", &|(a, _, _, p)| {
            Ok((!laws::dual_fitting(a, *p)?)
                .then(|| format!("Fitt(M^dual) != Fitt(M)^# at p = {p}")))
        })?,
        run("fitting-direct-sum", &|(a, b, _, _)| {
            Ok((!laws::direct_sum(a, b)?).then(|| "Fitt(A + B) != Fitt(A) Fitt(B)".to_string()))
        })?,
        run("fitting-surjection", &|(a, _, extra, p)| {
            Ok((!laws::surjection(a, extra.clone(), *p)?)
                .then(|| format!("Fitt(A) not in Fitt(quotient) at p = {p}")))
        })?,
    ])
}

/// Dasgupta-Kakde equality, the class-number index identity and the ray
/// sequence on one fixture.
pub fn fixture_modules(fx: &Fixture) -> Result<Vec<Verdict>> {
    let name = fx.id().to_string();
    let start = Instant::now();
    let dk = verify::dk_verify(fx)?;
    let dk_v = Verdict::outcome(
        "dasgupta-kakde",
        &name,
        dk.holds(),
        vec![
            ("equal_at_p", dk.equal_at_p.to_string()),
            ("sku_index", dk.sku_index.to_string()),
            ("cardinality", dk.cardinality.to_string()),
        ],
    )
    .timed(start);
    let start = Instant::now();
    let cn = verify::cn_trick_check(fx)?;
    let cn_v = Verdict::outcome(
        "class-number-index",
        &name,
        cn.holds(),
        vec![
            ("theta_index", cn.theta_index.to_string()),
            ("cardinality", cn.cardinality.to_string()),
        ],
    )
    .timed(start);
    let start = Instant::now();
    let ray = verify::ray_sequence_check(fx);
    let ray_v = Verdict::outcome(
        "ray-sequence",
        &name,
        ray.holds(),
        vec![
            ("mu_times_A_T0", ray.left.to_string()),
            ("residue_times_A", ray.right.to_string()),
        ],
    )
    .timed(start);
    Ok(vec![dk_v, cn_v, ray_v])
}

/// Per-character strong Stark comparison on a fixture.
pub fn strong_stark(fx: &Fixture) -> Result<Vec<Verdict>> {
    let name = fx.id().to_string();
    let ext = &fx.ext;
    let p = fx.p();
    if ext.group().order().is_multiple_of(p) {
        return Ok(vec![Verdict::skip(
            "strong-stark",
            &name,
            format!("p = {p} divides |G| = {}", ext.group().order()),
        )]);
    }
    let chars: Vec<_> = ext
        .group()
        .dual_characters()
        .into_iter()
        .filter(|c| c.is_odd(ext.j()))
        .collect();
    chars
        .par_iter()
        .map(|chi| {
            let start = Instant::now();
            let label = format!("{chi} order {}", chi.order());
            match crate::stark::strong_stark_check(ext, &fx.a_t0, &fx.t0(), chi, p) {
                Ok(c) => Ok(Verdict::outcome(
                    "strong-stark",
                    &name,
                    c.holds(),
                    vec![
                        ("fitting", format!("{:?}", c.fitting)),
                        ("l_value", format!("{:?}", c.l_value)),
                    ],
                )
                .with_character(label)
                .timed(start)),
                Err(Error::VanishingValue(v)) => {
                    Ok(
                        Verdict::skip("strong-stark", &name, format!("L-value vanishes at {v}"))
                            .with_character(label),
                    )
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Acceptance-scale run over the corpus and the committed fixtures.
pub fn selftest(seed: u64, presentations: usize) -> Result<Vec<Verdict>> {
    corpus::check_fields()?;
    let mut jobs: Vec<Box<dyn Fn() -> Result<Vec<Verdict>> + Send + Sync>> = Vec::new();
    for f in [3u64, 4, 5, 7, 8, 9, 12, 15, 23] {
        jobs.push(Box::new(move || Ok(vec![stickelberger_crosscheck(f)?])));
    }
    for c in corpus::integrality_cases() {
        jobs.push(Box::new(move || {
            Ok(vec![integrality(&c.ext, &c.s, &c.t, c.p)?])
        }));
    }
    for (ext, t0) in corpus::sku_cases() {
        jobs.push(Box::new(move || Ok(vec![sku_integrality(&ext, &t0)?])));
    }
    for (ext, setup, _) in corpus::containment_cases() {
        jobs.push(Box::new(move || etnc(&ext, setup.p, Some(setup.t0))));
    }
    jobs.push(Box::new(move || {
        corpus::random_local_configs(200, seed)
            .iter()
            .enumerate()
            .map(|(i, c)| factor_at_v(c, &format!("random-{i:03}")))
            .collect()
    }));
    for n in [2u64, 6, 22] {
        jobs.push(Box::new(move || fitting_laws(n, presentations, seed)));
    }
    for &(stem, _) in fixture::COMMITTED {
        jobs.push(Box::new(move || {
            let fx = fixture::committed(stem)?;
            let mut v = vec![Verdict::outcome(
                "fixture-valid",
                fx.id(),
                true,
                vec![("A_T0", fx.declared(ModuleKind::RayClassGroup).to_string())],
            )];
            v.extend(fixture_modules(&fx)?);
            v.extend(strong_stark(&fx)?);
            Ok(v)
        }));
    }
    let nested: Vec<Vec<Verdict>> = jobs.par_iter().map(|job| job()).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}
