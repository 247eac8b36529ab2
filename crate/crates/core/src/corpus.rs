//! Test corpus: small CM fields, place data satisfying the integrality
//! hypotheses, and seeded random local configurations and presentations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::error::Result;
use crate::extension::ExtensionDatum;
use crate::fitting::ModulePresentation;
use crate::group_ring::{GroupRingElt, MinusContext};
use crate::lattice::Ambient;
use crate::places::PlaceSet;
use crate::stickelberger::{
    containment_hypothesis, containment_setup, default_t0, ContainmentSetup,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2357;

/// `(conductor, generators of H)` for the corpus fields.
pub const FIELDS: &[(u64, &[u64])] = &[
    (3, &[]),
    (4, &[]),
    (5, &[]),
    (7, &[]),
    (8, &[]),
    (9, &[]),
    (11, &[]),
    (12, &[]),
    (13, &[]),
    (15, &[]),
    (16, &[]),
    (20, &[]),
    (21, &[]),
    (23, &[]),
    (7, &[2]),
    (23, &[2]),
    (13, &[3]),
    (19, &[7]),
    (29, &[16]),
    (31, &[2]),
];

pub fn fields() -> Vec<ExtensionDatum> {
    FIELDS
        .iter()
        .map(|&(f, h)| ExtensionDatum::from_conductor(f, h).expect("corpus field is CM"))
        .collect()
}

/// One `(L, p, S, T)` instance.
#[derive(Debug, Clone)]
pub struct IntegralityCase {
    pub ext: ExtensionDatum,
    pub p: u64,
    pub s: PlaceSet,
    pub t: PlaceSet,
}

/// For every field and `p` in `{3, 5, 7}`: the minimal choice (infinity and
/// wild places in `S`, other ramification in `T`) and the maximal one (all
/// ramification in `S`).
pub fn integrality_cases() -> Vec<IntegralityCase> {
    let mut out = Vec::new();
    for ext in fields() {
        for p in [3, 5, 7] {
            let setup = containment_setup(&ext, p, None).expect("default T0 is admissible");
            out.push(IntegralityCase {
                ext: ext.clone(),
                p,
                s: setup.s1.clone(),
                t: setup.t.clone(),
            });
            out.push(IntegralityCase {
                ext: ext.clone(),
                p,
                s: PlaceSet::infinite_and_ramified(&ext),
                t: setup.t0_set(),
            });
        }
    }
    out
}

/// `(field, T0)` pairs for the Sinnott-Kurihara ideal.
pub fn sku_cases() -> Vec<(ExtensionDatum, PlaceSet)> {
    fields()
        .into_iter()
        .flat_map(|ext| {
            [3u64, 5].map(|p| {
                let t0 = default_t0(&ext, p);
                (ext.clone(), PlaceSet::finite([t0]))
            })
        })
        .collect()
}

/// Containment instances at `p` in `{3, 5, 7, 11}`, with whether the
/// tame-or-`j`-in-decomposition hypothesis holds.
pub fn containment_cases() -> Vec<(ExtensionDatum, ContainmentSetup, bool)> {
    let mut out = Vec::new();
    for ext in fields() {
        for p in [3, 5, 7, 11] {
            let setup = containment_setup(&ext, p, None).expect("default T0 is admissible");
            let ok = containment_hypothesis(&ext, p).is_ok();
            out.push((ext.clone(), setup, ok));
        }
    }
    out
}

/// A local configuration `I <= G_v = <I, Frob> <= G` with norm `N(v)`.
#[derive(Debug, Clone)]
pub struct LocalConfig {
    pub group: FiniteAbelianGroup,
    pub decomposition: Subgroup,
    pub inertia: Subgroup,
    pub frobenius: GroupElement,
    pub norm: u64,
    pub p: u64,
}

/// Admissible configurations: `p` odd, `p` prime to `N(v)` and
/// `|I| | N(v) - 1` as for tame inertia.
pub fn random_local_configs(count: usize, seed: u64) -> Vec<LocalConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let group = random_group(&mut rng);
            let inertia = group.subgroup(&[random_element(&group, &mut rng)]);
            let frobenius = random_element(&group, &mut rng);
            let mut gens = inertia.generators().to_vec();
            gens.push(frobenius.clone());
            let decomposition = group.subgroup(&gens);
            let p = *[3u64, 5, 7].choose(&mut rng).unwrap();
            let e = inertia.order();
            let norm = loop {
                let n = 1 + e * rng.gen_range(1..40u64);
                if !n.is_multiple_of(p) && n > 1 {
                    break n;
                }
            };
            LocalConfig {
                group,
                decomposition,
                inertia,
                frobenius,
                norm,
                p,
            }
        })
        .collect()
}

fn random_group(rng: &mut ChaCha8Rng) -> FiniteAbelianGroup {
    match rng.gen_range(0..3) {
        0 => FiniteAbelianGroup::cyclic(rng.gen_range(2..=12)),
        1 => FiniteAbelianGroup::from_invariants(vec![2, 2 * rng.gen_range(1..=4)]),
        _ => FiniteAbelianGroup::from_invariants(vec![3, 3 * rng.gen_range(1..=2)]),
    }
}

fn random_element(group: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> GroupElement {
    group.element_at(rng.gen_range(0..group.order() as usize))
}

/// The minus ring of the cyclic group of order `n` (`n` even), with `j`
/// the element of order 2.
pub fn cyclic_minus(n: u64) -> Ambient {
    let g = FiniteAbelianGroup::cyclic(n);
    let j = g.element(&[(n / 2) as i64]);
    Ambient::minus(MinusContext::new(&g, &j).expect("n is even"))
}

/// A random integral element of the ambient with coefficients in `[-b, b]`.
pub fn random_element_of(ambient: &Ambient, bound: i64, rng: &mut ChaCha8Rng) -> GroupRingElt {
    let group = ambient.group();
    let coeffs: Vec<i64> = (0..group.order())
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    ambient.reduce(&GroupRingElt::from_integers(group, &coeffs))
}

/// A random square presentation with finite cokernel on at most `max_n`
/// generators.
pub fn random_square_presentation(
    ambient: &Ambient,
    max_n: usize,
    rng: &mut ChaCha8Rng,
) -> ModulePresentation {
    loop {
        let n = rng.gen_range(1..=max_n);
        let rows = (0..n)
            .map(|_| (0..n).map(|_| random_element_of(ambient, 3, rng)).collect())
            .collect();
        let pres = ModulePresentation::new(ambient, n, rows).expect("well formed");
        if pres.cardinality().is_ok() {
            return pres;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ensures every corpus field rebuilds with its declared conductor.
pub fn check_fields() -> Result<()> {
    for (&(f, _), ext) in FIELDS.iter().zip(fields()) {
        if ext.conductor() != f {
            return Err(crate::error::Error::Invariant(format!(
                "corpus field f = {f} reduced to {}",
                ext.conductor()
            )));
        }
    }
    Ok(())
}
