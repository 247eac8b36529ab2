//! Character components for `p` not dividing `|G|`: valuations of Fitting
//! ideals of `chi`-parts against valuations of smoothed L-values.

use num_bigint::BigInt;

use crate::abelian::Character;
use crate::arith;
use crate::cyclo::{self, CycloNumber};
use crate::error::{Error, Result};
use crate::extension::ExtensionDatum;
use crate::fitting::ModulePresentation;
use crate::group_ring::GroupRingElt;
use crate::lattice::Ambient;
use crate::lvalues::{l0_st, DirichletChar};
use crate::padic;
use crate::places::PlaceSet;
use crate::stickelberger::minus_context;

/// Number of finite places in `S` whose decomposition group lies in the
/// kernel of `chi`.
pub fn d_s(ext: &ExtensionDatum, chi: &Character, s: &PlaceSet) -> usize {
    s.primes()
        .filter(|&l| chi.is_trivial_on(&ext.local(l).decomposition))
        .count()
}

/// `Z[G] / (Frob_{v0} - N(v0))`, the units of the residue rings above `v0`.
pub fn residue_module(ext: &ExtensionDatum, v0: u64) -> Result<ModulePresentation> {
    residue_module_in(ext, v0, &Ambient::Full(ext.group().clone()))
}

/// The minus part of [`residue_module`].
pub fn residue_module_minus(ext: &ExtensionDatum, v0: u64) -> Result<ModulePresentation> {
    residue_module_in(ext, v0, &Ambient::Minus(minus_context(ext)))
}

fn residue_module_in(
    ext: &ExtensionDatum,
    v0: u64,
    ambient: &Ambient,
) -> Result<ModulePresentation> {
    if !arith::is_prime(v0) {
        return Err(Error::InvalidInput(format!("{v0} is not a prime")));
    }
    if ext.is_ramified(v0) {
        return Err(Error::Ramified(v0));
    }
    let group = ext.group();
    let local = ext.local(v0);
    let rel = GroupRingElt::basis(group, &local.frobenius).sub(&GroupRingElt::from_rational(
        group,
        arith::rational(local.norm as i64, 1),
    ));
    ModulePresentation::cyclic(ambient, rel)
}

/// `(N(v0)^f - 1)^g` with `f` the residue degree and `g` the number of
/// places above `v0`.
pub fn residue_cardinality(ext: &ExtensionDatum, v0: u64) -> BigInt {
    let local = ext.local(v0);
    let f = local.decomposition.order() as usize;
    let g = local.decomposition.index() as usize;
    num_traits::pow(num_traits::pow(BigInt::from(v0), f) - 1, g)
}

fn check_component(
    group_order: u64,
    chi: &Character,
    ext_j: Option<&crate::abelian::GroupElement>,
    p: u64,
) -> Result<()> {
    if group_order.is_multiple_of(p) {
        return Err(Error::InvalidInput(format!(
            "p = {p} divides |G| = {group_order}"
        )));
    }
    if let Some(j) = ext_j {
        if !chi.is_odd(j) {
            return Err(Error::InvalidInput(format!(
                "{chi} is even; minus presentations need odd characters"
            )));
        }
    }
    Ok(())
}

/// Valuations, at each prime of `Q(zeta_{exp G})` above `p`, of the Fitting
/// ideal of the `chi`-part: the minimum over maximal minors of `chi(minor)`.
pub fn chi_fitting_valuation(
    pres: &ModulePresentation,
    chi: &Character,
    p: u64,
) -> Result<Vec<(u64, i64)>> {
    let group = pres.ambient().group();
    let j = match pres.ambient() {
        Ambient::Minus(ctx) => Some(ctx.j().clone()),
        Ambient::Full(_) => None,
    };
    check_component(group.order(), chi, j.as_ref(), p)?;
    let n = pres.generators();
    if n == 0 {
        let reps = padic::orbit_representatives(group.exponent(), p);
        return Ok(reps.into_iter().map(|t| (t, 0)).collect());
    }
    let rows = pres.relations();
    let mut best: Option<Vec<(u64, i64)>> = None;
    for subset in subsets(rows.len(), n) {
        let m: Vec<Vec<CycloNumber>> = subset
            .iter()
            .map(|&r| rows[r].iter().map(|x| x.char_eval(chi)).collect())
            .collect();
        let det = cyclo::determinant(&m);
        if det.is_zero() {
            continue;
        }
        let vals = padic::padic_valuations(&det, p, padic::DEFAULT_PRECISION)?;
        best = Some(match best {
            None => vals,
            Some(b) => b
                .iter()
                .zip(&vals)
                .map(|(&(t, x), &(_, y))| (t, x.min(y)))
                .collect(),
        });
    }
    best.ok_or(Error::InfiniteCokernel)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// `L_{S_infinity}^{T0}(0, chi_dual)` in `Q(zeta_{exp G})`.
pub fn smoothed_value(ext: &ExtensionDatum, chi: &Character, t0: &PlaceSet) -> Result<CycloNumber> {
    let dual = DirichletChar::from_character(ext, &chi.dual());
    let v = l0_st(&dual, ext, &PlaceSet::infinite(), t0)?;
    Ok(v.coerce(arith::lcm(ext.group().exponent(), v.order())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarkComparison {
    pub character: Character,
    /// `(orbit label, valuation)` of the Fitting ideal of the `chi`-part.
    pub fitting: Vec<(u64, i64)>,
    /// `(orbit label, valuation)` of the smoothed L-value.
    pub l_value: Vec<(u64, i64)>,
}

impl StarkComparison {
    pub fn holds(&self) -> bool {
        self.fitting == self.l_value
    }
}

/// Compares the `chi`-part of the minus `T0`-ray class module with the
/// smoothed L-value at `chi_dual`, prime by prime above `p`.
pub fn strong_stark_check(
    ext: &ExtensionDatum,
    ray_class: &ModulePresentation,
    t0: &PlaceSet,
    chi: &Character,
    p: u64,
) -> Result<StarkComparison> {
    if p == 2 {
        return Err(Error::InvalidInput("p must be odd".into()));
    }
    if !ray_class.is_square() {
        return Err(Error::NotSquare {
            rows: ray_class.relations().len(),
            cols: ray_class.generators(),
        });
    }
    check_component(ext.group().order(), chi, Some(ext.j()), p)?;
    let value = smoothed_value(ext, chi, t0)?;
    if value.is_zero() {
        return Err(Error::VanishingValue(chi.to_string()));
    }
    let l_value = padic::padic_valuations(&value, p, padic::DEFAULT_PRECISION)?;
    let fitting = chi_fitting_valuation(ray_class, chi, p)?;
    Ok(StarkComparison {
        character: chi.clone(),
        fitting,
        l_value,
    })
}
