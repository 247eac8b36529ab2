//! Stickelberger elements, their p-integrality, the Sinnott-Kurihara ideal
//! and the containment of Stickelberger elements in it.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::abelian::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::arith;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::extension::ExtensionDatum;
use crate::group_ring::{assemble_from_char_values, GroupRingElt, MinusContext};
use crate::lattice::{Ambient, ZLattice};
use crate::lvalues::{l0_st, DirichletChar, LValueProvider};
use crate::places::PlaceSet;

/// `e_I = |I|^{-1} N_I`.
pub fn idempotent(h: &Subgroup) -> GroupRingElt {
    GroupRingElt::norm_element(h).scale(&arith::rational(1, h.order() as i64))
}

/// `1 - N(v) Frob_v^{-1} e_{I_v}`, the group ring smoothing factor at `l`.
pub fn smoothing_factor(ext: &ExtensionDatum, l: u64) -> GroupRingElt {
    let local = ext.local(l);
    let group = ext.group();
    let frob_inv = GroupRingElt::basis(group, &group.inverse(&local.frobenius));
    let n = arith::rational(local.norm as i64, 1);
    GroupRingElt::one(group).sub(&frob_inv.mul(&idempotent(&local.inertia)).scale(&n))
}

/// `1 - Frob_v^{-1} e_{I_v}`, the group ring Euler factor at `l`.
pub fn euler_factor(ext: &ExtensionDatum, l: u64) -> GroupRingElt {
    let local = ext.local(l);
    let group = ext.group();
    let frob_inv = GroupRingElt::basis(group, &group.inverse(&local.frobenius));
    GroupRingElt::one(group).sub(&frob_inv.mul(&idempotent(&local.inertia)))
}

/// `L_S^T(0, chi_dual)` for every character `chi` of `G`, in canonical order.
pub fn theta_values(ext: &ExtensionDatum, s: &PlaceSet, t: &PlaceSet) -> Result<Vec<CycloNumber>> {
    ext.group()
        .dual_characters()
        .iter()
        .map(|chi| l0_st(&DirichletChar::from_character(ext, &chi.dual()), ext, s, t))
        .collect()
}

/// The Stickelberger element `theta_S^T` with `chi(theta) = L_S^T(0, chi_dual)`.
pub fn theta(
    ext: &ExtensionDatum,
    s: &PlaceSet,
    t: &PlaceSet,
    provider: &LValueProvider,
) -> Result<GroupRingElt> {
    if !s.has_infinite() {
        return Err(Error::InvalidInput(
            "S must contain the infinite place".into(),
        ));
    }
    s.check_disjoint(t)?;
    match provider {
        LValueProvider::Dirichlet => {
            assemble_from_char_values(ext.group(), &theta_values(ext, s, t)?)
        }
        LValueProvider::PartialZeta(table) => {
            if &table.s != s {
                return Err(Error::ProviderGap(format!(
                    "partial zeta values are for S = {}, not {s}",
                    table.s
                )));
            }
            let group = ext.group();
            if table.values.len() as u64 != group.order() {
                return Err(Error::ProviderGap(
                    "partial zeta table does not cover G".into(),
                ));
            }
            let mut x = GroupRingElt::zero(group);
            for (i, z) in table.values.iter().enumerate() {
                let g = group.inverse(&group.element_at(i));
                x = x.add(&GroupRingElt::basis(group, &g).scale(z));
            }
            for l in t.primes() {
                x = x.mul(&smoothing_factor(ext, l));
            }
            Ok(x)
        }
    }
}

/// `E^T` torsion-free: every prime `q | w_L` is avoided by the residue
/// characteristic of some place in `T`.
pub fn torsionfree(ext: &ExtensionDatum, t: &PlaceSet) -> bool {
    arith::prime_divisors(ext.roots_of_unity())
        .into_iter()
        .all(|q| t.primes().any(|l| l != q))
}

#[derive(Debug, Clone)]
pub struct IntegralityReport {
    /// Hypotheses: S u T covers non-p-adic ramification; S covers wild
    /// p-adic ramification; S contains infinity; E^T torsion-free.
    pub hypotheses: [bool; 4],
    pub integral_at_p: bool,
    /// First coefficient whose denominator is divisible by `p`.
    pub offending: Option<(GroupElement, BigRational)>,
    pub theta: GroupRingElt,
}

impl IntegralityReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|&h| h)
    }

    /// The integrality theorem is not contradicted.
    pub fn consistent(&self) -> bool {
        !self.hypotheses_hold() || self.integral_at_p
    }
}

pub fn check_integrality(
    ext: &ExtensionDatum,
    s: &PlaceSet,
    t: &PlaceSet,
    p: u64,
) -> Result<IntegralityReport> {
    let mut hyp = [true; 4];
    for l in ext.ramified_primes() {
        let tags = PlaceSet::tags(ext, l, p);
        if !tags.p_adic && !s.contains_prime(l) && !t.contains_prime(l) {
            hyp[0] = false;
        }
        if tags.wild && !s.contains_prime(l) {
            hyp[1] = false;
        }
    }
    hyp[2] = s.has_infinite();
    hyp[3] = torsionfree(ext, t);
    let s_eff = if hyp[2] {
        s.clone()
    } else {
        s.clone().with_infinite()
    };
    let th = theta(ext, &s_eff, t, &LValueProvider::Dirichlet)?;
    let pb = BigInt::from(p);
    let group = ext.group();
    let offending = th
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| c.denom().is_multiple_of(&pb))
        .map(|(i, c)| (group.element_at(i), c.clone()));
    Ok(IntegralityReport {
        hypotheses: hyp,
        integral_at_p: offending.is_none(),
        offending,
        theta: th,
    })
}

/// The minus quotient of `Z[G]` for the extension.
pub fn minus_context(ext: &ExtensionDatum) -> Arc<MinusContext> {
    Arc::new(MinusContext::new(ext.group(), ext.j()).expect("j has order 2"))
}

fn check_t0(ext: &ExtensionDatum, t0: &PlaceSet) -> Result<()> {
    if t0.has_infinite() {
        return Err(Error::InvalidInput(
            "T0 may only contain finite places".into(),
        ));
    }
    if let Some(l) = t0.primes().find(|&l| ext.is_ramified(l)) {
        return Err(Error::Ramified(l));
    }
    if !torsionfree(ext, t0) {
        return Err(Error::InvalidInput(format!(
            "E^T0 has torsion for T0 = {t0} (w_L = {})",
            ext.roots_of_unity()
        )));
    }
    Ok(())
}

/// The two generators `N_I`, `1 - Frob |I|^{-1} N_I` of the local factor at
/// a ramified prime.
pub fn local_factor_generators(ext: &ExtensionDatum, l: u64) -> [GroupRingElt; 2] {
    let local = ext.local(l);
    let group = ext.group();
    let frob = GroupRingElt::basis(group, &local.frobenius);
    [
        GroupRingElt::norm_element(&local.inertia),
        GroupRingElt::one(group).sub(&frob.mul(&idempotent(&local.inertia))),
    ]
}

/// Generators in `Q[G]` of the Sinnott-Kurihara module: the products of
/// `theta^#` with one generator of each local factor.
pub fn sku_generators(ext: &ExtensionDatum, t0: &PlaceSet) -> Result<Vec<GroupRingElt>> {
    check_t0(ext, t0)?;
    let th = theta(ext, &PlaceSet::infinite(), t0, &LValueProvider::Dirichlet)?.sharp();
    let mut gens = vec![th];
    for l in ext.ramified_primes() {
        let local = local_factor_generators(ext, l);
        gens = gens
            .iter()
            .flat_map(|g| local.iter().map(move |x| g.mul(x)))
            .collect();
    }
    Ok(gens)
}

/// The Sinnott-Kurihara ideal in `Z[G]/(1+j)`, asserted integral.
pub fn sku_ideal(ext: &ExtensionDatum, t0: &PlaceSet) -> Result<ZLattice> {
    let gens = sku_generators(ext, t0)?;
    let ambient = Ambient::Minus(minus_context(ext));
    let ideal = ZLattice::from_generators(&ambient, &gens)?;
    if !ideal.is_integral() {
        return Err(Error::Invariant(format!(
            "Sinnott-Kurihara ideal for {} with T0 = {t0} has denominator {}",
            ext.id(),
            ideal.denominator()
        )));
    }
    Ok(ideal)
}

/// Places used for the containment at `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentSetup {
    pub p: u64,
    pub t0: u64,
    /// `S_infinity` and the wildly ramified p-adic place.
    pub s1: PlaceSet,
    /// `T0` and every ramified place not above `p`.
    pub t: PlaceSet,
}

impl ContainmentSetup {
    pub fn t0_set(&self) -> PlaceSet {
        PlaceSet::finite([self.t0])
    }
}

/// The least prime not dividing `f w_L p`.
pub fn default_t0(ext: &ExtensionDatum, p: u64) -> u64 {
    let n = ext.conductor() * ext.roots_of_unity() * p;
    arith::least_prime_not_dividing(n)
}

pub fn containment_setup(
    ext: &ExtensionDatum,
    p: u64,
    t0: Option<u64>,
) -> Result<ContainmentSetup> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
    }
    let t0 = t0.unwrap_or_else(|| default_t0(ext, p));
    if !arith::is_prime(t0) {
        return Err(Error::InvalidInput(format!("T0 place {t0} is not a prime")));
    }
    if t0 == p {
        return Err(Error::InvalidInput("T0 must not lie above p".into()));
    }
    check_t0(ext, &PlaceSet::finite([t0]))?;
    let mut s1 = PlaceSet::infinite();
    let mut t = PlaceSet::finite([t0]);
    for l in ext.ramified_primes() {
        let tags = PlaceSet::tags(ext, l, p);
        if tags.wild {
            s1 = s1.with_prime(l);
        } else if !tags.p_adic {
            t = t.with_prime(l);
        }
    }
    Ok(ContainmentSetup { p, t0, s1, t })
}

/// Each p-adic place is tamely ramified or has `j` in its decomposition group.
pub fn containment_hypothesis(ext: &ExtensionDatum, p: u64) -> std::result::Result<(), String> {
    if !ext.is_ramified(p) {
        return Ok(());
    }
    let local = ext.local(p);
    if !local.ramification_index().is_multiple_of(p) || local.decomposition.contains(ext.j()) {
        Ok(())
    } else {
        Err(format!(
            "{p} is wildly ramified and complex conjugation is not in its decomposition group"
        ))
    }
}

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub setup: ContainmentSetup,
    pub theta_sharp: GroupRingElt,
    pub sku: ZLattice,
    pub member: bool,
}

/// `(theta_{S1}^T)^#` lies in `SKu^{T0}(p)` inside `Z_(p)[G]/(1+j)`.
pub fn containment_check(
    ext: &ExtensionDatum,
    setup: &ContainmentSetup,
) -> Result<ContainmentReport> {
    let sku = sku_ideal(ext, &setup.t0_set())?;
    let th = theta(ext, &setup.s1, &setup.t, &LValueProvider::Dirichlet)?.sharp();
    let member = sku.member_at_p(&th, setup.p);
    Ok(ContainmentReport {
        setup: setup.clone(),
        theta_sharp: th,
        sku,
        member,
    })
}

/// Both sides of the factorization of `(theta_{S1}^T)^#` through
/// `(theta_{S_infinity}^{T0})^#`.
pub fn theta_factorization_sides(
    ext: &ExtensionDatum,
    setup: &ContainmentSetup,
) -> Result<(GroupRingElt, GroupRingElt)> {
    let expected = containment_setup(ext, setup.p, Some(setup.t0))?;
    if &expected != setup {
        return Err(Error::InvalidInput(
            "S1 and T must be built from T0 and the ramification at p".into(),
        ));
    }
    let lhs = theta(ext, &setup.s1, &setup.t, &LValueProvider::Dirichlet)?.sharp();
    let mut rhs = theta(
        ext,
        &PlaceSet::infinite(),
        &setup.t0_set(),
        &LValueProvider::Dirichlet,
    )?
    .sharp();
    for l in ext.ramified_primes() {
        if l != setup.p {
            rhs = rhs.mul(&smoothing_factor(ext, l).sharp());
        } else if setup.s1.contains_prime(l) {
            rhs = rhs.mul(&euler_factor(ext, l).sharp());
        }
    }
    Ok((lhs, rhs))
}

pub fn theta_factorization_check(ext: &ExtensionDatum, setup: &ContainmentSetup) -> Result<bool> {
    let (lhs, rhs) = theta_factorization_sides(ext, setup)?;
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorAtV {
    pub identity: bool,
    pub member: bool,
}

impl FactorAtV {
    pub fn holds(&self) -> bool {
        self.identity && self.member
    }
}

/// `1 - Frob N(v) e_I` lies in `(N_I, 1 - Frob e_I)` localized at `p`, for a
/// local configuration `I <= G_v <= G` at a place `v` not above `p`.
pub fn factor_at_v_check(
    group: &FiniteAbelianGroup,
    decomposition: &Subgroup,
    inertia: &Subgroup,
    frobenius: &GroupElement,
    norm: u64,
    p: u64,
) -> Result<FactorAtV> {
    if !inertia.is_subgroup_of(decomposition) || !decomposition.contains(frobenius) {
        return Err(Error::InvalidInput(
            "need I_v <= G_v and Frob in G_v".into(),
        ));
    }
    let mut gens: Vec<GroupElement> = inertia.generators().to_vec();
    gens.push(frobenius.clone());
    if group.subgroup(&gens).order() != decomposition.order() {
        return Err(Error::InvalidInput(
            "G_v must be generated by I_v and Frob".into(),
        ));
    }
    if norm.is_multiple_of(p) {
        return Err(Error::NonAdmissible(format!(
            "N(v) = {norm} is divisible by p = {p}"
        )));
    }
    let e = inertia.order();
    if arith::valuation_u64(e, p) > arith::valuation_u64(norm - 1, p) {
        return Err(Error::NonAdmissible(format!(
            "v_{p}(|I_v|) = {} exceeds v_{p}(N(v) - 1) = {}",
            arith::valuation_u64(e, p),
            arith::valuation_u64(norm - 1, p)
        )));
    }
    let one = GroupRingElt::one(group);
    let phi = GroupRingElt::basis(group, frobenius);
    let n_i = GroupRingElt::norm_element(inertia);
    let phi_e = phi.mul(&idempotent(inertia));
    let nv = arith::rational(norm as i64, 1);
    let lhs = one.sub(&phi_e.scale(&nv));
    let rhs = one.sub(&phi_e).sub(
        &phi.mul(&n_i)
            .scale(&arith::rational(norm as i64 - 1, e as i64)),
    );
    let ideal = ZLattice::from_generators(&Ambient::Full(group.clone()), &[n_i, one.sub(&phi_e)])?;
    Ok(FactorAtV {
        identity: lhs == rhs,
        member: ideal.member_at_p(&lhs, p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn q(n: i64, d: i64) -> BigRational {
        rational(n, d)
    }

    #[test]
    fn theta_examples() {
        let gauss = ExtensionDatum::from_conductor(4, &[]).unwrap();
        let s: PlaceSet = "inf,2".parse().unwrap();
        let th = theta(&gauss, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet).unwrap();
        assert_eq!(th.coeffs(), &[q(1, 4), q(-1, 4)]);
        let th = theta(
            &gauss,
            &s,
            &PlaceSet::finite([5]),
            &LValueProvider::Dirichlet,
        )
        .unwrap();
        assert_eq!(th.coeffs(), &[q(-1, 1), q(1, 1)]);

        let eis = ExtensionDatum::from_conductor(3, &[]).unwrap();
        let s: PlaceSet = "inf,3".parse().unwrap();
        let th = theta(&eis, &s, &PlaceSet::empty(), &LValueProvider::Dirichlet).unwrap();
        assert_eq!(th.coeffs(), &[q(1, 6), q(-1, 6)]);
    }

    #[test]
    fn integrality_examples() {
        let gauss = ExtensionDatum::from_conductor(4, &[]).unwrap();
        let s: PlaceSet = "inf,2".parse().unwrap();
        let r = check_integrality(&gauss, &s, &PlaceSet::finite([5]), 3).unwrap();
        assert!(r.hypotheses_hold() && r.integral_at_p);
        let r = check_integrality(&gauss, &s, &PlaceSet::empty(), 2).unwrap();
        assert!(!r.hypotheses[3]);
        assert!(!r.integral_at_p);
        let eis = ExtensionDatum::from_conductor(3, &[]).unwrap();
        let r =
            check_integrality(&eis, &"inf,3".parse().unwrap(), &PlaceSet::finite([7]), 5).unwrap();
        assert!(r.hypotheses_hold() && r.integral_at_p);
    }

    #[test]
    fn torsionfree_examples() {
        let gauss = ExtensionDatum::from_conductor(4, &[]).unwrap();
        assert!(torsionfree(&gauss, &PlaceSet::finite([5])));
        assert!(torsionfree(&gauss, &PlaceSet::finite([13])));
        assert!(!torsionfree(&gauss, &PlaceSet::empty()));
        let eis = ExtensionDatum::from_conductor(3, &[]).unwrap();
        assert!(!torsionfree(&eis, &PlaceSet::finite([2])));
        assert!(torsionfree(&eis, &PlaceSet::finite([5])));
        assert!(torsionfree(&eis, &PlaceSet::finite([2, 3])));
    }

    #[test]
    fn sku_of_gaussian_field() {
        let gauss = ExtensionDatum::from_conductor(4, &[]).unwrap();
        let gens = sku_generators(&gauss, &PlaceSet::finite([5])).unwrap();
        let g = gauss.group();
        assert_eq!(gens[0], GroupRingElt::from_integers(g, &[2, 2]));
        assert_eq!(gens[1], GroupRingElt::from_integers(g, &[-1, 1]));
        let full = ZLattice::from_generators(&Ambient::Full(g.clone()), &gens).unwrap();
        assert_eq!(full.covolume(), q(4, 1));
        let minus = sku_ideal(&gauss, &PlaceSet::finite([5])).unwrap();
        assert_eq!(minus.covolume(), q(2, 1));
    }

    #[test]
    fn ramified_t0_is_rejected() {
        let gauss = ExtensionDatum::from_conductor(4, &[]).unwrap();
        assert_eq!(
            sku_ideal(&gauss, &PlaceSet::finite([2])),
            Err(Error::Ramified(2))
        );
    }

    #[test]
    fn factor_at_v_at_23() {
        let ext = ExtensionDatum::from_conductor(23, &[]).unwrap();
        let local = ext.local(23);
        let r = factor_at_v_check(
            ext.group(),
            &local.decomposition,
            &local.inertia,
            &local.frobenius,
            23,
            3,
        )
        .unwrap();
        assert!(r.holds());
    }

    #[test]
    fn factor_at_v_rejects_non_admissible() {
        let c3 = FiniteAbelianGroup::cyclic(3);
        let all = c3.subgroup(&[c3.element(&[1])]);
        let r = factor_at_v_check(&c3, &all, &all, &c3.identity(), 5, 3);
        assert!(matches!(r, Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn containment_pipeline() {
        for (f, p) in [(23, 3), (23, 5), (23, 11), (9, 3), (4, 3), (12, 3)] {
            let ext = ExtensionDatum::from_conductor(f, &[]).unwrap();
            assert!(containment_hypothesis(&ext, p).is_ok());
            let setup = containment_setup(&ext, p, None).unwrap();
            assert!(
                theta_factorization_check(&ext, &setup).unwrap(),
                "f = {f}, p = {p}"
            );
            assert!(
                containment_check(&ext, &setup).unwrap().member,
                "f = {f}, p = {p}"
            );
        }
    }
}
