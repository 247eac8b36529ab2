//! Checks that compare analytic objects with the class modules supplied by
//! a fixture.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fixture::{mu_p, Fixture, ModuleKind};
use crate::lattice::ZLattice;
use crate::lvalues::LValueProvider;
use crate::places::PlaceSet;
use crate::stark::{self, StarkComparison};
use crate::stickelberger::{sku_ideal, theta};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkReport {
    /// `Fitt(A_T0^dual)` equals the Sinnott-Kurihara ideal after `p`-completion.
    pub equal_at_p: bool,
    /// `p`-part of `[R^- : SKu]`.
    pub sku_index: BigInt,
    /// Declared `|A_T0(p)|`.
    pub cardinality: BigInt,
}

impl DkReport {
    pub fn holds(&self) -> bool {
        self.equal_at_p && self.sku_index == self.cardinality
    }
}

/// Fitting ideal of the dual of the `T0`-ray class module against the
/// Sinnott-Kurihara ideal, both in the minus ring, at `p`.
pub fn dk_verify(fx: &Fixture) -> Result<DkReport> {
    let p = fx.p();
    let fitt = fx.a_t0.dual()?.fitting_ideal()?;
    let sku = sku_ideal(&fx.ext, &fx.t0())?;
    if fitt.ambient() != sku.ambient() {
        return Err(Error::Fixture(
            "fixture ring differs from the extension's minus ring".into(),
        ));
    }
    Ok(DkReport {
        equal_at_p: fitt.equal_at_p(&sku, p),
        sku_index: sku.p_part_index(p)?,
        cardinality: fx.declared(ModuleKind::RayClassGroup).clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    /// `p`-part of the index of `(theta_{S_inf}^{T0})` in the minus ring.
    pub theta_index: BigInt,
    pub cardinality: BigInt,
}

impl IndexReport {
    pub fn holds(&self) -> bool {
        self.theta_index == self.cardinality
    }
}

/// The principal ideal generated by the `T0`-smoothed Stickelberger element
/// in the minus ring.
pub fn theta_ideal(fx: &Fixture) -> Result<ZLattice> {
    let th = theta(
        &fx.ext,
        &PlaceSet::infinite(),
        &fx.t0(),
        &LValueProvider::Dirichlet,
    )?;
    ZLattice::from_generators(&fx.ambient, &[th])
}

/// `|A_T0(p)|` against the index of the Stickelberger ideal.
pub fn cn_trick_check(fx: &Fixture) -> Result<IndexReport> {
    let ideal = theta_ideal(fx)?;
    Ok(IndexReport {
        theta_index: ideal.p_part_index(fx.p())?,
        cardinality: fx.declared(ModuleKind::RayClassGroup).clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySequenceReport {
    /// `|mu_L(p)| * |A_T0(p)|`.
    pub left: BigInt,
    /// `|(O/T0)^x(p)^-| * |A(p)|`.
    pub right: BigInt,
}

impl RaySequenceReport {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Cardinalities along `0 -> mu(p) -> (O/T0)^x(p)^- -> A_T0(p) -> A(p) -> 0`.
pub fn ray_sequence_check(fx: &Fixture) -> RaySequenceReport {
    let p = fx.p();
    RaySequenceReport {
        left: mu_p(&fx.ext, p) * fx.declared(ModuleKind::RayClassGroup),
        right: fx.declared(ModuleKind::ResidueUnits) * fx.declared(ModuleKind::ClassGroup),
    }
}

/// The character-by-character comparison over all odd characters.
pub fn strong_stark_all(fx: &Fixture) -> Result<Vec<StarkComparison>> {
    let ext = &fx.ext;
    ext.group()
        .dual_characters()
        .into_iter()
        .filter(|chi| chi.is_odd(ext.j()))
        .map(|chi| stark::strong_stark_check(ext, &fx.a_t0, &fx.t0(), &chi, fx.p()))
        .collect()
}
