//! Dirichlet characters and exact values of their L-functions at `s = 0`,
//! with S-truncation and T-smoothing.

use num_rational::BigRational;
use num_traits::Zero;

use crate::abelian::{Character, Quotient};
use crate::arith;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::extension::{ExtensionDatum, UnitGroup};
use crate::places::PlaceSet;

/// A Dirichlet character modulo `modulus`, stored as the exponent table
/// `chi(a) = zeta_order^{table[a]}` with `None` at non-units.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    modulus: u64,
    order: u64,
    table: Vec<Option<u64>>,
}

impl DirichletChar {
    /// Builds a character from raw exponents in `zeta_n`, reducing `n` to the
    /// exact order.
    pub fn from_table(modulus: u64, n: u64, table: Vec<Option<u64>>) -> Self {
        assert_eq!(table.len() as u64, modulus);
        let order = table
            .iter()
            .flatten()
            .map(|&e| n / arith::gcd(e % n, n))
            .fold(1, arith::lcm);
        let shrink = n / order;
        let table = table
            .into_iter()
            .map(|e| e.map(|e| (e % n) / shrink))
            .collect();
        Self {
            modulus,
            order,
            table,
        }
    }

    /// The Dirichlet character `a |-> chi(sigma_a)` attached to a character of
    /// `Gal(L/Q)`.
    pub fn from_character(ext: &ExtensionDatum, chi: &Character) -> Self {
        let f = ext.conductor();
        let table = (0..f)
            .map(|a| (arith::gcd(a, f) == 1).then(|| chi.own_exponent(&ext.sigma(a))))
            .collect();
        Self::from_table(f, chi.order(), table)
    }

    /// All characters modulo `f`, in the canonical order of the dual of
    /// `(Z/f)^x`.
    pub fn all(f: u64) -> Vec<DirichletChar> {
        let units = UnitGroup::new(f);
        let rows = units.relation_rows();
        let quotient = Quotient::of_lattice(&rows, units.orders().len());
        let images: Vec<_> = (0..f)
            .map(|a| {
                units.dlog(a).map(|e| {
                    let e: Vec<i64> = e.iter().map(|&x| x as i64).collect();
                    quotient.project(&e)
                })
            })
            .collect();
        quotient
            .group
            .dual_characters()
            .into_iter()
            .map(|chi| {
                let table = images
                    .iter()
                    .map(|g| g.as_ref().map(|g| chi.own_exponent(g)))
                    .collect();
                Self::from_table(f, chi.order(), table)
            })
            .collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent of `chi(a)` in `zeta_order`, `None` when `gcd(a, f) > 1`.
    pub fn exponent(&self, a: u64) -> Option<u64> {
        self.table[(a % self.modulus) as usize]
    }

    /// `chi(a)` in `Q(zeta_order)`.
    pub fn value(&self, a: u64) -> CycloNumber {
        match self.exponent(a) {
            Some(e) => CycloNumber::root_of_unity(self.order, e as i64),
            None => CycloNumber::zero(self.order),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.exponent(self.modulus.wrapping_sub(1))
            .is_some_and(|e| 2 * e == self.order)
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }

    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        arith::divisors(f)
            .into_iter()
            .find(|&d| {
                (1..=f)
                    .filter(|&a| arith::gcd(a, f) == 1 && a % d == 1 % d)
                    .all(|a| self.exponent(a) == Some(0))
            })
            .expect("the modulus itself works")
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing `self`.
    pub fn primitive(&self) -> DirichletChar {
        let f = self.modulus;
        let fc = self.conductor();
        if fc == f {
            return self.clone();
        }
        let table = (0..fc)
            .map(|a| {
                if arith::gcd(a, fc) != 1 {
                    return None;
                }
                let lift = (0..)
                    .map(|t| a + t * fc)
                    .find(|&x| arith::gcd(x, f) == 1)
                    .expect("a unit lift exists");
                self.exponent(lift)
            })
            .collect();
        Self::from_table(fc, self.order, table)
    }

    /// `chi^k`; `k = -1` gives the contragredient character.
    pub fn power(&self, k: i64) -> DirichletChar {
        let n = self.order;
        let table = self
            .table
            .iter()
            .map(|e| e.map(|e| arith::modulo((e as i128 * k as i128 % n as i128) as i64, n)))
            .collect();
        Self::from_table(self.modulus, n, table)
    }

    pub fn dual(&self) -> DirichletChar {
        self.power(-1)
    }
}

/// `B_{1,chi} = f^{-1} sum_{a=1}^{f} chi(a) a` for primitive nontrivial `chi`.
pub fn b1(chi: &DirichletChar) -> Result<CycloNumber> {
    if chi.is_trivial() {
        return Err(Error::InvalidInput(
            "B_1 of the trivial character is not used; see l0".into(),
        ));
    }
    if !chi.is_primitive() {
        return Err(Error::InvalidInput(format!(
            "character modulo {} is not primitive",
            chi.modulus()
        )));
    }
    let f = chi.modulus();
    let n = chi.order();
    let mut buckets = vec![BigRational::zero(); n as usize];
    for a in 1..=f {
        if let Some(e) = chi.exponent(a) {
            buckets[e as usize] += BigRational::from_integer(a.into());
        }
    }
    Ok(CycloNumber::from_coeffs(n, buckets).scale(&arith::rational(1, f as i64)))
}

/// `L(0, chi)` for the primitive character inducing `chi`.
pub fn l0(chi: &DirichletChar) -> CycloNumber {
    if chi.is_trivial() {
        return CycloNumber::from_rational(chi.order(), arith::rational(-1, 2));
    }
    let prim = chi.primitive();
    let b = b1(&prim).expect("primitive and nontrivial");
    if prim.is_even() {
        assert!(b.is_zero(), "B_1 of an even character must vanish");
        return CycloNumber::zero(chi.order());
    }
    b.neg()
}

/// `L_S^T(0, chi)`: `l0` with Euler factors removed at the finite places of
/// `S` and smoothing factors `1 - chi(Frob_v) N(v)` for `v` in `T`.
pub fn l0_st(
    chi: &DirichletChar,
    ext: &ExtensionDatum,
    s: &PlaceSet,
    t: &PlaceSet,
) -> Result<CycloNumber> {
    if chi.modulus() != ext.conductor() {
        return Err(Error::AmbientMismatch(format!(
            "character modulo {} used with an extension of conductor {}",
            chi.modulus(),
            ext.conductor()
        )));
    }
    if !s.has_infinite() {
        return Err(Error::InvalidInput(
            "S must contain the infinite place".into(),
        ));
    }
    if t.has_infinite() {
        return Err(Error::InvalidInput(
            "T may only contain finite places".into(),
        ));
    }
    s.check_disjoint(t)?;
    let prim = chi.primitive();
    let fc = prim.modulus();
    let n = chi.order();
    let one = CycloNumber::one(n);
    let mut value = l0(chi);
    for l in s.primes() {
        if !fc.is_multiple_of(l) {
            value = value.mul(&one.sub(&prim.value(l)));
        }
    }
    for l in t.primes() {
        if !fc.is_multiple_of(l) {
            let factor = one.sub(&prim.value(l).scale(&BigRational::from_integer(l.into())));
            value = value.mul(&factor);
        }
    }
    Ok(value)
}

/// Partial zeta values `zeta_S(0, sigma)` indexed by the canonical
/// enumeration of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialZetaTable {
    pub s: PlaceSet,
    pub values: Vec<BigRational>,
}

/// Source of L-values for Stickelberger elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LValueProvider {
    /// Generalized Bernoulli numbers; exact for abelian `L/Q`.
    #[default]
    Dirichlet,
    /// A table of partial zeta values for one fixed `S`.
    PartialZeta(PartialZetaTable),
}

impl LValueProvider {
    pub fn partial_zeta(
        ext: &ExtensionDatum,
        s: PlaceSet,
        values: Vec<BigRational>,
    ) -> Result<Self> {
        let n = ext.group().order() as usize;
        if values.len() != n {
            return Err(Error::ProviderGap(format!(
                "{} partial zeta values for a group of order {n}",
                values.len()
            )));
        }
        Ok(Self::PartialZeta(PartialZetaTable { s, values }))
    }
}

/// `w_L prod_{chi odd} (-B_{1,chi} / 2)`, the analytic minus class number
/// of the extension up to the unit index.
pub fn minus_class_number_product(ext: &ExtensionDatum) -> Result<BigRational> {
    let group = ext.group();
    let e = group.exponent();
    let mut acc = CycloNumber::one(e);
    for chi in group.dual_characters() {
        if chi.is_odd(ext.j()) {
            let d = DirichletChar::from_character(ext, &chi);
            let term = b1(&d.primitive())?.scale(&arith::rational(-1, 2));
            acc = acc.mul(&term.coerce(e));
        }
    }
    let w = BigRational::from_integer(ext.roots_of_unity().into());
    acc.as_rational()
        .map(|x| x * w)
        .ok_or_else(|| Error::Invariant("product over odd characters is not rational".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn quadratic(f: u64) -> DirichletChar {
        DirichletChar::all(f)
            .into_iter()
            .find(|c| c.order() == 2 && c.is_primitive())
            .unwrap()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(
            b1(&quadratic(3)).unwrap().as_rational(),
            Some(rational(-1, 3))
        );
        assert_eq!(
            b1(&quadratic(4)).unwrap().as_rational(),
            Some(rational(-1, 2))
        );
        let even5 = quadratic(5);
        assert!(even5.is_even());
        assert!(b1(&even5).unwrap().is_zero());
    }

    #[test]
    fn l0_examples() {
        let triv = DirichletChar::all(4)
            .into_iter()
            .find(DirichletChar::is_trivial)
            .unwrap();
        assert_eq!(l0(&triv).as_rational(), Some(rational(-1, 2)));
        assert_eq!(l0(&quadratic(4)).as_rational(), Some(rational(1, 2)));
        assert!(l0(&quadratic(5)).is_zero());
    }

    #[test]
    fn truncated_and_smoothed() {
        let ext = ExtensionDatum::from_conductor(4, &[]).unwrap();
        let chi = quadratic(4);
        let s: PlaceSet = "inf,2".parse().unwrap();
        let v = l0_st(&chi, &ext, &s, &PlaceSet::finite([5])).unwrap();
        assert_eq!(v.as_rational(), Some(rational(-2, 1)));
        let v = l0_st(&chi, &ext, &PlaceSet::infinite(), &PlaceSet::empty()).unwrap();
        assert_eq!(v.as_rational(), Some(rational(1, 2)));
        let triv = chi.power(2);
        let v = l0_st(&triv, &ext, &s, &PlaceSet::empty()).unwrap();
        assert!(v.is_zero());
        assert!(matches!(
            l0_st(&chi, &ext, &s, &PlaceSet::finite([2])),
            Err(Error::OverlappingPlaces(_))
        ));
    }

    #[test]
    fn conductors_and_primitivity() {
        // characters mod 12 factor through mod 3 or mod 4
        let chars = DirichletChar::all(12);
        let mut conductors: Vec<u64> = chars.iter().map(DirichletChar::conductor).collect();
        conductors.sort_unstable();
        assert_eq!(conductors, vec![1, 3, 4, 12]);
        for c in &chars {
            let p = c.primitive();
            assert_eq!(p.primitive(), p);
            assert_eq!(p.modulus(), c.conductor());
        }
    }

    #[test]
    fn galois_equivariance() {
        for chi in DirichletChar::all(15) {
            let n = chi.order();
            for k in 1..n as i64 {
                if arith::gcd(k as u64, n) != 1 {
                    continue;
                }
                let lhs = l0(&chi.power(k));
                let rhs = l0(&chi).conj(k).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn minus_class_numbers() {
        for (f, h) in [(3, 1), (4, 1), (23, 3)] {
            let ext = ExtensionDatum::from_conductor(f, &[]).unwrap();
            assert_eq!(minus_class_number_product(&ext).unwrap(), rational(h, 1));
        }
    }
}
