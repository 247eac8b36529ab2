//! Full-rank lattices in `Q[G]` or in the minus quotient, stored as an
//! integral Hermite normal form over a positive denominator.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::FiniteAbelianGroup;
use crate::arith;
use crate::error::{Error, Result};
use crate::group_ring::{GroupRingElt, MinusContext};
use crate::linalg::{self, IntRow};

/// The ring a lattice lives in: `Z[G]` itself or `Z[G]/(1+j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Full(FiniteAbelianGroup),
    Minus(Arc<MinusContext>),
}

impl Ambient {
    pub fn minus(ctx: MinusContext) -> Self {
        Ambient::Minus(Arc::new(ctx))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        match self {
            Ambient::Full(g) => g,
            Ambient::Minus(ctx) => ctx.group(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Ambient::Full(g) => g.order() as usize,
            Ambient::Minus(ctx) => ctx.rank(),
        }
    }

    pub fn is_minus(&self) -> bool {
        matches!(self, Ambient::Minus(_))
    }

    /// Coordinates of the image of `x`.
    pub fn coords(&self, x: &GroupRingElt) -> Vec<BigRational> {
        match self {
            Ambient::Full(_) => x.coeffs().to_vec(),
            Ambient::Minus(ctx) => ctx.project(x),
        }
    }

    /// A preimage in `Q[G]` (the identity, or the section of the quotient).
    pub fn lift(&self, v: &[BigRational]) -> GroupRingElt {
        match self {
            Ambient::Full(g) => GroupRingElt::from_coeffs(g, v.to_vec()),
            Ambient::Minus(ctx) => ctx.lift(v),
        }
    }

    /// Reduces a group ring element into the ambient and lifts it back.
    pub fn reduce(&self, x: &GroupRingElt) -> GroupRingElt {
        self.lift(&self.coords(x))
    }

    fn check(&self, other: &Ambient) -> Result<()> {
        if self != other {
            return Err(Error::AmbientMismatch(
                "lattices live in different rings".into(),
            ));
        }
        Ok(())
    }
}

/// `(1/denom) * rowspan(basis)`, with `basis` square upper triangular in
/// Hermite normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct ZLattice {
    ambient: Ambient,
    basis: Vec<IntRow>,
    denom: BigInt,
}

impl ZLattice {
    /// The `Z[G]`-submodule generated by `gens`.
    pub fn from_generators(ambient: &Ambient, gens: &[GroupRingElt]) -> Result<Self> {
        let group = ambient.group();
        let elems = group.elements();
        let mut rows = Vec::with_capacity(gens.len() * elems.len());
        for x in gens {
            for g in &elems {
                rows.push(ambient.coords(&x.shift(g)));
            }
        }
        Self::from_rational_rows(ambient, &rows)
    }

    /// The `Z`-span of the given coordinate vectors, which must have full rank.
    pub fn from_rational_rows(ambient: &Ambient, rows: &[Vec<BigRational>]) -> Result<Self> {
        let denom = arith::common_denominator(rows.iter().flatten());
        let int_rows: Vec<IntRow> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
                    .collect()
            })
            .collect();
        Self::from_integer_rows(ambient, &int_rows, denom)
    }

    fn from_integer_rows(ambient: &Ambient, rows: &[IntRow], denom: BigInt) -> Result<Self> {
        let n = ambient.rank();
        let h = linalg::hnf(rows, n);
        let rank = h.iter().filter(|r| r.is_some()).count();
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let mut basis: Vec<IntRow> = h.into_iter().map(Option::unwrap).collect();
        let mut denom = denom;
        let g = basis
            .iter()
            .flatten()
            .fold(denom.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            for row in basis.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
            denom = &denom / &g;
        }
        Ok(Self {
            ambient: ambient.clone(),
            basis,
            denom,
        })
    }

    /// The whole ambient ring.
    pub fn unit(ambient: &Ambient) -> Self {
        let n = ambient.rank();
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        if i == k {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            ambient: ambient.clone(),
            basis,
            denom: BigInt::one(),
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn hnf_basis(&self) -> &[IntRow] {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Basis vectors as elements of `Q[G]` (through the section for minus
    /// lattices).
    pub fn basis_elements(&self) -> Vec<GroupRingElt> {
        let d = BigRational::from_integer(self.denom.clone());
        self.basis
            .iter()
            .map(|row| {
                let v: Vec<BigRational> = row
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()) / &d)
                    .collect();
                self.ambient.lift(&v)
            })
            .collect()
    }

    fn solve(&self, x: &GroupRingElt) -> Vec<BigRational> {
        let d = BigRational::from_integer(self.denom.clone());
        let v: Vec<BigRational> = self.ambient.coords(x).into_iter().map(|c| c * &d).collect();
        linalg::solve_upper(&self.basis, &v)
    }

    pub fn member(&self, x: &GroupRingElt) -> bool {
        self.solve(x).iter().all(BigRational::is_integer)
    }

    /// Membership in `I (x) Z_(p)`: every coordinate denominator prime to `p`.
    pub fn member_at_p(&self, x: &GroupRingElt, p: u64) -> bool {
        let p = BigInt::from(p);
        self.solve(x).iter().all(|c| !c.denom().is_multiple_of(&p))
    }

    /// `other` is a subset of `self`.
    pub fn contains(&self, other: &ZLattice) -> bool {
        other.basis_elements().iter().all(|b| self.member(b))
    }

    pub fn contains_at_p(&self, other: &ZLattice, p: u64) -> bool {
        other
            .basis_elements()
            .iter()
            .all(|b| self.member_at_p(b, p))
    }

    pub fn equal_at_p(&self, other: &ZLattice, p: u64) -> bool {
        self.contains_at_p(other, p) && other.contains_at_p(self, p)
    }

    /// Contained in the ambient ring itself.
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Stable under multiplication by `G`.
    pub fn is_ideal(&self) -> bool {
        let group = self.ambient.group();
        let gens: Vec<_> = (0..group.rank())
            .map(|i| {
                let mut e = vec![0i64; group.rank()];
                e[i] = 1;
                group.element(&e)
            })
            .collect();
        self.basis_elements()
            .iter()
            .all(|b| gens.iter().all(|g| self.member(&b.shift(g))))
    }

    /// Covolume relative to the ambient ring, `[R : I]` when integral.
    pub fn covolume(&self) -> BigRational {
        let det: BigInt = (0..self.basis.len())
            .map(|i| self.basis[i][i].clone())
            .product();
        let dn = num_traits::pow(self.denom.clone(), self.basis.len());
        BigRational::new(det, dn)
    }

    /// `[J : I]` for `I = self` inside `J = outer`.
    pub fn index_in(&self, outer: &ZLattice) -> Result<BigInt> {
        self.ambient.check(&outer.ambient)?;
        if !outer.contains(self) {
            return Err(Error::InvalidInput(
                "lattice is not contained in the outer lattice".into(),
            ));
        }
        let q = self.covolume() / outer.covolume();
        debug_assert!(q.is_integer());
        Ok(q.to_integer())
    }

    /// `v_p` of the covolume.
    pub fn p_index_valuation(&self, p: u64) -> i64 {
        arith::valuation_q(&self.covolume(), p)
    }

    /// The `p`-part of `[R : I]`.
    pub fn p_part_index(&self, p: u64) -> Result<BigInt> {
        let v = self.p_index_valuation(p);
        if v < 0 {
            return Err(Error::InvalidInput(format!("lattice is not {p}-integral")));
        }
        Ok(num_traits::pow(BigInt::from(p), v as usize))
    }

    pub fn product(&self, other: &ZLattice) -> Result<ZLattice> {
        self.ambient.check(&other.ambient)?;
        let a = self.basis_elements();
        let b = other.basis_elements();
        let mut rows = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                rows.push(self.ambient.coords(&x.mul(y)));
            }
        }
        Self::from_rational_rows(&self.ambient, &rows)
    }

    pub fn sharp(&self) -> ZLattice {
        let rows: Vec<Vec<BigRational>> = self
            .basis_elements()
            .iter()
            .map(|b| self.ambient.coords(&b.sharp()))
            .collect();
        Self::from_rational_rows(&self.ambient, &rows).expect("sharp preserves rank")
    }

    /// Image of a full lattice in the minus quotient.
    pub fn to_minus(&self, ctx: &Arc<MinusContext>) -> Result<ZLattice> {
        let target = Ambient::Minus(ctx.clone());
        match &self.ambient {
            Ambient::Minus(c) if c == ctx => return Ok(self.clone()),
            Ambient::Full(g) if g == ctx.group() => {}
            _ => {
                return Err(Error::AmbientMismatch(
                    "projection to an unrelated minus quotient".into(),
                ))
            }
        }
        let rows: Vec<Vec<BigRational>> = self
            .basis_elements()
            .iter()
            .map(|b| ctx.project(b))
            .collect();
        Self::from_rational_rows(&target, &rows)
    }

    /// Elementary divisors of `R / I` for integral `I`, by Smith normal form.
    pub fn elementary_divisors(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::InvalidInput("fractional lattice".into()));
        }
        Ok(linalg::smith(&self.basis, self.basis.len()).diagonal)
    }
}

impl fmt::Debug for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZLattice(1/{}) [", self.denom)?;
        for row in &self.basis {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.denom.is_one() {
            writeln!(f, "1/{} *", self.denom)?;
        }
        let width = self
            .basis
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.basis {
            let cells: Vec<String> = row
                .iter()
                .map(|x| format!("{:>width$}", x.to_string()))
                .collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Whether `x` is `p`-integral and `m x` lies in `lattice` for some `m`
/// coprime to `p`, `m <= bound`; brute force, for cross-checking.
pub fn member_at_p_by_search(lattice: &ZLattice, x: &GroupRingElt, p: u64, bound: u64) -> bool {
    (1..=bound)
        .filter(|m| m % p != 0)
        .any(|m| lattice.member(&x.scale(&arith::rational(m as i64, 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn c2_minus() -> Ambient {
        let c2 = FiniteAbelianGroup::cyclic(2);
        Ambient::minus(MinusContext::new(&c2, &c2.element(&[1])).unwrap())
    }

    #[test]
    fn membership_examples() {
        let amb = c2_minus();
        let g = amb.group().clone();
        let three =
            ZLattice::from_generators(&amb, &[GroupRingElt::from_integers(&g, &[3, 0])]).unwrap();
        assert!(three.member(&GroupRingElt::from_integers(&g, &[6, 0])));
        assert!(!three.member(&GroupRingElt::from_integers(&g, &[2, 0])));
        assert!(three.member_at_p(&GroupRingElt::from_integers(&g, &[2, 0]), 5));
        assert!(!three.member_at_p(&GroupRingElt::from_integers(&g, &[2, 0]), 3));
        let unit = ZLattice::unit(&amb);
        assert!(unit.member(&GroupRingElt::from_integers(&g, &[5, -7])));
    }

    #[test]
    fn index_of_two_in_rank_two() {
        let g = FiniteAbelianGroup::cyclic(2);
        let amb = Ambient::Full(g.clone());
        let two =
            ZLattice::from_generators(&amb, &[GroupRingElt::from_integers(&g, &[2, 0])]).unwrap();
        assert_eq!(
            two.index_in(&ZLattice::unit(&amb)).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(two.p_part_index(2).unwrap(), BigInt::from(4));
        assert_eq!(two.p_part_index(3).unwrap(), BigInt::one());
    }

    #[test]
    fn rank_deficiency_is_rejected() {
        let g = FiniteAbelianGroup::cyclic(2);
        let amb = Ambient::Full(g.clone());
        let aug = GroupRingElt::from_integers(&g, &[1, -1]);
        assert!(matches!(
            ZLattice::from_generators(&amb, &[aug]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn products_and_sharp() {
        let g = FiniteAbelianGroup::cyclic(3);
        let amb = Ambient::Full(g.clone());
        let x = GroupRingElt::from_integers(&g, &[2, 1, 0]);
        let y = GroupRingElt::from_integers(&g, &[1, 0, 3]);
        let ix = ZLattice::from_generators(&amb, std::slice::from_ref(&x)).unwrap();
        let iy = ZLattice::from_generators(&amb, std::slice::from_ref(&y)).unwrap();
        let prod = ix.product(&iy).unwrap();
        let direct = ZLattice::from_generators(&amb, &[x.mul(&y)]).unwrap();
        assert_eq!(prod, direct);
        assert!(prod.is_ideal());
        assert_eq!(
            ix.sharp(),
            ZLattice::from_generators(&amb, &[x.sharp()]).unwrap()
        );
    }

    #[test]
    fn fractional_lattices() {
        let g = FiniteAbelianGroup::cyclic(2);
        let amb = Ambient::Full(g.clone());
        let half = GroupRingElt::from_coeffs(&g, vec![rational(1, 2), rational(1, 2)]);
        let l = ZLattice::from_generators(&amb, &[half, GroupRingElt::one(&g)]).unwrap();
        assert!(!l.is_integral());
        assert_eq!(l.covolume(), rational(1, 2));
        assert_eq!(l.p_index_valuation(2), -1);
        assert!(l.contains(&ZLattice::unit(&amb)));
    }
}
