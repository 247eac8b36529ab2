//! The rational group ring `Q[G]` of a finite abelian group, character
//! evaluation and idempotent assembly, and the minus quotient `Z[G]/(1+j)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{Character, FiniteAbelianGroup, GroupElement, Subgroup};
use crate::arith;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

struct Cayley {
    /// `product[i * n + k]` is the index of `g_i g_k`.
    product: Vec<u32>,
    inverse: Vec<u32>,
}

fn cayley(group: &FiniteAbelianGroup) -> Arc<Cayley> {
    static CACHE: OnceLock<RwLock<HashMap<Vec<u64>, Arc<Cayley>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("cache lock").get(group.invariants()) {
        return t.clone();
    }
    let elems = group.elements();
    let n = elems.len();
    let mut product = vec![0u32; n * n];
    for i in 0..n {
        for k in 0..n {
            product[i * n + k] = group.index_of(&group.op(&elems[i], &elems[k])) as u32;
        }
    }
    let inverse = elems
        .iter()
        .map(|g| group.index_of(&group.inverse(g)) as u32)
        .collect();
    let t = Arc::new(Cayley { product, inverse });
    cache
        .write()
        .expect("cache lock")
        .insert(group.invariants().to_vec(), t.clone());
    t
}

/// An element of `Q[G]` as a dense coefficient vector over the canonical
/// enumeration of `G`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    group: FiniteAbelianGroup,
    coeffs: Vec<BigRational>,
}

impl GroupRingElt {
    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        Self {
            group: group.clone(),
            coeffs: vec![BigRational::zero(); group.order() as usize],
        }
    }

    pub fn one(group: &FiniteAbelianGroup) -> Self {
        Self::basis(group, &group.identity())
    }

    pub fn basis(group: &FiniteAbelianGroup, g: &GroupElement) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[group.index_of(g)] = BigRational::one();
        x
    }

    pub fn from_rational(group: &FiniteAbelianGroup, q: BigRational) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[0] = q;
        x
    }

    pub fn from_coeffs(group: &FiniteAbelianGroup, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len() as u64, group.order());
        Self {
            group: group.clone(),
            coeffs,
        }
    }

    pub fn from_integers(group: &FiniteAbelianGroup, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            group,
            coeffs.iter().map(|&c| arith::rational(c, 1)).collect(),
        )
    }

    pub fn from_big_integers(group: &FiniteAbelianGroup, coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(
            group,
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `N_H = sum_{h in H} h`.
    pub fn norm_element(h: &Subgroup) -> Self {
        let group = h.parent();
        let mut x = Self::zero(group);
        for g in h.elements() {
            x.coeffs[group.index_of(g)] = BigRational::one();
        }
        x
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coefficient(&self, g: &GroupElement) -> &BigRational {
        &self.coeffs[self.group.index_of(g)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        arith::common_denominator(&self.coeffs)
    }

    /// Integer coefficients, when integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coeffs.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn augmentation(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.group, other.group,
            "group ring elements over different groups"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            group: self.group.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            group: self.group.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.coeffs.len();
        let table = cayley(&self.group);
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[table.product[i * n + k] as usize] += a * b;
                }
            }
        }
        Self {
            group: self.group.clone(),
            coeffs: out,
        }
    }

    /// Multiplication by a single group element.
    pub fn shift(&self, g: &GroupElement) -> Self {
        let n = self.coeffs.len();
        let table = cayley(&self.group);
        let gi = self.group.index_of(g);
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[table.product[gi * n + i] as usize] = a.clone();
        }
        Self {
            group: self.group.clone(),
            coeffs: out,
        }
    }

    /// The involution induced by `g |-> g^{-1}`.
    pub fn sharp(&self) -> Self {
        let table = cayley(&self.group);
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[table.inverse[i] as usize] = a.clone();
        }
        Self {
            group: self.group.clone(),
            coeffs: out,
        }
    }

    /// `chi(x)` in `Q(zeta_{exp G})`.
    pub fn char_eval(&self, chi: &Character) -> CycloNumber {
        let e = self.group.exponent();
        let mut buckets = vec![BigRational::zero(); e as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                let t = chi.value_exponent(&self.group.element_at(i));
                buckets[t as usize] += a;
            }
        }
        CycloNumber::from_coeffs(e, buckets)
    }

    /// Formats with a caller-supplied name for each group element; the
    /// identity is printed as a bare constant.
    pub fn format_with(&self, name: impl Fn(&GroupElement) -> String) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = self.group.element_at(i);
            let mag = arith::format_rational(&c.abs());
            let term = if i == 0 {
                mag
            } else if c.abs().is_one() {
                name(&g)
            } else {
                format!("{mag}*{}", name(&g))
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(|g| format!("g{g}")))
    }
}

/// `sum_chi value(chi) e_chi` with `e_chi = |G|^{-1} sum_g chi(g) g^{-1}`.
///
/// `values[k]` is the value at the `k`-th character of
/// `group.dual_characters()`.
pub fn assemble_from_char_values(
    group: &FiniteAbelianGroup,
    values: &[CycloNumber],
) -> Result<GroupRingElt> {
    let chars = group.dual_characters();
    if values.len() != chars.len() {
        return Err(Error::InvalidInput(format!(
            "{} character values for a group of order {}",
            values.len(),
            chars.len()
        )));
    }
    let e = group.exponent();
    let m = values.iter().fold(e, |m, v| arith::lcm(m, v.order()));
    let values: Vec<CycloNumber> = values.iter().map(|v| v.coerce(m)).collect();
    let order = BigRational::from_integer(group.order().into());
    let mut coeffs = Vec::with_capacity(chars.len());
    for h in group.elements() {
        let mut acc = CycloNumber::zero(m);
        for (chi, v) in chars.iter().zip(&values) {
            // chi(h^{-1}) = zeta^{-t}
            let t = chi.value_exponent(&h) as i64;
            acc = acc.add(&v.mul_zeta_power(-t * (m / e) as i64));
        }
        match acc.as_rational() {
            Some(q) => coeffs.push(q / &order),
            None => {
                return Err(Error::NotEquivariant {
                    element: h.to_string(),
                })
            }
        }
    }
    Ok(GroupRingElt::from_coeffs(group, coeffs))
}

/// The minus quotient `Z[G]/(1+j)`, free of rank `|G|/2` on one
/// representative of each coset of `<j>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusContext {
    group: FiniteAbelianGroup,
    j: GroupElement,
    /// Element index of the chosen representative in each slot.
    reps: Vec<usize>,
    /// For each element index: its slot and whether it maps to `-e_slot`.
    position: Vec<(usize, bool)>,
}

impl MinusContext {
    pub fn new(group: &FiniteAbelianGroup, j: &GroupElement) -> Result<Self> {
        if group.element_order(j) != 2 {
            return Err(Error::InvalidInput(format!("{j} does not have order 2")));
        }
        let n = group.order() as usize;
        let mut reps = Vec::new();
        let mut position = vec![(usize::MAX, false); n];
        for i in 0..n {
            if position[i].0 != usize::MAX {
                continue;
            }
            let partner = group.index_of(&group.op(&group.element_at(i), j));
            let slot = reps.len();
            reps.push(i);
            position[i] = (slot, false);
            position[partner] = (slot, true);
        }
        Ok(Self {
            group: group.clone(),
            j: j.clone(),
            reps,
            position,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn j(&self) -> &GroupElement {
        &self.j
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Group element chosen as representative of each slot.
    pub fn representatives(&self) -> Vec<GroupElement> {
        self.reps
            .iter()
            .map(|&i| self.group.element_at(i))
            .collect()
    }

    /// Image of `x` in the minus quotient, in slot coordinates.
    pub fn project(&self, x: &GroupRingElt) -> Vec<BigRational> {
        assert_eq!(x.group(), &self.group);
        let mut out = vec![BigRational::zero(); self.rank()];
        for (i, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (slot, negative) = self.position[i];
            if negative {
                out[slot] -= c;
            } else {
                out[slot] += c;
            }
        }
        out
    }

    /// The section: slot coordinates to a combination of representatives.
    pub fn lift(&self, v: &[BigRational]) -> GroupRingElt {
        assert_eq!(v.len(), self.rank());
        let mut x = GroupRingElt::zero(&self.group);
        for (slot, c) in v.iter().enumerate() {
            x.coeffs[self.reps[slot]] = c.clone();
        }
        x
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        self.project(&self.lift(a).mul(&self.lift(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn assembly_examples() {
        let c2 = FiniteAbelianGroup::cyclic(2);
        let ones = vec![CycloNumber::one(2); 2];
        assert_eq!(
            assemble_from_char_values(&c2, &ones).unwrap(),
            GroupRingElt::one(&c2)
        );
        let vals = vec![
            CycloNumber::zero(1),
            CycloNumber::from_rational(1, rational(1, 2)),
        ];
        let x = assemble_from_char_values(&c2, &vals).unwrap();
        assert_eq!(
            x,
            GroupRingElt::from_coeffs(&c2, vec![rational(1, 4), rational(-1, 4)])
        );
        let t = FiniteAbelianGroup::trivial();
        let x = assemble_from_char_values(&t, &[CycloNumber::from_integer(1, 7)]).unwrap();
        assert_eq!(x, GroupRingElt::from_integers(&t, &[7]));
    }

    #[test]
    fn non_equivariant_family_is_rejected() {
        let c3 = FiniteAbelianGroup::cyclic(3);
        let vals = vec![
            CycloNumber::zero(3),
            CycloNumber::one(3),
            CycloNumber::zero(3),
        ];
        assert!(matches!(
            assemble_from_char_values(&c3, &vals),
            Err(Error::NotEquivariant { .. })
        ));
    }

    #[test]
    fn sharp_norm_and_eval() {
        let c2 = FiniteAbelianGroup::cyclic(2);
        let x = GroupRingElt::from_integers(&c2, &[1, 2]);
        assert_eq!(x.sharp(), x);
        let c4 = FiniteAbelianGroup::cyclic(4);
        let h = c4.subgroup(&[c4.element(&[2])]);
        assert_eq!(
            GroupRingElt::norm_element(&h),
            GroupRingElt::from_integers(&c4, &[1, 0, 1, 0])
        );
        let n = GroupRingElt::norm_element(&c4.subgroup(&[c4.element(&[1])]));
        for chi in c4.dual_characters() {
            let v = n.char_eval(&chi);
            let expect = if chi.is_trivial() { 4 } else { 0 };
            assert_eq!(v, CycloNumber::from_integer(4, expect));
        }
    }

    #[test]
    fn minus_quotient_kills_one_plus_j() {
        let c6 = FiniteAbelianGroup::cyclic(6);
        let j = c6.element(&[3]);
        let ctx = MinusContext::new(&c6, &j).unwrap();
        assert_eq!(ctx.rank(), 3);
        let x = GroupRingElt::from_integers(&c6, &[3, -1, 4, 1, 5, 9]);
        let one_plus_j = GroupRingElt::one(&c6).add(&GroupRingElt::basis(&c6, &j));
        assert!(ctx.project(&one_plus_j.mul(&x)).iter().all(Zero::is_zero));
        let v = ctx.project(&x);
        assert_eq!(ctx.project(&ctx.lift(&v)), v);
    }

    #[test]
    fn formatting() {
        let c2 = FiniteAbelianGroup::cyclic(2);
        let x = GroupRingElt::from_coeffs(&c2, vec![rational(1, 4), rational(-1, 4)]);
        assert_eq!(x.format_with(|_| "s".into()), "1/4 - 1/4*s");
        assert_eq!(GroupRingElt::zero(&c2).to_string(), "0");
    }
}
