//! Finite abelian groups in invariant-factor form, their subgroups,
//! quotients and characters.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith;
use crate::cyclo::CycloNumber;
use crate::linalg;

/// An element of a finite abelian group, as an exponent vector reduced
/// componentwise modulo the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k`, each `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariants: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Builds the group `Z/n_1 x ... x Z/n_k` for arbitrary positive `n_i`,
    /// normalised to invariant factors.
    pub fn new(orders: &[u64]) -> Self {
        let rows: Vec<Vec<i64>> = (0..orders.len())
            .map(|i| {
                (0..orders.len())
                    .map(|j| if i == j { orders[i] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        Quotient::of_lattice(&rows, orders.len()).group
    }

    /// The group with the given invariant factors, which must already form a
    /// divisibility chain of integers `>= 2`.
    pub fn from_invariants(invariants: Vec<u64>) -> Self {
        assert!(invariants.iter().all(|&d| d >= 2));
        assert!(invariants.windows(2).all(|w| w[1] % w[0] == 0));
        Self { invariants }
    }

    pub fn trivial() -> Self {
        Self {
            invariants: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n])
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn element(&self, exps: &[i64]) -> GroupElement {
        assert_eq!(exps.len(), self.rank());
        GroupElement(
            exps.iter()
                .zip(&self.invariants)
                .map(|(&e, &d)| arith::modulo(e, d))
                .collect(),
        )
    }

    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.invariants)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.invariants)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.invariants)
                .map(|(&x, &d)| arith::modulo((x as i128 * k as i128 % d as i128) as i64, d))
                .collect(),
        )
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.invariants)
            .map(|(&x, &d)| d / arith::gcd(x, d))
            .fold(1, arith::lcm)
    }

    /// Canonical index of an element in the lexicographic enumeration.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.0.iter()
            .zip(&self.invariants)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut exps = vec![0u64; self.rank()];
        for (slot, &d) in exps.iter_mut().zip(&self.invariants).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        GroupElement(exps)
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order() as usize)
            .map(|i| self.element_at(i))
            .collect()
    }

    pub fn subgroup(&self, generators: &[GroupElement]) -> Subgroup {
        Subgroup::generated(self, generators)
    }

    /// `G / <generators>` with its projection.
    pub fn quotient(&self, generators: &[GroupElement]) -> Quotient {
        let k = self.rank();
        let mut rows: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { self.invariants[i] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        rows.extend(
            generators
                .iter()
                .map(|g| g.0.iter().map(|&x| x as i64).collect()),
        );
        Quotient::of_lattice(&rows, k)
    }

    /// All characters, in lexicographic order of their exponent data.
    pub fn dual_characters(&self) -> Vec<Character> {
        self.elements()
            .into_iter()
            .map(|c| Character::new(self.clone(), c.0))
            .collect()
    }

    pub fn trivial_character(&self) -> Character {
        Character::new(self.clone(), vec![0; self.rank()])
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariants.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Invariant factors of a finite abelian group given by an explicit element
/// list, from the counts `|A[q^i]|` at each prime `q`.
fn invariants_from_elements(group: &FiniteAbelianGroup, elements: &[GroupElement]) -> Vec<u64> {
    let order = elements.len() as u64;
    let mut elementary: Vec<Vec<u64>> = Vec::new();
    for (q, e) in arith::factorize(order) {
        let mut counts = vec![1u64];
        let mut qi = 1u64;
        for _ in 0..e {
            qi *= q;
            let c = elements
                .iter()
                .filter(|x| group.pow(x, qi as i64) == group.identity())
                .count() as u64;
            counts.push(c);
        }
        // r_i = number of cyclic factors of order >= q^i
        let r: Vec<u32> = (1..counts.len())
            .map(|i| arith::valuation_u64(counts[i] / counts[i - 1], q))
            .collect();
        let mut powers = Vec::new();
        for i in 0..r.len() {
            let next = r.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(r[i] - next) {
                powers.push(q.pow(i as u32 + 1));
            }
        }
        powers.sort_unstable_by(|a, b| b.cmp(a));
        elementary.push(powers);
    }
    let k = elementary.iter().map(Vec::len).max().unwrap_or(0);
    let mut inv: Vec<u64> = (0..k)
        .map(|i| {
            elementary
                .iter()
                .map(|ps| ps.get(i).copied().unwrap_or(1))
                .product()
        })
        .collect();
    inv.reverse();
    inv
}

/// A subgroup with its generators, explicit element set and own invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    generators: Vec<GroupElement>,
    elements: BTreeSet<GroupElement>,
    invariants: Vec<u64>,
}

impl Subgroup {
    pub fn generated(parent: &FiniteAbelianGroup, generators: &[GroupElement]) -> Self {
        let mut elements = BTreeSet::new();
        elements.insert(parent.identity());
        let mut frontier = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = parent.op(&x, g);
                if elements.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let list: Vec<GroupElement> = elements.iter().cloned().collect();
        let invariants = invariants_from_elements(parent, &list);
        Self {
            parent: parent.clone(),
            generators: generators.to_vec(),
            elements,
            invariants,
        }
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn index(&self) -> u64 {
        self.parent.order() / self.order()
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Smallest element of the coset `g * self` in the canonical order.
    pub fn coset_representative(&self, g: &GroupElement) -> GroupElement {
        self.elements
            .iter()
            .map(|h| self.parent.op(g, h))
            .min_by_key(|x| self.parent.index_of(x))
            .expect("nonempty subgroup")
    }
}

/// A finite quotient `Z^n / L` in invariant-factor form, with the projection
/// from exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    /// `n x k` integer matrix; `x |-> x * transform` reduced mod invariants.
    transform: Vec<Vec<i64>>,
}

impl Quotient {
    /// `Z^n / rowspan(relations)`; the relations must have full rank.
    pub fn of_lattice(relations: &[Vec<i64>], n: usize) -> Self {
        let rows: Vec<linalg::IntRow> = relations.iter().map(|r| linalg::to_int_row(r)).collect();
        let smith = linalg::smith(&rows, n);
        assert_eq!(smith.rank(), n, "quotient must be finite");
        let keep: Vec<usize> = (0..n)
            .filter(|&i| smith.diagonal[i] != BigInt::from(1))
            .collect();
        let invariants: Vec<u64> = keep
            .iter()
            .map(|&i| smith.diagonal[i].to_u64().expect("small"))
            .collect();
        let transform = (0..n)
            .map(|r| {
                keep.iter()
                    .map(|&c| {
                        let d = &smith.diagonal[c];
                        let x = num_integer::Integer::mod_floor(&smith.col_transform[r][c], d);
                        x.to_i64().expect("reduced")
                    })
                    .collect()
            })
            .collect();
        Self {
            group: FiniteAbelianGroup { invariants },
            transform,
        }
    }

    pub fn project(&self, exps: &[i64]) -> GroupElement {
        let k = self.group.rank();
        let mut out = vec![0i64; k];
        for (r, &x) in exps.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let d = self.group.invariants[c] as i128;
                *slot = ((*slot as i128 + x as i128 * self.transform[r][c] as i128).rem_euclid(d))
                    as i64;
            }
        }
        self.group.element(&out)
    }

    pub fn project_element(&self, g: &GroupElement) -> GroupElement {
        let exps: Vec<i64> = g.0.iter().map(|&x| x as i64).collect();
        self.project(&exps)
    }
}

/// A character `chi: G -> mu_{exp(G)}`, `chi(g) = zeta_e^{sum c_i g_i e/d_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: FiniteAbelianGroup,
    coeffs: Vec<u64>,
    order: u64,
}

impl Character {
    pub fn new(group: FiniteAbelianGroup, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), group.rank());
        let coeffs: Vec<u64> = coeffs
            .iter()
            .zip(group.invariants())
            .map(|(c, d)| c % d)
            .collect();
        let order = coeffs
            .iter()
            .zip(group.invariants())
            .map(|(&c, &d)| d / arith::gcd(c, d))
            .fold(1, arith::lcm);
        Self {
            group,
            coeffs,
            order,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent `t` with `chi(g) = zeta_{exp G}^t`.
    pub fn value_exponent(&self, g: &GroupElement) -> u64 {
        let e = self.group.exponent();
        let mut t: u128 = 0;
        for ((&c, &x), &d) in self.coeffs.iter().zip(&g.0).zip(self.group.invariants()) {
            t += c as u128 * x as u128 * (e / d) as u128;
        }
        (t % e as u128) as u64
    }

    /// Exponent `t` with `chi(g) = zeta_{ord chi}^t`.
    pub fn own_exponent(&self, g: &GroupElement) -> u64 {
        self.value_exponent(g) / (self.group.exponent() / self.order)
    }

    /// `chi(g)` in `Q(zeta_{exp G})`.
    pub fn value(&self, g: &GroupElement) -> CycloNumber {
        CycloNumber::root_of_unity(self.group.exponent(), self.value_exponent(g) as i64)
    }

    /// `chi(g)` in `Q(zeta_{ord chi})`.
    pub fn own_value(&self, g: &GroupElement) -> CycloNumber {
        CycloNumber::root_of_unity(self.order, self.own_exponent(g) as i64)
    }

    pub fn mul(&self, other: &Character) -> Character {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Character::new(self.group.clone(), coeffs)
    }

    /// The contragredient character `g |-> chi(g)^{-1}`.
    pub fn dual(&self) -> Character {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.group.invariants())
            .map(|(c, d)| d - c)
            .collect();
        Character::new(self.group.clone(), coeffs)
    }

    /// `chi^k`, the image of `chi` under `zeta |-> zeta^k`.
    pub fn power(&self, k: i64) -> Character {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.group.invariants())
            .map(|(&c, &d)| arith::modulo((c as i128 * k as i128 % d as i128) as i64, d))
            .collect();
        Character::new(self.group.clone(), coeffs)
    }

    pub fn is_trivial_on(&self, h: &Subgroup) -> bool {
        h.generators().iter().all(|g| self.value_exponent(g) == 0)
    }

    /// `chi(-1) = -1` relative to a distinguished involution `j`.
    pub fn is_odd(&self, j: &GroupElement) -> bool {
        let e = self.group.exponent();
        2 * self.value_exponent(j) == e
    }

    /// Canonical index in the enumeration returned by `dual_characters`.
    pub fn index(&self) -> usize {
        self.group.index_of(&GroupElement(self.coeffs.clone()))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{}", GroupElement(self.coeffs.clone()))
    }
}
