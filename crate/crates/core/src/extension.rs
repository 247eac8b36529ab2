//! Abelian extensions of `Q` given by a conductor `f` and a subgroup `H` of
//! `(Z/f)^x`, with Galois group `G = (Z/f)^x / H` and local data at primes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::abelian::{FiniteAbelianGroup, GroupElement, Quotient, Subgroup};
use crate::arith;
use crate::error::{Error, Result};

/// `(Z/f)^x` with generators adapted to the prime-power decomposition of `f`
/// and a full discrete-logarithm table.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    /// Generator indices belonging to each prime divisor of the modulus.
    components: BTreeMap<u64, Vec<usize>>,
    dlog: Vec<Option<Vec<u64>>>,
}

fn crt_lift(residue: u64, prime_power: u64, modulus: u64) -> u64 {
    // x = residue mod prime_power, x = 1 mod (modulus / prime_power)
    let rest = modulus / prime_power;
    if rest == 1 {
        return residue % modulus;
    }
    (0..prime_power)
        .map(|k| 1 + k * rest)
        .find(|x| x % prime_power == residue % prime_power)
        .expect("coprime moduli")
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut components = BTreeMap::new();
        for (l, k) in arith::factorize(modulus) {
            let lk = l.pow(k);
            let mut idx = Vec::new();
            let mut local: Vec<(u64, u64)> = Vec::new();
            if l == 2 {
                if k >= 2 {
                    local.push((lk - 1, 2));
                }
                if k >= 3 {
                    local.push((5, lk / 4));
                }
            } else {
                let phi = lk / l * (l - 1);
                let g = (2..lk)
                    .find(|&g| arith::mult_order(g, lk) == Some(phi))
                    .expect("odd prime powers have primitive roots");
                local.push((g, phi));
            }
            for (g, n) in local {
                idx.push(gens.len());
                gens.push(crt_lift(g, lk, modulus));
                orders.push(n);
            }
            components.insert(l, idx);
        }
        let mut dlog = vec![None; modulus as usize];
        let total: u64 = orders.iter().product();
        for n in 0..total {
            let mut rem = n;
            let mut exps = vec![0u64; orders.len()];
            let mut value = 1 % modulus;
            for (i, &o) in orders.iter().enumerate() {
                exps[i] = rem % o;
                rem /= o;
                value = value * arith::mod_pow(gens[i], exps[i], modulus) % modulus;
            }
            dlog[value as usize] = Some(exps);
        }
        Self {
            modulus,
            gens,
            orders,
            components,
            dlog,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Generators of the kernel of `(Z/f)^x -> (Z/(f / l^{v_l(f)}))^x`.
    pub fn component_generators(&self, l: u64) -> Vec<u64> {
        self.components
            .get(&l)
            .map(|idx| idx.iter().map(|&i| self.gens[i]).collect())
            .unwrap_or_default()
    }

    pub fn dlog(&self, a: u64) -> Option<&[u64]> {
        self.dlog[(a % self.modulus) as usize].as_deref()
    }

    /// Relation rows `n_i e_i` of the presentation `Z^r / diag(orders)`.
    pub fn relation_rows(&self) -> Vec<Vec<i64>> {
        let r = self.orders.len();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { self.orders[i] as i64 } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Multiplicative closure of the given residues.
    pub fn closure(&self, gens: &[u64]) -> BTreeSet<u64> {
        let f = self.modulus;
        let mut set = BTreeSet::new();
        set.insert(1 % f);
        let mut frontier = vec![1 % f];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = x * (g % f) % f;
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }
}

/// Local data at a rational prime `l`.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub prime: u64,
    pub inertia: Subgroup,
    pub decomposition: Subgroup,
    /// Canonical lift of Frobenius: the least element of its inertia coset.
    pub frobenius: GroupElement,
    /// Residue field cardinality `N(v) = l` of the place of `Q`.
    pub norm: u64,
}

impl LocalData {
    pub fn is_ramified(&self) -> bool {
        self.inertia.order() > 1
    }

    pub fn ramification_index(&self) -> u64 {
        self.inertia.order()
    }

    pub fn frobenius_order(&self) -> u64 {
        self.decomposition.order() / self.inertia.order()
    }
}

/// An abelian CM extension `L/Q`, `L` the fixed field of `H` in `Q(zeta_f)`.
#[derive(Debug, Clone)]
pub struct ExtensionDatum {
    conductor: u64,
    subgroup_gens: Vec<u64>,
    units: UnitGroup,
    quotient: Quotient,
    j: GroupElement,
    roots_of_unity: u64,
    labels: Vec<u64>,
    ramified: BTreeMap<u64, LocalData>,
}

impl ExtensionDatum {
    /// Builds the extension for conductor `f` and `H = <subgroup_gens>`.
    ///
    /// If `f` is not the conductor of the fixed field it is reduced (with a
    /// warning). Fails when `-1 in H`.
    pub fn from_conductor(f: u64, subgroup_gens: &[u64]) -> Result<Self> {
        if f < 3 {
            return Err(Error::InvalidInput(format!("conductor {f} < 3")));
        }
        if let Some(&g) = subgroup_gens.iter().find(|&&g| arith::gcd(g % f, f) != 1) {
            return Err(Error::InvalidInput(format!("{g} is not a unit modulo {f}")));
        }
        let units = UnitGroup::new(f);
        let h = units.closure(subgroup_gens);
        if h.contains(&(f - 1)) {
            return Err(Error::NotCm(format!(
                "-1 lies in H; the fixed field of H in Q(zeta_{f}) is real"
            )));
        }
        // true conductor: least d | f whose kernel lies in H
        let conductor = arith::divisors(f)
            .into_iter()
            .find(|&d| kernel_in(&units, &h, d))
            .expect("f itself qualifies");
        if conductor != f {
            log::warn!("conductor {f} is not minimal for H; reducing to {conductor}");
            let reduced: Vec<u64> = subgroup_gens.iter().map(|g| g % conductor).collect();
            return Self::from_conductor(conductor, &reduced);
        }
        Self::build(f, subgroup_gens, units, &h)
    }

    fn build(f: u64, subgroup_gens: &[u64], units: UnitGroup, h: &BTreeSet<u64>) -> Result<Self> {
        let mut relations = units.relation_rows();
        for &g in subgroup_gens {
            let e = units.dlog(g).expect("unit");
            relations.push(e.iter().map(|&x| x as i64).collect());
        }
        let quotient = Quotient::of_lattice(&relations, units.orders().len());
        let project = |a: u64| -> GroupElement {
            let e: Vec<i64> = units
                .dlog(a)
                .expect("unit")
                .iter()
                .map(|&x| x as i64)
                .collect();
            quotient.project(&e)
        };
        let group = quotient.group.clone();
        let j = project(f - 1);
        if j == group.identity() || group.op(&j, &j) != group.identity() {
            return Err(Error::NotCm(
                "complex conjugation is not an involution in G".into(),
            ));
        }
        let mut labels = vec![0u64; group.order() as usize];
        for a in (1..f).rev() {
            if arith::gcd(a, f) == 1 {
                labels[group.index_of(&project(a))] = a;
            }
        }
        // roots of unity: lcm of d | f with H in ker((Z/f)^x -> (Z/d)^x)
        let m = arith::divisors(f)
            .into_iter()
            .filter(|&d| h.iter().all(|&x| x % d == 1 % d))
            .fold(1, arith::lcm);
        let roots_of_unity = if m % 2 == 0 { m } else { 2 * m };

        let mut ext = Self {
            conductor: f,
            subgroup_gens: subgroup_gens.to_vec(),
            units,
            quotient,
            j,
            roots_of_unity,
            labels,
            ramified: BTreeMap::new(),
        };
        for l in arith::prime_divisors(f) {
            let data = ext.compute_local(l);
            ext.ramified.insert(l, data);
        }
        Ok(ext)
    }

    fn compute_local(&self, l: u64) -> LocalData {
        let f = self.conductor;
        let group = self.group();
        if !f.is_multiple_of(l) {
            let frob = self.sigma(l % f);
            let trivial = group.subgroup(&[]);
            let decomposition = group.subgroup(std::slice::from_ref(&frob));
            return LocalData {
                prime: l,
                inertia: trivial,
                decomposition,
                frobenius: frob,
                norm: l,
            };
        }
        let lk = l.pow(arith::valuation_u64(f, l));
        let rest = f / lk;
        let inertia_gens: Vec<GroupElement> = self
            .units
            .component_generators(l)
            .into_iter()
            .map(|a| self.sigma(a))
            .collect();
        let inertia = group.subgroup(&inertia_gens);
        // a = l mod rest, a = 1 mod l^k
        let lift = if rest == 1 {
            1
        } else {
            (0..f)
                .find(|&a| a % rest == l % rest && a % lk == 1 % lk)
                .expect("CRT")
        };
        let frob_raw = self.sigma(lift);
        let frobenius = inertia.coset_representative(&frob_raw);
        let mut dgens = inertia_gens;
        dgens.push(frob_raw);
        let decomposition = group.subgroup(&dgens);
        LocalData {
            prime: l,
            inertia,
            decomposition,
            frobenius,
            norm: l,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn subgroup_gens(&self) -> &[u64] {
        &self.subgroup_gens
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.quotient.group
    }

    /// Complex conjugation, the image of `-1`.
    pub fn j(&self) -> &GroupElement {
        &self.j
    }

    pub fn is_cm(&self) -> bool {
        true
    }

    /// `w_L = |mu_L|`.
    pub fn roots_of_unity(&self) -> u64 {
        self.roots_of_unity
    }

    /// The Galois element `sigma_a: zeta_f |-> zeta_f^a`.
    pub fn sigma(&self, a: u64) -> GroupElement {
        let e: Vec<i64> = self
            .units
            .dlog(a % self.conductor)
            .unwrap_or_else(|| panic!("{a} is not a unit modulo {}", self.conductor))
            .iter()
            .map(|&x| x as i64)
            .collect();
        self.quotient.project(&e)
    }

    /// Least `a` in `[1, f)` with `sigma_a = g`.
    pub fn label(&self, g: &GroupElement) -> u64 {
        self.labels[self.group().index_of(g)]
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        self.ramified.keys().copied().collect()
    }

    pub fn is_ramified(&self, l: u64) -> bool {
        self.ramified.contains_key(&l)
    }

    /// Local data at `l`, computed on demand for unramified primes.
    pub fn local(&self, l: u64) -> LocalData {
        match self.ramified.get(&l) {
            Some(d) => d.clone(),
            None => self.compute_local(l),
        }
    }

    /// A stable identifier such as `f23` or `f7-H2`.
    pub fn id(&self) -> String {
        if self.subgroup_gens.is_empty() {
            format!("f{}", self.conductor)
        } else {
            let gens: Vec<String> = self.subgroup_gens.iter().map(u64::to_string).collect();
            format!("f{}-H{}", self.conductor, gens.join("."))
        }
    }
}

fn kernel_in(units: &UnitGroup, h: &BTreeSet<u64>, d: u64) -> bool {
    let f = units.modulus();
    (1..f)
        .filter(|&a| arith::gcd(a, f) == 1 && a % d == 1 % d)
        .all(|a| h.contains(&a))
}

impl fmt::Display for ExtensionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L/Q with conductor {}, G = {}",
            self.conductor,
            self.group()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field() {
        let ext = ExtensionDatum::from_conductor(4, &[]).unwrap();
        assert_eq!(ext.group().invariants(), &[2]);
        assert_eq!(ext.roots_of_unity(), 4);
        assert_eq!(ext.j(), &ext.sigma(3));
        let two = ext.local(2);
        assert_eq!(two.inertia.order(), 2);
        assert_eq!(two.decomposition.order(), 2);
        assert_eq!(ext.label(ext.j()), 3);
    }

    #[test]
    fn cyclotomic_23() {
        let ext = ExtensionDatum::from_conductor(23, &[]).unwrap();
        assert_eq!(ext.group().invariants(), &[22]);
        assert_eq!(ext.local(23).inertia.order(), 22);
        let two = ext.local(2);
        assert!(!two.is_ramified());
        assert_eq!(ext.group().element_order(&two.frobenius), 11);
        assert_eq!(ext.roots_of_unity(), 46);
    }

    #[test]
    fn real_subfield_rejected() {
        assert!(matches!(
            ExtensionDatum::from_conductor(5, &[4]),
            Err(Error::NotCm(_))
        ));
    }

    #[test]
    fn conductor_is_reduced() {
        // Q(i) presented inside Q(zeta_12)
        let ext = ExtensionDatum::from_conductor(12, &[5]).unwrap();
        assert_eq!(ext.conductor(), 4);
        // conductor 2 mod 4 is never minimal
        let ext = ExtensionDatum::from_conductor(6, &[]).unwrap();
        assert_eq!(ext.conductor(), 3);
    }

    #[test]
    fn imaginary_quadratic_subfield() {
        let ext = ExtensionDatum::from_conductor(23, &[2]).unwrap();
        assert_eq!(ext.group().order(), 2);
        assert_eq!(ext.roots_of_unity(), 2);
        // 2 is a square mod 23, so it splits
        assert_eq!(ext.local(2).decomposition.order(), 1);
        assert_eq!(ext.local(5).decomposition.order(), 2);
    }

    #[test]
    fn local_data_at_composite_conductor() {
        let ext = ExtensionDatum::from_conductor(12, &[]).unwrap();
        let three = ext.local(3);
        assert_eq!(three.inertia.order(), 2);
        // Frobenius at 3 is sigma_7 modulo inertia (7 = 3 mod 4, 7 = 1 mod 3)
        assert_eq!(three.frobenius_order(), 2);
        assert_eq!(ext.roots_of_unity(), 12);
        let units = UnitGroup::new(16);
        assert_eq!(units.orders(), &[2, 4]);
    }
}
