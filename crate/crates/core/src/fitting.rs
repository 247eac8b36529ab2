//! Finitely presented modules over `Z[G]` or `Z[G]/(1+j)`, their Fitting
//! ideals and cardinalities.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::arith;
use crate::cyclo::{self, CycloNumber};
use crate::error::{Error, Result};
use crate::group_ring::{assemble_from_char_values, GroupRingElt};
use crate::lattice::{Ambient, ZLattice};
use crate::linalg::{self, IntRow};

/// Largest size for which determinants use memoized Laplace expansion.
pub const LAPLACE_LIMIT: usize = 6;

/// `R^n / (rows of the relation matrix)`, `R` the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    ambient: Ambient,
    generators: usize,
    relations: Vec<Vec<GroupRingElt>>,
}

impl ModulePresentation {
    pub fn new(
        ambient: &Ambient,
        generators: usize,
        relations: Vec<Vec<GroupRingElt>>,
    ) -> Result<Self> {
        for row in &relations {
            if row.len() != generators {
                return Err(Error::InvalidInput(format!(
                    "relation of length {} for {generators} generators",
                    row.len()
                )));
            }
            for x in row {
                if x.group() != ambient.group() {
                    return Err(Error::AmbientMismatch(
                        "relation entry over a different group".into(),
                    ));
                }
                if !x.is_integral() {
                    return Err(Error::InvalidInput(
                        "relation entries must be integral".into(),
                    ));
                }
            }
        }
        // keep entries reduced in the ambient
        let relations = relations
            .into_iter()
            .map(|row| row.iter().map(|x| ambient.reduce(x)).collect())
            .collect();
        Ok(Self {
            ambient: ambient.clone(),
            generators,
            relations,
        })
    }

    /// The zero module on `n` generators: identity relations.
    pub fn zero(ambient: &Ambient, n: usize) -> Self {
        let group = ambient.group();
        let relations = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        if i == k {
                            GroupRingElt::one(group)
                        } else {
                            GroupRingElt::zero(group)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(ambient, n, relations).expect("well formed")
    }

    /// `R / (x)`.
    pub fn cyclic(ambient: &Ambient, x: GroupRingElt) -> Result<Self> {
        Self::new(ambient, 1, vec![vec![x]])
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<GroupRingElt>] {
        &self.relations
    }

    pub fn is_square(&self) -> bool {
        self.relations.len() == self.generators
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.relations.len(),
                cols: self.generators,
            })
        }
    }

    /// The relation matrix as an integer matrix over a `Z`-basis of `R^n`.
    pub fn z_linearization(&self) -> Vec<IntRow> {
        let group = self.ambient.group();
        let rank = self.ambient.rank();
        let units: Vec<GroupRingElt> = (0..rank)
            .map(|k| {
                let mut v = vec![arith::rational(0, 1); rank];
                v[k] = arith::rational(1, 1);
                self.ambient.lift(&v)
            })
            .collect();
        let mut rows = Vec::with_capacity(self.relations.len() * rank);
        for rel in &self.relations {
            for b in &units {
                let mut row: IntRow = Vec::with_capacity(self.generators * rank);
                for x in rel {
                    row.extend(
                        self.ambient
                            .coords(&b.mul(x))
                            .into_iter()
                            .map(|c| c.to_integer()),
                    );
                }
                rows.push(row);
            }
        }
        debug_assert!(units.iter().all(|u| u.group() == group));
        rows
    }

    /// `|M|` by Smith normal form.
    pub fn cardinality(&self) -> Result<BigInt> {
        let cols = self.generators * self.ambient.rank();
        if cols == 0 {
            return Ok(BigInt::one());
        }
        linalg::smith(&self.z_linearization(), cols)
            .cokernel_order(cols)
            .ok_or(Error::InfiniteCokernel)
    }

    /// `|M (x) Z_p|`.
    pub fn p_cardinality(&self, p: u64) -> Result<BigInt> {
        Ok(arith::p_part(&self.cardinality()?, p))
    }

    /// Determinant of the square submatrix on the given rows.
    pub fn minor(&self, rows: &[usize]) -> GroupRingElt {
        let m: Vec<Vec<GroupRingElt>> = rows.iter().map(|&r| self.relations[r].clone()).collect();
        let d = if m.len() <= LAPLACE_LIMIT {
            det_laplace(&m)
        } else {
            det_by_characters(&m)
        };
        self.ambient.reduce(&d)
    }

    /// All maximal minors.
    pub fn maximal_minors(&self) -> Vec<GroupRingElt> {
        let n = self.generators;
        let subsets = combinations(self.relations.len(), n);
        subsets.par_iter().map(|rows| self.minor(rows)).collect()
    }

    /// The ideal of maximal minors.
    pub fn fitting_ideal(&self) -> Result<ZLattice> {
        if self.generators == 0 {
            return Ok(ZLattice::unit(&self.ambient));
        }
        let minors: Vec<GroupRingElt> = self
            .maximal_minors()
            .into_iter()
            .filter(|m| !m.is_zero())
            .collect();
        if minors.is_empty() {
            return Err(Error::InfiniteCokernel);
        }
        ZLattice::from_generators(&self.ambient, &minors).map_err(|e| match e {
            Error::RankDeficient { .. } => Error::InfiniteCokernel,
            e => e,
        })
    }

    /// The Pontryagin dual of a square presentation: the transpose with
    /// every entry replaced by its image under `g |-> g^{-1}`.
    pub fn dual(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.generators;
        let relations = (0..n)
            .map(|i| (0..n).map(|k| self.relations[k][i].sharp()).collect())
            .collect();
        Self::new(&self.ambient, n, relations)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(
                "direct sum over different rings".into(),
            ));
        }
        let group = self.ambient.group();
        let n = self.generators + other.generators;
        let zero = GroupRingElt::zero(group);
        let mut relations = Vec::new();
        for row in &self.relations {
            let mut r = row.clone();
            r.resize(n, zero.clone());
            relations.push(r);
        }
        for row in &other.relations {
            let mut r = vec![zero.clone(); self.generators];
            r.extend(row.iter().cloned());
            relations.push(r);
        }
        Self::new(&self.ambient, n, relations)
    }

    /// The quotient by extra relations.
    pub fn with_relations(&self, extra: Vec<Vec<GroupRingElt>>) -> Result<Self> {
        let mut relations = self.relations.clone();
        relations.extend(extra);
        Self::new(&self.ambient, self.generators, relations)
    }

    /// Appends a free generator killed by an identity relation.
    pub fn stabilize(&self) -> Self {
        self.direct_sum(&Self::zero(&self.ambient, 1))
            .expect("same ambient")
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant over `Q[G]` by Laplace expansion along rows, memoized on the
/// set of columns still in play.
pub fn det_laplace(m: &[Vec<GroupRingElt>]) -> GroupRingElt {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    let group = m[0][0].group().clone();
    let mut memo: HashMap<u32, GroupRingElt> = HashMap::new();
    memo.insert(0, GroupRingElt::one(&group));
    fn go(
        mask: u32,
        m: &[Vec<GroupRingElt>],
        memo: &mut HashMap<u32, GroupRingElt>,
    ) -> GroupRingElt {
        if let Some(x) = memo.get(&mask) {
            return x.clone();
        }
        let k = mask.count_ones() as usize - 1;
        let group = m[0][0].group();
        let mut acc = GroupRingElt::zero(group);
        let mut pos = 0;
        for c in 0..m.len() {
            if mask & (1 << c) == 0 {
                continue;
            }
            if !m[k][c].is_zero() {
                let sub = go(mask & !(1 << c), m, memo);
                let term = m[k][c].mul(&sub);
                acc = if (k + pos).is_multiple_of(2) {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    go((1u32 << n) - 1, m, &mut memo)
}

/// Determinant over `Q[G]` through its character values: a cyclotomic
/// Gaussian elimination per character, then reassembly.
pub fn det_by_characters(m: &[Vec<GroupRingElt>]) -> GroupRingElt {
    let group = m[0][0].group().clone();
    let values: Vec<CycloNumber> = group
        .dual_characters()
        .par_iter()
        .map(|chi| {
            let evaluated: Vec<Vec<CycloNumber>> = m
                .iter()
                .map(|row| row.iter().map(|x| x.char_eval(chi)).collect())
                .collect();
            cyclo::determinant(&evaluated)
        })
        .collect();
    assemble_from_char_values(&group, &values).expect("determinant of rational entries is rational")
}

/// Lemma-style checks on presentations, each returning whether it holds.
pub mod laws {
    use super::*;

    /// `[R_(p) : Fitt(M)_(p)] = |M (x) Z_p|`.
    pub fn index_equals_cardinality(pres: &ModulePresentation, p: u64) -> Result<(BigInt, BigInt)> {
        pres.require_square()?;
        let fitt = pres.fitting_ideal()?;
        Ok((fitt.p_part_index(p)?, pres.p_cardinality(p)?))
    }

    /// `Fitt(M^dual) = Fitt(M)^#` at `p`.
    pub fn dual_fitting(pres: &ModulePresentation, p: u64) -> Result<bool> {
        let lhs = pres.dual()?.fitting_ideal()?;
        let rhs = pres.fitting_ideal()?.sharp();
        Ok(lhs.equal_at_p(&rhs, p))
    }

    /// `Fitt(A + B) = Fitt(A) Fitt(B)`.
    pub fn direct_sum(a: &ModulePresentation, b: &ModulePresentation) -> Result<bool> {
        let lhs = a.direct_sum(b)?.fitting_ideal()?;
        let rhs = a.fitting_ideal()?.product(&b.fitting_ideal()?)?;
        Ok(lhs == rhs)
    }

    /// `Fitt(A) <= Fitt(A / extra)` at `p`.
    pub fn surjection(
        a: &ModulePresentation,
        extra: Vec<Vec<GroupRingElt>>,
        p: u64,
    ) -> Result<bool> {
        let quotient = a.with_relations(extra)?;
        let big = quotient.fitting_ideal()?;
        Ok(big.contains_at_p(&a.fitting_ideal()?, p))
    }
}

pub fn is_zero_module(pres: &ModulePresentation) -> Result<bool> {
    Ok(pres.cardinality()?.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::group_ring::MinusContext;

    fn minus(n: u64) -> Ambient {
        let g = FiniteAbelianGroup::cyclic(n);
        Ambient::minus(MinusContext::new(&g, &g.element(&[(n / 2) as i64])).unwrap())
    }

    #[test]
    fn identity_relations_give_unit_ideal() {
        let amb = minus(6);
        let z = ModulePresentation::zero(&amb, 3);
        assert_eq!(z.fitting_ideal().unwrap(), ZLattice::unit(&amb));
        assert_eq!(z.cardinality().unwrap(), BigInt::one());
    }

    #[test]
    fn trivial_group_relation_three() {
        let t = FiniteAbelianGroup::trivial();
        let amb = Ambient::Full(t.clone());
        let m = ModulePresentation::cyclic(&amb, GroupRingElt::from_integers(&t, &[3])).unwrap();
        assert_eq!(m.fitting_ideal().unwrap().covolume(), arith::rational(3, 1));
        assert_eq!(m.cardinality().unwrap(), BigInt::from(3));
    }

    #[test]
    fn c2_minus_relation() {
        // x maps to -2 under the odd character
        let amb = minus(2);
        let g = amb.group().clone();
        let m =
            ModulePresentation::cyclic(&amb, GroupRingElt::from_integers(&g, &[-1, 1])).unwrap();
        let fitt = m.fitting_ideal().unwrap();
        assert_eq!(fitt.covolume(), arith::rational(2, 1));
        assert_eq!(m.cardinality().unwrap(), BigInt::from(2));
    }

    #[test]
    fn laplace_matches_characters() {
        let g = FiniteAbelianGroup::cyclic(6);
        let x = |c: &[i64]| GroupRingElt::from_integers(&g, c);
        let m = vec![
            vec![
                x(&[1, 2, 0, 0, 0, 1]),
                x(&[0, 1, 0, 0, 0, 0]),
                x(&[3, 0, 0, 0, 0, 0]),
            ],
            vec![
                x(&[0, 0, 1, 0, 0, 0]),
                x(&[2, 0, 0, 1, 0, 0]),
                x(&[0, 0, 0, 0, 5, 0]),
            ],
            vec![
                x(&[1, 0, 0, 0, 0, 0]),
                x(&[0, 0, 0, 0, 0, 0]),
                x(&[1, 1, 1, 1, 1, 1]),
            ],
        ];
        assert_eq!(det_laplace(&m), det_by_characters(&m));
    }

    #[test]
    fn surjection_onto_a_mod_p() {
        let amb = minus(2);
        let g = amb.group().clone();
        let a = ModulePresentation::cyclic(&amb, GroupRingElt::from_integers(&g, &[9, 0])).unwrap();
        let fa = a.fitting_ideal().unwrap();
        let q = a
            .with_relations(vec![vec![GroupRingElt::from_integers(&g, &[3, 0])]])
            .unwrap();
        let fq = q.fitting_ideal().unwrap();
        assert!(fq.contains_at_p(&fa, 3));
        assert!(!fa.contains_at_p(&fq, 3));
    }
}
