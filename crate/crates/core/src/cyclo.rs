//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is stored as its residue modulo the `m`-th cyclotomic
//! polynomial: a vector of `phi(m)` rational coefficients in the power basis
//! `1, zeta, ..., zeta^{phi(m)-1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg;

struct Tables {
    /// Coefficients of `Phi_m`, low degree first, monic.
    phi: Vec<BigInt>,
    /// `zeta^i` reduced, for `0 <= i < m`.
    powers: Vec<Vec<BigInt>>,
}

fn tables(m: u64) -> Arc<Tables> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("cache lock").get(&m) {
        return t.clone();
    }
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![BigInt::zero(); deg];
    cur[0] = BigInt::one();
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce
        let top = cur[deg - 1].clone();
        let mut next = vec![BigInt::zero(); deg];
        for i in (1..deg).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for (i, slot) in next.iter_mut().enumerate() {
                *slot -= &top * &phi[i];
            }
        }
        cur = next;
    }
    let t = Arc::new(Tables { phi, powers });
    cache.write().expect("cache lock").insert(m, t.clone());
    t
}

/// `Phi_m` as integer coefficients, low degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in arith::divisors(m) {
        let mut xd = vec![BigInt::zero(); d as usize + 1];
        xd[0] = -BigInt::one();
        xd[d as usize] = BigInt::one();
        match arith::mobius(m / d) {
            1 => num = poly_mul_int(&num, &xd),
            -1 => den = poly_mul_int(&den, &xd),
            _ => {}
        }
    }
    poly_div_exact(&num, &den)
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let qlen = num.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = &rem[k + dd] / &lead;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// An element of `Q(zeta_m)`.
#[derive(Clone)]
pub struct CycloNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn degree(order: u64) -> usize {
        arith::euler_phi(order) as usize
    }

    pub fn zero(order: u64) -> Self {
        Self {
            order,
            coeffs: vec![BigRational::zero(); Self::degree(order)],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u64, q: BigRational) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = q;
        x
    }

    pub fn from_integer(order: u64, n: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(n)))
    }

    /// Coefficients in the power basis; padded or reduced as needed.
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRational>) -> Self {
        let t = tables(order);
        let mut x = Self::zero(order);
        for (i, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &t.powers[i % order as usize];
            for (slot, b) in x.coeffs.iter_mut().zip(p) {
                if !b.is_zero() {
                    *slot += &c * BigRational::from_integer(b.clone());
                }
            }
        }
        x
    }

    /// `zeta_m^t`.
    pub fn root_of_unity(order: u64, t: i64) -> Self {
        Self::power_of_zeta(order, arith::modulo(t, order))
    }

    fn power_of_zeta(order: u64, k: u64) -> Self {
        let t = tables(order);
        Self {
            order,
            coeffs: t.powers[k as usize]
                .iter()
                .map(|b| BigRational::from_integer(b.clone()))
                .collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same element viewed in `Q(zeta_n)`, `m | n`.
    pub fn coerce(&self, n: u64) -> Self {
        assert!(
            n.is_multiple_of(self.order),
            "{} does not divide {}",
            self.order,
            n
        );
        if n == self.order {
            return self.clone();
        }
        let step = n / self.order;
        let t = tables(n);
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &t.powers[(i as u64 * step % n) as usize];
            for (slot, b) in out.coeffs.iter_mut().zip(p) {
                if !b.is_zero() {
                    *slot += c * BigRational::from_integer(b.clone());
                }
            }
        }
        out
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let n = arith::lcm(self.order, other.order);
        (self.coerce(n), other.coerce(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.common(other);
            return a.add(&b);
        }
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.common(other);
            return a.mul(&b);
        }
        let deg = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self {
            order: self.order,
            coeffs: reduce(self.order, prod),
        }
    }

    /// Multiplication by `zeta^t`.
    pub fn mul_zeta_power(&self, t: i64) -> Self {
        let k = arith::modulo(t, self.order);
        if k == 0 {
            return self.clone();
        }
        let tb = tables(self.order);
        let mut out = Self::zero(self.order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &tb.powers[((i as u64 + k) % self.order) as usize];
            for (slot, b) in out.coeffs.iter_mut().zip(p) {
                if !b.is_zero() {
                    *slot += c * BigRational::from_integer(b.clone());
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `self` in the power basis (columns are
    /// `self * zeta^i`).
    fn multiplication_matrix(&self) -> Vec<Vec<BigRational>> {
        let deg = self.coeffs.len();
        let cols: Vec<Self> = (0..deg as i64).map(|i| self.mul_zeta_power(i)).collect();
        (0..deg)
            .map(|r| (0..deg).map(|c| cols[c].coeffs[r].clone()).collect())
            .collect()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("cyclotomic inverse"));
        }
        let deg = self.coeffs.len();
        let mut a = self.multiplication_matrix();
        // augment with e_0 and solve by Gauss-Jordan
        for (r, row) in a.iter_mut().enumerate() {
            row.push(if r == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        for c in 0..deg {
            let p = (c..deg)
                .find(|&r| !a[r][c].is_zero())
                .expect("nonzero element is invertible");
            a.swap(c, p);
            let pivot = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &pivot;
            }
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        Ok(Self {
            order: self.order,
            coeffs: a.into_iter().map(|row| row[deg].clone()).collect(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// The automorphism `zeta |-> zeta^k`.
    pub fn conj(&self, k: i64) -> Result<Self> {
        let m = self.order;
        let kk = arith::modulo(k, m);
        if arith::gcd(kk, m) != 1 {
            return Err(Error::NonUnit(k, m));
        }
        let tb = tables(m);
        let mut out = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &tb.powers[((i as u64 * kk) % m) as usize];
            for (slot, b) in out.coeffs.iter_mut().zip(p) {
                if !b.is_zero() {
                    *slot += c * BigRational::from_integer(b.clone());
                }
            }
        }
        Ok(out)
    }

    /// Complex conjugation.
    pub fn complex_conj(&self) -> Self {
        self.conj(-1).expect("-1 is a unit")
    }

    /// `N_{Q(zeta_m)/Q}(self)` as the resultant `Res(Phi_m, A)`, where `A` is
    /// the coefficient polynomial.
    pub fn norm(&self) -> BigRational {
        let phi: Vec<BigRational> = tables(self.order)
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        resultant(&phi, &a)
    }

    /// Least common denominator `D` and integer coefficients of `D * self`.
    pub fn integral_parts(&self) -> (BigInt, Vec<BigInt>) {
        let d = arith::common_denominator(self.coeffs.iter());
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
            .collect();
        (d, ints)
    }
}

fn reduce(order: u64, mut prod: Vec<BigRational>) -> Vec<BigRational> {
    let t = tables(order);
    let deg = t.phi.len() - 1;
    for k in (deg..prod.len()).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for i in 0..deg {
            if !t.phi[i].is_zero() {
                prod[k - deg + i] -= &c * BigRational::from_integer(t.phi[i].clone());
            }
        }
    }
    prod.truncate(deg);
    prod
}

/// `Res(f, g)` for polynomials with rational coefficients, low degree first,
/// via the Sylvester determinant.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let m = f.len() - 1;
    let n = g.len() - 1;
    if n == 0 {
        return num_traits::pow(g[0].clone(), m);
    }
    if m == 0 {
        return num_traits::pow(f[0].clone(), n);
    }
    let size = m + n;
    let mut syl = vec![vec![BigRational::zero(); size]; size];
    for r in 0..n {
        for (i, c) in f.iter().rev().enumerate() {
            syl[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            syl[n + r][r + i] = c.clone();
        }
    }
    linalg::det_rational(&syl)
}

/// Determinant of a square matrix over `Q(zeta_m)` by Gaussian elimination.
/// Entries are coerced to a common field first.
pub fn determinant(m: &[Vec<CycloNumber>]) -> CycloNumber {
    let order = m
        .iter()
        .flatten()
        .fold(1, |acc, x| arith::lcm(acc, x.order()));
    let n = m.len();
    let mut a: Vec<Vec<CycloNumber>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.coerce(order)).collect())
        .collect();
    let mut det = CycloNumber::one(order);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return CycloNumber::zero(order);
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        let pivot_inv = a[c][c].inv().expect("nonzero pivot");
        det = det.mul(&a[c][c]);
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&pivot_inv);
            for k in c..n {
                let s = f.mul(&a[c][k]);
                a[r][k] = a[r][k].sub(&s);
            }
        }
    }
    det
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.common(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber[{}]({})", self.order, self)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = arith::format_rational(c);
            terms.push(match i {
                0 => coeff,
                _ => {
                    let z = if i == 1 {
                        format!("z{}", self.order)
                    } else {
                        format!("z{}^{}", self.order, i)
                    };
                    if c.is_one() {
                        z
                    } else if (-c).is_one() {
                        format!("-{z}")
                    } else if c.is_negative() || !c.denom().is_one() {
                        format!("({coeff})*{z}")
                    } else {
                        format!("{coeff}*{z}")
                    }
                }
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
