//! p-adic valuations of cyclotomic numbers through unramified Galois-ring
//! embeddings `Z[zeta_m] -> GR(p^k, f)`, `p` coprime to `m`.
//!
//! The ring is `(Z/p^k)[y]/(G(y))` for a monic lift `G` of an irreducible
//! polynomial of degree `f = ord_m(p)` over `F_p`. The image `omega` of
//! `zeta_m` is the Teichmuller lift of an element of order `m` in `F_{p^f}`.
//! Primes of `Q(zeta_m)` above `p` correspond to the cosets of `<p>` in
//! `(Z/m)^x`: the coset of `t` labels the prime cut out by `zeta |-> omega^t`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

/// Default starting precision (digits in base `p`).
pub const DEFAULT_PRECISION: u32 = 20;

const MAX_PRECISION: u32 = 1 << 14;

// ---- polynomials over F_p (low degree first) ----

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mulmod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    let mut out: Vec<u64> = out.into_iter().map(|x| x as u64).collect();
    fp_rem(&mut out, g, p);
    out
}

/// In-place remainder modulo a monic `g`.
fn fp_rem(a: &mut Vec<u64>, g: &[u64], p: u64) {
    let d = g.len() - 1;
    while a.len() > d {
        let c = a.pop().expect("nonempty");
        if c == 0 {
            continue;
        }
        let base = a.len() - d;
        for i in 0..d {
            a[base + i] = (a[base + i] + (p - c) * g[i] % p) % p;
        }
    }
    fp_trim(a);
}

fn fp_powmod(a: &[u64], e: &BigUint, g: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    fp_rem(&mut result, g, p);
    let mut base = a.to_vec();
    fp_rem(&mut base, g, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            result = fp_mulmod(&result, &base, g, p);
        }
        base = fp_mulmod(&base, &base, g, p);
    }
    result
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        // make b monic, then a mod b
        let inv = arith::mod_inverse(*b.last().unwrap() as i64, p).expect("field");
        for x in b.iter_mut() {
            *x = *x * inv % p;
        }
        fp_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

/// Rabin's irreducibility test for monic `g` of degree `f`.
fn fp_is_irreducible(g: &[u64], p: u64) -> bool {
    let f = g.len() as u64 - 1;
    let x = vec![0u64, 1];
    let pe = BigUint::from(p);
    let frob_pow = |times: u64| {
        let mut r = x.clone();
        fp_rem(&mut r, g, p);
        for _ in 0..times {
            r = fp_powmod(&r, &pe, g, p);
        }
        r
    };
    let mut xr = x.clone();
    fp_rem(&mut xr, g, p);
    if fp_sub(&frob_pow(f), &xr, p) != Vec::<u64>::new() {
        return false;
    }
    for r in arith::prime_divisors(f) {
        let h = fp_sub(&frob_pow(f / r), &xr, p);
        let d = fp_gcd(g, &h, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

fn fp_irreducible(f: u64, p: u64) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    // enumerate monic polynomials in lexicographic order of lower coefficients
    let total = p.checked_pow(f as u32).expect("search space");
    for n in 0..total {
        let mut g: Vec<u64> = (0..f).map(|i| n / p.pow(i as u32) % p).collect();
        if g[0] == 0 {
            continue;
        }
        g.push(1);
        if fp_is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

// ---- the Galois ring ----

/// An unramified Galois-ring embedding of `Z[zeta_m]` at `p` with precision `k`.
#[derive(Debug)]
pub struct GaloisRingEmbedding {
    p: u64,
    precision: u32,
    m: u64,
    residue_degree: u64,
    modulus: BigInt,
    /// Monic lift of an irreducible polynomial over `F_p`, low degree first.
    defining: Vec<BigInt>,
    /// `omega^i` for `0 <= i < m`.
    omega_powers: Vec<Vec<BigInt>>,
    /// Minimal polynomial of `omega` over `Z/p^k`: a lifted irreducible factor
    /// of `x^m - 1`.
    factor: Vec<BigInt>,
    orbit_reps: Vec<u64>,
}

impl GaloisRingEmbedding {
    pub fn new(m: u64, p: u64, precision: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if arith::gcd(m, p) != 1 {
            return Err(Error::InvalidInput(format!("p = {p} divides m = {m}")));
        }
        let precision = precision.max(1);
        let f = arith::mult_order(p, m).expect("coprime");
        let g = fp_irreducible(f, p);
        let q = BigUint::from(p).pow(f as u32);

        // element of exact order m in F_q^x
        let cofactor = (&q - 1u32) / BigUint::from(m);
        let primes_m = arith::prime_divisors(m);
        let mut omega0 = None;
        let total = p.checked_pow(f as u32).expect("search space");
        for n in 1..total {
            let a: Vec<u64> = (0..f).map(|i| n / p.pow(i as u32) % p).collect();
            let h = fp_powmod(&a, &cofactor, &g, p);
            let ok = primes_m
                .iter()
                .all(|&r| fp_powmod(&h, &BigUint::from(m / r), &g, p) != vec![1u64]);
            if ok {
                omega0 = Some(h);
                break;
            }
        }
        let omega0 = omega0.expect("F_q^x is cyclic of order divisible by m");

        let modulus = num_traits::pow(BigInt::from(p), precision as usize);
        let defining: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
        let mut ring = GrCtx {
            modulus: modulus.clone(),
            defining: defining.clone(),
        };
        let mut omega: Vec<BigInt> = (0..f as usize)
            .map(|i| BigInt::from(omega0.get(i).copied().unwrap_or(0)))
            .collect();
        // Teichmuller lift: omega0^{q^{k-1}}
        let qb = BigInt::from(q.clone());
        for _ in 1..precision {
            omega = ring.pow(&omega, &qb);
        }
        let mut omega_powers = Vec::with_capacity(m as usize);
        let mut cur = ring.one();
        for _ in 0..m {
            omega_powers.push(cur.clone());
            cur = ring.mul(&cur, &omega);
        }
        debug_assert_eq!(cur, ring.one());

        // minimal polynomial prod_{i<f} (X - omega^{p^i}), coefficients in GR
        let mut factor: Vec<Vec<BigInt>> = vec![ring.one()];
        for i in 0..f {
            let e = arith::mod_pow(p, i, m);
            let root = omega_powers[e as usize].clone();
            let mut next = vec![ring.zero(); factor.len() + 1];
            for (d, c) in factor.iter().enumerate() {
                next[d + 1] = ring.add(&next[d + 1], c);
                let t = ring.mul(c, &root);
                next[d] = ring.sub(&next[d], &t);
            }
            factor = next;
        }
        let factor: Vec<BigInt> = factor
            .into_iter()
            .map(|c| {
                debug_assert!(c.iter().skip(1).all(Zero::is_zero));
                c[0].clone()
            })
            .collect();

        ring.modulus = modulus.clone();
        Ok(Self {
            p,
            precision,
            m,
            residue_degree: f,
            modulus,
            defining,
            omega_powers,
            factor,
            orbit_reps: orbit_representatives(m, p),
        })
    }

    /// Shared embedding for `(m, p, precision)`.
    pub fn cached(m: u64, p: u64, precision: u32) -> Result<Arc<Self>> {
        type Cache = RwLock<HashMap<(u64, u64, u32), Arc<GaloisRingEmbedding>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(e) = cache.read().expect("cache lock").get(&(m, p, precision)) {
            return Ok(e.clone());
        }
        let e = Arc::new(Self::new(m, p, precision)?);
        cache
            .write()
            .expect("cache lock")
            .insert((m, p, precision), e.clone());
        Ok(e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn residue_degree(&self) -> u64 {
        self.residue_degree
    }

    pub fn defining_polynomial(&self) -> &[BigInt] {
        &self.defining
    }

    /// The lifted irreducible factor of `x^m - 1` (monic, degree `f`).
    pub fn factor(&self) -> &[BigInt] {
        &self.factor
    }

    /// One representative `t` per prime above `p` (cosets of `<p>` in `(Z/m)^x`).
    pub fn orbit_representatives(&self) -> &[u64] {
        &self.orbit_reps
    }

    /// `omega^e` as a Galois-ring element.
    pub fn omega_power(&self, e: u64) -> &[BigInt] {
        &self.omega_powers[(e % self.m) as usize]
    }

    fn ctx(&self) -> GrCtx {
        GrCtx {
            modulus: self.modulus.clone(),
            defining: self.defining.clone(),
        }
    }

    /// `omega^e == 1` modulo `p`.
    pub fn omega_power_is_one_mod_p(&self, e: u64) -> bool {
        let p = BigInt::from(self.p);
        let w = self.omega_power(e);
        w.iter().enumerate().all(|(i, c)| {
            let r = c.mod_floor(&p);
            if i == 0 {
                r.is_one()
            } else {
                r.is_zero()
            }
        })
    }

    /// Image of `sum_i c_i zeta^i` (integer coefficients) under `zeta |-> omega^t`.
    pub fn evaluate(&self, coeffs: &[BigInt], t: u64) -> Vec<BigInt> {
        let ring = self.ctx();
        let mut acc = ring.zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.omega_power(t * i as u64 % self.m);
            for (slot, x) in acc.iter_mut().zip(w) {
                *slot += c * x;
            }
        }
        acc.iter().map(|x| x.mod_floor(&self.modulus)).collect()
    }

    /// Valuation of a Galois-ring element, `None` when it vanishes modulo `p^k`.
    pub fn valuation(&self, x: &[BigInt]) -> Option<u32> {
        x.iter()
            .filter(|c| !c.is_zero())
            .map(|c| arith::valuation(c, self.p))
            .min()
    }
}

/// Coset representatives (least elements) of `<p>` in `(Z/m)^x`.
pub fn orbit_representatives(m: u64, p: u64) -> Vec<u64> {
    let mut seen = vec![false; m as usize];
    let mut reps = Vec::new();
    for t in 0..m {
        if arith::gcd(t, m) != 1 || seen[t as usize] {
            continue;
        }
        reps.push(t);
        let mut u = t;
        loop {
            seen[u as usize] = true;
            u = u * p % m;
            if u == t {
                break;
            }
        }
    }
    if m == 1 {
        reps = vec![0];
    }
    reps
}

struct GrCtx {
    modulus: BigInt,
    defining: Vec<BigInt>,
}

impl GrCtx {
    fn degree(&self) -> usize {
        self.defining.len() - 1
    }

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }

    fn one(&self) -> Vec<BigInt> {
        let mut o = self.zero();
        o[0] = BigInt::one();
        o
    }

    fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y).mod_floor(&self.modulus))
            .collect()
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).mod_floor(&self.modulus))
            .collect()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] -= &c * &self.defining[i];
            }
        }
        prod.truncate(d);
        prod.iter().map(|x| x.mod_floor(&self.modulus)).collect()
    }

    fn pow(&self, a: &[BigInt], e: &BigInt) -> Vec<BigInt> {
        let mut result = self.one();
        let mut base = a.to_vec();
        let (_, bytes) = e.to_bytes_le();
        let e = BigUint::from_bytes_le(&bytes);
        for i in 0..e.bits() {
            if e.bit(i) {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
        }
        result
    }
}

/// Valuations of a nonzero `x in Q(zeta_m)` at every prime above `p`, as
/// `(orbit representative, valuation)` pairs. Starts at `precision` digits
/// and doubles until every image is determined.
pub fn padic_valuations(x: &CycloNumber, p: u64, precision: u32) -> Result<Vec<(u64, i64)>> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let m = x.order();
    if arith::gcd(m, p) != 1 {
        return Err(Error::InvalidInput(format!(
            "p = {p} divides the order {m}"
        )));
    }
    let (den, ints) = x.integral_parts();
    let den_val = arith::valuation(&den, p) as i64;
    let mut k = precision.max(1);
    loop {
        let emb = GaloisRingEmbedding::cached(m, p, k)?;
        let vals: Option<Vec<(u64, i64)>> = emb
            .orbit_representatives()
            .iter()
            .map(|&t| {
                emb.valuation(&emb.evaluate(&ints, t))
                    .map(|v| (t, v as i64 - den_val))
            })
            .collect();
        match vals {
            Some(v) => return Ok(v),
            None if k < MAX_PRECISION => {
                log::debug!(
                    "escalating p-adic precision for m={m}, p={p}: {k} -> {}",
                    2 * k
                );
                k *= 2;
            }
            None => return Err(Error::Invariant("p-adic precision limit reached".into())),
        }
    }
}

/// Valuation at the single prime labelled by `t` (any element of its orbit).
pub fn padic_valuation_at(x: &CycloNumber, p: u64, t: u64) -> Result<i64> {
    let vals = padic_valuations(x, p, DEFAULT_PRECISION)?;
    let m = x.order();
    let mut u = t % m;
    for _ in 0..m {
        if let Some(&(_, v)) = vals.iter().find(|(r, _)| *r == u) {
            return Ok(v);
        }
        u = u * p % m;
    }
    Err(Error::InvalidInput(format!("{t} is not a unit modulo {m}")))
}

/// The orbit representative of `t` under multiplication by `p` modulo `m`.
pub fn orbit_of(t: u64, m: u64, p: u64) -> u64 {
    let mut best = t % m;
    let mut u = t % m;
    loop {
        u = u * p % m;
        if u == t % m {
            return best;
        }
        best = best.min(u);
    }
}

/// Sum of residue degree times valuation over all primes above `p`.
pub fn weighted_valuation_sum(vals: &[(u64, i64)], m: u64, p: u64) -> i64 {
    let f = arith::mult_order(p, m).expect("coprime") as i64;
    vals.iter().map(|(_, v)| f * v).sum()
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_has_zero_valuations() {
        let v = padic_valuations(&CycloNumber::one(23), 3, DEFAULT_PRECISION).unwrap();
        assert!(v.iter().all(|&(_, x)| x == 0));
        assert_eq!(v.len(), 2); // ord_23(3) = 11
    }

    #[test]
    fn three_is_inert_in_gaussian_field() {
        let v = padic_valuations(&CycloNumber::from_integer(4, 3), 3, DEFAULT_PRECISION).unwrap();
        assert_eq!(v, vec![(1, 1)]);
        assert_eq!(weighted_valuation_sum(&v, 4, 3), 2); // v_3(N(3)) = v_3(9)
    }

    #[test]
    fn one_minus_zeta23_is_prime_to_three() {
        let x = CycloNumber::one(23).sub(&CycloNumber::root_of_unity(23, 1));
        let v = padic_valuations(&x, 3, DEFAULT_PRECISION).unwrap();
        assert!(v.iter().all(|&(_, x)| x == 0));
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(
            padic_valuations(&CycloNumber::zero(5), 3, 20),
            Err(Error::ZeroValuation)
        );
    }

    #[test]
    fn embedding_invariants() {
        for (m, p) in [(22u64, 3u64), (11, 5), (12, 7), (7, 2), (1, 3), (2, 5)] {
            let e = GaloisRingEmbedding::new(m, p, 6).unwrap();
            assert!(e.omega_power_is_one_mod_p(m));
            for r in arith::prime_divisors(m) {
                assert!(!e.omega_power_is_one_mod_p(m / r), "m={m} p={p} r={r}");
            }
            let cosets = arith::euler_phi(m) / e.residue_degree();
            assert_eq!(e.orbit_representatives().len() as u64, cosets);
            assert_eq!(e.factor().len() as u64, e.residue_degree() + 1);
            // the factor divides x^m - 1 modulo p^k
            let modulus = num_traits::pow(BigInt::from(p), 6);
            let mut rem: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
            rem[0] = -BigInt::one();
            rem[m as usize] = BigInt::one();
            let d = e.factor().len() - 1;
            for k in (d..rem.len()).rev() {
                let c = rem[k].clone();
                for (i, fc) in e.factor().iter().enumerate() {
                    rem[k - d + i] -= &c * fc;
                }
            }
            assert!(
                rem.iter().all(|c| c.mod_floor(&modulus).is_zero()),
                "m={m} p={p}"
            );
        }
    }

    #[test]
    fn negative_valuations_from_denominators() {
        let x = CycloNumber::from_rational(4, crate::arith::rational(1, 9));
        let v = padic_valuations(&x, 3, DEFAULT_PRECISION).unwrap();
        assert_eq!(v, vec![(1, -2)]);
        assert!(v[0].1.is_negative());
    }

    #[test]
    fn precision_escalation() {
        // 3^30 needs more than the starting precision
        let x = CycloNumber::from_rational(5, BigInt::from(3).pow(30u32).into());
        let v = padic_valuations(&x, 3, 4).unwrap();
        assert_eq!(v, vec![(1, 30)]);
    }
}
