//! Elementary arithmetic on machine integers and big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let current = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(current.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Reduces a signed integer into `[0, m)`.
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut order = phi;
    for (q, _) in factorize(phi) {
        while order.is_multiple_of(q) && mod_pow(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Some(order)
}

/// Inverse of `a` modulo `m`.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if !g.gcd.is_one() {
        return None;
    }
    let x = g.x.mod_floor(&BigInt::from(m));
    Some(u64::try_from(x).expect("reduced inverse fits"))
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation_q(x: &BigRational, p: u64) -> i64 {
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

/// The p-part `p^{v_p(n)}` of a nonzero integer.
pub fn p_part(n: &BigInt, p: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), valuation(n, p) as usize)
}

/// Smallest prime not dividing `n`.
pub fn least_prime_not_dividing(n: u64) -> u64 {
    let mut q = 2;
    loop {
        if is_prime(q) && !n.is_multiple_of(q) {
            return q;
        }
        q += 1;
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `a/b` in lowest terms, or `a` when integral.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a/b` or `a`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_phi() {
        assert_eq!(mult_order(2, 23), Some(11));
        assert_eq!(mult_order(5, 23), Some(22));
        assert_eq!(mult_order(3, 4), Some(2));
        assert_eq!(mult_order(2, 4), None);
        assert_eq!(euler_phi(23), 22);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(-72), 3), 2);
        assert_eq!(valuation_q(&rational(9, 4), 2), -2);
        assert_eq!(p_part(&BigInt::from(12), 2), BigInt::from(4));
        assert_eq!(least_prime_not_dividing(23 * 46 * 3), 5);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-1, 4), Some(3));
    }

    #[test]
    fn rational_text() {
        let x = rational(-2, 8);
        assert_eq!(format_rational(&x), "-1/4");
        assert_eq!(parse_rational("-1/4"), Some(x));
        assert_eq!(parse_rational("7"), Some(rational(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
