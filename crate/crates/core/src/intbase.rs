//! Rational-integer primitives: primality, factorization, square-free parts
//! and the Kronecker symbol.
//!
//! Primality is deterministic on the whole `u64` range: Miller-Rabin with the
//! first twelve prime bases has no pseudoprimes below 3.3e24.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division limit before switching to Pollard-Brent.
const TRIAL_LIMIT: u64 = 1_000_000;
/// Iteration budget for a single rho attempt, and number of attempts.
const RHO_ITERATIONS: u64 = 1 << 22;
const RHO_ATTEMPTS: u64 = 32;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: i64,
    /// Prime powers of |value|, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn sign(&self) -> i8 {
        if self.value < 0 {
            -1
        } else {
            1
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Recompute |value| from the factor list.
    pub fn unsigned_product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor or `None`
/// when the budget runs out.
fn rho_split(n: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..=RHO_ATTEMPTS {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        let mut steps = 0u64;
        const BATCH: u64 = 128;
        while g == 1 && steps < RHO_ITERATIONS {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            steps += r;
            r *= 2;
        }
        if g == n {
            // Batched product collapsed; backtrack one step at a time.
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn factor_into(n: u64, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    let d = rho_split(n).ok_or(Error::Unfactorable(n as i128))?;
    factor_into(d, out)?;
    factor_into(n / d, out)
}

/// Complete factorization of a nonzero integer.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::PreconditionViolated("factorize(0)".into()));
    }
    let mut m = n.unsigned_abs();
    let mut primes = Vec::new();
    while m % 2 == 0 {
        primes.push(2);
        m /= 2;
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
        p += 2;
    }
    if m > 1 {
        if p * p > m {
            primes.push(m);
        } else {
            factor_into(m, &mut primes)?;
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

/// Writes `n = m * c^2` with `m` square-free and carrying the sign of `n`.
pub fn squarefree_core(n: i64) -> Result<(i64, u64)> {
    let f = factorize(n)?;
    let mut m: i64 = f.sign() as i64;
    let mut c: u64 = 1;
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            m *= p as i64;
        }
        c *= p.pow(e / 2);
    }
    Ok((m, c))
}

pub fn is_squarefree(n: i64) -> Result<bool> {
    Ok(factorize(n)?.factors.iter().all(|&(_, e)| e == 1))
}

/// Exponent of the prime `p` in `n` (n != 0).
pub fn valuation(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Kronecker symbol (a/n), with (a/2) read off a mod 8 and (a/-1) from the
/// sign of a.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k: i32 = 1;
    let v = n.trailing_zeros();
    n >>= v;
    if v % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            k = -k;
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            let r = n % 8;
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        let t = n % a;
        n = a;
        a = t;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if it exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub(crate) fn modpow(base: u64, exp: u64, m: u64) -> u64 {
    pow_mod(base, exp, m)
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    mul_mod(a, b, m)
}

/// Primes below `limit` by a plain sieve.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(is_prime(4409));
        assert!(!is_prime(11891));
        assert!(!is_prime(1));
        // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(11891).unwrap().factors, vec![(11, 1), (23, 1), (47, 1)]);
        let f = factorize(-27).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.factors, vec![(3, 3)]);
        // semiprime with both factors above the trial-division limit
        let f = factorize(1_000_003 * 1_000_033).unwrap();
        assert_eq!(f.factors, vec![(1_000_003, 1), (1_000_033, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn squarefree_core_examples() {
        assert_eq!(squarefree_core(80).unwrap(), (5, 4));
        assert_eq!(squarefree_core(7).unwrap(), (7, 1));
        assert_eq!(squarefree_core(-12).unwrap(), (-3, 2));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-3, 11), -1);
        assert_eq!(kronecker(1, 97), 1);
        assert_eq!(kronecker(2, 31), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(6, 2), 0);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(-339, 11), -1);
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for &p in &[3u64, 5, 7, 13, 17, 41, 97, 101, 7681] {
            for a in 0..p.min(300) {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                } else {
                    assert_eq!(kronecker(a as i64, p as i64), -1);
                }
            }
        }
    }
}
