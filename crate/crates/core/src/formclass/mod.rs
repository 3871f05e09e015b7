//! Binary quadratic forms and their class groups.
//!
//! Positive discriminants use the form (narrow) class group throughout. Its
//! 3-Sylow subgroup agrees with that of the ordinary class group, since the
//! kernel of narrow -> ordinary has order at most 2.

mod form;
mod group;

pub use form::{FormInt, QuadForm};
pub use group::{
    class_group, discriminant_bound, field_discriminant, is_fundamental, prime_form, three_rank,
    ClassGroup, PrimeForm, BOUND_ENV, DEFAULT_BOUND,
};

/// Class numbers of many negative discriminants by counting reduced forms,
/// with divisors of (b^2 - D)/4 read off a smallest-prime-factor sieve.
pub struct ImaginaryClassCounter {
    spf: Vec<u32>,
}

impl ImaginaryClassCounter {
    /// Sieve large enough for every discriminant with |D| <= `max_abs_disc`.
    pub fn new(max_abs_disc: u64) -> Self {
        // reduced forms have b^2 <= |D|/3, so (b^2 - D)/4 <= |D|/3
        let n = (max_abs_disc / 3 + 2) as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        ImaginaryClassCounter { spf }
    }

    fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    /// h(D) for a fundamental D < 0, counting w-weighted forms as one class.
    pub fn class_number(&self, d: i64) -> u64 {
        assert!(d < 0 && matches!(d.rem_euclid(4), 0 | 1));
        let bmax = crate::intbase::isqrt((-d / 3) as u128) as i64;
        assert!(
            ((bmax * bmax - d) / 4) as u64 <= self.limit(),
            "sieve too small for {d}"
        );
        let mut h = 0u64;
        let mut primes: Vec<(u64, u32)> = Vec::with_capacity(16);
        let mut divisors: Vec<u64> = Vec::with_capacity(256);
        let mut b = d.rem_euclid(2);
        while b <= bmax {
            let n = ((b * b - d) / 4) as u64;
            primes.clear();
            let mut m = n;
            while m > 1 {
                let p = self.spf[m as usize] as u64;
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                primes.push((p, e));
            }
            divisors.clear();
            divisors.push(1);
            for &(p, e) in &primes {
                let len = divisors.len();
                let mut pk = 1;
                for _ in 0..e {
                    pk *= p;
                    for i in 0..len {
                        let v = divisors[i] * pk;
                        if v * v <= n {
                            divisors.push(v);
                        }
                    }
                }
            }
            let b_abs = b as u64;
            for &a in &divisors {
                if a < b_abs.max(1) {
                    continue;
                }
                let c = n / a;
                h += if b_abs == 0 || b_abs == a || a == c { 1 } else { 2 };
            }
            b += 2;
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_matches_enumeration() {
        let counter = ImaginaryClassCounter::new(20_000);
        for m in 1..5000i64 {
            let d = field_discriminant(-m);
            if d.unsigned_abs() > 20_000 || !is_fundamental(d) {
                continue;
            }
            assert_eq!(
                counter.class_number(d),
                class_group(d).unwrap().order,
                "D = {d}"
            );
        }
    }
}
