//! Explicit families: large psi-Selmer rank, the (n, n) density experiment,
//! and curves attached to a fixed biquadratic field.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::descent::{analyze, classify, normalize};
use crate::eisenstein::{is_square_in_K, KPrime};
use crate::error::{Error, Result};
use crate::formclass::ImaginaryClassCounter;
use crate::intbase::{is_prime, is_squarefree, kronecker};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    LargeRank {
        primes: Vec<u64>,
        psi_lower: u32,
        /// How psi_lower was obtained: from the class group computation, or
        /// from |S3| - |S2| - 1 alone when the discriminants are too large.
        lower_bound_source: String,
    },
    Biquadratic {
        a_prime: i64,
        ell: u64,
        /// Reduced fraction "num/den".
        j_invariant: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub a: i64,
    pub b: i64,
    pub certificate: Certificate,
    pub verified_claims: Vec<(String, bool)>,
}

impl FamilyMember {
    pub fn all_verified(&self) -> bool {
        self.verified_claims.iter().all(|(_, ok)| *ok)
    }
}

fn claim(s: &str, ok: bool) -> (String, bool) {
    (s.to_string(), ok)
}

/// Primes p = 11 (mod 12), in increasing order, below `bound`.
fn primes_11_mod_12(bound: u64) -> Vec<u64> {
    (11..bound).step_by(12).filter(|&p| is_prime(p)).collect()
}

/// All k-subsets of `primes` (ascending) with product at most `bound`.
fn subsets_below(primes: &[u64], k: usize, bound: u128) -> Vec<(u128, Vec<u64>)> {
    fn go(
        primes: &[u64],
        start: usize,
        k: usize,
        prod: u128,
        bound: u128,
        cur: &mut Vec<u64>,
        out: &mut Vec<(u128, Vec<u64>)>,
    ) {
        if cur.len() == k {
            out.push((prod, cur.clone()));
            return;
        }
        for i in start..primes.len() {
            let p = primes[i] as u128;
            // the remaining factors are all at least p
            let need = (k - cur.len()) as u32;
            if p.checked_pow(need).map_or(true, |m| prod * m > bound) {
                break;
            }
            cur.push(primes[i]);
            go(primes, i + 1, k, prod * p, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(primes, 0, k, 1, bound, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn verify_large_rank(n: u32, primes: &[u64]) -> Option<FamilyMember> {
    let prod: i128 = primes.iter().map(|&p| p as i128).product();
    let a = i64::try_from((prod - 27) / 4).ok()?;
    if a == 0 {
        return None;
    }
    let params = normalize(a, 1).ok()?;
    let ssets = classify(&params).ok()?;
    let expected: BTreeSet<KPrime> = primes.iter().map(|&p| KPrime::inert(p)).collect();
    let not_square = !is_square_in_K(a);
    let s3 = ssets.s3_primes();
    let s2_empty = ssets.s2.is_empty();
    let (psi_lower, source) = match analyze(a, 1, None) {
        Ok(rep) => (rep.psi_lower, "class group"),
        // h13 >= 0 still gives psi_lower >= |S3| - |S2| - 1
        Err(Error::OutOfRange { .. }) if not_square => (
            (s3.len() as i64 - ssets.s2.len() as i64 - 1).max(0) as u32,
            "S-set count",
        ),
        Err(_) => return None,
    };
    let claims = vec![
        claim("a = -1 (mod 3)", a.rem_euclid(3) == 2),
        claim("a is not a square in K", not_square),
        claim("S2 is empty", s2_empty),
        claim("S3 is exactly the chosen primes", s3 == expected),
        claim("psi_lower >= 2n", psi_lower >= 2 * n),
    ];
    let member = FamilyMember {
        a,
        b: 1,
        certificate: Certificate::LargeRank {
            primes: primes.to_vec(),
            psi_lower,
            lower_bound_source: source.to_string(),
        },
        verified_claims: claims,
    };
    member.all_verified().then_some(member)
}

/// The first `count` curves (a, 1) with a = (p_1 ... p_{2n+1} - 27)/4 over
/// distinct primes p_i = -1 (mod 12), ordered by the product, keeping only
/// those whose claims re-verify.
pub fn large_rank_family(n: u32, count: usize) -> Vec<FamilyMember> {
    let k = 2 * n as usize + 1;
    let smallest = primes_11_mod_12(2000);
    let floor: u128 = smallest.iter().take(k - 1).map(|&p| p as u128).product();
    let mut bound: u128 = floor * smallest[k - 1] as u128;
    while bound < 1 << 100 {
        // the largest prime in a tuple is at most bound / (product of the k - 1 smallest)
        let primes = primes_11_mod_12((bound / floor) as u64 + 1);
        let members: Vec<FamilyMember> = subsets_below(&primes, k, bound)
            .iter()
            .filter_map(|(_, t)| verify_large_rank(n, t))
            .take(count)
            .collect();
        if members.len() >= count {
            return members;
        }
        bound *= 2;
    }
    Vec::new()
}

/// n squarefree, n = 2 or 3 (mod 4), n = 2 (mod 3), and n a non-residue mod 31.
pub fn eligible_n(n: u64) -> bool {
    n > 0 && congruence_conditions(n) && matches!(is_squarefree(n as i64), Ok(true))
}

fn congruence_conditions(n: u64) -> bool {
    matches!(n % 4, 2 | 3) && n % 3 == 2 && kronecker(n as i64, 31) == -1
}

/// squarefree[n] for 0 <= n <= x.
fn squarefree_sieve(x: u64) -> Vec<bool> {
    let mut sf = vec![true; x as usize + 1];
    sf[0] = false;
    let mut p = 2u64;
    while p * p <= x {
        let q = (p * p) as usize;
        for m in (q..=x as usize).step_by(q) {
            sf[m] = false;
        }
        p += 1;
    }
    sf
}

pub const DENSITY_BOUND_DEFAULT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub x: u64,
    pub eligible_count: u64,
    /// 31 X / (2^8 zeta(2)).
    pub predicted_count: f64,
    /// Eligible n whose field Q(sqrt(-3n)) has class number prime to 3.
    pub h3_zero_count: u64,
    /// h3_zero_count / eligible_count.
    pub sel3_rank1_fraction: f64,
    /// h3_zero_count / X, to compare with 31 / (2^9 zeta(2)).
    pub fraction_of_all_n: f64,
    /// h3_zero_count / #{squarefree n <= X}.
    pub fraction_of_squarefree_n: f64,
    pub squarefree_count: u64,
}

pub fn zeta2() -> f64 {
    std::f64::consts::PI * std::f64::consts::PI / 6.0
}

pub fn density_experiment(x: u64) -> Result<DensityReport> {
    density_experiment_with_bound(x, DENSITY_BOUND_DEFAULT)
}

pub fn density_experiment_with_bound(x: u64, bound: u64) -> Result<DensityReport> {
    use rayon::prelude::*;
    if x == 0 || x > bound {
        return Err(Error::OutOfRange {
            disc: x as i64,
            bound: bound as i64,
        });
    }
    let counter = ImaginaryClassCounter::new(12 * x);
    let squarefree_table = squarefree_sieve(x);
    let chunk = 4096u64;
    let (eligible, h3_zero, squarefree) = (0..x.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = (0u64, 0u64, 0u64);
            for n in (c * chunk + 1)..=((c + 1) * chunk).min(x) {
                if !squarefree_table[n as usize] {
                    continue;
                }
                acc.2 += 1;
                if congruence_conditions(n) {
                    acc.0 += 1;
                    // -3n = 2, 3 (mod 4), so the field discriminant is -12n
                    if counter.class_number(-12 * n as i64) % 3 != 0 {
                        acc.1 += 1;
                    }
                }
            }
            acc
        })
        .reduce(|| (0, 0, 0), |p, q| (p.0 + q.0, p.1 + q.1, p.2 + q.2));
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Ok(DensityReport {
        x,
        eligible_count: eligible,
        predicted_count: 31.0 * x as f64 / (256.0 * zeta2()),
        h3_zero_count: h3_zero,
        sel3_rank1_fraction: ratio(h3_zero, eligible),
        fraction_of_all_n: ratio(h3_zero, x),
        fraction_of_squarefree_n: ratio(h3_zero, squarefree),
        squarefree_count: squarefree,
    })
}

/// j(E_{a,l}) = -2^8 a (a + 6l)^3 / (l^3 (4a + 27l)) as a reduced fraction.
pub fn j_invariant(a: i64, b: i64) -> (i128, i128) {
    let (a, b) = (a as i128, b as i128);
    let mut num = -256 * a * (a + 6 * b).pow(3);
    let mut den = b.pow(3) * (4 * a + 27 * b);
    let g = num.gcd(&den);
    num /= g;
    den /= g;
    if den < 0 {
        num = -num;
        den = -den;
    }
    (num, den)
}

/// Curves (a, l) for primes l = 1 (mod 3) with (a'/l) = -1, l not dividing 3a',
/// where a = 16a' when a' = 1 (mod 4) and a = a' otherwise. Members with a
/// repeated j-invariant are skipped.
pub fn biquadratic_family(a_prime: i64, count: usize) -> Result<Vec<FamilyMember>> {
    if a_prime == 0 || !matches!(is_squarefree(a_prime), Ok(true)) || a_prime % 3 == 0 {
        return Err(Error::PreconditionViolated(format!(
            "a' = {a_prime} must be squarefree and prime to 3"
        )));
    }
    let a = if a_prime.rem_euclid(4) == 1 {
        16 * a_prime
    } else {
        a_prime
    };
    let mut out = Vec::new();
    let mut seen_j = BTreeSet::new();
    let mut ell = 7u64;
    while out.len() < count {
        let in_t = is_prime(ell)
            && a_prime % ell as i64 != 0
            && kronecker(a_prime, ell as i64) == -1;
        if in_t {
            let j = j_invariant(a, ell as i64);
            if seen_j.insert(j) {
                let params = normalize(a, ell as i64)?;
                let ssets = classify(&params)?;
                out.push(FamilyMember {
                    a: params.a,
                    b: params.b,
                    certificate: Certificate::Biquadratic {
                        a_prime,
                        ell,
                        j_invariant: format!("{}/{}", j.0, j.1),
                    },
                    verified_claims: vec![
                        claim("S1 is empty", ssets.s1.is_empty()),
                        claim("S2 is empty", ssets.s2.is_empty()),
                    ],
                });
            }
        }
        ell += 6;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eligibility() {
        assert!(eligible_n(11));
        assert!(!eligible_n(2));
        assert!(!eligible_n(4));
        let brute: Vec<u64> = (1..=100)
            .filter(|&n| {
                let sf = (2..=10u64).all(|p| n % (p * p) != 0);
                let qr = n % 31 == 0 || (1..31u64).any(|y| (y * y) % 31 == n % 31);
                sf && (n % 4 == 2 || n % 4 == 3) && n % 3 == 2 && !qr
            })
            .collect();
        let fast: Vec<u64> = (1..=100).filter(|&n| eligible_n(n)).collect();
        assert_eq!(fast, brute);
    }

    #[test]
    fn thirty_classes_mod_372() {
        let classes: BTreeSet<u64> = (1..=20_000).filter(|&n| eligible_n(n)).map(|n| n % 372).collect();
        assert_eq!(classes.len(), 30);
    }

    #[test]
    fn small_density() {
        let r = density_experiment(100).unwrap();
        assert_eq!(r.eligible_count, (1..=100).filter(|&n| eligible_n(n)).count() as u64);
        let small = density_experiment(50).unwrap();
        assert!(small.eligible_count <= r.eligible_count && small.h3_zero_count <= r.h3_zero_count);
        assert!(matches!(
            density_experiment_with_bound(11, 10),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn large_rank_first_member() {
        let m = &large_rank_family(1, 1)[0];
        assert_eq!(m.a, 2966);
        assert!(matches!(&m.certificate, Certificate::LargeRank { primes, .. } if primes == &[11, 23, 47]));
        assert!(m.all_verified());
        // a = (11 - 27)/4 = -4 is not a square in K and passes every check
        let m = &large_rank_family(0, 1)[0];
        assert_eq!(m.a, -4);
        assert!(m.all_verified());
    }

    #[test]
    fn biquadratic_members() {
        let ms = biquadratic_family(5, 4).unwrap();
        assert_eq!(ms[0].a, 80);
        assert!(matches!(ms[0].certificate, Certificate::Biquadratic { ell: 7, .. }));
        assert!(ms.iter().all(FamilyMember::all_verified));
        assert!(biquadratic_family(6, 1).is_err());
    }

    #[test]
    fn j_invariant_is_reduced() {
        let (n, d) = j_invariant(80, 7);
        assert_eq!(n.gcd(&d), 1);
        assert!(d > 0);
    }
}
