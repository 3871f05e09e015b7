//! Primes of K = Q(zeta_3) and square tests for rational integers in the
//! completions of K.
//!
//! Only rational integers are ever tested, so everything reduces to rational
//! valuations plus a ramification index of 2 at the prime above 3.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::intbase::{is_perfect_square, is_prime, kronecker, sqrt_mod, valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KPrimeKind {
    /// Index 1 or 2: which root of x^2 + x + 1 mod l (smaller root first).
    Split(u8),
    Inert,
    RamifiedAboveThree,
}

/// A prime ideal of Z[zeta_3]. Serializes as its canonical label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct KPrime {
    pub residue_char: u64,
    pub kind: KPrimeKind,
}

impl KPrime {
    pub const P: KPrime = KPrime {
        residue_char: 3,
        kind: KPrimeKind::RamifiedAboveThree,
    };

    pub fn inert(l: u64) -> KPrime {
        debug_assert!(l % 3 == 2);
        KPrime {
            residue_char: l,
            kind: KPrimeKind::Inert,
        }
    }

    pub fn split(l: u64, index: u8) -> KPrime {
        debug_assert!(l % 3 == 1 && (index == 1 || index == 2));
        KPrime {
            residue_char: l,
            kind: KPrimeKind::Split(index),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, KPrimeKind::Split(_))
    }

    /// The other prime above the same rational prime, for split primes.
    pub fn conjugate(&self) -> KPrime {
        match self.kind {
            KPrimeKind::Split(i) => KPrime::split(self.residue_char, 3 - i),
            _ => *self,
        }
    }

    /// Root of x^2 + x + 1 modulo l that zeta_3 maps to, for split primes.
    pub fn zeta_image(&self) -> Option<u64> {
        match self.kind {
            KPrimeKind::Split(i) => {
                let (r1, r2) = cube_roots_of_unity(self.residue_char);
                Some(if i == 1 { r1 } else { r2 })
            }
            _ => None,
        }
    }

    /// Size of the residue field.
    pub fn norm(&self) -> u64 {
        match self.kind {
            KPrimeKind::Inert => self.residue_char * self.residue_char,
            _ => self.residue_char,
        }
    }
}

impl fmt::Display for KPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KPrimeKind::RamifiedAboveThree => write!(f, "p"),
            KPrimeKind::Inert => write!(f, "{}", self.residue_char),
            KPrimeKind::Split(1) => write!(f, "{}a", self.residue_char),
            KPrimeKind::Split(_) => write!(f, "{}b", self.residue_char),
        }
    }
}

impl FromStr for KPrime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "p" {
            return Ok(KPrime::P);
        }
        let (digits, index) = match s.strip_suffix('a') {
            Some(d) => (d, Some(1)),
            None => match s.strip_suffix('b') {
                Some(d) => (d, Some(2)),
                None => (s, None),
            },
        };
        let l: u64 = digits
            .parse()
            .map_err(|_| format!("bad prime label {s:?}"))?;
        if !is_prime(l) || l == 3 {
            return Err(format!("bad prime label {s:?}"));
        }
        match (l % 3, index) {
            (2, None) => Ok(KPrime::inert(l)),
            (1, Some(i)) => Ok(KPrime::split(l, i)),
            _ => Err(format!("label {s:?} does not match the splitting of {l}")),
        }
    }
}

impl TryFrom<String> for KPrime {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<KPrime> for String {
    fn from(q: KPrime) -> String {
        q.to_string()
    }
}

/// The two roots of x^2 + x + 1 modulo a prime l = 1 (mod 3), ascending.
fn cube_roots_of_unity(l: u64) -> (u64, u64) {
    // roots are (-1 +- sqrt(-3)) / 2
    let s = sqrt_mod(l - 3, l).expect("-3 is a square mod l for l = 1 mod 3");
    let inv2 = (l + 1) / 2;
    let r1 = crate::intbase::mulmod((l - 1 + s) % l, inv2, l);
    let r2 = crate::intbase::mulmod((2 * l - 1 - s) % l, inv2, l);
    (r1.min(r2), r1.max(r2))
}

pub fn k_primes_above(l: u64) -> Vec<KPrime> {
    debug_assert!(is_prime(l));
    match l % 3 {
        0 => vec![KPrime::P],
        1 => vec![KPrime::split(l, 1), KPrime::split(l, 2)],
        _ => vec![KPrime::inert(l)],
    }
}

/// Normalized valuation of a rational integer at a prime of K.
pub fn val_q(n: i128, q: &KPrime) -> u32 {
    let v = valuation(n, q.residue_char);
    match q.kind {
        KPrimeKind::RamifiedAboveThree => 2 * v,
        _ => v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSquareVerdict {
    pub is_square: bool,
    pub valuation_parity: Parity,
    /// The residue the decision was read from: u mod l (split), u mod 4
    /// (at 2), u*(-1)^v mod 3 (at p), 0 when parity alone decided.
    pub unit_class_witness: i64,
}

/// Decides whether `a` is a square in the completion K_q.
pub fn is_local_square(a: i64, q: &KPrime) -> LocalSquareVerdict {
    assert!(a != 0, "is_local_square(0)");
    let l = q.residue_char;
    let v = valuation(a as i128, l);
    let u = a as i128 / (l as i128).pow(v);
    match q.kind {
        KPrimeKind::RamifiedAboveThree => {
            // rational a always has even p-valuation; 3 = -zeta^2 (1-zeta)^2
            let w = (u * if v % 2 == 0 { 1 } else { -1 }).rem_euclid(3) as i64;
            LocalSquareVerdict {
                is_square: w == 1,
                valuation_parity: Parity::Even,
                unit_class_witness: w,
            }
        }
        _ if v % 2 == 1 => LocalSquareVerdict {
            is_square: false,
            valuation_parity: Parity::Odd,
            unit_class_witness: 0,
        },
        KPrimeKind::Inert if l == 2 => {
            let w = u.rem_euclid(4) as i64;
            LocalSquareVerdict {
                is_square: w == 1,
                valuation_parity: Parity::Even,
                unit_class_witness: w,
            }
        }
        KPrimeKind::Inert => LocalSquareVerdict {
            is_square: true,
            valuation_parity: Parity::Even,
            unit_class_witness: 0,
        },
        KPrimeKind::Split(_) => {
            let w = u.rem_euclid(l as i128) as i64;
            LocalSquareVerdict {
                is_square: kronecker(w, l as i64) == 1,
                valuation_parity: Parity::Even,
                unit_class_witness: w,
            }
        }
    }
}

/// K* squares among rational numbers are exactly Q*^2 and -3 Q*^2.
#[allow(non_snake_case)]
pub fn is_square_in_K(a: i64) -> bool {
    let a = a as i128;
    is_perfect_square(a) || (a % 3 == 0 && is_perfect_square(-a / 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intbase::primes_below;

    /// Squares of all x + y*zeta in (Z/mZ)[zeta], zeta^2 = -1 - zeta,
    /// returned as a membership table indexed by x + m*y.
    fn square_table(m: i64) -> Vec<bool> {
        let mut t = vec![false; (m * m) as usize];
        for x in 0..m {
            for y in 0..m {
                // (x + y z)^2 = x^2 + 2xy z + y^2 (-1 - z)
                let re = (x * x - y * y).rem_euclid(m);
                let im = (2 * x * y - y * y).rem_euclid(m);
                t[(re + m * im) as usize] = true;
            }
        }
        t
    }

    /// Independent oracle: strip even powers of the uniformizer, then look
    /// the remainder up among all squares of the residue ring.
    fn brute_force_square(a: i64, q: &KPrime) -> bool {
        let l = q.residue_char as i64;
        let mut r = a;
        match q.kind {
            KPrimeKind::Split(_) => {
                while r % (l * l) == 0 {
                    r /= l * l;
                }
                if r % l == 0 {
                    return false;
                }
                // zeta -> root, so the completion is Q_l: squares mod l
                (1..l).any(|x| (x * x - r).rem_euclid(l) == 0)
            }
            KPrimeKind::Inert => {
                while r % (l * l) == 0 {
                    r /= l * l;
                }
                if r % l == 0 {
                    return false;
                }
                let m = if l == 2 { 32 } else { l };
                square_table(m)[r.rem_euclid(m) as usize]
            }
            KPrimeKind::RamifiedAboveThree => {
                // 9 = p^4; work modulo 27 = p^6
                while r % 9 == 0 {
                    r /= 9;
                }
                square_table(27)[r.rem_euclid(27) as usize]
            }
        }
    }

    #[test]
    fn primes_above_examples() {
        assert_eq!(k_primes_above(3), vec![KPrime::P]);
        assert_eq!(k_primes_above(2), vec![KPrime::inert(2)]);
        let seven: Vec<String> = k_primes_above(7).iter().map(|q| q.label()).collect();
        assert_eq!(seven, vec!["7a", "7b"]);
        // 7 = (3 + zeta)(3 + zeta^2): zeta -> 2 or 4 mod 7
        assert_eq!(KPrime::split(7, 1).zeta_image(), Some(2));
        assert_eq!(KPrime::split(7, 2).zeta_image(), Some(4));
    }

    #[test]
    fn labels_roundtrip() {
        for l in primes_below(200) {
            for q in k_primes_above(l) {
                assert_eq!(q.label().parse::<KPrime>().unwrap(), q);
            }
        }
        assert!("9".parse::<KPrime>().is_err());
        assert!("5a".parse::<KPrime>().is_err());
        assert!("7".parse::<KPrime>().is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_q(9, &KPrime::P), 4);
        assert_eq!(val_q(100, &KPrime::inert(5)), 2);
        // l = 11 divides a once and is coprime to 2b
        let (a, b) = (11 * 7, 5);
        assert_eq!(val_q(4 * a * b * b, &KPrime::inert(11)), 1);
    }

    #[test]
    fn local_square_examples() {
        assert!(is_local_square(137, &KPrime::inert(2)).is_square);
        assert!(!is_local_square(137, &KPrime::P).is_square);
        assert!(is_local_square(2230, &KPrime::P).is_square);
        assert!(is_local_square(25, &KPrime::split(7, 1)).is_square);
        assert!(is_local_square(25, &KPrime::split(7, 2)).is_square);
        let v = is_local_square(2 * 17, &KPrime::inert(2));
        assert_eq!(v.valuation_parity, Parity::Odd);
        assert!(!v.is_square);
    }

    #[test]
    fn square_in_k_examples() {
        assert!(is_square_in_K(4));
        assert!(is_square_in_K(-27));
        assert!(is_square_in_K(-3));
        assert!(!is_square_in_K(79));
        assert!(!is_square_in_K(3));
        assert!(!is_square_in_K(-4));
    }

    #[test]
    fn local_square_matches_residue_ring_oracle() {
        let primes: Vec<KPrime> = [2u64, 3, 5, 7, 13]
            .iter()
            .flat_map(|&l| k_primes_above(l))
            .collect();
        for a in -500i64..=500 {
            if a == 0 {
                continue;
            }
            for q in &primes {
                assert_eq!(
                    is_local_square(a, q).is_square,
                    brute_force_square(a, q),
                    "a = {a}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn global_squares_are_local_squares() {
        let primes: Vec<KPrime> = primes_below(60)
            .into_iter()
            .flat_map(k_primes_above)
            .collect();
        for c in 1i64..40 {
            for a in [c * c, -3 * c * c] {
                for q in &primes {
                    assert!(is_local_square(a, q).is_square, "a = {a}, q = {q}");
                }
            }
        }
    }

    #[test]
    fn conjugates_agree() {
        for l in primes_below(100).into_iter().filter(|l| l % 3 == 1) {
            for a in -300i64..300 {
                if a != 0 {
                    assert_eq!(
                        is_local_square(a, &KPrime::split(l, 1)),
                        is_local_square(a, &KPrime::split(l, 2))
                    );
                }
            }
        }
    }
}
