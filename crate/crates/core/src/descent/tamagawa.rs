use serde::{Deserialize, Serialize};

use crate::eisenstein::{is_local_square, val_q, KPrime, KPrimeKind};

use super::params::CurveParams;

/// Tamagawa numbers of E and of its 3-isogenous curve at one prime.
/// `None` means the local analysis here does not determine the value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamagawaRecord {
    pub q: KPrime,
    pub c_e: Option<u32>,
    pub c_ehat: Option<u32>,
    pub reduction_note: String,
}

fn record(q: &KPrime, c_e: Option<u32>, c_ehat: Option<u32>, note: &str) -> TamagawaRecord {
    TamagawaRecord {
        q: *q,
        c_e,
        c_ehat,
        reduction_note: note.to_string(),
    }
}

/// Non-split I_n has Tamagawa number 1 or 2 by the parity of n.
fn nonsplit(n: u32) -> u32 {
    if n % 2 == 0 {
        2
    } else {
        1
    }
}

pub fn tamagawa(params: &CurveParams, q: &KPrime) -> TamagawaRecord {
    let (a, b, d) = (params.a as i128, params.b as i128, params.d as i128);
    let v = |n: i128| val_q(n, q);
    let square = is_local_square(params.a, q).is_square;

    if q.kind == KPrimeKind::RamifiedAboveThree {
        if v(a) > 0 {
            return record(q, None, None, "3 | a: not determined");
        }
        if v(b) == 0 {
            return record(q, Some(1), Some(1), "good reduction");
        }
        return if square {
            let n = v(b);
            record(q, Some(3 * n), Some(n), "split multiplicative, I_3n and I_n")
        } else {
            record(q, Some(2), Some(2), "multiplicative, a not a local square")
        };
    }

    if params.disc % q.residue_char as i128 != 0 {
        return record(q, Some(1), Some(1), "good reduction");
    }
    let two = q.residue_char == 2;

    if !square {
        // the node's tangents are defined over K_q(sqrt a), so multiplicative
        // fibres are non-split; isogenous curves share the reduction type
        if v(b) > 0 && !two && v(a) == 0 {
            let n = v(b);
            return record(q, Some(nonsplit(3 * n)), Some(nonsplit(n)), "non-split I_3n and I_n");
        }
        if v(d) > 0 && !two && v(a) == 0 {
            let n = v(d);
            return record(q, Some(nonsplit(n)), Some(nonsplit(3 * n)), "non-split I_n and I_3n");
        }
        return record(q, None, None, "a not a local square: c_E = c_Ehat");
    }

    if v(a) > 0 {
        return match v(4 * a * b * b) % 6 {
            0 => record(q, Some(1), Some(1), "q | a, v(4ab^2) = 0 mod 6"),
            _ => record(q, Some(3), Some(3), "q | a, type IV or IV*"),
        };
    }
    if two {
        return match v(b) {
            0 | 1 => record(q, Some(3), Some(3), "q = 2, 4 does not divide b"),
            2 => {
                let n = v(d) - 2;
                record(q, Some(n), Some(3 * n), "q = 2, 4 || b")
            }
            vb => {
                let n = vb - 2;
                record(q, Some(3 * n), Some(n), "q = 2, 8 | b")
            }
        };
    }
    if v(b) > 0 {
        let n = v(b);
        return record(q, Some(3 * n), Some(n), "split multiplicative, I_3n and I_n");
    }
    let n = v(d);
    record(q, Some(n), Some(3 * n), "split multiplicative, I_n and I_3n")
}

#[cfg(test)]
mod tests {
    use super::super::params::normalize;
    use super::*;

    #[test]
    fn tamagawa_examples() {
        let p = normalize(137, 137).unwrap();
        let r = tamagawa(&p, &KPrime::inert(2));
        assert_eq!((r.c_e, r.c_ehat), (Some(3), Some(3)));

        // 11 | 22, 11 does not divide 2 * 113
        let p = normalize(113, 22).unwrap();
        let r = tamagawa(&p, &KPrime::inert(11));
        assert_eq!((r.c_e, r.c_ehat), (Some(3), Some(1)));

        let r = tamagawa(&p, &KPrime::inert(5));
        assert_eq!((r.c_e, r.c_ehat), (Some(1), Some(1)));
    }

    #[test]
    fn ratios_are_powers_of_three() {
        for (a, b) in [(79, 131), (2230, 48), (137, 143), (1714, 20), (142, 12)] {
            let p = normalize(a, b).unwrap();
            for l in super::super::classify::candidate_primes(&p).unwrap() {
                for q in crate::eisenstein::k_primes_above(l) {
                    if let TamagawaRecord {
                        c_e: Some(x),
                        c_ehat: Some(y),
                        ..
                    } = tamagawa(&p, &q)
                    {
                        assert!(x == y || x == 3 * y || y == 3 * x, "{a},{b} at {q}");
                    }
                }
            }
        }
    }
}
