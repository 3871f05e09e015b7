use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::eisenstein::{is_local_square, k_primes_above, val_q, KPrime, KPrimeKind};
use crate::error::{Error, Result};
use crate::intbase::factorize;

use super::params::CurveParams;

/// Which clause put a prime into its set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Origin {
    /// The generic condition at primes not above 3 (including 2 | a).
    Main,
    /// At 2 with 2 not dividing a: 4 does not divide b.
    T21,
    /// At 2 with 2 not dividing a: 8 | b.
    T22,
    /// At 2 with 2 not dividing a: 4 || b.
    T23,
    /// At p with p | a.
    T31,
    /// At p with p | b and p not dividing a.
    T32,
    /// At p with v_p(d) > 12.
    T33,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Member {
    pub prime: KPrime,
    pub origin: Origin,
}

/// The three disjoint sets of bad primes that drive the bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSets {
    pub s1: Vec<Member>,
    pub s2: Vec<Member>,
    pub s3: Vec<Member>,
}

impl SSets {
    fn primes(v: &[Member]) -> BTreeSet<KPrime> {
        v.iter().map(|m| m.prime).collect()
    }

    pub fn s1_primes(&self) -> BTreeSet<KPrime> {
        Self::primes(&self.s1)
    }

    pub fn s2_primes(&self) -> BTreeSet<KPrime> {
        Self::primes(&self.s2)
    }

    pub fn s3_primes(&self) -> BTreeSet<KPrime> {
        Self::primes(&self.s3)
    }

    pub fn s12(&self) -> BTreeSet<KPrime> {
        &self.s1_primes() | &self.s2_primes()
    }

    pub fn s13(&self) -> BTreeSet<KPrime> {
        &self.s1_primes() | &self.s3_primes()
    }

    pub fn is_disjoint(&self) -> bool {
        let (a, b, c) = (self.s1_primes(), self.s2_primes(), self.s3_primes());
        a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c)
    }
}

/// Rational primes dividing 6abd, ascending.
pub fn candidate_primes(params: &CurveParams) -> Result<Vec<u64>> {
    let mut ps: BTreeSet<u64> = BTreeSet::from([2, 3]);
    for n in [params.a, params.b, params.d] {
        ps.extend(factorize(n)?.primes());
    }
    Ok(ps.into_iter().collect())
}

/// Sorts the candidate K-primes into S1, S2, S3.
pub fn classify(params: &CurveParams) -> Result<SSets> {
    if !params.normalized {
        return Err(Error::PreconditionViolated(
            "classify expects normalized parameters".into(),
        ));
    }
    let (a, b, d) = (params.a as i128, params.b as i128, params.d as i128);
    let mut sets = SSets::default();
    for l in candidate_primes(params)? {
        for q in k_primes_above(l) {
            if !is_local_square(params.a, &q).is_square {
                continue;
            }
            let v = |n: i128| val_q(n, &q);
            let member = |origin| Member { prime: q, origin };
            if q.kind == KPrimeKind::RamifiedAboveThree {
                if v(a) > 0 && (v(a) != 6 || v(d) < 12) {
                    sets.s1.push(member(Origin::T31));
                } else if v(b) > 0 && v(a) == 0 {
                    sets.s2.push(member(Origin::T32));
                } else if v(d) > 12 {
                    sets.s3.push(member(Origin::T33));
                }
                continue;
            }
            let q_divides_2a = l == 2 || v(a) > 0;
            if v(a) > 0 && v(4 * a * b * b) % 6 != 0 {
                sets.s1.push(member(Origin::Main));
            } else if v(b) > 0 && !q_divides_2a {
                sets.s2.push(member(Origin::Main));
            } else if v(d) > 0 && !q_divides_2a {
                sets.s3.push(member(Origin::Main));
            }
            if l == 2 && v(a) == 0 {
                match v(b) {
                    0 | 1 => sets.s1.push(member(Origin::T21)),
                    2 => sets.s3.push(member(Origin::T23)),
                    _ => sets.s2.push(member(Origin::T22)),
                }
            }
        }
    }
    Ok(sets)
}
