//! 3-ranks of S-class groups of L = K(sqrt a).
//!
//! L/Q is biquadratic with quadratic subfields K, Q(sqrt m) and Q(sqrt -3m),
//! m the square-free part of a. The 3-part of Cl(L) is the product of the
//! 3-parts of the two non-K subfields (Cl(K) is trivial), and the class of a
//! prime of L maps to the pair of classes of its norms to those subfields.
//!
//! For the image of S(L) to split as a product of per-subfield subgroups,
//! every rational prime under S that splits in both subfields must bring
//! all four primes of L above it. That holds exactly when S contains both
//! conjugates of each split K-prime, which is checked.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::eisenstein::{is_local_square, is_square_in_K, KPrime};
use crate::error::{Error, Result};
use crate::formclass::{class_group, field_discriminant, prime_form, PrimeForm};
use crate::intbase::squarefree_core;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldPair {
    pub m: i64,
    /// Discriminant of Q(sqrt m).
    pub d1: i64,
    /// Discriminant of Q(sqrt -3m).
    pub d2: i64,
}

impl SubfieldPair {
    pub fn new(a: i64) -> Result<SubfieldPair> {
        if is_square_in_K(a) {
            return Err(Error::PreconditionViolated(format!(
                "{a} is a square in K, so K(sqrt a) is not a field"
            )));
        }
        let (m, _) = squarefree_core(a)?;
        let (m2, _) = squarefree_core(-3 * m)?;
        Ok(SubfieldPair {
            m,
            d1: field_discriminant(m),
            d2: field_discriminant(m2),
        })
    }

    pub fn discriminants(&self) -> [i64; 2] {
        [self.d1, self.d2]
    }
}

/// Rank over F_3 of a list of vectors.
pub fn rank_mod3(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|x| x % 3).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        // scale the pivot row to 1 (2 is its own inverse mod 3)
        if m[rank][col] == 2 {
            for x in m[rank].iter_mut() {
                *x = (*x * 2) % 3;
            }
        }
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + 3 * 3 - f * m[rank][j]) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// 3-rank of Cl(L).
#[allow(non_snake_case)]
pub fn h3_of_L(a: i64) -> Result<usize> {
    let pair = SubfieldPair::new(a)?;
    let mut r = 0;
    for d in pair.discriminants() {
        r += class_group(d)?.three_rank();
    }
    Ok(r)
}

fn check_members(a: i64, s: &BTreeSet<KPrime>) -> Result<()> {
    for q in s {
        if !is_local_square(a, q).is_square {
            return Err(Error::PreconditionViolated(format!(
                "{a} is not a square at {q}, so {q} does not split in K(sqrt a)"
            )));
        }
    }
    Ok(())
}

/// 3-rank of the S(L)-class group of L, S(L) the primes of L above S.
#[allow(non_snake_case)]
pub fn h3_S(a: i64, s: &BTreeSet<KPrime>) -> Result<usize> {
    check_members(a, s)?;
    if let Some(q) = s.iter().find(|q| q.is_split() && !s.contains(&q.conjugate())) {
        return Err(Error::PreconditionViolated(format!(
            "{q} is in S without its conjugate {}",
            q.conjugate()
        )));
    }
    let pair = SubfieldPair::new(a)?;
    let ells: BTreeSet<u64> = s.iter().map(|q| q.residue_char).collect();
    let mut total = 0;
    for d in pair.discriminants() {
        let g = class_group(d)?;
        let r = g.three_rank();
        if r == 0 {
            continue;
        }
        let mut rows = Vec::new();
        for &l in &ells {
            if let PrimeForm::Split(f) = prime_form(l, d)? {
                rows.push(g.coords_mod3(&f)?);
            }
        }
        total += r - rank_mod3(&rows);
    }
    Ok(total)
}

/// |S(L)|: every member of S splits in L, so this is 2|S|.
#[allow(non_snake_case)]
pub fn s_primes_in_L_count(s: &BTreeSet<KPrime>, a: i64) -> Result<usize> {
    check_members(a, s)?;
    Ok(2 * s.len())
}
