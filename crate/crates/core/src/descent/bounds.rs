use serde::{Deserialize, Serialize};

/// Counts the bound formulas are assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundInputs {
    pub a_square_in_k: bool,
    pub three_divides_a: bool,
    /// 3-rank of the S1 u S2 class group of L (0 when a is a square in K).
    pub h12: u32,
    /// 3-rank of the S1 u S3 class group of L (0 when a is a square in K).
    pub h13: u32,
    /// Number of primes of L above S1 u S2 and S1 u S3.
    pub sl12: u32,
    pub sl13: u32,
    pub s2: u32,
    pub s3: u32,
    /// |S1 u S2| and |S1 u S3|.
    pub s12: u32,
    pub s13: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: u32,
    pub upper: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsiBranch {
    /// Class group containment sharpened by the Tamagawa comparison (3 does not divide a).
    Refined,
    /// Class group containment alone (3 | a).
    Containment,
    /// a is a square in K: only |S1 u S3| enters.
    SquareA,
}

impl PsiBranch {
    pub fn describe(&self) -> &'static str {
        match self {
            PsiBranch::Refined => "psi: S-class group bounds refined by Tamagawa comparison",
            PsiBranch::Containment => "psi: S-class group containment bounds",
            PsiBranch::SquareA => "psi: split algebra bound |S1 u S3| + 1",
        }
    }
}

pub fn psi_bounds(x: &BoundInputs) -> (Interval, PsiBranch) {
    let (h12, h13) = (x.h12 as i64, x.h13 as i64);
    let (s2, s3) = (x.s2 as i64, x.s3 as i64);
    let (sl12, sl13) = (x.sl12 as i64, x.sl13 as i64);
    if x.a_square_in_k {
        let iv = Interval {
            lower: 0,
            upper: x.s13 + 1,
        };
        return (iv, PsiBranch::SquareA);
    }
    if x.three_divides_a {
        let iv = Interval {
            lower: x.h12,
            upper: (h13 + sl13 + 2) as u32,
        };
        return (iv, PsiBranch::Containment);
    }
    let lower = h12.max(h13 + s3 - s2 - 1).max(0);
    let upper = (h12 + sl12 + s3 - s2 + 1).min(h13 + sl13 + 2);
    let iv = Interval {
        lower: lower as u32,
        upper: upper.max(0) as u32,
    };
    (iv, PsiBranch::Refined)
}

pub fn psihat_bounds(x: &BoundInputs) -> Interval {
    if x.a_square_in_k {
        Interval {
            lower: 0,
            upper: x.s12 + 1,
        }
    } else {
        Interval {
            lower: x.h13,
            upper: x.h12 + x.sl12 + 2,
        }
    }
}

/// 3-Selmer bounds. The second value is the looser bound obtained by adding
/// the two unrefined containment bounds.
pub fn sel3_bounds(x: &BoundInputs, rank_lower: Option<u32>) -> (Interval, u32) {
    let r = rank_lower.unwrap_or(0);
    if x.a_square_in_k {
        let upper = x.s12 + x.s13 + 2;
        return (Interval { lower: r, upper }, upper);
    }
    let (psi, _) = psi_bounds(x);
    let hat = psihat_bounds(x);
    let loose = x.h12 + x.h13 + x.sl12 + x.sl13 + 4;
    (
        Interval {
            lower: x.h12.max(r),
            upper: psi.upper + hat.upper,
        },
        loose,
    )
}

/// (-1)^(|S2| + |S3| + 1), defined when a is not a square in K and 3 does not divide a.
pub fn root_number(x: &BoundInputs) -> Option<i8> {
    if x.a_square_in_k || x.three_divides_a {
        return None;
    }
    Some(if (x.s2 + x.s3 + 1) % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inputs(h12: u32, h13: u32, s1: u32, s2: u32, s3: u32) -> BoundInputs {
        BoundInputs {
            a_square_in_k: false,
            three_divides_a: false,
            h12,
            h13,
            sl12: 2 * (s1 + s2),
            sl13: 2 * (s1 + s3),
            s2,
            s3,
            s12: s1 + s2,
            s13: s1 + s3,
        }
    }

    #[test]
    fn worked_values() {
        // (79, 131): S2 = {131}, h12 = h13 = 2
        let x = inputs(2, 2, 0, 1, 0);
        assert_eq!(psi_bounds(&x).0, Interval { lower: 2, upper: 4 });
        assert_eq!(psihat_bounds(&x), Interval { lower: 2, upper: 6 });
        assert_eq!(sel3_bounds(&x, Some(0)).0, Interval { lower: 2, upper: 10 });
        // (137, 143): S1 = {2}, S2 = {11}, S3 = {4409}, h12 = h13 = 1
        let x = inputs(1, 1, 1, 1, 1);
        assert_eq!(psihat_bounds(&x), Interval { lower: 1, upper: 7 });
        assert_eq!(sel3_bounds(&x, Some(1)).0, Interval { lower: 1, upper: 13 });
        assert_eq!(root_number(&inputs(0, 0, 1, 0, 0)), Some(-1));
        assert_eq!(root_number(&inputs(0, 0, 0, 0, 1)), Some(1));
    }

    #[test]
    fn square_branch() {
        let x = BoundInputs {
            a_square_in_k: true,
            s12: 2,
            s13: 1,
            ..Default::default()
        };
        assert_eq!(psi_bounds(&x).0, Interval { lower: 0, upper: 2 });
        assert_eq!(psihat_bounds(&x), Interval { lower: 0, upper: 3 });
        assert_eq!(sel3_bounds(&x, None).0, Interval { lower: 0, upper: 5 });
        assert_eq!(root_number(&x), None);
    }

    proptest! {
        #[test]
        fn exact_relation_fits(h12 in 0u32..6, h13 in 0u32..6, s1 in 0u32..4, s2 in 0u32..4, s3 in 0u32..4) {
            // h-values only ever drop as S grows, by at most 2 per prime
            prop_assume!(h12 <= h13 + 2 * s3 + 2 && h13 <= h12 + 2 * s2 + 2);
            let x = inputs(h12, h13, s1, s2, s3);
            let (psi, _) = psi_bounds(&x);
            let hat = psihat_bounds(&x);
            let k = s3 as i64 - s2 as i64 - 1;
            prop_assert!(psi.upper as i64 - hat.lower as i64 >= k);
            prop_assert!(k >= psi.lower as i64 - hat.upper as i64);
            prop_assert_eq!(root_number(&x).unwrap() as i64, if (s2 + s3 + 1) % 2 == 0 { 1 } else { -1 });
        }
    }
}
