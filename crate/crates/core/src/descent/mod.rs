//! From (a, b) to bounds on the psi-, psi-hat- and 3-Selmer ranks over K.

mod bounds;
mod classify;
mod isogeny;
mod params;
mod tamagawa;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bounds::{
    psi_bounds, psihat_bounds, root_number, sel3_bounds, BoundInputs, Interval, PsiBranch,
};
pub use classify::{candidate_primes, classify, Member, Origin, SSets};
pub use isogeny::{apply_isogeny, kernel_size, reduce_curves, Direction, FpCurve, Point};
pub use params::{normalize, CurveParams};
pub use tamagawa::{tamagawa, TamagawaRecord};

use crate::eisenstein::{is_square_in_K, k_primes_above, KPrime};
use crate::error::{Error, Result};
use crate::sclass::{h3_S, s_primes_in_L_count};

/// A known rank or a range for it. Written "3" or "0..2".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RankInput {
    Exact(u32),
    Interval(u32, u32),
}

impl RankInput {
    pub fn lower(&self) -> u32 {
        match *self {
            RankInput::Exact(r) | RankInput::Interval(r, _) => r,
        }
    }
}

impl fmt::Display for RankInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankInput::Exact(r) => write!(f, "{r}"),
            RankInput::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

impl FromStr for RankInput {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("bad rank {s:?}: expected N or LO..HI");
        let s = s.trim();
        match s.split_once("..") {
            None => s.parse().map(RankInput::Exact).map_err(|_| bad()),
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                Ok(if lo == hi {
                    RankInput::Exact(lo)
                } else {
                    RankInput::Interval(lo, hi)
                })
            }
        }
    }
}

impl TryFrom<String> for RankInput {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<RankInput> for String {
    fn from(r: RankInput) -> String {
        r.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerReport {
    pub params: CurveParams,
    pub a_square_in_k: bool,
    pub ssets: SSets,
    /// 3-ranks of the S1 u S2 and S1 u S3 class groups of L; absent when a
    /// is a square in K.
    pub h12: Option<u32>,
    pub h13: Option<u32>,
    /// Number of primes of L above S1 u S2 and above S1 u S3.
    pub sl12: Option<u32>,
    pub sl13: Option<u32>,
    pub psi_lower: u32,
    pub psi_upper: u32,
    pub psihat_lower: u32,
    pub psihat_upper: u32,
    pub sel3_lower: u32,
    pub sel3_upper: u32,
    /// The sum of the two unrefined containment bounds.
    pub sel3_upper_loose: u32,
    pub root_number: Option<i8>,
    pub rank_input: Option<RankInput>,
    pub tamagawa: Vec<TamagawaRecord>,
    pub theorem_trace: Vec<String>,
}

impl SelmerReport {
    pub fn bound_inputs(&self) -> BoundInputs {
        let s = &self.ssets;
        BoundInputs {
            a_square_in_k: self.a_square_in_k,
            three_divides_a: self.params.a % 3 == 0,
            h12: self.h12.unwrap_or(0),
            h13: self.h13.unwrap_or(0),
            sl12: self.sl12.unwrap_or(0),
            sl13: self.sl13.unwrap_or(0),
            s2: s.s2.len() as u32,
            s3: s.s3.len() as u32,
            s12: s.s12().len() as u32,
            s13: s.s13().len() as u32,
        }
    }
}

/// Tamagawa records at every K-prime above a candidate bad prime.
pub fn tamagawa_table(params: &CurveParams) -> Result<Vec<TamagawaRecord>> {
    let mut out = Vec::new();
    for l in candidate_primes(params)? {
        for q in k_primes_above(l) {
            out.push(tamagawa(params, &q));
        }
    }
    Ok(out)
}

/// Primes where c_E = 3 c_Ehat and where c_Ehat = 3 c_E, among those with
/// both values known.
pub fn tamagawa_jumps(records: &[TamagawaRecord]) -> (Vec<KPrime>, Vec<KPrime>) {
    let mut up = Vec::new();
    let mut down = Vec::new();
    for r in records {
        if let (Some(e), Some(h)) = (r.c_e, r.c_ehat) {
            if e == 3 * h {
                up.push(r.q);
            } else if h == 3 * e {
                down.push(r.q);
            }
        }
    }
    (up, down)
}

/// Normalizes, classifies, computes the S-class 3-ranks and assembles every bound.
pub fn analyze(a: i64, b: i64, rank_input: Option<RankInput>) -> Result<SelmerReport> {
    let params = normalize(a, b)?;
    let ssets = classify(&params)?;
    if !ssets.is_disjoint() {
        return Err(Error::PreconditionViolated(format!(
            "S-sets of ({a}, {b}) overlap"
        )));
    }
    let a_square = is_square_in_K(params.a);
    let (s12, s13) = (ssets.s12(), ssets.s13());
    let (h12, h13, sl12, sl13) = if a_square {
        (None, None, None, None)
    } else {
        (
            Some(h3_S(params.a, &s12)? as u32),
            Some(h3_S(params.a, &s13)? as u32),
            Some(s_primes_in_L_count(&s12, params.a)? as u32),
            Some(s_primes_in_L_count(&s13, params.a)? as u32),
        )
    };
    let mut report = SelmerReport {
        params,
        a_square_in_k: a_square,
        ssets,
        h12,
        h13,
        sl12,
        sl13,
        psi_lower: 0,
        psi_upper: 0,
        psihat_lower: 0,
        psihat_upper: 0,
        sel3_lower: 0,
        sel3_upper: 0,
        sel3_upper_loose: 0,
        root_number: None,
        rank_input,
        tamagawa: tamagawa_table(&params)?,
        theorem_trace: Vec::new(),
    };
    let x = report.bound_inputs();
    let (psi, branch) = psi_bounds(&x);
    let hat = psihat_bounds(&x);
    let (sel3, loose) = sel3_bounds(&x, rank_input.map(|r| r.lower()));
    report.psi_lower = psi.lower;
    report.psi_upper = psi.upper;
    report.psihat_lower = hat.lower;
    report.psihat_upper = hat.upper;
    report.sel3_lower = sel3.lower;
    report.sel3_upper = sel3.upper;
    report.sel3_upper_loose = loose;
    report.root_number = root_number(&x);

    let trace = &mut report.theorem_trace;
    trace.push(branch.describe().to_string());
    trace.push(if a_square {
        "psihat: split algebra bound |S1 u S2| + 1".to_string()
    } else {
        "psihat: S-class group containment bounds for the dual curve".to_string()
    });
    trace.push(if a_square {
        "sel3: |S1 u S2| + |S1 u S3| + 2".to_string()
    } else {
        "sel3: dim Sel^3 <= dim Sel^psi + dim Sel^psihat".to_string()
    });
    if report.root_number.is_some() {
        trace.push("root number: parity of |S2| + |S3|".to_string());
    }
    Ok(report)
}
