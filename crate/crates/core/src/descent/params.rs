use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intbase::factorize;

/// Coefficients of y^2 = x^3 + a(x - b)^2 with d = 4a + 27b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveParams {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    /// -2^4 a^2 b^3 d
    pub disc: i128,
    pub normalized: bool,
}

fn checked_d(a: i64, b: i64) -> Result<i64> {
    let d = 4 * a as i128 + 27 * b as i128;
    i64::try_from(d).map_err(|_| Error::Overflow("4a + 27b"))
}

fn checked_disc(a: i64, b: i64, d: i64) -> Result<i128> {
    let (a, b, d) = (a as i128, b as i128, d as i128);
    (|| {
        (-16i128)
            .checked_mul(a.checked_mul(a)?)?
            .checked_mul(b.checked_mul(b)?.checked_mul(b)?)?
            .checked_mul(d)
    })()
    .ok_or(Error::Overflow("curve discriminant"))
}

impl CurveParams {
    /// The curve as given, without rescaling.
    pub fn raw(a: i64, b: i64) -> Result<CurveParams> {
        let d = checked_d(a, b)?;
        if a == 0 || b == 0 || d == 0 {
            return Err(Error::DegenerateCurve { a, b });
        }
        Ok(CurveParams {
            a,
            b,
            d,
            disc: checked_disc(a, b, d)?,
            normalized: false,
        })
    }

    /// Weierstrass coefficients (a2, a4, a6) of y^2 = x^3 + a x^2 - 2ab x + ab^2.
    pub fn weierstrass(&self) -> (i128, i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        (a, -2 * a * b, a * b * b)
    }

    /// Coefficients of the isogenous curve y^2 = x^3 - 27a(x - d)^2.
    pub fn dual_weierstrass(&self) -> (i128, i128, i128) {
        let (a, d) = (self.a as i128, self.d as i128);
        (-27 * a, 54 * a * d, -27 * a * d * d)
    }
}

/// Rescales (a, b) so that gcd(a, b) is square-free and prime to 3.
///
/// (a c^2, b c^2) and (a, b) give isomorphic curves over K for c in K*.
/// Rational square factors of the gcd are removed first; a remaining factor
/// 3 is removed with c^2 = -3, so (15, 21) becomes (-5, -7).
pub fn normalize(a: i64, b: i64) -> Result<CurveParams> {
    CurveParams::raw(a, b)?;
    let g = a.gcd(&b);
    let mut c = 1i64;
    for (p, e) in factorize(g)?.factors {
        c *= (p as i64).pow(e / 2);
    }
    let (mut a, mut b) = (a / (c * c), b / (c * c));
    if a % 3 == 0 && b % 3 == 0 {
        a /= -3;
        b /= -3;
    }
    let mut params = CurveParams::raw(a, b)?;
    params.normalized = true;
    Ok(params)
}
