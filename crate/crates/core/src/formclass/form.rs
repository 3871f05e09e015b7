use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intbase::isqrt;

/// Integer types a form can be stored in.
pub trait FormInt:
    PrimInt + Signed + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> FormInt for T where
    T: PrimInt + Signed + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// The binary quadratic form a x^2 + b x y + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: fmt::Display> fmt::Display for QuadForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn wide<T: FormInt>(x: T) -> i128 {
    x.to_i128().expect("form coefficient fits in i128")
}

fn narrow<T: FormInt>(x: i128) -> Result<T> {
    T::from(x).ok_or(Error::Overflow("form coefficient"))
}

/// floor(sqrt(d)) for d > 0.
fn floor_sqrt(d: i128) -> i128 {
    isqrt(d as u128) as i128
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

impl<T: FormInt> QuadForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        QuadForm { a, b, c }
    }

    /// Builds (a, b, (b^2 - D) / 4a), failing if the division is inexact.
    pub fn from_abd(a: T, b: T, disc: T) -> Result<Self> {
        let num = wide(b) * wide(b) - wide(disc);
        let den = 4 * wide(a);
        if den == 0 || num % den != 0 {
            return Err(Error::PreconditionViolated(format!(
                "no form ({a}, {b}, *) of discriminant {disc}"
            )));
        }
        Ok(QuadForm::new(a, b, narrow(num / den)?))
    }

    pub fn disc(&self) -> T {
        self.b * self.b - T::from(4).unwrap() * self.a * self.c
    }

    fn disc_wide(&self) -> i128 {
        let (a, b, c) = (wide(self.a), wide(self.b), wide(self.c));
        b * b - 4 * a * c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == T::one()
    }

    /// The identity form (1, D mod 2, (D mod 2 - D) / 4).
    pub fn principal(disc: T) -> Self {
        let b = if disc.is_odd() { T::one() } else { T::zero() };
        let c = (b * b - disc) / T::from(4).unwrap();
        QuadForm::new(T::one(), b, c)
    }

    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c)
    }

    fn to_wide(self) -> QuadForm<i128> {
        QuadForm::new(wide(self.a), wide(self.b), wide(self.c))
    }

    fn from_wide(f: QuadForm<i128>) -> Result<Self> {
        Ok(QuadForm::new(narrow(f.a)?, narrow(f.b)?, narrow(f.c)?))
    }

    /// Reduced for negative D: |b| <= a <= c with b >= 0 if |b| = a or a = c.
    /// Reduced for positive D: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (wide(self.a), wide(self.b), wide(self.c));
        let d = self.disc_wide();
        if d < 0 {
            let ok = b.abs() <= a && a <= c;
            ok && !(b < 0 && (b.abs() == a || a == c))
        } else {
            let s = floor_sqrt(d);
            // sqrt(D) is irrational, so strict inequalities become these
            b > 0 && b <= s && 2 * a.abs() > s - b && 2 * a.abs() <= s + b
        }
    }

    /// Gauss reduction. For negative D this is the unique reduced form of
    /// the class; for positive D it is some reduced form on the class cycle.
    pub fn reduce(&self) -> Result<Self> {
        let f = self.to_wide();
        let r = if f.disc_wide() < 0 {
            reduce_definite(f)
        } else {
            let s = floor_sqrt(f.disc_wide());
            let mut g = f;
            let mut steps = 0u64;
            while !g.is_reduced() {
                g = rho_step(g, s);
                steps += 1;
                if steps > 1 << 20 {
                    return Err(Error::PreconditionViolated(format!(
                        "indefinite reduction of {self} did not terminate"
                    )));
                }
            }
            g
        };
        Self::from_wide(r)
    }

    /// One step of the reduction operator for positive discriminant:
    /// (a, b, c) -> (c, r, (r^2 - D) / 4c) with r = -b mod 2c normalized.
    pub fn rho(&self) -> Result<Self> {
        let f = self.to_wide();
        let d = f.disc_wide();
        if d <= 0 {
            return Err(Error::PreconditionViolated(
                "rho is defined for positive discriminants".into(),
            ));
        }
        Self::from_wide(rho_step(f, floor_sqrt(d)))
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let (f, g) = (self.to_wide(), other.to_wide());
        let (d1, d2) = (f.disc_wide(), g.disc_wide());
        if d1 != d2 {
            return Err(Error::DiscMismatch(d1 as i64, d2 as i64));
        }
        Self::from_wide(compose_wide(f, g, d1)).and_then(|h| h.reduce())
    }

    /// Square-and-multiply power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse() } else { *self }.reduce()?;
        let mut e = e.unsigned_abs();
        let mut acc = Self::principal(self.disc());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }
}

fn reduce_definite(mut f: QuadForm<i128>) -> QuadForm<i128> {
    loop {
        if f.b > f.a || f.b <= -f.a {
            // bring b into (-a, a]
            let two_a = 2 * f.a;
            let mut r = f.b.rem_euclid(two_a);
            if r > f.a {
                r -= two_a;
            }
            let k = (r - f.b) / two_a;
            f.c += k * (f.b + k * f.a);
            f.b = r;
        }
        if f.a > f.c {
            f = QuadForm::new(f.c, -f.b, f.a);
            continue;
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        return f;
    }
}

fn rho_step(f: QuadForm<i128>, s: i128) -> QuadForm<i128> {
    let d = f.disc_wide();
    let c = f.c;
    let two_c = 2 * c.abs();
    let mut r = (-f.b).rem_euclid(two_c);
    if c.abs() > s {
        // -|c| < r <= |c|
        if r > c.abs() {
            r -= two_c;
        }
    } else {
        // s - 2|c| < r <= s
        r += ((s - r).div_euclid(two_c)) * two_c;
    }
    QuadForm::new(c, r, (r * r - d) / (4 * c))
}

fn compose_wide(f: QuadForm<i128>, g: QuadForm<i128>, d: i128) -> QuadForm<i128> {
    let s = (f.b + g.b) / 2;
    let (g1, x, y) = ext_gcd(f.a, g.a);
    let (e, z, w) = ext_gcd(g1, s);
    let (mu, nu) = (z * x, z * y);
    let a3 = f.a * g.a / (e * e);
    let two_a3 = 2 * a3.abs();
    let num = (mu * f.a % (e * two_a3)) * g.b
        + (nu * g.a % (e * two_a3)) * f.b
        + (w % (e * two_a3)) * ((f.b * g.b + d) / 2);
    let b3 = (num / e).rem_euclid(two_a3);
    QuadForm::new(a3, b3, (b3 * b3 - d) / (4 * a3))
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = QuadForm<i64>;

    #[test]
    fn reduce_examples() {
        assert_eq!(F::new(1, 1, 6).reduce().unwrap(), F::new(1, 1, 6));
        assert_eq!(F::new(3, -1, 2).reduce().unwrap(), F::new(2, 1, 3));
        let r = F::new(1, 13, -15).reduce().unwrap();
        assert!(r.is_reduced());
        assert_eq!(r.disc(), 229);
    }

    #[test]
    fn rho_stays_on_reduced_forms() {
        let mut f = F::new(1, 13, -15).reduce().unwrap();
        let start = f;
        for _ in 0..100 {
            f = f.rho().unwrap();
            assert!(f.is_reduced());
            assert_eq!(f.disc(), 229);
            if f == start {
                return;
            }
        }
        panic!("cycle did not close");
    }

    #[test]
    fn compose_examples() {
        let g = F::new(2, 1, 3);
        let id = F::principal(-23);
        assert_eq!(id.compose(&g).unwrap(), g);
        assert_eq!(g.compose(&g).unwrap(), F::new(2, -1, 3));
        assert_eq!(g.compose(&g.inverse()).unwrap(), id);
        assert!(g.compose(&F::principal(-4)).is_err());
    }

    #[test]
    fn wide_alias_agrees() {
        let f = QuadForm::<i128>::new(3, -1, 2).reduce().unwrap();
        assert_eq!(f, QuadForm::new(2, 1, 3));
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, a.gcd(&b));
            }
        }
    }
}
