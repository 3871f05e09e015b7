//! The 3-isogeny and its dual, reduced modulo primes of good reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intbase::{modpow, sqrt_mod};

use super::params::CurveParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    Infinity,
    Affine(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// E -> E-hat
    Psi,
    /// E-hat -> E
    PsiHat,
}

/// y^2 = x^3 + a2 x^2 + a4 x + a6 over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpCurve {
    pub p: u64,
    pub a2: u64,
    pub a4: u64,
    pub a6: u64,
}

fn reduce(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

impl FpCurve {
    pub fn new(p: u64, (a2, a4, a6): (i128, i128, i128)) -> FpCurve {
        FpCurve {
            p,
            a2: reduce(a2, p),
            a4: reduce(a4, p),
            a6: reduce(a6, p),
        }
    }

    fn add_(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }
    fn sub_(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y % self.p) % self.p
    }
    fn mul_(&self, x: u64, y: u64) -> u64 {
        crate::intbase::mulmod(x, y, self.p)
    }
    fn inv_(&self, x: u64) -> u64 {
        modpow(x, self.p - 2, self.p)
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let x2 = self.mul_(x, x);
        let t = self.add_(self.mul_(x2, x), self.mul_(self.a2, x2));
        self.add_(self.add_(t, self.mul_(self.a4, x)), self.a6)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match *pt {
            Point::Infinity => true,
            Point::Affine(x, y) => self.mul_(y, y) == self.rhs(x),
        }
    }

    /// A point with the given x-coordinate, if x^3 + ... is a square.
    pub fn lift_x(&self, x: u64) -> Option<Point> {
        let x = x % self.p;
        sqrt_mod(self.rhs(x), self.p).map(|y| Point::Affine(x, y))
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match *pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, self.sub_(0, y)),
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if self.add_(y1, y2) == 0 {
                return Point::Infinity;
            }
            // (3x^2 + 2 a2 x + a4) / 2y
            let num = self.add_(
                self.add_(self.mul_(3, self.mul_(x1, x1)), self.mul_(2, self.mul_(self.a2, x1))),
                self.a4,
            );
            self.mul_(num, self.inv_(self.mul_(2, y1)))
        } else {
            self.mul_(self.sub_(y2, y1), self.inv_(self.sub_(x2, x1)))
        };
        let x3 = self.sub_(self.sub_(self.sub_(self.mul_(lambda, lambda), self.a2), x1), x2);
        let y3 = self.sub_(self.mul_(lambda, self.sub_(x1, x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, k: u64, pt: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Number of points including infinity, by direct count.
    pub fn count_points(&self) -> u64 {
        let mut n = 1;
        for x in 0..self.p {
            let r = self.rhs(x);
            n += if r == 0 {
                1
            } else if modpow(r, (self.p - 1) / 2, self.p) == 1 {
                2
            } else {
                0
            };
        }
        n
    }
}

/// The reductions of E and E-hat at a prime p not dividing 6abd.
pub fn reduce_curves(params: &CurveParams, p: u64) -> Result<(FpCurve, FpCurve)> {
    let bad = |n: i64| (n as i128) % (p as i128) == 0;
    if p < 5 || bad(params.a) || bad(params.b) || bad(params.d) {
        return Err(Error::BadReductionPrime { p });
    }
    Ok((
        FpCurve::new(p, params.weierstrass()),
        FpCurve::new(p, params.dual_weierstrass()),
    ))
}

/// Applies the isogeny (or its dual) to a point of the source curve mod p.
pub fn apply_isogeny(params: &CurveParams, pt: &Point, dir: Direction, p: u64) -> Result<Point> {
    let (e, _) = reduce_curves(params, p)?;
    let (x, y) = match *pt {
        Point::Infinity => return Ok(Point::Infinity),
        Point::Affine(0, _) => return Ok(Point::Infinity),
        Point::Affine(x, y) => (x, y),
    };
    let f = |n: i128| reduce(n, p);
    let (a, b, d) = (f(params.a as i128), f(params.b as i128), f(params.d as i128));
    let m = |u: u64, v: u64| e.mul_(u, v);
    let x2 = m(x, x);
    let x3 = m(x2, x);
    let ab = m(a, b);
    let ad = m(a, d);
    match dir {
        Direction::Psi => {
            // 9(x^3 + 4/3 a x^2 - 4ab x + 4ab^2) / x^2
            let num = e.add_(
                e.sub_(e.add_(m(9, x3), m(12, m(a, x2))), m(36, m(ab, x))),
                m(36, m(ab, b)),
            );
            let nx = m(num, e.inv_(x2));
            // 27 y (x^3 + 4ab x - 8ab^2) / x^3
            let num = e.sub_(e.add_(x3, m(4, m(ab, x))), m(8, m(ab, b)));
            let ny = m(m(27, y), m(num, e.inv_(x3)));
            Ok(Point::Affine(nx, ny))
        }
        Direction::PsiHat => {
            // (x^3 - 36a x^2 + 108ad x - 108ad^2) / (3^4 x^2)
            let num = e.sub_(
                e.add_(e.sub_(x3, m(36, m(a, x2))), m(108, m(ad, x))),
                m(108, m(ad, d)),
            );
            let nx = m(num, e.inv_(m(81, x2)));
            // y (x^3 - 108ad x + 216ad^2) / (3^6 x^3)
            let num = e.add_(e.sub_(x3, m(108, m(ad, x))), m(216, m(ad, d)));
            let ny = m(y, m(num, e.inv_(m(729, x3))));
            Ok(Point::Affine(nx, ny))
        }
    }
}

/// Number of points of E mod p in the kernel of the isogeny (x = 0 or O).
pub fn kernel_size(params: &CurveParams, p: u64) -> Result<u64> {
    let (e, _) = reduce_curves(params, p)?;
    Ok(1 + match e.lift_x(0) {
        Some(Point::Affine(_, 0)) => 1,
        Some(_) => 2,
        None => 0,
    })
}
