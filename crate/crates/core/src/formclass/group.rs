use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intbase::{factorize, isqrt, kronecker};

use super::form::QuadForm;

type Form = QuadForm<i64>;

/// Default bound on |D| for class group enumeration.
pub const DEFAULT_BOUND: i64 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BOUND`].
pub const BOUND_ENV: &str = "SELMER3_CLASSGROUP_BOUND";

pub fn discriminant_bound() -> i64 {
    std::env::var(BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BOUND)
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let sf = |m: i64| factorize(m).map(|f| f.factors.iter().all(|&(_, e)| e == 1));
    match d.rem_euclid(4) {
        1 => sf(d).unwrap_or(false),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sf(m).unwrap_or(false)
        }
        _ => false,
    }
}

/// Discriminant of Q(sqrt m) for squarefree m != 1.
pub fn field_discriminant(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

/// The form class group of a fundamental discriminant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassGroup {
    pub disc: i64,
    pub order: u64,
    /// Invariant factors, each dividing the next.
    pub elementary_divisors: Vec<u64>,
    /// One generator per invariant factor, in the same order.
    pub generators: Vec<Form>,
    /// Orders of the cyclic factors of the 3-Sylow subgroup, ascending.
    pub sylow3: Vec<u64>,
    /// Basis of the 3-Sylow matching `sylow3`.
    pub sylow3_generators: Vec<Form>,
    #[serde(skip)]
    table: ClassTable,
}

#[derive(Debug, Clone, Default)]
struct ClassTable {
    reps: Vec<Form>,
    /// Every reduced form mapped to its class index.
    index: HashMap<Form, usize>,
}

impl ClassTable {
    fn class_of(&self, f: &Form) -> Result<usize> {
        let r = f.reduce()?;
        self.index.get(&r).copied().ok_or_else(|| {
            Error::PreconditionViolated(format!("reduced form {r} missing from class table"))
        })
    }
}

fn reduced_forms_negative(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let bmax = isqrt((-d / 3) as u128) as i64;
    let mut b = d.rem_euclid(2);
    while b <= bmax {
        let n = (b * b - d) / 4;
        let mut a = b.max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                let f = Form::new(a, b, c);
                if f.is_primitive() {
                    out.push(f);
                    if b > 0 && b < a && a < c {
                        out.push(Form::new(a, -b, c));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out
}

fn reduced_forms_positive(d: i64) -> Vec<Form> {
    let s = isqrt(d as u128) as i64;
    let mut out = Vec::new();
    let mut b = if (s - d) % 2 == 0 { s } else { s - 1 };
    while b > 0 {
        let n = (d - b * b) / 4;
        // s - b < 2|a| <= s + b
        let lo = (s - b) / 2 + 1;
        let hi = (s + b) / 2;
        for a in lo.max(1)..=hi {
            if n % a == 0 {
                for f in [Form::new(a, b, -n / a), Form::new(-a, b, n / a)] {
                    if f.is_primitive() {
                        out.push(f);
                    }
                }
            }
        }
        b -= 2;
    }
    out
}

fn build_table(d: i64) -> Result<ClassTable> {
    let mut t = ClassTable::default();
    if d < 0 {
        for f in reduced_forms_negative(d) {
            t.index.insert(f, t.reps.len());
            t.reps.push(f);
        }
    } else {
        // classes are the cycles of the reduction operator
        let forms = reduced_forms_positive(d);
        let all: HashSet<Form> = forms.iter().copied().collect();
        for f in forms {
            if t.index.contains_key(&f) {
                continue;
            }
            let id = t.reps.len();
            t.reps.push(f);
            let mut g = f;
            loop {
                t.index.insert(g, id);
                g = g.rho()?;
                if !all.contains(&g) {
                    return Err(Error::PreconditionViolated(format!(
                        "cycle of {f} left the reduced forms at {g}"
                    )));
                }
                if g == f {
                    break;
                }
            }
        }
    }
    Ok(t)
}

/// Basis of a finite abelian p-group given as a set of class indices.
/// Returns (order of each basis element, basis), orders descending.
fn p_group_basis(
    table: &ClassTable,
    p: u64,
    elems: &[usize],
    identity: usize,
) -> Result<Vec<(u64, usize)>> {
    let mul = |x: usize, y: usize| table.class_of(&table.reps[x].compose(&table.reps[y])?);
    let pow = |x: usize, e: u64| table.class_of(&table.reps[x].pow(e as i64)?);
    let order = |x: usize| -> Result<u64> {
        let mut o = 1;
        let mut y = x;
        while y != identity {
            y = pow(y, p)?;
            o *= p;
        }
        Ok(o)
    };
    let mut orders: Vec<(u64, usize)> = Vec::with_capacity(elems.len());
    for &x in elems {
        orders.push((order(x)?, x));
    }
    orders.sort_by(|l, r| r.0.cmp(&l.0).then(l.1.cmp(&r.1)));

    // subgroup spanned so far: element -> exponent vector
    let mut span: HashMap<usize, Vec<u64>> = HashMap::from([(identity, vec![])]);
    let mut basis: Vec<(u64, usize)> = Vec::new();
    while span.len() < elems.len() {
        // element whose image in the quotient has maximal order
        let mut best: Option<(u64, usize)> = None;
        for &(_, x) in &orders {
            if span.contains_key(&x) {
                continue;
            }
            let mut q = 1;
            let mut y = x;
            while !span.contains_key(&y) {
                y = pow(y, p)?;
                q *= p;
            }
            if best.map_or(true, |(bq, _)| q > bq) {
                best = Some((q, x));
            }
        }
        let (q, x) = best.expect("quotient is nontrivial");
        // x^q lies in the span with exponents divisible by q; strip them
        let h = pow(x, q)?;
        let coords = span[&h].clone();
        let mut y = x;
        for (i, &(_, g)) in basis.iter().enumerate() {
            let k = coords.get(i).copied().unwrap_or(0);
            debug_assert_eq!(k % q, 0);
            let o = basis[i].0;
            y = mul(y, pow(g, (o - (k / q) % o) % o)?)?;
        }
        basis.push((q, y));
        let mut grown = HashMap::with_capacity(span.len() * q as usize);
        for (&s, v) in &span {
            let mut z = s;
            for j in 0..q {
                let mut w = v.clone();
                w.resize(basis.len() - 1, 0);
                w.push(j);
                grown.insert(z, w);
                z = mul(z, y)?;
            }
        }
        span = grown;
    }
    Ok(basis)
}

impl ClassGroup {
    /// Enumerates the class group, or `OutOfRange` past the configured bound.
    pub fn compute(d: i64) -> Result<ClassGroup> {
        let bound = discriminant_bound();
        if d.unsigned_abs() > bound as u64 {
            return Err(Error::OutOfRange { disc: d, bound });
        }
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        let table = build_table(d)?;
        let h = table.reps.len() as u64;
        let identity = table.class_of(&Form::principal(d))?;

        let mut per_prime: Vec<(u64, Vec<(u64, usize)>)> = Vec::new();
        if h > 1 {
            for (p, e) in factorize(h as i64)?.factors {
                let pe = p.pow(e);
                let cof = h / pe;
                let mut sylow: Vec<usize> = Vec::new();
                let mut seen = HashSet::new();
                for x in 0..table.reps.len() {
                    let y = table.class_of(&table.reps[x].pow(cof as i64)?)?;
                    if seen.insert(y) {
                        sylow.push(y);
                    }
                }
                debug_assert_eq!(sylow.len() as u64, pe);
                per_prime.push((p, p_group_basis(&table, p, &sylow, identity)?));
            }
        }

        // combine the i-th largest cyclic factor of each Sylow
        let rank = per_prime.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
        let mut elementary_divisors = Vec::with_capacity(rank);
        let mut generators = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut n = 1u64;
            let mut g = Form::principal(d);
            for (_, b) in &per_prime {
                if let Some(&(o, x)) = b.get(i) {
                    n *= o;
                    g = g.compose(&table.reps[x])?;
                }
            }
            elementary_divisors.push(n);
            generators.push(g);
        }
        elementary_divisors.reverse();
        generators.reverse();

        let (mut sylow3, mut sylow3_generators) = (Vec::new(), Vec::new());
        if let Some((_, b)) = per_prime.iter().find(|(p, _)| *p == 3) {
            for &(o, x) in b.iter().rev() {
                sylow3.push(o);
                sylow3_generators.push(table.reps[x]);
            }
        }

        Ok(ClassGroup {
            disc: d,
            order: h,
            elementary_divisors,
            generators,
            sylow3,
            sylow3_generators,
            table,
        })
    }

    pub fn three_rank(&self) -> usize {
        self.sylow3.len()
    }

    /// One reduced representative per class.
    pub fn classes(&self) -> &[Form] {
        &self.table.reps
    }

    pub fn class_index(&self, f: &Form) -> Result<usize> {
        if f.disc() != self.disc {
            return Err(Error::DiscMismatch(f.disc(), self.disc));
        }
        self.table.class_of(f)
    }

    pub fn equivalent(&self, f: &Form, g: &Form) -> Result<bool> {
        Ok(self.class_index(f)? == self.class_index(g)?)
    }

    pub fn identity(&self) -> Form {
        Form::principal(self.disc).reduce().expect("principal form reduces")
    }

    /// Coordinates of the class of `g` in Cl/Cl^3 with respect to the
    /// images of `sylow3_generators`.
    pub fn coords_mod3(&self, g: &Form) -> Result<Vec<u8>> {
        if g.disc() != self.disc {
            return Err(Error::DiscMismatch(g.disc(), self.disc));
        }
        let r = self.sylow3.len();
        if r == 0 {
            return Ok(Vec::new());
        }
        let mut m = self.order;
        while m % 3 == 0 {
            m /= 3;
        }
        // x -> x^m is an automorphism of the 3-Sylow; undo it mod 3 at the end
        let m_inv: u8 = if m % 3 == 1 { 1 } else { 2 };
        let x = self.class_index(&g.pow(m as i64)?)?;

        // cubes of the 3-Sylow: the span of g_i^3
        let id = self.class_index(&self.identity())?;
        let mut cubes: HashSet<usize> = HashSet::from([id]);
        for (i, gen) in self.sylow3_generators.iter().enumerate() {
            let step = self.class_index(&gen.pow(3)?)?;
            let step_form = self.table.reps[step];
            let reps: Vec<usize> = cubes.iter().copied().collect();
            for s in reps {
                let mut z = s;
                for _ in 1..self.sylow3[i] / 3 {
                    z = self.table.class_of(&self.table.reps[z].compose(&step_form)?)?;
                    cubes.insert(z);
                }
            }
        }

        let total = 3usize.pow(r as u32);
        for idx in 0..total {
            let mut e = vec![0u8; r];
            let mut t = idx;
            for c in e.iter_mut() {
                *c = (t % 3) as u8;
                t /= 3;
            }
            let mut y = self.table.reps[x];
            for (gen, &k) in self.sylow3_generators.iter().zip(&e) {
                if k > 0 {
                    y = y.compose(&gen.pow(-(k as i64))?)?;
                }
            }
            if cubes.contains(&self.table.class_of(&y)?) {
                return Ok(e.iter().map(|&k| (k * m_inv) % 3).collect());
            }
        }
        Err(Error::PreconditionViolated(format!(
            "no discrete log for {g} in Cl({})/Cl^3",
            self.disc
        )))
    }
}

fn cache() -> &'static RwLock<HashMap<i64, Arc<ClassGroup>>> {
    static CACHE: OnceLock<RwLock<HashMap<i64, Arc<ClassGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached class group of a fundamental discriminant.
pub fn class_group(d: i64) -> Result<Arc<ClassGroup>> {
    if let Some(g) = cache().read().expect("class group cache").get(&d) {
        return Ok(Arc::clone(g));
    }
    let g = Arc::new(ClassGroup::compute(d)?);
    let mut w = cache().write().expect("class group cache");
    Ok(Arc::clone(w.entry(d).or_insert(g)))
}

pub fn three_rank(d: i64) -> Result<usize> {
    Ok(class_group(d)?.three_rank())
}

/// Class of a prime ideal above a rational prime in the field of
/// discriminant D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeForm {
    Split(Form),
    Inert,
    Ramified,
}

pub fn prime_form(l: u64, d: i64) -> Result<PrimeForm> {
    let k = kronecker(d, l as i64);
    if k == -1 {
        return Ok(PrimeForm::Inert);
    }
    if k == 0 {
        return Ok(PrimeForm::Ramified);
    }
    let l = l as i64;
    let m = 4 * l;
    // smallest b >= 0 with b^2 = D mod 4l
    let b = (0..l)
        .find(|&b| (b * b - d).rem_euclid(m) == 0)
        .or_else(|| (l..m).find(|&b| (b * b - d).rem_euclid(m) == 0))
        .ok_or_else(|| Error::PreconditionViolated(format!("no square root of {d} mod {m}")))?;
    Ok(PrimeForm::Split(Form::from_abd(l, b, d)?.reduce()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_groups() {
        let g = class_group(-23).unwrap();
        assert_eq!((g.order, g.elementary_divisors.clone()), (3, vec![3]));
        assert_eq!(class_group(-4).unwrap().order, 1);
        assert_eq!(class_group(229).unwrap().order, 3);
        let g = class_group(-132).unwrap();
        assert_eq!((g.order, g.elementary_divisors.clone()), (4, vec![2, 2]));
        assert_eq!(g.three_rank(), 0);
        assert_eq!(three_rank(-87).unwrap(), 1);
        assert_eq!(class_group(-87).unwrap().order, 6);
    }

    #[test]
    fn reduced_forms_of_minus_132() {
        let mut forms: Vec<_> = class_group(-132).unwrap().classes().to_vec();
        forms.sort();
        assert_eq!(
            forms,
            vec![
                Form::new(1, 0, 33),
                Form::new(2, 2, 17),
                Form::new(3, 0, 11),
                Form::new(6, 6, 7)
            ]
        );
    }

    #[test]
    fn prime_form_examples() {
        assert_eq!(prime_form(2, -23).unwrap(), PrimeForm::Split(Form::new(2, 1, 3)));
        assert_eq!(prime_form(2, -87).unwrap(), PrimeForm::Split(Form::new(2, 1, 11)));
        assert_eq!(prime_form(11, -339).unwrap(), PrimeForm::Inert);
        assert_eq!(prime_form(3, -87).unwrap(), PrimeForm::Ramified);
    }

    #[test]
    fn coords_examples() {
        let g = class_group(-23).unwrap();
        assert_eq!(g.coords_mod3(&g.identity()).unwrap(), vec![0]);
        assert_ne!(g.coords_mod3(&Form::new(2, 1, 3)).unwrap(), vec![0]);
        let g = class_group(-87).unwrap();
        assert_ne!(g.coords_mod3(&Form::new(2, 1, 11)).unwrap(), vec![0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ClassGroup::compute(-12), Err(Error::NotFundamental(-12))));
        assert!(matches!(
            ClassGroup::compute(-4 * 1_000_000_007),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn field_discriminants() {
        assert_eq!(field_discriminant(5), 5);
        assert_eq!(field_discriminant(-1), -4);
        assert_eq!(field_discriminant(-87), -87);
        assert_eq!(field_discriminant(-29), -116);
        assert!(is_fundamental(-116));
        assert!(!is_fundamental(-348));
    }
}
