//! Exact arithmetic in GF(q) and GF(q^m) for prime q.
//!
//! Elements are encoded as integers in `[0, q^m)`. The base-q digits of an
//! encoding, constant digit first, are the coordinates in the polynomial
//! basis `1, β, …, β^{m-1}` where β is a root of the field modulus. The
//! encodings `0..q` are therefore exactly the prime subfield.
//!
//! Multiplication goes through log/antilog tables built once per field
//! from a primitive element; [`Field::mul_schoolbook`] is the table-free
//! reference product used to build them and to cross-check them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `q^m`.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

/// An element of some [`Field`], stored as its canonical integer encoding.
///
/// Elements do not carry their field; every operation goes through a
/// `Field` handle which is responsible for range checking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Elem> for u32 {
    fn from(e: Elem) -> u32 {
        e.0
    }
}

struct Inner {
    q: u32,
    m: u32,
    order: u32,
    /// Monic modulus, ascending coefficients, length m + 1.
    modulus: Vec<u32>,
    /// q^j for j in 0..m.
    place: Vec<u32>,
    /// exp[i] = γ^i for a primitive γ, i in 0..order-1.
    exp: Vec<u32>,
    /// log[v] for v ≠ 0.
    log: Vec<u32>,
}

/// A finite field GF(q^m), q prime. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.inner.q)
            .field("m", &self.inner.m)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.q == other.inner.q && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

/// JSON description of a field: `{"q":2,"m":4,"modulus":[1,1,0,0,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub q: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks `q^m <= cap` without overflow and returns `q^m`.
pub fn checked_order(q: u64, m: u32, cap: u64) -> Result<u64> {
    let mut order: u64 = 1;
    for _ in 0..m {
        order = order
            .checked_mul(q)
            .filter(|&o| o <= cap)
            .ok_or(Error::SizeCapExceeded { q, m, cap })?;
    }
    if order > cap {
        return Err(Error::SizeCapExceeded { q, m, cap });
    }
    Ok(order)
}

// Dense polynomials over GF(q), ascending, used only for the modulus search.

fn remainder_is_zero(f: &[u32], monic_divisor: &[u32], q: u32) -> bool {
    let mut r = f.to_vec();
    let d = monic_divisor.len() - 1;
    for top in (d..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (j, &dj) in monic_divisor.iter().enumerate() {
            let idx = top - d + j;
            r[idx] = (r[idx] + q - (c * dj) % q) % q;
        }
    }
    r[..d].iter().all(|&c| c == 0)
}

/// Exhaustive trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], q: u32) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        let count = (q as u64).pow(k as u32);
        for enc in 0..count {
            let mut divisor = Vec::with_capacity(k + 1);
            let mut e = enc;
            for _ in 0..k {
                divisor.push((e % q as u64) as u32);
                e /= q as u64;
            }
            divisor.push(1);
            if remainder_is_zero(f, &divisor, q) {
                return false;
            }
        }
    }
    true
}

/// The canonical modulus: monic, irreducible, degree m, minimizing the
/// integer encoding of its non-leading coefficients.
fn canonical_modulus(q: u32, m: u32) -> Vec<u32> {
    let count = (q as u64).pow(m);
    for enc in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut e = enc;
        for _ in 0..m {
            f.push((e % q as u64) as u32);
            e /= q as u64;
        }
        f.push(1);
        if is_irreducible(&f, q) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// GF(q^m) with the canonical modulus and the default size cap.
    pub fn new(q: u32, m: u32) -> Result<Field> {
        Field::with_cap(q, m, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(q: u32, m: u32, cap: u64) -> Result<Field> {
        Self::validate(q, m, cap)?;
        Ok(Field::build(q, canonical_modulus(q, m)))
    }

    /// GF(q^m) with an explicit modulus (ascending, monic, degree m).
    pub fn with_modulus(q: u32, modulus: &[u32]) -> Result<Field> {
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let m = (modulus.len() - 1) as u32;
        Self::validate(q, m, DEFAULT_SIZE_CAP)?;
        if modulus.iter().any(|&c| c >= q) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(modulus, q) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Ok(Field::build(q, modulus.to_vec()))
    }

    pub fn from_description(desc: &FieldDescription) -> Result<Field> {
        if desc.modulus.len() != desc.m as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                desc.m + 1,
                desc.modulus.len()
            )));
        }
        Field::with_modulus(desc.q, &desc.modulus)
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            q: self.q(),
            m: self.m(),
            modulus: self.inner.modulus.clone(),
        }
    }

    fn validate(q: u32, m: u32, cap: u64) -> Result<()> {
        if !is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        checked_order(q as u64, m, cap.min(u32::MAX as u64)).map(|_| ())
    }

    fn build(q: u32, modulus: Vec<u32>) -> Field {
        let m = (modulus.len() - 1) as u32;
        let order = q.pow(m);
        let place: Vec<u32> = (0..m).map(|j| q.pow(j)).collect();
        let mut inner = Inner {
            q,
            m,
            order,
            modulus,
            place,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let n = order - 1;
        let factors = prime_factors(n as u64);
        let generator = (1..order)
            .find(|&c| {
                factors
                    .iter()
                    .all(|&p| schoolbook_pow(&inner, c, n / p as u32) != 1)
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; order as usize];
        let mut acc = 1u32;
        for i in 0..n {
            exp.push(acc);
            log[acc as usize] = i;
            acc = schoolbook_mul(&inner, acc, generator);
        }
        debug_assert_eq!(acc, 1);
        inner.exp = exp;
        inner.log = log;
        Field {
            inner: Arc::new(inner),
        }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.inner.m
    }

    /// q^m.
    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Ascending coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn elem(&self, value: u64) -> Result<Elem> {
        if value < self.inner.order as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.inner.order,
            })
        }
    }

    /// Embeds a prime-field residue `c mod q`.
    #[inline]
    pub fn from_prime(&self, c: u32) -> Elem {
        Elem(c % self.inner.q)
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.inner.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let q = self.inner.q;
        if q == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &p in &self.inner.place {
            out += ((x % q + y % q) % q) * p;
            x /= q;
            y /= q;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let q = self.inner.q;
        if q == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0u32);
        for &p in &self.inner.place {
            out += ((q - x % q) % q) * p;
            x /= q;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.inner.order - 1;
        let s = self.inner.log[a.0 as usize] + self.inner.log[b.0 as usize];
        Elem(self.inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.order - 1;
        let l = self.inner.log[a.0 as usize];
        Ok(Elem(self.inner.exp[((n - l) % n.max(1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.inner.order - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        Elem(self.inner.exp[((l * (e % n)) % n) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = (self.inner.order - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        Ok(n / gcd(n, l))
    }

    /// `a^q`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.inner.q as u64)
    }

    /// Base-q digits `(d_0, …, d_{m-1})` of the encoding.
    pub fn expand_to_base(&self, a: Elem) -> Vec<u32> {
        let q = self.inner.q;
        let mut x = a.0;
        (0..self.inner.m)
            .map(|_| {
                let d = x % q;
                x /= q;
                d
            })
            .collect()
    }

    /// Inverse of [`Field::expand_to_base`].
    pub fn from_base(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.inner.m as usize || digits.iter().any(|&d| d >= self.inner.q) {
            return Err(Error::InvalidModulus(format!(
                "digit vector {digits:?} is not an element of GF({}^{})",
                self.inner.q, self.inner.m
            )));
        }
        Ok(Elem(
            digits
                .iter()
                .zip(&self.inner.place)
                .map(|(&d, &p)| d * p)
                .sum(),
        ))
    }

    /// Product computed directly as polynomials reduced by the modulus,
    /// without the log tables.
    pub fn mul_schoolbook(&self, a: Elem, b: Elem) -> Elem {
        Elem(schoolbook_mul(&self.inner, a.0, b.0))
    }
}

fn schoolbook_mul(f: &Inner, a: u32, b: u32) -> u32 {
    let q = f.q as u64;
    let m = f.m as usize;
    if f.q == 2 {
        let mut prod: u64 = 0;
        for i in 0..m {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u64) << i;
            }
        }
        let modbits: u64 = f
            .modulus
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| acc | ((c as u64) << j));
        for top in (m..2 * m).rev() {
            if (prod >> top) & 1 == 1 {
                prod ^= modbits << (top - m);
            }
        }
        return prod as u32;
    }
    let digits = |mut x: u32| -> Vec<u64> {
        (0..m)
            .map(|_| {
                let d = (x % f.q) as u64;
                x /= f.q;
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % q;
        }
    }
    for top in (m..2 * m).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (j, &mj) in f.modulus.iter().enumerate() {
            let idx = top - m + j;
            prod[idx] = (prod[idx] + q - (c * mj as u64) % q) % q;
        }
    }
    prod[..m]
        .iter()
        .zip(&f.place)
        .map(|(&d, &p)| d as u32 * p)
        .sum()
}

fn schoolbook_pow(f: &Inner, mut base: u32, mut e: u32) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = schoolbook_mul(f, acc, base);
        }
        base = schoolbook_mul(f, base, base);
        e >>= 1;
    }
    acc
}
