//! Univariate polynomials over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{Elem, Field};

/// A polynomial with ascending coefficients, always normalized: the last
/// coefficient is nonzero and the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients already known to lie in `field`.
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds a polynomial from raw encodings, range-checking each one.
    pub fn from_values(field: &Field, values: &[u64]) -> Result<Polynomial> {
        let coeffs = values
            .iter()
            .map(|&v| field.elem(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(field, coeffs))
    }

    /// Parses the comma-separated ascending serialization, e.g. `"2,1,1"`.
    pub fn parse(field: &Field, text: &str) -> Result<Polynomial> {
        let values = parse_u64_list(text)?;
        Polynomial::from_values(field, &values)
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> Polynomial {
        Polynomial::new(field, vec![c])
    }

    /// `x - alpha`.
    pub fn linear(field: &Field, alpha: Elem) -> Polynomial {
        Polynomial::new(field, vec![field.neg(alpha), Elem::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Elem {
        self.coeffs.get(j).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    fn same_field(&self, other: &Polynomial) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| f.add(self.coeff(j), other.coeff(j)))
            .collect();
        Ok(Polynomial::new(f, coeffs))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| f.sub(self.coeff(j), other.coeff(j)))
            .collect();
        Ok(Polynomial::new(f, coeffs))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Polynomial::new(f, out))
    }

    pub fn scale(&self, c: Elem) -> Polynomial {
        let f = &self.field;
        Polynomial::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Scales to a monic polynomial; the zero polynomial stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.lead() {
            Some(l) => self.scale(self.field.inv(l).expect("lead is nonzero")),
            None => self.clone(),
        }
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.same_field(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[top - dd] = factor;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, dj));
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::new(f, quot), Polynomial::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.divmod(divisor).map(|(_, r)| r)
    }

    /// Horner evaluation. `a` is assumed to belong to this polynomial's field.
    pub fn eval(&self, a: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// Extended Euclid: `(gcd, u, v)` with `gcd` monic and `u·self + v·other = gcd`.
    pub fn xgcd(&self, other: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let f = &self.field;
        let one = Polynomial::constant(f, Elem::ONE);
        let zero = Polynomial::zero(f);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (quot, r2) = r0.divmod(&r1)?;
            let s2 = s0.sub(&quot.mul(&s1)?)?;
            let t2 = t0.sub(&quot.mul(&t1)?)?;
            (r0, r1) = (r1, r2);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let inv = f.inv(r0.lead().expect("gcd of nonzero input is nonzero"))?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// The inverse of `self` modulo `modulus`, of degree below `deg modulus`.
    pub fn modinv(&self, modulus: &Polynomial) -> Result<Polynomial> {
        self.same_field(modulus)?;
        match modulus.degree() {
            None => return Err(Error::DivisionByZero),
            Some(0) => return Err(Error::NotInvertible),
            Some(_) => {}
        }
        let reduced = self.rem(modulus)?;
        if reduced.is_zero() {
            return Err(Error::NotInvertible);
        }
        let (gcd, u, _) = reduced.xgcd(modulus)?;
        if gcd.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        u.rem(modulus)
    }

    /// True iff the polynomial has no root anywhere in its field
    /// (exhaustive evaluation).
    pub fn is_root_free(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.field.elements().all(|a| !self.eval(a).is_zero()))
    }
}

/// `(x - alpha)^{-1} mod g` computed as `-Q(x) / g(alpha)` where
/// `Q = (g(x) - g(alpha)) / (x - alpha)` by synthetic division. Shares no
/// code with [`Polynomial::modinv`].
pub fn residue_quotient_oracle(alpha: Elem, g: &Polynomial) -> Result<Polynomial> {
    let f = g.field();
    let t = g.degree().ok_or(Error::ZeroPolynomial)?;
    let g_alpha = g.eval(alpha);
    if g_alpha.is_zero() {
        return Err(Error::AlphaIsRoot);
    }
    if t == 0 {
        return Err(Error::NotInvertible);
    }
    let mut quotient = vec![Elem::ZERO; t];
    quotient[t - 1] = g.coeff(t);
    for j in (1..t).rev() {
        quotient[j - 1] = f.add(g.coeff(j), f.mul(alpha, quotient[j]));
    }
    let scale = f.neg(f.inv(g_alpha)?);
    Ok(Polynomial::new(f, quotient).scale(scale))
}

pub(crate) fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {s:?} in {text:?}")))
        })
        .collect()
}

impl fmt::Display for Polynomial {
    /// Comma-separated ascending encodings; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
