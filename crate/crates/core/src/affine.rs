//! Affine maps `x ↦ a·x + b` on GF(q^m) and orbit-structured supports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Elem, Field};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    field: Field,
    a: Elem,
    b: Elem,
}

impl AffineMap {
    pub fn new(field: &Field, a: Elem, b: Elem) -> Result<AffineMap> {
        field.elem(a.value() as u64)?;
        field.elem(b.value() as u64)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(AffineMap {
            field: field.clone(),
            a,
            b,
        })
    }

    pub fn multiplier(&self) -> Elem {
        self.a
    }

    pub fn translation(&self) -> Elem {
        self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == Elem::ONE && self.b.is_zero()
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.field.add(self.field.mul(self.a, x), self.b)
    }

    /// Smallest `e >= 1` with `σ^e = id`.
    pub fn order(&self) -> u64 {
        if self.a == Elem::ONE {
            if self.b.is_zero() {
                1
            } else {
                self.field.q() as u64
            }
        } else {
            self.field.mult_order(self.a).expect("a is nonzero")
        }
    }

    /// Sorted fixed points.
    pub fn fixed_points(&self) -> Vec<Elem> {
        let f = &self.field;
        if self.a == Elem::ONE {
            if self.b.is_zero() {
                f.elements().collect()
            } else {
                Vec::new()
            }
        } else {
            let one_minus_a = f.sub(Elem::ONE, self.a);
            vec![f.mul(self.b, f.inv(one_minus_a).expect("a != 1"))]
        }
    }

    /// `[x, σ(x), σ²(x), …]` up to (excluding) the first repeat.
    pub fn orbit(&self, x: Elem) -> Vec<Elem> {
        let mut out = vec![x];
        let mut y = self.apply(x);
        while y != x {
            out.push(y);
            y = self.apply(y);
        }
        out
    }
}

/// The multiplier realizing order `u`: 1 for `u = 1` or `u = q`, otherwise
/// the smallest encoding of multiplicative order exactly `u`.
pub fn choose_multiplier(field: &Field, u: u64) -> Result<Elem> {
    let q = field.q() as u64;
    let group = field.order() as u64 - 1;
    let err = Error::NoSuchOrder {
        u,
        q: field.q(),
        m: field.m(),
    };
    if u == 1 || u == q {
        return Ok(Elem::ONE);
    }
    if u == 0 || !group.is_multiple_of(u) {
        return Err(err);
    }
    field
        .elements()
        .skip(1)
        .find(|&a| field.mult_order(a).expect("nonzero") == u)
        .ok_or(err)
}

/// A support set grouped into σ-orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub map: AffineMap,
    pub orbits: Vec<Vec<Elem>>,
}

/// JSON form: `{"orbits":[[0,1],[2,3]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportDescription {
    pub a: u32,
    pub b: u32,
    pub orbits: Vec<Vec<u32>>,
}

impl Support {
    pub fn points(&self) -> Vec<Elem> {
        self.orbits.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.orbits.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps only the first `count` orbits.
    pub fn truncate_orbits(&mut self, count: usize) {
        self.orbits.truncate(count);
    }

    pub fn description(&self) -> SupportDescription {
        SupportDescription {
            a: self.map.multiplier().value(),
            b: self.map.translation().value(),
            orbits: self
                .orbits
                .iter()
                .map(|o| o.iter().map(|e| e.value()).collect())
                .collect(),
        }
    }
}

/// Builds the support `L` from the translation `b` and order `u`.
///
/// For `u = 1` every non-root of `g` is taken (as singleton orbits of the
/// identity). Otherwise `L` is the union of all σ-orbits of size exactly
/// `u` that avoid the roots of `g`; an orbit meeting a root is dropped
/// whole. Orbits are listed by their minimal element, and each orbit is
/// walked starting from that element.
pub fn build_support(field: &Field, b: Elem, u: u64, g: &Polynomial) -> Result<Support> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if g.field() != field {
        return Err(Error::FieldMismatch);
    }
    let a = choose_multiplier(field, u)?;
    if u == 1 {
        let map = AffineMap::new(field, Elem::ONE, Elem::ZERO)?;
        let orbits: Vec<Vec<Elem>> = field
            .elements()
            .filter(|&x| !g.eval(x).is_zero())
            .map(|x| vec![x])
            .collect();
        if orbits.is_empty() {
            return Err(Error::EmptySupport);
        }
        return Ok(Support { map, orbits });
    }
    let map = AffineMap::new(field, a, b)?;
    let mut seen = vec![false; field.order() as usize];
    let mut orbits = Vec::new();
    for x in field.elements() {
        if seen[x.value() as usize] {
            continue;
        }
        // ascending scan: x is the minimal element of its orbit
        let orbit = map.orbit(x);
        for y in &orbit {
            seen[y.value() as usize] = true;
        }
        if orbit.len() as u64 == u && orbit.iter().all(|&y| !g.eval(y).is_zero()) {
            orbits.push(orbit);
        }
    }
    if orbits.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(Support { map, orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::new(2, 2).unwrap()
    }

    fn e(f: &Field, v: u64) -> Elem {
        f.elem(v).unwrap()
    }

    fn vals(xs: &[Elem]) -> Vec<u32> {
        xs.iter().map(|x| x.value()).collect()
    }

    #[test]
    fn apply_and_order() {
        let f = gf4();
        let id = AffineMap::new(&f, Elem::ONE, Elem::ZERO).unwrap();
        assert!(f.elements().all(|x| id.apply(x) == x));
        assert_eq!(id.order(), 1);

        let shift = AffineMap::new(&f, Elem::ONE, Elem::ONE).unwrap();
        assert_eq!(shift.apply(e(&f, 2)), e(&f, 3));
        assert_eq!(shift.order(), 2);

        let scale = AffineMap::new(&f, e(&f, 2), Elem::ZERO).unwrap();
        assert_eq!(scale.apply(e(&f, 3)), Elem::ONE);

        let mixed = AffineMap::new(&f, e(&f, 2), e(&f, 3)).unwrap();
        assert_eq!(mixed.order(), 3);
        let x = e(&f, 1);
        let thrice = mixed.apply(mixed.apply(mixed.apply(x)));
        assert_eq!(thrice, x);

        assert!(AffineMap::new(&f, Elem::ZERO, Elem::ONE).is_err());
    }

    #[test]
    fn fixed_points_and_orbits() {
        let f = gf4();
        let id = AffineMap::new(&f, Elem::ONE, Elem::ZERO).unwrap();
        assert_eq!(vals(&id.fixed_points()), vec![0, 1, 2, 3]);
        let shift = AffineMap::new(&f, Elem::ONE, Elem::ONE).unwrap();
        assert!(shift.fixed_points().is_empty());
        assert_eq!(vals(&shift.orbit(Elem::ZERO)), vec![0, 1]);
        let scale = AffineMap::new(&f, e(&f, 2), Elem::ZERO).unwrap();
        assert_eq!(vals(&scale.fixed_points()), vec![0]);
        assert_eq!(vals(&scale.orbit(Elem::ZERO)), vec![0]);
        assert_eq!(vals(&scale.orbit(Elem::ONE)), vec![1, 2, 3]);
    }

    #[test]
    fn multiplier_choice() {
        assert_eq!(choose_multiplier(&gf4(), 1).unwrap(), Elem::ONE);
        assert_eq!(choose_multiplier(&gf4(), 2).unwrap(), Elem::ONE);
        let f16 = Field::new(2, 4).unwrap();
        assert_eq!(choose_multiplier(&f16, 3).unwrap().value(), 6);
        assert!(matches!(
            choose_multiplier(&gf4(), 5),
            Err(Error::NoSuchOrder { u: 5, .. })
        ));
    }

    #[test]
    fn support_examples() {
        let f = gf4();
        let g = Polynomial::parse(&f, "2,1,1").unwrap();
        let all = build_support(&f, Elem::ZERO, 1, &g).unwrap();
        assert_eq!(vals(&all.points()), vec![0, 1, 2, 3]);

        let s = build_support(&f, Elem::ONE, 2, &g).unwrap();
        assert_eq!(s.description().orbits, vec![vec![0, 1], vec![2, 3]]);

        let s = build_support(&f, Elem::ZERO, 3, &g).unwrap();
        assert_eq!(s.description().orbits, vec![vec![1, 2, 3]]);
        assert_eq!(
            serde_json::to_string(&s.description()).unwrap(),
            r#"{"a":2,"b":0,"orbits":[[1,2,3]]}"#
        );
    }

    #[test]
    fn support_drops_orbits_touching_roots() {
        let f = gf4();
        // x(x + 1) kills the orbit {0, 1}; x(x + 2) kills both
        let g = Polynomial::parse(&f, "0,1,1").unwrap();
        let s = build_support(&f, Elem::ONE, 2, &g).unwrap();
        assert_eq!(s.description().orbits, vec![vec![2, 3]]);
        let g = Polynomial::parse(&f, "0,2,1").unwrap();
        assert!(matches!(
            build_support(&f, Elem::ONE, 2, &g),
            Err(Error::EmptySupport)
        ));
        // translation by 0 has only singleton orbits
        let g = Polynomial::parse(&f, "2,1,1").unwrap();
        assert!(matches!(
            build_support(&f, Elem::ZERO, 2, &g),
            Err(Error::EmptySupport)
        ));
    }
}
