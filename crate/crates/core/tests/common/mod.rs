#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tgoppa::{CodeSpec, Elem, Field, Polynomial};

#[derive(Clone, Copy, Debug)]
pub enum Twist {
    Zero,
    Nonzero,
    Mixed,
}

/// Degree-`t` polynomial with a nonzero leading coefficient. Roots allowed.
pub fn random_poly<R: Rng>(field: &Field, t: usize, rng: &mut R) -> Polynomial {
    let order = field.order() as u64;
    let mut values: Vec<u64> = (0..t).map(|_| rng.gen_range(0..order)).collect();
    values.push(rng.gen_range(1..order));
    Polynomial::from_values(field, &values).unwrap()
}

pub fn random_nonzero<R: Rng>(field: &Field, rng: &mut R) -> Elem {
    field.elem(rng.gen_range(1..field.order() as u64)).unwrap()
}

/// A spec on a random subset of the non-roots of a random g, `1 <= n <= max_n`.
/// Retries until g leaves at least one point.
pub fn random_spec<R: Rng>(
    field: &Field,
    t: usize,
    max_n: usize,
    twist: Twist,
    rng: &mut R,
) -> CodeSpec {
    loop {
        let g = random_poly(field, t, rng);
        let mut free: Vec<Elem> = field.elements().filter(|&x| !g.eval(x).is_zero()).collect();
        if free.is_empty() {
            continue;
        }
        free.shuffle(rng);
        let n = rng.gen_range(1..=free.len().min(max_n));
        free.truncate(n);
        let eta = match twist {
            Twist::Zero => Elem::ZERO,
            Twist::Nonzero => random_nonzero(field, rng),
            Twist::Mixed if rng.gen_bool(0.5) => Elem::ZERO,
            Twist::Mixed => random_nonzero(field, rng),
        };
        return CodeSpec::new(field, free, g, eta).unwrap();
    }
}

/// The worked GF(4) example: g = x^2 + x + 2, L = [0, 1, 2, 3].
pub fn worked_example(eta: u64) -> CodeSpec {
    let f = Field::new(2, 2).unwrap();
    let g = Polynomial::parse(&f, "2,1,1").unwrap();
    let support = f.elements().collect();
    CodeSpec::new(&f, support, g, f.elem(eta).unwrap()).unwrap()
}
