//! Twisted Goppa codes over GF(q^m): exact construction, dimension over
//! GF(q), and seeded experiments on how the dimension depends on the
//! parameters `(q, m, t, b, u)`.

pub mod affine;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod galois;
pub mod goppa;
pub mod linalg;
pub mod poly;

pub use affine::{build_support, choose_multiplier, AffineMap, Support};
pub use error::{Error, Result};
pub use galois::{Elem, Field};
pub use goppa::{
    brute_force_dimension, codes_equal, degenerate_twist, dimension, is_codeword, kernel_basis,
    parity_matrix, CodeSpec, ParityMatrix,
};
pub use poly::{residue_quotient_oracle, Polynomial};
