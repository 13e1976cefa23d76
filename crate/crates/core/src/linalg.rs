//! Dense matrices over a prime field GF(q) with exact elimination.
//!
//! Rank over GF(2) runs on bit-packed rows with word-wide XOR; every other
//! path uses residues mod q. Both must agree with [`BaseMatrix::rank_generic`].

use serde::{Deserialize, Serialize};

/// Row-major matrix over GF(q), entries in `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // Fermat: a^(q-2)
    let (mut base, mut e, mut acc) = (a % q, q - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

impl BaseMatrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> BaseMatrix {
        BaseMatrix {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Panics if the rows are ragged or an entry is not below `q`.
    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> BaseMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BaseMatrix::zeros(q, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn identity(q: u32, n: usize) -> BaseMatrix {
        let mut m = BaseMatrix::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(v < self.q, "entry {v} out of range for GF({})", self.q);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rank over GF(q); bit-packed when `q = 2`.
    pub fn rank(&self) -> usize {
        if self.q == 2 {
            BitMatrix::from_base(self).rank()
        } else {
            self.rank_generic()
        }
    }

    /// Rank by plain elimination mod q, for any prime q.
    pub fn rank_generic(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let q = self.q as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c) as u64, q);
            for j in c..self.cols {
                let v = self.get(r, j) as u64 * inv % q;
                self.data[r * self.cols + j] = v as u32;
            }
            for i in 0..self.rows {
                let factor = self.get(i, c) as u64;
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = (self.get(i, j) as u64 + q - factor * self.get(r, j) as u64 % q) % q;
                    self.data[i * self.cols + j] = v as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A basis of the right null space `{x : M x = 0}`, one vector per
    /// free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let q = self.q;
        let mut rref = self.clone();
        let pivots = rref.reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (q - rref.get(r, free)) % q;
                }
                v
            })
            .collect()
    }

    /// `M x` over GF(q).
    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        let q = self.q as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q)
                    as u32
            })
            .collect()
    }
}

/// GF(2) matrix with rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn from_base(m: &BaseMatrix) -> BitMatrix {
        assert_eq!(m.q, 2);
        let stride = m.cols.div_ceil(64);
        let mut words = vec![0u64; m.rows * stride];
        for i in 0..m.rows {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v == 1 {
                    words[i * stride + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BitMatrix {
            rows: m.rows,
            cols: m.cols,
            stride,
            words,
        }
    }

    #[inline]
    fn bit(&self, i: usize, j: usize) -> bool {
        (self.words[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn rank(mut self) -> usize {
        let s = self.stride;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.bit(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..s {
                    self.words.swap(p * s + w, r * s + w);
                }
            }
            let first = c / 64;
            for i in r + 1..self.rows {
                if self.bit(i, c) {
                    for w in first..s {
                        let v = self.words[r * s + w];
                        self.words[i * s + w] ^= v;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        assert_eq!(BaseMatrix::zeros(2, 3, 5).rank(), 0);
        assert_eq!(BaseMatrix::identity(2, 7).rank(), 7);
        assert_eq!(BaseMatrix::identity(5, 4).rank(), 4);
        let m = BaseMatrix::from_rows(3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // row 2 = 2 * row 1 mod 3
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let m = BaseMatrix::from_rows(2, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let ker = m.kernel_basis();
        assert_eq!(ker, vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    fn matrix(q: u32) -> impl Strategy<Value = BaseMatrix> {
        (1usize..12, 1usize..140).prop_flat_map(move |(r, c)| {
            prop::collection::vec(0..q, r * c).prop_map(move |data| BaseMatrix {
                q,
                rows: r,
                cols: c,
                data,
            })
        })
    }

    proptest! {
        #[test]
        fn packed_rank_matches_generic(m in matrix(2)) {
            prop_assert_eq!(m.rank(), m.rank_generic());
        }

        #[test]
        fn rank_nullity(m in prop_oneof![matrix(2), matrix(3), matrix(7)]) {
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.len(), m.ncols());
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            let kmat = BaseMatrix::from_rows(m.q(), &ker);
            prop_assert_eq!(kmat.rank(), ker.len());
        }
    }
}
