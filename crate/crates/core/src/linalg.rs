//! Small exact linear algebra: square integer matrices acting on lattices and
//! Gaussian elimination over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};

/// Square integer matrix, row-major. Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        IntMatrix { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                bail!(Domain, "matrix row of length {} in a {dim}x{dim} matrix", row.len());
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { dim, entries })
    }

    /// Permutation matrix sending basis vector `i` to basis vector `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut m = IntMatrix { dim, entries: vec![0; dim * dim] };
        for (i, &j) in perm.iter().enumerate() {
            m.entries[j * dim + i] = 1;
        }
        m
    }

    /// The reflection `x ↦ x − ⟨x, coroot⟩ root`.
    pub fn reflection(root: &[i64], coroot: &[i64]) -> Self {
        let dim = root.len();
        let mut m = IntMatrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] -= root[i] * coroot[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        IntMatrix { dim: n, entries }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        IntMatrix { dim: n, entries }
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let n = self.dim;
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| rat(self.get(i, j))).collect())
            .collect();
        let inv = invert_rational(&a).ok_or_else(|| {
            crate::Error::Domain(format!("matrix {self:?} is singular"))
        })?;
        let mut entries = Vec::with_capacity(n * n);
        for row in inv {
            for q in row {
                if !q.is_integer() {
                    bail!(Domain, "matrix {self:?} is not unimodular");
                }
                entries.push(to_i64(&q.to_integer())?);
            }
        }
        Ok(IntMatrix { dim: n, entries })
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        (0..k).fold(IntMatrix::identity(self.dim), |acc, _| acc.mul(self))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_i64(n: &BigInt) -> Result<i64> {
    i64::try_from(n).map_err(|_| crate::Error::Domain(format!("{n} does not fit in 64 bits")))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-reduces `m` in place to reduced echelon form; returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work).len()
}

/// Dimension of `{x : m x = 0}`.
pub fn nullity(m: &[Vec<BigRational>], cols: usize) -> usize {
    cols - rank(m)
}

/// Some solution of `a x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

pub fn invert_rational(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A basis of the integer lattice `{x ∈ Z^n : ⟨w, x⟩ = 0}`, obtained from a
/// unimodular column transformation reducing `w` to `(g, 0, …, 0)`.
pub fn integer_kernel_basis(w: &[i64]) -> Vec<Vec<i64>> {
    let n = w.len();
    let mut row = w.to_vec();
    // columns of `u` track the transformation: w · u = row
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&j| row[j] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&j| row[j].abs()).unwrap();
        for &j in &nonzero {
            if j == piv {
                continue;
            }
            let q = Integer::div_floor(&row[j], &row[piv]);
            row[j] -= q * row[piv];
            let pc = u[piv].clone();
            for (a, b) in u[j].iter_mut().zip(&pc) {
                *a -= q * b;
            }
        }
    }
    (0..n).filter(|&j| row[j] == 0).map(|j| u[j].clone()).collect()
}

pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_is_involution() {
        let s = IntMatrix::reflection(&[1, -1, 0], &[1, -1, 0]);
        assert!(s.mul(&s).is_identity());
        assert_eq!(s.apply(&[1, 0, 0]), vec![0, 1, 0]);
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let bad = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(bad.inverse().is_err());
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let w = [2, 2, 3];
        let basis = integer_kernel_basis(&w);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert_eq!(dot(&w, b), 0);
        }
        // saturation: e1 - e2 must be an integer combination
        let a: Vec<Vec<BigRational>> = (0..3).map(|i| basis.iter().map(|b| rat(b[i])).collect()).collect();
        let x = solve(&a, &[rat(1), rat(-1), rat(0)]).unwrap();
        assert!(x.iter().all(|q| q.is_integer()));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve(&a, &[rat(1), rat(3)]).is_none());
        assert_eq!(nullity(&a, 2), 1);
    }
}
