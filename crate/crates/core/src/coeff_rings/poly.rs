use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};
use crate::linalg::IntMatrix;

/// Polynomial with integer coefficients in `x_1..x_rank` (coordinates of the
/// character lattice) followed by `r_1..r_d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    rank: usize,
    nparams: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(rank: usize, nparams: usize) -> Self {
        Poly { rank, nparams, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, nparams: usize, c: BigInt) -> Self {
        let mut p = Self::zero(rank, nparams);
        p.add_term(vec![0; rank + nparams], c);
        p
    }

    pub fn one(rank: usize, nparams: usize) -> Self {
        Self::constant(rank, nparams, BigInt::one())
    }

    /// The coordinate `x_i`.
    pub fn x(rank: usize, nparams: usize, i: usize) -> Self {
        let mut e = vec![0; rank + nparams];
        e[i] = 1;
        let mut p = Self::zero(rank, nparams);
        p.add_term(e, BigInt::one());
        p
    }

    /// The parameter `r_j`.
    pub fn r(rank: usize, nparams: usize, j: usize) -> Self {
        Self::x(rank, nparams, rank + j)
    }

    /// The linear form `Σ v_i x_i`.
    pub fn linear(v: &[i64], nparams: usize) -> Self {
        let rank = v.len();
        let mut p = Self::zero(rank, nparams);
        for (i, &c) in v.iter().enumerate() {
            let mut e = vec![0; rank + nparams];
            e[i] = 1;
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        debug_assert_eq!(e.len(), self.rank + self.nparams);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.rank, self.nparams)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut p = Self::zero(self.rank, self.nparams);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    /// Image under the lattice automorphism `M`: `x_i ↦ Σ_k M_{ki} x_k`,
    /// parameters fixed.
    pub fn act(&self, m: &IntMatrix) -> Self {
        let images: Vec<Poly> = (0..self.rank)
            .map(|i| {
                let col: Vec<i64> = (0..self.rank).map(|k| m.get(k, i)).collect();
                Poly::linear(&col, self.nparams)
            })
            .collect();
        let mut out = Self::zero(self.rank, self.nparams);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            for x in rest.iter_mut().take(self.rank) {
                *x = 0;
            }
            let mut term = Poly::zero(self.rank, self.nparams);
            term.add_term(rest, c.clone());
            for (i, &k) in e.iter().take(self.rank).enumerate() {
                for _ in 0..k {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `(-1)^{deg_x}` on each monomial.
    pub fn negate_x(&self) -> Self {
        let mut out = Self::zero(self.rank, self.nparams);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().take(self.rank).sum();
            out.add_term(e.clone(), if deg % 2 == 0 { c.clone() } else { -c });
        }
        out
    }

    /// Exact quotient by the linear form `Σ a_i x_i`. A nonzero remainder or
    /// a non-integral quotient is reported as an internal error.
    pub fn div_linear(&self, a: &[i64]) -> Result<Poly> {
        let Some(k) = a.iter().rposition(|&c| c != 0) else {
            bail!(Internal, "division by the zero linear form");
        };
        let lead = BigRational::from_integer(BigInt::from(a[k]));
        let mut rem: BTreeMap<Vec<u32>, BigRational> =
            self.terms.iter().map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone()))).collect();
        let mut quot: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        loop {
            let Some((e, c)) = rem.iter().filter(|(e, _)| e[k] > 0).max_by_key(|(e, _)| e[k]).map(|(e, c)| (e.clone(), c.clone()))
            else {
                break;
            };
            let q = &c / &lead;
            let mut qe = e.clone();
            qe[k] -= 1;
            *quot.entry(qe.clone()).or_insert_with(BigRational::zero) += &q;
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let mut te = qe.clone();
                te[i] += 1;
                let entry = rem.entry(te.clone()).or_insert_with(BigRational::zero);
                *entry -= &q * BigInt::from(ai);
                if entry.is_zero() {
                    rem.remove(&te);
                }
            }
        }
        if rem.values().any(|c| !c.is_zero()) {
            bail!(Internal, "polynomial {self} is not divisible by the linear form {a:?}");
        }
        let mut out = Poly::zero(self.rank, self.nparams);
        for (e, q) in quot {
            if !q.is_integer() {
                bail!(Internal, "quotient of {self} by {a:?} is not integral");
            }
            out.add_term(e, q.to_integer());
        }
        Ok(out)
    }

    /// Degree in the lattice coordinates.
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().take(self.rank).sum()).max().unwrap_or(0)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { rank: self.rank, nparams: self.nparams, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.rank, self.nparams);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(j, &k)| {
                    let name = if j < self.rank { format!("x{}", j + 1) } else { format!("r{}", j - self.rank + 1) };
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_difference_of_linear_form() {
        // ξ = 3x1 + x2, α = x1 - x2, s swaps: (ξ - sξ)/α = ⟨ξ, α∨⟩ = 2
        let xi = Poly::linear(&[3, 1], 0);
        let s = IntMatrix::permutation(&[1, 0]);
        let diff = &xi - &xi.act(&s);
        assert_eq!(diff.div_linear(&[1, -1]).unwrap(), Poly::constant(2, 0, BigInt::from(2)));
    }

    #[test]
    fn division_with_nonprimitive_form() {
        // x1^3 - (-x1)^3 = 2 x1^3, divided by 2 x1
        let x = Poly::x(1, 1, 0);
        let p = &(&x * &x) * &x;
        let q = p.scale(&BigInt::from(2)).div_linear(&[2]).unwrap();
        assert_eq!(q, &x * &x);
    }

    #[test]
    fn remainder_detected() {
        let p = &Poly::x(2, 0, 0) + &Poly::one(2, 0);
        assert!(p.div_linear(&[1, 0]).is_err());
    }

    #[test]
    fn negation_parity() {
        let x = Poly::x(1, 1, 0);
        let r = Poly::r(1, 1, 0);
        let p = &(&x * &x) + &(&x * &r);
        let expected = &(&x * &x) - &(&x * &r);
        assert_eq!(p.negate_x(), expected);
    }
}
