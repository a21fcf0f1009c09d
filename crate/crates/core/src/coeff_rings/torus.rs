use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{CyclotomicValue, LaurentZ};
use crate::linalg::{dot, IntMatrix};
use crate::root_data::LatticeVector;
use crate::spectra::FiniteTorusPoint;

/// Element `Σ_x c_x θ_x` of `Z[X] ⊗ Z[z^±]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusAlgebraElement {
    rank: usize,
    nvars: usize,
    terms: BTreeMap<LatticeVector, LaurentZ>,
}

impl TorusAlgebraElement {
    pub fn zero(rank: usize, nvars: usize) -> Self {
        TorusAlgebraElement { rank, nvars, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, nvars: usize) -> Self {
        Self::theta(vec![0; rank], nvars)
    }

    pub fn theta(x: LatticeVector, nvars: usize) -> Self {
        let rank = x.len();
        let mut out = Self::zero(rank, nvars);
        out.add_term(x, LaurentZ::one(nvars));
        out
    }

    pub fn scalar(rank: usize, c: LaurentZ) -> Self {
        let nvars = c.nvars();
        let mut out = Self::zero(rank, nvars);
        out.add_term(vec![0; rank], c);
        out
    }

    pub fn add_term(&mut self, x: LatticeVector, c: LaurentZ) {
        debug_assert_eq!(x.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, LaurentZ> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.rank]).is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &LaurentZ) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (x, v) in &self.terms {
            out.add_term(x.clone(), v * c);
        }
        out
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (x, v) in &self.terms {
            out.add_term(x.clone(), v.scale(c));
        }
        out
    }

    /// Replaces every Laurent coefficient by its value at `z`, returning the
    /// rational coefficient of each `θ_x`.
    pub fn specialize(&self, z: &[BigRational]) -> BTreeMap<LatticeVector, BigRational> {
        self.terms
            .iter()
            .map(|(x, c)| (x.clone(), c.evaluate(z)))
            .filter(|(_, q)| q != &BigRational::from_integer(0.into()))
            .collect()
    }
}

/// `θ_x ↦ θ_{Mx}`, fixing the z-variables.
pub fn act(m: &IntMatrix, e: &TorusAlgebraElement) -> TorusAlgebraElement {
    let mut out = TorusAlgebraElement::zero(e.rank, e.nvars);
    for (x, c) in &e.terms {
        out.add_term(m.apply(x), c.clone());
    }
    out
}

/// Value at the point `t` with the z-variables set to the given rationals.
pub fn evaluate_at_point(e: &TorusAlgebraElement, t: &FiniteTorusPoint, z: &[BigRational]) -> CyclotomicValue {
    let n = t.order();
    let mut acc = CyclotomicValue::zero(n);
    for (x, c) in &e.terms {
        let k = dot(x, t.exponents());
        acc = &acc + &CyclotomicValue::root_of_unity(n, k, c.evaluate(z));
    }
    acc
}

impl Add for &TorusAlgebraElement {
    type Output = TorusAlgebraElement;
    fn add(self, rhs: &TorusAlgebraElement) -> TorusAlgebraElement {
        let mut out = self.clone();
        for (x, c) in &rhs.terms {
            out.add_term(x.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TorusAlgebraElement {
    type Output = TorusAlgebraElement;
    fn sub(self, rhs: &TorusAlgebraElement) -> TorusAlgebraElement {
        let mut out = self.clone();
        for (x, c) in &rhs.terms {
            out.add_term(x.clone(), -c);
        }
        out
    }
}

impl Neg for &TorusAlgebraElement {
    type Output = TorusAlgebraElement;
    fn neg(self) -> TorusAlgebraElement {
        TorusAlgebraElement {
            rank: self.rank,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, c)| (x.clone(), -c)).collect(),
        }
    }
}

impl Mul for &TorusAlgebraElement {
    type Output = TorusAlgebraElement;
    fn mul(self, rhs: &TorusAlgebraElement) -> TorusAlgebraElement {
        let mut out = TorusAlgebraElement::zero(self.rank, self.nvars);
        for (x, a) in &self.terms {
            for (y, b) in &rhs.terms {
                let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                out.add_term(s, a * b);
            }
        }
        out
    }
}

impl fmt::Display for TorusAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(x, c)| {
                let theta = format!("theta{x:?}");
                match c.as_constant() {
                    Some(k) if k.is_one() => theta,
                    Some(k) if k.is_negative() && (-k.clone()).is_one() => format!("-{theta}"),
                    Some(k) => format!("{k}*{theta}"),
                    None => format!("({c})*{theta}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for TorusAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn th(x: &[i64]) -> TorusAlgebraElement {
        TorusAlgebraElement::theta(x.to_vec(), 1)
    }

    #[test]
    fn theta_inverse() {
        assert!((&th(&[2, -1]) * &th(&[-2, 1])).is_one());
    }

    #[test]
    fn telescoping_identity() {
        let x = [3, 1];
        let alpha = [1, -1];
        let n = 4;
        let one_minus = &th(&[0, 0]) - &th(&[-1, 1]);
        let mut sum = TorusAlgebraElement::zero(2, 1);
        for k in 0..n {
            sum = &sum + &th(&[-k * alpha[0], -k * alpha[1]]);
        }
        let lhs = &(&th(&x) * &one_minus) * &sum;
        let rhs = &th(&x) - &th(&[x[0] - n * alpha[0], x[1] - n * alpha[1]]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn point_evaluation() {
        let t = FiniteTorusPoint::new(4, vec![1, 0]);
        assert_eq!(evaluate_at_point(&th(&[0, 0]), &t, &[]).as_rational(), Some(BigRational::one()));
        let sym = &th(&[1, 0]) + &th(&[-1, 0]);
        assert!(evaluate_at_point(&sym, &t, &[]).is_zero());
        let t2 = FiniteTorusPoint::new(2, vec![1, 1]);
        assert_eq!(evaluate_at_point(&th(&[1, 0]), &t2, &[]).as_rational(), Some(-BigRational::one()));
        assert!(!evaluate_at_point(&th(&[1, 1]), &t2, &[]).as_rational().unwrap().is_zero());
    }

    #[test]
    fn swap_action() {
        let s = IntMatrix::permutation(&[1, 0]);
        assert_eq!(act(&s, &th(&[1, 0])), th(&[0, 1]));
        let minus = IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]).unwrap();
        assert_eq!(act(&minus, &th(&[2, 3])), th(&[-2, -3]));
    }
}
