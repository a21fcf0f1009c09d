use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

/// Laurent polynomial in `z_1, …, z_d` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentZ {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl LaurentZ {
    pub fn zero(nvars: usize) -> Self {
        LaurentZ { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    /// `c · z_var^exp`.
    pub fn monomial(nvars: usize, var: usize, exp: i32, c: i64) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        let mut out = Self::zero(nvars);
        out.add_term(e, BigInt::from(c));
        out
    }

    /// `z^k − z^{−k}` in the given variable.
    pub fn z_difference(nvars: usize, var: usize, k: i64) -> Self {
        let k = k as i32;
        &Self::monomial(nvars, var, k, 1) - &Self::monomial(nvars, var, -k, 1)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, BigInt)>) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: BigInt) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.nvars]).is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentZ { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Evaluation at nonzero rational values of the variables.
    pub fn evaluate(&self, z: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(z).fold(BigRational::from_integer(c.clone()), |acc, (&k, zi)| {
                    let p = Pow::pow(zi, k.unsigned_abs());
                    if k >= 0 {
                        acc * p
                    } else {
                        acc / p
                    }
                })
            })
            .sum()
    }

    /// Constant term when the polynomial is a constant, if it is one.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }
}

impl Add for &LaurentZ {
    type Output = LaurentZ;
    fn add(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentZ {
    type Output = LaurentZ;
    fn sub(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentZ {
    type Output = LaurentZ;
    fn neg(self) -> LaurentZ {
        LaurentZ { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &LaurentZ {
    type Output = LaurentZ;
    fn mul(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = LaurentZ::zero(self.nvars.max(rhs.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(j, &k)| if k == 1 { format!("z{}", j + 1) } else { format!("z{}^{}", j + 1, k) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_difference() {
        let d = LaurentZ::z_difference(1, 0, 1);
        let sq = &d * &d;
        let expected = LaurentZ::from_terms(
            1,
            [(vec![2], BigInt::from(1)), (vec![0], BigInt::from(-2)), (vec![-2], BigInt::from(1))],
        );
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "z1^2 - 2 + z1^-2");
    }

    #[test]
    fn evaluation() {
        let d = LaurentZ::z_difference(1, 0, 1);
        let v = d.evaluate(&[BigRational::from_integer(2.into())]);
        assert_eq!(v, BigRational::new(3.into(), 2.into()));
        assert!(LaurentZ::z_difference(2, 1, 3).evaluate(&[BigRational::one(), BigRational::one()]).is_zero());
    }

    #[test]
    fn cancellation_leaves_zero() {
        let a = LaurentZ::monomial(2, 0, 1, 3);
        assert!((&a - &a).is_zero());
        assert!(LaurentZ::one(2).is_one());
    }
}
