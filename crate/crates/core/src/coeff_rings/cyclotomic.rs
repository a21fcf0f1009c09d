use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term
/// first, computed by dividing `x^n − 1` by the lower cyclotomic factors.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &x) in den.iter().enumerate() {
            rem[i + j] -= c * x;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// An element of `Q(μ_n)` in the power basis `1, ζ, …, ζ^{φ(n)−1}` with
/// `ζ = exp(2πi/n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicValue {
    n: usize,
    coeffs: Vec<BigRational>,
}

impl CyclotomicValue {
    fn reduce(n: usize, mut c: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // fold exponents ≥ n using ζ^n = 1, then reduce by the monic Φ_n
        for i in (n..c.len()).rev() {
            let x = std::mem::take(&mut c[i]);
            c[i % n] += x;
        }
        c.truncate(n.max(1));
        for i in (deg..c.len()).rev() {
            let x = std::mem::take(&mut c[i]);
            if x.is_zero() {
                continue;
            }
            for (j, &p) in phi.iter().enumerate().take(deg) {
                c[i - deg + j] -= &x * BigInt::from(p);
            }
        }
        c.resize(deg, BigRational::zero());
        CyclotomicValue { n, coeffs: c }
    }

    pub fn zero(n: usize) -> Self {
        Self::reduce(n, vec![BigRational::zero()])
    }

    pub fn one(n: usize) -> Self {
        Self::rational(n, BigRational::one())
    }

    pub fn rational(n: usize, q: BigRational) -> Self {
        Self::reduce(n, vec![q])
    }

    /// `q · ζ^k`.
    pub fn root_of_unity(n: usize, k: i64, q: BigRational) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); n];
        c[k] = q;
        Self::reduce(n, c)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    fn same_order(&self, other: &Self) {
        assert_eq!(self.n, other.n, "cyclotomic values of different orders");
    }
}

impl Add for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn add(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        self.same_order(rhs);
        let c = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicValue { n: self.n, coeffs: c }
    }
}

impl Sub for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn sub(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn neg(self) -> CyclotomicValue {
        CyclotomicValue { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicValue {
    type Output = CyclotomicValue;
    fn mul(self, rhs: &CyclotomicValue) -> CyclotomicValue {
        self.same_order(rhs);
        let len = (self.coeffs.len() + rhs.coeffs.len()).max(1);
        let mut c = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CyclotomicValue::reduce(self.n, c)
    }
}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| if k == 0 { c.to_string() } else { format!("({c})*zeta{}^{k}", self.n) })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity() {
        let one = BigRational::one();
        let i = CyclotomicValue::root_of_unity(4, 1, one.clone());
        let minus_i = CyclotomicValue::root_of_unity(4, 3, one.clone());
        assert!((&i + &minus_i).is_zero());
        assert_eq!((&i * &i).as_rational(), Some(-one.clone()));
        let half = CyclotomicValue::root_of_unity(6, 3, one.clone());
        assert_eq!(half.as_rational(), Some(-one.clone()));
        // 1 + ζ_3 + ζ_3² = 0
        let s = &(&CyclotomicValue::one(3) + &CyclotomicValue::root_of_unity(3, 1, one.clone()))
            + &CyclotomicValue::root_of_unity(3, 2, one);
        assert!(s.is_zero());
    }
}
