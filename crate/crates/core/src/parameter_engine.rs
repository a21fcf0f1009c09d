//! Parameter functions: cuspidal unipotent shapes, the passage between
//! `(c, c*)` and `(λ, λ*)`, and the GL-type parameters.

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Row of the classical table a Jordan block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    S,
    O,
    GL,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::S => "S",
            Side::O => "O",
            Side::GL => "GL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamPair {
    pub lambda: i64,
    pub lambda_star: i64,
}

/// `λ, λ*` from the largest Jordan blocks `a, a′`; `swapped` is set when
/// `a < a′`, i.e. the other basepoint would give `a ≥ a′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JordanParams {
    pub pair: ParamPair,
    pub swapped: bool,
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `d` with `ℓ = d(d+1)` (S) or `ℓ = d²` (O).
pub fn cuspidal_d(side: Side, ell: i64) -> Result<i64> {
    if ell < 0 {
        bail!(Validation, "ℓ = {ell} is negative");
    }
    match side {
        Side::S => {
            let mut d = isqrt(ell);
            while d * (d + 1) > ell {
                d -= 1;
            }
            if d * (d + 1) != ell {
                bail!(
                    Validation,
                    "ℓ must be d(d+1) on the S side; {ell} lies between {} and {}",
                    d * (d + 1),
                    (d + 1) * (d + 2)
                );
            }
            Ok(d)
        }
        Side::O => {
            let d = isqrt(ell);
            if d * d != ell {
                bail!(Validation, "ℓ must be d² on the O side; {ell} lies between {} and {}", d * d, (d + 1) * (d + 1));
            }
            Ok(d)
        }
        Side::GL => {
            if ell != 0 {
                bail!(Validation, "ℓ must be 0 on the GL side, got {ell}");
            }
            Ok(0)
        }
    }
}

/// Jordan type of the cuspidal unipotent class: `(2, 4, …, 2d)` or
/// `(1, 3, …, 2d−1)`.
pub fn cuspidal_partition(side: Side, d: i64) -> Result<Vec<i64>> {
    if d < 0 {
        bail!(Validation, "d = {d} is negative");
    }
    match side {
        Side::S => Ok((1..=d).map(|k| 2 * k).collect()),
        Side::O => Ok((1..=d).map(|k| 2 * k - 1).collect()),
        Side::GL => bail!(Validation, "no cuspidal unipotent partition on the GL side"),
    }
}

/// Largest part of the cuspidal partition attached to `ℓ`, with the
/// conventions `0` (S) and `−1` (O) for the trivial class.
pub fn a_from_ell(side: Side, ell: i64) -> Result<i64> {
    let d = cuspidal_d(side, ell)?;
    match side {
        Side::S => Ok(2 * d),
        Side::O => Ok(2 * d - 1),
        Side::GL => bail!(Validation, "a is not defined on the GL side"),
    }
}

/// `λ = (a + a′)/2 + 1`, `λ* = |a − a′|/2`.
pub fn lambda_from_jordan(a: i64, a_prime: i64) -> Result<JordanParams> {
    if (a - a_prime) % 2 != 0 {
        bail!(Parity, "a = {a} and a′ = {a_prime} have different parity");
    }
    if a < -1 || a_prime < -1 {
        bail!(Validation, "largest Jordan blocks must be at least −1, got ({a}, {a_prime})");
    }
    let pair = ParamPair { lambda: (a + a_prime) / 2 + 1, lambda_star: (a - a_prime).abs() / 2 };
    if pair.lambda < 0 {
        bail!(Validation, "λ = {} is negative", pair.lambda);
    }
    Ok(JordanParams { pair, swapped: a < a_prime })
}

/// `(c, c*)` from `(λ, λ*)`: `c = 2λ` (and `c* = c`) when the coroot is not
/// halvable, otherwise `c = λ + λ*`, `c* = λ − λ*`.
pub fn c_from_lambda(p: ParamPair, halvable: bool) -> Result<(i64, i64)> {
    if p.lambda < 0 || p.lambda_star < 0 {
        bail!(Validation, "parameters ({}, {}) must be nonnegative", p.lambda, p.lambda_star);
    }
    if halvable {
        if p.lambda_star > p.lambda {
            bail!(Validation, "λ* = {} exceeds λ = {}", p.lambda_star, p.lambda);
        }
        Ok((p.lambda + p.lambda_star, p.lambda - p.lambda_star))
    } else {
        if p.lambda_star != p.lambda {
            bail!(Validation, "λ* = {} differs from λ = {} for a non-halvable coroot", p.lambda_star, p.lambda);
        }
        Ok((2 * p.lambda, 2 * p.lambda))
    }
}

pub fn lambda_from_c(c: i64, c_star: i64, halvable: bool) -> Result<ParamPair> {
    if c < 0 || c_star < 0 {
        bail!(Validation, "parameters ({c}, {c_star}) must be nonnegative");
    }
    if halvable {
        if (c + c_star) % 2 != 0 {
            bail!(Parity, "c = {c} and c* = {c_star} have different parity");
        }
        if c_star > c {
            bail!(Validation, "c* = {c_star} exceeds c = {c}");
        }
        Ok(ParamPair { lambda: (c + c_star) / 2, lambda_star: (c - c_star) / 2 })
    } else {
        if c % 2 != 0 {
            bail!(Parity, "c = {c} is odd for a non-halvable coroot");
        }
        if c_star != c {
            bail!(Validation, "c* = {c_star} differs from c = {c} for a non-halvable coroot");
        }
        Ok(ParamPair { lambda: c / 2, lambda_star: c / 2 })
    }
}

/// `λ = d_i` on the type-A roots and the specialization exponent
/// `f_i = d_i·t_i`.
pub fn gl_parameters(d: i64, t: i64) -> Result<(i64, i64)> {
    if d < 1 || t < 1 {
        bail!(Validation, "GL parameters need d ≥ 1 and t ≥ 1, got d = {d}, t = {t}");
    }
    Ok((d, d * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cuspidal_shapes() {
        assert_eq!(cuspidal_partition(Side::S, cuspidal_d(Side::S, 6).unwrap()).unwrap(), vec![2, 4]);
        assert_eq!(a_from_ell(Side::S, 6).unwrap(), 4);
        assert_eq!(cuspidal_partition(Side::O, cuspidal_d(Side::O, 9).unwrap()).unwrap(), vec![1, 3, 5]);
        assert_eq!(a_from_ell(Side::O, 9).unwrap(), 5);
        assert!(cuspidal_partition(Side::O, 0).unwrap().is_empty());
        assert_eq!(a_from_ell(Side::O, 0).unwrap(), -1);
        assert_eq!(a_from_ell(Side::S, 0).unwrap(), 0);
        let err = a_from_ell(Side::S, 5).unwrap_err().to_string();
        assert!(err.contains("d(d+1)") && err.contains("2") && err.contains("6"), "{err}");
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(lambda_from_jordan(5, 3).unwrap().pair, ParamPair { lambda: 5, lambda_star: 1 });
        assert_eq!(lambda_from_jordan(4, 0).unwrap().pair, ParamPair { lambda: 3, lambda_star: 2 });
        assert_eq!(lambda_from_jordan(0, 0).unwrap().pair, ParamPair { lambda: 1, lambda_star: 0 });
        assert!(lambda_from_jordan(1, 3).unwrap().swapped);
        assert!(lambda_from_jordan(4, 3).is_err());
    }

    #[test]
    fn c_examples() {
        assert_eq!(lambda_from_c(2, 2, false).unwrap(), ParamPair { lambda: 1, lambda_star: 1 });
        assert_eq!(c_from_lambda(ParamPair { lambda: 5, lambda_star: 1 }, true).unwrap(), (6, 4));
        assert_eq!(lambda_from_c(3, 1, true).unwrap(), ParamPair { lambda: 2, lambda_star: 1 });
        assert!(lambda_from_c(3, 3, false).is_err());
    }

    #[test]
    fn gl_examples() {
        assert_eq!(gl_parameters(1, 1).unwrap(), (1, 1));
        assert_eq!(gl_parameters(2, 3).unwrap(), (2, 6));
        assert_eq!(gl_parameters(4, 1).unwrap(), (4, 4));
    }

    proptest! {
        #[test]
        fn roundtrip_halvable(c in 0i64..80, c_star in 0i64..80) {
            prop_assume!(c_star <= c && (c + c_star) % 2 == 0);
            let p = lambda_from_c(c, c_star, true).unwrap();
            prop_assert_eq!(c_from_lambda(p, true).unwrap(), (c, c_star));
        }

        #[test]
        fn jordan_params_nonnegative(d in 0i64..20, d2 in 0i64..20, orth in any::<bool>()) {
            let side = if orth { Side::O } else { Side::S };
            let ell = |d: i64| if orth { d * d } else { d * (d + 1) };
            let a = a_from_ell(side, ell(d)).unwrap();
            let a2 = a_from_ell(side, ell(d2)).unwrap();
            let p = lambda_from_jordan(a, a2).unwrap();
            prop_assert!(p.pair.lambda >= 0 && p.pair.lambda_star >= 0);
            prop_assert_eq!(p.pair.lambda + p.pair.lambda_star, a.max(a2) + 1);
            prop_assert_eq!(p.pair.lambda - p.pair.lambda_star, a.min(a2) + 1);
        }
    }
}
