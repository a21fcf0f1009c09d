use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AffineDescriptor, HeckeElement};
use crate::error::{bail, Result};
use crate::root_data::LatticeVector;
use crate::weyl_groups::{Cocycle, ExtendedGroup, ExtendedWeylElement};

/// Element `Σ_u (Σ_x c_{u,x} θ_x) N_u` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedElement {
    rank: usize,
    terms: BTreeMap<ExtendedWeylElement, BTreeMap<LatticeVector, BigRational>>,
}

impl SpecializedElement {
    pub fn zero(rank: usize) -> Self {
        SpecializedElement { rank, terms: BTreeMap::new() }
    }

    pub fn monomial(x: LatticeVector, u: ExtendedWeylElement, c: BigRational) -> Self {
        let mut e = Self::zero(x.len());
        e.add_term(u, x, c);
        e
    }

    pub fn add_term(&mut self, u: ExtendedWeylElement, x: LatticeVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let inner = self.terms.entry(u).or_default();
        let slot = inner.entry(x.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            inner.remove(&x);
            if inner.is_empty() {
                self.terms.remove(&u);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<ExtendedWeylElement, BTreeMap<LatticeVector, BigRational>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, u: ExtendedWeylElement, x: &[i64]) -> BigRational {
        self.terms.get(&u).and_then(|m| m.get(x)).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Evaluates every z-variable at the given rational value.
pub fn specialize(desc: &AffineDescriptor, a: &HeckeElement, z: &[BigRational]) -> Result<SpecializedElement> {
    if z.len() != desc.nvars() {
        bail!(Mismatch, "{} z-values for {} variables", z.len(), desc.nvars());
    }
    if z.iter().any(|v| v <= &BigRational::zero()) {
        bail!(Domain, "z-values must be positive");
    }
    let mut out = SpecializedElement::zero(desc.rank());
    for (u, c) in a.terms() {
        for (x, v) in c.specialize(z) {
            out.add_term(*u, x, v);
        }
    }
    Ok(out)
}

/// The crossed product `O(T) ⋊ C[W ⋊ 𝕽, ♮]`, multiplied directly by
/// `(f N_u)(g N_v) = f · u(g) · ♮(γ_u, γ_v) N_{uv}`.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    group: Arc<ExtendedGroup>,
    cocycle: Cocycle,
}

impl CrossedProduct {
    pub fn new(group: Arc<ExtendedGroup>, cocycle: Cocycle) -> Result<Self> {
        cocycle.validate(group.diagram().group())?;
        Ok(CrossedProduct { group, cocycle })
    }

    pub fn group(&self) -> &Arc<ExtendedGroup> {
        &self.group
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn one(&self) -> SpecializedElement {
        SpecializedElement::monomial(vec![0; self.group.datum().rank()], ExtendedWeylElement::IDENTITY, BigRational::one())
    }
}

/// The quotient by `z_j − 1` for every `j`.
pub fn quotient_z1(desc: &AffineDescriptor) -> CrossedProduct {
    CrossedProduct { group: desc.group().clone(), cocycle: desc.cocycle().clone() }
}

pub fn crossed_product_multiply(
    cp: &CrossedProduct,
    a: &SpecializedElement,
    b: &SpecializedElement,
) -> SpecializedElement {
    let g = &cp.group;
    let mut out = SpecializedElement::zero(a.rank);
    for (u, f) in &a.terms {
        let m = g.matrix(*u);
        for (v, h) in &b.terms {
            let uv = g.mul(*u, *v);
            let sign = cp.cocycle.value(u.diagram, v.diagram);
            for (x, p) in f {
                for (y, q) in h {
                    let moved = m.apply(y);
                    let sum: Vec<i64> = x.iter().zip(&moved).map(|(s, t)| s + t).collect();
                    let c = p * q;
                    out.add_term(uv, sum, if sign < 0 { -c } else { c });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_algebras::RootParams;
    use crate::root_data::{Family, RootDatum};
    use crate::weyl_groups::WeylGroup;
    use num_bigint::BigInt;

    fn a1(lambda: i64) -> AffineDescriptor {
        let rd = Arc::new(RootDatum::build_classical(Family::A, 1).unwrap());
        let g = Arc::new(ExtendedGroup::plain(WeylGroup::enumerate(rd).unwrap()));
        AffineDescriptor::new(g, &[RootParams::equal(lambda)], Cocycle::trivial(1)).unwrap()
    }

    #[test]
    fn quadratic_relation_at_two() {
        let d = a1(1);
        let n = HeckeElement::simple(&d, 0);
        let sq = d.multiply(&n, &n).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        let s = specialize(&d, &sq, &[two]).unwrap();
        let su = ExtendedWeylElement { weyl: d.group().weyl().simple(0), diagram: 0 };
        assert_eq!(s.coefficient(su, &[0, 0]), BigRational::new(3.into(), 2.into()));
        assert_eq!(s.coefficient(ExtendedWeylElement::IDENTITY, &[0, 0]), BigRational::one());
    }

    #[test]
    fn commutation_at_one() {
        let d = a1(2);
        let n = HeckeElement::simple(&d, 0);
        let th = HeckeElement::theta(&d, vec![1, 0]);
        let prod = d.multiply(&n, &th).unwrap();
        let s = specialize(&d, &prod, &[BigRational::one()]).unwrap();
        let su = ExtendedWeylElement { weyl: d.group().weyl().simple(0), diagram: 0 };
        assert_eq!(s, SpecializedElement::monomial(vec![0, 1], su, BigRational::one()));

        let cp = quotient_z1(&d);
        let sn = specialize(&d, &n, &[BigRational::one()]).unwrap();
        let st = specialize(&d, &th, &[BigRational::one()]).unwrap();
        assert_eq!(crossed_product_multiply(&cp, &sn, &st), s);
    }

    #[test]
    fn rejects_nonpositive_values() {
        let d = a1(1);
        assert!(specialize(&d, &HeckeElement::one(&d), &[BigRational::zero()]).is_err());
    }
}
