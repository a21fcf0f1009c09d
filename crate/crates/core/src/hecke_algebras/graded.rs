use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;

use super::AffineDescriptor;
use crate::coeff_rings::Poly;
use crate::error::{bail, Error, Result};
use crate::linalg::dot;
use crate::root_data::{RootDatum, Root};
use crate::spectra::FiniteTorusPoint;
use crate::weyl_groups::{
    stabilizer_of_point, Cocycle, DiagramGroup, ExtendedGroup, ExtendedWeylElement, WeylGroup,
};

/// The data determining `H(t, W ⋊ 𝕽, c·r, ♮)`: one parameter `c(α)` per
/// simple root and one variable `r_j` per z-component.
#[derive(Debug, Clone)]
pub struct GradedDescriptor {
    group: Arc<ExtendedGroup>,
    cocycle: Cocycle,
    c: Vec<i64>,
}

impl GradedDescriptor {
    pub fn new(group: Arc<ExtendedGroup>, c: Vec<i64>, cocycle: Cocycle) -> Result<Self> {
        let rd = group.datum().clone();
        if c.len() != rd.num_simple() {
            bail!(Construction, "{} parameters for {} simple roots", c.len(), rd.num_simple());
        }
        cocycle.validate(group.diagram().group())?;
        let mut by_root: HashMap<usize, i64> = HashMap::new();
        let mats = group.elements().map(|e| group.matrix(e));
        for m in mats {
            for (k, &ck) in c.iter().enumerate() {
                let i = rd.find(&m.apply(&rd.simple_root(k).vector)).expect("group permutes roots");
                if *by_root.entry(i).or_insert(ck) != ck {
                    bail!(Construction, "graded parameters are not invariant at the root {:?}", rd.root(i).vector);
                }
            }
        }
        Ok(GradedDescriptor { group, cocycle, c })
    }

    pub fn group(&self) -> &Arc<ExtendedGroup> {
        &self.group
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        self.group.datum()
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    pub fn nparams(&self) -> usize {
        self.datum().num_z_vars()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn parameter(&self, k: usize) -> i64 {
        self.c[k]
    }

    pub fn parameters(&self) -> &[i64] {
        &self.c
    }

    /// `(ξ − s_k ξ)/α_k`.
    pub fn divided_difference(&self, k: usize, xi: &Poly) -> Poly {
        let rd = self.datum();
        let diff = xi - &xi.act(&rd.simple_reflection(k));
        diff.div_linear(&rd.simple_root(k).vector).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `N_{s_k} · h`, using `N_s ξ = (sξ) N_s + c(α) r_j (ξ − sξ)/α`.
    pub fn left_mul_simple(&self, k: usize, h: &GradedElement) -> GradedElement {
        let rd = self.datum();
        let weyl = self.group.weyl();
        let m = rd.simple_reflection(k);
        let (rank, np) = (self.rank(), self.nparams());
        let r = Poly::r(rank, np, rd.simple_root(k).component).scale(&BigInt::from(self.c[k]));
        let mut out = GradedElement::zero(self);
        for (v, xi) in &h.terms {
            let target = ExtendedWeylElement { weyl: weyl.left_mul_simple(k, v.weyl), diagram: v.diagram };
            out.add_term(target, xi.act(&m));
            out.add_term(*v, &r * &self.divided_difference(k, xi));
        }
        out
    }

    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        for e in [a, b] {
            if e.rank != self.rank() || e.nparams != self.nparams() {
                bail!(Mismatch, "graded element does not belong to this descriptor");
            }
        }
        let dg = self.group.diagram();
        let mut out = GradedElement::zero(self);
        for (u, cu) in &a.terms {
            let mut x = GradedElement::zero(self);
            let gm = dg.matrix(u.diagram);
            for (v, cv) in &b.terms {
                let moved = cv.act(gm);
                let target = ExtendedWeylElement {
                    weyl: self.group.conjugate(u.diagram, v.weyl),
                    diagram: dg.group().mul(u.diagram, v.diagram),
                };
                if self.cocycle.value(u.diagram, v.diagram) < 0 {
                    x.add_term(target, -&moved);
                } else {
                    x.add_term(target, moved);
                }
            }
            for &k in self.group.weyl().word(u.weyl).iter().rev() {
                x = self.left_mul_simple(k, &x);
            }
            for (v, c) in x.terms {
                out.add_term(v, cu * &c);
            }
        }
        Ok(out)
    }
}

/// `N_w ↦ sign(w) N_w` (trivial sign on 𝕽), `ξ ↦ −ξ`, `r ↦ r`.
pub fn im_involution(desc: &GradedDescriptor, a: &GradedElement) -> GradedElement {
    let mut out = GradedElement::zero(desc);
    for (u, c) in &a.terms {
        let img = c.negate_x();
        out.add_term(*u, if desc.group().sign(*u) < 0 { -&img } else { img });
    }
    out
}

/// Graded descriptor at a torus point: the reduced roots whose reflections
/// fix `t`, the stabilizer of `t` split as `W_t ⋊ 𝕽_t`, and parameters
/// `k(α) = 2λ(α)` or `λ(α) + α(t) λ*(α)` when `α∨ ∈ 2X_*`.
pub fn affine_to_graded(desc: &AffineDescriptor, t: &FiniteTorusPoint) -> Result<GradedDescriptor> {
    let g = desc.group();
    let rd = g.datum();
    if t.rank() != rd.rank() {
        bail!(Domain, "point of rank {} for a datum of rank {}", t.rank(), rd.rank());
    }
    let st = stabilizer_of_point(g, t);
    let roots: Vec<Root> = st.roots.iter().map(|&i| rd.root(i).clone()).collect();
    let sub = Arc::new(RootDatum::new(rd.rank(), roots, rd.num_z_vars())?);
    let weyl = WeylGroup::enumerate(sub.clone())?;

    let (fg, elems) = g.subgroup(&st.diagram_part).map_err(|e| Error::Internal(e.to_string()))?;
    let labels: Vec<String> = elems.iter().map(|&e| desc.basis_label(e)).collect();
    let matrices = elems.iter().map(|&e| g.matrix(e)).collect();
    let zero = vec![vec![Rational64::from_integer(0); rd.rank()]; elems.len()];
    let dg = DiagramGroup::new(labels, fg, matrices, zero)?;
    let cocycle = Cocycle::from_table(
        elems.iter().map(|a| elems.iter().map(|b| desc.cocycle().value(a.diagram, b.diagram)).collect()).collect(),
        dg.group(),
    )?;
    let ext = ExtendedGroup::new(weyl, dg)?;
    if ext.order() != st.elements.len() {
        bail!(Internal, "stabilizer of order {} does not split as W_t ⋊ 𝕽_t of order {}", st.elements.len(), ext.order());
    }

    let n = t.order() as i64;
    let mut c = Vec::with_capacity(sub.num_simple());
    for k in 0..sub.num_simple() {
        let v = &sub.simple_root(k).vector;
        let p = desc.root_params(rd.find(v).expect("subsystem roots are roots")).expect("reduced roots carry parameters");
        let k_alpha = match p.lambda_star {
            None => 2 * p.lambda,
            Some(ls) => {
                let e = dot(v, t.exponents()).rem_euclid(n);
                if e == 0 {
                    p.lambda + ls
                } else if 2 * e == n {
                    p.lambda - ls
                } else {
                    bail!(Domain, "α(t) is not ±1 for the root {v:?}");
                }
            }
        };
        c.push(k_alpha);
    }
    GradedDescriptor::new(Arc::new(ext), c, cocycle)
}

/// Element `Σ_u ξ_u N_u` with polynomial coefficients on the left.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedElement {
    rank: usize,
    nparams: usize,
    terms: BTreeMap<ExtendedWeylElement, Poly>,
}

impl GradedElement {
    pub fn zero(desc: &GradedDescriptor) -> Self {
        GradedElement { rank: desc.rank(), nparams: desc.nparams(), terms: BTreeMap::new() }
    }

    pub fn basis(desc: &GradedDescriptor, u: ExtendedWeylElement) -> Self {
        let mut e = Self::zero(desc);
        e.add_term(u, Poly::one(desc.rank(), desc.nparams()));
        e
    }

    pub fn one(desc: &GradedDescriptor) -> Self {
        Self::basis(desc, ExtendedWeylElement::IDENTITY)
    }

    pub fn simple(desc: &GradedDescriptor, k: usize) -> Self {
        Self::basis(desc, ExtendedWeylElement { weyl: desc.group().weyl().simple(k), diagram: 0 })
    }

    pub fn poly(desc: &GradedDescriptor, p: Poly) -> Self {
        let mut e = Self::zero(desc);
        e.add_term(ExtendedWeylElement::IDENTITY, p);
        e
    }

    pub fn add_term(&mut self, u: ExtendedWeylElement, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(u) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<ExtendedWeylElement, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (u, p) in &rhs.terms {
            out.add_term(*u, p.clone());
        }
        out
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (u, p) in &rhs.terms {
            out.add_term(*u, -p);
        }
        out
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement { rank: self.rank, nparams: self.nparams, terms: self.terms.iter().map(|(u, p)| (*u, -p)).collect() }
    }
}

impl std::fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(u, p)| format!("({p})*N[{}|{}]", u.weyl, u.diagram)).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
