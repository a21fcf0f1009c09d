use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::coeff_rings::{act, LaurentZ, TorusAlgebraElement};
use crate::error::{bail, Result};
use crate::linalg::dot;
use crate::root_data::{LatticeVector, Root, RootDatum};
use crate::weyl_groups::{Cocycle, ExtendedGroup, ExtendedWeylElement};

/// Parameters attached to a reduced root. `lambda_star` is present exactly
/// when the coroot lies in `2X_*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootParams {
    pub lambda: i64,
    pub lambda_star: Option<i64>,
}

impl RootParams {
    pub fn equal(lambda: i64) -> Self {
        RootParams { lambda, lambda_star: None }
    }

    pub fn halvable(lambda: i64, lambda_star: i64) -> Self {
        RootParams { lambda, lambda_star: Some(lambda_star) }
    }
}

#[derive(Debug, Clone)]
struct SimpleData {
    root: Root,
    halvable: bool,
    params: RootParams,
    // z^λ − z^{−λ} and z^{λ*} − z^{−λ*}
    dl: LaurentZ,
    dls: LaurentZ,
}

/// The data determining `H(R, λ, λ*, z) ⋊ C[𝕽, ♮]`.
#[derive(Debug, Clone)]
pub struct AffineDescriptor {
    group: Arc<ExtendedGroup>,
    cocycle: Cocycle,
    params: Vec<Option<RootParams>>,
    simple: Vec<SimpleData>,
}

/// `(θ_x − θ_{s_α x}) / (θ_0 − θ_{−α})`, or with `θ_{−2α}` in the doubled
/// case, as an explicit finite sum.
pub fn bernstein_divide(x: &[i64], alpha: &Root, doubled: bool, nvars: usize) -> Result<TorusAlgebraElement> {
    let n = dot(x, &alpha.coroot);
    let step: i64 = if doubled { 2 } else { 1 };
    if doubled && n % 2 != 0 {
        bail!(Parity, "⟨{x:?}, {:?}⟩ = {n} is odd in the doubled case", alpha.coroot);
    }
    let mut out = TorusAlgebraElement::zero(x.len(), nvars);
    let shifted = |k: i64| -> Vec<i64> { x.iter().zip(&alpha.vector).map(|(a, b)| a + k * b).collect() };
    if n > 0 {
        for k in 0..n / step {
            out.add_term(shifted(-step * k), LaurentZ::one(nvars));
        }
    } else if n < 0 {
        for k in 1..=(-n) / step {
            out.add_term(shifted(step * k), LaurentZ::constant(nvars, -BigInt::one()));
        }
    }
    Ok(out)
}

impl AffineDescriptor {
    /// `simple_params[k]` gives the parameters of the k-th simple root; they
    /// are propagated to all reduced roots and checked for invariance under
    /// the whole extended group.
    pub fn new(group: Arc<ExtendedGroup>, simple_params: &[RootParams], cocycle: Cocycle) -> Result<Self> {
        let rd = group.datum().clone();
        if simple_params.len() != rd.num_simple() {
            bail!(Construction, "{} parameter pairs for {} simple roots", simple_params.len(), rd.num_simple());
        }
        cocycle.validate(group.diagram().group())?;
        let nvars = rd.num_z_vars();
        for r in rd.roots() {
            let v = &r.vector;
            if rd.is_reduced_root(v) && rd.is_doubled(v)? && !rd.coroot_halvable(v)? {
                bail!(Construction, "root {v:?} has 2α a root but α∨ ∉ 2X_*");
            }
        }
        let mut simple = Vec::with_capacity(simple_params.len());
        for (k, p) in simple_params.iter().enumerate() {
            let root = rd.simple_root(k).clone();
            let halvable = rd.coroot_halvable(&root.vector)?;
            if halvable != p.lambda_star.is_some() {
                bail!(
                    Construction,
                    "simple root {:?}: λ* must be given exactly when the coroot is in 2X_*",
                    root.vector
                );
            }
            let j = root.component;
            simple.push(SimpleData {
                dl: LaurentZ::z_difference(nvars, j, p.lambda),
                dls: LaurentZ::z_difference(nvars, j, p.lambda_star.unwrap_or(0)),
                root,
                halvable,
                params: *p,
            });
        }
        let mut params: Vec<Option<RootParams>> = vec![None; rd.roots().len()];
        for m in group.weyl().matrices() {
            for s in &simple {
                let i = rd.find(&m.apply(&s.root.vector)).expect("Weyl group permutes roots");
                match params[i] {
                    None => params[i] = Some(s.params),
                    Some(p) if p != s.params => {
                        bail!(Construction, "parameters are not W-invariant at the root {:?}", rd.root(i).vector)
                    }
                    Some(_) => {}
                }
            }
        }
        for g in 0..group.diagram().order() {
            let m = group.diagram().matrix(g);
            for (i, r) in rd.roots().iter().enumerate() {
                let j = rd.find(&m.apply(&r.vector)).expect("diagram group permutes roots");
                if params[i] != params[j] {
                    bail!(Construction, "parameters are not invariant under {}", group.diagram().label(g));
                }
                if rd.root(j).component != r.component {
                    bail!(Construction, "{} moves roots between z-variables", group.diagram().label(g));
                }
            }
        }
        Ok(AffineDescriptor { group, cocycle, params, simple })
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

    pub fn nvars(&self) -> usize {
        self.datum().num_z_vars()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn root_params(&self, root: usize) -> Option<RootParams> {
        self.params[root]
    }

    pub fn simple_params(&self, k: usize) -> RootParams {
        self.simple[k].params
    }

    pub fn num_simple(&self) -> usize {
        self.simple.len()
    }

    /// `z_j^{λ} − z_j^{−λ}` for the k-th simple root.
    pub fn z_difference(&self, k: usize) -> &LaurentZ {
        &self.simple[k].dl
    }

    /// The right-hand side `G(x)` of the Bernstein relation
    /// `θ_x N_s − N_s θ_{s x} = G(x)` for the k-th simple reflection.
    pub fn bernstein_rhs(&self, k: usize, x: &[i64]) -> TorusAlgebraElement {
        let s = &self.simple[k];
        let nv = self.nvars();
        if s.halvable {
            let d = bernstein_divide(x, &s.root, true, nv).expect("coroot in 2X_* makes pairings even");
            let neg: Vec<i64> = s.root.vector.iter().map(|c| -c).collect();
            let mut factor = TorusAlgebraElement::scalar(x.len(), s.dl.clone());
            factor.add_term(neg, s.dls.clone());
            &factor * &d
        } else {
            let d = bernstein_divide(x, &s.root, false, nv).expect("simple case has no parity condition");
            d.scale(&s.dl)
        }
    }

    /// `Δ_s(c)` with `N_s c = s(c) N_s − Δ_s(c)`.
    fn delta(&self, k: usize, c: &TorusAlgebraElement) -> TorusAlgebraElement {
        let m = self.datum().simple_reflection(k);
        let mut out = TorusAlgebraElement::zero(self.rank(), self.nvars());
        for (x, f) in c.terms() {
            let g = self.bernstein_rhs(k, &m.apply(x));
            out = &out + &g.scale(f);
        }
        out
    }

    /// `N_{s_k} · h`.
    pub fn left_mul_simple(&self, k: usize, h: &HeckeElement) -> HeckeElement {
        let weyl = self.group.weyl();
        let m = self.datum().simple_reflection(k);
        let mut out = HeckeElement::zero(self);
        for (v, c) in &h.terms {
            let sc = act(&m, c);
            let sv = weyl.left_mul_simple(k, v.weyl);
            let target = ExtendedWeylElement { weyl: sv, diagram: v.diagram };
            if weyl.length(sv) < weyl.length(v.weyl) {
                out.add_term(*v, sc.scale(&self.simple[k].dl));
            }
            out.add_term(target, sc);
            out.add_term(*v, -&self.delta(k, c));
        }
        out
    }

    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        self.check(a)?;
        self.check(b)?;
        let dg = self.group.diagram();
        let mut out = HeckeElement::zero(self);
        for (u, cu) in &a.terms {
            // N_γ (c N_{w'γ'}) = ♮(γ,γ') γ(c) N_{γw'γ⁻¹} N_{γγ'}
            let mut x = HeckeElement::zero(self);
            let gm = dg.matrix(u.diagram);
            for (v, cv) in &b.terms {
                let moved = act(gm, cv);
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

    fn check(&self, a: &HeckeElement) -> Result<()> {
        if a.rank != self.rank() || a.nvars != self.nvars() {
            bail!(Mismatch, "element over rank {} with {} z-variables used with a different descriptor", a.rank, a.nvars);
        }
        let (nw, nd) = (self.group.weyl().order(), self.group.diagram().order());
        if a.terms.keys().any(|u| u.weyl >= nw || u.diagram >= nd) {
            bail!(Mismatch, "element refers to group elements outside the descriptor");
        }
        Ok(())
    }

    /// Label `N[word|diagram]` of a basis element, simple indices 1-based.
    pub fn basis_label(&self, u: ExtendedWeylElement) -> String {
        let word: Vec<String> = self.group.weyl().word(u.weyl).iter().map(|k| (k + 1).to_string()).collect();
        format!("N[{}|{}]", word.join("."), self.group.diagram().label(u.diagram))
    }

    /// Canonical text: terms `c*theta[x]*z^[e]*N[word|label]` ordered by
    /// lattice vector, then group element (length, word, diagram), then
    /// z-exponent.
    pub fn format(&self, a: &HeckeElement) -> String {
        let weyl = self.group.weyl();
        let mut items = Vec::new();
        for (u, c) in &a.terms {
            for (x, l) in c.terms() {
                for (e, k) in l.terms() {
                    items.push((x.clone(), weyl.length(u.weyl), weyl.word(u.weyl).to_vec(), u.diagram, e.clone(), k.clone(), *u));
                }
            }
        }
        if items.is_empty() {
            return "0".into();
        }
        items.sort();
        let mut out = String::new();
        for (i, (x, _, _, _, e, k, u)) in items.into_iter().enumerate() {
            let sign = match (i, k.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let term = format!("{}*theta{x:?}*z^{e:?}*{}", k.abs(), self.basis_label(u));
            out.push_str(sign);
            out.push_str(&term.replace(", ", ","));
        }
        out
    }
}

/// Element `Σ_u c_u N_u` with torus-algebra coefficients on the left.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    rank: usize,
    nvars: usize,
    terms: BTreeMap<ExtendedWeylElement, TorusAlgebraElement>,
}

impl HeckeElement {
    pub fn zero(desc: &AffineDescriptor) -> Self {
        HeckeElement { rank: desc.rank(), nvars: desc.nvars(), terms: BTreeMap::new() }
    }

    pub fn one(desc: &AffineDescriptor) -> Self {
        Self::basis(desc, ExtendedWeylElement::IDENTITY)
    }

    pub fn basis(desc: &AffineDescriptor, u: ExtendedWeylElement) -> Self {
        let mut h = Self::zero(desc);
        h.add_term(u, TorusAlgebraElement::one(desc.rank(), desc.nvars()));
        h
    }

    pub fn theta(desc: &AffineDescriptor, x: LatticeVector) -> Self {
        Self::from_torus(desc, TorusAlgebraElement::theta(x, desc.nvars()))
    }

    pub fn scalar(desc: &AffineDescriptor, c: LaurentZ) -> Self {
        Self::from_torus(desc, TorusAlgebraElement::scalar(desc.rank(), c))
    }

    pub fn from_torus(desc: &AffineDescriptor, c: TorusAlgebraElement) -> Self {
        let mut h = Self::zero(desc);
        h.add_term(ExtendedWeylElement::IDENTITY, c);
        h
    }

    /// `N_{s_k}`.
    pub fn simple(desc: &AffineDescriptor, k: usize) -> Self {
        Self::basis(desc, ExtendedWeylElement { weyl: desc.group().weyl().simple(k), diagram: 0 })
    }

    /// `N_γ` for a diagram element.
    pub fn diagram(desc: &AffineDescriptor, g: usize) -> Self {
        Self::basis(desc, ExtendedWeylElement { weyl: 0, diagram: g })
    }

    pub fn add_term(&mut self, u: ExtendedWeylElement, c: TorusAlgebraElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(u) {
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

    pub fn terms(&self) -> &BTreeMap<ExtendedWeylElement, TorusAlgebraElement> {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, u: ExtendedWeylElement) -> TorusAlgebraElement {
        self.terms.get(&u).cloned().unwrap_or_else(|| TorusAlgebraElement::zero(self.rank, self.nvars))
    }

    /// Left multiplication by a torus-algebra element.
    pub fn left_scale(&self, c: &TorusAlgebraElement) -> Self {
        let mut out = HeckeElement { rank: self.rank, nvars: self.nvars, terms: BTreeMap::new() };
        for (u, x) in &self.terms {
            out.add_term(*u, c * x);
        }
        out
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut out = HeckeElement { rank: self.rank, nvars: self.nvars, terms: BTreeMap::new() };
        for (u, x) in &self.terms {
            out.add_term(*u, x.scale_int(k));
        }
        out
    }

    /// Number of (θ, z, N) monomials.
    pub fn num_monomials(&self) -> usize {
        self.terms.values().flat_map(|c| c.terms().values()).map(|l| l.terms().len()).sum()
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms
            .values()
            .flat_map(|c| c.terms().values())
            .flat_map(|l| l.terms().values())
            .map(|k| k.abs())
            .max()
            .unwrap_or_default()
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.add_term(*u, c.clone());
        }
        out
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (u, c) in &rhs.terms {
            out.add_term(*u, -c);
        }
        out
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        HeckeElement {
            rank: self.rank,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(u, c)| (*u, -c)).collect(),
        }
    }
}

impl std::fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(u, c)| format!("({c})*N[{}|{}]", u.weyl, u.diagram)).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
