//! Identity checks for the algebras: the defining relations, associativity on
//! random elements, the center, and the Iwahori–Matsumoto involution.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use super::{im_involution, AffineDescriptor, GradedDescriptor, GradedElement, HeckeElement, RootParams};
use crate::coeff_rings::{LaurentZ, Poly, TorusAlgebraElement};
use crate::error::Result;
use crate::root_data::{Family, LatticeVector, RootDatum};
use crate::weyl_groups::{
    Cocycle, DiagramGenerator, DiagramGroup, ExtendedGroup, ExtendedWeylElement, WeylGroup,
};

/// Outcome of one named identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// `N_s² = (z^λ − z^{−λ}) N_s + 1`.
pub fn check_quadratic(desc: &AffineDescriptor, k: usize) -> Result<bool> {
    let n = HeckeElement::simple(desc, k);
    let sq = desc.multiply(&n, &n)?;
    let rhs = &n.left_scale(&TorusAlgebraElement::scalar(desc.rank(), desc.z_difference(k).clone()))
        + &HeckeElement::one(desc);
    Ok(sq == rhs)
}

/// `θ_x N_s − N_s θ_{s x} = G(x)` in the algebra, together with the
/// cross-multiplied form of `G(x)` in the torus algebra:
/// `G(x)(1 − θ_{−α}) = (z^λ − z^{−λ})(θ_x − θ_{sx})`, or in the halvable case
/// `G(x)(1 − θ_{−2α}) = (z^λ − z^{−λ} + θ_{−α}(z^{λ*} − z^{−λ*}))(θ_x − θ_{sx})`.
pub fn check_bernstein(desc: &AffineDescriptor, k: usize, x: &[i64]) -> Result<bool> {
    let rd = desc.datum();
    let m = rd.simple_reflection(k);
    let sx = m.apply(x);
    let n = HeckeElement::simple(desc, k);
    let lhs = &desc.multiply(&HeckeElement::theta(desc, x.to_vec()), &n)?
        - &desc.multiply(&n, &HeckeElement::theta(desc, sx.clone()))?;
    let g = desc.bernstein_rhs(k, x);
    if lhs != HeckeElement::from_torus(desc, g.clone()) {
        return Ok(false);
    }

    let (rank, nv) = (desc.rank(), desc.nvars());
    let alpha = &rd.simple_root(k).vector;
    let params = desc.simple_params(k);
    let dl = desc.z_difference(k).clone();
    let diff = &TorusAlgebraElement::theta(x.to_vec(), nv) - &TorusAlgebraElement::theta(sx, nv);
    let step = if params.lambda_star.is_some() { 2 } else { 1 };
    let shifted: LatticeVector = alpha.iter().map(|c| -step * c).collect();
    let denom = &TorusAlgebraElement::one(rank, nv) - &TorusAlgebraElement::theta(shifted, nv);
    let mut numer = TorusAlgebraElement::scalar(rank, dl);
    if let Some(ls) = params.lambda_star {
        let neg: LatticeVector = alpha.iter().map(|c| -c).collect();
        numer.add_term(neg, LaurentZ::z_difference(nv, rd.simple_root(k).component, ls));
    }
    Ok(&g * &denom == &numer * &diff)
}

/// `N_s N_t N_s ⋯ = N_t N_s N_t ⋯` with `m_{st}` factors on both sides, and
/// both equal to the basis element of that reduced word.
pub fn check_braid(desc: &AffineDescriptor, i: usize, j: usize) -> Result<bool> {
    let m = desc.datum().coxeter_m(i, j);
    let alternating = |a: usize, b: usize| -> Result<(HeckeElement, Vec<usize>)> {
        let mut out = HeckeElement::one(desc);
        let mut word = Vec::new();
        for step in 0..m {
            let k = if step % 2 == 0 { a } else { b };
            out = desc.multiply(&out, &HeckeElement::simple(desc, k))?;
            word.push(k);
        }
        Ok((out, word))
    };
    let (left, word) = alternating(i, j)?;
    let (right, _) = alternating(j, i)?;
    let w = desc.group().weyl().from_word(&word);
    Ok(left == right && left == HeckeElement::basis(desc, ExtendedWeylElement { weyl: w, diagram: 0 }))
}

/// Random sparse element: `terms` monomials `c · θ_x · z^e · N_u` with
/// `|x_i| ≤ bound`, `|e_j| ≤ 2`, `|c| ≤ 3`.
pub fn random_element<R: Rng>(desc: &AffineDescriptor, rng: &mut R, terms: usize, bound: i64) -> HeckeElement {
    let g = desc.group();
    let (rank, nv) = (desc.rank(), desc.nvars());
    let mut out = HeckeElement::zero(desc);
    for _ in 0..terms {
        let u = g.from_flat(rng.gen_range(0..g.order()));
        let x: LatticeVector = (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect();
        let e: Vec<i32> = (0..nv).map(|_| rng.gen_range(-2..=2)).collect();
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut l = LaurentZ::zero(nv);
        l.add_term(e, BigInt::from(c));
        let mut t = TorusAlgebraElement::zero(rank, nv);
        t.add_term(x, l);
        out.add_term(u, t);
    }
    out
}

pub fn random_graded_element<R: Rng>(desc: &GradedDescriptor, rng: &mut R, terms: usize) -> GradedElement {
    let g = desc.group();
    let (rank, np) = (desc.rank(), desc.nparams());
    let mut out = GradedElement::zero(desc);
    for _ in 0..terms {
        let u = g.from_flat(rng.gen_range(0..g.order()));
        let e: Vec<u32> = (0..rank + np).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 }).collect();
        let mut p = Poly::zero(rank, np);
        p.add_term(e, BigInt::from(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }));
        out.add_term(u, p);
    }
    out
}

/// Number of failing triples out of `triples` random ones.
pub fn check_associativity<R: Rng>(desc: &AffineDescriptor, rng: &mut R, triples: usize) -> Result<usize> {
    let mut failures = 0;
    for _ in 0..triples {
        let a = random_element(desc, rng, 2, 2);
        let b = random_element(desc, rng, 2, 2);
        let c = random_element(desc, rng, 2, 2);
        let left = desc.multiply(&desc.multiply(&a, &b)?, &c)?;
        let right = desc.multiply(&a, &desc.multiply(&b, &c)?)?;
        if left != right {
            failures += 1;
        }
    }
    Ok(failures)
}

pub fn check_graded_associativity<R: Rng>(desc: &GradedDescriptor, rng: &mut R, triples: usize) -> Result<usize> {
    let mut failures = 0;
    for _ in 0..triples {
        let a = random_graded_element(desc, rng, 2);
        let b = random_graded_element(desc, rng, 2);
        let c = random_graded_element(desc, rng, 2);
        if desc.multiply(&desc.multiply(&a, &b)?, &c)? != desc.multiply(&a, &desc.multiply(&b, &c)?)? {
            failures += 1;
        }
    }
    Ok(failures)
}

/// The involution is multiplicative and squares to the identity.
pub fn check_im_involution<R: Rng>(desc: &GradedDescriptor, rng: &mut R, pairs: usize) -> Result<bool> {
    for _ in 0..pairs {
        let a = random_graded_element(desc, rng, 2);
        let b = random_graded_element(desc, rng, 2);
        let lhs = im_involution(desc, &desc.multiply(&a, &b)?);
        let rhs = desc.multiply(&im_involution(desc, &a), &im_involution(desc, &b))?;
        if lhs != rhs || im_involution(desc, &im_involution(desc, &a)) != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Commutes with `θ_{±e_i}`, every `N_s` and every `N_γ`.
pub fn is_central(desc: &AffineDescriptor, a: &HeckeElement) -> Result<bool> {
    let rank = desc.rank();
    let mut gens = Vec::new();
    for i in 0..rank {
        for s in [1, -1] {
            let mut x = vec![0; rank];
            x[i] = s;
            gens.push(HeckeElement::theta(desc, x));
        }
    }
    gens.extend((0..desc.num_simple()).map(|k| HeckeElement::simple(desc, k)));
    gens.extend((1..desc.group().diagram().order()).map(|g| HeckeElement::diagram(desc, g)));
    for g in &gens {
        if desc.multiply(a, g)? != desc.multiply(g, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ θ_y` over the orbit of `x` under `W ⋊ 𝕽`.
pub fn symmetrize(desc: &AffineDescriptor, x: &[i64]) -> HeckeElement {
    let g = desc.group();
    let orbit: BTreeSet<LatticeVector> = g.elements().map(|u| g.matrix(u).apply(x)).collect();
    let mut t = TorusAlgebraElement::zero(desc.rank(), desc.nvars());
    for y in orbit {
        t.add_term(y, LaurentZ::one(desc.nvars()));
    }
    HeckeElement::from_torus(desc, t)
}

fn plain(rd: RootDatum, params: &[RootParams]) -> Result<AffineDescriptor> {
    let g = ExtendedGroup::plain(WeylGroup::enumerate(Arc::new(rd))?);
    AffineDescriptor::new(Arc::new(g), params, Cocycle::trivial(1))
}

/// `A1 × A1` in `Z^4` with one shared z-variable and `Z/2` swapping the
/// factors, with the trivial cocycle or with `♮(γ, γ) = −1`.
pub fn swapped_a1_pair(lambda: i64, twisted: bool) -> Result<AffineDescriptor> {
    let a1 = RootDatum::build_classical(Family::A, 1)?;
    let rd = RootDatum::product(&a1, &a1)?.with_components(&[0, 0], 1)?;
    let swap = crate::linalg::IntMatrix::permutation(&[2, 3, 0, 1]);
    let dg = DiagramGroup::abelian(
        4,
        vec![DiagramGenerator { label: "g".into(), matrix: swap, translation: vec![0.into(); 4], order: 2 }],
    )?;
    let cocycle = if twisted {
        Cocycle::from_table(vec![vec![1, 1], vec![1, -1]], dg.group())?
    } else {
        Cocycle::trivial(2)
    };
    let g = ExtendedGroup::new(WeylGroup::enumerate(Arc::new(rd))?, dg)?;
    AffineDescriptor::new(Arc::new(g), &[RootParams::equal(lambda); 2], cocycle)
}

/// The small descriptors every invariant check runs on.
pub fn test_descriptors() -> Result<Vec<(String, AffineDescriptor)>> {
    use Family::*;
    Ok(vec![
        ("A1".into(), plain(RootDatum::build_classical(A, 1)?, &[RootParams::equal(1)])?),
        ("A1 halvable".into(), plain(RootDatum::build_classical(B, 1)?, &[RootParams::halvable(2, 1)])?),
        ("BC1".into(), plain(RootDatum::build_classical(BC, 1)?, &[RootParams::halvable(3, 1)])?),
        ("A2".into(), plain(RootDatum::build_classical(A, 2)?, &[RootParams::equal(1); 2])?),
        (
            "B2".into(),
            plain(RootDatum::build_classical(B, 2)?, &[RootParams::equal(1), RootParams::halvable(2, 1)])?,
        ),
        (
            "BC2".into(),
            plain(RootDatum::build_classical(BC, 2)?, &[RootParams::equal(1), RootParams::halvable(3, 2)])?,
        ),
        ("A1xA1 swap".into(), swapped_a1_pair(1, false)?),
        ("A1xA1 swap twisted".into(), swapped_a1_pair(1, true)?),
    ])
}

/// Lattice vectors with coordinates in `[-bound, bound]`.
pub fn random_vectors<R: Rng>(rng: &mut R, rank: usize, count: usize, bound: i64) -> Vec<LatticeVector> {
    (0..count).map(|_| (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

/// Quadratic, Bernstein (on `xs`), braid, associativity and center checks.
pub fn run_suite<R: Rng>(
    name: &str,
    desc: &AffineDescriptor,
    rng: &mut R,
    xs: &[LatticeVector],
    triples: usize,
) -> Result<Vec<CheckResult>> {
    let ns = desc.num_simple();
    let mut out = Vec::new();
    let quad = (0..ns).map(|k| check_quadratic(desc, k)).collect::<Result<Vec<_>>>()?;
    out.push(CheckResult::new(format!("{name}: quadratic"), quad.iter().all(|&b| b), format!("{ns} simple roots")));

    let mut bern_fail = 0;
    for k in 0..ns {
        for x in xs {
            if !check_bernstein(desc, k, x)? {
                bern_fail += 1;
            }
        }
    }
    out.push(CheckResult::new(
        format!("{name}: bernstein"),
        bern_fail == 0,
        format!("{bern_fail} failures over {} pairs", ns * xs.len()),
    ));

    let mut braid = true;
    for i in 0..ns {
        for j in i + 1..ns {
            braid &= check_braid(desc, i, j)?;
        }
    }
    out.push(CheckResult::new(format!("{name}: braid"), braid, ""));

    let fails = check_associativity(desc, rng, triples)?;
    out.push(CheckResult::new(
        format!("{name}: associativity"),
        fails == 0,
        format!("{fails} failures over {triples} triples"),
    ));

    let one = HeckeElement::one(desc);
    let a = random_element(desc, rng, 3, 2);
    let unit = desc.multiply(&one, &a)? == a && desc.multiply(&a, &one)? == a;
    out.push(CheckResult::new(format!("{name}: identity"), unit, ""));

    let mut central = true;
    for i in 0..desc.rank() {
        let mut x = vec![0; desc.rank()];
        x[i] = 1;
        central &= is_central(desc, &symmetrize(desc, &x))?;
        x[i] = -1;
        central &= is_central(desc, &symmetrize(desc, &x))?;
    }
    for j in 0..desc.nvars() {
        central &= is_central(desc, &HeckeElement::scalar(desc, LaurentZ::monomial(desc.nvars(), j, 1, 1)))?;
    }
    out.push(CheckResult::new(format!("{name}: center"), central, ""));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_test_descriptors_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, desc) in test_descriptors().unwrap() {
            let xs = random_vectors(&mut rng, desc.rank(), 8, 3);
            for check in run_suite(&name, &desc, &mut rng, &xs, 10).unwrap() {
                assert!(check.passed, "{} failed: {}", check.name, check.detail);
            }
        }
    }

    #[test]
    fn graded_algebras_at_points() {
        use crate::hecke_algebras::affine_to_graded;
        use crate::spectra::FiniteTorusPoint;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, desc) in test_descriptors().unwrap() {
            let rank = desc.rank();
            let mut half = vec![0; rank];
            half[0] = 1;
            for t in [FiniteTorusPoint::identity(rank), FiniteTorusPoint::new(2, half)] {
                let g = affine_to_graded(&desc, &t).unwrap();
                assert_eq!(check_graded_associativity(&g, &mut rng, 10).unwrap(), 0, "{name}");
                assert!(check_im_involution(&g, &mut rng, 10).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn gl2_symmetrization() {
        let desc = plain(RootDatum::build_classical(Family::A, 1).unwrap(), &[RootParams::equal(1)]).unwrap();
        let s = symmetrize(&desc, &[1, 0]);
        let expected = &HeckeElement::theta(&desc, vec![1, 0]) + &HeckeElement::theta(&desc, vec![0, 1]);
        assert_eq!(s, expected);
        assert!(is_central(&desc, &s).unwrap());
        assert!(!is_central(&desc, &HeckeElement::theta(&desc, vec![1, 0])).unwrap());
    }

    #[test]
    fn twisted_swap_squares_to_minus_one() {
        let desc = swapped_a1_pair(1, true).unwrap();
        let g = HeckeElement::diagram(&desc, 1);
        assert_eq!(desc.multiply(&g, &g).unwrap(), -&HeckeElement::one(&desc));
    }
}
