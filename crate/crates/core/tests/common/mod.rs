#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use twisted_hecke::root_data::{Family, RootDatum};
use twisted_hecke::weyl_groups::{Cocycle, ExtendedGroup, FiniteGroup, WeylGroup};

pub fn weyl(f: Family, n: usize) -> WeylGroup {
    WeylGroup::enumerate(Arc::new(RootDatum::build_classical(f, n).unwrap())).unwrap()
}

/// `♮(a, b) = (−1)^{a_1 b_2}` on `Z/2 × Z/2`, elements encoded as `a_1 + 2 a_2`.
pub fn klein_alternating() -> Cocycle {
    let g = FiniteGroup::abelian(&[2, 2]);
    let table = (0..4)
        .map(|a| (0..4).map(|b| if a & 1 == 1 && (b >> 1) & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    Cocycle::from_table(table, &g).unwrap()
}

/// `W(B2)` with the homomorphism to the Klein group given by
/// (determinant, parity of sign changes).
pub fn b2_with_klein_map() -> (FiniteGroup, Vec<usize>) {
    let g = ExtendedGroup::plain(weyl(Family::B, 2));
    let hom = g
        .elements()
        .map(|e| {
            let m = g.matrix(e);
            let det = usize::from(g.sign(e) < 0);
            let negs = m.rows().iter().flatten().filter(|&&x| x < 0).count() % 2;
            det + 2 * negs
        })
        .collect();
    (g.finite_group(), hom)
}

/// `W(A2) × Z/2` with the map (sign, projection).
pub fn a2_z2_with_klein_map() -> (FiniteGroup, Vec<usize>) {
    let g = ExtendedGroup::plain(weyl(Family::A, 2));
    let w = g.finite_group();
    let n = w.order();
    let prod = FiniteGroup::direct_product(&w, &FiniteGroup::abelian(&[2]));
    let signs: Vec<usize> = g.elements().map(|e| usize::from(g.sign(e) < 0)).collect();
    let hom = (0..2 * n).map(|x| signs[x % n] + 2 * (x / n)).collect();
    (prod, hom)
}

/// Trivial, pulled-back Klein, and both multiplied by a random coboundary.
pub fn test_cocycles<R: Rng>(h: &FiniteGroup, hom: &[usize], rng: &mut R) -> Vec<Cocycle> {
    let n = h.order();
    let mut f: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    f[0] = 1;
    let cob = Cocycle::coboundary(&f, h);
    let pulled = klein_alternating().pullback(hom);
    let out = vec![Cocycle::trivial(n), pulled.clone(), cob.clone(), pulled.pointwise_product(&cob)];
    for c in &out {
        c.validate(h).unwrap();
    }
    out
}

/// Every subgroup of `g` as (group, elements, restricted hom).
pub fn subgroups_with_maps(g: &FiniteGroup, hom: &[usize]) -> Vec<(FiniteGroup, Vec<usize>)> {
    g.subgroups()
        .into_iter()
        .map(|elems| {
            let h = g.restrict(&elems).unwrap();
            let sub_hom = elems.iter().map(|&e| hom[e]).collect();
            (h, sub_hom)
        })
        .collect()
}
