mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{a2_z2_with_klein_map, b2_with_klein_map, klein_alternating, subgroups_with_maps, test_cocycles};
use twisted_hecke::langlands_pipeline::{assemble, example};
use twisted_hecke::spectra::{count_twisted_irreps, extended_quotient_count, FiniteTorusPoint};
use twisted_hecke::weyl_groups::{Cocycle, FiniteGroup};

const TOL: f64 = 1e-7;

/// Numerical block structure of `C[H, ♮]`: the number of simple factors
/// and their dimensions, read off from the eigenvalue multiplicities of a
/// generic central element acting on the regular representation.
fn numerical_blocks(h: &FiniteGroup, c: &Cocycle, seed: u64) -> Vec<usize> {
    let n = h.order();
    let left = |g: usize| {
        DMatrix::from_fn(n, n, |row, col| if h.mul(g, col) == row { f64::from(c.value(g, col)) } else { 0.0 })
    };
    let right = |g: usize| {
        DMatrix::from_fn(n, n, |row, col| if h.mul(col, g) == row { f64::from(c.value(col, g)) } else { 0.0 })
    };
    // coefficient vectors commuting with every basis element
    let mut system = DMatrix::zeros(n * n, n);
    for g in 0..n {
        let block = right(g) - left(g);
        system.view_mut((g * n, 0), (n, n)).copy_from(&block);
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let null: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] < TOL).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eig = (0..20)
        .find_map(|_| {
            let mut z = DMatrix::zeros(n, n);
            for &i in &null {
                let w: f64 = rand::Rng::gen_range(&mut rng, 0.5..2.0);
                for x in 0..n {
                    z += left(x) * (w * v_t[(i, x)]);
                }
            }
            nalgebra::Schur::try_new(z, 1e-12, 10_000).map(|s| s.complex_eigenvalues())
        })
        .expect("Schur iteration converges for some generic central element");
    let mut clusters: Vec<(nalgebra::Complex<f64>, usize)> = Vec::new();
    for e in eig.iter() {
        match clusters.iter_mut().find(|(c, _)| (c - e).norm() < 1e-5) {
            Some(slot) => slot.1 += 1,
            None => clusters.push((*e, 1)),
        }
    }
    assert_eq!(clusters.len(), null.len(), "generic central element should separate blocks");
    let mut dims: Vec<usize> = clusters
        .iter()
        .map(|&(_, m)| {
            let d = (m as f64).sqrt().round() as usize;
            assert_eq!(d * d, m, "multiplicity {m} is not a square");
            d
        })
        .collect();
    dims.sort_unstable();
    dims
}

#[test]
fn semisimple_decomposition_matches_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let klein = FiniteGroup::abelian(&[2, 2]);
    assert_eq!(numerical_blocks(&klein, &klein_alternating(), 1), vec![2]);
    for (g, hom) in [b2_with_klein_map(), a2_z2_with_klein_map()] {
        let n = g.order();
        for (i, c) in test_cocycles(&g, &hom, &mut rng).into_iter().enumerate() {
            let dims = numerical_blocks(&g, &c, i as u64);
            assert_eq!(dims.len(), count_twisted_irreps(&g, &c));
            assert_eq!(dims.iter().map(|d| d * d).sum::<usize>(), n);
        }
    }
}

#[test]
fn subgroup_counts_have_consistent_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let (g, hom) = b2_with_klein_map();
    for (h, sub_hom) in subgroups_with_maps(&g, &hom) {
        let c = test_cocycles(&h, &sub_hom, &mut rng).swap_remove(1);
        let dims = numerical_blocks(&h, &c, 5);
        assert_eq!(dims.len(), count_twisted_irreps(&h, &c));
        assert_eq!(dims.iter().map(|d| d * d).sum::<usize>(), h.order());
    }
}

fn translate_invariance(name: &str, order: usize, picks: &[usize], shift: usize) {
    let r = assemble(&example(name).unwrap()).unwrap();
    let d = &r.descriptor;
    let g = d.group();
    let all = FiniteTorusPoint::all_of_order_dividing(d.rank(), order);
    let pts: Vec<FiniteTorusPoint> = picks.iter().map(|&i| all[i % all.len()].clone()).collect();
    let u = g.from_flat(shift % g.order());
    let moved: Vec<FiniteTorusPoint> = pts.iter().map(|p| g.act_on_point(u, p)).collect();
    let a = extended_quotient_count(g, d.cocycle(), &pts).unwrap();
    let b = extended_quotient_count(g, d.cocycle(), &moved).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extended_quotient_is_translation_invariant(
        name in prop::sample::select(vec!["sp-iwahori", "so-even-gl", "gl-a2", "sl2"]),
        order in 1usize..5,
        picks in prop::collection::vec(0usize..1000, 0..6),
        shift in 0usize..1000,
    ) {
        translate_invariance(name, order, &picks, shift);
    }
}

#[test]
fn twisted_swap_counts() {
    // A1 x A1 with the factors swapped by a Z/2 carrying a nontrivial cocycle
    use twisted_hecke::hecke_algebras::relations::swapped_a1_pair;
    for twisted in [false, true] {
        let d = swapped_a1_pair(1, twisted).unwrap();
        let pts = FiniteTorusPoint::all_of_order_dividing(d.rank(), 2);
        let q = extended_quotient_count(d.group(), d.cocycle(), &pts).unwrap();
        let plain = extended_quotient_count(d.group(), &Cocycle::trivial(2), &pts).unwrap();
        assert!(q.total <= plain.total);
        assert_eq!(q.orbits.len(), plain.orbits.len());
    }
}
