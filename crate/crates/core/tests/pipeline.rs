use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twisted_hecke::hecke_algebras::relations::{random_vectors, run_suite};
use twisted_hecke::hecke_algebras::{AffineDescriptor, HeckeElement};
use twisted_hecke::langlands_pipeline::{assemble, example, validate, InertialDatum, EXAMPLES};

/// Associativity on triples of generators and their short products.
fn generator_associativity(d: &AffineDescriptor, rng: &mut ChaCha8Rng) {
    let mut gens: Vec<HeckeElement> = (0..d.num_simple()).map(|k| HeckeElement::simple(d, k)).collect();
    for x in random_vectors(rng, d.rank(), 3, 2) {
        gens.push(HeckeElement::theta(d, x));
    }
    let n = gens.len();
    for i in 0..n {
        let next = d.multiply(&gens[i], &gens[(i + 1) % n]).unwrap();
        gens.push(next);
    }
    for _ in 0..40 {
        let pick = |rng: &mut ChaCha8Rng| gens[rng.gen_range(0..gens.len())].clone();
        let (a, b, c) = (pick(rng), pick(rng), pick(rng));
        let left = d.multiply(&d.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = d.multiply(&a, &d.multiply(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn every_example_passes_the_relation_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (name, _) in EXAMPLES {
        let r = assemble(&example(name).unwrap()).unwrap();
        let d = &r.descriptor;
        // random elements of the rank-5 example have long words; associativity
        // is fuzzed on the smaller descriptors only
        let triples = if d.num_simple() > 3 { 0 } else { 20 };
        let xs = random_vectors(&mut rng, d.rank(), 6, 2);
        for c in run_suite(name, d, &mut rng, &xs, triples).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        if triples == 0 {
            generator_associativity(d, &mut rng);
        }
        assert_eq!(r.group_order, d.group().order());
        assert_eq!(r.simple_roots.len(), d.num_simple());
    }
}

#[test]
fn json_roundtrip_of_examples() {
    for (name, _) in EXAMPLES {
        let d = example(name).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(InertialDatum::from_json(&text).unwrap(), d, "{name}");
    }
}

#[test]
fn validation_rejects_bad_data() {
    let cases = [
        (r#"{"group": {"family": "Sp", "n": 1}, "blocks": [{"side": "S", "dim": 1, "e": 1, "ell": 5, "torsion": 1}]}"#, "d(d+1)"),
        (r#"{"group": {"family": "GL", "n": 4}, "blocks": [{"side": "GL", "dim": 1, "e": 3, "torsion": 1}]}"#, "rank mismatch"),
        (r#"{"group": {"family": "SL", "n": 2}, "blocks": [{"side": "GL", "dim": 1, "e": 2, "torsion": 1}]}"#, "sl_rgroup"),
        (r#"{"group": {"family": "GL", "n": 2}, "blocks": [{"side": "GL", "dim": 1, "e": 2, "torsion": 1}], "sl_rgroup": {"generators": []}}"#, "only allowed"),
        (r#"{"group": {"family": "GL", "n": 2, "division_degree": 2}, "blocks": [{"side": "GL", "dim": 2, "e": 1, "d": 2, "torsion": 1}]}"#, "not cuspidal"),
        (r#"{"group": {"family": "Sp", "n": 1}, "blocks": [{"side": "O", "dim": 0, "e": 1, "ell": 1, "torsion": 0}]}"#, "dim must be positive"),
    ];
    for (json, needle) in cases {
        let d = InertialDatum::from_json(json).unwrap();
        let err = validate(&d).unwrap_err().to_string();
        assert!(err.contains(needle), "{json}: {err}");
    }
    assert!(InertialDatum::from_json(r#"{"group": {"family": "Sp", "n": 1, "rank": 2}, "blocks": []}"#).is_err());
}

#[test]
fn sl_with_rgroup_generator() {
    // SL3 from three rank-one blocks; the cyclic shift of coordinates
    let json = r#"{"group": {"family": "SL", "n": 3},
        "blocks": [{"side": "GL", "dim": 1, "e": 3, "torsion": 1}],
        "sl_rgroup": {"generators": [{"label": "c", "order": 3, "permutation": [1, 2, 0],
                                      "translation": ["1/3", "1/3", "1/3"]}]}}"#;
    let d = InertialDatum::from_json(json).unwrap();
    // a cyclic shift does not preserve the positive system of A2
    assert!(assemble(&d).is_err());
    let plain = InertialDatum::from_json(
        r#"{"group": {"family": "SL", "n": 3},
            "blocks": [{"side": "GL", "dim": 1, "e": 3, "torsion": 1}],
            "sl_rgroup": {"generators": []}}"#,
    )
    .unwrap();
    let r = assemble(&plain).unwrap();
    assert_eq!((r.lattice_rank, r.weyl_order, r.root_system.as_str()), (2, 6, "A2"));

    // SL2 with an R-group acting by the translation t ↦ −t on the quotient torus
    let sl2 = InertialDatum::from_json(
        r#"{"group": {"family": "SL", "n": 2},
            "blocks": [{"side": "GL", "dim": 1, "e": 2, "torsion": 1}],
            "sl_rgroup": {"generators": [{"label": "g", "order": 2, "translation": ["1/2", "0"]}]}}"#,
    )
    .unwrap();
    let r = assemble(&sl2).unwrap();
    assert_eq!((r.rgroup_order, r.group_order), (2, 4));
    let d = &r.descriptor;
    let pts = twisted_hecke::spectra::FiniteTorusPoint::all_of_order_dividing(1, 2);
    let q = twisted_hecke::spectra::extended_quotient_count(d.group(), d.cocycle(), &pts).unwrap();
    assert_eq!((q.orbits.len(), q.total), (1, 2));
}

fn classical_datum(blocks: &[(u8, i64, i64, usize, usize)]) -> Option<InertialDatum> {
    // (side, dim, e, d for ℓ, partner d); accounting fixes n for Sp
    let mut total = 0;
    let mut js = Vec::new();
    for &(side, dim, e, d, pd) in blocks {
        let (s, ell, pell) = match side {
            0 => ("S", (d * (d + 1)) as i64, (pd * (pd + 1)) as i64),
            1 => ("O", (d * d) as i64, (pd * pd) as i64),
            _ => ("GL", 0, 0),
        };
        if side == 2 {
            total += 2 * e * dim;
            js.push(serde_json::json!({"side": s, "dim": dim, "e": e, "torsion": 1}));
        } else {
            total += dim * (2 * e + ell + pell);
            js.push(serde_json::json!({"side": s, "dim": dim, "e": e, "ell": ell, "partner_ell": pell, "torsion": 2}));
        }
    }
    if total % 2 == 0 {
        return None;
    }
    let json = serde_json::json!({"group": {"family": "Sp", "n": (total - 1) / 2}, "blocks": js});
    InertialDatum::from_json(&json.to_string()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn assembly_ignores_block_order(
        blocks in prop::collection::vec((0u8..3, 1i64..3, 0i64..3, 0usize..3, 0usize..2), 1..4),
        seed in any::<u64>(),
    ) {
        let Some(d) = classical_datum(&blocks) else { return Ok(()); };
        let Ok(r) = assemble(&d) else { return Ok(()); };
        let mut shuffled = d.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(shuffled.blocks.as_mut_slice(), &mut rng);
        let s = assemble(&shuffled).unwrap();
        prop_assert_eq!(r.to_json(), s.to_json());
        // Weyl order is the product over blocks
        let prod: usize = r.blocks.iter().map(|b| b.weyl_order).product();
        prop_assert_eq!(prod, r.weyl_order);
        let rg: usize = r.blocks.iter().map(|b| b.extended_weyl_order / b.weyl_order).product();
        prop_assert_eq!(rg, r.rgroup_order);
    }
}
