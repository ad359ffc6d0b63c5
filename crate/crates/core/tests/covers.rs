mod common;

use cover_kit::builder::{build_cover, BuildOptions};
use cover_kit::flags::{flags_at, i_fundamental_domain};
use cover_kit::instances::{develop_euclidean, make_quotient, Affine, QuotientSpec};
use cover_kit::local::PeripheralSpace;
use cover_kit::tessellation::generate;
use cover_kit::verify::{check_cover, check_normality, check_uniqueness, NormalityOptions};
use cover_kit::Error;

#[test]
fn truncated_square_covers_its_torus() {
    let g = common::truncated_square_patch(6);
    let d = i_fundamental_domain(&g, 1).unwrap();
    let h = common::truncated_square_torus(4, 5);
    let space = PeripheralSpace::new(&h, 8);
    let c = build_cover(&g, &space, &d, None, BuildOptions::default()).unwrap();
    assert!(c.surjective);
    assert!(check_cover(&g, &h, &c, 1).ok);
    let options = NormalityOptions {
        samples: 20,
        rng_seed: 3,
        exhaustive: false,
    };
    let normal = check_normality(&g, Some(&space), &c, &d, options).unwrap();
    assert!(normal.ok, "{normal:?}");
    assert_eq!(normal.deck.len(), 20);
    let again = check_uniqueness(&g, &space, &d, &c.seed, BuildOptions::default(), 2).unwrap();
    assert!(again.ok);
}

#[test]
fn wrong_colour_seed_is_refused() {
    let g = common::truncated_square_patch(6);
    let d = i_fundamental_domain(&g, 1).unwrap();
    let f = flags_at(&g, g.root).unwrap();
    let i = d.color_of_root_flag.iter().position(|&c| c == 0).unwrap();
    let j = d.color_of_root_flag.iter().position(|&c| c != 0).unwrap();
    let seed_ok = build_cover(&g, &g, &d, Some((f[i].clone(), f[i].clone())), BuildOptions::default());
    assert!(seed_ok.is_ok());
    let bad = build_cover(&g, &g, &d, Some((f[i].clone(), f[j].clone())), BuildOptions::default());
    assert!(matches!(bad, Err(Error::Precondition(_))), "{bad:?}");
}

#[test]
fn twisted_torus_cover_matches_its_deck_group() {
    let spec = QuotientSpec::twisted_torus(6, 7, 2);
    let q = make_quotient(spec).unwrap();
    let g = generate(4, 4, 10).unwrap();
    let d = i_fundamental_domain(&g, 1).unwrap();
    let space = PeripheralSpace::new(&q.graph, 4);
    let c = build_cover(&g, &space, &d, None, BuildOptions::default()).unwrap();
    assert!(c.surjective);
    assert!(check_cover(&g, &q.graph, &c, 1).ok);
    let dev = develop_euclidean(&g).unwrap();
    let sigma = spec.alignment(&dev, &c.vertex_map).expect("cover is a lattice projection");
    let options = NormalityOptions {
        samples: 12,
        rng_seed: 9,
        exhaustive: false,
    };
    let normal = check_normality(&g, Some(&space), &c, &d, options).unwrap();
    assert!(normal.ok);
    for w in &normal.deck {
        let a = dev.as_affine(&w.alpha).expect("lattice isometry");
        let conj = sigma.compose(&a).compose(&sigma.inverse());
        assert!(conj.is_translation());
        assert!(spec.is_deck(&conj), "{conj:?}");
    }
    assert!(!spec.is_deck(&Affine::translation((0, 7))));
}

#[test]
fn rewired_torus_halts_with_a_violation() {
    let g = generate(4, 4, 10).unwrap();
    let d = i_fundamental_domain(&g, 1).unwrap();
    let h = common::rewired_torus();
    let space = PeripheralSpace::new(&h, 4);
    match build_cover(&g, &space, &d, None, BuildOptions::default()) {
        Err(Error::HypothesisViolation { .. }) => {}
        other => panic!("expected a hypothesis violation, got {other:?}"),
    }
}

#[test]
fn hexagons_cannot_cover_a_square_torus() {
    let g = generate(6, 3, 6).unwrap();
    let d = i_fundamental_domain(&g, 1).unwrap();
    let h = common::grid_torus(6, 7);
    let space = PeripheralSpace::new(&h, 6);
    let err = build_cover(&g, &space, &d, None, BuildOptions::default()).unwrap_err();
    assert!(
        matches!(err, Error::Precondition(_) | Error::HypothesisViolation { .. } | Error::NotLocallyG { .. }),
        "{err}"
    );
}

#[test]
fn hyperbolic_self_cover_is_the_identity() {
    let g = generate(4, 5, 5).unwrap();
    let d = i_fundamental_domain(&g, 1).unwrap();
    let f = d.flags[0].clone();
    let c = build_cover(&g, &g, &d, Some((f.clone(), f)), BuildOptions::default()).unwrap();
    assert!(c.vertex_map.iter().all(|(a, b)| a == b));
    assert!(c.steps > 20);
    assert!(check_cover(&g, &g.graph, &c, 1).ok);
}
