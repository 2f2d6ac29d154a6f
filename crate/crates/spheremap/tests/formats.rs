use proptest::prelude::*;
use spheremap::formats::{BundleDoc, PolyDoc};
use spheremap_core::scalar::rat;
use spheremap_core::wilson::FlatBundle;
use spheremap_core::{GaussianRational, MultiPoly, Rational};

fn rational() -> impl Strategy<Value = Rational> + Clone {
    (-1000i64..=1000, 1i64..=97).prop_map(|(n, d)| rat(n, d))
}

fn poly<C: std::fmt::Debug + 'static>(
    coeff: impl Strategy<Value = C> + Clone,
) -> impl Strategy<Value = (usize, Vec<(Vec<u16>, C)>)> {
    (1usize..=5).prop_flat_map(move |n| {
        (Just(n), prop::collection::vec((prop::collection::vec(0u16..4, n), coeff.clone()), 0..8))
    })
}

proptest! {
    #[test]
    fn rational_poly_round_trips((n, terms) in poly(rational())) {
        let p = MultiPoly::from_terms(n, terms).unwrap();
        let doc = PolyDoc::from_poly(&p);
        let text = serde_json::to_string(&doc).unwrap();
        let back: PolyDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_poly::<Rational>().unwrap(), p);
    }

    #[test]
    fn gaussian_poly_round_trips((n, terms) in poly((rational(), rational()).prop_map(|(a, b)| GaussianRational::new(a, b)))) {
        let p = MultiPoly::from_terms(n, terms).unwrap();
        let back: PolyDoc = serde_json::from_str(&serde_json::to_string(&PolyDoc::from_poly(&p)).unwrap()).unwrap();
        prop_assert_eq!(back.to_poly::<GaussianRational>().unwrap(), p);
    }

    #[test]
    fn bundle_round_trips(rank in 1usize..=3, seed in any::<u64>()) {
        let b = FlatBundle::random_unitary(2, rank, seed);
        let doc = BundleDoc::from(&b);
        let back: BundleDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back.to_bundle().unwrap(), b);
    }
}
