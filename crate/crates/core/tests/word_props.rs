mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfclass::rewrite::normalize;
use surfclass::word::{
    canonical_word, glue_polygons, Letter, PolygonSet, SurfaceType, Word,
};

/// Splits a random word into consecutive chunks, pairing each chunk with a
/// fresh diagonal so the pieces stay connected.
fn random_polygon_set(seed: u64) -> PolygonSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = common::random_word(&mut rng, 6);
    let mut letters: Vec<Letter> = word.letters().to_vec();
    let pieces = rng.gen_range(1..=3usize).min(letters.len());
    let mut polygons: Vec<Vec<Letter>> = Vec::new();
    let mut diag = 0;
    while polygons.len() + 1 < pieces && letters.len() > 1 {
        let take = rng.gen_range(1..letters.len());
        let mut head: Vec<Letter> = letters.drain(..take).collect();
        let d = format!("d{diag}");
        diag += 1;
        head.push(Letter::pos(d.as_str()));
        letters.insert(0, Letter::neg(d.as_str()));
        polygons.push(head);
    }
    polygons.push(letters);
    polygons.shuffle(&mut rng);
    PolygonSet::new(polygons.into_iter().map(|p| Word::new(p).unwrap()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn gluing_preserves_complex_invariants(seed in any::<u64>()) {
        let set = random_polygon_set(seed);
        let merged = glue_polygons(&set).unwrap();
        prop_assert_eq!(merged.euler_characteristic(), set.euler_characteristic());
        prop_assert_eq!(merged.is_orientable(), set.is_orientable());
    }

    #[test]
    fn classification_paths_agree(seed in any::<u64>()) {
        let word = common::random_word(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        prop_assert_eq!(
            normalize(&word).unwrap().surface_type,
            word.classify_by_invariants().unwrap()
        );
        prop_assert!(word.euler_characteristic() <= 2);
    }
}

#[test]
fn canonical_words_have_defining_invariants() {
    for k in 1..=10 {
        for t in [
            SurfaceType::Orientable { genus: k },
            SurfaceType::NonOrientable { crosscaps: k },
        ] {
            let w = canonical_word(t);
            assert_eq!(w.euler_characteristic(), t.euler());
            assert_eq!(w.is_orientable(), t.is_orientable());
            assert_eq!(w.classify_by_invariants().unwrap(), t);
        }
    }
    let s = canonical_word(SurfaceType::Sphere);
    assert_eq!(s.euler_characteristic(), 2);
    assert!(s.is_orientable());
}

#[test]
fn two_bigons_glue_to_a_sphere() {
    let set = PolygonSet::parse("a b\na' b'\n").unwrap();
    assert_eq!(set.euler_characteristic(), 2);
    let merged = glue_polygons(&set).unwrap();
    assert_eq!(normalize(&merged).unwrap().surface_type, SurfaceType::Sphere);
}
