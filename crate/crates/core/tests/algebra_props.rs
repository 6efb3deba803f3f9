mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surfclass::algebra::{connected_sum_type, connected_sum_words};
use surfclass::rewrite::normalize;
use surfclass::word::SurfaceType;

fn types_up_to(n: u32) -> Vec<SurfaceType> {
    let mut out = vec![SurfaceType::Sphere];
    for k in 1..=n {
        out.push(SurfaceType::Orientable { genus: k });
        out.push(SurfaceType::NonOrientable { crosscaps: k });
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn connected_sum_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_word(&mut rng, 6);
        let b = common::random_word(&mut rng, 6);
        let ta = normalize(&a).unwrap().surface_type;
        let tb = normalize(&b).unwrap().surface_type;
        let sum = connected_sum_words(&a, &b);
        let t = normalize(&sum).unwrap().surface_type;
        prop_assert_eq!(t, connected_sum_type(ta, tb));
        prop_assert_eq!(t.euler(), ta.euler() + tb.euler() - 2);
        prop_assert_eq!(sum.euler_characteristic(), a.euler_characteristic() + b.euler_characteristic() - 2);
    }
}

#[test]
fn type_sum_is_a_commutative_monoid() {
    let ts = types_up_to(5);
    for &a in &ts {
        assert_eq!(connected_sum_type(a, SurfaceType::Sphere), a);
        assert_eq!(connected_sum_type(SurfaceType::Sphere, a), a);
        for &b in &ts {
            assert_eq!(connected_sum_type(a, b), connected_sum_type(b, a));
            for &c in &ts {
                assert_eq!(
                    connected_sum_type(connected_sum_type(a, b), c),
                    connected_sum_type(a, connected_sum_type(b, c))
                );
            }
        }
    }
}
