mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surfclass::minimal::{find_minus_one_lines, minimal_model, MinimalType};
use surfclass::picard::{blowup_chart_transition, cocycle_at, make_base, BaseSurface, RationalSurface};

fn check_conserved(s: &RationalSurface) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.k_squared() + s.rank() as i64, 10);
    let sig = s.signature();
    prop_assert_eq!((sig.positive, sig.negative, sig.zero), (1, s.rank() - 1, 0));
    prop_assert_eq!(s.topological_model().b2, s.rank());
    prop_assert_eq!(s.euler_characteristic_cx(), s.rank() as i64 + 2);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scripts_conserve_lattice_invariants(seed in any::<u64>()) {
        let history = common::random_script(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        for s in &history {
            check_conserved(s)?;
        }
        let last = history.last().unwrap();
        let report = minimal_model(last).unwrap();
        prop_assert!(report.steps.len() < last.rank());
        prop_assert_eq!(
            last.euler_characteristic_cx(),
            report.final_surface.euler_characteristic_cx() + report.steps.len() as i64
        );
        prop_assert_eq!(report.final_surface.rank() + report.steps.len(), last.rank());
        prop_assert!(find_minus_one_lines(&report.final_surface).is_empty());
    }

    #[test]
    fn pushforward_preserves_pairings(seed in any::<u64>()) {
        let history = common::random_script(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let s = history.last().unwrap();
        for name in find_minus_one_lines(s) {
            let c = s.line(&name).unwrap().clone();
            let down = s.blow_down(&name).unwrap();
            for (l, lc) in s.lines() {
                for (m, mc) in s.lines() {
                    let (Ok(l2), Ok(m2)) = (down.line(l), down.line(m)) else { continue };
                    let lhs = down.intersect(l2, m2).unwrap();
                    let lc_c = s.intersect(lc, &c).unwrap();
                    let mc_c = s.intersect(mc, &c).unwrap();
                    prop_assert_eq!(lhs, s.intersect(lc, mc).unwrap() + lc_c * mc_c);
                }
            }
        }
    }

    #[test]
    fn blow_down_undoes_generic_blow_up(seed in any::<u64>()) {
        let history = common::random_script(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let s = history.last().unwrap();
        let up = s.blow_up(&[]).unwrap();
        let fresh = up.lines().last().unwrap().0.to_string();
        let back = up.blow_down(&fresh).unwrap();
        prop_assert_eq!(back.gram(), s.gram());
        prop_assert_eq!(back.canonical(), s.canonical());
        for (name, class) in s.lines() {
            prop_assert_eq!(back.line(name).unwrap(), class);
        }
    }

    #[test]
    fn chart_multiplier_matches_cocycle(re in -50.0f64..50.0, im in -50.0f64..50.0) {
        prop_assume!(re.abs() + im.abs() > 1e-6);
        let t = Complex64::new(re, im);
        let u = Complex64::new(1.5, -0.5);
        let (_, v) = blowup_chart_transition(t, u).unwrap();
        let expected = cocycle_at(-1, t).unwrap();
        prop_assert!((v / u - expected).norm() <= 1e-12 * expected.norm());
        let inverse = cocycle_at(1, t).unwrap() * cocycle_at(-1, t).unwrap();
        prop_assert!((inverse - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }
}

#[test]
fn generic_round_trip_recovers_minimal_bases() {
    // S1 is excluded: its section is itself a −1 line, so it is not minimal
    let cases = std::iter::once((BaseSurface::CP2, MinimalType::CP2)).chain(
        [0, 2, 3, 4, 5].map(|n| (BaseSurface::Hirzebruch(n), MinimalType::Hirzebruch(n))),
    );
    for (base, expected) in cases {
        for k in 0..=6 {
            let report = minimal_model(&common::generic_blowups(base, k)).unwrap();
            assert_eq!(report.final_type, expected, "{base} with {k} blow-ups");
            assert_eq!(report.steps.len(), k);
        }
    }
}

#[test]
fn hirzebruch_one_reduces_to_the_plane() {
    for k in 0..=6 {
        let report = minimal_model(&common::generic_blowups(BaseSurface::Hirzebruch(1), k)).unwrap();
        assert_eq!(report.final_type, MinimalType::CP2);
        assert_eq!(report.steps[0].name, "S");
    }
    assert_eq!(make_base(BaseSurface::Hirzebruch(1)).self_intersection("S").unwrap(), -1);
}
