mod common;

use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_mori::contract::{birational_contraction, classify, mmp_step, ContractionKind, MmpOutcome};
use toric_mori::fan::{is_complete, is_smooth, validate_fan};
use toric_mori::mori::{
    intersection_number, intersection_sign, verify_extremal_structure, verify_primitive_closure,
    IntersectionSign, MoriAnalysis,
};
use toric_mori::positivity::{line_class_pairing, TorusDivisor};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_fans_are_complete_and_smooth(seed in any::<u64>(), rank in 2usize..=3, steps in 0usize..=4) {
        let fan = common::random_fan(&mut ChaCha8Rng::seed_from_u64(seed), rank, steps);
        prop_assert!(validate_fan(&fan).is_valid());
        prop_assert!(is_smooth(&fan));
        prop_assert!(is_complete(&fan));
        prop_assert!(fan.rays().len() >= rank + 1 + steps);
    }

    #[test]
    fn extremal_relations_satisfy_the_structure_theorems(seed in any::<u64>(), rank in 2usize..=3, steps in 0usize..=4) {
        let fan = common::random_fan(&mut ChaCha8Rng::seed_from_u64(seed), rank, steps);
        let m = common::to_point(&fan);
        let an = MoriAnalysis::new(&m).unwrap();
        prop_assert!(!an.relations.is_empty());
        prop_assert!(an.extremal.witnesses_hold());
        for (i, e) in an.relations.iter().enumerate() {
            let s = verify_extremal_structure(&fan, e);
            prop_assert!(s.passed(), "{:?}", s.violations);
            let p = verify_primitive_closure(&fan, e);
            prop_assert!(p.complete && p.passed(), "{:?}", p.violations);
            prop_assert!(!fan.is_face(&toric_mori::fan::Cone::new(e.xs.clone())));
            // Smooth sources: every a_i is one and D_v . C_R <= 1.
            prop_assert!(e.a.iter().all(One::is_one));
            for v in 0..fan.rays().len() {
                let x = line_class_pairing(&an, i, &TorusDivisor::prime(fan.rays().len(), v)).unwrap();
                prop_assert!(x <= num_rational::BigRational::one());
                for w in &an.extremal.rays[i].walls {
                    let y = intersection_number(&fan, &TorusDivisor::prime(fan.rays().len(), v), w).unwrap();
                    prop_assert_eq!(IntersectionSign::of(&y), intersection_sign(e, v));
                }
            }
        }
    }

    #[test]
    fn birational_contractions_obey_the_dimension_formula(seed in any::<u64>(), steps in 1usize..=4) {
        let fan = common::random_fan(&mut ChaCha8Rng::seed_from_u64(seed), 3, steps);
        let m = common::to_point(&fan);
        let an = MoriAnalysis::new(&m).unwrap();
        for e in &an.relations {
            if classify(e) == ContractionKind::Fano {
                continue;
            }
            let r = birational_contraction(&m, e).unwrap();
            let ex = r.exceptional.unwrap();
            prop_assert_eq!(ex.codim, e.m());
            prop_assert_eq!(ex.dim_image, fan.rank() + 1 - e.l() - e.m());
            prop_assert!(validate_fan(&r.target_fan).is_valid());
            if classify(e) == ContractionKind::Divisorial {
                prop_assert_eq!(r.target_fan.rays().len(), fan.rays().len() - 1);
            }
        }
    }

    #[test]
    fn k_negative_mmp_ends_in_a_fiber_space(seed in any::<u64>(), rank in 2usize..=3, steps in 0usize..=3) {
        let fan = common::random_fan(&mut ChaCha8Rng::seed_from_u64(seed), rank, steps);
        let mut m = common::to_point(&fan);
        for _ in 0..4 * fan.rays().len() {
            let an = MoriAnalysis::new(&m).unwrap();
            let ray = an.relations.iter().position(|e| e.degree_difference().is_positive());
            prop_assert!(ray.is_some(), "no K-negative ray on a complete fan");
            match mmp_step(&m, ray.unwrap()).unwrap() {
                MmpOutcome::MoriFiberSpace(r) => {
                    prop_assert!(r.fiber.is_some());
                    return Ok(());
                }
                MmpOutcome::Continue { morphism, .. } => {
                    prop_assert!(validate_fan(morphism.source()).is_valid());
                    m = morphism;
                }
                MmpOutcome::Halt(_) => prop_assert!(false, "K-negative ray halted"),
            }
        }
        prop_assert!(false, "MMP did not terminate");
    }
}
