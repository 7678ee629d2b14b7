use proptest::prelude::*;
use rnla::sampling::{draw_plan, uniform_probs};
use rnla::srht::{fwht, make_srht, subsampled_fwht, subsampled_op_bound};
use rnla::{OpCounter, ProbKind, ProbVector, Side};

/// Upper 1e-6 tail of the chi-square distribution with 7 degrees of freedom.
const CHI2_7_UPPER_1E6: f64 = 40.521831234179864;

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter("positive total", |w| w.iter().sum::<f64>() > 1e-3)
}

#[test]
fn chi_square_goodness_of_fit() {
    let w = [0.05, 0.3, 0.1, 0.15, 0.02, 0.08, 0.2, 0.1];
    let probs = ProbVector::from_weights(&w, ProbKind::Custom).unwrap();
    let c = 100_000;
    for seed in [0u64, 1, 2, 99] {
        let plan = draw_plan(&probs, c, seed).unwrap();
        let mut counts = [0usize; 8];
        for &i in &plan.indices {
            counts[i] += 1;
        }
        let stat: f64 = counts
            .iter()
            .zip(probs.probs())
            .map(|(&o, &p)| {
                let e = p * c as f64;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        assert!(stat < CHI2_7_UPPER_1E6, "seed {seed}: chi-square {stat}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plans_are_deterministic(w in weights(9), c in 1usize..50, seed in any::<u64>()) {
        let probs = ProbVector::from_weights(&w, ProbKind::Custom).unwrap();
        prop_assert_eq!(draw_plan(&probs, c, seed).unwrap(), draw_plan(&probs, c, seed).unwrap());
    }

    #[test]
    fn plans_avoid_zero_probabilities(w in weights(9), seed in any::<u64>()) {
        let probs = ProbVector::from_weights(&w, ProbKind::Custom).unwrap();
        let plan = draw_plan(&probs, 200, seed).unwrap();
        for (&i, &s) in plan.indices.iter().zip(&plan.scales) {
            prop_assert!(probs.probs()[i] > 0.0);
            prop_assert!((s - 1.0 / (200.0 * probs.probs()[i]).sqrt()).abs() <= 1e-12 * s);
        }
    }

    #[test]
    fn subsampled_transform_matches_full(log_n in 0u32..9, r in 1usize..40, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let x: Vec<f64> = (0..n).map(|i| ((i as u64).wrapping_mul(seed | 1) % 97) as f64 - 48.0).collect();
        let plan = draw_plan(&uniform_probs(n).unwrap(), r, seed).unwrap();
        let mut counter = OpCounter::new();
        let sub = subsampled_fwht(&x, &plan, &mut counter).unwrap();
        let full = fwht(&x, &mut OpCounter::new()).unwrap();
        for ((&i, &s), v) in plan.indices.iter().zip(&plan.scales).zip(&sub) {
            prop_assert!((s * full[i] - v).abs() <= 1e-12 * (1.0 + (s * full[i]).abs()) * 100.0);
        }
        prop_assert!(counter.adds_subs as f64 <= subsampled_op_bound(n, r));
    }

    #[test]
    fn srht_operator_shape(n in 1usize..70, r in 1usize..20, seed in any::<u64>()) {
        let op = make_srht(n, r, seed, Side::Left).unwrap();
        prop_assert_eq!(op.n_pad(), n.next_power_of_two());
        prop_assert_eq!(op.signs().len(), op.n_pad());
        prop_assert_eq!(op.r(), r);
        prop_assert_eq!(op.clone(), make_srht(n, r, seed, Side::Left).unwrap());
    }
}
