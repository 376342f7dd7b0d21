use leggett::derivation::derivation_trace;
use leggett::hv::{malus_product_joint, MalusProductModel};
use leggett::inequality::{check_distribution, leggett_bounds, summarize};
use leggett::quantum::{born_joint, random_pure_state};
use leggett::{BigRational, Cell, JointDistribution, Kind, Probability, SettingPair};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn lattice_point() -> impl Strategy<Value = JointDistribution<BigRational>> {
    (1i64..=500, prop::array::uniform3(0i64..=500)).prop_map(|(denominator, raw)| {
        let mut bars = [raw[0] % (denominator + 1), raw[1] % (denominator + 1), raw[2] % (denominator + 1)];
        bars.sort_unstable();
        let parts = [bars[0], bars[1] - bars[0], bars[2] - bars[1], denominator - bars[2]];
        JointDistribution::from_ratios(parts.map(|k| (k, denominator))).unwrap()
    })
}

fn float_point() -> impl Strategy<Value = JointDistribution<f64>> {
    prop::array::uniform4(0.0f64..1.0).prop_filter("non-degenerate", |w| w.iter().sum::<f64>() > 1e-3).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let [a, b, c, d] = w.map(|x| x / total);
        JointDistribution::new(a, b, c, d).unwrap()
    })
}

fn four(p: &BigRational) -> BigRational {
    BigRational::from_int(4) * p
}

proptest! {
    #[test]
    fn exact_distributions_satisfy_both_bounds(p in lattice_point()) {
        let r = check_distribution(&p).unwrap();
        prop_assert!(r.satisfied);
        prop_assert!(!r.upper_slack.is_negative());
        prop_assert!(!r.lower_slack.is_negative());
    }

    #[test]
    fn slacks_equal_four_times_witness_probability(p in lattice_point()) {
        let r = check_distribution(&p).unwrap();
        let s = &r.summary;
        let upper = if s.mean_a >= s.mean_b { Cell::MinusPlus } else { Cell::PlusMinus };
        let lower = if (s.mean_a.clone() + s.mean_b.clone()) >= BigRational::zero() { Cell::MinusMinus } else { Cell::PlusPlus };
        prop_assert_eq!(&r.upper_slack, &four(p.get(upper)));
        prop_assert_eq!(&r.lower_slack, &four(p.get(lower)));
    }

    #[test]
    fn correlator_paths_agree_exactly(p in lattice_point()) {
        let direct = p.pp() - p.pm() - p.mp() + p.mm();
        let s = summarize(&p).unwrap();
        prop_assert_eq!(&s.corr, &direct);
        let one = BigRational::from_int(1);
        let two = BigRational::from_int(2);
        prop_assert_eq!(&direct, &(one.clone() - two.clone() * p.pm() - two.clone() * p.mp()));
        prop_assert_eq!(&direct, &(-one + two.clone() * p.pp() + two * p.mm()));
    }

    #[test]
    fn upper_bound_never_below_lower_bound(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        let (upper, lower) = leggett_bounds(&a, &b).unwrap();
        prop_assert!(upper >= lower - 1e-15);
        prop_assert!(upper <= 1.0 + 1e-15 && lower >= -1.0 - 1e-15);
    }

    #[test]
    fn trace_steps_are_consistent(p in lattice_point()) {
        let t = derivation_trace(&p).unwrap();
        for step in &t.steps {
            if step.label.is_identity() {
                prop_assert!(step.slack.is_zero(), "{:?}", step.label);
            } else {
                prop_assert!(!step.slack.is_negative(), "{:?}", step.label);
            }
        }
    }

    #[test]
    fn float_summaries_stay_in_range(p in float_point()) {
        let r = check_distribution(&p).unwrap();
        let s = &r.summary;
        for v in [s.mean_a, s.mean_b, s.corr] {
            prop_assert!(v.abs() <= 1.0 + 1e-12);
        }
        prop_assert!(r.min_slack() >= -1e-12);
    }

    #[test]
    fn quantum_states_never_violate(seed in any::<u64>(), a in 0.0f64..6.3, b in 0.0f64..6.3, spin in any::<bool>()) {
        let kind = if spin { Kind::Spin } else { Kind::Photon };
        let state = random_pure_state(seed, kind);
        let r = check_distribution(&born_joint(&state, SettingPair::new(a, b).unwrap()).unwrap()).unwrap();
        prop_assert!(r.satisfied);
        prop_assert!(r.min_slack() >= -1e-9);
    }

    #[test]
    fn malus_product_is_a_valid_distribution(u in 0.0f64..6.3, v in 0.0f64..6.3, a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let model = MalusProductModel::new(u, v, Kind::Photon).unwrap();
        let p = malus_product_joint(&model, SettingPair::new(a, b).unwrap()).unwrap();
        let s = summarize(&p).unwrap();
        prop_assert!((s.corr - s.mean_a * s.mean_b).abs() <= 1e-12);
        prop_assert!(check_distribution(&p).unwrap().satisfied);
    }
}
