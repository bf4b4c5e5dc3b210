use adt::capacity::{
    baseline_region, c_no, c_pf, corollary1_holds, interaction_gain, two_way_region, Baseline,
};
use adt::{ChannelConfig, GainClass, Rational, Region};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = ChannelConfig> {
    (0usize..40, 0usize..40, 0usize..40, 0usize..40)
        .prop_map(|(m, n, mt, nt)| ChannelConfig::new(m, n, mt, nt))
}

fn corners_inside(a: &Region, b: &Region) -> bool {
    a.corner_points().iter().all(|p| b.contains(p))
}

proptest! {
    #[test]
    fn feedback_capacity_is_sandwiched(m in 0usize..200, n in 0usize..200) {
        let no: Rational = c_no(m, n);
        let pf: Rational = c_pf(m, n);
        prop_assert!(no <= pf);
        prop_assert!(pf <= Rational::from(m.max(n) as i64));
    }

    #[test]
    fn regions_nest(cfg in config()) {
        let no: Region = baseline_region(&cfg, Baseline::NoFeedback);
        let tw: Region = two_way_region(&cfg);
        let pf: Region = baseline_region(&cfg, Baseline::PerfectFeedback);
        prop_assert!(corners_inside(&no, &tw));
        prop_assert!(corners_inside(&tw, &pf));
        prop_assert!(no.is_subset_of(&tw) && tw.is_subset_of(&pf));
    }

    #[test]
    fn corollary_gives_perfect_feedback(cfg in config()) {
        let both = c_pf::<Rational>(cfg.m, cfg.n) > c_no(cfg.m, cfg.n)
            && c_pf::<Rational>(cfg.mt, cfg.nt) > c_no(cfg.mt, cfg.nt);
        if both && corollary1_holds::<Rational>(&cfg) {
            prop_assert_eq!(interaction_gain::<Rational>(&cfg), GainClass::PerfectFeedbackAchievable);
        }
    }

    #[test]
    fn corollary_regime_one_fits_the_cut_sets(cfg in config()) {
        let low = 3 * cfg.m < 2 * cfg.n;
        if corollary1_holds::<Rational>(&cfg) && low {
            let lhs = Rational::new(2 * cfg.n as i64 + 2 * cfg.mt as i64, 3);
            prop_assert!(lhs <= Rational::from((cfg.m + cfg.mt) as i64));
            prop_assert!(lhs <= Rational::from((cfg.n + cfg.nt) as i64));
        }
    }

    #[test]
    fn classification_is_scale_invariant(cfg in config(), k in 2usize..5) {
        let big = ChannelConfig::new(k * cfg.m, k * cfg.n, k * cfg.mt, k * cfg.nt);
        prop_assert_eq!(interaction_gain::<Rational>(&cfg), interaction_gain::<Rational>(&big));
        prop_assert_eq!(corollary1_holds::<Rational>(&cfg), corollary1_holds::<Rational>(&big));
    }
}

#[test]
fn middle_channels_gain_nothing() {
    for (m, n, mt, nt) in [(1, 1, 1, 1), (2, 3, 3, 2), (4, 5, 5, 4), (3, 2, 2, 3)] {
        let cfg = ChannelConfig::new(m, n, mt, nt);
        assert_eq!(interaction_gain::<Rational>(&cfg), GainClass::NoFeedbackGain, "{cfg}");
    }
}

#[test]
fn known_gain_examples() {
    let pfa = [ChannelConfig::new(1, 2, 2, 1), ChannelConfig::new(1, 2, 1, 0), ChannelConfig::new(1, 2, 4, 2)];
    for cfg in pfa {
        assert!(corollary1_holds::<Rational>(&cfg), "{cfg}");
        assert_eq!(interaction_gain::<Rational>(&cfg), GainClass::PerfectFeedbackAchievable);
    }
    assert_eq!(
        interaction_gain::<Rational>(&ChannelConfig::new(1, 3, 1, 3)),
        GainClass::FeedbackGainNoInteractionGain
    );
}
