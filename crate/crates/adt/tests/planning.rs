use std::collections::BTreeMap;

use adt::capacity::{c_pf, corollary1_holds, two_way_region};
use adt::decomposition::{chains, decompose, plan, predicted_rates, validate, Part, SchemePlan, Target};
use adt::schemes::compose::compose;
use adt::simulator::verify;
use adt::{ChannelConfig, Rate, Rational, Region};
use proptest::prelude::*;

fn config(max: usize) -> impl Strategy<Value = ChannelConfig> {
    (0..=max, 0..=max, 0..=max, 0..=max).prop_map(|(m, n, mt, nt)| ChannelConfig::new(m, n, mt, nt))
}

fn target() -> impl Strategy<Value = Target> {
    prop_oneof![Just(Target::FavorForward), Just(Target::FavorBackward), Just(Target::PerfectBoth)]
}

fn line_parts(p: &SchemePlan, fwd: bool) -> BTreeMap<Part, usize> {
    let mut out = BTreeMap::new();
    for pr in &p.pairs {
        if let Some((part, k)) = if fwd { pr.fwd } else { pr.bwd } {
            *out.entry(part).or_default() += k;
        }
    }
    out
}

fn decomposed(m: usize, n: usize) -> BTreeMap<Part, usize> {
    decompose(m, n).parts.into_iter().filter(|&(_, k)| k > 0).collect()
}

#[test]
fn every_small_channel_decomposes() {
    for m in 0..=20 {
        for n in 0..=20 {
            let d = decompose(m, n);
            assert!(validate(&d, m, n), "({m},{n}) -> {d}");
            let mut from_chains: BTreeMap<Part, usize> = BTreeMap::new();
            for (p, _) in chains(m, n) {
                *from_chains.entry(p).or_default() += 1;
            }
            assert_eq!(from_chains, decomposed(m, n), "({m},{n})");
        }
    }
}

proptest! {
    #[test]
    fn plans_stay_inside_the_region(cfg in config(24), t in target()) {
        let p = plan(cfg, t);
        let region: Region = two_way_region(&cfg);
        prop_assert!(region.contains(&p.predicted));
        prop_assert!(region.contains(&predicted_rates(&p)));
        if !p.pairs.is_empty() {
            prop_assert_eq!(predicted_rates(&p), p.predicted.clone());
        }
    }

    #[test]
    fn emitted_lines_meet_side_conditions(cfg in config(24), t in target()) {
        let p = plan(cfg, t);
        for pr in &p.pairs {
            prop_assert!(pr.side_condition(), "{:?}", pr);
        }
        if p.executable {
            prop_assert!(p.pairs.iter().all(|pr| pr.executable()));
        }
    }

    #[test]
    fn lines_use_each_part_once(cfg in config(24), t in target()) {
        let p = plan(cfg, t);
        if !p.pairs.is_empty() {
            prop_assert_eq!(line_parts(&p, true), decomposed(cfg.m, cfg.n));
            prop_assert_eq!(line_parts(&p, false), decomposed(cfg.mt, cfg.nt));
        }
    }

    #[test]
    fn corollary_plans_hit_perfect_feedback(cfg in config(24)) {
        if corollary1_holds::<Rational>(&cfg) {
            let p = plan(cfg, Target::PerfectBoth);
            let pf: Rate = Rate::new(c_pf(cfg.m, cfg.n), c_pf(cfg.mt, cfg.nt));
            prop_assert_eq!(p.predicted, pf);
        }
    }

    #[test]
    fn plans_round_trip_through_text(cfg in config(24), t in target()) {
        let p = plan(cfg, t);
        prop_assert_eq!(SchemePlan::parse(&p.serialize()).unwrap(), p);
    }
}

#[test]
fn executable_plans_compose_and_verify() {
    let mut ran = 0;
    for m in 0..=3 {
        for n in 0..=3 {
            for mt in 0..=3 {
                for nt in 0..=3 {
                    let cfg = ChannelConfig::new(m, n, mt, nt);
                    for t in [Target::FavorForward, Target::FavorBackward, Target::PerfectBoth] {
                        let p = plan(cfg, t);
                        if !p.executable {
                            continue;
                        }
                        let s = compose(&p).unwrap_or_else(|e| panic!("{cfg} {t}: {e}"));
                        let r = verify(&s, 1);
                        assert!(r.passed, "{cfg} {t}\n{r}");
                        assert_eq!(r.achieved, p.finite, "{cfg} {t}");
                        ran += 1;
                    }
                }
            }
        }
    }
    assert!(ran > 100, "only {ran} executable plans");
}
