//! Gain-class sweeps over the ratio plane `(alpha, alpha~)` at fixed `gamma`.

use std::fmt::Write as _;

use adt::capacity::{corollary1_holds, interaction_gain};
use adt::{ChannelConfig, GainClass, Rational};
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRecord {
    pub alpha: Rational,
    pub alpha_t: Rational,
    pub gamma: Rational,
    /// `None` marks a point with no integer realization.
    pub config: Option<ChannelConfig>,
    pub gain_class: Option<GainClass>,
    pub corollary1: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
}

/// Smallest integer levels with the given ratios, times `scale`.
/// `m = alpha n`, `n~ = gamma n`, `m~ = alpha~ n~`.
pub fn realize(alpha: Rational, alpha_t: Rational, gamma: Rational, scale: usize) -> Option<ChannelConfig> {
    let neg = |r: &Rational| *r.numer() < 0;
    if scale == 0 || gamma == Rational::from(0) || neg(&alpha) || neg(&alpha_t) || neg(&gamma) {
        return None;
    }
    let den = alpha
        .denom()
        .lcm(gamma.denom())
        .lcm((alpha_t * gamma).denom());
    let n = Rational::from(den * scale as i64);
    let lv = |r: Rational| usize::try_from(r.to_integer()).ok();
    let nt = gamma * n;
    Some(ChannelConfig::new(lv(alpha * n)?, lv(n)?, lv(alpha_t * nt)?, lv(nt)?))
}

/// Grid `0, step, 2 step, ..` up to `max` on both axes, rows by `alpha`.
pub fn sweep(gamma: Rational, step: Rational, max: Rational, scale: usize) -> Vec<SweepRecord> {
    assert!(step > Rational::from(0), "grid step must be positive");
    let mut axis = Vec::new();
    let mut x = Rational::from(0);
    while x <= max {
        axis.push(x);
        x += step;
    }
    let mut out = Vec::with_capacity(axis.len() * axis.len());
    for &alpha in &axis {
        for &alpha_t in &axis {
            let config = realize(alpha, alpha_t, gamma, scale);
            out.push(SweepRecord {
                alpha,
                alpha_t,
                gamma,
                config,
                gain_class: config.map(|c| interaction_gain::<Rational>(&c)),
                corollary1: config.is_some_and(|c| corollary1_holds::<Rational>(&c)),
            });
        }
    }
    out
}

pub fn render(records: &[SweepRecord], format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("alpha,alpha_t,gamma,m,n,mt,nt,gain_class,corollary1\n");
    }
    for r in records {
        let _ = match (format, r.config, r.gain_class) {
            (Format::Text, Some(c), Some(g)) => writeln!(
                s,
                "alpha={} alpha~={} gamma={} config={} class={} corollary1={}",
                r.alpha, r.alpha_t, r.gamma, c, g, r.corollary1
            ),
            (Format::Text, _, _) => writeln!(
                s,
                "alpha={} alpha~={} gamma={} skipped=unrealizable",
                r.alpha, r.alpha_t, r.gamma
            ),
            (Format::Csv, Some(c), Some(g)) => writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.alpha, r.alpha_t, r.gamma, c.m, c.n, c.mt, c.nt, g, r.corollary1
            ),
            (Format::Csv, _, _) => writeln!(s, "{},{},{},,,,,SKIPPED,false", r.alpha, r.alpha_t, r.gamma),
        };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn realizes_ratio_points() {
        assert_eq!(realize(q(1, 2), q(2, 1), q(1, 1), 1), Some(ChannelConfig::new(1, 2, 4, 2)));
        // denominators 3, 2 and 1/4 clear at n = 12, doubled by the scale
        assert_eq!(realize(q(1, 3), q(1, 2), q(1, 2), 2), Some(ChannelConfig::new(8, 24, 6, 12)));
        assert_eq!(realize(q(1, 1), q(1, 1), q(0, 1), 1), None);
    }

    #[test]
    fn example_points() {
        let recs = sweep(q(1, 1), q(1, 6), q(3, 1), 1);
        let at = |a: Rational, b: Rational| recs.iter().find(|r| r.alpha == a && r.alpha_t == b).unwrap();
        assert_eq!(at(q(1, 2), q(2, 1)).gain_class, Some(GainClass::PerfectFeedbackAchievable));
        assert_eq!(at(q(1, 3), q(1, 3)).gain_class, Some(GainClass::FeedbackGainNoInteractionGain));
        assert_eq!(at(q(1, 1), q(1, 1)).gain_class, Some(GainClass::NoFeedbackGain));
        assert_eq!(recs.len(), 19 * 19);
    }

    #[test]
    fn skipped_points_are_emitted() {
        let recs = sweep(q(0, 1), q(1, 1), q(1, 1), 1);
        assert_eq!(recs.len(), 4);
        let text = render(&recs, Format::Text);
        assert_eq!(text.lines().filter(|l| l.ends_with("skipped=unrealizable")).count(), 4);
        let csv = render(&recs, Format::Csv);
        assert_eq!(csv.lines().count(), 5);
    }
}
