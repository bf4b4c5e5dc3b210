//! Closed-form capacities, the two-way region and its corner points.

use std::fmt;

use crate::channel::{ChannelConfig, LevelRatio};
use crate::scalar::Exact;

/// Computation rates `(R, R~)` in functions per slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatePair<T> {
    pub r: T,
    pub rt: T,
}

impl<T: Exact> RatePair<T> {
    pub fn new(r: T, rt: T) -> Self {
        RatePair { r, rt }
    }

    pub fn zero() -> Self {
        RatePair::new(T::zero(), T::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        RatePair::new(
            self.r.clone() + other.r.clone(),
            self.rt.clone() + other.rt.clone(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        RatePair::new(self.r.clone() * k.clone(), self.rt.clone() * k.clone())
    }

    pub fn swapped(&self) -> Self {
        RatePair::new(self.rt.clone(), self.r.clone())
    }
}

impl<T: fmt::Display> fmt::Display for RatePair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.r, self.rt)
    }
}

/// `a * R + b * R~ <= c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Exact> Inequality<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Inequality { a, b, c }
    }

    pub fn holds(&self, p: &RatePair<T>) -> bool {
        self.a.clone() * p.r.clone() + self.b.clone() * p.rt.clone() <= self.c
    }
}

impl<T: fmt::Display> fmt::Display for Inequality<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

/// Intersection of half-planes, always including `R >= 0` and `R~ >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityRegion<T> {
    pub inequalities: Vec<Inequality<T>>,
}

impl<T: Exact> CapacityRegion<T> {
    /// Builds a region from `(a, b, c)` triples plus non-negativity.
    pub fn from_bounds(bounds: Vec<(T, T, T)>) -> Self {
        let mut inequalities: Vec<_> = bounds
            .into_iter()
            .map(|(a, b, c)| Inequality::new(a, b, c))
            .collect();
        inequalities.push(Inequality::new(-T::one(), T::zero(), T::zero()));
        inequalities.push(Inequality::new(T::zero(), -T::one(), T::zero()));
        CapacityRegion { inequalities }
    }

    pub fn contains(&self, p: &RatePair<T>) -> bool {
        self.inequalities.iter().all(|q| q.holds(p))
    }

    /// Vertices by pairwise intersection, sorted by `R` then `R~`.
    pub fn corner_points(&self) -> Vec<RatePair<T>> {
        let ineqs = &self.inequalities;
        let mut pts = Vec::new();
        for (i, p) in ineqs.iter().enumerate() {
            for q in &ineqs[i + 1..] {
                let det = p.a.clone() * q.b.clone() - p.b.clone() * q.a.clone();
                if det.is_zero() {
                    continue;
                }
                let r = (p.c.clone() * q.b.clone() - p.b.clone() * q.c.clone()) / det.clone();
                let rt = (p.a.clone() * q.c.clone() - p.c.clone() * q.a.clone()) / det;
                let pt = RatePair::new(r, rt);
                if self.contains(&pt) {
                    pts.push(pt);
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// Set inclusion, decided on corners (both regions are convex polygons).
    pub fn is_subset_of(&self, other: &CapacityRegion<T>) -> bool {
        self.corner_points().iter().all(|p| other.contains(p))
    }

    /// Largest `R` with `R~` held fixed, if the line meets the region.
    pub fn max_r_at(&self, rt: &T) -> Option<T> {
        let mut best: Option<T> = None;
        for q in &self.inequalities {
            let slack = q.c.clone() - q.b.clone() * rt.clone();
            if q.a.is_positive() {
                let bound = slack / q.a.clone();
                best = Some(match best {
                    Some(b) if b <= bound => b,
                    _ => bound,
                });
            } else if q.a.is_zero() && slack.is_negative() {
                return None;
            }
        }
        best
    }

    /// Corner maximizing `R` (ties broken by larger `R~`).
    pub fn favor_forward(&self) -> RatePair<T> {
        self.corner_points()
            .into_iter()
            .max_by(|x, y| x.r.cmp(&y.r).then(x.rt.cmp(&y.rt)))
            .unwrap_or_else(RatePair::zero)
    }

    /// Corner maximizing `R~` (ties broken by larger `R`).
    pub fn favor_backward(&self) -> RatePair<T> {
        self.corner_points()
            .into_iter()
            .max_by(|x, y| x.rt.cmp(&y.rt).then(x.r.cmp(&y.r)))
            .unwrap_or_else(RatePair::zero)
    }

    /// Inequalities, one per line, then a blank line and the corners.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for q in &self.inequalities {
            s.push_str(&format!("{q}\n"));
        }
        s.push('\n');
        for p in self.corner_points() {
            s.push_str(&format!("{p}\n"));
        }
        s
    }
}

/// Non-feedback computation capacity of one `(m, n)` direction.
pub fn c_no<T: Exact>(m: usize, n: usize) -> T {
    let (mm, nn) = (T::level(m), T::level(n));
    let two_thirds = |x: T| x * T::ratio(2, 3);
    match m.cmp(&n) {
        std::cmp::Ordering::Less => std::cmp::min(mm, two_thirds(nn)),
        std::cmp::Ordering::Greater => std::cmp::min(nn, two_thirds(mm)),
        std::cmp::Ordering::Equal => nn,
    }
}

/// Perfect-feedback computation capacity of one `(m, n)` direction.
pub fn c_pf<T: Exact>(m: usize, n: usize) -> T {
    match m.cmp(&n) {
        std::cmp::Ordering::Less => T::level(n) * T::ratio(2, 3),
        std::cmp::Ordering::Greater => T::level(m) * T::ratio(2, 3),
        std::cmp::Ordering::Equal => T::level(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Baseline {
    NoFeedback,
    PerfectFeedback,
}

pub fn baseline_region<T: Exact>(cfg: &ChannelConfig, which: Baseline) -> CapacityRegion<T> {
    let (r, rt): (T, T) = match which {
        Baseline::NoFeedback => (c_no(cfg.m, cfg.n), c_no(cfg.mt, cfg.nt)),
        Baseline::PerfectFeedback => (c_pf(cfg.m, cfg.n), c_pf(cfg.mt, cfg.nt)),
    };
    CapacityRegion::from_bounds(vec![
        (T::one(), T::zero(), r),
        (T::zero(), T::one(), rt),
    ])
}

/// The two-way computation capacity region.
pub fn two_way_region<T: Exact>(cfg: &ChannelConfig) -> CapacityRegion<T> {
    CapacityRegion::from_bounds(vec![
        (T::one(), T::zero(), c_pf(cfg.m, cfg.n)),
        (T::zero(), T::one(), c_pf(cfg.mt, cfg.nt)),
        (T::one(), T::one(), T::level(cfg.m + cfg.mt)),
        (T::one(), T::one(), T::level(cfg.n + cfg.nt)),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GainClass {
    NoFeedbackGain,
    FeedbackGainNoInteractionGain,
    NetInteractionGain,
    PerfectFeedbackAchievable,
}

impl GainClass {
    pub fn label(self) -> &'static str {
        match self {
            GainClass::NoFeedbackGain => "NO_FEEDBACK_GAIN",
            GainClass::FeedbackGainNoInteractionGain => "FEEDBACK_GAIN_NO_INTERACTION_GAIN",
            GainClass::NetInteractionGain => "NET_INTERACTION_GAIN",
            GainClass::PerfectFeedbackAchievable => "PERFECT_FEEDBACK_ACHIEVABLE",
        }
    }
}

impl fmt::Display for GainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies the feedback/interaction picture of one configuration.
///
/// Gain over the non-interactive point is decided by the slack of the region
/// along each axis at that point: every bound except non-negativity has
/// non-negative coefficients, so a feasible step in any non-negative direction
/// implies a feasible step along one of the axes.
pub fn interaction_gain<T: Exact>(cfg: &ChannelConfig) -> GainClass {
    let region = two_way_region::<T>(cfg);
    let no = RatePair::new(c_no::<T>(cfg.m, cfg.n), c_no::<T>(cfg.mt, cfg.nt));
    let pf = RatePair::new(c_pf::<T>(cfg.m, cfg.n), c_pf::<T>(cfg.mt, cfg.nt));
    if pf != no && region.contains(&pf) {
        return GainClass::PerfectFeedbackAchievable;
    }
    let more_r = region.max_r_at(&no.rt).is_some_and(|r| r > no.r);
    let swapped = CapacityRegion {
        inequalities: region
            .inequalities
            .iter()
            .map(|q| Inequality::new(q.b.clone(), q.a.clone(), q.c.clone()))
            .collect(),
    };
    let more_rt = swapped.max_r_at(&no.r).is_some_and(|r| r > no.rt);
    if more_r || more_rt {
        GainClass::NetInteractionGain
    } else if pf.r > no.r || pf.rt > no.rt {
        GainClass::FeedbackGainNoInteractionGain
    } else {
        GainClass::NoFeedbackGain
    }
}

fn ratio_lt<T: Exact>(x: LevelRatio, num: i64, den: i64) -> bool {
    match x {
        LevelRatio::Finite(r) => T::ratio(*r.numer(), *r.denom()) < T::ratio(num, den),
        _ => false,
    }
}

fn ratio_gt<T: Exact>(x: LevelRatio, num: i64, den: i64) -> bool {
    match x {
        LevelRatio::Finite(r) => T::ratio(*r.numer(), *r.denom()) > T::ratio(num, den),
        LevelRatio::Infinite => true,
        LevelRatio::Undefined => false,
    }
}

/// Whether the configuration lies in one of the two regimes where both
/// perfect-feedback capacities are simultaneously achievable.
pub fn corollary1_holds<T: Exact>(cfg: &ChannelConfig) -> bool {
    let (no, pf) = (c_no::<T>(cfg.m, cfg.n), c_pf::<T>(cfg.m, cfg.n));
    let (not, pft) = (c_no::<T>(cfg.mt, cfg.nt), c_pf::<T>(cfg.mt, cfg.nt));
    let (a, at) = (cfg.alpha(), cfg.alpha_t());
    let lvl = T::level;
    let first = ratio_lt::<T>(a, 2, 3)
        && ratio_gt::<T>(at, 3, 2)
        && pf.clone() - no.clone() <= lvl(cfg.mt) - pft.clone()
        && pft.clone() - not.clone() <= lvl(cfg.n) - pf.clone();
    let second = ratio_gt::<T>(a, 3, 2)
        && ratio_lt::<T>(at, 2, 3)
        && pf.clone() - no <= lvl(cfg.nt) - pft.clone()
        && pft - not <= lvl(cfg.m) - pf;
    first || second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn spot_capacities() {
        assert_eq!(c_no::<Rational>(1, 2), q(1, 1));
        assert_eq!(c_no::<Rational>(2, 3), q(2, 1));
        assert_eq!(c_no::<Rational>(1, 0), q(0, 1));
        assert_eq!(c_pf::<Rational>(1, 2), q(4, 3));
        assert_eq!(c_pf::<Rational>(1, 0), q(2, 3));
        assert_eq!(c_pf::<Rational>(3, 3), q(3, 1));
    }

    #[test]
    fn unit_square_corners() {
        let sq = CapacityRegion::from_bounds(vec![
            (q(1, 1), q(0, 1), q(1, 1)),
            (q(0, 1), q(1, 1), q(1, 1)),
        ]);
        let c: Vec<_> = sq
            .corner_points()
            .into_iter()
            .map(|p| (p.r, p.rt))
            .collect();
        assert_eq!(
            c,
            vec![(q(0, 1), q(0, 1)), (q(0, 1), q(1, 1)), (q(1, 1), q(0, 1)), (q(1, 1), q(1, 1))]
        );
    }

    #[test]
    fn zero_channel_region_is_a_point() {
        let r = two_way_region::<Rational>(&ChannelConfig::new(0, 0, 0, 0));
        assert_eq!(r.corner_points(), vec![RatePair::zero()]);
    }

    #[test]
    fn serialization_lists_bounds_then_corners() {
        let r = two_way_region::<Rational>(&ChannelConfig::new(1, 2, 2, 1));
        let s = r.serialize();
        assert!(s.starts_with("1 0 4/3\n0 1 4/3\n1 1 3\n1 1 3\n-1 0 0\n0 -1 0\n\n"));
        assert!(s.contains("4/3 4/3\n"));
    }

    #[test]
    fn gain_examples() {
        let g = |m, n, mt, nt| interaction_gain::<Rational>(&ChannelConfig::new(m, n, mt, nt));
        assert_eq!(g(1, 2, 2, 1), GainClass::PerfectFeedbackAchievable);
        assert_eq!(g(3, 4, 4, 3), GainClass::NoFeedbackGain);
        assert_eq!(g(1, 3, 1, 3), GainClass::FeedbackGainNoInteractionGain);
    }
}
