//! Elementary sub-channels and scheme planning.
//!
//! With `d = |n-m|`, the levels of an `(m,n)` direction split into residue
//! chains `r, r+d, r+2d, ...`. A chain of length `c` is wired exactly like
//! the `(c-1,c)` channel (or `(c,c-1)` when `m > n`), and chains never
//! interfere. Outside the middle band every chain has length 1, 2 or 3, so
//! the direction is a product of elementary channels.
//!
//! A plan pairs forward and backward parts into blocks with known rates and
//! records whether each block has a runnable construction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::capacity::{c_no, c_pf, two_way_region};
use crate::channel::{classify_regime, ChannelConfig, Regime};
use crate::schemes::compose::units;
use crate::{Rate, Rational};

/// Level counts `(m, n)` of one sub-channel.
pub type Part = (usize, usize);

pub const ELEMENTARY: [Part; 6] = [(0, 1), (1, 2), (2, 3), (1, 0), (2, 1), (3, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    /// Parts with positive multiplicity, in a fixed order.
    pub parts: Vec<(Part, usize)>,
    /// Set when the channel is kept whole (middle band or `m = n`).
    pub undecomposed: bool,
}

impl Decomposition {
    fn of(parts: Vec<(Part, usize)>) -> Self {
        Decomposition {
            parts: parts.into_iter().filter(|&(_, k)| k > 0).collect(),
            undecomposed: false,
        }
    }

    pub fn count(&self, p: Part) -> usize {
        self.parts.iter().filter(|(q, _)| *q == p).map(|(_, k)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("empty");
        }
        let s: Vec<String> = self.parts.iter().map(|&(p, k)| format!("{}^{k}", part_str(p))).collect();
        f.write_str(&s.join(" x "))?;
        if self.undecomposed {
            f.write_str(" (undecomposed)")?;
        }
        Ok(())
    }
}

fn part_str(p: Part) -> String {
    format!("({},{})", p.0, p.1)
}

fn low_half(m: usize, n: usize) -> Decomposition {
    Decomposition::of(vec![((0, 1), n - 2 * m), ((1, 2), m)])
}

fn low_third(m: usize, n: usize) -> Decomposition {
    Decomposition::of(vec![((1, 2), 2 * n - 3 * m), ((2, 3), 2 * m - n)])
}

fn high_third(m: usize, n: usize) -> Decomposition {
    Decomposition::of(vec![((2, 1), 2 * m - 3 * n), ((3, 2), 2 * n - m)])
}

fn high_half(m: usize, n: usize) -> Decomposition {
    Decomposition::of(vec![((1, 0), m - 2 * n), ((2, 1), n)])
}

pub fn decompose(m: usize, n: usize) -> Decomposition {
    if m == 0 && n == 0 {
        return Decomposition::default();
    }
    if 2 * m <= n {
        let d = low_half(m, n);
        if 2 * m == n {
            assert_eq!(d, low_third(m, n), "band formulas disagree at 1/2");
        }
        d
    } else if 3 * m <= 2 * n {
        low_third(m, n)
    } else if 2 * n <= m {
        let d = high_half(m, n);
        if 2 * n == m {
            assert_eq!(d, high_third(m, n), "band formulas disagree at 2");
        }
        d
    } else if 3 * n <= 2 * m {
        high_third(m, n)
    } else {
        Decomposition {
            parts: vec![((m, n), 1)],
            undecomposed: true,
        }
    }
}

pub fn validate(d: &Decomposition, m: usize, n: usize) -> bool {
    let sm: usize = d.parts.iter().map(|((a, _), k)| a * k).sum();
    let sn: usize = d.parts.iter().map(|((_, b), k)| b * k).sum();
    if sm != m || sn != n {
        return false;
    }
    if d.undecomposed {
        d.parts == [((m, n), 1)]
    } else {
        d.parts.iter().all(|(p, _)| ELEMENTARY.contains(p))
    }
}

/// Levels (zero-based, top first) of every part, chains in residue order.
pub fn chains(m: usize, n: usize) -> Vec<(Part, Vec<usize>)> {
    let q = m.max(n);
    if q == 0 {
        return Vec::new();
    }
    if decompose(m, n).undecomposed {
        return vec![((m, n), (0..q).collect())];
    }
    let d = q - m.min(n);
    (0..d)
        .map(|r| {
            let lv: Vec<usize> = (r..q).step_by(d).collect();
            let c = lv.len();
            let part = if m < n { (c - 1, c) } else { (c, c - 1) };
            (part, lv)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    FavorForward,
    FavorBackward,
    PerfectBoth,
}

impl Target {
    pub fn swapped(self) -> Target {
        match self {
            Target::FavorForward => Target::FavorBackward,
            Target::FavorBackward => Target::FavorForward,
            Target::PerfectBoth => Target::PerfectBoth,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::FavorForward => "favor-forward",
            Target::FavorBackward => "favor-backward",
            Target::PerfectBoth => "perfect-both",
        })
    }
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "favor-forward" => Ok(Target::FavorForward),
            "favor-backward" => Ok(Target::FavorBackward),
            "perfect-both" => Ok(Target::PerfectBoth),
            _ => Err(format!("unknown target {s:?}")),
        }
    }
}

/// Block families. `L3*` pair low-band parts with a one-for-one tradeoff,
/// `L4*` pair low forward with high backward parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Nf,
    L3i,
    L3ii,
    L4i,
    L4iBwd,
    L4ii,
    L4iii,
    L4iv,
    L4v,
}

impl Kind {
    const ALL: [Kind; 9] = [
        Kind::Nf,
        Kind::L3i,
        Kind::L3ii,
        Kind::L4i,
        Kind::L4iBwd,
        Kind::L4ii,
        Kind::L4iii,
        Kind::L4iv,
        Kind::L4v,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Kind::Nf => "nf",
            Kind::L3i => "l3i",
            Kind::L3ii => "l3ii",
            Kind::L4i => "l4i",
            Kind::L4iBwd => "l4i-b",
            Kind::L4ii => "l4ii",
            Kind::L4iii => "l4iii",
            Kind::L4iv => "l4iv",
            Kind::L4v => "l4v",
        }
    }
}

/// One plan line: `fwd`/`bwd` are a part and its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub fwd: Option<(Part, usize)>,
    pub bwd: Option<(Part, usize)>,
    pub kind: Kind,
    /// Block built for the opposite direction and run mirrored.
    pub mirrored: bool,
    /// Asymptotic rate of the whole line.
    pub rate: Rate,
    pub case: String,
}

impl Pairing {
    /// Multiplicities in the block's own orientation.
    fn ij(&self) -> (usize, usize) {
        let k = |s: &Option<(Part, usize)>| s.map_or(0, |(_, k)| k);
        if self.mirrored {
            (k(&self.bwd), k(&self.fwd))
        } else {
            (k(&self.fwd), k(&self.bwd))
        }
    }

    pub fn executable(&self) -> bool {
        let (i, j) = self.ij();
        match self.kind {
            Kind::Nf => [self.fwd, self.bwd]
                .iter()
                .flatten()
                .all(|&(p, _)| ELEMENTARY.contains(&p) || p.0 == p.1),
            Kind::L3i | Kind::L3ii => false,
            Kind::L4i | Kind::L4iBwd | Kind::L4ii => i == j,
            Kind::L4iii | Kind::L4v => j >= 1 && j <= i,
            Kind::L4iv => i == j,
        }
    }

    /// Side condition of the block family.
    pub fn side_condition(&self) -> bool {
        let (i, j) = self.ij();
        match self.kind {
            Kind::Nf => self.fwd.is_none() || self.bwd.is_none(),
            Kind::L3i => 3 * j >= i,
            Kind::L3ii => 6 * j >= i,
            Kind::L4i | Kind::L4iBwd | Kind::L4ii => i == j,
            Kind::L4iii => 3 * i >= 2 * j,
            Kind::L4iv => 2 * i >= j && 2 * j >= i,
            Kind::L4v => 3 * i >= j,
        }
    }

    fn swapped(&self) -> Pairing {
        Pairing {
            fwd: self.bwd,
            bwd: self.fwd,
            kind: self.kind,
            mirrored: if self.kind == Kind::Nf { false } else { !self.mirrored },
            rate: self.rate.swapped(),
            case: format!("{}, mirrored", self.case),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemePlan {
    pub config: ChannelConfig,
    pub target: Target,
    /// Parameters handed to the `L`/`M` families when the plan is composed.
    pub l: usize,
    pub m: usize,
    pub regime: Option<Regime>,
    pub pairs: Vec<Pairing>,
    /// The corner the plan claims. Equals the pairing sum when pairs exist.
    pub predicted: Rate,
    /// Rate of the composed scheme at the chosen `L`, `M`.
    pub finite: Rate,
    pub executable: bool,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn qi(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

fn nf_line(fwd: Option<(Part, usize)>, bwd: Option<(Part, usize)>, case: &str) -> Option<Pairing> {
    let side = |s: Option<(Part, usize)>| s.map_or(qi(0), |(p, k)| c_no::<Rational>(p.0, p.1) * qi(k));
    match (fwd, bwd) {
        (Some((_, 0)), _) | (_, Some((_, 0))) | (None, None) => None,
        _ => Some(Pairing {
            fwd,
            bwd,
            kind: Kind::Nf,
            mirrored: false,
            rate: Rate::new(side(fwd), side(bwd)),
            case: case.to_string(),
        }),
    }
}

/// Every part on its own, no feedback.
fn nf_pairs(cfg: &ChannelConfig, case: &str) -> Vec<Pairing> {
    let f = decompose(cfg.m, cfg.n);
    let b = decompose(cfg.mt, cfg.nt);
    let mut out: Vec<Pairing> = f.parts.iter().filter_map(|&s| nf_line(Some(s), None, case)).collect();
    out.extend(b.parts.iter().filter_map(|&s| nf_line(None, Some(s), case)));
    out
}

fn block(kind: Kind, fwd: (Part, usize), bwd: (Part, usize), rate: Rate, case: &str) -> Pairing {
    Pairing {
        fwd: Some(fwd),
        bwd: Some(bwd),
        kind,
        mirrored: false,
        rate,
        case: case.to_string(),
    }
}

fn sub_regime(low_high: bool, high: bool) -> usize {
    match (low_high, high) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (false, false) => 4,
    }
}

/// Sub-regime and case of an unprimed R1 or R4 configuration.
fn case_label(cfg: &ChannelConfig, label: Regime) -> String {
    let d: Rational = c_pf::<Rational>(cfg.m, cfg.n) - c_no::<Rational>(cfg.m, cfg.n);
    let dt: Rational = c_pf::<Rational>(cfg.mt, cfg.nt) - c_no::<Rational>(cfg.mt, cfg.nt);
    let upper = 2 * cfg.m >= cfg.n;
    match label {
        Regime::R1 => {
            let sub = sub_regime(upper, 2 * cfg.mt >= cfg.nt);
            let (a, b) = (d <= c_no(cfg.mt, cfg.nt), dt <= c_no(cfg.m, cfg.n));
            let case = match (a, b) {
                (true, true) => "I",
                (false, true) => "II",
                (true, false) => "II'",
                (false, false) => "III",
            };
            let derived = if sub >= 3 || case == "II'" { ", derived" } else { "" };
            format!("R1-{sub} case {case}{derived}")
        }
        Regime::R4 => {
            let sub = sub_regime(upper, cfg.mt <= 2 * cfg.nt);
            let a = d <= qi(cfg.mt) - c_pf::<Rational>(cfg.mt, cfg.nt);
            let b = dt <= qi(cfg.n) - c_pf::<Rational>(cfg.m, cfg.n);
            let case = match (a, b) {
                (true, true) => "I",
                (false, true) => "II",
                (true, false) => "III",
                (false, false) => "IV",
            };
            let derived = if sub >= 3 || case == "III" { ", derived" } else { "" };
            format!("R4-{sub} case {case}{derived}")
        }
        other => format!("{other}"),
    }
}

fn score(ps: &[Pairing]) -> (bool, std::cmp::Reverse<usize>) {
    (ps.iter().all(Pairing::executable), std::cmp::Reverse(ps.len()))
}

fn keep_best(best: &mut Option<Vec<Pairing>>, cand: Vec<Pairing>) {
    if best.as_ref().is_none_or(|b| score(&cand) > score(b)) {
        *best = Some(cand);
    }
}

/// Forward-favoring one-for-one tradeoff pairings on low/low channels.
fn r1_search(cfg: &ChannelConfig, corner: &Rate, case: &str) -> Option<Vec<Pairing>> {
    let f = decompose(cfg.m, cfg.n);
    let b = decompose(cfg.mt, cfg.nt);
    let (p, qq) = (f.count((1, 2)), f.count((2, 3)));
    let (pt, qt) = (b.count((1, 2)), b.count((2, 3)));
    let mut best = None;
    for i1 in 0..=p {
        let j1 = i1.div_ceil(3);
        if j1 > pt {
            break;
        }
        for i2 in 0..=p - i1 {
            let j2 = i2.div_ceil(6);
            if j2 > qt {
                break;
            }
            let i = (i1 + i2) as i64;
            let r = q(4 * i, 3) + qi(p - i1 - i2) + qi(2 * qq);
            let rt = qi(pt + 2 * qt) - q(i, 3);
            if Rate::new(r, rt) != *corner {
                continue;
            }
            let mut ps = Vec::new();
            if i1 > 0 {
                let rate = Rate::new(q(4 * i1 as i64, 3), qi(j1) - q(i1 as i64, 3));
                ps.push(block(Kind::L3i, ((1, 2), i1), ((1, 2), j1), rate, case));
            }
            if i2 > 0 {
                let rate = Rate::new(q(4 * i2 as i64, 3), qi(2 * j2) - q(i2 as i64, 3));
                ps.push(block(Kind::L3ii, ((1, 2), i2), ((2, 3), j2), rate, case));
            }
            ps.extend(nf_line(Some(((0, 1), f.count((0, 1)))), None, case));
            ps.extend(nf_line(Some(((1, 2), p - i1 - i2)), None, case));
            ps.extend(nf_line(Some(((2, 3), qq)), None, case));
            ps.extend(nf_line(None, Some(((0, 1), b.count((0, 1)))), case));
            ps.extend(nf_line(None, Some(((1, 2), pt - j1)), case));
            ps.extend(nf_line(None, Some(((2, 3), qt - j2)), case));
            keep_best(&mut best, ps);
        }
    }
    best
}

/// Low forward against high backward: searches block multiplicities that
/// land exactly on `corner`.
fn r4_search(cfg: &ChannelConfig, corner: &Rate, case: &str) -> Option<Vec<Pairing>> {
    let f = decompose(cfg.m, cfg.n);
    let b = decompose(cfg.mt, cfg.nt);
    let (z, p, qq) = (f.count((0, 1)), f.count((1, 2)), f.count((2, 3)));
    let (u, r21, s) = (b.count((1, 0)), b.count((2, 1)), b.count((3, 2)));
    let third = |k: usize| q(k as i64, 3);
    let mut best = None;
    for x in 0..=p.min(u) {
        for i4 in 0..=p - x {
            for j4 in 0..=r21 {
                let iv_ok = (i4 == 0 && j4 == 0) || (i4 > 0 && j4 > 0 && 2 * i4 >= j4 && 2 * j4 >= i4);
                if !iv_ok {
                    continue;
                }
                for j5 in 0..=r21 - j4 {
                    for j3 in 0..=u - x {
                        if j3 + j5 > 0 && qq == 0 {
                            continue;
                        }
                        let need = (2 * j3).div_ceil(3) + j5.div_ceil(3);
                        if need > qq {
                            continue;
                        }
                        let (i3, i5) = if j3 + j5 <= qq {
                            (j3, j5)
                        } else {
                            ((2 * j3).div_ceil(3), j5.div_ceil(3))
                        };
                        let free10 = u - x - j3;
                        for y1 in 0..=z.min(free10) {
                            for y2 in 0..=(z - y1).min(free10 - y1) {
                                let r = third(4 * (x + i4)) + qi(p - x - i4) + qi(2 * qq) + third(2 * y1) + third(y2);
                                let rt = third(2 * (x + j3))
                                    + third(4 * (j4 + j5))
                                    + qi(r21 - j4 - j5)
                                    + qi(2 * s)
                                    + third(y1)
                                    + third(2 * y2);
                                if Rate::new(r, rt) != *corner {
                                    continue;
                                }
                                let mut ps = Vec::new();
                                if x > 0 {
                                    ps.push(block(Kind::L4ii, ((1, 2), x), ((1, 0), x), Rate::new(third(4 * x), third(2 * x)), case));
                                }
                                if i4 > 0 {
                                    ps.push(block(Kind::L4iv, ((1, 2), i4), ((2, 1), j4), Rate::new(third(4 * i4), third(4 * j4)), case));
                                }
                                if j3 > 0 {
                                    ps.push(block(Kind::L4iii, ((2, 3), i3), ((1, 0), j3), Rate::new(qi(2 * i3), third(2 * j3)), case));
                                }
                                if j5 > 0 {
                                    ps.push(block(Kind::L4v, ((2, 3), i5), ((2, 1), j5), Rate::new(qi(2 * i5), third(4 * j5)), case));
                                }
                                if y1 > 0 {
                                    ps.push(block(Kind::L4i, ((0, 1), y1), ((1, 0), y1), Rate::new(third(2 * y1), third(y1)), case));
                                }
                                if y2 > 0 {
                                    ps.push(block(Kind::L4iBwd, ((0, 1), y2), ((1, 0), y2), Rate::new(third(y2), third(2 * y2)), case));
                                }
                                ps.extend(nf_line(Some(((0, 1), z - y1 - y2)), None, case));
                                ps.extend(nf_line(Some(((1, 2), p - x - i4)), None, case));
                                ps.extend(nf_line(Some(((2, 3), qq - i3 - i5)), None, case));
                                ps.extend(nf_line(None, Some(((1, 0), free10 - y1 - y2)), case));
                                ps.extend(nf_line(None, Some(((2, 1), r21 - j4 - j5)), case));
                                ps.extend(nf_line(None, Some(((3, 2), s)), case));
                                keep_best(&mut best, ps);
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

/// Pairings for an unprimed label, or `None` when only the rate is known.
fn pairings(cfg: &ChannelConfig, label: Regime, corner: &Rate) -> Option<Vec<Pairing>> {
    let case = case_label(cfg, label);
    match label {
        Regime::Middle => Some(nf_pairs(cfg, "no interaction")),
        Regime::R1 => r1_search(cfg, corner, &case).or_else(|| {
            let sw = cfg.swapped();
            r1_search(&sw, &corner.swapped(), &case_label(&sw, Regime::R1))
                .map(|ps| ps.iter().map(Pairing::swapped).collect())
        }),
        Regime::R4 => r4_search(cfg, corner, &case),
        _ => None,
    }
}

pub fn sum_rates(ps: &[Pairing]) -> Rate {
    ps.iter().fold(Rate::zero(), |acc, p| acc.add(&p.rate))
}

/// Plan with the default composition parameters `L = 2`, `M = 4`.
pub fn plan(cfg: ChannelConfig, target: Target) -> SchemePlan {
    plan_with(cfg, target, 2, 4)
}

pub fn plan_with(cfg: ChannelConfig, target: Target, l: usize, m: usize) -> SchemePlan {
    let region = two_way_region::<Rational>(&cfg);
    let pf = Rate::new(c_pf(cfg.m, cfg.n), c_pf(cfg.mt, cfg.nt));
    let (corner, reachable) = match target {
        Target::FavorForward => (region.favor_forward(), true),
        Target::FavorBackward => (region.favor_backward(), true),
        Target::PerfectBoth if region.contains(&pf) => (pf, true),
        // perfect feedback in both directions is outside the region
        Target::PerfectBoth => (region.favor_forward(), false),
    };
    let label = classify_regime(&cfg).ok().map(|r| r.label);
    let pairs = match label {
        None => Some(nf_pairs(&cfg, "degenerate")),
        Some(lb @ (Regime::R1 | Regime::R2 | Regime::R3 | Regime::R4 | Regime::Middle)) => {
            pairings(&cfg, lb, &corner)
        }
        Some(_) => {
            let sw = cfg.swapped();
            let lb = classify_regime(&sw).expect("swap keeps validity").label;
            pairings(&sw, lb, &corner.swapped()).map(|ps| ps.iter().map(Pairing::swapped).collect())
        }
    };
    let pairs = pairs.filter(|ps| sum_rates(ps) == corner && ps.iter().all(Pairing::side_condition));
    let executable = reachable && pairs.as_ref().is_some_and(|ps| ps.iter().all(Pairing::executable));
    let pairs = pairs.unwrap_or_default();
    let mut p = SchemePlan {
        config: cfg,
        target,
        l,
        m,
        regime: label,
        pairs,
        predicted: corner,
        finite: Rate::zero(),
        executable,
    };
    p.finite = finite_rates(&p);
    p
}

/// Multiplicity-weighted sum over the pairing lines.
pub fn predicted_rates(p: &SchemePlan) -> Rate {
    sum_rates(&p.pairs)
}

/// Rate at the plan's `L`, `M`: executable lines use their built units,
/// the others contribute their asymptotic rate.
pub fn finite_rates(p: &SchemePlan) -> Rate {
    let mut total = Rate::zero();
    for pr in &p.pairs {
        match units(pr, p.l, p.m) {
            Ok(us) if pr.executable() => {
                for u in us {
                    let n = u.program.slots().max(1) as i64;
                    let k = u.program.counted[0].len() as i64;
                    let kt = u.program.counted[1].len() as i64;
                    total = total.add(&Rate::new(q(k, n), q(kt, n)));
                }
            }
            _ => total = total.add(&pr.rate),
        }
    }
    total
}

fn parse_side(s: &str) -> Result<Option<(Part, usize)>, String> {
    if s == "-" {
        return Ok(None);
    }
    let bad = || format!("bad part {s:?}");
    let (p, k) = s.split_once('^').ok_or_else(bad)?;
    let p = p.strip_prefix('(').and_then(|p| p.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = p.split_once(',').ok_or_else(bad)?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    Ok(Some(((num(a)?, num(b)?), num(k)?)))
}

fn side_str(s: &Option<(Part, usize)>) -> String {
    s.map_or("-".to_string(), |(p, k)| format!("{}^{k}", part_str(p)))
}

fn parse_rate(a: &str, b: &str) -> Result<Rate, String> {
    let r = |x: &str| x.parse::<Rational>().map_err(|_| format!("bad rational {x:?}"));
    Ok(Rate::new(r(a)?, r(b)?))
}

impl SchemePlan {
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let c = self.config;
        s.push_str(&format!("CONFIG {},{}/{},{}\n", c.m, c.n, c.mt, c.nt));
        s.push_str(&format!("TARGET {}\n", self.target));
        s.push_str(&format!("PARAMS L={} M={}\n", self.l, self.m));
        s.push_str(&format!("REGIME {}\n", self.regime.map_or("none".to_string(), |r| r.to_string())));
        s.push_str(&format!("PREDICTED {}\n", self.predicted));
        s.push_str(&format!("FINITE {}\n", self.finite));
        s.push_str(&format!("EXECUTABLE {}\n", self.executable));
        for p in &self.pairs {
            let kind = format!("{}{}", p.kind.label(), if p.mirrored { "/m" } else { "" });
            s.push_str(&format!(
                "PAIR {} {} {kind} {} {}\n",
                side_str(&p.fwd),
                side_str(&p.bwd),
                p.rate,
                p.case
            ));
        }
        s
    }

    pub fn parse(text: &str) -> Result<SchemePlan, String> {
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        let mut pairs = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            if key == "PAIR" {
                let tok: Vec<&str> = rest.splitn(6, ' ').collect();
                if tok.len() < 5 {
                    return Err(format!("short PAIR line {line:?}"));
                }
                let (kind, mirrored) = match tok[2].strip_suffix("/m") {
                    Some(k) => (k, true),
                    None => (tok[2], false),
                };
                let kind = Kind::ALL
                    .into_iter()
                    .find(|k| k.label() == kind)
                    .ok_or_else(|| format!("unknown block kind {kind:?}"))?;
                pairs.push(Pairing {
                    fwd: parse_side(tok[0])?,
                    bwd: parse_side(tok[1])?,
                    kind,
                    mirrored,
                    rate: parse_rate(tok[3], tok[4])?,
                    case: tok.get(5).unwrap_or(&"").to_string(),
                });
            } else {
                fields.insert(key, rest.trim());
            }
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| format!("missing {k}"));
        let config: ChannelConfig = get("CONFIG")?.parse().map_err(|e| format!("{e}"))?;
        let target: Target = get("TARGET")?.parse()?;
        let (mut l, mut m) = (2, 4);
        for kv in get("PARAMS").unwrap_or("").split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad param {kv:?}"))?;
            let v: usize = v.parse().map_err(|_| format!("bad param {kv:?}"))?;
            match k {
                "L" => l = v,
                "M" => m = v,
                _ => return Err(format!("unknown param {k:?}")),
            }
        }
        let two = |k: &str| -> Result<Rate, String> {
            let v: Vec<&str> = get(k)?.split_whitespace().collect();
            if v.len() != 2 {
                return Err(format!("{k} needs two rationals"));
            }
            parse_rate(v[0], v[1])
        };
        let predicted = two("PREDICTED")?;
        let executable = match get("EXECUTABLE")? {
            "true" => true,
            "false" => false,
            e => return Err(format!("bad EXECUTABLE {e:?}")),
        };
        let regime = classify_regime(&config).ok().map(|r| r.label);
        let mut p = SchemePlan {
            config,
            target,
            l,
            m,
            regime,
            pairs,
            predicted,
            finite: Rate::zero(),
            executable,
        };
        p.finite = match fields.get("FINITE") {
            Some(_) => two("FINITE")?,
            None => finite_rates(&p),
        };
        Ok(p)
    }
}

impl fmt::Display for SchemePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> ChannelConfig {
        s.parse().unwrap()
    }

    #[test]
    fn fig9_factors() {
        assert_eq!(decompose(2, 4).to_string(), "(1,2)^2");
        assert_eq!(decompose(3, 1).to_string(), "(1,0)^1 x (2,1)^1");
        assert_eq!(decompose(0, 5).to_string(), "(0,1)^5");
        assert!(decompose(0, 0).is_empty());
        assert!(decompose(3, 4).undecomposed);
    }

    #[test]
    fn validate_rejects_sum_mismatch() {
        let d = Decomposition::of(vec![((1, 2), 1)]);
        assert!(!validate(&d, 2, 4));
        assert!(validate(&decompose(2, 4), 2, 4));
    }

    #[test]
    fn chains_partition_levels() {
        for m in 0..=12 {
            for n in 0..=12 {
                let mut all: Vec<usize> = chains(m, n).into_iter().flat_map(|(_, lv)| lv).collect();
                all.sort_unstable();
                assert_eq!(all, (0..m.max(n)).collect::<Vec<_>>(), "({m},{n})");
            }
        }
    }

    #[test]
    fn composite_plan() {
        let p = plan(cfg("2,4/3,1"), Target::PerfectBoth);
        assert!(p.executable, "{p}");
        assert_eq!(p.pairs.len(), 2);
        assert_eq!(p.predicted, Rate::new(q(8, 3), qi(2)));
        assert_eq!(predicted_rates(&p), p.predicted);
        assert_eq!(p.finite, Rate::new(q(40, 21), q(20, 21)));
        let kinds: Vec<Kind> = p.pairs.iter().map(|x| x.kind).collect();
        assert!(kinds.contains(&Kind::L4ii) && kinds.contains(&Kind::L4iv));
    }

    #[test]
    fn unit_plans() {
        let p = plan(cfg("1,2/2,1"), Target::PerfectBoth);
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.pairs[0].kind, Kind::L4iv);
        assert_eq!(p.predicted, Rate::new(q(4, 3), q(4, 3)));

        let p = plan(cfg("2,3/1,0"), Target::FavorBackward);
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.pairs[0].kind, Kind::L4iii);
        assert_eq!(p.predicted, Rate::new(qi(2), q(2, 3)));
        assert!(p.executable);
    }

    #[test]
    fn two_l4i_blocks() {
        let p = plan(cfg("0,2/2,0"), Target::FavorForward);
        assert_eq!(predicted_rates(&p), Rate::new(q(4, 3), q(2, 3)));
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.pairs[0].kind, Kind::L4i);
    }

    #[test]
    fn empty_plan_is_zero() {
        let p = plan(cfg("0,0/0,0"), Target::FavorForward);
        assert!(p.pairs.is_empty());
        assert_eq!(predicted_rates(&p), Rate::zero());
    }

    #[test]
    fn serialization_round_trips() {
        for c in ["2,4/3,1", "1,2/2,1", "2,3/1,0", "3,4/1,1", "1,3/1,3", "2,1/1,2"] {
            for t in [Target::FavorForward, Target::FavorBackward, Target::PerfectBoth] {
                let p = plan(cfg(c), t);
                assert_eq!(SchemePlan::parse(&p.serialize()).unwrap(), p, "{c} {t}");
            }
        }
    }
}
