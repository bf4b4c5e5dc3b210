//! The four-node full-duplex deterministic network.
//!
//! Forward: nodes 1 and 2 transmit, node 1~ hears `Y1` and node 2~ hears `Y2`.
//! Backward: nodes 1~ and 2~ transmit, node 1 hears `Y~1` and node 2 hears `Y~2`.
//! Direct links keep `n` levels, cross links keep `m`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BitVector, Gf2Error};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("cannot parse channel config {0:?}; expected \"m,n/m~,n~\"")]
    Parse(String),
    #[error("degenerate {0} channel: both level counts are zero")]
    Degenerate(&'static str),
}

/// Level counts of both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelConfig {
    pub m: usize,
    pub n: usize,
    pub mt: usize,
    pub nt: usize,
}

/// A ratio of level counts with explicit sentinels for zero denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelRatio {
    Finite(Rational),
    Infinite,
    Undefined,
}

impl LevelRatio {
    pub fn of(num: usize, den: usize) -> Self {
        match (num, den) {
            (0, 0) => LevelRatio::Undefined,
            (_, 0) => LevelRatio::Infinite,
            _ => LevelRatio::Finite(Rational::new(num as i64, den as i64)),
        }
    }

    pub fn band(&self) -> Option<Band> {
        let two_thirds = Rational::new(2, 3);
        let three_halves = Rational::new(3, 2);
        match self {
            LevelRatio::Undefined => None,
            LevelRatio::Infinite => Some(Band::High),
            LevelRatio::Finite(r) => Some(if *r <= two_thirds {
                Band::Low
            } else if *r < Rational::from_integer(1) {
                Band::MidLow
            } else if *r == Rational::from_integer(1) {
                Band::One
            } else if *r < three_halves {
                Band::MidHigh
            } else {
                Band::High
            }),
        }
    }
}

impl fmt::Display for LevelRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelRatio::Finite(r) => write!(f, "{r}"),
            LevelRatio::Infinite => f.write_str("inf"),
            LevelRatio::Undefined => f.write_str("undef"),
        }
    }
}

/// Ratio bands `[0,2/3]`, `(2/3,1)`, `{1}`, `(1,3/2)`, `[3/2,inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    Low,
    MidLow,
    One,
    MidHigh,
    High,
}

impl Band {
    pub fn is_mid(self) -> bool {
        matches!(self, Band::MidLow | Band::One | Band::MidHigh)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    R1,
    R2,
    R3,
    R4,
    R1p,
    R2p,
    R3p,
    R4p,
    Middle,
}

impl Regime {
    /// Label of the direction-swapped channel.
    pub fn mirror(self) -> Regime {
        use Regime::*;
        match self {
            R2 => R2p,
            R2p => R2,
            R3 => R3p,
            R3p => R3,
            R4 => R4p,
            R4p => R4,
            other => other,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::R1 => "R1",
            Regime::R2 => "R2",
            Regime::R3 => "R3",
            Regime::R4 => "R4",
            Regime::R1p => "R1'",
            Regime::R2p => "R2'",
            Regime::R3p => "R3'",
            Regime::R4p => "R4'",
            Regime::Middle => "MIDDLE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeLabel {
    pub label: Regime,
    pub bands: (Band, Band),
}

impl ChannelConfig {
    pub const fn new(m: usize, n: usize, mt: usize, nt: usize) -> Self {
        ChannelConfig { m, n, mt, nt }
    }

    pub fn q(&self) -> usize {
        self.m.max(self.n)
    }

    pub fn qt(&self) -> usize {
        self.mt.max(self.nt)
    }

    pub fn alpha(&self) -> LevelRatio {
        LevelRatio::of(self.m, self.n)
    }

    pub fn alpha_t(&self) -> LevelRatio {
        LevelRatio::of(self.mt, self.nt)
    }

    pub fn gamma(&self) -> LevelRatio {
        LevelRatio::of(self.nt, self.n)
    }

    /// Swaps the roles of the two directions.
    pub fn swapped(&self) -> ChannelConfig {
        ChannelConfig::new(self.mt, self.nt, self.m, self.n)
    }
}

impl fmt::Display for ChannelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}/{},{}", self.m, self.n, self.mt, self.nt)
    }
}

impl FromStr for ChannelConfig {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChannelError::Parse(s.to_string());
        let (fwd, bwd) = s.trim().split_once('/').ok_or_else(bad)?;
        let pair = |t: &str| -> Result<(usize, usize), ChannelError> {
            let (a, b) = t.split_once(',').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        };
        let (m, n) = pair(fwd)?;
        let (mt, nt) = pair(bwd)?;
        Ok(ChannelConfig::new(m, n, mt, nt))
    }
}

fn outputs(
    x1: &BitVector,
    x2: &BitVector,
    m: usize,
    n: usize,
) -> Result<(BitVector, BitVector), ChannelError> {
    let q = m.max(n);
    for x in [x1, x2] {
        if x.len() != q {
            return Err(ChannelError::Length {
                expected: q,
                got: x.len(),
            });
        }
    }
    let y1 = x1.shift_down(q - n)?.xor(&x2.shift_down(q - m)?)?;
    let y2 = x1.shift_down(q - m)?.xor(&x2.shift_down(q - n)?)?;
    Ok((y1, y2))
}

/// `Y1 = G^{q-n} X1 + G^{q-m} X2`, `Y2 = G^{q-m} X1 + G^{q-n} X2`.
pub fn forward_outputs(
    x1: &BitVector,
    x2: &BitVector,
    m: usize,
    n: usize,
) -> Result<(BitVector, BitVector), ChannelError> {
    outputs(x1, x2, m, n)
}

/// Same law as [`forward_outputs`] with the backward level counts.
pub fn backward_outputs(
    xt1: &BitVector,
    xt2: &BitVector,
    mt: usize,
    nt: usize,
) -> Result<(BitVector, BitVector), ChannelError> {
    outputs(xt1, xt2, mt, nt)
}

/// Wiring of one direction: for output `k` (0 or 1) and level `i`, the
/// `(transmitter, level)` pairs summed into it. Used for symbolic signals.
pub fn taps(m: usize, n: usize) -> [Vec<Vec<(usize, usize)>>; 2] {
    let q = m.max(n);
    let mut out = [vec![Vec::new(); q], vec![Vec::new(); q]];
    for (k, y) in out.iter_mut().enumerate() {
        for (i, level) in y.iter_mut().enumerate() {
            // own-side transmitter reaches through the direct link
            let (direct, cross) = (k, 1 - k);
            if i >= q - n {
                level.push((direct, i - (q - n)));
            }
            if i >= q - m {
                level.push((cross, i - (q - m)));
            }
        }
    }
    out
}

/// Band pair and regime label; a direction with both counts zero is rejected.
pub fn classify_regime(cfg: &ChannelConfig) -> Result<RegimeLabel, ChannelError> {
    let a = cfg
        .alpha()
        .band()
        .ok_or(ChannelError::Degenerate("forward"))?;
    let at = cfg
        .alpha_t()
        .band()
        .ok_or(ChannelError::Degenerate("backward"))?;
    use Band::*;
    let label = match (a, at) {
        (Low, Low) => Regime::R1,
        (High, High) => Regime::R1p,
        (x, High) if x.is_mid() => Regime::R2,
        (High, y) if y.is_mid() => Regime::R2p,
        (Low, y) if y.is_mid() => Regime::R3,
        (x, Low) if x.is_mid() => Regime::R3p,
        (Low, High) => Regime::R4,
        (High, Low) => Regime::R4p,
        _ => Regime::Middle,
    };
    Ok(RegimeLabel {
        label,
        bands: (a, at),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let c: ChannelConfig = "1,2/2,1".parse().unwrap();
        assert_eq!(c, ChannelConfig::new(1, 2, 2, 1));
        assert_eq!(c.to_string(), "1,2/2,1");
        assert!("1,2".parse::<ChannelConfig>().is_err());
        assert!("a,2/1,1".parse::<ChannelConfig>().is_err());
    }

    #[test]
    fn ratios() {
        let c = ChannelConfig::new(1, 2, 1, 0);
        assert_eq!(c.alpha(), LevelRatio::Finite(Rational::new(1, 2)));
        assert_eq!(c.alpha_t(), LevelRatio::Infinite);
        assert_eq!(LevelRatio::of(0, 0), LevelRatio::Undefined);
    }

    #[test]
    fn taps_match_shift_law() {
        // (1,2): y1 = (x1[0], x1[1] + x2[0])
        let t = taps(1, 2);
        assert_eq!(t[0], vec![vec![(0, 0)], vec![(0, 1), (1, 0)]]);
        assert_eq!(t[1], vec![vec![(1, 0)], vec![(1, 1), (0, 0)]]);
        // (1,0): y1 = x2, y2 = x1
        let t = taps(1, 0);
        assert_eq!(t[0], vec![vec![(1, 0)]]);
        assert_eq!(t[1], vec![vec![(0, 0)]]);
        let (y1, y2) = forward_outputs(&bv("1"), &bv("0"), 1, 0).unwrap();
        assert_eq!((y1, y2), (bv("0"), bv("1")));
    }

    #[test]
    fn length_checked() {
        assert!(forward_outputs(&bv("1"), &bv("10"), 1, 2).is_err());
    }
}
