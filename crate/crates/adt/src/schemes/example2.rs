//! Nested layered scheme for the forward `(1,2)`, backward `(1,0)` channel.
//!
//! `M` layers of `3L+1` slots. Each layer opens with `2L` slots of fresh
//! symbols and closes with `L+1` refinement slots. Functions of a layer are
//! completed up to two layers later; refinement slots whose references are
//! all non-positive stay silent, which is where the early layers lose rate.

use crate::channel::ChannelConfig;
use crate::xor;

use super::expr::{a, at, b, bt, f, ft};
use super::{compile, FeedbackMode, Program, Scheme, SchemeError};

fn pow2(e: i64) -> i64 {
    1i64 << e
}

/// Slots in which the forward nodes have nothing to send, summed over
/// enough layers: `2^{L+1} - 2L - 2`.
pub fn vacant_total(l: usize) -> usize {
    let l = l as i64;
    (pow2(l + 1) - 2 * l - 2) as usize
}

/// Functions per direction completed by the end of layer `M`.
pub fn completed_counts(l: usize, m: usize) -> (usize, usize) {
    let done = m.saturating_sub(vacant_total(l));
    (4 * l * done, 2 * l * done)
}

pub fn program(l: usize, m: usize) -> Result<Program, SchemeError> {
    if l < 1 || m < 1 {
        return Err(SchemeError::Param("ex2 needs L >= 1 and M >= 1".into()));
    }
    if l > 16 {
        return Err(SchemeError::Param("ex2 supports L <= 16".into()));
    }
    let mut p = Program::new(
        format!("ex2:L={l},M={m}"),
        ChannelConfig::new(1, 2, 1, 0),
        (3 * l + 1) * m,
        4 * l * m,
        2 * l * m,
        FeedbackMode::InBand,
    );
    p.params.l = Some(l);
    p.params.m = Some(m);
    let (ck, ckt) = completed_counts(l, m);
    p.counted = [(1..=ck).collect(), (1..=ckt).collect()];
    let big = l as i64;

    for i in 1..=m as i64 {
        let base = (3 * big + 1) * (i - 1);
        for ell in 1..=big {
            // fresh forward symbols on even slots
            let t = (base + 2 * ell) as usize;
            let u = (i - 1) * big + ell;
            p.fwd(
                t,
                1,
                vec![
                    xor!(a(4 * u - 1), b(4 * (u - 1) - 3), b(4 * (u - 1)), a(4 * (u - 2) - 2),
                         bt(2 * (u - 1)), at(2 * (u - 2) - 1)),
                    xor!(a(4 * u), a(4 * (u - 1) - 2), a(4 * (u - 2)), a(4 * (u - 3) - 2)),
                ],
            );
            p.fwd(
                t,
                2,
                vec![
                    xor!(b(4 * u), a(4 * (u - 1) - 2), a(4 * (u - 1) - 1), b(4 * (u - 2) - 3),
                         at(2 * (u - 1) - 1), bt(2 * (u - 2))),
                    xor!(b(4 * u - 1), b(4 * (u - 1) - 3), b(4 * (u - 2) - 1), b(4 * (u - 3) - 3)),
                ],
            );
            p.bwd(
                t,
                1,
                vec![xor!(at(2 * u - 1), f(4 * u - 2), a(4 * u - 1), b(4 * (u - 1) - 3),
                          b(4 * (u - 1)), b(4 * (u - 2) - 2), bt(2 * (u - 1)))],
            );
            p.bwd(
                t,
                2,
                vec![xor!(bt(2 * u), f(4 * u - 3), b(4 * u), a(4 * (u - 1) - 2),
                          a(4 * (u - 1) - 1), a(4 * (u - 2) - 3), at(2 * (u - 1) - 1))],
            );

            // fresh forward symbols on odd slots, relaying older layers
            let t = (base + 2 * ell - 1) as usize;
            let c = (i - 1) - (pow2(big - ell + 1) - 2);
            let r0 = c * big - (big - ell);
            let r1 = c * big - (big - ell + 1);
            let r2 = c * big - (big - ell + 2);
            p.fwd(
                t,
                1,
                vec![
                    xor!(a(4 * u - 3), a(4 * r0), a(4 * r1 - 2), ft(2 * r1 - 1)),
                    xor!(a(4 * u - 2), a(4 * r1), a(4 * r2 - 2)),
                ],
            );
            p.fwd(
                t,
                2,
                vec![
                    xor!(b(4 * u - 2), b(4 * r0 - 1), b(4 * r1 - 3), ft(2 * r1)),
                    xor!(b(4 * u - 3), b(4 * r1 - 1), b(4 * r2 - 3)),
                ],
            );
            let d = (i - 1) - (pow2(ell) - 2);
            let e = i - (pow2(ell + 1) - 2);
            let s0 = d * big - (ell - 1);
            let s1 = e * big - (ell - 1);
            let s2 = e * big - ell;
            p.bwd(
                t,
                1,
                vec![xor!(b(4 * s0 - 3), b(4 * s1), b(4 * s2 - 2), ft(2 * s2 - 1))],
            );
            p.bwd(
                t,
                2,
                vec![xor!(a(4 * s0 - 2), a(4 * s1 - 1), a(4 * s2 - 3), ft(2 * s2))],
            );
        }

        let w = i * big;
        let t = (base + 2 * big + 1) as usize;
        p.fwd(
            t,
            1,
            vec![
                xor!(f(4 * w), b(4 * w - 3), a(4 * (w - 1) - 2), bt(2 * w), at(2 * (w - 1) - 1)),
                xor!(a(4 * w - 1), a(4 * w - 2), a(4 * (w - 1)), a(4 * (w - 2) - 2)),
            ],
        );
        p.fwd(
            t,
            2,
            vec![
                xor!(f(4 * w - 1), a(4 * w - 2), b(4 * (w - 1) - 3), at(2 * w - 1), bt(2 * (w - 1))),
                xor!(b(4 * w), b(4 * w - 3), b(4 * (w - 1) - 1), b(4 * (w - 2) - 3)),
            ],
        );
        p.bwd(t, 1, vec![xor!(b(4 * w - 3), b(4 * (w - 1) - 2), ft(2 * w))]);
        p.bwd(t, 2, vec![xor!(a(4 * w - 2), a(4 * (w - 1) - 3), ft(2 * w - 1))]);

        let t = t + 1;
        p.fwd(t, 1, vec![ft(2 * w - 1), xor!(a(4 * w - 3), a(4 * (w - 1) - 2))]);
        p.fwd(t, 2, vec![ft(2 * w), xor!(b(4 * w - 2), b(4 * (w - 1) - 3))]);
        p.bwd(t, 1, vec![ft(2 * w - 1)]);
        p.bwd(t, 2, vec![ft(2 * w)]);

        for ell in 3..=big + 1 {
            let t = (base + 2 * big + ell) as usize;
            let g = i - (pow2(ell - 1) - 2);
            let v = g * big - (ell - 2);
            let v1 = g * big - (ell - 1);
            p.fwd(
                t,
                1,
                vec![
                    xor!(f(4 * v - 3), f(4 * v), at(2 * v), at(2 * v1 - 1)),
                    // the second term cancels b~_{2(v-1)} at node 1~
                    xor!(ft(2 * v - 1), ft(2 * v1)),
                ],
            );
            p.fwd(
                t,
                2,
                vec![
                    xor!(f(4 * v - 2), f(4 * v - 1), bt(2 * v - 1), bt(2 * v1)),
                    xor!(ft(2 * v), ft(2 * v1 - 1)),
                ],
            );
            let h = i - (pow2(ell - 2) - 2);
            let z = h * big - (ell - 3);
            let z2 = h * big - (ell - 2);
            let z1 = h * big - (ell - 1);
            p.bwd(
                t,
                1,
                vec![xor!(b(4 * z - 1), b(4 * z2 - 3), b(4 * z2), b(4 * z1 - 2), ft(2 * z2))],
            );
            p.bwd(
                t,
                2,
                vec![xor!(a(4 * z), a(4 * z2 - 2), a(4 * z2 - 1), a(4 * z1 - 3), ft(2 * z2 - 1))],
            );
        }
    }
    Ok(p)
}

pub fn two_way_12_10(l: usize, m: usize) -> Result<Scheme, SchemeError> {
    compile(program(l, m)?)
}
