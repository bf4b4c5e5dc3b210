//! Two-way scheme for the forward `(1,2)`, backward `(2,1)` channel.
//!
//! `3L` slots. The first `2L` slots superimpose fresh symbols and relayed
//! feedback, with neutralizing terms on the bottom levels; the last `L`
//! slots resolve the outstanding functions in reverse order, each round
//! unlocking side information for the next.

use crate::channel::ChannelConfig;
use crate::xor;

use super::expr::{a, at, b, bt, f, ft};
use super::{compile, FeedbackMode, Program, Scheme, SchemeError};

pub fn program(l: usize) -> Result<Program, SchemeError> {
    if l < 1 {
        return Err(SchemeError::Param("ex1 needs L >= 1".into()));
    }
    let mut p = Program::new(
        format!("ex1:L={l}"),
        ChannelConfig::new(1, 2, 2, 1),
        3 * l,
        4 * l,
        4 * (l - 1),
        FeedbackMode::InBand,
    );
    p.params.l = Some(l);
    let big = l as i64;

    for s in 1..=2 * big {
        let slot = s as usize;
        let u = 2 * (s - 2);
        p.fwd(
            slot,
            1,
            vec![
                xor!(a(2 * s - 1), ft(u), a(u)),
                xor!(a(2 * s), bt(u - 1), f(u - 1), a(u - 1), at(2 * (s - 4))),
            ],
        );
        p.fwd(
            slot,
            2,
            vec![
                xor!(b(2 * s), ft(u - 1), b(u - 1)),
                xor!(b(2 * s - 1), at(u), f(u), b(u), bt(2 * (s - 4) - 1)),
            ],
        );
        if s <= 2 * big - 2 {
            p.bwd(
                slot,
                1,
                vec![
                    xor!(at(2 * s), f(2 * s), at(u - 1)),
                    xor!(at(2 * s - 1), a(2 * s - 1), ft(u), a(u), at(u), f(u)),
                ],
            );
            p.bwd(
                slot,
                2,
                vec![
                    xor!(bt(2 * s - 1), f(2 * s - 1), bt(u)),
                    xor!(bt(2 * s), b(2 * s), ft(u - 1), b(u - 1), bt(u - 1), f(u - 1)),
                ],
            );
        } else {
            // plain relay, no fresh backward symbols
            p.bwd(slot, 1, vec![f(2 * s)]);
            p.bwd(slot, 2, vec![f(2 * s - 1)]);
        }
    }

    for r in 1..=big {
        let slot = (2 * big + r) as usize;
        let h = 4 * (big - r + 1);
        let g = 4 * (big - r);
        let e = 4 * (big - r - 1);
        if r == 1 {
            p.fwd(slot, 1, vec![f(h - 3), f(h - 1)]);
            p.fwd(slot, 2, vec![f(h - 2), f(h)]);
        } else {
            p.fwd(
                slot,
                1,
                vec![
                    xor!(ft(h - 3), bt(h - 3), f(h - 3), bt(g - 2), ft(g - 2)),
                    xor!(ft(h - 1), ft(g - 3), bt(h - 1), f(h - 1), bt(g), ft(g), ft(h - 2)),
                ],
            );
            p.fwd(
                slot,
                2,
                vec![
                    xor!(ft(h - 2), at(h - 2), f(h - 2), at(g - 3), ft(g - 3)),
                    xor!(ft(h), ft(g - 2), at(h), f(h), at(g - 1), ft(g - 1), ft(h - 3)),
                ],
            );
        }
        p.bwd(
            slot,
            1,
            vec![
                xor!(f(h - 3), a(h - 3), ft(g - 2), a(g - 2), f(g - 2)),
                xor!(
                    f(h - 1),
                    a(h - 1),
                    ft(g),
                    a(g),
                    f(g),
                    f(h - 2),
                    a(g - 3),
                    ft(e - 2),
                    a(e - 2),
                    f(e - 2)
                ),
            ],
        );
        p.bwd(
            slot,
            2,
            vec![
                xor!(f(h - 2), b(h - 2), ft(g - 3), b(g - 3), f(g - 3)),
                xor!(
                    f(h),
                    b(h),
                    ft(g - 1),
                    b(g - 1),
                    f(g - 1),
                    f(h - 3),
                    b(g - 2),
                    ft(e - 3),
                    b(e - 3),
                    f(e - 3)
                ),
            ],
        );
    }
    Ok(p)
}

pub fn two_way_12_21(l: usize) -> Result<Scheme, SchemeError> {
    compile(program(l)?)
}
