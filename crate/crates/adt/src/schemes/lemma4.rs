//! Building blocks that pair forward and backward elementary channels.
//!
//! `l4i` runs on forward `(0,1)` against backward `(1,0)`: each forward
//! sender reaches only its own receiver and each backward sender only the
//! opposite forward node, so every function has to be assembled by relaying
//! through the other direction. The `iii`, `iv` and `v` blocks tile unit
//! schemes over `i` forward and `j` backward copies of their elementary
//! channels.

use crate::channel::ChannelConfig;
use crate::xor;

use super::compose::{embed, Placement};
use super::expr::{a, at, b, bt, f, ft, Expr};
use super::{compile, elementary, example1, FeedbackMode, Orientation, Program, Scheme, SchemeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Iii,
    Iv,
    V,
}

impl BlockKind {
    pub fn label(self) -> &'static str {
        match self {
            BlockKind::Iii => "iii",
            BlockKind::Iv => "iv",
            BlockKind::V => "v",
        }
    }
}

/// `3L+1` slots, `2L` forward and `L` backward functions.
///
/// The first `L` slots chain fresh forward symbols through the backward
/// echo of the previous slot. Slot `L+1` closes the backward functions.
/// Then `L` pairs of slots unwind the chain from the end, each pair freeing
/// the side information the next pair needs.
pub fn program_i(l: usize) -> Result<Program, SchemeError> {
    if l < 1 {
        return Err(SchemeError::Param("l4i needs L >= 1".into()));
    }
    let mut p = Program::new(
        format!("l4i:L={l}"),
        ChannelConfig::new(0, 1, 1, 0),
        3 * l + 1,
        2 * l,
        l,
        FeedbackMode::InBand,
    );
    p.params.l = Some(l);
    let big = l as i64;

    let mut echo = [Expr::zero(), Expr::zero()];
    for s in 1..=big {
        let x1 = xor!(a(2 * s - 1), a(2 * s - 2)) ^ echo[1].clone();
        let x2 = xor!(b(2 * s), b(2 * s - 3)) ^ echo[0].clone();
        echo = [x1.clone() ^ at(s), x2.clone() ^ bt(s)];
        p.fwd(s as usize, 1, vec![x1]);
        p.fwd(s as usize, 2, vec![x2]);
        p.bwd(s as usize, 1, vec![echo[0].clone()]);
        p.bwd(s as usize, 2, vec![echo[1].clone()]);
    }

    let t = l + 1;
    p.fwd(t, 1, vec![xor!(b(2 * big), b(2 * big - 3), bt(big), at(big - 1))]);
    p.fwd(t, 2, vec![xor!(a(2 * big - 1), a(2 * big - 2), at(big), bt(big - 1))]);
    p.bwd(t, 1, vec![xor!(b(2 * big), b(2 * big - 3), ft(big))]);
    p.bwd(t, 2, vec![xor!(a(2 * big - 1), a(2 * big - 2), ft(big))]);

    for s in (1..=big).rev() {
        let t = (l + 2) + 2 * (l - s as usize);
        p.fwd(t, 1, vec![xor!(f(2 * s), f(2 * s - 3), at(s), at(s - 1))]);
        p.fwd(t, 2, vec![xor!(f(2 * s - 1), f(2 * s - 2), bt(s), bt(s - 1))]);
        p.bwd(t, 1, vec![xor!(f(2 * s), f(2 * s - 3))]);
        p.bwd(t, 2, vec![xor!(f(2 * s - 1), f(2 * s - 2))]);

        p.fwd(t + 1, 1, vec![xor!(f(2 * s - 1), f(2 * s - 2))]);
        p.fwd(t + 1, 2, vec![xor!(f(2 * s), f(2 * s - 3))]);
        if s > 1 {
            p.bwd(t + 1, 1, vec![xor!(b(2 * s - 1), b(2 * s - 5), ft(s - 1))]);
            p.bwd(t + 1, 2, vec![xor!(a(2 * s), a(2 * s - 4), ft(s - 1))]);
        }
    }
    Ok(p)
}

/// The backward-heavy variant: the directions are exchanged with a one-phase
/// delay, then 1~ and 2~ are renamed so the channel is `(0,1)/(1,0)` again.
pub fn program_i_oriented(l: usize, o: Orientation) -> Result<Program, SchemeError> {
    let p = program_i(l)?;
    Ok(match o {
        Orientation::ForwardHeavy => p,
        Orientation::BackwardHeavy => {
            let mut q = p.delayed_mirror().relabel_backward_nodes();
            q.name = format!("l4i:L={l},backward-heavy");
            q.params.orientation = Some(o);
            q
        }
    })
}

pub fn lemma4_i(l: usize, o: Orientation) -> Result<Scheme, SchemeError> {
    compile(program_i_oriented(l, o)?)
}

/// Forward `(2,3)` against backward `(2,1)`, three slots.
pub fn unit_v() -> Program {
    let mut p = Program::new("l4:v:unit", ChannelConfig::new(2, 3, 2, 1), 3, 6, 4, FeedbackMode::InBand);
    p.fwd(1, 1, vec![a(1), a(2)]);
    p.fwd(1, 2, vec![b(2), b(1)]);
    p.bwd(1, 1, vec![at(1), at(2)]);
    p.bwd(1, 2, vec![bt(2), bt(1)]);
    p.fwd(2, 1, vec![a(3), a(4)]);
    p.fwd(2, 2, vec![b(4), b(3)]);
    p.bwd(2, 1, vec![at(3), at(4)]);
    p.bwd(2, 2, vec![bt(4), bt(3)]);
    p.fwd(3, 1, vec![xor!(a(5), ft(1), bt(4)), xor!(a(6), bt(2)), a(5)]);
    p.fwd(3, 2, vec![xor!(b(6), ft(2), at(3)), xor!(b(5), at(1)), b(6)]);
    p.bwd(3, 1, vec![xor!(b(5), ft(1), ft(4)), f(6)]);
    p.bwd(3, 2, vec![xor!(a(6), ft(2), ft(3)), f(5)]);
    p
}

/// Forward `(2,3)` against backward `(1,0)`, three slots.
pub fn unit_iii() -> Program {
    let mut p = Program::new("l4:iii:unit", ChannelConfig::new(2, 3, 1, 0), 3, 6, 2, FeedbackMode::InBand);
    p.fwd(1, 1, vec![a(1), a(2)]);
    p.fwd(1, 2, vec![b(2), b(1)]);
    p.bwd(1, 1, vec![at(1)]);
    p.bwd(1, 2, vec![bt(2)]);
    p.fwd(2, 1, vec![xor!(a(3), bt(2)), a(4), a(3)]);
    p.fwd(2, 2, vec![xor!(b(4), at(1)), b(3), b(4)]);
    p.bwd(2, 1, vec![xor!(ft(2), b(3))]);
    p.bwd(2, 2, vec![xor!(ft(1), a(4))]);
    p.fwd(3, 1, vec![xor!(a(5), ft(1), a(4)), a(6), a(5)]);
    p.fwd(3, 2, vec![xor!(b(6), ft(2), b(3)), b(5), b(6)]);
    p.bwd(3, 1, vec![xor!(ft(1), b(5), b(4))]);
    p.bwd(3, 2, vec![xor!(ft(2), a(6), a(3))]);
    p
}

/// Levels `r, r+d, r+2d, ...` below `q`: the chain a sub-channel occupies.
pub fn chain(r: usize, d: usize, q: usize) -> Vec<usize> {
    if d == 0 {
        return (0..q).collect();
    }
    (r..q).step_by(d).collect()
}

fn side_conditions(kind: BlockKind, i: usize, j: usize) -> bool {
    match kind {
        BlockKind::Iii => 3 * i >= 2 * j,
        BlockKind::Iv => 2 * i >= j && 2 * j >= i,
        BlockKind::V => 3 * i >= j,
    }
}

/// Tiled program on `i` forward and `j` backward elementary copies.
pub fn block_program(
    kind: BlockKind,
    i: usize,
    j: usize,
    l: Option<usize>,
) -> Result<Program, SchemeError> {
    let id = format!("l4:{}:i={i},j={j}", kind.label());
    if i == 0 || j == 0 {
        return Err(SchemeError::Param(format!("{id}: i and j must be positive")));
    }
    if !side_conditions(kind, i, j) {
        return Err(SchemeError::Unsupported(format!("{id}: side condition fails")));
    }
    let (config, unit, fwd_d, bwd_d) = match kind {
        BlockKind::Iii => (ChannelConfig::new(2 * i, 3 * i, j, 0), unit_iii(), i, j),
        BlockKind::V => (ChannelConfig::new(2 * i, 3 * i, 2 * j, j), unit_v(), i, j),
        BlockKind::Iv => {
            if i != j {
                return Err(SchemeError::Unsupported(format!("{id}: only i = j is built")));
            }
            let l = l.unwrap_or(2);
            (ChannelConfig::new(i, 2 * i, 2 * j, j), example1::program(l)?, i, j)
        }
    };
    if j > i {
        return Err(SchemeError::Unsupported(format!("{id}: only j <= i is built")));
    }
    let mut parts = Vec::new();
    for r in 0..i {
        let fwd_levels = chain(r, fwd_d, config.q());
        if r < j {
            parts.push(Placement {
                program: unit.clone(),
                fwd_levels,
                bwd_levels: chain(r, bwd_d, config.qt()),
            });
        } else {
            let c = unit.config;
            parts.push(Placement {
                program: elementary::program(c.m, c.n)?,
                fwd_levels,
                bwd_levels: Vec::new(),
            });
        }
    }
    let mut p = embed(id, config, &parts)?;
    p.params.l = if kind == BlockKind::Iv { l.or(Some(2)) } else { None };
    Ok(p)
}

pub fn lemma4_block(
    kind: BlockKind,
    i: usize,
    j: usize,
    l: Option<usize>,
    _m: Option<usize>,
) -> Result<Scheme, SchemeError> {
    compile(block_program(kind, i, j, l)?)
}
