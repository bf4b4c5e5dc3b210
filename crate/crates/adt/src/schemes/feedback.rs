//! Perfect-feedback baselines. Feedback arrives through the genie with one
//! slot of delay; the opposite direction is idle.

use crate::channel::ChannelConfig;

use super::expr::{a, at, b, bt, f, ft};
use super::{compile, FeedbackMode, Program, Scheme, SchemeError};

/// Forward `(1,2)`: four functions in three slots.
pub fn program_12() -> Program {
    let mut p = Program::new("pf:1,2", ChannelConfig::new(1, 2, 0, 0), 3, 4, 0, FeedbackMode::Genie);
    p.fwd(1, 1, vec![a(1), a(2)]);
    p.fwd(1, 2, vec![b(2), b(1)]);
    p.fwd(2, 1, vec![a(3), a(4)]);
    p.fwd(2, 2, vec![b(4), b(3)]);
    p.fwd(3, 1, vec![f(1), f(3)]);
    p.fwd(3, 2, vec![f(2), f(4)]);
    p
}

/// Backward `(1,0)`: two functions in three slots.
pub fn program_10() -> Program {
    let mut p = Program::new("pf:1,0", ChannelConfig::new(0, 0, 1, 0), 3, 0, 2, FeedbackMode::Genie);
    p.bwd(1, 1, vec![at(1)]);
    p.bwd(1, 2, vec![bt(2)]);
    p.bwd(2, 1, vec![ft(2)]);
    p.bwd(2, 2, vec![ft(1)]);
    p.bwd(3, 1, vec![ft(1)]);
    p.bwd(3, 2, vec![ft(2)]);
    p
}

pub fn perfect_feedback_12() -> Result<Scheme, SchemeError> {
    compile(program_12())
}

pub fn perfect_feedback_10() -> Result<Scheme, SchemeError> {
    compile(program_10())
}
