//! Feedback-free constructions on single elementary channels.

use crate::channel::ChannelConfig;

use super::expr::{a, b, Expr};
use super::{compile, FeedbackMode, Program, Scheme, SchemeError};

/// One slot of the repetition schemes on `(m, n)` with an idle backward side.
pub fn program(m: usize, n: usize) -> Result<Program, SchemeError> {
    let cfg = ChannelConfig::new(m, n, 0, 0);
    let name = format!("nf:{m},{n}");
    let mut p = match (m, n) {
        (0, 1) | (1, 0) => Program::new(name, cfg, 1, 0, 0, FeedbackMode::None),
        (1, 2) | (2, 1) => {
            let mut p = Program::new(name, cfg, 1, 1, 0, FeedbackMode::None);
            p.fwd(1, 1, vec![a(1), a(1)]);
            p.fwd(1, 2, vec![b(1), b(1)]);
            p
        }
        (2, 3) | (3, 2) => {
            let mut p = Program::new(name, cfg, 1, 2, 0, FeedbackMode::None);
            p.fwd(1, 1, vec![a(1), a(2)]);
            p.fwd(1, 2, vec![b(2), b(1)]);
            p
        }
        (k, l) if k == l => {
            let mut p = Program::new(name, cfg, 1, k, 0, FeedbackMode::None);
            let lv = |f: fn(i64) -> Expr| (1..=k as i64).map(f).collect();
            p.fwd(1, 1, lv(a));
            p.fwd(1, 2, lv(b));
            p
        }
        _ => {
            return Err(SchemeError::Unsupported(format!(
                "nf:{m},{n} is not an elementary channel"
            )))
        }
    };
    p.params = Default::default();
    Ok(p)
}

pub fn non_feedback(m: usize, n: usize) -> Result<Scheme, SchemeError> {
    compile(program(m, n)?)
}
