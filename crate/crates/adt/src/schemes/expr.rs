//! Symbolic GF(2) signals: xor-sets of source symbols.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};

/// Source family: forward senders own `a`/`b`, backward senders own `ã`/`b̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fam {
    A,
    B,
    At,
    Bt,
}

impl Fam {
    /// Family with the direction roles exchanged.
    pub fn swapped(self) -> Fam {
        match self {
            Fam::A => Fam::At,
            Fam::B => Fam::Bt,
            Fam::At => Fam::A,
            Fam::Bt => Fam::B,
        }
    }

    pub fn is_forward(self) -> bool {
        matches!(self, Fam::A | Fam::B)
    }
}

/// One source bit, 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub fam: Fam,
    pub idx: usize,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.fam {
            Fam::A => "a",
            Fam::B => "b",
            Fam::At => "a~",
            Fam::Bt => "b~",
        };
        write!(f, "{p}{}", self.idx)
    }
}

/// Xor of a set of symbols. The empty set is the zero signal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr(BTreeSet<Sym>);

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    /// Single symbol; non-positive indices are null.
    pub fn sym(fam: Fam, idx: i64) -> Expr {
        let mut e = Expr::zero();
        if idx > 0 {
            e.0.insert(Sym {
                fam,
                idx: idx as usize,
            });
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syms(&self) -> impl Iterator<Item = &Sym> {
        self.0.iter()
    }

    /// Applies `f` to every symbol; pairs that collide cancel.
    pub fn map(&self, mut f: impl FnMut(Sym) -> Sym) -> Expr {
        let mut out = Expr::zero();
        for &s in &self.0 {
            out.toggle(f(s));
        }
        out
    }

    fn toggle(&mut self, s: Sym) {
        if !self.0.remove(&s) {
            self.0.insert(s);
        }
    }
}

impl BitXorAssign<&Expr> for Expr {
    fn bitxor_assign(&mut self, rhs: &Expr) {
        for &s in &rhs.0 {
            self.toggle(s);
        }
    }
}

impl BitXorAssign for Expr {
    fn bitxor_assign(&mut self, rhs: Expr) {
        *self ^= &rhs;
    }
}

impl BitXor for Expr {
    type Output = Expr;
    fn bitxor(mut self, rhs: Expr) -> Expr {
        self ^= &rhs;
        self
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub fn a(i: i64) -> Expr {
    Expr::sym(Fam::A, i)
}

pub fn b(i: i64) -> Expr {
    Expr::sym(Fam::B, i)
}

pub fn at(i: i64) -> Expr {
    Expr::sym(Fam::At, i)
}

pub fn bt(i: i64) -> Expr {
    Expr::sym(Fam::Bt, i)
}

/// `F_i = a_i + b_i`.
pub fn f(i: i64) -> Expr {
    a(i) ^ b(i)
}

/// `F~_i = a~_i + b~_i`.
pub fn ft(i: i64) -> Expr {
    at(i) ^ bt(i)
}

/// Xor of any number of expressions.
#[macro_export]
macro_rules! xor {
    ($($e:expr),+ $(,)?) => {{
        let mut acc = $crate::schemes::expr::Expr::zero();
        $( acc ^= $e; )+
        acc
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_cancels_and_nulls() {
        assert!((f(3) ^ a(3) ^ b(3)).is_zero());
        assert!(a(0).is_zero() && bt(-4).is_zero());
        assert_eq!(xor!(f(1), a(1)).to_string(), "b1");
    }
}
