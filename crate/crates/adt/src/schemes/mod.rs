//! Catalog of linear coding schemes.
//!
//! A scheme is written as a [`Program`]: for every slot, the symbolic signal
//! each transmitter puts on each level. [`compile`] checks that every signal
//! is computable from what the node has at that point and produces the
//! runtime encoders and the decoders.
//!
//! Timing within a slot: the forward phase goes first, then the backward
//! phase. A backward transmitter may use the forward reception of the same
//! slot; a forward transmitter sees backward receptions of earlier slots only.

pub mod compile;
pub mod compose;
pub mod elementary;
pub mod example1;
pub mod example2;
pub mod expr;
pub mod feedback;
pub mod lemma4;

use std::fmt;

use thiserror::Error;

use crate::channel::ChannelConfig;
use crate::{Rate, Rational};

pub use compile::{compile, DecodeRule, Item};
use expr::{Expr, Fam};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("node {node} cannot form {signal} at slot {slot}, level {level}")]
    NotComputable {
        node: Node,
        slot: usize,
        level: usize,
        signal: String,
    },
    #[error("symbol {0} outside the declared source range")]
    SymbolRange(String),
    #[error("malformed program: {0}")]
    Shape(String),
    #[error("unknown scheme id {0:?}")]
    UnknownId(String),
    #[error("plan: {0}")]
    Plan(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Forward,
    Backward,
}

/// The four terminals. `One`/`Two` send forward, `OneT`/`TwoT` send backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    One,
    Two,
    OneT,
    TwoT,
}

impl Node {
    pub const ALL: [Node; 4] = [Node::One, Node::Two, Node::OneT, Node::TwoT];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_forward_tx(self) -> bool {
        matches!(self, Node::One | Node::Two)
    }

    pub fn transmitter(dir: Dir, k: usize) -> Node {
        match (dir, k) {
            (Dir::Forward, 0) => Node::One,
            (Dir::Forward, _) => Node::Two,
            (Dir::Backward, 0) => Node::OneT,
            (Dir::Backward, _) => Node::TwoT,
        }
    }

    /// Receiver `r` of the outputs of direction `dir`.
    pub fn receiver(dir: Dir, r: usize) -> Node {
        match dir {
            Dir::Forward => Node::transmitter(Dir::Backward, r),
            Dir::Backward => Node::transmitter(Dir::Forward, r),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Node::One => "1",
            Node::Two => "2",
            Node::OneT => "1~",
            Node::TwoT => "2~",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackMode {
    InBand,
    Genie,
    None,
}

impl fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedbackMode::InBand => "in-band",
            FeedbackMode::Genie => "genie",
            FeedbackMode::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    ForwardHeavy,
    BackwardHeavy,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub orientation: Option<Orientation>,
}

/// Symbolic schedule: `fwd[t][k][i]` is what forward node `k+1` puts on level
/// `i+1` at slot `t+1`; `bwd` likewise for the backward nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub name: String,
    pub config: ChannelConfig,
    pub params: Params,
    /// Source bits per forward sender (`a_1..a_k`, `b_1..b_k`).
    pub k: usize,
    /// Source bits per backward sender.
    pub kt: usize,
    pub mode: FeedbackMode,
    pub fwd: Vec<[Vec<Expr>; 2]>,
    pub bwd: Vec<[Vec<Expr>; 2]>,
    /// Function indices that count towards `K` and `K~`. Defaults to all of
    /// them; a scheme that leaves some functions in flight at its last slot
    /// lists only the ones it promises to complete.
    pub counted: [Vec<usize>; 2],
}

impl Program {
    pub fn new(
        name: impl Into<String>,
        config: ChannelConfig,
        slots: usize,
        k: usize,
        kt: usize,
        mode: FeedbackMode,
    ) -> Program {
        let zf = vec![Expr::zero(); config.q()];
        let zb = vec![Expr::zero(); config.qt()];
        Program {
            name: name.into(),
            config,
            params: Params::default(),
            k,
            kt,
            mode,
            fwd: vec![[zf.clone(), zf]; slots],
            bwd: vec![[zb.clone(), zb]; slots],
            counted: [(1..=k).collect(), (1..=kt).collect()],
        }
    }

    pub fn slots(&self) -> usize {
        self.fwd.len()
    }

    /// Sets forward node `node` (1 or 2) at 1-based `slot`, levels top down.
    /// Missing lower levels stay zero.
    pub fn fwd(&mut self, slot: usize, node: usize, levels: Vec<Expr>) {
        let q = self.config.q();
        Self::put(&mut self.fwd[slot - 1][node - 1], levels, q);
    }

    /// Backward counterpart of [`Program::fwd`].
    pub fn bwd(&mut self, slot: usize, node: usize, levels: Vec<Expr>) {
        let q = self.config.qt();
        Self::put(&mut self.bwd[slot - 1][node - 1], levels, q);
    }

    fn put(dst: &mut Vec<Expr>, levels: Vec<Expr>, q: usize) {
        assert!(levels.len() <= q, "{} levels on a {q}-level input", levels.len());
        *dst = levels;
        dst.resize(q, Expr::zero());
    }

    fn check_shape(&self) -> Result<(), SchemeError> {
        if self.fwd.len() != self.bwd.len() {
            return Err(SchemeError::Shape("slot counts differ".into()));
        }
        let (q, qt) = (self.config.q(), self.config.qt());
        for t in 0..self.slots() {
            for k in 0..2 {
                if self.fwd[t][k].len() != q || self.bwd[t][k].len() != qt {
                    return Err(SchemeError::Shape(format!("slot {} has wrong width", t + 1)));
                }
            }
        }
        Ok(())
    }

    /// Same schedule with the two directions exchanged, slot for slot.
    pub fn mirrored(&self) -> Program {
        let swap = |side: &[Vec<Expr>; 2]| {
            side.clone()
                .map(|lv| lv.iter().map(|e| e.map(|mut s| { s.fam = s.fam.swapped(); s })).collect())
        };
        Program {
            name: format!("mirror({})", self.name),
            config: self.config.swapped(),
            params: self.params.clone(),
            k: self.kt,
            kt: self.k,
            mode: self.mode,
            fwd: self.bwd.iter().map(swap).collect(),
            bwd: self.fwd.iter().map(swap).collect(),
            counted: [self.counted[1].clone(), self.counted[0].clone()],
        }
    }

    /// Same schedule with nodes 1~ and 2~ (and their sources) renamed into
    /// each other. The channel becomes `(n,m)/(n~,m~)`.
    pub fn relabel_backward_nodes(&self) -> Program {
        let ren = |e: &Expr| {
            e.map(|mut s| {
                s.fam = match s.fam {
                    Fam::At => Fam::Bt,
                    Fam::Bt => Fam::At,
                    f => f,
                };
                s
            })
        };
        let c = self.config;
        Program {
            name: format!("relabel({})", self.name),
            config: ChannelConfig::new(c.n, c.m, c.nt, c.mt),
            fwd: self
                .fwd
                .iter()
                .map(|side| side.clone().map(|lv| lv.iter().map(ren).collect()))
                .collect(),
            bwd: self
                .bwd
                .iter()
                .map(|side| [side[1].iter().map(ren).collect(), side[0].iter().map(ren).collect()])
                .collect(),
            ..self.clone()
        }
    }

    /// Mirror with the new backward phase of slot `t` carrying the old forward
    /// phase of slot `t` and the new forward phase of slot `t+1` carrying the
    /// old backward phase of slot `t`. Keeps every causal dependency causal;
    /// costs one slot unless the old last backward phase was silent.
    pub fn delayed_mirror(&self) -> Program {
        let m = self.mirrored();
        let n = m.slots();
        let zf = vec![Expr::zero(); m.config.q()];
        let zb = vec![Expr::zero(); m.config.qt()];
        let mut fwd = vec![[zf.clone(), zf]];
        fwd.extend(m.fwd.iter().cloned());
        let mut bwd = m.bwd.clone();
        bwd.push([zb.clone(), zb]);
        debug_assert_eq!(fwd.len(), n + 1);
        let silent = |side: &[Vec<Expr>; 2]| side.iter().all(|lv| lv.iter().all(Expr::is_zero));
        if silent(&fwd[n]) && silent(&bwd[n]) {
            fwd.pop();
            bwd.pop();
        }
        Program {
            name: format!("mirror+1({})", self.name),
            fwd,
            bwd,
            ..m
        }
    }

    /// `times` back-to-back copies on fresh symbols.
    pub fn repeated(&self, times: usize) -> Program {
        let mut out = Program::new(
            format!("{}x{times}", self.name),
            self.config,
            self.slots() * times,
            self.k * times,
            self.kt * times,
            self.mode,
        );
        out.params = self.params.clone();
        out.counted = [
            (0..times).flat_map(|r| self.counted[0].iter().map(move |l| l + r * self.k)).collect(),
            (0..times).flat_map(|r| self.counted[1].iter().map(move |l| l + r * self.kt)).collect(),
        ];
        for r in 0..times {
            let shift = |e: &Expr| {
                e.map(|mut s| {
                    s.idx += if s.fam.is_forward() { r * self.k } else { r * self.kt };
                    s
                })
            };
            for t in 0..self.slots() {
                for k in 0..2 {
                    out.fwd[r * self.slots() + t][k] = self.fwd[t][k].iter().map(shift).collect();
                    out.bwd[r * self.slots() + t][k] = self.bwd[t][k].iter().map(shift).collect();
                }
            }
        }
        out
    }

    /// Slots in which every transmitter of `dir` is scheduled all-zero.
    pub fn vacant_slots(&self, dir: Dir) -> usize {
        let side = match dir {
            Dir::Forward => &self.fwd,
            Dir::Backward => &self.bwd,
        };
        side.iter()
            .filter(|s| s.iter().all(|lv| lv.iter().all(Expr::is_zero)))
            .count()
    }
}

/// A compiled program: per-slot encoders and per-node decoders.
#[derive(Debug, Clone)]
pub struct Scheme {
    program: Program,
    fwd_enc: Vec<[Vec<Vec<Item>>; 2]>,
    bwd_enc: Vec<[Vec<Vec<Item>>; 2]>,
    decoders: [Vec<DecodeRule>; 4],
}

impl Scheme {
    fn assemble(
        program: Program,
        fwd_enc: Vec<[Vec<Vec<Item>>; 2]>,
        bwd_enc: Vec<[Vec<Vec<Item>>; 2]>,
        decoders: [Vec<DecodeRule>; 4],
    ) -> Scheme {
        Scheme {
            program,
            fwd_enc,
            bwd_enc,
            decoders,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn name(&self) -> &str {
        &self.program.name
    }

    pub fn config(&self) -> ChannelConfig {
        self.program.config
    }

    pub fn n_slots(&self) -> usize {
        self.program.slots()
    }

    pub fn mode(&self) -> FeedbackMode {
        self.program.mode
    }

    /// Every encoder and decoder is an xor of items.
    pub fn is_linear(&self) -> bool {
        true
    }

    /// Encoder of transmitter `k` (0 or 1) of `dir` at zero-based `slot`.
    pub fn encoder(&self, dir: Dir, slot: usize, k: usize) -> &[Vec<Item>] {
        match dir {
            Dir::Forward => &self.fwd_enc[slot][k],
            Dir::Backward => &self.bwd_enc[slot][k],
        }
    }

    pub fn decoders(&self, node: Node) -> &[DecodeRule] {
        &self.decoders[node.index()]
    }

    /// Function indices of `dir`'s messages decoded at both of its receivers.
    pub fn decoded_both(&self, dir: Dir) -> Vec<usize> {
        let (r0, r1) = (Node::receiver(dir, 0), Node::receiver(dir, 1));
        let other: Vec<usize> = self.decoders(r1).iter().map(|d| d.func).collect();
        let mut out: Vec<usize> = self
            .decoders(r0)
            .iter()
            .map(|d| d.func)
            .filter(|l| other.contains(l))
            .collect();
        out.sort_unstable();
        out
    }

    /// `K`: counted forward functions delivered to both backward nodes.
    pub fn k(&self) -> usize {
        count_in(&self.decoded_both(Dir::Forward), &self.program.counted[0])
    }

    /// `K~`, counted like [`Scheme::k`].
    pub fn kt(&self) -> usize {
        count_in(&self.decoded_both(Dir::Backward), &self.program.counted[1])
    }

    /// `(K/N, K~/N)` from the compiled decoders.
    pub fn rates(&self) -> Rate {
        let n = self.n_slots().max(1) as i64;
        Rate::new(
            Rational::new(self.k() as i64, n),
            Rational::new(self.kt() as i64, n),
        )
    }
}

/// How many of `done` appear in `counted`.
pub fn count_in(done: &[usize], counted: &[usize]) -> usize {
    done.iter().filter(|l| counted.contains(l)).count()
}

/// Builds a scheme from its catalog id, e.g. `ex1:L=2` or `nf:1,2`.
pub fn build(id: &str) -> Result<Scheme, SchemeError> {
    let unknown = || SchemeError::UnknownId(id.to_string());
    let (kind, rest) = id.split_once(':').ok_or_else(unknown)?;
    let kv = |s: &str| -> Result<Vec<(String, usize)>, SchemeError> {
        s.split(',')
            .filter(|p| p.contains('='))
            .map(|p| {
                let (k, v) = p.split_once('=').ok_or_else(unknown)?;
                let v = v.trim().parse().map_err(|_| unknown())?;
                Ok((k.trim().to_string(), v))
            })
            .collect()
    };
    let get = |pairs: &[(String, usize)], key: &str| {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| SchemeError::Param(format!("{id}: missing {key}")))
    };
    match kind {
        "nf" => {
            let (m, n) = rest.split_once(',').ok_or_else(unknown)?;
            let m = m.trim().parse().map_err(|_| unknown())?;
            let n = n.trim().parse().map_err(|_| unknown())?;
            elementary::non_feedback(m, n)
        }
        "pf" => match rest {
            "1,2" => feedback::perfect_feedback_12(),
            "1,0" => feedback::perfect_feedback_10(),
            _ => Err(unknown()),
        },
        "ex1" => example1::two_way_12_21(get(&kv(rest)?, "L")?),
        "ex2" => {
            let p = kv(rest)?;
            example2::two_way_12_10(get(&p, "L")?, get(&p, "M")?)
        }
        "l4i" => {
            let p = kv(rest)?;
            let orient = if rest.split(',').any(|t| t.trim() == "backward-heavy") {
                Orientation::BackwardHeavy
            } else {
                Orientation::ForwardHeavy
            };
            lemma4::lemma4_i(get(&p, "L")?, orient)
        }
        "l4" => {
            let (which, args) = rest.split_once(':').ok_or_else(unknown)?;
            let p = kv(args)?;
            let kind = match which {
                "iii" => lemma4::BlockKind::Iii,
                "iv" => lemma4::BlockKind::Iv,
                "v" => lemma4::BlockKind::V,
                _ => return Err(unknown()),
            };
            let l = p.iter().find(|(k, _)| k == "L").map(|(_, v)| *v);
            let m = p.iter().find(|(k, _)| k == "M").map(|(_, v)| *v);
            lemma4::lemma4_block(kind, get(&p, "i")?, get(&p, "j")?, l, m)
        }
        "compose" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| SchemeError::Plan(format!("{rest}: {e}")))?;
            let plan = crate::decomposition::SchemePlan::parse(&text)
                .map_err(|e| SchemeError::Plan(e.to_string()))?;
            compose::compose(&plan)
        }
        _ => Err(unknown()),
    }
}

/// Representative ids, one per construction family.
pub const CATALOG: &[&str] = &[
    "nf:<m>,<n>",
    "pf:1,2",
    "pf:1,0",
    "ex1:L=<L>",
    "ex2:L=<L>,M=<M>",
    "l4i:L=<L>,<forward-heavy|backward-heavy>",
    "l4:<iii|iv|v>:i=<i>,j=<j>",
    "compose:<plan-file>",
];
