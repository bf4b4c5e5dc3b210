//! Lowers a symbolic [`Program`] to runtime encoders and decoders.
//!
//! Each node keeps a row-reduced basis of everything it can form: its own
//! source bits and the receptions it has seen so far. A scheduled signal is
//! accepted only if it lies in that span; the recorded combination becomes
//! the node's encoder. Decoders are found the same way, by asking after
//! every reception which target functions have entered the span.

use crate::channel::taps;
use crate::gf2::BitVector;

use super::expr::{Expr, Fam, Sym};
use super::{Dir, FeedbackMode, Node, Program, Scheme, SchemeError};

/// A term a node may xor into an encoder or decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Item {
    /// Own source bit, 1-based index within the node's family.
    Own(usize),
    /// Own reception at zero-based `slot`, `level`.
    Rx { slot: usize, level: usize },
    /// Genie copy of receiver `rx`'s reception at `slot`, `level`.
    Genie { slot: usize, rx: usize, level: usize },
}

/// Node `func` value available once `slot` (zero-based) has been received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeRule {
    pub func: usize,
    pub slot: usize,
    pub items: Vec<Item>,
}

struct Basis {
    rows: Vec<(BitVector, BitVector)>,
    pivot: Vec<Option<usize>>,
    items: Vec<Item>,
    cap: usize,
}

impl Basis {
    fn new(dim: usize, cap: usize) -> Self {
        Basis {
            rows: Vec::new(),
            pivot: vec![None; dim],
            items: Vec::new(),
            cap,
        }
    }

    fn reduce(&self, v: &mut BitVector, combo: &mut BitVector) {
        while let Some(p) = v.first_one() {
            match self.pivot[p] {
                Some(r) => {
                    let (row, rc) = &self.rows[r];
                    v.xor_assign(row).expect("basis dimension");
                    combo.xor_assign(rc).expect("combo dimension");
                }
                None => return,
            }
        }
    }

    fn insert(&mut self, mut v: BitVector, item: Item) {
        let idx = self.items.len();
        self.items.push(item);
        let mut combo = BitVector::zeros(self.cap);
        combo.set(idx, true);
        self.reduce(&mut v, &mut combo);
        if let Some(p) = v.first_one() {
            self.pivot[p] = Some(self.rows.len());
            self.rows.push((v, combo));
        }
    }

    fn express(&self, target: &BitVector) -> Option<Vec<Item>> {
        let mut v = target.clone();
        let mut combo = BitVector::zeros(self.cap);
        self.reduce(&mut v, &mut combo);
        if !v.is_zero() {
            return None;
        }
        Some(
            (0..self.items.len())
                .filter(|&i| combo.get(i))
                .map(|i| self.items[i])
                .collect(),
        )
    }
}

struct Space {
    k: usize,
    kt: usize,
}

impl Space {
    fn dim(&self) -> usize {
        2 * self.k + 2 * self.kt
    }

    fn column(&self, s: &Sym) -> Result<usize, SchemeError> {
        let (base, bound) = match s.fam {
            Fam::A => (0, self.k),
            Fam::B => (self.k, self.k),
            Fam::At => (2 * self.k, self.kt),
            Fam::Bt => (2 * self.k + self.kt, self.kt),
        };
        if s.idx == 0 || s.idx > bound {
            return Err(SchemeError::SymbolRange(s.to_string()));
        }
        Ok(base + s.idx - 1)
    }

    fn vector(&self, e: &Expr) -> Result<BitVector, SchemeError> {
        let mut v = BitVector::zeros(self.dim());
        for s in e.syms() {
            v.flip(self.column(s)?);
        }
        Ok(v)
    }

    fn unit(&self, s: Sym) -> BitVector {
        let mut v = BitVector::zeros(self.dim());
        v.set(self.column(&s).expect("own symbol in range"), true);
        v
    }

    fn func(&self, fwd: bool, l: usize) -> BitVector {
        let (x, y) = if fwd { (Fam::A, Fam::B) } else { (Fam::At, Fam::Bt) };
        let mut v = self.unit(Sym { fam: x, idx: l });
        v.xor_assign(&self.unit(Sym { fam: y, idx: l }))
            .expect("same space");
        v
    }
}

fn symbolic_outputs(x: &[Vec<Expr>; 2], m: usize, n: usize) -> [Vec<Expr>; 2] {
    let t = taps(m, n);
    let mut out: [Vec<Expr>; 2] = [Vec::new(), Vec::new()];
    for r in 0..2 {
        out[r] = t[r]
            .iter()
            .map(|lvl| {
                let mut e = Expr::zero();
                for &(tx, j) in lvl {
                    e ^= &x[tx][j];
                }
                e
            })
            .collect();
    }
    out
}

/// Levels heard by the two receivers of one direction.
pub(crate) type Heard = [Vec<Expr>; 2];

/// Symbolic receptions of every slot: `(Y, Y~)` per slot.
pub(crate) fn receptions(p: &Program) -> Vec<(Heard, Heard)> {
    let c = p.config;
    (0..p.slots())
        .map(|t| {
            (
                symbolic_outputs(&p.fwd[t], c.m, c.n),
                symbolic_outputs(&p.bwd[t], c.mt, c.nt),
            )
        })
        .collect()
}

/// Compiles `p`; fails if some scheduled signal is not computable causally.
pub fn compile(p: Program) -> Result<Scheme, SchemeError> {
    p.check_shape()?;
    let c = p.config;
    let (q, qt) = (c.q(), c.qt());
    let n_slots = p.slots();
    let sp = Space { k: p.k, kt: p.kt };
    let dim = sp.dim();
    let genie = p.mode == FeedbackMode::Genie;

    let own_fam = |node: Node| match node {
        Node::One => Fam::A,
        Node::Two => Fam::B,
        Node::OneT => Fam::At,
        Node::TwoT => Fam::Bt,
    };
    let own_count = |node: Node| if node.is_forward_tx() { p.k } else { p.kt };
    let cap = |node: Node| {
        let (rx_q, tx_q) = if node.is_forward_tx() { (qt, q) } else { (q, qt) };
        own_count(node) + n_slots * rx_q + if genie { 2 * n_slots * tx_q } else { 0 }
    };

    let mut enc: Vec<Basis> = Node::ALL.iter().map(|&nd| Basis::new(dim, cap(nd))).collect();
    let mut dec: Vec<Basis> = Node::ALL.iter().map(|&nd| Basis::new(dim, cap(nd))).collect();
    for &nd in &Node::ALL {
        for i in 1..=own_count(nd) {
            let v = sp.unit(Sym { fam: own_fam(nd), idx: i });
            enc[nd.index()].insert(v.clone(), Item::Own(i));
            dec[nd.index()].insert(v, Item::Own(i));
        }
    }

    let mut fwd_enc = Vec::with_capacity(n_slots);
    let mut bwd_enc = Vec::with_capacity(n_slots);
    let mut decoders: [Vec<DecodeRule>; 4] = Default::default();
    let mut pending: Vec<Vec<usize>> = Node::ALL
        .iter()
        .map(|nd| {
            let k = if nd.is_forward_tx() { p.kt } else { p.k };
            (1..=k).collect()
        })
        .collect();
    let rx = receptions(&p);

    let lower = |dir: Dir,
                     t: usize,
                     enc: &[Basis],
                     txs: &[Vec<Expr>; 2]|
     -> Result<[Vec<Vec<Item>>; 2], SchemeError> {
        let mut out: [Vec<Vec<Item>>; 2] = Default::default();
        for k in 0..2 {
            let node = Node::transmitter(dir, k);
            for (lvl, e) in txs[k].iter().enumerate() {
                let v = sp.vector(e)?;
                let items = enc[node.index()].express(&v).ok_or_else(|| {
                    SchemeError::NotComputable {
                        node,
                        slot: t + 1,
                        level: lvl + 1,
                        signal: e.to_string(),
                    }
                })?;
                out[k].push(items);
            }
        }
        Ok(out)
    };

    for t in 0..n_slots {
        for dir in [Dir::Forward, Dir::Backward] {
            let (txs, ys) = match dir {
                Dir::Forward => (&p.fwd[t], &rx[t].0),
                Dir::Backward => (&p.bwd[t], &rx[t].1),
            };
            let lowered = lower(dir, t, &enc, txs)?;
            match dir {
                Dir::Forward => fwd_enc.push(lowered),
                Dir::Backward => bwd_enc.push(lowered),
            }
            for r in 0..2 {
                let node = Node::receiver(dir, r);
                let ni = node.index();
                for (lvl, e) in ys[r].iter().enumerate() {
                    let v = sp.vector(e)?;
                    let item = Item::Rx { slot: t, level: lvl };
                    enc[ni].insert(v.clone(), item);
                    dec[ni].insert(v, item);
                }
                let fwd_funcs = dir == Dir::Forward;
                let mut still = Vec::new();
                for &l in &pending[ni] {
                    match dec[ni].express(&sp.func(fwd_funcs, l)) {
                        Some(items) => decoders[ni].push(DecodeRule {
                            func: l,
                            slot: t,
                            items,
                        }),
                        None => still.push(l),
                    }
                }
                pending[ni] = still;
            }
        }
        if genie {
            for dir in [Dir::Forward, Dir::Backward] {
                let ys = match dir {
                    Dir::Forward => &rx[t].0,
                    Dir::Backward => &rx[t].1,
                };
                for k in 0..2 {
                    let ni = Node::transmitter(dir, k).index();
                    for (r, y) in ys.iter().enumerate() {
                        for (lvl, e) in y.iter().enumerate() {
                            let item = Item::Genie {
                                slot: t,
                                rx: r,
                                level: lvl,
                            };
                            enc[ni].insert(sp.vector(e)?, item);
                        }
                    }
                }
            }
        }
    }

    Ok(Scheme::assemble(p, fwd_enc, bwd_enc, decoders))
}
