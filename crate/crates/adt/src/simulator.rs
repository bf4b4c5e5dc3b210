//! Slotted execution of compiled schemes and their verification.
//!
//! Each slot runs a forward phase then a backward phase. Encoders are
//! handed only the receptions that exist at their phase, so a scheme that
//! reaches ahead fails with [`SimError::Causality`] instead of reading data.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::capacity::{baseline_region, two_way_region, Baseline};
use crate::channel::{backward_outputs, forward_outputs, ChannelConfig};
use crate::gf2::BitVector;
use crate::schemes::{count_in, Dir, FeedbackMode, Item, Node, Scheme};
use crate::{Rate, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("node {node} at slot {slot} referenced slot {referenced} which is not yet available")]
    Causality {
        node: Node,
        slot: usize,
        referenced: usize,
    },
    #[error("source assignment has {got} bits, scheme declares {expected}")]
    Sources { expected: usize, got: usize },
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
}

/// Source bits of the four senders; index 0 holds symbol 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sources {
    pub a: Vec<bool>,
    pub b: Vec<bool>,
    pub at: Vec<bool>,
    pub bt: Vec<bool>,
}

impl Sources {
    pub fn zeros(k: usize, kt: usize) -> Sources {
        Sources {
            a: vec![false; k],
            b: vec![false; k],
            at: vec![false; kt],
            bt: vec![false; kt],
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len() + self.b.len() + self.at.len() + self.bt.len()
    }

    /// Standard basis vector `i` over the order `a, b, a~, b~`.
    pub fn unit(k: usize, kt: usize, i: usize) -> Sources {
        let mut s = Sources::zeros(k, kt);
        let lens = [k, k, kt, kt];
        let mut i = i;
        for (f, len) in lens.into_iter().enumerate() {
            if i < len {
                s.family_mut(f)[i] = true;
                break;
            }
            i -= len;
        }
        s
    }

    pub fn random(k: usize, kt: usize, rng: &mut impl Rng) -> Sources {
        let mut draw = |n: usize| (0..n).map(|_| rng.gen::<bool>()).collect();
        Sources {
            a: draw(k),
            b: draw(k),
            at: draw(kt),
            bt: draw(kt),
        }
    }

    pub fn xor(&self, o: &Sources) -> Sources {
        let x = |p: &[bool], q: &[bool]| p.iter().zip(q).map(|(u, v)| u ^ v).collect();
        Sources {
            a: x(&self.a, &o.a),
            b: x(&self.b, &o.b),
            at: x(&self.at, &o.at),
            bt: x(&self.bt, &o.bt),
        }
    }

    fn family_mut(&mut self, f: usize) -> &mut Vec<bool> {
        match f {
            0 => &mut self.a,
            1 => &mut self.b,
            2 => &mut self.at,
            _ => &mut self.bt,
        }
    }

    fn own(&self, node: Node) -> &[bool] {
        match node {
            Node::One => &self.a,
            Node::Two => &self.b,
            Node::OneT => &self.at,
            Node::TwoT => &self.bt,
        }
    }

    /// Ground truth `a_l + b_l` (forward) or `a~_l + b~_l` (backward).
    pub fn truth(&self, dir: Dir, l: usize) -> bool {
        match dir {
            Dir::Forward => self.a[l - 1] ^ self.b[l - 1],
            Dir::Backward => self.at[l - 1] ^ self.bt[l - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotRecord {
    pub x: [BitVector; 2],
    pub y: [BitVector; 2],
    pub xt: [BitVector; 2],
    pub yt: [BitVector; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeEvent {
    pub node: Node,
    pub func: usize,
    pub value: bool,
    /// 1-based slot after which the value is known.
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub config: ChannelConfig,
    pub sources: Sources,
    pub slots: Vec<SlotRecord>,
    pub events: Vec<DecodeEvent>,
    /// Function indices the scheme counts, forward then backward.
    pub counted: [Vec<usize>; 2],
}

impl Transcript {
    pub fn n(&self) -> usize {
        self.slots.len()
    }

    /// Function indices decoded at both receivers of `dir`.
    pub fn decoded_both(&self, dir: Dir) -> Vec<usize> {
        let at = |node: Node| -> Vec<usize> {
            self.events
                .iter()
                .filter(|e| e.node == node)
                .map(|e| e.func)
                .collect()
        };
        let (r0, r1) = (at(Node::receiver(dir, 0)), at(Node::receiver(dir, 1)));
        let mut out: Vec<usize> = r0.into_iter().filter(|l| r1.contains(l)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Counted forward functions decoded at both receivers; see [`Scheme::k`].
    pub fn k(&self) -> usize {
        count_in(&self.decoded_both(Dir::Forward), &self.counted[0])
    }

    pub fn kt(&self) -> usize {
        count_in(&self.decoded_both(Dir::Backward), &self.counted[1])
    }

    /// Line-oriented dump; bit strings top to bottom.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.slots.iter().enumerate() {
            s += &format!(
                "t={} X1={} X2={} Y1={} Y2={} X~1={} X~2={} Y~1={} Y~2={}\n",
                i + 1,
                r.x[0],
                r.x[1],
                r.y[0],
                r.y[1],
                r.xt[0],
                r.xt[1],
                r.yt[0],
                r.yt[1]
            );
        }
        for e in &self.events {
            s += &format!(
                "dec node={} l={} v={} t={}\n",
                e.node,
                e.func,
                u8::from(e.value),
                e.slot
            );
        }
        s
    }
}

/// Flip of one received bit, used by the causality probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Injection {
    pub dir: Dir,
    /// Zero-based slot.
    pub slot: usize,
    pub rx: usize,
    pub level: usize,
}

struct View<'a> {
    own: &'a [bool],
    rx: &'a [BitVector],
    genie: &'a [[BitVector; 2]],
}

fn eval(items: &[Item], v: &View<'_>, node: Node, slot: usize) -> Result<bool, SimError> {
    let late = |referenced: usize| SimError::Causality {
        node,
        slot: slot + 1,
        referenced: referenced + 1,
    };
    let mut bit = false;
    for it in items {
        bit ^= match *it {
            Item::Own(i) => v.own[i - 1],
            Item::Rx { slot: s, level } => v.rx.get(s).ok_or_else(|| late(s))?.get(level),
            Item::Genie { slot: s, rx, level } => {
                v.genie.get(s).ok_or_else(|| late(s))?[rx].get(level)
            }
        };
    }
    Ok(bit)
}

fn transmit(
    s: &Scheme,
    dir: Dir,
    t: usize,
    sources: &Sources,
    rx: &[Vec<BitVector>; 4],
    genie: &[[BitVector; 2]],
) -> Result<[BitVector; 2], SimError> {
    let q = match dir {
        Dir::Forward => s.config().q(),
        Dir::Backward => s.config().qt(),
    };
    let mut out = [BitVector::zeros(q), BitVector::zeros(q)];
    for (k, x) in out.iter_mut().enumerate() {
        let node = Node::transmitter(dir, k);
        let view = View {
            own: sources.own(node),
            rx: &rx[node.index()],
            genie,
        };
        for (lvl, items) in s.encoder(dir, t, k).iter().enumerate() {
            x.set(lvl, eval(items, &view, node, t)?);
        }
    }
    Ok(out)
}

pub fn run(s: &Scheme, sources: &Sources) -> Result<Transcript, SimError> {
    run_with(s, sources, None)
}

/// [`run`] with an optional reception bit flip.
pub fn run_with(
    s: &Scheme,
    sources: &Sources,
    inj: Option<Injection>,
) -> Result<Transcript, SimError> {
    let p = s.program();
    let expected = 2 * p.k + 2 * p.kt;
    if sources.a.len() != p.k
        || sources.b.len() != p.k
        || sources.at.len() != p.kt
        || sources.bt.len() != p.kt
    {
        return Err(SimError::Sources {
            expected,
            got: sources.dim(),
        });
    }
    let cfg = s.config();
    let genie = s.mode() == FeedbackMode::Genie;
    let mut rx: [Vec<BitVector>; 4] = Default::default();
    let mut genie_f: Vec<[BitVector; 2]> = Vec::new();
    let mut genie_b: Vec<[BitVector; 2]> = Vec::new();
    let mut slots = Vec::with_capacity(s.n_slots());

    let flip = |dir: Dir, t: usize, ys: &mut [BitVector; 2]| {
        if let Some(i) = inj {
            if i.dir == dir && i.slot == t {
                ys[i.rx].flip(i.level);
            }
        }
    };

    for t in 0..s.n_slots() {
        let x = transmit(s, Dir::Forward, t, sources, &rx, if genie { &genie_f } else { &[] })?;
        let (y1, y2) = forward_outputs(&x[0], &x[1], cfg.m, cfg.n)?;
        let mut y = [y1, y2];
        flip(Dir::Forward, t, &mut y);
        for (r, yr) in y.iter().enumerate() {
            rx[Node::receiver(Dir::Forward, r).index()].push(yr.clone());
        }

        let xt = transmit(s, Dir::Backward, t, sources, &rx, if genie { &genie_b } else { &[] })?;
        let (yt1, yt2) = backward_outputs(&xt[0], &xt[1], cfg.mt, cfg.nt)?;
        let mut yt = [yt1, yt2];
        flip(Dir::Backward, t, &mut yt);
        for (r, yr) in yt.iter().enumerate() {
            rx[Node::receiver(Dir::Backward, r).index()].push(yr.clone());
        }
        genie_f.push(y.clone());
        genie_b.push(yt.clone());
        slots.push(SlotRecord { x, y, xt, yt });
    }

    let mut events = Vec::new();
    for node in Node::ALL {
        for d in s.decoders(node) {
            let view = View {
                own: sources.own(node),
                rx: &rx[node.index()][..=d.slot],
                genie: &[],
            };
            events.push(DecodeEvent {
                node,
                func: d.func,
                value: eval(&d.items, &view, node, d.slot)?,
                slot: d.slot + 1,
            });
        }
    }
    Ok(Transcript {
        config: cfg,
        sources: sources.clone(),
        slots,
        events,
        counted: s.program().counted.clone(),
    })
}

/// `(K/N, K~/N)` counting functions decoded at both receivers.
pub fn achieved_rates(t: &Transcript) -> Rate {
    let n = t.n().max(1) as i64;
    Rate::new(
        Rational::new(t.k() as i64, n),
        Rational::new(t.kt() as i64, n),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFailure {
    pub basis: usize,
    pub node: Node,
    pub func: usize,
    pub expected: bool,
    pub got: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub scheme: String,
    pub config: ChannelConfig,
    pub n: usize,
    pub k: usize,
    pub kt: usize,
    pub basis_vectors: usize,
    pub basis_failures: Vec<BasisFailure>,
    pub linearity_pairs: usize,
    pub linearity_failures: usize,
    pub causality_probes: usize,
    pub causality_failures: usize,
    pub achieved: Rate,
    pub region_member: bool,
    /// Forward slots with an all-zero schedule.
    pub vacant_slots: usize,
    pub vacant_backward: usize,
    pub seed: u64,
    pub passed: bool,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme {}", self.scheme)?;
        writeln!(f, "config {}", self.config)?;
        writeln!(f, "slots {} K {} K~ {}", self.n, self.k, self.kt)?;
        writeln!(
            f,
            "basis {} vectors, {} failures",
            self.basis_vectors,
            self.basis_failures.len()
        )?;
        for b in self.basis_failures.iter().take(10) {
            writeln!(
                f,
                "  basis {} node {} l={} expected {} got {}",
                b.basis,
                b.node,
                b.func,
                u8::from(b.expected),
                u8::from(b.got)
            )?;
        }
        writeln!(
            f,
            "linearity {} pairs, {} failures (seed {})",
            self.linearity_pairs, self.linearity_failures, self.seed
        )?;
        writeln!(
            f,
            "causality {} probes, {} failures",
            self.causality_probes, self.causality_failures
        )?;
        writeln!(
            f,
            "vacant forward {} backward {}",
            self.vacant_slots, self.vacant_backward
        )?;
        writeln!(f, "region member {}", self.region_member)?;
        write!(
            f,
            "achieved {} {}",
            self.achieved,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

const LINEARITY_PAIRS: usize = 50;

fn same_linear(x: &Transcript, y: &Transcript, sum: &Transcript) -> bool {
    let xor2 = |p: &[BitVector; 2], q: &[BitVector; 2]| -> [BitVector; 2] {
        [
            p[0].xor(&q[0]).expect("same width"),
            p[1].xor(&q[1]).expect("same width"),
        ]
    };
    let slots_ok = x.slots.iter().zip(&y.slots).zip(&sum.slots).all(|((p, q), r)| {
        xor2(&p.x, &q.x) == r.x
            && xor2(&p.y, &q.y) == r.y
            && xor2(&p.xt, &q.xt) == r.xt
            && xor2(&p.yt, &q.yt) == r.yt
    });
    let events_ok = x.events.len() == sum.events.len()
        && x.events
            .iter()
            .zip(&y.events)
            .zip(&sum.events)
            .all(|((p, q), r)| p.value ^ q.value == r.value);
    slots_ok && events_ok
}

/// Transmissions scheduled no later than the injected reception must agree.
fn unchanged_before(base: &Transcript, probe: &Transcript, inj: &Injection) -> bool {
    base.slots
        .iter()
        .zip(&probe.slots)
        .enumerate()
        .all(|(t, (p, q))| {
            let fwd_fixed = t <= inj.slot;
            let bwd_fixed = match inj.dir {
                Dir::Forward => t < inj.slot,
                Dir::Backward => t <= inj.slot,
            };
            (!fwd_fixed || p.x == q.x) && (!bwd_fixed || p.xt == q.xt)
        })
}

/// Basis, linearity and causality checks plus rate accounting.
pub fn verify(s: &Scheme, seed: u64) -> VerificationReport {
    let p = s.program();
    let (k, kt) = (p.k, p.kt);
    let dim = 2 * k + 2 * kt;
    let mut basis_failures = Vec::new();
    let mut causality_failures = 0;

    for i in 0..dim {
        let src = Sources::unit(k, kt, i);
        match run(s, &src) {
            Ok(t) => {
                for e in &t.events {
                    let dir = if e.node.is_forward_tx() {
                        Dir::Backward
                    } else {
                        Dir::Forward
                    };
                    let expected = src.truth(dir, e.func);
                    if expected != e.value {
                        basis_failures.push(BasisFailure {
                            basis: i,
                            node: e.node,
                            func: e.func,
                            expected,
                            got: e.value,
                        });
                    }
                }
            }
            Err(_) => causality_failures += 1,
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut linearity_failures = 0;
    for _ in 0..LINEARITY_PAIRS {
        let u = Sources::random(k, kt, &mut rng);
        let v = Sources::random(k, kt, &mut rng);
        let ok = match (run(s, &u), run(s, &v), run(s, &u.xor(&v))) {
            (Ok(x), Ok(y), Ok(z)) => same_linear(&x, &y, &z),
            _ => false,
        };
        if !ok {
            linearity_failures += 1;
        }
    }

    let base_src = Sources::random(k, kt, &mut rng);
    let mut causality_probes = 0;
    let base = run(s, &base_src);
    let cfg = s.config();
    match &base {
        Ok(base) => {
            for t in 0..s.n_slots() {
                for (dir, q) in [(Dir::Forward, cfg.q()), (Dir::Backward, cfg.qt())] {
                    for rx in 0..2 {
                        for level in 0..q {
                            let inj = Injection {
                                dir,
                                slot: t,
                                rx,
                                level,
                            };
                            causality_probes += 1;
                            match run_with(s, &base_src, Some(inj)) {
                                Ok(probe) if unchanged_before(base, &probe, &inj) => {}
                                _ => causality_failures += 1,
                            }
                        }
                    }
                }
            }
        }
        Err(_) => causality_failures += 1,
    }

    let achieved = match &base {
        Ok(t) => achieved_rates(t),
        Err(_) => Rate::zero(),
    };
    let region = match s.mode() {
        FeedbackMode::Genie => baseline_region::<Rational>(&cfg, Baseline::PerfectFeedback),
        _ => two_way_region::<Rational>(&cfg),
    };
    let region_member = region.contains(&achieved);
    let passed = basis_failures.is_empty()
        && linearity_failures == 0
        && causality_failures == 0
        && region_member;
    VerificationReport {
        scheme: s.name().to_string(),
        config: cfg,
        n: s.n_slots(),
        k: base.as_ref().map(|t| t.k()).unwrap_or(0),
        kt: base.as_ref().map(|t| t.kt()).unwrap_or(0),
        basis_vectors: dim,
        basis_failures,
        linearity_pairs: LINEARITY_PAIRS,
        linearity_failures,
        causality_probes,
        causality_failures,
        achieved,
        region_member,
        vacant_slots: p.vacant_slots(Dir::Forward),
        vacant_backward: p.vacant_slots(Dir::Backward),
        seed,
        passed,
    }
}
