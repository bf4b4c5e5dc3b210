//! Running several sub-schemes side by side on disjoint level sets.
//!
//! A sub-scheme for `(m',n')` is placed on a list of levels of the larger
//! channel, top level first. The placement is only accepted if the larger
//! channel wires those levels exactly like the smaller one and nothing else
//! leaks onto them, so the sub-schemes never see each other.

use num_integer::Integer;

use std::collections::{BTreeMap, VecDeque};

use crate::channel::{taps, ChannelConfig};
use crate::decomposition::{chains, Kind, Pairing, Part, SchemePlan};

use super::expr::Expr;
use super::lemma4::{program_i_oriented, unit_iii, unit_v};
use super::{compile, elementary, example1, example2, FeedbackMode, Orientation, Program, Scheme, SchemeError};

/// One sub-program and the big-channel levels (zero-based, top first) its
/// forward and backward inputs occupy.
#[derive(Debug, Clone)]
pub struct Placement {
    pub program: Program,
    pub fwd_levels: Vec<usize>,
    pub bwd_levels: Vec<usize>,
}

fn check_wiring(
    big: (usize, usize),
    sub: (usize, usize),
    levels: &[usize],
    what: &str,
) -> Result<(), SchemeError> {
    let bad = |msg: String| SchemeError::Plan(format!("{what}: {msg}"));
    let tb = taps(big.0, big.1);
    let ts = taps(sub.0, sub.1);
    if levels.len() != ts[0].len() {
        return Err(bad(format!("{} levels for a {}-level sub-channel", levels.len(), ts[0].len())));
    }
    let back = |lvl: usize| levels.iter().position(|&x| x == lvl);
    for r in 0..2 {
        for (lvl, tap) in tb[r].iter().enumerate() {
            let mut mine: Vec<(usize, usize)> = tap
                .iter()
                .filter_map(|&(tx, j)| back(j).map(|p| (tx, p)))
                .collect();
            mine.sort_unstable();
            let want = match back(lvl) {
                Some(p) => {
                    let mut w = ts[r][p].clone();
                    w.sort_unstable();
                    w
                }
                None => Vec::new(),
            };
            if mine != want {
                return Err(bad(format!("receiver {} level {} is not wired like the sub-channel", r + 1, lvl + 1)));
            }
        }
    }
    Ok(())
}

/// Places every part on its levels, repeated up to a common period, with
/// fresh symbol ranges per part.
pub fn embed(name: String, config: ChannelConfig, parts: &[Placement]) -> Result<Program, SchemeError> {
    if parts.is_empty() {
        return Err(SchemeError::Plan("nothing to compose".into()));
    }
    let mut used = [vec![false; config.q()], vec![false; config.qt()]];
    for (i, pt) in parts.iter().enumerate() {
        let c = pt.program.config;
        if pt.program.mode == FeedbackMode::Genie {
            return Err(SchemeError::Unsupported(format!("part {} uses genie feedback", i + 1)));
        }
        check_wiring((config.m, config.n), (c.m, c.n), &pt.fwd_levels, &format!("part {} forward", i + 1))?;
        check_wiring((config.mt, config.nt), (c.mt, c.nt), &pt.bwd_levels, &format!("part {} backward", i + 1))?;
        for (d, lv) in [&pt.fwd_levels, &pt.bwd_levels].into_iter().enumerate() {
            for &l in lv {
                if std::mem::replace(&mut used[d][l], true) {
                    return Err(SchemeError::Plan(format!("level {} used twice", l + 1)));
                }
            }
        }
    }

    let period = parts.iter().fold(1usize, |acc, pt| acc.lcm(&pt.program.slots().max(1)));
    let reps: Vec<Program> = parts
        .iter()
        .map(|pt| pt.program.repeated(period / pt.program.slots().max(1)))
        .collect();
    let k: usize = reps.iter().map(|p| p.k).sum();
    let kt: usize = reps.iter().map(|p| p.kt).sum();
    let mode = if reps.iter().any(|p| p.mode == FeedbackMode::InBand) {
        FeedbackMode::InBand
    } else {
        FeedbackMode::None
    };
    let mut out = Program::new(name, config, period, k, kt, mode);
    out.counted = [Vec::new(), Vec::new()];

    let (mut ok, mut okt) = (0, 0);
    for (pt, rp) in parts.iter().zip(&reps) {
        let shift = |e: &Expr| {
            e.map(|mut s| {
                s.idx += if s.fam.is_forward() { ok } else { okt };
                s
            })
        };
        for t in 0..period {
            for side in 0..2 {
                for (p, &lvl) in pt.fwd_levels.iter().enumerate() {
                    out.fwd[t][side][lvl] = shift(&rp.fwd[t][side][p]);
                }
                for (p, &lvl) in pt.bwd_levels.iter().enumerate() {
                    out.bwd[t][side][lvl] = shift(&rp.bwd[t][side][p]);
                }
            }
        }
        out.counted[0].extend(rp.counted[0].iter().map(|l| l + ok));
        out.counted[1].extend(rp.counted[1].iter().map(|l| l + okt));
        ok += rp.k;
        okt += rp.kt;
    }
    Ok(out)
}

/// One runnable copy inside a plan line, and whether it takes a forward
/// and a backward chain of the line's parts.
#[derive(Debug, Clone)]
pub struct Unit {
    pub program: Program,
    pub fwd: bool,
    pub bwd: bool,
}

/// Unit programs of a plan line, oriented like the real channel.
pub fn units(p: &Pairing, l: usize, m: usize) -> Result<Vec<Unit>, SchemeError> {
    let unsupported = || SchemeError::Unsupported(format!("{} block is not built", p.kind.label()));
    let mut out = Vec::new();
    if p.kind == Kind::Nf {
        if let Some(((a, b), k)) = p.fwd {
            let prog = elementary::program(a, b)?;
            out.extend((0..k).map(|_| Unit { program: prog.clone(), fwd: true, bwd: false }));
        }
        if let Some(((a, b), k)) = p.bwd {
            let prog = elementary::program(a, b)?.mirrored();
            out.extend((0..k).map(|_| Unit { program: prog.clone(), fwd: false, bwd: true }));
        }
        return Ok(out);
    }
    if !p.executable() {
        return Err(unsupported());
    }
    let (cf, cb) = if p.mirrored { (p.bwd, p.fwd) } else { (p.fwd, p.bwd) };
    let k = |s: Option<(Part, usize)>| s.map_or(0, |(_, k)| k);
    let (i, j) = (k(cf), k(cb));
    let both = |prog: Program, n: usize| (0..n).map(move |_| (prog.clone(), true, true));
    let fill = |n: usize| -> Result<Vec<(Program, bool, bool)>, SchemeError> {
        let nf = elementary::program(2, 3)?;
        Ok((0..n).map(|_| (nf.clone(), true, false)).collect())
    };
    let canon: Vec<(Program, bool, bool)> = match p.kind {
        Kind::L4ii => both(example2::program(l, m)?, i).collect(),
        Kind::L4iv => both(example1::program(l)?, i).collect(),
        Kind::L4i => both(program_i_oriented(l, Orientation::ForwardHeavy)?, i).collect(),
        Kind::L4iBwd => both(program_i_oriented(l, Orientation::BackwardHeavy)?, i).collect(),
        Kind::L4iii => both(unit_iii(), j).chain(fill(i - j)?).collect(),
        Kind::L4v => both(unit_v(), j).chain(fill(i - j)?).collect(),
        Kind::Nf | Kind::L3i | Kind::L3ii => return Err(unsupported()),
    };
    for (prog, f, b) in canon {
        out.push(if !p.mirrored {
            Unit { program: prog, fwd: f, bwd: b }
        } else if b {
            Unit { program: prog.delayed_mirror(), fwd: b, bwd: f }
        } else {
            Unit { program: prog.mirrored(), fwd: b, bwd: f }
        });
    }
    Ok(out)
}

/// The plan as one program over the original channel. Each unit takes the
/// next unused chain of its part, chains in residue order.
pub fn compose_program(plan: &SchemePlan) -> Result<Program, SchemeError> {
    if !plan.executable {
        return Err(SchemeError::Unsupported(format!(
            "plan for {} is not executable",
            plan.config
        )));
    }
    let c = plan.config;
    let pool = |m: usize, n: usize| {
        let mut by: BTreeMap<Part, VecDeque<Vec<usize>>> = BTreeMap::new();
        for (p, lv) in chains(m, n) {
            by.entry(p).or_default().push_back(lv);
        }
        by
    };
    let (mut fp, mut bp) = (pool(c.m, c.n), pool(c.mt, c.nt));
    let take = |by: &mut BTreeMap<Part, VecDeque<Vec<usize>>>, side: Option<(Part, usize)>| {
        let (p, _) = side.ok_or_else(|| SchemeError::Plan("unit needs a part the line lacks".into()))?;
        by.get_mut(&p)
            .and_then(VecDeque::pop_front)
            .ok_or_else(|| SchemeError::Plan(format!("no chain left for part ({},{})", p.0, p.1)))
    };
    let mut parts = Vec::new();
    for pr in &plan.pairs {
        for u in units(pr, plan.l, plan.m)? {
            let fwd_levels = if u.fwd { take(&mut fp, pr.fwd)? } else { Vec::new() };
            let bwd_levels = if u.bwd { take(&mut bp, pr.bwd)? } else { Vec::new() };
            parts.push(Placement { program: u.program, fwd_levels, bwd_levels });
        }
    }
    if fp.values().chain(bp.values()).any(|q| !q.is_empty()) {
        return Err(SchemeError::Plan("plan leaves parts unused".into()));
    }
    if parts.is_empty() {
        return Ok(Program::new(format!("compose({c})"), c, 1, 0, 0, FeedbackMode::None));
    }
    embed(format!("compose({c})"), c, &parts)
}

pub fn compose(plan: &SchemePlan) -> Result<Scheme, SchemeError> {
    compile(compose_program(plan)?)
}
