//! Phase 1: index register → `(n, r)`-unary encoding, `k` terms at a time.

use alloc::format;
use alloc::vec::Vec;

use crate::bits::BasisString;
use crate::circuit::{Circuit, Gate, McxStrategy, QubitId};
use crate::pool::ScratchPool;
use crate::primitives::{
    binary_to_unary, fanout, fanout_clean, mcx, mcx_scratch, parity_fanin, unary_extract, UnaryBlock,
};
use crate::{Error, Result};

use super::plan::SynthesisPlan;

/// Wires of the Phase-1 working registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase1Layout {
    /// `ℓ_n` wires, most significant first; the first `ℓ_n − ℓ_k` are the prefix.
    pub index: Vec<QubitId>,
    pub unary_k: Vec<QubitId>,
    pub tag: Vec<QubitId>,
    pub a: Vec<QubitId>,
    /// `n′/r` one-hot blocks of `2^r` wires.
    pub blocks: Vec<Vec<QubitId>>,
}

impl Phase1Layout {
    /// Leases the registers after `index` in a fixed order.
    pub fn lease(plan: &SynthesisPlan, index: Vec<QubitId>, pool: &mut ScratchPool) -> Result<Self> {
        let unary_k = pool.lease(plan.k)?;
        let tag = pool.lease(plan.k)?;
        let a = pool.lease(plan.k)?;
        let width = 1usize << plan.r;
        let all = pool.lease(plan.blocks() * width)?;
        let blocks = all.chunks(width).map(<[QubitId]>::to_vec).collect();
        Ok(Self {
            index,
            unary_k,
            tag,
            a,
            blocks,
        })
    }

    pub fn k(&self) -> usize {
        self.unary_k.len()
    }

    pub fn prefix(&self) -> &[QubitId] {
        let lk = self.k().trailing_zeros() as usize;
        &self.index[..self.index.len() - lk]
    }

    pub fn suffix(&self) -> &[QubitId] {
        let lk = self.k().trailing_zeros() as usize;
        &self.index[self.index.len() - lk..]
    }

    /// Returns the registers that are back to `|0⟩` after Phase 1; the blocks stay leased.
    pub fn release_working(&self, pool: &mut ScratchPool) {
        pool.release(&self.index);
        pool.release(&self.unary_k);
        pool.release(&self.tag);
        pool.release(&self.a);
    }
}

/// `|j⟩|i⟩|0^k⟩ → |j⟩|0⟩|e_i⟩` on prefix, suffix and `unary_k`.
pub fn build_index_to_unary_k(circ: &mut Circuit, layout: &Phase1Layout, pool: &mut ScratchPool) -> Result<()> {
    if layout.k() == 1 {
        return circ.append(Gate::X(layout.unary_k[0]));
    }
    let block = UnaryBlock::new(layout.unary_k.clone())?;
    binary_to_unary(circ, layout.suffix(), &block, pool)?;
    unary_extract(circ, &block, layout.suffix(), pool)
}

/// Moves the terms of subset `j` from `|j⟩|0⟩|e_i⟩` to `|0⟩|0⟩|e_i⟩_A`,
/// using the tag register to broadcast the prefix match.
pub fn build_c1(
    circ: &mut Circuit,
    layout: &Phase1Layout,
    j: usize,
    pool: &mut ScratchPool,
    strategy: McxStrategy,
) -> Result<()> {
    let prefix = layout.prefix();
    let p = prefix.len();
    let zeros: Vec<QubitId> = (0..p).filter(|&t| (j >> (p - 1 - t)) & 1 == 0).map(|t| prefix[t]).collect();
    let ones: Vec<QubitId> = (0..p).filter(|&t| (j >> (p - 1 - t)) & 1 == 1).map(|t| prefix[t]).collect();
    let (tag0, rest) = layout.tag.split_first().expect("k ≥ 1");

    circ.label(format!("phase1/C1_{j}/t1"));
    for &q in &zeros {
        circ.append(Gate::X(q))?;
    }
    mcx(circ, prefix, *tag0, pool, strategy)?;
    for &q in &zeros {
        circ.append(Gate::X(q))?;
    }

    circ.label(format!("phase1/C1_{j}/t2"));
    let mut spread = Circuit::new(circ.qubit_count());
    fanout_clean(&mut spread, *tag0, rest)?;
    circ.extend_from(&spread)?;

    circ.label(format!("phase1/C1_{j}/t3"));
    fanout(circ, *tag0, &ones)?;

    circ.label(format!("phase1/C1_{j}/t4"));
    for l in 0..layout.k() {
        circ.append(Gate::toffoli(layout.unary_k[l], layout.tag[l], layout.a[l]))?;
    }

    circ.label(format!("phase1/C1_{j}/t5"));
    for l in 0..layout.k() {
        circ.append(Gate::cnot(layout.a[l], layout.unary_k[l]))?;
    }
    circ.extend_from(&spread.inverse())?;

    circ.label(format!("phase1/C1_{j}/t6"));
    parity_fanin(circ, &layout.a, *tag0)
}

/// Writes the `(n, r)`-unary pattern of `targets[i]` into the blocks for the
/// branch `A = e_i`, then clears `A`.
///
/// `targets` are `n′`-bit strings. Branches with `A = 0` are untouched,
/// whatever the blocks hold, unless the blocks hold a pattern in `targets`.
pub fn build_c2(
    circ: &mut Circuit,
    layout: &Phase1Layout,
    targets: &[BasisString],
    label: &str,
    pool: &mut ScratchPool,
    strategy: McxStrategy,
) -> Result<()> {
    let k = layout.k();
    if targets.len() > k {
        return Err(Error::TooManyTargets { count: targets.len(), k });
    }
    let nb = layout.blocks.len();
    let width = layout.blocks.first().map_or(1, Vec::len);
    let r = width.trailing_zeros() as usize;
    let values: Vec<Vec<usize>> = targets
        .iter()
        .map(|x| (0..nb).map(|b| x.slice_uint(b * r, (b + 1) * r) as usize).collect())
        .collect();

    // Step a: one copy of A per block, then one parity fan-in per (block, value).
    circ.label(format!("{label}/stepA"));
    let used = targets.len();
    let mut copies: Vec<Vec<QubitId>> = alloc::vec![layout.a[..used].to_vec()];
    let mut leased = Vec::new();
    let mut spread = Circuit::new(circ.qubit_count());
    if nb > 1 && used > 0 {
        let extra = pool.lease((nb - 1) * used)?;
        for b in 1..nb {
            copies.push(extra[(b - 1) * used..b * used].to_vec());
        }
        for i in 0..used {
            let targets: Vec<QubitId> = (1..nb).map(|b| copies[b][i]).collect();
            fanout_clean(&mut spread, layout.a[i], &targets)?;
        }
        leased = extra;
    }
    circ.extend_from(&spread)?;
    for b in 0..nb {
        for l in 0..width {
            let controls: Vec<QubitId> = (0..used).filter(|&i| values[i][b] == l).map(|i| copies[b][i]).collect();
            if !controls.is_empty() {
                parity_fanin(circ, &controls, layout.blocks[b][l])?;
            }
        }
    }
    circ.extend_from(&spread.inverse())?;
    pool.release(&leased);

    // Step b: one private copy of each pattern wire per term, then one
    // multi-controlled X per term onto A[i].
    circ.label(format!("{label}/stepB"));
    let mut dup = Circuit::new(circ.qubit_count());
    let mut leased = Vec::new();
    let mut controls: Vec<Vec<QubitId>> = alloc::vec![Vec::with_capacity(nb); used];
    for b in 0..nb {
        for l in 0..width {
            let users: Vec<usize> = (0..used).filter(|&i| values[i][b] == l).collect();
            if users.is_empty() {
                continue;
            }
            let extra = pool.lease(users.len() - 1)?;
            fanout_clean(&mut dup, layout.blocks[b][l], &extra)?;
            controls[users[0]].push(layout.blocks[b][l]);
            for (&i, &q) in users[1..].iter().zip(&extra) {
                controls[i].push(q);
            }
            leased.extend(extra);
        }
    }
    circ.extend_from(&dup)?;
    let need = mcx_scratch(nb, strategy);
    let mut subs = Vec::with_capacity(used);
    for _ in 0..used {
        subs.push(pool.split(need)?);
    }
    for (i, sub) in subs.iter_mut().enumerate() {
        mcx(circ, &controls[i], layout.a[i], sub, strategy)?;
    }
    for sub in subs {
        pool.merge(sub);
    }
    circ.extend_from(&dup.inverse())?;
    pool.release(&leased);
    Ok(())
}

/// Gate-index span of one labeled step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSpan {
    pub name: alloc::string::String,
    pub start: usize,
    pub end: usize,
}

/// Runs `f` with `idle` returned to the pool. The wires must be `|0⟩` on
/// every branch for the whole call.
fn lending<T>(pool: &mut ScratchPool, idle: &[QubitId], f: impl FnOnce(&mut ScratchPool) -> Result<T>) -> Result<T> {
    pool.release(idle);
    let out = f(pool)?;
    pool.reclaim(idle)?;
    Ok(out)
}

/// Expands the index suffix to unary, then runs `C1_j`, `C2_j` for every subset.
///
/// Tag and `A` are idle during the expansion, and tag is idle during every
/// `C2_j`, so those wires double as scratch there.
/// `padded` holds the `n′`-bit target strings in term order.
pub fn phase1(
    circ: &mut Circuit,
    plan: &SynthesisPlan,
    layout: &Phase1Layout,
    padded: &[BasisString],
    pool: &mut ScratchPool,
    spans: &mut Vec<StageSpan>,
) -> Result<()> {
    let mut mark = |circ: &Circuit, name: alloc::string::String, start: usize| {
        spans.push(StageSpan {
            name,
            start,
            end: circ.len(),
        })
    };
    let start = circ.len();
    circ.label("phase1/expand");
    let idle: Vec<QubitId> = layout.tag.iter().chain(&layout.a).copied().collect();
    lending(pool, &idle, |pool| build_index_to_unary_k(circ, layout, pool))?;
    mark(circ, "phase1/expand".into(), start);
    for (j, subset) in plan.subsets.iter().enumerate() {
        let start = circ.len();
        build_c1(circ, layout, j, pool, plan.mcx)?;
        mark(circ, format!("phase1/C1_{j}"), start);
        let start = circ.len();
        let name = format!("phase1/C2_{j}");
        lending(pool, &layout.tag, |pool| {
            build_c2(circ, layout, &padded[subset.clone()], &name, pool, plan.mcx)
        })?;
        mark(circ, name, start);
    }
    Ok(())
}
