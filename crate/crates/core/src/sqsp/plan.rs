//! Qubit ledger and parameter selection.
//!
//! Every register and every scratch lease of the pipeline has a closed-form
//! count here. Stages share one pool, so the footprint is the maximum over
//! Step 0, Phase 1 and Phase 2 rather than the sum.

use alloc::vec::Vec;
use core::ops::Range;

use crate::circuit::McxStrategy;
use crate::dense::{dense_scratch, index_width, DenseStrategy};
use crate::primitives::{mcx_scratch, unary_to_binary_scratch};
use crate::{Error, Result};

/// Ancilla cap factor: beyond `C_CAP·n·d/⌈log₂ d⌉` extra qubits are not used.
pub const C_CAP: usize = 6;

/// Largest block arity considered.
pub const MAX_ARITY: usize = 16;

/// Elementary depth charged per Toffoli layer by the depth model.
const TOFFOLI_DEPTH: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DenseChoice {
    #[default]
    Auto,
    Multiplexed,
    OneHot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub mcx: McxStrategy,
    pub dense: DenseChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `d = 1`: X gates on the ones of `q₀`.
    Single,
    /// `d = 2`: one rotation fanned out to the differing bits.
    Pair,
    /// Step 0, Phase 1, Phase 2.
    General,
}

/// Per-region qubit counts for one `(r, k)` choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    pub index: usize,
    pub unary_k: usize,
    pub tag: usize,
    pub a: usize,
    pub b: usize,
    pub pad: usize,
    pub dense_scratch: usize,
    pub expand_scratch: usize,
    pub c1_scratch: usize,
    pub c2_scratch: usize,
    pub phase2_scratch: usize,
    pub stage0: usize,
    pub phase1: usize,
    pub phase2: usize,
    pub total: usize,
}

impl Ledger {
    pub fn compute(n: usize, d: usize, r: usize, k: usize, dense: DenseStrategy, mcx: McxStrategy) -> Ledger {
        let s = index_width(d);
        let lk = k.trailing_zeros() as usize;
        let p = s - lk;
        let n_pad = r * n.div_ceil(r);
        let blocks = n_pad / r;
        let width = 1usize << r;
        let expand_scratch = unary_to_binary_scratch(lk);
        let c1_scratch = mcx_scratch(p, mcx);
        let c2_scratch = ((blocks - 1) * k).max(blocks * (k - 1) + k * mcx_scratch(blocks, mcx));
        let dense_scratch = dense_scratch(d, dense);
        let phase2_scratch = blocks * unary_to_binary_scratch(r);
        let stage0 = s + dense_scratch;
        // Tag and A serve as scratch during the expansion, tag during C2.
        let held = s + k + blocks * width;
        let phase1 = (held + (2 * k).max(expand_scratch))
            .max(held + 2 * k + c1_scratch)
            .max(held + k + k.max(c2_scratch));
        let phase2 = blocks * width + (n_pad - n) + phase2_scratch;
        Ledger {
            index: s,
            unary_k: k,
            tag: k,
            a: k,
            b: blocks * width,
            pad: n_pad - n,
            dense_scratch,
            expand_scratch,
            c1_scratch,
            c2_scratch,
            phase2_scratch,
            stage0,
            phase1,
            phase2,
            total: stage0.max(phase1).max(phase2),
        }
    }
}

/// Right-hand sides of the reference budget inequalities for the idealized
/// constructions: `⌈log d⌉ + 4k + nk/r + n2^r/r` and `3n2^r/r`.
pub fn reference_bounds(n: usize, d: usize, r: usize, k: usize) -> (usize, usize) {
    let w = 1usize << r;
    (index_width(d) + 4 * k + n * k / r + n * w / r, 3 * n * w / r)
}

/// Smallest budget for which the general route is feasible (`k = 1`, best `r`).
pub fn feasibility_floor(n: usize, d: usize, mcx: McxStrategy) -> usize {
    (1..=n.min(MAX_ARITY))
        .map(|r| Ledger::compute(n, d, r, 1, DenseStrategy::Multiplexed, mcx).total)
        .min()
        .unwrap_or(0)
}

/// Budget floor reported to callers: 0 on the direct `d ≤ 2` routes.
pub fn m_min(n: usize, d: usize, mcx: McxStrategy) -> usize {
    if d <= 2 {
        0
    } else {
        feasibility_floor(n, d, mcx)
    }
}

/// `min(m, max(floor, C_CAP·n·d/⌈log₂ d⌉))`.
pub fn effective_budget(n: usize, d: usize, m: usize, mcx: McxStrategy) -> usize {
    let cap = (C_CAP * n * d).div_ceil(index_width(d).max(1));
    m.min(cap.max(feasibility_floor(n, d, mcx)))
}

/// `S_j = {jk, …, min((j+1)k, d) − 1}`.
pub fn partition(d: usize, k: usize) -> Vec<Range<usize>> {
    (0..d.div_ceil(k)).map(|j| j * k..((j + 1) * k).min(d)).collect()
}

fn lg(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

fn fanout_depth(targets: usize) -> usize {
    lg(targets + 1)
}

fn fanin_depth(controls: usize) -> usize {
    match controls {
        0 => 0,
        1 => 1,
        c => 2 * lg(c) + 1,
    }
}

fn mcx_depth(controls: usize, mcx: McxStrategy) -> usize {
    match (controls, mcx) {
        (0 | 1, _) => 1,
        (2, _) => TOFFOLI_DEPTH,
        (c, McxStrategy::Tree) => (2 * lg(c) - 1) * TOFFOLI_DEPTH,
        (c, McxStrategy::Chain) => (2 * (c - 2) + 1) * TOFFOLI_DEPTH,
    }
}

fn converter_depth(s: usize) -> usize {
    if s == 0 {
        return 1;
    }
    let extract = 4 * (s - 1) + (0..s).map(|t| fanin_depth(1 << (s - 1 - t))).sum::<usize>();
    let decode = 2 * fanout_depth((1 << (s - 1)) - 1) + s * (TOFFOLI_DEPTH + 1);
    extract + decode
}

/// Estimated elementary depth of Phase 1 plus Phase 2.
pub fn depth_model(n: usize, d: usize, r: usize, k: usize, mcx: McxStrategy) -> usize {
    if r == 0 || k == 0 {
        return 0;
    }
    let s = index_width(d);
    let lk = k.trailing_zeros() as usize;
    let p = s - lk;
    let blocks = n.div_ceil(r);
    let c1 = 2 * usize::from(p > 0)
        + mcx_depth(p, mcx)
        + 2 * fanout_depth(k - 1)
        + 2 * fanout_depth(p.div_ceil(2))
        + TOFFOLI_DEPTH
        + 1
        + fanin_depth(k);
    let c2 = 2 * fanout_depth(blocks - 1) + fanin_depth(k) + 2 * fanout_depth(k - 1) + mcx_depth(blocks, mcx);
    converter_depth(lk) + d.div_ceil(k) * (c1 + c2) + converter_depth(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisPlan {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub m_eff: usize,
    pub m_min: usize,
    pub route: Route,
    /// Block arity; 0 on the direct routes.
    pub r: usize,
    pub n_pad: usize,
    /// Terms per Phase-1 iteration; 0 on the direct routes.
    pub k: usize,
    pub ell_n: usize,
    pub ell_k: usize,
    pub subsets: Vec<Range<usize>>,
    pub dense: DenseStrategy,
    pub mcx: McxStrategy,
    pub ledger: Ledger,
}

impl SynthesisPlan {
    pub fn blocks(&self) -> usize {
        self.n_pad.checked_div(self.r).unwrap_or(0)
    }

    fn direct(n: usize, d: usize, m: usize, mcx: McxStrategy) -> Self {
        SynthesisPlan {
            n,
            d,
            m,
            m_eff: 0,
            m_min: 0,
            route: if d == 1 { Route::Single } else { Route::Pair },
            r: 0,
            n_pad: n,
            k: 0,
            ell_n: index_width(d),
            ell_k: 0,
            subsets: Vec::new(),
            dense: DenseStrategy::Multiplexed,
            mcx,
            ledger: Ledger::default(),
        }
    }
}

fn check_overrides(n: usize, d: usize, opts: &SynthesisOptions) -> Result<()> {
    if let Some(r) = opts.r {
        if r == 0 || r > n.min(MAX_ARITY) {
            return Err(Error::InvalidOverride(alloc::format!("r = {r} outside 1..={}", n.min(MAX_ARITY))));
        }
    }
    if let Some(k) = opts.k {
        if !k.is_power_of_two() || k > d {
            return Err(Error::InvalidOverride(alloc::format!("k = {k} is not a power of two ≤ d = {d}")));
        }
    }
    Ok(())
}

fn is_direct(d: usize, opts: &SynthesisOptions) -> bool {
    d <= 2 && opts.r.is_none() && opts.k.is_none() && opts.dense == DenseChoice::Auto
}

/// Budget the candidates are checked against, or the reason there is none.
fn budget(n: usize, d: usize, m: usize, opts: &SynthesisOptions) -> Result<(usize, usize)> {
    check_overrides(n, d, opts)?;
    let floor = feasibility_floor(n, d, opts.mcx);
    if opts.r.is_some() || opts.k.is_some() {
        Ok((m, floor))
    } else if m < floor {
        Err(Error::BudgetTooSmall { m, m_min: floor })
    } else {
        Ok((effective_budget(n, d, m, opts.mcx), floor))
    }
}

fn fits(n: usize, d: usize, r: usize, k: usize, mcx: McxStrategy, budget: usize) -> bool {
    let l = Ledger::compute(n, d, r, k, DenseStrategy::Multiplexed, mcx);
    l.phase1.max(l.phase2).max(l.index) <= budget
}

fn no_candidate(n: usize, d: usize, m: usize, floor: usize, opts: &SynthesisOptions) -> Error {
    if opts.r.is_some() || opts.k.is_some() {
        let r = opts.r.unwrap_or(1);
        let k = opts.k.unwrap_or(1);
        let need = Ledger::compute(n, d, r, k, DenseStrategy::Multiplexed, opts.mcx).total;
        Error::InvalidOverride(alloc::format!("r = {r}, k = {k} needs {need} ancillae, budget is {m}"))
    } else {
        Error::BudgetTooSmall { m, m_min: floor }
    }
}

fn dense_options(d: usize, budget: usize, choice: DenseChoice) -> Result<Vec<DenseStrategy>> {
    let onehot_fits = index_width(d) + dense_scratch(d, DenseStrategy::OneHotTree) <= budget;
    Ok(match choice {
        DenseChoice::Multiplexed => alloc::vec![DenseStrategy::Multiplexed],
        DenseChoice::OneHot if onehot_fits => alloc::vec![DenseStrategy::OneHotTree],
        DenseChoice::OneHot => {
            return Err(Error::InvalidOverride(alloc::format!(
                "one-hot Step 0 needs {} ancillae, budget is {budget}",
                index_width(d) + dense_scratch(d, DenseStrategy::OneHotTree)
            )))
        }
        DenseChoice::Auto if onehot_fits && index_width(d) > 0 => {
            alloc::vec![DenseStrategy::Multiplexed, DenseStrategy::OneHotTree]
        }
        DenseChoice::Auto => alloc::vec![DenseStrategy::Multiplexed],
    })
}

#[allow(clippy::too_many_arguments)]
fn general_plan(
    n: usize,
    d: usize,
    m: usize,
    m_eff: usize,
    floor: usize,
    r: usize,
    k: usize,
    dense: DenseStrategy,
    mcx: McxStrategy,
) -> SynthesisPlan {
    SynthesisPlan {
        n,
        d,
        m,
        m_eff,
        m_min: floor,
        route: Route::General,
        r,
        n_pad: r * n.div_ceil(r),
        k,
        ell_n: index_width(d),
        ell_k: k.trailing_zeros() as usize,
        subsets: partition(d, k),
        dense,
        mcx,
        ledger: Ledger::compute(n, d, r, k, dense, mcx),
    }
}

fn powers_up_to(d: usize) -> impl DoubleEndedIterator<Item = usize> {
    (0..usize::BITS).map(|e| 1usize << e).take_while(move |&k| k <= d).collect::<Vec<_>>().into_iter()
}

/// Picks `(r, k)` minimizing [`depth_model`] among the choices whose ledger
/// fits the budget, ties going to larger `r`, then larger `k`. Step 0 is
/// one-hot when it fits and builds shallower for a generic amplitude profile.
///
/// Without overrides the budget is [`effective_budget`]; explicit `r`/`k`
/// are checked against `m` itself.
pub fn select_parameters(n: usize, d: usize, m: usize, opts: &SynthesisOptions) -> Result<SynthesisPlan> {
    if is_direct(d, opts) {
        return Ok(SynthesisPlan::direct(n, d, m, opts.mcx));
    }
    let (budget, floor) = budget(n, d, m, opts)?;
    let mut best: Option<(usize, usize, usize)> = None;
    for r in 1..=n.min(MAX_ARITY) {
        if opts.r.is_some_and(|x| x != r) {
            continue;
        }
        for k in powers_up_to(d) {
            if opts.k.is_some_and(|x| x != k) || !fits(n, d, r, k, opts.mcx, budget) {
                continue;
            }
            let cost = depth_model(n, d, r, k, opts.mcx);
            let better = match best {
                None => true,
                Some((c, br, bk)) => (cost, usize::MAX - r, usize::MAX - k) < (c, usize::MAX - br, usize::MAX - bk),
            };
            if better {
                best = Some((cost, r, k));
            }
        }
    }
    let (_, r, k) = best.ok_or_else(|| no_candidate(n, d, m, floor, opts))?;
    let options = dense_options(d, budget, opts.dense)?;
    let dense = if options.len() > 1 && onehot_is_shallower(d) {
        DenseStrategy::OneHotTree
    } else {
        options[0]
    };
    Ok(general_plan(n, d, m, budget, floor, r, k, dense, opts.mcx))
}

/// Every plan worth building for `(n, d, m)`: for each feasible `r` the
/// largest feasible `k`, crossed with the admissible Step-0 strategies.
///
/// The candidate set only grows with `m`, so picking the shallowest built
/// candidate gives a depth that never increases with the budget.
pub fn candidate_plans(n: usize, d: usize, m: usize, opts: &SynthesisOptions) -> Result<Vec<SynthesisPlan>> {
    if is_direct(d, opts) {
        return Ok(alloc::vec![SynthesisPlan::direct(n, d, m, opts.mcx)]);
    }
    let (budget, floor) = budget(n, d, m, opts)?;
    let dense = dense_options(d, budget, opts.dense)?;
    let mut out = Vec::new();
    for r in (1..=n.min(MAX_ARITY)).rev() {
        if opts.r.is_some_and(|x| x != r) {
            continue;
        }
        let k = powers_up_to(d)
            .rev()
            .filter(|&k| opts.k.is_none_or(|x| x == k))
            .find(|&k| fits(n, d, r, k, opts.mcx, budget));
        if let Some(k) = k {
            for &st in &dense {
                out.push(general_plan(n, d, m, budget, floor, r, k, st, opts.mcx));
            }
        }
    }
    if out.is_empty() {
        return Err(no_candidate(n, d, m, floor, opts));
    }
    Ok(out)
}

/// Builds both Step-0 variants for a fixed generic amplitude profile and
/// compares their elementary depth.
fn onehot_is_shallower(d: usize) -> bool {
    use crate::circuit::{Circuit, QubitId};
    use crate::dense::{prepare_dense, AmplitudeVector};
    use crate::pool::ScratchPool;
    use num_complex::Complex64;
    #[allow(unused_imports)]
    use num_traits::Float;

    let s = index_width(d);
    if s == 0 {
        return false;
    }
    let raw: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(1.0 + i as f64, 0.7 * (i + 1) as f64))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = AmplitudeVector::new(raw.into_iter().map(|a| a / norm).collect()).expect("normalized");
    let index: Vec<QubitId> = (0..s).map(QubitId).collect();
    let depth = |st: DenseStrategy| {
        let width = s + dense_scratch(d, st);
        let mut circ = Circuit::new(width);
        let mut pool = ScratchPool::new(s, width - s);
        prepare_dense(&mut circ, &amps, st, &index, &mut pool).expect("pool sized by dense_scratch");
        circ.decompose(McxStrategy::Tree).expect("no unbound gates").depth()
    };
    depth(DenseStrategy::OneHotTree) < depth(DenseStrategy::Multiplexed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_seven_into_fours() {
        assert_eq!(partition(7, 4), [0..4, 4..7]);
        assert_eq!(partition(4, 2), [0..2, 2..4]);
        assert_eq!(partition(5, 1).len(), 5);
    }

    #[test]
    fn reference_phase_two_bound() {
        // 3·8·4/2 = 48.
        assert_eq!(reference_bounds(8, 4, 2, 1).1, 48);
        assert!(reference_bounds(8, 4, 3, 1).1 > 48);
    }

    #[test]
    fn direct_routes() {
        let opts = SynthesisOptions::default();
        assert_eq!(select_parameters(5, 1, 0, &opts).unwrap().route, Route::Single);
        assert_eq!(select_parameters(5, 2, 0, &opts).unwrap().route, Route::Pair);
        assert_eq!(m_min(5, 2, McxStrategy::Tree), 0);
    }

    #[test]
    fn budget_too_small_reports_floor() {
        let floor = feasibility_floor(8, 4, McxStrategy::Tree);
        assert_eq!(
            select_parameters(8, 4, floor - 1, &SynthesisOptions::default()),
            Err(Error::BudgetTooSmall { m: floor - 1, m_min: floor })
        );
        assert!(select_parameters(8, 4, floor, &SynthesisOptions::default()).is_ok());
    }

    #[test]
    fn overrides_are_audited() {
        let opts = SynthesisOptions {
            r: Some(2),
            k: Some(2),
            ..Default::default()
        };
        let plan = select_parameters(8, 4, 200, &opts).unwrap();
        assert_eq!((plan.r, plan.k), (2, 2));
        assert!(matches!(select_parameters(8, 4, 10, &opts), Err(Error::InvalidOverride(_))));
        let bad_k = SynthesisOptions { k: Some(3), ..Default::default() };
        assert!(matches!(select_parameters(8, 4, 200, &bad_k), Err(Error::InvalidOverride(_))));
    }

    #[test]
    fn cap_reaches_full_k() {
        for n in [8, 16, 32, 64] {
            for d in [4, 8, 16, 32, 64] {
                let plan = select_parameters(n, d, usize::MAX / 4, &SynthesisOptions::default()).unwrap();
                assert_eq!(plan.k, d, "n={n} d={d} r={}", plan.r);
            }
        }
    }

    /// Independent restatement of the footprint, summed register by register.
    fn oracle_total(n: usize, d: usize, r: usize, k: usize) -> usize {
        let s = if d <= 1 { 0 } else { (d as f64).log2().ceil() as usize };
        let lk = (k as f64).log2() as usize;
        let blocks = n.div_ceil(r);
        let b_reg = blocks << r;
        let sub2 = |c: usize| c.saturating_sub(2);
        let conv = |t: usize| if t == 0 { 0 } else { (1 << t) - 2 };
        let c2 = ((blocks - 1) * k).max(blocks * (k - 1) + k * sub2(blocks));
        // index + unary + B always; tag + A only outside the steps that lend them.
        let expand = s + k + b_reg + (2 * k).max(conv(lk));
        let c1 = s + 3 * k + b_reg + sub2(s - lk);
        let c2 = s + 2 * k + b_reg + k.max(c2);
        let p1 = expand.max(c1).max(c2);
        let p2 = b_reg + (blocks * r - n) + blocks * conv(r);
        p1.max(p2).max(s)
    }

    #[test]
    fn selection_matches_exhaustive_scan() {
        for n in [8, 16, 32] {
            for d in [4, 5, 8, 13, 16, 32, 64] {
                let floor = feasibility_floor(n, d, McxStrategy::Tree);
                let mut m = floor;
                while m < 64 * floor {
                    let plan = select_parameters(n, d, m, &SynthesisOptions::default()).unwrap();
                    assert!(plan.ledger.total <= m, "ledger over budget");
                    let mut best = None;
                    for r in 1..=n.min(MAX_ARITY) {
                        let mut k = 1;
                        while k <= d {
                            if oracle_total(n, d, r, k) <= plan.m_eff {
                                let c = depth_model(n, d, r, k, McxStrategy::Tree);
                                if best.is_none_or(|(bc, br, bk)| (c, r, k) != (bc, br, bk) && (c < bc || (c == bc && (r > br || (r == br && k > bk))))) {
                                    best = Some((c, r, k));
                                }
                            }
                            k *= 2;
                        }
                    }
                    let (_, r, k) = best.unwrap();
                    assert_eq!((plan.r, plan.k), (r, k), "n={n} d={d} m={m}");
                    m += m / 3 + 1;
                }
            }
        }
    }
}
