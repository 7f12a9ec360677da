use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::circuit::{Circuit, Gate, Metrics, QubitId};
use crate::dense::prepare_dense;
use crate::pool::ScratchPool;
use crate::primitives::fanout_clean;
use crate::sim::{compare, run, CompareReport, SparseVector};
use crate::Result;

use super::phase1::{phase1, Phase1Layout, StageSpan};
use super::phase2::phase2;
use super::plan::{candidate_plans, Route, SynthesisOptions, SynthesisPlan};
use super::spec::SparseStateSpec;

/// Size and depth of one top-level stage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageMetrics {
    pub name: String,
    pub start: usize,
    pub end: usize,
    pub size_elementary: usize,
    pub depth_elementary: usize,
    pub size_logical: usize,
    pub depth_logical: usize,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    /// Logical circuit: data wires `0..n`, ancillae after.
    pub circuit: Circuit,
    pub plan: SynthesisPlan,
    pub metrics: Metrics,
    /// `stage0`, `phase1`, `phase2`, in order.
    pub stages: Vec<StageMetrics>,
    /// Finer cut points inside Phase 1.
    pub spans: Vec<StageSpan>,
    pub layout: Option<Phase1Layout>,
}

impl Synthesis {
    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.plan.n).collect()
    }

    /// Simulates the circuit from `|0…0⟩` and compares against `spec`.
    pub fn verify(&self, spec: &SparseStateSpec) -> Result<CompareReport> {
        let state = run(&self.circuit, &SparseVector::zero_state(self.circuit.qubit_count()))?;
        Ok(compare(&state, spec, &self.data_qubits()))
    }
}

/// Builds a circuit preparing `spec` with at most `m` ancillae.
///
/// Every plan from [`candidate_plans`] is built and the one with the
/// smallest elementary depth is kept; ties go to the smaller circuit, then
/// to the earlier candidate.
pub fn synthesize(spec: &SparseStateSpec, m: usize, opts: &SynthesisOptions) -> Result<Synthesis> {
    let mut best: Option<Synthesis> = None;
    for plan in candidate_plans(spec.n(), spec.d(), m, opts)? {
        let syn = build(spec, plan)?;
        let key = |s: &Synthesis| (s.metrics.depth_elementary, s.metrics.size_elementary);
        if best.as_ref().is_none_or(|b| key(&syn) < key(b)) {
            best = Some(syn);
        }
    }
    Ok(best.expect("candidate_plans is never empty"))
}

/// Builds the circuit for one fixed plan.
pub fn build(spec: &SparseStateSpec, plan: SynthesisPlan) -> Result<Synthesis> {
    let n = spec.n();
    let data: Vec<QubitId> = (0..n).map(QubitId).collect();
    let mut spans = Vec::new();
    let mut layout = None;
    let mut circ;
    let cuts: [usize; 3];
    match plan.route {
        Route::Single => {
            circ = Circuit::new(n);
            circ.label("direct");
            single(&mut circ, spec, &data)?;
            cuts = [circ.len(); 3];
        }
        Route::Pair => {
            circ = Circuit::new(n);
            circ.label("direct");
            pair(&mut circ, spec, &data)?;
            cuts = [circ.len(); 3];
        }
        Route::General => {
            circ = Circuit::new(n + plan.ledger.total);
            let mut pool = ScratchPool::new(n, plan.ledger.total);
            let index = pool.lease(plan.ell_n)?;
            circ.label("stage0/dense");
            prepare_dense(&mut circ, &spec.amplitudes(), plan.dense, &index, &mut pool)?;
            let c0 = circ.len();

            let lay = Phase1Layout::lease(&plan, index, &mut pool)?;
            let padded: Vec<_> = spec.bases().map(|b| b.pad_left(plan.n_pad - n)).collect();
            phase1(&mut circ, &plan, &lay, &padded, &mut pool, &mut spans)?;
            lay.release_working(&mut pool);
            let c1 = circ.len();

            phase2(&mut circ, &lay.blocks, &data, &mut pool)?;
            cuts = [c0, c1, circ.len()];
            debug_assert_eq!(pool.leased(), 0);
            debug_assert!(pool.high_water() <= plan.ledger.total);
            layout = Some(lay);
        }
    }
    let span = circ.max_operand().map_or(0, |q| q.0 + 1).max(n);
    circ.resize(span)?;

    let lowered = circ.decompose(plan.mcx)?;
    let metrics = Metrics::from_pair(&circ, &lowered, n);
    let mut stages = Vec::with_capacity(3);
    let mut start = 0;
    for (name, end) in ["stage0", "phase1", "phase2"].into_iter().zip(cuts) {
        let part = circ.slice(start..end);
        let low = part.decompose(plan.mcx)?;
        stages.push(StageMetrics {
            name: name.into(),
            start,
            end,
            size_elementary: low.len(),
            depth_elementary: low.depth(),
            size_logical: part.len(),
            depth_logical: part.depth(),
        });
        start = end;
    }
    Ok(Synthesis {
        circuit: circ,
        plan,
        metrics,
        stages,
        spans,
        layout,
    })
}

fn single(circ: &mut Circuit, spec: &SparseStateSpec, data: &[QubitId]) -> Result<()> {
    let (q, alpha) = &spec.terms()[0];
    for (t, bit) in q.iter().enumerate() {
        if bit {
            circ.append(Gate::X(data[t]))?;
        }
    }
    if alpha.arg() != 0.0 {
        circ.append(Gate::global_phase(alpha.arg(), data[0]))?;
    }
    Ok(())
}

/// One `RY` on the first differing bit `f`, phases on `f`, then copies of `f`
/// onto the other differing bits and X corrections.
fn pair(circ: &mut Circuit, spec: &SparseStateSpec, data: &[QubitId]) -> Result<()> {
    let [(q0, a0), (q1, a1)] = spec.terms() else {
        unreachable!("pair route needs d = 2")
    };
    let diff: Vec<usize> = (0..spec.n()).filter(|&t| q0.get(t) != q1.get(t)).collect();
    let f = diff[0];
    // (amplitude on f = 0, amplitude on f = 1)
    let (lo, hi) = if q0.get(f) { (a1, a0) } else { (a0, a1) };
    let theta = 2.0 * hi.norm().atan2(lo.norm());
    circ.append(Gate::ry(theta, data[f]))?;
    let rel = hi.arg() - lo.arg();
    if rel != 0.0 {
        circ.append(Gate::phase(rel, data[f]))?;
    }
    if lo.arg() != 0.0 {
        circ.append(Gate::global_phase(lo.arg(), data[f]))?;
    }
    let others: Vec<QubitId> = diff[1..].iter().map(|&t| data[t]).collect();
    fanout_clean(circ, data[f], &others)?;
    for &t in &diff[1..] {
        if q0.get(t) != q0.get(f) {
            circ.append(Gate::X(data[t]))?;
        }
    }
    for t in 0..spec.n() {
        if q0.get(t) && q1.get(t) {
            circ.append(Gate::X(data[t]))?;
        }
    }
    Ok(())
}
