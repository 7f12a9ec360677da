//! Synthesis plus verification, shared by every subcommand.

use serde::Serialize;
use sqsp_core::dense::DenseStrategy;
use sqsp_core::sim::CompareReport;
use sqsp_core::sqsp::{synthesize, Ledger, Route, SparseStateSpec, Synthesis, SynthesisOptions, SynthesisPlan};
use sqsp_core::{Gate, McxStrategy, QubitId};

use crate::error::CliError;

/// Largest per-amplitude error accepted by verification.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VerifyPolicy {
    /// Simulate when `n + m ≤ 512` and `d ≤ 1024`.
    #[default]
    Auto,
    Never,
    Always,
}

impl VerifyPolicy {
    pub fn applies(self, n: usize, d: usize, m: usize) -> bool {
        match self {
            VerifyPolicy::Auto => n + m <= 512 && d <= 1024,
            VerifyPolicy::Never => false,
            VerifyPolicy::Always => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub max_amp_error: f64,
    pub ancilla_clean: bool,
    pub global_phase: f64,
    pub support_len: usize,
    pub missing_terms: usize,
}

impl From<CompareReport> for VerifyReport {
    fn from(r: CompareReport) -> Self {
        VerifyReport {
            pass: r.passes(VERIFY_TOL) && r.missing_terms == 0,
            max_amp_error: r.max_amp_error,
            ancilla_clean: r.ancilla_clean,
            global_phase: r.global_phase,
            support_len: r.support_len,
            missing_terms: r.missing_terms,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub synthesis: Synthesis,
    /// `None` when the verification policy skipped simulation.
    pub verify: Option<VerifyReport>,
    /// Problems found without simulating; empty when the circuit is sound.
    pub structural: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.structural.is_empty() && self.verify.as_ref().is_none_or(|v| v.pass)
    }
}

/// Checks that need no simulation: width within budget, X-type gates after
/// Step 0, ledger within the effective budget.
pub fn structural_check(syn: &Synthesis) -> Vec<String> {
    let plan = &syn.plan;
    let mut problems = Vec::new();
    let width = syn.circuit.qubit_count();
    if width > plan.n + plan.m {
        problems.push(format!("{width} wires exceed n + m = {}", plan.n + plan.m));
    }
    if plan.ledger.total > plan.m_eff {
        problems.push(format!("ledger total {} exceeds m_eff = {}", plan.ledger.total, plan.m_eff));
    }
    if plan.route == Route::General {
        let start = syn.stages[0].end;
        if let Some(g) = syn.circuit.gates()[start..].iter().find(|g| !g.is_x_type()) {
            problems.push(format!("non-permutation gate `{}` after Step 0", g.name()));
        }
    }
    problems
}

/// Appends an X on the first ancilla wire, adding one if there is none, so
/// the final state always has a dirty ancilla.
pub fn corrupt(syn: &mut Synthesis) {
    let n = syn.plan.n;
    if syn.circuit.qubit_count() == n {
        syn.circuit.resize(n + 1).expect("growing never drops operands");
    }
    syn.circuit.append(Gate::X(QubitId(n))).expect("wire exists");
}

pub fn run(
    spec: &SparseStateSpec,
    m: usize,
    opts: &SynthesisOptions,
    policy: VerifyPolicy,
    inject_fault: bool,
) -> Result<Outcome, CliError> {
    let mut synthesis = synthesize(spec, m, opts)?;
    log::info!(
        "n={} d={} m={} -> r={} k={} depth={}",
        spec.n(),
        spec.d(),
        m,
        synthesis.plan.r,
        synthesis.plan.k,
        synthesis.metrics.depth_elementary
    );
    if inject_fault {
        corrupt(&mut synthesis);
    }
    let structural = structural_check(&synthesis);
    let verify = if inject_fault || policy.applies(spec.n(), spec.d(), m) {
        Some(synthesis.verify(spec)?.into())
    } else {
        None
    };
    Ok(Outcome {
        synthesis,
        verify,
        structural,
    })
}

pub fn dense_name(d: DenseStrategy) -> &'static str {
    match d {
        DenseStrategy::Multiplexed => "multiplexed",
        DenseStrategy::OneHotTree => "onehot",
    }
}

pub fn mcx_name(m: McxStrategy) -> &'static str {
    match m {
        McxStrategy::Tree => "tree",
        McxStrategy::Chain => "chain",
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Single => "single",
        Route::Pair => "pair",
        Route::General => "general",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerReport {
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

impl From<&Ledger> for LedgerReport {
    fn from(l: &Ledger) -> Self {
        LedgerReport {
            index: l.index,
            unary_k: l.unary_k,
            tag: l.tag,
            a: l.a,
            b: l.b,
            pad: l.pad,
            dense_scratch: l.dense_scratch,
            expand_scratch: l.expand_scratch,
            c1_scratch: l.c1_scratch,
            c2_scratch: l.c2_scratch,
            phase2_scratch: l.phase2_scratch,
            stage0: l.stage0,
            phase1: l.phase1,
            phase2: l.phase2,
            total: l.total,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanReport {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub m_eff: usize,
    pub m_min: usize,
    pub route: &'static str,
    pub r: usize,
    pub n_pad: usize,
    pub k: usize,
    pub ell_n: usize,
    pub ell_k: usize,
    pub dense: &'static str,
    pub mcx: &'static str,
    pub subsets: Vec<[usize; 2]>,
    pub ledger: LedgerReport,
}

impl From<&SynthesisPlan> for PlanReport {
    fn from(p: &SynthesisPlan) -> Self {
        PlanReport {
            n: p.n,
            d: p.d,
            m: p.m,
            m_eff: p.m_eff,
            m_min: p.m_min,
            route: route_name(p.route),
            r: p.r,
            n_pad: p.n_pad,
            k: p.k,
            ell_n: p.ell_n,
            ell_k: p.ell_k,
            dense: dense_name(p.dense),
            mcx: mcx_name(p.mcx),
            subsets: p.subsets.iter().map(|s| [s.start, s.end]).collect(),
            ledger: (&p.ledger).into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CircuitMetrics {
    pub size_elementary: usize,
    pub depth_elementary: usize,
    pub size_logical: usize,
    pub depth_logical: usize,
    pub qubits_total: usize,
    pub ancilla_used: usize,
    pub single_qubit: usize,
    pub cnot: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub name: String,
    pub start: usize,
    pub end: usize,
    pub size_elementary: usize,
    pub depth_elementary: usize,
    pub size_logical: usize,
    pub depth_logical: usize,
}

/// The metrics file written next to a synthesized circuit.
#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub plan: PlanReport,
    pub metrics: CircuitMetrics,
    pub stages: Vec<StageReport>,
    pub verify: Option<VerifyReport>,
    pub structural: Vec<String>,
}

impl From<&Outcome> for MetricsReport {
    fn from(o: &Outcome) -> Self {
        let s = &o.synthesis;
        let m = &s.metrics;
        MetricsReport {
            plan: (&s.plan).into(),
            metrics: CircuitMetrics {
                size_elementary: m.size_elementary,
                depth_elementary: m.depth_elementary,
                size_logical: m.size_logical,
                depth_logical: m.depth_logical,
                qubits_total: m.qubits_total,
                ancilla_used: m.ancilla_used,
                single_qubit: m.elementary.single_qubit,
                cnot: m.elementary.cnot,
            },
            stages: s
                .stages
                .iter()
                .map(|st| StageReport {
                    name: st.name.clone(),
                    start: st.start,
                    end: st.end,
                    size_elementary: st.size_elementary,
                    depth_elementary: st.depth_elementary,
                    size_logical: st.size_logical,
                    depth_logical: st.depth_logical,
                })
                .collect(),
            verify: o.verify.clone(),
            structural: o.structural.clone(),
        }
    }
}
