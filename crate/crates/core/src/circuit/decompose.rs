use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use super::{Circuit, Gate, McxStrategy, QubitId};
use crate::{Error, Result};

/// Standard 6-CNOT Toffoli network; exact, no global phase.
pub(crate) fn toffoli_network(c1: QubitId, c2: QubitId, t: QubitId, out: &mut Vec<Gate>) {
    let tdg = |q| Gate::phase(-FRAC_PI_4, q);
    let tg = |q| Gate::phase(FRAC_PI_4, q);
    out.extend([
        Gate::hadamard(t),
        Gate::cnot(c2, t),
        tdg(t),
        Gate::cnot(c1, t),
        tg(t),
        Gate::cnot(c2, t),
        tdg(t),
        Gate::cnot(c1, t),
        tg(c2),
        tg(t),
        Gate::hadamard(t),
        Gate::cnot(c1, c2),
        tg(c1),
        tdg(c2),
        Gate::cnot(c1, c2),
    ]);
}

/// Two-CNOT Givens network: the φ = 0 rotation is `H·CX·(RY⊗RY)·CX·H`, and a
/// nonzero φ conjugates it by `diag(1, e^{iφ/2}, e^{−iφ/2}, 1)`.
pub(crate) fn givens_network(theta: f64, phi: f64, a: QubitId, b: QubitId, out: &mut Vec<Gate>) {
    let beta = phi / 2.0;
    if beta != 0.0 {
        out.push(Gate::phase(beta, a));
        out.push(Gate::phase(-beta, b));
    }
    out.extend([
        Gate::hadamard(a),
        Gate::cnot(a, b),
        Gate::ry(theta / 2.0, a),
        Gate::ry(theta / 2.0, b),
        Gate::cnot(a, b),
        Gate::hadamard(a),
    ]);
    if beta != 0.0 {
        out.push(Gate::phase(-beta, a));
        out.push(Gate::phase(beta, b));
    }
}

/// Expands an X controlled on all of `controls` into X/CNOT/Toffoli gates.
///
/// `scratch` must hold at least `controls.len() − 2` clean wires disjoint
/// from the operands; they are returned clean.
pub(crate) fn mcx_network(
    controls: &[QubitId],
    target: QubitId,
    scratch: &[QubitId],
    strategy: McxStrategy,
    out: &mut Vec<Gate>,
) {
    match controls.len() {
        0 => out.push(Gate::X(target)),
        1 => out.push(Gate::cnot(controls[0], target)),
        2 => out.push(Gate::toffoli(controls[0], controls[1], target)),
        c => {
            let need = c - 2;
            debug_assert!(scratch.len() >= need);
            let mut compute = Vec::with_capacity(need);
            let last = match strategy {
                McxStrategy::Tree => {
                    let mut level: Vec<QubitId> = controls.to_vec();
                    let mut free = scratch[..need].iter().copied();
                    while level.len() > 2 {
                        let mut next = Vec::with_capacity(level.len().div_ceil(2));
                        for pair in level.chunks(2) {
                            if let [a, b] = *pair {
                                let s = free.next().expect("c − 2 scratch suffices");
                                compute.push(Gate::toffoli(a, b, s));
                                next.push(s);
                            } else {
                                next.push(pair[0]);
                            }
                        }
                        level = next;
                    }
                    Gate::toffoli(level[0], level[1], target)
                }
                McxStrategy::Chain => {
                    compute.push(Gate::toffoli(controls[0], controls[1], scratch[0]));
                    for i in 2..c - 1 {
                        compute.push(Gate::toffoli(controls[i], scratch[i - 2], scratch[i - 1]));
                    }
                    Gate::toffoli(controls[c - 1], scratch[need - 1], target)
                }
            };
            out.extend(compute.iter().cloned());
            out.push(last);
            out.extend(compute.into_iter().rev());
        }
    }
}

impl Circuit {
    /// Lowers the circuit to single-qubit gates and CNOTs.
    ///
    /// Multi-controlled X gates with three or more controls draw scratch from
    /// the register bound with [`Circuit::bind_scratch`]; the caller guarantees
    /// those wires are `|0⟩` at every such gate. Labels move to the first gate
    /// of each expansion.
    pub fn decompose(&self, strategy: McxStrategy) -> Result<Circuit> {
        let mut gates = Vec::with_capacity(self.gates.len() * 2);
        let mut labels = BTreeMap::new();
        let mut buf = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(tag) = self.labels.get(&i) {
                labels.insert(gates.len(), tag.clone());
            }
            match g {
                Gate::Toffoli { controls, target } => {
                    toffoli_network(controls[0], controls[1], *target, &mut gates)
                }
                Gate::Givens {
                    theta,
                    phi,
                    first,
                    second,
                } => givens_network(*theta, *phi, *first, *second, &mut gates),
                Gate::Mcx { controls, target } => {
                    let need = strategy.scratch_for(controls.len());
                    let scratch: Vec<QubitId> = match &self.scratch {
                        Some(reg) => reg
                            .qubits()
                            .into_iter()
                            .filter(|q| q != target && !controls.contains(q))
                            .take(need)
                            .collect(),
                        None => Vec::new(),
                    };
                    if scratch.len() < need {
                        return Err(Error::ScratchUnavailable {
                            controls: controls.len(),
                            needed: need,
                        });
                    }
                    buf.clear();
                    mcx_network(controls, *target, &scratch, strategy, &mut buf);
                    for t in buf.drain(..) {
                        match t {
                            Gate::Toffoli { controls, target } => {
                                toffoli_network(controls[0], controls[1], target, &mut gates)
                            }
                            other => gates.push(other),
                        }
                    }
                }
                other => gates.push(other.clone()),
            }
        }
        Ok(Circuit {
            qubit_count: self.qubit_count,
            gates,
            labels,
            scratch: self.scratch.clone(),
        })
    }
}
