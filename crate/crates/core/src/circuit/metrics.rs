use alloc::collections::BTreeMap;

use super::{Circuit, McxStrategy};
use crate::Result;

/// Elementary gate tally.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub single_qubit: usize,
    pub cnot: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.single_qubit + self.cnot
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Gate count after lowering to single-qubit gates and CNOTs.
    pub size_elementary: usize,
    pub depth_elementary: usize,
    /// Depth with Toffoli, multi-controlled X and Givens counted as one layer.
    pub depth_logical: usize,
    pub size_logical: usize,
    pub qubits_total: usize,
    pub ancilla_used: usize,
    pub elementary: GateCounts,
    pub logical_counts: BTreeMap<&'static str, usize>,
}

impl Metrics {
    /// Measures `logical` and its decomposition. `data_qubits` wires are not
    /// counted as ancillae.
    pub fn measure(logical: &Circuit, data_qubits: usize, strategy: McxStrategy) -> Result<Metrics> {
        let lowered = logical.decompose(strategy)?;
        Ok(Self::from_pair(logical, &lowered, data_qubits))
    }

    pub(crate) fn from_pair(logical: &Circuit, lowered: &Circuit, data_qubits: usize) -> Metrics {
        let cnot = lowered.gates().iter().filter(|g| g.arity() == 2).count();
        let elementary = GateCounts {
            single_qubit: lowered.len() - cnot,
            cnot,
        };
        Metrics {
            size_elementary: lowered.len(),
            depth_elementary: lowered.depth(),
            depth_logical: logical.depth(),
            size_logical: logical.len(),
            qubits_total: logical.qubit_count(),
            ancilla_used: logical.qubit_count().saturating_sub(data_qubits),
            elementary,
            logical_counts: logical.gate_counts(),
        }
    }
}
