//! JSON file formats: sparse state specs and circuit dumps.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sqsp_core::sqsp::{validate_spec, SparseStateSpec};
use sqsp_core::{Circuit, Complex64, Gate, QubitId};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    /// MSB-left bit string.
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

/// `{ "n": 8, "terms": [ {"basis": "11011000", "re": 0.5, "im": 0.0}, ... ] }`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub n: usize,
    pub terms: Vec<TermRecord>,
}

impl SpecFile {
    pub fn from_spec(spec: &SparseStateSpec) -> Self {
        SpecFile {
            n: spec.n(),
            terms: spec
                .terms()
                .iter()
                .map(|(b, a)| TermRecord {
                    basis: b.to_bit_string(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<SparseStateSpec, CliError> {
        let raw: Vec<(&str, Complex64)> = self
            .terms
            .iter()
            .map(|t| (t.basis.as_str(), Complex64::new(t.re, t.im)))
            .collect();
        Ok(validate_spec(self.n, &raw)?)
    }
}

pub fn parse_spec(text: &str) -> Result<SparseStateSpec, CliError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))?;
    file.to_spec()
}

pub fn read_spec(path: &Path) -> Result<SparseStateSpec, CliError> {
    parse_spec(&read(path)?)
}

pub fn spec_to_json(spec: &SparseStateSpec) -> String {
    let mut text = serde_json::to_string_pretty(&SpecFile::from_spec(spec)).expect("spec serializes");
    text.push('\n');
    text
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    pub operands: Vec<usize>,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub index: usize,
    pub tag: String,
}

/// `{ "qubits": N, "gates": [ {"kind": "...", "operands": [...], "params": [...]}, ... ] }`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub qubits: usize,
    pub gates: Vec<GateRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<LabelRecord>,
}

fn params(g: &Gate) -> Vec<f64> {
    match g {
        Gate::Ry { theta, .. } | Gate::Rz { theta, .. } | Gate::Phase { theta, .. } => vec![*theta],
        Gate::U1q { matrix, .. } => matrix.iter().flat_map(|z| [z.re, z.im]).collect(),
        Gate::Givens { theta, phi, .. } => vec![*theta, *phi],
        _ => Vec::new(),
    }
}

impl CircuitFile {
    pub fn from_circuit(circ: &Circuit) -> Self {
        CircuitFile {
            qubits: circ.qubit_count(),
            gates: circ
                .gates()
                .iter()
                .map(|g| GateRecord {
                    kind: g.name().to_string(),
                    operands: g.operands().map(|q| q.0).collect(),
                    params: params(g),
                })
                .collect(),
            labels: circ
                .labels()
                .iter()
                .map(|(&index, tag)| LabelRecord {
                    index,
                    tag: tag.clone(),
                })
                .collect(),
        }
    }

    pub fn to_circuit(&self) -> Result<Circuit, String> {
        let mut circ = Circuit::new(self.qubits);
        for (i, g) in self.gates.iter().enumerate() {
            let q: Vec<QubitId> = g.operands.iter().copied().map(QubitId).collect();
            let p = &g.params;
            let shape = |np: usize, nq: usize| p.len() == np && (q.len() == nq || nq == 0 && q.len() >= 2);
            let gate = match g.kind.as_str() {
                "x" if shape(0, 1) => Gate::X(q[0]),
                "ry" if shape(1, 1) => Gate::ry(p[0], q[0]),
                "rz" if shape(1, 1) => Gate::rz(p[0], q[0]),
                "p" if shape(1, 1) => Gate::phase(p[0], q[0]),
                "u" if shape(8, 1) => {
                    let z = |j: usize| Complex64::new(p[2 * j], p[2 * j + 1]);
                    Gate::U1q {
                        matrix: [z(0), z(1), z(2), z(3)],
                        target: q[0],
                    }
                }
                "cx" if shape(0, 2) => Gate::cnot(q[0], q[1]),
                "ccx" if shape(0, 3) => Gate::toffoli(q[0], q[1], q[2]),
                "mcx" if shape(0, 0) => Gate::mcx(q[..q.len() - 1].to_vec(), q[q.len() - 1]),
                "givens" if shape(2, 2) => Gate::givens(p[0], p[1], q[0], q[1]),
                kind => return Err(format!("gate {i}: malformed `{kind}`")),
            };
            circ.append(gate).map_err(|e| format!("gate {i}: {e}"))?;
        }
        for l in &self.labels {
            circ.set_label(l.index, l.tag.clone());
        }
        Ok(circ)
    }
}

pub fn circuit_to_json(circ: &Circuit) -> String {
    let mut text = serde_json::to_string(&CircuitFile::from_circuit(circ)).expect("circuit serializes");
    text.push('\n');
    text
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
