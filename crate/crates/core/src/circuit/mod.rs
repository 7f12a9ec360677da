//! Gate-level circuit representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over `qubit_count` wires.
//! Builders produce *logical* circuits that may contain Toffoli, multi-controlled
//! X and Givens gates; [`Circuit::decompose`] lowers them to single-qubit gates
//! and CNOTs, which is what size and depth are reported against.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

pub(crate) mod decompose;
mod metrics;
mod qasm;

pub use metrics::{GateCounts, Metrics};
pub use qasm::{emit_qasm, parse_qasm};

/// Global wire index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q[{}]", self.0)
    }
}

impl From<usize> for QubitId {
    fn from(value: usize) -> Self {
        QubitId(value)
    }
}

/// A named contiguous run of wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub offset: QubitId,
    pub width: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, offset: usize, width: usize) -> Self {
        Self {
            name: name.into(),
            offset: QubitId(offset),
            width,
        }
    }

    pub fn qubit(&self, i: usize) -> QubitId {
        assert!(i < self.width, "index {i} outside register {}", self.name);
        QubitId(self.offset.0 + i)
    }

    pub fn qubits(&self) -> Vec<QubitId> {
        (0..self.width).map(|i| QubitId(self.offset.0 + i)).collect()
    }

    pub fn overlaps(&self, other: &Register) -> bool {
        self.offset.0 < other.offset.0 + other.width && other.offset.0 < self.offset.0 + self.width
    }
}

/// How multi-controlled X gates are expanded into Toffolis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum McxStrategy {
    /// Balanced AND tree: `c − 2` clean scratch, Toffoli depth `2⌈log₂ c⌉ − 1`.
    #[default]
    Tree,
    /// Sequential ladder: `c − 2` clean scratch, linear depth.
    Chain,
}

impl McxStrategy {
    /// Clean scratch qubits needed for `controls` controls.
    pub fn scratch_for(self, controls: usize) -> usize {
        controls.saturating_sub(2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(QubitId),
    /// `exp(−iθY/2)`.
    Ry { theta: f64, target: QubitId },
    /// `diag(e^{−iθ/2}, e^{iθ/2})`.
    Rz { theta: f64, target: QubitId },
    /// `diag(1, e^{iθ})`.
    Phase { theta: f64, target: QubitId },
    /// Arbitrary single-qubit unitary, row-major `[m00, m01, m10, m11]`.
    U1q { matrix: [Complex64; 4], target: QubitId },
    Cnot { control: QubitId, target: QubitId },
    Toffoli { controls: [QubitId; 2], target: QubitId },
    Mcx { controls: Vec<QubitId>, target: QubitId },
    /// Identity on `|00⟩, |11⟩`; on the single-excitation subspace
    /// `|10⟩ → cos(θ/2)|10⟩ + e^{iφ} sin(θ/2)|01⟩` and
    /// `|01⟩ → −e^{−iφ} sin(θ/2)|10⟩ + cos(θ/2)|01⟩`, where the first label
    /// is `first`.
    Givens {
        theta: f64,
        phi: f64,
        first: QubitId,
        second: QubitId,
    },
}

/// Iterator over a gate's operand wires; the target comes last.
pub struct Operands<'a> {
    head: &'a [QubitId],
    tail: [QubitId; 3],
    tail_len: usize,
    pos: usize,
}

impl Iterator for Operands<'_> {
    type Item = QubitId;

    fn next(&mut self) -> Option<QubitId> {
        let i = self.pos;
        self.pos += 1;
        if i < self.head.len() {
            Some(self.head[i])
        } else if i - self.head.len() < self.tail_len {
            Some(self.tail[i - self.head.len()])
        } else {
            None
        }
    }
}

const H: [Complex64; 4] = [
    Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
    Complex64::new(-core::f64::consts::FRAC_1_SQRT_2, 0.0),
];

impl Gate {
    pub fn x(q: impl Into<QubitId>) -> Self {
        Gate::X(q.into())
    }

    pub fn cnot(control: impl Into<QubitId>, target: impl Into<QubitId>) -> Self {
        Gate::Cnot {
            control: control.into(),
            target: target.into(),
        }
    }

    pub fn toffoli(c1: impl Into<QubitId>, c2: impl Into<QubitId>, target: impl Into<QubitId>) -> Self {
        Gate::Toffoli {
            controls: [c1.into(), c2.into()],
            target: target.into(),
        }
    }

    pub fn ry(theta: f64, target: impl Into<QubitId>) -> Self {
        Gate::Ry {
            theta,
            target: target.into(),
        }
    }

    pub fn rz(theta: f64, target: impl Into<QubitId>) -> Self {
        Gate::Rz {
            theta,
            target: target.into(),
        }
    }

    pub fn phase(theta: f64, target: impl Into<QubitId>) -> Self {
        Gate::Phase {
            theta,
            target: target.into(),
        }
    }

    pub fn hadamard(target: impl Into<QubitId>) -> Self {
        Gate::U1q {
            matrix: H,
            target: target.into(),
        }
    }

    /// `e^{iγ}·I`, used to pin the global phase.
    pub fn global_phase(gamma: f64, target: impl Into<QubitId>) -> Self {
        let z = Complex64::from_polar(1.0, gamma);
        Gate::U1q {
            matrix: [z, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), z],
            target: target.into(),
        }
    }

    pub fn mcx(controls: Vec<QubitId>, target: impl Into<QubitId>) -> Self {
        Gate::Mcx {
            controls,
            target: target.into(),
        }
    }

    pub fn givens(theta: f64, phi: f64, first: impl Into<QubitId>, second: impl Into<QubitId>) -> Self {
        Gate::Givens {
            theta,
            phi,
            first: first.into(),
            second: second.into(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::Ry { .. } => "ry",
            Gate::Rz { .. } => "rz",
            Gate::Phase { .. } => "p",
            Gate::U1q { .. } => "u",
            Gate::Cnot { .. } => "cx",
            Gate::Toffoli { .. } => "ccx",
            Gate::Mcx { .. } => "mcx",
            Gate::Givens { .. } => "givens",
        }
    }

    pub fn operands(&self) -> Operands<'_> {
        let z = QubitId(0);
        let (head, tail, tail_len): (&[QubitId], [QubitId; 3], usize) = match self {
            Gate::X(q)
            | Gate::Ry { target: q, .. }
            | Gate::Rz { target: q, .. }
            | Gate::Phase { target: q, .. }
            | Gate::U1q { target: q, .. } => (&[], [*q, z, z], 1),
            Gate::Cnot { control, target } => (&[], [*control, *target, z], 2),
            Gate::Toffoli { controls, target } => (&[], [controls[0], controls[1], *target], 3),
            Gate::Mcx { controls, target } => (controls.as_slice(), [*target, z, z], 1),
            Gate::Givens { first, second, .. } => (&[], [*first, *second, z], 2),
        };
        Operands {
            head,
            tail,
            tail_len,
            pos: 0,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Mcx { controls, .. } => controls.len() + 1,
            Gate::Cnot { .. } | Gate::Givens { .. } => 2,
            Gate::Toffoli { .. } => 3,
            _ => 1,
        }
    }

    /// True for gates that permute computational basis states.
    pub fn is_x_type(&self) -> bool {
        matches!(
            self,
            Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. } | Gate::Mcx { .. }
        )
    }

    /// True for members of the target gate set: single-qubit gates and CNOT.
    pub fn is_elementary(&self) -> bool {
        self.arity() == 1 && !matches!(self, Gate::Mcx { .. }) || matches!(self, Gate::Cnot { .. })
    }

    /// The 2×2 matrix of a single-qubit gate, row-major.
    pub fn single_qubit_matrix(&self) -> Option<[Complex64; 4]> {
        #[allow(unused_imports)]
        use num_traits::Float;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Some(match *self {
            Gate::X(_) => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            Gate::Ry { theta, .. } => {
                let (s, co) = (theta / 2.0).sin_cos();
                [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            Gate::Rz { theta, .. } => [
                Complex64::from_polar(1.0, -theta / 2.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ],
            Gate::Phase { theta, .. } => [
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, theta),
            ],
            Gate::U1q { matrix, .. } => matrix,
            _ => return None,
        })
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Ry { theta, target } => Gate::Ry {
                theta: -theta,
                target: *target,
            },
            Gate::Rz { theta, target } => Gate::Rz {
                theta: -theta,
                target: *target,
            },
            Gate::Phase { theta, target } => Gate::Phase {
                theta: -theta,
                target: *target,
            },
            Gate::U1q { matrix, target } => Gate::U1q {
                matrix: [
                    matrix[0].conj(),
                    matrix[2].conj(),
                    matrix[1].conj(),
                    matrix[3].conj(),
                ],
                target: *target,
            },
            Gate::Givens {
                theta,
                phi,
                first,
                second,
            } => Gate::Givens {
                theta: -theta,
                phi: *phi,
                first: *first,
                second: *second,
            },
            other => other.clone(),
        }
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        let mut seen: [QubitId; 3] = [QubitId(usize::MAX); 3];
        let mut many: Vec<QubitId> = Vec::new();
        for (i, q) in self.operands().enumerate() {
            if q.0 >= qubit_count {
                return Err(Error::OperandOutOfRange { qubit: q, qubit_count });
            }
            if i < 3 {
                if seen[..i].contains(&q) {
                    return Err(Error::DuplicateOperand(q));
                }
                seen[i] = q;
            } else {
                many.push(q);
            }
        }
        if !many.is_empty() {
            many.extend_from_slice(&seen);
            many.sort_unstable();
            if let Some(w) = many.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateOperand(w[0]));
            }
        }
        if let Gate::U1q { matrix, .. } = self {
            if !is_unitary(matrix, 1e-12) {
                return Err(Error::NonUnitary);
            }
        }
        Ok(())
    }
}

fn is_unitary(m: &[Complex64; 4], tol: f64) -> bool {
    // M·M† = I
    let a = m[0] * m[0].conj() + m[1] * m[1].conj();
    let b = m[0] * m[2].conj() + m[1] * m[3].conj();
    let d = m[2] * m[2].conj() + m[3] * m[3].conj();
    (a - 1.0).norm() <= tol && b.norm() <= tol && (d - 1.0).norm() <= tol
}

/// An ordered gate sequence over a fixed wire count.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    labels: BTreeMap<usize, String>,
    scratch: Option<Register>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Self {
            qubit_count,
            ..Self::default()
        }
    }

    #[inline]
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Provenance tags keyed by the index of the first gate they describe.
    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Tags the next appended gate. A later label at the same index wins.
    pub fn label(&mut self, tag: impl Into<String>) {
        self.labels.insert(self.gates.len(), tag.into());
    }

    pub fn set_label(&mut self, index: usize, tag: impl Into<String>) {
        self.labels.insert(index, tag.into());
    }

    /// Wires reserved for expanding [`Gate::Mcx`] during [`Circuit::decompose`].
    pub fn scratch(&self) -> Option<&Register> {
        self.scratch.as_ref()
    }

    pub fn bind_scratch(&mut self, register: Register) -> Result<()> {
        let end = register.offset.0 + register.width;
        if end > self.qubit_count {
            return Err(Error::OperandOutOfRange {
                qubit: QubitId(end - 1),
                qubit_count: self.qubit_count,
            });
        }
        self.scratch = Some(register);
        Ok(())
    }

    pub fn append(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other`, keeping its labels.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.qubit_count > self.qubit_count {
            if let Some(g) = other
                .gates
                .iter()
                .find(|g| g.operands().any(|q| q.0 >= self.qubit_count))
            {
                g.validate(self.qubit_count)?;
            }
        }
        let base = self.gates.len();
        self.gates.extend(other.gates.iter().cloned());
        for (i, tag) in &other.labels {
            self.labels.insert(base + i, tag.clone());
        }
        Ok(())
    }

    /// `self` followed by `other` on `max` of the two wire counts.
    pub fn compose(&self, other: &Circuit) -> Circuit {
        let mut out = self.clone();
        out.qubit_count = self.qubit_count.max(other.qubit_count);
        out.extend_from(other).expect("wire count covers both operands");
        out
    }

    /// Reversed gate order with every gate inverted. A label on gate `i`
    /// moves to the gate's new position.
    pub fn inverse(&self) -> Circuit {
        let n = self.gates.len();
        Circuit {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            labels: self
                .labels
                .iter()
                .filter(|(&i, _)| i < n)
                .map(|(&i, t)| (n - 1 - i, t.clone()))
                .collect(),
            scratch: self.scratch.clone(),
        }
    }

    /// Changes the wire count; fails if a gate would fall out of range.
    pub fn resize(&mut self, qubit_count: usize) -> Result<()> {
        if qubit_count < self.qubit_count {
            let max = self.max_operand();
            if let Some(q) = max.filter(|q| q.0 >= qubit_count) {
                return Err(Error::OperandOutOfRange { qubit: q, qubit_count });
            }
            if let Some(s) = &self.scratch {
                if s.offset.0 + s.width > qubit_count {
                    self.scratch = None;
                }
            }
        }
        self.qubit_count = qubit_count;
        Ok(())
    }

    pub fn max_operand(&self) -> Option<QubitId> {
        self.gates.iter().flat_map(Gate::operands).max()
    }

    /// Gates `range` as a standalone circuit on the same wires.
    pub fn slice(&self, range: core::ops::Range<usize>) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            gates: self.gates[range.clone()].to_vec(),
            labels: self
                .labels
                .range(range.clone())
                .map(|(&i, t)| (i - range.start, t.clone()))
                .collect(),
            scratch: self.scratch.clone(),
        }
    }

    /// Layer count under ASAP scheduling: each gate goes one layer after the
    /// latest layer touching any of its operands.
    pub fn depth(&self) -> usize {
        let mut frontier = alloc::vec![0usize; self.qubit_count];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.operands().map(|q| frontier[q.0]).max().unwrap_or(0) + 1;
            for q in g.operands() {
                frontier[q.0] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// True when every gate is X, CNOT, Toffoli or multi-controlled X.
    pub fn is_permutation(&self) -> bool {
        self.gates.iter().all(Gate::is_x_type)
    }

    pub fn is_elementary(&self) -> bool {
        self.gates.iter().all(Gate::is_elementary)
    }

    /// Counts gates by [`Gate::name`].
    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gates {
            *out.entry(g.name()).or_insert(0) += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn append_checks_operands() {
        let mut c = Circuit::new(2);
        c.append(Gate::cnot(0, 1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.depth(), 1);
        assert_eq!(c.append(Gate::cnot(0, 0)), Err(Error::DuplicateOperand(QubitId(0))));
        assert_eq!(
            c.append(Gate::cnot(0, 5)),
            Err(Error::OperandOutOfRange {
                qubit: QubitId(5),
                qubit_count: 2
            })
        );
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn mcx_duplicate_detection() {
        let mut c = Circuit::new(8);
        let dup = Gate::mcx(vec![QubitId(1), QubitId(2), QubitId(3), QubitId(2)], 0);
        assert_eq!(c.append(dup), Err(Error::DuplicateOperand(QubitId(2))));
        let ok = Gate::mcx(vec![QubitId(1), QubitId(2), QubitId(3), QubitId(4)], 0);
        c.append(ok).unwrap();
        let tgt = Gate::mcx(vec![QubitId(1), QubitId(2), QubitId(3), QubitId(4)], 4);
        assert!(c.append(tgt).is_err());
    }

    #[test]
    fn u1q_must_be_unitary() {
        let mut c = Circuit::new(1);
        let z = Complex64::new(0.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        assert_eq!(
            c.append(Gate::U1q {
                matrix: [two, z, z, two],
                target: QubitId(0)
            }),
            Err(Error::NonUnitary)
        );
        c.append(Gate::hadamard(0)).unwrap();
    }

    #[test]
    fn depth_examples() {
        let mut c = Circuit::new(4);
        c.append(Gate::cnot(0, 1)).unwrap();
        c.append(Gate::cnot(2, 3)).unwrap();
        assert_eq!(c.depth(), 1);
        let mut c = Circuit::new(3);
        c.append(Gate::cnot(0, 1)).unwrap();
        c.append(Gate::cnot(1, 2)).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(Circuit::new(3).depth(), 0);
    }

    #[test]
    fn inverse_negates_angles_and_reverses() {
        let mut c = Circuit::new(2);
        c.append(Gate::cnot(0, 1)).unwrap();
        assert_eq!(c.inverse().gates(), c.gates());

        let mut c = Circuit::new(2);
        c.append(Gate::ry(0.3, 0)).unwrap();
        c.append(Gate::cnot(0, 1)).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates(), &[Gate::cnot(0, 1), Gate::ry(-0.3, 0)]);
    }

    #[test]
    fn labels_follow_gates() {
        let mut c = Circuit::new(2);
        c.label("a");
        c.append(Gate::x(0)).unwrap();
        c.label("b");
        c.append(Gate::x(1)).unwrap();
        c.append(Gate::x(0)).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.labels().get(&2).map(String::as_str), Some("a"));
        assert_eq!(inv.labels().get(&1).map(String::as_str), Some("b"));
        let s = c.slice(1..3);
        assert_eq!(s.labels().get(&0).map(String::as_str), Some("b"));
    }

    #[test]
    fn resize_refuses_to_cut_live_wires() {
        let mut c = Circuit::new(10);
        c.append(Gate::cnot(0, 6)).unwrap();
        assert!(c.resize(6).is_err());
        c.resize(7).unwrap();
        assert_eq!(c.qubit_count(), 7);
    }
}
