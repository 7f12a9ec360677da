//! Sparse statevector simulation.
//!
//! States are stored as a list of `(basis string, amplitude)` pairs, so the
//! cost of a gate is linear in the support size and independent of the wire
//! count. Permutation gates rewrite keys in place; gates that create
//! superpositions split each term into at most two.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bits::BasisString;
use crate::circuit::{Circuit, Gate};
use crate::sqsp::SparseStateSpec;
use crate::{Error, Result};

/// Amplitudes at or below this magnitude are dropped after each gate.
pub const PRUNE_EPS: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector {
    width: usize,
    terms: Vec<(BasisString, Complex64)>,
}

impl SparseVector {
    /// `|0…0⟩` on `width` wires.
    pub fn zero_state(width: usize) -> Self {
        Self::basis(BasisString::zeros(width))
    }

    pub fn basis(bits: BasisString) -> Self {
        Self {
            width: bits.width(),
            terms: alloc::vec![(bits, Complex64::new(1.0, 0.0))],
        }
    }

    /// Builds a state from terms; repeated keys are summed.
    pub fn from_terms(width: usize, terms: impl IntoIterator<Item = (BasisString, Complex64)>) -> Result<Self> {
        let mut acc: BTreeMap<BasisString, Complex64> = BTreeMap::new();
        for (k, a) in terms {
            if k.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: k.width(),
                });
            }
            *acc.entry(k).or_default() += a;
        }
        let mut out = Self {
            width,
            terms: acc.into_iter().collect(),
        };
        out.prune();
        Ok(out)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Terms in gate-application order.
    pub fn terms(&self) -> &[(BasisString, Complex64)] {
        &self.terms
    }

    /// Terms sorted by basis string.
    pub fn sorted_terms(&self) -> Vec<(BasisString, Complex64)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| a.0.cmp(&b.0));
        t
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn amplitude(&self, key: &BasisString) -> Complex64 {
        self.terms
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, a)| *a)
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    fn prune(&mut self) {
        self.terms.retain(|(_, a)| a.norm() > PRUNE_EPS);
    }

    /// Applies one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if let Some(q) = gate.operands().find(|q| q.0 >= self.width) {
            return Err(Error::OperandOutOfRange {
                qubit: q,
                qubit_count: self.width,
            });
        }
        if gate.is_x_type() {
            for (k, _) in &mut self.terms {
                permute(gate, k);
            }
            return Ok(());
        }
        match *gate {
            Gate::Givens {
                theta,
                phi,
                first,
                second,
            } => {
                let (s, c) = (theta / 2.0).sin_cos();
                let fwd = Complex64::from_polar(s, phi);
                let back = -Complex64::from_polar(s, -phi);
                self.split_terms(|k, a, out| match (k.get(first.0), k.get(second.0)) {
                    (true, false) => {
                        let mut moved = k.clone();
                        moved.flip(first.0);
                        moved.flip(second.0);
                        out.push((k.clone(), a * c));
                        out.push((moved, a * fwd));
                    }
                    (false, true) => {
                        let mut moved = k.clone();
                        moved.flip(first.0);
                        moved.flip(second.0);
                        out.push((moved, a * back));
                        out.push((k.clone(), a * c));
                    }
                    _ => out.push((k.clone(), a)),
                });
            }
            _ => {
                let m = gate.single_qubit_matrix().expect("remaining gates act on one qubit");
                let q = gate.operands().next().unwrap().0;
                let zero = Complex64::new(0.0, 0.0);
                if m[1] == zero && m[2] == zero {
                    for (k, a) in &mut self.terms {
                        *a *= if k.get(q) { m[3] } else { m[0] };
                    }
                    self.prune();
                } else {
                    self.split_terms(|k, a, out| {
                        let bit = usize::from(k.get(q));
                        let mut lo = k.clone();
                        lo.set(q, false);
                        let mut hi = k.clone();
                        hi.set(q, true);
                        out.push((lo, m[bit] * a));
                        out.push((hi, m[2 + bit] * a));
                    });
                }
            }
        }
        Ok(())
    }

    fn split_terms(&mut self, mut f: impl FnMut(&BasisString, Complex64, &mut Vec<(BasisString, Complex64)>)) {
        let mut out = Vec::with_capacity(self.terms.len() * 2);
        for (k, a) in &self.terms {
            f(k, *a, &mut out);
        }
        // Merge keys that collided, keeping first-seen order.
        let mut index: BTreeMap<BasisString, usize> = BTreeMap::new();
        let mut merged: Vec<(BasisString, Complex64)> = Vec::with_capacity(out.len());
        for (k, a) in out {
            match index.get(&k) {
                Some(&i) => merged[i].1 += a,
                None => {
                    index.insert(k.clone(), merged.len());
                    merged.push((k, a));
                }
            }
        }
        self.terms = merged;
        self.prune();
    }
}

fn permute(gate: &Gate, k: &mut BasisString) {
    match gate {
        Gate::X(q) => k.flip(q.0),
        Gate::Cnot { control, target } => {
            if k.get(control.0) {
                k.flip(target.0);
            }
        }
        Gate::Toffoli { controls, target } => {
            if k.get(controls[0].0) && k.get(controls[1].0) {
                k.flip(target.0);
            }
        }
        Gate::Mcx { controls, target } => {
            if controls.iter().all(|c| k.get(c.0)) {
                k.flip(target.0);
            }
        }
        _ => unreachable!("not a permutation gate"),
    }
}

/// Folds [`SparseVector::apply_gate`] over the circuit.
pub fn run(circuit: &Circuit, initial: &SparseVector) -> Result<SparseVector> {
    if initial.width() != circuit.qubit_count() {
        return Err(Error::WidthMismatch {
            expected: circuit.qubit_count(),
            found: initial.width(),
        });
    }
    let mut state = initial.clone();
    for g in circuit.gates() {
        state.apply_gate(g)?;
    }
    Ok(state)
}

/// Classical simulation of a circuit made only of X-type gates.
pub fn run_reversible(circuit: &Circuit, input: &BasisString) -> Result<BasisString> {
    if input.width() != circuit.qubit_count() {
        return Err(Error::WidthMismatch {
            expected: circuit.qubit_count(),
            found: input.width(),
        });
    }
    if let Some(g) = circuit.gates().iter().find(|g| !g.is_x_type()) {
        return Err(Error::NonPermutationGate(g.name()));
    }
    let mut out = input.clone();
    for g in circuit.gates() {
        permute(g, &mut out);
    }
    Ok(out)
}

/// Outcome of checking a simulated state against a target spec.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    /// Largest per-amplitude deviation after global-phase alignment.
    pub max_amp_error: f64,
    /// Every support string has all non-data wires at 0.
    pub ancilla_clean: bool,
    /// Phase removed from the simulated state before comparing.
    pub global_phase: f64,
    pub support_len: usize,
    pub missing_terms: usize,
}

impl CompareReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.ancilla_clean && self.max_amp_error <= tol
    }
}

/// Compares `state` with `spec`, reading bit `i` of each basis string from
/// wire `data_qubits[i]`.
///
/// The global phase is aligned on the spec's largest-magnitude amplitude.
pub fn compare(state: &SparseVector, spec: &SparseStateSpec, data_qubits: &[usize]) -> CompareReport {
    let mut is_data = alloc::vec![false; state.width()];
    for &q in data_qubits {
        is_data[q] = true;
    }
    let mut ancilla_clean = true;
    let mut max_err: f64 = 0.0;
    let mut found: BTreeMap<BasisString, Complex64> = BTreeMap::new();
    for (k, a) in state.terms() {
        let dirty = (0..state.width()).any(|q| !is_data[q] && k.get(q));
        if dirty {
            ancilla_clean = false;
            max_err = max_err.max(a.norm());
        } else {
            *found.entry(k.gather(data_qubits)).or_default() += *a;
        }
    }
    let anchor = spec
        .terms()
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.1.norm().total_cmp(&y.1.norm()).then(j.cmp(i)))
        .map(|(_, t)| t);
    let global_phase = anchor
        .and_then(|(b, alpha)| found.get(b).map(|s| s.arg() - alpha.arg()))
        .unwrap_or(0.0);
    let rot = Complex64::from_polar(1.0, -global_phase);
    let mut missing = 0;
    for (b, alpha) in spec.terms() {
        match found.remove(b) {
            Some(s) => max_err = max_err.max((s * rot - alpha).norm()),
            None => {
                missing += 1;
                max_err = max_err.max(alpha.norm());
            }
        }
    }
    for a in found.values() {
        max_err = max_err.max(a.norm());
    }
    CompareReport {
        max_amp_error: max_err,
        ancilla_clean,
        global_phase,
        support_len: state.support_len(),
        missing_terms: missing,
    }
}
