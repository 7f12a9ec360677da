//! Dense state preparation on the `⌈log₂ d⌉`-qubit index register.
//!
//! Both strategies share one probability-splitting tree ([`split_angles`]):
//! node `(t, p)` sends the amplitude mass of prefix `p` into its two children
//! with an `RY`-style angle, and leaves carry the amplitude phases.
//!
//! * [`DenseStrategy::Multiplexed`] applies one uniformly controlled `RY` per
//!   qubit and a uniformly controlled `RZ` cascade for the phases. No
//!   ancillae, depth `O(d)`.
//! * [`DenseStrategy::OneHotTree`] runs the same tree with Givens rotations on
//!   a one-hot register of width `2^s` (depth `O(log d)`) and then compacts it
//!   to binary with [`unary_to_binary`].

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::circuit::{Circuit, Gate, QubitId};
use crate::pool::ScratchPool;
use crate::primitives::{unary_to_binary, unary_to_binary_scratch, UnaryBlock};
use crate::{Error, Result};

/// Normalization tolerance on `‖α‖₂`.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DenseStrategy {
    #[default]
    Multiplexed,
    OneHotTree,
}

/// `d ≥ 1` amplitudes with unit ℓ₂ norm.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector {
    amps: Vec<Complex64>,
}

impl AmplitudeVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if amps.is_empty() || (norm_sqr.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// `⌈log₂ d⌉`, the index register width.
    pub fn index_width(&self) -> usize {
        index_width(self.amps.len())
    }
}

/// `⌈log₂ d⌉` (0 for `d ≤ 1`).
pub fn index_width(d: usize) -> usize {
    if d <= 1 {
        0
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

/// Splitting angles for a complete binary tree over `2^s` leaves.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitTree {
    /// `thetas[t][p]`: angle at depth `t` for prefix `p` (MSB first).
    pub thetas: Vec<Vec<f64>>,
    /// `masses[t][p]`: total `|α|²` under node `(t, p)`; `masses[s]` are the leaves.
    pub masses: Vec<Vec<f64>>,
    /// `arg(αᵢ)`, 0 for padded or zero leaves.
    pub phases: Vec<f64>,
}

impl SplitTree {
    pub fn depth(&self) -> usize {
        self.thetas.len()
    }
}

/// Left mass `L`, right mass `R` → `θ = 2·atan2(√R, √L)`; an empty node gets 0.
pub fn split_angles(amps: &AmplitudeVector) -> SplitTree {
    let s = amps.index_width();
    let leaves = 1usize << s;
    let mut leaf_mass = alloc::vec![0.0; leaves];
    let mut phases = alloc::vec![0.0; leaves];
    for (i, a) in amps.as_slice().iter().enumerate() {
        leaf_mass[i] = a.norm_sqr();
        if a.norm_sqr() > 0.0 {
            phases[i] = a.arg();
        }
    }
    let mut masses = alloc::vec![leaf_mass];
    for _ in 0..s {
        let below = masses.last().unwrap();
        let up: Vec<f64> = below.chunks(2).map(|c| c[0] + c[1]).collect();
        masses.push(up);
    }
    masses.reverse();
    let thetas = (0..s)
        .map(|t| {
            (0..1usize << t)
                .map(|p| {
                    let (l, r) = (masses[t + 1][2 * p], masses[t + 1][2 * p + 1]);
                    if l + r == 0.0 {
                        0.0
                    } else {
                        2.0 * r.sqrt().atan2(l.sqrt())
                    }
                })
                .collect()
        })
        .collect();
    SplitTree {
        thetas,
        masses,
        phases,
    }
}

/// Scratch needed by [`prepare_dense`] beyond the index register.
pub fn dense_scratch(d: usize, strategy: DenseStrategy) -> usize {
    let s = index_width(d);
    match strategy {
        _ if s == 0 => 0,
        DenseStrategy::Multiplexed => 0,
        DenseStrategy::OneHotTree => (1usize << s) + unary_to_binary_scratch(s),
    }
}

#[derive(Clone, Copy)]
enum Axis {
    Y,
    Z,
}

fn rotation(axis: Axis, theta: f64, target: QubitId) -> Gate {
    match axis {
        Axis::Y => Gate::ry(theta, target),
        Axis::Z => Gate::rz(theta, target),
    }
}

/// Rotation by `angles[p]` on `target` when the controls read `p` (MSB first).
///
/// Gray-code network: `2^k` rotations interleaved with `2^k` CNOTs, the
/// rotation angles being the Walsh transform of `angles` in Gray order.
fn multiplexed_rotation(
    circ: &mut Circuit,
    axis: Axis,
    angles: &[f64],
    controls: &[QubitId],
    target: QubitId,
) -> Result<()> {
    let k = controls.len();
    let n = 1usize << k;
    debug_assert_eq!(angles.len(), n);
    if angles.iter().all(|&a| a == 0.0) {
        return Ok(());
    }
    let gray = |i: usize| i ^ (i >> 1);
    let alphas: Vec<f64> = (0..n)
        .map(|i| {
            let g = gray(i);
            angles
                .iter()
                .enumerate()
                .map(|(p, &th)| if (g & p).count_ones() % 2 == 0 { th } else { -th })
                .sum::<f64>()
                / n as f64
        })
        .collect();
    // The CNOT cycle alone is the identity.
    if k == 0 || alphas[1..].iter().all(|&a| a.abs() < 1e-15) {
        return circ.append(rotation(axis, alphas[0], target));
    }
    for (i, &alpha) in alphas.iter().enumerate() {
        let g = gray(i);
        if alpha != 0.0 {
            circ.append(rotation(axis, alpha, target))?;
        }
        let changed = (g ^ gray((i + 1) % n)).trailing_zeros() as usize;
        circ.append(Gate::cnot(controls[k - 1 - changed], target))?;
    }
    Ok(())
}

fn multiplexed(circ: &mut Circuit, tree: &SplitTree, index: &[QubitId]) -> Result<()> {
    let s = tree.depth();
    for t in 0..s {
        multiplexed_rotation(circ, Axis::Y, &tree.thetas[t], &index[..t], index[t])?;
    }
    // Diagonal phases: peel one qubit at a time from the least significant,
    // pushing pair means up.
    let mut phases = tree.phases.clone();
    for t in (0..s).rev() {
        let diffs: Vec<f64> = phases.chunks(2).map(|c| c[1] - c[0]).collect();
        phases = phases.chunks(2).map(|c| (c[0] + c[1]) / 2.0).collect();
        multiplexed_rotation(circ, Axis::Z, &diffs, &index[..t], index[t])?;
    }
    if phases[0] != 0.0 {
        circ.append(Gate::global_phase(phases[0], index[0]))?;
    }
    Ok(())
}

fn one_hot_tree(circ: &mut Circuit, tree: &SplitTree, index: &[QubitId], pool: &mut ScratchPool) -> Result<()> {
    let s = tree.depth();
    let slots = pool.lease(1 << s)?;
    circ.label("stage0/tree");
    circ.append(Gate::X(slots[0]))?;
    for t in 0..s {
        let stride = 1usize << (s - t);
        for (p, &theta) in tree.thetas[t].iter().enumerate() {
            if theta != 0.0 {
                let at = p * stride;
                circ.append(Gate::givens(theta, 0.0, slots[at], slots[at + stride / 2]))?;
            }
        }
    }
    for (i, &phi) in tree.phases.iter().enumerate() {
        if phi != 0.0 && tree.masses[s][i] > 0.0 {
            circ.append(Gate::phase(phi, slots[i]))?;
        }
    }
    circ.label("stage0/compact");
    let block = UnaryBlock::new(slots.clone())?;
    unary_to_binary(circ, &block, index, pool)?;
    pool.release(&slots);
    Ok(())
}

/// `|0^s⟩ → Σᵢ αᵢ|i⟩` on `index` (`s = ⌈log₂ d⌉` wires, qubit 0 most significant).
pub fn prepare_dense(
    circ: &mut Circuit,
    amps: &AmplitudeVector,
    strategy: DenseStrategy,
    index: &[QubitId],
    pool: &mut ScratchPool,
) -> Result<()> {
    let s = amps.index_width();
    if index.len() != s {
        return Err(Error::WidthMismatch {
            expected: s,
            found: index.len(),
        });
    }
    if s == 0 {
        return Ok(());
    }
    let tree = split_angles(amps);
    match strategy {
        DenseStrategy::Multiplexed => multiplexed(circ, &tree, index),
        DenseStrategy::OneHotTree => one_hot_tree(circ, &tree, index, pool),
    }
}
