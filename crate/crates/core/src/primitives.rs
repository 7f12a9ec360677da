//! Reversible building blocks: parity fan-in, fanout, multi-controlled X,
//! and conversion between binary and one-hot encodings.
//!
//! Every builder appends to a [`Circuit`] and draws ancillae only from the
//! [`ScratchPool`] it is handed. All of them uncompute their scratch, so the
//! pool is clean again when they return.

use alloc::vec::Vec;

use crate::circuit::decompose::mcx_network;
use crate::circuit::{Circuit, Gate, McxStrategy, QubitId};
use crate::pool::ScratchPool;
use crate::{Error, Result};

/// A one-hot register of width `2^s`. Wire 0 is index 0, so `e_3` on four
/// wires reads `0001`.
///
/// Only one-hot or all-zero contents are meaningful; the converters below
/// are not defined on other inputs and do not detect them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryBlock {
    wires: Vec<QubitId>,
    arity: usize,
}

impl UnaryBlock {
    pub fn new(wires: Vec<QubitId>) -> Result<Self> {
        if !wires.len().is_power_of_two() {
            return Err(Error::WidthMismatch {
                expected: wires.len().next_power_of_two(),
                found: wires.len(),
            });
        }
        let arity = wires.len().trailing_zeros() as usize;
        Ok(Self { wires, arity })
    }

    /// `s`, the number of binary bits the block encodes.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn wires(&self) -> &[QubitId] {
        &self.wires
    }
}

fn ensure_distinct(wires: impl IntoIterator<Item = QubitId>) -> Result<()> {
    let mut v: Vec<QubitId> = wires.into_iter().collect();
    v.sort_unstable();
    match v.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateOperand(w[0])),
        None => Ok(()),
    }
}

/// `target ⊕= ⊕ controls` by folding the controls pairwise in place,
/// copying the root into `target`, then unfolding.
///
/// Depth `2⌈log₂ c⌉ + 1`, no scratch.
pub fn parity_fanin(circ: &mut Circuit, controls: &[QubitId], target: QubitId) -> Result<()> {
    if controls.is_empty() {
        return Err(Error::EmptyControls);
    }
    ensure_distinct(controls.iter().copied().chain([target]))?;
    let mut fold = Vec::with_capacity(controls.len());
    let mut step = 1;
    while step < controls.len() {
        for i in (0..controls.len()).step_by(2 * step) {
            if i + step < controls.len() {
                fold.push(Gate::cnot(controls[i + step], controls[i]));
            }
        }
        step *= 2;
    }
    for g in &fold {
        circ.append(g.clone())?;
    }
    circ.append(Gate::cnot(controls[0], target))?;
    for g in fold.into_iter().rev() {
        circ.append(g)?;
    }
    Ok(())
}

/// The binary-doubling copy network: each layer, every wire already holding
/// the source value writes one more target.
fn doubling_network(source: QubitId, targets: &[QubitId]) -> Vec<Gate> {
    let mut written = Vec::with_capacity(targets.len() + 1);
    written.push(source);
    let mut out = Vec::with_capacity(targets.len());
    let mut next = 0;
    while next < targets.len() {
        let writers = written.len();
        for w in 0..writers {
            if next == targets.len() {
                break;
            }
            out.push(Gate::cnot(written[w], targets[next]));
            written.push(targets[next]);
            next += 1;
        }
    }
    out
}

fn check_fanout(source: QubitId, targets: &[QubitId]) -> Result<()> {
    if targets.contains(&source) {
        return Err(Error::SourceInTargets);
    }
    ensure_distinct(targets.iter().copied())
}

/// Copies `source` onto targets known to be `|0⟩`: exactly `|targets|`
/// CNOTs in depth `⌈log₂(|targets| + 1)⌉`.
pub fn fanout_clean(circ: &mut Circuit, source: QubitId, targets: &[QubitId]) -> Result<()> {
    check_fanout(source, targets)?;
    for g in doubling_network(source, targets) {
        circ.append(g)?;
    }
    Ok(())
}

/// `targets[i] ⊕= source` for arbitrary target contents.
///
/// The doubling network alone also XORs earlier targets into later ones, so
/// the target-to-target part is inverted first. Twice the depth of
/// [`fanout_clean`]; identical to it when no target feeds another.
pub fn fanout(circ: &mut Circuit, source: QubitId, targets: &[QubitId]) -> Result<()> {
    check_fanout(source, targets)?;
    let net = doubling_network(source, targets);
    let pre: Vec<&Gate> = net
        .iter()
        .filter(|g| !matches!(g, Gate::Cnot { control, .. } if *control == source))
        .collect();
    for g in pre.into_iter().rev() {
        circ.append(g.clone())?;
    }
    for g in net {
        circ.append(g)?;
    }
    Ok(())
}

/// Scratch consumed by [`mcx`].
pub fn mcx_scratch(controls: usize, strategy: McxStrategy) -> usize {
    strategy.scratch_for(controls)
}

/// Flips `target` iff every control is 1, expanded into Toffolis with scratch
/// from `pool`.
pub fn mcx(
    circ: &mut Circuit,
    controls: &[QubitId],
    target: QubitId,
    pool: &mut ScratchPool,
    strategy: McxStrategy,
) -> Result<()> {
    ensure_distinct(controls.iter().copied().chain([target]))?;
    let scratch = pool.lease(mcx_scratch(controls.len(), strategy))?;
    let mut gates = Vec::new();
    mcx_network(controls, target, &scratch, strategy, &mut gates);
    for g in gates {
        circ.append(g)?;
    }
    pool.release(&scratch);
    Ok(())
}

/// Scratch consumed by [`binary_to_unary`] for an `s`-bit address.
pub fn binary_to_unary_scratch(s: usize) -> usize {
    if s == 0 {
        0
    } else {
        (1usize << s) - 1 - s
    }
}

/// Scratch consumed by [`unary_extract`] for a block of arity `s`.
pub fn unary_extract_scratch(s: usize) -> usize {
    if s == 0 {
        0
    } else {
        (1usize << s) - 2
    }
}

/// Scratch consumed by [`unary_to_binary`] for a block of arity `s`.
pub fn unary_to_binary_scratch(s: usize) -> usize {
    unary_extract_scratch(s).max(binary_to_unary_scratch(s))
}

fn check_widths(block: &UnaryBlock, bin: &[QubitId]) -> Result<()> {
    if bin.len() != block.arity() {
        return Err(Error::WidthMismatch {
            expected: block.arity(),
            found: bin.len(),
        });
    }
    ensure_distinct(bin.iter().chain(block.wires()).copied())
}

/// `|i⟩|0^{2^s}⟩ → |i⟩|e_i⟩` with an address-decoder tree.
///
/// Address bit `t` is first copied `2^t` times. Starting from `e_0`, level `t`
/// splits every live slot into a kept and a moved half with one Toffoli and
/// one CNOT per slot, all in parallel. Depth `O(s)`, size `O(2^s)`.
pub fn binary_to_unary(
    circ: &mut Circuit,
    bin: &[QubitId],
    block: &UnaryBlock,
    pool: &mut ScratchPool,
) -> Result<()> {
    check_widths(block, bin)?;
    let s = block.arity();
    let slots = block.wires();
    if s == 0 {
        return circ.append(Gate::X(slots[0]));
    }
    let mut copies: Vec<Vec<QubitId>> = Vec::with_capacity(s);
    let mut fan = Circuit::new(circ.qubit_count());
    for (t, &b) in bin.iter().enumerate() {
        let extra = pool.lease((1 << t) - 1)?;
        fanout_clean(&mut fan, b, &extra)?;
        let mut all = Vec::with_capacity(1 << t);
        all.push(b);
        all.extend(extra);
        copies.push(all);
    }
    circ.extend_from(&fan)?;
    circ.append(Gate::X(slots[0]))?;
    for (t, bit_copies) in copies.iter().enumerate() {
        let stride = 1 << (s - t);
        let half = stride / 2;
        for (p, &ctl) in bit_copies.iter().enumerate() {
            let at = p * stride;
            circ.append(Gate::toffoli(slots[at], ctl, slots[at + half]))?;
        }
        for p in 0..bit_copies.len() {
            let at = p * stride;
            circ.append(Gate::cnot(slots[at + half], slots[at]))?;
        }
    }
    circ.extend_from(&fan.inverse())?;
    for c in &copies {
        pool.release(&c[1..]);
    }
    Ok(())
}

/// `|e_i⟩|b⟩ → |e_i⟩|b ⊕ i⟩`, leaving the one-hot block in place.
///
/// Level `t` of a fold tree holds `e_{i mod 2^{s−t}}` (`new[j] = old[j] ⊕
/// old[j + half]`), and bit `t` of `i` is the parity of that level's upper
/// half. The levels are disjoint, so all `s` parities run in parallel.
pub fn unary_extract(
    circ: &mut Circuit,
    block: &UnaryBlock,
    bin: &[QubitId],
    pool: &mut ScratchPool,
) -> Result<()> {
    check_widths(block, bin)?;
    let s = block.arity();
    if s == 0 {
        return Ok(());
    }
    let mut levels: Vec<Vec<QubitId>> = Vec::with_capacity(s);
    levels.push(block.wires().to_vec());
    let mut fold = Circuit::new(circ.qubit_count());
    for t in 1..s {
        let w = 1 << (s - t);
        let reg = pool.lease(w)?;
        let prev = &levels[t - 1];
        for j in 0..w {
            fold.append(Gate::cnot(prev[j], reg[j]))?;
        }
        for j in 0..w {
            fold.append(Gate::cnot(prev[j + w], reg[j]))?;
        }
        levels.push(reg);
    }
    circ.extend_from(&fold)?;
    for (t, level) in levels.iter().enumerate() {
        let half = level.len() / 2;
        parity_fanin(circ, &level[half..], bin[t])?;
    }
    circ.extend_from(&fold.inverse())?;
    for reg in &levels[1..] {
        pool.release(reg);
    }
    Ok(())
}

/// `|e_i⟩|0^s⟩ → |0^{2^s}⟩|i⟩`: extract the index, then clear the block by
/// running [`binary_to_unary`] backwards on the recovered address.
pub fn unary_to_binary(
    circ: &mut Circuit,
    block: &UnaryBlock,
    bin: &[QubitId],
    pool: &mut ScratchPool,
) -> Result<()> {
    unary_extract(circ, block, bin, pool)?;
    let mut clear = Circuit::new(circ.qubit_count());
    binary_to_unary(&mut clear, bin, block, pool)?;
    circ.extend_from(&clear.inverse())
}
