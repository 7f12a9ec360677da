//! Phase 2: every one-hot block back to `r` binary bits, all blocks in parallel.

use alloc::vec::Vec;

use crate::circuit::{Circuit, QubitId};
use crate::pool::ScratchPool;
use crate::primitives::{unary_to_binary, unary_to_binary_scratch, UnaryBlock};
use crate::Result;

/// Converts `blocks` into the `n′` output bits, the first `n′ − n` of which
/// land on leased padding wires and must come out `|0⟩`. Releases the blocks.
pub fn phase2(
    circ: &mut Circuit,
    blocks: &[Vec<QubitId>],
    data: &[QubitId],
    pool: &mut ScratchPool,
) -> Result<()> {
    let r = blocks.first().map_or(0, |b| b.len().trailing_zeros() as usize);
    let n_pad = blocks.len() * r;
    let pad = pool.lease(n_pad - data.len())?;
    let outputs: Vec<QubitId> = pad.iter().chain(data).copied().collect();
    let mut subs = Vec::with_capacity(blocks.len());
    for _ in blocks {
        subs.push(pool.split(unary_to_binary_scratch(r))?);
    }
    circ.label("phase2");
    for ((b, block), sub) in blocks.iter().enumerate().zip(subs.iter_mut()) {
        let block = UnaryBlock::new(block.clone())?;
        unary_to_binary(circ, &block, &outputs[b * r..(b + 1) * r], sub)?;
    }
    for sub in subs {
        pool.merge(sub);
    }
    for block in blocks {
        pool.release(block);
    }
    pool.release(&pad);
    Ok(())
}
