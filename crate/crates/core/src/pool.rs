//! Explicit ancilla accounting.
//!
//! Every ancillary wire a builder touches is leased from a [`ScratchPool`].
//! Leases always take the lowest free indices, so after a build the wires
//! actually used are exactly the first `high_water` of the pool and the
//! circuit can be trimmed to them.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::circuit::QubitId;
use crate::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct ScratchPool {
    free: BTreeSet<QubitId>,
    capacity: usize,
    leased: usize,
    high_water: usize,
}

impl ScratchPool {
    /// A pool over `count` wires starting at `offset`, all assumed `|0⟩`.
    pub fn new(offset: usize, count: usize) -> Self {
        Self::from_wires((offset..offset + count).map(QubitId))
    }

    pub fn from_wires(wires: impl IntoIterator<Item = QubitId>) -> Self {
        let free: BTreeSet<QubitId> = wires.into_iter().collect();
        Self {
            capacity: free.len(),
            free,
            leased: 0,
            high_water: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn available(&self) -> usize {
        self.free.len()
    }

    pub fn leased(&self) -> usize {
        self.leased
    }

    /// Largest number of wires leased at the same time.
    pub fn high_water(&self) -> usize {
        self.high_water
    }

    /// Leases the `count` lowest free wires.
    pub fn lease(&mut self, count: usize) -> Result<Vec<QubitId>> {
        if count > self.free.len() {
            return Err(Error::InsufficientScratch {
                needed: count,
                available: self.free.len(),
            });
        }
        let out: Vec<QubitId> = (0..count).map(|_| self.free.pop_first().unwrap()).collect();
        self.leased += count;
        self.high_water = self.high_water.max(self.leased);
        Ok(out)
    }

    /// Leases exactly `wires`, which must all be free.
    pub fn reclaim(&mut self, wires: &[QubitId]) -> Result<()> {
        if let Some(&q) = wires.iter().find(|q| !self.free.contains(q)) {
            return Err(Error::DuplicateOperand(q));
        }
        for q in wires {
            self.free.remove(q);
        }
        self.leased += wires.len();
        self.high_water = self.high_water.max(self.leased);
        Ok(())
    }

    /// Returns wires to the pool. The caller guarantees they are back in `|0⟩`.
    pub fn release(&mut self, wires: &[QubitId]) {
        for &q in wires {
            let fresh = self.free.insert(q);
            debug_assert!(fresh, "wire {q} released twice");
        }
        self.leased -= wires.len();
    }

    /// Leases `count` wires as an independent sub-pool. Builders that must
    /// run side by side each get their own sub-pool so their scratch is
    /// disjoint.
    pub fn split(&mut self, count: usize) -> Result<ScratchPool> {
        Ok(ScratchPool::from_wires(self.lease(count)?))
    }

    /// Returns a sub-pool created by [`ScratchPool::split`].
    pub fn merge(&mut self, child: ScratchPool) {
        debug_assert_eq!(child.leased, 0, "sub-pool returned with live leases");
        let wires: Vec<QubitId> = child.free.into_iter().collect();
        self.release(&wires);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leases_lowest_first_and_tracks_high_water() {
        let mut p = ScratchPool::new(10, 5);
        let a = p.lease(3).unwrap();
        assert_eq!(a, [QubitId(10), QubitId(11), QubitId(12)]);
        p.release(&a[..2]);
        let b = p.lease(2).unwrap();
        assert_eq!(b, [QubitId(10), QubitId(11)]);
        assert_eq!(p.high_water(), 3);
        assert_eq!(
            p.lease(3),
            Err(Error::InsufficientScratch {
                needed: 3,
                available: 2
            })
        );
    }

    #[test]
    fn reclaim_takes_back_specific_wires() {
        let mut p = ScratchPool::new(0, 4);
        let a = p.lease(2).unwrap();
        p.release(&a);
        p.reclaim(&[QubitId(1)]).unwrap();
        assert_eq!(p.lease(1).unwrap(), [QubitId(0)]);
        assert!(p.reclaim(&[QubitId(1)]).is_err());
    }

    #[test]
    fn split_and_merge() {
        let mut p = ScratchPool::new(0, 6);
        let mut child = p.split(4).unwrap();
        assert_eq!(p.available(), 2);
        let w = child.lease(4).unwrap();
        child.release(&w);
        p.merge(child);
        assert_eq!(p.available(), 6);
        assert_eq!(p.high_water(), 4);
    }
}
