use bitvec::prelude::*;
use rand::Rng;

use crate::error::{Error, Result};

/// Read access to edge states, shared by packed configurations and the
/// integer masks used during exhaustive enumeration.
pub trait EdgeStates {
    fn num_edges(&self) -> usize;
    fn is_open(&self, edge: usize) -> bool;
}

/// Edge configuration ω ∈ {0,1}^E; bit set means the edge is open.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Configuration {
    bits: BitVec<u64, Lsb0>,
}

impl Configuration {
    pub fn all_closed(num_edges: usize) -> Self {
        Self { bits: bitvec![u64, Lsb0; 0; num_edges] }
    }

    pub fn all_open(num_edges: usize) -> Self {
        Self { bits: bitvec![u64, Lsb0; 1; num_edges] }
    }

    /// Builds a configuration from the low `num_edges` bits of `mask`.
    pub fn from_mask(mask: u64, num_edges: usize) -> Self {
        assert!(num_edges <= 64);
        let mut c = Self::all_closed(num_edges);
        for e in 0..num_edges {
            c.set(e, mask >> e & 1 == 1);
        }
        c
    }

    pub fn from_bools(states: &[bool]) -> Self {
        Self { bits: states.iter().copied().collect() }
    }

    /// Builds a configuration with the listed edges open.
    pub fn with_open(num_edges: usize, open: &[usize]) -> Self {
        let mut c = Self::all_closed(num_edges);
        for &e in open {
            c.set(e, true);
        }
        c
    }

    pub fn random<R: Rng + ?Sized>(num_edges: usize, p: f64, rng: &mut R) -> Self {
        let mut c = Self::all_closed(num_edges);
        for e in 0..num_edges {
            c.set(e, rng.gen::<f64>() < p);
        }
        c
    }

    /// Packs into an integer mask; `None` above 64 edges.
    pub fn to_mask(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        Some(self.bits.iter_ones().fold(0u64, |m, e| m | 1 << e))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, edge: usize) -> bool {
        self.bits[edge]
    }

    #[inline]
    pub fn set(&mut self, edge: usize, open: bool) {
        self.bits.set(edge, open);
    }

    pub fn open_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn open_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Edgewise order: true iff every edge open in `self` is open in `other`.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.bits.iter_ones().all(|e| other.bits[e])
    }

    pub fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::SizeMismatch { expected, got: self.len() });
        }
        Ok(())
    }

    /// Packed bytes, least significant bit first, `ceil(len / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for e in self.bits.iter_ones() {
            out[e / 8] |= 1 << (e % 8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], num_edges: usize) -> Self {
        let mut c = Self::all_closed(num_edges);
        for e in 0..num_edges {
            c.set(e, bytes[e / 8] >> (e % 8) & 1 == 1);
        }
        c
    }
}

impl EdgeStates for Configuration {
    fn num_edges(&self) -> usize {
        self.len()
    }
    #[inline]
    fn is_open(&self, edge: usize) -> bool {
        self.bits[edge]
    }
}

/// A configuration packed in the low bits of an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mask {
    pub bits: u64,
    pub len: usize,
}

impl EdgeStates for Mask {
    fn num_edges(&self) -> usize {
        self.len
    }
    #[inline]
    fn is_open(&self, edge: usize) -> bool {
        self.bits >> edge & 1 == 1
    }
}

/// Edge states of a sub-region, read through an edge map into a
/// configuration of a larger region.
#[derive(Clone, Copy, Debug)]
pub struct Restricted<'a, S: ?Sized> {
    pub inner: &'a S,
    pub map: &'a [usize],
}

impl<S: EdgeStates + ?Sized> EdgeStates for Restricted<'_, S> {
    fn num_edges(&self) -> usize {
        self.map.len()
    }
    #[inline]
    fn is_open(&self, edge: usize) -> bool {
        self.inner.is_open(self.map[edge])
    }
}
