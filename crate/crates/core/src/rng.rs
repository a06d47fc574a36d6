//! Counter-based random streams.
//!
//! A stream is a pure function of its key, so a work item draws the same
//! numbers no matter which worker runs it or in which order.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Which decision a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum Phase {
    Sample = 1,
    Accept = 2,
    Demote = 3,
    Promote = 4,
    Baseline = 5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    pub seed: u64,
    pub iteration: u64,
    pub slot: u32,
    pub extension: u32,
    pub phase: Phase,
}

pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn new(key: StreamKey) -> Self {
        let mut bytes = [0u8; 32];
        bytes[0..8].copy_from_slice(&key.seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&key.iteration.to_le_bytes());
        bytes[16..20].copy_from_slice(&key.slot.to_le_bytes());
        bytes[20..24].copy_from_slice(&key.extension.to_le_bytes());
        bytes[24..28].copy_from_slice(&(key.phase as u32).to_le_bytes());
        bytes[28..32].copy_from_slice(b"kpax");
        RngStream(ChaCha8Rng::from_seed(bytes))
    }

    pub fn keyed(seed: u64, iteration: u64, slot: u32, extension: u32, phase: Phase) -> Self {
        Self::new(StreamKey { seed, iteration, slot, extension, phase })
    }

    /// A sequential stream for single-threaded consumers.
    pub fn sequential(seed: u64) -> Self {
        Self::keyed(seed, 0, 0, 0, Phase::Baseline)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Uniform on `[0, 1)` with 53 bits of resolution.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
