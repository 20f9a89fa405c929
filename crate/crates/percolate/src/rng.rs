//! Counter-based random numbers.
//!
//! Every random decision in this crate is a pure function of
//! `(seed, domain, stream, unit)`: the same key always yields the same
//! variate, regardless of evaluation order or thread count. Edge
//! decisions are keyed by edge index, so parallel and serial runs of an
//! experiment produce bit-identical results, and coupled comparisons
//! (two densities sharing the same uniforms) are exact.

/// Domain tags keep unrelated consumers of the same `(seed, stream)`
/// pair statistically independent.
pub mod domain {
    pub const SPRINKLE: u64 = 0x5350_524b;
    pub const THIN: u64 = 0x5448_494e;
    pub const MULTIGRAPH: u64 = 0x4d47_5250;
    pub const FOREST: u64 = 0x464f_5253;
    pub const TEST: u64 = 0x5445_5354;
}

/// SplitMix64 finalizer. Full-period 64-bit mixer with good avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash a full decision key down to one 64-bit word.
#[inline]
pub fn key_hash(seed: u64, dom: u64, stream: u64, unit: u64) -> u64 {
    let mut h = mix64(seed ^ 0x853c_49e6_748f_ea9b);
    h = mix64(h ^ dom);
    h = mix64(h ^ stream);
    mix64(h ^ unit)
}

/// Uniform variate in [0, 1) for a decision key. 53 bits of mantissa.
#[inline]
pub fn uniform(seed: u64, dom: u64, stream: u64, unit: u64) -> f64 {
    (key_hash(seed, dom, stream, unit) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Small sequential generator seeded from a decision key, for the few
/// places that need a stream rather than per-unit decisions (e.g.
/// picking forest sources).
#[derive(Debug, Clone)]
pub struct SeqRng {
    state: u64,
}

impl SeqRng {
    pub fn from_key(seed: u64, dom: u64, stream: u64, unit: u64) -> Self {
        SeqRng {
            state: key_hash(seed, dom, stream, unit),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(self.state)
    }

    /// Uniform index in `0..n`. `n` must be nonzero.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}
