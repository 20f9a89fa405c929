//! Seeded Bernoulli sprinkling and the set operations around it:
//! superposition with a fixed subgraph, restriction to an annulus, and
//! q-thinning.
//!
//! Sampling is a pure function of `(seed, stream_id, edge)`. Because
//! the per-edge uniform does not depend on the density, runs at two
//! densities with the same config are monotone-coupled: the lower
//! density always produces a subset of the higher one.

use crate::error::{Error, Result};
use crate::lattice::{AnnulusSpec, EdgeId, EdgeSet};
use crate::rng::{self, domain};
use serde::{Deserialize, Serialize};

/// Parameters of one sprinkle. `stream_id` separates trials so that
/// concurrent workers never share variates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSprinkleConfig")]
pub struct SprinkleConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub stream_id: u64,
}

#[derive(Deserialize)]
struct RawSprinkleConfig {
    epsilon: f64,
    seed: u64,
    #[serde(default)]
    stream_id: u64,
}

impl TryFrom<RawSprinkleConfig> for SprinkleConfig {
    type Error = Error;
    fn try_from(raw: RawSprinkleConfig) -> Result<Self> {
        SprinkleConfig::new(raw.epsilon, raw.seed, raw.stream_id)
    }
}

impl SprinkleConfig {
    pub fn new(epsilon: f64, seed: u64, stream_id: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::BadProbability(epsilon));
        }
        Ok(SprinkleConfig {
            epsilon,
            seed,
            stream_id,
        })
    }

    /// The coupled uniform attached to one edge under this config.
    #[inline]
    pub fn edge_uniform(&self, e: EdgeId) -> f64 {
        rng::uniform(self.seed, domain::SPRINKLE, self.stream_id, e.0 as u64)
    }

    #[inline]
    pub fn edge_open(&self, e: EdgeId) -> bool {
        self.edge_uniform(e) < self.epsilon
    }
}

/// Sample a sprinkle over an explicit list of candidate edges.
/// Each edge is included independently with probability `epsilon`.
pub fn sample_sprinkle(cfg: &SprinkleConfig, region: &crate::lattice::BoxSpec, edges: &[EdgeId]) -> EdgeSet {
    let mut out = EdgeSet::empty(region.clone());
    for &e in edges {
        if cfg.edge_open(e) {
            out.insert(e);
        }
    }
    out
}

/// Sample a sprinkle over every edge of the region.
pub fn sample_sprinkle_region(cfg: &SprinkleConfig, region: &crate::lattice::BoxSpec) -> EdgeSet {
    let mut out = EdgeSet::empty(region.clone());
    for e in region.edges() {
        if cfg.edge_open(e) {
            out.insert(e);
        }
    }
    out
}

/// Superposition `Y = X ∪ ω`. Regions must match.
pub fn superpose(x: &EdgeSet, w: &EdgeSet) -> Result<EdgeSet> {
    EdgeSet::union(x, w)
}

/// Keep exactly the edges with both endpoints in the annulus.
pub fn restrict_to_annulus(w: &EdgeSet, a: &AnnulusSpec) -> EdgeSet {
    let region = w.region().clone();
    let mut out = EdgeSet::empty(region.clone());
    for e in w.iter() {
        let (p, q) = region.edge_endpoints(e);
        if a.contains(&p) && a.contains(&q) {
            out.insert(e);
        }
    }
    out
}

/// Independent q-thinning: each member kept with probability `q`.
/// Result is always a subset of the input, and monotone in `q` under
/// the shared-uniform coupling.
pub fn thin(y: &EdgeSet, q: f64, seed: u64, stream_id: u64) -> Result<EdgeSet> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::BadProbability(q));
    }
    let mut out = EdgeSet::empty(y.region().clone());
    for e in y.iter() {
        if rng::uniform(seed, domain::THIN, stream_id, e.0 as u64) < q {
            out.insert(e);
        }
    }
    Ok(out)
}
