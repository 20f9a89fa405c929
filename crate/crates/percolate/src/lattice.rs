//! Geometry and indexing of the d-dimensional hypercubic lattice
//! restricted to finite boxes.
//!
//! A box `Λ_r(z)` is the set of lattice points within L∞ distance `r`
//! of `z`; an annulus `A_{r,R}` is `Λ_R \ Λ_r` around the origin.
//! Edges of a box get dense indices (`EdgeId`) so that edge sets can be
//! stored as bitsets and random decisions can be keyed per edge.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Dense index of a lattice edge relative to a declared bounding box.
///
/// Ids are axis-major: all edges parallel to axis 0 first, then axis 1,
/// and so on. A plain integer in every file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

/// Finite box `Λ_r(center)` in dimension `d`. Immutable after
/// construction; construction validates that vertex and edge counts fit
/// in `usize`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBoxSpec")]
pub struct BoxSpec {
    d: usize,
    r: i64,
    center: Vec<i64>,
}

#[derive(Deserialize)]
struct RawBoxSpec {
    d: usize,
    r: i64,
    #[serde(default)]
    center: Option<Vec<i64>>,
}

impl TryFrom<RawBoxSpec> for BoxSpec {
    type Error = Error;
    fn try_from(raw: RawBoxSpec) -> Result<Self> {
        match raw.center {
            Some(c) => BoxSpec::with_center(raw.d, raw.r, c),
            None => BoxSpec::new(raw.d, raw.r),
        }
    }
}

impl BoxSpec {
    /// Origin-centered box `Λ_r`.
    pub fn new(d: usize, r: i64) -> Result<Self> {
        Self::with_center(d, r, vec![0; d])
    }

    pub fn with_center(d: usize, r: i64, center: Vec<i64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if r < 0 {
            return Err(Error::BadRadius(format!("negative radius {r}")));
        }
        if center.len() != d {
            return Err(Error::BadRadius(format!(
                "center has {} coordinates, dimension is {d}",
                center.len()
            )));
        }
        let side = 2 * r as u128 + 1;
        let mut count: u128 = 1;
        for _ in 0..d {
            count = count
                .checked_mul(side)
                .ok_or_else(|| Error::BadRadius(format!("box d={d} r={r} too large")))?;
        }
        // vertex count and edge count must both fit in usize
        let edges = count / side * (side - 1) * d as u128;
        if count > usize::MAX as u128 || edges > usize::MAX as u128 {
            return Err(Error::BadRadius(format!("box d={d} r={r} too large")));
        }
        Ok(BoxSpec { d, r, center })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn center(&self) -> &[i64] {
        &self.center
    }

    pub fn is_origin_centered(&self) -> bool {
        self.center.iter().all(|&c| c == 0)
    }

    /// Side length `2r + 1`.
    pub fn side(&self) -> i64 {
        2 * self.r + 1
    }

    /// `(2r+1)^d`.
    pub fn vertex_count(&self) -> usize {
        let side = self.side() as usize;
        let mut n = 1usize;
        for _ in 0..self.d {
            n *= side;
        }
        n
    }

    /// Number of lattice edges with both endpoints in the box:
    /// `d · 2r · (2r+1)^{d-1}`.
    pub fn edge_count(&self) -> usize {
        let side = self.side() as usize;
        self.d * (side - 1) * self.vertex_count() / side
    }

    fn edges_per_axis(&self) -> usize {
        if self.d == 0 {
            return 0;
        }
        self.edge_count() / self.d
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.d
            && p.iter()
                .zip(&self.center)
                .all(|(&a, &c)| (a - c).abs() <= self.r)
    }

    /// True iff every point of `other` lies in `self`.
    pub fn contains_box(&self, other: &BoxSpec) -> bool {
        self.d == other.d
            && self
                .center
                .iter()
                .zip(&other.center)
                .all(|(&c, &oc)| (oc - other.r) >= (c - self.r) && (oc + other.r) <= (c + self.r))
    }

    /// Row-major vertex index, dimension 0 most significant.
    pub fn vertex_index(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let side = self.side();
        let mut idx: i64 = 0;
        for i in 0..self.d {
            idx = idx * side + (p[i] - self.center[i] + self.r);
        }
        Some(idx as usize)
    }

    pub fn vertex_coords(&self, mut idx: usize) -> Vec<i64> {
        debug_assert!(idx < self.vertex_count());
        let side = self.side() as usize;
        let mut p = vec![0i64; self.d];
        for i in (0..self.d).rev() {
            p[i] = (idx % side) as i64 + self.center[i] - self.r;
            idx /= side;
        }
        p
    }

    /// L∞ distance from the lattice origin to the vertex.
    #[inline]
    pub fn linf_origin(&self, mut idx: usize) -> i64 {
        let side = self.side() as usize;
        let mut best = 0i64;
        for i in (0..self.d).rev() {
            let coord = (idx % side) as i64 + self.center[i] - self.r;
            best = best.max(coord.abs());
            idx /= side;
        }
        best
    }

    /// L∞ distance from the box center to the vertex.
    #[inline]
    pub fn linf_center(&self, mut idx: usize) -> i64 {
        let side = self.side() as usize;
        let mut best = 0i64;
        for _ in 0..self.d {
            let local = (idx % side) as i64 - self.r;
            best = best.max(local.abs());
            idx /= side;
        }
        best
    }

    /// Vertices on the boundary shell `Λ_r(z) \ Λ_{r-1}(z)`.
    #[inline]
    pub fn is_boundary_vertex(&self, idx: usize) -> bool {
        self.linf_center(idx) == self.r
    }

    /// Endpoint vertex indices `(u, v)` of an edge, `v = u + stride`.
    #[inline]
    pub fn edge_endpoint_indices(&self, e: EdgeId) -> (usize, usize) {
        debug_assert!(e.0 < self.edge_count());
        let per_axis = self.edges_per_axis();
        let axis = e.0 / per_axis;
        let mut rem = e.0 % per_axis;
        let side = self.side() as usize;
        let mut u = 0usize;
        let mut vstride = 1usize;
        let mut axis_stride = 0usize;
        for i in (0..self.d).rev() {
            let radix = if i == axis { side - 1 } else { side };
            let c = rem % radix;
            rem /= radix;
            u += c * vstride;
            if i == axis {
                axis_stride = vstride;
            }
            vstride *= side;
        }
        (u, u + axis_stride)
    }

    /// Axis (0-based) the edge is parallel to.
    pub fn edge_axis(&self, e: EdgeId) -> usize {
        debug_assert!(e.0 < self.edge_count());
        e.0 / self.edges_per_axis()
    }

    /// Decode an edge to its endpoint coordinates.
    pub fn edge_endpoints(&self, e: EdgeId) -> (Vec<i64>, Vec<i64>) {
        let (u, v) = self.edge_endpoint_indices(e);
        (self.vertex_coords(u), self.vertex_coords(v))
    }

    /// Encode an unordered pair of adjacent points as an `EdgeId`.
    /// Returns `None` if either endpoint is outside the box or the
    /// points are not lattice neighbors.
    pub fn encode_edge(&self, p: &[i64], q: &[i64]) -> Option<EdgeId> {
        if !self.contains(p) || !self.contains(q) {
            return None;
        }
        let mut axis = None;
        for i in 0..self.d {
            match (p[i] - q[i]).abs() {
                0 => {}
                1 => {
                    if axis.is_some() {
                        return None;
                    }
                    axis = Some(i);
                }
                _ => return None,
            }
        }
        let axis = axis?;
        let lo = if p[axis] < q[axis] { p } else { q };
        let side = self.side();
        let mut offset: i64 = 0;
        for i in 0..self.d {
            let radix = if i == axis { side - 1 } else { side };
            offset = offset * radix + (lo[i] - self.center[i] + self.r);
        }
        Some(EdgeId(axis * self.edges_per_axis() + offset as usize))
    }

    /// All edges of the box, in index order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    /// Local coordinate (in `0..side`) of a vertex along one axis.
    #[inline]
    pub fn local_coord(&self, idx: usize, axis: usize) -> usize {
        let side = self.side() as usize;
        let mut stride = 1usize;
        for _ in axis + 1..self.d {
            stride *= side;
        }
        (idx / stride) % side
    }

    /// Index of the neighbor one step along `axis`, if it stays in the
    /// box.
    #[inline]
    pub fn neighbor_index(&self, idx: usize, axis: usize, forward: bool) -> Option<usize> {
        let side = self.side() as usize;
        let mut stride = 1usize;
        for _ in axis + 1..self.d {
            stride *= side;
        }
        let c = (idx / stride) % side;
        if forward {
            (c + 1 < side).then(|| idx + stride)
        } else {
            (c > 0).then(|| idx - stride)
        }
    }

    /// Edge id of the edge from a vertex to its forward neighbor along
    /// `axis`. The vertex must not sit on the forward face.
    #[inline]
    pub fn edge_from_lower_index(&self, mut idx: usize, axis: usize) -> EdgeId {
        let side = self.side() as usize;
        let mut offset = 0usize;
        let mut estride = 1usize;
        for i in (0..self.d).rev() {
            let c = idx % side;
            idx /= side;
            if i == axis {
                debug_assert!(c + 1 < side);
            }
            offset += c * estride;
            estride *= if i == axis { side - 1 } else { side };
        }
        EdgeId(axis * self.edges_per_axis() + offset)
    }

    /// Visit the `self`-relative vertex indices of every point of
    /// `sub`, which must be contained in `self`.
    pub fn for_each_vertex_in(&self, sub: &BoxSpec, mut f: impl FnMut(usize)) {
        assert!(
            self.contains_box(sub),
            "sub-box not contained in indexing box"
        );
        let mut p = vec![0i64; self.d];
        for i in 0..self.d {
            p[i] = sub.center[i] - sub.r;
        }
        loop {
            f(self.vertex_index(&p).expect("sub-box point in box"));
            // odometer over sub coordinates
            let mut i = self.d;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if p[i] < sub.center[i] + sub.r {
                    p[i] += 1;
                    for j in i + 1..self.d {
                        p[j] = sub.center[j] - sub.r;
                    }
                    break;
                }
            }
        }
    }
}

/// Annulus `A_{r,R} = Λ_R \ Λ_r` around the origin. Radii may be
/// non-integer; `Λ_s` for fractional `s` is `Λ_⌊s⌋` as a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAnnulus")]
pub struct AnnulusSpec {
    d: usize,
    inner: f64,
    outer: f64,
}

#[derive(Deserialize)]
struct RawAnnulus {
    d: usize,
    inner: f64,
    outer: f64,
}

impl TryFrom<RawAnnulus> for AnnulusSpec {
    type Error = Error;
    fn try_from(raw: RawAnnulus) -> Result<Self> {
        AnnulusSpec::new(raw.d, raw.inner, raw.outer)
    }
}

impl AnnulusSpec {
    pub fn new(d: usize, inner: f64, outer: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if !(inner >= 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::BadRadius(format!(
                "annulus needs 0 <= inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(AnnulusSpec { d, inner, outer })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Membership test: `inner < ‖p‖_∞ ≤ outer`.
    pub fn contains(&self, p: &[i64]) -> bool {
        debug_assert_eq!(p.len(), self.d);
        let norm = p.iter().map(|&a| a.abs()).max().unwrap_or(0) as f64;
        norm > self.inner && norm <= self.outer
    }
}

/// Membership of a point in an annulus.
pub fn in_annulus(p: &[i64], a: &AnnulusSpec) -> bool {
    a.contains(p)
}

/// Every edge with both endpoints in the box, each exactly once.
pub fn enumerate_box_edges(b: &BoxSpec) -> Vec<EdgeId> {
    b.edges().collect()
}

/// Boundary shell cardinality `|Λ_{8dm} \ Λ_{8dm-1}|` as an exact
/// integer.
fn shell_size_at(d: usize, m: u64) -> BigInt {
    let outer = BigInt::from(16 * d as u64 * m + 1);
    let inner = BigInt::from(16 * d as u64 * m - 1);
    outer.pow(d as u32) - inner.pow(d as u32)
}

/// Smallest `n` such that for all `m ≥ n` the boundary shell of
/// `Λ_{8dm}` has fewer than `m^d` points.
///
/// The defect `m^d - shell(m)` is a polynomial with positive leading
/// coefficient and non-positive lower coefficients, so the predicate is
/// monotone in `m` and a binary search applies.
pub fn min_n0(d: usize) -> Result<u64> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let holds = |m: u64| shell_size_at(d, m) < BigInt::from(m).pow(d as u32);
    let mut hi = 1u64;
    while !holds(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // holds(lo) false (or lo == 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(holds(hi) && (hi == 1 || !holds(hi - 1)));
    Ok(hi)
}

/// Dense bit-indexed set of edges over a bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    region: BoxSpec,
    words: Vec<u64>,
    count: usize,
}

impl EdgeSet {
    pub fn empty(region: BoxSpec) -> Self {
        let words = vec![0u64; region.edge_count().div_ceil(64)];
        EdgeSet {
            region,
            words,
            count: 0,
        }
    }

    pub fn full(region: BoxSpec) -> Self {
        let mut s = Self::empty(region);
        for e in s.region.edges() {
            s.insert(e);
        }
        s
    }

    pub fn region(&self) -> &BoxSpec {
        &self.region
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        debug_assert!(e.0 < self.region.edge_count());
        self.words[e.0 >> 6] >> (e.0 & 63) & 1 == 1
    }

    /// Insert; returns true if newly added.
    #[inline]
    pub fn insert(&mut self, e: EdgeId) -> bool {
        debug_assert!(e.0 < self.region.edge_count());
        let w = &mut self.words[e.0 >> 6];
        let mask = 1u64 << (e.0 & 63);
        if *w & mask == 0 {
            *w |= mask;
            self.count += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn remove(&mut self, e: EdgeId) -> bool {
        let w = &mut self.words[e.0 >> 6];
        let mask = 1u64 << (e.0 & 63);
        if *w & mask != 0 {
            *w &= !mask;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    /// Set union; the operands must share the same bounding region.
    pub fn union(a: &EdgeSet, b: &EdgeSet) -> Result<EdgeSet> {
        if a.region != b.region {
            return Err(Error::RegionMismatch(format!(
                "union of edge sets over different regions (d={} r={} vs d={} r={})",
                a.region.d(),
                a.region.r(),
                b.region.d(),
                b.region.r()
            )));
        }
        let words: Vec<u64> = a
            .words
            .iter()
            .zip(&b.words)
            .map(|(&x, &y)| x | y)
            .collect();
        let count = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(EdgeSet {
            region: a.region.clone(),
            words,
            count,
        })
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.region == other.region
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    /// Iterate set members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(EdgeId((wi << 6) | b))
                }
            })
        })
    }

    /// Text form: one edge index per line, ascending.
    pub fn write_text(&self, out: &mut impl std::io::Write) -> Result<()> {
        for e in self.iter() {
            writeln!(out, "{}", e.0)?;
        }
        Ok(())
    }

    /// Parse the text form for a known region. Blank lines are skipped;
    /// indices must be in range. Duplicates collapse.
    pub fn read_text(region: BoxSpec, text: &str) -> Result<EdgeSet> {
        let mut set = EdgeSet::empty(region);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let idx: usize = line
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if idx >= set.region.edge_count() {
                return Err(Error::Parse(format!(
                    "line {}: edge index {idx} out of range (region has {} edges)",
                    lineno + 1,
                    set.region.edge_count()
                )));
            }
            set.insert(EdgeId(idx));
        }
        Ok(set)
    }

    /// Binary form: little-endian u64 length prefix followed by the
    /// sorted member indices as u64.
    pub fn write_binary(&self, out: &mut impl std::io::Write) -> Result<()> {
        out.write_all(&(self.count as u64).to_le_bytes())?;
        for e in self.iter() {
            out.write_all(&(e.0 as u64).to_le_bytes())?;
        }
        Ok(())
    }

    /// Parse the binary form. Strict: exact length, strictly ascending
    /// indices, all in range.
    pub fn read_binary(region: BoxSpec, bytes: &[u8]) -> Result<EdgeSet> {
        if bytes.len() < 8 {
            return Err(Error::Parse("binary edge set shorter than header".into()));
        }
        let n = u64::from_le_bytes(bytes[0..8].try_into().unwrap());
        let body = &bytes[8..];
        if n > (usize::MAX / 8) as u64 || body.len() != 8 * n as usize {
            return Err(Error::Parse(format!(
                "binary edge set length mismatch: header says {n} entries, body has {} bytes",
                body.len()
            )));
        }
        let mut set = EdgeSet::empty(region);
        let mut prev: Option<u64> = None;
        for chunk in body.chunks_exact(8) {
            let idx = u64::from_le_bytes(chunk.try_into().unwrap());
            if idx >= set.region.edge_count() as u64 {
                return Err(Error::Parse(format!("edge index {idx} out of range")));
            }
            if let Some(p) = prev {
                if idx <= p {
                    return Err(Error::Parse(format!(
                        "edge indices not strictly ascending at {idx}"
                    )));
                }
            }
            prev = Some(idx);
            set.insert(EdgeId(idx as usize));
        }
        Ok(set)
    }
}
