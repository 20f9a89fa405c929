//! Union-find cluster labeling of box-restricted edge sets, cluster
//! counts by distance band, and connectivity events.

use crate::error::{Error, Result};
use crate::lattice::{BoxSpec, EdgeSet};

/// Partition of a box into connected clusters of an edge set, with the
/// minimum L∞ distance from the origin cached per cluster.
///
/// Two vertices share a cluster id iff they are joined by a path of
/// labeled edges whose vertices all stay in the region. Isolated
/// vertices form singleton clusters.
#[derive(Debug, Clone)]
pub struct ClusterLabeling {
    region: BoxSpec,
    representative: Vec<u32>,
    cluster_min_dist: Vec<i64>,
    cluster_count: usize,
}

impl ClusterLabeling {
    pub fn region(&self) -> &BoxSpec {
        &self.region
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    /// Compact cluster id of a vertex (by region vertex index).
    #[inline]
    pub fn cluster_of(&self, vertex: usize) -> u32 {
        self.representative[vertex]
    }

    /// Minimum L∞ distance from the lattice origin to the cluster.
    #[inline]
    pub fn min_dist(&self, cluster: u32) -> i64 {
        self.cluster_min_dist[cluster as usize]
    }

    pub fn min_dists(&self) -> &[i64] {
        &self.cluster_min_dist
    }

    /// Debug export: one `vertex,cluster_id` row per vertex, vertex
    /// written as space-separated coordinates.
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> Result<()> {
        writeln!(out, "vertex,cluster_id")?;
        for v in 0..self.representative.len() {
            let coords = self.region.vertex_coords(v);
            let text: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{},{}", text.join(" "), self.representative[v])?;
        }
        Ok(())
    }
}

#[inline]
fn uf_find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let g = parent[parent[x as usize] as usize];
        parent[x as usize] = g;
        x = g;
    }
    x
}

/// Label the clusters of `edges` inside its region. Path-compressed
/// union-find with union by size; the per-cluster minimum distance to
/// the origin is maintained through the merges.
pub fn label_clusters(edges: &EdgeSet) -> ClusterLabeling {
    let region = edges.region().clone();
    let nv = region.vertex_count();
    assert!(nv <= u32::MAX as usize, "region too large for u32 labels");
    let mut parent: Vec<u32> = (0..nv as u32).collect();
    let mut size = vec![1u32; nv];
    let mut mind: Vec<i64> = (0..nv).map(|v| region.linf_origin(v)).collect();

    for e in edges.iter() {
        let (u, v) = region.edge_endpoint_indices(e);
        let ru = uf_find(&mut parent, u as u32);
        let rv = uf_find(&mut parent, v as u32);
        if ru == rv {
            continue;
        }
        let (big, small) = if size[ru as usize] >= size[rv as usize] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        parent[small as usize] = big;
        size[big as usize] += size[small as usize];
        mind[big as usize] = mind[big as usize].min(mind[small as usize]);
    }

    // compact ids in vertex order
    let mut newid = vec![u32::MAX; nv];
    let mut cluster_min_dist = Vec::new();
    let mut representative = vec![0u32; nv];
    for v in 0..nv {
        let root = uf_find(&mut parent, v as u32);
        if newid[root as usize] == u32::MAX {
            newid[root as usize] = cluster_min_dist.len() as u32;
            cluster_min_dist.push(mind[root as usize]);
        }
        representative[v] = newid[root as usize];
    }
    let cluster_count = cluster_min_dist.len();
    ClusterLabeling {
        region,
        representative,
        cluster_min_dist,
        cluster_count,
    }
}

/// Number of clusters at L∞ distance in `(a, b]` from the origin, or at
/// distance `≤ b` when `a = 0`.
pub fn count_u(lab: &ClusterLabeling, a: f64, b: f64) -> Result<usize> {
    if !(a >= 0.0 && b >= a) {
        return Err(Error::ParameterOrder(format!(
            "need 0 <= a <= b, got a={a} b={b}"
        )));
    }
    if b > lab.region().r() as f64 {
        return Err(Error::BadRadius(format!(
            "b={b} exceeds region radius {}",
            lab.region().r()
        )));
    }
    let count = lab
        .cluster_min_dist
        .iter()
        .filter(|&&d| {
            let d = d as f64;
            if a == 0.0 {
                d <= b
            } else {
                d > a && d <= b
            }
        })
        .count();
    Ok(count)
}

/// True iff a path of open edges joins `x` to `y` using only vertices
/// of the region.
pub fn is_connected_within(edges: &EdgeSet, x: &[i64], y: &[i64]) -> Result<bool> {
    let region = edges.region();
    let sx = region
        .vertex_index(x)
        .ok_or_else(|| Error::PointOutsideRegion(x.to_vec()))?;
    let sy = region
        .vertex_index(y)
        .ok_or_else(|| Error::PointOutsideRegion(y.to_vec()))?;
    if sx == sy {
        return Ok(true);
    }
    // plain BFS over open edges
    let mut seen = vec![false; region.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[sx] = true;
    queue.push_back(sx);
    while let Some(v) = queue.pop_front() {
        for axis in 0..region.d() {
            for forward in [false, true] {
                let Some(w) = region.neighbor_index(v, axis, forward) else {
                    continue;
                };
                if seen[w] {
                    continue;
                }
                let lower = if forward { v } else { w };
                if !edges.contains(region.edge_from_lower_index(lower, axis)) {
                    continue;
                }
                if w == sy {
                    return Ok(true);
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

/// The finite-volume uniqueness event: every vertex of `Λ_n` lies in a
/// single cluster of `y_edges` labeled over `Λ_{2n}`. The edge set must
/// be defined over the origin-centered box of radius `2n`.
pub fn all_pairs_connected_event(y_edges: &EdgeSet, n: i64) -> bool {
    let region = y_edges.region();
    assert!(
        region.is_origin_centered() && region.r() == 2 * n && n >= 0,
        "event needs an origin-centered region of radius 2n"
    );
    if n == 0 {
        return true;
    }
    let lab = label_clusters(y_edges);
    let inner = BoxSpec::new(region.d(), n).expect("inner box");
    let mut single = true;
    let mut first: Option<u32> = None;
    region.for_each_vertex_in(&inner, |v| {
        let c = lab.cluster_of(v);
        match first {
            None => first = Some(c),
            Some(f) => {
                if f != c {
                    single = false;
                }
            }
        }
    });
    single
}
