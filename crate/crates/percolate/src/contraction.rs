//! Multigraphs obtained by contracting lattice clusters, exact global
//! edge connectivity, component counting under sprinkles, and the
//! bulk/boundary contraction of an annulus.

use crate::cluster::{count_u, label_clusters, ClusterLabeling};
use crate::error::{Error, Result};
use crate::lattice::{BoxSpec, EdgeId, EdgeSet};
use crate::rng::{self, domain};
use std::collections::HashMap;

/// One aggregated multigraph edge: `mult` parallel strands between `u`
/// and `v`. Loops (`u == v`) are kept but never affect connectivity or
/// cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MgEdge {
    pub u: u32,
    pub v: u32,
    pub mult: u32,
}

/// Finite multigraph with parallel-edge multiplicities and an optional
/// map from lattice edges back to the multigraph edge they became.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<MgEdge>,
    origin_map: HashMap<EdgeId, usize>,
}

impl Multigraph {
    /// Build from raw `(u, v, mult)` triples. Parallel entries for the
    /// same unordered pair aggregate by summing multiplicities.
    pub fn new(vertex_count: usize, raw: impl IntoIterator<Item = (u32, u32, u32)>) -> Multigraph {
        let mut index: HashMap<(u32, u32), usize> = HashMap::new();
        let mut edges: Vec<MgEdge> = Vec::new();
        for (u, v, mult) in raw {
            assert!((u as usize) < vertex_count && (v as usize) < vertex_count);
            if mult == 0 {
                continue;
            }
            let key = (u.min(v), u.max(v));
            match index.get(&key) {
                Some(&i) => edges[i].mult += mult,
                None => {
                    index.insert(key, edges.len());
                    edges.push(MgEdge {
                        u: key.0,
                        v: key.1,
                        mult,
                    });
                }
            }
        }
        Multigraph {
            vertex_count,
            edges,
            origin_map: HashMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[MgEdge] {
        &self.edges
    }

    /// Multigraph edge a lattice edge was mapped to by contraction.
    pub fn origin(&self, lattice_edge: EdgeId) -> Option<&MgEdge> {
        self.origin_map.get(&lattice_edge).map(|&i| &self.edges[i])
    }

    pub fn origin_edge_index(&self, lattice_edge: EdgeId) -> Option<usize> {
        self.origin_map.get(&lattice_edge).copied()
    }

    /// Total strand count over non-loop edges.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.u != e.v)
            .map(|e| e.mult as u64)
            .sum()
    }

    /// Serialize as `p mg <vertices> <edge-lines>` followed by one
    /// `u v multiplicity` line per aggregated edge.
    pub fn write_text(&self, out: &mut impl std::io::Write) -> Result<()> {
        let mut sorted: Vec<&MgEdge> = self.edges.iter().collect();
        sorted.sort_by_key(|e| (e.u, e.v));
        writeln!(out, "p mg {} {}", self.vertex_count, sorted.len())?;
        for e in sorted {
            writeln!(out, "{} {} {}", e.u, e.v, e.mult)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to vec");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parse the text form. Duplicate pairs aggregate; the origin map
    /// is not part of the format.
    pub fn parse_text(text: &str) -> Result<Multigraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty multigraph file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "mg" {
            return Err(Error::Parse(format!("bad header '{header}'")));
        }
        let vertex_count: usize = fields[2]
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        let edge_lines: usize = fields[3]
            .parse()
            .map_err(|e| Error::Parse(format!("bad edge count: {e}")))?;
        if vertex_count > 10_000_000 {
            return Err(Error::Parse(format!(
                "vertex count {vertex_count} unreasonably large"
            )));
        }
        let mut raw = Vec::with_capacity(edge_lines.min(1 << 20));
        let mut seen = 0usize;
        for (lineno, line) in lines {
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(at(format!("expected 'u v mult', got '{line}'")));
            }
            let u: u32 = parts[0].parse().map_err(|e| at(format!("bad u: {e}")))?;
            let v: u32 = parts[1].parse().map_err(|e| at(format!("bad v: {e}")))?;
            let mult: u32 = parts[2].parse().map_err(|e| at(format!("bad mult: {e}")))?;
            if (u as usize) >= vertex_count || (v as usize) >= vertex_count {
                return Err(at(format!("vertex id out of range in '{line}'")));
            }
            if mult == 0 {
                return Err(at("multiplicity must be positive".into()));
            }
            raw.push((u, v, mult));
            seen += 1;
        }
        if seen != edge_lines {
            return Err(Error::Parse(format!(
                "header declares {edge_lines} edge lines, found {seen}"
            )));
        }
        Ok(Multigraph::new(vertex_count, raw))
    }
}

/// Number of connected components of `(V, open edges)`. `open` is
/// indexed by aggregated edge; loops never matter.
pub fn component_count(g: &Multigraph, open: &[bool]) -> usize {
    assert_eq!(open.len(), g.edges.len());
    let n = g.vertex_count;
    if n == 0 {
        return 0;
    }
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            let g = p[p[x as usize] as usize];
            p[x as usize] = g;
            x = g;
        }
        x
    }
    let mut count = n;
    for (i, e) in g.edges.iter().enumerate() {
        if !open[i] || e.u == e.v {
            continue;
        }
        let ru = find(&mut parent, e.u);
        let rv = find(&mut parent, e.v);
        if ru != rv {
            parent[ru as usize] = rv;
            count -= 1;
        }
    }
    count
}

/// Global minimum edge cut counting multiplicities, by the
/// deterministic repeated minimum-cut-phase contraction. Returns 0 for
/// a disconnected graph and `u64::MAX` for a single vertex (no cut
/// exists).
pub fn edge_connectivity(g: &Multigraph) -> u64 {
    let n = g.vertex_count;
    if n == 0 {
        return 0;
    }
    if n == 1 {
        return u64::MAX;
    }
    if component_count(g, &vec![true; g.edges.len()]) > 1 {
        return 0;
    }
    // dense weight matrix; loops dropped
    let mut w = vec![0u64; n * n];
    for e in &g.edges {
        if e.u == e.v {
            continue;
        }
        w[e.u as usize * n + e.v as usize] += e.mult as u64;
        w[e.v as usize * n + e.u as usize] += e.mult as u64;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        // minimum cut phase: maximum-adjacency order, ties to the
        // smallest vertex id so runs are reproducible
        let mut in_a = vec![false; n];
        let mut conn = vec![0u64; n];
        let mut prev = usize::MAX;
        let mut last = usize::MAX;
        let mut last_weight = 0u64;
        for _ in 0..active.len() {
            let mut sel = usize::MAX;
            for &v in &active {
                if !in_a[v] && (sel == usize::MAX || conn[v] > conn[sel]) {
                    sel = v;
                }
            }
            in_a[sel] = true;
            prev = last;
            last = sel;
            last_weight = conn[sel];
            for &v in &active {
                if !in_a[v] {
                    conn[v] += w[sel * n + v];
                }
            }
        }
        best = best.min(last_weight);
        // merge `last` into `prev`
        for &v in &active {
            if v != last && v != prev {
                w[prev * n + v] += w[last * n + v];
                w[v * n + prev] = w[prev * n + v];
            }
        }
        w[prev * n + last] = 0;
        w[last * n + prev] = 0;
        active.retain(|&v| v != last);
    }
    best
}

/// Result of contracting a region's lattice graph: the multigraph plus
/// the map from region vertex indices to multigraph vertices.
#[derive(Debug, Clone)]
pub struct ContractionResult {
    pub graph: Multigraph,
    pub vertex_map: Vec<u32>,
}

/// Contract the lattice graph of `region`: vertices in the same
/// labeled cluster become one multigraph vertex, clusters listed
/// together in a `merge_groups` entry merge further, and every lattice
/// edge whose endpoints land on distinct vertices contributes one
/// parallel strand. Lattice edges are recorded in the origin map,
/// loops included.
///
/// `region` must be contained in the labeling's region.
pub fn contract_clusters(
    region: &BoxSpec,
    lab: &ClusterLabeling,
    merge_groups: &[Vec<u32>],
) -> Result<ContractionResult> {
    if !lab.region().contains_box(region) {
        return Err(Error::RegionMismatch(
            "contraction region not contained in labeling region".into(),
        ));
    }
    let cluster_count = lab.cluster_count();
    // cluster id -> group id (clusters not mentioned keep their own)
    let mut group: Vec<u32> = (0..cluster_count as u32).collect();
    let mut grabbed = vec![false; cluster_count];
    for g in merge_groups {
        let Some(&head) = g.first() else { continue };
        for &c in g {
            if (c as usize) >= cluster_count {
                return Err(Error::UnknownClusterId(c));
            }
            if grabbed[c as usize] {
                return Err(Error::ParameterOrder(format!(
                    "cluster {c} appears in more than one merge group"
                )));
            }
            grabbed[c as usize] = true;
            group[c as usize] = head;
        }
    }

    let big = lab.region();
    // region vertex index -> big-region vertex index
    let mut big_index = Vec::with_capacity(region.vertex_count());
    big.for_each_vertex_in(region, |idx| big_index.push(idx));

    // compact multigraph vertex ids in region vertex order
    let mut mg_of_group: HashMap<u32, u32> = HashMap::new();
    let mut vertex_map = vec![0u32; region.vertex_count()];
    for (v, &bidx) in big_index.iter().enumerate() {
        let grp = group[lab.cluster_of(bidx) as usize];
        let next = mg_of_group.len() as u32;
        vertex_map[v] = *mg_of_group.entry(grp).or_insert(next);
    }
    let vertex_count = mg_of_group.len();

    let mut index: HashMap<(u32, u32), usize> = HashMap::new();
    let mut edges: Vec<MgEdge> = Vec::new();
    let mut origin_map = HashMap::new();
    for e in region.edges() {
        let (u, v) = region.edge_endpoint_indices(e);
        let mu = vertex_map[u];
        let mv = vertex_map[v];
        let key = (mu.min(mv), mu.max(mv));
        let slot = match index.get(&key) {
            Some(&i) => {
                edges[i].mult += 1;
                i
            }
            None => {
                index.insert(key, edges.len());
                edges.push(MgEdge {
                    u: key.0,
                    v: key.1,
                    mult: 1,
                });
                edges.len() - 1
            }
        };
        origin_map.insert(e, slot);
    }
    Ok(ContractionResult {
        graph: Multigraph {
            vertex_count,
            edges,
            origin_map,
        },
        vertex_map,
    })
}

/// The contracted annulus graph of the bulk/boundary construction.
#[derive(Debug, Clone)]
pub struct BulkBoundaryGraph {
    pub contraction: ContractionResult,
    /// Sub-box the graph was built on.
    pub region: BoxSpec,
    /// Whether the merged-boundary construction was used (some cluster
    /// meets the band past `Λ_m` without meeting `Λ_m` itself).
    pub merged_boundary: bool,
    /// Multigraph vertex holding the merged boundary clusters.
    pub boundary_vertex: Option<u32>,
}

/// Contract the clusters of `x_edges` (labeled over its full region
/// `Λ_{8dn}`) onto the box around `Λ_m`.
///
/// When no cluster meets the band `(m, m+√n]`, the graph is built on
/// `Λ_{m+√n}` by contracting clusters alone; otherwise it is built on
/// `Λ_{m+2√n}` and all clusters avoiding `Λ_m` merge into a single
/// vertex.
pub fn build_bulk_boundary_graph(x_edges: &EdgeSet, n: i64, m: i64) -> Result<BulkBoundaryGraph> {
    let region = x_edges.region();
    let d = region.d();
    if !region.is_origin_centered() {
        return Err(Error::RegionMismatch(
            "bulk/boundary construction needs an origin-centered region".into(),
        ));
    }
    if region.r() != 8 * d as i64 * n {
        return Err(Error::ParameterOrder(format!(
            "region radius {} is not 8dn = {}",
            region.r(),
            8 * d as i64 * n
        )));
    }
    let sqrt_n = (n as f64).sqrt();
    if !(1 <= n && n <= m && (m as f64 + 2.0 * sqrt_n) <= (8 * d as i64 * n) as f64) {
        return Err(Error::ParameterOrder(format!(
            "need 1 <= n <= m and m + 2*sqrt(n) <= 8dn, got n={n} m={m}"
        )));
    }
    let lab = label_clusters(x_edges);
    let gap = count_u(&lab, m as f64, m as f64 + sqrt_n)?;
    if gap == 0 {
        let sub = BoxSpec::new(d, (m as f64 + sqrt_n).floor() as i64)?;
        let contraction = contract_clusters(&sub, &lab, &[])?;
        Ok(BulkBoundaryGraph {
            contraction,
            region: sub,
            merged_boundary: false,
            boundary_vertex: None,
        })
    } else {
        let sub = BoxSpec::new(d, (m as f64 + 2.0 * sqrt_n).floor() as i64)?;
        let boundary: Vec<u32> = (0..lab.cluster_count() as u32)
            .filter(|&c| {
                let dist = lab.min_dist(c) as f64;
                dist > m as f64 && dist <= m as f64 + 2.0 * sqrt_n
            })
            .collect();
        debug_assert!(!boundary.is_empty());
        let head = boundary[0];
        let contraction = contract_clusters(&sub, &lab, &[boundary])?;
        // locate the merged vertex through any vertex of the head cluster
        let big = lab.region();
        let mut boundary_vertex = None;
        let mut v = 0usize;
        big.for_each_vertex_in(&sub, |bidx| {
            if boundary_vertex.is_none() && lab.cluster_of(bidx) == head {
                boundary_vertex = Some(contraction.vertex_map[v]);
            }
            v += 1;
        });
        debug_assert!(boundary_vertex.is_some());
        Ok(BulkBoundaryGraph {
            contraction,
            region: sub,
            merged_boundary: true,
            boundary_vertex,
        })
    }
}

/// Sample every strand independently with probability `eps` and return
/// the component count of the open subgraph.
pub fn sprinkle_multigraph_trial(g: &Multigraph, eps: f64, seed: u64, stream: u64) -> usize {
    let open = sample_multigraph_sprinkle(g, eps, seed, stream);
    component_count(g, &open)
}

/// Per-strand sprinkle on a multigraph, reduced to aggregated-edge
/// openness (an aggregated edge is open when any strand is).
pub fn sample_multigraph_sprinkle(g: &Multigraph, eps: f64, seed: u64, stream: u64) -> Vec<bool> {
    let mut open = vec![false; g.edges().len()];
    let mut strand = 0u64;
    for (i, e) in g.edges().iter().enumerate() {
        for _ in 0..e.mult {
            if rng::uniform(seed, domain::MULTIGRAPH, stream, strand) < eps {
                open[i] = true;
            }
            strand += 1;
        }
    }
    open
}

/// One shrink-round event: sprinkle at rate `eps4d` on top of `base`
/// and report whether the component count failed to drop below
/// `max(1, K(base)/sqrt(N))`. The comparison `K1 > K0/sqrt(N)` is
/// evaluated in exact integer arithmetic as `K1^2 * N > K0^2`.
pub fn shrink_event(
    g: &Multigraph,
    base: &[bool],
    eps4d: f64,
    big_n: u64,
    seed: u64,
    stream: u64,
) -> bool {
    assert!(big_n >= 1);
    let k0 = component_count(g, base) as u128;
    let sprinkle = sample_multigraph_sprinkle(g, eps4d, seed, stream);
    let open: Vec<bool> = base
        .iter()
        .zip(&sprinkle)
        .map(|(&b, &s)| b || s)
        .collect();
    let k1 = component_count(g, &open) as u128;
    k1 >= 2 && k1 * k1 * big_n as u128 > k0 * k0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgraph::SubgraphGenerator;

    fn triangle() -> Multigraph {
        Multigraph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    }

    fn two_triangles() -> Multigraph {
        Multigraph::new(
            6,
            [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)],
        )
    }

    #[test]
    fn component_count_examples() {
        let g = two_triangles();
        assert_eq!(component_count(&g, &vec![false; 6]), 6);
        assert_eq!(component_count(&g, &vec![true; 6]), 2);
        let tree = Multigraph::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        assert_eq!(component_count(&tree, &vec![true; 3]), 1);
    }

    #[test]
    fn edge_connectivity_examples() {
        assert_eq!(edge_connectivity(&Multigraph::new(2, [(0, 1, 1)])), 1);
        for k in 3..=7u32 {
            let cycle = Multigraph::new(k as usize, (0..k).map(|i| (i, (i + 1) % k, 1)));
            assert_eq!(edge_connectivity(&cycle), 2, "cycle {k}");
        }
        let k4 = Multigraph::new(
            4,
            [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        );
        assert_eq!(edge_connectivity(&k4), 3);
        assert_eq!(edge_connectivity(&Multigraph::new(2, [(0, 1, 3)])), 3);
        assert_eq!(edge_connectivity(&two_triangles()), 0);
        assert_eq!(edge_connectivity(&Multigraph::new(1, [])), u64::MAX);
        // loops never help
        let loopy = Multigraph::new(2, [(0, 1, 2), (0, 0, 9)]);
        assert_eq!(edge_connectivity(&loopy), 2);
    }

    #[test]
    fn connectivity_matches_brute_force_on_random_graphs() {
        for trial in 0..30u64 {
            let g = crate::oracle::random_small_multigraph(trial, 6, 12);
            let sw = edge_connectivity(&g);
            let bf = crate::oracle::brute_force_min_cut(&g);
            assert_eq!(sw, bf, "trial {trial}: {}", g.to_text());
        }
    }

    #[test]
    fn identity_contraction_is_lattice_graph() {
        let b = BoxSpec::new(2, 1).unwrap();
        let lab = label_clusters(&EdgeSet::empty(b.clone()));
        let res = contract_clusters(&b, &lab, &[]).unwrap();
        assert_eq!(res.graph.vertex_count(), 9);
        assert_eq!(res.graph.edges().len(), 12);
        assert!(res.graph.edges().iter().all(|e| e.mult == 1 && e.u != e.v));
    }

    #[test]
    fn total_contraction_is_single_vertex() {
        let b = BoxSpec::new(2, 1).unwrap();
        let lab = label_clusters(&EdgeSet::full(b.clone()));
        let res = contract_clusters(&b, &lab, &[]).unwrap();
        assert_eq!(res.graph.vertex_count(), 1);
        assert!(res.graph.edges().iter().all(|e| e.u == e.v));
        assert_eq!(edge_connectivity(&res.graph), u64::MAX);
        // all 12 lattice edges became loops but stay in the origin map
        assert_eq!(res.graph.origin(crate::lattice::EdgeId(0)).unwrap().u, 0);
    }

    #[test]
    fn foliation_rows_contract_to_path_with_parallel_edges() {
        let b = BoxSpec::new(2, 1).unwrap();
        let x = SubgraphGenerator::axis_foliation(1).edges_in_region(&b);
        let lab = label_clusters(&x);
        let res = contract_clusters(&b, &lab, &[]).unwrap();
        assert_eq!(res.graph.vertex_count(), 3);
        let mut non_loop: Vec<(u32, u32, u32)> = res
            .graph
            .edges()
            .iter()
            .filter(|e| e.u != e.v)
            .map(|e| (e.u, e.v, e.mult))
            .collect();
        non_loop.sort();
        // three parallel strands between each pair of adjacent rows
        assert_eq!(non_loop.len(), 2);
        assert!(non_loop.iter().all(|&(_, _, m)| m == 3));
        assert_eq!(edge_connectivity(&res.graph), 3);
    }

    #[test]
    fn contraction_rejects_bad_merge_groups() {
        let b = BoxSpec::new(2, 1).unwrap();
        let lab = label_clusters(&EdgeSet::empty(b.clone()));
        assert!(matches!(
            contract_clusters(&b, &lab, &[vec![99]]),
            Err(Error::UnknownClusterId(99))
        ));
        assert!(contract_clusters(&b, &lab, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn merge_groups_merge() {
        let b = BoxSpec::new(2, 1).unwrap();
        let lab = label_clusters(&EdgeSet::empty(b.clone()));
        // merge all nine singleton clusters into one vertex
        let all: Vec<u32> = (0..9).collect();
        let res = contract_clusters(&b, &lab, &[all]).unwrap();
        assert_eq!(res.graph.vertex_count(), 1);
    }

    #[test]
    fn bulk_boundary_single_cluster() {
        let d = 2usize;
        let n = 4i64;
        let b = BoxSpec::new(d, 8 * d as i64 * n).unwrap();
        let x = SubgraphGenerator::comb(1).edges_in_region(&b);
        let g = build_bulk_boundary_graph(&x, n, n).unwrap();
        assert!(!g.merged_boundary);
        assert_eq!(g.contraction.graph.vertex_count(), 1);
    }

    #[test]
    fn bulk_boundary_foliation_uses_merged_case() {
        let d = 2usize;
        let n = 4i64;
        let m = 8i64;
        let b = BoxSpec::new(d, 8 * d as i64 * n).unwrap();
        let x = SubgraphGenerator::axis_foliation(1).edges_in_region(&b);
        let lab = label_clusters(&x);
        // rows above m avoid Λ_m, so the band (m, m+√n] is populated
        assert!(count_u(&lab, m as f64, m as f64 + 2.0).unwrap() > 0);
        let g = build_bulk_boundary_graph(&x, n, m).unwrap();
        assert!(g.merged_boundary);
        // bulk rows -m..m plus the merged boundary vertex
        assert_eq!(g.contraction.graph.vertex_count(), (2 * m + 2) as usize);
        assert!(edge_connectivity(&g.contraction.graph) >= 2);
        // a vertex on row m+1 landed on the merged vertex
        let sub = &g.region;
        let mut expectation_checked = false;
        let mut v = 0usize;
        lab.region().for_each_vertex_in(sub, |bidx| {
            let coords = lab.region().vertex_coords(bidx);
            if coords[1] == m + 1 {
                assert_eq!(Some(g.contraction.vertex_map[v]), g.boundary_vertex);
                expectation_checked = true;
            }
            v += 1;
        });
        assert!(expectation_checked);
    }

    #[test]
    fn bulk_boundary_rejects_bad_parameters() {
        let b = BoxSpec::new(2, 64).unwrap(); // 8dn with n = 4
        let x = SubgraphGenerator::comb(1).edges_in_region(&b);
        assert!(build_bulk_boundary_graph(&x, 4, 2).is_err()); // m < n
        assert!(build_bulk_boundary_graph(&x, 4, 63).is_err()); // m + 2√n > 8dn
        assert!(build_bulk_boundary_graph(&x, 5, 8).is_err()); // radius mismatch
    }

    #[test]
    fn sprinkle_trial_endpoints() {
        let g = triangle();
        assert_eq!(sprinkle_multigraph_trial(&g, 1.0, 1, 0), 1);
        let tiny = sample_multigraph_sprinkle(&g, f64::MIN_POSITIVE, 1, 0);
        assert_eq!(component_count(&g, &tiny), 3);
    }

    #[test]
    fn parallel_pair_disconnection_rate() {
        // two vertices, t parallel strands: P[K=2] = (1-eps)^t
        let t = 4u32;
        let eps = 0.3;
        let g = Multigraph::new(2, [(0, 1, t)]);
        let trials = 20_000u64;
        let mut disconnected = 0u64;
        for s in 0..trials {
            if sprinkle_multigraph_trial(&g, eps, 42, s) == 2 {
                disconnected += 1;
            }
        }
        let exact = (1.0f64 - eps).powi(t as i32);
        let p_hat = disconnected as f64 / trials as f64;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((p_hat - exact).abs() <= 3.0 * sigma, "{p_hat} vs {exact}");
    }

    #[test]
    fn shrink_event_examples() {
        let g = triangle();
        // spanning base: K = 1, event impossible
        for s in 0..50 {
            assert!(!shrink_event(&g, &[true, true, true], 0.2, 4, 7, s));
        }
        // full sprinkle on a connected graph: K -> 1, event impossible
        for s in 0..50 {
            assert!(!shrink_event(&g, &[false; 3], 1.0, 4, 7, s));
        }
        // empty base on a 2-vertex bundle with N >= 4: event iff all closed
        let bundle = Multigraph::new(2, [(0, 1, 5)]);
        let mut rate = 0u64;
        let trials = 20_000u64;
        for s in 0..trials {
            if shrink_event(&bundle, &[false], 0.4, 5, 9, s) {
                rate += 1;
            }
        }
        let exact = (1.0f64 - 0.4).powi(5);
        let p_hat = rate as f64 / trials as f64;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((p_hat - exact).abs() <= 3.0 * sigma);
    }

    #[test]
    fn text_format_round_trip() {
        let g = Multigraph::new(4, [(0, 1, 2), (1, 2, 1), (2, 2, 3), (0, 1, 1)]);
        let text = g.to_text();
        assert!(text.starts_with("p mg 4 3\n"));
        let back = Multigraph::parse_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.vertex_count(), 4);
        // aggregation merged the duplicate (0,1) lines
        assert_eq!(
            back.edges()
                .iter()
                .find(|e| e.u == 0 && e.v == 1)
                .unwrap()
                .mult,
            3
        );

        assert!(Multigraph::parse_text("").is_err());
        assert!(Multigraph::parse_text("p mg x 1\n0 1 1").is_err());
        assert!(Multigraph::parse_text("p mg 2 1\n0 5 1").is_err());
        assert!(Multigraph::parse_text("p mg 2 1\n0 1 0").is_err());
        assert!(Multigraph::parse_text("p mg 2 2\n0 1 1").is_err());
    }
}
