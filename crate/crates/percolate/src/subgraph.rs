//! Generators for everywhere-percolating subgraphs `X` of the lattice,
//! a finite-box proxy verifier for that property, and the edge-list
//! file format for user-supplied subgraphs.
//!
//! The deterministic kinds answer membership queries anywhere on the
//! lattice. `random_forest` realizes a fresh deterministic forest per
//! queried region; `explicit` wraps a fixed edge set loaded from a
//! file. Axes are numbered from 1.

use crate::cluster::label_clusters;
use crate::error::{Error, Result};
use crate::lattice::{BoxSpec, EdgeSet};
use crate::rng::{domain, mix64, SeqRng};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq)]
pub enum SubgraphGenerator {
    /// Every edge parallel to one axis: a foliation by lines.
    AxisFoliation { axis: usize },
    /// A spine along `spine_axis` through the origin plus every edge
    /// parallel to the tooth axis.
    Comb { spine_axis: usize },
    /// Lines parallel to `axis`, each missing a single edge whose
    /// position is drawn from `offsets` by the line's transverse
    /// coordinates. Components are infinite rays; the pattern is not
    /// translation invariant.
    ShiftedLines { axis: usize, offsets: Vec<i64> },
    /// Seeded spanning forest of the queried region, teeth extended to
    /// the region boundary.
    RandomForest { seed: u64 },
    /// Fixed edge set over a declared box.
    Explicit { edges: EdgeSet },
}

impl SubgraphGenerator {
    pub fn axis_foliation(axis: usize) -> Self {
        assert!(axis >= 1, "axes are numbered from 1");
        SubgraphGenerator::AxisFoliation { axis }
    }

    pub fn comb(spine_axis: usize) -> Self {
        assert!(spine_axis >= 1, "axes are numbered from 1");
        SubgraphGenerator::Comb { spine_axis }
    }

    pub fn shifted_lines(axis: usize, offsets: Vec<i64>) -> Self {
        assert!(axis >= 1, "axes are numbered from 1");
        assert!(!offsets.is_empty(), "offsets must be nonempty");
        SubgraphGenerator::ShiftedLines { axis, offsets }
    }

    pub fn random_forest(seed: u64) -> Self {
        SubgraphGenerator::RandomForest { seed }
    }

    pub fn name(&self) -> String {
        match self {
            SubgraphGenerator::AxisFoliation { axis } => format!("axis_foliation(axis={axis})"),
            SubgraphGenerator::Comb { spine_axis } => format!("comb(spine_axis={spine_axis})"),
            SubgraphGenerator::ShiftedLines { axis, offsets } => {
                format!("shifted_lines(axis={axis},offsets={offsets:?})")
            }
            SubgraphGenerator::RandomForest { seed } => format!("random_forest(seed={seed})"),
            SubgraphGenerator::Explicit { .. } => "explicit".into(),
        }
    }

    /// Comb tooth axis: axis 2 unless the spine runs along it.
    fn tooth_axis(spine_axis: usize) -> usize {
        if spine_axis == 1 {
            2
        } else {
            1
        }
    }

    fn shifted_break(axis0: usize, offsets: &[i64], lo: &[i64]) -> i64 {
        // transverse coordinate sum selects the missing-edge position
        let sum: i64 = lo
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != axis0)
            .map(|(_, &c)| c)
            .sum();
        offsets[sum.rem_euclid(offsets.len() as i64) as usize]
    }

    /// Membership of the lattice edge `{u, v}` in `X`, by coordinates.
    /// The points must be lattice neighbors. Panics for region-scoped
    /// kinds (`random_forest`), whose support is defined per realized
    /// region only.
    pub fn contains_edge(&self, u: &[i64], v: &[i64]) -> bool {
        let d = u.len();
        assert_eq!(d, v.len());
        let axis0 = (0..d)
            .find(|&i| u[i] != v[i])
            .expect("distinct lattice neighbors");
        debug_assert!((u[axis0] - v[axis0]).abs() == 1);
        match self {
            SubgraphGenerator::AxisFoliation { axis } => axis0 + 1 == *axis,
            SubgraphGenerator::Comb { spine_axis } => {
                if axis0 + 1 == Self::tooth_axis(*spine_axis) {
                    true
                } else if axis0 + 1 == *spine_axis {
                    (0..d).all(|i| i == axis0 || u[i] == 0)
                } else {
                    false
                }
            }
            SubgraphGenerator::ShiftedLines { axis, offsets } => {
                if axis0 + 1 != *axis {
                    return false;
                }
                let lo = if u[axis0] < v[axis0] { u } else { v };
                lo[axis0] != Self::shifted_break(axis0, offsets, lo)
            }
            SubgraphGenerator::RandomForest { .. } => {
                panic!("random_forest membership is region-scoped; use edges_in_region")
            }
            SubgraphGenerator::Explicit { edges } => edges
                .region()
                .encode_edge(u, v)
                .is_some_and(|e| edges.contains(e)),
        }
    }

    /// Exactly the `X`-edges with both endpoints in the box.
    pub fn edges_in_region(&self, region: &BoxSpec) -> EdgeSet {
        match self {
            SubgraphGenerator::AxisFoliation { axis } => {
                let mut out = EdgeSet::empty(region.clone());
                fill_axis(&mut out, region, axis - 1);
                out
            }
            SubgraphGenerator::Comb { spine_axis } => {
                let mut out = EdgeSet::empty(region.clone());
                fill_axis(&mut out, region, Self::tooth_axis(*spine_axis) - 1);
                fill_spine(&mut out, region, spine_axis - 1);
                out
            }
            SubgraphGenerator::ShiftedLines { axis, offsets } => {
                let mut out = EdgeSet::empty(region.clone());
                let axis0 = axis - 1;
                fill_axis(&mut out, region, axis0);
                remove_line_breaks(&mut out, region, axis0, offsets);
                out
            }
            SubgraphGenerator::RandomForest { seed } => random_forest_edges(*seed, region),
            SubgraphGenerator::Explicit { edges } => {
                let mut out = EdgeSet::empty(region.clone());
                for e in edges.iter() {
                    let (p, q) = edges.region().edge_endpoints(e);
                    if let Some(id) = region.encode_edge(&p, &q) {
                        out.insert(id);
                    }
                }
                out
            }
        }
    }
}

/// Set every edge parallel to `axis0` (0-based).
fn fill_axis(out: &mut EdgeSet, region: &BoxSpec, axis0: usize) {
    assert!(axis0 < region.d(), "axis out of range for dimension");
    let per_axis = region.edge_count() / region.d();
    for i in axis0 * per_axis..(axis0 + 1) * per_axis {
        out.insert(crate::lattice::EdgeId(i));
    }
}

/// Set the spine edges: edges parallel to `axis0` whose transverse
/// coordinates are all zero. No-op when the axis line misses the box.
fn fill_spine(out: &mut EdgeSet, region: &BoxSpec, axis0: usize) {
    assert!(axis0 < region.d());
    let mut p = vec![0i64; region.d()];
    let lo = region.center()[axis0] - region.r();
    let hi = region.center()[axis0] + region.r();
    for t in lo..hi {
        p[axis0] = t;
        let mut q = p.clone();
        q[axis0] = t + 1;
        if let Some(e) = region.encode_edge(&p, &q) {
            out.insert(e);
        }
    }
}

/// Remove the per-line missing edge of the shifted-lines pattern.
fn remove_line_breaks(out: &mut EdgeSet, region: &BoxSpec, axis0: usize, offsets: &[i64]) {
    let d = region.d();
    // odometer over the transverse coordinates
    let mut p = vec![0i64; d];
    for i in 0..d {
        p[i] = region.center()[i] - region.r();
    }
    loop {
        let brk = SubgraphGenerator::shifted_break(axis0, offsets, &p);
        let mut lo = p.clone();
        lo[axis0] = brk;
        let mut hi = p.clone();
        hi[axis0] = brk + 1;
        if let Some(e) = region.encode_edge(&lo, &hi) {
            out.remove(e);
        }
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if i == axis0 {
                continue; // transverse dims only
            }
            if p[i] < region.center()[i] + region.r() {
                p[i] += 1;
                for j in i + 1..d {
                    if j != axis0 {
                        p[j] = region.center()[j] - region.r();
                    }
                }
                break;
            }
        }
    }
}

fn region_key(region: &BoxSpec) -> u64 {
    let mut h = mix64(region.d() as u64);
    h = mix64(h ^ region.r() as u64);
    for &c in region.center() {
        h = mix64(h ^ c as u64);
    }
    h
}

/// Deterministic multi-source spanning forest of the region, with each
/// tree guaranteed to reach the region boundary (a straight tooth is
/// appended when the growth phase leaves a tree interior).
fn random_forest_edges(seed: u64, region: &BoxSpec) -> EdgeSet {
    let nv = region.vertex_count();
    let d = region.d();
    let side = region.side() as usize;
    let mut out = EdgeSet::empty(region.clone());
    if nv == 1 {
        return out;
    }
    let rkey = region_key(region);
    let mut src_rng = SeqRng::from_key(seed, domain::FOREST, rkey, 0);
    let want = (side / 8).max(2);
    let mut owner = vec![u32::MAX; nv];
    let mut sources = Vec::new();
    for _ in 0..want {
        let v = src_rng.next_index(nv);
        if owner[v] == u32::MAX {
            owner[v] = sources.len() as u32;
            sources.push(v);
        }
    }
    let mut touches_boundary = vec![false; sources.len()];
    let mut queue: VecDeque<usize> = sources.iter().copied().collect();
    for (t, &s) in sources.iter().enumerate() {
        if region.is_boundary_vertex(s) {
            touches_boundary[t] = true;
        }
    }
    // growth phase: multi-source BFS with per-vertex direction shuffle
    let mut dirs: Vec<(usize, bool)> = Vec::with_capacity(2 * d);
    while let Some(v) = queue.pop_front() {
        dirs.clear();
        for axis in 0..d {
            dirs.push((axis, true));
            dirs.push((axis, false));
        }
        let mut perm = SeqRng::from_key(seed, domain::FOREST, rkey ^ 1, v as u64);
        for i in (1..dirs.len()).rev() {
            dirs.swap(i, perm.next_index(i + 1));
        }
        let tree = owner[v];
        for &(axis, forward) in &dirs {
            let Some(w) = region.neighbor_index(v, axis, forward) else {
                continue;
            };
            if owner[w] != u32::MAX {
                continue;
            }
            owner[w] = tree;
            let lower = if forward { v } else { w };
            out.insert(region.edge_from_lower_index(lower, axis));
            if region.is_boundary_vertex(w) {
                touches_boundary[tree as usize] = true;
            }
            queue.push_back(w);
        }
    }
    // tooth phase: walk interior trees straight out to the shell
    for (t, &s) in sources.iter().enumerate() {
        if touches_boundary[t] {
            continue;
        }
        let mut v = s;
        while !region.is_boundary_vertex(v) {
            out.insert(region.edge_from_lower_index(v, 0));
            v = region
                .neighbor_index(v, 0, true)
                .expect("interior vertex has a forward neighbor");
        }
    }
    out
}

/// Finite proxy for the everywhere-percolating property: every cluster
/// of the box-restricted edge set must contain a vertex on the box
/// boundary shell.
pub fn proxy_holds(edges: &EdgeSet) -> bool {
    let region = edges.region();
    let lab = label_clusters(edges);
    let mut touched = vec![false; lab.cluster_count()];
    for v in 0..region.vertex_count() {
        if region.is_boundary_vertex(v) {
            touched[lab.cluster_of(v) as usize] = true;
        }
    }
    touched.into_iter().all(|t| t)
}

/// Proxy verifier for a generator restricted to a box.
pub fn verify_everywhere_percolating_proxy(g: &SubgraphGenerator, region: &BoxSpec) -> bool {
    proxy_holds(&g.edges_in_region(region))
}

/// JSON descriptor `{kind, params, seed?}` for a generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GeneratorDescriptor {
    pub fn new(kind: &str, params: serde_json::Value) -> Self {
        GeneratorDescriptor {
            kind: kind.into(),
            params,
            seed: None,
        }
    }

    /// Resolve the descriptor. `edge_list` kinds read their file here.
    pub fn build(&self) -> Result<SubgraphGenerator> {
        #[derive(Deserialize, Default)]
        #[serde(deny_unknown_fields)]
        struct AxisParams {
            #[serde(default = "one")]
            axis: usize,
        }
        #[derive(Deserialize, Default)]
        #[serde(deny_unknown_fields)]
        struct SpineParams {
            #[serde(default = "one")]
            spine_axis: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ShiftedParams {
            #[serde(default = "one")]
            axis: usize,
            offsets: Vec<i64>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct EdgeListParams {
            path: String,
            region: BoxSpec,
        }
        fn one() -> usize {
            1
        }
        fn parse<T: serde::de::DeserializeOwned + Default>(v: &serde_json::Value) -> Result<T> {
            if v.is_null() {
                Ok(T::default())
            } else {
                Ok(serde_json::from_value(v.clone())?)
            }
        }
        match self.kind.as_str() {
            "axis_foliation" => {
                let p: AxisParams = parse(&self.params)?;
                if p.axis < 1 {
                    return Err(Error::Config("axes are numbered from 1".into()));
                }
                Ok(SubgraphGenerator::AxisFoliation { axis: p.axis })
            }
            "comb" => {
                let p: SpineParams = parse(&self.params)?;
                if p.spine_axis < 1 {
                    return Err(Error::Config("axes are numbered from 1".into()));
                }
                Ok(SubgraphGenerator::Comb {
                    spine_axis: p.spine_axis,
                })
            }
            "shifted_lines" => {
                let p: ShiftedParams = serde_json::from_value(self.params.clone())?;
                if p.axis < 1 {
                    return Err(Error::Config("axes are numbered from 1".into()));
                }
                if p.offsets.is_empty() {
                    return Err(Error::Config("shifted_lines needs nonempty offsets".into()));
                }
                Ok(SubgraphGenerator::ShiftedLines {
                    axis: p.axis,
                    offsets: p.offsets,
                })
            }
            "random_forest" => Ok(SubgraphGenerator::RandomForest {
                seed: self.seed.unwrap_or(0),
            }),
            "edge_list" => {
                let p: EdgeListParams = serde_json::from_value(self.params.clone())?;
                let text = std::fs::read_to_string(&p.path)?;
                let edges = parse_edge_list(&text, p.region)?;
                Ok(SubgraphGenerator::Explicit { edges })
            }
            other => Err(Error::Config(format!("unknown generator kind '{other}'"))),
        }
    }
}

/// Parse the explicit edge-list format: one edge per line as
/// `x1 .. xd : x1' .. xd'`, `#` comments and blank lines allowed.
/// Both endpoints must lie in the box and be lattice neighbors.
pub fn parse_edge_list(text: &str, region: BoxSpec) -> Result<EdgeSet> {
    let mut out = EdgeSet::empty(region);
    let d = out.region().d();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let (left, right) = line
            .split_once(':')
            .ok_or_else(|| at("missing ':' separator".into()))?;
        let parse_point = |s: &str| -> Result<Vec<i64>> {
            let coords: std::result::Result<Vec<i64>, _> =
                s.split_whitespace().map(str::parse).collect();
            let coords = coords.map_err(|e| at(format!("bad coordinate: {e}")))?;
            if coords.len() != d {
                return Err(at(format!("expected {d} coordinates, got {}", coords.len())));
            }
            Ok(coords)
        };
        let p = parse_point(left)?;
        let q = parse_point(right)?;
        let region = out.region().clone();
        if !region.contains(&p) {
            return Err(at(format!("point {p:?} outside region")));
        }
        if !region.contains(&q) {
            return Err(at(format!("point {q:?} outside region")));
        }
        let e = region
            .encode_edge(&p, &q)
            .ok_or_else(|| at(format!("{p:?} and {q:?} are not lattice neighbors")))?;
        out.insert(e);
    }
    Ok(out)
}

/// Write an edge set in the edge-list format.
pub fn write_edge_list(edges: &EdgeSet, out: &mut impl std::io::Write) -> Result<()> {
    let region = edges.region();
    for e in edges.iter() {
        let (p, q) = region.edge_endpoints(e);
        let fmt = |v: &[i64]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "{} : {}", fmt(&p), fmt(&q))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn foliation_membership() {
        let g = SubgraphGenerator::axis_foliation(1);
        assert!(g.contains_edge(&[0, 0], &[1, 0]));
        assert!(!g.contains_edge(&[0, 0], &[0, 1]));
    }

    #[test]
    fn comb_membership() {
        let g = SubgraphGenerator::comb(1);
        assert!(g.contains_edge(&[5, 0], &[6, 0]));
        assert!(g.contains_edge(&[5, 3], &[5, 4]));
        assert!(!g.contains_edge(&[5, 3], &[6, 3]));
        // d = 3: spine needs all transverse coordinates zero
        assert!(g.contains_edge(&[1, 0, 0], &[2, 0, 0]));
        assert!(!g.contains_edge(&[1, 0, 1], &[2, 0, 1]));
        assert!(g.contains_edge(&[1, 4, 7], &[1, 5, 7]));
    }

    #[test]
    fn foliation_edges_in_small_box() {
        let b = BoxSpec::new(2, 1).unwrap();
        let x = SubgraphGenerator::axis_foliation(1).edges_in_region(&b);
        assert_eq!(x.len(), 6);
        for e in x.iter() {
            assert_eq!(b.edge_axis(e), 0);
        }
    }

    #[test]
    fn comb_edges_in_small_box() {
        let b = BoxSpec::new(2, 1).unwrap();
        let x = SubgraphGenerator::comb(1).edges_in_region(&b);
        // 2 spine edges + 6 tooth edges, confirmed by rule-by-rule scan
        assert_eq!(x.len(), 8);
        let mut expect = 0;
        for e in b.edges() {
            let (p, q) = b.edge_endpoints(e);
            if SubgraphGenerator::comb(1).contains_edge(&p, &q) {
                expect += 1;
                assert!(x.contains(e));
            }
        }
        assert_eq!(expect, 8);
    }

    /// The optimized region fills must agree with the membership
    /// predicate edge by edge.
    #[test]
    fn region_fill_matches_predicate() {
        let gens = [
            SubgraphGenerator::axis_foliation(1),
            SubgraphGenerator::axis_foliation(2),
            SubgraphGenerator::comb(1),
            SubgraphGenerator::comb(2),
            SubgraphGenerator::shifted_lines(1, vec![0]),
            SubgraphGenerator::shifted_lines(1, vec![2, -5, 1]),
            SubgraphGenerator::shifted_lines(2, vec![-1, 4]),
        ];
        for g in &gens {
            for (d, r, center) in [(2, 4, vec![0, 0]), (2, 3, vec![7, -2]), (3, 2, vec![0, 0, 0])] {
                let b = BoxSpec::with_center(d, r, center).unwrap();
                let x = g.edges_in_region(&b);
                for e in b.edges() {
                    let (p, q) = b.edge_endpoints(e);
                    assert_eq!(
                        x.contains(e),
                        g.contains_edge(&p, &q),
                        "{} at {p:?}-{q:?}",
                        g.name()
                    );
                }
            }
        }
    }

    #[test]
    fn random_forest_is_deterministic_and_spanning() {
        let b = BoxSpec::new(2, 6).unwrap();
        let g = SubgraphGenerator::random_forest(11);
        let a = g.edges_in_region(&b);
        assert_eq!(a, g.edges_in_region(&b));
        assert_ne!(a, SubgraphGenerator::random_forest(12).edges_in_region(&b));
        assert!(proxy_holds(&a));
    }

    #[test]
    fn proxy_on_bundled_generators() {
        for r in 0..=32i64 {
            let b = BoxSpec::new(2, r).unwrap();
            for g in [
                SubgraphGenerator::axis_foliation(1),
                SubgraphGenerator::axis_foliation(2),
                SubgraphGenerator::comb(1),
                SubgraphGenerator::shifted_lines(1, vec![3, -7, 0, 11]),
                SubgraphGenerator::random_forest(5),
            ] {
                assert!(
                    verify_everywhere_percolating_proxy(&g, &b),
                    "{} at r={r}",
                    g.name()
                );
            }
        }
        for r in 0..=8i64 {
            let b = BoxSpec::new(3, r).unwrap();
            for g in [
                SubgraphGenerator::axis_foliation(3),
                SubgraphGenerator::comb(2),
                SubgraphGenerator::random_forest(5),
            ] {
                assert!(verify_everywhere_percolating_proxy(&g, &b));
            }
        }
    }

    #[test]
    fn proxy_rejects_isolated_vertex() {
        // test double: a foliation with the origin's edges removed
        let b = BoxSpec::new(2, 4).unwrap();
        let mut edges = SubgraphGenerator::axis_foliation(1).edges_in_region(&b);
        edges.remove(b.encode_edge(&[0, 0], &[1, 0]).unwrap());
        edges.remove(b.encode_edge(&[-1, 0], &[0, 0]).unwrap());
        assert!(!proxy_holds(&edges));
    }

    #[test]
    fn shifted_lines_breaks_are_rays() {
        let g = SubgraphGenerator::shifted_lines(1, vec![0, 2]);
        // row y = 0 has transverse sum 0 -> break at offset[0] = 0
        assert!(!g.contains_edge(&[0, 0], &[1, 0]));
        assert!(g.contains_edge(&[1, 0], &[2, 0]));
        assert!(g.contains_edge(&[-1, 0], &[0, 0]));
        // row y = 1 -> break at offset[1] = 2
        assert!(!g.contains_edge(&[2, 1], &[3, 1]));
        assert!(g.contains_edge(&[0, 1], &[1, 1]));
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let b = BoxSpec::new(2, 2).unwrap();
        let x = SubgraphGenerator::comb(1).edges_in_region(&b);
        let mut buf = Vec::new();
        write_edge_list(&x, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = parse_edge_list(&text, b.clone()).unwrap();
        assert_eq!(back, x);

        assert!(parse_edge_list("0 0 1 0", b.clone()).is_err());
        assert!(parse_edge_list("0 0 : 2 0", b.clone()).is_err());
        assert!(parse_edge_list("0 0 : 0 9", b.clone()).is_err());
        assert!(parse_edge_list("a 0 : 1 0", b.clone()).is_err());
        assert!(parse_edge_list("# comment\n\n0 0 : 0 1\n", b.clone())
            .unwrap()
            .len()
            == 1);
    }

    #[test]
    fn descriptor_round_trip() {
        let desc: GeneratorDescriptor = serde_json::from_str(
            r#"{"kind":"shifted_lines","params":{"axis":1,"offsets":[0,3,-2]}}"#,
        )
        .unwrap();
        let g = desc.build().unwrap();
        assert_eq!(g, SubgraphGenerator::shifted_lines(1, vec![0, 3, -2]));

        let d2: GeneratorDescriptor =
            serde_json::from_str(r#"{"kind":"random_forest","seed":7}"#).unwrap();
        assert_eq!(d2.build().unwrap(), SubgraphGenerator::random_forest(7));

        let bad: GeneratorDescriptor = serde_json::from_str(r#"{"kind":"nope"}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
