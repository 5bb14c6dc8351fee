//! Vertex-local invariants: edge-ends, links, local degree and index.
//!
//! At a vertex with `2k` edge-ends the function looks like `Re z^k`, so the
//! whole local classification reduces to counting ends. The link of a vertex
//! is the graph on its edge-ends where consecutive darts of a boundary cycle
//! contribute an adjacency; on a valid graph every end has exactly one lower
//! and one upper adjacency, so the link is a disjoint union of circles. One
//! circle means the glued cylinders form a disk neighborhood (planar vertex),
//! more than one means a cone point.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CycleBody, Dart, DistinguishingGraph, Edge, Role, Sign};

/// Which end of an edge, relative to its stored orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EndKind {
    Tail,
    Head,
}

/// One of the two ends of an edge. A loop has two distinct ends at the same
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeEnd {
    pub edge: String,
    pub kind: EndKind,
}

impl EdgeEnd {
    pub fn new(edge: impl Into<String>, kind: EndKind) -> EdgeEnd {
        EdgeEnd {
            edge: edge.into(),
            kind,
        }
    }
}

impl fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EndKind::Tail => write!(f, "{}-", self.edge),
            EndKind::Head => write!(f, "{}+", self.edge),
        }
    }
}

/// A link adjacency between two edge-ends at a common vertex, tagged with the
/// role of the cycle that induced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkAdjacency {
    pub ends: (EdgeEnd, EdgeEnd),
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Planar,
    Conic,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Planar => write!(f, "planar"),
            VertexKind::Conic => write!(f, "conic"),
        }
    }
}

/// Local data of one vertex: `degree = 2k`, `index = 1 - k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexReport {
    pub vertex: String,
    pub level: usize,
    pub degree: usize,
    pub local_degree_k: usize,
    pub index: i64,
    pub kind: VertexKind,
    /// Circles in the link of the vertex on the glued surface; an isolated
    /// vertex caps with a disk, so its link is the single boundary circle.
    pub link_components: usize,
}

fn edge_lookup(graph: &DistinguishingGraph) -> HashMap<&str, &Edge> {
    graph.edges().map(|(_, e)| (e.id.as_str(), e)).collect()
}

/// The vertex where traversal of `dart` starts (`start = true`) or finishes.
fn traversal_vertex<'a>(edges: &HashMap<&str, &'a Edge>, dart: &Dart, start: bool) -> &'a str {
    let e = edges[dart.edge.as_str()];
    match (dart.dir, start) {
        (Sign::Plus, true) | (Sign::Minus, false) => &e.tail,
        (Sign::Plus, false) | (Sign::Minus, true) => &e.head,
    }
}

/// The edge-end at which traversal of `dart` starts or finishes.
fn traversal_end(dart: &Dart, start: bool) -> EdgeEnd {
    let kind = match (dart.dir, start) {
        (Sign::Plus, true) | (Sign::Minus, false) => EndKind::Tail,
        (Sign::Plus, false) | (Sign::Minus, true) => EndKind::Head,
    };
    EdgeEnd::new(dart.edge.clone(), kind)
}

fn require_vertex(graph: &DistinguishingGraph, vertex: &str) -> Result<()> {
    if graph.vertices().any(|(_, v)| v == vertex) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(vertex.to_string()))
    }
}

/// All edge-ends incident to `vertex`, sorted.
pub fn ends_at(graph: &DistinguishingGraph, vertex: &str) -> Vec<EdgeEnd> {
    let mut out = Vec::new();
    for (_, e) in graph.edges() {
        if e.tail == vertex {
            out.push(EdgeEnd::new(e.id.clone(), EndKind::Tail));
        }
        if e.head == vertex {
            out.push(EdgeEnd::new(e.id.clone(), EndKind::Head));
        }
    }
    out.sort();
    out
}

/// Every link adjacency at `vertex`: for each pair of cyclically consecutive
/// darts meeting there, the finish end of the first is joined to the start
/// end of the second. A single-dart cycle on a loop joins the loop's two ends.
///
/// Requires a valid graph; the vertex must exist.
pub fn link_adjacencies(graph: &DistinguishingGraph, vertex: &str) -> Result<Vec<LinkAdjacency>> {
    require_vertex(graph, vertex)?;
    let edges = edge_lookup(graph);
    let mut out = Vec::new();
    for cycle in &graph.cycles {
        let body = match &cycle.body {
            CycleBody::Point(_) => continue,
            CycleBody::Walk(darts) => darts,
        };
        for (i, dart) in body.iter().enumerate() {
            let next = &body[(i + 1) % body.len()];
            if traversal_vertex(&edges, dart, false) == vertex {
                out.push(LinkAdjacency {
                    ends: (traversal_end(dart, false), traversal_end(next, true)),
                    role: cycle.role,
                });
            }
        }
    }
    Ok(out)
}

/// The link of `vertex` as a list of cyclic sequences of edge-ends, sorted
/// and rotated deterministically. Empty for an isolated vertex.
pub fn vertex_link(graph: &DistinguishingGraph, vertex: &str) -> Result<Vec<Vec<EdgeEnd>>> {
    let adjacencies = link_adjacencies(graph, vertex)?;
    let mut ends = ends_at(graph, vertex);
    ends.dedup();
    let index_of: HashMap<&EdgeEnd, usize> = ends.iter().enumerate().map(|(i, e)| (e, i)).collect();

    // Adjacency instances per end; exactly two on a valid graph.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); ends.len()];
    let pairs: Vec<(usize, usize)> = adjacencies
        .iter()
        .map(|adj| (index_of[&adj.ends.0], index_of[&adj.ends.1]))
        .collect();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }

    let mut used = vec![false; pairs.len()];
    let mut components = Vec::new();
    for start in 0..ends.len() {
        if incident[start].iter().all(|&i| used[i]) {
            continue;
        }
        let mut seq = vec![start];
        let mut current = start;
        while let Some(&next_adj) = incident[current].iter().find(|&&i| !used[i]) {
            used[next_adj] = true;
            let (a, b) = pairs[next_adj];
            current = if a == current { b } else { a };
            if current == start {
                break;
            }
            seq.push(current);
        }
        components.push(seq.into_iter().map(|i| ends[i].clone()).collect::<Vec<_>>());
    }
    components.sort_by(|a, b| a.first().cmp(&b.first()));
    Ok(components)
}

/// Planar iff the link is a single circle; isolated vertices cap with a disk
/// and count as planar.
pub fn classify_vertex(graph: &DistinguishingGraph, vertex: &str) -> Result<VertexKind> {
    let link = vertex_link(graph, vertex)?;
    Ok(if link.len() <= 1 {
        VertexKind::Planar
    } else {
        VertexKind::Conic
    })
}

/// Full local report for one vertex.
pub fn vertex_report(graph: &DistinguishingGraph, vertex: &str) -> Result<VertexReport> {
    require_vertex(graph, vertex)?;
    let level = graph
        .vertices()
        .find(|(_, v)| *v == vertex)
        .map(|(l, _)| l)
        .expect("vertex existence just checked");
    let degree = graph.degree(vertex);
    let k = degree / 2;
    let link = vertex_link(graph, vertex)?;
    let link_components = link.len().max(1);
    Ok(VertexReport {
        vertex: vertex.to_string(),
        level,
        degree,
        local_degree_k: k,
        index: 1 - k as i64,
        kind: if link.len() <= 1 {
            VertexKind::Planar
        } else {
            VertexKind::Conic
        },
        link_components,
    })
}

/// Two critical points are topologically equivalent in small neighborhoods
/// iff their Poincaré indices agree.
pub fn locally_equivalent(
    graph1: &DistinguishingGraph,
    vertex1: &str,
    graph2: &DistinguishingGraph,
    vertex2: &str,
) -> Result<bool> {
    let r1 = vertex_report(graph1, vertex1)?;
    let r2 = vertex_report(graph2, vertex2)?;
    Ok(r1.index == r2.index)
}
