//! Surface-global invariants: Euler characteristic, orientability,
//! connectivity, genus.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::{classify_vertex, vertex_report, VertexKind, VertexReport};
use crate::model::{CycleBody, DistinguishingGraph, Sign};
use crate::validate::require_valid;

/// Poincaré–Hopf over the vertices: every vertex contributes `1 - k`, so the
/// sum is `V - E`. Degree-2 vertices contribute nothing, which is what makes
/// the characteristic invariant under smoothing and loop subdivision.
pub fn euler_characteristic(graph: &DistinguishingGraph) -> i64 {
    graph.vertex_count() as i64 - graph.edge_count() as i64
}

/// All vertices planar: the glued cylinders form a closed surface.
pub fn is_realizable(graph: &DistinguishingGraph) -> bool {
    graph.vertices().all(|(_, v)| {
        classify_vertex(graph, v)
            .map(|k| k == VertexKind::Planar)
            .unwrap_or(false)
    })
}

/// Union-find with a parity bit on every edge to the parent; `union` returns
/// false when the requested relation contradicts an established one.
struct ParityUnionFind {
    parent: Vec<usize>,
    /// Parity of the element relative to its parent.
    parity: Vec<Sign>,
    rank: Vec<u32>,
}

impl ParityUnionFind {
    fn new(len: usize) -> ParityUnionFind {
        ParityUnionFind {
            parent: (0..len).collect(),
            parity: vec![Sign::Plus; len],
            rank: vec![0; len],
        }
    }

    /// Root of `x` and the parity of `x` relative to that root.
    fn find(&mut self, x: usize) -> (usize, Sign) {
        if self.parent[x] == x {
            return (x, Sign::Plus);
        }
        let (root, parent_parity) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] = self.parity[x] * parent_parity;
        (root, self.parity[x])
    }

    /// Impose `x = relation * y`.
    fn union(&mut self, x: usize, y: usize, relation: Sign) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px * py == relation;
        }
        // parity(rx relative to ry) making x = relation * y hold.
        let link = px * relation * py;
        if self.rank[rx] < self.rank[ry] {
            self.parent[rx] = ry;
            self.parity[rx] = link;
        } else {
            self.parent[ry] = rx;
            self.parity[ry] = link;
            if self.rank[rx] == self.rank[ry] {
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// A coherent orientation: edge directions `sigma` and, per nonempty cycle, a
/// sign `tau` telling whether the stored dart sequence agrees with the
/// induced traversal. Every dart `(e, d)` of a cycle `C` satisfies
/// `tau(C) * d = sigma(e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationAssignment {
    pub edge_sign: BTreeMap<String, Sign>,
    pub cycle_sign: BTreeMap<String, Sign>,
}

/// Decide orientability of a valid realizable graph by parity propagation.
///
/// Variables are edges and nonempty cycles; each dart ties its cycle to its
/// edge with the dart's direction as parity. A cylinder whose two end cycles
/// are both nonempty ties their signs together as well: a homeomorphism of a
/// cylinder reverses both boundary circles or neither, so the recorded
/// traversals of the two ends come from one coherent product structure.
///
/// Returns `Ok(None)` when the constraints are unsatisfiable (non-orientable
/// surface), an error when the graph is invalid or not realizable.
pub fn orientation_assignment(
    graph: &DistinguishingGraph,
) -> Result<Option<OrientationAssignment>> {
    require_valid(graph)?;
    if !is_realizable(graph) {
        return Err(Error::NotRealizable);
    }

    // Variable layout: edges first, then nonempty cycles.
    let edge_ids: Vec<&str> = graph.edges().map(|(_, e)| e.id.as_str()).collect();
    let edge_var: HashMap<&str, usize> =
        edge_ids.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let cycle_ids: Vec<&str> = graph
        .cycles
        .iter()
        .filter(|c| !c.body.is_point())
        .map(|c| c.id.as_str())
        .collect();
    let cycle_var: HashMap<&str, usize> = cycle_ids
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, edge_ids.len() + i))
        .collect();

    let mut uf = ParityUnionFind::new(edge_ids.len() + cycle_ids.len());
    for cycle in &graph.cycles {
        let CycleBody::Walk(body) = &cycle.body else {
            continue;
        };
        let cv = cycle_var[cycle.id.as_str()];
        for dart in body {
            // sigma(e) = tau(C) * d
            if !uf.union(edge_var[dart.edge.as_str()], cv, dart.dir) {
                return Ok(None);
            }
        }
    }
    for pairing in &graph.pairings {
        let lower = graph.cycle(&pairing.lower).expect("validated");
        let upper = graph.cycle(&pairing.upper).expect("validated");
        if lower.body.is_point() || upper.body.is_point() {
            continue;
        }
        if !uf.union(
            cycle_var[lower.id.as_str()],
            cycle_var[upper.id.as_str()],
            Sign::Plus,
        ) {
            return Ok(None);
        }
    }

    let mut edge_sign = BTreeMap::new();
    for (id, var) in edge_ids.iter().zip(0..) {
        let (_, parity) = uf.find(var);
        edge_sign.insert(id.to_string(), parity);
    }
    let mut cycle_sign = BTreeMap::new();
    for id in &cycle_ids {
        let (_, parity) = uf.find(cycle_var[id]);
        cycle_sign.insert(id.to_string(), parity);
    }
    Ok(Some(OrientationAssignment {
        edge_sign,
        cycle_sign,
    }))
}

/// Connectivity of the glued surface, read off the incidence structure whose
/// nodes are level-graph components and cylinders, joined whenever a cycle of
/// the component is an end of the cylinder. Requires a valid graph.
pub fn is_connected(graph: &DistinguishingGraph) -> bool {
    // Component id per vertex, within each level graph.
    let vertices: Vec<(usize, &str)> = graph.vertices().collect();
    let vertex_ix: HashMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (*v, i))
        .collect();
    let mut comp = PlainUnionFind::new(vertices.len() + graph.pairings.len());
    for (_, e) in graph.edges() {
        comp.union(vertex_ix[e.tail.as_str()], vertex_ix[e.head.as_str()]);
    }

    // A cycle touches a vertex of its component; join that with the cylinder.
    let edges: HashMap<&str, &crate::model::Edge> =
        graph.edges().map(|(_, e)| (e.id.as_str(), e)).collect();
    let cycle_vertex = |id: &str| -> usize {
        let cycle = graph.cycle(id).expect("validated");
        match &cycle.body {
            CycleBody::Point(anchor) => vertex_ix[anchor.as_str()],
            CycleBody::Walk(body) => vertex_ix[edges[body[0].edge.as_str()].tail.as_str()],
        }
    };
    for (k, pairing) in graph.pairings.iter().enumerate() {
        let cylinder = vertices.len() + k;
        comp.union(cylinder, cycle_vertex(&pairing.lower));
        comp.union(cylinder, cycle_vertex(&pairing.upper));
    }

    let mut roots: Vec<usize> = (0..vertices.len()).map(|i| comp.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() <= 1
}

struct PlainUnionFind {
    parent: Vec<usize>,
}

impl PlainUnionFind {
    fn new(len: usize) -> PlainUnionFind {
        PlainUnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Global report: connectivity, realizability, orientability, Euler
/// characteristic and genus, plus the per-vertex local data.
///
/// `orientable` is undefined (None) when the graph is not realizable; `genus`
/// additionally requires connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub connected: bool,
    pub realizable: bool,
    pub orientable: Option<bool>,
    pub euler_characteristic: i64,
    pub genus: Option<i64>,
    pub vertex_reports: Vec<VertexReport>,
}

pub fn surface_report(graph: &DistinguishingGraph) -> Result<SurfaceReport> {
    require_valid(graph)?;
    let vertex_reports: Vec<VertexReport> = graph
        .vertices()
        .map(|(_, v)| vertex_report(graph, v))
        .collect::<Result<_>>()?;
    let realizable = vertex_reports.iter().all(|r| r.kind == VertexKind::Planar);
    let connected = is_connected(graph);
    let euler = euler_characteristic(graph);
    let orientable = if realizable {
        Some(orientation_assignment(graph)?.is_some())
    } else {
        None
    };
    let genus = match (realizable && connected, orientable) {
        (true, Some(true)) => Some((2 - euler) / 2),
        (true, Some(false)) => Some(2 - euler),
        _ => None,
    };
    Ok(SurfaceReport {
        connected,
        realizable,
        orientable,
        euler_characteristic: euler,
        genus,
        vertex_reports,
    })
}
