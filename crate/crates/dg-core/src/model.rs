//! Data model for distinguishing graphs.
//!
//! A distinguishing graph is an ordered family of level graphs (one per
//! critical value, bottom to top), a set of boundary cycles on those graphs,
//! and a pairing that matches the lower end of every cylinder of the surface
//! with its upper end. Critical values themselves are not stored: topological
//! equivalence only sees their order, so levels are plain ordinals `1..=n`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

/// Traversal direction of a dart relative to the stored edge orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self.flip()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Which end of a cylinder a cycle is: `Lower` cycles bound a cylinder from
/// below (they sit on the lower of its two levels), `Upper` cycles bound one
/// from above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Role {
    Lower,
    Upper,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Lower => write!(f, "lower"),
            Role::Upper => write!(f, "upper"),
        }
    }
}

/// An edge traversal: the edge is walked tail→head when `dir` is `Plus`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: String,
    pub dir: Sign,
}

impl Dart {
    pub fn new(edge: impl Into<String>, dir: Sign) -> Dart {
        Dart {
            edge: edge.into(),
            dir,
        }
    }

    pub fn flip(&self) -> Dart {
        Dart {
            edge: self.edge.clone(),
            dir: self.dir.flip(),
        }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.edge, self.dir)
    }
}

/// An edge of a level graph. Loops (`tail == head`) are permitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
}

impl Edge {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Edge {
        Edge {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The other endpoint, given one endpoint name.
    pub fn opposite(&self, v: &str) -> &str {
        if v == self.tail {
            &self.head
        } else {
            &self.tail
        }
    }
}

/// The body of a cycle: either a closed dart walk or a single isolated
/// vertex (the degenerate boundary circle of a disk capping an extremum).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleBody {
    Point(String),
    Walk(Vec<Dart>),
}

impl CycleBody {
    pub fn is_point(&self) -> bool {
        matches!(self, CycleBody::Point(_))
    }

    pub fn darts(&self) -> &[Dart] {
        match self {
            CycleBody::Point(_) => &[],
            CycleBody::Walk(darts) => darts,
        }
    }

    pub fn len(&self) -> usize {
        self.darts().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A boundary cycle on some level graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub id: String,
    pub level: usize,
    pub role: Role,
    pub body: CycleBody,
}

/// A cylinder of the surface, named by its two end cycles: `lower` lives on
/// level `i`, `upper` on level `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub lower: String,
    pub upper: String,
}

/// The graph of one critical level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGraph {
    /// 1-based ordinal, ascending with the critical value.
    pub index: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

/// The full invariant: ordered level graphs, cycles, and cylinder pairings.
///
/// The container keeps a canonical internal order (vertices, edges, cycles
/// and pairings sorted by name) so structural equality and serialization are
/// presentation-independent; dart sequences are kept exactly as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingGraph {
    pub levels: Vec<LevelGraph>,
    pub cycles: Vec<Cycle>,
    pub pairings: Vec<Pairing>,
}

impl DistinguishingGraph {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, index: usize) -> Option<&LevelGraph> {
        self.levels.get(index.checked_sub(1)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(|l| l.vertices.len()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.levels.iter().map(|l| l.edges.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (usize, &str)> {
        self.levels
            .iter()
            .flat_map(|l| l.vertices.iter().map(move |v| (l.index, v.as_str())))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.levels
            .iter()
            .flat_map(|l| l.edges.iter().map(move |e| (l.index, e)))
    }

    pub fn cycle(&self, id: &str) -> Option<&Cycle> {
        self.cycles.iter().find(|c| c.id == id)
    }

    pub fn cycles_at(&self, level: usize, role: Role) -> impl Iterator<Item = &Cycle> {
        self.cycles
            .iter()
            .filter(move |c| c.level == level && c.role == role)
    }

    /// Number of edge-ends at a vertex; a loop contributes 2.
    pub fn degree(&self, vertex: &str) -> usize {
        self.levels
            .iter()
            .flat_map(|l| l.edges.iter())
            .map(|e| (e.tail == vertex) as usize + (e.head == vertex) as usize)
            .sum()
    }

    /// Sort vertices, edges, cycles and pairings into the canonical order.
    /// Dart sequences are left untouched.
    pub fn normalize(&mut self) {
        for level in &mut self.levels {
            level.vertices.sort();
            level.edges.sort_by(|a, b| a.id.cmp(&b.id));
        }
        self.cycles
            .sort_by(|a, b| (a.level, a.role, &a.id).cmp(&(b.level, b.role, &b.id)));
        let level_of: HashMap<&str, usize> = self
            .cycles
            .iter()
            .map(|c| (c.id.as_str(), c.level))
            .collect();
        let mut keyed: Vec<(usize, Pairing)> = std::mem::take(&mut self.pairings)
            .into_iter()
            .map(|p| (level_of.get(p.lower.as_str()).copied().unwrap_or(0), p))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1.lower).cmp(&(b.0, &b.1.lower)));
        self.pairings = keyed.into_iter().map(|(_, p)| p).collect();
    }

    pub fn normalized(mut self) -> DistinguishingGraph {
        self.normalize();
        self
    }
}

/// Convenience constructor used by the word encoding, the transforms, and
/// tests. Performs no validation; run [`crate::validate`] on the result.
#[derive(Default)]
pub struct GraphBuilder {
    levels: Vec<LevelGraph>,
    cycles: Vec<Cycle>,
    pairings: Vec<Pairing>,
}

impl GraphBuilder {
    pub fn new(level_count: usize) -> GraphBuilder {
        GraphBuilder {
            levels: (1..=level_count)
                .map(|index| LevelGraph {
                    index,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                })
                .collect(),
            cycles: Vec::new(),
            pairings: Vec::new(),
        }
    }

    pub fn vertex(&mut self, level: usize, id: impl Into<String>) -> &mut Self {
        self.levels[level - 1].vertices.push(id.into());
        self
    }

    pub fn edge(
        &mut self,
        level: usize,
        id: impl Into<String>,
        tail: impl Into<String>,
        head: impl Into<String>,
    ) -> &mut Self {
        self.levels[level - 1].edges.push(Edge::new(id, tail, head));
        self
    }

    pub fn point_cycle(
        &mut self,
        level: usize,
        id: impl Into<String>,
        role: Role,
        anchor: impl Into<String>,
    ) -> &mut Self {
        self.cycles.push(Cycle {
            id: id.into(),
            level,
            role,
            body: CycleBody::Point(anchor.into()),
        });
        self
    }

    pub fn cycle<I>(
        &mut self,
        level: usize,
        id: impl Into<String>,
        role: Role,
        darts: I,
    ) -> &mut Self
    where
        I: IntoIterator,
        I::Item: Into<Dart>,
    {
        self.cycles.push(Cycle {
            id: id.into(),
            level,
            role,
            body: CycleBody::Walk(darts.into_iter().map(Into::into).collect()),
        });
        self
    }

    pub fn pair(&mut self, lower: impl Into<String>, upper: impl Into<String>) -> &mut Self {
        self.pairings.push(Pairing {
            lower: lower.into(),
            upper: upper.into(),
        });
        self
    }

    pub fn build(self) -> DistinguishingGraph {
        DistinguishingGraph {
            levels: self.levels,
            cycles: self.cycles,
            pairings: self.pairings,
        }
        .normalized()
    }
}

impl From<(&str, Sign)> for Dart {
    fn from((edge, dir): (&str, Sign)) -> Dart {
        Dart::new(edge, dir)
    }
}

/// Parse a compact dart list like `"a+ b+ c-"`, used heavily in tests.
pub fn darts(spec: &str) -> Vec<Dart> {
    spec.split_whitespace()
        .map(|tok| {
            let (name, dir) = tok.split_at(tok.len() - 1);
            let dir = match dir {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                other => panic!("bad dart direction `{other}` in `{spec}`"),
            };
            Dart::new(name, dir)
        })
        .collect()
}
