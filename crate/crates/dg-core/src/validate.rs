//! Structural validation.
//!
//! `validate` checks every invariant of the data model and reports all
//! violations at once, naming the offending identifier. An empty report
//! means the graph is a well-formed distinguishing graph; every other
//! operation in this crate assumes (or checks) that.

use std::collections::HashMap;
use std::fmt;

use crate::model::{CycleBody, DistinguishingGraph, Role, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Fewer than two levels (a function on a closed surface has at least a
    /// minimum and a maximum value).
    TooFewLevels {
        count: usize,
    },
    /// Level ordinals must be `1..=n` in order.
    BadLevelIndex {
        position: usize,
        index: usize,
    },
    /// Every critical level contains at least one vertex.
    EmptyLevel {
        level: usize,
    },
    DuplicateVertex {
        vertex: String,
    },
    DuplicateEdge {
        edge: String,
    },
    DuplicateCycle {
        cycle: String,
    },
    /// Edge endpoint missing from the vertex set of the edge's own level.
    UnknownEndpoint {
        edge: String,
        vertex: String,
    },
    /// Dart references an edge that is not on the cycle's level.
    UnknownCycleEdge {
        cycle: String,
        edge: String,
    },
    /// Consecutive darts of a cycle do not meet at a common vertex.
    BrokenWalk {
        cycle: String,
        position: usize,
    },
    /// Point cycle anchored at a missing vertex or one outside its level.
    UnknownAnchor {
        cycle: String,
        vertex: String,
    },
    /// Point cycle anchored at a vertex that has edges.
    AnchorNotIsolated {
        cycle: String,
        vertex: String,
    },
    /// An isolated vertex must anchor exactly one cycle.
    IsolatedVertexCycles {
        vertex: String,
        count: usize,
    },
    /// Level 1 carries only lower cycles, level n only upper cycles.
    BoundaryRole {
        cycle: String,
    },
    /// Each edge occurs exactly once among the lower cycles of its level and
    /// exactly once among the upper cycles of its level.
    Coverage {
        edge: String,
        role: Role,
        count: usize,
    },
    /// Every vertex has an even number of edge-ends.
    OddDegree {
        vertex: String,
        degree: usize,
    },
    UnknownPairingCycle {
        cycle: String,
    },
    /// Pairing must join a lower cycle of level i to an upper cycle of i+1.
    MalformedPairing {
        lower: String,
        upper: String,
    },
    /// A cycle may belong to at most one pairing.
    RepairedCycle {
        cycle: String,
    },
    /// A lower cycle (below the top level) or upper cycle (above the bottom
    /// level) that belongs to no pairing.
    UnpairedCycle {
        cycle: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            TooFewLevels { count } => write!(f, "graph has {count} level(s), need at least 2"),
            BadLevelIndex { position, index } => {
                write!(f, "level at position {position} has ordinal {index}")
            }
            EmptyLevel { level } => write!(f, "level {level} has no vertices"),
            DuplicateVertex { vertex } => write!(f, "duplicate vertex `{vertex}`"),
            DuplicateEdge { edge } => write!(f, "duplicate edge `{edge}`"),
            DuplicateCycle { cycle } => write!(f, "duplicate cycle `{cycle}`"),
            UnknownEndpoint { edge, vertex } => {
                write!(f, "edge `{edge}` endpoint `{vertex}` is not a vertex of its level")
            }
            UnknownCycleEdge { cycle, edge } => {
                write!(f, "cycle `{cycle}` uses edge `{edge}` which is not on its level")
            }
            BrokenWalk { cycle, position } => {
                write!(f, "cycle `{cycle}` is not a closed walk at dart {position}")
            }
            UnknownAnchor { cycle, vertex } => {
                write!(f, "cycle `{cycle}` anchored at `{vertex}` which is not on its level")
            }
            AnchorNotIsolated { cycle, vertex } => {
                write!(f, "cycle `{cycle}` anchored at `{vertex}` which is not isolated")
            }
            IsolatedVertexCycles { vertex, count } => {
                write!(f, "isolated vertex `{vertex}` anchors {count} cycles, expected exactly 1")
            }
            BoundaryRole { cycle } => {
                write!(f, "cycle `{cycle}` has the wrong role for a boundary level")
            }
            Coverage { edge, role, count } => {
                write!(f, "edge `{edge}` occurs {count} times in {role} cycles, expected exactly 1")
            }
            OddDegree { vertex, degree } => {
                write!(f, "vertex `{vertex}` has odd degree {degree}")
            }
            UnknownPairingCycle { cycle } => write!(f, "pairing references unknown cycle `{cycle}`"),
            MalformedPairing { lower, upper } => write!(
                f,
                "pairing `{lower}`/`{upper}` must join a lower cycle of level i to an upper cycle of level i+1"
            ),
            RepairedCycle { cycle } => write!(f, "cycle `{cycle}` belongs to more than one pairing"),
            UnpairedCycle { cycle } => write!(f, "cycle `{cycle}` belongs to no pairing"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Check every structural invariant of `graph` and report all violations.
pub fn validate(graph: &DistinguishingGraph) -> ValidationReport {
    let mut out = Vec::new();
    let n = graph.level_count();

    if n < 2 {
        out.push(Violation::TooFewLevels { count: n });
    }
    for (pos, level) in graph.levels.iter().enumerate() {
        if level.index != pos + 1 {
            out.push(Violation::BadLevelIndex {
                position: pos + 1,
                index: level.index,
            });
        }
        if level.vertices.is_empty() {
            out.push(Violation::EmptyLevel { level: pos + 1 });
        }
    }

    // Identifier uniqueness across the whole graph.
    let mut vertex_level: HashMap<&str, usize> = HashMap::new();
    let mut edge_level: HashMap<&str, usize> = HashMap::new();
    for (pos, level) in graph.levels.iter().enumerate() {
        for v in &level.vertices {
            if vertex_level.insert(v, pos + 1).is_some() {
                out.push(Violation::DuplicateVertex { vertex: v.clone() });
            }
        }
        for e in &level.edges {
            if edge_level.insert(&e.id, pos + 1).is_some() {
                out.push(Violation::DuplicateEdge { edge: e.id.clone() });
            }
        }
    }

    // Edge endpoints stay within their level.
    for (pos, level) in graph.levels.iter().enumerate() {
        for e in &level.edges {
            for v in [&e.tail, &e.head] {
                if vertex_level.get(v.as_str()) != Some(&(pos + 1)) {
                    out.push(Violation::UnknownEndpoint {
                        edge: e.id.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
    }

    let degree: HashMap<&str, usize> = {
        let mut d: HashMap<&str, usize> = vertex_level.keys().map(|v| (*v, 0)).collect();
        for (_, e) in graph.edges() {
            if let Some(c) = d.get_mut(e.tail.as_str()) {
                *c += 1;
            }
            if let Some(c) = d.get_mut(e.head.as_str()) {
                *c += 1;
            }
        }
        d
    };

    let mut cycle_seen: HashMap<&str, ()> = HashMap::new();
    // (level, role, edge) -> dart occurrences across cycles of that role.
    let mut coverage: HashMap<(usize, Role, &str), usize> = HashMap::new();
    let mut anchors: HashMap<&str, usize> = HashMap::new();

    for cycle in &graph.cycles {
        if cycle_seen.insert(&cycle.id, ()).is_some() {
            out.push(Violation::DuplicateCycle {
                cycle: cycle.id.clone(),
            });
        }
        if cycle.level == 1 && cycle.role == Role::Upper
            || cycle.level == n && cycle.role == Role::Lower
        {
            out.push(Violation::BoundaryRole {
                cycle: cycle.id.clone(),
            });
        }
        let level = match graph.level(cycle.level) {
            Some(level) => level,
            None => {
                out.push(Violation::UnknownCycleEdge {
                    cycle: cycle.id.clone(),
                    edge: String::from("<no such level>"),
                });
                continue;
            }
        };
        match &cycle.body {
            CycleBody::Point(anchor) => {
                if !level.vertices.iter().any(|v| v == anchor) {
                    out.push(Violation::UnknownAnchor {
                        cycle: cycle.id.clone(),
                        vertex: anchor.clone(),
                    });
                } else if degree.get(anchor.as_str()).copied().unwrap_or(0) != 0 {
                    out.push(Violation::AnchorNotIsolated {
                        cycle: cycle.id.clone(),
                        vertex: anchor.clone(),
                    });
                } else {
                    *anchors.entry(anchor).or_insert(0) += 1;
                }
            }
            CycleBody::Walk(body) => {
                let mut resolved = true;
                for dart in body {
                    if !level.edges.iter().any(|e| e.id == dart.edge) {
                        out.push(Violation::UnknownCycleEdge {
                            cycle: cycle.id.clone(),
                            edge: dart.edge.clone(),
                        });
                        resolved = false;
                    } else {
                        *coverage
                            .entry((cycle.level, cycle.role, dart.edge.as_str()))
                            .or_insert(0) += 1;
                    }
                }
                if resolved {
                    // Closed-walk check: the finish vertex of each dart is the
                    // start vertex of the next, cyclically.
                    let endpoint = |dart: &crate::model::Dart, start: bool| -> &str {
                        let e = level.edges.iter().find(|e| e.id == dart.edge).unwrap();
                        match (dart.dir, start) {
                            (Sign::Plus, true) | (Sign::Minus, false) => &e.tail,
                            (Sign::Plus, false) | (Sign::Minus, true) => &e.head,
                        }
                    };
                    for (i, dart) in body.iter().enumerate() {
                        let next = &body[(i + 1) % body.len()];
                        if endpoint(dart, false) != endpoint(next, true) {
                            out.push(Violation::BrokenWalk {
                                cycle: cycle.id.clone(),
                                position: i + 1,
                            });
                        }
                    }
                }
            }
        }
    }

    // Isolated vertices anchor exactly one point cycle.
    for (v, lv) in &vertex_level {
        let _ = lv;
        if degree.get(v).copied().unwrap_or(0) == 0 {
            let count = anchors.get(v).copied().unwrap_or(0);
            if count != 1 {
                out.push(Violation::IsolatedVertexCycles {
                    vertex: v.to_string(),
                    count,
                });
            }
        }
    }

    // Each edge exactly once per role on its own level.
    for (pos, level) in graph.levels.iter().enumerate() {
        for e in &level.edges {
            for role in [Role::Lower, Role::Upper] {
                let count = coverage
                    .get(&(pos + 1, role, e.id.as_str()))
                    .copied()
                    .unwrap_or(0);
                if count != 1 {
                    out.push(Violation::Coverage {
                        edge: e.id.clone(),
                        role,
                        count,
                    });
                }
            }
        }
    }

    for (v, d) in &degree {
        if d % 2 != 0 {
            out.push(Violation::OddDegree {
                vertex: v.to_string(),
                degree: *d,
            });
        }
    }

    // Pairings: a bijection between lower cycles of level i and upper cycles
    // of level i+1, for every boundary.
    let mut paired: HashMap<&str, usize> = HashMap::new();
    for p in &graph.pairings {
        let lower = graph.cycle(&p.lower);
        let upper = graph.cycle(&p.upper);
        for (id, c) in [(&p.lower, &lower), (&p.upper, &upper)] {
            if c.is_none() {
                out.push(Violation::UnknownPairingCycle {
                    cycle: (*id).clone(),
                });
            }
        }
        let (lower, upper) = match (lower, upper) {
            (Some(l), Some(u)) => (l, u),
            _ => continue,
        };
        if lower.role != Role::Lower || upper.role != Role::Upper || upper.level != lower.level + 1
        {
            out.push(Violation::MalformedPairing {
                lower: p.lower.clone(),
                upper: p.upper.clone(),
            });
        }
        for c in [lower, upper] {
            let seen = paired.entry(&c.id).or_insert(0);
            *seen += 1;
            if *seen == 2 {
                out.push(Violation::RepairedCycle {
                    cycle: c.id.clone(),
                });
            }
        }
    }
    for cycle in &graph.cycles {
        // Every lower cycle is the bottom of some cylinder, every upper cycle
        // the top of one; boundary-role violations are already reported above.
        let must_pair = match cycle.role {
            Role::Lower => cycle.level < n,
            Role::Upper => cycle.level > 1,
        };
        if must_pair && !paired.contains_key(cycle.id.as_str()) {
            out.push(Violation::UnpairedCycle {
                cycle: cycle.id.clone(),
            });
        }
    }

    ValidationReport { violations: out }
}

/// Shorthand used by operations with a validity precondition.
pub(crate) fn require_valid(graph: &DistinguishingGraph) -> crate::error::Result<()> {
    let report = validate(graph);
    if report.is_valid() {
        Ok(())
    } else {
        Err(crate::error::Error::Invalid(report))
    }
}
