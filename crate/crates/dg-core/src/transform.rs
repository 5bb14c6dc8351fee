//! Presentation transforms: smoothing away removable degree-2 vertices and
//! subdividing loops.
//!
//! Both are homeomorphism-level no-ops: Euler characteristic, orientability,
//! realizability, connectivity and all the classification relations are
//! unchanged. `smooth` produces the canonical presentation the classifiers
//! expect; `subdivide_loops` exists to obtain a loop-free presentation.

use std::collections::HashSet;

use crate::local::ends_at;
use crate::model::{CycleBody, Dart, DistinguishingGraph, Edge, Sign};

/// A degree-2 vertex is removable when its two ends belong to two distinct
/// edges. The sole vertex of a bare circle (one loop) is not removable: every
/// circle of a level set keeps one selected point.
pub(crate) fn removable_vertex(graph: &DistinguishingGraph) -> Option<(usize, String)> {
    for (level, v) in graph.vertices() {
        if graph.degree(v) != 2 {
            continue;
        }
        let ends = ends_at(graph, v);
        if ends[0].edge != ends[1].edge {
            return Some((level, v.to_string()));
        }
    }
    None
}

/// True when `smooth` would leave the graph unchanged.
pub fn is_smoothed(graph: &DistinguishingGraph) -> bool {
    removable_vertex(graph).is_none()
}

/// Remove every removable degree-2 vertex by merging its two edges into one,
/// splicing all cycle occurrences. Idempotent; already-smooth graphs are
/// returned unchanged, identifier for identifier.
pub fn smooth(graph: &DistinguishingGraph) -> DistinguishingGraph {
    let mut g = graph.clone();
    while let Some((level_ix, v)) = removable_vertex(&g) {
        let ends = ends_at(&g, &v);
        // Merged edge keeps the first edge's id and runs from the far
        // endpoint of the first edge to the far endpoint of the second.
        let (kept, dropped) = (ends[0].edge.clone(), ends[1].edge.clone());
        let level = &g.levels[level_ix - 1];
        let e1 = level.edges.iter().find(|e| e.id == kept).unwrap().clone();
        let e2 = level
            .edges
            .iter()
            .find(|e| e.id == dropped)
            .unwrap()
            .clone();
        let tail = e1.opposite(&v).to_string();
        let head = e2.opposite(&v).to_string();

        for cycle in &mut g.cycles {
            let CycleBody::Walk(body) = &mut cycle.body else {
                continue;
            };
            if !body.iter().any(|d| d.edge == kept) {
                continue;
            }
            // Exactly one passage through v: the darts over e1 and e2 are
            // cyclically adjacent there. Find the dart that finishes at v.
            let len = body.len();
            let finishes_at_v = |d: &Dart| -> bool {
                let e = if d.edge == kept { &e1 } else { &e2 };
                let finish = if d.dir == Sign::Plus {
                    &e.head
                } else {
                    &e.tail
                };
                (d.edge == kept || d.edge == dropped) && finish == &v
            };
            let i = (0..len)
                .find(|&i| {
                    finishes_at_v(&body[i])
                        && (body[(i + 1) % len].edge == kept || body[(i + 1) % len].edge == dropped)
                })
                .expect("valid graph: cycle through a degree-2 vertex passes it once");
            // Entering along e1 gives the merged tail->head traversal.
            let dir = if body[i].edge == kept {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let merged = Dart::new(kept.clone(), dir);
            let replaced: Vec<Dart> = body
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != (i + 1) % len)
                .map(|(j, dart)| if j == i { merged.clone() } else { dart.clone() })
                .collect();
            *body = replaced;
        }

        let level = &mut g.levels[level_ix - 1];
        level.vertices.retain(|u| u != &v);
        level.edges.retain(|e| e.id != kept && e.id != dropped);
        level.edges.push(Edge::new(kept, tail, head));
        g.normalize();
    }
    g
}

fn fresh(base: String, used: &mut HashSet<String>) -> String {
    let mut candidate = base.clone();
    let mut n = 1;
    while !used.insert(candidate.clone()) {
        n += 1;
        candidate = format!("{base}{n}");
    }
    candidate
}

/// Replace every loop by two edges through a fresh degree-2 vertex. The
/// result is loop-free and `smooth(subdivide_loops(g))` is isomorphic to
/// `smooth(g)`.
pub fn subdivide_loops(graph: &DistinguishingGraph) -> DistinguishingGraph {
    let mut g = graph.clone();
    let mut vertex_names: HashSet<String> = g.vertices().map(|(_, v)| v.to_string()).collect();
    let mut edge_names: HashSet<String> = g.edges().map(|(_, e)| e.id.clone()).collect();

    let loops: Vec<(usize, Edge)> = g
        .edges()
        .filter(|(_, e)| e.is_loop())
        .map(|(l, e)| (l, e.clone()))
        .collect();
    for (level_ix, e) in loops {
        let midpoint = fresh(format!("{}_m", e.id), &mut vertex_names);
        let first = fresh(format!("{}_1", e.id), &mut edge_names);
        let second = fresh(format!("{}_2", e.id), &mut edge_names);

        for cycle in &mut g.cycles {
            let CycleBody::Walk(body) = &mut cycle.body else {
                continue;
            };
            let mut replaced = Vec::with_capacity(body.len() + 1);
            for dart in body.iter() {
                if dart.edge != e.id {
                    replaced.push(dart.clone());
                } else if dart.dir == Sign::Plus {
                    replaced.push(Dart::new(first.clone(), Sign::Plus));
                    replaced.push(Dart::new(second.clone(), Sign::Plus));
                } else {
                    replaced.push(Dart::new(second.clone(), Sign::Minus));
                    replaced.push(Dart::new(first.clone(), Sign::Minus));
                }
            }
            *body = replaced;
        }

        let level = &mut g.levels[level_ix - 1];
        level.edges.retain(|other| other.id != e.id);
        level
            .edges
            .push(Edge::new(first, e.tail.clone(), midpoint.clone()));
        level
            .edges
            .push(Edge::new(second, midpoint.clone(), e.head.clone()));
        level.vertices.push(midpoint);
    }
    g.normalize();
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{darts, GraphBuilder, Role};
    use crate::surface::{euler_characteristic, orientation_assignment, surface_report};
    use crate::validate::validate;

    #[test]
    fn smooth_is_identity_on_smooth_graphs() {
        for g in [
            fixtures::sphere(),
            fixtures::torus(),
            fixtures::morse_torus(),
        ] {
            assert_eq!(smooth(&g), g);
        }
    }

    #[test]
    fn subdivision_of_torus_has_four_vertices_six_edges() {
        let t = fixtures::torus();
        let s = subdivide_loops(&t);
        assert!(validate(&s).is_valid(), "{}", validate(&s));
        assert!(s.edges().all(|(_, e)| !e.is_loop()));
        // The bouquet level becomes 4 vertices and 6 edges.
        assert_eq!(s.level(2).unwrap().vertices.len(), 4);
        assert_eq!(s.level(2).unwrap().edges.len(), 6);
        assert_eq!(s.vertex_count(), 6); // plus the two extrema
        assert_eq!(s.edge_count(), 6);
        assert_eq!(euler_characteristic(&s), euler_characteristic(&t));
        assert_eq!(smooth(&s).vertex_count(), t.vertex_count());
        assert_eq!(smooth(&s).edge_count(), t.edge_count());
    }

    #[test]
    fn subdivide_is_identity_without_loops() {
        let s = fixtures::sphere();
        assert_eq!(subdivide_loops(&s), s);
        let t = subdivide_loops(&fixtures::torus());
        assert_eq!(subdivide_loops(&t), t);
    }

    #[test]
    fn circle_component_keeps_one_vertex() {
        // A 3-vertex circle at level 2 between two extrema of a sphere plus
        // an annular band: min, circle, max with the circle as both cycles.
        let mut b = GraphBuilder::new(3);
        b.vertex(1, "m").point_cycle(1, "cmin", Role::Lower, "m");
        b.vertex(2, "p").vertex(2, "q").vertex(2, "r");
        b.edge(2, "e1", "p", "q")
            .edge(2, "e2", "q", "r")
            .edge(2, "e3", "r", "p");
        b.cycle(2, "up", Role::Upper, darts("e1+ e2+ e3+"));
        b.cycle(2, "lo", Role::Lower, darts("e1+ e2+ e3+"));
        b.vertex(3, "M").point_cycle(3, "cmax", Role::Upper, "M");
        b.pair("cmin", "up").pair("lo", "cmax");
        let g = b.build();
        assert!(validate(&g).is_valid());

        let s = smooth(&g);
        assert!(validate(&s).is_valid(), "{}", validate(&s));
        assert_eq!(s.vertex_count(), 3); // m, M and one circle vertex
        assert_eq!(s.edge_count(), 1);
        assert!(s.edges().all(|(_, e)| e.is_loop()));
        assert_eq!(smooth(&s), s);
        assert_eq!(euler_characteristic(&s), 2);
    }

    #[test]
    fn invariants_survive_smooth_and_subdivide() {
        for g in [
            fixtures::torus(),
            fixtures::projective_plane(),
            fixtures::morse_torus(),
            fixtures::klein_four_level(),
        ] {
            let before = surface_report(&g).unwrap();
            for h in [smooth(&subdivide_loops(&g)), subdivide_loops(&g)] {
                assert!(validate(&h).is_valid());
                let after = surface_report(&h).unwrap();
                assert_eq!(before.euler_characteristic, after.euler_characteristic);
                assert_eq!(before.orientable, after.orientable);
                assert_eq!(before.realizable, after.realizable);
                assert_eq!(before.genus, after.genus);
                assert_eq!(before.connected, after.connected);
            }
        }
        // Orientation survives with the twist intact.
        let k = subdivide_loops(&fixtures::klein_four_level());
        assert_eq!(orientation_assignment(&k).unwrap(), None);
    }
}
