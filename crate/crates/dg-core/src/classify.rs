//! The three relations on distinguishing graphs and their deciders.
//!
//! `find_isomorphism` is a backtracking search organized around cycles: once
//! any edge of a cycle is mapped, the image cycle and its alignment are
//! forced, so branching happens only when a fresh cycle is opened. The
//! exhaustive `oracle_isomorphic` enumerates every level-respecting vertex
//! and edge bijection with no invariant pruning; it exists solely to check
//! the search and must stay independent of it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    Cycle, CycleBody, Dart, DistinguishingGraph, Edge, LevelGraph, Pairing, Role, Sign,
};
use crate::surface::{is_connected, is_realizable};
use crate::transform::removable_vertex;
use crate::validate::require_valid;

/// Oriented conjugacy refines topological conjugacy, which refines
/// topological equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Relation {
    /// Conjugating homeomorphisms preserve the orientation of the surface:
    /// cycle traversals are preserved exactly.
    OrientedConjugacy,
    /// The value axis keeps its orientation; the surface homeomorphism may
    /// reverse cycles, coupled per cylinder.
    Conjugacy,
    /// Conjugacy of `f` with `g` or with `-g`.
    Equivalence,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::OrientedConjugacy => write!(f, "oriented-conjugate"),
            Relation::Conjugacy => write!(f, "conjugate"),
            Relation::Equivalence => write!(f, "equivalent"),
        }
    }
}

/// A verified isomorphism between two distinguishing graphs.
///
/// `edge_map` carries the direction sign `delta` of each edge image;
/// `cycle_map` carries the flip sign `rho` (`Minus` when the image cycle is
/// traversed in reverse). For a witness found against `negate(D2)` under
/// [`Relation::Equivalence`], `negated` is true and levels/roles are those of
/// the negated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, (String, Sign)>,
    pub cycle_map: BTreeMap<String, (String, Sign)>,
    pub negated: bool,
}

/// Turn the graph of `f` into the graph of `-f`: the level order reverses
/// and every cycle changes role; each cylinder keeps its two end cycles.
pub fn negate(graph: &DistinguishingGraph) -> DistinguishingGraph {
    let n = graph.level_count();
    let mut levels: Vec<LevelGraph> = graph
        .levels
        .iter()
        .map(|l| LevelGraph {
            index: n + 1 - l.index,
            vertices: l.vertices.clone(),
            edges: l.edges.clone(),
        })
        .collect();
    levels.sort_by_key(|l| l.index);
    let cycles = graph
        .cycles
        .iter()
        .map(|c| Cycle {
            id: c.id.clone(),
            level: n + 1 - c.level,
            role: match c.role {
                Role::Lower => Role::Upper,
                Role::Upper => Role::Lower,
            },
            body: c.body.clone(),
        })
        .collect();
    let pairings = graph
        .pairings
        .iter()
        .map(|p| Pairing {
            lower: p.upper.clone(),
            upper: p.lower.clone(),
        })
        .collect();
    DistinguishingGraph {
        levels,
        cycles,
        pairings,
    }
    .normalized()
}

/// Reverse every cycle traversal: the graph of `f` composed with an
/// orientation reversal of the surface. Levels, roles and pairings stay.
pub fn mirror(graph: &DistinguishingGraph) -> DistinguishingGraph {
    let mut g = graph.clone();
    for cycle in &mut g.cycles {
        if let CycleBody::Walk(body) = &mut cycle.body {
            body.reverse();
            for dart in body.iter_mut() {
                dart.dir = dart.dir.flip();
            }
        }
    }
    g
}

pub(crate) fn require_classifiable(graph: &DistinguishingGraph) -> Result<()> {
    require_valid(graph)?;
    if !is_connected(graph) {
        return Err(Error::NotConnected);
    }
    if !is_realizable(graph) {
        return Err(Error::NotRealizable);
    }
    if let Some((_, v)) = removable_vertex(graph) {
        return Err(Error::NotSmoothed(v));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Structure shared by the search.

struct Structure<'a> {
    graph: &'a DistinguishingGraph,
    edge: HashMap<&'a str, &'a Edge>,
    cycle: HashMap<&'a str, &'a Cycle>,
    /// edge id -> (cycle id, position) of its unique occurrence per role.
    occurrence: HashMap<(Role, &'a str), (&'a str, usize)>,
    /// cycle id -> id of its pairing partner.
    partner: HashMap<&'a str, &'a str>,
    /// point cycles by (level, role).
    points: HashMap<(usize, Role), Vec<&'a str>>,
}

impl<'a> Structure<'a> {
    fn new(graph: &'a DistinguishingGraph) -> Structure<'a> {
        let edge = graph.edges().map(|(_, e)| (e.id.as_str(), e)).collect();
        let cycle: HashMap<&str, &Cycle> =
            graph.cycles.iter().map(|c| (c.id.as_str(), c)).collect();
        let mut occurrence = HashMap::new();
        let mut points: HashMap<(usize, Role), Vec<&str>> = HashMap::new();
        for c in &graph.cycles {
            match &c.body {
                CycleBody::Point(_) => {
                    points.entry((c.level, c.role)).or_default().push(&c.id);
                }
                CycleBody::Walk(body) => {
                    for (i, dart) in body.iter().enumerate() {
                        occurrence.insert((c.role, dart.edge.as_str()), (c.id.as_str(), i));
                    }
                }
            }
        }
        let mut partner = HashMap::new();
        for p in &graph.pairings {
            partner.insert(p.lower.as_str(), p.upper.as_str());
            partner.insert(p.upper.as_str(), p.lower.as_str());
        }
        Structure {
            graph,
            edge,
            cycle,
            occurrence,
            partner,
            points,
        }
    }

    fn body(&self, id: &str) -> &'a [Dart] {
        self.cycle[id].body.darts()
    }
}

/// Cheap isomorphism invariants; equal multisets are necessary for any witness.
fn screen(a: &DistinguishingGraph, b: &DistinguishingGraph) -> bool {
    if a.level_count() != b.level_count() {
        return false;
    }
    let profile = |g: &DistinguishingGraph| {
        let mut degrees: Vec<(usize, usize)> =
            g.vertices().map(|(l, v)| (l, g.degree(v))).collect();
        degrees.sort_unstable();
        let mut cycles: Vec<(usize, Role, usize, bool)> = g
            .cycles
            .iter()
            .map(|c| (c.level, c.role, c.body.len(), c.body.is_point()))
            .collect();
        cycles.sort_unstable();
        let mut pair_lens: Vec<(usize, usize)> = g
            .pairings
            .iter()
            .map(|p| {
                (
                    g.cycle(&p.lower).unwrap().body.len(),
                    g.cycle(&p.upper).unwrap().body.len(),
                )
            })
            .collect();
        pair_lens.sort_unstable();
        (degrees, cycles, pair_lens)
    };
    profile(a) == profile(b)
}

#[derive(Clone, Default)]
struct State<'a> {
    vmap: HashMap<&'a str, &'a str>,
    vused: HashSet<&'a str>,
    emap: HashMap<&'a str, (&'a str, Sign)>,
    eused: HashSet<&'a str>,
    cmap: HashMap<&'a str, (&'a str, Sign)>,
    cused: HashSet<&'a str>,
    /// Cycle images forced by pairing propagation before any edge fixes them.
    required: HashMap<&'a str, &'a str>,
}

/// Alignment of one cycle pair: position `j` of the source body corresponds
/// to `shift + j` (rho = +) or `shift - j` (rho = -) of the target body.
#[derive(Clone, Copy)]
struct Alignment {
    rho: Sign,
    shift: usize,
}

impl Alignment {
    fn target_position(&self, j: usize, len: usize) -> usize {
        match self.rho {
            Sign::Plus => (self.shift + j) % len,
            Sign::Minus => (self.shift + len - j) % len,
        }
    }
}

struct Search<'a> {
    s1: Structure<'a>,
    s2: Structure<'a>,
    oriented: bool,
}

impl<'a> Search<'a> {
    fn map_vertex(state: &mut State<'a>, v1: &'a str, v2: &'a str) -> bool {
        match state.vmap.get(v1) {
            Some(&img) => img == v2,
            None => {
                if state.vused.contains(v2) {
                    return false;
                }
                state.vmap.insert(v1, v2);
                state.vused.insert(v2);
                true
            }
        }
    }

    fn map_edge(&self, state: &mut State<'a>, e1: &'a str, e2: &'a str, delta: Sign) -> bool {
        match state.emap.get(e1) {
            Some(&img) => img == (e2, delta),
            None => {
                if state.eused.contains(e2) {
                    return false;
                }
                let a = self.s1.edge[e1];
                let b = self.s2.edge[e2];
                let (t2, h2) = match delta {
                    Sign::Plus => (b.tail.as_str(), b.head.as_str()),
                    Sign::Minus => (b.head.as_str(), b.tail.as_str()),
                };
                if !Self::map_vertex(state, &a.tail, t2) || !Self::map_vertex(state, &a.head, h2) {
                    return false;
                }
                state.emap.insert(e1, (e2, delta));
                state.eused.insert(e2);
                true
            }
        }
    }

    /// Record `c1 -> c2` with the given alignment, mapping all edges and
    /// endpoints along the way and propagating the pairing correspondence.
    fn map_cycle(
        &self,
        state: &mut State<'a>,
        c1: &'a str,
        c2: &'a str,
        alignment: Alignment,
    ) -> bool {
        if state.cused.contains(c2) {
            return false;
        }
        if let Some(&req) = state.required.get(c1) {
            if req != c2 {
                return false;
            }
        }
        let cy1 = self.s1.cycle[c1];
        let cy2 = self.s2.cycle[c2];
        if cy1.level != cy2.level || cy1.role != cy2.role {
            return false;
        }
        match (&cy1.body, &cy2.body) {
            (CycleBody::Point(a1), CycleBody::Point(a2)) => {
                if !Self::map_vertex(state, a1, a2) {
                    return false;
                }
            }
            (CycleBody::Walk(b1), CycleBody::Walk(b2)) => {
                if b1.len() != b2.len() {
                    return false;
                }
                if self.oriented && alignment.rho == Sign::Minus {
                    return false;
                }
                for (j, dart) in b1.iter().enumerate() {
                    let target = &b2[alignment.target_position(j, b2.len())];
                    let delta = match alignment.rho {
                        Sign::Plus => dart.dir * target.dir,
                        Sign::Minus => (dart.dir * target.dir).flip(),
                    };
                    if !self.map_edge(state, &dart.edge, &target.edge, delta) {
                        return false;
                    }
                }
            }
            _ => return false,
        }
        state.cmap.insert(c1, (c2, alignment.rho));
        state.cused.insert(c2);

        // Pairing preservation: the partner of the image is the image of the
        // partner. Cycle flips couple across a cylinder whose ends are both
        // nonempty: a homeomorphism of an annulus reverses both boundary
        // circles or neither.
        let p1 = self.s1.partner[c1];
        let p2 = self.s2.partner[c2];
        match state.cmap.get(p1) {
            Some(&(img, partner_rho)) => {
                if img != p2 {
                    return false;
                }
                let both_walks =
                    !self.s1.cycle[c1].body.is_point() && !self.s1.cycle[p1].body.is_point();
                if both_walks && partner_rho != alignment.rho {
                    return false;
                }
            }
            None => match state.required.get(p1) {
                Some(&req) if req != p2 => return false,
                Some(_) => {}
                None => {
                    if state.cused.contains(p2) {
                        return false;
                    }
                    state.required.insert(p1, p2);
                }
            },
        }
        true
    }

    /// A cycle whose image and alignment are already forced by a mapped edge.
    fn forced_cycle(&self, state: &State<'a>) -> Option<(&'a str, &'a str, Alignment)> {
        for c in &self.s1.graph.cycles {
            if state.cmap.contains_key(c.id.as_str()) {
                continue;
            }
            let CycleBody::Walk(body) = &c.body else {
                continue;
            };
            for (j, dart) in body.iter().enumerate() {
                let Some(&(e2, delta)) = state.emap.get(dart.edge.as_str()) else {
                    continue;
                };
                let &(c2, pos2) = &self.s2.occurrence[&(c.role, e2)];
                let target = &self.s2.body(c2)[pos2];
                let len = body.len();
                if self.s2.body(c2).len() != len {
                    return Some((
                        c.id.as_str(),
                        c2,
                        Alignment {
                            rho: Sign::Plus,
                            shift: 0,
                        },
                    ));
                    // Length mismatch; map_cycle will reject it.
                }
                let image_dir = dart.dir * delta;
                let alignment = if image_dir == target.dir {
                    Alignment {
                        rho: Sign::Plus,
                        shift: (pos2 + len - j) % len,
                    }
                } else {
                    Alignment {
                        rho: Sign::Minus,
                        shift: (pos2 + j) % len,
                    }
                };
                return Some((c.id.as_str(), c2, alignment));
            }
        }
        None
    }

    fn run(&self, state: State<'a>) -> Option<State<'a>> {
        // Forced moves first: no branching.
        if let Some((c1, c2, alignment)) = self.forced_cycle(&state) {
            let mut next = state.clone();
            if self.map_cycle(&mut next, c1, c2, alignment) {
                return self.run(next);
            }
            return None;
        }

        // Next unmatched cycle, walks before points so forcing spreads.
        let pick = self
            .s1
            .graph
            .cycles
            .iter()
            .filter(|c| !state.cmap.contains_key(c.id.as_str()))
            .min_by_key(|c| (c.body.is_point(), c.level, c.role, c.id.as_str()));
        let Some(c1) = pick else {
            return Some(state); // everything matched
        };

        let candidates: Vec<&str> = match state.required.get(c1.id.as_str()) {
            Some(&req) => vec![req],
            None => match &c1.body {
                CycleBody::Point(_) => self.s2.points[&(c1.level, c1.role)]
                    .iter()
                    .copied()
                    .filter(|c2| !state.cused.contains(c2))
                    .collect(),
                CycleBody::Walk(_) => self
                    .s2
                    .graph
                    .cycles_at(c1.level, c1.role)
                    .filter(|c| !c.body.is_point() && !state.cused.contains(c.id.as_str()))
                    .map(|c| c.id.as_str())
                    .collect(),
            },
        };

        for c2 in candidates {
            let alignments: Vec<Alignment> = match &c1.body {
                CycleBody::Point(_) => vec![Alignment {
                    rho: Sign::Plus,
                    shift: 0,
                }],
                CycleBody::Walk(body) => {
                    let rhos: &[Sign] = if self.oriented {
                        &[Sign::Plus]
                    } else {
                        &[Sign::Plus, Sign::Minus]
                    };
                    rhos.iter()
                        .flat_map(|&rho| {
                            (0..body.len().max(1)).map(move |shift| Alignment { rho, shift })
                        })
                        .collect()
                }
            };
            for alignment in alignments {
                let mut next = state.clone();
                if self.map_cycle(&mut next, c1.id.as_str(), c2, alignment) {
                    if let Some(done) = self.run(next) {
                        return Some(done);
                    }
                }
            }
        }
        None
    }
}

fn conjugacy_witness(
    d1: &DistinguishingGraph,
    d2: &DistinguishingGraph,
    oriented: bool,
) -> Option<IsoWitness> {
    if !screen(d1, d2) {
        return None;
    }
    let search = Search {
        s1: Structure::new(d1),
        s2: Structure::new(d2),
        oriented,
    };
    let done = search.run(State::default())?;
    Some(IsoWitness {
        vertex_map: done
            .vmap
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        edge_map: done
            .emap
            .iter()
            .map(|(k, &(e, s))| (k.to_string(), (e.to_string(), s)))
            .collect(),
        cycle_map: done
            .cmap
            .iter()
            .map(|(k, &(c, s))| (k.to_string(), (c.to_string(), s)))
            .collect(),
        negated: false,
    })
}

/// Search for an isomorphism witnessing the relation. Both graphs must be
/// valid, connected, realizable and smoothed; violations are reported as
/// errors, never as a silent `None`.
pub fn find_isomorphism(
    d1: &DistinguishingGraph,
    d2: &DistinguishingGraph,
    relation: Relation,
) -> Result<Option<IsoWitness>> {
    require_classifiable(d1)?;
    require_classifiable(d2)?;
    match relation {
        Relation::OrientedConjugacy => Ok(conjugacy_witness(d1, d2, true)),
        Relation::Conjugacy => Ok(conjugacy_witness(d1, d2, false)),
        Relation::Equivalence => {
            if let Some(w) = conjugacy_witness(d1, d2, false) {
                return Ok(Some(w));
            }
            Ok(
                conjugacy_witness(d1, &negate(d2), false)
                    .map(|w| IsoWitness { negated: true, ..w }),
            )
        }
    }
}

pub fn are_related(
    d1: &DistinguishingGraph,
    d2: &DistinguishingGraph,
    relation: Relation,
) -> Result<bool> {
    Ok(find_isomorphism(d1, d2, relation)?.is_some())
}

// ---------------------------------------------------------------------------
// Exhaustive oracle.

const ORACLE_MAX_EDGES: usize = 12;
const ORACLE_MAX_VERTEX_MAPS: u64 = 2_000_000;

fn factorial_product(g: &DistinguishingGraph) -> u64 {
    g.levels
        .iter()
        .map(|l| (1..=l.vertices.len() as u64).product::<u64>())
        .fold(1u64, |acc, f| acc.saturating_mul(f))
}

fn revflip(body: &[Dart]) -> Vec<Dart> {
    body.iter().rev().map(Dart::flip).collect()
}

fn cyclic_equal(a: &[Dart], b: &[Dart]) -> bool {
    a.len() == b.len()
        && (a.is_empty()
            || (0..a.len()).any(|shift| (0..a.len()).all(|j| a[j] == b[(j + shift) % b.len()])))
}

/// Reference decider: enumerate all level-respecting vertex bijections and
/// all incidence-compatible edge bijections, then check the cycles and
/// pairings directly. No invariant pruning. Refuses oversized input.
pub fn oracle_isomorphic(
    d1: &DistinguishingGraph,
    d2: &DistinguishingGraph,
    relation: Relation,
) -> Result<bool> {
    for g in [d1, d2] {
        if g.edge_count() > ORACLE_MAX_EDGES {
            return Err(Error::OracleSize(format!(
                "{} edges exceeds the oracle bound of {ORACLE_MAX_EDGES}",
                g.edge_count()
            )));
        }
        if factorial_product(g) > ORACLE_MAX_VERTEX_MAPS {
            return Err(Error::OracleSize(
                "too many level-respecting vertex bijections".into(),
            ));
        }
    }
    require_classifiable(d1)?;
    require_classifiable(d2)?;
    match relation {
        Relation::OrientedConjugacy => Ok(oracle_conjugacy(d1, d2, true)),
        Relation::Conjugacy => Ok(oracle_conjugacy(d1, d2, false)),
        Relation::Equivalence => {
            Ok(oracle_conjugacy(d1, d2, false) || oracle_conjugacy(d1, &negate(d2), false))
        }
    }
}

fn oracle_conjugacy(d1: &DistinguishingGraph, d2: &DistinguishingGraph, oriented: bool) -> bool {
    if d1.level_count() != d2.level_count() {
        return false;
    }
    for (l1, l2) in d1.levels.iter().zip(&d2.levels) {
        if l1.vertices.len() != l2.vertices.len() || l1.edges.len() != l2.edges.len() {
            return false;
        }
    }

    let vertices1: Vec<(usize, &str)> = d1.vertices().collect();
    let mut vmap: HashMap<&str, &str> = HashMap::new();
    let mut vused: HashSet<&str> = HashSet::new();
    vertex_bijections(d2, &vertices1, 0, &mut vmap, &mut vused, &mut |vmap| {
        let edges1: Vec<(usize, &Edge)> = d1.edges().collect();
        let mut emap: EdgeMap = HashMap::new();
        let mut eused: HashSet<&str> = HashSet::new();
        edge_bijections(d2, &edges1, 0, vmap, &mut emap, &mut eused, &mut |emap| {
            check_cycles_and_pairings(d1, d2, vmap, emap, oriented)
        })
    })
}

fn vertex_bijections<'a>(
    d2: &'a DistinguishingGraph,
    vertices1: &[(usize, &'a str)],
    i: usize,
    vmap: &mut HashMap<&'a str, &'a str>,
    vused: &mut HashSet<&'a str>,
    found: &mut dyn FnMut(&HashMap<&'a str, &'a str>) -> bool,
) -> bool {
    let Some(&(level, v1)) = vertices1.get(i) else {
        return found(vmap);
    };
    let candidates: Vec<&str> = d2
        .level(level)
        .unwrap()
        .vertices
        .iter()
        .map(|s| s.as_str())
        .collect();
    for v2 in candidates {
        if vused.contains(v2) {
            continue;
        }
        vmap.insert(v1, v2);
        vused.insert(v2);
        if vertex_bijections(d2, vertices1, i + 1, vmap, vused, found) {
            return true;
        }
        vmap.remove(v1);
        vused.remove(v2);
    }
    false
}

type EdgeMap<'a> = HashMap<&'a str, (&'a str, Sign)>;

fn edge_bijections<'a>(
    d2: &'a DistinguishingGraph,
    edges1: &[(usize, &'a Edge)],
    i: usize,
    vmap: &HashMap<&'a str, &'a str>,
    emap: &mut EdgeMap<'a>,
    eused: &mut HashSet<&'a str>,
    found: &mut dyn FnMut(&EdgeMap<'a>) -> bool,
) -> bool {
    let Some(&(level, e1)) = edges1.get(i) else {
        return found(emap);
    };
    let (t, h) = (vmap[e1.tail.as_str()], vmap[e1.head.as_str()]);
    for e2 in &d2.level(level).unwrap().edges {
        if eused.contains(e2.id.as_str()) {
            continue;
        }
        let deltas: &[Sign] = if e1.is_loop() {
            if e2.is_loop() && e2.tail == t {
                &[Sign::Plus, Sign::Minus]
            } else {
                &[]
            }
        } else if e2.tail == t && e2.head == h {
            &[Sign::Plus]
        } else if e2.tail == h && e2.head == t {
            &[Sign::Minus]
        } else {
            &[]
        };
        for &delta in deltas {
            emap.insert(&e1.id, (&e2.id, delta));
            eused.insert(&e2.id);
            if edge_bijections(d2, edges1, i + 1, vmap, emap, eused, found) {
                return true;
            }
            emap.remove(e1.id.as_str());
            eused.remove(e2.id.as_str());
        }
    }
    false
}

fn check_cycles_and_pairings(
    d1: &DistinguishingGraph,
    d2: &DistinguishingGraph,
    vmap: &HashMap<&str, &str>,
    emap: &HashMap<&str, (&str, Sign)>,
    oriented: bool,
) -> bool {
    let mut cycle_map: HashMap<&str, (&str, Sign)> = HashMap::new();
    let mut used: HashSet<&str> = HashSet::new();
    for c1 in &d1.cycles {
        let image: Option<(&str, Sign)> = match &c1.body {
            CycleBody::Point(anchor) => d2
                .cycles
                .iter()
                .find(|c2| {
                    c2.level == c1.level
                        && c2.role == c1.role
                        && matches!(&c2.body, CycleBody::Point(a2) if a2 == vmap[anchor.as_str()])
                })
                .map(|c2| (c2.id.as_str(), Sign::Plus)),
            CycleBody::Walk(body) => {
                let image_body: Vec<Dart> = body
                    .iter()
                    .map(|d| {
                        let (e2, delta) = emap[d.edge.as_str()];
                        Dart::new(e2, d.dir * delta)
                    })
                    .collect();
                d2.cycles
                    .iter()
                    .filter(|c2| c2.level == c1.level && c2.role == c1.role)
                    .find_map(|c2| {
                        let b2 = c2.body.darts();
                        if cyclic_equal(&image_body, b2) {
                            Some((c2.id.as_str(), Sign::Plus))
                        } else if cyclic_equal(&image_body, &revflip(b2)) {
                            Some((c2.id.as_str(), Sign::Minus))
                        } else {
                            None
                        }
                    })
            }
        };
        match image {
            Some((c2, rho)) => {
                if oriented && rho == Sign::Minus {
                    return false;
                }
                if !used.insert(c2) {
                    return false;
                }
                cycle_map.insert(&c1.id, (c2, rho));
            }
            None => return false,
        }
    }
    if used.len() != d2.cycles.len() {
        return false;
    }

    let pairs2: HashSet<(&str, &str)> = d2
        .pairings
        .iter()
        .map(|p| (p.lower.as_str(), p.upper.as_str()))
        .collect();
    for p1 in &d1.pairings {
        let (lo, rho_lo) = cycle_map[p1.lower.as_str()];
        let (up, rho_up) = cycle_map[p1.upper.as_str()];
        if !pairs2.contains(&(lo, up)) {
            return false;
        }
        let both_walks = !d1.cycle(&p1.lower).unwrap().body.is_point()
            && !d1.cycle(&p1.upper).unwrap().body.is_point();
        if both_walks && rho_lo != rho_up {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transform::{smooth, subdivide_loops};
    use crate::validate::validate;

    fn all_relations() -> [Relation; 3] {
        [
            Relation::OrientedConjugacy,
            Relation::Conjugacy,
            Relation::Equivalence,
        ]
    }

    /// Re-verify a returned witness from its maps alone.
    fn check_witness(d1: &DistinguishingGraph, d2: &DistinguishingGraph, w: &IsoWitness) {
        let d2 = if w.negated { negate(d2) } else { d2.clone() };
        // Bijections of the right sizes.
        assert_eq!(w.vertex_map.len(), d1.vertex_count());
        assert_eq!(w.edge_map.len(), d1.edge_count());
        assert_eq!(w.cycle_map.len(), d1.cycles.len());
        let images: HashSet<&String> = w.vertex_map.values().collect();
        assert_eq!(images.len(), d2.vertex_count());

        // Levels and incidence, with delta swapping endpoints.
        for (v1, v2) in &w.vertex_map {
            let l1 = d1.vertices().find(|(_, v)| v == v1).unwrap().0;
            let l2 = d2.vertices().find(|(_, v)| v == v2).unwrap().0;
            assert_eq!(l1, l2);
        }
        let edge2: HashMap<&str, &Edge> = d2.edges().map(|(_, e)| (e.id.as_str(), e)).collect();
        for (l1, e1) in d1.edges() {
            let (id2, delta) = &w.edge_map[&e1.id];
            let e2 = edge2[id2.as_str()];
            let l2 = d2.edges().find(|(_, e)| &e.id == id2).unwrap().0;
            assert_eq!(l1, l2);
            let (t2, h2) = match delta {
                Sign::Plus => (&e2.tail, &e2.head),
                Sign::Minus => (&e2.head, &e2.tail),
            };
            assert_eq!(&w.vertex_map[&e1.tail], t2);
            assert_eq!(&w.vertex_map[&e1.head], h2);
        }

        // Cycle bodies align under rho, roles and levels preserved.
        for c1 in &d1.cycles {
            let (id2, rho) = &w.cycle_map[&c1.id];
            let c2 = d2.cycle(id2).unwrap();
            assert_eq!((c1.level, c1.role), (c2.level, c2.role));
            match (&c1.body, &c2.body) {
                (CycleBody::Point(a1), CycleBody::Point(a2)) => {
                    assert_eq!(&w.vertex_map[a1], a2);
                }
                (CycleBody::Walk(b1), CycleBody::Walk(b2)) => {
                    let image: Vec<Dart> = b1
                        .iter()
                        .map(|d| {
                            let (e2, delta) = &w.edge_map[&d.edge];
                            Dart::new(e2.clone(), d.dir * *delta)
                        })
                        .collect();
                    let target = if rho.is_plus() {
                        b2.clone()
                    } else {
                        revflip(b2)
                    };
                    assert!(cyclic_equal(&image, &target), "cycle {} misaligned", c1.id);
                }
                _ => panic!("point mapped to walk"),
            }
        }

        // Pairings preserved, flips coupled on doubly-nonempty cylinders.
        let pairs2: HashSet<(&str, &str)> = d2
            .pairings
            .iter()
            .map(|p| (p.lower.as_str(), p.upper.as_str()))
            .collect();
        for p1 in &d1.pairings {
            let (lo, rho_lo) = &w.cycle_map[&p1.lower];
            let (up, rho_up) = &w.cycle_map[&p1.upper];
            assert!(pairs2.contains(&(lo.as_str(), up.as_str())));
            let both_walks = !d1.cycle(&p1.lower).unwrap().body.is_point()
                && !d1.cycle(&p1.upper).unwrap().body.is_point();
            if both_walks {
                assert_eq!(rho_lo, rho_up);
            }
        }
    }

    #[test]
    fn witnesses_verify_mechanically() {
        let cases = [
            (
                fixtures::torus(),
                mirror(&fixtures::torus()),
                Relation::Conjugacy,
            ),
            (
                fixtures::morse_torus(),
                fixtures::morse_torus(),
                Relation::OrientedConjugacy,
            ),
            (
                crate::word::word_to_graph(&crate::word::SignedWord::parse("acebd").unwrap()),
                crate::word::word_to_graph(&crate::word::SignedWord::parse("adbec").unwrap()),
                Relation::Equivalence,
            ),
            (
                fixtures::asymmetric_tubes(),
                fixtures::asymmetric_tubes(),
                Relation::Conjugacy,
            ),
        ];
        for (d1, d2, rel) in &cases {
            let witness = find_isomorphism(d1, d2, *rel).unwrap().expect("related");
            if *rel == Relation::OrientedConjugacy {
                assert!(witness.cycle_map.values().all(|(_, rho)| rho.is_plus()));
            }
            check_witness(d1, d2, &witness);
        }
    }

    #[test]
    fn oracle_agrees_on_the_genus_two_word_set() {
        let words = crate::word::generate_words(crate::word::SurfaceSpec::orientable(2)).unwrap();
        let graphs: Vec<DistinguishingGraph> = words
            .iter()
            .filter(|w| crate::word::word_planar(w))
            .map(crate::word::word_to_graph)
            .collect();
        assert_eq!(graphs.len(), 8); // four classes, eight spellings
        for a in &graphs {
            for b in &graphs {
                for rel in all_relations() {
                    assert_eq!(
                        are_related(a, b, rel).unwrap(),
                        oracle_isomorphic(a, b, rel).unwrap(),
                        "{rel}"
                    );
                }
            }
        }
    }

    #[test]
    fn negate_preserves_validity_and_is_involutive() {
        for g in [
            fixtures::sphere(),
            fixtures::torus(),
            fixtures::asymmetric_tubes(),
        ] {
            let n = negate(&g);
            assert!(validate(&n).is_valid(), "{}", validate(&n));
            assert_eq!(negate(&n), g);
        }
    }

    #[test]
    fn mirror_preserves_validity_and_is_involutive() {
        for g in [
            fixtures::torus(),
            fixtures::klein_bottle(),
            fixtures::morse_torus(),
        ] {
            let m = mirror(&g);
            assert!(validate(&m).is_valid());
            assert_eq!(mirror(&m), g);
        }
    }

    #[test]
    fn identity_witness_exists() {
        let t = fixtures::torus();
        let w = find_isomorphism(&t, &t, Relation::OrientedConjugacy)
            .unwrap()
            .unwrap();
        assert!(!w.negated);
        assert!(w.cycle_map.values().all(|(_, rho)| rho.is_plus()));
    }

    #[test]
    fn torus_is_conjugate_to_its_mirror() {
        let t = fixtures::torus();
        let m = mirror(&t);
        assert!(are_related(&t, &m, Relation::Conjugacy).unwrap());
        assert!(oracle_isomorphic(&t, &m, Relation::Conjugacy).unwrap());
    }

    #[test]
    fn sphere_vs_torus_not_equivalent() {
        let s = fixtures::sphere();
        let t = fixtures::torus();
        assert!(!are_related(&s, &t, Relation::Equivalence).unwrap());
    }

    #[test]
    fn negation_keeps_extremum_swaps_conjugate() {
        let s = fixtures::sphere();
        assert!(oracle_isomorphic(&s, &negate(&s), Relation::OrientedConjugacy).unwrap());
        let t = fixtures::torus();
        assert!(are_related(&t, &negate(&t), Relation::Conjugacy).unwrap());
    }

    #[test]
    fn equivalence_via_negation_is_tagged() {
        // acebd and adbec are equivalent through -g only.
        let a = crate::word::word_to_graph(&crate::word::SignedWord::parse("acebd").unwrap());
        let b = crate::word::word_to_graph(&crate::word::SignedWord::parse("adbec").unwrap());
        assert!(!are_related(&a, &b, Relation::Conjugacy).unwrap());
        let witness = find_isomorphism(&a, &b, Relation::Equivalence)
            .unwrap()
            .unwrap();
        assert!(witness.negated);
        // Distinct conjugacy classes stay distinct.
        let c = crate::word::word_to_graph(&crate::word::SignedWord::parse("acbed").unwrap());
        let d = crate::word::word_to_graph(&crate::word::SignedWord::parse("aedcb").unwrap());
        assert!(!are_related(&c, &d, Relation::Conjugacy).unwrap());
    }

    #[test]
    fn subdivided_torus_smooths_back_to_torus() {
        let t = fixtures::torus();
        let s = smooth(&subdivide_loops(&t));
        assert!(are_related(&t, &s, Relation::OrientedConjugacy).unwrap());
        assert!(oracle_isomorphic(&t, &s, Relation::OrientedConjugacy).unwrap());
    }

    #[test]
    fn smoothedness_is_a_precondition() {
        let t = subdivide_loops(&fixtures::torus());
        assert!(matches!(
            find_isomorphism(&t, &t, Relation::Conjugacy),
            Err(Error::NotSmoothed(_))
        ));
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let d = fixtures::double_sphere();
        assert!(matches!(
            are_related(&d, &d, Relation::Conjugacy),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn redirected_pairing_breaks_every_relation() {
        let g = fixtures::asymmetric_tubes();
        let mut redirected = g.clone();
        // Swap the two middle cylinders: now a length-1 cycle caps a
        // length-2 cycle.
        for p in &mut redirected.pairings {
            if p.lower == "la" {
                p.upper = "ude".into();
            } else if p.lower == "lbx" {
                p.upper = "uc".into();
            }
        }
        let redirected = redirected.normalized();
        assert!(validate(&redirected).is_valid());
        for rel in all_relations() {
            assert!(!are_related(&g, &redirected, rel).unwrap(), "{rel}");
            assert!(!oracle_isomorphic(&g, &redirected, rel).unwrap(), "{rel}");
        }
    }

    #[test]
    fn morse_torus_and_twisted_tube_differ() {
        let t = fixtures::morse_torus();
        let k = fixtures::klein_four_level();
        for rel in all_relations() {
            assert!(!are_related(&t, &k, rel).unwrap(), "{rel}");
            assert!(!oracle_isomorphic(&t, &k, rel).unwrap(), "{rel}");
        }
        // Flipping BOTH ends of one middle cylinder is a legal presentation
        // change of the same surface: still the torus.
        let mut both = t.clone();
        for c in &mut both.cycles {
            if c.id == "la" || c.id == "uc" {
                if let CycleBody::Walk(body) = &mut c.body {
                    *body = revflip(body);
                }
            }
        }
        let both = both.normalized();
        assert!(validate(&both).is_valid());
        assert!(are_related(&t, &both, Relation::Conjugacy).unwrap());
        assert!(oracle_isomorphic(&t, &both, Relation::Conjugacy).unwrap());
        // Oriented conjugacy forbids the flip.
        assert!(!are_related(&t, &both, Relation::OrientedConjugacy).unwrap());
    }

    #[test]
    fn oracle_refuses_oversized_input() {
        // 13 loops at one vertex; the guard fires before any precondition.
        let mut b = crate::model::GraphBuilder::new(3);
        b.vertex(1, "bot")
            .point_cycle(1, "cmin", Role::Lower, "bot");
        b.vertex(2, "v");
        let names: Vec<String> = (0..13).map(|i| format!("e{i:02}")).collect();
        for n in &names {
            b.edge(2, n.clone(), "v", "v");
        }
        b.cycle(
            2,
            "lo",
            Role::Lower,
            names.iter().map(|n| (n.as_str(), Sign::Plus)),
        );
        b.cycle(
            2,
            "up",
            Role::Upper,
            names.iter().map(|n| (n.as_str(), Sign::Plus)),
        );
        b.vertex(3, "top")
            .point_cycle(3, "cmax", Role::Upper, "top");
        b.pair("cmin", "up").pair("lo", "cmax");
        let g = b.build();
        assert!(validate(&g).is_valid());
        assert!(matches!(
            oracle_isomorphic(&g, &g, Relation::Conjugacy),
            Err(Error::OracleSize(_))
        ));
    }
}
