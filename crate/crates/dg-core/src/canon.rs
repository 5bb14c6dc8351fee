//! Canonical keys: a byte string equal for two graphs exactly when they are
//! related, computed as the lexicographic minimum of a structural encoding
//! over every presentation the relation admits.
//!
//! The encoding streams the cycles level by level (lower block, then upper
//! block), naming vertices and edges by first use, so renaming freedom
//! disappears; the only search dimensions are the order of cycles within a
//! block, the starting dart of each cycle, and — for plain conjugacy — the
//! per-cycle flip, coupled across cylinders with two nonempty ends. Edge
//! direction is normalized greedily: the first presented occurrence of every
//! edge reads positive, which is lexicographically optimal because the
//! direction byte precedes everything it influences.
//!
//! Encoding (big-endian u16 tokens):
//!   [n] then per level [lower-count][upper-count]
//!   blocks in order; point cycle: [0][vertex]
//!                    walk cycle:  [1][len] ([edge][dir] [tail][head]?)*
//!                    (endpoints only on the edge's first occurrence)
//!   then per boundary, for each lower cycle in emission order, the
//!   in-block index of its pairing partner.

use std::collections::HashMap;

use crate::classify::{negate, require_classifiable, Relation};
use crate::error::Result;
use crate::model::{Cycle, CycleBody, DistinguishingGraph, Edge, GraphBuilder, Role, Sign};

/// The key together with the relabeled graph that realizes it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: Vec<u8>,
    pub graph: DistinguishingGraph,
}

pub fn canonical_key(graph: &DistinguishingGraph, relation: Relation) -> Result<Vec<u8>> {
    Ok(canonical_form(graph, relation)?.key)
}

/// Minimal presentation of `graph` under the given relation. Requires a
/// valid, connected, realizable, smoothed graph.
pub fn canonical_form(graph: &DistinguishingGraph, relation: Relation) -> Result<CanonicalForm> {
    require_classifiable(graph)?;
    match relation {
        Relation::OrientedConjugacy => Ok(minimize(graph, true)),
        Relation::Conjugacy => Ok(minimize(graph, false)),
        Relation::Equivalence => {
            let direct = minimize(graph, false);
            let negated = minimize(&negate(graph), false);
            Ok(if direct.key <= negated.key {
                direct
            } else {
                negated
            })
        }
    }
}

const POINT: u16 = 0;
const WALK: u16 = 1;

#[derive(Clone, Default)]
struct State<'a> {
    stream: Vec<u8>,
    vertex_num: HashMap<&'a str, u16>,
    /// Edge number and direction normalization from the first occurrence.
    edge_num: HashMap<&'a str, (u16, Sign)>,
    /// (cycle, rho, shift) in global emission order.
    order: Vec<(&'a str, Sign, usize)>,
    in_block: HashMap<&'a str, u16>,
}

impl<'a> State<'a> {
    fn push(&mut self, token: u16) {
        self.stream.extend_from_slice(&token.to_be_bytes());
    }

    fn vertex_token(&mut self, v: &'a str) -> u16 {
        let next = self.vertex_num.len() as u16;
        *self.vertex_num.entry(v).or_insert(next)
    }
}

struct Canon<'a> {
    graph: &'a DistinguishingGraph,
    oriented: bool,
    blocks: Vec<Vec<&'a Cycle>>,
    partner: HashMap<&'a str, &'a str>,
    cycle: HashMap<&'a str, &'a Cycle>,
    edge: HashMap<&'a str, &'a Edge>,
    best: Option<State<'a>>,
}

fn minimize(graph: &DistinguishingGraph, oriented: bool) -> CanonicalForm {
    let n = graph.level_count();
    let mut blocks = Vec::with_capacity(2 * n);
    for level in 1..=n {
        for role in [Role::Lower, Role::Upper] {
            blocks.push(graph.cycles_at(level, role).collect::<Vec<_>>());
        }
    }
    let mut partner = HashMap::new();
    for p in &graph.pairings {
        partner.insert(p.lower.as_str(), p.upper.as_str());
        partner.insert(p.upper.as_str(), p.lower.as_str());
    }
    let mut canon = Canon {
        graph,
        oriented,
        blocks,
        partner,
        cycle: graph.cycles.iter().map(|c| (c.id.as_str(), c)).collect(),
        edge: graph.edges().map(|(_, e)| (e.id.as_str(), e)).collect(),
        best: None,
    };

    let mut state = State::default();
    state.push(n as u16);
    for level in 1..=n {
        state.push(graph.cycles_at(level, Role::Lower).count() as u16);
        state.push(graph.cycles_at(level, Role::Upper).count() as u16);
    }
    let first_block: Vec<&Cycle> = canon.blocks[0].clone();
    canon.emit_block(state, 0, first_block);

    let best = canon.best.expect("at least one presentation exists");
    let graph = rebuild(graph, &best);
    CanonicalForm {
        key: best.stream,
        graph,
    }
}

impl<'a> Canon<'a> {
    /// Lexicographic viability of a partial stream against the current best.
    fn viable(&self, stream: &[u8]) -> bool {
        match &self.best {
            None => true,
            Some(best) => {
                let len = stream.len().min(best.stream.len());
                stream[..len] <= best.stream[..len]
            }
        }
    }

    fn emit_block(&mut self, state: State<'a>, block_ix: usize, remaining: Vec<&'a Cycle>) {
        if !self.viable(&state.stream) {
            return;
        }
        if remaining.is_empty() {
            match self.blocks.get(block_ix + 1) {
                Some(next) => {
                    let next = next.clone();
                    self.emit_block(state, block_ix + 1, next);
                }
                None => self.finish(state),
            }
            return;
        }
        let index_in_block = (self.blocks[block_ix].len() - remaining.len()) as u16;
        for (i, cycle) in remaining.iter().enumerate() {
            let rest: Vec<&Cycle> = remaining
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| *c)
                .collect();
            match &cycle.body {
                CycleBody::Point(anchor) => {
                    let mut st = state.clone();
                    st.push(POINT);
                    let tok = st.vertex_token(anchor);
                    st.push(tok);
                    st.order.push((&cycle.id, Sign::Plus, 0));
                    st.in_block.insert(&cycle.id, index_in_block);
                    self.emit_block(st, block_ix, rest.clone());
                }
                CycleBody::Walk(body) => {
                    let rhos: &[Sign] = if self.oriented {
                        &[Sign::Plus]
                    } else {
                        // A cylinder with two nonempty ends flips as a whole;
                        // the lower end is always emitted first.
                        let partner = self.cycle[self.partner[cycle.id.as_str()]];
                        match state
                            .order
                            .iter()
                            .find(|(c, _, _)| *c == partner.id.as_str())
                        {
                            Some(&(_, rho, _)) if !partner.body.is_point() => {
                                if rho == Sign::Plus {
                                    &[Sign::Plus]
                                } else {
                                    &[Sign::Minus]
                                }
                            }
                            _ => &[Sign::Plus, Sign::Minus],
                        }
                    };
                    for &rho in rhos {
                        for shift in 0..body.len() {
                            let mut st = state.clone();
                            self.emit_walk(&mut st, cycle, rho, shift);
                            st.in_block.insert(&cycle.id, index_in_block);
                            if self.viable(&st.stream) {
                                self.emit_block(st, block_ix, rest.clone());
                            }
                        }
                    }
                }
            }
        }
    }

    fn emit_walk(&self, st: &mut State<'a>, cycle: &'a Cycle, rho: Sign, shift: usize) {
        let body = cycle.body.darts();
        let len = body.len();
        st.push(WALK);
        st.push(len as u16);
        for j in 0..len {
            let position = match rho {
                Sign::Plus => (shift + j) % len,
                Sign::Minus => (shift + len - j) % len,
            };
            let dart = &body[position];
            let dir = match rho {
                Sign::Plus => dart.dir,
                Sign::Minus => dart.dir.flip(),
            };
            match st.edge_num.get(dart.edge.as_str()) {
                Some(&(num, delta)) => {
                    st.push(num);
                    st.push(if (dir * delta).is_plus() { 0 } else { 1 });
                }
                None => {
                    let num = st.edge_num.len() as u16;
                    // Normalize the edge direction to the first traversal.
                    st.edge_num.insert(&dart.edge, (num, dir));
                    st.push(num);
                    st.push(0);
                    let e = self.edge[dart.edge.as_str()];
                    let (start, finish) = match dir {
                        Sign::Plus => (e.tail.as_str(), e.head.as_str()),
                        Sign::Minus => (e.head.as_str(), e.tail.as_str()),
                    };
                    let tok = st.vertex_token(start);
                    st.push(tok);
                    let tok = st.vertex_token(finish);
                    st.push(tok);
                }
            }
        }
        st.order.push((&cycle.id, rho, shift));
    }

    fn finish(&mut self, mut state: State<'a>) {
        for level in 1..self.graph.level_count() {
            for &(id, _, _) in state.order.clone().iter() {
                let cycle = self.cycle[id];
                if cycle.level == level && cycle.role == Role::Lower {
                    let partner = self.partner[id];
                    let token = state.in_block[partner];
                    state.push(token);
                }
            }
        }
        let better = match &self.best {
            None => true,
            Some(best) => state.stream < best.stream,
        };
        if better {
            self.best = Some(state);
        }
    }
}

/// Materialize the winning presentation with canonical names: vertices and
/// edges by first use, cycles by emission order.
fn rebuild(graph: &DistinguishingGraph, best: &State<'_>) -> DistinguishingGraph {
    let vertex_name: HashMap<&str, String> = best
        .vertex_num
        .iter()
        .map(|(v, n)| (*v, format!("v{}", n + 1)))
        .collect();
    let edge_name: HashMap<&str, String> = best
        .edge_num
        .iter()
        .map(|(e, (n, _))| (*e, format!("e{}", n + 1)))
        .collect();
    let cycle_name: HashMap<&str, String> = best
        .order
        .iter()
        .enumerate()
        .map(|(i, (c, _, _))| (*c, format!("c{}", i + 1)))
        .collect();
    let cycles: HashMap<&str, &Cycle> = graph.cycles.iter().map(|c| (c.id.as_str(), c)).collect();

    let mut b = GraphBuilder::new(graph.level_count());
    for (level, v) in graph.vertices() {
        b.vertex(level, vertex_name[v].clone());
    }
    for (level, e) in graph.edges() {
        let (_, delta) = best.edge_num[e.id.as_str()];
        let (tail, head) = match delta {
            Sign::Plus => (&e.tail, &e.head),
            Sign::Minus => (&e.head, &e.tail),
        };
        b.edge(
            level,
            edge_name[e.id.as_str()].clone(),
            vertex_name[tail.as_str()].clone(),
            vertex_name[head.as_str()].clone(),
        );
    }
    for &(id, rho, shift) in &best.order {
        let cycle = cycles[id];
        match &cycle.body {
            CycleBody::Point(anchor) => {
                b.point_cycle(
                    cycle.level,
                    cycle_name[id].clone(),
                    cycle.role,
                    vertex_name[anchor.as_str()].clone(),
                );
            }
            CycleBody::Walk(body) => {
                let len = body.len();
                let presented: Vec<(String, Sign)> = (0..len)
                    .map(|j| {
                        let position = match rho {
                            Sign::Plus => (shift + j) % len,
                            Sign::Minus => (shift + len - j) % len,
                        };
                        let dart = &body[position];
                        let dir = match rho {
                            Sign::Plus => dart.dir,
                            Sign::Minus => dart.dir.flip(),
                        };
                        let (_, delta) = best.edge_num[dart.edge.as_str()];
                        (edge_name[dart.edge.as_str()].clone(), dir * delta)
                    })
                    .collect();
                b.cycle(
                    cycle.level,
                    cycle_name[id].clone(),
                    cycle.role,
                    presented
                        .iter()
                        .map(|(e, s)| crate::model::Dart::new(e.clone(), *s)),
                );
            }
        }
    }
    for p in &graph.pairings {
        b.pair(
            cycle_name[p.lower.as_str()].clone(),
            cycle_name[p.upper.as_str()].clone(),
        );
    }
    let rebuilt = b.build();
    debug_assert!(crate::validate::validate(&rebuilt).is_valid());
    rebuilt
}
