//! The `dg 1` text format.
//!
//! Whitespace-separated tokens, `#` comments to end of line:
//!
//! ```text
//! dg 1
//! levels 3
//! level 1
//! vertex bot
//! cycle cmin lower @bot
//! level 2
//! vertex v
//! edge a v v
//! cycle lo lower a+ b+ c+
//! cycle up upper a+ c+ b+
//! ...
//! pair cmin up
//! ```
//!
//! Names are `[A-Za-z0-9_.]+` and must not collide with the keywords; darts
//! append `+` or `-` to an edge name; a point cycle is written `@vertex`.
//! `serialize_text` emits one statement per line in a canonical order, so
//! `parse(serialize(g)) == g` and serialization is byte-stable.

use std::collections::HashMap;
use std::fmt;

use crate::model::{Cycle, CycleBody, Dart, DistinguishingGraph, LevelGraph, Pairing, Role, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Which statement introduced an identifier; used for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Vertex(String),
    Edge(String),
    Cycle(String),
    Pair(String, String),
}

/// A parsed graph plus the source line of every statement.
#[derive(Clone, Debug)]
pub struct DocumentModel {
    pub graph: DistinguishingGraph,
    lines: HashMap<Item, usize>,
}

impl DocumentModel {
    pub fn line_of(&self, item: &Item) -> Option<usize> {
        self.lines.get(item).copied()
    }
}

const KEYWORDS: [&str; 7] = ["dg", "levels", "level", "vertex", "edge", "cycle", "pair"];

fn is_name(token: &str) -> bool {
    !token.is_empty()
        && !KEYWORDS.contains(&token)
        && token
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

struct Tokens {
    items: Vec<(String, usize)>,
    at: usize,
}

impl Tokens {
    fn new(input: &str) -> Tokens {
        let mut items = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                items.push((tok.to_string(), i + 1));
            }
        }
        Tokens { items, at: 0 }
    }

    fn peek(&self) -> Option<&str> {
        self.items.get(self.at).map(|(t, _)| t.as_str())
    }

    fn line(&self) -> usize {
        self.items
            .get(self.at.min(self.items.len().saturating_sub(1)))
            .map(|&(_, l)| l)
            .unwrap_or(1)
    }

    fn next(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.items.get(self.at) {
            Some((t, l)) => {
                self.at += 1;
                Ok((t.clone(), *l))
            }
            None => Err(ParseError {
                line: self.items.last().map(|&(_, l)| l).unwrap_or(1),
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn expect(&mut self, token: &str) -> Result<usize, ParseError> {
        let (t, l) = self.next(&format!("`{token}`"))?;
        if t == token {
            Ok(l)
        } else {
            Err(ParseError {
                line: l,
                message: format!("expected `{token}`, found `{t}`"),
            })
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let (t, l) = self.next(what)?;
        if is_name(&t) {
            Ok((t, l))
        } else {
            Err(ParseError {
                line: l,
                message: format!("expected {what}, found `{t}`"),
            })
        }
    }

    fn int(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let (t, l) = self.next(what)?;
        t.parse().map(|v| (v, l)).map_err(|_| ParseError {
            line: l,
            message: format!("expected {what}, found `{t}`"),
        })
    }
}

pub fn parse_text(input: &str) -> Result<DocumentModel, ParseError> {
    let mut tokens = Tokens::new(input);
    tokens.expect("dg")?;
    let (version, vline) = tokens.int("format version")?;
    if version != 1 {
        return Err(ParseError {
            line: vline,
            message: format!("unsupported version {version}"),
        });
    }
    tokens.expect("levels")?;
    let (declared, dline) = tokens.int("level count")?;

    let mut levels: Vec<LevelGraph> = Vec::new();
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut pairings: Vec<Pairing> = Vec::new();
    let mut lines: HashMap<Item, usize> = HashMap::new();
    let mut vertex_lines: HashMap<String, usize> = HashMap::new();
    let mut edge_lines: HashMap<String, usize> = HashMap::new();
    let mut cycle_lines: HashMap<String, usize> = HashMap::new();
    let mut pairs_started = false;

    // Endpoint and dart references are resolved when the level closes, so
    // statement order inside a level is free.
    let close_level = |levels: &Vec<LevelGraph>,
                       cycles: &Vec<Cycle>,
                       edge_lines: &HashMap<String, usize>,
                       cycle_lines: &HashMap<String, usize>|
     -> Result<(), ParseError> {
        let Some(level) = levels.last() else {
            return Ok(());
        };
        for e in &level.edges {
            for v in [&e.tail, &e.head] {
                if !level.vertices.contains(v) {
                    return Err(ParseError {
                        line: edge_lines[&e.id],
                        message: format!(
                            "edge `{}` endpoint `{v}` is not a vertex of level {}",
                            e.id, level.index
                        ),
                    });
                }
            }
        }
        for c in cycles.iter().filter(|c| c.level == level.index) {
            match &c.body {
                CycleBody::Point(anchor) => {
                    if !level.vertices.contains(anchor) {
                        return Err(ParseError {
                            line: cycle_lines[&c.id],
                            message: format!(
                                "cycle `{}` anchor `{anchor}` is not a vertex of level {}",
                                c.id, level.index
                            ),
                        });
                    }
                }
                CycleBody::Walk(darts) => {
                    for d in darts {
                        if !level.edges.iter().any(|e| e.id == d.edge) {
                            return Err(ParseError {
                                line: cycle_lines[&c.id],
                                message: format!(
                                    "cycle `{}` references edge `{}` not on level {}",
                                    c.id, d.edge, level.index
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    };

    while let Some(tok) = tokens.peek() {
        match tok {
            "level" => {
                if pairs_started {
                    return Err(ParseError {
                        line: tokens.line(),
                        message: "level section after pair statements".into(),
                    });
                }
                close_level(&levels, &cycles, &edge_lines, &cycle_lines)?;
                tokens.expect("level")?;
                let (index, line) = tokens.int("level ordinal")?;
                if index != levels.len() + 1 {
                    return Err(ParseError {
                        line,
                        message: format!(
                            "level {index} out of order, expected {}",
                            levels.len() + 1
                        ),
                    });
                }
                if index > declared {
                    return Err(ParseError {
                        line,
                        message: format!("level {index} exceeds declared count {declared}"),
                    });
                }
                levels.push(LevelGraph {
                    index,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                });
            }
            "vertex" => {
                tokens.expect("vertex")?;
                let (name, line) = tokens.name("vertex name")?;
                let Some(level) = levels.last_mut() else {
                    return Err(ParseError {
                        line,
                        message: "vertex before any level".into(),
                    });
                };
                if vertex_lines.insert(name.clone(), line).is_some() {
                    return Err(ParseError {
                        line,
                        message: format!("duplicate vertex `{name}`"),
                    });
                }
                lines.insert(Item::Vertex(name.clone()), line);
                level.vertices.push(name);
            }
            "edge" => {
                tokens.expect("edge")?;
                let (name, line) = tokens.name("edge name")?;
                let (tail, _) = tokens.name("tail vertex")?;
                let (head, _) = tokens.name("head vertex")?;
                let Some(level) = levels.last_mut() else {
                    return Err(ParseError {
                        line,
                        message: "edge before any level".into(),
                    });
                };
                if edge_lines.insert(name.clone(), line).is_some() {
                    return Err(ParseError {
                        line,
                        message: format!("duplicate edge `{name}`"),
                    });
                }
                lines.insert(Item::Edge(name.clone()), line);
                level.edges.push(crate::model::Edge::new(name, tail, head));
            }
            "cycle" => {
                tokens.expect("cycle")?;
                let (name, line) = tokens.name("cycle name")?;
                let (role_tok, role_line) = tokens.next("`lower` or `upper`")?;
                let role = match role_tok.as_str() {
                    "lower" => Role::Lower,
                    "upper" => Role::Upper,
                    other => {
                        return Err(ParseError {
                            line: role_line,
                            message: format!("expected `lower` or `upper`, found `{other}`"),
                        })
                    }
                };
                let Some(level) = levels.last() else {
                    return Err(ParseError {
                        line,
                        message: "cycle before any level".into(),
                    });
                };
                let body = parse_body(&mut tokens)?;
                if cycle_lines.insert(name.clone(), line).is_some() {
                    return Err(ParseError {
                        line,
                        message: format!("duplicate cycle `{name}`"),
                    });
                }
                lines.insert(Item::Cycle(name.clone()), line);
                cycles.push(Cycle {
                    id: name,
                    level: level.index,
                    role,
                    body,
                });
            }
            "pair" => {
                tokens.expect("pair")?;
                let line = tokens.line();
                let (lower, _) = tokens.name("lower cycle name")?;
                let (upper, _) = tokens.name("upper cycle name")?;
                for id in [&lower, &upper] {
                    if !cycle_lines.contains_key(id) {
                        return Err(ParseError {
                            line,
                            message: format!("pair references unknown cycle `{id}`"),
                        });
                    }
                }
                pairs_started = true;
                lines.insert(Item::Pair(lower.clone(), upper.clone()), line);
                pairings.push(Pairing { lower, upper });
            }
            other => {
                return Err(ParseError {
                    line: tokens.line(),
                    message: format!("unknown token `{other}`"),
                });
            }
        }
    }
    close_level(&levels, &cycles, &edge_lines, &cycle_lines)?;
    if levels.len() != declared {
        return Err(ParseError {
            line: dline,
            message: format!("declared {declared} levels but defined {}", levels.len()),
        });
    }

    let graph = DistinguishingGraph {
        levels,
        cycles,
        pairings,
    }
    .normalized();
    Ok(DocumentModel { graph, lines })
}

fn parse_body(tokens: &mut Tokens) -> Result<CycleBody, ParseError> {
    if let Some(tok) = tokens.peek() {
        if let Some(anchor) = tok.strip_prefix('@') {
            if !is_name(anchor) {
                return Err(ParseError {
                    line: tokens.line(),
                    message: format!("bad anchor `{tok}`"),
                });
            }
            let anchor = anchor.to_string();
            tokens.next("anchor")?;
            return Ok(CycleBody::Point(anchor));
        }
    }
    let mut darts = Vec::new();
    loop {
        match tokens.peek() {
            Some(tok) if !KEYWORDS.contains(&tok) => {
                let line = tokens.line();
                let (tok, _) = tokens.next("dart")?;
                let (name, dir) = match tok.strip_suffix('+') {
                    Some(name) => (name, Sign::Plus),
                    None => match tok.strip_suffix('-') {
                        Some(name) => (name, Sign::Minus),
                        None => {
                            return Err(ParseError {
                                line,
                                message: format!("expected dart like `a+` or `a-`, found `{tok}`"),
                            })
                        }
                    },
                };
                if !is_name(name) {
                    return Err(ParseError {
                        line,
                        message: format!("bad edge name in `{tok}`"),
                    });
                }
                darts.push(Dart::new(name, dir));
            }
            _ => break,
        }
    }
    if darts.is_empty() {
        return Err(ParseError {
            line: tokens.line(),
            message: "cycle body must be `@vertex` or a dart list".into(),
        });
    }
    Ok(CycleBody::Walk(darts))
}

/// Canonical text form: header, levels in order, vertices then edges then
/// cycles (lower before upper) per level, then the pairs; everything sorted,
/// one statement per line, single spaces, trailing newline.
pub fn serialize_text(graph: &DistinguishingGraph) -> String {
    let g = graph.clone().normalized();
    let mut out = String::from("dg 1\n");
    out.push_str(&format!("levels {}\n", g.level_count()));
    for level in &g.levels {
        out.push_str(&format!("level {}\n", level.index));
        for v in &level.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in &level.edges {
            out.push_str(&format!("edge {} {} {}\n", e.id, e.tail, e.head));
        }
        for cycle in g.cycles.iter().filter(|c| c.level == level.index) {
            out.push_str(&format!("cycle {} {}", cycle.id, cycle.role));
            match &cycle.body {
                CycleBody::Point(anchor) => out.push_str(&format!(" @{anchor}")),
                CycleBody::Walk(darts) => {
                    for d in darts {
                        out.push_str(&format!(" {d}"));
                    }
                }
            }
            out.push('\n');
        }
    }
    for p in &g.pairings {
        out.push_str(&format!("pair {} {}\n", p.lower, p.upper));
    }
    out
}
