//! Word encoding of minimal functions.
//!
//! A minimal function on a surface other than the sphere has three critical
//! points; its middle level is a bouquet of loops, its lower cycle reads
//! `a b c ...` and its upper cycle spells a signed word. Words are cyclic and
//! normalized to start with `a` positive; an inverted letter (written `b-`)
//! marks an edge the upper cycle traverses against the lower-cycle direction
//! and occurs exactly on non-orientable surfaces.

use std::fmt;

use crate::classify::{are_related, Relation};
use crate::error::{Error, Result};
use crate::local::{classify_vertex, VertexKind};
use crate::model::{CycleBody, Dart, DistinguishingGraph, GraphBuilder, Role, Sign};

const MAX_LETTERS: usize = 26;

/// A signed word: each letter of `a..` exactly once, cyclically normalized to
/// begin `a+`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedWord {
    body: Vec<(u8, Sign)>,
}

impl SignedWord {
    /// Build from raw letters (0-based) with signs; rotates so letter `a`
    /// comes first. Fails unless the letters are a permutation of the
    /// alphabet and `a` carries a positive sign.
    pub fn from_body(mut body: Vec<(u8, Sign)>) -> Result<SignedWord> {
        let m = body.len();
        if m == 0 {
            return Err(Error::Word("a word needs at least one letter".into()));
        }
        if m > MAX_LETTERS {
            return Err(Error::Word(format!(
                "at most {MAX_LETTERS} letters supported"
            )));
        }
        let mut seen = vec![false; m];
        for &(letter, _) in &body {
            if letter as usize >= m || seen[letter as usize] {
                return Err(Error::Word(format!(
                    "letters must be a permutation of a..{}",
                    letter_char(m as u8 - 1)
                )));
            }
            seen[letter as usize] = true;
        }
        let a = body
            .iter()
            .position(|&(l, _)| l == 0)
            .expect("letter a present");
        body.rotate_left(a);
        if body[0].1 != Sign::Plus {
            return Err(Error::Word(
                "letter a must occur positively in a normalized word".into(),
            ));
        }
        Ok(SignedWord { body })
    }

    /// Parse word syntax: letters with an optional `-` suffix, e.g. `acbed`
    /// or `ab-c-`.
    pub fn parse(text: &str) -> Result<SignedWord> {
        let mut body = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            if !c.is_ascii_lowercase() {
                return Err(Error::Word(format!(
                    "unexpected character `{c}` in `{text}`"
                )));
            }
            let sign = if chars.peek() == Some(&'-') {
                chars.next();
                Sign::Minus
            } else {
                Sign::Plus
            };
            body.push((c as u8 - b'a', sign));
        }
        SignedWord::from_body(body)
    }

    pub fn letter_count(&self) -> usize {
        self.body.len()
    }

    pub fn body(&self) -> &[(u8, Sign)] {
        &self.body
    }

    pub fn is_all_positive(&self) -> bool {
        self.body.iter().all(|&(_, s)| s == Sign::Plus)
    }
}

fn letter_char(letter: u8) -> char {
    (b'a' + letter) as char
}

impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(letter, sign) in &self.body {
            write!(f, "{}", letter_char(letter))?;
            if sign == Sign::Minus {
                write!(f, "-")?;
            }
        }
        Ok(())
    }
}

/// Closed surface selector: orientable genus `g` uses `2g + 1` letters,
/// non-orientable genus `p` uses `p + 1`. The sphere (`g0`) has no word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SurfaceSpec {
    pub orientable: bool,
    pub genus: u32,
}

impl SurfaceSpec {
    pub fn orientable(genus: u32) -> SurfaceSpec {
        SurfaceSpec {
            orientable: true,
            genus,
        }
    }

    pub fn non_orientable(genus: u32) -> Result<SurfaceSpec> {
        if genus == 0 {
            return Err(Error::Word("non-orientable genus starts at 1".into()));
        }
        Ok(SurfaceSpec {
            orientable: false,
            genus,
        })
    }

    /// `g0`, `g1`, ... for orientable, `n1`, `n2`, ... for non-orientable.
    pub fn parse(token: &str) -> Result<SurfaceSpec> {
        let (kind, digits) = token.split_at(1.min(token.len()));
        let genus: u32 = digits
            .parse()
            .map_err(|_| Error::Word(format!("bad surface `{token}`, expected g<n> or n<p>")))?;
        match kind {
            "g" => Ok(SurfaceSpec::orientable(genus)),
            "n" => SurfaceSpec::non_orientable(genus),
            _ => Err(Error::Word(format!(
                "bad surface `{token}`, expected g<n> or n<p>"
            ))),
        }
    }

    /// Letters of a minimal word; `None` for the sphere.
    pub fn letter_count(&self) -> Option<usize> {
        match (self.orientable, self.genus) {
            (true, 0) => None,
            (true, g) => Some(2 * g as usize + 1),
            (false, p) => Some(p as usize + 1),
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            if self.orientable { "g" } else { "n" },
            self.genus
        )
    }
}

/// Build the three-level graph of a word: point minimum, bouquet of loops,
/// point maximum. The result always validates; its Euler characteristic is
/// `3 - m`, and it is orientable exactly when the word is all-positive.
pub fn word_to_graph(word: &SignedWord) -> DistinguishingGraph {
    let m = word.letter_count();
    let mut b = GraphBuilder::new(3);
    b.vertex(1, "bot")
        .point_cycle(1, "cmin", Role::Lower, "bot");
    b.vertex(2, "v");
    for letter in 0..m as u8 {
        let name = letter_char(letter).to_string();
        b.edge(2, name, "v", "v");
    }
    b.cycle(
        2,
        "up",
        Role::Upper,
        word.body()
            .iter()
            .map(|&(l, s)| Dart::new(letter_char(l).to_string(), s)),
    );
    b.cycle(
        2,
        "lo",
        Role::Lower,
        (0..m as u8).map(|l| Dart::new(letter_char(l).to_string(), Sign::Plus)),
    );
    b.vertex(3, "top")
        .point_cycle(3, "cmax", Role::Upper, "top");
    b.pair("cmin", "up").pair("lo", "cmax");
    b.build()
}

/// Read a word back off a minimal-shape graph: three levels, point extrema,
/// one bouquet vertex. Relabels edges so the lower cycle reads `a+ b+ ...`,
/// preferring the stored starting dart and traversal direction, and extracts
/// the upper cycle. Inverse of [`word_to_graph`] on its image.
pub fn graph_to_word(graph: &DistinguishingGraph) -> Result<SignedWord> {
    let shape_err = |msg: &str| Error::Shape(msg.into());
    if graph.level_count() != 3 {
        return Err(shape_err("expected exactly 3 levels"));
    }
    for level in [1, 3] {
        let l = graph.level(level).unwrap();
        if l.vertices.len() != 1 || !l.edges.is_empty() {
            return Err(shape_err(
                "extremum levels must be a single isolated vertex",
            ));
        }
    }
    let middle = graph.level(2).unwrap();
    if middle.vertices.len() != 1 {
        return Err(shape_err("middle level must have a single vertex"));
    }
    if middle.edges.is_empty() || middle.edges.iter().any(|e| !e.is_loop()) {
        return Err(shape_err("middle level must be a bouquet of loops"));
    }
    let lower: Vec<&Dart> = match graph
        .cycles_at(2, Role::Lower)
        .map(|c| &c.body)
        .collect::<Vec<_>>()
        .as_slice()
    {
        [CycleBody::Walk(darts)] => darts.iter().collect(),
        _ => return Err(shape_err("middle level must carry exactly one lower cycle")),
    };
    let upper: Vec<&Dart> = match graph
        .cycles_at(2, Role::Upper)
        .map(|c| &c.body)
        .collect::<Vec<_>>()
        .as_slice()
    {
        [CycleBody::Walk(darts)] => darts.iter().collect(),
        _ => return Err(shape_err("middle level must carry exactly one upper cycle")),
    };

    let m = middle.edges.len();
    if lower.len() != m || upper.len() != m {
        return Err(shape_err(
            "each cycle must traverse every loop exactly once",
        ));
    }
    // Candidate relabelings: starting dart of the lower cycle, stored upper
    // reading first, then the reversed reading.
    for flip_upper in [false, true] {
        let read: Vec<Dart> = if flip_upper {
            upper.iter().rev().map(|d| d.flip()).collect()
        } else {
            upper.iter().map(|&d| d.clone()).collect()
        };
        for shift in 0..m {
            let mut letter_of: Vec<(&str, u8, Sign)> = Vec::with_capacity(m);
            for j in 0..m {
                let dart = lower[(shift + j) % m];
                letter_of.push((dart.edge.as_str(), j as u8, dart.dir));
            }
            let relabel = |edge: &str| -> (u8, Sign) {
                let &(_, letter, delta) = letter_of
                    .iter()
                    .find(|(e, _, _)| *e == edge)
                    .expect("bouquet edge");
                (letter, delta)
            };
            let body: Vec<(u8, Sign)> = read
                .iter()
                .map(|d| {
                    let (letter, delta) = relabel(&d.edge);
                    (letter, d.dir * delta)
                })
                .collect();
            if let Ok(word) = SignedWord::from_body(body) {
                return Ok(word);
            }
        }
    }
    Err(shape_err("no relabeling yields a normalized word"))
}

/// Cyclic successive-pair test for all-positive words: true when some
/// cyclically consecutive pair is `(x, succ x)`, the wrap `last -> a`
/// included. Such a fragment forces a conic vertex; the test is used only as
/// an enumeration pre-filter.
pub fn word_has_successive_fragment(word: &SignedWord) -> Result<bool> {
    if !word.is_all_positive() {
        return Err(Error::Word(
            "the fragment filter is defined for all-positive words".into(),
        ));
    }
    let m = word.letter_count() as u8;
    if m == 1 {
        // A single loop read twice is not a fragment of two distinct edges.
        return Ok(false);
    }
    let body = word.body();
    Ok((0..body.len()).any(|i| {
        let (x, _) = body[i];
        let (y, _) = body[(i + 1) % body.len()];
        y == (x + 1) % m
    }))
}

/// Authoritative planarity of the bouquet vertex of the word graph.
pub fn word_planar(word: &SignedWord) -> bool {
    let graph = word_to_graph(word);
    classify_vertex(&graph, "v").expect("word graphs are valid") == VertexKind::Planar
}

/// Mirror move: reverse the reading and apply the alphabet reflection that
/// fixes `a` (for seven letters: `b-g`, `c-f`, `d-e`), then renormalize.
/// Signs ride along unchanged: reversing the lower cycle flips every edge
/// direction, which cancels the dart flips of the reversed upper reading.
/// An involution; agrees with [`crate::classify::mirror`] on graphs.
pub fn word_mirror(word: &SignedWord) -> SignedWord {
    let m = word.letter_count() as u8;
    let body: Vec<(u8, Sign)> = word
        .body()
        .iter()
        .rev()
        .map(|&(letter, sign)| ((m - letter) % m, sign))
        .collect();
    SignedWord::from_body(body).expect("mirror preserves normalizability")
}

/// Negation move: the word of `-f`. For `w = a_1 a_2 a_3 ...` the letters of
/// `abc...` are replaced by `a_1 -> a, a_2 -> b, ...`; with signs, letter `j`
/// of the result is the position of letter `j` in `w` carrying that letter's
/// sign. Equals `graph_to_word(negate(word_to_graph(w)))`. An involution.
pub fn word_negate(word: &SignedWord) -> SignedWord {
    let m = word.letter_count();
    let mut position = vec![0u8; m];
    let mut sign_of = vec![Sign::Plus; m];
    for (i, &(letter, sign)) in word.body().iter().enumerate() {
        position[letter as usize] = i as u8;
        sign_of[letter as usize] = sign;
    }
    let body: Vec<(u8, Sign)> = (0..m).map(|j| (position[j], sign_of[j])).collect();
    SignedWord::from_body(body).expect("negation preserves normalizability")
}

/// Cyclic renaming `a -> b -> c -> ... -> a` applied `shift` times. Fails
/// when the renamed word cannot be normalized (letter `a` would be inverted;
/// only possible for signed words).
pub fn word_rename(word: &SignedWord, shift: usize) -> Result<SignedWord> {
    let m = word.letter_count();
    if shift >= m {
        return Err(Error::Word(format!("shift {shift} out of range 0..{m}")));
    }
    let body: Vec<(u8, Sign)> = word
        .body()
        .iter()
        .map(|&(letter, sign)| ((letter + shift as u8) % m as u8, sign))
        .collect();
    SignedWord::from_body(body)
}

/// One class of the partition of a word set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordClass {
    pub representative: SignedWord,
    pub members: Vec<SignedWord>,
}

/// Partition words by the graph-level relation on their word graphs (the
/// ground truth; word moves are only fast paths). Representatives are the
/// lexicographically least members; classes come sorted by representative.
///
/// All words must share one alphabet and be planar (the relations are only
/// defined between realizable graphs).
pub fn word_classes(words: &[SignedWord], relation: Relation) -> Result<Vec<WordClass>> {
    if words.is_empty() {
        return Ok(Vec::new());
    }
    let m = words[0].letter_count();
    if words.iter().any(|w| w.letter_count() != m) {
        return Err(Error::Word("all words must use the same alphabet".into()));
    }
    let mut unique: Vec<&SignedWord> = words.iter().collect();
    unique.sort();
    unique.dedup();
    for w in &unique {
        if !word_planar(w) {
            return Err(Error::NotRealizable);
        }
    }
    let graphs: Vec<DistinguishingGraph> = unique.iter().map(|w| word_to_graph(w)).collect();

    let mut class_of: Vec<usize> = (0..unique.len()).collect();
    for i in 0..unique.len() {
        if class_of[i] != i {
            continue;
        }
        for j in (i + 1)..unique.len() {
            if class_of[j] == j && are_related(&graphs[i], &graphs[j], relation)? {
                class_of[j] = i;
            }
        }
    }

    let mut classes: Vec<WordClass> = Vec::new();
    for i in 0..unique.len() {
        if class_of[i] == i {
            let members: Vec<SignedWord> = (0..unique.len())
                .filter(|&j| class_of[j] == i)
                .map(|j| unique[j].clone())
                .collect();
            classes.push(WordClass {
                representative: members[0].clone(),
                members,
            });
        }
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// The candidate words of a surface before the planarity filter: for
/// orientable specs all fragment-free all-positive words, for non-orientable
/// specs every normalized signed word with at least one inverted letter.
pub fn generate_words(spec: SurfaceSpec) -> Result<Vec<SignedWord>> {
    let Some(m) = spec.letter_count() else {
        return Ok(Vec::new()); // sphere: no word
    };
    let mut out = Vec::new();
    let mut rest: Vec<u8> = (1..m as u8).collect();
    permutations(&mut rest, 0, &mut |perm| {
        if spec.orientable {
            let body: Vec<(u8, Sign)> = std::iter::once((0, Sign::Plus))
                .chain(perm.iter().map(|&l| (l, Sign::Plus)))
                .collect();
            let word = SignedWord::from_body(body).expect("permutation with a first");
            if !word_has_successive_fragment(&word).expect("all-positive") {
                out.push(word);
            }
        } else {
            for signs in 0..(1u32 << perm.len()) {
                if signs == 0 {
                    continue; // all-positive words belong to orientable surfaces
                }
                let body: Vec<(u8, Sign)> = std::iter::once((0, Sign::Plus))
                    .chain(perm.iter().enumerate().map(|(i, &l)| {
                        (
                            l,
                            if signs >> i & 1 == 1 {
                                Sign::Minus
                            } else {
                                Sign::Plus
                            },
                        )
                    }))
                    .collect();
                out.push(SignedWord::from_body(body).expect("permutation with a first"));
            }
        }
    });
    out.sort();
    Ok(out)
}

fn permutations(items: &mut Vec<u8>, k: usize, visit: &mut impl FnMut(&[u8])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Result of enumerating the minimal functions of a surface.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub surface: SurfaceSpec,
    pub relation: Relation,
    /// Sorted class representatives; empty for the sphere, whose single
    /// minimal function has no word.
    pub representatives: Vec<SignedWord>,
    pub class_count: usize,
}

/// Enumerate minimal functions on the surface up to the relation: generate
/// candidate words, keep the planar ones, partition by the graph relation.
pub fn enumerate_minimal(spec: SurfaceSpec, relation: Relation) -> Result<Enumeration> {
    if !spec.orientable && relation == Relation::OrientedConjugacy {
        return Err(Error::UnsupportedRelation(
            "oriented conjugacy is undefined on a non-orientable surface".into(),
        ));
    }
    if spec.letter_count().is_none() {
        // Sphere: exactly one minimal function, min and max on one cylinder.
        return Ok(Enumeration {
            surface: spec,
            relation,
            representatives: Vec::new(),
            class_count: 1,
        });
    }
    let planar: Vec<SignedWord> = generate_words(spec)?
        .into_iter()
        .filter(word_planar)
        .collect();
    let classes = word_classes(&planar, relation)?;
    let representatives: Vec<SignedWord> =
        classes.iter().map(|c| c.representative.clone()).collect();
    let class_count = representatives.len();
    Ok(Enumeration {
        surface: spec,
        relation,
        representatives,
        class_count,
    })
}
