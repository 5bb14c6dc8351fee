//! Ready-made distinguishing graphs used throughout the test suites.
//!
//! All of these are built by hand, independently of the word encoding, so
//! they double as oracles for `word_to_graph`.

use crate::model::{darts, DistinguishingGraph, GraphBuilder, Role};

/// Two levels, two extrema, one doubly-capped cylinder: the sphere with its
/// minimal (height) function.
pub fn sphere() -> DistinguishingGraph {
    let mut b = GraphBuilder::new(2);
    b.vertex(1, "m").point_cycle(1, "cmin", Role::Lower, "m");
    b.vertex(2, "M").point_cycle(2, "cmax", Role::Upper, "M");
    b.pair("cmin", "cmax");
    b.build()
}

/// Bouquet graph of a word: levels `point / bouquet / point`, upper cycle
/// reading the word, lower cycle reading `a+ b+ c+ ...`.
fn bouquet(upper: &str) -> DistinguishingGraph {
    let upper = darts(upper);
    let mut b = GraphBuilder::new(3);
    b.vertex(1, "bot")
        .point_cycle(1, "cmin", Role::Lower, "bot");
    b.vertex(2, "v");
    let mut letters: Vec<&str> = upper.iter().map(|d| d.edge.as_str()).collect();
    letters.sort();
    for name in &letters {
        b.edge(2, *name, "v", "v");
    }
    b.cycle(2, "up", Role::Upper, upper.clone());
    b.cycle(
        2,
        "lo",
        Role::Lower,
        letters.iter().map(|n| (*n, crate::model::Sign::Plus)),
    );
    b.vertex(3, "top")
        .point_cycle(3, "cmax", Role::Upper, "top");
    b.pair("cmin", "up").pair("lo", "cmax");
    b.build()
}

/// The minimal function on the torus: word `acb`.
pub fn torus() -> DistinguishingGraph {
    bouquet("a+ c+ b+")
}

/// The minimal function on the projective plane: word `ab⁻`.
pub fn projective_plane() -> DistinguishingGraph {
    bouquet("a+ b-")
}

/// The minimal function on the Klein bottle: word `ab⁻c⁻`.
pub fn klein_bottle() -> DistinguishingGraph {
    bouquet("a+ b- c-")
}

/// A conic example: word `abc` has the successive fragment `ab`.
pub fn conic_bouquet() -> DistinguishingGraph {
    bouquet("a+ b+ c+")
}

/// Height function on the upright torus: min, two simple saddles, max.
pub fn morse_torus() -> DistinguishingGraph {
    let mut b = GraphBuilder::new(4);
    b.vertex(1, "m").point_cycle(1, "cmin", Role::Lower, "m");
    b.vertex(2, "v2")
        .edge(2, "a", "v2", "v2")
        .edge(2, "b", "v2", "v2");
    b.cycle(2, "u2", Role::Upper, darts("a+ b+"));
    b.cycle(2, "la", Role::Lower, darts("a+"));
    b.cycle(2, "lb", Role::Lower, darts("b+"));
    b.vertex(3, "v3")
        .edge(3, "c", "v3", "v3")
        .edge(3, "d", "v3", "v3");
    b.cycle(3, "uc", Role::Upper, darts("c+"));
    b.cycle(3, "ud", Role::Upper, darts("d+"));
    b.cycle(3, "l3", Role::Lower, darts("c+ d+"));
    b.vertex(4, "M").point_cycle(4, "cmax", Role::Upper, "M");
    b.pair("cmin", "u2")
        .pair("la", "uc")
        .pair("lb", "ud")
        .pair("l3", "cmax");
    b.build()
}

/// Same shape as [`morse_torus`] but one tube glued with a reversal: the
/// Klein bottle. The twist is visible only through the cylinder coupling of
/// the orientation constraints — each level alone is coherently orientable.
pub fn klein_four_level() -> DistinguishingGraph {
    let mut g = morse_torus();
    for c in &mut g.cycles {
        if c.id == "la" {
            c.body = crate::model::CycleBody::Walk(darts("a-"));
        }
    }
    g
}

/// One graph, two components per level: a disjoint union of two spheres.
pub fn double_sphere() -> DistinguishingGraph {
    let mut b = GraphBuilder::new(2);
    b.vertex(1, "m1").point_cycle(1, "cmin1", Role::Lower, "m1");
    b.vertex(1, "m2").point_cycle(1, "cmin2", Role::Lower, "m2");
    b.vertex(2, "M1").point_cycle(2, "cmax1", Role::Upper, "M1");
    b.vertex(2, "M2").point_cycle(2, "cmax2", Role::Upper, "M2");
    b.pair("cmin1", "cmax1").pair("cmin2", "cmax2");
    b.build()
}

/// A rigid four-level graph whose two middle pairings join cycles of
/// different lengths (1 and 2); redirecting them breaks every isomorphism.
pub fn asymmetric_tubes() -> DistinguishingGraph {
    let mut b = GraphBuilder::new(4);
    b.vertex(1, "m").point_cycle(1, "cmin", Role::Lower, "m");
    b.vertex(2, "v");
    b.edge(2, "a", "v", "v")
        .edge(2, "b", "v", "v")
        .edge(2, "x", "v", "v");
    b.cycle(2, "u2", Role::Upper, darts("a+ b+ x+"));
    b.cycle(2, "la", Role::Lower, darts("a+"));
    b.cycle(2, "lbx", Role::Lower, darts("b+ x-"));
    b.vertex(3, "u");
    b.edge(3, "c", "u", "u")
        .edge(3, "d", "u", "u")
        .edge(3, "e", "u", "u");
    b.cycle(3, "uc", Role::Upper, darts("c+"));
    b.cycle(3, "ude", Role::Upper, darts("d+ e-"));
    b.cycle(3, "l3", Role::Lower, darts("c+ d+ e+"));
    b.vertex(4, "M").point_cycle(4, "cmax", Role::Upper, "M");
    b.pair("cmin", "u2")
        .pair("la", "uc")
        .pair("lbx", "ude")
        .pair("l3", "cmax");
    b.build()
}
