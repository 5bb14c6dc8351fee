//! Distinguishing graphs of smooth functions with isolated critical points
//! on closed surfaces.
//!
//! A function's critical levels, the boundary cycles its cylinders trace on
//! them, and the pairing of cylinder ends form a complete topological
//! invariant. This crate models that invariant, validates it, computes the
//! local (degree, Poincaré index, link) and global (Euler characteristic,
//! orientability, genus) data, decides oriented conjugacy, conjugacy and
//! equivalence of two graphs, and enumerates the minimal functions of a
//! surface through their word encoding.

pub mod canon;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod local;
pub mod model;
pub mod surface;
pub mod transform;
pub mod validate;
pub mod word;

pub use canon::{canonical_form, canonical_key, CanonicalForm};
pub use classify::{
    are_related, find_isomorphism, mirror, negate, oracle_isomorphic, IsoWitness, Relation,
};
pub use error::{Error, Result};
pub use format::{parse_text, serialize_text, DocumentModel, ParseError};
pub use local::{
    classify_vertex, link_adjacencies, locally_equivalent, vertex_link, vertex_report, EdgeEnd,
    EndKind, VertexKind, VertexReport,
};
pub use model::{
    darts, Cycle, CycleBody, Dart, DistinguishingGraph, Edge, GraphBuilder, LevelGraph, Pairing,
    Role, Sign,
};
pub use surface::{
    euler_characteristic, is_connected, is_realizable, orientation_assignment, surface_report,
    OrientationAssignment, SurfaceReport,
};
pub use transform::{is_smoothed, smooth, subdivide_loops};
pub use validate::{validate, ValidationReport, Violation};
pub use word::{
    enumerate_minimal, generate_words, graph_to_word, word_classes, word_has_successive_fragment,
    word_mirror, word_negate, word_planar, word_rename, word_to_graph, Enumeration, SignedWord,
    SurfaceSpec, WordClass,
};
