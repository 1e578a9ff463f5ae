//! Combinatorial engine for shadows of 4-manifolds.
//!
//! Special polyhedra are encoded by true vertices, triple lines with wing
//! maps, circle components and region caps. On top of that encoding sit the
//! boundary-disposal and vertex-creation moves, the X_k / Z_k families,
//! fundamental-group presentations with the word-combinatorial claims and the
//! free-rank obstruction, and an exhaustive census.

pub mod canonical;
pub mod census;
pub mod families;
pub mod format;
pub mod group;
pub mod moves;
pub mod polyhedron;
pub mod regions;
pub mod report;

pub use canonical::{canonical_form, isomorphic, CanonError, GleamMode, Relabeling};
pub use format::{parse_text, to_text, ParseError};
pub use polyhedron::{
    wing_labels, Circle, CircleId, Edge, EdgeId, Gleam, LegRef, Passage, Perm3, RegionCap, Segment, ShadowPolyhedron,
    Sheet, Sign, StructureError, VertexId, WingMap,
};
pub use regions::{
    euler_characteristic, set_gleams, trace_regions, validate, z2_gleam, z2_gleams, Circuit, ValidationReport,
};
