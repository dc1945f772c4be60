//! Gauss-diagram calculus for Inca foams.
//!
//! A diagram is a disjoint union of path and cycle graphs together with a set
//! of agent vertices and a signed assignment of agents to edges. This crate
//! provides the data model, local moves, canonical forms, bounded equivalence
//! search, the invariant suite (linking graphs, quandle colorings, w-codes,
//! message capacities) and prime factorization under connect sum.

pub mod canon;
pub mod capacity;
pub mod diagram;
pub mod invariants;
pub mod io;
pub mod moves;
pub mod search;
pub mod sum;

pub use canon::{canonical_code, canonicalize, underlying_graph, CanonicalCode};
pub use diagram::{Component, EdgeRef, GaussDiagram, Interaction, Kind, Sign, VertexRef};
pub use moves::{apply, apply_with_inverse, enumerate_moves, KindSet, Move, MoveKind};
