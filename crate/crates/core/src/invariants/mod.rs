//! Invariants of diagrams: linking graphs, quandle colorings and
//! presentations, w-codes and the combined fingerprint.

pub mod coloring;
pub mod fingerprint;
pub mod linking;
pub mod presentation;
pub mod quandle;
pub mod wcode;

pub use coloring::{count_colorings, for_each_coloring, realized_triples, Coloring};
pub use fingerprint::{default_panel, fingerprint, Certificate, Fingerprint, MoveClass};
pub use linking::{linking_graph, linking_vector, LinkingGraph, LinkingVariant};
pub use presentation::{quandle_presentation, QuandlePresentation, Relation};
pub use quandle::{validate_quandle, MultiQuandle, QuandleError, QuandleViolation};
pub use wcode::{false_destabilized, w_code, WCode};
