//! Text formats, DOT export, random generation and the result cache.

pub mod cache;
pub mod corpus;
pub mod dot;
pub mod parse;
pub mod quandle_doc;
pub mod random;

pub use cache::{Cache, CacheRecord};
pub use corpus::{corpus_diagram, corpus_entry, CorpusEntry, CORPUS};
pub use dot::export_dot;
pub use parse::{parse_diagram, serialize, ParseError};
pub use quandle_doc::{parse_quandle, serialize_quandle};
pub use random::{random_diagram, sample_diagram, sample_diagram_seeded, scramble, RandomSpec};
