//! Named example diagrams shipped with the library.

use crate::diagram::GaussDiagram;
use crate::io::parse::parse_diagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

impl CorpusEntry {
    /// Value of the `# source:` comment, if any.
    pub fn source(&self) -> Option<&'static str> {
        self.text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# source:"))
            .map(str::trim)
    }

    pub fn diagram(&self) -> GaussDiagram {
        parse_diagram(self.text).expect("corpus documents parse")
    }
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../../corpus/", $name, ".inca")),
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("single_interaction"),
    entry!("kink"),
    entry!("r2_before"),
    entry!("r2_after"),
    entry!("r3_before"),
    entry!("r3_after"),
    entry!("capacity_example"),
    entry!("kishino_analogue"),
];

pub fn corpus_entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

pub fn corpus_diagram(name: &str) -> Option<GaussDiagram> {
    corpus_entry(name).map(CorpusEntry::diagram)
}
