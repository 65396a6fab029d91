use thiserror::Error;

use crate::injection::ConstructionFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("invalid element name `{0}` (use letters, digits and `_`)")]
    InvalidName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relations contain a cycle: {}", .0.join(" < "))]
    CycleDetected(Vec<String>),
    #[error("Hasse diagram is disconnected ({} components)", .0.len())]
    Disconnected(Vec<Vec<String>>),
    #[error("poset is not graded: maximal chain {} is shorter than the height", .0.join(" < "))]
    NotGraded(Vec<String>),
    #[error("poset has no greatest element")]
    NoGreatestElement,
    #[error("poset has no least element")]
    NoLeastElement,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} has size {size}, above the cap of {cap}")]
    TooLarge { what: String, size: usize, cap: usize },
    #[error("vertices come from different posets")]
    MixedPosets,
    #[error("triples are not independent in the auxiliary graph: {0}")]
    NotIndependent(String),
    #[error("family has {have} elements but the construction needs {need}")]
    FamilyTooSmall { have: usize, need: usize },
    #[error("level {level} has {size} elements; the extension needs at least 3")]
    LevelTooSmall { level: usize, size: usize },
    #[error("extension result is not graded")]
    NotGradedAfter,
    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),
    #[error("bad gallery parameters: {0}")]
    BadParams(String),
    #[error("gallery self-test failed for {entry}: {reason}")]
    SelfTest { entry: String, reason: String },
    #[error("constructive injection failed: {}", .0.diagnostic)]
    ConstructionFailed(Box<ConstructionFailure>),
}
