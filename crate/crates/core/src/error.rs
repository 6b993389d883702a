use thiserror::Error;

use crate::poset::Arc;
use crate::signed_set::SignedSubset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size must be between 1 and {max}, got {n}")]
    GroundSetSize { n: usize, max: usize },

    #[error("element {elem} is outside the ground set 1..={n}")]
    ElementOutOfRange { elem: usize, n: usize },

    #[error("element {elem} appears on both sides of a signed subset")]
    OverlappingSides { elem: usize },

    #[error("signed subset {subset} does not belong to a ground set of size {n}")]
    MismatchedGroundSet { subset: SignedSubset, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("function value at (∅,∅) must be 0, got {value}")]
    NonzeroAtEmpty { value: String },

    #[error("table holds {got} values, a ground set of size {n} needs 3^{n} = {expected}")]
    TableSize {
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("point is not a member of the polyhedron: x{subset} = {lhs} > f{subset} = {rhs}")]
    NotMember {
        subset: SignedSubset,
        lhs: String,
        rhs: String,
    },

    #[error("point is not a vertex: tight family is not {reason}")]
    NotAVertex { reason: &'static str },

    #[error("dep({sign}{elem}) is undefined: {elem} is not {sign}-saturated")]
    UndefinedDep { elem: usize, sign: char },

    #[error("invalid signed chain: {0}")]
    InvalidChain(String),

    #[error("bidirected graph is cyclic: arcs {0} and {1} have opposite boundaries")]
    Cyclic(Arc, Arc),

    #[error("ideals of G(x) differ from the tight family at x = {point}: {detail}")]
    IdealMismatch { point: String, detail: String },

    #[error("family is not closed under reduced union and intersection: {0}")]
    NotClosed(String),

    #[error("no tight orthant certifies the selfloop capacity for {arc}")]
    NoTightOrthant { arc: Arc },

    #[error("capacity formula precondition fails for {arc}: {detail}")]
    CapacityPrecondition { arc: Arc, detail: String },

    #[error(
        "capacity mismatch along {arc}: formula gives {fast}, constraint scan gives {generic}"
    )]
    CapacityMismatch {
        arc: Arc,
        fast: String,
        generic: String,
    },

    #[error("direction is unbounded: no constraint limits the step")]
    Unbounded,

    #[error("local search called at the root vertex x*")]
    AtRoot,

    #[error("parent step from {point} along {arc} leaves the vertex set")]
    BrokenParent { point: String, arc: String },

    #[error("vertices must be distinct")]
    SameVertex,

    #[error("empty vertex set")]
    EmptyVertexSet,

    #[error("instance: {0}")]
    Instance(String),
}
