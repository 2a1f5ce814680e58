use thiserror::Error;

/// Errors shared across the crate. Checks that *fail* (a violated inequality,
/// a non-monotone map) are not errors; they come back as reports carrying a
/// witness. Errors mean the question itself was malformed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{0}")]
    BadArgument(String),

    #[error("step functions live on different atom spaces")]
    SpaceMismatch,

    #[error("value vector has length {got}, atom space has {expected} atoms")]
    ValueCountMismatch { expected: usize, got: usize },

    #[error("binary word {word:?} does not fit dyadic level {level}")]
    WordTooLong { word: String, level: u32 },

    #[error("atom map is not onto: atom {missing} of the base space is never hit")]
    NotOnto { missing: usize },

    #[error("node set is not downward closed: missing prefix {0:?}")]
    NotDownwardClosed(Vec<usize>),

    #[error("map is not total: tree node {0:?} has no image")]
    MapNotTotal(Vec<usize>),

    #[error("image node {0:?} is not in the target tree")]
    ImageOutsideTarget(Vec<usize>),

    #[error("family is not hereditary: {member:?} present but {missing:?} absent")]
    NotHereditary {
        member: Vec<usize>,
        missing: Vec<usize>,
    },

    #[error("family does not contain the empty set")]
    MissingEmptySet,

    #[error("family has a member outside the ground set 0..={ground}")]
    OutsideGround { ground: usize },

    #[error("family lacks the singleton {{{0}}}")]
    MissingSingleton(usize),

    #[error("window entry {0} exceeds sup-norm 1")]
    NormExceedsOne(usize),

    #[error("window entries {0} and {1} are identical")]
    DuplicateFunction(usize, usize),

    #[error("window entry {0} is the zero function")]
    ZeroFunction(usize),

    #[error("window is not basic; no finite basis constant")]
    NotBasic,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error(
        "dense window too coarse: member {member}, stage {stage} needs a fresh \
         approximant of function {fn_index} within {tolerance}"
    )]
    DenseTooCoarse {
        member: usize,
        stage: usize,
        fn_index: usize,
        tolerance: String,
    },

    #[error("branch of length {depth} cannot carry a chain for window length {needed}")]
    BranchTooShort { depth: usize, needed: usize },

    #[error("tolerance schedule exhausted without a certificate (tried down to {0})")]
    ScheduleExhausted(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
