use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported spatial dimension {0} (expected 1 or 2)")]
    UnsupportedDimension(usize),
    #[error("half-resolution M = {0} is too small (need M >= 4)")]
    ResolutionTooSmall(usize),
    #[error("non-finite sample at collocation point {index}")]
    NonFiniteSample { index: usize },
    #[error("sample buffer has length {got}, grid expects {expected}")]
    SampleLength { expected: usize, got: usize },
    #[error("axis {axis} out of range for a {dim}-dimensional grid")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("filter cutoff {cutoff} exceeds the resolved spectrum M = {half}")]
    CutoffTooLarge { cutoff: usize, half: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("state has {got} components, system expects {expected}")]
    ComponentMismatch { expected: usize, got: usize },
    #[error("negative regularity index s = {0}")]
    NegativeRegularity(f64),
    #[error("system has no {0} symmetrizer")]
    MissingSymmetrizer(&'static str),
    #[error("invalid system definition: {0}")]
    InvalidSystem(String),
    #[error("unknown initial data `{name}` (known: init1, init2, init_zero_depth, init2D)")]
    UnknownInitialData { name: String },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("reference grid (M = {reference}) is coarser than the solution grid (M = {solution})")]
    ReferenceTooCoarse { reference: usize, solution: usize },
    #[error("working grid 2M = {two_m} too coarse for an alias-free probe (need >= {required})")]
    ProbeUnderResolved { two_m: usize, required: usize },
    #[error("invalid time-stepping configuration: {0}")]
    InvalidConfig(String),
    #[error("reference run did not complete: blow-up at t = {time}")]
    ReferenceBlowUp { time: f64 },
    #[error("non-finite value encountered in the right-hand side")]
    NonFinite,
}
