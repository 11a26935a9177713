use thiserror::Error;

/// Errors raised by basis construction, operator algebra, model assembly,
/// quadrature and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("infeasible number sector: N = {total} exceeds M * n_max = {capacity}")]
    InfeasibleSector { total: usize, capacity: usize },

    #[error("occupation vector {0:?} is not a member of the basis")]
    UnknownState(Vec<u32>),

    #[error("basis index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("site index {site} out of range ({num_sites} sites)")]
    InvalidSite { site: usize, num_sites: usize },

    #[error("operator dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operators act on different bases: {0} vs {1}")]
    BasisMismatch(String, String),

    #[error("pair creation requires a basis without a total-number sector")]
    SectorRestrictedBasis,

    #[error("coupling tensor covers {tensor_sites} sites but basis has {basis_sites}")]
    TensorSiteMismatch {
        tensor_sites: usize,
        basis_sites: usize,
    },

    #[error("cavity prefactor singular: kappa and detuning both zero for mode {0}")]
    SingularPrefactor(String),

    #[error("missing coupling tensor for mode pair ({0}, {1})")]
    MissingTensor(String, String),

    #[error("assembled Hamiltonian not Hermitian: max |H - H^dag| = {0:.3e}")]
    NonHermitianAssembly(f64),

    #[error("non-Hermitian input: max |H - H^dag| = {0:.3e}")]
    NonHermitianInput(f64),

    #[error("bond ({0}, {1}) is not nearest-neighbour")]
    NotNearestNeighbour(usize, usize),

    #[error("quadrature tolerance {requested:.3e} not met: error estimate {achieved:.3e}")]
    QuadratureTolerance { requested: f64, achieved: f64 },

    #[error("empty Zeno sector")]
    EmptySector,

    #[error("state has no support outside the zero-amplitude measurement sector; jump impossible")]
    JumpImpossible,

    #[error("state vector underflowed to zero norm")]
    ZeroNorm,

    #[error("step size dt = {dt} gives max jump probability {p:.3} per step (must be < 0.1)")]
    StepTooLarge { dt: f64, p: f64 },

    #[error("Lanczos did not converge after {restarts} restarts ({iters} iterations each)")]
    LanczosNoConvergence { restarts: usize, iters: usize },

    #[error("overlapping density-density regions require explicit per-region phases")]
    AmbiguousRegions,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
