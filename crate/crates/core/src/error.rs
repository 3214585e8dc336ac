use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{requested} qubits requested, the dense kernel supports at most {max}")]
    TooManyQubits { requested: usize, max: usize },

    #[error("wire {wire} out of range for a {n_qubits}-qubit register")]
    WireOutOfRange { wire: usize, n_qubits: usize },

    #[error("input is numerically zero")]
    ZeroInput,

    #[error("Majorana index {mu} out of range 1..={max}")]
    MajoranaIndex { mu: usize, max: usize },

    #[error("expected {expected} operators, found {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("operator is not fermionic (neither even nor odd)")]
    NonFermionic,

    #[error("operator is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("state is not normalised (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("circuit contains a free-form gate at index {index}; it has no rotation")]
    NotGaussian { index: usize },

    #[error("membership at level {level} needs {products} dense products, above the guard of {limit}")]
    CostGuard {
        level: u32,
        products: u64,
        limit: u64,
    },

    #[error("determinant ratio phase {phi} is not a 2^m-th root of unity for any m <= 20")]
    GenericPhase { phi: f64 },

    #[error("CAR violated for pair ({mu}, {nu}): residual {residual:.3e}")]
    CarViolation { mu: usize, nu: usize, residual: f64 },

    #[error("operator {mu} of the tuple is not odd")]
    NotOdd { mu: usize },

    #[error("vacuum projector annihilated every probe vector (projector rank {rank})")]
    DegenerateProjector { rank: usize },

    #[error("determinant mismatch: |A| = {det_a}, |B| = {det_b}")]
    DeterminantMismatch {
        det_a: num_complex::Complex64,
        det_b: num_complex::Complex64,
    },

    #[error("branch {outcome} has vanishing amplitude (norm {norm:.3e})")]
    VanishingBranch { outcome: String, norm: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error(transparent)]
    Parse(#[from] crate::circuits::ParseError),

    #[error("{0}")]
    InvalidArgument(String),
}
