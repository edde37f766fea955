use thiserror::Error;

/// Library-wide error type. Variants mirror the failure modes of the
/// individual operations; most carry enough context to diagnose which
/// input broke the precondition.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not real-split: eigenvalue {index} has imaginary part {imag:.3e}")]
    NotRealSplit { index: usize, imag: f64 },

    #[error("eigenvalue moduli {index} and {} differ by less than the gap tolerance (relative gap {gap:.3e})", index + 1)]
    ModulusCollision { index: usize, gap: f64 },

    #[error("index set {0:?} is not strictly increasing within dimension bounds")]
    BadIndexSet(Vec<usize>),

    #[error("exterior power k={k} out of range for dimension {dim}")]
    BadExteriorPower { k: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("flag basis is numerically singular (|det| = {det:.3e})")]
    SingularFlagBasis { det: f64 },

    #[error("flags are not transverse (composition {composition:?} has relative rank defect {defect:.3e})")]
    NotTransverse { composition: Vec<usize>, defect: f64 },

    #[error("transversality check over {count} compositions exceeds the enumeration budget")]
    CompositionBudget { count: usize },

    #[error("matrix is not unipotent upper-triangular in the frame basis (deviation {deviation:.3e})")]
    NotUnipotent { deviation: f64 },

    #[error("flag is not in the Schubert cell of the attracting flag (pivot {pivot} degenerate)")]
    NotInSchubertCell { pivot: usize },

    #[error("jacobi matrix requires i != j")]
    JacobiDiagonal,

    #[error("dimension {dim} too large for brute-force minor enumeration (max {max})")]
    MinorBudget { dim: usize, max: usize },

    #[error("minor {rows:?} x {cols:?} vanishes; sign normalization undefined")]
    ZeroMinor { rows: Vec<usize>, cols: Vec<usize> },

    #[error("no row/column signing makes all initial minors positive")]
    NoPositiveSigning,

    #[error("letter {0} outside the generator range of rank {1}")]
    BadLetter(i32, usize),

    #[error("enumeration budget exceeded: rank {rank}, max_len {max_len}")]
    BudgetExceeded { rank: usize, max_len: usize },

    #[error("generator images must be {expected}x{expected} matrices")]
    BadImageShape { expected: usize },

    #[error("matrix is not unimodular: |det - 1| = {excess:.3e}")]
    NotUnimodular { excess: f64 },

    #[error("serialization schema violation: {0}")]
    SchemaError(String),

    #[error("axis endpoints {0} and {1} are linked with the first axis")]
    LinkedAxes(f64, f64),

    #[error("constructor requires a hyperbolic element (|trace| > 2), got {trace}")]
    NotHyperbolic { trace: f64 },

    #[error("perturbation left the validated locus after {attempts} seed attempts: {reason}")]
    LeftHitchinLocus { attempts: usize, reason: String },

    #[error("projector pair is degenerate: |Tr(PQ)| = {0:.3e}")]
    DegeneratePair(f64),

    #[error("matrix is not {k}-proximal (relative gap {gap:.3e} at position {index})")]
    NotProximal { k: usize, index: usize, gap: f64 },

    #[error("frame coefficient {name} vanishes ({value:.3e}); expansion undefined")]
    FrameCoefficientZero { name: &'static str, value: f64 },

    #[error("decay term z^n = {min_term:.3e} is below the resolvable budget for the requested range; advise extended precision")]
    UnderflowBudget { min_term: f64 },

    #[error("no dominant real simple eigenvalue (top moduli {0:.6e} and {1:.6e})")]
    NoDominantEigenvalue(f64, f64),

    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("degenerate configuration: pairing {name}[{i}][{j}] = {value:.3e} within tolerance of zero")]
    DegenerateConfiguration {
        name: &'static str,
        i: usize,
        j: usize,
        value: f64,
    },

    #[error("reconstruction assembly is singular: {0}")]
    SingularAssembly(&'static str),

    #[error("no conjugator: residual {residual:.3e} on word `{word}` exceeds tolerance")]
    NoConjugator { residual: f64, word: String },

    #[error("loxodromy lost at a finite-difference sample point (parameter {param}): {source}")]
    LostLoxodromy {
        param: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration value for `{key}`: {value}")]
    BadConfig { key: String, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
