use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("xyz line {line}: {kind}")]
    Xyz { line: usize, kind: XyzErrorKind },

    #[error("basis line {line}: {message}")]
    BasisParse { line: usize, message: String },

    #[error("basis set '{name}' not found (looked in built-in sets and RADSCF_BASIS_PATH)")]
    UnknownBasis { name: String },

    #[error("basis set '{basis}' has no shells for element {element}")]
    MissingElement { basis: String, element: String },

    #[error("invalid molecule: {0}")]
    InvalidMolecule(String),

    #[error("atoms {a} and {b} coincide (R = {distance:.3e} bohr)")]
    DegenerateGeometry { a: usize, b: usize, distance: f64 },

    #[error("overlap matrix is numerically singular: eigenvalue {eigenvalue:.3e} vs largest {largest:.3e}")]
    LinearDependence { eigenvalue: f64, largest: f64 },

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: String,
    },

    #[error("SCF did not converge in {iterations} iterations")]
    ScfNotConverged { iterations: usize },

    #[error("net spin is zero; not a radical")]
    NotARadical,

    #[error("spin-bearing atom {atom} has no perceived bonds")]
    IsolatedSpin { atom: usize },

    #[error("gradient failed at coordinate {coordinate}: {source}")]
    Gradient {
        coordinate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("optimization stalled after {backtracks} backtracks at step {step}")]
    Stalled {
        step: usize,
        backtracks: usize,
        /// Last accepted geometry, flattened, in bohr.
        last_coordinates: Vec<f64>,
    },

    #[error("integral dump: {0}")]
    Dump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XyzErrorKind {
    MalformedCount(String),
    UnknownElement(String),
    BadCoordinate(String),
    MissingField,
    AtomCountMismatch { declared: usize, found: usize },
    BadMetadata(String),
}

impl std::fmt::Display for XyzErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::MalformedCount(s) => write!(f, "malformed atom count '{s}'"),
            Self::UnknownElement(s) => write!(f, "unknown element symbol '{s}'"),
            Self::BadCoordinate(s) => write!(f, "non-numeric coordinate '{s}'"),
            Self::MissingField => write!(f, "expected '<symbol> <x> <y> <z>'"),
            Self::AtomCountMismatch { declared, found } => {
                write!(f, "header declares {declared} atoms but {found} found")
            }
            Self::BadMetadata(s) => write!(f, "bad comment-line metadata '{s}'"),
        }
    }
}

impl Error {
    /// Whether the error stems from user input (files, flags) rather than
    /// from the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Self::Xyz { .. }
                | Self::BasisParse { .. }
                | Self::UnknownBasis { .. }
                | Self::MissingElement { .. }
                | Self::InvalidMolecule(_)
                | Self::DegenerateGeometry { .. }
                | Self::OutOfRange { .. }
                | Self::NotARadical
                | Self::IsolatedSpin { .. }
                | Self::Io(_)
        )
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Xyz { .. } => "xyz-parse",
            Self::BasisParse { .. } => "basis-parse",
            Self::UnknownBasis { .. } => "unknown-basis",
            Self::MissingElement { .. } => "missing-element",
            Self::InvalidMolecule(_) => "invalid-molecule",
            Self::DegenerateGeometry { .. } => "degenerate-geometry",
            Self::LinearDependence { .. } => "linear-dependence",
            Self::OutOfRange { .. } => "out-of-range",
            Self::ScfNotConverged { .. } => "scf-unconverged",
            Self::NotARadical => "not-a-radical",
            Self::IsolatedSpin { .. } => "isolated-spin",
            Self::Gradient { .. } => "gradient",
            Self::Stalled { .. } => "stalled-optimization",
            Self::Dump(_) => "integral-dump",
            Self::Io(_) => "io",
        }
    }
}
