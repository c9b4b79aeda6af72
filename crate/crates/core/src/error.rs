use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("modulus has degree {found}, expected monic of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("field of order {p}^{e} exceeds the 2^20 element cap")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("GF(q^{sub}) is not a subfield of GF(q^{ext})")]
    NotASubfield { sub: usize, ext: usize },
    #[error("element is not in the image of the embedding")]
    NotInImage,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the given space is not contained in the target space")]
    NotASubspace,

    #[error("image of the map is not contained in the span of the image basis")]
    ImageNotContained,
    #[error("vectors do not form a basis")]
    NotABasis,
    #[error("right division leaves a nonzero remainder")]
    NotDivisible,

    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("duplicate codeword in explicit code")]
    DuplicateCodeword,
    #[error("code has fewer than two codewords")]
    TooSmall,
    #[error("{what}: {needed} exceeds cap {cap}")]
    TooLarge { what: &'static str, needed: u128, cap: u128 },
    #[error("row count {rows} outside the allowed range {lo}..={hi}")]
    BadRowCount { rows: usize, lo: usize, hi: usize },
    #[error("operation requires a linear code")]
    NotLinear,
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    #[error("eta violates the norm condition")]
    EtaConditionViolated,
    #[error("m1 = {m1} does not divide m = {m}")]
    BadTower { m: usize, m1: usize },
    #[error("W1 is not contained in W")]
    BadSubspaceChain,
    #[error("property P.1 violated: {0}")]
    P1Violated(String),
    #[error("property P.2 violated")]
    P2Violated,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("input code is not MRD")]
    NotMrdInput,
    #[error("switching family has no code for some codeword")]
    FamilyIncomplete,
    #[error("generators are linearly dependent over the base field")]
    DependentGenerators,

    #[error("intersection with the row-supported subspace is not MRD")]
    SubcodeNotMrd,
    #[error("no second row index available")]
    NoAlternativeRow,
    #[error("target affine rank {target} outside {lo}..={hi}")]
    TargetOutOfRange { target: usize, lo: usize, hi: usize },
    #[error("parameters out of range: {0}")]
    ParamOutOfRange(String),
    #[error("not enough cosets: have {have}, need {need}")]
    NotEnoughCosets { have: usize, need: usize },
    #[error("switching produced a code that is not MRD")]
    SwitchedNotMrd,

    #[error("code is empty")]
    Empty,
    #[error("left isometry matrix is singular")]
    SingularA,
    #[error("right isometry matrix is singular")]
    SingularB,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
