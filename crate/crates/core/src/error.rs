use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("invalid ring data: {0}")]
    InvalidSpec(String),

    #[error("polynomial has monomial {monomial} outside the slice")]
    SupportViolation { monomial: String },

    #[error("degenerate input: generator G{0} is zero")]
    DegenerateInput(usize),

    #[error("bidegree mismatch: expected {expected}, found {found}")]
    BidegreeMismatch { expected: String, found: String },

    #[error("remainder {0} is not in the Jacobian span of its slice")]
    DecompositionFailure(String),

    #[error("nonzero Jacobian quotient at weight {weight} > n = {n}; input is probably singular")]
    WeightCapExceeded { weight: usize, n: usize },

    #[error("pole order {order} along G{factor} exceeds 1")]
    PoleOrder { factor: usize, order: u32 },

    #[error("cochain is not d-closed at step {step}")]
    NotClosed { step: usize },

    #[error("Cech degree mismatch: {0}")]
    CechDegree(String),

    #[error("negative Betti number {0}; the ring data is inconsistent")]
    NegativeBetti(i64),

    #[error("smoothness not certified (witness {witness}); pass allow_unchecked_smoothness to override")]
    NotCertified { witness: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::SupportViolation { .. } => "support_violation",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::BidegreeMismatch { .. } => "bidegree_mismatch",
            Error::DecompositionFailure(_) => "decomposition_failure",
            Error::WeightCapExceeded { .. } => "weight_cap_exceeded",
            Error::PoleOrder { .. } => "pole_order",
            Error::NotClosed { .. } => "not_closed",
            Error::CechDegree(_) => "cech_degree",
            Error::NegativeBetti(_) => "negative_betti",
            Error::NotCertified { .. } => "not_certified",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// 2 for bad input, 1 for a failed computation or check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DecompositionFailure(_)
            | Error::PoleOrder { .. }
            | Error::NotClosed { .. }
            | Error::CechDegree(_)
            | Error::NegativeBetti(_) => 1,
            _ => 2,
        }
    }
}
