use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("too many variables ({0}); at most {max} are supported", max = crate::series::MAX_VARS)]
    TooManyVariables(usize),

    #[error("truncation order {0} exceeds the supported maximum {max}", max = crate::series::MAX_ORDER)]
    OrderTooLarge(u32),

    #[error("series is only known to order 0; its derivative carries no information")]
    OrderExhausted,

    #[error("division by zero")]
    DivisionByZero,

    #[error("series has zero constant term and cannot be inverted (Levi-degenerate evaluation?)")]
    NotInvertible,

    #[error("substituted series for `{0}` has a nonzero constant term; only exact polynomials may be shifted")]
    ConstantShift(String),

    #[error("Jacobian of the implicit system is singular at the origin")]
    SingularJacobian,

    #[error("implicit system is not centred: F(0) ≠ 0")]
    NotCentered,

    #[error("graph is not normalized: {0}")]
    NotNormalized(String),

    #[error("graph is not real: {0}")]
    NotReal(String),

    #[error("point does not lie on the hypersurface: {0}")]
    PointNotOnSurface(String),

    #[error("jet-only graph can only be evaluated or recentred at the origin")]
    JetOnlyAtNonzeroPoint,

    #[error("Levi form is degenerate at the base point")]
    LeviDegenerate,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty sampling grid")]
    EmptyGrid,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::VariableMismatch { .. } => "variable_mismatch",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::TooManyVariables(_) => "too_many_variables",
            Error::OrderTooLarge(_) => "order_too_large",
            Error::OrderExhausted => "order_exhausted",
            Error::DivisionByZero => "division_by_zero",
            Error::NotInvertible => "not_invertible",
            Error::ConstantShift(_) => "constant_shift",
            Error::SingularJacobian => "singular_jacobian",
            Error::NotCentered => "not_centered",
            Error::NotNormalized(_) => "not_normalized",
            Error::NotReal(_) => "not_real",
            Error::PointNotOnSurface(_) => "point_not_on_surface",
            Error::JetOnlyAtNonzeroPoint => "jet_only_at_nonzero_point",
            Error::LeviDegenerate => "levi_degenerate",
            Error::Dimension(_) => "dimension",
            Error::EmptyGrid => "empty_grid",
            Error::Parse(_) => "parse",
        }
    }
}
