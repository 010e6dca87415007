use thiserror::Error;

/// Errors raised by evaluation, construction and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {t} outside the validity interval [{lo}, {hi}]")]
    OutsideValidity { t: f64, lo: f64, hi: f64 },

    #[error("power base {base} is not positive at t = {t}")]
    NonPositiveBase { t: f64, base: f64 },

    #[error("non-finite value {value} at t = {t}")]
    NonFinite { t: f64, value: f64 },

    #[error("point ({x}, {z}) outside the parameter domain")]
    OutOfDomain { x: f64, z: f64 },

    #[error("lightlike surface normal at ({x}, {z}): (f g')^2 = {fg1_sq}, D = 0")]
    LightlikeNormal { x: f64, z: f64, fg1_sq: f64 },

    #[error("timelike surface normal at ({x}, {z}): (f g')^2 = {fg1_sq} > 1, D is not real")]
    TimelikeNormal { x: f64, z: f64, fg1_sq: f64 },

    #[error("degenerate H = A K relation: {reason}")]
    DegenerateRelation { reason: String },

    #[error("family {family}: constraint violated: {constraint}")]
    Constraint { family: String, constraint: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown parameter `{name}` for family {family} (valid: {valid})")]
    UnknownParam {
        family: String,
        name: String,
        valid: String,
    },

    #[error("unknown family `{name}` (valid: {valid})")]
    UnknownFamily { name: String, valid: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("grid node ({i}, {j}) at ({x}, {z}): {cause}")]
    AtNode {
        i: usize,
        j: usize,
        x: f64,
        z: f64,
        cause: Box<Error>,
    },

    #[error("{path}: {cause}")]
    Io { path: String, cause: String },
}

pub type Result<T> = std::result::Result<T, Error>;
