//! File formats, caching, reports and the pipelines behind the `acyc` binary.

pub mod cache;
pub mod newform;
pub mod pipeline;
pub mod report;
pub mod sampling;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("assumption check failed: {0}")]
    Assumption(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Newform(#[from] newform::NewformError),
    #[error(transparent)]
    Cache(#[from] cache::CacheError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Exact(#[from] acyc_core::exactnum::ExactError),
    #[error(transparent)]
    Quad(#[from] acyc_core::quadfield::QuadError),
    #[error(transparent)]
    ClassField(#[from] acyc_core::classfield::ClassFieldError),
    #[error(transparent)]
    Hecke(#[from] acyc_core::heckechar::HeckeError),
    #[error(transparent)]
    Theta(#[from] acyc_core::thetamods::ThetaError),
    #[error(transparent)]
    Quat(#[from] acyc_core::quatgross::QuatError),
    #[error(transparent)]
    L(#[from] acyc_core::lfun::LError),
}

impl CliError {
    /// 2 for a failed hypothesis, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assumption(_) => 2,
            _ => 1,
        }
    }
}
