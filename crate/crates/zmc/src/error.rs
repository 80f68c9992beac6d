use std::path::PathBuf;

use thiserror::Error;
use zmc_core::holofn::HoloError;
use zmc_core::krust::KrustError;
use zmc_core::univalence::UnivalenceError;
use zmc_core::weierstrass::DataError;

use crate::parse::ParseError;

/// Everything a subcommand can fail with. Each variant maps onto one of the
/// documented process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: ParseError },
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("invalid Weierstrass data: {0}")]
    Data(#[from] DataError),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("univalence oracle was inconclusive (--strict)")]
    Inconclusive,
    #[error("{count} certificate/oracle contradiction(s), first at theta={theta} rho={rho} c_sign={c_sign}")]
    Contradiction { count: usize, theta: f64, rho: f64, c_sign: i8 },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(DataError::Holo(HoloError::QuadratureNoConvergence { .. })) => 3,
            CliError::Parse(_) | CliError::Input { .. } | CliError::Usage(_) | CliError::Data(_) => 2,
            CliError::Numeric(_) | CliError::Inconclusive => 3,
            CliError::Contradiction { .. } => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<HoloError> for CliError {
    fn from(e: HoloError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<UnivalenceError> for CliError {
    fn from(e: UnivalenceError) -> Self {
        match e {
            UnivalenceError::ResolutionTooLow { .. } => CliError::Usage(e.to_string()),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<KrustError> for CliError {
    fn from(e: KrustError) -> Self {
        match e {
            KrustError::InvalidParams(why) => CliError::Usage(why.into()),
            KrustError::Univalence(u) => u.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}
