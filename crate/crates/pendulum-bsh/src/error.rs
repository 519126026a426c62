use crate::operators::BasisIndex;
use std::fmt;

/// Why a value of ħ cannot carry a Bohr-Sommerfeld lattice.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HbarRejection {
    /// ħ is not a finite positive number.
    NotPositive,
    /// An oscillation level `n` sits on the separatrix action 8/π.
    OscillationCollision { n: u64, action: f64 },
    /// A rotation level `m` sits on the separatrix action 4/π.
    RotationCollision { m: u64, action: f64 },
    /// A computed level energy lies within the separatrix band.
    SeparatrixEnergy { n: u64, energy: f64 },
    /// Only the singular torus fits below the separatrix.
    EmptyLattice { top: u64 },
}

impl fmt::Display for HbarRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotPositive => write!(f, "hbar must be finite and positive"),
            Self::OscillationCollision { n, action } => {
                write!(f, "oscillation level {n} has action {action}, on the separatrix value 8/pi")
            }
            Self::RotationCollision { m, action } => {
                write!(f, "rotation level {m} has action {action}, on the separatrix value 4/pi")
            }
            Self::SeparatrixEnergy { n, energy } => {
                write!(f, "level {n} has energy {energy}, inside the separatrix band")
            }
            Self::EmptyLattice { top } => {
                write!(f, "top oscillation quantum number is {top}; at least 1 is required")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} = {value} is outside the domain: {reason}")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature budget exhausted: estimate {estimate}, error bound {error_bound}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("integration failed at t = {t}: step size underflow")]
    Integration { t: f64 },

    #[error("no level with target action {target} in the requested region")]
    NoLevel { target: f64 },

    #[error("hbar = {hbar} rejected: {reason}")]
    RejectedHbar { hbar: f64, reason: HbarRejection },

    #[error("reduced level {k} does not match its unreduced partner (energy mismatch {mismatch:e})")]
    Reconstruction { k: u64, mismatch: f64 },

    #[error("no word maps {from} to {to} inside the truncated lattice")]
    SearchExhausted { from: BasisIndex, to: BasisIndex },

    #[error("no value supplied for basis index {0}")]
    MissingIndex(BasisIndex),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain { what, value, reason }
}
