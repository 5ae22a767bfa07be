use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid uncertainty state: {0}")]
    InvalidState(String),
    #[error("generalized uncertainty inequality violated by {margin:e}")]
    UncertaintyViolation { margin: f64 },
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("operation not supported in the {0} regime")]
    UnsupportedRegime(&'static str),
    #[error("moments are not those of a Gaussian (U − ħ²/4 = {excess:e})")]
    NotGaussian { excess: f64 },
    #[error("grid does not cover the packet: {0}")]
    InsufficientCoverage(String),
    #[error("grid under-resolves the wavefunction (norm deficit {deficit:e})")]
    GridUnderresolution { deficit: f64 },
    #[error("wavefunction reached the grid boundary (edge amplitude {edge:e} at t = {time})")]
    BoundaryContamination { edge: f64, time: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid time step: {0}")]
    StepSize(String),
    #[error("wavefunction not normalized (norm deficit {deficit:e})")]
    NormDeficit { deficit: f64 },
    #[error("snapshot format: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
