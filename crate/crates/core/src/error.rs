use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("signals have different fundamental frequencies ({0} vs {1})")]
    MismatchedFrequency(f64, f64),

    #[error("degenerate design: harmonic {harmonic} is not resolvable (condition number {condition:.3e})")]
    DegenerateDesign { harmonic: usize, condition: f64 },

    #[error("singular Gram matrix at f = {f} with K = {k} (condition number {condition:.3e})")]
    SingularGram { f: f64, k: usize, condition: f64 },

    #[error("SNR is undefined for a constant signal")]
    UndefinedSnr,

    #[error("information is zero: constant signal or zero noise")]
    ZeroInformation,

    #[error("empty frequency grid")]
    EmptyGrid,

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures caused by the numerics of a particular input
    /// (ill-conditioned systems, degenerate signals) rather than by a
    /// malformed request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDesign { .. }
                | Error::SingularGram { .. }
                | Error::ZeroInformation
                | Error::Consistency(_)
        )
    }
}
