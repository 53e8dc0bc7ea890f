use crate::qmat::QubitLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: residual {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("trace is {trace} (expected 1)")]
    TraceMismatch { trace: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    /// X-state parameters violating positivity. `best_over_signs` is the
    /// largest minimum eigenvalue reachable by flipping the signs of the c_i.
    #[error(
        "initial state is not a density matrix: minimum eigenvalue {} \
         (best over all sign assignments of |c_i|: {})",
        crate::sweep::format_sig(*min_eigenvalue),
        crate::sweep::format_sig(*best_over_signs)
    )]
    NonPhysicalParams { min_eigenvalue: f64, best_over_signs: f64 },

    #[error("unknown subsystem label {0}")]
    UnknownLabel(QubitLabel),

    #[error("duplicate subsystem label {0}")]
    DuplicateLabel(QubitLabel),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("Kraus completeness violated: residual {residual:e}")]
    Completeness { residual: f64 },

    #[error("state is not X-type (largest off-X entry {max_off_x:e}); use the spectral concurrence")]
    NotXType { max_off_x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
