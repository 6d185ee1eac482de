//! Error type shared across the crate.

/// Errors reported by field evaluations, coordinate inversion and simulation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor precondition was violated (bounds are named in the message).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// `lambda` and `n * epsilon^2` disagree beyond the allowed relative tolerance.
    #[error("inconsistent scaling: lambda = {lambda}, n*epsilon^2 = {n_eps_sq} (relative error {rel:.3e}, allowed 1e-9)")]
    ScalingMismatch { lambda: f64, n_eps_sq: f64, rel: f64 },
    /// The point lies on the closed drift-singularity segment (or its 3D region).
    #[error("point lies on the drift singularity")]
    OnSingularity,
    /// The point coincides with the coordinate origin, where the fields blow up.
    #[error("point coincides with the origin")]
    AtOrigin,
    /// A denominator of the `(u, v)` field expressions vanished.
    #[error("singular denominator in (u,v) expressions at u={u}, v={v}")]
    SingularDenominator { u: f64, v: f64 },
    /// Newton inversion of the coordinate map did not converge.
    #[error("coordinate inversion did not converge (best residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    /// The Laguerre value underflowed relative to its running scale (nodal curve).
    #[error("Laguerre value underflow near a nodal curve (relative magnitude {relative:.3e})")]
    NearNode { relative: f64 },
    /// A simulation configuration field is out of range.
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    /// The requested start point already lies inside the singularity buffer.
    #[error("start point lies inside the singularity buffer")]
    StartInBuffer,
    /// The point is outside the Lyapunov annulus where the certificate is defined.
    #[error("point lies outside the Lyapunov annulus")]
    OutsideAnnulus,
}

pub type Result<T> = std::result::Result<T, Error>;
