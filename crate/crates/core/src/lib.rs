//! Numerics for the limiting Nelson diffusion of the atomic elliptic state.
//!
//! The library builds the drift fields of the finite-`n` elliptic state and of
//! its correspondence limit, exposes the Keplerian elliptic coordinate system
//! `(u, v)` in which the limit simplifies, and provides the deterministic
//! (`epsilon = 0`) Keplerian dynamical system together with an Euler-Maruyama
//! simulator for the diffusion itself.
//!
//! Modules follow the structure of the problem:
//!
//! * [`params`] - physical parameters, the Kepler ellipse, the ellipse family
//!   `E_c` and the drift singularity segment.
//! * [`coords`] - the non-orthogonal Keplerian elliptic coordinates and the
//!   field quantities `(alpha, beta)` expressed in them.
//! * [`exact_state`] - Laguerre machinery for the finite-`n` state: complex
//!   log-derivative ratios, nodal hyperbolas, drift and invariant density.
//! * [`limit_state`] - the correspondence-limit fields: drifts in 2D/3D,
//!   `R`/`S` functions, invariant density, divergence, speed and the
//!   singularity set.
//! * [`dynamics`] - the `epsilon = 0` flow: RK4 integration, Kepler-law and
//!   stability checks, Lyapunov certificates, symmetry curves.
//! * [`sim`] - seeded stochastic simulation, hitting probabilities, pathwise
//!   coupling to the deterministic flow and the off-plane blip experiments.
//! * [`io`] - the CSV schemas shared by the CLI and the test suite.
//!
//! Ensembles and grid scans run on rayon when the default `parallel` feature
//! is enabled and fall back to sequential loops otherwise; results are
//! bit-identical either way because all randomness is counter-based ([`rng`]).

pub mod coords;
pub mod dynamics;
pub mod error;
pub mod exact_state;
pub mod io;
pub mod limit_state;
pub mod par;
pub mod params;
pub mod rng;
pub mod sim;
pub mod trajectory;

pub use error::{Error, Result};
pub use params::{EllipseSpec, PhysParams, SingularSegment};

/// Planar point `(x, y)`.
pub type Point2 = [f64; 2];
/// Spatial point `(x, y, z)`.
pub type Point3 = [f64; 3];
