//! Physical parameters and the first-class geometric objects built from them:
//! the Kepler ellipse, the ellipse family `E_c`, and the singularity segment.

use crate::error::{Error, Result};
use crate::Point2;

/// Relative tolerance for the `lambda = n * epsilon^2` scaling check.
const SCALING_REL_TOL: f64 = 1e-9;

/// Physical constants of the problem plus the derived orbit data.
///
/// The force constant `mu`, angular-momentum scale `lambda` and eccentricity
/// `e` fix the Kepler ellipse (semi-major axis `a = lambda^2 / mu`, energy
/// `E = -mu^2 / (2 lambda^2)`). `epsilon` is the diffusion scale; the optional
/// quantum number `n` is only carried for finite-`n` (exact state) work and
/// must satisfy `lambda = n * epsilon^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub mu: f64,
    pub lambda: f64,
    /// Orbital eccentricity, `0 < e < 1`.
    pub e: f64,
    /// Diffusion scale, `epsilon >= 0`.
    pub epsilon: f64,
    /// Quantum number for the exact state, if any.
    pub n: Option<u32>,
    /// Semi-major axis of the Kepler ellipse, `a = lambda^2 / mu`.
    pub a: f64,
    /// Orbit energy, `-mu^2 / (2 lambda^2) = -mu / (2 a)`.
    pub energy: f64,
}

impl PhysParams {
    /// Builds parameters without a quantum number.
    pub fn new(mu: f64, lambda: f64, e: f64, epsilon: f64) -> Result<Self> {
        Self::with_n(mu, lambda, e, epsilon, None)
    }

    /// Builds parameters carrying a quantum number; enforces the
    /// `lambda = n * epsilon^2` scaling to relative `1e-9`.
    pub fn with_n(mu: f64, lambda: f64, e: f64, epsilon: f64, n: Option<u32>) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 0 (got {mu})")));
        }
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be > 0 (got {lambda})"
            )));
        }
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eccentricity must satisfy 0 < e < 1 (got {e})"
            )));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be >= 0 (got {epsilon})"
            )));
        }
        if let Some(n) = n {
            if n < 1 {
                return Err(Error::InvalidParameter("n must be >= 1".into()));
            }
            let n_eps_sq = n as f64 * epsilon * epsilon;
            let rel = (n_eps_sq - lambda).abs() / lambda;
            if rel > SCALING_REL_TOL {
                return Err(Error::ScalingMismatch { lambda, n_eps_sq, rel });
            }
        }
        let a = lambda * lambda / mu;
        Ok(Self {
            mu,
            lambda,
            e,
            epsilon,
            n,
            a,
            energy: -mu / (2.0 * a),
        })
    }

    /// Parameters for the exact state with quantum number `n`, taking
    /// `epsilon = sqrt(lambda / n)`.
    pub fn for_quantum_number(mu: f64, lambda: f64, e: f64, n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        let epsilon = (lambda / n as f64).sqrt();
        Self::with_n(mu, lambda, e, epsilon, Some(n))
    }

    /// Point of the Kepler ellipse at polar angle `theta`:
    /// `r = a (1 - e^2) / (1 + e cos(theta))` from the focus at the origin.
    pub fn kepler_ellipse_point(&self, theta: f64) -> Point2 {
        let r = self.a * (1.0 - self.e * self.e) / (1.0 + self.e * theta.cos());
        [r * theta.cos(), r * theta.sin()]
    }

    /// Orbital period of the Kepler ellipse, `2 pi sqrt(a^3 / mu)`.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.a.powi(3) / self.mu).sqrt()
    }

    /// The ellipse `E_c` of the confocal-at-one-focus family, `-e < c <= 1`.
    pub fn ellipse_family(&self, c: f64) -> Result<EllipseSpec> {
        EllipseSpec::new(self, c)
    }

    /// The drift-singularity segment in the plane.
    pub fn singular_segment(&self) -> SingularSegment {
        SingularSegment::new(self)
    }
}

/// One member of the ellipse family `E_c`: eccentricity `|c|`, semi-major
/// axis `2 a e / (e + c)`, one focus at the origin. `c = e` is the Kepler
/// ellipse; `c = 1` degenerates to the closure of the singularity segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    /// Family parameter, `-e < c <= 1`.
    pub c: f64,
    pub semi_major: f64,
    pub eccentricity: f64,
    /// Always the origin.
    pub focus1: Point2,
    /// Second focus, at distance `2 * semi_major * |c|` along `-x` (signed by `c`).
    pub focus2: Point2,
    /// Set for `c = 1`, where the ellipse collapses onto the singularity.
    pub degenerate: bool,
}

impl EllipseSpec {
    pub fn new(params: &PhysParams, c: f64) -> Result<Self> {
        let e = params.e;
        if !(c > -e) {
            return Err(Error::InvalidParameter(format!(
                "family parameter must satisfy c > -e (got c = {c}, e = {e})"
            )));
        }
        if !(c <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "family parameter must satisfy c <= 1 (got {c})"
            )));
        }
        let semi_major = 2.0 * params.a * e / (e + c);
        Ok(Self {
            c,
            semi_major,
            eccentricity: c.abs(),
            focus1: [0.0, 0.0],
            focus2: [-2.0 * semi_major * c, 0.0],
            degenerate: c == 1.0,
        })
    }

    /// Point of the ellipse at eccentric-angle-like parameter `v` (this is the
    /// coordinate curve `u = c` of the Keplerian elliptic coordinates).
    pub fn point(&self, params: &PhysParams, v: f64) -> Point2 {
        let (e, a, c) = (params.e, params.a, self.c);
        let s = 2.0 * a * e / (e + c);
        [
            s * (v.cos() - c),
            s * (1.0 - c * c).max(0.0).sqrt() * v.sin(),
        ]
    }

    /// True when `p` lies strictly inside the ellipse.
    ///
    /// Uses the focal form: interior points satisfy `r + c x < gamma (1 - c^2)`.
    pub fn contains(&self, p: Point2) -> bool {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        r + self.c * p[0] < self.semi_major * (1.0 - self.c * self.c)
    }
}

/// The open singularity segment `Sigma` on `y = 0` and its attractive part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSegment {
    /// Left end, `-4 a e / (1 + e)`.
    pub x_min_end: f64,
    /// Right end, `0` (the origin).
    pub x_max_end: f64,
    /// Sub-interval attractive from `y > 0`: `[-4ae/(1+e), -2ae/(1+e)]`.
    pub attractive_sub: (f64, f64),
}

impl SingularSegment {
    pub fn new(params: &PhysParams) -> Self {
        let ae = params.a * params.e;
        let left = -4.0 * ae / (1.0 + params.e);
        Self {
            x_min_end: left,
            x_max_end: 0.0,
            attractive_sub: (left, -2.0 * ae / (1.0 + params.e)),
        }
    }

    /// True when `p` lies on the open segment.
    pub fn contains(&self, p: Point2) -> bool {
        p[1] == 0.0 && p[0] > self.x_min_end && p[0] < self.x_max_end
    }

    /// True when `p` lies on the closed segment (endpoints included).
    pub fn contains_closure(&self, p: Point2) -> bool {
        p[1] == 0.0 && p[0] >= self.x_min_end && p[0] <= self.x_max_end
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_params() -> PhysParams {
        PhysParams::new(1.0, 1.0, 0.5, 0.0).unwrap()
    }

    #[test]
    fn derived_fields() {
        let p = default_params();
        assert_eq!(p.a, 1.0);
        assert_eq!(p.energy, -0.5);
        let p2 = PhysParams::new(1.0, 2.0, 0.5, 0.0).unwrap();
        assert_eq!(p2.a, 4.0);
        assert!((p2.energy + 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn quantum_number_scaling() {
        let p = PhysParams::for_quantum_number(1.0, 1.0, 0.5, 20).unwrap();
        assert_eq!(p.n, Some(20));
        assert!((p.epsilon - 0.223_606_8).abs() < 1e-7);
        // Mismatched epsilon is rejected.
        let err = PhysParams::with_n(1.0, 1.0, 0.5, 0.3, Some(20)).unwrap_err();
        assert!(matches!(err, Error::ScalingMismatch { .. }));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(PhysParams::new(1.0, 1.0, 1.2, 0.0).is_err());
        assert!(PhysParams::new(0.0, 1.0, 0.5, 0.0).is_err());
        assert!(PhysParams::new(1.0, -1.0, 0.5, 0.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 0.5, -0.1).is_err());
    }

    #[test]
    fn kepler_point_examples() {
        let p = default_params();
        let peri = p.kepler_ellipse_point(0.0);
        assert!((peri[0] - 0.5).abs() < 1e-15 && peri[1].abs() < 1e-15);
        let apo = p.kepler_ellipse_point(std::f64::consts::PI);
        assert!((apo[0] + 1.5).abs() < 1e-12 && apo[1].abs() < 1e-12);
        let top = p.kepler_ellipse_point(std::f64::consts::FRAC_PI_2);
        assert!(top[0].abs() < 1e-15 && (top[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn kepler_point_satisfies_focal_chord_equation() {
        let p = default_params();
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let [x, y] = p.kepler_ellipse_point(theta);
            let r = x.hypot(y);
            let residual = r + p.e * x - p.a * (1.0 - p.e * p.e);
            assert!(residual.abs() < 1e-12, "residual {residual} at theta {theta}");
        }
    }

    #[test]
    fn ellipse_family_examples() {
        let p = default_params();
        let kepler = p.ellipse_family(p.e).unwrap();
        assert!((kepler.semi_major - 1.0).abs() < 1e-15);
        assert!(!kepler.degenerate);

        let sigma = p.ellipse_family(1.0).unwrap();
        assert!((sigma.semi_major - 2.0 / 3.0).abs() < 1e-15);
        assert!(sigma.degenerate);

        assert!(p.ellipse_family(-0.5).is_err());
        assert!(p.ellipse_family(1.1).is_err());
    }

    #[test]
    fn ellipse_family_focus_spacing() {
        let p = default_params();
        let spec = p.ellipse_family(0.3).unwrap();
        // Second focus sits at 2 * gamma * c along -x.
        assert!((spec.focus2[0] + 2.0 * spec.semi_major * 0.3).abs() < 1e-15);
        assert_eq!(spec.focus1, [0.0, 0.0]);
    }

    #[test]
    fn singular_segment_bounds() {
        let p = default_params();
        let seg = p.singular_segment();
        assert!((seg.x_min_end + 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(seg.x_max_end, 0.0);
        assert!((seg.attractive_sub.0 + 4.0 / 3.0).abs() < 1e-15);
        assert!((seg.attractive_sub.1 + 2.0 / 3.0).abs() < 1e-15);
        assert!(seg.contains([-0.5, 0.0]));
        assert!(!seg.contains([-0.5, 1e-12]));
        assert!(!seg.contains([0.2, 0.0]));
        assert!(seg.contains_closure([0.0, 0.0]));
    }

    #[test]
    fn period_scaling() {
        let p = default_params();
        assert!((p.period() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        let p2 = PhysParams::new(1.0, 2.0, 0.5, 0.0).unwrap(); // a = 4
        assert!((p2.period() - 16.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
