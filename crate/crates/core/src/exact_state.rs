//! The finite-`n` atomic elliptic state: the complex argument `nu`, Laguerre
//! recurrences, the exact complex field `Z` and drift, nodal hyperbolas, and
//! the exact invariant density.
//!
//! All Laguerre evaluation goes through the ascending three-term recurrence
//! with running rescaling; the log-derivative ratio uses the identity
//! `z L'_m(z) = m (L_m(z) - L_{m-1}(z))` and is never formed from two
//! independently evaluated polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::{Point2, Point3};

/// Relative Laguerre magnitude below which a point counts as on a nodal curve.
const NODE_REL_TOL: f64 = 1e-12;

/// The complex argument of the state,
/// `nu = (mu / lambda^2) (|x| - x/e - i y sqrt(1-e^2) / e)`.
pub fn nu(params: &PhysParams, p: Point3) -> Result<Complex64> {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    let e = params.e;
    let k = params.mu / (params.lambda * params.lambda);
    Ok(Complex64::new(
        k * (r - p[0] / e),
        -k * p[1] * (1.0 - e * e).sqrt() / e,
    ))
}

/// `L_{m}` and `L_{m-1}` at `z`, commonly rescaled; `log_scale` restores the
/// true magnitude and `max_log` tracks the largest intermediate value so
/// relative underflow (node proximity) can be detected.
struct ScaledPair {
    last: Complex64,
    prev: Complex64,
    log_scale: f64,
    max_log: f64,
}

fn laguerre_pair(m: usize, z: Complex64) -> ScaledPair {
    let mut prev = Complex64::new(1.0, 0.0); // L_0
    let mut last = Complex64::new(1.0, 0.0) - z; // L_1
    let mut log_scale = 0.0;
    let mut max_log: f64 = 0.0; // log |L_0|
    if m == 0 {
        return ScaledPair { last: prev, prev: Complex64::new(0.0, 0.0), log_scale, max_log };
    }
    max_log = max_log.max(last.norm().ln() + log_scale);
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * last - kf * prev) / (kf + 1.0);
        prev = last;
        last = next;
        let mag = last.norm().max(prev.norm());
        if mag > 1e150 {
            prev /= mag;
            last /= mag;
            log_scale += mag.ln();
        }
        let cur = last.norm();
        if cur > 0.0 {
            max_log = max_log.max(cur.ln() + log_scale);
        }
    }
    ScaledPair { last, prev, log_scale, max_log }
}

/// `L'_{n-1}(z) / L_{n-1}(z)` via the derivative identity and the ascending
/// recurrence. Errors when `|L_{n-1}(z)|` underflows relative to the running
/// scale of the recurrence (a nodal curve).
pub fn laguerre_ratio(n: u32, z: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if n == 1 {
        return Ok(Complex64::new(0.0, 0.0)); // L_0 is constant
    }
    let m = (n - 1) as usize;
    let pair = laguerre_pair(m, z);
    let rel = relative_magnitude(&pair);
    if rel < NODE_REL_TOL {
        return Err(Error::NearNode { relative: rel });
    }
    if z.norm() < 1e-12 {
        // z L'_m = m (L_m - L_{m-1}) degenerates; L'_m(0)/L_m(0) = -m.
        return Ok(Complex64::new(-(m as f64), 0.0));
    }
    Ok((m as f64) / z * (Complex64::new(1.0, 0.0) - pair.prev / pair.last))
}

fn relative_magnitude(pair: &ScaledPair) -> f64 {
    let mag = pair.last.norm();
    if mag == 0.0 {
        return 0.0;
    }
    (mag.ln() + pair.log_scale - pair.max_log).exp()
}

/// `log |L_{n-1}(z)|` with the running-scale node check folded in; used by the
/// exact density, which must be evaluated in log space for large `n`.
fn log_abs_laguerre(m: usize, z: Complex64) -> f64 {
    let pair = laguerre_pair(m, z);
    let mag = pair.last.norm();
    if mag == 0.0 {
        f64::NEG_INFINITY
    } else {
        mag.ln() + pair.log_scale
    }
}

/// The complex field of the exact state,
/// `Z = (i mu / lambda)(1 - L'/L) x/|x| + (mu / (lambda e)) (L'/L) (i, -sqrt(1-e^2), 0)`,
/// with the ratio taken at `n nu`.
pub fn z_field_exact(params: &PhysParams, p: Point3) -> Result<[Complex64; 3]> {
    let n = params
        .n
        .ok_or_else(|| Error::InvalidParameter("exact state requires a quantum number n".into()))?;
    let nu_val = nu(params, p)?;
    let ratio = laguerre_ratio(n, n as f64 * nu_val)?;
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let ml = params.mu / params.lambda;
    let radial = Complex64::new(0.0, ml) * (Complex64::new(1.0, 0.0) - ratio);
    let fixed = ratio * (ml / params.e);
    let w = (1.0 - params.e * params.e).sqrt();
    Ok([
        radial * (p[0] / r) + fixed * Complex64::new(0.0, 1.0),
        radial * (p[1] / r) + fixed * Complex64::new(-w, 0.0),
        radial * (p[2] / r),
    ])
}

/// Forward drift of the exact-state diffusion, `b = Re Z - Im Z` componentwise.
pub fn drift_exact(params: &PhysParams, p: Point3) -> Result<Point3> {
    let z = z_field_exact(params, p)?;
    Ok([z[0].re - z[0].im, z[1].re - z[1].im, z[2].re - z[2].im])
}

/// One nodal hyperbola in the `(x, z)` plane: the locus
/// `(mu / lambda^2)(sqrt(x^2 + z^2) - x/e) = root / n`, a conic of
/// eccentricity `1/e` with focus at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalCurve {
    pub k: usize,
    /// Root `r_k` of `L_{n-1}`.
    pub root: f64,
    /// Focal parameter `rho_k = a * root / n`: the locus is `r - x/e = rho_k`.
    pub rho: f64,
    /// Hyperbola eccentricity, `1/e`.
    pub eccentricity: f64,
}

impl NodalCurve {
    /// Radius of the curve at polar angle `theta` in the `(x, z)` plane;
    /// `None` outside the branch (`cos(theta) >= e`).
    pub fn radius(&self, e: f64, theta: f64) -> Option<f64> {
        let denom = e - theta.cos();
        if denom <= 0.0 {
            return None;
        }
        Some(self.rho * e / denom)
    }

    /// Samples the branch with radius at most `r_max`, returning `(x, z)` pairs.
    pub fn sample(&self, e: f64, r_max: f64, count: usize) -> Vec<Point2> {
        // r <= r_max requires e - cos(theta) >= rho e / r_max.
        let cos_bound = (e - self.rho * e / r_max).clamp(-1.0, 1.0);
        let theta_min = cos_bound.acos();
        let theta_max = std::f64::consts::TAU - theta_min;
        (0..count)
            .filter_map(|i| {
                let theta = theta_min + (theta_max - theta_min) * i as f64 / (count - 1).max(1) as f64;
                self.radius(e, theta)
                    .map(|r| [r * theta.cos(), r * theta.sin()])
            })
            .collect()
    }
}

/// The `n - 1` nodal hyperbolas of the state with quantum number `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalCurveSet {
    pub n: u32,
    pub roots: Vec<f64>,
    pub curves: Vec<NodalCurve>,
}

/// Computes the nodal curves from the positive roots of `L_{n-1}`.
pub fn nodal_curves(params: &PhysParams) -> Result<NodalCurveSet> {
    let n = params
        .n
        .ok_or_else(|| Error::InvalidParameter("nodal curves require a quantum number n".into()))?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "nodal curves require n >= 2 (L_0 has no roots)".into(),
        ));
    }
    let roots = laguerre_roots((n - 1) as usize);
    let curves = roots
        .iter()
        .enumerate()
        .map(|(i, &root)| NodalCurve {
            k: i + 1,
            root,
            rho: params.a * root / n as f64,
            eccentricity: 1.0 / params.e,
        })
        .collect();
    Ok(NodalCurveSet { n, roots, curves })
}

/// Roots of the Laguerre polynomial `L_m`, ascending. Newton iteration from
/// the classical initial guesses; stable for the documented range `m <= 200`.
pub fn laguerre_roots(m: usize) -> Vec<f64> {
    let mut roots = Vec::with_capacity(m);
    let mf = m as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * mf),
            1 => z + 15.0 / (1.0 + 2.5 * mf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - roots[i - 2])
            }
        };
        // Newton polish with the recurrence value and derivative identity.
        for _ in 0..100 {
            let (val, prev) = laguerre_real_pair(m, z);
            let deriv = mf * (val - prev) / z;
            let step = val / deriv;
            z -= step;
            if step.abs() < 1e-14 * (1.0 + z.abs()) {
                break;
            }
        }
        roots.push(z);
    }
    roots
}

/// `(L_m(x), L_{m-1}(x))` for real `x` with rescaling folded out (the ratio
/// used by Newton is scale-free, so a plain pair is returned for moderate `m`).
fn laguerre_real_pair(m: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut last = 1.0 - x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * last - kf * prev) / (kf + 1.0);
        prev = last;
        last = next;
        let mag = last.abs().max(prev.abs());
        if mag > 1e150 {
            prev /= mag;
            last /= mag;
        }
    }
    (last, prev)
}

/// Scaled residual `|L_{n-1}(root)|` relative to the running recurrence scale.
pub fn root_residual(m: usize, root: f64) -> f64 {
    let pair = laguerre_pair(m, Complex64::new(root, 0.0));
    relative_magnitude(&pair)
}

/// Unnormalized exact invariant density
/// `exp(-2 n mu |x| / lambda^2) |L_{n-1}(n nu)|^2`; exactly zero on nodes.
pub fn invariant_density_exact(params: &PhysParams, p: Point3) -> Result<f64> {
    Ok(log_invariant_density_exact(params, p)?.exp())
}

/// Log of the exact invariant density (`-inf` on nodes); preferred for large
/// `n`, where the density over- and underflows in linear scale.
pub fn log_invariant_density_exact(params: &PhysParams, p: Point3) -> Result<f64> {
    let n = params
        .n
        .ok_or_else(|| Error::InvalidParameter("exact density requires a quantum number n".into()))?;
    let nu_val = nu(params, p)?;
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let log_l = log_abs_laguerre((n - 1) as usize, n as f64 * nu_val);
    Ok(-2.0 * n as f64 * params.mu * r / (params.lambda * params.lambda) + 2.0 * log_l)
}
