//! Fields of the Bohr correspondence limit: the complex field `Z`, the 2D/3D
//! drifts built from `alpha` and `beta`, the `R`/`S` potentials, the limiting
//! invariant density, closed forms for divergence and speed, and the
//! singularity set.
//!
//! Everything is evaluated from the `alpha`/`beta` closed forms; `R` and `S`
//! are used only for the density and for residual checks.

use num_complex::Complex64;

use crate::coords::{self, AlphaBeta, KeplerCoord};
use crate::error::{Error, Result};
use crate::params::{PhysParams, SingularSegment};
use crate::{Point2, Point3};

/// `epsilon^2`-scaled log-amplitude and phase of the limiting state:
/// `r_val = eps^2 R_eps`, `s_val = eps^2 S_eps`, so that the forward drift is
/// `grad(r_val + s_val)` independently of `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsValue {
    pub r_val: f64,
    pub s_val: f64,
}

fn guard_2d(params: &PhysParams, p: Point2) -> Result<()> {
    let r = p[0].hypot(p[1]);
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    if params.singular_segment().contains_closure(p) {
        return Err(Error::OnSingularity);
    }
    Ok(())
}

fn guard_3d(params: &PhysParams, p: Point3) -> Result<()> {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    if SigmaRegion::new(params).contains_closure(p) {
        return Err(Error::OnSingularity);
    }
    Ok(())
}

/// `alpha`/`beta` from the cartesian closed forms, shared by the 2D and 3D
/// front ends (`r` is the full norm of the point in either dimension).
fn alpha_beta_raw(params: &PhysParams, x: f64, y: f64, r: f64) -> AlphaBeta {
    let (a, e) = (params.a, params.e);
    let w_sq = 1.0 - e * e;
    let base = e * r - x;
    let d = base * base + w_sq * y * y;
    let a1 = {
        let t = base - 4.0 * a * e;
        (t * t + w_sq * y * y) / d
    };
    let a2 = {
        let t = base - 2.0 * a * e;
        (t * t + w_sq * y * y - 4.0 * a * a * e * e) / d
    };
    let alpha = (0.5 * (a1.sqrt() + a2)).max(0.0).sqrt();
    let beta = if y == 0.0 {
        0.0
    } else {
        -2.0 * a * e * w_sq.sqrt() * y / (d * alpha)
    };
    AlphaBeta { alpha, beta }
}

/// `alpha`/`beta` at a planar point (the `z = 0` restriction).
pub fn alpha_beta_cartesian2(params: &PhysParams, p: Point2) -> Result<AlphaBeta> {
    guard_2d(params, p)?;
    Ok(alpha_beta_raw(params, p[0], p[1], p[0].hypot(p[1])))
}

/// `alpha`/`beta` at a spatial point.
pub fn alpha_beta_cartesian3(params: &PhysParams, p: Point3) -> Result<AlphaBeta> {
    guard_3d(params, p)?;
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    Ok(alpha_beta_raw(params, p[0], p[1], r))
}

/// The limiting complex field
/// `Z = (i mu / 2 lambda)(1 + s) x/|x| + (mu / (2 lambda e))(1 - s)(i, -sqrt(1-e^2), 0)`
/// with `s = alpha + i beta`. Satisfies `Z^2/2 - mu/|x| = -mu^2/(2 lambda^2)`.
pub fn z_field_limit(params: &PhysParams, p: Point3) -> Result<[Complex64; 3]> {
    let ab = alpha_beta_cartesian3(params, p)?;
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let s = Complex64::new(ab.alpha, ab.beta);
    let half_ml = params.mu / (2.0 * params.lambda);
    let radial = Complex64::new(0.0, half_ml) * (Complex64::new(1.0, 0.0) + s);
    let fixed = (Complex64::new(1.0, 0.0) - s) * (half_ml / params.e);
    let w = (1.0 - params.e * params.e).sqrt();
    Ok([
        radial * (p[0] / r) + fixed * Complex64::new(0.0, 1.0),
        radial * (p[1] / r) + fixed * Complex64::new(-w, 0.0),
        radial * (p[2] / r),
    ])
}

fn drift_from_alpha_beta(params: &PhysParams, ab: AlphaBeta, x: f64, y: f64, z: f64, r: f64) -> Point3 {
    let (alpha, beta) = (ab.alpha, ab.beta);
    let e = params.e;
    let k = params.mu / (2.0 * params.lambda);
    let w = (1.0 - e * e).sqrt();
    let sum1 = alpha + beta + 1.0;
    [
        k * ((alpha + beta - 1.0) / e - sum1 * x / r),
        k * ((alpha - beta - 1.0) * w / e - sum1 * y / r),
        -k * sum1 * z / r,
    ]
}

/// The 3D limiting drift.
pub fn drift3(params: &PhysParams, p: Point3) -> Result<Point3> {
    let ab = alpha_beta_cartesian3(params, p)?;
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    Ok(drift_from_alpha_beta(params, ab, p[0], p[1], p[2], r))
}

/// The planar limiting drift (equals the `(x, y)` components of [`drift3`] at `z = 0`).
pub fn drift2(params: &PhysParams, p: Point2) -> Result<Point2> {
    let ab = alpha_beta_cartesian2(params, p)?;
    let r = p[0].hypot(p[1]);
    let b = drift_from_alpha_beta(params, ab, p[0], p[1], 0.0, r);
    Ok([b[0], b[1]])
}

/// The `eps^2`-scaled potentials of the limiting state at a planar point.
///
/// `nu = a_t + i b_t` with `a_t = (mu/lambda^2)(|x| - x/e)` and
/// `b_t = -mu y sqrt(1-e^2) / (lambda^2 e)`; then
///
/// ```text
/// r_val = (lambda/2)(ln(a_t^2+b_t^2) + 2 ln((1+alpha)^2+beta^2) + (1-alpha) a_t + beta b_t) - mu |x| / lambda
/// s_val = lambda (arg(a_t + i b_t) + 2 arg(1 + alpha + i beta) + b_t (1-alpha)/2 - beta a_t / 2)
/// ```
///
/// `s_val` carries the principal branch of `arg`, which is discontinuous
/// across the positive `x` axis where `nu` is negative real.
pub fn rs_functions(params: &PhysParams, p: Point2) -> Result<RsValue> {
    let ab = alpha_beta_cartesian2(params, p)?;
    let (mu, lambda, e) = (params.mu, params.lambda, params.e);
    let r = p[0].hypot(p[1]);
    let w = (1.0 - e * e).sqrt();
    let a_t = mu / (lambda * lambda) * (r - p[0] / e);
    let b_t = -mu * p[1] * w / (lambda * lambda * e);
    if a_t == 0.0 && b_t == 0.0 {
        return Err(Error::AtOrigin);
    }
    let r_val = 0.5
        * lambda
        * ((a_t * a_t + b_t * b_t).ln()
            + 2.0 * ((1.0 + ab.alpha).powi(2) + ab.beta * ab.beta).ln()
            + (1.0 - ab.alpha) * a_t
            + ab.beta * b_t)
        - mu * r / lambda;
    let s_val = lambda
        * (b_t.atan2(a_t) + 2.0 * ab.beta.atan2(1.0 + ab.alpha) + 0.5 * b_t * (1.0 - ab.alpha)
            - 0.5 * ab.beta * a_t);
    Ok(RsValue { r_val, s_val })
}

/// Log of the unnormalized invariant density `exp(2 R_eps)` in `(u, v)` form,
/// with the diffusion scale passed explicitly (the Lyapunov function uses
/// `eps = 1` regardless of the simulation's `eps`).
pub fn log_invariant_density_limit_with(
    params: &PhysParams,
    epsilon: f64,
    u: f64,
    v: f64,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(
            "invariant density requires epsilon > 0".into(),
        ));
    }
    let (e, a, mu, lambda) = (params.e, params.a, params.mu, params.lambda);
    let w = ((1.0 - e * e) * (1.0 - u * u).max(0.0)).sqrt();
    let eps_sq = epsilon * epsilon;
    let ratio = (1.0 + e * u + w) / (e + u);
    let exponent = 2.0 * a * mu * (u - e + (e * u - 1.0 + w) * v.cos()) / ((e + u) * eps_sq * lambda);
    Ok(lambda / eps_sq * (16f64.ln() + 2.0 * ratio.ln()) + exponent)
}

/// Unnormalized invariant density of the limiting diffusion at a coordinate
/// point, using the `epsilon` carried by `params`.
pub fn invariant_density_limit(params: &PhysParams, kc: KeplerCoord) -> Result<f64> {
    Ok(log_invariant_density_limit_with(params, params.epsilon, kc.u, kc.v)?.exp())
}

/// Unnormalized invariant density at a cartesian point, via `exp(2 r_val / eps^2)`.
/// Unlike the `(u, v)` form this needs no coordinate inversion.
pub fn invariant_density_limit_xy(params: &PhysParams, p: Point2) -> Result<f64> {
    if !(params.epsilon > 0.0) {
        return Err(Error::InvalidParameter(
            "invariant density requires epsilon > 0".into(),
        ));
    }
    let rs = rs_functions(params, p)?;
    Ok((2.0 * rs.r_val / (params.epsilon * params.epsilon)).exp())
}

/// Trapezoid normalizer of the unnormalized density over the box
/// `[-3a, 2a] x [-3a, 2a]` (enough to cover the ellipse at desk scale).
/// Grid points on the singular segment contribute zero (a measure-zero set).
pub fn density_normalizer(params: &PhysParams, n: usize) -> Result<f64> {
    let (lo, hi) = (-3.0 * params.a, 2.0 * params.a);
    let h = (hi - lo) / (n - 1) as f64;
    let mut total = 0.0;
    for i in 0..n {
        let x = lo + i as f64 * h;
        let wx = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        for j in 0..n {
            let y = lo + j as f64 * h;
            let wy = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            let v = invariant_density_limit_xy(params, [x, y]).unwrap_or(0.0);
            total += wx * wy * v;
        }
    }
    Ok(total * h * h)
}

/// Cartesian divergence of the planar drift, in the `(u, v)` closed form.
pub fn divergence_uv(params: &PhysParams, u: f64, v: f64) -> Result<f64> {
    let (e, a, mu, lambda) = (params.e, params.a, params.mu, params.lambda);
    let (sv, cv) = v.sin_cos();
    let w = ((1.0 - e * e) * (1.0 - u * u).max(0.0)).sqrt();
    let denom = 4.0 * a * e * lambda * (u * cv - 1.0) * (e * u + (e + u) * cv + 1.0);
    if denom.abs() < 1e-300 {
        return Err(Error::SingularDenominator { u, v });
    }
    Ok(mu * (e + u) * (e * u + (e + u) * (cv + sv) + w + 1.0) / denom)
}

/// Cartesian divergence of the planar drift at a cartesian point.
pub fn divergence(params: &PhysParams, p: Point2) -> Result<f64> {
    guard_2d(params, p)?;
    let kc = coords::from_cartesian(params, p)?;
    divergence_uv(params, kc.u, kc.v)
}

/// Squared drift speed `|b|^2` in the `(u, v)` closed form. Continuous across
/// the singularity (it is even in `v`).
pub fn speed_sq_uv(params: &PhysParams, u: f64, v: f64) -> Result<f64> {
    let (e, a, mu) = (params.e, params.a, params.mu);
    let cv = v.cos();
    let w = ((1.0 - e * e) * (1.0 - u * u).max(0.0)).sqrt();
    let denom = a * e * e * (u * cv - 1.0);
    if denom.abs() < 1e-300 {
        return Err(Error::SingularDenominator { u, v });
    }
    Ok(mu * (e * cv + 1.0) * (w - 1.0) / denom)
}

/// Squared drift speed at a cartesian point. Defined everywhere off the
/// origin, including on the singularity itself (where the drift jumps but its
/// magnitude does not).
pub fn speed_sq(params: &PhysParams, p: Point2) -> Result<f64> {
    let r = p[0].hypot(p[1]);
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    let seg = params.singular_segment();
    if seg.contains_closure(p) {
        // u = 1 branch: cos v recovered from x alone.
        let cv = 1.0 + p[0] * (1.0 + params.e) / (2.0 * params.a * params.e);
        let w = 0.0;
        let denom = params.a * params.e * params.e * (cv - 1.0);
        if denom.abs() < 1e-300 {
            return Err(Error::AtOrigin);
        }
        return Ok(params.mu * (params.e * cv + 1.0) * (w - 1.0) / denom);
    }
    let kc = coords::from_cartesian(params, p)?;
    speed_sq_uv(params, kc.u, kc.v)
}

/// Diagnostic residual of the similarity-transformed Hamiltonian on the
/// would-be ground state: `|H psi| / |psi|` at `eps = 1`, where
/// `H = (-Delta + b^2 + div b) / 2` and `psi = exp(R - S)`, with the
/// Laplacian taken by 5-point stencil (step `h`).
///
/// For a state that solved the Schrodinger equation exactly this would vanish
/// identically. The limiting state solves it only up to `O(eps^2)`, and the
/// residual here equals `Re(div Z)` (the energy identity kills the other
/// term): zero on the symmetry axis `y = 0`, order one away from it.
pub fn similarity_residual(params: &PhysParams, p: Point2, h: f64) -> Result<f64> {
    let mut unit = *params;
    unit.epsilon = 1.0;
    let psi = |q: Point2| -> Result<f64> {
        let rs = rs_functions(&unit, q)?;
        Ok((rs.r_val - rs.s_val).exp())
    };
    let c = psi(p)?;
    let lap = (psi([p[0] + h, p[1]])? + psi([p[0] - h, p[1]])? + psi([p[0], p[1] + h])?
        + psi([p[0], p[1] - h])?
        - 4.0 * c)
        / (h * h);
    let b = drift2(&unit, p)?;
    let div = divergence(&unit, p)?;
    Ok((0.5 * (-lap + (b[0] * b[0] + b[1] * b[1]) * c + div * c) / c).abs())
}

/// Location and value of the global minimum of `|b|^2`:
/// `x_min = (-4a / ((1+e)(2-e)), 0)` with value `(1-e) mu / (2a)`.
pub fn speed_sq_minimum(params: &PhysParams) -> (Point2, f64) {
    let (e, a, mu) = (params.e, params.a, params.mu);
    (
        [-4.0 * a / ((1.0 + e) * (2.0 - e)), 0.0],
        (1.0 - e) * mu / (2.0 * a),
    )
}

/// The planar singularity segment (re-exported from the parameter module).
pub fn singularity_set_2d(params: &PhysParams) -> SingularSegment {
    params.singular_segment()
}

/// The 3D singularity region: the set in the plane `y = 0` with
/// `lower(z) < x < upper(z)`, where
///
/// ```text
/// lower(z) = -e (4a - sqrt(16 a^2 e^2 + z^2 (1 - e^2))) / (1 - e^2)
/// upper(z) =  e |z| / sqrt(1 - e^2)
/// ```
#[derive(Debug, Clone, Copy)]
pub struct SigmaRegion {
    a: f64,
    e: f64,
}

impl SigmaRegion {
    pub fn new(params: &PhysParams) -> Self {
        Self { a: params.a, e: params.e }
    }

    pub fn lower_x(&self, z: f64) -> f64 {
        let w_sq = 1.0 - self.e * self.e;
        let root = (16.0 * self.a * self.a * self.e * self.e + z * z * w_sq).sqrt();
        -self.e * (4.0 * self.a - root) / w_sq
    }

    pub fn upper_x(&self, z: f64) -> f64 {
        self.e * z.abs() / (1.0 - self.e * self.e).sqrt()
    }

    /// Membership in the open region.
    pub fn contains(&self, p: Point3) -> bool {
        p[1] == 0.0 && p[0] > self.lower_x(p[2]) && p[0] < self.upper_x(p[2])
    }

    /// Membership in the closed region.
    pub fn contains_closure(&self, p: Point3) -> bool {
        p[1] == 0.0 && p[0] >= self.lower_x(p[2]) && p[0] <= self.upper_x(p[2])
    }

    /// Euclidean distance from `p` to the (closed) region. Exact for points
    /// over the region; for points beside it the in-plane distance is found
    /// by a scan-and-refine search along the boundary curves.
    pub fn distance(&self, p: Point3) -> f64 {
        let dxz = self.distance_xz(p[0], p[2]);
        p[1].hypot(dxz)
    }

    fn distance_xz(&self, x: f64, z: f64) -> f64 {
        if x >= self.lower_x(z) && x <= self.upper_x(z) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for bound in [true, false] {
            let f = |zp: f64| -> f64 {
                let bx = if bound { self.lower_x(zp) } else { self.upper_x(zp) };
                (x - bx).hypot(z - zp)
            };
            let guess = f(z);
            let span = (2.0 * guess).max(0.05 * self.a);
            let (mut lo, mut hi) = (z - span, z + span);
            let mut best_zp = z;
            let mut best_d = guess;
            for i in 0..=64 {
                let zp = lo + (hi - lo) * i as f64 / 64.0;
                let d = f(zp);
                if d < best_d {
                    best_d = d;
                    best_zp = zp;
                }
            }
            let step = (hi - lo) / 64.0;
            lo = best_zp - step;
            hi = best_zp + step;
            // Golden-section refinement of the bracketed minimum.
            let phi = 0.618_033_988_749_894_9;
            let (mut c, mut d) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
            for _ in 0..60 {
                if f(c) < f(d) {
                    hi = d;
                } else {
                    lo = c;
                }
                c = hi - phi * (hi - lo);
                d = lo + phi * (hi - lo);
            }
            best = best.min(f(0.5 * (lo + hi)));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{alpha_beta_uv, from_cartesian, to_cartesian};
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn params() -> PhysParams {
        PhysParams::new(1.0, 1.0, 0.5, 0.0).unwrap()
    }

    fn params_eps(eps: f64) -> PhysParams {
        PhysParams::new(1.0, 1.0, 0.5, eps).unwrap()
    }

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn z_field_perihelion() {
        let p = params();
        let z = z_field_limit(&p, [0.5, 0.0, 0.0]).unwrap();
        assert!(z[0].norm() < 1e-12);
        assert!((z[1] - Complex64::new(SQRT3, 0.0)).norm() < 1e-12);
        assert!(z[2].norm() < 1e-14);
    }

    #[test]
    fn z_field_energy_identity() {
        let p = params();
        let region = SigmaRegion::new(&p);
        let mut checked = 0;
        let mut step = 0u64;
        while checked < 100 {
            step += 1;
            let r = 0.2 + 2.3 * crate::rng::uniform_open01(3, 0, step, 0);
            let th = TAU * crate::rng::uniform_open01(3, 0, step, 1);
            let zc = 0.8 * (crate::rng::uniform_open01(3, 0, step, 2) - 0.5);
            let pt = [r * th.cos(), r * th.sin(), zc];
            // Keep a small margin off the singular region, where the
            // alpha/beta evaluation loses digits to cancellation.
            if region.distance(pt) < 0.02 {
                continue;
            }
            let z = z_field_limit(&p, pt).unwrap();
            let z_sq = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
            let rr = (pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]).sqrt();
            let residual = 0.5 * z_sq - Complex64::new(p.mu / rr + p.energy, 0.0);
            assert!(residual.norm() < 1e-10, "residual {} at {pt:?}", residual.norm());
            checked += 1;
        }
    }

    #[test]
    fn z_field_rejects_singularity() {
        let p = params();
        assert_eq!(
            z_field_limit(&p, [-0.5, 0.0, 0.0]).unwrap_err(),
            Error::OnSingularity
        );
        assert_eq!(z_field_limit(&p, [0.0, 0.0, 0.0]).unwrap_err(), Error::AtOrigin);
    }

    #[test]
    fn alpha_beta_examples() {
        let p = params();
        let ab = alpha_beta_cartesian2(&p, [0.5, 0.0]).unwrap();
        assert!((ab.alpha - 3.0).abs() < 1e-12 && ab.beta.abs() < 1e-15);

        let ab = alpha_beta_cartesian2(&p, [-0.5, 0.866_025_403_784_438_6]).unwrap();
        assert!((ab.alpha - 0.6).abs() < 1e-10);
        assert!((ab.beta + 0.8).abs() < 1e-10);

        // y -> -y flips beta and fixes alpha.
        let up = alpha_beta_cartesian2(&p, [0.3, 0.9]).unwrap();
        let down = alpha_beta_cartesian2(&p, [0.3, -0.9]).unwrap();
        assert!((up.alpha - down.alpha).abs() < 1e-14);
        assert!((up.beta + down.beta).abs() < 1e-14);
    }

    #[test]
    fn alpha_beta_matches_uv_form() {
        let p = params();
        for i in 0..15 {
            for j in 0..15 {
                let u = -p.e + 0.06 + (0.94 + p.e - 0.06) * i as f64 / 15.0;
                let v = TAU * (j as f64 + 0.4) / 15.0;
                let kc = KeplerCoord { u, v };
                let pt = to_cartesian(&p, kc);
                let via_uv = alpha_beta_uv(&p, kc).unwrap();
                let via_xy = match alpha_beta_cartesian2(&p, pt) {
                    Ok(ab) => ab,
                    Err(_) => continue,
                };
                let scale = 1.0 + via_uv.alpha.abs();
                assert!((via_uv.alpha - via_xy.alpha).abs() < 1e-10 * scale);
                let scale = 1.0 + via_uv.beta.abs();
                assert!((via_uv.beta - via_xy.beta).abs() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn drift_examples() {
        let p = params();
        let b = drift3(&p, [0.5, 0.0, 0.0]).unwrap();
        assert!(b[0].abs() < 1e-12);
        assert!((b[1] - SQRT3).abs() < 1e-12);
        assert!(b[2].abs() < 1e-15);

        let b = drift3(&p, [-1.5, 0.0, 0.0]).unwrap();
        assert!(b[0].abs() < 1e-12);
        assert!((b[1] + 1.0 / SQRT3).abs() < 1e-12);

        // b_z pushes towards the plane when alpha + beta + 1 > 0.
        for &z in &[0.1, -0.1] {
            let b = drift3(&p, [0.5, 0.0, z]).unwrap();
            assert!(b[2] * z < 0.0);
        }
    }

    #[test]
    fn drift2_examples() {
        let p = params();
        let b = drift2(&p, [0.5, 0.0]).unwrap();
        assert!(b[0].abs() < 1e-12 && (b[1] - SQRT3).abs() < 1e-12);

        // Speed cross-check at the perihelion.
        let s = speed_sq(&p, [0.5, 0.0]).unwrap();
        assert!((b[0] * b[0] + b[1] * b[1] - s).abs() < 1e-10);

        // Just outside the left end of the segment: finite.
        let left = -4.0 * p.a * p.e / (1.0 + p.e) - 0.01;
        let b = drift2(&p, [left, 0.0]).unwrap();
        assert!(b[0].is_finite() && b[1].is_finite());
    }

    #[test]
    fn drift3_restricts_to_drift2() {
        let p = params();
        for step in 0..50u64 {
            let x = -2.0 + 4.0 * crate::rng::uniform_open01(9, 0, step, 0);
            let y = -2.0 + 4.0 * crate::rng::uniform_open01(9, 0, step, 1);
            let (b3, b2) = match (drift3(&p, [x, y, 0.0]), drift2(&p, [x, y])) {
                (Ok(b3), Ok(b2)) => (b3, b2),
                _ => continue,
            };
            assert!((b3[0] - b2[0]).abs() < 1e-12);
            assert!((b3[1] - b2[1]).abs() < 1e-12);
            assert!(b3[2].abs() < 1e-15);
        }
    }

    #[test]
    fn rs_gradient_reproduces_drift() {
        let p = params_eps(0.3);
        let h = 1e-5;
        let mut checked = 0;
        for step in 0..200u64 {
            let x = -2.0 + 4.0 * crate::rng::uniform_open01(17, 0, step, 0);
            let y = -2.0 + 4.0 * crate::rng::uniform_open01(17, 0, step, 1);
            if y.abs() < 0.1 {
                continue; // keep the finite-difference stencil off the branch cut
            }
            let b = match drift2(&p, [x, y]) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let sum = |pt: Point2| -> Option<f64> {
                rs_functions(&p, pt).ok().map(|rs| rs.r_val + rs.s_val)
            };
            let (Some(fx), Some(bx), Some(fy), Some(by)) = (
                sum([x + h, y]),
                sum([x - h, y]),
                sum([x, y + h]),
                sum([x, y - h]),
            ) else {
                continue;
            };
            let grad = [(fx - bx) / (2.0 * h), (fy - by) / (2.0 * h)];
            for c in 0..2 {
                let scale = 1.0 + b[c].abs();
                assert!(
                    (grad[c] - b[c]).abs() < 1e-6 * scale,
                    "component {c} at ({x}, {y}): {} vs {}",
                    grad[c],
                    b[c]
                );
            }
            checked += 1;
        }
        assert!(checked >= 100, "only {checked} points checked");
    }

    #[test]
    fn rs_on_ellipse_value() {
        // exp(2 R) = (16/e^2)^(lambda/eps^2) on u = e; with unit parameters: 64.
        let p = params_eps(1.0);
        for &v in &[0.4, FRAC_PI_2, 2.0, 4.4] {
            let pt = to_cartesian(&p, KeplerCoord { u: p.e, v });
            let rs = rs_functions(&p, pt).unwrap();
            assert!(((2.0 * rs.r_val).exp() - 64.0).abs() < 1e-8, "v = {v}");
        }
    }

    #[test]
    fn rs_symmetry_under_y_reflection() {
        let p = params_eps(1.0);
        for &(x, y) in &[(0.4, 0.8), (-1.1, 0.5), (-0.4, 1.3)] {
            let up = rs_functions(&p, [x, y]).unwrap();
            let down = rs_functions(&p, [x, -y]).unwrap();
            assert!((up.r_val - down.r_val).abs() < 1e-12);
            assert!((up.s_val + down.s_val).abs() < 1e-12);
        }
    }

    #[test]
    fn density_peak_value_and_flatness() {
        let p = params_eps(1.0);
        for &v in &[0.0, 1.0, 2.5, 4.0, 5.5] {
            let d = invariant_density_limit(&p, KeplerCoord { u: p.e, v }).unwrap();
            assert!((d - 64.0).abs() < 1e-10, "on-ellipse value {d} at v={v}");
        }
        for &v in &[0.7, 3.0] {
            let below = invariant_density_limit(&p, KeplerCoord { u: p.e - 0.05, v }).unwrap();
            let above = invariant_density_limit(&p, KeplerCoord { u: p.e + 0.05, v }).unwrap();
            assert!(below < 64.0 && above < 64.0);
        }
    }

    #[test]
    fn density_sharpens_as_epsilon_shrinks() {
        let coarse = params_eps(1.0);
        let fine = params_eps(0.5);
        let kc = KeplerCoord { u: 0.3, v: 1.2 };
        let peak = |p: &PhysParams| (16.0 / (p.e * p.e)).powf(p.lambda / (p.epsilon * p.epsilon));
        let rc = invariant_density_limit(&coarse, kc).unwrap() / peak(&coarse);
        let rf = invariant_density_limit(&fine, kc).unwrap() / peak(&fine);
        assert!(rf < rc, "ratio-to-peak should shrink: {rf} vs {rc}");
    }

    #[test]
    fn density_uv_and_xy_routes_agree() {
        let p = params_eps(0.8);
        for &(u, v) in &[(0.2, 0.9), (0.6, 2.2), (-0.1, 4.0)] {
            let kc = KeplerCoord { u, v };
            let via_uv = invariant_density_limit(&p, kc).unwrap();
            let via_xy = invariant_density_limit_xy(&p, to_cartesian(&p, kc)).unwrap();
            let rel = (via_uv - via_xy).abs() / via_uv.max(1e-300);
            assert!(rel < 1e-8, "u={u}, v={v}: {via_uv} vs {via_xy}");
        }
    }

    #[test]
    fn divergence_value_and_fd() {
        let p = params();
        let d = divergence(&p, [0.5, 0.0]).unwrap();
        assert!((d + 4.0 / 3.0).abs() < 1e-10, "divergence {d}");

        let h = 1e-5;
        for &(x, y) in &[(1.2, 0.7), (-1.0, 0.9), (0.1, -1.4), (2.0, 0.3)] {
            let d = divergence(&p, [x, y]).unwrap();
            let bx_p = drift2(&p, [x + h, y]).unwrap();
            let bx_m = drift2(&p, [x - h, y]).unwrap();
            let by_p = drift2(&p, [x, y + h]).unwrap();
            let by_m = drift2(&p, [x, y - h]).unwrap();
            let fd = (bx_p[0] - bx_m[0]) / (2.0 * h) + (by_p[1] - by_m[1]) / (2.0 * h);
            let scale = 1.0 + d.abs();
            assert!((fd - d).abs() < 1e-5 * scale, "at ({x}, {y}): {fd} vs {d}");
        }
    }

    #[test]
    fn divergence_origin_scaling() {
        // r * div b -> -mu/(2 lambda) as r -> 0, uniformly over directions.
        // (Both the closed form and finite differences of the drift give the
        // 1/2; expanding the closed form at u -> 1, v -> 0 confirms it.)
        let p = params();
        let limit = -p.mu / (2.0 * p.lambda);
        for &theta in &[0.5f64, 2.0, 3.9, 5.5] {
            let mut prev_err = f64::INFINITY;
            for &r in &[1e-3, 1e-4, 1e-5] {
                let pt = [r * theta.cos(), r * theta.sin()];
                let kc = from_cartesian(&p, pt).unwrap();
                let d = divergence_uv(&p, kc.u, kc.v).unwrap();
                let err = (r * d - limit).abs();
                assert!(err < prev_err, "not shrinking at r={r}, theta={theta}");
                prev_err = err;
            }
            assert!(prev_err < 0.01, "theta={theta}: final error {prev_err}");
        }
    }

    #[test]
    fn divergence_sign_change_iff_supercritical() {
        // On the Kepler ellipse, div b changes sign only for e > 1/sqrt(2).
        let sub = params();
        let mut max_div = f64::NEG_INFINITY;
        for k in 0..720 {
            let v = TAU * k as f64 / 720.0;
            max_div = max_div.max(divergence_uv(&sub, sub.e, v).unwrap());
        }
        assert!(max_div < 0.0, "e=0.5 should have div < 0 on the orbit, got {max_div}");

        let sup = PhysParams::new(1.0, 1.0, 0.8, 0.0).unwrap();
        let mut max_div = f64::NEG_INFINITY;
        let mut min_div = f64::INFINITY;
        for k in 0..720 {
            let v = TAU * k as f64 / 720.0;
            let d = divergence_uv(&sup, sup.e, v).unwrap();
            max_div = max_div.max(d);
            min_div = min_div.min(d);
        }
        assert!(max_div > 0.0 && min_div < 0.0, "e=0.8 should change sign");
    }

    #[test]
    fn speed_examples() {
        let p = params();
        let s = speed_sq(&p, [0.5, 0.0]).unwrap();
        assert!((s - 3.0).abs() < 1e-10);

        let (x_min, val) = speed_sq_minimum(&p);
        assert!((x_min[0] + 1.777_777_777_777_777_8).abs() < 1e-12);
        assert!((val - 0.25).abs() < 1e-15);
        let s = speed_sq(&p, x_min).unwrap();
        assert!((s - val).abs() < 1e-10);
        // Nearby values are larger.
        for &dx in &[-0.1, 0.1] {
            assert!(speed_sq(&p, [x_min[0] + dx, 0.0]).unwrap() > val);
        }
        for &dy in &[-0.1, 0.1] {
            assert!(speed_sq(&p, [x_min[0], dy]).unwrap() > val);
        }
    }

    #[test]
    fn speed_matches_drift_norm_and_symmetry() {
        let p = params();
        for i in 0..12 {
            for j in 0..12 {
                let u = -p.e + 0.08 + (0.9 + p.e - 0.08) * i as f64 / 12.0;
                let v = TAU * (j as f64 + 0.3) / 12.0;
                let pt = to_cartesian(&p, KeplerCoord { u, v });
                let (b, s) = match (drift2(&p, pt), speed_sq_uv(&p, u, v)) {
                    (Ok(b), Ok(s)) => (b, s),
                    _ => continue,
                };
                let norm_sq = b[0] * b[0] + b[1] * b[1];
                assert!((norm_sq - s).abs() < 1e-10 * (1.0 + s));
                // v -> -v symmetry.
                let mirrored = speed_sq_uv(&p, u, TAU - v).unwrap();
                assert!((mirrored - s).abs() < 1e-12 * (1.0 + s));
            }
        }
    }

    #[test]
    fn speed_continuous_across_sigma() {
        // |b|^2 is even in v, hence continuous across the segment: the values
        // just above and just below agree exactly, and both approach the
        // on-segment value linearly in |y|.
        let p = params();
        let x = -0.7;
        let on_sigma = speed_sq(&p, [x, 0.0]).unwrap();
        let above = speed_sq(&p, [x, 1e-3]).unwrap();
        let below = speed_sq(&p, [x, -1e-3]).unwrap();
        assert!((above - below).abs() < 1e-12);
        assert!((on_sigma - above).abs() < 5e-3, "gap {}", (on_sigma - above).abs());
        let closer = speed_sq(&p, [x, 1e-4]).unwrap();
        assert!((on_sigma - closer).abs() < (on_sigma - above).abs());
    }

    #[test]
    fn sigma_region_2d_and_3d() {
        let p = params();
        let seg = singularity_set_2d(&p);
        assert!((seg.x_min_end + 4.0 / 3.0).abs() < 1e-15);

        let region = SigmaRegion::new(&p);
        assert!(region.contains([-0.5, 0.0, 0.0]));
        assert!(!region.contains([-0.5, 0.1, 0.0]));
        assert!(!region.contains([0.5, 0.0, 0.0]));
        // At z = 0 the region reduces to the planar segment.
        assert!((region.lower_x(0.0) - seg.x_min_end).abs() < 1e-12);
        assert!(region.upper_x(0.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_vanishes_on_sigma_boundary() {
        let p = params();
        let region = SigmaRegion::new(&p);
        for &z in &[0.0, 0.3, 0.8, 1.5] {
            for x in [region.lower_x(z), region.upper_x(z)] {
                if x == 0.0 && z == 0.0 {
                    continue; // the origin
                }
                let r = x.hypot(z);
                let ab = alpha_beta_raw(&p, x, 0.0, r);
                assert!(ab.alpha.abs() < 1e-8, "alpha = {} at ({x}, 0, {z})", ab.alpha);
            }
        }
    }

    #[test]
    fn sigma_region_distance() {
        let p = params();
        let region = SigmaRegion::new(&p);
        // Over the region: distance is |y|.
        assert!((region.distance([-0.5, 0.2, 0.0]) - 0.2).abs() < 1e-12);
        // Right of the tip at z = 0 the nearest boundary is the slanted cone
        // x = e |z| / sqrt(1 - e^2), at distance x * sqrt(1 - e^2).
        let d = region.distance([0.1, 0.0, 0.0]);
        let expected = 0.1 * (1.0 - p.e * p.e).sqrt();
        assert!((d - expected).abs() < 1e-6, "distance {d} vs {expected}");
        // Left of the left end the boundary is locally flat in z.
        let left = region.lower_x(0.0);
        let d = region.distance([left - 0.05, 0.0, 0.0]);
        assert!((d - 0.05).abs() < 1e-6, "distance {d}");
    }

    #[test]
    fn similarity_residual_equals_re_div_z() {
        // The residual reduces, via the energy identity, to Re(div Z): the
        // two routes must agree even though neither vanishes off the axis.
        let p = params_eps(1.0);
        let h = 1e-4;
        for &(x, y) in &[(0.8, 0.9), (-1.2, 0.6), (1.5, -1.1), (-0.4, -1.3)] {
            let res = similarity_residual(&p, [x, y], h).unwrap();
            let mut div = Complex64::new(0.0, 0.0);
            for c in 0..2 {
                let mut f = [x, y, 0.0];
                let mut b = [x, y, 0.0];
                f[c] += h;
                b[c] -= h;
                let zf = z_field_limit(&p, f).unwrap();
                let zb = z_field_limit(&p, b).unwrap();
                div += (zf[c] - zb[c]) / (2.0 * h);
            }
            assert!(
                (res - div.re.abs()).abs() < 1e-3 * (1.0 + div.re.abs()),
                "at ({x}, {y}): residual {res} vs |Re div Z| {}",
                div.re.abs()
            );
        }
    }

    #[test]
    fn similarity_residual_vanishes_on_symmetry_axis() {
        // Re(div Z) is odd in y, so the residual decays linearly towards the
        // axis (and the formal ground-state identity holds exactly there).
        let p = params_eps(1.0);
        let h = 1e-4;
        for &x in &[0.6, 1.4, -1.8] {
            let near = similarity_residual(&p, [x, 1e-4], h).unwrap();
            let far = similarity_residual(&p, [x, 0.3], h).unwrap();
            assert!(near < 1e-3, "axis residual {near} at x = {x}");
            assert!(near < 0.1 * far.max(1e-6), "no decay towards the axis at x = {x}");
        }
    }

    #[test]
    fn normalizer_is_finite_and_positive() {
        let p = params_eps(0.5);
        let z = density_normalizer(&p, 101).unwrap();
        assert!(z.is_finite() && z > 0.0);
    }
}
