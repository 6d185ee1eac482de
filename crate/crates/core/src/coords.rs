//! Keplerian elliptic coordinates `(u, v)`.
//!
//! The forward map is
//!
//! ```text
//! x = 2 a e (cos v - u) / (e + u),    y = 2 a e sqrt(1 - u^2) sin v / (e + u),
//! ```
//!
//! with `-e < u <= 1` and `v` in `[0, 2 pi)`. The coordinate curve `u = c` is
//! the ellipse `E_c`; `u = e` is the Kepler ellipse and `u = 1` the opened-out
//! singularity segment. The coordinates are non-orthogonal, so the inverse map
//! is computed by a damped Newton iteration on the forward map, seeded from a
//! coarse grid scan.

use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::Point2;

use std::f64::consts::TAU;

/// Points with `1 - u` below this are treated as on the singularity.
pub const SIGMA_U_TOL: f64 = 1e-10;

/// A point of the coordinate cylinder, `u` in `(-e, 1]`, `v` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerCoord {
    pub u: f64,
    pub v: f64,
}

impl KeplerCoord {
    /// Validates `u` against the parameter domain and normalizes `v` to `[0, 2 pi)`.
    pub fn new(params: &PhysParams, u: f64, v: f64) -> Result<Self> {
        if !(u > -params.e && u <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "u must satisfy -e < u <= 1 (got u = {u}, e = {})",
                params.e
            )));
        }
        Ok(Self { u, v: wrap_angle(v) })
    }
}

/// Real and imaginary parts of `sqrt(1 - 4/nu)` at a point; `alpha >= 0` by
/// the branch convention, `beta` carries the sign of `-sin v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
}

/// Normalizes an angle to `[0, 2 pi)`.
pub fn wrap_angle(v: f64) -> f64 {
    let w = v.rem_euclid(TAU);
    if w == TAU {
        0.0
    } else {
        w
    }
}

/// Forward map `(u, v) -> (x, y)`.
pub fn to_cartesian(params: &PhysParams, kc: KeplerCoord) -> Point2 {
    let (a, e) = (params.a, params.e);
    let s = 2.0 * a * e / (e + kc.u);
    let root = (1.0 - kc.u * kc.u).max(0.0).sqrt();
    [s * (kc.v.cos() - kc.u), s * root * kc.v.sin()]
}

/// Jacobian `d(x, y) / d(u, v)` of the forward map. Requires `u < 1`.
pub fn jacobian(params: &PhysParams, kc: KeplerCoord) -> [[f64; 2]; 2] {
    let (a, e) = (params.a, params.e);
    let (u, v) = (kc.u, kc.v);
    let (sv, cv) = v.sin_cos();
    let root = (1.0 - u * u).max(0.0).sqrt();
    let eu = e + u;
    let k = 2.0 * a * e;
    [
        [-k * (e + cv) / (eu * eu), -k * sv / eu],
        [-k * (1.0 + e * u) * sv / (root * eu * eu), k * root * cv / eu],
    ]
}

/// `alpha` and `beta` in `(u, v)` form:
///
/// ```text
/// alpha = sqrt((1-u^2)(1-e^2)) / (1 + e u - (e+u) cos v)
/// beta  = -(e+u) sin v          / (1 + e u - (e+u) cos v)
/// ```
///
/// The denominator only vanishes at `u = 1`, `v = 0` (the right end of the
/// singularity), which is reported as an error.
pub fn alpha_beta_uv(params: &PhysParams, kc: KeplerCoord) -> Result<AlphaBeta> {
    let e = params.e;
    let (u, v) = (kc.u, kc.v);
    let denom = 1.0 + e * u - (e + u) * v.cos();
    if denom.abs() < 1e-14 {
        return Err(Error::SingularDenominator { u, v });
    }
    let alpha = ((1.0 - u * u).max(0.0) * (1.0 - e * e)).sqrt() / denom;
    let beta = -(e + u) * v.sin() / denom;
    Ok(AlphaBeta { alpha, beta })
}

/// Inverse map `(x, y) -> (u, v)` by damped Newton on the forward map.
///
/// Errors on the closed singularity segment and at the origin; points whose
/// solution lands within [`SIGMA_U_TOL`] of `u = 1` are treated as on the
/// singularity. The returned `v` satisfies `sign(sin v) = sign(y)`.
pub fn from_cartesian(params: &PhysParams, p: Point2) -> Result<KeplerCoord> {
    let r = p[0].hypot(p[1]);
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    if params.singular_segment().contains_closure(p) {
        return Err(Error::OnSingularity);
    }
    let seed = seed_from_grid(params, p);
    let kc = newton_invert(params, p, seed)?;
    if 1.0 - kc.u < SIGMA_U_TOL {
        return Err(Error::OnSingularity);
    }
    Ok(kc)
}

/// Same as [`from_cartesian`] but with a caller-provided seed, used to walk
/// along trajectories where the previous sample is an excellent start point.
pub fn from_cartesian_seeded(
    params: &PhysParams,
    p: Point2,
    seed: KeplerCoord,
) -> Result<KeplerCoord> {
    let r = p[0].hypot(p[1]);
    if r < 1e-14 * params.a {
        return Err(Error::AtOrigin);
    }
    if params.singular_segment().contains_closure(p) {
        return Err(Error::OnSingularity);
    }
    let kc = match newton_invert(params, p, seed) {
        Ok(kc) => kc,
        // Fall back to the global grid seed before giving up.
        Err(_) => newton_invert(params, p, seed_from_grid(params, p))?,
    };
    if 1.0 - kc.u < SIGMA_U_TOL {
        return Err(Error::OnSingularity);
    }
    Ok(kc)
}

fn residual(params: &PhysParams, guess: KeplerCoord, target: Point2) -> [f64; 2] {
    let q = to_cartesian(params, guess);
    [q[0] - target[0], q[1] - target[1]]
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Coarse scan of the coordinate cylinder; two refinement levels keep the
/// cell count small while seeding well even near `u = 1`.
fn seed_from_grid(params: &PhysParams, p: Point2) -> KeplerCoord {
    let e = params.e;
    let scan = |u_lo: f64, u_hi: f64, v_lo: f64, v_hi: f64, n: usize| -> KeplerCoord {
        let mut best = KeplerCoord { u: 0.0, v: 0.0 };
        let mut best_res = f64::INFINITY;
        for i in 0..n {
            let u = u_lo + (u_hi - u_lo) * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let v = v_lo + (v_hi - v_lo) * (j as f64 + 0.5) / n as f64;
                let kc = KeplerCoord { u, v };
                let res = norm2(residual(params, kc, p));
                if res < best_res {
                    best_res = res;
                    best = kc;
                }
            }
        }
        best
    };
    let coarse = scan(-e + 1e-3, 1.0 - 1e-6, 0.0, TAU, 8);
    // Refine around the best cell of the first pass.
    let du = (1.0 + e) / 8.0;
    let dv = TAU / 8.0;
    scan(
        (coarse.u - du).max(-e + 1e-6),
        (coarse.u + du).min(1.0 - 1e-9),
        coarse.v - dv,
        coarse.v + dv,
        8,
    )
}

fn newton_invert(params: &PhysParams, p: Point2, seed: KeplerCoord) -> Result<KeplerCoord> {
    let e = params.e;
    let scale = 1.0 + norm2(p);
    let tol = 1e-13 * scale;
    let mut kc = KeplerCoord {
        u: seed.u.clamp(-e + 1e-12, 1.0 - 1e-12),
        v: seed.v,
    };
    let mut res = residual(params, kc, p);
    let mut res_norm = norm2(res);
    for _ in 0..80 {
        if res_norm < tol {
            // Fix the v branch so that sign(sin v) matches sign(y).
            let v = wrap_angle(kc.v);
            let v = if p[1] < 0.0 && v.sin() > 0.0 {
                TAU - v
            } else if p[1] > 0.0 && v.sin() < 0.0 {
                TAU - v
            } else {
                v
            };
            return Ok(KeplerCoord { u: kc.u, v });
        }
        let j = jacobian(params, kc);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let du = (j[1][1] * res[0] - j[0][1] * res[1]) / det;
        let dv = (-j[1][0] * res[0] + j[0][0] * res[1]) / det;
        // Backtracking line search on the residual norm.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = KeplerCoord {
                u: (kc.u - step * du).clamp(-e + 1e-12, 1.0 - 1e-12),
                v: kc.v - step * dv,
            };
            let trial_res = residual(params, trial, p);
            let trial_norm = norm2(trial_res);
            if trial_norm < res_norm {
                kc = trial;
                res = trial_res;
                res_norm = trial_norm;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res_norm < tol {
        let v = wrap_angle(kc.v);
        let v = if (p[1] < 0.0 && v.sin() > 0.0) || (p[1] > 0.0 && v.sin() < 0.0) {
            TAU - v
        } else {
            v
        };
        return Ok(KeplerCoord { u: kc.u, v });
    }
    Err(Error::NoConvergence { residual: res_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params() -> PhysParams {
        PhysParams::new(1.0, 1.0, 0.5, 0.0).unwrap()
    }

    /// Closed-form inverse used as an independent oracle: a point of `E_u`
    /// satisfies `r + u x = 2 a e (1 - u^2) / (e + u)`, which is a quadratic
    /// in `u`.
    fn invert_closed_form(params: &PhysParams, p: Point2) -> (f64, f64) {
        let (a, e) = (params.a, params.e);
        let r = p[0].hypot(p[1]);
        let qa = p[0] + 2.0 * a * e;
        let qb = r + e * p[0];
        let qc = r * e - 2.0 * a * e;
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        let u = if qa.abs() > 1e-14 {
            let u1 = (-qb + disc) / (2.0 * qa);
            let u2 = (-qb - disc) / (2.0 * qa);
            if u1 > -e && u1 <= 1.0 {
                u1
            } else {
                u2
            }
        } else {
            -qc / qb
        };
        let cos_v = u + p[0] * (e + u) / (2.0 * a * e);
        let v = cos_v.clamp(-1.0, 1.0).acos();
        let v = if p[1] < 0.0 { TAU - v } else { v };
        (u, v)
    }

    #[test]
    fn forward_examples() {
        let p = params();
        let q = to_cartesian(&p, KeplerCoord { u: 0.5, v: 0.0 });
        assert!((q[0] - 0.5).abs() < 1e-15 && q[1].abs() < 1e-15);
        let q = to_cartesian(&p, KeplerCoord { u: 0.5, v: PI });
        assert!((q[0] + 1.5).abs() < 1e-12 && q[1].abs() < 1e-12);
        let q = to_cartesian(&p, KeplerCoord { u: 0.5, v: FRAC_PI_2 });
        assert!((q[0] + 0.5).abs() < 1e-12);
        assert!((q[1] - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn on_ellipse_reduction() {
        let p = params();
        for k in 0..32 {
            let v = TAU * k as f64 / 32.0;
            let q = to_cartesian(&p, KeplerCoord { u: p.e, v });
            let expected = [
                p.a * v.cos() - p.a * p.e,
                p.a * (1.0 - p.e * p.e).sqrt() * v.sin(),
            ];
            assert!((q[0] - expected[0]).abs() < 1e-12);
            assert!((q[1] - expected[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_examples() {
        let p = params();
        let kc = from_cartesian(&p, [-0.5, 0.866_025_403_784_438_6]).unwrap();
        assert!((kc.u - 0.5).abs() < 1e-9);
        assert!((kc.v - FRAC_PI_2).abs() < 1e-9);

        let kc = from_cartesian(&p, [0.5, 0.0]).unwrap();
        assert!((kc.u - 0.5).abs() < 1e-9);
        assert!(kc.v.abs() < 1e-9 || (kc.v - TAU).abs() < 1e-9);

        assert_eq!(from_cartesian(&p, [0.0, 0.0]).unwrap_err(), Error::AtOrigin);
        assert_eq!(
            from_cartesian(&p, [-0.5, 0.0]).unwrap_err(),
            Error::OnSingularity
        );
    }

    #[test]
    fn inverse_matches_closed_form_oracle() {
        let p = params();
        let mut k = 0u64;
        for i in 0..14 {
            for j in 0..16 {
                let u = -p.e + 0.05 + (0.95 + p.e - 0.05) * i as f64 / 14.0;
                let v = TAU * (j as f64 + 0.31) / 16.0;
                let pt = to_cartesian(&p, KeplerCoord { u, v });
                let kc = from_cartesian(&p, pt).unwrap();
                let (u_oracle, v_oracle) = invert_closed_form(&p, pt);
                assert!(
                    (kc.u - u_oracle).abs() < 1e-8,
                    "u mismatch at ({u}, {v}): {} vs {}",
                    kc.u,
                    u_oracle
                );
                let dv = (kc.v - v_oracle).abs().min(TAU - (kc.v - v_oracle).abs());
                assert!(dv < 1e-7, "v mismatch at ({u}, {v})");
                k += 1;
            }
        }
        assert!(k > 200);
    }

    #[test]
    fn inverse_handles_small_radius() {
        // Points near the origin map to u close to 1, v close to 0.
        let p = params();
        for &r in &[1e-3, 1e-4, 1e-5] {
            for &theta in &[0.3, FRAC_PI_2, 2.5, 4.0] {
                let pt = [r * theta.cos(), r * theta.sin()];
                let kc = from_cartesian(&p, pt).unwrap();
                let back = to_cartesian(&p, kc);
                let err = (back[0] - pt[0]).hypot(back[1] - pt[1]);
                assert!(err < 1e-9 * (1.0 + r), "roundtrip {err} at r={r}, theta={theta}");
            }
        }
    }

    #[test]
    fn roundtrip_tolerance() {
        let p = params();
        for i in 0..12 {
            for j in 0..12 {
                let u = -p.e + 0.05 + (0.95 - (-p.e + 0.05)) * i as f64 / 11.0;
                let v = TAU * (j as f64 + 0.17) / 12.0;
                let pt = to_cartesian(&p, KeplerCoord { u, v });
                let kc = from_cartesian(&p, pt).unwrap();
                let back = to_cartesian(&p, kc);
                let err = (back[0] - pt[0]).hypot(back[1] - pt[1]);
                let scale = 1.0 + pt[0].hypot(pt[1]);
                assert!(err < 1e-9 * scale);
                assert_eq!(kc.v.sin() > 0.0, pt[1] > 0.0);
            }
        }
    }

    #[test]
    fn alpha_beta_examples() {
        let p = params();
        let ab = alpha_beta_uv(&p, KeplerCoord { u: 0.5, v: 0.0 }).unwrap();
        assert!((ab.alpha - 3.0).abs() < 1e-12);
        assert!(ab.beta.abs() < 1e-12);

        let ab = alpha_beta_uv(&p, KeplerCoord { u: 0.5, v: FRAC_PI_2 }).unwrap();
        assert!((ab.alpha - 0.6).abs() < 1e-12);
        assert!((ab.beta + 0.8).abs() < 1e-12);

        // On u = 1: alpha = 0, beta = -sin v / (1 - cos v).
        let ab = alpha_beta_uv(&p, KeplerCoord { u: 1.0, v: FRAC_PI_2 }).unwrap();
        assert!(ab.alpha.abs() < 1e-12);
        assert!((ab.beta + 1.0).abs() < 1e-12);

        assert!(matches!(
            alpha_beta_uv(&p, KeplerCoord { u: 1.0, v: 0.0 }),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn alpha_nonnegative_everywhere() {
        let p = params();
        for i in 0..20 {
            for j in 0..20 {
                let u = -p.e + 0.02 + (1.0 + p.e - 0.02) * i as f64 / 20.0;
                let v = TAU * (j as f64 + 0.5) / 20.0;
                if let Ok(ab) = alpha_beta_uv(&p, KeplerCoord { u: u.min(1.0), v }) {
                    assert!(ab.alpha >= 0.0);
                }
            }
        }
    }

    #[test]
    fn beta_jump_across_singularity() {
        // Approaches from y > 0 (v in (0, pi)) and y < 0 (v in (pi, 2 pi))
        // differ by 2 sin v0 / (1 - cos v0) at the same cartesian point.
        let p = params();
        for &v0 in &[0.5, 1.2, 2.0, 2.8] {
            let above = alpha_beta_uv(&p, KeplerCoord { u: 1.0, v: v0 }).unwrap();
            let below = alpha_beta_uv(&p, KeplerCoord { u: 1.0, v: TAU - v0 }).unwrap();
            let jump = below.beta - above.beta;
            let expected = 2.0 * v0.sin() / (1.0 - v0.cos());
            assert!((jump - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let p = params();
        let h = 1e-6;
        for &(u, v) in &[(0.3, 1.0), (-0.2, 2.5), (0.7, 4.4), (0.5, 0.0)] {
            let j = jacobian(&p, KeplerCoord { u, v });
            let xp = to_cartesian(&p, KeplerCoord { u: u + h, v });
            let xm = to_cartesian(&p, KeplerCoord { u: u - h, v });
            let yp = to_cartesian(&p, KeplerCoord { u, v: v + h });
            let ym = to_cartesian(&p, KeplerCoord { u, v: v - h });
            let fd = [
                [(xp[0] - xm[0]) / (2.0 * h), (yp[0] - ym[0]) / (2.0 * h)],
                [(xp[1] - xm[1]) / (2.0 * h), (yp[1] - ym[1]) / (2.0 * h)],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    let scale = 1.0 + fd[r][c].abs();
                    assert!(
                        (j[r][c] - fd[r][c]).abs() < 1e-6 * scale,
                        "J[{r}][{c}] mismatch at ({u}, {v})"
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_on_ellipse_reductions() {
        let p = params();
        // At u = e the map reduces to (a cos v - ae, a sqrt(1-e^2) sin v).
        let j = jacobian(&p, KeplerCoord { u: p.e, v: 0.0 });
        assert!(j[0][1].abs() < 1e-14); // dx/dv = -a sin v = 0
        let j = jacobian(&p, KeplerCoord { u: p.e, v: FRAC_PI_2 });
        assert!(j[1][1].abs() < 1e-14); // dy/dv = a sqrt(1-e^2) cos v = 0
    }

    #[test]
    fn coord_curve_lies_on_family_ellipse() {
        let p = params();
        for &c in &[-0.3, 0.1, 0.5, 0.9] {
            let spec = p.ellipse_family(c).unwrap();
            for k in 0..40 {
                let v = TAU * k as f64 / 40.0;
                let q = to_cartesian(&p, KeplerCoord { u: c, v });
                // Focal form of E_c: r + c x = gamma (1 - c^2).
                let r = q[0].hypot(q[1]);
                let residual = r + c * q[0] - spec.semi_major * (1.0 - c * c);
                assert!(residual.abs() < 1e-10, "c={c}, v={v}: {residual}");
            }
        }
    }

    #[test]
    fn segment_endpoints_match_u1_images() {
        let p = params();
        let seg = p.singular_segment();
        let left = to_cartesian(&p, KeplerCoord { u: 1.0, v: PI });
        assert!((left[0] - seg.x_min_end).abs() < 1e-10);
        assert!(left[1].abs() < 1e-12);
        let right = to_cartesian(&p, KeplerCoord { u: 1.0, v: 1e-6 });
        assert!(right[0].abs() < 1e-10);
    }
}
