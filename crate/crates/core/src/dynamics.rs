//! The `epsilon = 0` Keplerian dynamical system: the `(u, v)` form of the
//! drift with its Ito corrections, fixed-step RK4 integration, Kepler's-law
//! and orbital-stability checks, the `F`-curve family, Lyapunov certificates,
//! and region classification.

use crate::coords::{self, KeplerCoord};
use crate::error::{Error, Result};
use crate::limit_state;
use crate::params::PhysParams;
use crate::trajectory::{Event, EventKind, Trajectory};
use crate::Point2;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Default `u`-buffer around the singularity for the deterministic flow.
pub const DEFAULT_SIGMA_BUFFER: f64 = 1e-3;
/// Origin guard radius, in units of the semi-major axis.
pub const ORIGIN_GUARD: f64 = 1e-4;

/// The drift written in Keplerian elliptic coordinates.
///
/// `b_u` and `b_v` are the full coordinate rates `du/dt`, `dv/dt` (Ito terms
/// included); `ito_u`/`ito_v` are the `epsilon^2`-scaled correction parts of
/// those rates, and `grad_u`/`grad_v` are the cartesian gradients of the two
/// coordinates, which multiply `epsilon dB` in the `(u, v)` form of the SDE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvDrift {
    pub b_u: f64,
    pub b_v: f64,
    pub ito_u: f64,
    pub ito_v: f64,
    /// Common prefactor of the `(u, v)` equations.
    pub h: f64,
    pub grad_u: [f64; 2],
    pub grad_v: [f64; 2],
}

/// Evaluates the `(u, v)` drift at `kc` for diffusion scale `epsilon`.
pub fn drift_uv(params: &PhysParams, kc: KeplerCoord, epsilon: f64) -> Result<UvDrift> {
    let (e, a, mu, lambda) = (params.e, params.a, params.mu, params.lambda);
    let (u, v) = (kc.u, kc.v);
    let (sv, cv) = v.sin_cos();
    let root_u = (1.0 - u * u).max(0.0).sqrt();
    let w = ((1.0 - e * e) * (1.0 - u * u).max(0.0)).sqrt();

    let d1 = 1.0 - u * cv;
    let d2 = e * u + (e + u) * cv + 1.0;
    if d1.abs() < 1e-14 || d2.abs() < 1e-14 {
        return Err(Error::SingularDenominator { u, v });
    }

    let h = (e + u) / (2.0 * a * e * d1 * d2);
    let pref = mu / (2.0 * e * lambda);

    let b_u_raw = -pref
        * (e + u)
        * root_u
        * ((1.0 - e * e).sqrt() * (u + cv - sv) - root_u * (e + cv - sv));
    let b_v_raw = -pref
        * (w * (e + cv + sv)
            - u * (1.0 + e * e)
            - 2.0 * e
            - (e * e + 2.0 * u * e + 1.0) * cv
            - (1.0 - e * e) * sv);

    let d2_sq = d2 * d2;
    let i_u = -(e + u) * (e + u) / (4.0 * a * e * d2_sq)
        * ((e + u) * (e + u) * ((2.0 * u * u - 1.0) * cv * cv + 1.0)
            + 2.0 * u * ((e + u) * (e + u) - (1.0 - u * u) * (1.0 + e * u)) * cv
            - (1.0 - u * u) * (1.0 - e * e));
    let i_v = (e + u) * sv / (4.0 * a * d2_sq)
        * (2.0 * (u + e) * (u + e) - (1.0 + e * u) * (1.0 + e * u) + (e + u) * (e * u + 1.0) * cv);

    let eps_sq = epsilon * epsilon;
    let grad_u = [
        -h * (e + u) * (1.0 - u * u) * cv,
        -h * (e + u) * root_u * sv,
    ];
    let grad_v = [-h * (1.0 + e * u) * sv, h * root_u * (e + cv)];
    Ok(UvDrift {
        b_u: h * (eps_sq * i_u + b_u_raw),
        b_v: h * (eps_sq * i_v + b_v_raw),
        ito_u: h * eps_sq * i_u,
        ito_v: h * eps_sq * i_v,
        h,
        grad_u,
        grad_v,
    })
}

/// True when `p` lies strictly inside the buffer ellipse `E_{1-delta}`.
pub fn inside_sigma_buffer(params: &PhysParams, p: Point2, delta: f64) -> bool {
    let c = 1.0 - delta;
    let gamma = 2.0 * params.a * params.e / (params.e + c);
    let r = p[0].hypot(p[1]);
    r + c * p[0] < gamma * (1.0 - c * c)
}

/// Integrates the deterministic flow `x' = b(x)` by classical fixed-step RK4.
///
/// The path stops with an annotated event when it enters the `u > 1 - delta`
/// buffer around the singularity (default `delta = 1e-3`) or the origin guard
/// `r < 1e-4 a`; reaching `t_span` records a horizon event.
pub fn integrate_ode(params: &PhysParams, start: Point2, t_span: f64, dt: f64) -> Result<Trajectory> {
    integrate_ode_with(params, start, t_span, dt, DEFAULT_SIGMA_BUFFER)
}

/// [`integrate_ode`] with an explicit singularity buffer width.
pub fn integrate_ode_with(
    params: &PhysParams,
    start: Point2,
    t_span: f64,
    dt: f64,
    delta: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("dt must be > 0 (got {dt})")));
    }
    if !(t_span > 0.0) {
        return Err(Error::InvalidConfig(format!("t_span must be > 0 (got {t_span})")));
    }
    let r0 = start[0].hypot(start[1]);
    if r0 < ORIGIN_GUARD * params.a || inside_sigma_buffer(params, start, delta) {
        return Err(Error::StartInBuffer);
    }

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut uv = Vec::new();
    let mut events = Vec::new();
    let mut seed: Option<KeplerCoord> = None;

    let mut record = |t: f64, x: Point2, seed: &mut Option<KeplerCoord>| {
        times.push(t);
        states.push([x[0], x[1], 0.0]);
        let kc = match seed {
            Some(s) => coords::from_cartesian_seeded(params, x, *s).ok(),
            None => coords::from_cartesian(params, x).ok(),
        };
        if let Some(k) = kc {
            *seed = Some(k);
        }
        uv.push(kc.map(|k| (k.u, k.v)));
    };

    let mut x = start;
    let mut t = 0.0;
    record(t, x, &mut seed);
    'outer: while t < t_span - 1e-12 {
        let step = dt.min(t_span - t);
        let k = match rk4_stages(params, x, step) {
            Some(k) => k,
            None => {
                // A stage landed on the singular set: treat as a hit.
                events.push(Event { t, kind: EventKind::SigmaHit });
                break 'outer;
            }
        };
        x = k;
        t += step;
        if !(x[0].is_finite() && x[1].is_finite()) {
            events.push(Event { t, kind: EventKind::NonFinite });
            break;
        }
        let r = x[0].hypot(x[1]);
        if r < ORIGIN_GUARD * params.a {
            record(t, x, &mut seed);
            events.push(Event { t, kind: EventKind::OriginApproach });
            break;
        }
        if inside_sigma_buffer(params, x, delta) {
            record(t, x, &mut seed);
            events.push(Event { t, kind: EventKind::SigmaHit });
            break;
        }
        record(t, x, &mut seed);
        if t >= t_span - 1e-12 {
            events.push(Event { t, kind: EventKind::Horizon });
        }
    }
    Ok(Trajectory {
        times,
        states,
        dimension: 2,
        events,
        uv_trace: Some(uv),
    })
}

fn rk4_stages(params: &PhysParams, x: Point2, dt: f64) -> Option<Point2> {
    let f = |p: Point2| limit_state::drift2(params, p).ok();
    let k1 = f(x)?;
    let k2 = f([x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1]])?;
    let k3 = f([x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1]])?;
    let k4 = f([x[0] + dt * k3[0], x[1] + dt * k3[1]])?;
    Some([
        x[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Orbital period `2 pi sqrt(a^3 / mu)`.
pub fn period(params: &PhysParams) -> f64 {
    params.period()
}

/// The same period recovered dynamically as `int dv / (dv/dt)` along `u = e`,
/// by the trapezoid rule (spectrally accurate for this periodic integrand).
pub fn period_via_quadrature(params: &PhysParams, n: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        let v = TAU * i as f64 / n as f64;
        let rate = drift_uv(params, KeplerCoord { u: params.e, v }, 0.0)
            .expect("on-ellipse drift is regular")
            .b_v;
        total += 1.0 / rate;
    }
    total * TAU / n as f64
}

/// The trace integral `int_0^T Tr(db/dx) dt` along the Kepler orbit, computed
/// two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityIntegral {
    /// Quadrature of the closed-form integrand
    /// `-(e cos v + e sin v + 1) / (e^2 + 2 e cos v + 1)` over one turn of `v`.
    pub closed_form: f64,
    /// Trapezoid in time of the finite-difference Jacobian trace along the
    /// RK4-integrated orbit.
    pub finite_difference: f64,
}

/// Computes both routes of the trace integral (the closed form equals `-2 pi`
/// for every `0 < e < 1`).
pub fn stability_integral(params: &PhysParams) -> Result<StabilityIntegral> {
    let e = params.e;
    let n = 8192;
    let mut closed = 0.0;
    for i in 0..n {
        let v = TAU * i as f64 / n as f64;
        closed -= (e * v.cos() + e * v.sin() + 1.0) / (e * e + 2.0 * e * v.cos() + 1.0);
    }
    closed *= TAU / n as f64;

    // Finite-difference route along the integrated orbit.
    let t_period = period(params);
    let dt = 1e-3 * (params.a.powi(3) / params.mu).sqrt();
    let traj = integrate_ode(params, params.kepler_ellipse_point(0.0), t_period, dt)?;
    let h = 1e-6;
    let trace_at = |p: Point2| -> Result<f64> {
        let xp = limit_state::drift2(params, [p[0] + h, p[1]])?;
        let xm = limit_state::drift2(params, [p[0] - h, p[1]])?;
        let yp = limit_state::drift2(params, [p[0], p[1] + h])?;
        let ym = limit_state::drift2(params, [p[0], p[1] - h])?;
        Ok((xp[0] - xm[0]) / (2.0 * h) + (yp[1] - ym[1]) / (2.0 * h))
    };
    let mut fd = 0.0;
    for i in 0..traj.len() - 1 {
        let ta = trace_at([traj.states[i][0], traj.states[i][1]])?;
        let tb = trace_at([traj.states[i + 1][0], traj.states[i + 1][1]])?;
        fd += 0.5 * (ta + tb) * (traj.times[i + 1] - traj.times[i]);
    }
    Ok(StabilityIntegral { closed_form: closed, finite_difference: fd })
}

/// The two-parameter curve family
/// `F_(e1,e2)(v) = e1 (1 - cos v sin v) + e2 (cos v - sin v)`.
pub fn f_curve(e1: f64, e2: f64, v: f64) -> f64 {
    let (sv, cv) = v.sin_cos();
    e1 * (1.0 - cv * sv) + e2 * (cv - sv)
}

/// The zero-radial-velocity branch `u = F_(e,1)(v) / F_(-1,-e)(v)`, defined on
/// `v` in `(pi/2, pi)`.
pub fn f_ratio(params: &PhysParams, v: f64) -> Result<f64> {
    if !(v > FRAC_PI_2 && v < PI) {
        return Err(Error::InvalidParameter(format!(
            "f_ratio is defined for v in (pi/2, pi), got {v}"
        )));
    }
    let denom = f_curve(-1.0, -params.e, v);
    if denom.abs() < 1e-14 {
        return Err(Error::SingularDenominator { u: f64::NAN, v });
    }
    Ok(f_curve(params.e, 1.0, v) / denom)
}

/// The critical family parameter
/// `e~ = (-2 sqrt(2) + 3 e) / (-3 + 2 sqrt(2) e)`: the minimum of the
/// zero-radial-velocity curve, attained at `v = 3 pi / 4`. Equals `e` exactly
/// at `e = 1/sqrt(2)`.
pub fn tilde_e(e: f64) -> f64 {
    let s = 2.0 * 2.0f64.sqrt();
    (-s + 3.0 * e) / (-3.0 + s * e)
}

/// The eccentricity at which `tilde_e(e) = e`, located by bisection on the
/// numerically minimized curve (rather than on the closed form).
pub fn critical_eccentricity() -> f64 {
    let g = |e: f64| -> f64 {
        let params = PhysParams::new(1.0, 1.0, e, 0.0).unwrap();
        let curve = SymmetryCurve {
            kind: SymmetryCurveKind::RadialVelocityZero,
            v_min: FRAC_PI_2,
            v_max: PI,
        };
        curve.min_u(&params) - e
    };
    let (mut lo, mut hi) = (0.3, 0.95);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Annulus `int(E_{-e+delta1}) \ int(E_{1-delta2})` on which the Lyapunov
/// function is certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub delta1: f64,
    pub delta2: f64,
}

impl Default for Annulus {
    fn default() -> Self {
        Self { delta1: 0.1, delta2: 0.1 }
    }
}

/// Lyapunov pair `(V, dV/dt)` at a cartesian point inside the annulus.
///
/// `V = (16/e^2)^lambda - exp(2 R)|_{eps=1}`; the derivative along the flow is
/// assembled from analytic `(u, v)` partials chained with the coordinate rates.
pub fn lyapunov(params: &PhysParams, p: Point2, annulus: &Annulus) -> Result<(f64, f64)> {
    let kc = coords::from_cartesian(params, p)?;
    if !(kc.u > -params.e + annulus.delta1 && kc.u <= 1.0 - annulus.delta2) {
        return Err(Error::OutsideAnnulus);
    }
    lyapunov_uv(params, kc.u, kc.v)
}

/// Lyapunov pair at a coordinate point (`u < 1` required).
pub fn lyapunov_uv(params: &PhysParams, u: f64, v: f64) -> Result<(f64, f64)> {
    let (e, a, mu, lambda) = (params.e, params.a, params.mu, params.lambda);
    let peak = (16.0 / (e * e)).powf(lambda);
    let g = limit_state::log_invariant_density_limit_with(params, 1.0, u, v)?.exp();

    // Partials of log G.
    let w = ((1.0 - e * e) * (1.0 - u * u)).sqrt();
    let (sv, cv) = v.sin_cos();
    let w_u = -u * (1.0 - e * e) / w;
    let q = u - e + (e * u - 1.0 + w) * cv;
    let dl_du = 2.0 * lambda * (e + w_u) / (1.0 + e * u + w) - 2.0 * lambda / (e + u)
        + (2.0 * a * mu / lambda) * ((1.0 + (e + w_u) * cv) * (e + u) - q) / ((e + u) * (e + u));
    let dl_dv = -(2.0 * a * mu / lambda) * (e * u - 1.0 + w) * sv / (e + u);

    let rates = drift_uv(params, KeplerCoord { u, v }, 0.0)?;
    let v_lpv = peak - g;
    let v_dot = -g * (dl_du * rates.b_u + dl_dv * rates.b_v);
    Ok((v_lpv, v_dot))
}

/// Grid statistics certifying the Lyapunov conditions on the annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovCert {
    pub annulus: Annulus,
    pub grid: usize,
    /// Minimum of `V` over off-ellipse grid points (positive when certified).
    pub min_v_off: f64,
    /// Maximum of `dV/dt` over off-ellipse grid points (negative when certified).
    pub max_vdot_off: f64,
    /// Largest `|V|` sampled on the ellipse itself.
    pub max_v_on: f64,
    /// Largest `|dV/dt|` sampled on the ellipse itself.
    pub max_vdot_on: f64,
    /// Grid points skipped because the fields were not evaluable there.
    pub excluded: usize,
}

/// Scans an `n x n` grid of the annulus (plus the on-ellipse row) and collects
/// the certificate statistics. Rows run in parallel when the feature is on.
pub fn lyapunov_certificate(params: &PhysParams, annulus: &Annulus, n: usize) -> Result<LyapunovCert> {
    let u_lo = -params.e + annulus.delta1;
    let u_hi = 1.0 - annulus.delta2;
    let rows = crate::par::map_indexed(n, |i| {
        let u = u_lo + (u_hi - u_lo) * (i as f64 + 0.5) / n as f64;
        let mut min_v = f64::INFINITY;
        let mut max_vdot = f64::NEG_INFINITY;
        let mut excluded = 0usize;
        if (u - params.e).abs() > 1e-9 {
            for j in 0..n {
                let v = TAU * (j as f64 + 0.5) / n as f64;
                match lyapunov_uv(params, u, v) {
                    Ok((val, dot)) => {
                        min_v = min_v.min(val);
                        max_vdot = max_vdot.max(dot);
                    }
                    Err(_) => excluded += 1,
                }
            }
        }
        (min_v, max_vdot, excluded)
    });
    let mut cert = LyapunovCert {
        annulus: *annulus,
        grid: n,
        min_v_off: f64::INFINITY,
        max_vdot_off: f64::NEG_INFINITY,
        max_v_on: 0.0,
        max_vdot_on: 0.0,
        excluded: 0,
    };
    for (min_v, max_vdot, excluded) in rows {
        cert.min_v_off = cert.min_v_off.min(min_v);
        cert.max_vdot_off = cert.max_vdot_off.max(max_vdot);
        cert.excluded += excluded;
    }
    for j in 0..n {
        let v = TAU * (j as f64 + 0.5) / n as f64;
        let (val, dot) = lyapunov_uv(params, params.e, v)?;
        cert.max_v_on = cert.max_v_on.max(val.abs());
        cert.max_vdot_on = cert.max_vdot_on.max(dot.abs());
    }
    Ok(cert)
}

/// Sequential variant of [`lyapunov_certificate`], for benchmarking against
/// the parallel path.
pub fn lyapunov_certificate_seq(
    params: &PhysParams,
    annulus: &Annulus,
    n: usize,
) -> Result<LyapunovCert> {
    let u_lo = -params.e + annulus.delta1;
    let u_hi = 1.0 - annulus.delta2;
    let mut cert = LyapunovCert {
        annulus: *annulus,
        grid: n,
        min_v_off: f64::INFINITY,
        max_vdot_off: f64::NEG_INFINITY,
        max_v_on: 0.0,
        max_vdot_on: 0.0,
        excluded: 0,
    };
    for i in 0..n {
        let u = u_lo + (u_hi - u_lo) * (i as f64 + 0.5) / n as f64;
        if (u - params.e).abs() <= 1e-9 {
            continue;
        }
        for j in 0..n {
            let v = TAU * (j as f64 + 0.5) / n as f64;
            match lyapunov_uv(params, u, v) {
                Ok((val, dot)) => {
                    cert.min_v_off = cert.min_v_off.min(val);
                    cert.max_vdot_off = cert.max_vdot_off.max(dot);
                }
                Err(_) => cert.excluded += 1,
            }
        }
    }
    for j in 0..n {
        let v = TAU * (j as f64 + 0.5) / n as f64;
        let (val, dot) = lyapunov_uv(params, params.e, v)?;
        cert.max_v_on = cert.max_v_on.max(val.abs());
        cert.max_vdot_on = cert.max_vdot_on.max(dot.abs());
    }
    Ok(cert)
}

/// Region tag for a start point of the deterministic flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    /// Subcritical `e`, start outside `E_e~`: converges to Keplerian motion.
    ConvergesToEllipse,
    /// Supercritical `e`, start outside `E_e`: reaches the annulus between
    /// `E_e` and `E_e~` in finite time (convergence inside it not asserted).
    TrappedInAnnulus,
    /// Start inside the region where no convergence statement is made.
    InteriorUnproven,
    /// Close to the attractive stretch of the singularity, approaching from
    /// `y > 0`.
    NearSigmaAttractive,
    Other,
}

impl RegionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionTag::ConvergesToEllipse => "converges_to_ellipse",
            RegionTag::TrappedInAnnulus => "annulus_bound",
            RegionTag::InteriorUnproven => "interior_unproven",
            RegionTag::NearSigmaAttractive => "near_sigma_attractive",
            RegionTag::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub tag: RegionTag,
    /// Radial coordinate velocity at the point (sign tells approach/retreat
    /// from the singularity in the `(u, v)` frame).
    pub b_u: f64,
}

/// `u` threshold above which a point counts as "near" the singularity.
const NEAR_SIGMA_U: f64 = 0.95;

/// Classifies a start point against the proven regions of attraction.
pub fn classify_point(params: &PhysParams, p: Point2) -> Result<Classification> {
    let kc = coords::from_cartesian(params, p)?;
    let b_u = drift_uv(params, kc, 0.0)?.b_u;
    let e = params.e;
    let e_crit = 1.0 / 2.0f64.sqrt();
    let te = tilde_e(e);
    let tag = if kc.u > NEAR_SIGMA_U && kc.v > FRAC_PI_2 && kc.v < PI {
        RegionTag::NearSigmaAttractive
    } else if e < e_crit - 1e-12 && kc.u < te {
        RegionTag::ConvergesToEllipse
    } else if e > e_crit + 1e-12 && kc.u < e {
        RegionTag::TrappedInAnnulus
    } else if kc.u > e {
        RegionTag::InteriorUnproven
    } else {
        RegionTag::Other
    };
    Ok(Classification { tag, b_u })
}

/// Which field quantity a symmetry curve annihilates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCurveKind {
    /// `du/dt = 0` off the ellipse.
    RadialVelocityZero,
    /// `div b = 0`.
    DivergenceZero,
    /// `alpha + beta + 1 = 0` (the factor steering `b_z` towards the plane).
    PlaneAttractionZero,
}

impl SymmetryCurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SymmetryCurveKind::RadialVelocityZero => "b_u_zero",
            SymmetryCurveKind::DivergenceZero => "div_b_zero",
            SymmetryCurveKind::PlaneAttractionZero => "alpha_beta_plus_one_zero",
        }
    }
}

/// One curve `u = F(v)` of the family, over an open `v`-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCurve {
    pub kind: SymmetryCurveKind,
    pub v_min: f64,
    pub v_max: f64,
}

impl SymmetryCurve {
    /// The `u` value of the curve at `v`.
    pub fn u_at(&self, params: &PhysParams, v: f64) -> f64 {
        let e = params.e;
        match self.kind {
            SymmetryCurveKind::RadialVelocityZero => f_curve(e, 1.0, v) / f_curve(-1.0, -e, v),
            SymmetryCurveKind::DivergenceZero => f_curve(e, 1.0, -v) / f_curve(-1.0, -e, -v),
            SymmetryCurveKind::PlaneAttractionZero => f_curve(e, -1.0, -v) / f_curve(-1.0, e, -v),
        }
    }

    /// Minimum of `u` over the interval (golden-section search).
    pub fn min_u(&self, params: &PhysParams) -> f64 {
        let margin = 1e-9;
        let (mut lo, mut hi) = (self.v_min + margin, self.v_max - margin);
        let phi = 0.618_033_988_749_894_9;
        let (mut c, mut d) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        for _ in 0..90 {
            if self.u_at(params, c) < self.u_at(params, d) {
                hi = d;
            } else {
                lo = c;
            }
            c = hi - phi * (hi - lo);
            d = lo + phi * (hi - lo);
        }
        self.u_at(params, 0.5 * (lo + hi))
    }

    /// Whether the curve's range reaches the Kepler ellipse `u = e`.
    pub fn crosses_kepler_ellipse(&self, params: &PhysParams) -> bool {
        // The curves rise to u = 1 at the interval ends, so crossing is
        // equivalent to the minimum dipping below e.
        self.min_u(params) < params.e
    }

    /// `count` samples `(v, u, x, y)` over the open interval.
    pub fn sample(&self, params: &PhysParams, count: usize) -> Vec<(f64, f64, f64, f64)> {
        let margin = 1e-4;
        (0..count)
            .map(|i| {
                let v = self.v_min + margin
                    + (self.v_max - self.v_min - 2.0 * margin) * i as f64 / (count - 1).max(1) as f64;
                let u = self.u_at(params, v);
                let q = coords::to_cartesian(params, KeplerCoord { u, v: coords::wrap_angle(v) });
                (v, u, q[0], q[1])
            })
            .collect()
    }
}

/// The three symmetry curves: zero radial velocity on `(pi/2, pi)`, zero
/// divergence on `(pi, 3pi/2)` (its reflection), and vanishing plane
/// attraction on `(0, pi/2)`. All three touch the Kepler ellipse exactly at
/// `e = 1/sqrt(2)`.
pub fn symmetry_curves(_params: &PhysParams) -> [SymmetryCurve; 3] {
    [
        SymmetryCurve {
            kind: SymmetryCurveKind::RadialVelocityZero,
            v_min: FRAC_PI_2,
            v_max: PI,
        },
        SymmetryCurve {
            kind: SymmetryCurveKind::DivergenceZero,
            v_min: PI,
            v_max: 1.5 * PI,
        },
        SymmetryCurve {
            kind: SymmetryCurveKind::PlaneAttractionZero,
            v_min: 0.0,
            v_max: FRAC_PI_2,
        },
    ]
}

/// `|v_dot (1 - e cos v) sqrt(a^3/mu) - 1|`: the pointwise Kepler's-law
/// residual in the eccentric angle.
pub fn kepler_law_residual(params: &PhysParams, v: f64, v_dot: f64) -> f64 {
    (v_dot * (1.0 - params.e * v.cos()) * (params.a.powi(3) / params.mu).sqrt() - 1.0).abs()
}

/// Unwraps a `[0, 2 pi)` angle sequence into a continuous one.
pub fn unwrap_angles(vs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(vs.len());
    let mut offset = 0.0;
    for (i, &v) in vs.iter().enumerate() {
        if i > 0 {
            let dv = v - vs[i - 1];
            if dv < -PI {
                offset += TAU;
            } else if dv > PI {
                offset -= TAU;
            }
        }
        out.push(v + offset);
    }
    out
}

/// Euclidean distance from a planar point to the Kepler ellipse, by dense
/// sampling of the eccentric angle followed by golden-section refinement.
pub fn distance_to_kepler_ellipse(params: &PhysParams, p: Point2) -> f64 {
    let (a, e) = (params.a, params.e);
    let w = (1.0 - e * e).sqrt();
    let d = |psi: f64| -> f64 {
        let q = [a * psi.cos() - a * e, a * w * psi.sin()];
        (q[0] - p[0]).hypot(q[1] - p[1])
    };
    let n = 720;
    let mut best_psi = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let psi = TAU * i as f64 / n as f64;
        let val = d(psi);
        if val < best {
            best = val;
            best_psi = psi;
        }
    }
    let (mut lo, mut hi) = (best_psi - TAU / n as f64, best_psi + TAU / n as f64);
    let phi = 0.618_033_988_749_894_9;
    let (mut c, mut dd) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    for _ in 0..60 {
        if d(c) < d(dd) {
            hi = dd;
        } else {
            lo = c;
        }
        c = hi - phi * (hi - lo);
        dd = lo + phi * (hi - lo);
    }
    d(0.5 * (lo + hi))
}

/// Measures the orbital period from a trajectory's `(u, v)` trace as the time
/// for the unwrapped eccentric angle to advance by `2 pi * turns`, divided by
/// `turns`. Crossings are located on a cubic Hermite interpolant whose slopes
/// come from the flow itself, so the estimate inherits the integrator's
/// accuracy rather than the sampling resolution.
pub fn measure_period(params: &PhysParams, traj: &Trajectory, turns: usize) -> Option<f64> {
    let uv = traj.uv_trace.as_ref()?;
    let vs: Vec<f64> = uv.iter().map(|s| s.map(|(_, v)| v)).collect::<Option<_>>()?;
    let unwrapped = unwrap_angles(&vs);
    let target = unwrapped[0] + TAU * turns as f64;
    let idx = unwrapped.windows(2).position(|w| w[0] <= target && target < w[1])?;
    let (t0, t1) = (traj.times[idx], traj.times[idx + 1]);
    let (v0, v1) = (unwrapped[idx], unwrapped[idx + 1]);
    let rate = |i: usize| -> Option<f64> {
        let (u, v) = uv[i]?;
        drift_uv(params, KeplerCoord { u, v }, 0.0).ok().map(|d| d.b_v)
    };
    let (m0, m1) = (rate(idx)?, rate(idx + 1)?);
    let h = t1 - t0;
    // Cubic Hermite in s on [0, 1]; Newton from the linear estimate.
    let eval = |s: f64| -> (f64, f64) {
        let s2 = s * s;
        let s3 = s2 * s;
        let val = (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * h * m1;
        let deriv = (6.0 * s2 - 6.0 * s) * v0
            + (3.0 * s2 - 4.0 * s + 1.0) * h * m0
            + (-6.0 * s2 + 6.0 * s) * v1
            + (3.0 * s2 - 2.0 * s) * h * m1;
        (val - target, deriv)
    };
    let mut s = (target - v0) / (v1 - v0);
    for _ in 0..30 {
        let (f, df) = eval(s);
        if df.abs() < 1e-300 {
            break;
        }
        let step = f / df;
        s -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let t_cross = t0 + s.clamp(0.0, 1.0) * h;
    Some((t_cross - traj.times[0]) / turns as f64)
}
