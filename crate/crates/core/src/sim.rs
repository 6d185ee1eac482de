//! Euler-Maruyama simulation of the limiting diffusion (2D and 3D),
//! hitting-time estimation, pathwise coupling to the deterministic flow, and
//! the off-plane blip experiments.
//!
//! All noise comes from the counter-based generator in [`crate::rng`], keyed
//! by `(seed, path, step, component)`; paths are independent work units and
//! the ensemble runner executes them in parallel under the `parallel` feature
//! with bit-identical results.

use crate::coords::{self, KeplerCoord};
use crate::dynamics::{self, ORIGIN_GUARD};
use crate::error::{Error, Result};
use crate::limit_state::{self, SigmaRegion};
use crate::params::PhysParams;
use crate::rng;
use crate::trajectory::{Event, EventKind, Trajectory};
use crate::{Point2, Point3};

/// Discretization slack factor for the coupling bound, in units of `dt`.
pub const COUPLING_SLACK_STEPS: f64 = 10.0;

/// Integration scheme for the SDE. The drift loses smoothness at the
/// singularity, so only the strong-order-1/2 scheme is offered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    EulerMaruyama,
}

/// Simulation configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_max: f64,
    pub seed: u64,
    /// Singularity buffer: the `u > 1 - delta` ellipse in 2D, Euclidean
    /// distance below `delta * a` to the singular region in 3D.
    pub delta: f64,
    pub scheme: Scheme,
    /// 2 or 3.
    pub dimension: usize,
    pub ensemble_size: usize,
    /// Attach a `(u, v)` trace to planar paths.
    pub record_uv: bool,
    /// Retain per-path trajectories in ensemble summaries.
    pub keep_paths: bool,
    /// Keep every `thin`-th sample (the final sample is always kept).
    pub thin: usize,
}

impl SimConfig {
    pub fn new(dt: f64, t_max: f64, seed: u64) -> Self {
        Self {
            dt,
            t_max,
            seed,
            delta: 1e-3,
            scheme: Scheme::EulerMaruyama,
            dimension: 2,
            ensemble_size: 1,
            record_uv: true,
            keep_paths: false,
            thin: 1,
        }
    }

    fn validate(&self, params: &PhysParams) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0 (got {})", self.dt)));
        }
        if !(self.t_max >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_max must be >= 0 (got {})",
                self.t_max
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0 + params.e) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1 + e) (got {})",
                self.delta
            )));
        }
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::InvalidConfig(format!(
                "dimension must be 2 or 3 (got {})",
                self.dimension
            )));
        }
        if self.ensemble_size < 1 {
            return Err(Error::InvalidConfig("ensemble_size must be >= 1".into()));
        }
        if self.thin < 1 {
            return Err(Error::InvalidConfig("thin must be >= 1".into()));
        }
        Ok(())
    }
}

fn norm(dim: usize, p: Point3) -> f64 {
    if dim == 2 {
        p[0].hypot(p[1])
    } else {
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
    }
}

/// Guard order: finiteness, origin, singularity buffer.
fn guard_state(
    params: &PhysParams,
    config: &SimConfig,
    sigma: &SigmaRegion,
    p: Point3,
) -> Option<EventKind> {
    let dim = config.dimension;
    if !(p[0].is_finite() && p[1].is_finite() && (dim == 2 || p[2].is_finite())) {
        return Some(EventKind::NonFinite);
    }
    if norm(dim, p) < ORIGIN_GUARD * params.a {
        return Some(EventKind::OriginApproach);
    }
    let hit = if dim == 2 {
        dynamics::inside_sigma_buffer(params, [p[0], p[1]], config.delta)
    } else {
        let guard = config.delta * params.a;
        p[1].abs() < guard && sigma.distance(p) < guard
    };
    if hit {
        Some(EventKind::SigmaHit)
    } else {
        None
    }
}

fn drift_at(params: &PhysParams, dim: usize, p: Point3) -> Result<Point3> {
    if dim == 2 {
        let b = limit_state::drift2(params, [p[0], p[1]])?;
        Ok([b[0], b[1], 0.0])
    } else {
        limit_state::drift3(params, p)
    }
}

/// One Euler-Maruyama path of the limiting diffusion. The noise amplitude is
/// `params.epsilon`; with `epsilon = 0` this degenerates to the forward Euler
/// scheme for the deterministic flow.
pub fn simulate_sde(params: &PhysParams, start: Point3, config: &SimConfig) -> Result<Trajectory> {
    simulate_path(params, start, config, 0)
}

/// One path with an explicit path index (sub-seed) for ensemble use.
pub fn simulate_path(
    params: &PhysParams,
    start: Point3,
    config: &SimConfig,
    path_index: u64,
) -> Result<Trajectory> {
    config.validate(params)?;
    let sigma = SigmaRegion::new(params);
    if guard_state(params, config, &sigma, start).is_some() {
        return Err(Error::StartInBuffer);
    }
    let dim = config.dimension;
    let eps = params.epsilon;
    let record_uv = dim == 2 && config.record_uv;

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        dimension: dim,
        events: Vec::new(),
        uv_trace: if record_uv { Some(Vec::new()) } else { None },
    };
    let mut uv_seed: Option<KeplerCoord> = None;
    let record = |traj: &mut Trajectory, t: f64, p: Point3, uv_seed: &mut Option<KeplerCoord>| {
        traj.times.push(t);
        traj.states.push(p);
        if let Some(trace) = traj.uv_trace.as_mut() {
            let kc = match uv_seed {
                Some(s) => coords::from_cartesian_seeded(params, [p[0], p[1]], *s).ok(),
                None => coords::from_cartesian(params, [p[0], p[1]]).ok(),
            };
            if let Some(k) = kc {
                *uv_seed = Some(k);
            }
            trace.push(kc.map(|k| (k.u, k.v)));
        }
    };

    let mut x = start;
    let mut t = 0.0;
    let mut step: u64 = 0;
    record(&mut traj, t, x, &mut uv_seed);
    while t < config.t_max - 1e-12 {
        let dt = config.dt.min(config.t_max - t);
        let b = match drift_at(params, dim, x) {
            Ok(b) => b,
            Err(_) => {
                // Landed exactly on the singular set between guard checks.
                traj.events.push(Event { t, kind: EventKind::SigmaHit });
                return Ok(traj);
            }
        };
        let root_dt = dt.sqrt();
        for c in 0..dim {
            let xi = rng::standard_normal(config.seed, path_index, step, c as u32);
            x[c] += b[c] * dt + eps * root_dt * xi;
        }
        t += dt;
        step += 1;
        if let Some(kind) = guard_state(params, config, &sigma, x) {
            if kind != EventKind::NonFinite {
                record(&mut traj, t, x, &mut uv_seed);
            }
            traj.events.push(Event { t, kind });
            return Ok(traj);
        }
        let last = t >= config.t_max - 1e-12;
        if step % config.thin as u64 == 0 || last {
            record(&mut traj, t, x, &mut uv_seed);
        }
        if last {
            traj.events.push(Event { t, kind: EventKind::Horizon });
        }
    }
    if traj.events.is_empty() {
        // t_max = 0: the start sample is the whole path.
        traj.events.push(Event { t, kind: EventKind::Horizon });
    }
    Ok(traj)
}

/// Initial condition of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartDistribution {
    /// Every path starts at the same point.
    Point(Point3),
    /// Path `k` of `n` starts at angle `2 pi k / n` on a circle of this
    /// radius about the origin, at height `z`.
    Ring { radius: f64, z: f64 },
}

impl StartDistribution {
    fn start(&self, k: usize, n: usize) -> Point3 {
        match *self {
            StartDistribution::Point(p) => p,
            StartDistribution::Ring { radius, z } => {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                [radius * theta.cos(), radius * theta.sin(), z]
            }
        }
    }
}

/// Occupancy grid over final states.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
    pub counts: Vec<u32>,
}

/// Grid bounds for the ensemble histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl HistogramSpec {
    /// A box comfortably containing the Kepler ellipse.
    pub fn standard(params: &PhysParams) -> Self {
        let a = params.a;
        Self { xmin: -3.0 * a, xmax: 2.0 * a, ymin: -2.0 * a, ymax: 2.0 * a, nx: 60, ny: 48 }
    }
}

impl Histogram {
    fn new(spec: &HistogramSpec) -> Self {
        Self {
            xmin: spec.xmin,
            xmax: spec.xmax,
            ymin: spec.ymin,
            ymax: spec.ymax,
            nx: spec.nx,
            ny: spec.ny,
            counts: vec![0; spec.nx * spec.ny],
        }
    }

    fn deposit(&mut self, x: f64, y: f64) {
        if x < self.xmin || x >= self.xmax || y < self.ymin || y >= self.ymax {
            return;
        }
        let i = ((x - self.xmin) / (self.xmax - self.xmin) * self.nx as f64) as usize;
        let j = ((y - self.ymin) / (self.ymax - self.ymin) * self.ny as f64) as usize;
        self.counts[j.min(self.ny - 1) * self.nx + i.min(self.nx - 1)] += 1;
    }

    /// Center of the most occupied cell.
    pub fn modal_cell_center(&self) -> (f64, f64) {
        let (mut best, mut idx) = (0u32, 0usize);
        for (k, &c) in self.counts.iter().enumerate() {
            if c > best {
                best = c;
                idx = k;
            }
        }
        let (i, j) = (idx % self.nx, idx / self.nx);
        (
            self.xmin + (self.xmax - self.xmin) * (i as f64 + 0.5) / self.nx as f64,
            self.ymin + (self.ymax - self.ymin) * (j as f64 + 0.5) / self.ny as f64,
        )
    }
}

/// Aggregate of an ensemble run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub paths: usize,
    pub hit_buffer: usize,
    pub survived: usize,
    /// Final-state histogram of surviving paths.
    pub histogram: Histogram,
    pub trajectories: Option<Vec<Trajectory>>,
}

/// Runs `config.ensemble_size` independent paths (in parallel when enabled).
pub fn simulate_ensemble(
    params: &PhysParams,
    dist: &StartDistribution,
    config: &SimConfig,
    spec: &HistogramSpec,
) -> Result<EnsembleSummary> {
    config.validate(params)?;
    let n = config.ensemble_size;
    let runs = crate::par::map_indexed(n, |k| {
        simulate_path(params, dist.start(k, n), config, k as u64)
    });
    summarize(runs, config, spec)
}

/// Sequential variant of [`simulate_ensemble`]; identical output.
pub fn simulate_ensemble_seq(
    params: &PhysParams,
    dist: &StartDistribution,
    config: &SimConfig,
    spec: &HistogramSpec,
) -> Result<EnsembleSummary> {
    config.validate(params)?;
    let n = config.ensemble_size;
    let runs = crate::par::map_indexed_seq(n, |k| {
        simulate_path(params, dist.start(k, n), config, k as u64)
    });
    summarize(runs, config, spec)
}

fn summarize(
    runs: Vec<Result<Trajectory>>,
    config: &SimConfig,
    spec: &HistogramSpec,
) -> Result<EnsembleSummary> {
    let mut histogram = Histogram::new(spec);
    let mut hit = 0usize;
    let mut survived = 0usize;
    let mut kept = if config.keep_paths { Some(Vec::new()) } else { None };
    let n = runs.len();
    for run in runs {
        let traj = run?;
        match traj.terminal_event().map(|e| e.kind) {
            Some(EventKind::Horizon) => {
                survived += 1;
                let f = traj.final_state();
                histogram.deposit(f[0], f[1]);
            }
            Some(EventKind::SigmaHit) => hit += 1,
            _ => {}
        }
        if let Some(v) = kept.as_mut() {
            v.push(traj);
        }
    }
    Ok(EnsembleSummary { paths: n, hit_buffer: hit, survived, histogram, trajectories: kept })
}

/// Monte Carlo estimate of `P(tau > t)` with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitEstimate {
    pub survive_prob: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub paths: usize,
    pub survivors: usize,
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / n as f64;
    let nf = n as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimates the probability that the diffusion started at `start` avoids the
/// buffer ellipse up to time `t`.
pub fn hitting_probability(
    params: &PhysParams,
    start: Point3,
    config: &SimConfig,
    t: f64,
) -> Result<HitEstimate> {
    let mut cfg = *config;
    cfg.t_max = t;
    cfg.record_uv = false;
    cfg.keep_paths = false;
    cfg.validate(params)?;
    let n = cfg.ensemble_size;
    let survived: Vec<Result<bool>> = crate::par::map_indexed(n, |k| {
        simulate_path(params, start, &cfg, k as u64).map(|traj| traj.survived())
    });
    let mut ok = 0usize;
    for s in survived {
        if s? {
            ok += 1;
        }
    }
    let (lo, hi) = wilson_interval(ok, n, 1.96);
    Ok(HitEstimate {
        survive_prob: ok as f64 / n as f64,
        ci_low: lo,
        ci_high: hi,
        paths: n,
        survivors: ok,
    })
}

/// Per-`epsilon` result of the common-noise coupling experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingStats {
    pub epsilon: f64,
    pub retained: usize,
    pub excluded: usize,
    /// Per retained path: `(sup_t |X^eps - X^0|, sup_t |B|)`.
    pub per_path: Vec<(f64, f64)>,
    pub max_sup_distance: f64,
    /// True when every retained path satisfies
    /// `sup |X^eps - X^0| <= 3 eps sup|B| + 10 dt`.
    pub bound_satisfied: bool,
}

/// Couples `X^eps` to the deterministic `X^0` with the same Brownian
/// increments, for each `epsilon` in the list, and records the pathwise sup
/// distances. Paths where either copy stops early are excluded, mirroring the
/// conditioning on singularity avoidance.
pub fn coupling_convergence(
    params: &PhysParams,
    start: Point2,
    eps_list: &[f64],
    config: &SimConfig,
) -> Result<Vec<CouplingStats>> {
    let mut cfg = *config;
    cfg.dimension = 2;
    cfg.validate(params)?;
    for &e in eps_list {
        if e < 0.0 {
            return Err(Error::InvalidConfig(format!("epsilon must be >= 0 (got {e})")));
        }
    }
    let sigma = SigmaRegion::new(params);
    let n_steps = (cfg.t_max / cfg.dt).ceil() as u64;

    // The deterministic Euler reference path (shared by all eps and paths).
    let mut reference = Vec::with_capacity(n_steps as usize + 1);
    {
        let mut x = [start[0], start[1], 0.0];
        reference.push(x);
        let mut t = 0.0;
        for _ in 0..n_steps {
            let dt = cfg.dt.min(cfg.t_max - t);
            let b = drift_at(params, 2, x).map_err(|_| Error::StartInBuffer)?;
            x[0] += b[0] * dt;
            x[1] += b[1] * dt;
            t += dt;
            if guard_state(params, &cfg, &sigma, x).is_some() {
                return Err(Error::InvalidConfig(
                    "deterministic reference path enters the buffer; choose another start".into(),
                ));
            }
            reference.push(x);
        }
    }

    let mut out = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut params_eps = *params;
        params_eps.epsilon = eps;
        let stats: Vec<Option<(f64, f64)>> = crate::par::map_indexed(cfg.ensemble_size, |k| {
            couple_one_path(&params_eps, &cfg, &sigma, &reference, k as u64)
        });
        let mut per_path = Vec::new();
        let mut excluded = 0usize;
        for s in stats {
            match s {
                Some(pair) => per_path.push(pair),
                None => excluded += 1,
            }
        }
        let slack = COUPLING_SLACK_STEPS * cfg.dt;
        let bound_satisfied = per_path
            .iter()
            .all(|&(dist, sup_b)| dist <= 3.0 * eps * sup_b + slack);
        let max_sup_distance = per_path.iter().map(|p| p.0).fold(0.0f64, f64::max);
        out.push(CouplingStats {
            epsilon: eps,
            retained: per_path.len(),
            excluded,
            per_path,
            max_sup_distance,
            bound_satisfied,
        });
    }
    Ok(out)
}

fn couple_one_path(
    params: &PhysParams,
    cfg: &SimConfig,
    sigma: &SigmaRegion,
    reference: &[Point3],
    path: u64,
) -> Option<(f64, f64)> {
    let eps = params.epsilon;
    let mut x = reference[0];
    let mut t = 0.0;
    let mut b_acc = [0.0f64, 0.0];
    let mut sup_dist = 0.0f64;
    let mut sup_b = 0.0f64;
    for (step, x0) in reference.iter().enumerate().skip(1) {
        let dt = cfg.dt.min(cfg.t_max - t);
        let b = drift_at(params, 2, x).ok()?;
        let root_dt = dt.sqrt();
        for c in 0..2 {
            let xi = rng::standard_normal(cfg.seed, path, step as u64 - 1, c as u32);
            x[c] += b[c] * dt + eps * root_dt * xi;
            b_acc[c] += root_dt * xi;
        }
        t += dt;
        if guard_state(params, cfg, sigma, x).is_some() {
            return None;
        }
        sup_dist = sup_dist.max((x[0] - x0[0]).hypot(x[1] - x0[1]));
        sup_b = sup_b.max(b_acc[0].hypot(b_acc[1]));
    }
    Some((sup_dist, sup_b))
}

/// Outcome of an off-plane run at small `z`, with the per-period structure of
/// `|z|` made explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ZBlipReport {
    pub trajectory: Trajectory,
    /// `b_z` at every retained sample.
    pub bz_trace: Vec<f64>,
    /// `alpha + beta + 1` at every retained sample (`None` where undefined).
    pub plane_attraction: Vec<Option<f64>>,
    pub period: f64,
    /// Highest `|z|` inside each complete period window.
    pub period_peaks: Vec<f64>,
    /// Interior local maxima of `|z|` per complete period window.
    pub blips_per_period: Vec<usize>,
}

/// Runs the 3D system started just off the plane at the aphelion and reports
/// the blip structure of `|z|`. With `epsilon = 0` the flow is integrated by
/// RK4; otherwise by Euler-Maruyama with the configured seed.
pub fn z_blip_experiment(params: &PhysParams, config: &SimConfig, z0: f64) -> Result<ZBlipReport> {
    let mut cfg = *config;
    cfg.dimension = 3;
    cfg.record_uv = false;
    cfg.validate(params)?;
    let start = [-params.a * (1.0 + params.e), 0.0, z0];
    let traj = if params.epsilon == 0.0 {
        integrate_ode_3d(params, start, &cfg)?
    } else {
        simulate_path(params, start, &cfg, 0)?
    };

    let mut bz = Vec::with_capacity(traj.len());
    let mut plane = Vec::with_capacity(traj.len());
    for s in &traj.states {
        match limit_state::drift3(params, *s) {
            Ok(b) => bz.push(b[2]),
            Err(_) => bz.push(f64::NAN),
        }
        plane.push(
            limit_state::alpha_beta_cartesian3(params, *s)
                .ok()
                .map(|ab| ab.alpha + ab.beta + 1.0),
        );
    }

    let period = params.period();
    let abs_z: Vec<f64> = traj.states.iter().map(|s| s[2].abs()).collect();
    // Interior strict local maxima of |z|.
    let mut maxima = Vec::new();
    for i in 1..abs_z.len().saturating_sub(1) {
        if abs_z[i] > abs_z[i - 1] && abs_z[i] >= abs_z[i + 1] {
            maxima.push(i);
        }
    }
    let windows = (traj.final_time() / period).floor() as usize;
    let mut period_peaks = Vec::with_capacity(windows);
    let mut blips = vec![0usize; windows];
    for w in 0..windows {
        let (lo, hi) = (w as f64 * period, (w + 1) as f64 * period);
        let peak = traj
            .times
            .iter()
            .zip(&abs_z)
            .filter(|(t, _)| **t >= lo && **t < hi)
            .map(|(_, z)| *z)
            .fold(0.0f64, f64::max);
        period_peaks.push(peak);
        blips[w] = maxima
            .iter()
            .filter(|&&i| traj.times[i] >= lo && traj.times[i] < hi)
            .count();
    }
    Ok(ZBlipReport {
        trajectory: traj,
        bz_trace: bz,
        plane_attraction: plane,
        period,
        period_peaks,
        blips_per_period: blips,
    })
}

/// RK4 integration of the deterministic 3D flow under the same guard rules
/// as the stochastic simulator (noise settings in `cfg` are ignored).
pub fn integrate_ode_3d(params: &PhysParams, start: Point3, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate(params)?;
    integrate_rk4_3d_inner(params, start, cfg)
}

fn integrate_rk4_3d_inner(params: &PhysParams, start: Point3, cfg: &SimConfig) -> Result<Trajectory> {
    let sigma = SigmaRegion::new(params);
    if guard_state(params, cfg, &sigma, start).is_some() {
        return Err(Error::StartInBuffer);
    }
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![start],
        dimension: 3,
        events: Vec::new(),
        uv_trace: None,
    };
    let f = |p: Point3| limit_state::drift3(params, p).ok();
    let mut x = start;
    let mut t = 0.0;
    while t < cfg.t_max - 1e-12 {
        let dt = cfg.dt.min(cfg.t_max - t);
        let next = (|| {
            let k1 = f(x)?;
            let k2 = f(advance(x, k1, 0.5 * dt))?;
            let k3 = f(advance(x, k2, 0.5 * dt))?;
            let k4 = f(advance(x, k3, dt))?;
            Some([
                x[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                x[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
                x[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
            ])
        })();
        let Some(next) = next else {
            traj.events.push(Event { t, kind: EventKind::SigmaHit });
            return Ok(traj);
        };
        x = next;
        t += dt;
        if let Some(kind) = guard_state(params, cfg, &sigma, x) {
            if kind != EventKind::NonFinite {
                traj.times.push(t);
                traj.states.push(x);
            }
            traj.events.push(Event { t, kind });
            return Ok(traj);
        }
        traj.times.push(t);
        traj.states.push(x);
        if t >= cfg.t_max - 1e-12 {
            traj.events.push(Event { t, kind: EventKind::Horizon });
        }
    }
    Ok(traj)
}

fn advance(x: Point3, k: Point3, dt: f64) -> Point3 {
    [x[0] + dt * k[0], x[1] + dt * k[1], x[2] + dt * k[2]]
}
