//! Command line front end over the limiting-diffusion library: grid exports
//! of the drift and its scalar fields, deterministic and stochastic path
//! simulation, invariant densities, orbit analysis, hitting probabilities and
//! nodal curves. CSV everywhere, with an optional minimal SVG rendering.

mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nelson_kepler::dynamics::{
    self, integrate_ode_with, lyapunov_certificate, period_via_quadrature, symmetry_curves,
    Annulus,
};
use nelson_kepler::exact_state::{log_invariant_density_exact, nodal_curves};
use nelson_kepler::limit_state::{
    density_normalizer, divergence, drift2, invariant_density_limit_xy, speed_sq,
};
use nelson_kepler::sim::{
    hitting_probability, integrate_ode_3d, simulate_ensemble, simulate_sde, HistogramSpec,
    SimConfig, StartDistribution,
};
use nelson_kepler::trajectory::Trajectory;
use nelson_kepler::{io as nkio, PhysParams};

#[derive(Parser)]
#[command(
    name = "nelson-kepler",
    about = "Limiting Nelson diffusion of the atomic elliptic state: fields, orbits, simulations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the planar drift or a scalar field on a cartesian grid.
    Field(FieldArgs),
    /// Integrate one path (ODE for epsilon = 0, SDE otherwise) or an ensemble.
    Simulate(SimulateArgs),
    /// Export the invariant density (exact state when --n is given).
    Density(DensityArgs),
    /// Orbit report: period, trace integral, critical curves, Lyapunov grid.
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimate of the singularity-avoidance probability.
    Hit(HitArgs),
    /// Nodal hyperbolas of the exact state in the (x, z) plane.
    Nodal(NodalArgs),
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0 (got {v})"))
    }
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be >= 0 (got {v})"))
    }
}

fn parse_eccentricity(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("eccentricity must satisfy 0 < e < 1 (got {v})"))
    }
}

fn parse_start(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err("expected x,y or x,y,z".into());
    }
    let mut out = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p.trim().parse().map_err(|e| format!("{e}"))?;
    }
    Ok(out)
}

#[derive(Args, Clone)]
struct ParamFlags {
    /// Force constant (mu > 0).
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    mu: f64,
    /// Angular-momentum scale (lambda > 0).
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    lambda: f64,
    /// Eccentricity of the Kepler ellipse (0 < e < 1).
    #[arg(long, default_value_t = 0.5, value_parser = parse_eccentricity)]
    e: f64,
    /// Diffusion scale (epsilon >= 0).
    #[arg(long, default_value_t = 0.0, value_parser = parse_nonnegative)]
    epsilon: f64,
    /// Quantum number of the exact state (requires lambda = n epsilon^2).
    #[arg(long)]
    n: Option<u32>,
}

impl ParamFlags {
    fn build(&self) -> Result<PhysParams, CliError> {
        if let Some(n) = self.n {
            if self.epsilon == 0.0 {
                return Ok(PhysParams::for_quantum_number(self.mu, self.lambda, self.e, n)?);
            }
            return Ok(PhysParams::with_n(self.mu, self.lambda, self.e, self.epsilon, Some(n))?);
        }
        Ok(PhysParams::new(self.mu, self.lambda, self.e, self.epsilon)?)
    }
}

#[derive(Args, Clone)]
struct GridFlags {
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    ymin: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    ymax: f64,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long, default_value_t = 81)]
    ny: usize,
}

impl GridFlags {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.xmax > self.xmin && self.ymax > self.ymin) {
            return Err(CliError::msg("grid bounds must satisfy xmin < xmax and ymin < ymax"));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(CliError::msg("grid resolution must be at least 2 in each direction"));
        }
        Ok(())
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (x0, x1, y0, y1) = (self.xmin, self.xmax, self.ymin, self.ymax);
        let (nx, ny) = (self.nx, self.ny);
        (0..ny).flat_map(move |j| {
            let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
            (0..nx).map(move |i| (x0 + (x1 - x0) * i as f64 / (nx - 1) as f64, y))
        })
    }
}

#[derive(Args, Clone)]
struct SimFlags {
    /// Integrator step.
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    dt: f64,
    /// Time horizon.
    #[arg(long, default_value_t = 20.0, value_parser = parse_positive)]
    tmax: f64,
    /// Seed for the counter-based noise; all randomness flows from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Singularity buffer width.
    #[arg(long, default_value_t = 1e-3, value_parser = parse_positive)]
    delta: f64,
    /// Number of paths (> 1 switches to an ensemble summary).
    #[arg(long, default_value_t = 1)]
    paths: usize,
    /// Spatial dimension (2 or 3).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Start point, e.g. `2,0` or `-1.9,0,0.05`.
    #[arg(long, default_value = "2,0", value_parser = parse_start, allow_hyphen_values = true)]
    start: [f64; 3],
    /// Keep every k-th sample.
    #[arg(long, default_value_t = 1)]
    thin: usize,
}

impl SimFlags {
    fn config(&self) -> SimConfig {
        let mut cfg = SimConfig::new(self.dt, self.tmax, self.seed);
        cfg.delta = self.delta;
        cfg.dimension = self.dim;
        cfg.ensemble_size = self.paths;
        cfg.thin = self.thin;
        cfg
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args, Clone)]
struct OutFlags {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FieldQuantity {
    Drift,
    Divergence,
    Speed,
    Density,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    grid: GridFlags,
    #[arg(long, value_enum, default_value_t = FieldQuantity::Drift)]
    quantity: FieldQuantity,
    #[command(flatten)]
    out: OutFlags,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    sim: SimFlags,
    #[command(flatten)]
    grid: GridFlags,
    #[command(flatten)]
    out: OutFlags,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Divide by the trapezoid normalizer over the grid box.
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    out: OutFlags,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Lyapunov certificate grid resolution.
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// Annulus margins delta1, delta2.
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    delta1: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    delta2: f64,
    /// Sample count per symmetry curve in the CSV export.
    #[arg(long, default_value_t = 200)]
    curve_samples: usize,
    #[command(flatten)]
    out: OutFlags,
}

#[derive(Args)]
struct HitArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    sim: SimFlags,
    /// Horizon for the survival probability (defaults to --tmax).
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args)]
struct NodalArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Largest radius to sample on each hyperbola.
    #[arg(long, default_value_t = 4.0, value_parser = parse_positive)]
    rmax: f64,
    /// Samples per curve.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    out: OutFlags,
}

struct CliError {
    message: String,
}

impl CliError {
    fn msg(m: impl Into<String>) -> Self {
        Self { message: m.into() }
    }
}

impl From<nelson_kepler::Error> for CliError {
    fn from(e: nelson_kepler::Error) -> Self {
        Self { message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self { message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Field(args) => cmd_field(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Density(args) => cmd_density(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Hit(args) => cmd_hit(args),
        Command::Nodal(args) => cmd_nodal(args),
    }
}

/// Opens `--out` (or stdout) as a buffered writer.
fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_field(args: FieldArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    args.grid.validate()?;
    match args.quantity {
        FieldQuantity::Drift => {
            let rows: Vec<[f64; 4]> = args
                .grid
                .points()
                .map(|(x, y)| match drift2(&params, [x, y]) {
                    Ok(b) => [x, y, b[0], b[1]],
                    Err(_) => [x, y, f64::NAN, f64::NAN],
                })
                .collect();
            match args.out.format {
                Format::Csv => {
                    let mut w = open_out(&args.out.out)?;
                    nkio::write_vector_grid(&mut w, rows)?;
                }
                Format::Svg => {
                    let mut w = open_out(&args.out.out)?;
                    svg::write_quiver(&mut w, &args_grid_box(&args.grid), &rows)?;
                }
            }
        }
        quantity => {
            let eval = |x: f64, y: f64| -> Option<f64> {
                match quantity {
                    FieldQuantity::Divergence => divergence(&params, [x, y]).ok(),
                    FieldQuantity::Speed => speed_sq(&params, [x, y]).ok(),
                    FieldQuantity::Density => invariant_density_limit_xy(&params, [x, y]).ok(),
                    FieldQuantity::Drift => unreachable!(),
                }
            };
            if quantity == FieldQuantity::Density && params.epsilon <= 0.0 {
                return Err(CliError::msg(
                    "the density field requires epsilon > 0 (pass --epsilon)",
                ));
            }
            let rows: Vec<[f64; 3]> = args
                .grid
                .points()
                .map(|(x, y)| [x, y, eval(x, y).unwrap_or(f64::NAN)])
                .collect();
            match args.out.format {
                Format::Csv => {
                    let mut w = open_out(&args.out.out)?;
                    nkio::write_scalar_grid(&mut w, rows)?;
                }
                Format::Svg => {
                    let mut w = open_out(&args.out.out)?;
                    svg::write_heatmap(&mut w, args.grid.nx, args.grid.ny, &rows)?;
                }
            }
        }
    }
    Ok(())
}

fn args_grid_box(grid: &GridFlags) -> [f64; 4] {
    [grid.xmin, grid.xmax, grid.ymin, grid.ymax]
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    let cfg = args.sim.config();
    if args.sim.paths > 1 {
        args.grid.validate()?;
        let spec = HistogramSpec {
            xmin: args.grid.xmin,
            xmax: args.grid.xmax,
            ymin: args.grid.ymin,
            ymax: args.grid.ymax,
            nx: args.grid.nx,
            ny: args.grid.ny,
        };
        let dist = StartDistribution::Point(args.sim.start);
        let summary = simulate_ensemble(&params, &dist, &cfg, &spec)?;
        eprintln!(
            "paths: {}  survived: {}  hit buffer: {}",
            summary.paths, summary.survived, summary.hit_buffer
        );
        let mut w = open_out(&args.out.out)?;
        nkio::write_histogram(&mut w, &summary.histogram)?;
        return Ok(());
    }

    let traj: Trajectory = if params.epsilon == 0.0 && args.sim.dim == 2 {
        integrate_ode_with(
            &params,
            [args.sim.start[0], args.sim.start[1]],
            args.sim.tmax,
            args.sim.dt,
            args.sim.delta,
        )?
    } else if params.epsilon == 0.0 {
        integrate_ode_3d(&params, args.sim.start, &cfg)?
    } else {
        simulate_sde(&params, args.sim.start, &cfg)?
    };
    match args.out.format {
        Format::Csv => {
            let mut w = open_out(&args.out.out)?;
            nkio::write_trajectory(&mut w, &traj)?;
        }
        Format::Svg => {
            let mut w = open_out(&args.out.out)?;
            let pts: Vec<[f64; 2]> = traj.states.iter().map(|s| [s[0], s[1]]).collect();
            svg::write_polyline(&mut w, &pts)?;
        }
    }
    if let Some(out) = &args.out.out {
        let mut w = BufWriter::new(File::create(sibling(out, ".events.csv"))?);
        nkio::write_events(&mut w, &traj.events)?;
    }
    Ok(())
}

fn cmd_density(args: DensityArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    args.grid.validate()?;
    let exact = args.params.n.is_some();
    if !exact && params.epsilon <= 0.0 {
        return Err(CliError::msg(
            "the limiting density requires epsilon > 0 (pass --epsilon or --n)",
        ));
    }
    let norm = if args.normalize {
        if exact {
            return Err(CliError::msg("--normalize applies to the limiting density only"));
        }
        density_normalizer(&params, 201)?
    } else {
        1.0
    };
    let rows: Vec<[f64; 3]> = args
        .grid
        .points()
        .map(|(x, y)| {
            let v = if exact {
                log_invariant_density_exact(&params, [x, y, 0.0])
                    .map(|l| l.exp())
                    .ok()
            } else {
                invariant_density_limit_xy(&params, [x, y]).ok()
            };
            [x, y, v.map(|v| v / norm).unwrap_or(f64::NAN)]
        })
        .collect();
    match args.out.format {
        Format::Csv => {
            let mut w = open_out(&args.out.out)?;
            nkio::write_scalar_grid(&mut w, rows)?;
        }
        Format::Svg => {
            let mut w = open_out(&args.out.out)?;
            svg::write_heatmap(&mut w, args.grid.nx, args.grid.ny, &rows)?;
        }
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    let mut w = open_out(&args.out.out)?;

    writeln!(
        w,
        "parameters: mu={} lambda={} e={} epsilon={} a={} energy={}",
        params.mu, params.lambda, params.e, params.epsilon, params.a, params.energy
    )?;
    writeln!(w, "period: {:.10}", params.period())?;
    writeln!(w, "period_quadrature: {:.10}", period_via_quadrature(&params, 4096))?;
    let stability = dynamics::stability_integral(&params)?;
    writeln!(w, "stability_integral: {:.10}", stability.closed_form)?;
    writeln!(w, "stability_integral_fd: {:.10}", stability.finite_difference)?;
    writeln!(w, "tilde_e: {:.10}", dynamics::tilde_e(params.e))?;
    writeln!(w, "critical_eccentricity: {:.10}", dynamics::critical_eccentricity())?;

    let curves = symmetry_curves(&params);
    for curve in &curves {
        writeln!(
            w,
            "curve {}: v in ({:.6}, {:.6}), min_u = {:.10}, crosses_kepler_ellipse = {}",
            curve.kind.as_str(),
            curve.v_min,
            curve.v_max,
            curve.min_u(&params),
            curve.crosses_kepler_ellipse(&params)
        )?;
    }

    let annulus = Annulus { delta1: args.delta1, delta2: args.delta2 };
    let cert = lyapunov_certificate(&params, &annulus, args.grid)?;
    writeln!(
        w,
        "lyapunov: grid={}x{} delta1={} delta2={} min_V_off={:.6e} max_Vdot_off={:.6e} max_V_on={:.3e} max_Vdot_on={:.3e} excluded={}",
        cert.grid, cert.grid, annulus.delta1, annulus.delta2,
        cert.min_v_off, cert.max_vdot_off, cert.max_v_on, cert.max_vdot_on, cert.excluded
    )?;
    drop(w);

    if let Some(out) = &args.out.out {
        for curve in &curves {
            let rows = curve
                .sample(&params, args.curve_samples)
                .into_iter()
                .map(|(v, u, x, y)| vec![v, u, x, y]);
            let path = sibling(out, &format!("_curve_{}.csv", curve.kind.as_str()));
            let mut cw = BufWriter::new(File::create(path)?);
            nkio::write_table(&mut cw, "v,u,x,y", rows)?;
        }
    }
    Ok(())
}

fn cmd_hit(args: HitArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    if params.epsilon <= 0.0 {
        return Err(CliError::msg("hitting estimates require epsilon > 0"));
    }
    let cfg = args.sim.config();
    let t = args.t.unwrap_or(args.sim.tmax);
    let est = hitting_probability(&params, args.sim.start, &cfg, t)?;
    println!(
        "survival_probability: {:.6} ci95: [{:.6}, {:.6}] paths: {} survivors: {} t: {} delta: {}",
        est.survive_prob, est.ci_low, est.ci_high, est.paths, est.survivors, t, args.sim.delta
    );
    Ok(())
}

fn cmd_nodal(args: NodalArgs) -> Result<(), CliError> {
    let params = args.params.build()?;
    if args.params.n.is_none() {
        return Err(CliError::msg("nodal curves require --n"));
    }
    let set = nodal_curves(&params)?;
    let mut rows = Vec::new();
    for curve in &set.curves {
        for q in curve.sample(params.e, args.rmax, args.samples) {
            rows.push(vec![curve.k as f64, curve.root, q[0], q[1]]);
        }
    }
    match args.out.format {
        Format::Csv => {
            let mut w = open_out(&args.out.out)?;
            nkio::write_table(&mut w, "k,root,x,z", rows)?;
        }
        Format::Svg => {
            let mut w = open_out(&args.out.out)?;
            let curves: Vec<Vec<[f64; 2]>> = set
                .curves
                .iter()
                .map(|c| c.sample(params.e, args.rmax, args.samples))
                .collect();
            svg::write_polylines(&mut w, &curves)?;
        }
    }
    Ok(())
}
