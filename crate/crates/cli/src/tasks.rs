use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use catconv::benchmarks::{
    classical_bound_mixed, conversion_fidelity, dual_rail_bound, fidelity_range_scan, FidelityReport, PURE_STATE_BOUND,
};
use catconv::converter::{hybrid_resource, input_state, project_logical, run_conversion, sweep_window, ConversionResult};
use catconv::fock::{loss_channel, uhlmann_fidelity, wigner, DensityMatrix, QuadratureConvention};
use catconv::io::{matrix_to_rows, ComplexRows};
use catconv::sources::{build_input_mixture, cat_state, MixtureSpec, Parity, CV_MODE};
use catconv::tomography::{
    average_fidelity_from_process, average_pure_state_fidelity, maxlik_reconstruct, pipeline_frequency_table,
    process_fidelity, process_reconstruct, sample_quadratures, ReconstructOptions, PROCESS_CLASSICAL_THRESHOLD,
};
use catconv::{Error, Result};
use serde::Serialize;

use crate::config::{InputSpec, RunConfig, SampleConfig, WignerSource};
use crate::output::OutputDir;

/// Shared state for one execution.
pub struct Context {
    pub config: RunConfig,
    /// Seed handed to this task by the master generator.
    pub seed: u64,
    resource: Arc<OnceLock<DensityMatrix>>,
}

impl Context {
    pub fn new(config: RunConfig, seed: u64, resource: Arc<OnceLock<DensityMatrix>>) -> Self {
        Self { config, seed, resource }
    }

    fn resource(&self) -> Result<&DensityMatrix> {
        if let Some(r) = self.resource.get() {
            return Ok(r);
        }
        let r = hybrid_resource(&self.config.hybrid, &self.config.protocol)?;
        Ok(self.resource.get_or_init(|| r))
    }

    fn input_rho(&self, input: &InputSpec) -> Result<DensityMatrix> {
        let p = &self.config.protocol;
        match &input.mixture {
            Some(m) => build_input_mixture(m, &input.qubit, p.dims.a),
            None => input_state(&input.qubit, p),
        }
    }

    fn convert(&self, input: &InputSpec) -> Result<(DensityMatrix, ConversionResult)> {
        let rho_in = self.input_rho(input)?;
        let res = run_conversion(&rho_in, self.resource()?, &self.config.protocol)?;
        Ok((rho_in, res))
    }
}

pub trait Task: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()>;
}

#[derive(Serialize)]
struct ConvertRecord {
    label: String,
    fidelity: FidelityReport,
    success_prob: f64,
    click_prob: f64,
    window_acceptance: f64,
    output_subspace_weight: f64,
    output_logical: ComplexRows,
}

#[derive(Serialize)]
struct ConvertReport {
    target: catconv::converter::LogicalBasis,
    classical_bound: f64,
    /// Total successes over total heralds, all inputs sent equally often.
    pooled_window_acceptance: f64,
    inputs: Vec<ConvertRecord>,
}

struct Convert;

impl Task for Convert {
    fn name(&self) -> &'static str {
        "convert"
    }

    fn describe(&self) -> &'static str {
        "convert every input; fidelities, rates and output states"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let cfg = &ctx.config;
        let target = cfg.target();
        let bound = classical_bound_mixed(&cfg.bound)?;
        let scan = &cfg.range_scan;
        let mut records = Vec::new();
        let (mut success, mut clicks) = (0.0, 0.0);
        for input in &cfg.inputs {
            let (rho_in, res) = ctx.convert(input)?;
            let mut report = FidelityReport::new(conversion_fidelity(&rho_in, &res.output, target)?, bound);
            if input.label == scan.input {
                let eta = cfg.protocol.eta_qubit;
                let center = match input.mixture {
                    Some(m) => m,
                    None => MixtureSpec::new(1.0 - eta, eta, 0.0, 0.0)?,
                };
                let range = fidelity_range_scan(&center, &scan.stds, &input.qubit, &res.output, target, scan.grid_steps)?;
                report = report.with_range(range);
            }
            let logical = project_logical(&res.output, target)?;
            success += res.success_prob;
            clicks += res.click_prob;
            out.write_json(&format!("states/output_{}.json", input.label), &res.output)?;
            records.push(ConvertRecord {
                label: input.label.clone(),
                fidelity: report,
                success_prob: res.success_prob,
                click_prob: res.click_prob,
                window_acceptance: res.window_acceptance,
                output_subspace_weight: logical.weight,
                output_logical: matrix_to_rows(&logical.rho),
            });
        }
        let pooled = if clicks > 0.0 { success / clicks } else { 0.0 };
        out.write_json(
            "convert.json",
            &ConvertReport { target, classical_bound: bound, pooled_window_acceptance: pooled, inputs: records },
        )
    }
}

struct Sweep;

impl Task for Sweep {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn describe(&self) -> &'static str {
        "fidelity and rates against the homodyne window width"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let cfg = &ctx.config;
        for label in &cfg.sweep.inputs {
            let rho_in = ctx.input_rho(cfg.input(label)?)?;
            let pts = sweep_window(&rho_in, ctx.resource()?, &cfg.protocol, &cfg.sweep.windows_sigma0, cfg.target())?;
            out.write_csv(&format!("sweep_{label}.csv"), &pts)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct DualRail {
    eta: f64,
    bound: f64,
}

#[derive(Serialize)]
struct BoundReport<'a> {
    spec: &'a catconv::benchmarks::BoundSpec,
    classical_bound: f64,
    pure_state_bound: f64,
    dual_rail: DualRail,
}

struct Bound;

impl Task for Bound {
    fn name(&self) -> &'static str {
        "bound"
    }

    fn describe(&self) -> &'static str {
        "classical teleportation thresholds"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let cfg = &ctx.config;
        let eta = cfg.dual_rail.eta;
        out.write_json(
            "bound.json",
            &BoundReport {
                spec: &cfg.bound,
                classical_bound: classical_bound_mixed(&cfg.bound)?,
                pure_state_bound: PURE_STATE_BOUND,
                dual_rail: DualRail { eta, bound: dual_rail_bound(eta)? },
            },
        )
    }
}

fn phases(n: usize) -> Vec<f64> {
    (0..n).map(|k| PI * k as f64 / n as f64).collect()
}

/// Output of `label` seen through a detector of the configured efficiency.
fn detected_output(ctx: &Context, label: &str, s: &SampleConfig) -> Result<(DensityMatrix, DensityMatrix)> {
    let (_, res) = ctx.convert(ctx.config.input(label)?)?;
    let lossy = loss_channel(&res.output, CV_MODE, s.detection_efficiency)?;
    Ok((res.output, lossy))
}

struct Sample;

impl Task for Sample {
    fn name(&self) -> &'static str {
        "sample"
    }

    fn describe(&self) -> &'static str {
        "synthetic homodyne data of converted outputs"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let s = &ctx.config.sample;
        for (k, label) in s.inputs.iter().enumerate() {
            let (_, lossy) = detected_output(ctx, label, s)?;
            let samples = sample_quadratures(&lossy, &phases(s.phases), s.samples_per_phase, ctx.seed.wrapping_add(k as u64))?;
            out.write_csv(&format!("samples_{label}.csv"), &samples)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TomoStateReport {
    label: String,
    samples: usize,
    discarded: usize,
    iterations: usize,
    converged: bool,
    fidelity_with_truth: f64,
    photon_distribution: Vec<f64>,
    state: DensityMatrix,
}

struct TomoState;

impl Task for TomoState {
    fn name(&self) -> &'static str {
        "tomo-state"
    }

    fn describe(&self) -> &'static str {
        "sample, then loss-corrected maximum-likelihood reconstruction"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let t = &ctx.config.tomo_state;
        let s = &t.sampling;
        for (k, label) in s.inputs.iter().enumerate() {
            let (truth, lossy) = detected_output(ctx, label, s)?;
            let samples = sample_quadratures(&lossy, &phases(s.phases), s.samples_per_phase, ctx.seed.wrapping_add(k as u64))?;
            let res = maxlik_reconstruct(&samples, t.reconstruction_dim, s.detection_efficiency, &t.maxlik)?;
            let d = truth.dim().max(t.reconstruction_dim);
            let fid = uhlmann_fidelity(&pad(&truth, d)?, &pad(&res.state, d)?)?;
            out.write_json(
                &format!("tomo_state_{label}.json"),
                &TomoStateReport {
                    label: label.clone(),
                    samples: samples.len(),
                    discarded: res.discarded,
                    iterations: res.iterations,
                    converged: res.converged,
                    fidelity_with_truth: fid,
                    photon_distribution: res.state.photon_distribution(),
                    state: res.state,
                },
            )?;
        }
        Ok(())
    }
}

fn pad(rho: &DensityMatrix, dim: usize) -> Result<DensityMatrix> {
    let mut m = catconv::fock::linalg::CMat::zeros(dim, dim);
    let n = rho.dim();
    m.view_mut((0, 0), (n, n)).copy_from(rho.data());
    DensityMatrix::new(catconv::fock::ModeLayout::single(CV_MODE, dim)?, m, rho.is_normalized())
}

#[derive(Serialize)]
struct ProcessReport<'a> {
    input_set: catconv::tomography::InputSet,
    chi: &'a catconv::tomography::ProcessMatrix,
    process_fidelity: f64,
    classical_threshold: f64,
    average_fidelity_trace_preserving: f64,
    average_pure_state_fidelity: f64,
}

struct TomoProcess;

impl Task for TomoProcess {
    fn name(&self) -> &'static str {
        "tomo-process"
    }

    fn describe(&self) -> &'static str {
        "process matrix of the simulated converter"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let cfg = &ctx.config;
        let set = cfg.tomo_process.input_set;
        let table = pipeline_frequency_table(&cfg.protocol, &cfg.hybrid, set, cfg.target())?;
        out.write_json("frequencies.json", &table)?;
        let chi = process_reconstruct(&table, &ReconstructOptions::default())?;
        let f = process_fidelity(&chi);
        out.write_json(
            "chi.json",
            &ProcessReport {
                input_set: set,
                chi: &chi,
                process_fidelity: f,
                classical_threshold: PROCESS_CLASSICAL_THRESHOLD,
                average_fidelity_trace_preserving: average_fidelity_from_process(f),
                average_pure_state_fidelity: average_pure_state_fidelity(&chi),
            },
        )
    }
}

#[derive(Serialize)]
struct WignerRow {
    x_sigma0: f64,
    p_sigma0: f64,
    w: f64,
}

struct Wigner;

impl Task for Wigner {
    fn name(&self) -> &'static str {
        "wigner"
    }

    fn describe(&self) -> &'static str {
        "Wigner function on a square grid (σ0 units)"
    }

    fn run(&self, ctx: &Context, out: &mut OutputDir) -> Result<()> {
        let w = &ctx.config.wigner;
        let dim = ctx.config.protocol.dims.c;
        let rho = match &w.source {
            WignerSource::CatEven { alpha } => cat_state(*alpha, Parity::Even, dim)?,
            WignerSource::CatOdd { alpha } => cat_state(*alpha, Parity::Odd, dim)?,
            WignerSource::Output { input } => ctx.convert(ctx.config.input(input)?)?.1.output,
        };
        if w.points < 2 || !(w.extent_sigma0 > 0.0) {
            return Err(Error::Format("wigner grid needs ≥ 2 points and a positive extent".into()));
        }
        let conv = QuadratureConvention::default();
        let axis: Vec<f64> = (0..w.points)
            .map(|k| -w.extent_sigma0 + 2.0 * w.extent_sigma0 * k as f64 / (w.points - 1) as f64)
            .collect();
        let grid: Vec<(f64, f64)> = axis
            .iter()
            .flat_map(|&x| axis.iter().map(move |&p| (x, p)))
            .map(|(x, p)| (conv.to_internal(x), conv.to_internal(p)))
            .collect();
        // Rescale so the density integrates to one over σ0-unit axes.
        let jac = conv.sigma0 * conv.sigma0;
        let rows: Vec<WignerRow> = wigner(&rho, &grid)?
            .into_iter()
            .zip(&grid)
            .map(|(v, &(x, p))| WignerRow { x_sigma0: conv.to_sigma0(x), p_sigma0: conv.to_sigma0(p), w: v * jac })
            .collect();
        out.write_csv("wigner.csv", &rows)
    }
}

const REGISTRY: &[&dyn Task] = &[&Convert, &Sweep, &Bound, &TomoState, &TomoProcess, &Wigner, &Sample];

pub fn task_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|t| t.name()).collect()
}

pub fn tasks() -> &'static [&'static dyn Task] {
    REGISTRY
}

pub fn task(name: &str) -> Result<&'static dyn Task> {
    REGISTRY.iter().copied().find(|t| t.name() == name).ok_or_else(|| Error::UnknownName {
        kind: "task",
        name: name.into(),
        available: task_names().join(", "),
    })
}
