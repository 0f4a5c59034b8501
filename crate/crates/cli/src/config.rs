use std::path::PathBuf;

use catconv::benchmarks::{BoundSpec, MixtureStds};
use catconv::converter::{Dims, LogicalBasis, ProtocolParams};
use catconv::fock::Window;
use catconv::sources::{canonical_qubits, HybridSpec, MixtureSpec, QubitSpec};
use catconv::tomography::{InputSet, MaxLikOptions};
use catconv::{Error, Result};
use serde::{Deserialize, Serialize};

/// One input qubit; with `mixture` set, the input is the measured
/// vacuum/one/two-photon mixture instead of the heralding-efficiency model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InputRaw", into = "InputRaw")]
pub struct InputSpec {
    pub label: String,
    pub qubit: QubitSpec,
    pub mixture: Option<MixtureSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputRaw {
    label: String,
    c0: f64,
    theta_rad: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mixture: Option<MixtureSpec>,
}

impl TryFrom<InputRaw> for InputSpec {
    type Error = Error;
    fn try_from(r: InputRaw) -> Result<Self> {
        Ok(Self { label: r.label, qubit: QubitSpec::new(r.c0, r.theta_rad)?, mixture: r.mixture })
    }
}

impl From<InputSpec> for InputRaw {
    fn from(i: InputSpec) -> Self {
        Self { label: i.label, c0: i.qubit.c0(), theta_rad: i.qubit.theta(), mixture: i.mixture }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub inputs: Vec<String>,
    pub windows_sigma0: Vec<Window>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            inputs: vec!["1".into()],
            windows_sigma0: ["none", "2", "1", "0.5", "0.25"].iter().map(|s| Window::parse(s).unwrap()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualRailConfig {
    /// Single-photon fraction of the inputs.
    pub eta: f64,
}

impl Default for DualRailConfig {
    fn default() -> Self {
        Self { eta: 0.712 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RangeScanConfig {
    pub input: String,
    pub stds: MixtureStds,
    pub grid_steps: usize,
}

impl Default for RangeScanConfig {
    fn default() -> Self {
        Self {
            input: "1".into(),
            stds: MixtureStds { c_vac: 0.02, c_sp: 0.02, c_tp: 0.02, phase_std: 0.0 },
            grid_steps: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub inputs: Vec<String>,
    pub phases: usize,
    pub samples_per_phase: usize,
    /// Homodyne efficiency applied to the output before sampling.
    pub detection_efficiency: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { inputs: vec!["1".into()], phases: 12, samples_per_phase: 2500, detection_efficiency: 0.82 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomoStateConfig {
    pub sampling: SampleConfig,
    pub reconstruction_dim: usize,
    pub maxlik: MaxLikOptions,
}

impl Default for TomoStateConfig {
    fn default() -> Self {
        Self { sampling: SampleConfig::default(), reconstruction_dim: 8, maxlik: MaxLikOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomoProcessConfig {
    pub input_set: InputSet,
}

impl Default for TomoProcessConfig {
    fn default() -> Self {
        Self { input_set: InputSet::Four }
    }
}

/// Which state to map: a cat state, or the converter output for an input label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WignerSource {
    CatEven { alpha: f64 },
    CatOdd { alpha: f64 },
    Output { input: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WignerConfig {
    pub source: WignerSource,
    pub extent_sigma0: f64,
    pub points: usize,
}

impl Default for WignerConfig {
    fn default() -> Self {
        Self { source: WignerSource::CatOdd { alpha: 0.9 }, extent_sigma0: 6.0, points: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    pub tasks: Vec<String>,
    #[serde(default)]
    pub protocol: ProtocolParams,
    #[serde(default)]
    pub hybrid: HybridSpec,
    /// CV basis the outputs are judged in; defaults to cat states of the hybrid's target amplitude.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<LogicalBasis>,
    pub inputs: Vec<InputSpec>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub bound: BoundSpec,
    #[serde(default)]
    pub dual_rail: DualRailConfig,
    #[serde(default)]
    pub range_scan: RangeScanConfig,
    #[serde(default)]
    pub sample: SampleConfig,
    #[serde(default)]
    pub tomo_state: TomoStateConfig,
    #[serde(default)]
    pub tomo_process: TomoProcessConfig,
    #[serde(default)]
    pub wigner: WignerConfig,
}

fn default_out() -> PathBuf {
    PathBuf::from("catconv-out")
}

pub const PRESETS: &[(&str, &str)] = &[
    ("table-s1", "independently measured experimental parameters, six canonical inputs"),
    ("ideal", "lossless PNR-heralded limit with a 0.01 σ0 window"),
];

pub fn preset(name: &str) -> Result<RunConfig> {
    let protocol = match name {
        "table-s1" => ProtocolParams::table_s1(),
        "ideal" => ProtocolParams::ideal(),
        _ => {
            return Err(Error::UnknownName {
                kind: "preset",
                name: name.into(),
                available: PRESETS.iter().map(|p| p.0).collect::<Vec<_>>().join(", "),
            })
        }
    };
    Ok(RunConfig {
        seed: 1,
        out_dir: default_out(),
        tasks: crate::tasks::task_names().iter().map(|s| s.to_string()).collect(),
        protocol,
        hybrid: HybridSpec::default(),
        target: None,
        inputs: canonical_qubits()
            .into_iter()
            .map(|(label, qubit)| InputSpec { label: label.into(), qubit, mixture: None })
            .collect(),
        sweep: SweepConfig::default(),
        bound: BoundSpec::default(),
        dual_rail: DualRailConfig::default(),
        range_scan: RangeScanConfig::default(),
        sample: SampleConfig::default(),
        tomo_state: TomoStateConfig::default(),
        tomo_process: TomoProcessConfig::default(),
        wigner: WignerConfig::default(),
    })
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn target(&self) -> LogicalBasis {
        self.target.unwrap_or(LogicalBasis::Cat { alpha: self.hybrid.target_alpha })
    }

    pub fn with_dims(mut self, dims: Dims) -> Self {
        self.protocol.dims = dims;
        self
    }

    pub fn input(&self, label: &str) -> Result<&InputSpec> {
        self.inputs.iter().find(|i| i.label == label).ok_or_else(|| Error::UnknownName {
            kind: "input",
            name: label.into(),
            available: self.inputs.iter().map(|i| i.label.as_str()).collect::<Vec<_>>().join(", "),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        for t in &self.tasks {
            crate::tasks::task(t)?;
        }
        let mut labels: Vec<&str> = self.inputs.iter().map(|i| i.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Format("duplicate input labels".into()));
        }
        if let Some(bad) = labels.iter().find(|l| l.is_empty() || l.contains(['/', '\\'])) {
            return Err(Error::Format(format!("input label `{bad}` is not usable in file names")));
        }
        for l in self.sweep.inputs.iter().chain(&self.sample.inputs).chain(&self.tomo_state.sampling.inputs) {
            self.input(l)?;
        }
        if let WignerSource::Output { input } = &self.wigner.source {
            self.input(input)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_s1_values() {
        let c = preset("table-s1").unwrap();
        let p = &c.protocol;
        assert_eq!(
            (p.eta_qubit, p.eta_dv, p.eta_cv, p.squeezing_db, p.tap_r, p.eta_snspd),
            (0.72, 0.85, 0.85, 4.0, 0.1, 0.3)
        );
        assert_eq!(p.window, Window::Width(0.5));
        assert_eq!((p.eta_hd, p.chi_temp, p.chi_spa), (0.83, 0.86, 0.98));
        assert_eq!(c.inputs.len(), 6);
    }

    #[test]
    fn unknown_preset_lists_available() {
        let e = preset("nope").unwrap_err().to_string();
        assert!(e.contains("table-s1") && e.contains("ideal"), "{e}");
    }

    #[test]
    fn presets_round_trip_through_toml() {
        for (name, _) in PRESETS {
            let c = preset(name).unwrap();
            let text = c.to_toml().unwrap();
            assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
        }
    }

    #[test]
    fn hand_written_config() {
        let text = r#"
            seed = 5
            tasks = ["bound", "sweep"]
            [protocol]
            window_sigma0 = "none"
            squeezing_db = 3.0
            [[inputs]]
            label = "1"
            c0 = 0.0
            theta_rad = 0.0
            [[inputs]]
            label = "mix"
            c0 = 0.0
            theta_rad = 0.0
            mixture = { c_vac = 0.25, c_sp = 0.71, c_tp = 0.025, renormalize = true }
            [sweep]
            windows_sigma0 = ["none", 2, 0.5]
        "#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.protocol.window, Window::None);
        assert_eq!(c.sweep.windows_sigma0[1], Window::Width(2.0));
        assert!((c.inputs[1].mixture.unwrap().weights()[0] - 0.25 / 0.985).abs() < 1e-12);
        assert!(RunConfig::from_toml(&text.replace("\"bound\"", "\"plot\"")).is_err());
        assert!(RunConfig::from_toml(&text.replace("squeezing_db", "squeezing")).is_err());
    }
}
