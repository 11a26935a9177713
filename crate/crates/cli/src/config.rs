//! Per-subcommand run configurations. Every config is versioned JSON with
//! unknown keys rejected; optional fields are expanded to their defaults on
//! load so the emitted resolved config is complete.

use serde::{Deserialize, Serialize};

use cavitylattice_core::geometry::{LatticeSpec, ModeFunction, PairRange, QuadratureSpec};
use cavitylattice_core::model::ModelSpec;
use cavitylattice_core::solve::Method;
use cavitylattice_core::zeno::MeasurementSpec;

/// Fock-basis parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub num_sites: usize,
    pub max_per_site: u32,
    #[serde(default)]
    pub total_number: Option<u32>,
}

/// Inclusive linear grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + i as f64 * h).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsConfig {
    pub version: u32,
    pub lattice: LatticeSpec,
    pub mode_m: ModeFunction,
    pub mode_n: ModeFunction,
    pub range: PairRange,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralisedDickeConfig {
    pub mu: [f64; 2],
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub cap: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoSpeciesDickeConfig {
    pub mu: [f64; 3],
    pub lambda_1: [f64; 2],
    pub lambda_2: [f64; 2],
    pub cap: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairBhmConfig {
    pub j: f64,
    pub u: f64,
    pub lambda: f64,
    pub num_sites: usize,
    pub cap: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperexchangeConfig {
    pub delta_c: f64,
    /// Cavity prefactor C_c as [re, im].
    pub c_c: [f64; 2],
    /// Nearest-neighbour coupling J_nn as [re, im].
    pub j_nn: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeFieldConfig {
    pub lambda: f64,
    pub vartheta: f64,
    pub lattice_sites: usize,
    pub cap: u32,
}

/// Fully explicit model: a basis plus the physical parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModelConfig {
    pub basis: BasisConfig,
    pub model: ModelSpec,
}

/// Which Hamiltonian to build.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetConfig {
    GeneralisedDicke(GeneralisedDickeConfig),
    TwoSpeciesDicke(TwoSpeciesDickeConfig),
    PairBhm(PairBhmConfig),
    Superexchange(SuperexchangeConfig),
    GaugeField(GaugeFieldConfig),
    Model(ExplicitModelConfig),
}

fn default_method() -> Method {
    Method::Auto
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub version: u32,
    pub preset: PresetConfig,
    #[serde(default = "default_method")]
    pub method: Method,
    /// When set (explicit models on sector-free bases only), also report the
    /// Heisenberg ordering residuals for this site under both operator
    /// orderings.
    #[serde(default)]
    pub ordering_residual_site: Option<usize>,
}

fn default_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub version: u32,
    pub mu: [f64; 2],
    pub lambda_1: GridSpec,
    pub lambda_2: GridSpec,
    pub cap: u32,
    /// Mode-1 occupation level defining the phase boundary.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZenoConfig {
    pub version: u32,
    pub basis: BasisConfig,
    pub measurement: MeasurementSpec,
    /// When present, the effective Hamiltonian is projected onto each sector
    /// and the surviving transitions are reported.
    #[serde(default)]
    pub model: Option<ModelSpec>,
}

fn default_purity_threshold() -> f64 {
    0.99
}

fn default_sample_every() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub version: u32,
    /// Scattered amplitude of each basis component, as [re, im].
    pub alphas: Vec<[f64; 2]>,
    pub kappa: f64,
    /// Initial state amplitudes, as [re, im]; normalized on load.
    pub initial: Vec<[f64; 2]>,
    /// Amplitude-group index of each basis component.
    pub groups: Vec<usize>,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    pub num_trajectories: u64,
    #[serde(default = "default_purity_threshold")]
    pub purity_threshold: f64,
}
