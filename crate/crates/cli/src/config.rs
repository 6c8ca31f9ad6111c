//! Strict JSON experiment configs.

use gs_dynamics::seminorms::{hermite_gaussian_oracle, SeminormParams, SmoothFunction, ZeroFunction};
use gs_dynamics::{GridSpec, Polynomial, WeightSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    VerifyLemmas,
    Iterate,
    BoundCert,
    DerivativeBounds,
    SeminormSweep,
    Cesaro,
    Neumann,
    DivergenceCert,
    WeightCheck,
}

impl CommandName {
    pub const ALL: [CommandName; 9] = [
        CommandName::VerifyLemmas,
        CommandName::Iterate,
        CommandName::BoundCert,
        CommandName::DerivativeBounds,
        CommandName::SeminormSweep,
        CommandName::Cesaro,
        CommandName::Neumann,
        CommandName::DivergenceCert,
        CommandName::WeightCheck,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CommandName::VerifyLemmas => "verify-lemmas",
            CommandName::Iterate => "iterate",
            CommandName::BoundCert => "bound-cert",
            CommandName::DerivativeBounds => "derivative-bounds",
            CommandName::SeminormSweep => "seminorm-sweep",
            CommandName::Cesaro => "cesaro",
            CommandName::Neumann => "neumann",
            CommandName::DivergenceCert => "divergence-cert",
            CommandName::WeightCheck => "weight-check",
        }
    }
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandName,
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn new(command: CommandName) -> Self {
        ExperimentConfig { command, params: empty_object(), output: None }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// SHA-256 of the canonical JSON of the resolved command parameters.
pub fn config_hash(command: CommandName, resolved_params: &serde_json::Value) -> String {
    let canonical = serde_json::json!({ "command": command, "params": resolved_params });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Gaussian {
        #[serde(default = "one")]
        scale: f64,
    },
    Zero,
}

fn one() -> f64 {
    1.0
}

impl Default for FunctionSpec {
    fn default() -> Self {
        FunctionSpec::Gaussian { scale: 1.0 }
    }
}

impl FunctionSpec {
    pub fn build(&self) -> gs_dynamics::Result<Arc<dyn SmoothFunction>> {
        Ok(match self {
            FunctionSpec::Gaussian { scale } => Arc::new(hermite_gaussian_oracle(*scale)?),
            FunctionSpec::Zero => Arc::new(ZeroFunction),
        })
    }
}

/// Polynomial coefficients in ascending order, e.g. `"1/2,0,1"` for `x^2 + 1/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolySpec(pub String);

impl PolySpec {
    pub fn parse(&self) -> gs_dynamics::Result<Polynomial> {
        self.0.parse()
    }
}

fn default_psi() -> PolySpec {
    PolySpec("1/2,0,1".into())
}

fn default_sigma() -> WeightSpec {
    WeightSpec::gevrey(2.0).and_then(|w| w.scaled(2.5)).expect("valid weight")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyLemmasParams {
    pub n_max: usize,
    pub binomial_n_max: usize,
    pub backward_bound_n_max: usize,
    pub chain_rule_n_max: usize,
    pub telescoping_n_max: usize,
}

impl Default for VerifyLemmasParams {
    fn default() -> Self {
        VerifyLemmasParams { n_max: 25, binomial_n_max: 200, backward_bound_n_max: 10_000, chain_rule_n_max: 12, telescoping_n_max: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IterateParams {
    pub psi: PolySpec,
    pub x: Vec<f64>,
    pub horizon: usize,
    pub escape_threshold: f64,
}

impl Default for IterateParams {
    fn default() -> Self {
        IterateParams { psi: default_psi(), x: vec![0.0, 0.5, 1.0, 2.0], horizon: 12, escape_threshold: 1e6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundCertParams {
    pub psi: PolySpec,
    pub b: f64,
    pub k_max: usize,
    pub grid: GridSpec,
}

impl Default for BoundCertParams {
    fn default() -> Self {
        BoundCertParams { psi: default_psi(), b: 2.0, k_max: 6, grid: GridSpec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DerivativeBoundsParams {
    pub psi: PolySpec,
    pub alpha: f64,
    pub n_max: usize,
    pub m_max: usize,
    pub grid: GridSpec,
}

impl Default for DerivativeBoundsParams {
    fn default() -> Self {
        DerivativeBoundsParams { psi: default_psi(), alpha: 2.0, n_max: 20, m_max: 10, grid: GridSpec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeminormSweepParams {
    pub f: FunctionSpec,
    pub psi: PolySpec,
    pub sigma: WeightSpec,
    pub lambda: f64,
    pub m_max: usize,
    pub trunc: SeminormParams,
}

impl Default for SeminormSweepParams {
    fn default() -> Self {
        SeminormSweepParams {
            f: FunctionSpec::default(),
            psi: default_psi(),
            sigma: default_sigma(),
            lambda: 1.0,
            m_max: 10,
            trunc: SeminormParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CesaroParams {
    pub f: FunctionSpec,
    pub psi: PolySpec,
    pub x: Vec<f64>,
    pub n: Vec<usize>,
}

impl Default for CesaroParams {
    fn default() -> Self {
        CesaroParams { f: FunctionSpec::default(), psi: default_psi(), x: vec![0.0], n: vec![10, 100, 1000] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NeumannParams {
    pub f: FunctionSpec,
    pub psi: PolySpec,
    /// `[re, im]`.
    pub mu: [f64; 2],
    pub x: Vec<f64>,
    pub tol: f64,
}

impl Default for NeumannParams {
    fn default() -> Self {
        NeumannParams { f: FunctionSpec::default(), psi: default_psi(), mu: [2.0, 0.0], x: vec![0.0, 0.5, 1.0], tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DivergenceParams {
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_prime: Option<f64>,
    pub mu_abs: f64,
    pub n_max: u64,
}

impl Default for DivergenceParams {
    fn default() -> Self {
        DivergenceParams { d: 1.5, d_prime: None, mu_abs: 2.0, n_max: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightCheckParams {
    pub weight: WeightSpec,
    pub t_max: f64,
    pub samples: usize,
}

impl Default for WeightCheckParams {
    fn default() -> Self {
        WeightCheckParams { weight: WeightSpec::gevrey(2.0).expect("valid weight"), t_max: 1e6, samples: 200 }
    }
}
