//! Run configuration: a JSON document with optional sections, overridable from flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shotnoise::{
    AssetModel, Backend, BondTerms, BondVariant, OptionKind, OptionTerms, PricingError, QuadratureSpec, RateModel,
    SimConfig,
};
use thiserror::Error;

/// Problems with the configuration itself, reported with exit status 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid configuration: {0}")]
    Invalid(#[from] PricingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McTarget {
    Option,
    Bond,
    RateMoments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantChoice {
    Shot,
    Vasicek,
    General,
    All,
}

impl VariantChoice {
    pub fn variants(self) -> Vec<BondVariant> {
        match self {
            Self::Shot => vec![BondVariant::Shot],
            Self::Vasicek => vec![BondVariant::Vasicek],
            Self::General => vec![BondVariant::General],
            Self::All => BondVariant::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Call,
    Put,
}

impl From<KindName> for OptionKind {
    fn from(kind: KindName) -> Self {
        match kind {
            KindName::Call => OptionKind::Call,
            KindName::Put => OptionKind::Put,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    Series,
    Fourier,
}

impl From<BackendName> for Backend {
    fn from(name: BackendName) -> Self {
        match name {
            BackendName::Series => Backend::Series,
            BackendName::Fourier => Backend::Fourier,
        }
    }
}

impl From<Backend> for BackendName {
    fn from(backend: Backend) -> Self {
        match backend {
            Backend::Series => Self::Series,
            Backend::Fourier => Self::Fourier,
        }
    }
}

/// Asset jump-diffusion parameters. `lambda` is per year, `nu` and `delta` are in log-price units.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AssetSection {
    pub lambda: f64,
    pub nu: f64,
    pub delta: f64,
    pub sigma: f64,
}

impl Default for AssetSection {
    fn default() -> Self {
        Self { lambda: 1.0, nu: -0.05, delta: 0.15, sigma: 0.0 }
    }
}

/// Cartesian grid of European contracts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContractSection {
    pub spots: Vec<f64>,
    pub strikes: Vec<f64>,
    pub maturities: Vec<f64>,
    pub rate: f64,
    pub dividend: f64,
    pub kinds: Vec<KindName>,
}

impl Default for ContractSection {
    fn default() -> Self {
        Self {
            spots: vec![100.0],
            strikes: vec![90.0, 100.0, 110.0],
            maturities: vec![0.5, 1.0],
            rate: 0.02,
            dividend: 0.0,
            kinds: vec![KindName::Call, KindName::Put],
        }
    }
}

/// Short-rate parameters: reversion speed `a`, long-run level `b`, diffusion `sigma`
/// and the rate-jump law.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RateSection {
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub nu: f64,
    pub delta: f64,
}

impl Default for RateSection {
    fn default() -> Self {
        Self { a: 0.5, b: 0.03, sigma: 0.01, lambda: 2.0, nu: 0.01, delta: 0.02 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BondSection {
    pub valuation_time: f64,
    pub maturities: Vec<f64>,
    pub short_rate: f64,
    pub variant: VariantChoice,
}

impl Default for BondSection {
    fn default() -> Self {
        Self {
            valuation_time: 0.0,
            maturities: vec![0.5, 1.0, 2.0, 5.0, 10.0],
            short_rate: 0.03,
            variant: VariantChoice::All,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub paths: u64,
    pub seed: u64,
    pub antithetic: bool,
    pub target: McTarget,
    /// Horizon in years for `rate_moments`.
    pub horizon: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self { paths: 100_000, seed: 42, antithetic: true, target: McTarget::Option, horizon: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub rel_tol: f64,
    pub k_max: Option<f64>,
    pub k_nodes: usize,
    pub n_max: usize,
}

impl Default for QuadSection {
    fn default() -> Self {
        let spec = QuadratureSpec::default();
        Self { rel_tol: spec.rel_tol, k_max: spec.k_max, k_nodes: spec.k_nodes, n_max: spec.n_max }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Not echoed, so the report body does not depend on where it is written.
    #[serde(skip_serializing)]
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { path: None, format: Format::Csv }
    }
}

/// Everything a command needs. Absent sections and keys take their defaults;
/// unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub backend: BackendName,
    pub asset: AssetSection,
    pub contracts: ContractSection,
    pub rate_model: RateSection,
    pub bond: BondSection,
    pub sim: SimSection,
    pub quad: QuadSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            backend: BackendName::Series,
            asset: AssetSection::default(),
            contracts: ContractSection::default(),
            rate_model: RateSection::default(),
            bond: BondSection::default(),
            sim: SimSection::default(),
            quad: QuadSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub paths: Option<u64>,
    pub backend: Option<Backend>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
    }

    pub fn apply(mut self, overrides: Overrides) -> Result<Self, ConfigError> {
        if let Some(seed) = overrides.seed {
            self.sim.seed = seed;
        }
        if let Some(paths) = overrides.paths {
            self.sim.paths = paths;
        }
        if let Some(backend) = overrides.backend {
            self.backend = backend.into();
        }
        if let Some(out) = overrides.out {
            self.output.path = Some(out);
        }
        if let Some(format) = overrides.format {
            self.output.format = format;
        }
        if let Some(tol) = overrides.tol {
            self.quad.rel_tol = tol;
        }
        self.quad()?;
        self.sim()?;
        self.asset_model()?;
        self.rate_model()?;
        Ok(self)
    }

    pub fn backend(&self) -> Backend {
        self.backend.into()
    }

    pub fn quad(&self) -> Result<QuadratureSpec, PricingError> {
        let spec = QuadratureSpec {
            rel_tol: self.quad.rel_tol,
            k_max: self.quad.k_max,
            k_nodes: self.quad.k_nodes,
            n_max: self.quad.n_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sim(&self) -> Result<SimConfig, PricingError> {
        SimConfig::new(self.sim.paths, self.sim.seed, self.sim.antithetic)
    }

    pub fn asset_model(&self) -> Result<AssetModel, PricingError> {
        let a = &self.asset;
        AssetModel::new(a.lambda, a.nu, a.delta, a.sigma)
    }

    pub fn rate_model(&self) -> Result<RateModel, PricingError> {
        let r = &self.rate_model;
        RateModel::new(r.a, r.b, r.sigma, r.lambda, r.nu, r.delta)
    }

    /// Contracts in spot, strike, maturity, kind order.
    pub fn contracts(&self) -> Result<Vec<OptionTerms>, PricingError> {
        let c = &self.contracts;
        let mut out = Vec::new();
        for &spot in &c.spots {
            for &strike in &c.strikes {
                for &tau in &c.maturities {
                    for &kind in &c.kinds {
                        out.push(OptionTerms::new(spot, strike, tau, c.rate, c.dividend, kind.into())?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn bonds(&self) -> Result<Vec<BondTerms>, PricingError> {
        let b = &self.bond;
        b.maturities.iter().map(|&m| BondTerms::new(b.valuation_time, m, b.short_rate)).collect()
    }

    /// Compact JSON echo of the resolved configuration for report headers.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }
}
