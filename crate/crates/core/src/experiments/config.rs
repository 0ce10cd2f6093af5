//! Run configuration. A single JSON document fully determines an experiment:
//! the digest of the parsed, re-canonicalized config is the reproducibility
//! key reported alongside every result.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::divfree::DivFreeKind;
use crate::error::{Error, Result};
use crate::exponents::{self, ExponentTuple, Rational, TheoremTag};

/// Which estimate a run exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Wave energy bound with L¹-in-space forcing, n = 2.
    WaveEnergy,
    /// Full wave space-time bound for a passing `wave-system` tuple.
    WaveStrichartz,
    /// Zero-data wave bound for a passing `inhomo-wave3d` tuple, n = 3.
    WaveZeroData,
    /// Schrödinger space-time bound for a passing `schrodinger` tuple.
    SchrodingerStrichartz,
    /// Negative-order Sobolev control of divergence-free fields by L¹.
    DivfreeEmbedding,
    /// Jacobian determinant against squared Dirichlet energy, n = 2.
    Wente,
    /// Wave equation forced by a Jacobian determinant, n = 2.
    WenteWave,
    /// Ratio invariance under the dilation x ↦ λx, t ↦ λt.
    ScalingSweep,
    /// Growth of ‖R₁ g‖_{L¹}/‖g‖_{L¹} along a mollifier family.
    RieszDemo,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::WaveEnergy => "wave-energy",
            ExperimentKind::WaveStrichartz => "wave-strichartz",
            ExperimentKind::WaveZeroData => "wave-zero-data",
            ExperimentKind::SchrodingerStrichartz => "schrodinger-strichartz",
            ExperimentKind::DivfreeEmbedding => "divfree-embedding",
            ExperimentKind::Wente => "wente",
            ExperimentKind::WenteWave => "wente-wave",
            ExperimentKind::ScalingSweep => "scaling-sweep",
            ExperimentKind::RieszDemo => "riesz-demo",
        }
    }
}

/// Random data family. All kinds draw canonical coefficients below the
/// cutoff, so the same seed names the same continuum field at every grid
/// resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Divergence-free via a random stream function (n = 2 only).
    CurlOfStream,
    /// Random components pushed through the Leray projection.
    ProjectedRandom,
    /// One random mode with an orthogonal amplitude.
    SingleMode,
    /// Unconstrained random components (maps for the determinant runs).
    RandomMap,
    /// Identically zero (degenerate-trial plumbing checks).
    Zero,
}

impl FamilyKind {
    pub fn divfree_kind(&self) -> Option<DivFreeKind> {
        match self {
            FamilyKind::CurlOfStream => Some(DivFreeKind::CurlOfStream),
            FamilyKind::ProjectedRandom => Some(DivFreeKind::ProjectedRandom),
            FamilyKind::SingleMode => Some(DivFreeKind::SingleMode),
            FamilyKind::Zero => Some(DivFreeKind::Zero),
            FamilyKind::RandomMap => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    pub seed: u64,
    pub trials: usize,
    /// Spectral decay exponent of the drawn coefficients.
    pub beta: f64,
    /// Largest active |k|_∞; must satisfy 3·cutoff ≤ smallest grid.
    pub cutoff: usize,
}

/// Exponent tuple as it appears in config files: exact strings ("8", "5/8",
/// "inf"), parsed without any float round-trip.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleConfig {
    pub theorem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
}

impl TupleConfig {
    pub fn to_tuple(&self, n: u32) -> Result<ExponentTuple> {
        let theorem: TheoremTag = self.theorem.parse()?;
        let exp = |v: &Option<String>| v.as_deref().map(str::parse).transpose();
        let rat = |v: &Option<String>| -> Result<Option<Rational>> {
            v.as_deref().map(exponents::parse_rational).transpose()
        };
        Ok(ExponentTuple {
            theorem,
            n,
            q: exp(&self.q)?,
            r: exp(&self.r)?,
            qt: exp(&self.qt)?,
            rt: exp(&self.rt)?,
            s: rat(&self.s)?,
            k: rat(&self.k)?,
            gamma: rat(&self.gamma)?,
        })
    }
}

fn default_period() -> f64 {
    std::f64::consts::TAU
}

/// Complete description of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Spatial dimension.
    pub n: u32,
    #[serde(default = "default_period")]
    pub period: f64,
    /// Refinement levels, strictly increasing grid sizes.
    pub grid_points: Vec<usize>,
    pub t_end: f64,
    pub steps: usize,
    /// Frame sampling stride for the time norms; defaults to steps/64.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<TupleConfig>,
    pub family: FamilyConfig,
    /// Orders for the divfree-embedding run, exact rationals in (0, n).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<String>,
    /// Dilation factors for the scaling sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<u32>,
    /// Mollifier widths for the Riesz demo, strictly decreasing.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub widths: Vec<f64>,
    /// Which estimate the scaling sweep dilates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<ExperimentKind>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Hex SHA-256 of the canonical (parsed and re-serialized) form, so
    /// formatting and field order in the source file do not matter.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialization");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let bytes = hasher.finalize();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn stride(&self) -> usize {
        self.output_stride.unwrap_or_else(|| (self.steps / 64).max(1))
    }

    /// The parsed exponent tuple, if the config carries one.
    pub fn tuple(&self) -> Result<Option<ExponentTuple>> {
        self.tuple.as_ref().map(|t| t.to_tuple(self.n)).transpose()
    }

    pub fn parsed_alphas(&self) -> Result<Vec<f64>> {
        self.alphas
            .iter()
            .map(|a| {
                let v = exponents::parse_rational(a)?;
                Ok(*v.numer() as f64 / *v.denom() as f64)
            })
            .collect()
    }

    fn config_err(&self, msg: &str) -> Error {
        Error::Config(format!("{}: {msg}", self.experiment.name()))
    }

    fn require(&self, ok: bool, msg: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(self.config_err(msg))
        }
    }

    fn require_tuple(&self, tag: TheoremTag) -> Result<()> {
        let tuple = self
            .tuple()?
            .ok_or_else(|| self.config_err("an exponent tuple is required"))?;
        if tuple.theorem != tag {
            return Err(self.config_err(&format!("tuple must use theorem {}", tag.name())));
        }
        if tuple.n != self.n {
            return Err(self.config_err("tuple dimension must match n"));
        }
        let result = exponents::check(&tuple)?;
        if !result.pass() {
            let names: Vec<&str> = result.violations.iter().map(|v| v.condition).collect();
            return Err(Error::NotApplicable(format!(
                "exponent tuple fails {}: {}",
                tag.name(),
                names.join(", ")
            )));
        }
        Ok(())
    }

    fn require_no_tuple(&self) -> Result<()> {
        self.require(self.tuple.is_none(), "takes no exponent tuple")
    }

    fn require_divfree_family(&self) -> Result<()> {
        self.require(
            self.family.kind.divfree_kind().is_some(),
            "family must be divergence-free (curl-of-stream, projected-random, single-mode, or zero)",
        )
    }

    /// Structural validation: everything checkable without running. Solver
    /// and norm code still enforce their own contracts downstream.
    pub fn validate(&self) -> Result<()> {
        self.require(!self.grid_points.is_empty(), "grid_points must be nonempty")?;
        self.require(
            self.grid_points.windows(2).all(|w| w[0] < w[1]),
            "grid_points must strictly increase",
        )?;
        self.require(
            self.period.is_finite() && self.period > 0.0,
            "period must be positive",
        )?;
        self.require(self.t_end.is_finite() && self.t_end > 0.0, "t_end must be positive")?;
        self.require(self.steps >= 1, "steps must be at least 1")?;
        self.require(
            self.steps % self.stride() == 0,
            "output stride must divide steps",
        )?;
        self.require(self.family.trials >= 1, "family needs at least one trial")?;
        self.require(
            self.family.beta.is_finite() && self.family.beta >= 0.0,
            "family beta must be finite and nonnegative",
        )?;
        self.require(self.family.cutoff >= 1, "family cutoff must be at least 1")?;
        let smallest = self.grid_points[0];
        self.require(
            3 * self.family.cutoff <= smallest,
            "family cutoff needs 3·cutoff ≤ smallest grid",
        )?;
        self.require(
            self.family.kind != FamilyKind::CurlOfStream || self.n == 2,
            "curl-of-stream family requires n = 2",
        )?;

        let no_alphas = || self.require(self.alphas.is_empty(), "alphas apply only to divfree-embedding");
        let no_lambdas = || self.require(self.lambdas.is_empty(), "lambdas apply only to scaling-sweep");
        let no_widths = || self.require(self.widths.is_empty(), "widths apply only to riesz-demo");
        let no_base = || self.require(self.base.is_none(), "base applies only to scaling-sweep");

        match self.experiment {
            ExperimentKind::WaveEnergy => {
                self.require(self.n == 2, "requires n = 2")?;
                self.require_no_tuple()?;
                self.require_divfree_family()?;
                no_alphas()?;
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::WaveStrichartz => {
                self.require(self.n >= 2, "requires n ≥ 2")?;
                self.require_tuple(TheoremTag::WaveSystem)?;
                self.require_divfree_family()?;
                no_alphas()?;
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::WaveZeroData => {
                self.require(self.n == 3, "requires n = 3")?;
                self.require_tuple(TheoremTag::InhomoWave3d)?;
                self.require_divfree_family()?;
                no_alphas()?;
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::SchrodingerStrichartz => {
                self.require(self.n >= 2, "requires n ≥ 2")?;
                self.require_tuple(TheoremTag::Schrodinger)?;
                self.require_divfree_family()?;
                no_alphas()?;
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::DivfreeEmbedding => {
                self.require(self.n >= 2, "requires n ≥ 2")?;
                self.require_no_tuple()?;
                self.require_divfree_family()?;
                self.require(!self.alphas.is_empty(), "needs a nonempty alpha grid")?;
                for a in self.parsed_alphas()? {
                    self.require(
                        a > 0.0 && a < self.n as f64,
                        "alphas must lie strictly between 0 and n",
                    )?;
                }
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::Wente | ExperimentKind::WenteWave => {
                self.require(self.n == 2, "requires n = 2")?;
                self.require_no_tuple()?;
                self.require(
                    self.family.kind == FamilyKind::RandomMap,
                    "family kind must be random-map",
                )?;
                no_alphas()?;
                no_lambdas()?;
                no_widths()?;
                no_base()?;
            }
            ExperimentKind::ScalingSweep => {
                self.require(self.n == 2, "requires n = 2")?;
                self.require(self.grid_points.len() == 1, "takes exactly one grid level")?;
                self.require(!self.lambdas.is_empty(), "needs a nonempty lambda list")?;
                self.require(self.lambdas.iter().all(|&l| l >= 1), "lambdas must be ≥ 1")?;
                self.require_divfree_family()?;
                match self.base {
                    Some(ExperimentKind::WaveEnergy) => self.require_no_tuple()?,
                    Some(ExperimentKind::WaveStrichartz) => {
                        self.require_tuple(TheoremTag::WaveSystem)?
                    }
                    _ => {
                        return Err(self.config_err(
                            "base must be wave-energy or wave-strichartz",
                        ))
                    }
                }
                no_alphas()?;
                no_widths()?;
            }
            ExperimentKind::RieszDemo => {
                self.require(self.n == 2, "requires n = 2")?;
                self.require_no_tuple()?;
                self.require(self.widths.len() >= 3, "needs at least three widths")?;
                self.require(
                    self.widths.iter().all(|w| w.is_finite() && *w > 0.0),
                    "widths must be positive",
                )?;
                self.require(
                    self.widths.windows(2).all(|w| w[1] < w[0]),
                    "widths must strictly decrease",
                )?;
                no_alphas()?;
                no_lambdas()?;
                no_base()?;
            }
        }
        Ok(())
    }
}
