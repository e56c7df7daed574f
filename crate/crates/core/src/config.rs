//! JSON system descriptions and the certification run they request.
//!
//! ```json
//! {
//!   "kind": "network",
//!   "alpha": 0.5,
//!   "W": [[1, 1], [1, 1]],
//!   "nonlinearity": { "family": "scaled_tanh", "gain": 0.07, "dim": 2 },
//!   "analysis": { "k": 2 }
//! }
//! ```
//!
//! Lurie systems give `A`, `B`, `C` instead of `alpha`/`W`; their analysis may
//! carry an explicit `P` (nested arrays) or `"scalar-search"`, and optional
//! `eta1`/`eta2` (missing values are replaced by the largest admissible ones).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::{
    certify_lurie, check_network_k_contraction_with, check_theorem1_with, find_scalar_gamma_p_with, network_condition,
    scalar_search_lurie, Certificate, CertifyOptions, GainMode, NetworkCondition, ScalarSearchResult, Tolerances,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::symmetric_sqrt;
use crate::systems::{LurieSystem, NetworkSystem, Nonlinearity, System};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    ScaledTanh {
        gain: f64,
        dim: usize,
    },
    Linear {
        #[serde(rename = "K")]
        k: Matrix<f64>,
    },
    PiecewiseTable {
        dim: usize,
        knots: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    #[serde(flatten)]
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jac_norm_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", deserialize_with = "order_keyed")]
    pub jac_topk_sq_bound: BTreeMap<usize, f64>,
}

// Flattened structs buffer their fields, which turns integer map keys into
// strings; parse them back by hand.
fn order_keyed<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<usize, f64>, D::Error> {
    let raw: BTreeMap<String, f64> = BTreeMap::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse::<usize>().map(|k| (k, v)).map_err(|_| serde::de::Error::custom(format!("invalid order key {k:?}")))
        })
        .collect()
}

impl NonlinearitySpec {
    pub fn build(&self) -> Result<Nonlinearity<f64>> {
        let mut phi = match &self.family {
            FamilySpec::ScaledTanh { gain, dim } => Nonlinearity::scaled_tanh(*dim, *gain)?,
            FamilySpec::Linear { k } => Nonlinearity::linear(k.clone()),
            FamilySpec::PiecewiseTable { dim, knots, values } => {
                Nonlinearity::piecewise_table(*dim, knots.clone(), values.clone())?
            }
        };
        if let Some(l) = self.jac_norm_bound {
            phi = phi.with_norm_bound(l)?;
        }
        for (&k, &b) in &self.jac_topk_sq_bound {
            phi = phi.with_topk_sq_bound(k, b)?;
        }
        Ok(phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchKeyword {
    #[serde(rename = "scalar-search")]
    ScalarSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalingSpec {
    Search(SearchKeyword),
    Explicit(Matrix<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSpec {
    pub k: usize,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ScalingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_mode: Option<GainMode>,
}

impl AnalysisSpec {
    pub fn options(&self) -> CertifyOptions {
        CertifyOptions {
            tolerances: self.tolerances.unwrap_or_default(),
            gain_mode: self.gain_mode.unwrap_or(GainMode::Certified),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemConfig {
    Lurie {
        #[serde(rename = "A")]
        a: Matrix<f64>,
        #[serde(rename = "B")]
        b: Matrix<f64>,
        #[serde(rename = "C")]
        c: Matrix<f64>,
        nonlinearity: NonlinearitySpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        analysis: Option<AnalysisSpec>,
    },
    Network {
        alpha: f64,
        #[serde(rename = "W")]
        w: Matrix<f64>,
        nonlinearity: NonlinearitySpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        analysis: Option<AnalysisSpec>,
    },
}

/// Everything a certification run produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationOutcome {
    pub certificate: Certificate<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network_condition: Option<NetworkCondition<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_search: Option<ScalarSearchResult<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_scalar: Option<f64>,
}

impl SystemConfig {
    /// Parses and validates: the system is assembled once so that dimension
    /// errors surface at load time.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SystemConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    pub fn analysis(&self) -> Option<&AnalysisSpec> {
        match self {
            SystemConfig::Lurie { analysis, .. } | SystemConfig::Network { analysis, .. } => analysis.as_ref(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sys = self.build()?;
        let n = crate::systems::Dynamics::dim(&sys);
        if let Some(an) = self.analysis() {
            if an.k < 1 || an.k > n {
                return Err(Error::InvalidDimension { k: an.k, n });
            }
            let fixes_etas = matches!(an.p, Some(ScalingSpec::Explicit(_))) || an.eta1.is_some() || an.eta2.is_some();
            if matches!(self, SystemConfig::Network { .. }) && fixes_etas {
                return Err(Error::Parse(
                    "network analyses construct (gamma, p, eta1, eta2) themselves; omit P, eta1 and eta2".into(),
                ));
            }
            if let Some(ScalingSpec::Explicit(p)) = &an.p {
                if p.shape() != (n, n) {
                    return Err(Error::Shape(format!("P is {}x{}, system dimension is {n}", p.rows(), p.cols())));
                }
                symmetric_sqrt(p)?;
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<System<f64>> {
        Ok(match self {
            SystemConfig::Lurie { a, b, c, nonlinearity, .. } => {
                System::Lurie(LurieSystem::new(a.clone(), b.clone(), c.clone(), nonlinearity.build()?)?)
            }
            SystemConfig::Network { alpha, w, nonlinearity, .. } => {
                System::Network(NetworkSystem::new(*alpha, w.clone(), nonlinearity.build()?)?)
            }
        })
    }

    /// Runs the certification described by `analysis`, with `k` overridable.
    pub fn certify(&self, k_override: Option<usize>) -> Result<CertificationOutcome> {
        let an = self.analysis().cloned();
        let k = k_override
            .or(an.as_ref().map(|a| a.k))
            .ok_or_else(|| Error::Parse("no analysis.k in the config and no --k given".into()))?;
        let opts = an.as_ref().map(AnalysisSpec::options).unwrap_or_default();
        match self.build()? {
            System::Network(net) => {
                let cond = network_condition(&net, k)?;
                let certificate = check_network_k_contraction_with(&net, k, &opts)?;
                let scalar_search = if cond.holds() { Some(find_scalar_gamma_p_with(&net, k, &opts)?) } else { None };
                Ok(CertificationOutcome { certificate, network_condition: Some(cond), scalar_search, p_scalar: None })
            }
            System::Lurie(sys) => {
                let explicit = an.as_ref().and_then(|a| match &a.p {
                    Some(ScalingSpec::Explicit(p)) => Some(p.clone()),
                    _ => None,
                });
                let Some(p) = explicit else {
                    let (p, certificate) = scalar_search_lurie(&sys, k, &opts)?;
                    return Ok(CertificationOutcome {
                        certificate,
                        network_condition: None,
                        scalar_search: None,
                        p_scalar: Some(p),
                    });
                };
                let (eta1, eta2) = (an.as_ref().and_then(|a| a.eta1), an.as_ref().and_then(|a| a.eta2));
                let certificate = match (eta1, eta2) {
                    (Some(e1), Some(e2)) => check_theorem1_with(&sys, k, &p, e1, e2, &opts)?,
                    _ => {
                        let best = certify_lurie(&sys, k, &p, &opts)?;
                        check_theorem1_with(&sys, k, &p, eta1.unwrap_or(best.eta1), eta2.unwrap_or(best.eta2), &opts)?
                    }
                };
                Ok(CertificationOutcome { certificate, network_condition: None, scalar_search: None, p_scalar: None })
            }
        }
    }
}

/// The built-in Hopfield network `ẋ = −x/2 + 11ᵀ 0.07 tanh(x)` on `R^10`.
pub fn hopfield_config(k: usize) -> SystemConfig {
    SystemConfig::Network {
        alpha: 0.5,
        w: Matrix::filled(10, 10, 1.0),
        nonlinearity: NonlinearitySpec {
            family: FamilySpec::ScaledTanh { gain: 0.07, dim: 10 },
            jac_norm_bound: None,
            jac_topk_sq_bound: BTreeMap::new(),
        },
        analysis: Some(AnalysisSpec { k, p: None, eta1: None, eta2: None, tolerances: None, gain_mode: None }),
    }
}
