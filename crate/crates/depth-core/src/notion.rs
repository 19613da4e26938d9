//! The depth-notion strategy interface and its registry.
//!
//! Every notion lives behind [`DepthNotion`]; instances are configured with
//! [`NotionParams`] and looked up by name, so the CLI and the experiment
//! harness can treat the whole family uniformly.

use crate::approx::ApproxConfig;
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::scatter::ScatterModel;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Approximate,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Approximate => "approx",
        }
    }
}

/// A computed depth: a value in [0, 1], plus the raw layer index for the
/// convex-hull-peeling notion (whose natural value is an unbounded integer).
#[derive(Debug, Clone, PartialEq)]
pub struct DepthValue {
    pub value: f64,
    pub raw_layer: Option<u64>,
    pub notion: &'static str,
    pub method: Method,
}

impl DepthValue {
    pub fn exact(notion: &'static str, value: f64) -> Self {
        DepthValue {
            value,
            raw_layer: None,
            notion,
            method: Method::Exact,
        }
    }

    pub fn approximate(notion: &'static str, value: f64) -> Self {
        DepthValue {
            value,
            raw_layer: None,
            notion,
            method: Method::Approximate,
        }
    }
}

/// Containment convention for pairwise and simplex predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// Strict inequalities, exactly as the beta-skeleton formulas are printed.
    Strict,
    /// Boundary counts as inside.
    Closed,
}

/// Notion parameters; unused fields are ignored by notions that do not
/// consume them.
#[derive(Debug, Clone)]
pub struct NotionParams {
    /// Exponent of the L_p depth, p >= 1.
    pub p: f64,
    /// Beta of the beta-skeleton family, beta >= 1 (2 = lens, 1 = spherical).
    pub beta: f64,
    pub strictness: Strictness,
    /// Optional scatter model: enables the affine-invariant variants of the
    /// Oja, spatial, L_p and beta-skeleton depths and pins the Mahalanobis
    /// model.  Without it, Mahalanobis refits moment estimates per call.
    pub scatter: Option<Arc<ScatterModel>>,
}

impl Default for NotionParams {
    fn default() -> Self {
        NotionParams {
            p: 2.0,
            beta: 2.0,
            strictness: Strictness::Strict,
            scatter: None,
        }
    }
}

impl NotionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(DepthError::data("p must satisfy p >= 1"));
        }
        if !(self.beta >= 1.0) {
            return Err(DepthError::data("beta must satisfy beta >= 1"));
        }
        Ok(())
    }
}

/// One interchangeable depth statistic.
pub trait DepthNotion: Send + Sync {
    fn name(&self) -> &'static str;

    fn supports_exact(&self) -> bool {
        true
    }

    fn supports_approximate(&self) -> bool {
        false
    }

    /// Exact depth of `y` with respect to the sample.
    ///
    /// For the ordinal lens notion, `y` is a row of dissimilarities to every
    /// sample point rather than a coordinate vector.
    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue>;

    fn approximate(&self, _y: &[f64], _data: &Dataset, _cfg: &ApproxConfig) -> Result<DepthValue> {
        Err(DepthError::Unsupported(format!(
            "{} has no approximate engine",
            self.name()
        )))
    }

    /// Depth by the requested method.
    fn compute(&self, y: &[f64], data: &Dataset, cfg: Option<&ApproxConfig>) -> Result<DepthValue> {
        match cfg {
            None => self.exact(y, data),
            Some(c) => self.approximate(y, data, c),
        }
    }
}

/// Names accepted by [`build_notion`], in the order the paper reviews them.
pub const NOTION_NAMES: [&str; 11] = [
    "mahalanobis",
    "lp",
    "halfspace",
    "projection",
    "simplicial",
    "oja",
    "zonoid",
    "spatial",
    "skeleton",
    "lens-ordinal",
    "onion",
];

/// Construct a notion by name.
pub fn build_notion(name: &str, params: &NotionParams) -> Result<Box<dyn DepthNotion>> {
    params.validate()?;
    use crate::depth::*;
    let notion: Box<dyn DepthNotion> = match name {
        "mahalanobis" => Box::new(mahalanobis::MahalanobisDepth {
            model: params.scatter.clone(),
        }),
        "lp" => Box::new(lp_norm::LpDepth {
            p: params.p,
            model: params.scatter.clone(),
        }),
        "halfspace" => Box::new(halfspace::HalfspaceDepth),
        "projection" => Box::new(projection::ProjectionDepth),
        "simplicial" => Box::new(simplicial::SimplicialDepth),
        "oja" => Box::new(oja::OjaDepth {
            model: params.scatter.clone(),
        }),
        "zonoid" => Box::new(zonoid::ZonoidDepth),
        "spatial" => Box::new(spatial::SpatialDepth {
            model: params.scatter.clone(),
        }),
        "skeleton" => Box::new(skeleton::SkeletonDepth {
            beta: params.beta,
            strictness: params.strictness,
            model: params.scatter.clone(),
        }),
        "lens-ordinal" => Box::new(lens_ordinal::OrdinalLensDepth),
        "onion" => Box::new(onion::OnionDepth),
        other => {
            return Err(DepthError::Unsupported(format!(
                "unknown notion '{other}'; supported: {}",
                NOTION_NAMES.join(", ")
            )))
        }
    };
    Ok(notion)
}
