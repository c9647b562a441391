//! Serializable surface descriptions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ribbon::{RibbonError, RibbonStructure, SurfaceSignature};
use crate::surface::{MaximalCoordinates, SurfaceError};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum IoError {
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("`arcs` is {arcs} but sigma_inf has {darts} entries")]
    ArcCount { arcs: usize, darts: usize },
    #[error("missing field `{0}`")]
    Missing(&'static str),
}

/// `{"genus", "boundary", "arcs", "sigma_inf", "circle_of_dart"}` plus
/// optional a-lengths or per-arc weights. `σ1` pairs darts `2k, 2k + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub genus: usize,
    pub boundary: usize,
    pub arcs: usize,
    pub sigma_inf: Vec<usize>,
    pub circle_of_dart: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl SurfaceFile {
    pub fn from_ribbon(r: &RibbonStructure) -> Self {
        Self {
            genus: r.signature().genus(),
            boundary: r.signature().n_boundary(),
            arcs: r.n_arcs(),
            sigma_inf: r.sigma_inf_perm().images().to_vec(),
            circle_of_dart: r.circle_of_dart().to_vec(),
            a_lengths: None,
            weights: None,
        }
    }

    pub fn from_coordinates(m: &MaximalCoordinates) -> Self {
        Self {
            a_lengths: Some(m.a_lengths().to_vec()),
            ..Self::from_ribbon(m.ribbon())
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn ribbon(&self) -> Result<RibbonStructure, IoError> {
        if 2 * self.arcs != self.sigma_inf.len() {
            return Err(IoError::ArcCount {
                arcs: self.arcs,
                darts: self.sigma_inf.len(),
            });
        }
        let sig = SurfaceSignature::new(self.genus, self.boundary)?;
        Ok(RibbonStructure::new(sig, self.sigma_inf.clone(), self.circle_of_dart.clone())?)
    }

    pub fn coordinates(&self) -> Result<MaximalCoordinates, IoError> {
        let a = self.a_lengths.clone().ok_or(IoError::Missing("a_lengths"))?;
        Ok(MaximalCoordinates::new(self.ribbon()?, a)?)
    }

    pub fn weight_vector(&self) -> Result<&[f64], IoError> {
        self.weights.as_deref().ok_or(IoError::Missing("weights"))
    }
}
