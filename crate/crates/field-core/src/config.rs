//! Declarative description of fields, kernels, traces and projections.
//!
//! A network document is key-value with nested sections (TOML on disk); every
//! field, trace, boost and projection is named, and projections carry their
//! gains. Builders turn validated specs into live primitives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::FieldError;
use crate::field::FieldGrid;
use crate::kernel::InteractionKernel;
use crate::noise::derive_seed;
use crate::projection::{DimMap, Projection};
use crate::trace::{MemoryTrace, SlowBoost};
use crate::transfer::Transfer;
use crate::grid::Shape;
use crate::FEATURE_EXTENT;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelSpec {
    pub c_exc: f64,
    pub sigma_exc: f64,
    #[serde(default)]
    pub c_inh: f64,
    #[serde(default = "default_sigma")]
    pub sigma_inh: f64,
    #[serde(default)]
    pub g_global: f64,
}

fn default_sigma() -> f64 {
    1.0
}

impl KernelSpec {
    pub fn build(&self) -> InteractionKernel {
        InteractionKernel::new(self.c_exc, self.sigma_exc, self.c_inh, self.sigma_inh, self.g_global)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    /// 0, 1 or 2 feature dimensions.
    pub dims: u8,
    pub h: f64,
    pub tau: f64,
    #[serde(default)]
    pub noise_amp: f64,
    /// "sigmoid", "absolute_sigmoid" or "relu".
    pub transfer: String,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub kernel: Option<KernelSpec>,
}

fn default_beta() -> f64 {
    100.0
}

impl FieldSpec {
    pub fn transfer_fn(&self) -> Result<Transfer, FieldError> {
        match self.transfer.as_str() {
            "sigmoid" => Ok(Transfer::Sigmoid { beta: self.beta }),
            "absolute_sigmoid" => Ok(Transfer::AbsoluteSigmoid { beta: self.beta }),
            "relu" => Ok(Transfer::Relu),
            other => Err(FieldError::Configuration(format!(
                "unknown transfer function '{other}'"
            ))),
        }
    }

    pub fn build(&self, name: &str, master_seed: u64) -> Result<FieldGrid, FieldError> {
        let transfer = self.transfer_fn()?;
        let mut field = match self.dims {
            0 => FieldGrid::node(name, self.h, self.tau, transfer),
            1 => FieldGrid::line(name, self.h, self.tau, transfer),
            2 => FieldGrid::plane(name, self.h, self.tau, transfer),
            d => {
                return Err(FieldError::Configuration(format!(
                    "field '{name}': unsupported dims {d}"
                )))
            }
        };
        if let Some(k) = &self.kernel {
            field = field.with_kernel(k.build());
        }
        if self.noise_amp > 0.0 {
            field = field.with_noise(self.noise_amp, derive_seed(master_seed, &format!("field.{name}")));
        }
        Ok(field)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceSpec {
    pub dims: u8,
    pub tau_plus: f64,
    pub tau_minus: f64,
    /// Name of the node whose output gates this trace.
    pub gate: String,
}

impl TraceSpec {
    pub fn build(&self, name: &str) -> Result<MemoryTrace, FieldError> {
        let shape = match self.dims {
            0 => Shape::Scalar,
            1 => Shape::Line(FEATURE_EXTENT),
            2 => Shape::Plane(FEATURE_EXTENT, FEATURE_EXTENT),
            d => {
                return Err(FieldError::Configuration(format!(
                    "trace '{name}': unsupported dims {d}"
                )))
            }
        };
        Ok(MemoryTrace::new(shape, self.tau_plus, self.tau_minus))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoostSpec {
    pub tau_plus: f64,
    pub tau_minus: f64,
    /// Node whose output builds the boost.
    pub active_src: String,
    /// Node whose output decays the boost.
    pub threshold_src: String,
}

impl BoostSpec {
    pub fn build(&self) -> SlowBoost {
        SlowBoost::new(self.tau_plus, self.tau_minus)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub source: String,
    pub target: String,
    pub gain: f64,
    #[serde(default = "default_dim_map")]
    pub dim_map: String,
}

fn default_dim_map() -> String {
    "identity".to_string()
}

impl ProjectionSpec {
    pub fn dim_map(&self) -> Result<DimMap, FieldError> {
        Ok(match self.dim_map.as_str() {
            "identity" => DimMap::Identity,
            "broadcast" => DimMap::Broadcast,
            "expand_rows" => DimMap::ExpandRows,
            "expand_cols" => DimMap::ExpandCols,
            "max_rows" => DimMap::MaxRows,
            "max_cols" => DimMap::MaxCols,
            "sum_rows" => DimMap::SumRows,
            "sum_cols" => DimMap::SumCols,
            "max_all" => DimMap::MaxAll,
            "sum_all" => DimMap::SumAll,
            other => {
                return Err(FieldError::Configuration(format!(
                    "unknown dim_map '{other}'"
                )))
            }
        })
    }

    pub fn build(&self) -> Result<Projection, FieldError> {
        Ok(Projection::new(self.gain, self.dim_map()?))
    }
}

/// Named collections describing a whole field network.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct NetworkSpec {
    #[serde(default)]
    pub fields: BTreeMap<String, FieldSpec>,
    #[serde(default)]
    pub traces: BTreeMap<String, TraceSpec>,
    #[serde(default)]
    pub boosts: BTreeMap<String, BoostSpec>,
    #[serde(default)]
    pub projections: BTreeMap<String, ProjectionSpec>,
}

impl NetworkSpec {
    /// Checks that every referenced name resolves to a declared component.
    pub fn validate(&self) -> Result<(), FieldError> {
        let known = |name: &str| self.fields.contains_key(name) || self.traces.contains_key(name);
        for (pname, p) in &self.projections {
            if !known(&p.source) {
                return Err(FieldError::Configuration(format!(
                    "projection '{pname}': dangling source '{}'",
                    p.source
                )));
            }
            if !known(&p.target) {
                return Err(FieldError::Configuration(format!(
                    "projection '{pname}': dangling target '{}'",
                    p.target
                )));
            }
            p.dim_map()?;
        }
        for (tname, t) in &self.traces {
            if !self.fields.contains_key(&t.gate) {
                return Err(FieldError::Configuration(format!(
                    "trace '{tname}': dangling gate '{}'",
                    t.gate
                )));
            }
        }
        for (bname, b) in &self.boosts {
            for src in [&b.active_src, &b.threshold_src] {
                if !self.fields.contains_key(src) {
                    return Err(FieldError::Configuration(format!(
                        "boost '{bname}': dangling source '{src}'"
                    )));
                }
            }
        }
        for (fname, f) in &self.fields {
            f.transfer_fn().map_err(|e| {
                FieldError::Configuration(format!("field '{fname}': {e}"))
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"
        [fields.tonic]
        dims = 0
        h = -2.0
        tau = 100.0
        transfer = "sigmoid"
        beta = 100.0

        [fields.selection]
        dims = 1
        h = -1.0
        tau = 100.0
        transfer = "sigmoid"
        beta = 4.0
        kernel = { c_exc = 1.5, sigma_exc = 3.0, g_global = -0.02 }

        [traces.visual_memory]
        dims = 1
        tau_plus = 2000.0
        tau_minus = 30000.0
        gate = "tonic"

        [projections.selection_to_tonic]
        source = "selection"
        target = "tonic"
        gain = 1.0
        dim_map = "max_all"
    "#;

    #[test]
    fn document_round_trips_and_validates() {
        let spec: NetworkSpec = toml::from_str(DOC).unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.fields.len(), 2);
        assert_eq!(spec.traces.len(), 1);
        assert_eq!(spec.projections.len(), 1);
        let tonic = spec.fields["tonic"].build("tonic", 1).unwrap();
        assert_eq!(tonic.resting_level(), -2.0);
    }

    #[test]
    fn dangling_projection_is_a_configuration_error() {
        let mut spec: NetworkSpec = toml::from_str(DOC).unwrap();
        spec.projections.insert(
            "bad".into(),
            ProjectionSpec {
                source: "missing".into(),
                target: "tonic".into(),
                gain: 1.0,
                dim_map: "identity".into(),
            },
        );
        assert!(matches!(spec.validate(), Err(FieldError::Configuration(_))));
    }

    #[test]
    fn unknown_transfer_is_rejected() {
        let mut spec: NetworkSpec = toml::from_str(DOC).unwrap();
        spec.fields.get_mut("tonic").unwrap().transfer = "step".into();
        assert!(spec.validate().is_err());
    }
}
