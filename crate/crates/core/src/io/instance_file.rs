//! JSON instance documents.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    estimate_horizon, validate_instance, BuyerParams, InstanceViolation, ProcurementInstance,
    SupplierParams, DEFAULT_WEIGHTS,
};
use crate::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuyerSection {
    pub demand: Vec<u32>,
    pub lt_lower: u32,
    pub lt_upper: u32,
    pub lambda: f64,
    #[serde(default = "default_weights")]
    pub weights: [f64; 2],
    pub q_min: Vec<Vec<u32>>,
    pub q_max: Vec<Vec<u32>>,
    pub ordering_cost: Vec<Vec<f64>>,
}

fn default_weights() -> [f64; 2] {
    [DEFAULT_WEIGHTS.0, DEFAULT_WEIGHTS.1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplierSection {
    pub cor: Vec<f64>,
    pub cov: Vec<f64>,
    pub orc: Vec<f64>,
    pub ovc: Vec<f64>,
    pub pt: Vec<f64>,
    pub h: Vec<f64>,
    pub h_prime: Vec<f64>,
    pub sc: Vec<f64>,
    pub ss: Vec<u32>,
    pub vcap: Vec<u32>,
    pub incap: Vec<u32>,
    pub vehicles: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub profit_rate: f64,
}

/// The on-disk form of an instance. Without `horizon` the loader estimates
/// it from capacities and allocation bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub meta: Meta,
    pub buyer: BuyerSection,
    pub suppliers: Vec<SupplierSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed instance at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {}", list(.0))]
    Invalid(Vec<InstanceViolation>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn list(v: &[InstanceViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl From<&SupplierSection> for SupplierParams {
    fn from(s: &SupplierSection) -> Self {
        SupplierParams {
            prod_cost_ord: s.cor.clone(),
            prod_cost_ot: s.cov.clone(),
            cap_ord: s.orc.clone(),
            cap_ot: s.ovc.clone(),
            proc_time: s.pt.clone(),
            hold_cost: s.h.clone(),
            hold_cost_interval: s.h_prime.clone(),
            setup_cost: s.sc.clone(),
            safety_stock: s.ss.clone(),
            vehicle_cap: s.vcap.clone(),
            store_cap: s.incap.clone(),
            vehicle_count: s.vehicles,
            vehicle_fixed_cost: s.alpha,
            vehicle_var_cost: s.beta,
            delay_factor: s.gamma,
            profit_rate: s.profit_rate,
        }
    }
}

impl From<&SupplierParams> for SupplierSection {
    fn from(s: &SupplierParams) -> Self {
        SupplierSection {
            cor: s.prod_cost_ord.clone(),
            cov: s.prod_cost_ot.clone(),
            orc: s.cap_ord.clone(),
            ovc: s.cap_ot.clone(),
            pt: s.proc_time.clone(),
            h: s.hold_cost.clone(),
            h_prime: s.hold_cost_interval.clone(),
            sc: s.setup_cost.clone(),
            ss: s.safety_stock.clone(),
            vcap: s.vehicle_cap.clone(),
            incap: s.store_cap.clone(),
            vehicles: s.vehicle_count,
            alpha: s.vehicle_fixed_cost,
            beta: s.vehicle_var_cost,
            gamma: s.delay_factor,
            profit_rate: s.profit_rate,
        }
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &ProcurementInstance, seed: Option<u64>) -> Self {
        let b = &inst.buyer;
        InstanceFile {
            meta: Meta {
                name: inst.name.clone(),
                seed,
            },
            buyer: BuyerSection {
                demand: b.demand.clone(),
                lt_lower: b.lt_lower(),
                lt_upper: b.lt_upper(),
                lambda: b.delay_factor,
                weights: [b.weights.0, b.weights.1],
                q_min: b.q_min.clone(),
                q_max: b.q_max.clone(),
                ordering_cost: b.ordering_cost.clone(),
            },
            suppliers: inst.suppliers.iter().map(SupplierSection::from).collect(),
            horizon: Some(inst.horizon),
        }
    }

    fn build(&self, horizon: u32) -> ProcurementInstance {
        let b = &self.buyer;
        ProcurementInstance {
            name: self.meta.name.clone(),
            buyer: BuyerParams {
                demand: b.demand.clone(),
                due_window: (b.lt_lower, b.lt_upper),
                q_min: b.q_min.clone(),
                q_max: b.q_max.clone(),
                delay_factor: b.lambda,
                ordering_cost: b.ordering_cost.clone(),
                weights: (b.weights[0], b.weights[1]),
            },
            suppliers: self.suppliers.iter().map(SupplierParams::from).collect(),
            horizon,
        }
    }

    /// Builds and validates the instance, estimating a missing horizon.
    pub fn to_instance(&self) -> Result<ProcurementInstance, InstanceError> {
        let mut inst = self.build(self.horizon.unwrap_or(1));
        let violations = validate_instance(&inst);
        if !violations.is_empty() {
            return Err(InstanceError::Invalid(violations));
        }
        if self.horizon.is_none() {
            inst.horizon = estimate_horizon(&inst)?;
        }
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }
}

pub fn read_instance(path: &Path) -> Result<ProcurementInstance, InstanceError> {
    read_instance_file(path)?.to_instance()
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    InstanceFile::from_json(&text)
}

pub fn write_instance(path: &Path, file: &InstanceFile) -> std::io::Result<()> {
    std::fs::write(path, file.to_json())
}
