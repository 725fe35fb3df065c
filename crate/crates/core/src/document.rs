//! JSON documents written by the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::BasisString;
use crate::error::Result;
use crate::half::HalfInt;
use crate::path::CouplingPath;
use crate::radical::RadicalAmplitude;
use crate::setup::{compile_setup, AssignmentPolicy, SetupConfig};
use crate::state::SparseState;
use crate::verify::compare_states;
use crate::{build_coupled_state, projector::apply_projection_sequence};

pub const SCHEMA: &str = "spinweave/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub path: CouplingPath,
    pub m: HalfInt,
}

/// Floating-point view of a state. Never used for comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalRendering {
    pub approx: bool,
    pub amplitudes: BTreeMap<BasisString, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDocument {
    pub schema: String,
    pub n: usize,
    pub label: Label,
    pub policy: String,
    pub setup: SetupConfig,
    pub holds: bool,
    pub state_alg: BTreeMap<BasisString, RadicalAmplitude>,
    pub state_ref: BTreeMap<BasisString, RadicalAmplitude>,
    /// `A` in `state_alg = A * state_ref`
    pub ratio: String,
    pub inverse_ratio: String,
    pub ratio_exact: RadicalAmplitude,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normalized: Option<DecimalRendering>,
}

/// Formats `x` with 15 significant digits in positional notation.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (14 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn amplitude_map(s: &SparseState) -> BTreeMap<BasisString, RadicalAmplitude> {
    s.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// Compiles, simulates and compares one label.
pub fn generate_document(
    path: &CouplingPath,
    m: HalfInt,
    policy: &AssignmentPolicy,
    with_decimal: bool,
) -> Result<StateDocument> {
    let setup = compile_setup(path, m, policy)?;
    let alg = apply_projection_sequence(&setup);
    let reference = build_coupled_state(path, m)?;
    let report = compare_states(path, m, &alg, &reference);
    let normalized = with_decimal.then(|| DecimalRendering {
        approx: true,
        amplitudes: alg
            .iter()
            .map(|(k, v)| (k.clone(), format_significant((v * &report.inverse_ratio).to_f64())))
            .collect(),
    });
    Ok(StateDocument {
        schema: SCHEMA.to_string(),
        n: path.len(),
        label: Label {
            path: path.clone(),
            m,
        },
        policy: policy.to_string(),
        setup,
        holds: report.holds,
        state_alg: amplitude_map(&alg),
        state_ref: amplitude_map(&reference),
        ratio: report.ratio.to_string(),
        inverse_ratio: report.inverse_ratio.to_string(),
        ratio_exact: report.ratio,
        normalized,
    })
}
