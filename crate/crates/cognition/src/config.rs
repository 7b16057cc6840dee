//! Architecture configuration: the declarative network document plus the
//! stimulus gains and event timing the update loop resolves at build time.

use field_core::config::{KernelSpec, NetworkSpec};
use field_core::FieldError;
use serde::{Deserialize, Serialize};

/// Gains for inputs assembled in code (stimuli, stamps, engagement drives).
/// Linear field-to-field arrows live in the `[projections]` table instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gains {
    pub object_color_stimulus: f64,
    pub scene_to_tonic: f64,
    pub object_position_stimulus: f64,
    pub goal_motion_stimulus: f64,
    pub lc_boost_to_tonic: f64,
    pub lc_boost_to_phasic: f64,
    pub action_boost: f64,
    pub ring_gain: f64,
    pub inverse_suggestion: f64,
    pub ior_stamp: f64,
    pub goal_focus_stamp: f64,
    pub current_goal_stamp: f64,
    pub object_decision_stamp: f64,
    pub wm_colors_discovery_inhibition: f64,
    pub error_to_threshold: f64,
    pub time_to_value_boost: f64,
    pub updated_error_gain: f64,
    pub local_error_gain: f64,
    pub filter_inhibition_amp: f64,
    pub filter_inhibition_sigma: f64,
    pub error_stamp_sigma: f64,
    pub goal_peak_sigma: f64,
    pub engaged_to_signal_action: f64,
    pub moving_to_signal_action: f64,
    pub predictor_init_span: f64,
    #[serde(default = "default_engaged_suppression")]
    pub engaged_to_tonic: f64,
    #[serde(default = "default_engaged_suppression")]
    pub engaged_to_phasic: f64,
}

fn default_engaged_suppression() -> f64 {
    -2.0
}

/// Event windows and rates, in simulated seconds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub eoa_pulse_s: f64,
    pub observation_delay_s: f64,
    pub force_pulse_s: f64,
    pub discovery_window_s: f64,
    pub pose_stamp_s: f64,
    pub return_duration_s: f64,
    pub pose_timeout_s: f64,
    pub hebbian_rate_per_s: f64,
}

/// Full architecture description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchitectureConfig {
    #[serde(flatten)]
    pub network: NetworkSpec,
    pub gains: Gains,
    pub timing: Timing,
    pub action_kernel: KernelSpec,
}

pub const DEFAULT_CONFIG_TOML: &str = include_str!("../default.toml");

impl ArchitectureConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, FieldError> {
        let config: ArchitectureConfig = toml::from_str(text)
            .map_err(|e| FieldError::Configuration(format!("config parse error: {e}")))?;
        config.network.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FieldError::Configuration(format!("cannot read {path:?}: {e}")))?;
        Self::from_toml_str(&text)
    }
}

impl Default for ArchitectureConfig {
    fn default() -> Self {
        Self::from_toml_str(DEFAULT_CONFIG_TOML).expect("default config must parse")
    }
}
