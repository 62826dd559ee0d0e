//! Simulation configuration and validation.

use crate::geometry::{GeometryError, PartitionSpec};
use crate::radio::RadioParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{key}: {source}")]
    Geometry {
        key: &'static str,
        #[source]
        source: GeometryError,
    },
    #[error("{key} must be strictly positive, got {value}")]
    NonPositive { key: &'static str, value: f64 },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
    #[error("config file parse error: {0}")]
    Parse(String),
    #[error("strict range mode requires tx_range_m to be set")]
    MissingTxRange,
    #[error("chain hop {from} -> {to} spans {distance_m:.2} m, exceeding the configured tx range {range_m} m")]
    RangeExceeded {
        from: String,
        to: String,
        distance_m: f64,
        range_m: f64,
    },
    #[error("approach is only meaningful for the chain schemes, not {scheme}")]
    ApproachNotApplicable { scheme: String },
}

/// Behaviour switches. All default to the primary accounting described in
/// the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimFlags {
    /// Perfect in-network fusion: every forwarded data packet is exactly
    /// `report_bits` long. Off by default, so relays accumulate payloads.
    pub fusion: bool,
    /// Charge the setup/self-organization control traffic to batteries.
    pub setup_energy: bool,
    /// RFDs sleep between rounds (timer wake) instead of listening.
    pub sleep_mode: bool,
    /// Reproduce the published chain-build scan that stops at the first
    /// improving candidate instead of taking the true nearest neighbor.
    pub literal_first_improvement: bool,
    /// Fail topology construction when any chain hop exceeds `tx_range_m`.
    pub strict_range: bool,
}

impl Default for SimFlags {
    fn default() -> Self {
        Self {
            fusion: false,
            setup_energy: true,
            sleep_mode: false,
            literal_first_improvement: false,
            strict_range: false,
        }
    }
}

/// Full parameter set for one simulated network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of RFDs deployed uniformly over the disc.
    pub rfd_count: u32,
    pub partition: PartitionSpec,
    pub rfd_battery_j: f64,
    pub ffd_battery_j: f64,
    pub rfd_death_threshold_j: f64,
    pub ffd_death_threshold_j: f64,
    /// Data message size per sensed report.
    pub report_bits: u64,
    /// Token (Req) packet size.
    pub token_bits: u64,
    /// Control message size (position scan, H_Region, chain build).
    pub ctl_bits: u64,
    /// Recorded for reference; does not gate anything.
    pub sensing_radius_m: f64,
    /// Fixed transmission range; only enforced in strict range mode.
    pub tx_range_m: Option<f64>,
    pub radio: RadioParams,
    pub seed: u64,
    pub flags: SimFlags,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            rfd_count: 100,
            partition: PartitionSpec::from_degrees(50.0, 25.0, 180.0).expect("default partition"),
            rfd_battery_j: 10.0,
            ffd_battery_j: 100.0,
            rfd_death_threshold_j: 0.05,
            ffd_death_threshold_j: 0.5,
            report_bits: 2000,
            token_bits: 64,
            ctl_bits: 64,
            sensing_radius_m: 10.0,
            tx_range_m: None,
            radio: RadioParams::default(),
            seed: 1,
            flags: SimFlags::default(),
        }
    }
}

impl NetworkConfig {
    /// Checks every numeric invariant and returns non-fatal warnings
    /// (currently: fewer RFDs than regions).
    pub fn validate(&self) -> Result<Vec<String>, ConfigError> {
        for (key, value) in [
            ("rfd_battery_j", self.rfd_battery_j),
            ("ffd_battery_j", self.ffd_battery_j),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ConfigError::NonPositive { key, value });
            }
        }
        for (key, value) in [
            ("rfd_death_threshold_j", self.rfd_death_threshold_j),
            ("ffd_death_threshold_j", self.ffd_death_threshold_j),
        ] {
            if value < 0.0 || !value.is_finite() {
                return Err(ConfigError::NonPositive { key, value });
            }
        }
        self.radio
            .validate()
            .map_err(|message| ConfigError::Invalid {
                key: "radio".into(),
                message,
            })?;
        if self.flags.strict_range && self.tx_range_m.is_none() {
            return Err(ConfigError::MissingTxRange);
        }
        if let Some(range) = self.tx_range_m {
            if !(range > 0.0) {
                return Err(ConfigError::NonPositive {
                    key: "tx_range_m",
                    value: range,
                });
            }
        }
        let mut warnings = Vec::new();
        if self.rfd_count < self.partition.region_count() {
            warnings.push(format!(
                "rfd_count ({}) is below the region count ({}); some regions will be empty",
                self.rfd_count,
                self.partition.region_count()
            ));
        }
        Ok(warnings)
    }
}
