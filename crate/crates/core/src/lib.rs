//! Round-based lifetime simulator for chain-routed wireless sensor
//! networks.
//!
//! The primary model is a heterogeneous two-tier scheme: a disc arena is
//! partitioned into sector/track regions, each headed by a full-function
//! device (FFD) that collects reports from a chain of reduced-function
//! devices (RFDs) and bridges them to the central base station, either
//! directly or relayed through same-sector FFDs. PEGASIS, EPEGASIS and
//! CHIRON run as reference protocols under the same first-order radio
//! energy model, so lifetime (first/half/last node death), hop-count
//! delay and cost can be compared on equal footing.
//!
//! Everything is deterministic given a seed: deployments, elections and
//! the full per-round statistics stream replay bit-for-bit.

pub mod baselines;
pub mod chain;
pub mod config;
pub mod deploy;
pub mod engine;
pub mod experiment;
pub mod geometry;
pub mod message;
pub mod metrics;
pub mod node;
pub mod radio;
pub mod rng;
pub mod scheme;

pub use chain::{Approach, ChainVariant};
pub use config::{ConfigError, NetworkConfig, SimFlags};
pub use engine::{simulate, Protocol, SimOptions, SimResult, StopAt, World};
pub use geometry::{PartitionSpec, PolarPoint, RegionId};
pub use radio::{Battery, RadioParams};
pub use scheme::SchemeProtocol;
