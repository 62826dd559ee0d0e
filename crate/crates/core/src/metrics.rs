//! Analytic max-path (delay proxy) formulas and cost summaries.
//!
//! Delay is counted in hops: the BS waits for the farthest packet each
//! round, so a model's delay proxy is the hop count of its longest report
//! path. The analytic forms use expected region populations and assume
//! the worst head placement (a chain end); they are reported as-is, which
//! can be non-integral. Comparisons against measured deployments evaluate
//! the same forms with the deployment's actual integer counts.

use crate::baselines::{ChironParams, EpegasisParams};
use crate::chain::{Approach, ChainVariant};
use crate::geometry::PartitionSpec;
use serde::{Deserialize, Serialize};

/// In-chain hops from the last RFD of a worst-case region chain to the
/// FFD: the whole expected population for one chain, half (rounded up)
/// when the FFD feeds two chains.
pub fn analytic_chain_hops(variant: ChainVariant, tau_last: f64) -> f64 {
    match variant {
        ChainVariant::Chain1 => tau_last,
        ChainVariant::Chain2 => (tau_last / 2.0).ceil(),
    }
}

/// Expected max-path for the chain scheme: in-chain hops plus one BS hop
/// (one-hop) or one hop per track (multi-hop).
pub fn analytic_max_path(
    variant: ChainVariant,
    approach: Approach,
    spec: &PartitionSpec,
    rfd_count: u32,
) -> f64 {
    let tau_last = spec
        .expected_rfds(rfd_count, spec.track_count())
        .expect("last track is in range");
    let h = analytic_chain_hops(variant, tau_last);
    match approach {
        Approach::OneHop => h + 1.0,
        Approach::MultiHop => h + spec.track_count() as f64,
    }
}

/// PEGASIS worst case: the head at a chain end makes the far packet walk
/// all `N` hops (including the head's hop into the BS).
pub fn pegasis_max_path(node_count: u32) -> f64 {
    node_count as f64
}

/// Expected nodes in the outermost EPEGASIS ring:
/// `γ = N r² (2i − 1) / R²` at `i = T_n`.
pub fn epegasis_ring_population(params: &EpegasisParams) -> f64 {
    let i = params.ring_count() as f64;
    let ratio = params.ring_width_m / params.radius_m;
    params.node_count as f64 * ratio * ratio * (2.0 * i - 1.0)
}

/// EPEGASIS worst case: `(γ − 1)` in-ring hops plus one leader hop per
/// ring level.
pub fn epegasis_max_path(params: &EpegasisParams) -> f64 {
    (epegasis_ring_population(params) - 1.0) + params.ring_count() as f64
}

/// Expected nodes in a last-level CHIRON group:
/// `ω = 2 N θ_sector r² / (θ_area R²) · (i − 1/2)` at `i = L_n`.
pub fn chiron_group_population(params: &ChironParams) -> f64 {
    let i = params.level_count() as f64;
    let radial = params.level_width_m / params.radius_m;
    2.0 * params.node_count as f64 * (params.sector_angle_rad / params.area_angle_rad)
        * radial
        * radial
        * (i - 0.5)
}

/// CHIRON worst case: `(ω − 1)` in-group hops plus one hop per group,
/// since the far leader relays through every other leader into the BS.
pub fn chiron_max_path(params: &ChironParams) -> f64 {
    (chiron_group_population(params) - 1.0) + params.group_count() as f64
}

/// Node-count cost report: the scheme pays for `C` FFDs on top of the
/// `N` RFDs every model deploys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub ffd_count: u32,
    pub rfd_count: u32,
    pub ffd_weight: f64,
    pub rfd_weight: f64,
    pub weighted_cost: f64,
}

pub fn cost_summary(ffd_count: u32, rfd_count: u32, ffd_weight: f64, rfd_weight: f64) -> CostSummary {
    CostSummary {
        ffd_count,
        rfd_count,
        ffd_weight,
        rfd_weight,
        weighted_cost: ffd_count as f64 * ffd_weight + rfd_count as f64 * rfd_weight,
    }
}
