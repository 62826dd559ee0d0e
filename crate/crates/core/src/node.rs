//! Node records, duty-cycle modes and routing table entries.

use crate::geometry::{PolarPoint, RegionId};
use crate::radio::Battery;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unique node identifier. The base station is not a node; it appears in
/// routing tables only as the [`Hop::BaseStation`] sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    /// Full function device: region head, bridges its RFDs to the BS.
    Ffd,
    /// Reduced function device: senses and relays within its region chain.
    Rfd,
}

/// Destination of a routing table successor entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hop {
    Node(NodeId),
    BaseStation,
}

impl std::fmt::Display for Hop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hop::Node(id) => write!(f, "{id}"),
            Hop::BaseStation => write!(f, "BS"),
        }
    }
}

/// Duty-cycle modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DutyMode {
    /// Radio fully active, transmitting or receiving.
    TrOnDuty,
    /// Low-power wake-on-packet listening (RFD steady state).
    ListeningDuty,
    /// Radio off until the next round's timer (FFD after reporting).
    OffDuty,
    /// Timer-wake sleep, optional alternative to listening for RFDs.
    Sleep,
}

/// Events that drive duty-mode transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeEvent {
    RoundStart,
    PacketArrival,
    ActionDone,
    ReportSentToBs,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("illegal duty transition: {kind:?} in {mode:?} received {event:?}")]
pub struct ModeViolation {
    pub kind: NodeKind,
    pub mode: DutyMode,
    pub event: ModeEvent,
}

/// Advances the duty-cycle state machine.
///
/// FFDs wake to `TrOnDuty` at round start and drop to `OffDuty` once their
/// report has gone to the BS. RFDs wake to `TrOnDuty` on packet arrival,
/// then return to `ListeningDuty` (or `Sleep`, when `sleep_mode` is set,
/// in which case the round-start timer wakes them back to listening).
pub fn next_mode(
    kind: NodeKind,
    mode: DutyMode,
    event: ModeEvent,
    sleep_mode: bool,
) -> Result<DutyMode, ModeViolation> {
    use DutyMode::*;
    use ModeEvent::*;
    let next = match (kind, mode, event) {
        (NodeKind::Ffd, OffDuty | TrOnDuty, RoundStart) => TrOnDuty,
        (NodeKind::Ffd, TrOnDuty, PacketArrival) => TrOnDuty,
        (NodeKind::Ffd, TrOnDuty, ActionDone) => TrOnDuty,
        (NodeKind::Ffd, TrOnDuty, ReportSentToBs) => OffDuty,
        (NodeKind::Rfd, ListeningDuty | TrOnDuty, PacketArrival) => TrOnDuty,
        (NodeKind::Rfd, TrOnDuty, ActionDone) => {
            if sleep_mode {
                Sleep
            } else {
                ListeningDuty
            }
        }
        (NodeKind::Rfd, ListeningDuty | Sleep | TrOnDuty, RoundStart) => ListeningDuty,
        _ => return Err(ModeViolation { kind, mode, event }),
    };
    Ok(next)
}

/// One sensor node as produced by deployment: identity, placement,
/// battery and routing table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub kind: NodeKind,
    pub position: PolarPoint,
    pub region: RegionId,
    pub battery: Battery,
    pub mode: DutyMode,
    /// Previous node in the chain (toward the chain tail for FFDs,
    /// toward the FFD for RFDs). `None` when the node is an endpoint.
    pub pre: Option<NodeId>,
    /// Next hop toward the BS. `None` for chain tails.
    pub suc: Option<Hop>,
    /// 1-based position in the region chain, `None` for FFDs.
    pub chain_index: Option<u32>,
}

impl NodeRecord {
    pub fn new(id: NodeId, kind: NodeKind, position: PolarPoint, region: RegionId, battery: Battery) -> Self {
        Self {
            id,
            kind,
            position,
            region,
            battery,
            mode: DutyMode::TrOnDuty, // setup phase starts fully active
            pre: None,
            suc: None,
            chain_index: None,
        }
    }
}
