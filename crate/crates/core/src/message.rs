//! In-memory message events.
//!
//! Messages are not bit-encoded; they carry a payload size for energy
//! accounting and let tests check who talked to whom. `H_Region` is the
//! only region broadcast, everything else is unicast.

use crate::geometry::RegionId;
use crate::node::{Hop, NodeId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageKind {
    /// Sensed data moving toward the BS.
    Report,
    /// Token packet requesting data from a chain.
    Req,
    /// Node notifying the BS that it is about to die.
    DNode,
    /// Chain-length instruction starting chain construction.
    BuildChain,
    /// FFD announcing itself as region head.
    HRegion,
    /// Closest RFD confirming its chain is built.
    ChainD,
    /// FFD confirming its region topology to the BS.
    TopologyD,
    /// BS beam-scan control message carrying sector/track assignment.
    PositionCtl,
}

impl MessageKind {
    pub fn is_region_broadcast(&self) -> bool {
        matches!(self, MessageKind::HRegion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dispatch {
    Unicast(Hop),
    Region(RegionId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub kind: MessageKind,
    pub src: Hop,
    pub dst: Dispatch,
    pub payload_bits: u64,
}

impl Message {
    pub fn unicast(kind: MessageKind, src: Hop, dst: Hop, payload_bits: u64) -> Self {
        debug_assert!(!kind.is_region_broadcast());
        Self {
            kind,
            src,
            dst: Dispatch::Unicast(dst),
            payload_bits,
        }
    }

    pub fn region_broadcast(src: NodeId, region: RegionId, payload_bits: u64) -> Self {
        Self {
            kind: MessageKind::HRegion,
            src: Hop::Node(src),
            dst: Dispatch::Region(region),
            payload_bits,
        }
    }

    /// Kind/dispatch legality: `H_Region` broadcasts, everything else is
    /// unicast.
    pub fn dispatch_is_legal(&self) -> bool {
        match self.dst {
            Dispatch::Region(_) => self.kind.is_region_broadcast(),
            Dispatch::Unicast(_) => !self.kind.is_region_broadcast(),
        }
    }
}

/// Message capture. Disabled by default so long simulations do not hold
/// every packet of every round in memory.
#[derive(Debug, Clone, Default)]
pub enum TraceSink {
    #[default]
    Disabled,
    Enabled(Vec<Message>),
}

impl TraceSink {
    pub fn enabled() -> Self {
        TraceSink::Enabled(Vec::new())
    }

    #[inline]
    pub fn record(&mut self, msg: Message) {
        debug_assert!(msg.dispatch_is_legal(), "illegal dispatch: {msg:?}");
        if let TraceSink::Enabled(buf) = self {
            buf.push(msg);
        }
    }

    pub fn messages(&self) -> &[Message] {
        match self {
            TraceSink::Enabled(buf) => buf,
            TraceSink::Disabled => &[],
        }
    }

    pub fn clear(&mut self) {
        if let TraceSink::Enabled(buf) = self {
            buf.clear();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_legality() {
        let bcast = Message::region_broadcast(NodeId(3), RegionId { sector: 1, track: 2 }, 64);
        assert!(bcast.dispatch_is_legal());
        let uni = Message::unicast(MessageKind::Report, Hop::Node(NodeId(1)), Hop::Node(NodeId(2)), 2000);
        assert!(uni.dispatch_is_legal());
        let bad = Message {
            kind: MessageKind::Report,
            src: Hop::Node(NodeId(1)),
            dst: Dispatch::Region(RegionId { sector: 1, track: 1 }),
            payload_bits: 2000,
        };
        assert!(!bad.dispatch_is_legal());
    }

    #[test]
    fn sink_records_only_when_enabled() {
        let msg = Message::unicast(MessageKind::Req, Hop::Node(NodeId(0)), Hop::Node(NodeId(1)), 64);
        let mut off = TraceSink::Disabled;
        off.record(msg);
        assert!(off.messages().is_empty());
        let mut on = TraceSink::enabled();
        on.record(msg);
        assert_eq!(on.messages().len(), 1);
    }
}
