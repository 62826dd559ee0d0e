//! Reference chain protocols run under the same energy engine as the
//! proposed scheme: PEGASIS (one global chain, random head), EPEGASIS
//! (concentric ring chains, leader-by-leader relay) and CHIRON (fan-cell
//! group chains, residual-energy leaders).
//!
//! All three gather with store-and-forward accumulation toward the
//! current head: both chain ends feed inward, every member forwarding its
//! own report plus everything received. There is no token traffic and no
//! setup energy; the gather is end-initiated.

mod chiron;
mod epegasis;
mod pegasis;

pub use chiron::{chiron_elect_leader, Chiron, ChironParams};
pub use epegasis::{Epegasis, EpegasisElection, EpegasisParams};
pub use pegasis::{pegasis_elect_head, Pegasis, PegasisParams};

use crate::engine::World;
use crate::geometry::distance;
use crate::node::NodeId;

/// Common knobs every baseline takes from the main configuration.
#[derive(Debug, Clone, Copy)]
pub struct BaselineCommon {
    pub report_bits: u64,
    pub fusion: bool,
    pub seed: u64,
}

impl BaselineCommon {
    pub fn from_config(cfg: &crate::config::NetworkConfig) -> Self {
        Self {
            report_bits: cfg.report_bits,
            fusion: cfg.flags.fusion,
            seed: cfg.seed,
        }
    }
}

/// Gathers one chain's reports to the member at `head_idx`. Both sides
/// flow toward the head hop by hop; each member transmits its own report
/// plus its accumulated inbound traffic (or a single fused packet).
/// Returns the head's outgoing payload in bits, its own report included.
pub(crate) fn gather_to_head(
    world: &mut World,
    chain: &[NodeId],
    head_idx: usize,
    report_bits: u64,
    fusion: bool,
) -> u64 {
    debug_assert!(head_idx < chain.len());
    let mut inbound = 0u64;

    // low side: 0 -> head
    let mut acc = 0u64;
    for i in 0..head_idx {
        let out = if fusion { report_bits } else { acc + report_bits };
        let d = distance(&world.position(chain[i]), &world.position(chain[i + 1]));
        world.charge_tx(chain[i], out, d);
        world.charge_rx(chain[i + 1], out);
        acc = out;
    }
    inbound += acc;

    // high side: len-1 -> head
    let mut acc = 0u64;
    for i in (head_idx + 1..chain.len()).rev() {
        let out = if fusion { report_bits } else { acc + report_bits };
        let d = distance(&world.position(chain[i]), &world.position(chain[i - 1]));
        world.charge_tx(chain[i], out, d);
        world.charge_rx(chain[i - 1], out);
        acc = out;
    }
    inbound += acc;

    if fusion {
        report_bits
    } else {
        inbound + report_bits
    }
}

/// Greedy nearest-neighbor ordering over `(id, position)` pairs starting
/// from `start`. Ties go to the lower id.
pub(crate) fn greedy_chain(
    points: &[(NodeId, crate::geometry::PolarPoint)],
    start: usize,
) -> Vec<NodeId> {
    let mut visited = vec![false; points.len()];
    let mut order = Vec::with_capacity(points.len());
    let mut current = start;
    visited[current] = true;
    order.push(points[current].0);
    for _ in 1..points.len() {
        let anchor = points[current].1;
        let mut best: Option<usize> = None;
        for (i, (id, pos)) in points.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let d = distance(&anchor, pos);
            let better = match best {
                None => true,
                Some(b) => {
                    let bd = distance(&anchor, &points[b].1);
                    (d, *id) < (bd, points[b].0)
                }
            };
            if better {
                best = Some(i);
            }
        }
        current = best.expect("unvisited point remains");
        visited[current] = true;
        order.push(points[current].0);
    }
    order
}

/// Index of the point farthest from the BS (tie: lowest id), the usual
/// chain construction start.
pub(crate) fn farthest_from_bs(points: &[(NodeId, crate::geometry::PolarPoint)]) -> usize {
    let mut best = 0;
    for i in 1..points.len() {
        let (di, db) = (points[i].1.bs_distance_m(), points[best].1.bs_distance_m());
        if di > db || (di == db && points[i].0 < points[best].0) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SimNode;
    use crate::geometry::PolarPoint;
    use crate::node::NodeKind;
    use crate::radio::{Battery, RadioParams};

    fn line_world(n: u32) -> World {
        let nodes = (0..n)
            .map(|i| SimNode {
                id: NodeId(i),
                kind: NodeKind::Rfd,
                pos: PolarPoint::new(10.0 + 2.0 * i as f64, 0.0),
                battery: Battery::new(10.0, 0.05),
                alive: true,
            })
            .collect();
        World::new(nodes, RadioParams::default())
    }

    #[test]
    fn gather_three_nodes_mid_head() {
        let mut world = line_world(3);
        let chain = vec![NodeId(0), NodeId(1), NodeId(2)];
        let payload = gather_to_head(&mut world, &chain, 1, 2000, false);
        assert_eq!(payload, 3 * 2000);
        let radio = RadioParams::default();
        // ends transmit one report each over 2 m
        let end_cost = radio.tx_energy_j(2000, 2.0);
        for id in [NodeId(0), NodeId(2)] {
            let spent = 10.0 - world.node(id).battery.residual_j();
            assert!((spent - end_cost).abs() < 1e-12);
        }
        // the head only receives
        let head_spent = 10.0 - world.node(NodeId(1)).battery.residual_j();
        assert!((head_spent - 2.0 * radio.rx_energy_j(2000)).abs() < 1e-12);
    }

    #[test]
    fn gather_end_head_accumulates() {
        let mut world = line_world(3);
        let chain = vec![NodeId(0), NodeId(1), NodeId(2)];
        let payload = gather_to_head(&mut world, &chain, 0, 2000, false);
        assert_eq!(payload, 3 * 2000);
        let radio = RadioParams::default();
        // middle node relays: rx 2000, tx 4000
        let spent = 10.0 - world.node(NodeId(1)).battery.residual_j();
        let expected = radio.rx_energy_j(2000) + radio.tx_energy_j(4000, 2.0);
        assert!((spent - expected).abs() < 1e-12);
    }

    #[test]
    fn gather_with_fusion_fixes_packet_size() {
        let mut world = line_world(4);
        let chain = vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)];
        let payload = gather_to_head(&mut world, &chain, 0, 2000, true);
        assert_eq!(payload, 2000);
        let radio = RadioParams::default();
        let spent = 10.0 - world.node(NodeId(1)).battery.residual_j();
        let expected = radio.rx_energy_j(2000) + radio.tx_energy_j(2000, 2.0);
        assert!((spent - expected).abs() < 1e-12);
    }

    #[test]
    fn greedy_chain_matches_expected_order() {
        let points: Vec<(NodeId, PolarPoint)> = vec![
            (NodeId(0), PolarPoint::new(10.0, 0.0)),
            (NodeId(1), PolarPoint::new(30.0, 0.0)),
            (NodeId(2), PolarPoint::new(20.0, 0.0)),
            (NodeId(3), PolarPoint::new(40.0, 0.0)),
        ];
        let start = farthest_from_bs(&points);
        assert_eq!(start, 3);
        let order = greedy_chain(&points, start);
        assert_eq!(order, vec![NodeId(3), NodeId(1), NodeId(2), NodeId(0)]);
    }
}
