//! PEGASIS: one greedy chain over every node, a random head per round.

use super::{farthest_from_bs, gather_to_head, greedy_chain, BaselineCommon};
use crate::engine::{NodeLocation, Protocol, SimNode, World};
use crate::geometry::PolarPoint;
use crate::node::{NodeId, NodeKind};
use crate::radio::Battery;
use crate::rng::{SimRng, STREAM_DEPLOY, STREAM_ELECT};

/// Square arena, BS at the center.
#[derive(Debug, Clone, Copy)]
pub struct PegasisParams {
    pub node_count: u32,
    pub side_m: f64,
    pub node_battery_j: f64,
    pub death_threshold_j: f64,
}

impl Default for PegasisParams {
    fn default() -> Self {
        Self {
            node_count: 100,
            side_m: 100.0,
            node_battery_j: 10.0,
            death_threshold_j: 0.05,
        }
    }
}

/// Uniform head election over the alive nodes.
pub fn pegasis_elect_head(alive: &[NodeId], rng: &mut SimRng) -> NodeId {
    debug_assert!(!alive.is_empty());
    alive[rng.index(alive.len())]
}

pub struct Pegasis {
    params: PegasisParams,
    common: BaselineCommon,
    chain: Vec<NodeId>,
    election_rng: SimRng,
    current_head: Option<NodeId>,
}

impl Pegasis {
    pub fn new(params: PegasisParams, common: BaselineCommon, radio: crate::radio::RadioParams) -> (Self, World) {
        let mut rng = SimRng::with_stream(common.seed, STREAM_DEPLOY);
        let half = params.side_m / 2.0;
        let nodes: Vec<SimNode> = (0..params.node_count)
            .map(|i| {
                // uniform on the square, re-centered so the BS is the origin
                let pos = loop {
                    let x = params.side_m * rng.next_f64() - half;
                    let y = params.side_m * rng.next_f64() - half;
                    let rho = (x * x + y * y).sqrt();
                    if rho > 0.0 {
                        break PolarPoint::new(rho, y.atan2(x));
                    }
                };
                SimNode {
                    id: NodeId(i),
                    kind: NodeKind::Rfd,
                    pos,
                    battery: Battery::new(params.node_battery_j, params.death_threshold_j),
                    alive: true,
                }
            })
            .collect();
        let world = World::new(nodes, radio);
        (
            Self {
                params,
                common,
                chain: Vec::new(),
                election_rng: SimRng::with_stream(common.seed, STREAM_ELECT),
                current_head: None,
            },
            world,
        )
    }

    pub fn chain(&self) -> &[NodeId] {
        &self.chain
    }

    pub fn current_head(&self) -> Option<NodeId> {
        self.current_head
    }

    /// Worst delay over head placements: the head at a chain end makes
    /// the far-end packet walk the whole chain, then one hop to the BS.
    pub fn worst_case_max_path(&self) -> u64 {
        self.chain.len() as u64
    }

    fn head_index(&self) -> Option<usize> {
        let head = self.current_head?;
        self.chain.iter().position(|&id| id == head)
    }
}

impl Protocol for Pegasis {
    fn name(&self) -> &'static str {
        "pegasis"
    }

    fn setup(&mut self, world: &mut World) {
        let points: Vec<(NodeId, PolarPoint)> =
            world.nodes().iter().map(|n| (n.id, n.pos)).collect();
        if points.is_empty() {
            return;
        }
        self.chain = greedy_chain(&points, farthest_from_bs(&points));
    }

    fn run_round(&mut self, world: &mut World, _round: u64) {
        if self.chain.is_empty() {
            return;
        }
        let head = pegasis_elect_head(&self.chain, &mut self.election_rng);
        self.current_head = Some(head);
        let head_idx = self.head_index().expect("head is in the chain");
        let chain = self.chain.clone();
        let payload = gather_to_head(world, &chain, head_idx, self.common.report_bits, self.common.fusion);
        world.charge_tx(head, payload, world.position(head).bs_distance_m());
    }

    fn measured_max_path(&self, _world: &World) -> u64 {
        match self.head_index() {
            Some(h) => {
                let n = self.chain.len();
                (h.max(n - 1 - h)) as u64 + 1
            }
            None => 0,
        }
    }

    fn on_death(&mut self, _world: &mut World, dead: &[NodeId]) {
        self.chain.retain(|id| !dead.contains(id));
        if let Some(head) = self.current_head {
            if dead.contains(&head) {
                self.current_head = None;
            }
        }
    }

    fn locate(&self, id: NodeId) -> Option<NodeLocation> {
        let idx = self.chain.iter().position(|&n| n == id)?;
        Some(NodeLocation {
            sector: 0,
            track: 0,
            chain_no: 1,
            chain_index: idx as u32 + 1,
        })
    }

    fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("arena".to_string(), format!("square {}x{} m", self.params.side_m, self.params.side_m)),
            ("head_election".to_string(), "uniform-random".to_string()),
        ]
    }
}
