//! Round-driven simulation engine shared by all protocols.
//!
//! A [`World`] owns the node population and charges every transmit/receive
//! to the owning battery; a [`Protocol`] decides who talks to whom each
//! round. The driver loops rounds, detects deaths at round boundaries
//! (nodes finish their in-flight round first), and folds per-round
//! statistics into a [`SimResult`].

use crate::message::TraceSink;
use crate::node::{NodeId, NodeKind};
use crate::radio::{Battery, RadioParams};
use crate::geometry::PolarPoint;
use serde::{Deserialize, Serialize};

/// One node as seen by the energy-accounting engine.
#[derive(Debug, Clone)]
pub struct SimNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub pos: PolarPoint,
    pub battery: Battery,
    pub alive: bool,
}

/// Node population plus energy ledger. The base station sits at the
/// origin and is not energy constrained, so it never appears here.
#[derive(Debug)]
pub struct World {
    nodes: Vec<SimNode>,
    pub radio: RadioParams,
    pub trace: TraceSink,
    round_energy_j: f64,
}

impl World {
    /// Node ids must be dense (`nodes[i].id == i`) so lookups are direct.
    pub fn new(nodes: Vec<SimNode>, radio: RadioParams) -> Self {
        for (i, n) in nodes.iter().enumerate() {
            assert_eq!(n.id.0 as usize, i, "node ids must be dense and sorted");
        }
        Self {
            nodes,
            radio,
            trace: TraceSink::Disabled,
            round_energy_j: 0.0,
        }
    }

    pub fn node(&self, id: NodeId) -> &SimNode {
        &self.nodes[id.0 as usize]
    }

    pub fn nodes(&self) -> &[SimNode] {
        &self.nodes
    }

    pub fn is_alive(&self, id: NodeId) -> bool {
        self.node(id).alive
    }

    pub fn position(&self, id: NodeId) -> PolarPoint {
        self.node(id).pos
    }

    /// Charges a transmission of `bits` over `distance_m` to `id`.
    pub fn charge_tx(&mut self, id: NodeId, bits: u64, distance_m: f64) {
        debug_assert!(self.node(id).alive, "dead node {id} transmitting");
        let cost = self.radio.tx_energy_j(bits, distance_m);
        self.apply(id, cost);
    }

    /// Charges a reception of `bits` to `id`.
    pub fn charge_rx(&mut self, id: NodeId, bits: u64) {
        debug_assert!(self.node(id).alive, "dead node {id} receiving");
        let cost = self.radio.rx_energy_j(bits);
        self.apply(id, cost);
    }

    fn apply(&mut self, id: NodeId, amount_j: f64) {
        let applied = self.nodes[id.0 as usize].battery.drain(amount_j);
        self.round_energy_j += applied;
    }

    /// Takes and resets the energy accumulated since the last call.
    pub fn take_round_energy(&mut self) -> f64 {
        std::mem::take(&mut self.round_energy_j)
    }

    pub fn alive_count(&self, kind: NodeKind) -> u32 {
        self.nodes.iter().filter(|n| n.kind == kind && n.alive).count() as u32
    }

    pub fn count(&self, kind: NodeKind) -> u32 {
        self.nodes.iter().filter(|n| n.kind == kind).count() as u32
    }

    /// Minimum residual over all nodes of `kind`, dead ones included, so
    /// the series is non-increasing over a run.
    pub fn min_residual_j(&self, kind: NodeKind) -> f64 {
        self.nodes
            .iter()
            .filter(|n| n.kind == kind)
            .map(|n| n.battery.residual_j())
            .fold(f64::INFINITY, f64::min)
            .min(f64::INFINITY)
    }

    /// Marks a node dead regardless of its battery (fault injection).
    pub fn kill(&mut self, id: NodeId) {
        self.nodes[id.0 as usize].alive = false;
    }

    /// Nodes whose battery fell below threshold but are still marked
    /// alive; marks them dead and returns their ids in ascending order.
    fn collect_deaths(&mut self) -> Vec<NodeId> {
        let mut dead = Vec::new();
        for n in &mut self.nodes {
            if n.alive && !n.battery.is_alive() {
                n.alive = false;
                dead.push(n.id);
            }
        }
        dead
    }
}

/// Where a node sat in its topology when it died.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLocation {
    pub sector: u32,
    pub track: u32,
    pub chain_no: u32,
    /// 1-based chain position; 1 = adjacent to the chain head.
    pub chain_index: u32,
}

/// A routing protocol driven by the engine, one round at a time.
pub trait Protocol {
    fn name(&self) -> &'static str;

    /// Builds topology and charges any setup traffic.
    fn setup(&mut self, world: &mut World);

    /// Executes one data collection + transmission round.
    fn run_round(&mut self, world: &mut World, round: u64);

    /// Longest alive report path to the BS, in hops, under the current
    /// topology and head assignment. 0 when no report can reach the BS.
    fn measured_max_path(&self, world: &World) -> u64;

    /// Repairs topology after the listed nodes died (chain splicing).
    fn on_death(&mut self, world: &mut World, dead: &[NodeId]);

    /// Topology coordinates of a node, for death reporting.
    fn locate(&self, id: NodeId) -> Option<NodeLocation>;

    /// Free-form key/value notes copied into run outputs.
    fn metadata(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

/// When to stop the round loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopAt {
    /// Stop once the first node has died (the lifetime metric).
    FirstDeath,
    /// Run until every RFD is dead.
    AllRfdsDead,
}

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub max_rounds: u64,
    pub stop: StopAt,
    /// Keep the per-round statistics stream (CSV output needs it).
    pub record_rounds: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            max_rounds: 10_000_000,
            stop: StopAt::FirstDeath,
            record_rounds: false,
        }
    }
}

/// Statistics captured at the end of each round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub round: u64,
    pub alive_rfds: u32,
    pub alive_ffds: u32,
    pub energy_spent_j: f64,
    pub min_rfd_residual_j: f64,
    pub min_ffd_residual_j: f64,
    pub max_path_hops: u64,
    pub deaths: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstDead {
    pub id: NodeId,
    pub kind: NodeKind,
    pub location: Option<NodeLocation>,
}

/// Simulation outcome. Lifetime milestones count the complete rounds the
/// network survived before the milestone event, so a network whose first
/// death is detected at the end of round `t` has `fnd_round = t - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub scheme: String,
    pub rounds_simulated: u64,
    pub setup_energy_j: f64,
    pub total_energy_j: f64,
    /// Complete rounds before the first node death.
    pub fnd_round: Option<u64>,
    /// Complete rounds before half the RFDs had died.
    pub hnd_round: Option<u64>,
    /// Complete rounds before the last RFD died.
    pub lnd_round: Option<u64>,
    pub first_dead: Option<FirstDead>,
    /// True when the round budget ran out before the requested milestone.
    pub hit_max_rounds: bool,
    /// True when the run stopped because no node spent any energy in a
    /// round (e.g. surviving RFDs orphaned by a dead region head).
    pub halted_inert: bool,
    pub round_stats: Vec<RoundStats>,
    pub metadata: Vec<(String, String)>,
}

/// Runs `protocol` until the stop condition, the round budget, or network
/// inertness ends the simulation.
pub fn simulate<P: Protocol>(protocol: &mut P, world: &mut World, opts: SimOptions) -> SimResult {
    protocol.setup(world);
    let setup_energy_j = world.take_round_energy();
    let initial_rfds = world.count(NodeKind::Rfd);

    let mut result = SimResult {
        scheme: protocol.name().to_string(),
        rounds_simulated: 0,
        setup_energy_j,
        total_energy_j: setup_energy_j,
        fnd_round: None,
        hnd_round: None,
        lnd_round: None,
        first_dead: None,
        hit_max_rounds: false,
        halted_inert: false,
        round_stats: Vec::new(),
        metadata: protocol.metadata(),
    };
    if initial_rfds == 0 {
        return result;
    }

    let mut dead_rfds = 0u32;
    for round in 1..=opts.max_rounds {
        protocol.run_round(world, round);
        let max_path = protocol.measured_max_path(world);
        let energy = world.take_round_energy();
        result.total_energy_j += energy;
        result.rounds_simulated = round;

        let deaths = world.collect_deaths();
        if !deaths.is_empty() {
            if result.fnd_round.is_none() {
                result.fnd_round = Some(round - 1);
                let first = deaths[0];
                result.first_dead = Some(FirstDead {
                    id: first,
                    kind: world.node(first).kind,
                    location: protocol.locate(first),
                });
            }
            dead_rfds += deaths
                .iter()
                .filter(|id| world.node(**id).kind == NodeKind::Rfd)
                .count() as u32;
            if result.hnd_round.is_none() && 2 * dead_rfds >= initial_rfds {
                result.hnd_round = Some(round - 1);
            }
            if result.lnd_round.is_none() && dead_rfds == initial_rfds {
                result.lnd_round = Some(round - 1);
            }
            protocol.on_death(world, &deaths);
        }

        if opts.record_rounds {
            result.round_stats.push(RoundStats {
                round,
                alive_rfds: world.alive_count(NodeKind::Rfd),
                alive_ffds: world.alive_count(NodeKind::Ffd),
                energy_spent_j: energy,
                min_rfd_residual_j: world.min_residual_j(NodeKind::Rfd),
                min_ffd_residual_j: world.min_residual_j(NodeKind::Ffd),
                max_path_hops: max_path,
                deaths,
            });
        }

        let stop = match opts.stop {
            StopAt::FirstDeath => result.fnd_round.is_some(),
            StopAt::AllRfdsDead => result.lnd_round.is_some(),
        };
        if stop {
            return result;
        }
        if energy == 0.0 {
            result.halted_inert = true;
            return result;
        }
    }
    result.hit_max_rounds = true;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolarPoint;

    struct DrainOne;

    impl Protocol for DrainOne {
        fn name(&self) -> &'static str {
            "drain-one"
        }
        fn setup(&mut self, _world: &mut World) {}
        fn run_round(&mut self, world: &mut World, _round: u64) {
            if world.is_alive(NodeId(0)) {
                world.charge_tx(NodeId(0), 1000, 0.0);
            }
        }
        fn measured_max_path(&self, world: &World) -> u64 {
            if world.is_alive(NodeId(0)) {
                1
            } else {
                0
            }
        }
        fn on_death(&mut self, _world: &mut World, _dead: &[NodeId]) {}
        fn locate(&self, _id: NodeId) -> Option<NodeLocation> {
            None
        }
    }

    fn one_node_world(capacity_j: f64, threshold_j: f64) -> World {
        World::new(
            vec![SimNode {
                id: NodeId(0),
                kind: NodeKind::Rfd,
                pos: PolarPoint::new(10.0, 0.0),
                battery: Battery::new(capacity_j, threshold_j),
                alive: true,
            }],
            RadioParams::default(),
        )
    }

    #[test]
    fn milestones_follow_round_boundaries() {
        // 1000 bits at d=0 costs 5e-5 J/round; with capacity 1.0 J and
        // threshold 0.123456 J the node survives floor(0.876544 / 5e-5)
        // = 17530 rounds and dies during round 17531.
        let mut world = one_node_world(1.0, 0.123456);
        let mut proto = DrainOne;
        let result = simulate(
            &mut proto,
            &mut world,
            SimOptions {
                stop: StopAt::AllRfdsDead,
                ..SimOptions::default()
            },
        );
        assert_eq!(result.fnd_round, Some(17_530));
        assert_eq!(result.hnd_round, Some(17_530));
        assert_eq!(result.lnd_round, Some(17_530));
        assert_eq!(result.rounds_simulated, 17_531);
        assert!(!result.hit_max_rounds);
    }

    #[test]
    fn max_rounds_leaves_fnd_undefined() {
        let mut world = one_node_world(1.0, 0.5);
        let mut proto = DrainOne;
        let result = simulate(
            &mut proto,
            &mut world,
            SimOptions {
                max_rounds: 10,
                ..SimOptions::default()
            },
        );
        assert_eq!(result.fnd_round, None);
        assert!(result.hit_max_rounds);
    }

    #[test]
    fn round_energy_matches_battery_deltas() {
        let mut world = one_node_world(1.0, 0.5);
        let before = world.node(NodeId(0)).battery.residual_j();
        let mut proto = DrainOne;
        proto.run_round(&mut world, 1);
        let spent = world.take_round_energy();
        let after = world.node(NodeId(0)).battery.residual_j();
        assert_eq!(before - after, spent);
    }

    #[test]
    fn empty_world_ends_immediately() {
        let mut world = World::new(Vec::new(), RadioParams::default());
        let mut proto = DrainOne;
        let result = simulate(&mut proto, &mut world, SimOptions::default());
        assert_eq!(result.rounds_simulated, 0);
        assert_eq!(result.fnd_round, None);
    }
}
