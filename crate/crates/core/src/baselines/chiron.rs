//! CHIRON: fan-shaped arena split into level x sector groups, one greedy
//! chain per group, leaders picked by residual energy after round one and
//! relaying far-to-near toward the BS.

use super::{farthest_from_bs, gather_to_head, greedy_chain, BaselineCommon};
use crate::engine::{NodeLocation, Protocol, SimNode, World};
use crate::geometry::{distance, PolarPoint};
use crate::node::{NodeId, NodeKind};
use crate::radio::Battery;
use crate::rng::{SimRng, STREAM_DEPLOY};
use std::f64::consts::PI;

/// Fan arena: a circular sector of `area_angle_rad` at radius `radius_m`,
/// BS at the apex, cut into levels of width `level_width_m` and sectors
/// of `sector_angle_rad`.
#[derive(Debug, Clone, Copy)]
pub struct ChironParams {
    pub node_count: u32,
    pub radius_m: f64,
    pub area_angle_rad: f64,
    pub level_width_m: f64,
    pub sector_angle_rad: f64,
    pub node_battery_j: f64,
    pub death_threshold_j: f64,
}

impl Default for ChironParams {
    fn default() -> Self {
        Self {
            node_count: 100,
            radius_m: 100.0,
            area_angle_rad: PI / 2.0,
            level_width_m: 50.0,
            sector_angle_rad: PI / 4.0,
            node_battery_j: 10.0,
            death_threshold_j: 0.05,
        }
    }
}

impl ChironParams {
    pub fn level_count(&self) -> u32 {
        (self.radius_m / self.level_width_m).round() as u32
    }

    pub fn sector_count(&self) -> u32 {
        (self.area_angle_rad / self.sector_angle_rad).round() as u32
    }

    pub fn group_count(&self) -> u32 {
        self.level_count() * self.sector_count()
    }
}

/// Leader rule: farthest node from the BS in round one, maximum residual
/// energy afterwards, lowest id on ties.
pub fn chiron_elect_leader(
    members: &[NodeId],
    round: u64,
    position_of: impl Fn(NodeId) -> PolarPoint,
    residual_of: impl Fn(NodeId) -> f64,
) -> Option<NodeId> {
    if members.is_empty() {
        return None;
    }
    let winner = if round == 1 {
        members
            .iter()
            .copied()
            .max_by(|a, b| {
                let (da, db) = (position_of(*a).bs_distance_m(), position_of(*b).bs_distance_m());
                da.partial_cmp(&db).unwrap().then(b.cmp(a))
            })
            .unwrap()
    } else {
        members
            .iter()
            .copied()
            .max_by(|a, b| {
                let (ra, rb) = (residual_of(*a), residual_of(*b));
                ra.partial_cmp(&rb).unwrap().then(b.cmp(a))
            })
            .unwrap()
    };
    Some(winner)
}

#[derive(Debug, Clone)]
struct Group {
    level: u32,
    sector: u32,
    chain: Vec<NodeId>,
    leader: Option<NodeId>,
}

pub struct Chiron {
    params: ChironParams,
    common: BaselineCommon,
    groups: Vec<Group>,
    group_of: Vec<usize>,
}

impl Chiron {
    pub fn new(
        params: ChironParams,
        common: BaselineCommon,
        radio: crate::radio::RadioParams,
    ) -> (Self, World) {
        let mut rng = SimRng::with_stream(common.seed, STREAM_DEPLOY);
        let levels = params.level_count();
        let sectors = params.sector_count();
        let groups: Vec<Group> = (1..=sectors)
            .flat_map(|sector| {
                (1..=levels).map(move |level| Group {
                    level,
                    sector,
                    chain: Vec::new(),
                    leader: None,
                })
            })
            .collect();
        let mut group_of = Vec::with_capacity(params.node_count as usize);
        let nodes: Vec<SimNode> = (0..params.node_count)
            .map(|i| {
                // area-uniform draw on the fan
                let pos = loop {
                    let u = rng.next_f64();
                    if u == 0.0 {
                        continue;
                    }
                    let rho = params.radius_m * u.sqrt();
                    let phi = params.area_angle_rad * rng.next_f64();
                    break PolarPoint::new(rho, phi);
                };
                let level = ((pos.rho_m() / params.level_width_m).ceil() as u32)
                    .max(1)
                    .min(levels);
                let sector = (((pos.phi_rad() / params.sector_angle_rad).floor() as u32) + 1).min(sectors);
                let group_idx = groups
                    .iter()
                    .position(|g| g.level == level && g.sector == sector)
                    .expect("group exists");
                group_of.push(group_idx);
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
                groups,
                group_of,
            },
            world,
        )
    }

    pub fn group_chains(&self) -> Vec<&[NodeId]> {
        self.groups.iter().map(|g| g.chain.as_slice()).collect()
    }

    pub fn group_label(&self, id: NodeId) -> (u32, u32) {
        let g = &self.groups[self.group_of[id.0 as usize]];
        (g.level, g.sector)
    }

    pub fn leaders(&self) -> Vec<Option<NodeId>> {
        self.groups.iter().map(|g| g.leader).collect()
    }

    /// Leaders ordered far-to-near by BS distance (ties: lowest id).
    fn relay_order(&self, world: &World) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.groups.len())
            .filter(|&i| self.groups[i].leader.is_some())
            .collect();
        order.sort_by(|&a, &b| {
            let (la, lb) = (self.groups[a].leader.unwrap(), self.groups[b].leader.unwrap());
            let (da, db) = (
                world.position(la).bs_distance_m(),
                world.position(lb).bs_distance_m(),
            );
            db.partial_cmp(&da).unwrap().then(la.cmp(&lb))
        });
        order
    }

    /// Worst delay over leader placements: a packet from the far end of a
    /// group chain walks the whole chain, then rides the leader relay.
    pub fn worst_case_max_path(&self, world: &World) -> u64 {
        let order = self.relay_order(world);
        let m = order.len() as u64;
        order
            .iter()
            .enumerate()
            .map(|(k, &gi)| (self.groups[gi].chain.len() as u64 - 1) + (m - k as u64))
            .max()
            .unwrap_or(0)
    }
}

impl Protocol for Chiron {
    fn name(&self) -> &'static str {
        "chiron"
    }

    fn setup(&mut self, world: &mut World) {
        for gi in 0..self.groups.len() {
            let points: Vec<(NodeId, PolarPoint)> = world
                .nodes()
                .iter()
                .filter(|n| self.group_of[n.id.0 as usize] == gi)
                .map(|n| (n.id, n.pos))
                .collect();
            self.groups[gi].chain = if points.is_empty() {
                Vec::new()
            } else {
                greedy_chain(&points, farthest_from_bs(&points))
            };
        }
    }

    fn run_round(&mut self, world: &mut World, round: u64) {
        let mut payloads = vec![0u64; self.groups.len()];
        for gi in 0..self.groups.len() {
            let chain = self.groups[gi].chain.clone();
            self.groups[gi].leader = chiron_elect_leader(
                &chain,
                round,
                |id| world.position(id),
                |id| world.node(id).battery.residual_j(),
            );
            let Some(leader) = self.groups[gi].leader else {
                continue;
            };
            let leader_pos = chain.iter().position(|&id| id == leader).unwrap();
            payloads[gi] =
                gather_to_head(world, &chain, leader_pos, self.common.report_bits, self.common.fusion);
        }

        // far-to-near leader relay into the BS
        let order = self.relay_order(world);
        let mut carry = 0u64;
        for (k, &gi) in order.iter().enumerate() {
            let leader = self.groups[gi].leader.unwrap();
            if carry > 0 {
                world.charge_rx(leader, carry);
            }
            let payload = if self.common.fusion {
                self.common.report_bits
            } else {
                payloads[gi] + carry
            };
            let (dist, is_bs) = match order.get(k + 1) {
                Some(&next) => {
                    let next_leader = self.groups[next].leader.unwrap();
                    (
                        distance(&world.position(leader), &world.position(next_leader)),
                        false,
                    )
                }
                None => (world.position(leader).bs_distance_m(), true),
            };
            world.charge_tx(leader, payload, dist);
            carry = if is_bs { 0 } else { payload };
        }
    }

    fn measured_max_path(&self, world: &World) -> u64 {
        let order = self.relay_order(world);
        let m = order.len() as u64;
        let mut max = 0;
        for (k, &gi) in order.iter().enumerate() {
            let group = &self.groups[gi];
            let leader = group.leader.unwrap();
            let l = group.chain.iter().position(|&id| id == leader).unwrap();
            let in_group = l.max(group.chain.len() - 1 - l) as u64;
            max = max.max(in_group + (m - k as u64));
        }
        max
    }

    fn on_death(&mut self, _world: &mut World, dead: &[NodeId]) {
        for group in &mut self.groups {
            group.chain.retain(|id| !dead.contains(id));
            if let Some(leader) = group.leader {
                if dead.contains(&leader) {
                    group.leader = None;
                }
            }
        }
    }

    fn locate(&self, id: NodeId) -> Option<NodeLocation> {
        let gi = self.group_of[id.0 as usize];
        let group = &self.groups[gi];
        let idx = group.chain.iter().position(|&n| n == id)?;
        Some(NodeLocation {
            sector: group.sector,
            track: group.level,
            chain_no: 1,
            chain_index: idx as u32 + 1,
        })
    }

    fn metadata(&self) -> Vec<(String, String)> {
        vec![
            (
                "arena".to_string(),
                format!(
                    "fan R={} m, {:.0} deg, {} levels x {} sectors",
                    self.params.radius_m,
                    self.params.area_angle_rad.to_degrees(),
                    self.params.level_count(),
                    self.params.sector_count()
                ),
            ),
            (
                "arena_note".to_string(),
                "fan arena differs geometrically from the disc/square arenas of the other models"
                    .to_string(),
            ),
            (
                "leader_election".to_string(),
                "farthest-first then max-residual".to_string(),
            ),
        ]
    }
}
