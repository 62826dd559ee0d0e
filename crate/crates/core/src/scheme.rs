//! The heterogeneous chain scheme: FFD-headed region chains over the
//! sector/track partition, with token-driven collection and one-hop or
//! multi-hop FFD delivery.
//!
//! Each round has two phases. Collection: every region FFD sends a token
//! down its chain(s); reports flow back with store-and-forward
//! accumulation, so the RFD adjacent to the FFD carries the whole chain's
//! traffic. Transmission: FFDs deliver the collected payload to the BS,
//! either directly or relayed inward through same-sector FFDs.

use crate::chain::{
    build_ffd_relays, build_region_topology, Approach, ChainVariant, PlanPosition, RegionTopology,
    TopologyPlan,
};
use crate::config::{ConfigError, NetworkConfig};
use crate::deploy::{deploy_rfds, place_ffds};
use crate::engine::{NodeLocation, Protocol, SimNode, World};
use crate::geometry::{distance, RegionId};
use crate::message::{Dispatch, Message, MessageKind};
use crate::node::{next_mode, DutyMode, Hop, ModeEvent, NodeId, NodeKind, NodeRecord};

pub struct SchemeProtocol {
    cfg: NetworkConfig,
    variant: ChainVariant,
    approach: Approach,
    plan: TopologyPlan,
    /// Self-organization traffic recorded at construction, replayed for
    /// energy accounting during setup.
    organization_messages: Vec<Message>,
    region_of: Vec<RegionId>,
    kinds: Vec<NodeKind>,
    modes: Vec<DutyMode>,
    /// Bits collected by each FFD in the current round (indexed by id).
    collected_bits: Vec<u64>,
    rfd_ids: Vec<NodeId>,
    warnings: Vec<String>,
    /// Payload bits lost to dead relay FFDs over the whole run.
    dropped_bits: u64,
}

impl SchemeProtocol {
    /// Deploys a fresh network from the configuration.
    pub fn new(
        cfg: NetworkConfig,
        variant: ChainVariant,
        approach: Approach,
    ) -> Result<(Self, World), ConfigError> {
        let warnings = cfg.validate()?;
        let rfds = deploy_rfds(&cfg);
        let ffds = place_ffds(&cfg);
        Self::from_nodes(cfg, variant, approach, rfds, ffds, warnings)
    }

    /// Builds the protocol over explicitly placed nodes. RFD ids must be
    /// dense from 0 with FFD ids following, one FFD per region.
    pub fn from_nodes(
        cfg: NetworkConfig,
        variant: ChainVariant,
        approach: Approach,
        rfds: Vec<NodeRecord>,
        ffds: Vec<NodeRecord>,
        warnings: Vec<String>,
    ) -> Result<(Self, World), ConfigError> {
        let spec = cfg.partition;
        let mut organization_messages = Vec::new();
        let mut regions = Vec::new();
        for region in spec.regions() {
            let ffd = ffds
                .iter()
                .find(|f| f.region == region)
                .expect("one FFD per region");
            let members: Vec<&NodeRecord> = rfds.iter().filter(|r| r.region == region).collect();
            let (topo, messages) = build_region_topology(
                ffd,
                &members,
                variant,
                cfg.flags.literal_first_improvement,
                spec.radius_m(),
                cfg.ctl_bits,
            );
            organization_messages.extend(messages);
            regions.push(topo);
        }
        let relays = build_ffd_relays(&ffds, spec.sector_count(), spec.track_count());
        let plan = TopologyPlan::new(variant, approach, regions, relays);

        let all: Vec<&NodeRecord> = rfds.iter().chain(ffds.iter()).collect();
        if cfg.flags.strict_range {
            let range = cfg.tx_range_m.ok_or(ConfigError::MissingTxRange)?;
            let position_of = |id: NodeId| all[id.0 as usize].position;
            plan.enforce_tx_range(position_of, range)?;
        }

        let nodes: Vec<SimNode> = all
            .iter()
            .map(|r| SimNode {
                id: r.id,
                kind: r.kind,
                pos: r.position,
                battery: r.battery,
                alive: true,
            })
            .collect();
        let region_of = all.iter().map(|r| r.region).collect();
        let kinds: Vec<NodeKind> = all.iter().map(|r| r.kind).collect();
        let modes = all.iter().map(|r| r.mode).collect();
        let collected_bits = vec![0; all.len()];
        let rfd_ids = rfds.iter().map(|r| r.id).collect();
        let world = World::new(nodes, cfg.radio);

        Ok((
            Self {
                cfg,
                variant,
                approach,
                plan,
                organization_messages,
                region_of,
                kinds,
                modes,
                collected_bits,
                rfd_ids,
                warnings,
                dropped_bits: 0,
            },
            world,
        ))
    }

    pub fn plan(&self) -> &TopologyPlan {
        &self.plan
    }

    pub fn region_of(&self, id: NodeId) -> RegionId {
        self.region_of[id.0 as usize]
    }

    pub fn mode_of(&self, id: NodeId) -> DutyMode {
        self.modes[id.0 as usize]
    }

    pub fn dump_topology(&self) -> String {
        self.plan.dump(|id| self.region_of(id))
    }

    fn advance(&mut self, id: NodeId, event: ModeEvent) {
        let idx = id.0 as usize;
        self.modes[idx] = next_mode(
            self.kinds[idx],
            self.modes[idx],
            event,
            self.cfg.flags.sleep_mode,
        )
        .expect("engine drives only legal duty transitions");
    }

    /// Setup-phase charges (§ position scan + region-head announcements):
    /// every RFD receives exactly two control messages.
    fn charge_setup_phase(&mut self, world: &mut World) {
        let ctl = self.cfg.ctl_bits;
        let charge = self.cfg.flags.setup_energy;
        for &id in &self.rfd_ids.clone() {
            world.trace.record(Message::unicast(
                MessageKind::PositionCtl,
                Hop::BaseStation,
                Hop::Node(id),
                ctl,
            ));
            if charge {
                world.charge_rx(id, ctl);
            }
        }
        for region in &self.plan.regions {
            let members: Vec<NodeId> = region.chains.iter().flatten().copied().collect();
            if members.is_empty() {
                continue;
            }
            world
                .trace
                .record(Message::region_broadcast(region.ffd, region.region, ctl));
            if charge {
                let ffd_pos = world.position(region.ffd);
                let reach = members
                    .iter()
                    .map(|m| distance(&ffd_pos, &world.position(*m)))
                    .fold(0.0, f64::max);
                world.charge_tx(region.ffd, ctl, reach);
                for m in members {
                    world.charge_rx(m, ctl);
                }
            }
        }
    }

    /// Replays the recorded self-organization traffic (Build_Chain hops,
    /// Chain_D confirmations, Topology_D reports) against batteries.
    fn charge_organization(&mut self, world: &mut World) {
        for msg in self.organization_messages.clone() {
            world.trace.record(msg);
            if !self.cfg.flags.setup_energy {
                continue;
            }
            if let (Hop::Node(src), Dispatch::Unicast(dst)) = (msg.src, msg.dst) {
                let d = match dst {
                    Hop::Node(dst) => distance(&world.position(src), &world.position(dst)),
                    Hop::BaseStation => world.position(src).bs_distance_m(),
                };
                world.charge_tx(src, msg.payload_bits, d);
                if let Hop::Node(dst) = dst {
                    world.charge_rx(dst, msg.payload_bits);
                }
            }
        }
    }

    /// Token down one chain, reports back with accumulation. Returns the
    /// bits delivered to the FFD.
    fn collect_chain(&mut self, world: &mut World, ffd: NodeId, chain: &[NodeId]) -> u64 {
        if chain.is_empty() {
            return 0;
        }
        let token = self.cfg.token_bits;
        let report = self.cfg.report_bits;
        let fusion = self.cfg.flags.fusion;
        let ffd_pos = world.position(ffd);

        // token leg: FFD -> m1 -> ... -> tail
        let mut src = ffd;
        let mut src_pos = ffd_pos;
        for &member in chain {
            let pos = world.position(member);
            world.trace.record(Message::unicast(
                MessageKind::Req,
                Hop::Node(src),
                Hop::Node(member),
                token,
            ));
            world.charge_tx(src, token, distance(&src_pos, &pos));
            world.charge_rx(member, token);
            self.advance(member, ModeEvent::PacketArrival);
            if src != ffd {
                self.advance(src, ModeEvent::ActionDone);
            }
            src = member;
            src_pos = pos;
        }

        // report leg: tail -> ... -> m1 -> FFD
        let mut acc = 0u64;
        for j in (0..chain.len()).rev() {
            let sender = chain[j];
            let out = if fusion { report } else { acc + report };
            let (dst_hop, dst_pos) = if j == 0 {
                (ffd, ffd_pos)
            } else {
                (chain[j - 1], world.position(chain[j - 1]))
            };
            if j < chain.len() - 1 {
                // woke again for the inbound report
                self.advance(sender, ModeEvent::PacketArrival);
            }
            world.trace.record(Message::unicast(
                MessageKind::Report,
                Hop::Node(sender),
                Hop::Node(dst_hop),
                out,
            ));
            world.charge_tx(sender, out, distance(&world.position(sender), &dst_pos));
            world.charge_rx(dst_hop, out);
            if j == 0 {
                self.advance(ffd, ModeEvent::PacketArrival);
            }
            self.advance(sender, ModeEvent::ActionDone);
            acc = out;
        }
        acc
    }

    fn run_collection(&mut self, world: &mut World) {
        self.collected_bits.iter_mut().for_each(|b| *b = 0);
        for i in 0..self.plan.regions.len() {
            let ffd = self.plan.regions[i].ffd;
            if !world.is_alive(ffd) {
                continue; // region silent this round
            }
            let chains = self.plan.regions[i].chains.clone();
            let mut total = 0u64;
            for chain in &chains {
                total += self.collect_chain(world, ffd, chain);
            }
            self.collected_bits[ffd.0 as usize] = total;
        }
    }

    fn run_transmission(&mut self, world: &mut World) {
        match self.approach {
            Approach::OneHop => {
                let heads: Vec<NodeId> = self.plan.regions.iter().map(|r| r.ffd).collect();
                for ffd in heads {
                    let payload = self.collected_bits[ffd.0 as usize];
                    if payload == 0 || !world.is_alive(ffd) {
                        continue;
                    }
                    world.trace.record(Message::unicast(
                        MessageKind::Report,
                        Hop::Node(ffd),
                        Hop::BaseStation,
                        payload,
                    ));
                    world.charge_tx(ffd, payload, world.position(ffd).bs_distance_m());
                    self.advance(ffd, ModeEvent::ReportSentToBs);
                }
            }
            Approach::MultiHop => {
                let relays = self.plan.relays.clone();
                for sector in &relays {
                    let mut carry = 0u64;
                    for (depth, &ffd) in sector.iter().enumerate().rev() {
                        if !world.is_alive(ffd) {
                            self.dropped_bits += carry;
                            carry = 0;
                            continue;
                        }
                        if carry > 0 {
                            world.charge_rx(ffd, carry);
                            self.advance(ffd, ModeEvent::PacketArrival);
                        }
                        let own = self.collected_bits[ffd.0 as usize];
                        let payload = if self.cfg.flags.fusion {
                            if carry > 0 || own > 0 {
                                self.cfg.report_bits
                            } else {
                                0
                            }
                        } else {
                            carry + own
                        };
                        if payload == 0 {
                            carry = 0;
                            continue;
                        }
                        let (dst, dist) = if depth == 0 {
                            (Hop::BaseStation, world.position(ffd).bs_distance_m())
                        } else {
                            let inner = sector[depth - 1];
                            (
                                Hop::Node(inner),
                                distance(&world.position(ffd), &world.position(inner)),
                            )
                        };
                        world
                            .trace
                            .record(Message::unicast(MessageKind::Report, Hop::Node(ffd), dst, payload));
                        world.charge_tx(ffd, payload, dist);
                        self.advance(ffd, ModeEvent::ReportSentToBs);
                        carry = if depth == 0 { 0 } else { payload };
                    }
                }
            }
        }
    }

    /// Hops from a region's FFD to the BS, `None` when a dead relay
    /// disconnects the path.
    fn ffd_hops(&self, world: &World, sector_index: usize, track_index: usize) -> Option<u64> {
        match self.approach {
            Approach::OneHop => Some(1),
            Approach::MultiHop => {
                let sector = &self.plan.relays[sector_index];
                if sector[..track_index].iter().any(|f| !world.is_alive(*f)) {
                    return None;
                }
                Some(track_index as u64 + 1)
            }
        }
    }
}

impl Protocol for SchemeProtocol {
    fn name(&self) -> &'static str {
        self.variant.label()
    }

    fn setup(&mut self, world: &mut World) {
        self.charge_setup_phase(world);
        self.charge_organization(world);
        // organization done: RFDs drop to listening once round one starts
    }

    fn run_round(&mut self, world: &mut World, _round: u64) {
        for &id in &self.rfd_ids.clone() {
            if world.is_alive(id) {
                self.advance(id, ModeEvent::RoundStart);
            }
        }
        for sector in self.plan.relays.clone() {
            for ffd in sector {
                if world.is_alive(ffd) {
                    self.advance(ffd, ModeEvent::RoundStart);
                }
            }
        }
        self.run_collection(world);
        self.run_transmission(world);
    }

    fn measured_max_path(&self, world: &World) -> u64 {
        let mut max = 0u64;
        for region in &self.plan.regions {
            if !world.is_alive(region.ffd) {
                continue; // members disconnected, excluded
            }
            let Some(PlanPosition::Ffd {
                sector_index,
                track_index,
            }) = self.plan.position(region.ffd)
            else {
                continue;
            };
            let Some(ffd_hops) = self.ffd_hops(world, sector_index, track_index) else {
                continue;
            };
            for chain in &region.chains {
                if !chain.is_empty() {
                    max = max.max(chain.len() as u64 + ffd_hops);
                }
            }
        }
        max
    }

    fn on_death(&mut self, world: &mut World, dead: &[NodeId]) {
        for &id in dead {
            world.trace.record(Message::unicast(
                MessageKind::DNode,
                Hop::Node(id),
                Hop::BaseStation,
                self.cfg.ctl_bits,
            ));
            if self.kinds[id.0 as usize] == NodeKind::Rfd {
                self.plan.remove_rfd(id);
            }
            // dead FFDs keep their relay slot; the transmission walk
            // detects the break and drops payloads beyond it
        }
    }

    fn locate(&self, id: NodeId) -> Option<NodeLocation> {
        let region = self.region_of(id);
        match self.plan.position(id)? {
            PlanPosition::Rfd {
                chain_no,
                chain_index,
                ..
            } => Some(NodeLocation {
                sector: region.sector,
                track: region.track,
                chain_no: chain_no as u32 + 1,
                chain_index: chain_index as u32,
            }),
            PlanPosition::Ffd { .. } => Some(NodeLocation {
                sector: region.sector,
                track: region.track,
                chain_no: 0,
                chain_index: 0,
            }),
        }
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("variant".to_string(), self.variant.label().to_string()),
            ("approach".to_string(), self.approach.label().to_string()),
            ("fusion".to_string(), self.cfg.flags.fusion.to_string()),
            (
                "literal_first_improvement".to_string(),
                self.cfg.flags.literal_first_improvement.to_string(),
            ),
        ];
        for (i, w) in self.warnings.iter().enumerate() {
            meta.push((format!("warning_{i}"), w.clone()));
        }
        meta
    }
}

/// Convenience accessors used by tests and the delay metrics.
impl SchemeProtocol {
    pub fn regions(&self) -> &[RegionTopology] {
        &self.plan.regions
    }

    pub fn approach(&self) -> Approach {
        self.approach
    }

    pub fn variant(&self) -> ChainVariant {
        self.variant
    }

    pub fn dropped_bits(&self) -> u64 {
        self.dropped_bits
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }
}
