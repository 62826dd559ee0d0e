//! Region chain construction and FFD relay tables.
//!
//! Every region holds one FFD and a chain of RFDs built greedily: the
//! chain starts at the RFD nearest the FFD and repeatedly appends the
//! nearest unvisited RFD. `Chain1` hangs a single chain off the FFD;
//! `Chain2` splits the region's RFDs into two chains rooted at the FFD,
//! halving the worst relay load. Across regions, same-sector FFDs form a
//! relay line toward the BS for the multi-hop approach.

use crate::config::ConfigError;
use crate::geometry::{distance, PolarPoint, RegionId};
use crate::message::{Message, MessageKind};
use crate::node::{Hop, NodeId, NodeKind, NodeRecord};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Chain topology variant: where the FFD sits relative to its chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainVariant {
    /// FFD at the start of one chain (β = 1).
    Chain1,
    /// FFD in the middle, feeding two chains (β = 2).
    Chain2,
}

impl ChainVariant {
    pub fn beta(&self) -> usize {
        match self {
            ChainVariant::Chain1 => 1,
            ChainVariant::Chain2 => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ChainVariant::Chain1 => "chain1",
            ChainVariant::Chain2 => "chain2",
        }
    }
}

/// FFD-to-BS delivery approach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Approach {
    /// Every FFD transmits straight to the BS.
    OneHop,
    /// FFDs forward inward through the same-sector relay line.
    MultiHop,
}

impl Approach {
    pub fn label(&self) -> &'static str {
        match self {
            Approach::OneHop => "onehop",
            Approach::MultiHop => "multihop",
        }
    }
}

/// Splits `count` RFDs into `beta` chain lengths. When the count does not
/// divide evenly, `count mod beta` chains get the extra member, listed
/// first. Lengths always sum to `count`.
pub fn chain_lengths(count: usize, beta: usize) -> Vec<usize> {
    assert!(beta >= 1, "beta must be at least 1");
    let base = count / beta;
    let extra = count % beta;
    (0..beta)
        .map(|i| if i < extra { base + 1 } else { base })
        .collect()
}

/// Builds one chain of `length` members from the unvisited region RFDs.
///
/// The first member is the unvisited RFD nearest the FFD; each later
/// member is the nearest unvisited RFD to the current chain end (ties go
/// to the lowest id). With `literal_first_improvement`, later selections
/// instead reproduce the published scan that accepts the first candidate
/// (in id order) closer than the disc radius; if no candidate qualifies
/// the true nearest is used so construction always terminates.
pub fn build_chain(
    ffd: &NodeRecord,
    region_rfds: &[&NodeRecord],
    visited: &mut [bool],
    length: usize,
    literal_first_improvement: bool,
    disc_radius_m: f64,
) -> Vec<NodeId> {
    assert_eq!(region_rfds.len(), visited.len());
    debug_assert!(length <= visited.iter().filter(|v| !**v).count());
    let mut chain = Vec::with_capacity(length);
    if length == 0 {
        return chain;
    }

    let nearest_to = |anchor: &PolarPoint, visited: &[bool]| -> usize {
        let mut best: Option<(f64, NodeId, usize)> = None;
        for (idx, rfd) in region_rfds.iter().enumerate() {
            if visited[idx] {
                continue;
            }
            let d = distance(anchor, &rfd.position);
            let key = (d, rfd.id, idx);
            if best.map_or(true, |(bd, bid, _)| (d, rfd.id) < (bd, bid)) {
                best = Some(key);
            }
        }
        best.expect("at least one unvisited candidate").2
    };

    // The FFD always hands the chain to its truly closest RFD.
    let mut current = nearest_to(&ffd.position, visited);
    visited[current] = true;
    chain.push(region_rfds[current].id);

    for _ in 1..length {
        let next = if literal_first_improvement {
            let anchor = &region_rfds[current].position;
            let mut found = None;
            for (idx, rfd) in region_rfds.iter().enumerate() {
                if visited[idx] {
                    continue;
                }
                if distance(anchor, &rfd.position) < disc_radius_m {
                    found = Some(idx);
                    break;
                }
            }
            found.unwrap_or_else(|| nearest_to(anchor, visited))
        } else {
            nearest_to(&region_rfds[current].position, visited)
        };
        visited[next] = true;
        chain.push(region_rfds[next].id);
        current = next;
    }
    chain
}

/// The chains of one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionTopology {
    pub region: RegionId,
    pub ffd: NodeId,
    /// Ordered nearest-to-FFD first; one entry per chain (possibly empty).
    pub chains: Vec<Vec<NodeId>>,
}

/// Builds all chains of one region and the self-organization message
/// trace: `Build_Chain` hops down each chain as it forms, the closest RFD
/// confirms with `Chain_D`, and the FFD reports `Topology_D` to the BS.
pub fn build_region_topology(
    ffd: &NodeRecord,
    region_rfds: &[&NodeRecord],
    variant: ChainVariant,
    literal_first_improvement: bool,
    disc_radius_m: f64,
    ctl_bits: u64,
) -> (RegionTopology, Vec<Message>) {
    let lengths = chain_lengths(region_rfds.len(), variant.beta());
    let mut visited = vec![false; region_rfds.len()];
    let mut chains = Vec::with_capacity(lengths.len());
    let mut messages = Vec::new();

    for length in lengths {
        let chain = build_chain(
            ffd,
            region_rfds,
            &mut visited,
            length,
            literal_first_improvement,
            disc_radius_m,
        );
        if !chain.is_empty() {
            let mut src = Hop::Node(ffd.id);
            for member in &chain {
                messages.push(Message::unicast(MessageKind::BuildChain, src, Hop::Node(*member), ctl_bits));
                src = Hop::Node(*member);
            }
            messages.push(Message::unicast(
                MessageKind::ChainD,
                Hop::Node(chain[0]),
                Hop::Node(ffd.id),
                ctl_bits,
            ));
        }
        chains.push(chain);
    }
    messages.push(Message::unicast(
        MessageKind::TopologyD,
        Hop::Node(ffd.id),
        Hop::BaseStation,
        ctl_bits,
    ));

    (
        RegionTopology {
            region: ffd.region,
            ffd: ffd.id,
            chains,
        },
        messages,
    )
}

/// Per-sector FFD relay tables. `relays[sector-1]` lists FFD ids ordered
/// track 1 (innermost) to `n_t`.
pub fn build_ffd_relays(ffds: &[NodeRecord], sector_count: u32, track_count: u32) -> Vec<Vec<NodeId>> {
    let mut relays = vec![vec![None; track_count as usize]; sector_count as usize];
    for ffd in ffds {
        debug_assert_eq!(ffd.kind, NodeKind::Ffd);
        relays[(ffd.region.sector - 1) as usize][(ffd.region.track - 1) as usize] = Some(ffd.id);
    }
    relays
        .into_iter()
        .map(|sector| sector.into_iter().map(|id| id.expect("one FFD per region")).collect())
        .collect()
}

/// Where a node sits in the plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanPosition {
    Rfd {
        region_index: usize,
        chain_no: usize,
        /// 1-based position, 1 = adjacent to the FFD.
        chain_index: usize,
    },
    Ffd {
        sector_index: usize,
        track_index: usize,
    },
}

/// Complete routing plan: region chains plus FFD relay tables.
#[derive(Debug, Clone)]
pub struct TopologyPlan {
    pub variant: ChainVariant,
    pub approach: Approach,
    pub regions: Vec<RegionTopology>,
    pub relays: Vec<Vec<NodeId>>,
    positions: BTreeMap<NodeId, PlanPosition>,
}

impl TopologyPlan {
    pub fn new(
        variant: ChainVariant,
        approach: Approach,
        regions: Vec<RegionTopology>,
        relays: Vec<Vec<NodeId>>,
    ) -> Self {
        let mut plan = Self {
            variant,
            approach,
            regions,
            relays,
            positions: BTreeMap::new(),
        };
        plan.rebuild_positions();
        plan
    }

    fn rebuild_positions(&mut self) {
        self.positions.clear();
        for (region_index, region) in self.regions.iter().enumerate() {
            for (chain_no, chain) in region.chains.iter().enumerate() {
                for (i, id) in chain.iter().enumerate() {
                    self.positions.insert(
                        *id,
                        PlanPosition::Rfd {
                            region_index,
                            chain_no,
                            chain_index: i + 1,
                        },
                    );
                }
            }
        }
        for (sector_index, sector) in self.relays.iter().enumerate() {
            for (track_index, id) in sector.iter().enumerate() {
                self.positions.insert(
                    *id,
                    PlanPosition::Ffd {
                        sector_index,
                        track_index,
                    },
                );
            }
        }
    }

    pub fn position(&self, id: NodeId) -> Option<PlanPosition> {
        self.positions.get(&id).copied()
    }

    /// Predecessor (the neighbor one step farther from the BS).
    pub fn pre_of(&self, id: NodeId) -> Option<NodeId> {
        match self.position(id)? {
            PlanPosition::Rfd {
                region_index,
                chain_no,
                chain_index,
            } => {
                if chain_index == 1 {
                    Some(self.regions[region_index].ffd)
                } else {
                    Some(self.regions[region_index].chains[chain_no][chain_index - 2])
                }
            }
            PlanPosition::Ffd {
                sector_index,
                track_index,
            } => match self.approach {
                Approach::OneHop => None,
                Approach::MultiHop => self.relays[sector_index].get(track_index + 1).copied(),
            },
        }
    }

    /// Successor (the next hop toward the BS for FFDs, toward the chain
    /// tail for RFDs; `None` at chain tails and outermost-relay ends).
    pub fn suc_of(&self, id: NodeId) -> Option<Hop> {
        match self.position(id)? {
            PlanPosition::Rfd {
                region_index,
                chain_no,
                chain_index,
            } => self.regions[region_index].chains[chain_no]
                .get(chain_index)
                .map(|n| Hop::Node(*n)),
            PlanPosition::Ffd {
                sector_index,
                track_index,
            } => match self.approach {
                Approach::OneHop => Some(Hop::BaseStation),
                Approach::MultiHop => {
                    if track_index == 0 {
                        Some(Hop::BaseStation)
                    } else {
                        Some(Hop::Node(self.relays[sector_index][track_index - 1]))
                    }
                }
            },
        }
    }

    /// Splices a dead RFD out of its chain; its neighbors become adjacent.
    pub fn remove_rfd(&mut self, id: NodeId) {
        if let Some(PlanPosition::Rfd {
            region_index,
            chain_no,
            chain_index,
        }) = self.position(id)
        {
            let chain = &mut self.regions[region_index].chains[chain_no];
            chain.remove(chain_index - 1);
            self.positions.remove(&id);
            for (i, member) in chain.iter().enumerate().skip(chain_index - 1) {
                self.positions.insert(
                    *member,
                    PlanPosition::Rfd {
                        region_index,
                        chain_no,
                        chain_index: i + 1,
                    },
                );
            }
        }
    }

    /// Errors if any chain hop or relay hop exceeds `range_m`.
    pub fn enforce_tx_range(
        &self,
        position_of: impl Fn(NodeId) -> PolarPoint,
        range_m: f64,
    ) -> Result<(), ConfigError> {
        let check = |from: String, to: String, d: f64| {
            if d > range_m {
                Err(ConfigError::RangeExceeded {
                    from,
                    to,
                    distance_m: d,
                    range_m,
                })
            } else {
                Ok(())
            }
        };
        for region in &self.regions {
            let ffd_pos = position_of(region.ffd);
            for chain in &region.chains {
                let mut prev = (format!("ffd {}", region.ffd), ffd_pos);
                for id in chain {
                    let pos = position_of(*id);
                    check(prev.0.clone(), format!("rfd {id}"), distance(&prev.1, &pos))?;
                    prev = (format!("rfd {id}"), pos);
                }
            }
        }
        if self.approach == Approach::MultiHop {
            for sector in &self.relays {
                for pair in sector.windows(2) {
                    let d = distance(&position_of(pair[0]), &position_of(pair[1]));
                    check(format!("ffd {}", pair[1]), format!("ffd {}", pair[0]), d)?;
                }
                if let Some(first) = sector.first() {
                    let d = position_of(*first).bs_distance_m();
                    check(format!("ffd {first}"), "BS".into(), d)?;
                }
            }
        }
        Ok(())
    }

    /// Plain-text adjacency listing, one line per node sorted by id:
    /// `id kind sector track pre suc chain`.
    pub fn dump(&self, region_of: impl Fn(NodeId) -> RegionId) -> String {
        let mut out = String::from("id kind sector track pre suc chain\n");
        for (&id, pos) in &self.positions {
            let region = region_of(id);
            let kind = match pos {
                PlanPosition::Rfd { .. } => "rfd",
                PlanPosition::Ffd { .. } => "ffd",
            };
            let pre = self
                .pre_of(id)
                .map_or_else(|| "-".to_string(), |p| p.to_string());
            let suc = self
                .suc_of(id)
                .map_or_else(|| "-".to_string(), |s| s.to_string());
            let chain = match pos {
                PlanPosition::Rfd { chain_index, .. } => chain_index.to_string(),
                PlanPosition::Ffd { .. } => "-".to_string(),
            };
            out.push_str(&format!(
                "{id} {kind} {sector} {track} {pre} {suc} {chain}\n",
                sector = region.sector,
                track = region.track,
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PartitionSpec;
    use crate::radio::Battery;
    use crate::rng::SimRng;
    use std::f64::consts::PI;

    fn rfd(id: u32, rho: f64, phi: f64) -> NodeRecord {
        NodeRecord::new(
            NodeId(id),
            NodeKind::Rfd,
            PolarPoint::new(rho, phi),
            RegionId { sector: 1, track: 1 },
            Battery::new(10.0, 0.05),
        )
    }

    fn ffd(id: u32, rho: f64, phi: f64) -> NodeRecord {
        NodeRecord::new(
            NodeId(id),
            NodeKind::Ffd,
            PolarPoint::new(rho, phi),
            RegionId { sector: 1, track: 1 },
            Battery::new(100.0, 0.5),
        )
    }

    #[test]
    fn chain_length_examples() {
        assert_eq!(chain_lengths(12, 1), vec![12]);
        assert_eq!(chain_lengths(37, 2), vec![19, 18]);
        assert_eq!(chain_lengths(38, 2), vec![19, 19]);
        assert_eq!(chain_lengths(0, 2), vec![0, 0]);
        assert_eq!(chain_lengths(1, 2), vec![1, 0]);
        for count in 0..=100 {
            for beta in 1..=2 {
                let lengths = chain_lengths(count, beta);
                assert_eq!(lengths.iter().sum::<usize>(), count);
                assert!(lengths.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    #[should_panic(expected = "beta")]
    fn chain_lengths_rejects_zero_beta() {
        chain_lengths(5, 0);
    }

    #[test]
    fn single_rfd_chain() {
        let head = ffd(10, 12.5, PI / 2.0);
        let only = rfd(0, 20.0, PI / 2.0);
        let rfds = vec![&only];
        let mut visited = vec![false];
        let chain = build_chain(&head, &rfds, &mut visited, 1, false, 50.0);
        assert_eq!(chain, vec![NodeId(0)]);
    }

    #[test]
    fn collinear_rfds_order_nearest_first() {
        let head = ffd(10, 10.0, 0.0);
        let a = rfd(2, 11.0, 0.0);
        let b = rfd(0, 12.0, 0.0);
        let c = rfd(1, 13.0, 0.0);
        let rfds = vec![&b, &c, &a]; // scrambled input order
        let mut visited = vec![false; 3];
        let chain = build_chain(&head, &rfds, &mut visited, 3, false, 50.0);
        assert_eq!(chain, vec![NodeId(2), NodeId(0), NodeId(1)]);
    }

    #[test]
    fn greedy_matches_naive_oracle() {
        // independent quadratic re-selection, recomputed from scratch
        fn oracle(ffd: &NodeRecord, rfds: &[&NodeRecord]) -> Vec<NodeId> {
            let mut remaining: Vec<&NodeRecord> = rfds.to_vec();
            let mut order = Vec::new();
            let mut anchor = ffd.position;
            while !remaining.is_empty() {
                let mut best = 0;
                for i in 1..remaining.len() {
                    let (di, db) = (
                        distance(&anchor, &remaining[i].position),
                        distance(&anchor, &remaining[best].position),
                    );
                    if di < db || (di == db && remaining[i].id < remaining[best].id) {
                        best = i;
                    }
                }
                let picked = remaining.remove(best);
                order.push(picked.id);
                anchor = picked.position;
            }
            order
        }

        let mut rng = SimRng::new(99);
        for _ in 0..50 {
            let head = ffd(100, 25.0 + 10.0 * rng.next_f64(), rng.next_f64());
            let rfds: Vec<NodeRecord> = (0..5)
                .map(|i| rfd(i, 25.0 + 25.0 * rng.next_f64(), PI * rng.next_f64()))
                .collect();
            let refs: Vec<&NodeRecord> = rfds.iter().collect();
            let mut visited = vec![false; refs.len()];
            let chain = build_chain(&head, &refs, &mut visited, refs.len(), false, 50.0);
            assert_eq!(chain, oracle(&head, &refs));
        }
    }

    #[test]
    fn literal_scan_differs_from_true_greedy() {
        // candidate with the lower slice position is farther but still
        // within the disc radius, so the literal scan grabs it first
        let head = ffd(10, 10.0, 0.0);
        let far = rfd(0, 18.0, 0.0);
        let near = rfd(1, 11.5, 0.0);
        let tail = rfd(2, 30.0, 0.0);
        let rfds = vec![&far, &near, &tail];

        let mut visited = vec![false; 3];
        let greedy = build_chain(&head, &rfds, &mut visited, 3, false, 50.0);
        assert_eq!(greedy, vec![NodeId(1), NodeId(0), NodeId(2)]);

        let mut visited = vec![false; 3];
        let literal = build_chain(&head, &rfds, &mut visited, 3, true, 50.0);
        // first member is still the closest RFD, then the scan takes the
        // first unvisited candidate within the disc radius
        assert_eq!(literal, vec![NodeId(1), NodeId(0), NodeId(2)]);

        // reorder so the literal scan's id-order pick is not the nearest
        let a = rfd(0, 30.0, 0.0); // first in id order, farther
        let b = rfd(1, 12.0, 0.0); // nearest to the head's pick
        let c = rfd(2, 11.0, 0.0); // chain start
        let rfds = vec![&a, &b, &c];
        let mut visited = vec![false; 3];
        let literal = build_chain(&head, &rfds, &mut visited, 3, true, 50.0);
        assert_eq!(literal[0], NodeId(2));
        assert_eq!(literal[1], NodeId(0), "literal scan accepts the first improving candidate");
        let mut visited = vec![false; 3];
        let greedy = build_chain(&head, &rfds, &mut visited, 3, false, 50.0);
        assert_eq!(greedy[1], NodeId(1));
    }

    #[test]
    fn region_topology_chain2_splits_and_reports() {
        let head = ffd(100, 37.5, PI / 2.0);
        let rfds: Vec<NodeRecord> = (0..37)
            .map(|i| {
                rfd(
                    i,
                    26.0 + (i as f64 % 12.0) * 2.0,
                    0.1 + (i as f64) * (PI - 0.2) / 37.0,
                )
            })
            .collect();
        let refs: Vec<&NodeRecord> = rfds.iter().collect();
        let (topo, messages) = build_region_topology(&head, &refs, ChainVariant::Chain2, false, 50.0, 64);
        assert_eq!(topo.chains.len(), 2);
        assert_eq!(topo.chains[0].len(), 19);
        assert_eq!(topo.chains[1].len(), 18);
        // no RFD appears twice
        let mut all: Vec<NodeId> = topo.chains.iter().flatten().copied().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 37);
        // one Chain_D per chain, one Topology_D per FFD
        assert_eq!(messages.iter().filter(|m| m.kind == MessageKind::ChainD).count(), 2);
        assert_eq!(messages.iter().filter(|m| m.kind == MessageKind::TopologyD).count(), 1);
        assert_eq!(
            messages.iter().filter(|m| m.kind == MessageKind::BuildChain).count(),
            37
        );
    }

    #[test]
    fn two_rfd_region_message_trace() {
        let head = ffd(100, 12.5, PI / 2.0);
        let a = rfd(0, 14.0, PI / 2.0);
        let b = rfd(1, 16.0, PI / 2.0);
        let refs = vec![&a, &b];
        let (_, messages) = build_region_topology(&head, &refs, ChainVariant::Chain1, false, 50.0, 64);
        let kinds: Vec<MessageKind> = messages.iter().map(|m| m.kind).collect();
        assert_eq!(
            kinds,
            vec![
                MessageKind::BuildChain,
                MessageKind::BuildChain,
                MessageKind::ChainD,
                MessageKind::TopologyD
            ]
        );
    }

    fn demo_plan(approach: Approach) -> TopologyPlan {
        // two sectors x two tracks, FFD ids 100..104, one short chain
        let spec = PartitionSpec::new(50.0, 25.0, PI).unwrap();
        let mut ffds = Vec::new();
        let mut id = 100;
        for region in spec.regions() {
            let mut f = ffd(id, 0.0, 0.0);
            f.position = spec.ffd_position(region);
            f.region = region;
            ffds.push(f);
            id += 1;
        }
        let relays = build_ffd_relays(&ffds, 2, 2);
        let regions = vec![
            RegionTopology {
                region: RegionId { sector: 1, track: 1 },
                ffd: NodeId(100),
                chains: vec![vec![NodeId(0), NodeId(1), NodeId(2)]],
            },
            RegionTopology {
                region: RegionId { sector: 1, track: 2 },
                ffd: NodeId(101),
                chains: vec![vec![NodeId(3)]],
            },
            RegionTopology {
                region: RegionId { sector: 2, track: 1 },
                ffd: NodeId(102),
                chains: vec![vec![]],
            },
            RegionTopology {
                region: RegionId { sector: 2, track: 2 },
                ffd: NodeId(103),
                chains: vec![vec![NodeId(4)]],
            },
        ];
        TopologyPlan::new(ChainVariant::Chain1, approach, regions, relays)
    }

    #[test]
    fn relay_tables_follow_track_order() {
        let plan = demo_plan(Approach::MultiHop);
        // track-2 FFD: pre none, suc = track-1 FFD
        assert_eq!(plan.pre_of(NodeId(101)), None);
        assert_eq!(plan.suc_of(NodeId(101)), Some(Hop::Node(NodeId(100))));
        // track-1 FFD: pre = track-2 FFD, suc = BS
        assert_eq!(plan.pre_of(NodeId(100)), Some(NodeId(101)));
        assert_eq!(plan.suc_of(NodeId(100)), Some(Hop::BaseStation));

        let onehop = demo_plan(Approach::OneHop);
        for id in [100, 101, 102, 103] {
            assert_eq!(onehop.pre_of(NodeId(id)), None);
            assert_eq!(onehop.suc_of(NodeId(id)), Some(Hop::BaseStation));
        }
    }

    #[test]
    fn chain_adjacency_is_symmetric() {
        let plan = demo_plan(Approach::MultiHop);
        // suc(pre(x)) = x along the chain
        assert_eq!(plan.pre_of(NodeId(0)), Some(NodeId(100)));
        assert_eq!(plan.suc_of(NodeId(0)), Some(Hop::Node(NodeId(1))));
        assert_eq!(plan.pre_of(NodeId(1)), Some(NodeId(0)));
        assert_eq!(plan.suc_of(NodeId(2)), None);
    }

    #[test]
    fn splice_removes_dead_member() {
        let mut plan = demo_plan(Approach::MultiHop);
        plan.remove_rfd(NodeId(1));
        assert_eq!(plan.suc_of(NodeId(0)), Some(Hop::Node(NodeId(2))));
        assert_eq!(plan.pre_of(NodeId(2)), Some(NodeId(0)));
        assert_eq!(plan.position(NodeId(1)), None);
        // removing the first member promotes the next one
        plan.remove_rfd(NodeId(0));
        assert_eq!(plan.pre_of(NodeId(2)), Some(NodeId(100)));
    }

    #[test]
    fn dump_lists_every_node() {
        let plan = demo_plan(Approach::MultiHop);
        let spec = PartitionSpec::new(50.0, 25.0, PI).unwrap();
        let region_of = |id: NodeId| match plan.position(id).unwrap() {
            PlanPosition::Rfd { region_index, .. } => plan.regions[region_index].region,
            PlanPosition::Ffd {
                sector_index,
                track_index,
            } => RegionId {
                sector: sector_index as u32 + 1,
                track: track_index as u32 + 1,
            },
        };
        let _ = spec;
        let dump = plan.dump(region_of);
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines[0], "id kind sector track pre suc chain");
        assert_eq!(lines.len(), 1 + 5 + 4);
        assert!(dump.contains("0 rfd 1 1 100 1 1"));
        assert!(dump.contains("100 ffd 1 1 101 BS -"));
        assert!(dump.contains("2 rfd 1 1 1 - 3"));
    }

    #[test]
    fn strict_range_flags_long_hops() {
        let plan = demo_plan(Approach::MultiHop);
        let spec = PartitionSpec::new(50.0, 25.0, PI).unwrap();
        let pos = |id: NodeId| -> PolarPoint {
            match id.0 {
                0 => PolarPoint::new(14.0, PI / 2.0),
                1 => PolarPoint::new(16.0, PI / 2.0),
                2 => PolarPoint::new(24.0, PI / 2.0),
                3 => PolarPoint::new(40.0, PI / 2.0),
                4 => PolarPoint::new(45.0, 3.0 * PI / 2.0),
                100..=103 => spec.ffd_position(RegionId {
                    sector: (id.0 - 100) / 2 + 1,
                    track: (id.0 - 100) % 2 + 1,
                }),
                _ => unreachable!(),
            }
        };
        assert!(plan.enforce_tx_range(pos, 30.0).is_ok());
        assert!(matches!(
            plan.enforce_tx_range(pos, 7.0),
            Err(ConfigError::RangeExceeded { .. })
        ));
    }
}
