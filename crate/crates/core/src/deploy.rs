//! Setup-phase node placement: uniform RFD deployment, manual FFD
//! placement at region centers, and the BS position scan.

use crate::config::NetworkConfig;
use crate::geometry::PolarPoint;
use crate::message::{Message, MessageKind, TraceSink};
use crate::node::{Hop, NodeId, NodeKind, NodeRecord};
use crate::radio::Battery;
use crate::rng::{SimRng, STREAM_DEPLOY};
use std::f64::consts::PI;

/// Deploys `rfd_count` RFDs area-uniformly over the disc, assigning each
/// its region. Deterministic for a given `(seed, config)`. RFD ids run
/// `0..rfd_count`.
pub fn deploy_rfds(cfg: &NetworkConfig) -> Vec<NodeRecord> {
    let mut rng = SimRng::with_stream(cfg.seed, STREAM_DEPLOY);
    let mut nodes = Vec::with_capacity(cfg.rfd_count as usize);
    for i in 0..cfg.rfd_count {
        let position = sample_disc(&mut rng, cfg.partition.radius_m());
        let region = cfg
            .partition
            .locate_region(&position)
            .expect("sampled point is interior by construction");
        nodes.push(NodeRecord::new(
            NodeId(i),
            NodeKind::Rfd,
            position,
            region,
            Battery::new(cfg.rfd_battery_j, cfg.rfd_death_threshold_j),
        ));
    }
    nodes
}

/// Area-uniform draw on the disc: `rho = R·√u`, `phi = 2π·v`. Points at
/// the exact origin are resampled because no region is defined there.
pub fn sample_disc(rng: &mut SimRng, radius_m: f64) -> PolarPoint {
    loop {
        let u = rng.next_f64();
        if u == 0.0 {
            continue;
        }
        let rho = radius_m * u.sqrt();
        let phi = 2.0 * PI * rng.next_f64();
        return PolarPoint::new(rho, phi);
    }
}

/// Places one FFD at the center of every region (sector-major order).
/// FFD ids continue after the RFD range: `rfd_count..rfd_count+M`.
pub fn place_ffds(cfg: &NetworkConfig) -> Vec<NodeRecord> {
    let mut next_id = cfg.rfd_count;
    cfg.partition
        .regions()
        .map(|region| {
            let record = NodeRecord::new(
                NodeId(next_id),
                NodeKind::Ffd,
                cfg.partition.ffd_position(region),
                region,
                Battery::new(cfg.ffd_battery_j, cfg.ffd_death_threshold_j),
            );
            next_id += 1;
            record
        })
        .collect()
}

/// BS beam scan: every RFD receives one position control message carrying
/// its sector/track assignment. The BS itself is not energy constrained,
/// so only the receive side is charged (when setup energy is on).
pub fn run_bs_scan(rfds: &mut [NodeRecord], cfg: &NetworkConfig, trace: &mut TraceSink) {
    let rx = cfg.radio.rx_energy_j(cfg.ctl_bits);
    for rfd in rfds.iter_mut() {
        debug_assert_eq!(
            cfg.partition.locate_region(&rfd.position).ok(),
            Some(rfd.region)
        );
        trace.record(Message::unicast(
            MessageKind::PositionCtl,
            Hop::BaseStation,
            Hop::Node(rfd.id),
            cfg.ctl_bits,
        ));
        if cfg.flags.setup_energy {
            rfd.battery.drain(rx);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimFlags;

    #[test]
    fn deployment_is_deterministic() {
        let cfg = NetworkConfig::default();
        let a = deploy_rfds(&cfg);
        let b = deploy_rfds(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);

        let other_seed = NetworkConfig { seed: 2, ..cfg };
        let c = deploy_rfds(&other_seed);
        assert_ne!(a, c);
    }

    #[test]
    fn empty_deployment() {
        let cfg = NetworkConfig {
            rfd_count: 0,
            ..NetworkConfig::default()
        };
        assert!(deploy_rfds(&cfg).is_empty());
    }

    #[test]
    fn regions_match_positions() {
        let cfg = NetworkConfig::default();
        for rfd in deploy_rfds(&cfg) {
            assert_eq!(cfg.partition.locate_region(&rfd.position).unwrap(), rfd.region);
            assert!(rfd.position.rho_m() > 0.0 && rfd.position.rho_m() <= 50.0);
        }
    }

    #[test]
    fn per_region_counts_match_expectations() {
        // Binomial oracle: with N = 10_000, each region count should land
        // within 3 sigma of tau_i for this fixed seed.
        let cfg = NetworkConfig {
            rfd_count: 10_000,
            seed: 77,
            ..NetworkConfig::default()
        };
        let rfds = deploy_rfds(&cfg);
        for region in cfg.partition.regions() {
            let tau = cfg.partition.expected_rfds(cfg.rfd_count, region.track).unwrap();
            let p = tau / cfg.rfd_count as f64;
            let sigma = (cfg.rfd_count as f64 * p * (1.0 - p)).sqrt();
            let count = rfds.iter().filter(|n| n.region == region).count() as f64;
            assert!(
                (count - tau).abs() < 3.0 * sigma,
                "region {region}: {count} vs expected {tau} (sigma {sigma:.1})"
            );
        }
    }

    #[test]
    fn ffd_placement_matches_table_defaults() {
        let cfg = NetworkConfig::default();
        let ffds = place_ffds(&cfg);
        assert_eq!(ffds.len() as u32, cfg.partition.region_count());
        let mut rhos: Vec<f64> = ffds.iter().map(|f| f.position.rho_m()).collect();
        rhos.sort_by(f64::total_cmp);
        assert_eq!(rhos, vec![12.5, 12.5, 37.5, 37.5]);
        let mut phis: Vec<f64> = ffds.iter().map(|f| f.position.phi_rad()).collect();
        phis.sort_by(f64::total_cmp);
        assert!((phis[0] - PI / 2.0).abs() < 1e-12);
        assert!((phis[3] - 3.0 * PI / 2.0).abs() < 1e-12);
        // ids follow the RFD range
        assert_eq!(ffds[0].id, NodeId(100));
    }

    #[test]
    fn single_region_ffd_at_half_width() {
        let cfg = NetworkConfig {
            partition: crate::geometry::PartitionSpec::from_degrees(50.0, 50.0, 180.0).unwrap(),
            ..NetworkConfig::default()
        };
        let ffds = place_ffds(&cfg);
        assert_eq!(ffds.len(), 2);
        assert_eq!(ffds[0].position.rho_m(), 25.0);
    }

    #[test]
    fn bs_scan_charges_one_reception() {
        let cfg = NetworkConfig::default();
        let mut rfds = deploy_rfds(&cfg);
        let mut trace = TraceSink::enabled();
        run_bs_scan(&mut rfds, &cfg, &mut trace);
        for rfd in &rfds {
            assert!((cfg.rfd_battery_j - rfd.battery.residual_j() - 3.2e-6).abs() < 1e-12);
        }
        assert_eq!(trace.messages().len(), 100);
        assert!(trace
            .messages()
            .iter()
            .all(|m| m.kind == MessageKind::PositionCtl && m.src == Hop::BaseStation));
    }

    #[test]
    fn bs_scan_respects_flags() {
        let mut cfg = NetworkConfig {
            ctl_bits: 0,
            ..NetworkConfig::default()
        };
        let mut rfds = deploy_rfds(&cfg);
        run_bs_scan(&mut rfds, &cfg, &mut TraceSink::Disabled);
        assert!(rfds.iter().all(|r| r.battery.residual_j() == cfg.rfd_battery_j));

        cfg.ctl_bits = 64;
        cfg.flags = SimFlags {
            setup_energy: false,
            ..SimFlags::default()
        };
        let mut rfds = deploy_rfds(&cfg);
        let mut trace = TraceSink::enabled();
        run_bs_scan(&mut rfds, &cfg, &mut trace);
        assert!(rfds.iter().all(|r| r.battery.residual_j() == cfg.rfd_battery_j));
        assert_eq!(trace.messages().len(), 100); // assignments still delivered
    }
}
