//! Disc partition geometry: sectors, tracks, region areas, expected
//! populations, head positions and point-to-region assignment.
//!
//! The deployment area is a disc of radius `R` centered on the base
//! station. It is cut into `n_t = R / r` annular tracks of width `r`
//! (indexed 1 at the center, outward) and `n_s = 2π / θ` sectors of angle
//! `θ` (indexed 1, clockwise). A region is one sector ∩ track cell and
//! hosts exactly one FFD.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Tolerance for the requirement that `R/r` and `2π/θ` are integers.
const RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("track width must satisfy 0 < r <= R, got r={width}, R={radius}")]
    InvalidTrackWidth { width: f64, radius: f64 },
    #[error("sector angle must satisfy 0 < theta <= pi, got {0} rad")]
    InvalidSectorAngle(f64),
    #[error("R/r = {0} is not an integer: tracks must tile the radius exactly")]
    NonIntegralTracks(f64),
    #[error("2*pi/theta = {0} is not an integer: sectors must tile the circle exactly")]
    NonIntegralSectors(f64),
    #[error("track {track} out of range 1..={track_count}")]
    TrackOutOfRange { track: u32, track_count: u32 },
    #[error("point at rho={rho_m} m lies outside the deployment disc (R={radius_m} m)")]
    OutsideArea { rho_m: f64, radius_m: f64 },
    #[error("point coincides with the base station; no region is defined at the origin")]
    AtOrigin,
}

/// Polar position relative to the base station at the origin.
/// `phi` is normalized into `[0, 2π)` on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    rho_m: f64,
    phi_rad: f64,
}

impl PolarPoint {
    pub fn new(rho_m: f64, phi_rad: f64) -> Self {
        debug_assert!(rho_m >= 0.0, "negative radial coordinate");
        let mut phi = phi_rad.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { rho_m, phi_rad: phi }
    }

    pub fn rho_m(&self) -> f64 {
        self.rho_m
    }

    pub fn phi_rad(&self) -> f64 {
        self.phi_rad
    }

    /// Distance to the base station.
    pub fn bs_distance_m(&self) -> f64 {
        self.rho_m
    }
}

/// Euclidean distance between two polar points (law of cosines).
pub fn distance(p: &PolarPoint, q: &PolarPoint) -> f64 {
    let d2 = p.rho_m * p.rho_m + q.rho_m * q.rho_m
        - 2.0 * p.rho_m * q.rho_m * (p.phi_rad - q.phi_rad).cos();
    d2.max(0.0).sqrt()
}

/// One sector ∩ track cell. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegionId {
    pub sector: u32,
    pub track: u32,
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s{}t{}", self.sector, self.track)
    }
}

/// Validated disc partition: radius `R`, track width `r`, sector angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    radius_m: f64,
    track_width_m: f64,
    sector_angle_rad: f64,
}

impl PartitionSpec {
    /// Builds a partition, enforcing `0 < r <= R`, `0 < θ <= π` and
    /// integral `R/r`, `2π/θ`.
    pub fn new(radius_m: f64, track_width_m: f64, sector_angle_rad: f64) -> Result<Self, GeometryError> {
        if !(radius_m > 0.0) || !radius_m.is_finite() {
            return Err(GeometryError::InvalidRadius(radius_m));
        }
        if !(track_width_m > 0.0) || track_width_m > radius_m {
            return Err(GeometryError::InvalidTrackWidth {
                width: track_width_m,
                radius: radius_m,
            });
        }
        if !(sector_angle_rad > 0.0) || sector_angle_rad > PI {
            return Err(GeometryError::InvalidSectorAngle(sector_angle_rad));
        }
        let track_ratio = radius_m / track_width_m;
        if (track_ratio - track_ratio.round()).abs() > RATIO_TOLERANCE {
            return Err(GeometryError::NonIntegralTracks(track_ratio));
        }
        let sector_ratio = 2.0 * PI / sector_angle_rad;
        if (sector_ratio - sector_ratio.round()).abs() > RATIO_TOLERANCE {
            return Err(GeometryError::NonIntegralSectors(sector_ratio));
        }
        Ok(Self {
            radius_m,
            track_width_m,
            sector_angle_rad,
        })
    }

    /// Convenience constructor taking the sector angle in degrees, the unit
    /// used at the configuration boundary.
    pub fn from_degrees(radius_m: f64, track_width_m: f64, sector_angle_deg: f64) -> Result<Self, GeometryError> {
        Self::new(radius_m, track_width_m, sector_angle_deg * PI / 180.0)
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn track_width_m(&self) -> f64 {
        self.track_width_m
    }

    pub fn sector_angle_rad(&self) -> f64 {
        self.sector_angle_rad
    }

    /// Number of tracks `n_t = R / r`.
    pub fn track_count(&self) -> u32 {
        (self.radius_m / self.track_width_m).round() as u32
    }

    /// Number of sectors `n_s = 2π / θ`.
    pub fn sector_count(&self) -> u32 {
        (2.0 * PI / self.sector_angle_rad).round() as u32
    }

    /// Number of regions `M = n_t · n_s`, which is also the number of FFDs.
    pub fn region_count(&self) -> u32 {
        self.track_count() * self.sector_count()
    }

    /// Area of one region at the given track: `A_i = (i − 1/2) θ r²`.
    pub fn region_area_m2(&self, track: u32) -> Result<f64, GeometryError> {
        self.check_track(track)?;
        Ok((track as f64 - 0.5) * self.sector_angle_rad * self.track_width_m * self.track_width_m)
    }

    /// Expected RFD population of one region at the given track under
    /// area-uniform deployment of `rfd_count` nodes:
    /// `τ_i = N θ r² / (π R²) · (i − 1/2)`.
    ///
    /// Evaluated as `N · (θ/π) · (r/R)² · (i − 1/2)` so that the common
    /// parameter choices (θ an exact fraction of π, r an exact fraction of
    /// R) produce exact results.
    pub fn expected_rfds(&self, rfd_count: u32, track: u32) -> Result<f64, GeometryError> {
        self.check_track(track)?;
        let angular = self.sector_angle_rad / PI;
        let radial = self.track_width_m / self.radius_m;
        Ok(rfd_count as f64 * angular * radial * radial * (track as f64 - 0.5))
    }

    /// FFD position for a region: radius `(track − 1/2) r` on the sector
    /// bisector `(sector − 1/2) θ`. Consecutive same-sector FFDs are
    /// exactly `r` apart and the innermost one sits `r/2` from the BS.
    pub fn ffd_position(&self, region: RegionId) -> PolarPoint {
        let rho = (region.track as f64 - 0.5) * self.track_width_m;
        let phi = (region.sector as f64 - 0.5) * self.sector_angle_rad;
        PolarPoint::new(rho, phi)
    }

    /// Maps a point to its region. Track bins are half-open above-inclusive
    /// (`track i` covers `rho ∈ ((i−1)r, i·r]`), sector bins half-open
    /// below-inclusive (`sector s` covers `phi ∈ [(s−1)θ, sθ)`), so every
    /// interior point lands in exactly one region.
    pub fn locate_region(&self, p: &PolarPoint) -> Result<RegionId, GeometryError> {
        if p.rho_m <= 0.0 {
            return Err(GeometryError::AtOrigin);
        }
        if p.rho_m > self.radius_m {
            return Err(GeometryError::OutsideArea {
                rho_m: p.rho_m,
                radius_m: self.radius_m,
            });
        }
        let track = ((p.rho_m / self.track_width_m).ceil() as u32)
            .max(1)
            .min(self.track_count());
        let sector = (((p.phi_rad / self.sector_angle_rad).floor() as u32) + 1).min(self.sector_count());
        Ok(RegionId { sector, track })
    }

    /// All regions in deterministic order: sector-major, then track.
    pub fn regions(&self) -> impl Iterator<Item = RegionId> + '_ {
        let tracks = self.track_count();
        (1..=self.sector_count())
            .flat_map(move |sector| (1..=tracks).map(move |track| RegionId { sector, track }))
    }

    fn check_track(&self, track: u32) -> Result<(), GeometryError> {
        let count = self.track_count();
        if track == 0 || track > count {
            return Err(GeometryError::TrackOutOfRange {
                track,
                track_count: count,
            });
        }
        Ok(())
    }
}

/// Expected node density per m² for `N` nodes uniform on a disc of radius
/// `R`: `Γ = N / (π R²)`.
pub fn rfd_density(rfd_count: u32, radius_m: f64) -> f64 {
    debug_assert!(radius_m > 0.0);
    rfd_count as f64 / (PI * radius_m * radius_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;

    fn default_spec() -> PartitionSpec {
        PartitionSpec::new(50.0, 25.0, PI).unwrap()
    }

    #[test]
    fn track_count_examples() {
        assert_eq!(default_spec().track_count(), 2);
        assert_eq!(PartitionSpec::new(50.0, 50.0, PI).unwrap().track_count(), 1);
        assert_eq!(PartitionSpec::new(50.0, 10.0, PI).unwrap().track_count(), 5);
    }

    #[test]
    fn non_integral_track_ratio_rejected() {
        assert!(matches!(
            PartitionSpec::new(50.0, 30.0, PI),
            Err(GeometryError::NonIntegralTracks(_))
        ));
    }

    #[test]
    fn sector_count_examples() {
        assert_eq!(default_spec().sector_count(), 2);
        assert_eq!(PartitionSpec::new(50.0, 25.0, 2.0 * PI / 8.0).unwrap().sector_count(), 8);
        // Eq for n_s ignores the radii entirely.
        assert_eq!(PartitionSpec::new(120.0, 30.0, PI).unwrap().sector_count(), 2);
    }

    #[test]
    fn sector_angle_domain() {
        assert!(matches!(
            PartitionSpec::from_degrees(50.0, 25.0, 270.0),
            Err(GeometryError::InvalidSectorAngle(_))
        ));
        assert!(PartitionSpec::from_degrees(50.0, 25.0, 180.0).is_ok());
    }

    #[test]
    fn region_count_examples() {
        assert_eq!(default_spec().region_count(), 4);
        let spec = PartitionSpec::new(50.0, 12.5, 2.0 * PI / 8.0).unwrap();
        assert_eq!(spec.region_count(), 32);
        // always the product of the two counts
        for spec in [default_spec(), spec] {
            assert_eq!(spec.region_count(), spec.track_count() * spec.sector_count());
        }
    }

    #[test]
    fn density_examples() {
        let d = rfd_density(100, 50.0);
        assert!((d - 0.012732395447351628).abs() < 1e-15);
        assert_eq!(rfd_density(0, 50.0), 0.0);
        // density times area recovers the count
        assert!((rfd_density(314, 10.0) * PI * 100.0 - 314.0).abs() < 1e-9);
    }

    #[test]
    fn region_area_examples() {
        let spec = default_spec();
        assert!((spec.region_area_m2(1).unwrap() - 0.5 * PI * 625.0).abs() < 1e-9);
        assert!((spec.region_area_m2(2).unwrap() - 1.5 * PI * 625.0).abs() < 1e-9);
        assert!(spec.region_area_m2(3).is_err());
        assert!(spec.region_area_m2(0).is_err());
    }

    #[test]
    fn areas_tile_the_disc() {
        for spec in [
            default_spec(),
            PartitionSpec::new(50.0, 10.0, 2.0 * PI / 8.0).unwrap(),
            PartitionSpec::new(100.0, 25.0, PI / 2.0).unwrap(),
        ] {
            let total: f64 = spec
                .regions()
                .map(|r| spec.region_area_m2(r.track).unwrap())
                .sum();
            let disc = PI * spec.radius_m() * spec.radius_m();
            assert!((total - disc).abs() / disc < 1e-9, "tiling failed: {total} vs {disc}");
        }
    }

    #[test]
    fn expected_rfds_examples() {
        let spec = default_spec();
        assert_eq!(spec.expected_rfds(100, 1).unwrap(), 12.5);
        assert_eq!(spec.expected_rfds(100, 2).unwrap(), 37.5);
    }

    #[test]
    fn expected_rfds_conserve_population() {
        for (spec, n) in [
            (default_spec(), 100u32),
            (PartitionSpec::new(50.0, 12.5, 2.0 * PI / 8.0).unwrap(), 977),
            (PartitionSpec::new(60.0, 20.0, PI / 3.0).unwrap(), 10_000),
        ] {
            let per_sector: f64 = (1..=spec.track_count())
                .map(|t| spec.expected_rfds(n, t).unwrap())
                .sum();
            let total = spec.sector_count() as f64 * per_sector;
            assert!((total - n as f64).abs() < 1e-9, "conservation failed: {total} vs {n}");
        }
    }

    #[test]
    fn expected_rfds_increase_with_track() {
        let spec = PartitionSpec::new(50.0, 10.0, PI).unwrap();
        let mut prev = 0.0;
        for t in 1..=spec.track_count() {
            let tau = spec.expected_rfds(100, t).unwrap();
            assert!(tau > prev);
            prev = tau;
        }
    }

    #[test]
    fn ffd_position_examples() {
        let spec = default_spec();
        let p = spec.ffd_position(RegionId { sector: 1, track: 1 });
        assert_eq!(p.rho_m(), 12.5);
        assert!((p.phi_rad() - PI / 2.0).abs() < 1e-12);
        let q = spec.ffd_position(RegionId { sector: 1, track: 2 });
        assert_eq!(q.rho_m(), 37.5);
        // consecutive same-sector FFDs are exactly r apart
        assert!((q.rho_m() - p.rho_m() - spec.track_width_m()).abs() < 1e-12);

        let one_track = PartitionSpec::new(50.0, 50.0, PI).unwrap();
        assert_eq!(one_track.ffd_position(RegionId { sector: 1, track: 1 }).rho_m(), 25.0);
    }

    #[test]
    fn locate_region_examples() {
        let spec = default_spec();
        let p = PolarPoint::new(30.0, 200.0_f64.to_radians());
        assert_eq!(spec.locate_region(&p).unwrap(), RegionId { sector: 2, track: 2 });
        // exact track boundary belongs to the inner track
        let boundary = PolarPoint::new(25.0, 0.1);
        assert_eq!(spec.locate_region(&boundary).unwrap().track, 1);
        // outside the disc
        let outside = PolarPoint::new(60.0, 0.1);
        assert!(matches!(
            spec.locate_region(&outside),
            Err(GeometryError::OutsideArea { .. })
        ));
        // origin has no region
        assert!(matches!(
            spec.locate_region(&PolarPoint::new(0.0, 0.0)),
            Err(GeometryError::AtOrigin)
        ));
        // phi = 0 maps to sector 1
        assert_eq!(
            spec.locate_region(&PolarPoint::new(10.0, 0.0)).unwrap().sector,
            1
        );
    }

    #[test]
    fn ffd_positions_round_trip() {
        for spec in [
            default_spec(),
            PartitionSpec::new(50.0, 12.5, 2.0 * PI / 8.0).unwrap(),
            PartitionSpec::new(50.0, 10.0, PI / 2.0).unwrap(),
        ] {
            for region in spec.regions() {
                let located = spec.locate_region(&spec.ffd_position(region)).unwrap();
                assert_eq!(located, region);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let p = PolarPoint::new(3.0, 0.0);
        assert_eq!(distance(&p, &p), 0.0);
        let q = PolarPoint::new(4.0, PI / 2.0);
        assert!((distance(&p, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_cartesian_oracle() {
        let mut rng = SimRng::new(1234);
        for _ in 0..500 {
            let p = PolarPoint::new(50.0 * rng.next_f64(), 2.0 * PI * rng.next_f64());
            let q = PolarPoint::new(50.0 * rng.next_f64(), 2.0 * PI * rng.next_f64());
            let (px, py) = (p.rho_m() * p.phi_rad().cos(), p.rho_m() * p.phi_rad().sin());
            let (qx, qy) = (q.rho_m() * q.phi_rad().cos(), q.rho_m() * q.phi_rad().sin());
            let oracle = ((px - qx).powi(2) + (py - qy).powi(2)).sqrt();
            assert!((distance(&p, &q) - oracle).abs() < 1e-12);
            assert!((distance(&p, &q) - distance(&q, &p)).abs() == 0.0);
        }
    }
}
