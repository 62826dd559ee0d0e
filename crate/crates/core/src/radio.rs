//! First-order radio energy model and battery bookkeeping.
//!
//! Transmitting `k` bits over `d` meters costs
//! `k·E_elec + k·ε_fs·d²` below the crossover distance `d0 = √(ε_fs/ε_mp)`
//! and `k·E_elec + k·ε_mp·d⁴` at or above it; receiving costs `k·E_elec`.
//! Idle listening, sleeping and computation are free.

use serde::{Deserialize, Serialize};

/// Radio energy parameters, in joules per bit (and per m²/m⁴ for the
/// amplifier terms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub e_elec_j_per_bit: f64,
    pub eps_fs_j_per_bit_m2: f64,
    pub eps_mp_j_per_bit_m4: f64,
}

impl Default for RadioParams {
    /// E_elec = 50 nJ/bit, ε_fs = 10 pJ/bit/m², ε_mp = 0.0013 pJ/bit/m⁴.
    fn default() -> Self {
        Self {
            e_elec_j_per_bit: 50e-9,
            eps_fs_j_per_bit_m2: 10e-12,
            eps_mp_j_per_bit_m4: 0.0013e-12,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("e_elec", self.e_elec_j_per_bit),
            ("eps_fs", self.eps_fs_j_per_bit_m2),
            ("eps_mp", self.eps_mp_j_per_bit_m4),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("radio parameter {name} must be strictly positive, got {v}"));
            }
        }
        Ok(())
    }

    /// Crossover distance `d0 = sqrt(ε_fs / ε_mp)` between the free-space
    /// and multipath amplifier regimes (≈ 87.7 m with default parameters).
    pub fn crossover_distance_m(&self) -> f64 {
        (self.eps_fs_j_per_bit_m2 / self.eps_mp_j_per_bit_m4).sqrt()
    }

    /// Energy to transmit `bits` over `distance_m`.
    pub fn tx_energy_j(&self, bits: u64, distance_m: f64) -> f64 {
        debug_assert!(distance_m >= 0.0);
        let k = bits as f64;
        let amp = if distance_m < self.crossover_distance_m() {
            self.eps_fs_j_per_bit_m2 * distance_m * distance_m
        } else {
            let d2 = distance_m * distance_m;
            self.eps_mp_j_per_bit_m4 * d2 * d2
        };
        k * self.e_elec_j_per_bit + k * amp
    }

    /// Energy to receive `bits` (electronics only).
    pub fn rx_energy_j(&self, bits: u64) -> f64 {
        bits as f64 * self.e_elec_j_per_bit
    }
}

/// Node battery. A node is alive while its residual energy stays at or
/// above the death threshold; residuals never go below zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    capacity_j: f64,
    residual_j: f64,
    death_threshold_j: f64,
}

impl Battery {
    pub fn new(capacity_j: f64, death_threshold_j: f64) -> Self {
        debug_assert!(capacity_j >= 0.0 && death_threshold_j >= 0.0);
        Self {
            capacity_j,
            residual_j: capacity_j,
            death_threshold_j,
        }
    }

    pub fn capacity_j(&self) -> f64 {
        self.capacity_j
    }

    pub fn residual_j(&self) -> f64 {
        self.residual_j
    }

    pub fn death_threshold_j(&self) -> f64 {
        self.death_threshold_j
    }

    pub fn is_alive(&self) -> bool {
        self.residual_j >= self.death_threshold_j
    }

    /// Drains `amount_j`, flooring the residual at zero. Returns the energy
    /// actually removed. Negative amounts are a caller bug.
    pub fn drain(&mut self, amount_j: f64) -> f64 {
        assert!(amount_j >= 0.0, "drain amount must be non-negative, got {amount_j}");
        let before = self.residual_j;
        self.residual_j = (self.residual_j - amount_j).max(0.0);
        before - self.residual_j
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_distance_examples() {
        let params = RadioParams::default();
        let d0 = params.crossover_distance_m();
        assert!((d0 - 87.7058).abs() < 1e-3);
        assert!((d0 - (10e-12f64 / 0.0013e-12).sqrt()).abs() < 1e-12);

        let unity = RadioParams {
            eps_fs_j_per_bit_m2: 2e-12,
            eps_mp_j_per_bit_m4: 2e-12,
            ..RadioParams::default()
        };
        assert_eq!(unity.crossover_distance_m(), 1.0);
    }

    #[test]
    fn tx_energy_examples() {
        let params = RadioParams::default();
        let free = params.tx_energy_j(2000, 12.5);
        assert!((free - 1.03125e-4).abs() / 1.03125e-4 < 1e-12);
        let multi = params.tx_energy_j(2000, 100.0);
        assert!((multi - 3.6e-4).abs() / 3.6e-4 < 1e-12);
    }

    #[test]
    fn branch_continuity_at_crossover() {
        let params = RadioParams::default();
        let d0 = params.crossover_distance_m();
        let k = 2000.0;
        let free = k * params.e_elec_j_per_bit + k * params.eps_fs_j_per_bit_m2 * d0 * d0;
        let multi = k * params.e_elec_j_per_bit + k * params.eps_mp_j_per_bit_m4 * d0.powi(4);
        assert!((free - multi).abs() / free < 1e-12);
    }

    #[test]
    fn rx_energy_examples() {
        let params = RadioParams::default();
        assert!((params.rx_energy_j(2000) - 1.0e-4).abs() / 1.0e-4 < 1e-12);
        assert_eq!(params.rx_energy_j(0), 0.0);
        // receive cost equals transmit cost at zero distance
        for k in [1u64, 64, 2000, 150_000] {
            assert_eq!(params.rx_energy_j(k), params.tx_energy_j(k, 0.0));
        }
    }

    #[test]
    fn tx_energy_monotone_and_linear() {
        let params = RadioParams::default();
        let mut prev = 0.0;
        for d in 0..200 {
            let e = params.tx_energy_j(2000, d as f64);
            assert!(e >= prev, "tx energy decreased at d={d}");
            assert!(e >= params.rx_energy_j(2000));
            prev = e;
        }
        for d in [0.0, 10.0, 87.0, 88.0, 150.0] {
            let whole = params.tx_energy_j(3000, d);
            let split = params.tx_energy_j(1000, d) + params.tx_energy_j(2000, d);
            assert!((whole - split).abs() / whole < 1e-15);
        }
    }

    #[test]
    fn drain_examples() {
        let mut b = Battery::new(10.0, 0.05);
        let applied = b.drain(1.052e-4);
        // the residual subtraction rounds near 10 J, so the applied
        // amount carries up to ~1 ulp(10) of absolute noise
        assert!((applied - 1.052e-4).abs() < 1e-12);
        assert!((b.residual_j() - 9.9998948).abs() < 1e-12);
        assert!(b.is_alive());

        let mut edge = Battery::new(0.05, 0.05);
        assert!(edge.is_alive());
        edge.drain(1e-9);
        assert!(!edge.is_alive());

        let mut idle = Battery::new(1.0, 0.1);
        idle.drain(0.0);
        assert_eq!(idle.residual_j(), 1.0);
    }

    #[test]
    fn drain_floors_at_zero() {
        let mut b = Battery::new(0.5, 0.05);
        let applied = b.drain(2.0);
        assert_eq!(applied, 0.5);
        assert_eq!(b.residual_j(), 0.0);
        assert!(!b.is_alive());
    }
}
