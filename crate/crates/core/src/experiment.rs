//! Experiment harness: config files, sweep enumeration, deterministic
//! CSV/JSON outputs and cross-model summaries.
//!
//! A sweep is a grid over (model, approach, sector count, track count,
//! seed). Each cell writes one per-round CSV and one summary JSON into
//! its own directory; a top-level manifest lists every cell with content
//! hashes. Outputs are byte-identical across reruns of the same spec:
//! no timestamps, fixed float formatting, deterministic ordering.

use crate::baselines::{
    BaselineCommon, Chiron, ChironParams, Epegasis, EpegasisElection, EpegasisParams, Pegasis,
    PegasisParams,
};
use crate::chain::{Approach, ChainVariant};
use crate::config::{ConfigError, NetworkConfig, SimFlags};
use crate::engine::{simulate, RoundStats, SimOptions, SimResult, StopAt};
use crate::geometry::PartitionSpec;
use crate::metrics;
use crate::radio::RadioParams;
use crate::rng::RNG_ALGORITHM;
use crate::scheme::SchemeProtocol;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing cell outputs under {0}")]
    MissingCells(PathBuf),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Simulated model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Chain1,
    Chain2,
    Pegasis,
    Epegasis,
    Chiron,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Chain1,
        Model::Chain2,
        Model::Pegasis,
        Model::Epegasis,
        Model::Chiron,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Model::Chain1 => "chain1",
            Model::Chain2 => "chain2",
            Model::Pegasis => "pegasis",
            Model::Epegasis => "epegasis",
            Model::Chiron => "chiron",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "chain1" => Ok(Model::Chain1),
            "chain2" => Ok(Model::Chain2),
            "pegasis" => Ok(Model::Pegasis),
            "epegasis" => Ok(Model::Epegasis),
            "chiron" => Ok(Model::Chiron),
            other => Err(ConfigError::Invalid {
                key: "experiment.models".into(),
                message: format!("unknown model '{other}'"),
            }),
        }
    }

    pub fn chain_variant(&self) -> Option<ChainVariant> {
        match self {
            Model::Chain1 => Some(ChainVariant::Chain1),
            Model::Chain2 => Some(ChainVariant::Chain2),
            _ => None,
        }
    }

    /// Only the chain scheme distinguishes one-hop from multi-hop.
    pub fn needs_approach(&self) -> bool {
        self.chain_variant().is_some()
    }
}

fn parse_approach(s: &str) -> Result<Approach, ConfigError> {
    match s {
        "one-hop" | "onehop" => Ok(Approach::OneHop),
        "multi-hop" | "multihop" => Ok(Approach::MultiHop),
        other => Err(ConfigError::Invalid {
            key: "experiment.approaches".into(),
            message: format!("unknown approach '{other}' (one-hop | multi-hop)"),
        }),
    }
}

fn parse_stop(s: &str) -> Result<StopAt, ConfigError> {
    match s {
        "fnd" => Ok(StopAt::FirstDeath),
        "lnd" => Ok(StopAt::AllRfdsDead),
        other => Err(ConfigError::Invalid {
            key: "experiment.stop_at".into(),
            message: format!("unknown stop condition '{other}' (fnd | lnd)"),
        }),
    }
}

fn parse_election(s: &str) -> Result<EpegasisElection, ConfigError> {
    match s {
        "nearest-bs" => Ok(EpegasisElection::NearestBs),
        "max-residual" => Ok(EpegasisElection::MaxResidual),
        "round-robin" => Ok(EpegasisElection::RoundRobin),
        other => Err(ConfigError::Invalid {
            key: "baselines.epegasis_election".into(),
            message: format!("unknown election '{other}'"),
        }),
    }
}

/// Resolved sweep description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub models: Vec<Model>,
    pub approaches: Vec<Approach>,
    pub sector_counts: Vec<u32>,
    pub track_counts: Vec<u32>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub max_rounds: u64,
    pub stop_at: StopAt,
    pub parallel: bool,
    pub epegasis_election: EpegasisElection,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            models: vec![Model::Chain1],
            approaches: vec![Approach::OneHop],
            sector_counts: vec![2],
            track_counts: vec![2],
            seeds: vec![1],
            output_dir: PathBuf::from("runs"),
            max_rounds: 10_000_000,
            stop_at: StopAt::FirstDeath,
            parallel: false,
            epegasis_election: EpegasisElection::NearestBs,
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub model: Model,
    pub approach: Option<Approach>,
    pub sectors: u32,
    pub tracks: u32,
    pub seed: u64,
}

impl Cell {
    pub fn name(&self) -> String {
        match self.approach {
            Some(a) => format!(
                "{}_{}_ns{}_nt{}_seed{}",
                self.model.label(),
                a.label(),
                self.sectors,
                self.tracks,
                self.seed
            ),
            None => format!("{}_seed{}", self.model.label(), self.seed),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self, base: &NetworkConfig) -> Result<(), ConfigError> {
        for (key, empty) in [
            ("experiment.models", self.models.is_empty()),
            ("experiment.approaches", self.approaches.is_empty()),
            ("experiment.sector_counts", self.sector_counts.is_empty()),
            ("experiment.track_counts", self.track_counts.is_empty()),
            ("experiment.seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(ConfigError::Invalid {
                    key: key.into(),
                    message: "sweep axis must not be empty".into(),
                });
            }
        }
        // every grid point must yield a valid partition
        for &ns in &self.sector_counts {
            for &nt in &self.track_counts {
                partition_for(base, ns, nt)?;
            }
        }
        Ok(())
    }

    /// Deterministic enumeration order: model, approach, sectors, tracks,
    /// seed. Baselines ignore the approach and partition axes.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &model in &self.models {
            if model.needs_approach() {
                for &approach in &self.approaches {
                    for &sectors in &self.sector_counts {
                        for &tracks in &self.track_counts {
                            for &seed in &self.seeds {
                                cells.push(Cell {
                                    model,
                                    approach: Some(approach),
                                    sectors,
                                    tracks,
                                    seed,
                                });
                            }
                        }
                    }
                }
            } else {
                for &seed in &self.seeds {
                    cells.push(Cell {
                        model,
                        approach: None,
                        sectors: 0,
                        tracks: 0,
                        seed,
                    });
                }
            }
        }
        cells
    }
}

/// Derives the partition for a sweep point from the base radius.
pub fn partition_for(base: &NetworkConfig, sectors: u32, tracks: u32) -> Result<PartitionSpec, ConfigError> {
    if sectors < 2 {
        return Err(ConfigError::Invalid {
            key: "experiment.sector_counts".into(),
            message: format!("sector count must be >= 2 (sector angle <= 180 deg), got {sectors}"),
        });
    }
    if tracks < 1 {
        return Err(ConfigError::Invalid {
            key: "experiment.track_counts".into(),
            message: "track count must be >= 1".into(),
        });
    }
    let radius = base.partition.radius_m();
    PartitionSpec::from_degrees(radius, radius / tracks as f64, 360.0 / sectors as f64).map_err(
        |source| ConfigError::Geometry {
            key: "experiment.sector_counts/track_counts",
            source,
        },
    )
}

// ---------------------------------------------------------------------
// config file schema
// ---------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileRoot {
    network: NetworkSection,
    radio: RadioSection,
    experiment: ExperimentSection,
    flags: FlagsFile,
    baselines: BaselinesSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct NetworkSection {
    rfd_count: u32,
    radius_m: f64,
    track_width_m: f64,
    sector_angle_deg: f64,
    rfd_battery_j: f64,
    ffd_battery_j: f64,
    rfd_death_threshold_j: f64,
    ffd_death_threshold_j: f64,
    report_bits: u64,
    token_bits: u64,
    ctl_bits: u64,
    sensing_radius_m: f64,
    tx_range_m: Option<f64>,
}

impl Default for NetworkSection {
    fn default() -> Self {
        Self {
            rfd_count: 100,
            radius_m: 50.0,
            track_width_m: 25.0,
            sector_angle_deg: 180.0,
            rfd_battery_j: 10.0,
            ffd_battery_j: 100.0,
            rfd_death_threshold_j: 0.05,
            ffd_death_threshold_j: 0.5,
            report_bits: 2000,
            token_bits: 64,
            ctl_bits: 64,
            sensing_radius_m: 10.0,
            tx_range_m: None,
        }
    }
}

/// Radio parameters in the usual nJ/pJ units.
#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RadioSection {
    e_elec_nj_per_bit: f64,
    eps_fs_pj_per_bit_m2: f64,
    eps_mp_pj_per_bit_m4: f64,
}

impl Default for RadioSection {
    fn default() -> Self {
        Self {
            e_elec_nj_per_bit: 50.0,
            eps_fs_pj_per_bit_m2: 10.0,
            eps_mp_pj_per_bit_m4: 0.0013,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ExperimentSection {
    models: Vec<String>,
    approaches: Vec<String>,
    sector_counts: Vec<u32>,
    track_counts: Vec<u32>,
    seeds: Vec<u64>,
    output_dir: String,
    max_rounds: u64,
    stop_at: String,
    parallel: bool,
    rng: String,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            models: vec!["chain1".into()],
            approaches: vec!["one-hop".into()],
            sector_counts: vec![2],
            track_counts: vec![2],
            seeds: vec![1],
            output_dir: "runs".into(),
            max_rounds: 10_000_000,
            stop_at: "fnd".into(),
            parallel: false,
            rng: RNG_ALGORITHM.into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FlagsFile {
    fusion: bool,
    setup_energy: bool,
    sleep_mode: bool,
    literal_first_improvement: bool,
    strict_range: bool,
}

impl Default for FlagsFile {
    fn default() -> Self {
        let d = SimFlags::default();
        Self {
            fusion: d.fusion,
            setup_energy: d.setup_energy,
            sleep_mode: d.sleep_mode,
            literal_first_improvement: d.literal_first_improvement,
            strict_range: d.strict_range,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BaselinesSection {
    epegasis_election: String,
}

impl Default for BaselinesSection {
    fn default() -> Self {
        Self {
            epegasis_election: "nearest-bs".into(),
        }
    }
}

/// Parses a config file (all keys optional; unknown keys rejected) into
/// the sweep spec and the base network configuration. `None` yields the
/// built-in defaults.
pub fn load_config(path: Option<&Path>) -> Result<(ExperimentSpec, NetworkConfig), ConfigError> {
    let root: FileRoot = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| ConfigError::Parse(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?
        }
        None => FileRoot::default(),
    };
    let flags = SimFlags {
        fusion: root.flags.fusion,
        setup_energy: root.flags.setup_energy,
        sleep_mode: root.flags.sleep_mode,
        literal_first_improvement: root.flags.literal_first_improvement,
        strict_range: root.flags.strict_range,
    };
    let n = &root.network;
    let partition = PartitionSpec::from_degrees(n.radius_m, n.track_width_m, n.sector_angle_deg)
        .map_err(|source| ConfigError::Geometry {
            key: "network.radius_m/track_width_m/sector_angle_deg",
            source,
        })?;
    let cfg = NetworkConfig {
        rfd_count: n.rfd_count,
        partition,
        rfd_battery_j: n.rfd_battery_j,
        ffd_battery_j: n.ffd_battery_j,
        rfd_death_threshold_j: n.rfd_death_threshold_j,
        ffd_death_threshold_j: n.ffd_death_threshold_j,
        report_bits: n.report_bits,
        token_bits: n.token_bits,
        ctl_bits: n.ctl_bits,
        sensing_radius_m: n.sensing_radius_m,
        tx_range_m: n.tx_range_m,
        radio: RadioParams {
            e_elec_j_per_bit: root.radio.e_elec_nj_per_bit * 1e-9,
            eps_fs_j_per_bit_m2: root.radio.eps_fs_pj_per_bit_m2 * 1e-12,
            eps_mp_j_per_bit_m4: root.radio.eps_mp_pj_per_bit_m4 * 1e-12,
        },
        seed: root.experiment.seeds.first().copied().unwrap_or(1),
        flags,
    };
    cfg.validate()?;
    if root.experiment.rng != RNG_ALGORITHM {
        return Err(ConfigError::Invalid {
            key: "experiment.rng".into(),
            message: format!(
                "unsupported rng '{}'; this build implements '{RNG_ALGORITHM}'",
                root.experiment.rng
            ),
        });
    }

    let spec = ExperimentSpec {
        models: root
            .experiment
            .models
            .iter()
            .map(|s| Model::parse(s))
            .collect::<Result<_, _>>()?,
        approaches: root
            .experiment
            .approaches
            .iter()
            .map(|s| parse_approach(s))
            .collect::<Result<_, _>>()?,
        sector_counts: root.experiment.sector_counts,
        track_counts: root.experiment.track_counts,
        seeds: root.experiment.seeds,
        output_dir: PathBuf::from(root.experiment.output_dir),
        max_rounds: root.experiment.max_rounds,
        stop_at: parse_stop(&root.experiment.stop_at)?,
        parallel: root.experiment.parallel,
        epegasis_election: parse_election(&root.baselines.epegasis_election)?,
    };
    spec.validate(&cfg)?;
    Ok((spec, cfg))
}

// ---------------------------------------------------------------------
// cell execution
// ---------------------------------------------------------------------

/// Formats a float with 12 significant digits, locale-free.
pub fn fmt_g12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Per-cell summary written as JSON next to the round CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: String,
    pub model: String,
    pub approach: Option<String>,
    pub sectors: u32,
    pub tracks: u32,
    pub seed: u64,
    pub rng: String,
    pub fnd_round: Option<u64>,
    pub hnd_round: Option<u64>,
    pub lnd_round: Option<u64>,
    pub rounds_simulated: u64,
    pub hit_max_rounds: bool,
    pub halted_inert: bool,
    pub first_dead: Option<FirstDeadSummary>,
    pub analytic_max_path: f64,
    pub round1_max_path: Option<u64>,
    pub setup_energy_j: f64,
    pub total_energy_j: f64,
    pub metadata: BTreeMap<String, String>,
    pub network: NetworkEcho,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FirstDeadSummary {
    pub id: u32,
    pub kind: String,
    pub sector: u32,
    pub track: u32,
    pub chain_no: u32,
    pub chain_index: u32,
}

/// Full resolved configuration echoed into every summary so no output
/// depends on ambient defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkEcho {
    pub rfd_count: u32,
    pub radius_m: f64,
    pub track_width_m: f64,
    pub sector_angle_deg: f64,
    pub rfd_battery_j: f64,
    pub ffd_battery_j: f64,
    pub rfd_death_threshold_j: f64,
    pub ffd_death_threshold_j: f64,
    pub report_bits: u64,
    pub token_bits: u64,
    pub ctl_bits: u64,
    pub e_elec_j_per_bit: f64,
    pub eps_fs_j_per_bit_m2: f64,
    pub eps_mp_j_per_bit_m4: f64,
    pub fusion: bool,
    pub setup_energy: bool,
    pub sleep_mode: bool,
    pub literal_first_improvement: bool,
}

impl NetworkEcho {
    fn from(cfg: &NetworkConfig) -> Self {
        Self {
            rfd_count: cfg.rfd_count,
            radius_m: cfg.partition.radius_m(),
            track_width_m: cfg.partition.track_width_m(),
            sector_angle_deg: cfg.partition.sector_angle_rad().to_degrees(),
            rfd_battery_j: cfg.rfd_battery_j,
            ffd_battery_j: cfg.ffd_battery_j,
            rfd_death_threshold_j: cfg.rfd_death_threshold_j,
            ffd_death_threshold_j: cfg.ffd_death_threshold_j,
            report_bits: cfg.report_bits,
            token_bits: cfg.token_bits,
            ctl_bits: cfg.ctl_bits,
            e_elec_j_per_bit: cfg.radio.e_elec_j_per_bit,
            eps_fs_j_per_bit_m2: cfg.radio.eps_fs_j_per_bit_m2,
            eps_mp_j_per_bit_m4: cfg.radio.eps_mp_j_per_bit_m4,
            fusion: cfg.flags.fusion,
            setup_energy: cfg.flags.setup_energy,
            sleep_mode: cfg.flags.sleep_mode,
            literal_first_improvement: cfg.flags.literal_first_improvement,
        }
    }
}

pub const CSV_HEADER: &str =
    "round,alive_rfds,alive_ffds,energy_spent_j,min_rfd_residual_j,min_ffd_residual_j,max_path_hops,deaths";

fn csv_line(s: &RoundStats) -> String {
    let deaths = s
        .deaths
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("|");
    format!(
        "{},{},{},{},{},{},{},{}",
        s.round,
        s.alive_rfds,
        s.alive_ffds,
        fmt_g12(s.energy_spent_j),
        fmt_g12(s.min_rfd_residual_j),
        fmt_g12(s.min_ffd_residual_j),
        s.max_path_hops,
        deaths
    )
}

/// Builds and runs one cell, returning the simulation result, the
/// analytic max-path for the cell's parameters and the effective config.
pub fn run_cell(
    cell: &Cell,
    base: &NetworkConfig,
    spec: &ExperimentSpec,
) -> Result<(SimResult, f64, NetworkConfig), ExperimentError> {
    let opts = SimOptions {
        max_rounds: spec.max_rounds,
        stop: spec.stop_at,
        record_rounds: true,
    };
    match cell.model.chain_variant() {
        Some(variant) => {
            let cfg = NetworkConfig {
                partition: partition_for(base, cell.sectors, cell.tracks)?,
                seed: cell.seed,
                ..base.clone()
            };
            let approach = cell.approach.expect("chain cells carry an approach");
            let (mut proto, mut world) = SchemeProtocol::new(cfg.clone(), variant, approach)?;
            let result = simulate(&mut proto, &mut world, opts);
            let analytic = metrics::analytic_max_path(variant, approach, &cfg.partition, cfg.rfd_count);
            Ok((result, analytic, cfg))
        }
        None => {
            let cfg = NetworkConfig {
                seed: cell.seed,
                ..base.clone()
            };
            let common = BaselineCommon::from_config(&cfg);
            let (result, analytic) = match cell.model {
                Model::Pegasis => {
                    let params = PegasisParams {
                        node_count: cfg.rfd_count,
                        node_battery_j: cfg.rfd_battery_j,
                        death_threshold_j: cfg.rfd_death_threshold_j,
                        ..PegasisParams::default()
                    };
                    let (mut proto, mut world) = Pegasis::new(params, common, cfg.radio);
                    (
                        simulate(&mut proto, &mut world, opts),
                        metrics::pegasis_max_path(params.node_count),
                    )
                }
                Model::Epegasis => {
                    let params = EpegasisParams {
                        node_count: cfg.rfd_count,
                        node_battery_j: cfg.rfd_battery_j,
                        death_threshold_j: cfg.rfd_death_threshold_j,
                        ..EpegasisParams::default()
                    };
                    let (mut proto, mut world) =
                        Epegasis::new(params, common, spec.epegasis_election, cfg.radio);
                    (
                        simulate(&mut proto, &mut world, opts),
                        metrics::epegasis_max_path(&params),
                    )
                }
                Model::Chiron => {
                    let params = ChironParams {
                        node_count: cfg.rfd_count,
                        node_battery_j: cfg.rfd_battery_j,
                        death_threshold_j: cfg.rfd_death_threshold_j,
                        ..ChironParams::default()
                    };
                    let (mut proto, mut world) = Chiron::new(params, common, cfg.radio);
                    (
                        simulate(&mut proto, &mut world, opts),
                        metrics::chiron_max_path(&params),
                    )
                }
                _ => unreachable!("chain models handled above"),
            };
            Ok((result, analytic, cfg))
        }
    }
}

fn cell_summary(cell: &Cell, result: &SimResult, analytic: f64, cfg: &NetworkConfig) -> CellSummary {
    CellSummary {
        cell: cell.name(),
        model: cell.model.label().to_string(),
        approach: cell.approach.map(|a| a.label().to_string()),
        sectors: cell.sectors,
        tracks: cell.tracks,
        seed: cell.seed,
        rng: RNG_ALGORITHM.to_string(),
        fnd_round: result.fnd_round,
        hnd_round: result.hnd_round,
        lnd_round: result.lnd_round,
        rounds_simulated: result.rounds_simulated,
        hit_max_rounds: result.hit_max_rounds,
        halted_inert: result.halted_inert,
        first_dead: result.first_dead.as_ref().map(|f| FirstDeadSummary {
            id: f.id.0,
            kind: match f.kind {
                crate::node::NodeKind::Ffd => "ffd".to_string(),
                crate::node::NodeKind::Rfd => "rfd".to_string(),
            },
            sector: f.location.map_or(0, |l| l.sector),
            track: f.location.map_or(0, |l| l.track),
            chain_no: f.location.map_or(0, |l| l.chain_no),
            chain_index: f.location.map_or(0, |l| l.chain_index),
        }),
        analytic_max_path: analytic,
        round1_max_path: result.round_stats.first().map(|s| s.max_path_hops),
        setup_energy_j: result.setup_energy_j,
        total_energy_j: result.total_energy_j,
        metadata: result.metadata.iter().cloned().collect(),
        network: NetworkEcho::from(cfg),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestCell {
    pub name: String,
    pub model: String,
    pub approach: Option<String>,
    pub sectors: u32,
    pub tracks: u32,
    pub seed: u64,
    pub fnd_round: Option<u64>,
    pub csv_sha256: String,
    pub summary_sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub stop_at: String,
    pub cells: Vec<ManifestCell>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the whole sweep, writing one directory per cell plus the
/// manifest. Cell directories are staged under a `.tmp` suffix and
/// renamed into place only when complete.
pub fn run_experiment(spec: &ExperimentSpec, base: &NetworkConfig) -> Result<Manifest, ExperimentError> {
    let cells = spec.cells();
    let outputs: Vec<Result<(Cell, CellSummary, String, String), ExperimentError>> = if spec.parallel {
        cells
            .par_iter()
            .map(|cell| execute_cell(cell, base, spec))
            .collect()
    } else {
        cells.iter().map(|cell| execute_cell(cell, base, spec)).collect()
    };

    let cells_dir = spec.output_dir.join("cells");
    fs::create_dir_all(&cells_dir).map_err(io_err(&cells_dir))?;

    let mut manifest_cells = Vec::new();
    for output in outputs {
        let (cell, summary, csv, summary_json) = output?;
        let final_dir = cells_dir.join(cell.name());
        let tmp_dir = cells_dir.join(format!("{}.tmp", cell.name()));
        if tmp_dir.exists() {
            fs::remove_dir_all(&tmp_dir).map_err(io_err(&tmp_dir))?;
        }
        let write = || -> Result<(), ExperimentError> {
            fs::create_dir_all(&tmp_dir).map_err(io_err(&tmp_dir))?;
            let csv_path = tmp_dir.join("rounds.csv");
            let mut f = fs::File::create(&csv_path).map_err(io_err(&csv_path))?;
            f.write_all(csv.as_bytes()).map_err(io_err(&csv_path))?;
            let sum_path = tmp_dir.join("summary.json");
            let mut f = fs::File::create(&sum_path).map_err(io_err(&sum_path))?;
            f.write_all(summary_json.as_bytes()).map_err(io_err(&sum_path))?;
            Ok(())
        };
        if let Err(e) = write() {
            let _ = fs::remove_dir_all(&tmp_dir);
            return Err(e);
        }
        if final_dir.exists() {
            fs::remove_dir_all(&final_dir).map_err(io_err(&final_dir))?;
        }
        fs::rename(&tmp_dir, &final_dir).map_err(io_err(&final_dir))?;

        manifest_cells.push(ManifestCell {
            name: cell.name(),
            model: cell.model.label().to_string(),
            approach: cell.approach.map(|a| a.label().to_string()),
            sectors: cell.sectors,
            tracks: cell.tracks,
            seed: cell.seed,
            fnd_round: summary.fnd_round,
            csv_sha256: sha256_hex(csv.as_bytes()),
            summary_sha256: sha256_hex(summary_json.as_bytes()),
        });
    }

    let manifest = Manifest {
        tool: "wsnsim".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        rng: RNG_ALGORITHM.to_string(),
        stop_at: match spec.stop_at {
            StopAt::FirstDeath => "fnd".to_string(),
            StopAt::AllRfdsDead => "lnd".to_string(),
        },
        cells: manifest_cells,
    };
    let manifest_path = spec.output_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&manifest_path, text.as_bytes()).map_err(io_err(&manifest_path))?;
    Ok(manifest)
}

fn execute_cell(
    cell: &Cell,
    base: &NetworkConfig,
    spec: &ExperimentSpec,
) -> Result<(Cell, CellSummary, String, String), ExperimentError> {
    let (result, analytic, cfg) = run_cell(cell, base, spec)?;
    let summary = cell_summary(cell, &result, analytic, &cfg);
    let mut csv = String::with_capacity(result.round_stats.len() * 96 + 128);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for s in &result.round_stats {
        csv.push_str(&csv_line(s));
        csv.push('\n');
    }
    let summary_json = serde_json::to_string_pretty(&summary)?;
    Ok((*cell, summary, csv, summary_json))
}

// ---------------------------------------------------------------------
// summaries
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub model: String,
    pub approach: Option<String>,
    pub sectors: u32,
    pub tracks: u32,
    pub cells: usize,
    pub median_fnd: Option<f64>,
    pub analytic_max_path: f64,
    pub mean_round1_max_path: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
    pub verdicts: Vec<Verdict>,
}

fn median(values: &mut Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

/// Loads every cell summary under `dir` (as written by `run_experiment`)
/// and produces per-group medians plus the ordering verdicts, when all
/// models needed for a verdict are present.
pub fn summarize(dir: &Path) -> Result<SummaryTable, ExperimentError> {
    let manifest_path = dir.join("manifest.json");
    let text = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    if manifest.cells.is_empty() {
        return Err(ExperimentError::MissingCells(dir.to_path_buf()));
    }

    let mut summaries = Vec::new();
    for cell in &manifest.cells {
        let path = dir.join("cells").join(&cell.name).join("summary.json");
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        summaries.push(serde_json::from_str::<CellSummary>(&text)?);
    }

    // group rows by (model, approach, sectors, tracks)
    let mut groups: BTreeMap<(String, Option<String>, u32, u32), Vec<&CellSummary>> = BTreeMap::new();
    for s in &summaries {
        groups
            .entry((s.model.clone(), s.approach.clone(), s.sectors, s.tracks))
            .or_default()
            .push(s);
    }
    let rows: Vec<SummaryRow> = groups
        .iter()
        .map(|((model, approach, sectors, tracks), cells)| {
            let mut fnds: Vec<f64> = cells.iter().filter_map(|c| c.fnd_round.map(|f| f as f64)).collect();
            let measured: Vec<f64> = cells
                .iter()
                .filter_map(|c| c.round1_max_path.map(|m| m as f64))
                .collect();
            SummaryRow {
                model: model.clone(),
                approach: approach.clone(),
                sectors: *sectors,
                tracks: *tracks,
                cells: cells.len(),
                median_fnd: median(&mut fnds),
                analytic_max_path: cells[0].analytic_max_path,
                mean_round1_max_path: if measured.is_empty() {
                    None
                } else {
                    Some(measured.iter().sum::<f64>() / measured.len() as f64)
                },
            }
        })
        .collect();

    // pooled per-model FND medians for the lifetime verdict
    let mut per_model: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for s in &summaries {
        if let Some(f) = s.fnd_round {
            per_model.entry(s.model.clone()).or_default().push(f as f64);
        }
    }
    let med = |name: &str| -> Option<f64> { per_model.get(name).cloned().as_mut().and_then(median) };

    let mut verdicts = Vec::new();
    if summaries.len() > 1 {
        if let (Some(c2), Some(ch), Some(c1), Some(pg), Some(ep)) = (
            med("chain2"),
            med("chiron"),
            med("chain1"),
            med("pegasis"),
            med("epegasis"),
        ) {
            let pass = c2 > ch && ch > c1 && c1 > pg.max(ep);
            verdicts.push(Verdict {
                claim: "lifetime: chain2 > chiron > chain1 > max(pegasis, epegasis)".to_string(),
                pass,
                detail: format!(
                    "median FND: chain2={c2}, chiron={ch}, chain1={c1}, pegasis={pg}, epegasis={ep}"
                ),
            });
        }
        let analytic = |name: &str| -> Option<f64> {
            rows.iter()
                .filter(|r| r.model == name)
                .map(|r| r.analytic_max_path)
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        };
        if let (Some(c2), Some(c1), Some(ch), Some(ep), Some(pg)) = (
            analytic("chain2"),
            analytic("chain1"),
            analytic("chiron"),
            analytic("epegasis"),
            analytic("pegasis"),
        ) {
            let pass = c2 < c1 && c1 < ch && ch < ep && ep < pg;
            verdicts.push(Verdict {
                claim: "delay: chain2 < chain1 < chiron < epegasis < pegasis".to_string(),
                pass,
                detail: format!(
                    "analytic max-path: chain2={c2}, chain1={c1}, chiron={ch}, epegasis={ep}, pegasis={pg}"
                ),
            });
        }
    }

    Ok(SummaryTable { rows, verdicts })
}

impl SummaryTable {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:<10} {:>3} {:>3} {:>6} {:>12} {:>14} {:>14}\n",
            "model", "approach", "ns", "nt", "cells", "median_fnd", "analytic_path", "mean_path_r1"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<10} {:<10} {:>3} {:>3} {:>6} {:>12} {:>14} {:>14}\n",
                r.model,
                r.approach.as_deref().unwrap_or("-"),
                r.sectors,
                r.tracks,
                r.cells,
                r.median_fnd.map_or("-".to_string(), |m| format!("{m}")),
                format!("{}", r.analytic_max_path),
                r.mean_round1_max_path
                    .map_or("-".to_string(), |m| format!("{m:.1}")),
            ));
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "verdict [{}] {} ({})\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.claim,
                v.detail
            ));
        }
        out
    }
}
