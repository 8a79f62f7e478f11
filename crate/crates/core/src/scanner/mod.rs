//! Discrete-shift approximation experiments on compact grids.

mod engine;
pub mod family;
pub mod grid;
pub mod metric;
pub mod scan;
pub mod target;

pub use engine::BLOCK;
pub use family::{BlockValues, FamilySpec, GridFamily, PreparedFamily};
pub use grid::{CompactGrid, Shape};

pub use metric::{exhaustion, lemma9_check, metric_rho, Lemma9Config, Region};
pub use scan::{best_shift, default_checkpoints, density_series, scan, scan_with, CHUNK_BLOCKS, sup_distance, DensityPoint, HitRow, ScanConfig, ScanResult};
pub use target::{poly_roots, target_admissible, Role, TargetSpec};
