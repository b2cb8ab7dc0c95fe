//! Finite-energy scans over cylinder counts and the analytic bounds that
//! transfer energy from a source measure to its coded image.

mod analytic;
mod checks;
mod scan;

pub use crate::series::{zeta, ZetaValue};
pub use analytic::{analytic_m, analytic_n, corollary_parameter_check, CorollaryCheck, NBound};
pub use checks::{mixture_energy_check, stationary_mean_energy_check, MixtureCheck, StationaryEnergyCheck};
pub use scan::{empirical_energy_k, gfe_energy_k, EnergyCertificate, EnergyScan, Flavor, ScanOptions, DEFAULT_MIN_SUPPORT};
