use rayon::prelude::*;
use serde::Serialize;

use super::scan::{empirical_energy_k, EnergyCertificate, EnergyScan, ScanOptions};
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::measures::{sample_coded, CylinderCounts, LengthLaw, PhaseSampler};
use crate::processes::SourceModel;
use crate::rng::{domain, stream};

/// Excess over the shared bound, in standard errors, tolerated as noise.
pub const NOISE_Z: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureCheck {
    pub k: f64,
    pub c: f64,
    pub k_hat: f64,
    /// Largest excess of a mixture ratio over `k`, in standard errors.
    pub z: f64,
    pub holds: bool,
}

/// Components sharing a `(K, c)` bound pass it to any mixture of them; the
/// mixture scan must respect it up to sampling noise.
pub fn mixture_energy_check<S>(components: &[EnergyCertificate], mixture: &EnergyScan<S>) -> Result<MixtureCheck> {
    let first = components.first().ok_or_else(|| Error::Domain("no component certificates".into()))?;
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
    if components.iter().any(|cert| !same(cert.k, first.k) || !same(cert.c, first.c)) || !same(mixture.c, first.c) {
        return Err(Error::HeterogeneousCertificates);
    }
    let z = mixture.violation_z(first.k);
    Ok(MixtureCheck { k: first.k, c: first.c, k_hat: mixture.k_hat, z, holds: z <= NOISE_Z })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryEnergyCheck {
    /// `K̂` of cylinders of `ν` at the origin.
    pub nu_k: f64,
    pub nu_stderr: f64,
    /// `K̂` of phase-randomized windows, i.e. of `ν̄`.
    pub rho_k: f64,
    pub rho_stderr: f64,
    /// Excess of `rho_k` over `nu_k` in joint standard errors; zero if none.
    pub z: f64,
    pub holds: bool,
}

/// Scans `trials` coded windows of `ν` and of `ν̄`, drawn from the same
/// streams, and checks that `ν̄` does not exhibit a larger `K̂`.
#[allow(clippy::too_many_arguments)]
pub fn stationary_mean_energy_check<M, C>(
    model: &M,
    code: &C,
    law: &LengthLaw,
    c: f64,
    options: ScanOptions,
    trials: usize,
    seed: u64,
) -> Result<StationaryEnergyCheck>
where
    M: SourceModel,
    C: Code<Source = M::Symbol> + Sync,
{
    let depth = options.depth;
    let sampler = PhaseSampler::new(model, code, law);
    let windows: Vec<(Vec<u8>, Vec<u8>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut hidden = model.realize(&mut rng);
            let nu = sample_coded(model, code, &mut hidden, depth, &mut rng)?;
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut hidden = model.realize(&mut rng);
            let rho = sampler.sample(&mut hidden, 0, depth, &mut rng)?.coded.right().to_vec();
            Ok((nu, rho))
        })
        .collect::<Result<_>>()?;
    let mut nu_counts = CylinderCounts::new(depth);
    let mut rho_counts = CylinderCounts::new(depth);
    for (nu, rho) in &windows {
        nu_counts.add_prefixes(&nu[..depth]);
        rho_counts.add_prefixes(rho);
    }
    let nu = empirical_energy_k(&nu_counts, c, options)?;
    let rho = empirical_energy_k(&rho_counts, c, options)?;
    let excess = rho.k_hat - nu.k_hat;
    let z = if excess <= 0.0 {
        0.0
    } else {
        let se = nu.stderr.hypot(rho.stderr);
        if se > 0.0 { excess / se } else { f64::INFINITY }
    };
    Ok(StationaryEnergyCheck {
        nu_k: nu.k_hat,
        nu_stderr: nu.stderr,
        rho_k: rho.k_hat,
        rho_stderr: rho.stderr,
        z,
        holds: z <= NOISE_Z,
    })
}
