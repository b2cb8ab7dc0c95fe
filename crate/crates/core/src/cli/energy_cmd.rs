use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{require, Check, CliError, CliResult, Context, RunManifest};
use crate::codes::{ConjCode, Fact};
use crate::energy::{
    analytic_m, analytic_n, corollary_parameter_check, empirical_energy_k, gfe_energy_k, zeta, EnergyCertificate,
    ScanOptions,
};
use crate::measures::{CylinderCounts, HasLengthLaw, PhaseSampler};
use crate::processes::{SantaFeModel, SourceModel};
use crate::rng::{domain, stream};
use crate::strings::Alphabet;

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct EnergyArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Payload length of the comma code.
    #[arg(long)]
    pub payload_len: Option<u32>,
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Stationary-mean samples per scan.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shallow and deep scan depths.
    #[arg(long, value_delimiter = ',')]
    pub depths: Option<Vec<usize>>,
    #[arg(long)]
    pub min_support: Option<u64>,
}

/// `β` above which `ζ(1/β) > 4`, to four decimals.
const BETA_AT_ZETA_FOUR: f64 = 0.7728;
const THRESHOLD_TOL: f64 = 0.01;
const CLOSED_FORM_TOL: f64 = 1e-10;
/// Largest allowed `K̂(deep)/K̂(shallow)` for a finite-energy process.
const STABILITY_RATIO: f64 = 2.0;
const NOISE_Z: f64 = 5.0;

/// The `α` at which `ζ(α) = level`, by bisection.
pub(crate) fn zeta_crossing(level: f64) -> CliResult<f64> {
    let (mut lo, mut hi) = (1.0 + 1e-9, 64.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if zeta(mid, 1e-13)?.value > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn weight(l: i32, payload_len: u32) -> f64 {
    2f64.powi(l - (payload_len as i32 + 1)).max(1.0)
}

/// Term-by-term census sum `Σ_l max{1, 2^{l−(A+1)}} p^l`.
fn census_direct(payload_len: u32, p: f64) -> f64 {
    let mut sum = 0.0;
    for l in 0..10_000 {
        let t = weight(l, payload_len) * p.powi(l);
        sum += t;
        if l > payload_len as i32 + 1 && t < 1e-18 {
            break;
        }
    }
    sum
}

fn n_direct(alpha: f64, payload_len: u32, c2: f64) -> (f64, f64) {
    let decay = 2f64.powf(-alpha);
    let numerator = census_direct(payload_len, decay / c2) / decay;
    let mut denominator = 0.0;
    for l in payload_len as i32 + 1..10_000 {
        let t = 2f64.powi(l - (payload_len as i32 + 1)) * decay.powi(l);
        denominator += t;
        if t < 1e-300 || t < denominator * 1e-18 {
            break;
        }
    }
    (numerator, denominator)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Prefix counts of `trials` stationary-mean windows of length `depth`.
fn coded_counts(model: &SantaFeModel, code: &ConjCode, depth: usize, trials: usize, seed: u64) -> CliResult<CylinderCounts<u8>> {
    let law = model.length_law(code)?;
    let sampler = PhaseSampler::new(model, code, &law);
    let windows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut z = model.realize(&mut rng);
            Ok(sampler.sample(&mut z, 0, depth, &mut rng)?.coded.right().to_vec())
        })
        .collect::<CliResult<Vec<Vec<u8>>>>()?;
    let mut counts = CylinderCounts::with_alphabet(depth, Alphabet::TERNARY);
    windows.iter().for_each(|w| counts.add_prefixes(w));
    Ok(counts)
}

fn source_counts(model: &SantaFeModel, depth: usize, trials: usize, seed: u64) -> CylinderCounts<Fact> {
    let windows: Vec<Vec<Fact>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::REALIZATION, t as u64);
            let mut z = model.realize(&mut rng);
            model.draw_n(&mut z, depth, &mut rng)
        })
        .collect();
    let mut counts = CylinderCounts::new(depth);
    windows.iter().for_each(|w| counts.add_prefixes(w));
    counts
}

/// Settings shared by the `energy` and `conj-suite` commands.
pub(crate) struct EnergyPlan {
    pub alpha: f64,
    pub payload_len: u32,
    pub k_max: Option<u64>,
    pub trials: usize,
    pub seed: u64,
    pub shallow: usize,
    pub deep: usize,
    pub min_support: u64,
}

/// Every energy check, with the certificate of the deep coded scan when
/// the parameters are admissible.
pub(crate) fn energy_checks(plan: &EnergyPlan) -> CliResult<(Vec<Check>, Option<EnergyCertificate>)> {
    let EnergyPlan { alpha, payload_len: a, trials, seed, shallow, deep, min_support, .. } = *plan;
    if shallow == 0 || deep <= shallow {
        return Err(CliError::Usage("need 0 < shallow depth < deep depth".into()));
    }
    let mut checks = Vec::new();
    let cor = corollary_parameter_check(alpha, a)?;
    let crossing = zeta_crossing(cor.threshold)?;
    let mut check = Check::new("corollary")
        .metric("zeta", cor.zeta)
        .metric("threshold", cor.threshold)
        .metric("admissible", cor.admissible)
        .metric("threshold_alpha", crossing)
        .metric("c", cor.c)
        .metric("c2", cor.c2)
        .metric("k_tilde", cor.k_tilde);
    let mut consistent = cor.admissible == (cor.zeta > cor.threshold) && cor.admissible == (alpha < crossing);
    if a == 1 {
        let remark = 1.0 / BETA_AT_ZETA_FOUR;
        check = check.metric("remarked_alpha", remark);
        consistent &= (crossing - remark).abs() <= THRESHOLD_TOL;
    }
    checks.push(check.pass(consistent));

    let code = ConjCode::new(a);
    let (p, c2) = match (cor.c, cor.c2) {
        (Some(c), Some(c2)) => (c, c2),
        _ => (0.4, 0.5 * (2f64.powf(1.0 - alpha) + 1.0)),
    };
    let m = analytic_m(&code, p)?;
    let n = analytic_n(alpha, a, c2)?;
    let (num, den) = n_direct(alpha, a, c2);
    let errs = [rel_err(m, census_direct(a, p)), rel_err(n.numerator, num), rel_err(n.denominator, den)];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    checks.push(
        Check::new("closed_forms")
            .metric("p", p)
            .metric("c2", c2)
            .metric("m", m)
            .metric("n", n.value)
            .metric("max_rel_err", worst)
            .pass(worst <= CLOSED_FORM_TOL),
    );

    let (Some(c), Some(c2)) = (cor.c, cor.c2) else {
        return Ok((checks, None));
    };
    let model = super::ModelChoice::santa_fe(alpha, plan.k_max)?;
    let options = |d| ScanOptions::new(d).min_support(min_support);

    let counts = coded_counts(&model, &code, deep, trials, seed)?;
    let k_shallow = empirical_energy_k(&counts, c2, options(shallow))?;
    let k_deep = empirical_energy_k(&counts, c2, options(deep))?;
    let ratio = k_deep.k_hat / k_shallow.k_hat;
    checks.push(
        Check::new("coded_stability")
            .metric("c2", c2)
            .metric("k_shallow", k_shallow.k_hat)
            .metric("k_deep", k_deep.k_hat)
            .metric("ratio", ratio)
            .metric("pairs", k_deep.pairs_scanned())
            .pass(ratio < STABILITY_RATIO),
    );
    let cert = k_deep.certificate(Some(&format!("conj:{a}")));
    cert.check_kraft_floor(3, false)?;

    let mut constant = CylinderCounts::with_alphabet(deep, Alphabet::BINARY);
    let zeros = vec![0u8; deep];
    (0..trials.max(min_support as usize)).for_each(|_| constant.add_prefixes(&zeros));
    let c_shallow = empirical_energy_k(&constant, 0.5, options(shallow))?.k_hat;
    let c_deep = empirical_energy_k(&constant, 0.5, options(deep))?.k_hat;
    let floor = |d: usize| 2f64.powf(d as f64 / 2.0);
    checks.push(
        Check::new("negative_control")
            .metric("k_shallow", c_shallow)
            .metric("k_deep", c_deep)
            .pass(c_shallow >= floor(shallow) && c_deep >= floor(deep)),
    );

    let src_depth = 3;
    let src = source_counts(&model, src_depth, trials, seed);
    let gfe = gfe_energy_k(&src, &code, c, options(src_depth))?;
    let z = gfe.violation_z(1.0);
    checks.push(
        Check::new("source_coded_energy")
            .metric("c", c)
            .metric("k_hat", gfe.k_hat)
            .metric("violation_z", z)
            .pass(z <= NOISE_Z),
    );
    Ok((checks, Some(cert)))
}

pub(crate) fn write_certificate(ctx: &Context, manifest: &mut RunManifest, cert: &EnergyCertificate) -> CliResult<()> {
    ctx.write("certificate.json", &(serde_json::to_string_pretty(cert).expect("serializes") + "\n"))?;
    manifest.output("certificate.json");
    Ok(())
}

pub fn energy(args: &EnergyArgs, ctx: &Context) -> CliResult<RunManifest> {
    let depths = args.depths.clone().unwrap_or_else(|| vec![6, 12]);
    let [shallow, deep] = depths[..] else {
        return Err(CliError::Usage("--depths takes exactly two values".into()));
    };
    let plan = EnergyPlan {
        alpha: args.alpha.unwrap_or(1.1),
        payload_len: args.payload_len.unwrap_or(1),
        k_max: args.k_max,
        trials: args.trials.unwrap_or(100_000),
        seed: require(args.seed, "seed")?,
        shallow,
        deep,
        min_support: args.min_support.unwrap_or(crate::energy::DEFAULT_MIN_SUPPORT),
    };
    let mut manifest = RunManifest::new("energy", args);
    let (checks, cert) = energy_checks(&plan)?;
    manifest.checks.extend(checks);
    if let Some(cert) = cert {
        write_certificate(ctx, &mut manifest, &cert)?;
    }
    Ok(manifest)
}
