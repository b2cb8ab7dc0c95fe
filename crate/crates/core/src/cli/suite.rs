use std::fmt::Write as _;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy_cmd::{energy_checks, write_certificate, EnergyPlan};
use super::{fmt_sig, require, Check, CliError, CliResult, Context, ModelChoice, RunManifest};
use crate::codes::{encode_star, ConjCode};
use crate::measures::{analytic_expansion_rate, expansion_rate, HasLengthLaw};
use crate::processes::{bar_u_estimate, coded_predictions, predictor_s, sample_santa_fe, u_set, SantaFeModel};
use crate::rng::{domain, stream};

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ConjSuiteArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Realizations of the expansion-rate estimate.
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Source symbols per realization.
    #[arg(long)]
    pub symbols: Option<usize>,
    /// Stationary-mean samples per energy scan.
    #[arg(long)]
    pub energy_trials: Option<usize>,
    /// Windows checked for predictor consistency.
    #[arg(long)]
    pub predictor_trials: Option<usize>,
    /// Half-width of those windows.
    #[arg(long)]
    pub predictor_halfwidth: Option<i64>,
    /// Stationary-mean samples per vocabulary estimate.
    #[arg(long)]
    pub vocab_trials: Option<usize>,
    /// Coded lengths at which the coded vocabulary is estimated.
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub delta_bar: Option<f64>,
}

/// Expansion-rate tolerance in standard errors.
const EXPANSION_Z: f64 = 3.0;
/// Allowed distance of the fitted growth exponent from `1/α`.
const GROWTH_TOL: f64 = 0.25;

fn expansion_section(model: &SantaFeModel, code: &ConjCode, args: &ConjSuiteArgs, seed: u64) -> CliResult<(Check, String)> {
    let stats = expansion_rate(model, code, args.symbols.unwrap_or(10_000), args.realizations.unwrap_or(100), seed)?;
    let analytic = analytic_expansion_rate(model, code.payload_len());
    let z = stats.estimate.z_against(analytic.value);
    let mut csv = String::from("realization,rate\n");
    for (r, x) in stats.per_realization.iter().enumerate() {
        let _ = writeln!(csv, "{r},{}", fmt_sig(*x));
    }
    let check = Check::new("expansion_rate")
        .section("a")
        .metric("estimate", stats.estimate.value)
        .metric("stderr", stats.estimate.stderr)
        .metric("analytic", analytic.value)
        .metric("sampler_law_mean", stats.law_mean)
        .metric("z", z)
        .pass(z <= EXPANSION_Z);
    Ok((check, csv))
}

fn predictor_section(model: &SantaFeModel, code: &ConjCode, args: &ConjSuiteArgs, seed: u64) -> CliResult<Check> {
    let trials = args.predictor_trials.unwrap_or(2_000);
    let half = args.predictor_halfwidth.unwrap_or(64);
    let tallies = (0..trials)
        .into_par_iter()
        .map(|t| -> CliResult<[usize; 4]> {
            let mut rng = stream(seed, domain::CONTROL, t as u64);
            let sample = sample_santa_fe(model, -half, half, &mut rng)?;
            let window = sample.window.concat();
            let mut ks: Vec<u128> = window.iter().map(|f| f.k).collect();
            ks.sort_unstable();
            ks.dedup();
            let source_wrong = ks.iter().filter(|&&k| predictor_s(k, &window) != sample.z_record.peek(k)).count();
            let mut y = vec![crate::codes::conj::TERMINATOR];
            y.extend(encode_star(code, &window)?.iter());
            let predicted = coded_predictions(&y);
            let coded_wrong = predicted.iter().filter(|(&k, &s)| s != sample.z_record.peek(k)).count();
            let missed = ks.iter().filter(|k| !predicted.contains_key(k)).count();
            Ok([ks.len(), source_wrong, coded_wrong, missed + usize::from(!sample.is_consistent())])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let sum = |i: usize| tallies.iter().map(|t| t[i]).sum::<usize>();
    let (checked, source_wrong, coded_wrong, missed) = (sum(0), sum(1), sum(2), sum(3));
    Ok(Check::new("predictor_consistency")
        .section("c")
        .metric("windows", trials)
        .metric("indices_checked", checked)
        .metric("source_mismatches", source_wrong)
        .metric("coded_mismatches", coded_wrong)
        .metric("coded_missed", missed)
        .pass(source_wrong == 0 && coded_wrong == 0 && missed == 0))
}

fn vocab_section(
    model: &SantaFeModel,
    code: &ConjCode,
    args: &ConjSuiteArgs,
    seed: u64,
) -> CliResult<(Vec<Check>, String)> {
    let a = args.a.unwrap_or(0.9);
    let delta = args.delta.unwrap_or(0.75);
    let delta_bar = args.delta_bar.unwrap_or(0.55);
    if delta <= delta_bar / a {
        return Err(CliError::Usage(format!("need delta > delta_bar / a = {}", delta_bar / a)));
    }
    let ms = args.m.clone().unwrap_or_else(|| vec![1_000, 10_000]);
    let trials = args.vocab_trials.unwrap_or(4_000);
    let law = model.length_law(code)?;
    let mean = law.mean();
    let c_a = law.find_ca(a)?;
    let mut checks = Vec::new();
    let mut csv = String::from("m,k,hits,p_hat,radius\n");
    let mut sizes = Vec::new();
    for &m in &ms {
        let n = ((delta - delta_bar / a) / mean * (m as f64 - c_a as f64)).floor().max(0.0) as u64;
        let u = u_set(model, delta, n)?;
        let bar = bar_u_estimate(model, code, delta_bar, m, trials, seed)?;
        for e in &bar.per_k {
            let _ = writeln!(csv, "{m},{},{},{},{}", e.k, e.hits, fmt_sig(e.p_hat), fmt_sig(e.radius));
        }
        let outside = u.members().filter(|&k| !bar.plausibly_contains(k)).count();
        sizes.push((m, bar.len()));
        checks.push(
            Check::new(format!("inclusion_m{m}"))
                .section("d")
                .metric("m", m)
                .metric("n", n)
                .metric("c_a", c_a)
                .metric("u_size", u.len() as u64)
                .metric("bar_u_size", bar.len())
                .metric("outside", outside)
                .pass(outside == 0),
        );
    }
    let beta = 1.0 / model.alpha();
    for pair in sizes.windows(2) {
        let [(m1, s1), (m2, s2)] = [pair[0], pair[1]];
        let fitted = if s1 > 0 && s2 > 0 { (s2 as f64 / s1 as f64).ln() / (m2 as f64 / m1 as f64).ln() } else { f64::NAN };
        checks.push(
            Check::new(format!("growth_m{m1}_m{m2}"))
                .section("d")
                .metric("fitted_exponent", fitted)
                .metric("beta", beta)
                .pass(s2 >= s1 && (fitted - beta).abs() <= GROWTH_TOL),
        );
    }
    Ok((checks, csv))
}

pub fn conj_suite(args: &ConjSuiteArgs, ctx: &Context) -> CliResult<RunManifest> {
    let alpha = args.alpha.unwrap_or(1.1);
    let seed = require(args.seed, "seed")?;
    let model = ModelChoice::santa_fe(alpha, args.k_max)?;
    let code = ConjCode::santa_fe();
    let mut manifest = RunManifest::new("conj-suite", args);

    let (check, csv) = expansion_section(&model, &code, args, seed)?;
    manifest.push(check);
    ctx.write("expansion.csv", &csv)?;
    manifest.output("expansion.csv");

    let plan = EnergyPlan {
        alpha,
        payload_len: code.payload_len(),
        k_max: args.k_max,
        trials: args.energy_trials.unwrap_or(100_000),
        seed,
        shallow: 6,
        deep: 12,
        min_support: crate::energy::DEFAULT_MIN_SUPPORT,
    };
    let (checks, cert) = energy_checks(&plan)?;
    manifest.checks.extend(checks.into_iter().map(|c| c.section("b")));
    match cert {
        Some(cert) => write_certificate(ctx, &mut manifest, &cert)?,
        None => manifest.push(Check::new("admissible").section("b").pass(false)),
    }

    manifest.push(predictor_section(&model, &code, args, seed)?);

    let (checks, csv) = vocab_section(&model, &code, args, seed)?;
    manifest.checks.extend(checks);
    ctx.write("bar_u.csv", &csv)?;
    manifest.output("bar_u.csv");
    Ok(manifest)
}
