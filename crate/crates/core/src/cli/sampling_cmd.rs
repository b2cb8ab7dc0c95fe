use std::fmt::Write as _;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::specs::{parse_word, CodeChoice, ModelChoice};
use super::{fmt_sig, require, Check, CliError, CliResult, Context, RunManifest};
use crate::codes::{Code, ConjCode, Fact, TableCode};
use crate::entropy::{check_jensen_bound, entropy_of, DeterministicSequence};
use crate::error::Error;
use crate::measures::{estimate_rho, Estimate, exact_rho_iid, stationarity_check, HasLengthLaw, PhaseSampler};
use crate::processes::{
    exact_prediction_prob, power_law_bound, u_set, ChampernowneSource, IidModel, SantaFeModel, SourceModel,
};
use crate::rng::{domain, stream};
use crate::strings::Alphabet;

/// A source with a code it can be fed through.
pub(crate) enum Pair {
    Iid(IidModel, TableCode),
    SantaFe(SantaFeModel, ConjCode),
}

impl Pair {
    pub fn parse(model: Option<&str>, code: Option<&str>, alpha: Option<f64>, k_max: Option<u64>) -> CliResult<Self> {
        match ModelChoice::parse(model.unwrap_or("iid-fair"))? {
            ModelChoice::Iid(m) => {
                let table = match CodeChoice::parse(code.unwrap_or("t2"))? {
                    CodeChoice::Table { table, .. } => table,
                    CodeChoice::Conj { .. } => return Err(CliError::Usage("conj codes take santa-fe sources".into())),
                };
                if table.len() != m.alphabet_len() {
                    return Err(CliError::Usage(format!(
                        "model has {} symbols but the code has {} codewords",
                        m.alphabet_len(),
                        table.len()
                    )));
                }
                Ok(Pair::Iid(m, table))
            }
            ModelChoice::SantaFe => {
                let conj = match CodeChoice::parse(code.unwrap_or("conj"))? {
                    CodeChoice::Conj { code, .. } => code,
                    CodeChoice::Table { .. } => return Err(CliError::Usage("santa-fe sources take conj codes".into())),
                };
                Ok(Pair::SantaFe(ModelChoice::santa_fe(require(alpha, "alpha")?, k_max)?, conj))
            }
        }
    }

    pub fn target(&self) -> Alphabet {
        match self {
            Pair::Iid(_, t) => t.alphabet(),
            Pair::SantaFe(_, c) => c.target(),
        }
    }
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    /// `iid-fair`, `iid:p0,p1,…`, `uniform:D` or `santa-fe`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Coded symbols before the origin.
    #[arg(long)]
    pub left: Option<usize>,
    /// Coded symbols from the origin on.
    #[arg(long)]
    pub right: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn sample_with<M, C>(
    model: &M,
    code: &C,
    left: usize,
    right: usize,
    seed: u64,
    show: impl Fn(&M::Symbol) -> String,
) -> CliResult<(String, Check)>
where
    M: SourceModel + HasLengthLaw<C>,
    C: Code<Source = M::Symbol>,
{
    let law = model.length_law(code)?;
    let mut rng = stream(seed, domain::TRIAL, 0);
    let mut hidden = model.realize(&mut rng);
    let s = PhaseSampler::new(model, code, &law).sample(&mut hidden, left, right, &mut rng)?;
    let mut text = String::from("# source: i<TAB>symbol\n");
    for (i, x) in (s.source.lo()..).zip(s.source.concat()) {
        let _ = writeln!(text, "{i}\t{}", show(&x));
    }
    let coded = |w: &[u8]| w.iter().map(|&y| crate::strings::digit_char(y)).collect::<String>();
    let _ = writeln!(text, "# coded: left|right\n{}|{}", coded(&s.coded.left()), coded(s.coded.right()));
    let check = Check::new("sample")
        .metric("phase", s.phase)
        .metric("first_len", s.first_len)
        .metric("attempts", s.attempts)
        .metric("source_symbols", s.source.len())
        .metric("mean_len", law.mean());
    Ok((text, check))
}

fn show_fact(f: &Fact) -> String {
    format!("{}:{}", f.k, f.z)
}

pub fn sample(args: &SampleArgs, ctx: &Context) -> CliResult<RunManifest> {
    let pair = Pair::parse(args.model.as_deref(), args.code.as_deref(), args.alpha, args.k_max)?;
    let seed = require(args.seed, "seed")?;
    let (left, right) = (args.left.unwrap_or(16), args.right.unwrap_or(16));
    let (text, check) = match &pair {
        Pair::Iid(m, t) => sample_with(m, t, left, right, seed, |&x| t.label(x).unwrap_or("?").to_string())?,
        Pair::SantaFe(m, c) => sample_with(m, c, left, right, seed, show_fact)?,
    };
    let mut manifest = RunManifest::new("sample", args);
    ctx.write("sample.txt", &text)?;
    manifest.output("sample.txt");
    manifest.push(check);
    Ok(manifest)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct StationaryMeanArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Cylinder word over the code alphabet.
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest shift compared by the stationarity check.
    #[arg(long)]
    pub max_shift: Option<usize>,
}

/// Tolerance of the oracle comparison, in standard errors.
const ORACLE_Z: f64 = 3.0;
/// Tolerance of the stationarity check, in noise scales.
const STATIONARITY_MULTIPLE: f64 = 4.0;

fn stationary_checks<M, C>(
    model: &M,
    code: &C,
    u: &[u8],
    trials: usize,
    seed: u64,
    max_shift: usize,
) -> CliResult<(Vec<Check>, Option<Estimate>, String)>
where
    M: SourceModel + HasLengthLaw<C>,
    C: Code<Source = M::Symbol> + Sync,
{
    let law = model.length_law(code)?;
    let mut checks = Vec::new();
    let mut csv = String::from("route,value,stderr,samples\n");
    let mut phase_route = None;
    match estimate_rho(model, code, &law, u, trials, seed) {
        Ok(r) => {
            for (name, e) in [("g", r.g_route), ("phase", r.phase_route)] {
                let _ = writeln!(csv, "{name},{},{},{}", fmt_sig(e.value), fmt_sig(e.stderr), e.samples);
            }
            checks.push(
                Check::new("routes_agree")
                    .metric("g_route", r.g_route.value)
                    .metric("g_stderr", r.g_route.stderr)
                    .metric("phase_route", r.phase_route.value)
                    .metric("phase_stderr", r.phase_route.stderr)
                    .metric("z", r.z),
            );
            phase_route = Some(r.phase_route);
        }
        Err(Error::EstimatorDisagreement { a, b, z }) => {
            checks.push(Check::new("routes_agree").metric("g_route", a).metric("phase_route", b).metric("z", z).pass(false));
        }
        Err(e) => return Err(e.into()),
    }
    let sampler = PhaseSampler::new(model, code, &law);
    let m = u.len().max(1);
    let report = stationarity_check(
        |rng| {
            let mut hidden = model.realize(rng);
            sampler.sample(&mut hidden, 0, m + max_shift, rng).map(|s| s.coded.right().to_vec()).unwrap_or_default()
        },
        m,
        max_shift,
        trials,
        seed,
    );
    checks.push(
        Check::new("stationarity")
            .metric("block_len", m)
            .metric("max_shift", max_shift)
            .metric("max_tv", report.max_tv)
            .metric("noise_scale", report.noise_scale)
            .pass(report.within(STATIONARITY_MULTIPLE)),
    );
    Ok((checks, phase_route, csv))
}

pub fn stationary_mean(args: &StationaryMeanArgs, ctx: &Context) -> CliResult<RunManifest> {
    let pair = Pair::parse(args.model.as_deref(), args.code.as_deref(), args.alpha, args.k_max)?;
    let u = parse_word(require(args.u.as_deref(), "u")?, pair.target())?;
    let seed = require(args.seed, "seed")?;
    let trials = args.trials.unwrap_or(200_000);
    let max_shift = args.max_shift.unwrap_or(4);
    let mut manifest = RunManifest::new("stationary-mean", args);
    let (checks, phase_route, mut csv) = match &pair {
        Pair::Iid(m, t) => stationary_checks(m, t, &u, trials, seed, max_shift)?,
        Pair::SantaFe(m, c) => stationary_checks(m, c, &u, trials, seed, max_shift)?,
    };
    manifest.checks.extend(checks);
    if let (Pair::Iid(m, t), Some(est)) = (&pair, phase_route) {
        if t.is_prefix_free() {
            let exact = exact_rho_iid(m, t, &u, u.len() + t.max_len())?;
            let z = est.z_against(exact.value);
            let _ = writeln!(csv, "exact,{},0,0", fmt_sig(exact.value));
            let mut check = Check::new("exact_oracle").metric("exact", exact.value).metric("estimate", est.value).metric("z", z);
            if let Some(r) = &exact.exact {
                check = check.metric("exact_rational", r.to_string());
            }
            manifest.push(check.pass(z <= ORACLE_Z));
        }
    }
    ctx.write("rho.csv", &csv)?;
    manifest.output("rho.csv");
    Ok(manifest)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ZipfArgs {
    /// Exponents, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    /// Window lengths.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo trials of the spot check.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Largest window length simulated by the spot check.
    #[arg(long)]
    pub mc_max_n: Option<u64>,
}

/// Binomial standard deviations allowed by the spot check.
const SPOT_SD: f64 = 4.0;

/// Fraction of trials in which each of `ks` occurs among `n` draws.
fn simulate_occurrence(model: &SantaFeModel, ks: &[u128], n: u64, trials: usize, seed: u64) -> Vec<f64> {
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut seen = vec![0usize; ks.len()];
            for _ in 0..n {
                let k = model.sample_k(&mut rng);
                if let Some(i) = ks.iter().position(|&q| q == k) {
                    seen[i] = 1;
                }
            }
            seen
        })
        .reduce(|| vec![0; ks.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    hits.into_iter().map(|h| h as f64 / trials as f64).collect()
}

pub fn zipf(args: &ZipfArgs, ctx: &Context) -> CliResult<RunManifest> {
    let alphas = require(args.alpha.clone(), "alpha")?;
    let deltas = args.delta.clone().unwrap_or_else(|| vec![0.75]);
    let ns = args.n.clone().unwrap_or_else(|| vec![10, 100, 1000, 10_000]);
    let seed = require(args.seed, "seed")?;
    let trials = args.trials.unwrap_or(100_000);
    let mc_max_n = args.mc_max_n.unwrap_or(100);
    let mut manifest = RunManifest::new("zipf", args);
    let mut csv = String::from("alpha,delta,n,u_size,bound,floor_bound,holds\n");
    let mut spots = String::from("alpha,n,k,exact,monte_carlo,sd\n");
    let (mut violations, mut real_violations, mut rows) = (0usize, 0usize, 0usize);
    let mut worst_spot: f64 = 0.0;
    for &alpha in &alphas {
        let model = ModelChoice::santa_fe(alpha, args.k_max)?;
        for &n in &ns {
            let mut spot_ks = Vec::new();
            for &delta in &deltas {
                let u = u_set(&model, delta, n)?;
                let bound = power_law_bound(&model, delta, n)?;
                let holds = u.len() as f64 >= bound.floor();
                rows += 1;
                violations += usize::from(!holds);
                real_violations += usize::from((u.len() as f64) < bound);
                let _ = writeln!(csv, "{alpha},{delta},{n},{},{},{},{holds}", u.len(), fmt_sig(bound), bound.floor());
                spot_ks.extend([1, u.largest, u.largest + 1].into_iter().filter(|&k| k >= 1));
            }
            if n > mc_max_n {
                continue;
            }
            spot_ks.sort_unstable();
            spot_ks.dedup();
            let freq = simulate_occurrence(&model, &spot_ks, n, trials, seed);
            for (&k, &f) in spot_ks.iter().zip(&freq) {
                let p = exact_prediction_prob(&model, k, n)?;
                let sd = (p * (1.0 - p) / trials as f64).sqrt();
                let dev = (f - p).abs();
                let z = if sd > 0.0 { dev / sd } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
                worst_spot = worst_spot.max(z);
                let _ = writeln!(spots, "{alpha},{n},{k},{},{},{}", fmt_sig(p), fmt_sig(f), fmt_sig(sd));
            }
        }
    }
    ctx.write("zipf.csv", &csv)?;
    ctx.write("zipf_spots.csv", &spots)?;
    manifest.output("zipf.csv");
    manifest.output("zipf_spots.csv");
    manifest.push(
        Check::new("power_law_bound")
            .metric("rows", rows)
            .metric("violations", violations)
            .metric("real_valued_violations", real_violations)
            .pass(violations == 0),
    );
    manifest.push(Check::new("monte_carlo_spots").metric("max_sd", worst_spot).metric("trials", trials).pass(worst_spot <= SPOT_SD));
    Ok(manifest)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct ChampernowneArgs {
    #[arg(long)]
    pub digits: Option<usize>,
    /// Cylinder word of decimal digits.
    #[arg(long)]
    pub u: Option<String>,
    /// Number of shifts averaged by the Jensen check.
    #[arg(long)]
    pub jensen_n: Option<usize>,
}

/// Allowed deviation of digit frequencies and of `H(1)` from their normal-sequence values.
pub const CHAMPERNOWNE_TOL: f64 = 0.02;

pub fn champernowne(args: &ChampernowneArgs, ctx: &Context) -> CliResult<RunManifest> {
    let n = args.digits.unwrap_or(1_000_000);
    let u = parse_word(args.u.as_deref().unwrap_or("7"), Alphabet::DECIMAL)?;
    let jensen_n = args.jensen_n.unwrap_or(10);
    if n == 0 || u.is_empty() || u.len() > n {
        return Err(CliError::Usage("need 0 < |u| <= digits".into()));
    }
    let digits: Vec<u8> = ChampernowneSource::new().take(n).collect();
    let mut counts = [0usize; 10];
    for &d in &digits {
        counts[d as usize] += 1;
    }
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let mut csv = String::from("digit,count,freq\n");
    for (d, (&c, &f)) in counts.iter().zip(&freqs).enumerate() {
        let _ = writeln!(csv, "{d},{c},{}", fmt_sig(f));
    }
    let max_dev = freqs.iter().map(|f| (f - 0.1).abs()).fold(0.0, f64::max);
    let windows = n - u.len() + 1;
    let hits = digits.windows(u.len()).filter(|w| *w == u.as_slice()).count();
    let u_freq = hits as f64 / windows as f64;
    let u_target = 10f64.powi(-(u.len() as i32));
    let h1 = entropy_of(freqs.iter().copied());
    let jensen = check_jensen_bound(&DeterministicSequence::champernowne(jensen_n + 1), 1, jensen_n)?;

    let mut manifest = RunManifest::new("champernowne", args);
    ctx.write("digits.csv", &csv)?;
    manifest.output("digits.csv");
    manifest.push(
        Check::new("digit_frequencies")
            .metric("max_deviation", max_dev)
            .metric("freq_of_1", freqs[1])
            .pass(max_dev <= CHAMPERNOWNE_TOL),
    );
    manifest.push(
        Check::new("cylinder")
            .metric("u", args.u.as_deref().unwrap_or("7"))
            .metric("freq", u_freq)
            .metric("normal_value", u_target)
            .pass((u_freq - u_target).abs() <= CHAMPERNOWNE_TOL),
    );
    manifest.push(
        Check::new("entropy_h1")
            .metric("h1", h1)
            .metric("ln10", 10f64.ln())
            .pass((h1 - 10f64.ln()).abs() <= CHAMPERNOWNE_TOL),
    );
    manifest.push(
        Check::new("jensen_gap")
            .metric("n", jensen_n)
            .metric("averaged", jensen.averaged)
            .metric("mean_shifted", jensen.mean_shifted)
            .metric("gap", jensen.gap())
            .pass(jensen.mean_shifted == 0.0 && jensen.gap() > 0.0),
    );
    Ok(manifest)
}
