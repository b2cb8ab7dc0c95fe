//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always print. The process
//! fails when a criterion outside `KNOWN_UNATTAINABLE` fails, or when one
//! inside it starts passing.

use std::collections::HashMap;
use std::f64::consts::{LN_10, LN_2, PI};
use std::time::{Duration, Instant};

use ams_coding::codes::{
    check_freeness, decode_two_sided, encode_star, encode_window, kraft_sum, phase_recover, Code, ConjCode,
    FixedLengthCode, KraftValue, TableCode,
};
use ams_coding::energy::{analytic_m, analytic_n, corollary_parameter_check, empirical_energy_k, ScanOptions};
use ams_coding::entropy::{
    check_coded_block_identity, check_conditional_n, check_fixed_length_bound, check_jensen_bound, check_rate_ratio,
    check_sandwich, entropy_of, DeterministicSequence, ExactModel, ShiftedBlocks, TruncatedSantaFe,
};
use ams_coding::measures::{
    analytic_expansion_rate, estimate_rho, exact_rho_iid, expansion_rate, stationarity_check, CylinderCounts,
    HasLengthLaw, PhaseSampler,
};
use ams_coding::processes::{
    bar_u_estimate, champernowne_digits, exact_prediction_prob, power_law_bound, u_set, u_size, IidModel, SantaFeModel,
    SourceModel,
};
use ams_coding::rng::stream;
use ams_coding::strings::{Alphabet, TwoSidedWindow};
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rayon::prelude::*;

/// Criteria that cannot pass as stated; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[11];

struct Outcome {
    pass: bool,
    /// For a known-unattainable criterion, whether its attainable parts pass.
    attainable: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, attainable: pass, detail }
}

fn t2() -> TableCode {
    TableCode::parse_text(include_str!("../data/t2.txt")).unwrap()
}

fn fixfree9() -> TableCode {
    TableCode::parse_text(include_str!("../data/fixfree9.txt")).unwrap()
}

/// `ζ(α)` by partial sum plus Euler–Maclaurin correction.
fn zeta_oracle(alpha: f64) -> f64 {
    let n = 100_000f64;
    let head: f64 = (1..100_000).map(|k| (k as f64).powf(-alpha)).sum();
    head + n.powf(1.0 - alpha) / (alpha - 1.0) + 0.5 * n.powf(-alpha) + alpha / 12.0 * n.powf(-alpha - 1.0)
}

fn kraft_and_freeness() -> Outcome {
    let code = fixfree9();
    let exact_one = matches!(kraft_sum(&code), KraftValue::Exact(ref r) if *r == BigRational::one());
    let max = code.max_len() as u32;
    let numerator: u64 = code.lengths().iter().map(|&l| 1u64 << (max - l as u32)).sum();
    let f = check_freeness(&code);
    outcome(
        exact_one && numerator == 1 << max && f.complete && f.fix_free,
        format!("Kraft = {numerator}/{} exactly, complete={}, fix_free={}", 1u64 << max, f.complete, f.fix_free),
    )
}

fn two_sided_round_trip() -> Outcome {
    let code = fixfree9();
    let n = code.len();
    let (mut full_ok, mut trunc_ok) = (0usize, 0usize);
    let windows = 10_000;
    for t in 0..windows {
        let mut rng = stream(2, 0, t as u64);
        let total = rng.gen_range(0..=64usize);
        let split = rng.gen_range(0..=total);
        let sym: Vec<usize> = (0..total).map(|_| rng.gen_range(0..n)).collect();
        let x = TwoSidedWindow::new(sym[..split].to_vec(), sym[split..].to_vec());
        let y = encode_window(&code, &x).unwrap();
        let d = decode_two_sided(&code, &y).unwrap();
        full_ok += usize::from(d.source == x && d.left_rem.is_empty() && d.right_rem.is_empty());

        let (left, right) = (x.left(), x.right().to_vec());
        let first = left.first().map(|&s| code.codewords()[s].len());
        let last = right.last().map(|&s| code.codewords()[s].len());
        let cut_l = first.map_or(0, |l| rng.gen_range(0..l));
        let cut_r = last.map_or(0, |l| rng.gen_range(0..l));
        let (yl, yr) = (y.left(), y.right().to_vec());
        let cut = TwoSidedWindow::new(yl[cut_l..].to_vec(), yr[..yr.len() - cut_r].to_vec());
        let d = decode_two_sided(&code, &cut).unwrap();
        let want_left = if cut_l > 0 { left[1..].to_vec() } else { left.clone() };
        let want_right = if cut_r > 0 { right[..right.len() - 1].to_vec() } else { right.clone() };
        let want_lrem = if cut_l > 0 { code.codewords()[left[0]][cut_l..].to_vec() } else { vec![] };
        let want_rrem = if cut_r > 0 {
            let w = &code.codewords()[*right.last().unwrap()];
            w[..w.len() - cut_r].to_vec()
        } else {
            vec![]
        };
        trunc_ok += usize::from(
            d.source.left() == want_left
                && d.source.right() == want_right.as_slice()
                && *d.left_rem == *want_lrem
                && *d.right_rem == *want_rrem,
        );
    }
    outcome(
        full_ok == windows && trunc_ok == windows,
        format!("{full_ok}/{windows} exact round trips, {trunc_ok}/{windows} truncated-edge recoveries"),
    )
}

fn synchronization() -> Outcome {
    let model = SantaFeModel::new(1.5).unwrap();
    let code = ConjCode::santa_fe();
    let windows = 1_000;
    let bad: usize = (0..windows)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(3, 0, t as u64);
            let mut z = model.realize(&mut rng);
            let x = model.draw_n(&mut z, 40, &mut rng);
            let y = encode_star(&code, &x).unwrap();
            let full = phase_recover(&code, &y).unwrap();
            let mut bad = usize::from(full.symbols.iter().map(|(_, f)| *f).collect::<Vec<_>>() != x[1..]);
            for s in 0..y.len() {
                let shifted = phase_recover(&code, &y[s..]).unwrap();
                bad += usize::from(shifted.symbols != full.shifted(s));
                let e = rng.gen_range(s..=y.len());
                let cut = phase_recover(&code, &y[s..e]).unwrap();
                let want: Vec<_> = full
                    .shifted(s)
                    .into_iter()
                    .filter(|(o, f)| o + code.codeword_len(f).unwrap() <= e - s)
                    .collect();
                bad += usize::from(cut.symbols != want);
            }
            bad
        })
        .sum();
    outcome(bad == 0, format!("{windows} windows, every shift and a random right cut: {bad} mismatches"))
}

fn stationary_mean() -> Outcome {
    let model = IidModel::fair_coin();
    let code = t2();
    let law = model.length_law(&code).unwrap();
    let u = [1u8];
    let trials = 200_000;
    let exact = exact_rho_iid(&model, &code, &u, 8).unwrap();
    let rho = match estimate_rho(&model, &code, &law, &u, trials, 1) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("estimators disagree: {e}")),
    };
    let z_oracle = rho.phase_route.z_against(1.0 / 3.0);
    let sampler = PhaseSampler::new(&model, &code, &law);
    let report = stationarity_check(
        |rng| {
            model.realize(rng);
            sampler.sample(&mut (), 0, 6, rng).unwrap().coded.right().to_vec()
        },
        2,
        4,
        trials,
        4,
    );
    let ratio = report.max_tv / report.noise_scale;
    outcome(
        exact.exact == Some(BigRational::new(1.into(), 3.into())) && z_oracle <= 3.0 && rho.z <= 5.0 && ratio <= 4.0,
        format!(
            "rho = {:.5} ± {:.5} vs exact 1/3 (z = {z_oracle:.2} ≤ 3); routes z = {:.2} ≤ 5; stationarity TV = {:.2} noise ≤ 4",
            rho.phase_route.value, rho.phase_route.stderr, rho.z, ratio
        ),
    )
}

fn expansion() -> Outcome {
    let model = SantaFeModel::new(2.0).unwrap();
    let code = ConjCode::santa_fe();
    let stats = expansion_rate(&model, &code, 10_000, 100, 5).unwrap();
    let n = 1_000_000u64;
    let head: f64 = (1..n).map(|k| ((63 - k.leading_zeros()) as f64 + 2.0) / (k as f64).powi(2)).sum();
    let nf = n as f64;
    let tail = (nf.log2() + 2.0) / nf + 1.0 / (nf * LN_2);
    let oracle = (head + tail) / (PI * PI / 6.0);
    let analytic = analytic_expansion_rate(&model, 1).value;
    let z = stats.estimate.z_against(analytic);
    outcome(
        z <= 3.0 && (analytic - oracle).abs() < 1e-6,
        format!(
            "L = {:.5} ± {:.5} vs series {analytic:.6} (direct sum {oracle:.6}), z = {z:.2} ≤ 3",
            stats.estimate.value, stats.estimate.stderr
        ),
    )
}

fn zipf() -> Outcome {
    let (mut cells, mut floor_fail, mut real_fail, mut scan_fail) = (0, 0, 0, 0);
    let mut worst_sd: f64 = 0.0;
    for alpha in [1.1, 1.5, 2.0] {
        let model = SantaFeModel::new(alpha).unwrap();
        for delta in [0.6, 0.75, 0.9] {
            for n in [10u64, 100, 1_000, 10_000] {
                let size = u_size(&model, delta, n).unwrap();
                let scan = (1u128..).take_while(|&k| 1.0 - (1.0 - model.pmf(k)).powf(n as f64) >= delta).count() as u128;
                let bound = power_law_bound(&model, delta, n).unwrap();
                cells += 1;
                scan_fail += usize::from(size != scan);
                floor_fail += usize::from((size as f64) < bound.floor());
                real_fail += usize::from((size as f64) < bound);
            }
        }
        for n in [10u64, 100] {
            let ks = [1u128, 2, 5];
            let trials = 100_000;
            let hits = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream(6, (alpha * 10.0) as u64 * 1000 + n, t);
                    let mut seen = [0usize; 3];
                    for _ in 0..n {
                        let k = model.sample_k(&mut rng);
                        if let Some(i) = ks.iter().position(|&q| q == k) {
                            seen[i] = 1;
                        }
                    }
                    seen
                })
                .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
            for (i, &k) in ks.iter().enumerate() {
                let p = exact_prediction_prob(&model, k, n).unwrap();
                let sd = (p * (1.0 - p) / trials as f64).sqrt();
                worst_sd = worst_sd.max((hits[i] as f64 / trials as f64 - p).abs() / sd);
            }
        }
    }
    outcome(
        floor_fail == 0 && scan_fail == 0 && worst_sd <= 4.0,
        format!(
            "{cells} cells: |U| ≥ ⌊bound⌋ everywhere ({floor_fail} failures; the unfloored bound fails in {real_fail}), \
             linear-scan mismatches {scan_fail}, Monte Carlo max {worst_sd:.2} SD ≤ 4"
        ),
    )
}

fn inclusion() -> Outcome {
    let model = SantaFeModel::new(1.1).unwrap();
    let code = ConjCode::santa_fe();
    let law = model.length_law(&code).unwrap();
    let (a, delta_bar, delta) = (0.9, 0.55, 0.75);
    let c_a = law.find_ca(a).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1_000usize, 10_000] {
        let n = ((delta - delta_bar / a) / law.mean() * (m as f64 - c_a as f64)).floor() as u64;
        let u = u_set(&model, delta, n).unwrap();
        let bar = bar_u_estimate(&model, &code, delta_bar, m, 4_000, 7).unwrap();
        let outside = u.members().filter(|&k| !bar.plausibly_contains(k)).count();
        pass &= outside == 0;
        parts.push(format!("m={m}: n={n}, |U|={}, |Ū|={}, outside={outside}", u.len(), bar.len()));
    }
    outcome(pass, format!("L = {:.3}, C_a = {c_a}; {}", law.mean(), parts.join("; ")))
}

fn census_direct(a: u32, p: f64, terms: Option<usize>) -> f64 {
    let mut sum = 0.0;
    for l in 0..10_000 {
        if terms.is_some_and(|t| l >= t) {
            break;
        }
        let t = 2f64.powi(l as i32 - a as i32 - 1).max(1.0) * p.powi(l as i32);
        sum += t;
        if terms.is_none() && l > 10 && t < 1e-20 {
            break;
        }
    }
    sum
}

fn energy() -> Outcome {
    let mut admissibility_ok = true;
    for alpha in [1.05, 1.1, 1.2, 1.25, 1.3, 1.5, 2.0, 3.0] {
        for a in 0..=3u32 {
            let c = corollary_parameter_check(alpha, a).unwrap();
            admissibility_ok &= c.admissible == (zeta_oracle(alpha) > 2f64.powi(a as i32 + 1));
        }
    }
    let (mut lo, mut hi) = (1.0001, 3.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if zeta_oracle(mid) > 4.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let crossing = 0.5 * (lo + hi);
    let flips = corollary_parameter_check(crossing - 1e-3, 1).unwrap().admissible
        && !corollary_parameter_check(crossing + 1e-3, 1).unwrap().admissible;
    let beta_ok = (crossing - 1.0 / 0.7728).abs() <= 0.01;

    let m = analytic_m(&ConjCode::new(1), 0.4).unwrap();
    let m_direct = census_direct(1, 0.4, None);
    let n = analytic_n(2.0, 1, 0.8).unwrap();
    let num = census_direct(1, 0.25 / 0.8, Some(80)) / 0.25;
    let den: f64 = (2..82).map(|l| 2f64.powi(l - 2) * 0.25f64.powi(l)).sum();
    let cor = corollary_parameter_check(1.1, 1).unwrap();
    let (c, c2) = (cor.c.unwrap(), cor.c2.unwrap());
    let m11 = analytic_m(&ConjCode::new(1), c).unwrap();
    let closed_err = [
        (m - m_direct).abs(),
        (n.numerator - num).abs(),
        (n.denominator - den).abs(),
        (m11 - census_direct(1, c, None)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let model = SantaFeModel::new(1.1).unwrap();
    let code = ConjCode::santa_fe();
    let law = model.length_law(&code).unwrap();
    let sampler = PhaseSampler::new(&model, &code, &law);
    let windows: Vec<Vec<u8>> = (0..100_000u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(8, 1, t);
            let mut z = model.realize(&mut rng);
            sampler.sample(&mut z, 0, 12, &mut rng).unwrap().coded.right().to_vec()
        })
        .collect();
    let mut counts = CylinderCounts::with_alphabet(12, Alphabet::TERNARY);
    windows.iter().for_each(|w| counts.add_prefixes(w));
    let k6 = empirical_energy_k(&counts, c2, ScanOptions::new(6)).unwrap().k_hat;
    let k12 = empirical_energy_k(&counts, c2, ScanOptions::new(12)).unwrap().k_hat;
    let mut constant = CylinderCounts::with_alphabet(12, Alphabet::BINARY);
    (0..1_000).for_each(|_| constant.add_prefixes(&[0u8; 12]));
    let control_ok = [6usize, 8, 10, 12].iter().all(|&d| {
        empirical_energy_k(&constant, 0.5, ScanOptions::new(d)).unwrap().k_hat >= 2f64.powf(d as f64 / 2.0)
    });
    let ratio = k12 / k6;
    outcome(
        admissibility_ok && flips && beta_ok && closed_err <= 1e-10 && ratio < 2.0 && control_ok,
        format!(
            "(i) admissibility {admissibility_ok}, ζ = 4 at α = {crossing:.5} vs 1/0.7728 = {:.5}; \
             (ii) max closed-form error {closed_err:.1e}; (iii) K̂(12)/K̂(6) = {ratio:.3} < 2 at c₂ = {c2:.4}, \
             constant-source control ≥ 2^(d/2): {control_ok}",
            1.0 / 0.7728
        ),
    )
}

fn ln_l_plus_eta(model: &ExactModel, code: &TableCode) -> f64 {
    let lens = code.lengths();
    let marginal = model.marginal();
    let l: f64 = marginal.iter().zip(&lens).map(|(p, &n)| p * n as f64).sum();
    let eta: f64 = marginal
        .iter()
        .zip(&lens)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, &n)| p * (n as f64 / l) * (n as f64 / l).ln())
        .sum();
    l.ln() + eta
}

fn entropy_identities() -> Outcome {
    let mut pairs: Vec<(String, ExactModel, TableCode)> = vec![("iid/{0,10}".into(), ExactModel::iid(vec![0.5, 0.5]).unwrap(), t2())];
    for k_small in 2..=4 {
        let sf = TruncatedSantaFe::new(1.5, k_small).unwrap();
        pairs.push((format!("santa-fe K={k_small}"), sf.model().clone(), sf.table(&ConjCode::santa_fe()).unwrap()));
    }
    let (mut worst_block, mut worst_phase) = (0.0f64, 0.0f64);
    let mut sandwich_ok = true;
    for (_, model, code) in &pairs {
        for n in 1..=4 {
            let b = check_coded_block_identity(model, code, n).unwrap();
            worst_block = worst_block.max((b.source - b.coded).abs()).max((b.source - model.block_entropy(n)).abs());
        }
        let target = ln_l_plus_eta(model, code);
        for (k, l) in [(1, 1), (0, 1), (1, 2), (-1, 2)] {
            worst_phase = worst_phase.max((check_conditional_n(model, code, k, l).unwrap().enumerated - target).abs());
        }
        for n in 1..=3 {
            let s = check_sandwich(model, code, n).unwrap();
            sandwich_ok &= s.first_holds() && s.second_holds();
        }
    }
    for k_small in 2..=4 {
        let sf = TruncatedSantaFe::new(2.0, k_small).unwrap();
        for n in 1..=4 {
            worst_block = worst_block.max((sf.model().block_entropy(n) - sf.block_entropy_closed_form(n)).abs());
        }
    }
    let fixed = [
        (ExactModel::iid(vec![0.5, 0.5]).unwrap(), FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "11"]).unwrap()),
        (ExactModel::iid(vec![0.3, 0.7]).unwrap(), FixedLengthCode::from_codewords(Alphabet::BINARY, &["01", "10"]).unwrap()),
        (
            TruncatedSantaFe::new(1.5, 2).unwrap().model().clone(),
            FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "01", "10", "11"]).unwrap(),
        ),
    ];
    let mut fixed_ok = true;
    for (model, code) in &fixed {
        for n in 1..=3 {
            let b = check_fixed_length_bound(model, code, n).unwrap();
            fixed_ok &= b.holds() && (b.coded - b.source).abs() <= model.block_entropy(2) + 2f64.ln() + 1e-12;
        }
    }
    outcome(
        worst_block <= 1e-10 && worst_phase <= 1e-10 && sandwich_ok && fixed_ok,
        format!(
            "{} pairs: block identity err {worst_block:.1e}, H(N|X̄) − (ln L + η) err {worst_phase:.1e}, \
             sandwich {sandwich_ok}, fixed-length bound {fixed_ok}",
            pairs.len()
        ),
    )
}

fn rate_ratio() -> Outcome {
    let r = check_rate_ratio(&ExactModel::iid(vec![0.5, 0.5]).unwrap(), &t2(), 10, 10).unwrap();
    let target = LN_2 / 1.5;
    let rel = (r.coded_rate - target).abs() / target;
    outcome(rel <= 0.05, format!("h = {:.6} vs ln2/1.5 = {target:.6}, relative error {rel:.2e} ≤ 5%", r.coded_rate))
}

fn champernowne() -> Outcome {
    let digits = champernowne_digits(1_000_000);
    let mut counts = [0usize; 10];
    digits.iter().for_each(|&d| counts[d as usize] += 1);
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / digits.len() as f64).collect();
    let worst = freqs.iter().map(|f| (f - 0.1).abs()).fold(0.0, f64::max);
    let h1 = entropy_of(freqs.iter().copied());
    let seq = DeterministicSequence::champernowne(11);
    let shifted_zero = (0..10).all(|i| entropy_of(seq.shifted_block_pmf(i, 1).unwrap().into_iter().map(|(_, p)| p)) == 0.0);
    let jensen = check_jensen_bound(&seq, 1, 10).unwrap();
    let freq_ok = worst <= 0.02;
    let h_ok = (h1 - LN_10).abs() <= 0.02;
    let attainable = shifted_zero && jensen.gap() > 0.0;
    let mut out = outcome(
        freq_ok && h_ok && attainable,
        format!(
            "max |freq − 0.1| = {worst:.5} (digit 1: {:.5}) ≤ 0.02: {freq_ok}; H(1) = {h1:.5} vs ln10 = {LN_10:.5}: {h_ok}; \
             H(i;1) = 0 for i < 10: {shifted_zero}; Jensen gap at n = 10: {:.5}",
            freqs[1],
            jensen.gap()
        ),
    );
    out.attainable = attainable;
    out
}

fn read_dir(dir: &std::path::Path) -> HashMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = tmp.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_amscode"))
            .args(["--threads", threads, "--out", out.to_str().unwrap(), "conj-suite", "--alpha", "1.1", "--seed", "3"])
            .output()
            .unwrap()
            .status;
        (status.code().unwrap_or(-1), read_dir(&out))
    };
    let (c1, a) = run("1", "one");
    let (c4, b) = run("4", "four");
    let (c1b, c) = run("1", "again");
    let same = a == b && a == c && a.contains_key("manifest.json");
    outcome(
        same && c1 == 0 && c4 == 0 && c1b == 0,
        format!("{} files byte-identical across 1, 4, 1 threads: {same}; exit codes {c1}, {c4}, {c1b}", a.len()),
    )
}

/// Id, name, runtime budget in seconds, and the check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Kraft/freeness of the nine-word code", 1, kraft_and_freeness),
        (2, "two-sided decode round trip", 10, two_sided_round_trip),
        (3, "shift-invariant phase recovery", 60, synchronization),
        (4, "stationary mean", 30, stationary_mean),
        (5, "expansion rate", 30, expansion),
        (6, "vocabulary power law", 60, zipf),
        (7, "coded vocabulary inclusion", 300, inclusion),
        (8, "finite energy", 120, energy),
        (9, "entropy identities", 60, entropy_identities),
        (10, "rate ratio", 60, rate_ratio),
        (11, "Champernowne statistics", 30, champernowne),
        (12, "determinism", 120, determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= Duration::from_secs(budget);
        println!(
            "{} {id:>2} {name}: {} [{:.2}s, budget {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
        let known = KNOWN_UNATTAINABLE.contains(&id);
        if pass == known || (known && !out.attainable) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
    println!("all criteria as expected; known unattainable: {KNOWN_UNATTAINABLE:?}");
}
