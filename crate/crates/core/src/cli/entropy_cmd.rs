use clap::Args;
use serde::{Deserialize, Serialize};

use super::specs::{CodeChoice, ModelChoice};
use super::{Check, CliError, CliResult, Context, RunManifest};
use crate::codes::{ConjCode, FixedLengthCode, TableCode};
use crate::entropy::{
    check_coded_block_identity, check_conditional_n, check_fixed_length_bound, check_jensen_bound,
    check_length_biased_inequality, check_rate_ratio, check_sandwich, coded_entropy_vocab_lower_bound, entropy_rate,
    entropy_vocab_lower_bound, DeterministicSequence, ExactModel, JensenCheck, PeriodicCoin, ShiftedBlocks,
    TruncatedSantaFe,
};
use crate::strings::Alphabet;

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct EntropyArgs {
    /// table, block-identity, conditional-n, length-biased, sandwich,
    /// fixed-length, rate-ratio, vocab, coded-vocab or jensen.
    #[arg(long)]
    pub check: Option<String>,
    /// `iid-fair`, `iid:p0,p1,…`, `uniform:D`, `santa-fe` (truncated);
    /// for jensen also `periodic:P` and `champernowne`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Indices `1..=K_small` kept by the truncated Santa Fe model.
    #[arg(long)]
    pub k_small: Option<usize>,
    /// Block length, or the largest one checked.
    #[arg(long)]
    pub n: Option<usize>,
    /// Window `k..=l` around position 1 for the phase checks.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long)]
    pub l: Option<i64>,
    /// Coded block length of the rate-ratio and coded-vocab checks.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
}

const RATE_TOL: f64 = 0.05;

/// An exact source with the table through which it is coded.
fn exact_pair(args: &EntropyArgs) -> CliResult<(ExactModel, TableCode, Option<TruncatedSantaFe>)> {
    match ModelChoice::parse(args.model.as_deref().unwrap_or("iid-fair"))? {
        ModelChoice::Iid(m) => {
            let table = CodeChoice::parse(args.code.as_deref().unwrap_or("t2"))?.table()?.clone();
            Ok((ExactModel::from_iid(&m), table, None))
        }
        ModelChoice::SantaFe => {
            let sf = santa_fe(args)?;
            let code = conj_code(args)?;
            let table = sf.table(&code)?;
            Ok((sf.model().clone(), table, Some(sf)))
        }
    }
}

fn santa_fe(args: &EntropyArgs) -> CliResult<TruncatedSantaFe> {
    Ok(TruncatedSantaFe::new(args.alpha.unwrap_or(2.0), args.k_small.unwrap_or(3))?)
}

fn conj_code(args: &EntropyArgs) -> CliResult<ConjCode> {
    match CodeChoice::parse(args.code.as_deref().unwrap_or("conj"))? {
        CodeChoice::Conj { code, .. } => Ok(code),
        CodeChoice::Table { .. } => Err(CliError::Usage("santa-fe sources take conj codes".into())),
    }
}

fn jensen_check(args: &EntropyArgs, m: usize, n: usize) -> CliResult<JensenCheck> {
    let spec = args.model.as_deref().unwrap_or("periodic:2");
    let process: Box<dyn ShiftedBlocks> = match spec.split_once(':') {
        Some(("periodic", p)) => {
            Box::new(PeriodicCoin { period: p.parse().map_err(|_| CliError::Usage(format!("bad period {p:?}")))? })
        }
        _ if spec == "champernowne" => Box::new(DeterministicSequence::champernowne(n + m)),
        _ => Box::new(exact_pair(args)?.0),
    };
    Ok(check_jensen_bound(process.as_ref(), m, n)?)
}

pub fn entropy(args: &EntropyArgs, ctx: &Context) -> CliResult<RunManifest> {
    let which = args.check.as_deref().unwrap_or("table").to_ascii_lowercase();
    let mut manifest = RunManifest::new("entropy", args);
    let (k, l) = (args.k.unwrap_or(0), args.l.unwrap_or(2));
    let check = match which.as_str() {
        "table" => {
            let (model, _, _) = exact_pair(args)?;
            let table = model.entropy_table(args.n.unwrap_or(8));
            ctx.write("entropy.csv", &table.to_csv())?;
            manifest.output("entropy.csv");
            let rate = entropy_rate(&table)?;
            Check::new("table").metric("n", rate.n).metric("increment", rate.increment).metric("per_symbol", rate.per_symbol)
        }
        "block-identity" => {
            let (model, code, _) = exact_pair(args)?;
            let mut worst: f64 = 0.0;
            for n in 1..=args.n.unwrap_or(4) {
                let b = check_coded_block_identity(&model, &code, n)?;
                worst = worst.max((b.source - b.coded).abs());
            }
            Check::new("block_identity").metric("max_abs_diff", worst).pass(worst <= 1e-10)
        }
        "conditional-n" => {
            let (model, code, _) = exact_pair(args)?;
            let c = check_conditional_n(&model, &code, k, l)?;
            Check::new("conditional_n")
                .metric("enumerated", c.enumerated)
                .metric("log_l", c.log_l)
                .metric("eta", c.eta)
                .pass(c.holds())
        }
        "length-biased" => {
            let (model, code, _) = exact_pair(args)?;
            let v = check_length_biased_inequality(&model, &code, k, l)?;
            Check::new("length_biased")
                .metric("biased", v.biased)
                .metric("unbiased", v.unbiased)
                .metric("eta", v.eta)
                .metric("covariance", v.covariance)
                .metric("inequality_holds", v.inequality_holds)
                .pass(v.consistent())
        }
        "sandwich" => {
            let (model, code, _) = exact_pair(args)?;
            let s = check_sandwich(&model, &code, args.n.unwrap_or(3))?;
            Check::new("sandwich")
                .metric("coded_tail", s.coded_tail)
                .metric("source", s.source)
                .metric("source_tail", s.source_tail)
                .metric("coded", s.coded)
                .pass(s.first_holds() && s.second_holds())
        }
        "fixed-length" => {
            let (model, _, _) = exact_pair(args)?;
            let code = match &args.code {
                Some(c) => FixedLengthCode::new(CodeChoice::parse(c)?.table()?.clone())?,
                None => FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "11"])?,
            };
            let mut worst_slack = f64::INFINITY;
            for n in 1..=args.n.unwrap_or(3) {
                worst_slack = worst_slack.min(check_fixed_length_bound(&model, &code, n)?.slack());
            }
            Check::new("fixed_length").metric("length", code.length()).metric("min_slack", worst_slack).pass(worst_slack >= -1e-10)
        }
        "rate-ratio" => {
            let (model, code, _) = exact_pair(args)?;
            let depth = args.n.unwrap_or(10);
            let r = check_rate_ratio(&model, &code, depth, args.m.unwrap_or(depth))?;
            let target = r.source_rate / r.mean_len;
            Check::new("rate_ratio")
                .metric("coded_rate", r.coded_rate)
                .metric("target", target)
                .metric("ratio", r.ratio())
                .pass(r.within(RATE_TOL))
        }
        "vocab" => {
            let sf = santa_fe(args)?;
            let delta = args.delta.unwrap_or(0.75);
            let mut worst = f64::INFINITY;
            for n in 1..=args.n.unwrap_or(4) {
                let v = entropy_vocab_lower_bound(&sf, n, delta)?;
                worst = worst.min(v.entropy - v.lower_bound());
            }
            Check::new("vocab").metric("min_slack", worst).pass(worst >= -1e-10)
        }
        "coded-vocab" => {
            let sf = santa_fe(args)?;
            let v = coded_entropy_vocab_lower_bound(&sf, &conj_code(args)?, args.m.unwrap_or(6), args.delta.unwrap_or(0.55))?;
            Check::new("coded_vocab")
                .metric("entropy", v.entropy)
                .metric("lower_bound", v.lower_bound())
                .metric("vocabulary", v.vocabulary)
                .pass(v.holds())
        }
        "jensen" => {
            let j = jensen_check(args, args.m.unwrap_or(2), args.n.unwrap_or(2))?;
            Check::new("jensen").metric("averaged", j.averaged).metric("mean_shifted", j.mean_shifted).metric("gap", j.gap()).pass(j.holds())
        }
        other => return Err(CliError::Usage(format!("unknown entropy check {other:?}"))),
    };
    manifest.push(check);
    Ok(manifest)
}
