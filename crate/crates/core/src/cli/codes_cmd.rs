use clap::Args;
use serde::{Deserialize, Serialize};

use super::specs::{parse_word, CodeChoice};
use super::{require, Check, CliError, CliResult, Context, RunManifest};
use crate::codes::{
    check_freeness, decode_prefix_stream, decode_two_sided, encode_star, kraft_sum, phase_recover, Code, Fact, KraftValue,
    TableCode,
};
use crate::strings::{Alphabet, TwoSidedWindow};

const DEFAULT_CONJ_MAX_LEN: usize = 64;

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct CodeCheckArgs {
    /// Code: a table file, or `t2`, `fixfree9`, `identity[:D]`, `conj[:A]`.
    #[arg(long)]
    pub table: Option<String>,
    /// Properties that must hold, comma-separated: prefix-free,
    /// suffix-free, fix-free, complete.
    #[arg(long)]
    pub require: Option<String>,
    /// Longest codeword counted in the Kraft sum of an infinite code.
    #[arg(long)]
    pub max_len: Option<usize>,
}

fn kraft_check(value: &KraftValue) -> Check {
    let c = Check::new("kraft").metric("kraft_sum", value.to_string()).metric("kraft_approx", value.approx());
    match value {
        KraftValue::Exact(r) => c.metric("exact", true).pass(*r.numer() <= *r.denom()),
        KraftValue::Truncated { value, tail_bound, max_len } => {
            c.metric("exact", false).metric("tail_bound", tail_bound).metric("max_len", max_len).pass(*value <= 1.0)
        }
    }
}

pub fn code_check(args: &CodeCheckArgs, _ctx: &Context) -> CliResult<RunManifest> {
    let choice = CodeChoice::parse(require(args.table.as_deref(), "table")?)?;
    let mut manifest = RunManifest::new("code-check", args);
    let required: Vec<String> = args
        .require
        .as_deref()
        .map(|r| r.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();
    match &choice {
        CodeChoice::Table { table, .. } => {
            manifest.push(kraft_check(&kraft_sum(table)));
            let f = check_freeness(table);
            let props = [
                ("prefix-free", f.prefix_free),
                ("suffix-free", f.suffix_free),
                ("fix-free", f.fix_free),
                ("complete", f.complete),
            ];
            for r in &required {
                if !props.iter().any(|(n, _)| n == r) {
                    return Err(CliError::Usage(format!("unknown property {r:?}")));
                }
            }
            let missing: Vec<&str> =
                props.iter().filter(|(n, v)| !v && required.iter().any(|r| r == n)).map(|(n, _)| *n).collect();
            manifest.push(
                Check::new("freeness")
                    .metric("codewords", table.len())
                    .metric("prefix_free", f.prefix_free)
                    .metric("suffix_free", f.suffix_free)
                    .metric("fix_free", f.fix_free)
                    .metric("complete", f.complete)
                    .metric("missing", missing.join(","))
                    .pass(missing.is_empty()),
            );
        }
        CodeChoice::Conj { code, .. } => {
            if !required.is_empty() {
                return Err(CliError::Usage("--require applies to finite tables only".into()));
            }
            manifest.push(kraft_check(&code.kraft_sum(args.max_len.unwrap_or(DEFAULT_CONJ_MAX_LEN))));
        }
    }
    Ok(manifest)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: Option<String>,
    /// Source symbols separated by spaces or commas: table labels, or
    /// `k:z` pairs for `conj`.
    #[arg(long)]
    pub input: Option<String>,
}

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

fn parse_labels(table: &TableCode, text: &str) -> CliResult<Vec<usize>> {
    tokens(text)
        .map(|t| table.symbol(t).ok_or_else(|| CliError::Usage(format!("{t:?} is not a source label of the code"))))
        .collect()
}

fn parse_facts(text: &str) -> CliResult<Vec<Fact>> {
    tokens(text)
        .map(|t| {
            let bad = || CliError::Usage(format!("expected k:z, got {t:?}"));
            let (k, z) = t.split_once(':').ok_or_else(bad)?;
            Ok(Fact::new(k.parse().map_err(|_| bad())?, z.parse().map_err(|_| bad())?))
        })
        .collect()
}

fn labels(table: &TableCode, xs: &[usize]) -> String {
    xs.iter().map(|&x| table.label(x).unwrap_or("?")).collect::<Vec<_>>().join(" ")
}

fn facts(xs: &[Fact]) -> String {
    xs.iter().map(|f| format!("{}:{}", f.k, f.z)).collect::<Vec<_>>().join(" ")
}

pub fn encode(args: &EncodeArgs, ctx: &Context) -> CliResult<RunManifest> {
    let choice = CodeChoice::parse(require(args.code.as_deref(), "code")?)?;
    let input = require(args.input.as_deref(), "input")?;
    let mut manifest = RunManifest::new("encode", args);
    let (coded, symbols, round_trip) = match &choice {
        CodeChoice::Table { table, .. } => {
            let x = parse_labels(table, input)?;
            let y = encode_star(table, &x)?;
            let rt = table.is_prefix_free().then(|| decode_prefix_stream(table, &y).map(|(d, r)| d == x && r.is_empty()));
            (y, x.len(), rt.transpose()?)
        }
        CodeChoice::Conj { code, .. } => {
            let x = parse_facts(input)?;
            let y = encode_star(code, &x)?;
            let (d, r) = decode_prefix_stream(code, &y)?;
            (y, x.len(), Some(d == x && r.is_empty()))
        }
    };
    ctx.write("encoded.txt", &format!("{coded}\n"))?;
    manifest.output("encoded.txt");
    let mut check = Check::new("encode").metric("symbols", symbols).metric("coded_len", coded.len()).metric("coded", coded.to_string());
    if let Some(ok) = round_trip {
        check = check.metric("round_trip", ok).pass(ok);
    }
    manifest.push(check);
    Ok(manifest)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: Option<String>,
    /// Coded string; for `two-sided`, `left|right` with the origin at `|`.
    #[arg(long)]
    pub input: Option<String>,
    /// `prefix` (default), `two-sided` (complete fix-free tables), or
    /// `phase` (comma codes, unknown phase).
    #[arg(long)]
    pub mode: Option<String>,
}

pub fn decode(args: &DecodeArgs, ctx: &Context) -> CliResult<RunManifest> {
    let choice = CodeChoice::parse(require(args.code.as_deref(), "code")?)?;
    let input = require(args.input.as_deref(), "input")?.trim();
    let mode = args.mode.as_deref().unwrap_or("prefix");
    let mut manifest = RunManifest::new("decode", args);
    let target = match &choice {
        CodeChoice::Table { table, .. } => table.alphabet(),
        CodeChoice::Conj { code, .. } => code.target(),
    };
    let check = Check::new("decode").metric("mode", mode);
    let (text, check) = match (mode, &choice) {
        ("prefix", _) => {
            let y = parse_word(input, target)?;
            match &choice {
                CodeChoice::Table { table, .. } => {
                    let (x, rem) = decode_prefix_stream(table, &y)?;
                    (labels(table, &x), check.metric("symbols", x.len()).metric("remainder", rem.to_string()))
                }
                CodeChoice::Conj { code, .. } => {
                    let (x, rem) = decode_prefix_stream(code, &y)?;
                    (facts(&x), check.metric("symbols", x.len()).metric("remainder", rem.to_string()))
                }
            }
        }
        ("two-sided", CodeChoice::Table { table, .. }) => {
            let (left, right) = input
                .split_once('|')
                .ok_or_else(|| CliError::Usage("two-sided input must look like left|right".into()))?;
            let window = TwoSidedWindow::new(parse_two_sided_left(left, target)?, parse_word(right, target)?);
            let d = decode_two_sided(table, &window)?;
            let text = format!("{}|{}", labels(table, &d.source.left()), labels(table, d.source.right()));
            let check = check
                .metric("symbols", d.source.len())
                .metric("left_remainder", d.left_rem.to_string())
                .metric("right_remainder", d.right_rem.to_string());
            (text, check)
        }
        ("phase", CodeChoice::Conj { code, .. }) => {
            let y = parse_word(input, target)?;
            let p = phase_recover(code, &y)?;
            let text = p.symbols.iter().map(|(o, f)| format!("{o}@{}:{}", f.k, f.z)).collect::<Vec<_>>().join(" ");
            let check =
                check.metric("symbols", p.symbols.len()).metric("head", p.head.to_string()).metric("tail", p.tail.to_string());
            (text, check)
        }
        ("two-sided", _) => return Err(CliError::Usage("two-sided decoding needs a finite table".into())),
        ("phase", _) => return Err(CliError::Usage("phase decoding needs a comma code such as conj".into())),
        (m, _) => return Err(CliError::Usage(format!("unknown decode mode {m:?}"))),
    };
    ctx.write("decoded.txt", &format!("{text}\n"))?;
    manifest.output("decoded.txt");
    manifest.push(check);
    Ok(manifest)
}

fn parse_two_sided_left(text: &str, alphabet: Alphabet) -> CliResult<Vec<u8>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_word(text, alphabet)
}
