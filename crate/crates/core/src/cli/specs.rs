use std::path::Path;

use super::{CliError, CliResult};
use crate::codes::{ConjCode, TableCode};
use crate::processes::{IidModel, SantaFeModel};
use crate::strings::Alphabet;

const T2: &str = include_str!("../../data/t2.txt");
const FIXFREE9: &str = include_str!("../../data/fixfree9.txt");

/// A code named on the command line: a built-in (`t2`, `fixfree9`,
/// `identity[:D]`, `conj[:A]`) or a path to a table file.
#[derive(Clone)]
pub enum CodeChoice {
    Table { name: String, table: TableCode },
    Conj { name: String, code: ConjCode },
}

impl CodeChoice {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let table = |name: &str, text: &str| -> CliResult<Self> {
            Ok(CodeChoice::Table { name: name.to_string(), table: TableCode::parse_text(text)? })
        };
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let number = |a: Option<&str>, default: usize| -> CliResult<usize> {
            a.map_or(Ok(default), |a| a.parse().map_err(|_| CliError::Usage(format!("bad number in code {spec:?}"))))
        };
        match head {
            "t2" => return table("t2", T2),
            "fixfree9" => return table("fixfree9", FIXFREE9),
            "identity" => {
                let d = number(arg, 2)?;
                return Ok(CodeChoice::Table { name: spec.to_string(), table: TableCode::identity(Alphabet::new(d)?) });
            }
            "conj" => {
                let a = number(arg, 1)?;
                let a = u32::try_from(a).map_err(|_| CliError::Usage("payload length too large".into()))?;
                return Ok(CodeChoice::Conj { name: spec.to_string(), code: ConjCode::new(a) });
            }
            _ => {}
        }
        let path = Path::new(spec);
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
            return table(spec, &text);
        }
        match path.file_stem().and_then(|s| s.to_str()) {
            Some("t2") => table("t2", T2),
            Some("fixfree9") => table("fixfree9", FIXFREE9),
            _ => Err(CliError::Usage(format!("unknown code {spec:?}: not a built-in and no such file"))),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            CodeChoice::Table { name, .. } | CodeChoice::Conj { name, .. } => name,
        }
    }

    pub fn table(&self) -> CliResult<&TableCode> {
        match self {
            CodeChoice::Table { table, .. } => Ok(table),
            CodeChoice::Conj { .. } => Err(CliError::Usage(format!("code {} is not a finite table", self.name()))),
        }
    }
}

/// A source named on the command line: `iid-fair`, `iid:p0,p1,…`,
/// `uniform:D`, or `santa-fe`.
#[derive(Debug, Clone)]
pub enum ModelChoice {
    Iid(IidModel),
    SantaFe,
}

impl ModelChoice {
    pub fn parse(spec: &str) -> CliResult<Self> {
        match spec.split_once(':') {
            None if spec == "iid-fair" => Ok(ModelChoice::Iid(IidModel::fair_coin())),
            None if spec == "santa-fe" => Ok(ModelChoice::SantaFe),
            Some(("iid", pmf)) => {
                let pmf = pmf
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad mass {p:?}"))))
                    .collect::<CliResult<Vec<f64>>>()?;
                Ok(ModelChoice::Iid(IidModel::new(pmf)?))
            }
            Some(("uniform", d)) => {
                let d: usize = d.parse().map_err(|_| CliError::Usage(format!("bad alphabet size {d:?}")))?;
                if d == 0 {
                    return Err(CliError::Usage("uniform needs at least one symbol".into()));
                }
                Ok(ModelChoice::Iid(IidModel::uniform(d)))
            }
            _ => Err(CliError::Usage(format!("unknown model {spec:?}"))),
        }
    }

    pub fn santa_fe(alpha: f64, k_max: Option<u64>) -> CliResult<SantaFeModel> {
        Ok(match k_max {
            Some(k) => SantaFeModel::with_k_max(alpha, k)?,
            None => SantaFeModel::new(alpha)?,
        })
    }
}

/// Parses a word over `alphabet` written in base-36 digits.
pub fn parse_word(text: &str, alphabet: Alphabet) -> CliResult<Vec<u8>> {
    Ok(alphabet.parse(text.trim())?.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_codes() {
        assert_eq!(CodeChoice::parse("t2").unwrap().table().unwrap().len(), 2);
        assert_eq!(CodeChoice::parse("fixfree9.txt").unwrap().table().unwrap().len(), 9);
        assert_eq!(CodeChoice::parse("identity:3").unwrap().table().unwrap().len(), 3);
        assert!(CodeChoice::parse("conj").unwrap().table().is_err());
        assert!(CodeChoice::parse("nope").is_err());
    }

    #[test]
    fn models() {
        assert!(matches!(ModelChoice::parse("iid:0.25,0.75").unwrap(), ModelChoice::Iid(_)));
        assert!(ModelChoice::parse("iid:0.2,0.7").is_err());
        assert!(matches!(ModelChoice::parse("santa-fe").unwrap(), ModelChoice::SantaFe));
        assert!(ModelChoice::parse("uniform:0").is_err());
    }
}
