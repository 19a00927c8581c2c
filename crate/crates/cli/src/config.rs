use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use codimlab_core::codim::Mode;
use codimlab_core::{FlavorKind, ModelDescriptor, Rational, WordSpec};
use serde::Deserialize;

use crate::CliError;

/// Values read from `--config`; any flag given on the command line wins.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelDescriptor>,
    pub m: Option<u32>,
    pub d: Option<u32>,
    pub word: Option<String>,
    pub flavor: Option<FlavorKind>,
    pub unital: Option<bool>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub t: Option<usize>,
    pub mode: Option<Mode>,
    pub primes: Option<Vec<u64>>,
    pub precision: Option<u32>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub gamma: Option<Vec<String>>,
    pub eps: Option<String>,
    pub a: Option<String>,
    pub moves: Option<usize>,
    pub h: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct ModelArgs {
    /// JSON model descriptor: {"m":2,"d":1,"word":{...},"flavor":"windowed","unital":false}
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    /// periodic:0110, mechanical:p/q, sturmian:1,2,1 or JSON
    #[arg(long)]
    pub word: Option<String>,
    /// windowed or periodic-wrap
    #[arg(long)]
    pub flavor: Option<FlavorKind>,
    /// Adjoin an external unit
    #[arg(long)]
    pub unital: bool,
}

fn missing(what: &str) -> CliError {
    CliError::Input(format!("missing --{what}"))
}

impl ModelArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<ModelDescriptor, CliError> {
        let base = match &self.model {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
                Some(
                    serde_json::from_str::<ModelDescriptor>(&text)
                        .map_err(|e| CliError::Input(format!("bad model {}: {e}", path.display())))?,
                )
            }
            None => file.model.clone(),
        };
        let word = match self.word.as_ref().or(file.word.as_ref()) {
            Some(w) => Some(w.parse::<WordSpec>()?),
            None => base.as_ref().map(|b| b.word.clone()),
        };
        let pick = |flag: Option<u32>, file: Option<u32>, base: Option<u32>, name: &str| {
            flag.or(file).or(base).ok_or_else(|| missing(name))
        };
        let desc = ModelDescriptor {
            m: pick(self.m, file.m, base.as_ref().map(|b| b.m), "m")?,
            d: pick(self.d, file.d, base.as_ref().map(|b| b.d), "d")?,
            word: word.ok_or_else(|| missing("word"))?,
            flavor: self
                .flavor
                .or(file.flavor)
                .or(base.as_ref().map(|b| b.flavor))
                .unwrap_or(FlavorKind::Windowed),
            unital: self.unital
                || file.unital.unwrap_or(false)
                || base.as_ref().is_some_and(|b| b.unital),
        };
        desc.params()?;
        Ok(desc)
    }
}

/// Integers, `p/q`, decimals and scientific notation, parsed exactly.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Input(format!("cannot parse {s:?} as a number"));
    let s = s.trim();
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|_| bad());
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits = Rational::from(format!("{int}{frac}").parse::<rug::Integer>().map_err(|_| bad())?);
    let scale = exp - frac.len() as i32;
    let ten = Rational::from(10);
    let factor = if scale >= 0 {
        (0..scale).fold(Rational::from(1), |acc, _| acc * &ten)
    } else {
        (0..-scale).fold(Rational::from(1), |acc, _| acc / &ten)
    };
    let value = digits * factor;
    Ok(if neg { -value } else { value })
}
