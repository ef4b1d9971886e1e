use std::collections::BTreeMap;
use std::path::Path;

use planarhopf_core::coactions::PiNorm;
use planarhopf_core::rough_model::RenormCharacter;
use planarhopf_core::tree_core::{parse_rational, parse_tree};
use planarhopf_core::{Rational, RegularityConfig, VertexDec};
use serde::Deserialize;

use crate::{CliError, Result};

/// On-disk configuration. Rationals are strings such as "49/100".
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub d: Option<usize>,
    #[serde(default)]
    pub alphas: BTreeMap<String, String>,
    #[serde(default)]
    pub kernels: BTreeMap<String, String>,
    pub truncation: Option<usize>,
    pub pi: Option<String>,
    pub alphabet: Option<Vec<String>>,
    /// Letter coefficients of the generator of the exponential path.
    #[serde(rename = "L", default)]
    pub letters: BTreeMap<String, String>,
    pub cap: Option<u32>,
    /// Renormalisation character for the model, tree → value.
    #[serde(default)]
    pub ell: BTreeMap<String, String>,
}

/// Everything an evaluation depends on. Fixed once built.
#[derive(Clone, Debug)]
pub struct Session {
    pub cfg: RegularityConfig,
    pub norm: PiNorm,
    pub alphabet: Vec<VertexDec>,
    pub letters: BTreeMap<u32, Rational>,
    pub cap: u32,
    pub ell: RenormCharacter,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            cfg: RegularityConfig::default(),
            norm: PiNorm::Eulerian,
            alphabet: vec![VertexDec::label("x")],
            letters: BTreeMap::from([(0, Rational::from_integer(1.into()))]),
            cap: 2,
            ell: RenormCharacter::default(),
        }
    }
}

pub fn rational(s: &str, what: &str) -> Result<Rational> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Config(format!("{what}: '{s}' is not a rational")))
}

fn index(s: &str, what: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| CliError::Config(format!("{what}: key '{s}' is not an index")))
}

pub fn parse_alphabet(s: &str) -> Vec<VertexDec> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(VertexDec::label).collect()
}

impl Session {
    pub fn from_json(src: &str) -> Result<Session> {
        let file: ConfigFile = serde_json::from_str(src).map_err(|e| CliError::Config(e.to_string()))?;
        Session::from_config(&file)
    }

    pub fn load(path: &Path) -> Result<Session> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Session::from_json(&src)
    }

    pub fn from_config(file: &ConfigFile) -> Result<Session> {
        let mut s = Session::default();
        if let Some(d) = file.d {
            if d == 0 {
                return Err(CliError::Config("d must be positive".into()));
            }
            s.cfg.d = d;
        }
        if let Some(n) = file.truncation {
            s.cfg.truncation = n;
        }
        for (k, v) in &file.alphas {
            s.cfg.alphas.insert(index(k, "alphas")?, rational(v, "alphas")?);
        }
        for (k, v) in &file.kernels {
            s.cfg.kernels.insert(index(k, "kernels")?, rational(v, "kernels")?);
        }
        if let Some(p) = &file.pi {
            s.norm = p.parse().map_err(CliError::Config)?;
        }
        if let Some(a) = &file.alphabet {
            s.alphabet = a.iter().map(|x| VertexDec::label(x)).collect();
        }
        if !file.letters.is_empty() {
            s.letters = BTreeMap::new();
            for (k, v) in &file.letters {
                s.letters.insert(index(k, "L")?, rational(v, "L")?);
            }
        }
        if let Some(c) = file.cap {
            s.cap = c;
        }
        for (k, v) in &file.ell {
            let t = parse_tree(k).map_err(|e| CliError::Config(format!("ell: {e}")))?;
            s.ell.values.insert(t, rational(v, "ell")?);
        }
        Ok(s)
    }
}
