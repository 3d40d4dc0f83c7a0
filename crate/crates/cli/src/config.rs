use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use loewner_core::{FamilySpec, MapFamily, ResultId, SpectrumBound};

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "LOEWNER_LAB_SEED";
pub const DEFAULT_SEED: u64 = 42;

/// Invalid configuration; `field` names the offending key.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error in `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`, expected json or csv")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// One verification run. `functions` and `maps` left empty fall back to the
/// defaults of each result.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SuiteConfig {
    pub results: Vec<ResultId>,
    pub dims: Vec<usize>,
    pub trials_per_result: usize,
    pub bounds: Vec<SpectrumBound>,
    pub functions: Vec<FamilySpec>,
    pub maps: Vec<MapFamily>,
    pub seed: u64,
    pub rtol: f64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output_path: Option<PathBuf>,
}

pub fn default_bounds() -> Vec<SpectrumBound> {
    [(1.0, 4.0), (1.5, 4.0), (1.0, 1.6), (0.5, 2.0)]
        .into_iter()
        .map(|(m, big_m)| SpectrumBound::new(m, big_m).expect("static bounds"))
        .collect()
}

/// Maps exercised for a result when the configuration names none. The mean
/// chains accept non-normalized maps, so they also get scaled maps.
pub fn default_maps(result: ResultId) -> Vec<MapFamily> {
    let mut maps = vec![MapFamily::Compression, MapFamily::Mixture, MapFamily::Pinching, MapFamily::Trace];
    if !result.needs_normalized_map() {
        maps.push(MapFamily::Scaled);
    }
    maps
}

pub fn default_functions(result: ResultId) -> Vec<FamilySpec> {
    result
        .default_families()
        .iter()
        .map(|s| s.parse().expect("static family label"))
        .collect()
}

/// Seed from [`SEED_ENV`], falling back to [`DEFAULT_SEED`].
pub fn env_seed() -> Result<u64, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|e| ConfigError::new("seed", format!("{SEED_ENV}=`{s}`: {e}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            results: ResultId::ALL.to_vec(),
            dims: vec![1, 2, 4, 8],
            trials_per_result: 200,
            bounds: default_bounds(),
            functions: Vec::new(),
            maps: Vec::new(),
            seed: DEFAULT_SEED,
            rtol: loewner_core::linalg::DEFAULT_RTOL,
            format: Format::Json,
            output_path: None,
        }
    }
}

fn list<T, E: fmt::Display>(field: &str, value: &str, parse: impl Fn(&str) -> Result<T, E>) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(|e| ConfigError::new(field, e.to_string())))
        .collect()
}

impl SuiteConfig {
    /// Sets one key from its text value. Keys match the command line flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key.trim() {
            "results" => self.results = list("results", value, ResultId::from_str)?,
            "dims" => self.dims = list("dims", value, usize::from_str)?,
            "trials" | "trials_per_result" => {
                self.trials_per_result = value.parse().map_err(|e| ConfigError::new("trials", format!("{e}")))?
            }
            "bounds" => self.bounds = list("bounds", value, SpectrumBound::from_str)?,
            "functions" => self.functions = list("functions", value, FamilySpec::from_str)?,
            "maps" => self.maps = list("maps", value, MapFamily::from_str)?,
            "seed" => self.seed = value.parse().map_err(|e| ConfigError::new("seed", format!("{e}")))?,
            "rtol" => self.rtol = value.parse().map_err(|e| ConfigError::new("rtol", format!("{e}")))?,
            "format" => self.format = value.parse().map_err(|e: String| ConfigError::new("format", e))?,
            "out" | "output_path" => self.output_path = Some(PathBuf::from(value)),
            other => return Err(ConfigError::new(other, "unknown key")),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; blank lines and `#` comments are
    /// ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new("config", format!("line {}: expected key = value", i + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_overrides(&mut self, overrides: &BTreeMap<&str, String>) -> Result<(), ConfigError> {
        for (k, v) in overrides {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials_per_result < 1 {
            return Err(ConfigError::new("trials", "need at least one trial"));
        }
        if self.results.is_empty() {
            return Err(ConfigError::new("results", "no results selected"));
        }
        if self.dims.is_empty() {
            return Err(ConfigError::new("dims", "no dimensions selected"));
        }
        if let Some(d) = self.dims.iter().find(|d| !(1..=loewner_core::linalg::MAX_DIM).contains(*d)) {
            return Err(ConfigError::new(
                "dims",
                format!("{d} outside 1..={}", loewner_core::linalg::MAX_DIM),
            ));
        }
        if self.bounds.is_empty() {
            return Err(ConfigError::new("bounds", "no bounds selected"));
        }
        if let Some(b) = self.bounds.iter().find(|b| b.lower() <= 0.0) {
            return Err(ConfigError::new("bounds", format!("{b}: need m > 0")));
        }
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(ConfigError::new("rtol", format!("{} is not a positive tolerance", self.rtol)));
        }
        Ok(())
    }

    pub fn functions_for(&self, result: ResultId) -> Vec<FamilySpec> {
        if self.functions.is_empty() {
            default_functions(result)
        } else {
            self.functions.clone()
        }
    }

    pub fn maps_for(&self, result: ResultId) -> Vec<MapFamily> {
        if self.maps.is_empty() {
            default_maps(result)
        } else {
            self.maps.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = SuiteConfig::default();
        c.apply_text("# run\ntrials = 5\ndims = 1, 2\nbounds = 1:4,2:3\nmaps = trace\n").unwrap();
        assert_eq!(c.trials_per_result, 5);
        assert_eq!(c.dims, vec![1, 2]);
        assert_eq!(c.bounds.len(), 2);
        let mut flags = BTreeMap::new();
        flags.insert("trials", "7".to_string());
        c.apply_overrides(&flags).unwrap();
        assert_eq!(c.trials_per_result, 7);
        assert_eq!(c.maps, vec![MapFamily::Trace]);
    }

    #[test]
    fn errors_name_the_field() {
        let mut c = SuiteConfig::default();
        assert_eq!(c.set("dims", "1,x").unwrap_err().field, "dims");
        assert_eq!(c.set("colour", "red").unwrap_err().field, "colour");
        assert_eq!(c.apply_text("trials 5").unwrap_err().field, "config");
        c.trials_per_result = 0;
        assert_eq!(c.validate().unwrap_err().field, "trials");
        let mut c = SuiteConfig::default();
        c.dims = vec![65];
        assert_eq!(c.validate().unwrap_err().field, "dims");
    }

    #[test]
    fn defaults() {
        let c = SuiteConfig::default();
        c.validate().unwrap();
        assert_eq!(c.maps_for(ResultId::GeometricMean).len(), 5);
        assert_eq!(c.maps_for(ResultId::MondPecaric).len(), 4);
        assert_eq!(c.functions_for(ResultId::InverseReverse), vec![FamilySpec::Power(-1.0)]);
    }
}
