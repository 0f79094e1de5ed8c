//! Plain `key = value` configuration files with `[section]` headers and
//! `include = file` composition; relative paths resolve against the file
//! that states them.

use crate::bounds::{BalanceSheetInputs, EstimationParams, ForwardConvention, IiBasis, Scenario};
use crate::error::{Error, Result};
use std::path::{Path, PathBuf};

/// A raw value together with where it came from, so paths resolve relative
/// to their own file and errors point at the right line.
#[derive(Debug, Clone)]
pub struct ConfigValue {
    pub value: String,
    pub file: PathBuf,
    pub line: usize,
}

impl ConfigValue {
    /// Resolves the value as a path relative to its source file.
    pub fn as_path(&self) -> PathBuf {
        let dir = self.file.parent().unwrap_or_else(|| Path::new("."));
        dir.join(&self.value)
    }

    pub fn as_f64(&self) -> Result<f64> {
        self.value
            .parse()
            .map_err(|_| Error::parse(&self.file, self.line, format!("expected a number, got {:?}", self.value)))
    }

    pub fn as_usize(&self) -> Result<usize> {
        self.value
            .parse()
            .map_err(|_| Error::parse(&self.file, self.line, format!("expected an integer, got {:?}", self.value)))
    }

    pub fn as_u64(&self) -> Result<u64> {
        self.value
            .parse()
            .map_err(|_| Error::parse(&self.file, self.line, format!("expected an integer, got {:?}", self.value)))
    }

    pub fn as_bool(&self) -> Result<bool> {
        match self.value.as_str() {
            "true" | "yes" | "on" => Ok(true),
            "false" | "no" | "off" => Ok(false),
            other => Err(Error::parse(&self.file, self.line, format!("expected true/false, got {other:?}"))),
        }
    }
}

/// Parsed configuration tree: ordered (section, key, value) entries after
/// include expansion.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: Vec<(String, String, ConfigValue)>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let mut cfg = Config::default();
        let mut stack = Vec::new();
        cfg.load_into(path, &mut stack)?;
        Ok(cfg)
    }

    fn load_into(&mut self, path: &Path, stack: &mut Vec<PathBuf>) -> Result<()> {
        let canonical = path
            .canonicalize()
            .map_err(|source| Error::Io { path: path.into(), source })?;
        if stack.contains(&canonical) {
            return Err(Error::domain(format!("include cycle at {}", path.display())));
        }
        stack.push(canonical);
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(path, idx + 1, "unterminated section header"))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(path, idx + 1, "expected key = value"))?;
            let key = key.trim().to_string();
            let value = ConfigValue {
                value: value.trim().to_string(),
                file: path.into(),
                line: idx + 1,
            };
            if key == "include" && section.is_empty() {
                let target = value.as_path();
                self.load_into(&target, stack)?;
            } else {
                self.entries.push((section.clone(), key, value));
            }
        }
        stack.pop();
        Ok(())
    }

    /// Last value wins for scalar keys, so later files override includes.
    pub fn get(&self, section: &str, key: &str) -> Option<&ConfigValue> {
        self.entries
            .iter()
            .rev()
            .find(|(s, k, _)| s == section && k == key)
            .map(|(_, _, v)| v)
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&ConfigValue> {
        self.get(section, key)
            .ok_or_else(|| Error::domain(format!("missing key {key:?} in section [{section}]")))
    }

    /// All values of a repeatable key, in file order.
    pub fn get_all(&self, section: &str, key: &str) -> Vec<&ConfigValue> {
        self.entries
            .iter()
            .filter(|(s, k, _)| s == section && k == key)
            .map(|(_, _, v)| v)
            .collect()
    }

    pub fn section_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for (s, _, _) in &self.entries {
            if !names.contains(&s.as_str()) {
                names.push(s);
            }
        }
        names
    }
}

/// One valuation date pulled from a `[date YYYY]` section.
#[derive(Debug, Clone)]
pub struct DateSetup {
    pub label: String,
    pub bs: BalanceSheetInputs,
    pub curve_path: PathBuf,
}

/// Calibration inputs from the `[calibration]` section.
#[derive(Debug, Clone)]
pub struct CalibrationSetup {
    pub gamma_aggregates: PathBuf,
    pub nph_aggregates: PathBuf,
    pub tau: f64,
}

/// Golden tables from the `[reference]` section.
#[derive(Debug, Clone)]
pub struct ReferenceSetup {
    pub base: PathBuf,
    pub base_pct: PathBuf,
    pub sensitivities: PathBuf,
    pub calibration: PathBuf,
}

/// Monte Carlo settings from the `[simulator]` section.
#[derive(Debug, Clone, Copy)]
pub struct SimulatorSetup {
    pub paths: usize,
    pub seed: u64,
    pub rate_vol: f64,
}

/// Fully resolved run setup assembled from a config tree.
#[derive(Debug, Clone)]
pub struct Setup {
    pub dates: Vec<DateSetup>,
    pub params: EstimationParams,
    pub vols_path: PathBuf,
    pub scenarios: Vec<Scenario>,
    pub calibration: Option<CalibrationSetup>,
    pub reference: Option<ReferenceSetup>,
    pub simulator: Option<SimulatorSetup>,
}

impl Setup {
    pub fn from_config(cfg: &Config) -> Result<Setup> {
        let mut dates = Vec::new();
        for name in cfg.section_names() {
            let Some(label) = name.strip_prefix("date ") else { continue };
            let f = |key: &str| cfg.require(name, key)?.as_f64();
            let bs = BalanceSheetInputs {
                lp0: f("lp0")?,
                sf0: f("sf0")?,
                ug0: f("ug0")?,
                gb: f("gb")?,
                fdb_reported: f("fdb_reported")?,
                rho: f("rho")?,
                gamma: f("gamma")?,
            };
            dates.push(DateSetup {
                label: label.trim().to_string(),
                bs,
                curve_path: cfg.require(name, "curve")?.as_path(),
            });
        }
        if dates.is_empty() {
            return Err(Error::domain("no [date ...] sections in configuration"));
        }

        let mut params = EstimationParams::default();
        if let Some(v) = cfg.get("params", "gph") {
            params.gph = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "sigma") {
            params.sigma = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "nu") {
            params.nu = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "h") {
            params.half_life = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "d") {
            params.ug_half_life = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "horizon") {
            params.horizon = v.as_usize()?;
        }
        if let Some(v) = cfg.get("params", "cv_product") {
            params.cv_product = v.as_f64()?;
        }
        if let Some(v) = cfg.get("params", "article91") {
            params.article91 = v.as_bool()?;
        }
        if let Some(v) = cfg.get("params", "theta") {
            params.theta = Some(v.as_f64()?);
        }
        if let Some(v) = cfg.get("params", "forward_convention") {
            params.forward_convention = match v.value.as_str() {
                "simple" => ForwardConvention::Simple,
                "difference" => ForwardConvention::Difference,
                other => {
                    return Err(Error::parse(&v.file, v.line, format!("unknown forward convention {other:?}")))
                }
            };
        }
        if let Some(v) = cfg.get("params", "ii_basis") {
            params.ii_basis = match v.value.as_str() {
                "grossed" => IiBasis::Grossed,
                "plain" => IiBasis::Plain,
                other => return Err(Error::parse(&v.file, v.line, format!("unknown ii basis {other:?}"))),
            };
        }
        let vols_path = cfg.require("params", "vols")?.as_path();

        let mut scenarios = Vec::new();
        for v in cfg.get_all("scenarios", "scenario") {
            scenarios.push(Scenario::parse(&v.value)
                .map_err(|e| Error::parse(&v.file, v.line, e.to_string()))?);
        }

        let calibration = match cfg.get("calibration", "tau") {
            Some(tau) => Some(CalibrationSetup {
                gamma_aggregates: cfg.require("calibration", "gamma_aggregates")?.as_path(),
                nph_aggregates: cfg.require("calibration", "nph_aggregates")?.as_path(),
                tau: tau.as_f64()?,
            }),
            None => None,
        };

        let reference = match cfg.get("reference", "base") {
            Some(base) => Some(ReferenceSetup {
                base: base.as_path(),
                base_pct: cfg.require("reference", "base_pct")?.as_path(),
                sensitivities: cfg.require("reference", "sensitivities")?.as_path(),
                calibration: cfg.require("reference", "calibration")?.as_path(),
            }),
            None => None,
        };

        let simulator = match cfg.get("simulator", "paths") {
            Some(paths) => Some(SimulatorSetup {
                paths: paths.as_usize()?,
                seed: cfg.require("simulator", "seed")?.as_u64()?,
                rate_vol: cfg.require("simulator", "rate_vol")?.as_f64()?,
            }),
            None => None,
        };

        Ok(Setup {
            dates,
            params,
            vols_path,
            scenarios,
            calibration,
            reference,
            simulator,
        })
    }

    pub fn load(path: &Path) -> Result<Setup> {
        Setup::from_config(&Config::load(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_sections_includes_and_repeats() {
        let dir = std::env::temp_dir().join(format!("fdbcfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        write_file(&dir, "inner.conf", "[params]\ngph = 0.7\nvols = vols.csv\n");
        let main = write_file(
            &dir,
            "main.conf",
            "include = inner.conf\n[scenarios]\nscenario = d=10\nscenario = h=12\n[params]\ngph = 0.755\n",
        );
        let cfg = Config::load(&main).unwrap();
        assert_eq!(cfg.get("params", "gph").unwrap().value, "0.755");
        let scen = cfg.get_all("scenarios", "scenario");
        assert_eq!(scen.len(), 2);
        assert_eq!(scen[0].value, "d=10");
        // Paths resolve against the file that declares them.
        assert_eq!(cfg.get("params", "vols").unwrap().as_path(), dir.join("vols.csv"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn include_cycle_is_an_error() {
        let dir = std::env::temp_dir().join(format!("fdbcyc-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        write_file(&dir, "a.conf", "include = b.conf\n");
        let b = write_file(&dir, "b.conf", "include = a.conf\n");
        assert!(Config::load(&b).unwrap_err().to_string().contains("cycle"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn bundled_setup_loads() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/base.conf");
        let setup = Setup::load(&path).unwrap();
        assert_eq!(setup.dates.len(), 3);
        assert_eq!(setup.scenarios.len(), 14);
        assert!(setup.params.article91);
        assert!(setup.calibration.is_some());
        assert!(setup.reference.is_some());
        let sim = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/simulate.conf");
        let setup = Setup::load(&sim).unwrap();
        assert_eq!(setup.simulator.unwrap().paths, 10000);
    }
}
