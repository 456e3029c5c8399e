//! Flat key-value experiment configuration.
//!
//! Format: `[section]` headers naming experiments, `key = value` lines, `#`
//! comments. Keys mirror CLI flags one-to-one; flags override file values.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    /// section name -> key -> (value, line number)
    pub sections: Vec<(String, BTreeMap<String, (String, usize)>)>,
}

pub fn parse(text: &str, path: &str) -> Result<ConfigFile, ConfigError> {
    let mut file = ConfigFile::default();
    let mut current: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError(format!("{path}:{lineno}: unterminated section header")))?
                .trim();
            if name.is_empty() {
                return Err(ConfigError(format!("{path}:{lineno}: empty section name")));
            }
            file.sections.push((name.to_string(), BTreeMap::new()));
            current = Some(file.sections.len() - 1);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "{path}:{lineno}: expected 'key = value', got '{line}'"
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError(format!("{path}:{lineno}: empty key")));
        }
        let section = match current {
            Some(i) => &mut file.sections[i].1,
            None => {
                // implicit default section for sectionless files
                file.sections.push(("default".to_string(), BTreeMap::new()));
                current = Some(file.sections.len() - 1);
                &mut file.sections.last_mut().unwrap().1
            }
        };
        if section.insert(key.clone(), (value, lineno)).is_some() {
            return Err(ConfigError(format!(
                "{path}:{lineno}: duplicate key '{key}' in section"
            )));
        }
    }
    Ok(file)
}

impl ConfigFile {
    pub fn section(
        &self,
        name: Option<&str>,
        path: &str,
    ) -> Result<BTreeMap<String, String>, ConfigError> {
        let entry = match name {
            Some(n) => self
                .sections
                .iter()
                .find(|(s, _)| s == n)
                .ok_or_else(|| ConfigError(format!("{path}: no experiment section '[{n}]'")))?,
            None => {
                if self.sections.len() > 1 {
                    let names: Vec<&str> =
                        self.sections.iter().map(|(s, _)| s.as_str()).collect();
                    return Err(ConfigError(format!(
                        "{path}: multiple experiment sections ({}); pick one with --experiment",
                        names.join(", ")
                    )));
                }
                match self.sections.first() {
                    Some(e) => e,
                    None => return Ok(BTreeMap::new()),
                }
            }
        };
        Ok(entry
            .1
            .iter()
            .map(|(k, (v, _))| (k.clone(), v.clone()))
            .collect())
    }
}

/// Resolved parameters: config values overridden by flags, with typed
/// access and field diagnostics.
#[derive(Debug, Default, Clone)]
pub struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    pub fn from_config(config: BTreeMap<String, String>) -> Self {
        Params { map: config }
    }

    /// Flag values take precedence over file values.
    pub fn set_flag<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.map.insert(key.to_string(), v.to_string());
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &String)> {
        self.map.iter()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                ConfigError(format!("field '{key}': cannot parse '{raw}'"))
            }),
        }
    }

    pub fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.parse(key)?.ok_or_else(|| {
            ConfigError(format!("missing required field '{key}' (flag --{} or config)", key.replace('_', "-")))
        })
    }

    pub fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    /// Comma-separated floats, e.g. "0.1,0.2".
    pub fn parse_vec(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| ConfigError(format!("field '{key}': bad number '{p}'")))
                })
                .collect::<Result<Vec<f64>, _>>()
                .map(Some),
        }
    }

    pub fn parse_u32_vec(&self, key: &str) -> Result<Option<Vec<u32>>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| ConfigError(format!("field '{key}': bad integer '{p}'")))
                })
                .collect::<Result<Vec<u32>, _>>()
                .map(Some),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_values() {
        let text = "# comment\n[run_a]\nalpha = 1.0\nn = 1000\n\n[run_b]\nalpha = 0.5\n";
        let f = parse(text, "test.cfg").unwrap();
        assert_eq!(f.sections.len(), 2);
        let a = f.section(Some("run_a"), "test.cfg").unwrap();
        assert_eq!(a["alpha"], "1.0");
        assert!(f.section(None, "test.cfg").is_err()); // ambiguous
        assert!(f.section(Some("zzz"), "test.cfg").is_err());
    }

    #[test]
    fn line_diagnostics() {
        let err = parse("[a]\nkey value\n", "f.cfg").unwrap_err();
        assert!(err.0.contains("f.cfg:2"), "{err}");
        let err = parse("[a]\nk = 1\nk = 2\n", "f.cfg").unwrap_err();
        assert!(err.0.contains("duplicate key"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let f = parse("[e]\nalpha = 1.0\nseed = 3\n", "f.cfg").unwrap();
        let mut p = Params::from_config(f.section(Some("e"), "f.cfg").unwrap());
        p.set_flag("alpha", Some(2.0f64));
        assert_eq!(p.require::<f64>("alpha").unwrap(), 2.0);
        assert_eq!(p.require::<u64>("seed").unwrap(), 3);
        assert!(p.require::<u64>("n").is_err());
    }
}
