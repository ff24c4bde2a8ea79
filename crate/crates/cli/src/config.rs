//! Flat `key = value` experiment manifests. Blank lines and `#` comments are
//! ignored; keys use the long flag names without dashes (`rate`, `sigma`...).
//! Command-line flags take precedence over manifest entries.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use dgff::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                return Err(Error::Parse(format!("config line {}: empty key", i + 1)));
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("config line {}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Flag value if given, else the manifest entry, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("config key '{key}': bad value '{s}'"))),
        }
    }

    pub fn pick_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    /// Comma-separated list: the flag wins when non-empty.
    pub fn pick_list<T: FromStr + Clone>(&self, flag: &[T], key: &str, default: &[T]) -> Result<Vec<T>> {
        if !flag.is_empty() {
            return Ok(flag.to_vec());
        }
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("config key '{key}': bad list item '{p}'")))
                })
                .collect(),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let m = Manifest::parse("# run\nrate = 0.3, 0.5\nsigma=0.1 # noisy\nseed = 7\n").unwrap();
        assert_eq!(m.pick_list::<f64>(&[], "rate", &[1.0]).unwrap(), vec![0.3, 0.5]);
        assert_eq!(m.pick_list(&[0.9], "rate", &[1.0]).unwrap(), vec![0.9]);
        assert_eq!(m.pick::<u64>(None, "seed").unwrap(), Some(7));
        assert_eq!(m.pick(Some(3u64), "seed").unwrap(), Some(3));
        assert_eq!(m.pick_or(None, "trials", 5usize).unwrap(), 5);
        assert!(m.pick::<u64>(None, "sigma").is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(Manifest::parse("rate 0.3").is_err());
        assert!(Manifest::parse("a=1\na=2").is_err());
        assert!(Manifest::parse(" = 3").is_err());
    }
}
