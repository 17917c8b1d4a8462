//! Size bounds for user-facing computations, read from a `key = value`
//! file. Anything beyond a bound is refused up front instead of being left
//! to run out of time or memory.

use std::path::Path;

use crate::error::{Error, Result};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "QVIR_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest level for an exact Kac determinant or Gram matrix.
    pub kac_exact: u32,
    /// Largest level for modular (probabilistic) Kac checks.
    pub kac_probabilistic: u32,
    /// Largest degree for partition enumeration and basis changes.
    pub partitions: u32,
    /// Largest `|λ|` for Macdonald polynomials.
    pub macdonald: u32,
    /// Largest `rs` for singular vectors.
    pub singular: u32,
    /// Largest `r` for the rational sum identity.
    pub sum_identity: u32,
    /// Largest truncation level `L` for Fock-space checks.
    pub truncation: u32,
    /// Largest `|n|` for modes in Fock-space checks.
    pub mode: u32,
    /// Largest `N` (number of variables) for the Macdonald operator.
    pub variables: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            kac_exact: 6,
            kac_probabilistic: 8,
            partitions: 12,
            macdonald: 8,
            singular: 6,
            sum_identity: 5,
            truncation: 6,
            mode: 6,
            variables: 12,
        }
    }
}

const KEYS: [&str; 9] = [
    "kac_exact",
    "kac_probabilistic",
    "partitions",
    "macdonald",
    "singular",
    "sum_identity",
    "truncation",
    "mode",
    "variables",
];

impl Bounds {
    fn slot(&mut self, key: &str) -> Option<&mut u32> {
        Some(match key {
            "kac_exact" => &mut self.kac_exact,
            "kac_probabilistic" => &mut self.kac_probabilistic,
            "partitions" => &mut self.partitions,
            "macdonald" => &mut self.macdonald,
            "singular" => &mut self.singular,
            "sum_identity" => &mut self.sum_identity,
            "truncation" => &mut self.truncation,
            "mode" => &mut self.mode,
            "variables" => &mut self.variables,
            _ => return None,
        })
    }

    /// Defaults overridden by the lines of `text`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Bounds> {
        let mut b = Bounds::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("config line {}: expected key = value", no + 1)))?;
            let key = key.trim();
            let slot = b.slot(key).ok_or_else(|| {
                Error::Invalid(format!(
                    "config line {}: unknown key '{key}' (known: {})",
                    no + 1,
                    KEYS.join(", ")
                ))
            })?;
            *slot = value
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("config line {}: '{}' is not a count", no + 1, value.trim())))?;
        }
        Ok(b)
    }

    pub fn load(path: &Path) -> Result<Bounds> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Bounds::parse(&text)
    }

    /// Explicit path, else the file named by `QVIR_CONFIG`, else defaults.
    pub fn resolve(path: Option<&Path>) -> Result<Bounds> {
        match path {
            Some(p) => Bounds::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) => Bounds::load(Path::new(&p)),
                None => Ok(Bounds::default()),
            },
        }
    }

    /// Errors unless `value <= max`.
    pub fn check(what: &str, value: i64, max: u32) -> Result<()> {
        if value > max as i64 {
            return Err(Error::Bound {
                what: what.to_string(),
                value,
                max: max as i64,
            });
        }
        Ok(())
    }

    /// These bounds in config-file format.
    pub fn to_text(&self) -> String {
        let mut b = self.clone();
        let mut out = String::from("# qvir bounds; every key is optional\n");
        for key in KEYS {
            let v = *b.slot(key).expect("known key");
            out.push_str(&format!("{key} = {v}\n"));
        }
        out
    }

    /// The config file format, with every key at its default.
    pub fn template() -> String {
        Bounds::default().to_text()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_round_trips() {
        assert_eq!(Bounds::parse(&Bounds::template()).unwrap(), Bounds::default());
    }

    #[test]
    fn overrides_and_errors() {
        let b = Bounds::parse("# comment\n\nkac_exact = 3\n singular=2 \n").unwrap();
        assert_eq!(b.kac_exact, 3);
        assert_eq!(b.singular, 2);
        assert_eq!(b.macdonald, 8);
        assert!(Bounds::parse("nonsense = 1").is_err());
        assert!(Bounds::parse("kac_exact 1").is_err());
        assert!(Bounds::parse("kac_exact = -1").is_err());
    }

    #[test]
    fn check_refuses_beyond_bound() {
        assert!(Bounds::check("level", 6, 6).is_ok());
        assert!(matches!(Bounds::check("level", 7, 6), Err(Error::Bound { .. })));
    }
}
