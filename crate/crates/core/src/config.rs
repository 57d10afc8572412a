//! Run configuration: budgets, output format and the sampling seed.

use thiserror::Error;

use crate::eulerian;
use crate::hochschild::DEFAULT_BUDGET;
use crate::report::Format;

pub const DEFAULT_HKR_DEGREE: u32 = 6;
pub const DEFAULT_SEED: u64 = 20240917;

/// Environment variables read by [`Config::from_env`].
pub const ENV_BUDGET: &str = "HOCHDEF_BUDGET";
pub const ENV_EULER_BOUND: &str = "HOCHDEF_EULER_BOUND";
pub const ENV_HKR_DEGREE: &str = "HOCHDEF_HKR_DEGREE";
pub const ENV_SEED: &str = "HOCHDEF_SEED";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{name} must be positive")]
    NotPositive { name: &'static str },
    #[error("cannot parse {name}={value}")]
    Parse { name: &'static str, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest cochain-space dimension materialized by the full complex.
    pub budget: u64,
    /// Largest `n` for computations in `Q[S_n]`.
    pub euler_bound: usize,
    /// Largest total monomial degree in HKR checks.
    pub hkr_degree: u32,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: DEFAULT_BUDGET,
            euler_bound: eulerian::DEFAULT_BOUND,
            hkr_degree: DEFAULT_HKR_DEGREE,
            format: Format::Human,
            seed: DEFAULT_SEED,
        }
    }
}

impl Config {
    /// Defaults overridden by `HOCHDEF_*` environment variables.
    pub fn from_env() -> Result<Self, ConfigError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        fn read<T: std::str::FromStr>(get: &impl Fn(&str) -> Option<String>, name: &'static str, default: T) -> Result<T, ConfigError> {
            match get(name) {
                None => Ok(default),
                Some(v) => v.trim().parse().map_err(|_| ConfigError::Parse { name, value: v }),
            }
        }
        let d = Config::default();
        let cfg = Config {
            budget: read(&get, ENV_BUDGET, d.budget)?,
            euler_bound: read(&get, ENV_EULER_BOUND, d.euler_bound)?,
            hkr_degree: read(&get, ENV_HKR_DEGREE, d.hkr_degree)?,
            format: d.format,
            seed: read(&get, ENV_SEED, d.seed)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget == 0 {
            return Err(ConfigError::NotPositive { name: "budget" });
        }
        if self.euler_bound == 0 {
            return Err(ConfigError::NotPositive { name: "euler bound" });
        }
        if self.hkr_degree == 0 {
            return Err(ConfigError::NotPositive { name: "hkr degree" });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn lookup(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let m: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| m.get(k).cloned()
    }

    #[test]
    fn overrides() {
        let c = Config::from_lookup(lookup(&[(ENV_BUDGET, "1000"), (ENV_SEED, "5")])).unwrap();
        assert_eq!(c.budget, 1000);
        assert_eq!(c.seed, 5);
        assert_eq!(c.euler_bound, eulerian::DEFAULT_BOUND);
        assert_eq!(Config::from_lookup(lookup(&[])).unwrap(), Config::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(Config::from_lookup(lookup(&[(ENV_BUDGET, "0")])), Err(ConfigError::NotPositive { .. })));
        assert!(matches!(Config::from_lookup(lookup(&[(ENV_HKR_DEGREE, "x")])), Err(ConfigError::Parse { .. })));
    }
}
