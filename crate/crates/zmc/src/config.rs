//! Option resolution: command-line flag, then `--config` file, then
//! environment (tolerance only), then the built-in default.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use zmc_core::holofn::DEFAULT_TOL;

use crate::error::CliError;
use crate::parse::{parse_key_values, ParseError};

/// Environment variable overriding the quadrature tolerance default.
pub const TOL_ENV: &str = "ZMC_DEFAULT_TOL";

/// Where a resolved value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Cli,
    Config,
    Env,
    Default,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Cli => "cli",
            Origin::Config => "config",
            Origin::Env => "env",
            Origin::Default => "default",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        Ok(Config {
            values: parse_key_values(text)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Config::from_text(&text).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> Result<Option<T>, ParseError> {
        match self.values.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse::<T>().map(Some).map_err(|_| ParseError::Line {
                line: *line,
                msg: format!("config key `{key}`: cannot parse `{raw}`"),
            }),
        }
    }

    /// `cli`, else the config entry, else `default`.
    pub fn resolve<T: FromStr + Copy>(&self, cli: Option<T>, key: &str, default: T) -> Result<(T, Origin), ParseError> {
        if let Some(v) = cli {
            return Ok((v, Origin::Cli));
        }
        Ok(match self.lookup(key)? {
            Some(v) => (v, Origin::Config),
            None => (default, Origin::Default),
        })
    }

    /// `cli`, else the config entry, else nothing.
    pub fn resolve_opt<T: FromStr + Copy>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, ParseError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.lookup(key),
        }
    }

    pub fn flag(&self, cli: bool, key: &str) -> Result<bool, ParseError> {
        Ok(cli || self.lookup::<bool>(key)?.unwrap_or(false))
    }

    /// Quadrature tolerance: flag, config `tol`, `ZMC_DEFAULT_TOL`, `1e-10`.
    pub fn tolerance(&self, cli: Option<f64>) -> Result<(f64, Origin), ParseError> {
        let env = std::env::var(TOL_ENV).ok();
        self.tolerance_with_env(cli, env.as_deref())
    }

    pub fn tolerance_with_env(&self, cli: Option<f64>, env: Option<&str>) -> Result<(f64, Origin), ParseError> {
        let (tol, origin) = if let Some(v) = cli {
            (v, Origin::Cli)
        } else if let Some(v) = self.lookup::<f64>("tol")? {
            (v, Origin::Config)
        } else if let Some(raw) = env {
            let v = raw.trim().parse::<f64>().map_err(|_| ParseError::Value {
                key: TOL_ENV.into(),
                msg: format!("cannot parse `{raw}`"),
            })?;
            (v, Origin::Env)
        } else {
            (DEFAULT_TOL, Origin::Default)
        };
        if !(tol > 0.0 && tol < 1.0) {
            return Err(ParseError::Value {
                key: "tol".into(),
                msg: format!("tolerance {tol} must lie in (0, 1)"),
            });
        }
        Ok((tol, origin))
    }
}
