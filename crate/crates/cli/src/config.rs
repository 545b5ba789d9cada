//! Run configuration: command-line flags merged over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Each may also come from the config
/// file under the same name without the leading dashes.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Circular-Jacobi parameter γ ≥ 0
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Singular coupling a > 0 (sets α = 1 + ½√(1+4a))
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Basis index α > 3/2
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Regularization ε > 0
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Phase θ
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Eigenstate index
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest mode index
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    #[arg(long = "x-min", global = true)]
    pub x_min: Option<f64>,
    #[arg(long = "x-max", global = true)]
    pub x_max: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

/// Invalid configuration; reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`, got `{raw}`", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .parse()
        .map_err(|_| usage(format!("config field `{key}`: cannot parse `{value}`")))
}

impl Params {
    /// Fills every field not given on the command line from the file.
    pub fn merge_file(mut self, path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let file = parse_config(&text)?;
        for (k, v) in &file {
            match k.as_str() {
                "gamma" => self.gamma = self.gamma.or(Some(parse_field(k, v)?)),
                "a" => self.a = self.a.or(Some(parse_field(k, v)?)),
                "alpha" => self.alpha = self.alpha.or(Some(parse_field(k, v)?)),
                "eps" => self.eps = self.eps.or(Some(parse_field(k, v)?)),
                "theta" => self.theta = self.theta.or(Some(parse_field(k, v)?)),
                "n" => self.n = self.n.or(Some(parse_field(k, v)?)),
                "n-max" => self.n_max = self.n_max.or(Some(parse_field(k, v)?)),
                "x-min" => self.x_min = self.x_min.or(Some(parse_field(k, v)?)),
                "x-max" => self.x_max = self.x_max.or(Some(parse_field(k, v)?)),
                "points" => self.points = self.points.or(Some(parse_field(k, v)?)),
                "tol" => self.tol = self.tol.or(Some(parse_field(k, v)?)),
                "out" => self.out = self.out.take().or(Some(PathBuf::from(v))),
                "format" => {
                    let f = Format::from_str(v, true).map_err(|_| usage(format!("config field `format`: expected csv or json, got `{v}`")))?;
                    self.format = self.format.or(Some(f));
                }
                other => return Err(usage(format!("unknown config field `{other}`"))),
            }
        }
        Ok(self)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn require_eps(&self) -> Result<f64, UsageError> {
        self.eps.ok_or_else(|| usage("missing required parameter `eps`"))
    }

    /// Equispaced x-grid; defaults to 121 points on [0, 6].
    pub fn x_grid(&self) -> Result<Vec<f64>, UsageError> {
        let lo = self.x_min.unwrap_or(0.0);
        let hi = self.x_max.unwrap_or(6.0);
        let n = self.points.unwrap_or(121);
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(usage(format!("`x-min`/`x-max` must satisfy 0 ≤ x-min < x-max, got {lo}, {hi}")));
        }
        if n < 2 {
            return Err(usage("`points` must be at least 2"));
        }
        Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }

    /// θ-grid of `points` equispaced values in [0, 2π); defaults to 256.
    pub fn theta_grid(&self) -> Result<Vec<f64>, UsageError> {
        let n = self.points.unwrap_or(256);
        if n < 1 {
            return Err(usage("`points` must be positive"));
        }
        Ok(gpcs::transform::theta_grid(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_spacing() {
        let m = parse_config("# header\ngamma = 1.5\n\neps=0.1 # trailing\n").unwrap();
        assert_eq!(m["gamma"], "1.5");
        assert_eq!(m["eps"], "0.1");
        assert!(parse_config("gamma 1.5").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("gpcs-config-{}", std::process::id()));
        std::fs::write(&dir, "gamma = 1.5\neps = 0.1\nformat = json\n").unwrap();
        let p = Params {
            gamma: Some(3.0),
            ..Default::default()
        }
        .merge_file(&dir)
        .unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(p.gamma, Some(3.0));
        assert_eq!(p.eps, Some(0.1));
        assert_eq!(p.format(), Format::Json);
    }
}
