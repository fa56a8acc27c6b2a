use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatlift::spectral::Tolerances;
use serde::Serialize;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "quatlift", version, about = "Ideal classes, Brandt matrices and theta lifts for level p² quaternion orders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class representatives, heights and parent classes.
    Classes(Common),
    /// Brandt matrices `B_m` for one `m` or a range `a..b`.
    Brandt {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1..10")]
        m: String,
    },
    /// Weight-3/2 theta series of the class set's ternary forms.
    Theta(Common),
    /// Hecke eigencomponents of M(maximal) or M(Õ).
    Eigen(Common),
    /// Lift coefficients and the twisted central value table.
    Gross(Common),
    /// Invariant checks for one prime.
    Verify(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    Maximal,
    Tilde,
    P2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long)]
    pub p: i128,
    #[arg(long, value_enum, default_value = "tilde")]
    pub order: OrderArg,
    /// Genus of the level-p² order: +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<i32>,
    /// Expansion depth; defaults to ⌈3p(p+1)/4⌉ (and at least --dmax).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Largest Hecke prime used to split the class module.
    #[arg(long, default_value_t = 40)]
    pub bound: u64,
    #[arg(long, default_value_t = 100)]
    pub dmax: i128,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_eigen: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_fit: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_ratio: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_zero: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "QUATLIFT_THREADS")]
    pub threads: Option<usize>,
}

/// Validated run configuration, echoed into every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: i128,
    pub order: OrderArg,
    pub sigma: Option<i32>,
    pub depth: Option<usize>,
    pub bound: u64,
    pub dmax: i128,
    #[serde(skip)]
    pub tol: Tolerances,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(c: &Common) -> Result<RunConfig, CliError> {
        if c.p < 3 || !quatlift::arith::is_prime(c.p as i64) {
            return Err(CliError::Usage(format!("--p {} is not an odd prime", c.p)));
        }
        if let Some(s) = c.sigma {
            if s != 1 && s != -1 {
                return Err(CliError::Usage(format!("--sigma must be +1 or -1, got {s}")));
            }
        }
        if c.order == OrderArg::P2 && c.sigma.is_none() {
            return Err(CliError::Usage("--order p2 needs --sigma".into()));
        }
        if c.depth == Some(0) {
            return Err(CliError::Usage("--depth must be at least 1".into()));
        }
        if c.dmax < 1 {
            return Err(CliError::Usage("--dmax must be at least 1".into()));
        }
        if c.bound < 2 {
            return Err(CliError::Usage("--bound must be at least 2".into()));
        }
        for (name, t) in [
            ("--tol-eigen", c.tol_eigen),
            ("--tol-fit", c.tol_fit),
            ("--tol-ratio", c.tol_ratio),
            ("--tol-zero", c.tol_zero),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        Ok(RunConfig {
            p: c.p,
            order: c.order,
            sigma: c.sigma,
            depth: c.depth,
            bound: c.bound,
            dmax: c.dmax,
            tol: Tolerances {
                eigen: c.tol_eigen,
                fit: c.tol_fit,
                ratio: c.tol_ratio,
                zero: c.tol_zero,
            },
            format: c.format,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
            .unwrap_or_else(|| quatlift::theta::default_depth(self.p))
    }

    pub fn sigmas(&self) -> Vec<i32> {
        match self.sigma {
            Some(s) => vec![s],
            None => vec![1, -1],
        }
    }
}

/// Parses `n` or `a..b` (inclusive).
pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--m expects n or a..b with 1 ≤ a ≤ b, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a < 1 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert_eq!(parse_range("2..10").unwrap(), (2, 10));
        assert!(parse_range("0").is_err());
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
    }
}
