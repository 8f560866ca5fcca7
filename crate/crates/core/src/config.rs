//! Run configuration: flat `key = value` files, exact rational parsing, and
//! defaults for the whole pipeline.

use std::path::{Path, PathBuf};

use num_rational::Ratio;

use crate::mixednorm::{Exp, QuadratureSpec};
use crate::scaling::{beta_threshold, AdmissiblePair, FitTolerances, RationalParams};
use crate::{Error, Result};

type Rat = Ratio<i64>;

/// Parse an exact rational from `"3/2"`, `"1.55"`, `"2"`, or `"inf"`.
pub fn parse_exponent(s: &str) -> Result<Exp> {
    if s.trim().eq_ignore_ascii_case("inf") {
        return Ok(Exp::Inf);
    }
    parse_rational(s).map(Exp::Finite)
}

/// Decimal and fraction literals map to exact rationals: `1.55` → `31/20`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |_| Error::Config(format!("cannot parse '{s}' as a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(bad)?;
        let d: i64 = den.trim().parse().map_err(bad)?;
        if d == 0 {
            return Err(Error::Config(format!("zero denominator in '{s}'")));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let i: i64 = int.trim().parse().map_err(bad)?;
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Config(format!(
                "cannot parse '{s}' as a rational number (need 1-15 fractional digits)"
            )));
        }
        let f: i64 = frac.parse().map_err(bad)?;
        let scale = 10i64.pow(frac.len() as u32);
        return Ok(Ratio::new(i * scale + sign * f, scale));
    }
    let n: i64 = s.parse().map_err(bad)?;
    Ok(Ratio::from_integer(n))
}

/// Fully resolved run parameters; every field has a documented default and
/// can be set from a configuration file or a CLI flag.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Space dimension (≥ 3); parity picks the odd/even pipeline. Default 3.
    pub n: usize,
    /// Potential decay exponent α ∈ (1, 2). Default 3/2.
    pub alpha: Rat,
    /// Cutoff width exponent γ ∈ (1/2, 1). Default 4/5.
    pub gamma: Rat,
    /// Time-window exponent β; `None` resolves to `threshold × 51/50`.
    pub beta: Option<Rat>,
    /// Model coefficient c ∈ {1, 2} of the confining term. Default 1.
    pub model_c: f64,
    /// Admissible pair; `None` resolves to the endpoint `(2, 2n/(n-2))`.
    pub pair: Option<(Exp, Exp)>,
    /// Geometric R-grid: smallest radius. Default 32.
    pub r_min: f64,
    /// Largest radius. Default 4096.
    pub r_max: f64,
    /// Number of radii. Default 8.
    pub r_points: usize,
    pub quad: QuadratureSpec,
    /// Verdict slope tolerance. Default 0.02.
    pub slope_tol: f64,
    /// Verdict δ margin. Default 0.05.
    pub delta_margin: f64,
    /// Output directory for reports. Default `out`.
    pub out_dir: PathBuf,
    /// Seed for random sampling in residual/potential checks. Default 42.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 3,
            alpha: Ratio::new(3, 2),
            gamma: Ratio::new(4, 5),
            beta: None,
            model_c: 1.0,
            pair: None,
            r_min: 32.0,
            r_max: 4096.0,
            r_points: 8,
            quad: QuadratureSpec::default(),
            slope_tol: 0.02,
            delta_margin: 0.05,
            out_dir: PathBuf::from("out"),
            seed: 42,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| {
                Error::Config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(cfg)
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let usize_of = |v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::Config(format!("'{v}' is not a nonnegative integer")))
        };
        let f64_of = |v: &str| -> Result<f64> {
            v.parse()
                .map_err(|_| Error::Config(format!("'{v}' is not a number")))
        };
        match key {
            "n" => self.n = usize_of(value)?,
            "alpha" => self.alpha = parse_rational(value)?,
            "gamma" => self.gamma = parse_rational(value)?,
            "beta" => self.beta = Some(parse_rational(value)?),
            "model_c" => self.model_c = f64_of(value)?,
            "pair" => {
                let (p, q) = value.split_once(',').ok_or_else(|| {
                    Error::Config(format!("pair must be 'p,q', got '{value}'"))
                })?;
                self.pair = Some((parse_exponent(p)?, parse_exponent(q)?));
            }
            "r_min" => self.r_min = f64_of(value)?,
            "r_max" => self.r_max = f64_of(value)?,
            "r_points" => self.r_points = usize_of(value)?,
            "radial_nodes" => self.quad.radial_nodes = usize_of(value)?,
            "z_nodes" => self.quad.z_nodes = usize_of(value)?,
            "t_nodes" => self.quad.t_nodes = usize_of(value)?,
            "refinement_factor" => self.quad.refinement_factor = usize_of(value)?,
            "tolerance" => self.quad.tolerance = f64_of(value)?,
            "slope_tol" => self.slope_tol = f64_of(value)?,
            "delta_margin" => self.delta_margin = f64_of(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("'{value}' is not a valid seed")))?
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown key '{other}' (known: n, alpha, gamma, beta, model_c, pair, \
                     r_min, r_max, r_points, radial_nodes, z_nodes, t_nodes, \
                     refinement_factor, tolerance, slope_tol, delta_margin, out_dir, seed)"
                )))
            }
        }
        Ok(())
    }

    /// Resolved β: explicit value or `threshold × 51/50`.
    pub fn resolved_beta(&self) -> Result<Rat> {
        match self.beta {
            Some(b) => Ok(b),
            None => Ok(beta_threshold(self.n, self.alpha, self.gamma)? * Ratio::new(51, 50)),
        }
    }

    pub fn params(&self) -> Result<RationalParams> {
        RationalParams::new(self.n, self.alpha, self.gamma, self.resolved_beta()?)
    }

    /// Resolved pair: explicit (validated against the admissible line) or
    /// the `p = 2` endpoint.
    pub fn admissible_pair(&self) -> Result<AdmissiblePair> {
        match self.pair {
            None => AdmissiblePair::from_q(
                self.n,
                Ratio::new(2 * self.n as i64, self.n as i64 - 2),
            ),
            Some((p, q)) => {
                let pair = AdmissiblePair { p, q, n: self.n };
                if !pair.is_admissible() {
                    return Err(Error::NotAdmissible(format!(
                        "({p}, {q}) violates 2/p = n/2 - n/q for n = {}",
                        self.n
                    )));
                }
                Ok(pair)
            }
        }
    }

    pub fn tolerances(&self) -> FitTolerances {
        FitTolerances {
            slope: self.slope_tol,
            delta_margin: self.delta_margin,
        }
    }

    /// Geometric grid `r_min · (r_max/r_min)^{i/(points-1)}`.
    pub fn r_grid(&self) -> Result<Vec<f64>> {
        if self.r_points < 2 || !(self.r_min > 2.0) || self.r_max <= self.r_min {
            return Err(Error::Config(format!(
                "need r_points ≥ 2 and 2 < r_min < r_max, got {} points in [{}, {}]",
                self.r_points, self.r_min, self.r_max
            )));
        }
        let k = self.r_points as f64 - 1.0;
        Ok((0..self.r_points)
            .map(|i| self.r_min * (self.r_max / self.r_min).powf(i as f64 / k))
            .collect())
    }

    /// The resolved configuration as `key = value` lines, for report echoes.
    pub fn echo(&self) -> String {
        let pair = self
            .admissible_pair()
            .map(|p| format!("{},{}", p.p, p.q))
            .unwrap_or_else(|_| "invalid".into());
        let beta = self
            .resolved_beta()
            .map(|b| b.to_string())
            .unwrap_or_else(|_| "invalid".into());
        format!(
            "n = {}\nalpha = {}\ngamma = {}\nbeta = {}\nmodel_c = {}\npair = {}\n\
             r_min = {}\nr_max = {}\nr_points = {}\nradial_nodes = {}\nz_nodes = {}\n\
             t_nodes = {}\nrefinement_factor = {}\ntolerance = {}\nslope_tol = {}\n\
             delta_margin = {}\nout_dir = {}\nseed = {}\n",
            self.n,
            self.alpha,
            self.gamma,
            beta,
            self.model_c,
            pair,
            self.r_min,
            self.r_max,
            self.r_points,
            self.quad.radial_nodes,
            self.quad.z_nodes,
            self.quad.t_nodes,
            self.quad.refinement_factor,
            self.quad.tolerance,
            self.slope_tol,
            self.delta_margin,
            self.out_dir.display(),
            self.seed
        )
    }
}
