//! Closed-form scaling exponents, R-sweeps, and log-log slope extraction.
//!
//! Exponent identities are computed in exact rational arithmetic; floating
//! point enters only through the quadrature norms and the least-squares fits.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::mixednorm::{
    dual_pair, mixed_norm, spatial_norm, strichartz_ratio, Exp, NormResult, QuadratureSpec,
};
use crate::potential::Parity;
use crate::quasimode::{CutoffMode, ProblemConfig, QuasiModeField};
use crate::{Error, Result};

type Rat = Ratio<i64>;

fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A pair `(p, q)` on the Schrödinger admissible line `2/p = n/2 - n/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub p: Exp,
    pub q: Exp,
    pub n: usize,
}

impl AdmissiblePair {
    /// Build from `q`, solving `2/p = n/2 - n/q` exactly.
    pub fn from_q(n: usize, q: Rat) -> Result<AdmissiblePair> {
        if n < 3 {
            return Err(Error::InvalidDimension(format!("n = {n} must be at least 3")));
        }
        let two = Rat::from_integer(2);
        let nn = Rat::from_integer(n as i64);
        // 2/p = n/2 - n/q must land in [0, 1] so that p ≥ 2
        let rhs = nn / two - nn / q;
        if rhs < Rat::from_integer(0) || rhs > Rat::from_integer(1) {
            return Err(Error::NotAdmissible(format!(
                "q = {q} is outside the admissible range [2, {}]",
                2 * n as i64 / (n as i64 - 2)
            )));
        }
        let p = if rhs == Rat::from_integer(0) {
            Exp::Inf
        } else {
            Exp::Finite(two / rhs)
        };
        Ok(AdmissiblePair {
            p,
            q: Exp::Finite(q),
            n,
        })
    }

    /// Checks `2/p + n/q = n/2` in exact arithmetic.
    pub fn is_admissible(&self) -> bool {
        let nn = Rat::from_integer(self.n as i64);
        let inv = |e: Exp| match e {
            Exp::Inf => Rat::from_integer(0),
            Exp::Finite(r) => r.recip(),
        };
        Rat::from_integer(2) * inv(self.p) + nn * inv(self.q) == nn / Rat::from_integer(2)
    }

    pub fn is_endpoint_mass(&self) -> bool {
        self.p == Exp::Inf
    }
}

/// `count` pairs spread evenly in `1/p` over the admissible line, from
/// `(∞, 2)` to the endpoint `(2, 2n/(n-2))`.
pub fn admissible_pairs(n: usize, count: usize) -> Result<Vec<AdmissiblePair>> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("n = {n} must be at least 3")));
    }
    if count < 2 {
        return Err(Error::InvalidParameter(
            "need at least two pairs to cover both endpoints".into(),
        ));
    }
    let nn = Rat::from_integer(n as i64);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        // 2/p = i/(count-1) walks from 0 (p = ∞) to 1 (p = 2)
        let s = rat(i as i64, count as i64 - 1);
        let q = nn / (nn / Rat::from_integer(2) - s);
        let p = if s == Rat::from_integer(0) {
            Exp::Inf
        } else {
            Exp::Finite(Rat::from_integer(2) / s)
        };
        out.push(AdmissiblePair {
            p,
            q: Exp::Finite(q),
            n,
        });
    }
    Ok(out)
}

/// Exact rational problem parameters; the float-valued `ProblemConfig` is
/// derived from these.
#[derive(Debug, Clone, Copy)]
pub struct RationalParams {
    pub n: usize,
    pub alpha: Rat,
    pub gamma: Rat,
    pub beta: Rat,
}

impl RationalParams {
    pub fn new(n: usize, alpha: Rat, gamma: Rat, beta: Rat) -> Result<RationalParams> {
        let p = RationalParams {
            n,
            alpha,
            gamma,
            beta,
        };
        // float-side validation covers all the range checks
        p.problem_config(1.0)?;
        Ok(p)
    }

    /// Default β: 2% above the divergence threshold (the argument requires the
    /// strict inequality β > threshold, and δ shrinks as β grows).
    pub fn with_default_beta(n: usize, alpha: Rat, gamma: Rat) -> Result<RationalParams> {
        let beta = beta_threshold(n, alpha, gamma)? * rat(51, 50);
        RationalParams::new(n, alpha, gamma, beta)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// `E = α·d_y + 2·d_z·γ`, the exponent of `∫|f_R|²` up to the factor 2:
    /// `α(n-1) + 2γ` odd, `α(n-2) + 4γ` even.
    pub fn datum_exponent(&self) -> Rat {
        let (d_y, d_z) = match self.parity() {
            Parity::Odd => (self.n - 1, 1usize),
            Parity::Even => (self.n - 2, 2usize),
        };
        self.alpha * Rat::from_integer(d_y as i64)
            + Rat::from_integer(2 * d_z as i64) * self.gamma
    }

    pub fn problem_config(&self, c: f64) -> Result<ProblemConfig> {
        ProblemConfig::new(
            self.n,
            rat_f64(self.alpha),
            rat_f64(self.gamma),
            rat_f64(self.beta),
            c,
        )
    }
}

/// `(α/2, α/2 + (2-α)n/6)` (odd) or `(α/2, α/2 + (2-α)n/12)` (even),
/// intersected with `(1/2, 1)`; inside it δ at the β-threshold is positive.
pub fn gamma_window(n: usize, alpha: Rat) -> Result<(Rat, Rat)> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("n = {n} must be at least 3")));
    }
    if alpha <= Rat::from_integer(1) || alpha >= Rat::from_integer(2) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (1, 2), got {alpha}"
        )));
    }
    let half = alpha / Rat::from_integer(2);
    let den = match Parity::of(n) {
        Parity::Odd => 6,
        Parity::Even => 12,
    };
    let width = (Rat::from_integer(2) - alpha) * rat(n as i64, den);
    let lo = half.max(rat(1, 2));
    let hi = (half + width).min(Rat::from_integer(1));
    if lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "empty gamma window for n = {n}, alpha = {alpha}"
        )));
    }
    Ok((lo, hi))
}

/// `E/n`: divergence requires β strictly above this.
pub fn beta_threshold(n: usize, alpha: Rat, gamma: Rat) -> Result<Rat> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("n = {n} must be at least 3")));
    }
    let p = RationalParams {
        n,
        alpha,
        gamma,
        beta: Rat::from_integer(2),
    };
    Ok(p.datum_exponent() / Rat::from_integer(n as i64))
}

/// Every closed-form exponent of the default pipeline, in exact rationals.
#[derive(Debug, Clone)]
pub struct ExponentSet {
    /// `‖f_R‖₂ ~ R^{E/4}`.
    pub f_r_slope: Rat,
    /// `‖W_R(t)‖_q ~ R^{E/2q}` for each fixed `t`.
    pub w_r_spatial_slope: Rat,
    /// Slope of the forcing bound with `T = R^β`:
    /// `β/p' + E/2q' + max{-2γ, 2β - 2α - 2}`.
    pub forcing_bound_slope: Rat,
    /// `‖W_R‖/‖f_R‖ ~ R^{(βn - E)/np}`.
    pub ratio_wf_slope: Rat,
    /// `‖W_R‖/‖F_R‖` exponent.
    pub kappa: Rat,
    /// `‖W_R‖/‖F̃_R‖` exponent: the six-term minimum.
    pub delta: Rat,
    /// Every term attaining the δ minimum, labelled.
    pub delta_argmin: Vec<(&'static str, Rat)>,
    pub gamma_window: (Rat, Rat),
    pub beta_threshold: Rat,
}

/// The six competitors in the δ minimum.
fn delta_terms(alpha: Rat, gamma: Rat, beta: Rat) -> Vec<(&'static str, Rat)> {
    let one = Rat::from_integer(1);
    let two = Rat::from_integer(2);
    let three = Rat::from_integer(3);
    vec![
        ("2γ-β", two * gamma - beta),
        ("2α+2-3β", two * alpha + two - three * beta),
        ("α/2+1-β", alpha / two + one - beta),
        ("3-α/2-β", three - alpha / two - beta),
        ("γ+1-β", gamma + one - beta),
        ("α+2-2β", alpha + two - two * beta),
    ]
}

pub fn predicted_exponents(
    params: &RationalParams,
    pair: &AdmissiblePair,
) -> Result<ExponentSet> {
    if pair.n != params.n {
        return Err(Error::InvalidParameter(format!(
            "pair dimension {} does not match configuration {}",
            pair.n, params.n
        )));
    }
    if !pair.is_admissible() {
        return Err(Error::NotAdmissible(format!(
            "({}, {}) is off the admissible line for n = {}",
            pair.p, pair.q, pair.n
        )));
    }
    let p = match pair.p {
        Exp::Finite(r) => r,
        Exp::Inf => {
            return Err(Error::NotAdmissible(
                "the endpoint (inf, 2) reduces to mass conservation and is excluded".into(),
            ))
        }
    };
    let q = match pair.q {
        Exp::Finite(r) => r,
        Exp::Inf => unreachable!("finite p forces finite q on the admissible line"),
    };
    let e = params.datum_exponent();
    let nn = Rat::from_integer(params.n as i64);
    let two = Rat::from_integer(2);
    let (alpha, gamma, beta) = (params.alpha, params.gamma, params.beta);

    let ratio_wf_slope = (beta * nn - e) / (nn * p);
    let terms = delta_terms(alpha, gamma, beta);
    let kappa_min = terms[0].1.min(terms[1].1);
    let delta_min = terms.iter().map(|t| t.1).min().unwrap();
    let delta_argmin = terms.iter().filter(|t| t.1 == delta_min).cloned().collect();

    let p_dual = p / (p - Rat::from_integer(1));
    let q_dual = q / (q - Rat::from_integer(1));
    // max{R^{-2γ}, T²R^{-(2α+2)}} with T = R^β
    let decay = (-two * gamma).max(two * beta - two * alpha - two);
    let forcing_bound_slope = beta / p_dual + e / (two * q_dual) + decay;

    Ok(ExponentSet {
        f_r_slope: e / Rat::from_integer(4),
        w_r_spatial_slope: e / (two * q),
        forcing_bound_slope,
        ratio_wf_slope,
        kappa: two * ratio_wf_slope + kappa_min,
        delta: two * ratio_wf_slope + delta_min,
        delta_argmin,
        gamma_window: gamma_window(params.n, alpha)?,
        beta_threshold: beta_threshold(params.n, alpha, gamma)?,
    })
}

/// One radius of the sweep: every norm of the quotient test plus the two
/// forcing components.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub r: f64,
    /// `‖f_R‖₂`.
    pub datum: NormResult,
    /// `‖W_R‖_{L^p((0,R^β);L^q)}`.
    pub numerator: NormResult,
    /// Model forcing `‖F_R‖_{L^{p'}L^{q'}}` (the expanded-operator part).
    pub forcing_model: NormResult,
    /// Taylor-rest forcing norm, same mixed exponents.
    pub forcing_rest: NormResult,
    /// `‖F̃_R‖_{L^{p'}L^{q'}}` (model + rest).
    pub forcing_total: NormResult,
    /// `‖W_R‖ / (‖f_R‖₂ + ‖F̃_R‖)`.
    pub ratio: f64,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        self.datum.converged
            && self.numerator.converged
            && self.forcing_model.converged
            && self.forcing_rest.converged
            && self.forcing_total.converged
    }
}

fn validate_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "sweep needs at least 5 radii, got {}",
            r_grid.len()
        )));
    }
    if r_grid[0] <= 2.0 {
        return Err(Error::InvalidParameter(format!(
            "sweep radii must exceed 2, got {}",
            r_grid[0]
        )));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sweep radii must be ascending".into()));
    }
    if r_grid[r_grid.len() - 1] / r_grid[0] < 100.0 {
        return Err(Error::InvalidParameter(
            "sweep radii must span at least two decades".into(),
        ));
    }
    Ok(())
}

/// Geometric default grid `{2^5, …, 2^12}`.
pub fn default_r_grid() -> Vec<f64> {
    (5..=12).map(|k| f64::from(1u32 << k)).collect()
}

pub fn run_sweep(
    params: &RationalParams,
    c: f64,
    pair: &AdmissiblePair,
    r_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<SweepRow>> {
    validate_grid(r_grid)?;
    let exps = predicted_exponents(params, pair)?; // also rejects (∞,2)
    let _ = exps;
    let (pd, qd) = dual_pair(pair.p, pair.q)?;
    let (pdf, qdf) = (pd.as_f64(), qd.as_f64());
    let (pf, qf) = (pair.p.as_f64(), pair.q.as_f64());

    let rows: Result<Vec<SweepRow>> = r_grid
        .par_iter()
        .map(|&r| {
            let qm = QuasiModeField::new(params.problem_config(c)?, r)?;
            let horizon = r.powf(rat_f64(params.beta));

            let w_field =
                |t: f64, y: &[f64], z: &[f64]| qm.eval_w_r(t, y, z).map(|v| v.norm()).unwrap_or(0.0);
            let f_field =
                |_t: f64, y: &[f64], z: &[f64]| qm.eval_f_r(y, z).map(f64::abs).unwrap_or(0.0);
            let model_field = |t: f64, y: &[f64], z: &[f64]| {
                qm.eval_f_direct(t, y, z).map(|v| v.norm()).unwrap_or(0.0)
            };
            let rest_field = |t: f64, y: &[f64], z: &[f64]| {
                qm.eval_rest_forcing(t, y, z).map(|v| v.norm()).unwrap_or(0.0)
            };
            let total_field = |t: f64, y: &[f64], z: &[f64]| {
                qm.eval_forcing_total(t, y, z).map(|v| v.norm()).unwrap_or(0.0)
            };

            let datum = spatial_norm(&f_field, 0.0, 2.0, &qm, quad)?;
            let numerator = mixed_norm(&w_field, true, pf, qf, horizon, &qm, quad)?;
            let forcing_model = mixed_norm(&model_field, false, pdf, qdf, horizon, &qm, quad)?;
            let forcing_rest = mixed_norm(&rest_field, false, pdf, qdf, horizon, &qm, quad)?;
            let forcing_total = mixed_norm(&total_field, false, pdf, qdf, horizon, &qm, quad)?;
            let ratio = numerator.value / (datum.value + forcing_total.value);
            Ok(SweepRow {
                r,
                datum,
                numerator,
                forcing_model,
                forcing_rest,
                forcing_total,
                ratio,
            })
        })
        .collect();
    rows
}

/// Column selector for `fit_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepColumn {
    Datum,
    Numerator,
    ForcingModel,
    ForcingRest,
    ForcingTotal,
    Ratio,
    /// `numerator / datum` — the eq. against which (βn-E)/np is tested.
    WfRatio,
}

impl SweepColumn {
    pub fn extract(&self, row: &SweepRow) -> f64 {
        match self {
            SweepColumn::Datum => row.datum.value,
            SweepColumn::Numerator => row.numerator.value,
            SweepColumn::ForcingModel => row.forcing_model.value,
            SweepColumn::ForcingRest => row.forcing_rest.value,
            SweepColumn::ForcingTotal => row.forcing_total.value,
            SweepColumn::Ratio => row.ratio,
            SweepColumn::WfRatio => row.numerator.value / row.datum.value,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SweepColumn::Datum => "datum_l2",
            SweepColumn::Numerator => "w_mixed",
            SweepColumn::ForcingModel => "forcing_model",
            SweepColumn::ForcingRest => "forcing_rest",
            SweepColumn::ForcingTotal => "forcing_total",
            SweepColumn::Ratio => "ratio",
            SweepColumn::WfRatio => "wf_ratio",
        }
    }
}

/// Ordinary least-squares fit of `log(value)` against `log(R)`.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_residual: f64,
    pub r_values: Vec<f64>,
    pub sample_count: usize,
}

pub fn fit_exponent(rows: &[SweepRow], column: SweepColumn) -> Result<ScalingFit> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| (row.r.ln(), column.extract(row).ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "slope fit needs at least 5 points, got {}",
            pts.len()
        )));
    }
    let span = rows[rows.len() - 1].r / rows[0].r;
    if span < 100.0 {
        return Err(Error::InvalidParameter(
            "slope fit needs radii spanning at least two decades".into(),
        ));
    }
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::QuadratureNoConvergence(format!(
            "column {} has nonpositive entries; cannot fit a power law",
            column.label()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx = pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_abs_residual = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(ScalingFit {
        slope,
        intercept,
        max_abs_residual,
        r_values: rows.iter().map(|r| r.r).collect(),
        sample_count: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl std::fmt::Display for CriterionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CriterionStatus::Pass => write!(f, "PASS"),
            CriterionStatus::Fail => write!(f, "FAIL"),
            CriterionStatus::NotApplicable => write!(f, "N/A"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerdictCriterion {
    pub name: &'static str,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub status: CriterionStatus,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub overall: CriterionStatus,
    pub criteria: Vec<VerdictCriterion>,
    pub exponents: ExponentSet,
}

/// Slope tolerances for the verdict; quadrature-limited at `R ≤ 2^12`.
#[derive(Debug, Clone, Copy)]
pub struct FitTolerances {
    pub slope: f64,
    pub delta_margin: f64,
}

impl Default for FitTolerances {
    fn default() -> Self {
        FitTolerances {
            slope: 0.02,
            delta_margin: 0.05,
        }
    }
}

pub fn verdict(
    params: &RationalParams,
    pair: &AdmissiblePair,
    rows: &[SweepRow],
    tol: FitTolerances,
) -> Result<Verdict> {
    let exps = predicted_exponents(params, pair)?;
    if rows.iter().any(|r| !r.converged()) {
        return Err(Error::QuadratureNoConvergence(
            "sweep contains unconverged rows; tighten the quadrature before judging".into(),
        ));
    }
    let p = pair.p.as_f64();
    let beta = rat_f64(params.beta);
    let mut criteria = Vec::new();

    // (a) W/f growth at the predicted rate or faster
    let wf = fit_exponent(rows, SweepColumn::WfRatio)?;
    let wf_expected = rat_f64(exps.ratio_wf_slope);
    criteria.push(VerdictCriterion {
        name: "wf_ratio_slope",
        measured: wf.slope,
        expected: wf_expected,
        tolerance: tol.slope,
        status: if wf.slope >= wf_expected - tol.slope {
            CriterionStatus::Pass
        } else {
            CriterionStatus::Fail
        },
        note: format!("lower bound (βn-E)/np, eq residual {:.2e}", wf.max_abs_residual),
    });

    // (b) divergence of the full quotient at rate ≥ δ
    let delta = rat_f64(exps.delta);
    let ratio_fit = fit_exponent(rows, SweepColumn::Ratio)?;
    let (status, note) = if delta <= 0.0 {
        (
            CriterionStatus::NotApplicable,
            format!("δ = {} ≤ 0: γ/β outside the divergence window", exps.delta),
        )
    } else if ratio_fit.slope > 0.0 && ratio_fit.slope >= delta - tol.delta_margin {
        (
            CriterionStatus::Pass,
            format!("δ terms attained: {:?}", exps.delta_argmin),
        )
    } else {
        (
            CriterionStatus::Fail,
            format!("ratio slope below δ = {delta:.6}"),
        )
    };
    criteria.push(VerdictCriterion {
        name: "ratio_slope",
        measured: ratio_fit.slope,
        expected: delta,
        tolerance: tol.delta_margin,
        status,
        note,
    });

    // (c) component slopes against their closed forms
    let datum_fit = fit_exponent(rows, SweepColumn::Datum)?;
    let datum_expected = rat_f64(exps.f_r_slope);
    criteria.push(VerdictCriterion {
        name: "datum_slope",
        measured: datum_fit.slope,
        expected: datum_expected,
        tolerance: tol.slope,
        status: if (datum_fit.slope - datum_expected).abs() <= tol.slope {
            CriterionStatus::Pass
        } else {
            CriterionStatus::Fail
        },
        note: "E/4".into(),
    });

    let num_fit = fit_exponent(rows, SweepColumn::Numerator)?;
    let num_expected = beta / p + rat_f64(exps.w_r_spatial_slope);
    criteria.push(VerdictCriterion {
        name: "numerator_slope",
        measured: num_fit.slope,
        expected: num_expected,
        tolerance: tol.slope,
        status: if (num_fit.slope - num_expected).abs() <= tol.slope {
            CriterionStatus::Pass
        } else {
            CriterionStatus::Fail
        },
        note: "β/p + E/2q".into(),
    });

    let forcing_fit = fit_exponent(rows, SweepColumn::ForcingTotal)?;
    let forcing_bound = rat_f64(exps.forcing_bound_slope);
    criteria.push(VerdictCriterion {
        name: "forcing_slope_bound",
        measured: forcing_fit.slope,
        expected: forcing_bound,
        tolerance: tol.slope,
        status: if forcing_fit.slope <= forcing_bound + tol.slope {
            CriterionStatus::Pass
        } else {
            CriterionStatus::Fail
        },
        note: "upper bound β/p' + E/2q' + max{-2γ, 2β-2α-2}".into(),
    });

    let overall = if criteria.iter().any(|c| c.status == CriterionStatus::Fail) {
        CriterionStatus::Fail
    } else {
        CriterionStatus::Pass
    };
    Ok(Verdict {
        overall,
        criteria,
        exponents: exps,
    })
}

/// Rectangle-cutoff sanity sweep of `‖f_R‖₂` alone; its closed form makes
/// this an independent check of the whole quadrature-and-fit pipeline.
pub fn rectangle_datum_sweep(
    params: &RationalParams,
    c: f64,
    r_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<ScalingFit> {
    validate_grid(r_grid)?;
    let rows: Result<Vec<SweepRow>> = r_grid
        .par_iter()
        .map(|&r| {
            let qm = QuasiModeField::with_mode(params.problem_config(c)?, r, CutoffMode::Rectangle)?;
            let f_field =
                |_t: f64, y: &[f64], z: &[f64]| qm.eval_f_r(y, z).map(f64::abs).unwrap_or(0.0);
            let datum = spatial_norm(&f_field, 0.0, 2.0, &qm, quad)?;
            Ok(SweepRow {
                r,
                datum,
                numerator: datum,
                forcing_model: datum,
                forcing_rest: datum,
                forcing_total: datum,
                ratio: 1.0,
            })
        })
        .collect();
    fit_exponent(&rows?, SweepColumn::Datum)
}

/// Convenience wrapper for a single-R ratio evaluation (CLI `norms`).
pub fn single_ratio(
    params: &RationalParams,
    c: f64,
    pair: &AdmissiblePair,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<crate::mixednorm::StrichartzRatio> {
    let qm = QuasiModeField::new(params.problem_config(c)?, r)?;
    strichartz_ratio(&qm, pair.p, pair.q, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn default_params() -> RationalParams {
        RationalParams::new(3, rat(3, 2), rat(4, 5), rat(23, 15) * rat(51, 50)).unwrap()
    }

    #[test]
    fn admissible_pair_examples() {
        let pairs = admissible_pairs(3, 5).unwrap();
        assert!(pairs.iter().all(|p| p.is_admissible()));
        assert!(pairs.contains(&AdmissiblePair {
            p: Exp::Inf,
            q: Exp::rational(2, 1),
            n: 3
        }));
        assert!(pairs.contains(&AdmissiblePair {
            p: Exp::rational(2, 1),
            q: Exp::rational(6, 1),
            n: 3
        }));
        assert!(pairs.contains(&AdmissiblePair {
            p: Exp::rational(8, 3),
            q: Exp::rational(4, 1),
            n: 3
        }));
        let p4 = admissible_pairs(4, 2).unwrap();
        assert!(p4.contains(&AdmissiblePair {
            p: Exp::rational(2, 1),
            q: Exp::rational(4, 1),
            n: 4
        }));
        let from_q = AdmissiblePair::from_q(3, rat(4, 1)).unwrap();
        assert_eq!(from_q.p, Exp::rational(8, 3));
        assert!(AdmissiblePair::from_q(3, rat(20, 1)).is_err());
    }

    #[test]
    fn exponent_examples() {
        let params = default_params();
        let pair = AdmissiblePair::from_q(3, rat(6, 1)).unwrap();
        let e = predicted_exponents(&params, &pair).unwrap();
        assert_eq!(e.f_r_slope, rat(23, 20)); // 1.15
        assert_eq!(e.w_r_spatial_slope, rat(23, 60));
        assert_eq!(e.beta_threshold, rat(23, 15));
        assert!(e.delta > Rat::from_integer(0));

        let even = RationalParams::new(4, rat(3, 2), rat(4, 5), rat(8, 5)).unwrap();
        let pair4 = AdmissiblePair::from_q(4, rat(4, 1)).unwrap();
        let e4 = predicted_exponents(&even, &pair4).unwrap();
        assert_eq!(e4.f_r_slope, rat(31, 20)); // 1.55
        assert_eq!(e4.beta_threshold, rat(31, 20));
    }

    #[test]
    fn delta_at_threshold_matches_closed_form() {
        // β exactly at threshold: δ = (n-1)(2γ-α)/n = 1/15, attained by 2γ-β.
        // Built literally: the validated constructor requires strict β > threshold.
        let params = RationalParams {
            n: 3,
            alpha: rat(3, 2),
            gamma: rat(4, 5),
            beta: rat(23, 15),
        };
        let pair = AdmissiblePair::from_q(3, rat(6, 1)).unwrap();
        let e = predicted_exponents(&params, &pair).unwrap();
        assert_eq!(e.delta, rat(1, 15));
        assert!(e.delta_argmin.iter().any(|t| t.0 == "2γ-β"));
        // ratio_wf vanishes at the threshold
        assert_eq!(e.ratio_wf_slope, Rat::from_integer(0));
    }

    #[test]
    fn gamma_window_examples() {
        let (lo, hi) = gamma_window(3, rat(3, 2)).unwrap();
        assert_eq!(lo, rat(3, 4));
        assert_eq!(hi, Rat::from_integer(1));
        let (lo, hi) = gamma_window(4, rat(3, 2)).unwrap();
        assert_eq!(lo, rat(3, 4));
        assert_eq!(hi, rat(3, 4) + rat(1, 6));
    }

    #[test]
    fn gamma_window_nonempty_across_alpha() {
        for n in 3..=8 {
            for num in [105i64, 125, 150, 175, 195] {
                let alpha = rat(num, 100);
                let (lo, hi) = gamma_window(n, alpha).unwrap();
                assert!(lo < hi, "empty window at n={n}, alpha={alpha}");
                assert!(lo >= rat(1, 2) && hi <= Rat::from_integer(1));
            }
        }
    }

    #[test]
    fn beta_threshold_monotone_in_gamma() {
        let a = beta_threshold(3, rat(3, 2), rat(7, 10)).unwrap();
        let b = beta_threshold(3, rat(3, 2), rat(4, 5)).unwrap();
        assert!(a < b);
    }

    #[test]
    fn delta_is_continuous_in_alpha() {
        // δ at threshold β over an α-grid: jumps bounded by the Lipschitz
        // constant of the min-of-affine form times the step
        let mut prev: Option<f64> = None;
        for num in (105..=195).step_by(5) {
            let alpha = rat(num, 100);
            let gamma = rat(4, 5);
            if gamma <= gamma_window(3, alpha).unwrap().0 {
                prev = None;
                continue;
            }
            let beta = beta_threshold(3, alpha, gamma).unwrap();
            let params = RationalParams {
                n: 3,
                alpha,
                gamma,
                beta,
            };
            let pair = AdmissiblePair::from_q(3, rat(6, 1)).unwrap();
            let d = rat_f64(predicted_exponents(&params, &pair).unwrap().delta);
            if let Some(p) = prev {
                // every affine piece has |∂δ/∂α| ≤ 3 (through β = E/n and 2α terms)
                assert!((d - p).abs() <= 3.0 * 0.05 + 1e-12, "jump {} at α={alpha}", d - p);
            }
            prev = Some(d);
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let mk = |r: f64, v: f64| {
            let n = NormResult {
                value: v,
                rel_error_estimate: 0.0,
                nodes_used: (8, 8, 8),
                converged: true,
            };
            SweepRow {
                r,
                datum: n,
                numerator: n,
                forcing_model: n,
                forcing_rest: n,
                forcing_total: n,
                ratio: v,
            }
        };
        let rows: Vec<SweepRow> = [10.0, 40.0, 100.0, 400.0, 1000.0]
            .iter()
            .map(|&r| mk(r, r * r))
            .collect();
        let fit = fit_exponent(&rows, SweepColumn::Datum).unwrap();
        assert_abs_diff_eq!(fit.slope, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.max_abs_residual, 0.0, epsilon = 1e-12);

        let flat: Vec<SweepRow> = [10.0, 40.0, 100.0, 400.0, 1000.0]
            .iter()
            .map(|&r| mk(r, 7.0))
            .collect();
        let fit = fit_exponent(&flat, SweepColumn::Datum).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.0, epsilon = 1e-12);

        assert!(fit_exponent(&rows[..3], SweepColumn::Datum).is_err());
    }

    #[test]
    fn rectangle_sweep_recovers_printed_slope() {
        let params = default_params();
        let quad = QuadratureSpec {
            radial_nodes: 32,
            z_nodes: 16,
            t_nodes: 8,
            refinement_factor: 2,
            tolerance: 1e-6,
        };
        // larger radii than the default grid: the window-width correction
        // (R^γ/R)² biases the fitted slope by ~2e-3 below R ≈ 500
        let grid: Vec<f64> = (9..=16).map(|k| f64::from(1u32 << k)).collect();
        let fit = rectangle_datum_sweep(&params, 1.0, &grid, &quad).unwrap();
        assert_relative_eq!(fit.slope, 1.15, max_relative = 1e-3);
    }

    #[test]
    fn endpoint_pair_is_rejected() {
        let params = default_params();
        let pair = AdmissiblePair {
            p: Exp::Inf,
            q: Exp::rational(2, 1),
            n: 3,
        };
        assert!(predicted_exponents(&params, &pair).is_err());
        let quad = QuadratureSpec::default();
        assert!(run_sweep(&params, 1.0, &pair, &default_r_grid(), &quad).is_err());
    }

    #[test]
    fn delta_nonpositive_outside_window_marks_not_applicable() {
        // γ = 0.6 < α/2 = 0.75: δ at (just above) threshold is nonpositive
        let gamma = rat(3, 5);
        let beta = beta_threshold(3, rat(3, 2), gamma).unwrap() * rat(51, 50);
        let params = RationalParams::new(3, rat(3, 2), gamma, beta).unwrap();
        let pair = AdmissiblePair::from_q(3, rat(6, 1)).unwrap();
        let e = predicted_exponents(&params, &pair).unwrap();
        assert!(e.delta <= Rat::from_integer(0), "delta = {}", e.delta);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[32.0, 64.0, 128.0, 256.0, 4096.0]).is_ok());
        assert!(validate_grid(&[1.0, 64.0, 128.0, 256.0, 4096.0]).is_err());
        assert!(validate_grid(&[32.0, 64.0, 128.0]).is_err());
        assert!(validate_grid(&[32.0, 64.0, 64.0, 256.0, 4096.0]).is_err());
        assert!(validate_grid(&[32.0, 64.0, 128.0, 256.0, 512.0]).is_err());
    }
}
