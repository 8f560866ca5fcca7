//! Spatial `L^q` and mixed `L^p_t L^q_x` norms of the truncated fields.
//!
//! Every field in the pipeline is radial in `y`, so after the substitution
//! `u = |y|/|z|^{α/2}` (Jacobian `|z|^{α d_y/2}`) a spatial integral reduces
//! to a 1D radial Gauss–Legendre rule times a 1D (odd) or 2D (even) rule in
//! `z` over the cutoff window `[R - R^γ, R + R^γ]^{d_z}`. Error estimates
//! come from recomputing with `refinement_factor ×` nodes everywhere.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::quad::GaussLegendre;
use crate::quasimode::{CutoffMode, QuasiModeField};
use crate::{Error, Result};

/// Node counts and convergence policy for the nested quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    /// Nodes per z-dimension.
    pub z_nodes: usize,
    pub t_nodes: usize,
    pub refinement_factor: usize,
    /// Relative tolerance for the refinement-based error estimate.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 64,
            // per panel of the composite three-panel z-rule (transition /
            // plateau / transition), so 96 effective nodes per dimension
            z_nodes: 32,
            t_nodes: 32,
            refinement_factor: 2,
            // |field|^q is only C¹ at modulus zeros for fractional q (the
            // dual exponents), which floors the refinement estimate near
            // 2e-6 regardless of node count; smooth-power norms reach ~5e-8
            tolerance: 1e-5,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 || self.z_nodes < 8 || self.t_nodes < 8 {
            return Err(Error::InvalidParameter(
                "quadrature node counts must be at least 8".into(),
            ));
        }
        if self.refinement_factor < 2 {
            return Err(Error::InvalidParameter(
                "refinement factor must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// A computed norm with its refinement-based error estimate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NormResult {
    pub value: f64,
    pub rel_error_estimate: f64,
    /// `(radial, z, t)` node counts of the refined evaluation.
    pub nodes_used: (usize, usize, usize),
    pub converged: bool,
}

/// A Lebesgue exponent, possibly infinite, kept in exact rational form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exp {
    Finite(Ratio<i64>),
    Inf,
}

impl Exp {
    pub fn rational(num: i64, den: i64) -> Exp {
        Exp::Finite(Ratio::new(num, den))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exp::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Exp::Inf => f64::INFINITY,
        }
    }

    /// Hölder conjugate: `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exp {
        match self {
            Exp::Inf => Exp::Finite(Ratio::from_integer(1)),
            Exp::Finite(r) if *r == Ratio::from_integer(1) => Exp::Inf,
            Exp::Finite(r) => Exp::Finite(r / (r - Ratio::from_integer(1))),
        }
    }
}

impl std::fmt::Display for Exp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exp::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exp::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exp::Inf => write!(f, "inf"),
        }
    }
}

/// Hölder-dual pair `(p', q')`.
pub fn dual_pair(p: Exp, q: Exp) -> Result<(Exp, Exp)> {
    for e in [p, q] {
        if let Exp::Finite(r) = e {
            if r < Ratio::from_integer(1) {
                return Err(Error::InvalidParameter(format!(
                    "Lebesgue exponent must be at least 1, got {e}"
                )));
            }
        }
    }
    Ok((p.conjugate(), q.conjugate()))
}

/// Surface measure of the unit sphere in `ℝ^d` for even `d = 2k`.
fn sphere_surface(d: usize) -> f64 {
    debug_assert!(d % 2 == 0 && d >= 2);
    let k = d / 2;
    let fact: f64 = (1..k).map(|i| i as f64).product();
    2.0 * std::f64::consts::PI.powi(k as i32) / fact
}

/// Pointwise magnitude of a space-time field, radial in `y`.
pub type FieldEval<'a> = &'a (dyn Fn(f64, &[f64], &[f64]) -> f64 + Sync);

/// Raw `∫ |field(t, ·)|^q dx` via the radial substitution, at fixed node
/// counts.
fn spatial_q_integral(
    field: FieldEval,
    t: f64,
    q_exp: f64,
    qm: &QuasiModeField,
    radial_nodes: usize,
    z_nodes: usize,
) -> Result<f64> {
    let cfg = &qm.config;
    let rule_u = GaussLegendre::new(radial_nodes)?;
    let rule_z = GaussLegendre::new(z_nodes)?;
    let a2 = cfg.alpha / 2.0;
    let surface = sphere_surface(cfg.d_y);
    let support = cfg.eigen.profile.support_radius();
    let lo = qm.r - qm.r.powf(cfg.gamma);
    let hi = qm.r + qm.r.powf(cfg.gamma);
    if lo <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "cutoff window [{lo}, {hi}] leaves the half-line z > 0"
        )));
    }

    // weight of one z-point: |z|^{α d_y/2} × S^{d_y-1} × radial u-integral
    let column = |z: &[f64]| -> f64 {
        let zn = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        // the y-cutoff restricts |u| < |z|^{(2-α)/2}; in rectangle mode there
        // is no y-cutoff and the profile's own decay bounds the domain
        let umax = match qm.cutoff.mode {
            CutoffMode::Rectangle => support,
            CutoffMode::Smooth => support.min(zn.powf((2.0 - cfg.alpha) / 2.0)),
        };
        let za = zn.powf(a2);
        let mut y = vec![0.0; cfg.d_y];
        let mut eval = |u: f64| {
            y[0] = u * za;
            let v = field(t, &y, z);
            v.powf(q_exp) * u.powi(cfg.d_y as i32 - 1)
        };
        // χ(u²/|z|^{2-α}) is nonanalytic where its argument hits 1/2, so
        // split the radial rule there whenever the plateau edge carries
        // non-negligible profile mass
        let chi_edge = zn.powf((2.0 - cfg.alpha) / 2.0) / 2.0_f64.sqrt();
        let inner = if matches!(qm.cutoff.mode, CutoffMode::Smooth) && chi_edge < umax {
            rule_u.integrate(0.0, chi_edge, &mut eval)
                + rule_u.integrate(chi_edge, umax, &mut eval)
        } else {
            rule_u.integrate(0.0, umax, &mut eval)
        };
        zn.powf(a2 * cfg.d_y as f64) * surface * inner
    };

    // composite rule per z-dimension: ψ_R is smooth but nonanalytic at the
    // plateau edges R ± R^γ/2, so one panel per transition shell plus the
    // plateau converges much faster than a single rule over the window
    let half = qm.r.powf(cfg.gamma) / 2.0;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(3 * z_nodes);
    for (a, b) in [
        (lo, qm.r - half),
        (qm.r - half, qm.r + half),
        (qm.r + half, hi),
    ] {
        pts.extend(rule_z.mapped(a, b));
    }
    let value = match cfg.d_z {
        1 => pts.par_iter().map(|&(z, w)| w * column(&[z])).sum(),
        _ => pts
            .par_iter()
            .map(|&(z1, w1)| {
                pts.iter()
                    .map(|&(z2, w2)| w1 * w2 * column(&[z1, z2]))
                    .sum::<f64>()
            })
            .sum(),
    };
    Ok(value)
}

/// `(∫ |field(t,·)|^q dx)^{1/q}` with a node-refinement error estimate.
pub fn spatial_norm(
    field: FieldEval,
    t: f64,
    q_exp: f64,
    qm: &QuasiModeField,
    quad: &QuadratureSpec,
) -> Result<NormResult> {
    quad.validate()?;
    if q_exp < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "spatial exponent must be at least 1, got {q_exp}"
        )));
    }
    let f = quad.refinement_factor;
    let base = spatial_q_integral(field, t, q_exp, qm, quad.radial_nodes, quad.z_nodes)?
        .powf(1.0 / q_exp);
    let fine = spatial_q_integral(field, t, q_exp, qm, f * quad.radial_nodes, f * quad.z_nodes)?
        .powf(1.0 / q_exp);
    let rel = (fine - base).abs() / fine.abs().max(1e-300);
    Ok(NormResult {
        value: fine,
        rel_error_estimate: rel,
        nodes_used: (f * quad.radial_nodes, f * quad.z_nodes, 0),
        converged: rel <= quad.tolerance || fine == 0.0,
    })
}

/// `(∫_0^T ‖field(t)‖_q^p dt)^{1/p}`. When the field's modulus does not
/// depend on `t` (unimodular phase) the time integral is the exact factor
/// `T^{1/p}`; otherwise Gauss–Legendre in `t`.
pub fn mixed_norm(
    field: FieldEval,
    time_invariant: bool,
    p_exp: f64,
    q_exp: f64,
    t_horizon: f64,
    qm: &QuasiModeField,
    quad: &QuadratureSpec,
) -> Result<NormResult> {
    quad.validate()?;
    if !(t_horizon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time horizon must be positive, got {t_horizon}"
        )));
    }
    if p_exp < 1.0 || q_exp < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "mixed-norm exponents must be at least 1, got ({p_exp}, {q_exp})"
        )));
    }
    if time_invariant {
        let spatial = spatial_norm(field, 0.0, q_exp, qm, quad)?;
        return Ok(NormResult {
            value: t_horizon.powf(1.0 / p_exp) * spatial.value,
            ..spatial
        });
    }
    let f = quad.refinement_factor;
    let pass = |radial: usize, z: usize, t_nodes: usize| -> Result<f64> {
        let rule_t = GaussLegendre::new(t_nodes)?;
        let pts = rule_t.mapped(0.0, t_horizon);
        let total: Result<f64> = pts
            .par_iter()
            .map(|&(t, w)| {
                Ok(w * spatial_q_integral(field, t, q_exp, qm, radial, z)?.powf(p_exp / q_exp))
            })
            .sum();
        Ok(total?.powf(1.0 / p_exp))
    };
    let base = pass(quad.radial_nodes, quad.z_nodes, quad.t_nodes)?;
    let fine = pass(f * quad.radial_nodes, f * quad.z_nodes, f * quad.t_nodes)?;
    let rel = (fine - base).abs() / fine.abs().max(1e-300);
    Ok(NormResult {
        value: fine,
        rel_error_estimate: rel,
        nodes_used: (f * quad.radial_nodes, f * quad.z_nodes, f * quad.t_nodes),
        converged: rel <= quad.tolerance || fine == 0.0,
    })
}

/// The three norms of the quotient test and their ratio at one radius.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct StrichartzRatio {
    /// `‖W_R‖_{L^p((0,R^β); L^q)}`.
    pub numerator: NormResult,
    /// `‖f_R‖_{L²}`.
    pub datum: NormResult,
    /// `‖F̃_R‖_{L^{p'}((0,R^β); L^{q'})}`.
    pub forcing: NormResult,
    pub ratio: f64,
}

/// Evaluate the quotient `‖W_R‖ / (‖f_R‖₂ + ‖F̃_R‖)` over the time window
/// `(0, R^β)` for one admissible pair.
pub fn strichartz_ratio(
    qm: &QuasiModeField,
    p: Exp,
    q: Exp,
    quad: &QuadratureSpec,
) -> Result<StrichartzRatio> {
    if p == Exp::Inf {
        return Err(Error::NotAdmissible(
            "the endpoint (inf, 2) reduces to mass conservation and is excluded".into(),
        ));
    }
    let (pd, qd) = dual_pair(p, q)?;
    let (pf, qf) = (p.as_f64(), q.as_f64());
    let horizon = qm.r.powf(qm.config.beta);

    let w_field = |t: f64, y: &[f64], z: &[f64]| qm.eval_w_r(t, y, z).map(|v| v.norm()).unwrap_or(0.0);
    let f_field =
        |_t: f64, y: &[f64], z: &[f64]| qm.eval_f_r(y, z).map(f64::abs).unwrap_or(0.0);
    let forcing_field = |t: f64, y: &[f64], z: &[f64]| {
        qm.eval_forcing_total(t, y, z)
            .map(|v| v.norm())
            .unwrap_or(0.0)
    };

    let numerator = mixed_norm(&w_field, true, pf, qf, horizon, qm, quad)?;
    let datum = spatial_norm(&f_field, 0.0, 2.0, qm, quad)?;
    let forcing = mixed_norm(&forcing_field, false, pd.as_f64(), qd.as_f64(), horizon, qm, quad)?;
    let ratio = numerator.value / (datum.value + forcing.value);
    Ok(StrichartzRatio {
        numerator,
        datum,
        forcing,
        ratio,
    })
}

/// Convenience: magnitude evaluator of `f_R` (`t`-independent).
pub fn datum_field(qm: &QuasiModeField) -> impl Fn(f64, &[f64], &[f64]) -> f64 + Sync + '_ {
    move |_t, y, z| qm.eval_f_r(y, z).map(f64::abs).unwrap_or(0.0)
}

/// Used only for diagnostics at `p = ∞`: supremum of the spatial norm over an
/// even sample of `(0, T)`.
pub fn sup_norm_over_time(
    field: FieldEval,
    q_exp: f64,
    t_horizon: f64,
    samples: usize,
    qm: &QuasiModeField,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for k in 0..samples.max(2) {
        let t = t_horizon * (k as f64 + 0.5) / samples.max(2) as f64;
        sup = sup.max(spatial_norm(field, t, q_exp, qm, quad)?.value);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasimode::{CutoffMode, ProblemConfig, QuasiModeField};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn quick_quad() -> QuadratureSpec {
        QuadratureSpec {
            radial_nodes: 32,
            z_nodes: 16,
            t_nodes: 16,
            refinement_factor: 2,
            tolerance: 1e-6,
        }
    }

    fn odd_field(c: f64, r: f64) -> QuasiModeField {
        let cfg = ProblemConfig::new(3, 1.5, 0.8, 1.6, c).unwrap();
        QuasiModeField::new(cfg, r).unwrap()
    }

    #[test]
    fn dual_pair_examples() {
        let (p, q) = dual_pair(Exp::rational(2, 1), Exp::rational(6, 1)).unwrap();
        assert_eq!(p, Exp::rational(2, 1));
        assert_eq!(q, Exp::rational(6, 5));
        let (p, q) = dual_pair(Exp::Inf, Exp::rational(2, 1)).unwrap();
        assert_eq!(p, Exp::rational(1, 1));
        assert_eq!(q, Exp::rational(2, 1));
        let (p, q) = dual_pair(Exp::rational(8, 3), Exp::rational(4, 1)).unwrap();
        assert_eq!(p, Exp::rational(8, 5));
        assert_eq!(q, Exp::rational(4, 3));
        assert!(dual_pair(Exp::rational(1, 2), Exp::rational(2, 1)).is_err());
    }

    #[test]
    fn dual_pair_is_involutive() {
        for (a, b) in [(2i64, 1i64), (6, 1), (8, 3), (6, 5), (1, 1), (10, 7)] {
            let e = Exp::rational(a, b);
            assert_eq!(e.conjugate().conjugate(), e, "double conjugate of {e}");
        }
        assert_eq!(Exp::Inf.conjugate().conjugate(), Exp::Inf);
    }

    #[test]
    fn zero_field_norm() {
        let qm = odd_field(1.0, 64.0);
        let zero = |_: f64, _: &[f64], _: &[f64]| 0.0;
        let n = spatial_norm(&zero, 0.0, 2.0, &qm, &quick_quad()).unwrap();
        assert_eq!(n.value, 0.0);
        assert!(n.converged);
    }

    #[test]
    fn rectangle_mode_matches_closed_form() {
        // with indicator ψ_R and ψ ≡ 1: ‖f_R‖₂² = ‖v‖₂²·∫ z^{(n-1)α/2} dz
        let cfg = ProblemConfig::new(3, 1.5, 0.8, 1.6, 1.0).unwrap();
        let qm = QuasiModeField::with_mode(cfg, 100.0, CutoffMode::Rectangle).unwrap();
        let field = datum_field(&qm);
        let n = spatial_norm(&field, 0.0, 2.0, &qm, &QuadratureSpec::default()).unwrap();
        let (lo, hi) = (100.0 - 100.0_f64.powf(0.8), 100.0 + 100.0_f64.powf(0.8));
        // ‖v‖₂² over R² for c = 1 is π; ∫ z^{3/2} dz = (2/5)(hi^{5/2} - lo^{5/2})
        let exact =
            (std::f64::consts::PI * 0.4 * (hi.powf(2.5) - lo.powf(2.5))).sqrt();
        assert_relative_eq!(n.value, exact, max_relative = 1e-8);
        assert!(n.converged, "error estimate {}", n.rel_error_estimate);
    }

    #[test]
    fn datum_norm_converges_and_refines() {
        let qm = odd_field(1.0, 256.0);
        let field = datum_field(&qm);
        let n = spatial_norm(&field, 0.0, 2.0, &qm, &QuadratureSpec::default()).unwrap();
        assert!(n.value > 0.0);
        assert!(n.converged, "error estimate {}", n.rel_error_estimate);
        // node doubling already inside; cross-check against a triple rule
        let heavy = QuadratureSpec {
            radial_nodes: 96,
            z_nodes: 96,
            ..QuadratureSpec::default()
        };
        let n2 = spatial_norm(&field, 0.0, 2.0, &qm, &heavy).unwrap();
        assert_relative_eq!(n.value, n2.value, max_relative = 1e-8);
    }

    #[test]
    fn unimodular_shortcut_and_t_quadrature_agree() {
        let qm = odd_field(2.0, 32.0);
        let w = |t: f64, y: &[f64], z: &[f64]| qm.eval_w_r(t, y, z).unwrap().norm();
        let quad = quick_quad();
        let shortcut = mixed_norm(&w, true, 2.0, 6.0, 4.0, &qm, &quad).unwrap();
        let brute = mixed_norm(&w, false, 2.0, 6.0, 4.0, &qm, &quad).unwrap();
        assert_relative_eq!(shortcut.value, brute.value, max_relative = 1e-10);
        // p = 2, T = 4 → factor 2 over the spatial norm
        let spatial = spatial_norm(&w, 0.0, 6.0, &qm, &quad).unwrap();
        assert_relative_eq!(shortcut.value, 2.0 * spatial.value, max_relative = 1e-14);
    }

    #[test]
    fn mixed_norm_monotone_in_horizon() {
        let qm = odd_field(1.0, 16.0);
        let f = |t: f64, y: &[f64], z: &[f64]| qm.eval_forcing_total(t, y, z).unwrap().norm();
        let quad = quick_quad();
        let a = mixed_norm(&f, false, 2.0, 1.2, 2.0, &qm, &quad).unwrap();
        let b = mixed_norm(&f, false, 2.0, 1.2, 4.0, &qm, &quad).unwrap();
        assert!(b.value >= a.value, "{} < {}", b.value, a.value);
    }

    #[test]
    fn hoelder_interpolation_sanity() {
        // ‖f‖₂ ≤ ‖f‖₁^{1/3} ‖f‖₄^{2/3}
        let qm = odd_field(1.0, 64.0);
        let field = datum_field(&qm);
        let quad = QuadratureSpec::default();
        let n1 = spatial_norm(&field, 0.0, 1.0, &qm, &quad).unwrap().value;
        let n2 = spatial_norm(&field, 0.0, 2.0, &qm, &quad).unwrap().value;
        let n4 = spatial_norm(&field, 0.0, 4.0, &qm, &quad).unwrap().value;
        assert!(n2 <= n1.powf(1.0 / 3.0) * n4.powf(2.0 / 3.0) * (1.0 + 1e-9));
    }

    #[test]
    fn ratio_components_behave() {
        let qm = odd_field(1.0, 32.0);
        let quad = quick_quad();
        let r = strichartz_ratio(&qm, Exp::rational(2, 1), Exp::rational(6, 1), &quad).unwrap();
        assert!(r.numerator.value > 0.0);
        assert!(r.datum.value > 0.0);
        assert!(r.forcing.value > 0.0);
        assert_abs_diff_eq!(
            r.ratio,
            r.numerator.value / (r.datum.value + r.forcing.value),
            epsilon = 1e-15
        );
        assert!(strichartz_ratio(&qm, Exp::Inf, Exp::rational(2, 1), &quad).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let qm = odd_field(1.0, 32.0);
        let zero = |_: f64, _: &[f64], _: &[f64]| 0.0;
        let mut quad = quick_quad();
        quad.z_nodes = 4;
        assert!(spatial_norm(&zero, 0.0, 2.0, &qm, &quad).is_err());
        let quad = quick_quad();
        assert!(spatial_norm(&zero, 0.0, 0.5, &qm, &quad).is_err());
        assert!(mixed_norm(&zero, false, 2.0, 2.0, -1.0, &qm, &quad).is_err());
    }
}
