//! The block-antisymmetric magnetic potential and its algebraic identities.
//!
//! The potential is `A(x) = |x|^{-α} M x` with `M` built from 2×2
//! antisymmetric blocks and a one- (odd dimension) or two-dimensional
//! (even dimension) degenerate tail. Everything here is closed form; the
//! finite-difference cross-checks live in the tests.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Dimension parity of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Dimension of the degenerate tail (the `z` block).
    pub fn d_z(self) -> usize {
        match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }
}

/// The matrices `Ω` and `M` of the construction together with their
/// dimensional bookkeeping.
#[derive(Debug, Clone)]
pub struct MatrixSpec {
    /// Number of 2×2 blocks in `Ω`.
    pub k: usize,
    /// Block-diagonal antisymmetric orthogonal matrix on the `y` block.
    pub omega: DMatrix<f64>,
    /// The full `n × n` matrix with the degenerate tail.
    pub m: DMatrix<f64>,
    pub n: usize,
    pub parity: Parity,
}

/// Potential parameters: the matrix data plus the decay exponent.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    pub matrix: MatrixSpec,
    /// Decay exponent, strictly between 1 and 2.
    pub alpha: f64,
    /// Replace `|x|^{-α}` by `(1 + |x|²)^{-α/2}` (non-singular variant).
    pub regularized: bool,
}

impl PotentialSpec {
    pub fn new(n: usize, alpha: f64, regularized: bool) -> Result<Self> {
        if !(1.0 < alpha && alpha < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (1, 2), got {alpha}"
            )));
        }
        Ok(PotentialSpec {
            matrix: build_m(n)?,
            alpha,
            regularized,
        })
    }

    /// Scalar factor `f(x)` and its radial strength: `A = f M x`.
    fn factor(&self, x: &DVector<f64>) -> Result<(f64, f64)> {
        let r2 = x.norm_squared();
        if self.regularized {
            let s = 1.0 + r2;
            // f = s^{-α/2}, f' contracted as ∇f = -α s^{-α/2-1} x
            Ok((s.powf(-0.5 * self.alpha), -self.alpha * s.powf(-0.5 * self.alpha - 1.0)))
        } else {
            if r2 == 0.0 {
                return Err(Error::SingularOrigin);
            }
            Ok((
                r2.powf(-0.5 * self.alpha),
                -self.alpha * r2.powf(-0.5 * self.alpha - 1.0),
            ))
        }
    }
}

/// One sample of the Taylor remainders of `A` and `|A|²` around the
/// degenerate axis, with the dimensionless bound ratios of the quadratic
/// (`r1`) and cubic (`r2`) estimates.
#[derive(Debug, Clone)]
pub struct RemainderSample {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: f64,
    pub bound_ratio_r1: f64,
    pub bound_ratio_r2: f64,
}

/// Block-diagonal antisymmetric orthogonal matrix with `k` copies of
/// `[[0, 1], [-1, 0]]`.
pub fn build_omega(k: usize) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Err(Error::InvalidDimension("block count k must be positive".into()));
    }
    let mut o = DMatrix::zeros(2 * k, 2 * k);
    for b in 0..k {
        o[(2 * b, 2 * b + 1)] = 1.0;
        o[(2 * b + 1, 2 * b)] = -1.0;
    }
    Ok(o)
}

/// The `n × n` matrix `M`: `Ω` on the leading block, zero on the last one
/// (odd `n`) or two (even `n`) coordinates.
pub fn build_m(n: usize) -> Result<MatrixSpec> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!(
            "dimension must be at least 3, got {n}"
        )));
    }
    let parity = Parity::of(n);
    let d_y = n - parity.d_z();
    let k = d_y / 2;
    let omega = build_omega(k)?;
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, 0), (d_y, d_y)).copy_from(&omega);
    Ok(MatrixSpec { k, omega, m, n, parity })
}

/// `A(x) = f(x) M x` with `f = |x|^{-α}` (or its regularized variant).
pub fn eval_a(x: &DVector<f64>, spec: &PotentialSpec) -> Result<DVector<f64>> {
    let (f, _) = spec.factor(x)?;
    Ok(&spec.matrix.m * x * f)
}

/// Magnetic field `B = DA - (DA)ᵗ` in closed form:
/// `B = 2 f M + (Mx) ∇fᵗ - ∇f (Mx)ᵗ`.
pub fn eval_b(x: &DVector<f64>, spec: &PotentialSpec) -> Result<DMatrix<f64>> {
    let (f, fr) = spec.factor(x)?;
    let mx = &spec.matrix.m * x;
    let grad_f = x * fr;
    let mut b = &spec.matrix.m * (2.0 * f);
    b += &mx * grad_f.transpose();
    b -= &grad_f * mx.transpose();
    Ok(b)
}

/// Tangential component `(x/|x|) · B(x)` (a row-vector contraction).
///
/// For `A = f(|x|) M x` this contracts to `-(2 f + x·∇f) (Mx)ᵗ / |x|`,
/// which vanishes only when `f` is homogeneous of degree -2; at decay
/// exponent α it equals `(α - 2) |x|^{-α} (Mx)ᵗ / |x|`.
pub fn tangential_b(x: &DVector<f64>, spec: &PotentialSpec) -> Result<DVector<f64>> {
    let b = eval_b(x, spec)?;
    let nrm = x.norm();
    if nrm == 0.0 {
        return Err(Error::SingularOrigin);
    }
    Ok((b.transpose() * x) / nrm)
}

/// `div A`, identically zero for antisymmetric `M`:
/// `div A = ∇f · Mx + f tr M = 0`.
pub fn divergence_a(x: &DVector<f64>, spec: &PotentialSpec) -> Result<f64> {
    let (f, fr) = spec.factor(x)?;
    let mx = &spec.matrix.m * x;
    Ok(fr * x.dot(&mx) + f * spec.matrix.m.trace())
}

/// Remainders of the first-order expansion of `A` and the second-order
/// expansion of `|A|²` around the degenerate axis, sampled at `(y, z)`.
///
/// `r1(w) = A(w, e_z) - M (w, 0)ᵗ` and
/// `r2(w) = |A|²(w, e_z) - c |w|²` with `w = y/|z|`, both evaluated via
/// the homogeneity of `A`. Only defined for `|y| < |z|`.
pub fn taylor_remainders(
    y: &[f64],
    z: &[f64],
    spec: &PotentialSpec,
    c: f64,
) -> Result<RemainderSample> {
    let d_z = spec.matrix.parity.d_z();
    let d_y = spec.matrix.n - d_z;
    if y.len() != d_y || z.len() != d_z {
        return Err(Error::InvalidDimension(format!(
            "expected y in R^{d_y} and z in R^{d_z}"
        )));
    }
    let z_norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if y_norm >= z_norm {
        return Err(Error::OutsideSupport(format!(
            "remainder bounds require |y| < |z| (got |y| = {y_norm}, |z| = {z_norm})"
        )));
    }
    let x = DVector::from_iterator(spec.matrix.n, y.iter().chain(z.iter()).copied());
    let a = eval_a(&x, spec)?;
    // first-order residual, rescaled to the unit sphere point (w, z/|z|)
    let m_y0 = {
        let mut v = x.clone();
        for i in d_y..spec.matrix.n {
            v[i] = 0.0;
        }
        &spec.matrix.m * v
    };
    let zam1 = z_norm.powf(spec.alpha - 1.0);
    let r1: Vec<f64> = (0..spec.matrix.n)
        .map(|i| zam1 * (a[i] - m_y0[i] * z_norm.powf(-spec.alpha)))
        .collect();
    let r2 = z_norm.powf(2.0 * spec.alpha - 2.0)
        * (a.norm_squared() - c * y_norm * y_norm * z_norm.powf(-2.0 * spec.alpha));
    let r1_norm = r1.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (bound_ratio_r1, bound_ratio_r2) = if y_norm > 0.0 {
        (
            r1_norm * z_norm * z_norm / (y_norm * y_norm),
            r2.abs() * z_norm.powi(3) / y_norm.powi(3),
        )
    } else {
        (0.0, 0.0)
    };
    Ok(RemainderSample {
        y: y.to_vec(),
        z: z.to_vec(),
        r1,
        r2,
        bound_ratio_r1,
        bound_ratio_r2,
    })
}
