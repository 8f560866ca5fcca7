//! Gauss–Legendre quadrature on finite intervals.

use crate::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are computed by Newton iteration on the Legendre polynomial,
/// seeded with the Chebyshev-angle approximation. Exact for polynomials
/// of degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Legendre rule needs at least 2 nodes, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-angle seed for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Scaled nodes and weights for the interval `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, w * half))
            .collect()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the Bonnet recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exactness() {
        let rule = GaussLegendre::new(8).unwrap();
        // degree 15 monomial over [0, 1]: exact up to roundoff
        let v = rule.integrate(0.0, 1.0, |x| x.powi(15));
        assert_relative_eq!(v, 1.0 / 16.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_moments() {
        // int_0^inf rho^(2m+1) exp(-a rho^2) drho = m! / (2 a^(m+1))
        let rule = GaussLegendre::new(64).unwrap();
        let a = 1.3_f64;
        for m in 0..6u32 {
            let exact = (1..=m).map(|k| k as f64).product::<f64>() / (2.0 * a.powi(m as i32 + 1));
            let v = rule.integrate(0.0, 14.0, |r| r.powi(2 * m as i32 + 1) * (-a * r * r).exp());
            assert_relative_eq!(v, exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_tiny_rules() {
        assert!(GaussLegendre::new(1).is_err());
    }
}
