//! Second-order forward-mode differentiation.
//!
//! A [`Jet`] carries a value, gradient and full Hessian with respect to a
//! fixed set of variables. The quasi-mode fields are products of a Gaussian
//! profile, a unimodular phase and smooth cutoffs; propagating jets through
//! those closed-form factors gives exact first and second derivatives
//! without hand-expanding the chain rule for every printed formula.

/// Truncated second-order Taylor expansion in `nv` variables.
#[derive(Debug, Clone)]
pub struct Jet {
    pub v: f64,
    /// Gradient, length `nv`.
    pub g: Vec<f64>,
    /// Hessian, row-major `nv × nv` (kept symmetric).
    pub h: Vec<f64>,
}

impl Jet {
    pub fn constant(v: f64, nv: usize) -> Self {
        Jet {
            v,
            g: vec![0.0; nv],
            h: vec![0.0; nv * nv],
        }
    }

    /// The coordinate variable `idx` seeded at `v`.
    pub fn var(idx: usize, v: f64, nv: usize) -> Self {
        let mut j = Jet::constant(v, nv);
        j.g[idx] = 1.0;
        j
    }

    pub fn nv(&self) -> usize {
        self.g.len()
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a - b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            v: self.v * s,
            g: self.g.iter().map(|a| a * s).collect(),
            h: self.h.iter().map(|a| a * s).collect(),
        }
    }

    pub fn shift(&self, s: f64) -> Jet {
        let mut j = self.clone();
        j.v += s;
        j
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.nv();
        let mut g = vec![0.0; n];
        for i in 0..n {
            g[i] = self.g[i] * o.v + self.v * o.g[i];
        }
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = self.h[i * n + j] * o.v
                    + self.g[i] * o.g[j]
                    + self.g[j] * o.g[i]
                    + self.v * o.h[i * n + j];
            }
        }
        Jet { v: self.v * o.v, g, h }
    }

    /// Compose with a univariate function given `(f, f', f'')` at `self.v`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let n = self.nv();
        let g: Vec<f64> = self.g.iter().map(|a| f1 * a).collect();
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = f1 * self.h[i * n + j] + f2 * self.g[i] * self.g[j];
            }
        }
        Jet { v: f0, g, h }
    }

    /// `self^p` for strictly positive values.
    pub fn powf(&self, p: f64) -> Jet {
        debug_assert!(self.v > 0.0);
        let f0 = self.v.powf(p);
        let f1 = p * self.v.powf(p - 1.0);
        let f2 = p * (p - 1.0) * self.v.powf(p - 2.0);
        self.chain(f0, f1, f2)
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Trace of the Hessian restricted to variables `[0, k)`.
    pub fn lap_prefix(&self, k: usize) -> f64 {
        let n = self.nv();
        (0..k).map(|i| self.h[i * n + i]).sum()
    }
}

/// Sum of squares of the given variables' jets.
pub fn norm_sq(vars: &[Jet]) -> Jet {
    let nv = vars[0].nv();
    let mut acc = Jet::constant(0.0, nv);
    for v in vars {
        acc = acc.add(&v.mul(v));
    }
    acc
}
