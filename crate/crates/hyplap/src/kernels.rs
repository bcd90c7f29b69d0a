//! Pointwise kernels: the radial Green profile g(r), the hyperbolic Green
//! function G_h(x,y) = g(|x-y|/[x,y]), the Poisson-Szego kernel
//! P_h(x,t) = ((1-|x|^2)/|t-x|^2)^{n-1}, their gradients, and the
//! generalized two-parameter kernel P_{alpha,beta}.

use crate::geometry::{bracket, BallPoint, SpherePoint, Vector};
use crate::numeric::NeumaierSum;
use crate::{Error, Result};

/// Closed form of g(r) = int_r^1 (1-t^2)^{n-2} / t^{n-1} dt, obtained by
/// expanding the binomial and integrating termwise. The t^{-1} term,
/// present exactly when n is even, contributes the logarithm.
///
/// g is strictly decreasing, g(1) = 0, g(r) ~ r^{2-n}/(n-2) as r -> 0 for
/// n >= 3, and g(r) = log(1/r) for n = 2.
#[derive(Debug, Clone)]
pub struct GreenRadialTable {
    dim: usize,
    /// additive constant (value of the sum of power terms at r = 1)
    constant: f64,
    /// (coefficient, exponent) pairs: sum of coef * r^expo
    powers: Vec<(f64, f64)>,
    /// coefficient of log(1/r)
    log_coef: f64,
}

impl GreenRadialTable {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain("Green radial table requires n >= 2".into()));
        }
        let m = dim - 2;
        let mut constant = 0.0;
        let mut powers = Vec::new();
        let mut log_coef = 0.0;
        let mut binom = 1.0; // C(m, k)
        for k in 0..=m {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let e = 2.0 * k as f64 - dim as f64 + 2.0;
            if e == 0.0 {
                log_coef += sign * binom;
            } else {
                // int_r^1 t^{e-1} dt = (1 - r^e)/e
                constant += sign * binom / e;
                powers.push((-sign * binom / e, e));
            }
            binom *= (m - k) as f64 / (k + 1) as f64;
        }
        Ok(Self {
            dim,
            constant,
            powers,
            log_coef,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluate g(r) for r in (0,1).
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!(
                "green radial profile defined on (0,1), got r = {r}"
            )));
        }
        Ok(self.eval_unchecked(r))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        acc.add(self.constant);
        for &(c, e) in &self.powers {
            acc.add(c * r.powf(e));
        }
        if self.log_coef != 0.0 {
            acc.add(self.log_coef * (1.0 / r).ln());
        }
        acc.value()
    }

    /// g'(r) = -(1-r^2)^{n-2} / r^{n-1}, from the defining integral.
    pub fn derivative(&self, r: f64) -> f64 {
        -(1.0 - r * r).powi(self.dim as i32 - 2) / r.powi(self.dim as i32 - 1)
    }
}

/// g(r) for dimension n; convenience over [`GreenRadialTable`].
pub fn green_radial(n: usize, r: f64) -> Result<f64> {
    GreenRadialTable::new(n)?.eval(r)
}

/// Hyperbolic Green function G_h(x,y) = g(|T_y x|) = g(|x-y|/[x,y]).
/// Symmetric in (x,y); diverges as x -> y.
pub fn green_function(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    let table = GreenRadialTable::new(x.dim())?;
    green_function_with(&table, x, y)
}

/// Green function using a precomputed radial table (hot-loop form).
pub fn green_function_with(table: &GreenRadialTable, x: &BallPoint, y: &BallPoint) -> Result<f64> {
    let rho = mobius_distance_ratio(x.as_vector(), y.as_vector());
    if rho == 0.0 {
        return Err(Error::Singularity("green function at x = y".into()));
    }
    table.eval(rho)
}

/// |T_y x| = |x-y| / [x,y].
pub(crate) fn mobius_distance_ratio(x: &Vector, y: &Vector) -> f64 {
    x.sub(y).norm() / bracket(x, y)
}

/// Poisson-Szego kernel P_h(x,t) = ((1-|x|^2)/|t-x|^2)^{n-1}; strictly
/// positive, integrates to 1 against normalized surface measure.
pub fn poisson_kernel_ball(x: &BallPoint, t: &SpherePoint) -> f64 {
    let n = x.dim();
    let d = 1.0 - x.as_vector().norm_sq();
    let s = t.as_vector().sub(x.as_vector()).norm_sq();
    (d / s).powi(n as i32 - 1)
}

/// Gradient of P_h in x:
/// d_k P_h = -2(n-1) (x_k/|x-t|^2 + (1-|x|^2)(x_k-t_k)/|x-t|^4) ((1-|x|^2)/|t-x|^2)^{n-2}.
pub fn poisson_kernel_ball_gradient(x: &BallPoint, t: &SpherePoint) -> Vector {
    let n = x.dim();
    let d = 1.0 - x.as_vector().norm_sq();
    let diff = x.as_vector().sub(t.as_vector());
    let s = diff.norm_sq();
    let base = (d / s).powi(n as i32 - 2);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let xk = x.as_vector().get(k);
        out.push(-2.0 * (n as f64 - 1.0) * (xk / s + d * diff.get(k) / (s * s)) * base);
    }
    Vector::from_raw(out)
}

/// The two pieces of d/dx_k G_h(x,y):
///
/// (D_k G_h)_1 = -(x_k-y_k) (1-|x|^2)^{n-1} (1-|y|^2)^{n-1} / (|x-y|^n [x,y]^n)
/// (D_k G_h)_2 = -x_k (1-|x|^2)^{n-2} (1-|y|^2)^{n-1} / (|x-y|^{n-2} [x,y]^n)
///
/// Their sum is exactly the partial derivative of [`green_function`].
/// (The split in the source text carries an extra 1/n from a differently
/// normalized Green function; see `solver::fundamental_normalization`.)
pub fn green_gradient_parts(x: &BallPoint, y: &BallPoint, k: usize) -> Result<(f64, f64)> {
    let n = x.dim() as i32;
    let diff = x.as_vector().sub(y.as_vector());
    let s = diff.norm();
    if s == 0.0 {
        return Err(Error::Singularity("green gradient at x = y".into()));
    }
    let dx = 1.0 - x.as_vector().norm_sq();
    let dy = 1.0 - y.as_vector().norm_sq();
    let b = bracket(x.as_vector(), y.as_vector());
    let xk = x.as_vector().get(k);
    let p1 = -diff.get(k) * dx.powi(n - 1) * dy.powi(n - 1) / (s.powi(n) * b.powi(n));
    let p2 = -xk * dx.powi(n - 2) * dy.powi(n - 1) / (s.powi(n - 2) * b.powi(n));
    Ok((p1, p2))
}

/// Parameters of the generalized kernel P_{alpha,beta}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub alpha: f64,
    pub beta: f64,
}

impl KernelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if beta > 0.0 {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::Domain(format!("beta must be positive, got {beta}")))
        }
    }

    /// alpha = beta = n-1 recovers the hyperbolic kernel P_h.
    pub fn hyperbolic(n: usize) -> Self {
        Self {
            alpha: n as f64 - 1.0,
            beta: n as f64 - 1.0,
        }
    }

    /// alpha = 1, beta = n/2 is the Euclidean harmonic kernel shape.
    pub fn euclidean_harmonic(n: usize) -> Self {
        Self {
            alpha: 1.0,
            beta: n as f64 / 2.0,
        }
    }
}

/// P_{alpha,beta}(x,y) = (1-|x|^2)^alpha / |x-y|^{2 beta}.
pub fn kernel_alpha_beta(x: &BallPoint, y: &SpherePoint, p: KernelParams) -> f64 {
    let d = 1.0 - x.as_vector().norm_sq();
    let e = x.as_vector().sub(y.as_vector()).norm_sq();
    d.powf(p.alpha) / e.powf(p.beta)
}

/// Directional derivative <grad_x P_{alpha,beta}(x,y), v> for unit v,
/// computed as 2 P Y with Y = beta (<y,v> - a0)/E - alpha a0/d,
/// a0 = <x,v>, d = 1-|x|^2, E = |x-y|^2.
pub fn kernel_alpha_beta_directional(
    x: &BallPoint,
    v: &Vector,
    y: &SpherePoint,
    p: KernelParams,
) -> Result<f64> {
    if (v.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Domain("direction must be a unit vector".into()));
    }
    let d = 1.0 - x.as_vector().norm_sq();
    let e = x.as_vector().sub(y.as_vector()).norm_sq();
    let a0 = x.as_vector().dot(v);
    let yv = y.as_vector().dot(v);
    let big_y = p.beta * (yv - a0) / e - p.alpha * a0 / d;
    Ok(2.0 * kernel_alpha_beta(x, y, p) * big_y)
}
