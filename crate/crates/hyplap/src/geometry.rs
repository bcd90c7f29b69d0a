//! Mobius transformations of the unit ball and the hyperbolic metric.
//!
//! The canonical automorphism is
//! `T_a x = [(1-|a|^2)(x-a) - |x-a|^2 a] / [x,a]^2` with the symmetrized
//! bracket `[x,a]^2 = 1 + |x|^2 |a|^2 - 2 x.a`, so that `T_a a = 0` and
//! `T_a 0 = -a`; `phi_a = -T_a` is an involution. Everything downstream
//! (kernels, potentials, invariance scans) is built on these identities.

use crate::{Error, Result};

/// A point of R^n, the common currency of all geometry. Dimension is a
/// runtime value; all coordinates are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "vector dimension must be >= 2, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("vector coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    /// Zero vector of dimension n.
    pub fn zeros(n: usize) -> Self {
        Self {
            coords: vec![0.0; n],
        }
    }

    /// k-th canonical basis vector of dimension n (0-based index).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        Self { coords: c }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn get(&self, k: usize) -> f64 {
        self.coords[k]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// A validated point of the open unit ball, |v| < 1 strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    v: Vector,
}

impl BallPoint {
    pub fn new(v: Vector) -> Result<Self> {
        if v.norm() < 1.0 {
            Ok(Self { v })
        } else {
            Err(Error::Domain(format!(
                "|x| = {} is not inside the open unit ball",
                v.norm()
            )))
        }
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(Vector::new(coords)?)
    }

    pub fn origin(n: usize) -> Self {
        Self {
            v: Vector::zeros(n),
        }
    }

    pub fn as_vector(&self) -> &Vector {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

/// A point of the unit sphere S^{n-1}. Construction renormalizes inputs
/// with up to 1e-6 drift (quadrature node generators sit at ~1e-16) and
/// rejects anything farther from the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    v: Vector,
}

impl SpherePoint {
    pub fn new(v: Vector) -> Result<Self> {
        let r = v.norm();
        if (r - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "| |v| - 1 | = {:e} too large for a sphere point",
                (r - 1.0).abs()
            )));
        }
        Ok(Self {
            v: v.scale(1.0 / r),
        })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(Vector::new(coords)?)
    }

    /// North pole e_n.
    pub fn pole(n: usize) -> Self {
        Self {
            v: Vector::basis(n, n - 1),
        }
    }

    pub fn as_vector(&self) -> &Vector {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }
}

/// n x n matrix, row-major; only what the projection identities need.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, x: &Vector) -> Vector {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            out[i] = (0..self.n).map(|j| self.get(i, j) * x.get(j)).sum();
        }
        Vector::from_raw(out)
    }

    pub fn mul_mat(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(
                    i,
                    j,
                    (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum(),
                );
            }
        }
        out
    }
}

/// Inversion with respect to the unit sphere: J(a) = a / |a|^2.
/// Fixed points are exactly S^{n-1}; the origin has no image.
pub fn inversion(a: &Vector) -> Result<Vector> {
    let n2 = a.norm_sq();
    if n2 == 0.0 {
        return Err(Error::Domain(
            "inversion of the origin (point at infinity is not represented)".into(),
        ));
    }
    Ok(a.scale(1.0 / n2))
}

/// Orthogonal projection onto span{x}: Q(x)_{ij} = x_i x_j / |x|^2.
pub fn projection_matrix(x: &Vector) -> Result<Matrix> {
    let n2 = x.norm_sq();
    if n2 == 0.0 {
        return Err(Error::Domain("projection axis must be nonzero".into()));
    }
    let n = x.dim();
    let mut q = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            q.set(i, j, x.get(i) * x.get(j) / n2);
        }
    }
    Ok(q)
}

/// The symmetrized bracket [x,a] = sqrt(1 + |x|^2 |a|^2 - 2 x.a).
/// The radicand is clamped at 0: it only goes negative by floating-point
/// cancellation when |x| = |a| = 1 and x ~ a.
pub fn bracket(x: &Vector, a: &Vector) -> f64 {
    bracket_sq(x, a).max(0.0).sqrt()
}

#[inline]
pub(crate) fn bracket_sq(x: &Vector, a: &Vector) -> f64 {
    1.0 + x.norm_sq() * a.norm_sq() - 2.0 * x.dot(a)
}

/// Which of the two standard automorphisms a `MobiusMap` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusSign {
    /// T_a, with T_a a = 0 and T_a 0 = -a.
    TA,
    /// phi_a = -T_a, the involution.
    PhiA,
}

/// The Mobius automorphism of the ball with parameter `a`, either `T_a`
/// or the involution `phi_a = -T_a`.
#[derive(Debug, Clone)]
pub struct MobiusMap {
    center: BallPoint,
    sign: MobiusSign,
}

impl MobiusMap {
    pub fn t_a(center: BallPoint) -> Self {
        Self {
            center,
            sign: MobiusSign::TA,
        }
    }

    pub fn phi_a(center: BallPoint) -> Self {
        Self {
            center,
            sign: MobiusSign::PhiA,
        }
    }

    pub fn center(&self) -> &BallPoint {
        &self.center
    }

    pub fn sign(&self) -> MobiusSign {
        self.sign
    }

    /// Evaluate the map. Maps the closed ball to itself and the sphere to
    /// the sphere; the only singularity is |x| = |a| = 1 with x = a.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let a = self.center.as_vector();
        let b2 = bracket_sq(x, a).max(0.0);
        if b2 < 1e-30 {
            return Err(Error::Singularity(
                "Mobius map evaluated at the degenerate boundary configuration x = a, |a| = 1"
                    .into(),
            ));
        }
        let d = 1.0 - a.norm_sq();
        let xa = x.sub(a);
        let t = xa.scale(d).sub(&a.scale(xa.norm_sq())).scale(1.0 / b2);
        Ok(match self.sign {
            MobiusSign::TA => t,
            MobiusSign::PhiA => t.scale(-1.0),
        })
    }

    /// Apply to a ball point; the image is again interior.
    pub fn apply_ball(&self, x: &BallPoint) -> Result<BallPoint> {
        let img = self.apply(x.as_vector())?;
        // interior maps to interior; renormalize defensively against fp drift
        if img.norm() >= 1.0 {
            return Err(Error::Singularity(
                "Mobius image left the open ball (floating-point boundary case)".into(),
            ));
        }
        BallPoint::new(img)
    }
}

/// Conformal factor |T'_y x| = (1 - |y|^2) / [x,y]^2.
pub fn conformal_factor(y: &BallPoint, x: &Vector) -> f64 {
    (1.0 - y.as_vector().norm_sq()) / bracket_sq(x, y.as_vector())
}

/// The identity 1 - |T_a x|^2 = (1-|a|^2)(1-|x|^2) / [x,a]^2, evaluated
/// from the right-hand side (stable near the boundary).
pub fn one_minus_image_sq(a: &BallPoint, x: &BallPoint) -> f64 {
    (1.0 - a.as_vector().norm_sq()) * (1.0 - x.as_vector().norm_sq())
        / bracket_sq(x.as_vector(), a.as_vector())
}

/// Hyperbolic distance d_h(a,b) = log((1+|phi_a(b)|)/(1-|phi_a(b)|)),
/// evaluated as 2 log(1+r) - log(1-r^2) with 1 - r^2 taken from the
/// cancellation-free identity (1-|a|^2)(1-|b|^2)/[a,b]^2.
pub fn hyperbolic_distance(a: &BallPoint, b: &BallPoint) -> f64 {
    let q = one_minus_image_sq(a, b); // 1 - |phi_a(b)|^2
    let r = (1.0 - q).max(0.0).sqrt();
    2.0 * (1.0 + r).ln() - q.ln()
}

/// The Mobius-invariant distance ratio |x-y|/[x,y]: returns the pair
/// (ratio at (x,y), ratio at (gamma x, gamma y)) for gamma = T_{gamma_param}.
/// The two entries agree for every Mobius transformation of the ball.
pub fn distance_ratio_invariance(
    gamma_param: &BallPoint,
    x: &BallPoint,
    y: &BallPoint,
) -> Result<(f64, f64)> {
    let ratio = |u: &Vector, v: &Vector| u.sub(v).norm() / bracket(u, v);
    let gamma = MobiusMap::t_a(gamma_param.clone());
    let gx = gamma.apply(x.as_vector())?;
    let gy = gamma.apply(y.as_vector())?;
    Ok((ratio(x.as_vector(), y.as_vector()), ratio(&gx, &gy)))
}
