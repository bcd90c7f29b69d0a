//! Multivariate polynomials with term-by-term exact hyperbolic Laplacian,
//! the manufactured-solution oracle for the Dirichlet solver.

use crate::geometry::Vector;
use std::collections::BTreeMap;

/// Sparse multivariate polynomial over R^n, keyed by exponent tuples.
/// BTreeMap keeps term order deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate monomial x_k.
    pub fn coordinate(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, 1.0);
        p
    }

    /// 1 - |x|^2.
    pub fn one_minus_norm_sq(dim: usize) -> Self {
        let mut p = Self::constant(dim, 1.0);
        for k in 0..dim {
            let mut e = vec![0; dim];
            e[k] = 2;
            p.add_term(e, -1.0);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, expo: Vec<u32>, coef: f64) {
        assert_eq!(expo.len(), self.dim);
        let c = self.terms.entry(expo.clone()).or_insert(0.0);
        *c += coef;
        if *c == 0.0 {
            self.terms.remove(&expo);
        }
    }

    pub fn from_terms(dim: usize, terms: &[(f64, &[u32])]) -> Self {
        let mut p = Self::zero(dim);
        for (c, e) in terms {
            p.add_term(e.to_vec(), *c);
        }
        p
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (k, &ek) in e.iter().enumerate() {
                t *= x.get(k).powi(ek as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_slice(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (k, &ek) in e.iter().enumerate() {
                t *= x[k].powi(ek as i32);
            }
            acc += t;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Partial derivative in coordinate k.
    pub fn diff(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = e.clone();
                e2[k] -= 1;
                out.add_term(e2, c * e[k] as f64);
            }
        }
        out
    }

    /// Euclidean Laplacian.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for k in 0..self.dim {
            out = out.add(&self.diff(k).diff(k));
        }
        out
    }

    /// x . grad p.
    pub fn radial_derivative(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for k in 0..self.dim {
            out = out.add(&Self::coordinate(self.dim, k).mul(&self.diff(k)));
        }
        out
    }

    /// Exact hyperbolic Laplacian
    /// (1-|x|^2)^2 lap p + 2(n-2)(1-|x|^2) x.grad p, again a polynomial.
    pub fn hyperbolic_laplacian(&self) -> Self {
        let n = self.dim;
        let w = Self::one_minus_norm_sq(n);
        let t1 = w.mul(&w).mul(&self.laplacian());
        let t2 = w
            .mul(&self.radial_derivative())
            .scale(2.0 * (n as f64 - 2.0));
        t1.add(&t2)
    }

    /// Exact gradient as one polynomial per coordinate.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim).map(|k| self.diff(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_diff() {
        // p = 3 x0^2 x1 - x1
        let p = Polynomial::from_terms(2, &[(3.0, &[2, 1]), (-1.0, &[0, 1])]);
        let x = Vector::new(vec![2.0, 0.5]).unwrap();
        assert_eq!(p.eval(&x), 3.0 * 4.0 * 0.5 - 0.5);
        let dp0 = p.diff(0);
        assert_eq!(dp0.eval(&x), 6.0 * 2.0 * 0.5);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn hyperbolic_laplacian_constant_and_linear() {
        let n = 3;
        let c = Polynomial::constant(n, 5.0);
        assert_eq!(c.hyperbolic_laplacian().eval(&Vector::zeros(n)), 0.0);
        // linear u = x0: lap u = 0, x.grad = x0
        let u = Polynomial::coordinate(n, 0);
        let lh = u.hyperbolic_laplacian();
        let x = Vector::new(vec![0.3, 0.2, -0.1]).unwrap();
        let d = 1.0 - x.norm_sq();
        assert!((lh.eval(&x) - 2.0 * (n as f64 - 2.0) * d * 0.3).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_laplacian_matches_fd() {
        let n = 3;
        let p = Polynomial::from_terms(
            n,
            &[
                (1.0, &[2, 0, 0]),
                (-0.5, &[1, 1, 1]),
                (0.25, &[0, 0, 4]),
                (2.0, &[0, 2, 2]),
            ],
        );
        let lh = p.hyperbolic_laplacian();
        let x = Vector::new(vec![0.2, -0.3, 0.4]).unwrap();
        let h = 1e-5;
        let mut lap = 0.0;
        let mut xg = 0.0;
        for k in 0..n {
            let mut cp = x.coords().to_vec();
            let mut cm = cp.clone();
            cp[k] += h;
            cm[k] -= h;
            let fp = p.eval(&Vector::new(cp).unwrap());
            let fm = p.eval(&Vector::new(cm).unwrap());
            lap += (fp - 2.0 * p.eval(&x) + fm) / (h * h);
            xg += x.get(k) * (fp - fm) / (2.0 * h);
        }
        let d = 1.0 - x.norm_sq();
        let fd = d * d * lap + 2.0 * (n as f64 - 2.0) * d * xg;
        assert!((lh.eval(&x) - fd).abs() < 1e-4);
    }
}
