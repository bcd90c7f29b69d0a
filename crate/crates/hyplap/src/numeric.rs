//! Shared numerical primitives: compensated summation, Gauss rules via
//! Golub-Welsch, half-integer gamma values, and panel subdivision helpers.

use std::f64::consts::PI;

/// Neumaier-compensated accumulator (Kahan with the branch that also
/// protects large-into-small additions). All quadrature sums in the crate
/// go through this type in a fixed order, so results are bit-reproducible.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Sum a slice in order with compensation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Gamma(k/2) for integer `k >= 1`, computed exactly from
/// Gamma(1/2) = sqrt(pi) and Gamma(1) = 1 by the recurrence.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1, "gamma_half requires k >= 1");
    let mut x = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut m = if k % 2 == 0 { 2 } else { 1 };
    while m + 2 <= k {
        x *= m as f64 / 2.0;
        m += 2;
    }
    x
}

/// Surface area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
pub fn surface_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n as u32)
}

/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
pub fn ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n as u32 + 2)
}

/// Nodes and weights of the N-point Gauss rule for the weight
/// (1-x^2)^lambda on [-1,1] (lambda = 0 is Gauss-Legendre), via
/// Golub-Welsch on the symmetric Jacobi recurrence.
pub fn gauss_gegenbauer(n: usize, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    assert!(lambda > -1.0);
    // total mass of the weight: int (1-x^2)^lambda dx
    let mu0 = PI.sqrt() * gamma_fn(lambda + 1.0) / gamma_fn(lambda + 1.5);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let kf = k as f64;
        let b = kf * (kf + 2.0 * lambda)
            / ((2.0 * kf + 2.0 * lambda - 1.0) * (2.0 * kf + 2.0 * lambda + 1.0));
        off.push(b.sqrt());
    }
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (k, &b) in off.iter().enumerate() {
        m[(k, k + 1)] = b;
        m[(k + 1, k)] = b;
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // symmetric weight: symmetrize nodes/weights about 0 to kill eigensolver noise
    let half = n / 2;
    for i in 0..half {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[half].0 = 0.0;
    }
    pairs.into_iter().unzip()
}

/// Gauss-Legendre nodes/weights on [-1,1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_gegenbauer(n, 0.0)
}

/// Gauss-Legendre nodes/weights mapped to [a,b].
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&t| half * t).collect(),
    )
}

/// Lanczos approximation of Gamma for real positive arguments; half-integer
/// arguments are delegated to the exact recurrence.
pub fn gamma_fn(x: f64) -> f64 {
    let twice = 2.0 * x;
    if twice > 0.0 && twice < 1e6 && (twice - twice.round()).abs() < 1e-12 {
        return gamma_half(twice.round() as u32);
    }
    // g = 7 Lanczos coefficients
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = G[0];
        let t = x + 7.5;
        for (i, &g) in G.iter().enumerate().skip(1) {
            a += g / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Inverse of the standard normal CDF (Acklam's rational approximation,
/// relative error ~1.2e-9). Used only to map low-discrepancy points to
/// directions, where this accuracy is far below the QMC error.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inverse_normal_cdf(1.0 - p)
    }
}

/// Breakpoints of a geometric panel subdivision of [0, b] refined toward 0:
/// b, b/2, b/4, ... down to `min_size`, then 0.
pub fn panels_toward_zero(b: f64, min_size: f64) -> Vec<f64> {
    assert!(b > 0.0 && min_size > 0.0);
    let mut pts = vec![b];
    let mut t = b;
    while t > min_size {
        t *= 0.5;
        pts.push(t);
    }
    pts.push(0.0);
    pts.reverse();
    pts
}

/// Integrate f over consecutive panels with a fixed-size Gauss rule per
/// panel, deterministic order, compensated accumulation.
pub fn integrate_panels(
    f: &dyn Fn(f64) -> f64,
    breakpoints: &[f64],
    nodes_per_panel: usize,
) -> f64 {
    let (gx, gw) = gauss_legendre(nodes_per_panel);
    let mut acc = NeumaierSum::new();
    for seg in breakpoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (&x, &w) in gx.iter().zip(gw.iter()) {
            acc.add(half * w * f(mid + half * x));
        }
    }
    acc.value()
}

/// C^2 smoothstep on [0,1]: 6t^5 - 15t^4 + 10t^3, clamped outside.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_integers() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half(3) - 0.5 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(6) - 2.0).abs() < 1e-15);
        assert!((gamma_half(8) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn surface_and_volume() {
        assert!((surface_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((surface_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        // sigma_{n-1} = n * omega_n
        for n in 2..=8 {
            assert!((surface_area(n) - n as f64 * ball_volume(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn legendre_exactness() {
        let (x, w) = gauss_legendre(8);
        // integrates x^k exactly for k <= 15
        for k in 0..=15u32 {
            let q: f64 = x
                .iter()
                .zip(&w)
                .map(|(&xi, &wi)| wi * xi.powi(k as i32))
                .sum();
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-13, "k={k} q={q} exact={exact}");
        }
    }

    #[test]
    fn gegenbauer_mass_and_moment() {
        // lambda = 1/2: mass = pi/2, second moment = pi/8
        let (x, w) = gauss_gegenbauer(12, 0.5);
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi * xi).sum();
        assert!((m0 - PI / 2.0).abs() < 1e-13);
        assert!((m2 - PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn neumaier_catastrophic_cancellation() {
        let mut s = NeumaierSum::new();
        for &v in &[1e200, 0.1, 0.2, 0.3, -1e200] {
            s.add(v);
        }
        assert!((s.value() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn inverse_normal_roundtrip() {
        // CDF via erf-free check: monotone + symmetric + matches known quantiles
        assert!((inverse_normal_cdf(0.5)).abs() < 1e-12);
        assert!((inverse_normal_cdf(0.975) - 1.959_963_984_540_054).abs() < 1e-7);
        assert!((inverse_normal_cdf(0.025) + 1.959_963_984_540_054).abs() < 1e-7);
    }

    #[test]
    fn panel_integration_smooth() {
        let pts = panels_toward_zero(1.0, 1e-6);
        let v = integrate_panels(&|x: f64| x.sqrt(), &pts, 16);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }
}
