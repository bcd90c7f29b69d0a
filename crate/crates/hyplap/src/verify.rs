//! Named verification suites: every quantitative estimate in scope is run
//! as a deterministic, seeded check with a pinned tolerance. The CLI
//! `verify` command and the acceptance test suite both execute these.

use crate::catalog;
use crate::geometry::{BallPoint, MobiusMap, SpherePoint, Vector};
use crate::halfspace::{self, HalfspaceKernel};
use crate::kernels::{self, GreenRadialTable, KernelParams};
use crate::numeric::NeumaierSum;
use crate::poly::Polynomial;
use crate::quadrature::{integrate_sphere, qmc_sphere_rule, sphere_rule, QMC_NODES};
use crate::regularity::{
    self, a_scan, b_scan, check_condition, geometric_radius_grid, holder_radial_green,
    i_alpha_scan, i_m_scan, i_omega_scan, integral_b_total, j_gradient_majorants, riesz_potential,
    ConditionParams, ConditionTag, RieszParams,
};
use crate::solver::{
    self, green_normalization, hyperbolic_laplacian_fd, reproduce_from_green, solve_dirichlet,
    BoundaryKernel, GreenQuad, RadialBump, SlicedPoissonEvaluator, SolverRules, Source,
    SourceDensity,
};
use crate::Result;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Radius cap for the n = 6 QMC kernel-normalization check: an
/// equal-weight rule with 2^20 nodes on S^5 cannot resolve the kernel
/// peak (width 1-|x|) much below this; the value is frozen from the
/// measured error curve with a ~3x margin at the 1e-4 tolerance.
pub const QMC_RADIUS_CAP_N6: f64 = 0.3;

/// One verified quantity.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// None for report-only items (never fail a run)
    pub passed: Option<bool>,
    pub value: f64,
    pub threshold: f64,
    pub details: String,
}

impl CheckResult {
    fn pass_if(
        name: impl Into<String>,
        value: f64,
        threshold: f64,
        ok: bool,
        details: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            passed: Some(ok),
            value,
            threshold,
            details: details.into(),
        }
    }

    fn le(name: impl Into<String>, value: f64, threshold: f64, details: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: Some(value <= threshold),
            value,
            threshold,
            details: details.into(),
        }
    }

    fn ge(name: impl Into<String>, value: f64, threshold: f64, details: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: Some(value >= threshold),
            value,
            threshold,
            details: details.into(),
        }
    }

    fn report(name: impl Into<String>, value: f64, details: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: None,
            value,
            threshold: f64::NAN,
            details: details.into(),
        }
    }
}

/// Result of a named suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub constants: BTreeMap<String, f64>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            seed,
            checks: Vec::new(),
            constants: BTreeMap::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed.unwrap_or(true))
    }
}

/// The suites `verify` knows about, in declared order.
pub const SUITE_NAMES: &[&str] = &[
    "mobius",
    "kernels",
    "dirichlet",
    "holder",
    "green-gradient",
    "riesz",
    "halfspace",
];

/// Run one suite by name (or "all").
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    match name {
        "all" => SUITE_NAMES.iter().map(|s| run_single(s, seed)).collect(),
        other => Ok(vec![run_single(other, seed)?]),
    }
}

fn run_single(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "mobius" => Ok(suite_mobius(seed)),
        "kernels" => suite_kernels(seed),
        "dirichlet" => suite_dirichlet(seed),
        "holder" => suite_holder(seed),
        "green-gradient" => suite_green_gradient(seed),
        "riesz" => suite_riesz(seed),
        "halfspace" => suite_halfspace(seed),
        other => Err(crate::Error::Domain(format!(
            "unknown suite '{other}' (known: {SUITE_NAMES:?} or 'all')"
        ))),
    }
}

fn random_ball(rng: &mut ChaCha8Rng, n: usize, rmax: f64) -> BallPoint {
    crate::solver::random_ball_point(rng, n, rmax)
}

fn random_sphere(rng: &mut ChaCha8Rng, n: usize) -> SpherePoint {
    crate::solver::random_sphere_point(rng, n)
}

/// Mobius identity suite: the two-point conformal-factor identity, the
/// image-norm identity 1-|T_a x|^2, the involution, distance-ratio
/// invariance, and d_h invariance, 1e4 random configurations per
/// dimension 2..=6, all to 1e-10.
pub fn suite_mobius(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("mobius", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_m1: f64 = 0.0;
    let mut worst_m2: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut worst_dh: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..10_000 {
            let y = random_ball(&mut rng, n, 0.99);
            let a = random_ball(&mut rng, n, 0.99);
            let b = random_ball(&mut rng, n, 0.99);
            let t = MobiusMap::t_a(y.clone());
            let ta = t.apply(a.as_vector()).expect("interior");
            let tb = t.apply(b.as_vector()).expect("interior");
            // conformal-factor identity, finite two-point form:
            // |T_y a - T_y b| [a,y] [b,y] = (1-|y|^2) |a-b|
            let lhs = ta.dist(&tb)
                * crate::geometry::bracket(a.as_vector(), y.as_vector())
                * crate::geometry::bracket(b.as_vector(), y.as_vector());
            let rhs = (1.0 - y.as_vector().norm_sq()) * a.as_vector().dist(b.as_vector());
            worst_m1 = worst_m1.max((lhs - rhs).abs());
            // image-norm identity
            let m2 = crate::geometry::one_minus_image_sq(&y, &a) - (1.0 - ta.norm_sq());
            worst_m2 = worst_m2.max(m2.abs());
            // involution
            let phi = MobiusMap::phi_a(y.clone());
            let back = phi
                .apply(&phi.apply(a.as_vector()).expect("interior"))
                .expect("interior");
            worst_inv = worst_inv.max(back.dist(a.as_vector()));
            // distance ratio
            let (r1, r2) =
                crate::geometry::distance_ratio_invariance(&y, &a, &b).expect("interior");
            worst_ratio = worst_ratio.max((r1 - r2).abs());
            // metric invariance
            let d1 = crate::geometry::hyperbolic_distance(&a, &b);
            let d2 = crate::geometry::hyperbolic_distance(
                &t.apply_ball(&a).expect("interior"),
                &t.apply_ball(&b).expect("interior"),
            );
            worst_dh = worst_dh.max((d1 - d2).abs());
        }
    }
    rep.checks.push(CheckResult::le(
        "conformal-factor-two-point",
        worst_m1,
        1e-10,
        "|T_y a - T_y b| [a,y][b,y] = (1-|y|^2)|a-b|, 1e4 configs per n in 2..=6",
    ));
    rep.checks.push(CheckResult::le(
        "image-norm-identity",
        worst_m2,
        1e-10,
        "1-|T_a x|^2 = (1-|a|^2)(1-|x|^2)/[x,a]^2",
    ));
    rep.checks.push(CheckResult::le(
        "involution",
        worst_inv,
        1e-10,
        "phi_a(phi_a(x)) = x",
    ));
    rep.checks.push(CheckResult::le(
        "distance-ratio",
        worst_ratio,
        1e-10,
        "|x-y|/[x,y] invariant under T_a",
    ));
    rep.checks.push(CheckResult::le(
        "metric-invariance",
        worst_dh,
        1e-10,
        "d_h(T_a x, T_a y) = d_h(x, y)",
    ));
    rep
}

/// Kernel-normalization suite: int P_h(x,.) dsigma = 1 over product rules
/// at n = 3,4 (1e-8, |x| <= 0.9) and over the equal-weight QMC rule at
/// n = 6 (1e-4, |x| <= QMC_RADIUS_CAP_N6), plus the radial Green profile
/// against its defining-integral oracle and the directional-derivative
/// identity of the generalized kernel.
pub fn suite_kernels(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("kernels", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // raw-slice kernel normalization over a rule
    let normalization_err = |rule: &crate::quadrature::QuadratureRule, x: &BallPoint| -> f64 {
        let n = x.dim();
        let d = 1.0 - x.as_vector().norm_sq();
        let xs = x.as_vector().coords();
        let v = integrate_sphere(
            &|t: &[f64]| {
                let mut s = 0.0;
                for (ti, xi) in t.iter().zip(xs) {
                    s += (ti - xi) * (ti - xi);
                }
                (d / s).powi(n as i32 - 1)
            },
            rule,
        )
        .expect("finite kernel");
        (v - 1.0).abs()
    };
    for (n, level, tol) in [(3usize, 280usize, 1e-8), (4, 260, 1e-8)] {
        let rule = sphere_rule(n, level)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let x = random_ball(&mut rng, n, 0.9);
            worst = worst.max(normalization_err(&rule, &x));
        }
        rep.checks.push(CheckResult::le(
            format!("poisson-normalization-n{n}"),
            worst,
            tol,
            format!("50 random |x| <= 0.9, product rule level {level}"),
        ));
    }
    // n = 6: QMC rule; radius capped at the rule's measured resolution
    let rule6 = qmc_sphere_rule(6, QMC_NODES, 0);
    let mut worst6: f64 = 0.0;
    for _ in 0..50 {
        let x = random_ball(&mut rng, 6, QMC_RADIUS_CAP_N6);
        worst6 = worst6.max(normalization_err(&rule6, &x));
    }
    rep.checks.push(CheckResult::le(
        "poisson-normalization-n6-qmc",
        worst6,
        1e-4,
        format!("50 random |x| <= {QMC_RADIUS_CAP_N6}, equal-weight Sobol rule, {QMC_NODES} nodes"),
    ));
    // documentation row: the same rule at |x| = 0.9 (resolution limit)
    let mut c = vec![0.0; 6];
    c[5] = 0.9;
    let limit_err = normalization_err(&rule6, &BallPoint::from_coords(c)?);
    rep.checks.push(CheckResult::report(
        "poisson-normalization-n6-qmc-at-0.9",
        limit_err,
        "equal-weight rules cannot resolve the peak at |x| = 0.9; reported, not asserted",
    ));
    rep.constants
        .insert("qmc_n6_error_at_0.9".into(), limit_err);
    // green radial closed form vs adaptive oracle
    let mut worst_g: f64 = 0.0;
    for n in 2..=6 {
        let table = GreenRadialTable::new(n)?;
        for k in 1..=98 {
            let r = k as f64 / 99.0;
            let closed = table.eval(r)?;
            let pts = crate::numeric::panels_toward_zero(1.0 - r, (1.0 - r) * 1e-9);
            let oracle = crate::numeric::integrate_panels(
                &|u: f64| {
                    let t = r + u;
                    (1.0 - t * t).powi(n as i32 - 2) / t.powi(n as i32 - 1)
                },
                &pts,
                24,
            );
            worst_g = worst_g.max((closed - oracle).abs() / (1.0 + oracle.abs()));
        }
    }
    rep.checks.push(CheckResult::le(
        "green-radial-oracle",
        worst_g,
        1e-10,
        "closed form vs adaptive quadrature of the defining integral, n = 2..6",
    ));
    // generalized kernel directional derivative vs FD, 200 configs
    let mut worst_d: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=5);
        let x = random_ball(&mut rng, n, 0.85);
        let y = random_sphere(&mut rng, n);
        if x.as_vector().dist(y.as_vector()) < 0.2 {
            continue;
        }
        let dir = random_sphere(&mut rng, n);
        let v = dir.as_vector().clone();
        let p = KernelParams::new(rng.gen_range(0.5..2.5), rng.gen_range(0.5..2.5))?;
        let an = kernels::kernel_alpha_beta_directional(&x, &v, &y, p)?;
        let h = 1e-6;
        let xp = BallPoint::new(x.as_vector().add(&v.scale(h)))?;
        let xm = BallPoint::new(x.as_vector().sub(&v.scale(h)))?;
        let fd = (kernels::kernel_alpha_beta(&xp, &y, p) - kernels::kernel_alpha_beta(&xm, &y, p))
            / (2.0 * h);
        worst_d = worst_d.max((an - fd).abs() / (1.0 + fd.abs()));
    }
    rep.checks.push(CheckResult::le(
        "kernel-alpha-beta-directional-fd",
        worst_d,
        1e-6,
        "2 P Y form vs central differences, 200 random configurations",
    ));
    Ok(rep)
}

/// Dirichlet suite: Lap_h-harmonicity of the kernel, Mobius invariance of
/// Lap_h, the Green reproduction identity, the manufactured polynomial
/// solve, and the weak-form measure identity.
pub fn suite_dirichlet(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("dirichlet", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // criterion: FD hyperbolic Laplacian of P_h(., t) at 100 interior pts
    for n in [3usize, 4] {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x = random_ball(&mut rng, n, 0.8);
            let t = random_sphere(&mut rng, n);
            let r = hyperbolic_laplacian_fd(
                &|v: &Vector| {
                    kernels::poisson_kernel_ball(&BallPoint::new(v.clone()).expect("interior"), &t)
                },
                &x,
                None,
            )?;
            worst = worst.max(r.abs());
        }
        rep.checks.push(CheckResult::le(
            format!("harmonicity-fd-n{n}"),
            worst,
            1e-4,
            "FD Lap_h of P_h(., t) at 100 points, |x| <= 0.8",
        ));
    }
    // invariance Lap_h(u o phi_a) = (Lap_h u) o phi_a, degree <= 3 polys
    let mut worst_inv: f64 = 0.0;
    for _ in 0..30 {
        let n = 3;
        let u = Polynomial::from_terms(
            n,
            &[
                (rng.gen_range(-1.0..1.0), &[1, 0, 0]),
                (rng.gen_range(-1.0..1.0), &[0, 2, 0]),
                (rng.gen_range(-1.0..1.0), &[1, 1, 1]),
                (rng.gen_range(-1.0..1.0), &[0, 0, 3]),
            ],
        );
        let lap_u = u.hyperbolic_laplacian();
        let a = random_ball(&mut rng, n, 0.5);
        let phi = MobiusMap::phi_a(a);
        let x = random_ball(&mut rng, n, 0.7);
        let lhs = hyperbolic_laplacian_fd(
            &|v: &Vector| u.eval(&phi.apply(v).expect("interior")),
            &x,
            Some(1e-4),
        )?;
        let rhs = lap_u.eval(&phi.apply(x.as_vector()).expect("interior"));
        worst_inv = worst_inv.max((lhs - rhs).abs());
    }
    rep.checks.push(CheckResult::le(
        "laplacian-mobius-invariance",
        worst_inv,
        1e-4,
        "Lap_h(u o phi_a)(x) vs (Lap_h u)(phi_a x) for degree <= 3 polynomials",
    ));
    // Green reproduction: radial C_c^2 bump in B(0, 0.5), 20 points
    let n = 3;
    let gq = GreenQuad::new(n, 140, 64)?;
    let bump = RadialBump::new(n, 0.5, 4)?;
    let mut worst_rep: f64 = 0.0;
    for _ in 0..20 {
        let a = random_ball(&mut rng, n, 0.35);
        let (fa, integral) = reproduce_from_green(&bump, &a, &gq)?;
        worst_rep = worst_rep.max((fa - integral).abs() / fa.abs());
    }
    rep.checks.push(CheckResult::le(
        "green-reproduction",
        worst_rep,
        1e-3,
        "f(a) vs -(1/n) int g(|T_a x|) Lap_h f dtau, radial bump in B(0,0.5), 20 points",
    ));
    // manufactured polynomial solve, degree 4, |x| <= 0.9
    let u0 = Polynomial::from_terms(
        n,
        &[
            (0.5, &[0, 0, 0]),
            (1.0, &[1, 0, 0]),
            (-0.3, &[0, 1, 1]),
            (0.2, &[2, 2, 0]),
            (-0.1, &[0, 0, 4]),
            (0.15, &[1, 0, 2]),
        ],
    );
    let psi_poly = u0.hyperbolic_laplacian();
    let phi = {
        let u0 = u0.clone();
        solver::BoundaryData::new(move |t: &SpherePoint| u0.eval(t.as_vector()))
    };
    let psi = {
        let p = psi_poly.clone();
        SourceDensity::new(move |y: &BallPoint| p.eval(y.as_vector()), 60.0)
    };
    let rules = SolverRules::new(n, 280, 110, 56)?;
    let mut worst_m: f64 = 0.0;
    for k in 0..30 {
        // include points pinned at |x| = 0.9
        let x = if k < 10 {
            let dir = random_sphere(&mut rng, n);
            BallPoint::new(dir.as_vector().scale(0.9))?
        } else {
            random_ball(&mut rng, n, 0.9)
        };
        let u = solve_dirichlet(&phi, &Source::Density(psi.clone()), &x, &rules)?;
        let exact = u0.eval(x.as_vector());
        worst_m = worst_m.max((u - exact).abs() / (1.0 + exact.abs()));
    }
    rep.checks.push(CheckResult::le(
        "manufactured-solve",
        worst_m,
        1e-3,
        "degree-4 polynomial u0, max relative error over 30 points, |x| <= 0.9",
    ));
    // weak form: int (-G_mu) Lap_h rho dtau = int rho dmu, 3-atom mu
    let atoms = vec![
        (BallPoint::from_coords(vec![0.3, 0.1, -0.2])?, 0.7),
        (BallPoint::from_coords(vec![-0.25, 0.33, 0.1])?, 1.1),
        (BallPoint::from_coords(vec![0.05, -0.4, 0.3])?, 0.45),
    ];
    let mu = solver::DiscreteMeasure::new(atoms.clone())?;
    let table = GreenRadialTable::new(n)?;
    let rho = RadialBump::new(n, 0.6, 4)?;
    let rhs: f64 = atoms.iter().map(|(y, w)| w * rho.eval(y.as_vector())).sum();
    // direct outer quadrature of the singular potential against Lap_h rho;
    // the integrand vanishes outside supp rho, so the radial range stops
    // just past the support radius
    let (rx, rw) = crate::numeric::gauss_legendre_on(0.0, 0.605, 280);
    let sphere = sphere_rule(n, 160)?;
    let mut acc = NeumaierSum::new();
    use crate::solver::CompactC2;
    for (&r, &w) in rx.iter().zip(&rw) {
        let radial_w = w * n as f64 * r.powi(n as i32 - 1) / (1.0 - r * r).powi(n as i32);
        for i in 0..sphere.len() {
            let x: Vec<f64> = sphere.node(i).iter().map(|c| r * c).collect();
            let xp = BallPoint::from_coords(x)?;
            let lap = rho.hyperbolic_laplacian(xp.as_vector());
            if lap == 0.0 {
                continue;
            }
            let gmu = green_normalization(n) * solver::green_potential_measure(&mu, &xp, &table)?;
            acc.add(radial_w * sphere.weight(i) * (-gmu) * lap);
        }
    }
    let lhs = acc.value();
    let weak_err = (lhs - rhs).abs() / rhs.abs();
    rep.checks.push(CheckResult::le(
        "weak-form-measure",
        weak_err,
        1e-3,
        format!("int (-G_mu) Lap_h rho dtau = int rho dmu; lhs={lhs:.6}, rhs={rhs:.6}"),
    ));
    rep.constants.insert("weak_form_lhs".into(), lhs);
    rep.constants.insert("weak_form_rhs".into(), rhs);
    // radial boundary limit of the Poisson integral at a continuity point
    let spike = catalog::boundary("spike", &[1.0])?;
    let ev = SlicedPoissonEvaluator::new(n, 16, 20)?;
    let t = SpherePoint::from_coords(vec![0.6, 0.0, 0.8])?;
    let target = spike.eval(&t);
    let mut gaps = Vec::new();
    for &r in &[0.9, 0.99, 0.999, 0.9999] {
        let x = BallPoint::new(t.as_vector().scale(r))?;
        let v = ev.eval(&|s| spike.eval(s), &x, BoundaryKernel::Hyperbolic);
        gaps.push((v - target).abs());
    }
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    rep.checks.push(CheckResult::pass_if(
        "radial-boundary-limit",
        gaps[gaps.len() - 1],
        2e-3,
        monotone && gaps[gaps.len() - 1] < 2e-3,
        "P_h[phi](r t) -> phi(t) monotonically along r in {0.9, 0.99, 0.999, 0.9999}",
    ));
    Ok(rep)
}

/// Holder suite: the radial Holder scan for Poisson extensions (with the
/// Euclidean negative control) and the I_alpha / I_omega integral scans.
pub fn suite_holder(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("holder", seed);
    for n in [3usize, 4, 5] {
        let ev = SlicedPoissonEvaluator::new(n, 16, 20)?;
        for alpha in [0.5f64, 1.0] {
            let phi = catalog::boundary("spike", &[alpha])?;
            let scan = regularity::holder_radial_scan(
                &phi,
                &SpherePoint::pole(n),
                alpha,
                12,
                BoundaryKernel::Hyperbolic,
                &ev,
            );
            let slope = scan.trend_slope(4);
            let ratio = scan.max() / scan.median();
            rep.checks.push(CheckResult::pass_if(
                format!("holder-radial-n{n}-alpha{alpha}"),
                slope,
                regularity::TREND_SLOPE_MAX,
                scan.is_bounded(),
                format!("(1-r)^{{1-alpha}} |grad h| max/median = {ratio:.3}, slope = {slope:.4}"),
            ));
            rep.constants
                .insert(format!("M_n(n={n},alpha={alpha})"), scan.max());
        }
    }
    // negative control: Euclidean kernel, alpha = 1, log growth
    let n = 3;
    let ev = SlicedPoissonEvaluator::new(n, 16, 20)?;
    let phi = catalog::boundary("spike", &[1.0])?;
    let euclid = regularity::holder_radial_scan(
        &phi,
        &SpherePoint::pole(n),
        1.0,
        12,
        BoundaryKernel::Euclidean,
        &ev,
    );
    rep.checks.push(CheckResult::ge(
        "holder-radial-euclid-control",
        euclid.trend_slope(4),
        0.1,
        "|grad P[phi]| grows like log(1/(1-r)) for Lipschitz phi under the Euclidean kernel",
    ));
    // I_alpha scans + refinement stability
    for n in [3usize, 4, 5] {
        for alpha in [0.5f64, 1.0] {
            let scan = i_alpha_scan(alpha, n, 12);
            rep.checks.push(CheckResult::pass_if(
                format!("i-alpha-bound-n{n}-alpha{alpha}"),
                scan.max(),
                f64::INFINITY,
                scan.is_bounded(),
                format!(
                    "(1-r)^{{1-alpha}} I_alpha bounded; c(alpha,n) ~ {:.4}",
                    scan.max()
                ),
            ));
            rep.constants
                .insert(format!("c(alpha={alpha},n={n})"), scan.max());
        }
    }
    // I_omega with omega(s) = s (1 + log+(1/s))
    let omega = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            s * (1.0 + (1.0 / s).ln().max(0.0))
        }
    };
    let scan = i_omega_scan(&omega, "s(1+log+(1/s))", 3, 12);
    rep.checks.push(CheckResult::pass_if(
        "i-omega-log-majorant",
        scan.max(),
        f64::INFINITY,
        scan.is_bounded(),
        "I_omega delta_r / omega(delta_r) bounded for the log majorant",
    ));
    Ok(rep)
}

/// Green-gradient suite: the A/B integral lemma scans, the I_m regimes,
/// int_0^1 B d rho, the gradient plateau for psi = (1-|x|^2), and the
/// J_3/J_4 majorant integrals.
pub fn suite_green_gradient(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("green-gradient", seed);
    for n in [3usize, 4, 5] {
        let a = a_scan(n, 12);
        rep.checks.push(CheckResult::pass_if(
            format!("a-integral-bound-n{n}"),
            a.max(),
            f64::INFINITY,
            a.is_bounded(),
            format!("sqrt(rho) A(r,rho) <= C1(n) ~ {:.4}", a.max()),
        ));
        rep.constants.insert(format!("C1(n={n})"), a.max());
        let b = b_scan(n, 12);
        rep.checks.push(CheckResult::pass_if(
            format!("b-integral-bound-n{n}"),
            b.max(),
            f64::INFINITY,
            b.is_bounded(),
            format!("B-estimate scan bounded, constant ~ {:.4}", b.max()),
        ));
        // I_m regimes: below, at, above m = n-1
        let nm1 = n as f64 - 1.0;
        for (m, tag) in [(0.6 * nm1, "below"), (nm1, "log"), (nm1 + 1.5, "above")] {
            let scan = i_m_scan(m, n, 12);
            rep.checks.push(CheckResult::pass_if(
                format!("i-m-{tag}-n{n}"),
                scan.max(),
                f64::INFINITY,
                scan.is_bounded(),
                format!("I_m regime '{tag}' (m = {m:.2}) scaled scan bounded"),
            ));
        }
    }
    // refinement stability of the scan maxima (2% under level doubling):
    // the zonal panels converge spectrally, so compare 10 vs 20 nodes
    let coarse = {
        let f = |theta: f64| {
            let b2 = 1.0 - 2.0 * 0.999 * theta.cos() + 0.999 * 0.999;
            1.0 / b2
        };
        crate::quadrature::integrate_zonal_refined(&f, 3, 1e-6, 10)
    };
    let fine = regularity::integral_b(1.0 - 1e-3, 0.999 / (1.0 - 1e-3), 3);
    let stab = (coarse - fine).abs() / fine.abs();
    rep.checks.push(CheckResult::le(
        "scan-refinement-stability",
        stab,
        0.02,
        "worst-case zonal integral at half vs full panel order",
    ));
    // int_0^1 B(r, rho) d rho finite and refinement-stable
    for (n, r) in [(3usize, 0.99f64), (4, 0.9), (5, 0.9)] {
        match integral_b_total(r, n, 24) {
            Ok(v) => {
                rep.checks.push(CheckResult::pass_if(
                    format!("b-total-finite-n{n}"),
                    v,
                    f64::INFINITY,
                    v.is_finite() && v > 0.0,
                    format!("int_0^1 B({r}, rho) d rho = {v:.6} (refinement-stable)"),
                ));
            }
            Err(e) => {
                rep.checks.push(CheckResult::pass_if(
                    format!("b-total-finite-n{n}"),
                    f64::NAN,
                    f64::INFINITY,
                    false,
                    format!("flagged divergent: {e}"),
                ));
            }
        }
    }
    // gradient plateau: psi = (1-|x|^2), |d/dr G_h[psi](r e_n)| up to 0.99
    let n = 3;
    let gq = GreenQuad::new(n, 120, 48)?;
    let psi = catalog::source("h3-linear", &[1.0])?;
    let scan = regularity::green_gradient_scan(&psi, n - 1, 7, &gq)?;
    rep.checks.push(CheckResult::pass_if(
        "green-gradient-plateau",
        scan.max(),
        f64::INFINITY,
        scan.is_plateau(0.3),
        format!(
            "|d_r G_h[psi](r e_n)| decelerates toward a finite plateau ~ {:.4} up to r = {:.4}",
            scan.max(),
            scan.grid.last().copied().unwrap_or(f64::NAN)
        ),
    ));
    rep.constants.insert("gradient_plateau".into(), scan.max());
    // tangential component stays near zero by symmetry
    let tang = regularity::green_gradient_scan(&psi, 0, 5, &gq)?;
    rep.checks.push(CheckResult::le(
        "green-gradient-tangential-symmetry",
        tang.max(),
        1e-6,
        "d_x1 G_h[psi](r e_n) vanishes for zonal psi",
    ));
    // J_{3,k}, J_{4,k} finite and refinement-stable
    let (j3a, j4a) = j_gradient_majorants(0.9, n, 16);
    let (j3b, j4b) = j_gradient_majorants(0.9, n, 32);
    rep.checks.push(CheckResult::le(
        "j3-majorant-stability",
        (j3a - j3b).abs() / j3b.abs(),
        0.02,
        format!("J_3 = {j3b:.6} finite, stable under level doubling"),
    ));
    rep.checks.push(CheckResult::le(
        "j4-majorant-stability",
        (j4a - j4b).abs() / j4b.abs(),
        0.02,
        format!("J_4 = {j4b:.6} finite, stable under level doubling"),
    ));
    rep.constants.insert("J3(r=0.9,n=3,M=1)".into(), j3b);
    rep.constants.insert("J4(r=0.9,n=3,M=1)".into(), j4b);
    Ok(rep)
}

/// Riesz suite: the growth-condition checkers distinguish the catalog
/// densities, the Riesz potential is bounded on the (h3-1) family, and
/// the Green potential of the (h4) example is Holder along the radius.
pub fn suite_riesz(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("riesz", seed);
    let n = 3;
    let params = ConditionParams {
        seed,
        ..ConditionParams::defaults(n)
    };
    let h3 = check_condition(
        &catalog::source("h3-linear", &[1.0])?,
        ConditionTag::H3,
        &params,
    );
    rep.checks.push(CheckResult::pass_if(
        "h3-linear-passes",
        h3.constant,
        1.01,
        h3.pass && (h3.constant - 1.0).abs() < 1e-6,
        "psi = (1-|x|^2) passes (h3) with M = 1",
    ));
    let bad = check_condition(
        &catalog::source("const-one", &[])?,
        ConditionTag::H3,
        &params,
    );
    rep.checks.push(CheckResult::pass_if(
        "h3-const-one-fails",
        bad.constant,
        f64::INFINITY,
        !bad.pass,
        "psi = 1 fails (h3): the shell sup diverges",
    ));
    let h4 = check_condition(
        &catalog::source("h4-cubic", &[])?,
        ConditionTag::H4,
        &params,
    );
    rep.checks.push(CheckResult::pass_if(
        "h4-cubic-passes",
        h4.constant,
        f64::INFINITY,
        h4.pass,
        "psi = (1-|x|^2)^3 passes (h4) at alpha = 1, p = n+1",
    ));
    let h31bad = check_condition(
        &catalog::source("const-one", &[])?,
        ConditionTag::H31,
        &params,
    );
    rep.checks.push(CheckResult::pass_if(
        "h31-const-one-fails",
        h31bad.constant,
        f64::INFINITY,
        !h31bad.pass,
        "psi = 1 fails (h3-1)",
    ));
    // Riesz oracle: f = 1, x = 0, kernel exponent -1 -> 3/2
    let x0 = BallPoint::origin(n);
    let v = riesz_potential(&|_| 1.0, 2.0 / 3.0, &x0, &RieszParams::default())?;
    rep.checks.push(CheckResult::le(
        "riesz-oracle",
        (v - 1.5).abs(),
        2e-3,
        "V[1](0) with |x-y|^{-1} kernel equals 3/2 under normalized volume",
    ));
    // boundedness under (h3-1): f = (1-|y|^2)^{-2} psi with psi cubic
    let f = |y: &BallPoint| {
        let d = 1.0 - y.as_vector().norm_sq();
        d.powi(3) / (d * d)
    };
    let mu_exp = 1.0 - 1.0 / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup: f64 = 0.0;
    for _ in 0..10 {
        let x = random_ball(&mut rng, n, 0.95);
        sup = sup.max(riesz_potential(&f, mu_exp, &x, &RieszParams::default())?.abs());
    }
    let refined = RieszParams {
        outer_radial: 160,
        ..RieszParams::default()
    };
    let mut sup2: f64 = 0.0;
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let x = random_ball(&mut rng2, n, 0.95);
        sup2 = sup2.max(riesz_potential(&f, mu_exp, &x, &refined)?.abs());
    }
    rep.checks.push(CheckResult::pass_if(
        "riesz-h31-bounded",
        sup,
        f64::INFINITY,
        sup.is_finite() && (sup - sup2).abs() <= 0.02 * sup2,
        format!("sup over samples = {sup:.6}, refinement-stable"),
    ));
    rep.constants.insert("riesz_h31_sup".into(), sup2);
    // holder_radial_green for the (h4) example
    let gq = GreenQuad::new(n, 100, 40)?;
    let cubic = catalog::source("h4-cubic", &[])?;
    for alpha in [0.5f64, 1.0] {
        let (scan, quotient) = holder_radial_green(&cubic, alpha, 12, &gq)?;
        rep.checks.push(CheckResult::pass_if(
            format!("holder-radial-green-alpha{alpha}"),
            scan.max(),
            f64::INFINITY,
            scan.is_bounded(),
            format!(
                "(1-r)^{{1-alpha}} |G_h[psi]| bounded; radial Holder quotient sup = {quotient:.4}"
            ),
        ));
        rep.constants
            .insert(format!("green_holder_quotient(alpha={alpha})"), quotient);
    }
    // Lipschitz estimator: representation field stable, Holder-only field
    // grows along the radius toward the spike
    let ev = SlicedPoissonEvaluator::new(n, 16, 20)?;
    let lip_phi = catalog::boundary("spike", &[1.0])?;
    let radial_quotients = |phi: &solver::BoundaryData| -> Vec<f64> {
        let grid = geometric_radius_grid(12);
        let vals: Vec<f64> = grid
            .iter()
            .map(|&r| {
                let x = BallPoint::new(SpherePoint::pole(n).as_vector().scale(r)).expect("in");
                ev.eval(&|t| phi.eval(t), &x, BoundaryKernel::Hyperbolic)
            })
            .collect();
        grid.windows(2)
            .zip(vals.windows(2))
            .map(|(rr, vv)| (vv[1] - vv[0]).abs() / (rr[1] - rr[0]))
            .collect()
    };
    let q_lip = radial_quotients(&lip_phi);
    let lip_growth = q_lip[8..].iter().cloned().fold(0.0, f64::max)
        / q_lip[..4].iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    rep.checks.push(CheckResult::le(
        "lipschitz-representation-stable",
        lip_growth,
        1.5,
        "radial difference quotients of P_h[|t-e_n|] stay bounded",
    ));
    let hol_phi = catalog::boundary("spike", &[0.5])?;
    let q_hol = radial_quotients(&hol_phi);
    let hol_growth = q_hol[8..].iter().cloned().fold(0.0, f64::max)
        / q_hol[..4].iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    rep.checks.push(CheckResult::ge(
        "holder-only-negative-control",
        hol_growth,
        2.0,
        "quotients of P_h[|t-e_n|^{1/2}] grow toward the spike (not Lipschitz)",
    ));
    Ok(rep)
}

/// Half-space suite: kernel normalization (y-independent), the normal- and
/// tangential-derivative boundary behaviour, the C^1-extension report, the
/// integral estimate I_s^alpha, and the Dini dual-kernel negative control.
pub fn suite_halfspace(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("halfspace", seed);
    let n = 3;
    let kernel = HalfspaceKernel::hyperbolic(n)?;
    // normalization: = 1 to 1e-6 at an independent level, exactly
    // y-independent across the grid
    let mut worst_res: f64 = 0.0;
    let mut bits: Vec<u64> = Vec::new();
    for &y in &[0.1, 1.0, 10.0] {
        let res = halfspace::kernel_normalization_residual(&kernel, y, 48);
        worst_res = worst_res.max(res);
        bits.push(res.to_bits());
    }
    let y_indep = bits.iter().all(|&b| b == bits[0]);
    rep.checks.push(CheckResult::le(
        "halfspace-normalization",
        worst_res,
        1e-6,
        "int kernel dV = 1 at an independent quadrature level",
    ));
    rep.checks.push(CheckResult::pass_if(
        "halfspace-normalization-y-independent",
        0.0,
        1e-10,
        y_indep,
        "the scaling substitution makes the integral the same float at every y",
    ));
    rep.constants.insert(
        "c_n/(2/(n omega_n))".into(),
        kernel.constant_ratio_to_printed(),
    );
    rep.constants.insert("c_n".into(), kernel.constant());
    // normal-derivative decay: wide centered bump, grid j = 0..=20
    let bump = halfspace::smooth_bump(vec![0.0, 0.0], 1.6);
    let scan = halfspace::normal_derivative_scan(&kernel, &bump, &[0.0, 0.0], 20)?;
    let initial = scan.scaled[0];
    let final_v = *scan.scaled.last().expect("nonempty");
    rep.checks.push(CheckResult::le(
        "normal-derivative-decay",
        final_v / initial,
        1e-3,
        format!("|du/dy(0,y)| falls from {initial:.4e} to {final_v:.4e} over y = 2^0..2^-20"),
    ));
    // linear near 0 plus an off-center even component (a globally odd f
    // cancels identically and the scan would be pure noise); the linear
    // part cancels by odd symmetry, the far bump decays because f is flat
    // there, and du/dy(0, y) -> 0 with a genuinely nonzero mid-scan
    let lin_part = halfspace::linear_with_cutoff(vec![0.8, -0.5]);
    let far_bump = halfspace::smooth_bump(vec![0.8, 0.5], 0.4);
    let lin = halfspace::CompactC1Data::new(
        {
            let (a, b) = (lin_part.clone(), far_bump.clone());
            move |t: &[f64]| a.eval(t) + 0.7 * b.eval(t)
        },
        {
            let (a, b) = (lin_part.clone(), far_bump.clone());
            move |t: &[f64]| {
                a.grad(t)
                    .iter()
                    .zip(b.grad(t))
                    .map(|(x, y)| x + 0.7 * y)
                    .collect()
            }
        },
        vec![(-1.9, 1.9), (-1.9, 1.9)],
    );
    let lin_scan = halfspace::normal_derivative_scan(&kernel, &lin, &[0.0, 0.0], 14)?;
    let lin_final = *lin_scan.scaled.last().expect("nonempty");
    rep.checks.push(CheckResult::le(
        "normal-derivative-linear-data",
        lin_final / lin_scan.max(),
        0.05,
        "du/dy(0,y) -> 0 for f linear near 0 (odd cancellation)",
    ));
    // tangential boundary limit matches grad f to 1e-4 at 10 sample points
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = halfspace::smooth_bump(vec![0.0, 0.0], 1.1);
    let mut worst_t: f64 = 0.0;
    for _ in 0..10 {
        let xs = vec![rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
        for i in 0..2 {
            let t_at = |y: f64| -> Result<f64> {
                let z = halfspace::HalfSpacePoint::new(Vector::new(xs.clone())?, y)?;
                halfspace::tangential_derivative(&kernel, &f, i, &z)
            };
            let t1 = t_at(2f64.powi(-13))?;
            let t2 = t_at(2f64.powi(-14))?;
            let limit = 2.0 * t2 - t1;
            worst_t = worst_t.max((limit - f.grad(&xs)[i]).abs());
        }
    }
    rep.checks.push(CheckResult::le(
        "tangential-boundary-limit",
        worst_t,
        1e-4,
        "du/dx_i(x, y -> 0) vs df/dx_i(x), Richardson over y = 2^-13, 2^-14",
    ));
    // C^1 extension report for the smooth bump
    let sample: Vec<Vec<f64>> = vec![
        vec![0.0, 0.0],
        vec![0.3, 0.1],
        vec![-0.4, 0.2],
        vec![0.15, -0.35],
    ];
    let c1 = halfspace::c1_extension_report(&kernel, &f, &sample, 14, 1e-4)?;
    rep.checks.push(CheckResult::pass_if(
        "c1-extension",
        c1.tangential_gap,
        1e-4,
        c1.tangential_pass && c1.normal_pass,
        format!(
            "tangential gap {:.3e}, normal sup falls {:.3e} -> {:.3e}",
            c1.tangential_gap, c1.normal_initial, c1.normal_final
        ),
    ));
    // derivative damping: y |du/dx_i|, y |du/dy| -> 0, C^1 bump and the
    // merely-Lipschitz cone spike
    let damping =
        halfspace::derivative_damping_scan(&kernel, &f, &[vec![0.0, 0.0], vec![0.4, -0.2]], 14)?;
    let damp_final = *damping.scaled.last().expect("nonempty");
    rep.checks.push(CheckResult::le(
        "derivative-damping-smooth",
        damp_final / damping.max(),
        0.05,
        "y * derivatives -> 0 for the C^1 bump",
    ));
    let cone = halfspace::CompactC1Data::new(
        |t: &[f64]| {
            let r: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            (1.0 - r).max(0.0)
        },
        |t: &[f64]| {
            let r: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1e-12 && r < 1.0 {
                t.iter().map(|&x| -x / r).collect()
            } else {
                vec![0.0; t.len()]
            }
        },
        vec![(-1.2, 1.2), (-1.2, 1.2)],
    );
    let damping_cone =
        halfspace::derivative_damping_scan(&kernel, &cone, &[vec![0.0, 0.0], vec![0.5, 0.0]], 14)?;
    let cone_final = *damping_cone.scaled.last().expect("nonempty");
    rep.checks.push(CheckResult::le(
        "derivative-damping-lipschitz-spike",
        cone_final / damping_cone.max(),
        0.05,
        "y * derivatives -> 0 for merely-Lipschitz data",
    ));
    // I_s^alpha: exact y-independence of the scaled quantity
    let s = 2.0 * (n as f64 - 1.0);
    let alpha = 1.0;
    let expo = s - n as f64 + 1.0 - alpha;
    let base = regularity_scaled_i_s_alpha(1.0, s, alpha, n, expo)?;
    let mut worst_dev: f64 = 0.0;
    for &y in &[1.0, 0.1, 0.01, 1e-3, 1e-4] {
        let v = regularity_scaled_i_s_alpha(y, s, alpha, n, expo)?;
        worst_dev = worst_dev.max((v - base).abs() / base.abs());
    }
    rep.checks.push(CheckResult::le(
        "i-s-alpha-scaling",
        worst_dev,
        1e-8,
        "y^{s-n+1-alpha} I_s^alpha(y) exactly collapses under x = y u",
    ));
    rep.constants.insert("M1(n=3)".into(), base);
    // J_delta: three displayed forms agree; uniform bound in y
    let mut worst_form: f64 = 0.0;
    let mut worst_bound: f64 = 0.0;
    for &delta in &[0.1, 0.5, 1.0] {
        for &y in &[1.0, 0.1, 1e-2, 1e-3] {
            let a = halfspace::j_delta(y, delta, n, 0)?;
            let b = halfspace::j_delta(y, delta, n, 1)?;
            let c = halfspace::j_delta(y, delta, n, 2)?;
            worst_form = worst_form.max(((a - b).abs() + (a - c).abs()) / a.abs());
            worst_bound = worst_bound.max(a * delta.powi(n as i32 - 1));
        }
    }
    rep.checks.push(CheckResult::le(
        "j-delta-forms-agree",
        worst_form,
        1e-8,
        "direct, scaled, and inverted forms of J_delta coincide",
    ));
    rep.checks.push(CheckResult::pass_if(
        "j-delta-uniform-bound",
        worst_bound,
        f64::INFINITY,
        worst_bound.is_finite() && worst_bound < 100.0,
        format!("J_delta * delta^{{n-1}} <= {worst_bound:.4} uniformly in y"),
    ));
    // Dini dual-kernel negative control
    let dini = halfspace::dini_failure_data(2);
    let hyp = halfspace::normal_derivative_scan(&kernel, &dini, &[0.0, 0.0], 14)?;
    let euc_kernel = HalfspaceKernel::euclidean(n)?;
    let euc = halfspace::normal_derivative_scan(&euc_kernel, &dini, &[0.0, 0.0], 14)?;
    let hyp_final = *hyp.scaled.last().expect("nonempty");
    let hyp_tail_monotone = hyp.scaled[hyp.scaled.len() - 4..]
        .windows(2)
        .all(|w| w[1] <= w[0]);
    rep.checks.push(CheckResult::pass_if(
        "dini-hyperbolic-decays",
        hyp_final / hyp.max(),
        0.85,
        hyp_tail_monotone && hyp_final <= 0.85 * hyp.max(),
        "hyperbolic du/dy still -> 0 for the non-Dini C^1 data",
    ));
    let euc_final = *euc.scaled.last().expect("nonempty");
    let euc_mid = euc.scaled[6];
    rep.checks.push(CheckResult::ge(
        "dini-euclidean-grows",
        euc_final / euc_mid,
        1.5,
        "Euclidean du/dy blows up for the same data (the classical contrast)",
    ));
    Ok(rep)
}

fn regularity_scaled_i_s_alpha(y: f64, s: f64, alpha: f64, n: usize, expo: f64) -> Result<f64> {
    Ok(halfspace::integral_i_s_alpha(y, s, alpha, n)? * y.powf(expo))
}
