//! Verification suites: each check evaluates an invariant of one module
//! and yields a [`VerificationReport`]. Evaluation errors become failed
//! reports rather than aborting the suite.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cjacobi::{circular_jacobi, gram_matrix, squared_norm, CirclePoint};
use crate::error::{Error, Result};
use crate::gpcs::{self, GridFunction};
use crate::identity::{self, KernelMatrix};
use crate::pho::{self, ModelParams};
use crate::quadrature::{circle_rule, circle_rule_clustered, half_line_rule};
use crate::report::VerificationReport;
use crate::specfun;
use crate::transform;

pub const GAMMAS: [f64; 4] = [0.0, 0.5, 1.5, 3.0];
pub const EPSILONS: [f64; 3] = [0.1, 0.5, 1.0];
pub const THETAS: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, PI, 1.5 * PI];
pub const ALPHAS: [f64; 3] = [2.0, 2.5, 3.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Pho,
    Cjacobi,
    Gpcs,
    Identity,
    Transform,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "pho" => Suite::Pho,
            "cjacobi" => Suite::Cjacobi,
            "gpcs" => Suite::Gpcs,
            "identity" => Suite::Identity,
            "transform" => Suite::Transform,
            "all" => Suite::All,
            _ => {
                return Err(Error::InvalidParam {
                    name: "suite",
                    msg: format!("unknown suite `{s}`; expected specfun, pho, cjacobi, gpcs, identity, transform or all"),
                })
            }
        })
    }
}

/// Overrides for the default parameter grids. `tol`, when set, replaces
/// every check's tolerance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
}

impl VerifyOptions {
    fn gammas(&self) -> Vec<f64> {
        self.gamma.map_or(GAMMAS.to_vec(), |g| vec![g])
    }

    fn epsilons(&self, default: &[f64]) -> Vec<f64> {
        self.epsilon.map_or(default.to_vec(), |e| vec![e])
    }

    fn thetas(&self, default: &[f64]) -> Vec<f64> {
        self.theta.map_or(default.to_vec(), |t| vec![t])
    }

    fn alphas(&self) -> Vec<f64> {
        self.alpha.map_or(ALPHAS.to_vec(), |a| vec![a])
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Runs `f` and turns its (error, tolerance) or failure into a report.
fn check<F>(name: &str, params: &[(&str, f64)], tol: f64, f: F) -> VerificationReport
where
    F: FnOnce() -> Result<f64>,
{
    match f() {
        Ok(err) => VerificationReport::new(name, params, err, tol),
        Err(e) => VerificationReport::failed(name, params, e.to_string()),
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<VerificationReport> {
    match suite {
        Suite::Specfun => specfun_suite(opts),
        Suite::Pho => pho_suite(opts),
        Suite::Cjacobi => cjacobi_suite(opts),
        Suite::Gpcs => gpcs_suite(opts),
        Suite::Identity => identity_suite(opts),
        Suite::Transform => transform_suite(opts),
        Suite::All => [
            Suite::Specfun,
            Suite::Pho,
            Suite::Cjacobi,
            Suite::Gpcs,
            Suite::Identity,
            Suite::Transform,
        ]
        .iter()
        .flat_map(|&s| run_suite(s, opts))
        .collect(),
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn specfun_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    // ₁F₁(a; a; z) = e^z, including large and oscillatory arguments
    for &z in &[Complex64::new(3.0, 0.0), Complex64::new(-25.0, 0.0), Complex64::new(60.0, 0.0), Complex64::from_polar(40.0, 1.2)] {
        out.push(check("specfun.hyp1f1_exponential", &[("re_z", z.re), ("im_z", z.im)], opts.tol(1e-12), || {
            Ok(rel(specfun::hyp1f1(1.7, 1.7, z)?.value, z.exp()))
        }));
    }
    // Kummer: ₁F₁(a;c;z) = e^z ₁F₁(c-a;c;-z)
    for &(a, c, z) in &[(0.7, 2.3, Complex64::new(5.0, 2.0)), (2.5, 4.0, Complex64::new(-12.0, 7.0))] {
        out.push(check("specfun.kummer_transformation", &[("a", a), ("c", c)], opts.tol(1e-11), || {
            let lhs = specfun::hyp1f1(a, c, z)?.value;
            let rhs = z.exp() * specfun::hyp1f1(c - a, c, -z)?.value;
            Ok(rel(lhs, rhs))
        }));
    }
    // ₂F₁(a,b;c;1/2) against Gauss's second summation theorem
    // ₂F₁(a,1-a;c;1/2) = Γ(c/2)Γ((1+c)/2)/(Γ((c+a)/2)Γ((1+c-a)/2))
    for &(a, c) in &[(0.3, 1.7), (0.75, 2.5)] {
        out.push(check("specfun.hyp2f1_half_argument", &[("a", a), ("c", c)], opts.tol(1e-12), || {
            let want = (specfun::ln_gamma(c / 2.0) + specfun::ln_gamma((1.0 + c) / 2.0)
                - specfun::ln_gamma((c + a) / 2.0)
                - specfun::ln_gamma((1.0 + c - a) / 2.0))
            .exp();
            let b = 1.0 - a;
            let got = specfun::hyp2f1(a, b, c, 0.5)?;
            Ok((got - want).abs() / want)
        }));
    }
    // Bessel recurrence I_{ν-1} - I_{ν+1} = (2ν/x) I_ν
    for &(nu, x) in &[(1.5, 0.7), (2.5, 12.0), (3.0, 45.0)] {
        out.push(check("specfun.bessel_recurrence", &[("nu", nu), ("x", x)], opts.tol(1e-12), || {
            let lhs = specfun::bessel_i_scaled(nu - 1.0, x)? - specfun::bessel_i_scaled(nu + 1.0, x)?;
            let rhs = 2.0 * nu / x * specfun::bessel_i_scaled(nu, x)?;
            Ok((lhs - rhs).abs() / rhs.abs())
        }));
    }
    // Laguerre polynomials through ₁F₁: L_n^{(ν)}(x) = (ν+1)_n/n! ₁F₁(-n; ν+1; x)
    for &(n, nu, x) in &[(7usize, 1.5, 2.0), (20, 0.5, 9.0)] {
        out.push(check("specfun.laguerre_hypergeometric", &[("n", n as f64), ("nu", nu), ("x", x)], opts.tol(1e-10), || {
            let lag = specfun::laguerre(n, nu, x);
            let f = specfun::hyp1f1(-(n as f64), nu + 1.0, Complex64::new(x, 0.0))?.value.re;
            let scale = squared_norm(n, nu);
            Ok((lag - scale * f).abs() / scale.max(lag.abs()))
        }));
    }
    // Hille–Hardy closed form against the truncated bilinear series
    for &(tau, xi, zeta, alpha) in &[(0.3, 0.5, 1.2, 2.5), (0.6, 2.0, 3.0, 3.5)] {
        out.push(check("specfun.hille_hardy_series", &[("tau", tau), ("alpha", alpha)], opts.tol(1e-10), || {
            let k = specfun::hille_hardy_kernel(tau, xi, zeta, alpha)?;
            let mut sum = 0.0;
            let mut ln_ratio = -specfun::ln_gamma(alpha); // ln(m!/Γ(m+α))
            for m in 0..200usize {
                let t = (m as f64 * tau.ln() + ln_ratio).exp()
                    * specfun::laguerre(m, alpha - 1.0, xi)
                    * specfun::laguerre(m, alpha - 1.0, zeta);
                sum += t;
                ln_ratio += ((m + 1) as f64).ln() - (m as f64 + alpha).ln();
            }
            Ok((k - sum).abs() / k)
        }));
    }
    out
}

pub fn pho_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let n_max = opts.n_max.unwrap_or(12);
    let rule = half_line_rule(512, 1.0);
    for alpha in opts.alphas() {
        out.push(check("pho.orthonormality", &[("alpha", alpha), ("n_max", n_max as f64)], opts.tol(1e-9), || {
            let rule = rule.clone()?;
            let table = rule
                .nodes
                .iter()
                .map(|&x| pho::eigenfunctions(n_max, alpha, x))
                .collect::<Result<Vec<_>>>()?;
            let mut worst: f64 = 0.0;
            for n in 0..=n_max {
                for m in 0..=n {
                    let v: f64 = table.iter().zip(&rule.weights).map(|(r, w)| w * r[n] * r[m]).sum();
                    worst = worst.max((v - if n == m { 1.0 } else { 0.0 }).abs());
                }
            }
            Ok(worst)
        }));
        out.push(check("pho.rayleigh_quotient", &[("alpha", alpha)], opts.tol(1e-4), || {
            let a = (alpha - 1.0).powi(2) - 0.25;
            let h = 1e-3;
            let mut worst: f64 = 0.0;
            for n in 0..=5 {
                let lambda = pho::eigenvalue(n, alpha);
                let psi = |x: f64| pho::eigenfunction(n, alpha, x);
                let mut sup: f64 = 0.0;
                for i in 1..800 {
                    sup = sup.max(psi(i as f64 * 0.01)?.abs());
                }
                for i in 0..=60 {
                    let x = 0.5 + i as f64 * 0.075;
                    let d2 = (-psi(x + 2.0 * h)? + 16.0 * psi(x + h)? - 30.0 * psi(x)? + 16.0 * psi(x - h)?
                        - psi(x - 2.0 * h)?)
                        / (12.0 * h * h);
                    let res = -d2 + (x * x + a / (x * x)) * psi(x)? - lambda * psi(x)?;
                    worst = worst.max(res.abs() / (lambda * sup));
                }
            }
            Ok(worst)
        }));
    }
    out.push(check("pho.molecular_equivalence", &[("rho", 1.0), ("kappa0", 1.0)], opts.tol(1e-13), || {
        let m = pho::MolecularParams { rho: 1.0, kappa0: 1.0 };
        let alpha = 1.0 + 0.5 * (1.0 + 4.0 * pho::molecular_to_a(m)?).sqrt();
        let mut worst: f64 = 0.0;
        for n in 0..20 {
            let e = pho::eigenvalue_molecular(n, m)? + 2.0 * m.rho;
            let want = pho::eigenvalue(n, alpha);
            worst = worst.max((e - want).abs() / want);
        }
        Ok(worst)
    }));
    out
}

pub fn cjacobi_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let n_max = opts.n_max.unwrap_or(15);
    for gamma in opts.gammas() {
        let params = [("gamma", gamma), ("n_max", n_max as f64)];
        let gram = circle_rule_clustered(512).and_then(|r| gram_matrix(n_max, gamma, &r));
        match gram {
            Ok(g) => {
                let mut diag: f64 = 0.0;
                let mut off: f64 = 0.0;
                let mut herm: f64 = 0.0;
                for (n, row) in g.iter().enumerate() {
                    for (m, v) in row.iter().enumerate() {
                        herm = herm.max((v - g[m][n].conj()).norm());
                        if n == m {
                            let want = squared_norm(n, gamma);
                            diag = diag.max((v - want).norm() / want);
                        } else {
                            off = off.max(v.norm());
                        }
                    }
                }
                out.push(VerificationReport::new("cjacobi.gram_diagonal", &params, diag, opts.tol(1e-10)));
                out.push(VerificationReport::new("cjacobi.gram_off_diagonal", &params, off, opts.tol(1e-10)));
                out.push(VerificationReport::new("cjacobi.gram_hermitian", &params, herm, opts.tol(1e-13)));
            }
            Err(e) => out.push(VerificationReport::failed("cjacobi.gram", &params, e.to_string())),
        }
        out.push(check("cjacobi.conjugation_symmetry", &[("gamma", gamma)], opts.tol(1e-13), || {
            let mut worst: f64 = 0.0;
            for n in 0..=n_max {
                for k in 0..16 {
                    let t = 0.39 * k as f64 + 0.1;
                    let a = circular_jacobi(n, gamma, CirclePoint::new(t)).conj();
                    let b = circular_jacobi(n, gamma, CirclePoint::new(-t));
                    worst = worst.max((a - b).norm() / (1.0 + a.norm()));
                }
            }
            Ok(worst)
        }));
    }
    out.push(check("cjacobi.unimodular_at_gamma_zero", &[("n_max", n_max as f64)], opts.tol(1e-13), || {
        let mut worst: f64 = 0.0;
        for n in 0..=n_max {
            for k in 0..32 {
                let v = circular_jacobi(n, 0.0, CirclePoint::new(0.2 * k as f64));
                worst = worst.max((v.norm() - 1.0).abs());
            }
        }
        Ok(worst)
    }));
    out.push(check("cjacobi.trapezoid_even_gamma", &[("gamma", 2.0)], opts.tol(1e-10), || {
        let g = gram_matrix(n_max, 2.0, &circle_rule(512)?)?;
        let mut worst: f64 = 0.0;
        for (n, row) in g.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                let want = if n == m { (n as f64 + 2.0) * (n as f64 + 1.0) / 2.0 } else { 0.0 };
                worst = worst.max((v - want).norm() / want.max(1.0));
            }
        }
        Ok(worst)
    }));
    out
}

/// max |closed - series| / max |closed| over x ∈ [0.1, 6].
pub fn wavefunction_route_error(gamma: f64, epsilon: f64, theta: f64) -> Result<f64> {
    let p = ModelParams::coupled(gamma, epsilon)?;
    let xs: Vec<f64> = (0..60).map(|i| 0.1 + 5.9 * i as f64 / 59.0).collect();
    let closed = gpcs::wavefunction_closed_grid(&p, theta, &xs)?;
    let series = gpcs::wavefunction_series_grid(&p, theta, &xs, 1e-13)?;
    let sup = closed.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(closed.iter().zip(&series).map(|(c, s)| (c - s.value).norm()).fold(0.0, f64::max) / sup)
}

/// |∫|ψ|² dx - 1| for the closed-form wavefunction.
pub fn state_norm_error(gamma: f64, epsilon: f64, theta: f64) -> Result<f64> {
    let p = ModelParams::coupled(gamma, epsilon)?;
    let rule = half_line_rule(1000, 1.5)?;
    let psi = gpcs::wavefunction_closed_grid(&p, theta, &rule.nodes)?;
    let norm = psi.iter().zip(&rule.weights).map(|(z, w)| w * z.norm_sqr()).sum::<f64>();
    Ok((norm - 1.0).abs())
}

/// Worst relative error of the bilinear ₂F₁ identity at `count` random
/// circle configurations (γ, ε, θ).
pub fn bilinear_engine_error(seed: u64, count: usize) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let gamma = rng.gen_range(0.0..4.0);
        let eps: f64 = rng.gen_range(0.05..2.0);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let a = 0.5 * gamma + 1.0;
        let xi = 1.0 - Complex64::from_polar(1.0, theta);
        let r = (-eps).exp();
        let lhs = gpcs::bilinear_2f1_sum(a, a, gamma + 1.0, r, xi, xi.conj(), 1e-14)?;
        let rhs = gpcs::bilinear_2f1_closed(a, a, gamma + 1.0, r, xi, xi.conj())?;
        worst = worst.max(rel(lhs.value, rhs));
    }
    Ok(worst)
}

/// Worst relative error of the Laguerre generating formula at `count`
/// random points t ∈ [0.1, 0.7], u = x² ∈ [0, 5], c = γ/2+1, ν = γ,
/// y = 1 - e^{iθ}.
pub fn laguerre_engine_error(seed: u64, count: usize) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let gamma: f64 = rng.gen_range(0.0..4.0);
        let t = rng.gen_range(0.1..0.7);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let u = rng.gen_range(0.0..5.0);
        let y = 1.0 - Complex64::from_polar(1.0, theta);
        let lhs = gpcs::laguerre_2f1_sum(t, 0.5 * gamma + 1.0, gamma, y, u, 1e-14)?;
        let rhs = gpcs::laguerre_2f1_closed(t, 0.5 * gamma + 1.0, gamma, y, u)?;
        worst = worst.max(rel(lhs.value, rhs));
    }
    Ok(worst)
}

pub fn gpcs_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let thetas = opts.thetas(&THETAS);
    for gamma in opts.gammas() {
        for eps in opts.epsilons(&EPSILONS) {
            for &theta in &thetas {
                let params = [("gamma", gamma), ("epsilon", eps), ("theta", theta)];
                out.push(check("gpcs.normalization_cross_route", &params, opts.tol(1e-9), || {
                    let s = gpcs::normalization_series(gamma, eps, theta, 1e-15)?.value.re;
                    let c = gpcs::normalization_closed(gamma, eps, theta)?;
                    Ok((s - c).abs() / c)
                }));
                if gamma == 0.0 {
                    out.push(check("gpcs.normalization_gamma_zero", &params, opts.tol(1e-12), || {
                        let want = 1.0 / -(-eps).exp_m1();
                        Ok((gpcs::normalization_closed(0.0, eps, theta)? - want).abs() / want)
                    }));
                }
                out.push(check("gpcs.wavefunction_cross_route", &params, opts.tol(1e-8), || {
                    wavefunction_route_error(gamma, eps, theta)
                }));
                out.push(check("gpcs.state_norm", &params, opts.tol(1e-8), || state_norm_error(gamma, eps, theta)));
            }
            let params = [("gamma", gamma), ("epsilon", eps)];
            out.push(check("gpcs.coefficient_norm", &params, opts.tol(1e-10), || {
                let p = ModelParams::coupled(gamma, eps)?;
                let cv = gpcs::coefficients_auto(&p, 1.0, gpcs::DEFAULT_TAIL)?;
                Ok((cv.norm_sqr() - 1.0).abs())
            }));
        }
    }
    for eps in opts.epsilons(&EPSILONS) {
        out.push(check("gpcs.phase_coherent_collapse", &[("epsilon", eps)], opts.tol(1e-12), || {
            let p = ModelParams::from_alpha(2.5, eps)?;
            let rho = (-0.5 * eps).exp();
            let mut worst: f64 = 0.0;
            for &theta in &thetas {
                let cv = gpcs::coefficients(60, &p, theta, 1.0)?;
                for (n, c) in cv.coeffs.iter().enumerate() {
                    let want = Complex64::from_polar((1.0 - rho * rho).sqrt() * rho.powi(n as i32), n as f64 * theta);
                    worst = worst.max((c - want).norm());
                }
            }
            Ok(worst)
        }));
    }
    out.push(check("gpcs.bilinear_engine", &[("points", 60.0)], opts.tol(1e-9), || bilinear_engine_error(1, 60)));
    out.push(check("gpcs.laguerre_engine", &[("points", 60.0)], opts.tol(1e-9), || laguerre_engine_error(2, 60)));
    out
}

/// Half-line rule used by the identity checks.
pub fn identity_rule() -> Result<Arc<crate::quadrature::QuadratureRule>> {
    Ok(Arc::new(half_line_rule(768, 1.0)?))
}

fn eigenstate(rule: &Arc<crate::quadrature::QuadratureRule>, m: usize, alpha: f64) -> Result<GridFunction> {
    let values = rule
        .nodes
        .iter()
        .map(|&x| Ok(Complex64::new(pho::eigenfunction(m, alpha, x)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(Arc::clone(rule), values)
}

/// Worst sup-norm error of the kernel route on ψ_m, m ≤ m_max, relative to
/// ‖ψ_m‖_∞ on x ∈ [0.05, 8].
pub fn eigen_action_error(epsilon: f64, alpha: f64, m_max: usize) -> Result<f64> {
    let rule = identity_rule()?;
    let km = KernelMatrix::new(epsilon, alpha, Arc::clone(&rule))?;
    let mut worst: f64 = 0.0;
    for m in 0..=m_max {
        let psi = eigenstate(&rule, m, alpha)?;
        let out = km.apply(&psi)?;
        let f = (-(m as f64) * epsilon).exp();
        let want = GridFunction::new(Arc::clone(&rule), psi.values.iter().map(|v| v * f).collect())?;
        worst = worst.max(out.sub(&want).sup_norm_on(0.05, 8.0) / psi.sup_norm_on(0.05, 8.0));
    }
    Ok(worst)
}

/// Worst relative error of the closed kernel against the 60-term mode sum.
pub fn kernel_series_error(epsilon: f64, alpha: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(u, v) in &[(0.3, 0.4), (1.0, 1.2), (2.0, 1.5), (0.8, 1.1), (4.0, 4.2)] {
        let bu = pho::eigenfunctions(59, alpha, u)?;
        let bv = pho::eigenfunctions(59, alpha, v)?;
        let sum: f64 = (0..60).map(|m| (-(m as f64) * epsilon).exp() * bu[m] * bv[m]).sum();
        let g = identity::kernel_g(epsilon, alpha, u, v)?;
        worst = worst.max((g - sum).abs() / g.abs());
    }
    Ok(worst)
}

/// The Gaussian bump e^{-(x-2)²} on the identity rule.
pub fn gaussian_bump() -> Result<GridFunction> {
    let rule = identity_rule()?;
    GridFunction::sample(rule, |x| Complex64::new((-(x - 2.0) * (x - 2.0)).exp(), 0.0))
}

pub fn identity_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let m_max = opts.n_max.unwrap_or(10);
    for alpha in opts.alphas() {
        for eps in opts.epsilons(&[0.1, 0.5]) {
            let params = [("alpha", alpha), ("epsilon", eps), ("m_max", m_max as f64)];
            out.push(check("identity.eigen_action", &params, opts.tol(1e-7), || eigen_action_error(eps, alpha, m_max)));
        }
    }
    let kernel_eps = opts.epsilon.unwrap_or(0.5);
    for alpha in opts.alphas() {
        out.push(check("identity.kernel_series", &[("alpha", alpha), ("epsilon", kernel_eps)], opts.tol(1e-10), || {
            kernel_series_error(kernel_eps, alpha)
        }));
    }
    let alpha = opts.alpha.unwrap_or(2.5);
    out.push(check("identity.route_equivalence", &[("alpha", alpha), ("epsilon", 0.2)], opts.tol(1e-7), || {
        let rule = identity_rule()?;
        let phi = GridFunction::sample(rule, |x| Complex64::new(x * x * (-(x - 2.0) * (x - 2.0)).exp(), 0.0))?;
        let k = identity::apply_o_kernel(0.2, alpha, &phi)?.output;
        let b = identity::apply_o_basis(0.2, alpha, &phi, 150)?.output;
        Ok(k.sub(&b).sup_norm_on(0.0, f64::INFINITY))
    }));
    out.push(check("identity.self_adjoint", &[("alpha", alpha), ("epsilon", 0.2)], opts.tol(1e-9), || {
        let rule = identity_rule()?;
        let phi = GridFunction::sample(Arc::clone(&rule), |x| Complex64::new(x * (-(x - 1.5).powi(2)).exp(), 0.0))?;
        let chi = GridFunction::sample(Arc::clone(&rule), |x| Complex64::new(0.0, x * x * (-x * x / 2.0).exp()))?;
        let km = KernelMatrix::new(0.2, alpha, rule)?;
        let a = km.apply(&phi)?.inner(&chi)?;
        let b = phi.inner(&km.apply(&chi)?)?;
        Ok((a - b).norm())
    }));
    out.push(check("identity.positive_semidefinite", &[("alpha", alpha), ("epsilon", 0.5)], opts.tol(1e-12), || {
        let km = KernelMatrix::new(0.5, alpha, Arc::new(half_line_rule(256, 1.0)?))?;
        let ev = km.spectrum();
        Ok((-ev[0]).max(0.0) / ev[ev.len() - 1])
    }));
    let mut bump = match gaussian_bump() {
        Ok(phi) => identity::convergence_report(alpha, &phi, &[0.8, 0.4, 0.2, 0.1]),
        Err(e) => vec![VerificationReport::failed("identity.convergence", &[], e.to_string())],
    };
    if let Some(tol) = opts.tol {
        for r in bump.iter_mut() {
            r.tol = tol.max(r.tol);
        }
    }
    out.append(&mut bump);
    let gamma = opts.gamma.unwrap_or(0.0);
    for eps in opts.epsilons(&[0.1, 0.5]) {
        out.push(check("identity.resolution_block", &[("gamma", gamma), ("epsilon", eps)], opts.tol(1e-8), || {
            let circle = if gamma == 0.0 { circle_rule(1024)? } else { circle_rule_clustered(1024)? };
            let block = identity::resolution_block(gamma, eps, 6, &circle)?;
            let mut worst: f64 = 0.0;
            for (j, row) in block.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    let want = if j == k { (-(j as f64) * eps).exp() } else { 0.0 };
                    worst = worst.max((v - want).norm());
                }
            }
            Ok(worst)
        }));
    }
    out
}

/// Worst |chord identity| and |prefactor identity - 1| over `count` random
/// (τ, θ, γ).
pub fn kappa_lemma_errors(seed: u64, count: usize) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut a, mut b): (f64, f64) = (0.0, 0.0);
    for _ in 0..count {
        let tau = rng.gen_range(0.05..0.99);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let gamma = rng.gen_range(0.0..4.0);
        a = a.max((transform::kappa_chord(tau, theta) - (1.0 - Complex64::from_polar(1.0, theta))).norm());
        b = b.max((transform::kappa_prefactor(tau, theta, gamma) - 1.0).norm());
    }
    (a, b)
}

/// Worst |quadrature - analytic| / (1 + |analytic|) over n ≤ n_max.
pub fn q_route_error(n_max: usize, gammas: &[f64], epsilons: &[f64], thetas: &[f64]) -> Result<f64> {
    let rule = transform::default_rule();
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for &gamma in gammas {
            for &eps in epsilons {
                for &theta in thetas {
                    let q = transform::q_epsilon_quadrature(n, gamma, eps, theta, &rule)?;
                    let a = transform::q_epsilon_analytic(n, gamma, eps, theta)?;
                    worst = worst.max((q - a).norm() / (1.0 + a.norm()));
                }
            }
        }
    }
    Ok(worst)
}

pub fn transform_suite(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let (chord, pre) = kappa_lemma_errors(3, 100);
    out.push(VerificationReport::new("transform.kappa_chord_identity", &[("points", 100.0)], chord, opts.tol(1e-12)));
    out.push(VerificationReport::new("transform.kappa_prefactor_identity", &[("points", 100.0)], pre, opts.tol(1e-12)));
    let gammas = opts.gamma.map_or(vec![0.5, 1.5, 3.0], |g| vec![g]);
    let epsilons = opts.epsilons(&[0.1, 0.5]);
    let thetas = opts.thetas(&[0.5, FRAC_PI_2, PI, 5.0]);
    let n_max = opts.n_max.unwrap_or(8);
    out.push(check("transform.quadrature_vs_analytic", &[("n_max", n_max as f64)], opts.tol(1e-8), || {
        q_route_error(n_max, &gammas, &epsilons, &thetas)
    }));
    let grid = transform::theta_grid(256);
    for gamma in opts.gammas() {
        out.push(check("transform.eigenstate_images", &[("gamma", gamma), ("n_max", 12.0)], opts.tol(1e-10), || {
            let mut worst: f64 = 0.0;
            for n in 0..=12 {
                let r = transform::transform_eigenstate(n, gamma, &grid)?;
                let scale = squared_norm(n, gamma).sqrt();
                for (v, &t) in r.values.iter().zip(&grid) {
                    let g = circular_jacobi(n, gamma, CirclePoint::new(t));
                    let want = g / scale;
                    worst = worst.max((v - want).norm() / (1.0 + want.norm()));
                    if gamma == 0.0 {
                        worst = worst.max((v - Complex64::from_polar(1.0, n as f64 * t)).norm());
                    }
                }
            }
            Ok(worst)
        }));
        out.push(check("transform.epsilon_decay_law", &[("gamma", gamma)], opts.tol(1e-13), || {
            let mut worst: f64 = 0.0;
            for n in 0..=12 {
                for &eps in &[0.1, 0.5, 1.0] {
                    for &t in &[0.5, 2.0, 4.0] {
                        let a = transform::q_epsilon_analytic(n, gamma, eps, t)?;
                        let b = transform::q_epsilon_analytic(n, gamma, 0.0, t)? * (-0.5 * n as f64 * eps).exp();
                        worst = worst.max((a - b).norm() / (1.0 + b.norm()));
                    }
                }
            }
            Ok(worst)
        }));
    }
    let gamma = opts.gamma.unwrap_or(1.5);
    out.push(check("transform.function_extrapolation", &[("gamma", gamma), ("n", 2.0)], opts.tol(1e-10), || {
        let rule = Arc::new(transform::default_rule());
        let phi = GridFunction::sample(rule, |x| {
            Complex64::new(pho::eigenfunction(2, gamma + 1.0, x).unwrap_or(f64::NAN), 0.0)
        })?;
        let g = transform::theta_grid(32);
        let r = transform::transform_function(&phi, gamma, &g, &transform::DEFAULT_EPS_SCHEDULE)?;
        let want = transform::transform_eigenstate(2, gamma, &g)?;
        Ok(r.values.iter().zip(&want.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }));
    out
}
