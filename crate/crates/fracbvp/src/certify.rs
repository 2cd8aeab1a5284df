//! Bound constants and the uniqueness / existence certificates.
//!
//! The certificates evaluate the closed-form bound constants of the
//! fixed-point estimates and decide:
//!
//! * uniqueness: the contraction condition
//!   `(D0+D1+D2) ||l_f||_{1/tau} + sum_i rho_i |lambda_i| ||l_gi||_1
//!    + sum_{i=1,2} rho~_i |lambda_i| ||l_gi||_1 + rho^_2 |lambda_2| ||l_g2||_1 < 1`,
//! * existence: a constant `K > 0` with
//!   `K / (phi(K) ||l_f|| (D0+D1+D2) + sum_i (rho_i+rho~_i+rho^_i) |lambda_i| psi_i(K) ||l_gi||_1) > 1`.
//!
//! The `rho` family evaluates the displayed sup bounds of the coefficient
//! functions verbatim; in particular `rho^_2` carries `Gamma(3-beta1)` in its
//! denominator exactly as displayed, which is what the reference example
//! values were computed with (the true sup of `|D^beta2 omega_2|` would carry
//! `Gamma(3-beta2)` instead).
//!
//! The `Delta` constants are defined WITHOUT an `l_f` factor so that the
//! contraction condition multiplies the Lipschitz norm exactly once, and the
//! `i = 0` summand keeps only its `b_0` term because the solution
//! representation has no `a_0` integral.

use crate::error::{Error, Result};
use crate::fracops::gamma;
use crate::greenfn::structural_constants;
use crate::problem::{GrowthData, LipschitzData, LipschitzWeight, ProblemSpec};
use std::fmt;

/// Sup bounds of the coefficient functions and their fractional derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoBounds {
    /// bounds of `|omega_i|`
    pub rho: [f64; 3],
    /// bounds of `|D^beta1 omega_i|`; the first entry is always 0
    pub rho_tilde: [f64; 3],
    /// bounds of `|D^beta2 omega_i|`; the first two entries are always 0
    pub rho_hat: [f64; 3],
}

pub fn rho_bounds(spec: &ProblemSpec) -> Result<RhoBounds> {
    spec.ensure_valid()?;
    let sc = structural_constants(spec)?;
    let t_end = spec.t_end;
    let rho0 = 1.0 / (spec.a[0] + spec.b[0]).abs();
    let rho1 = sc.nu_beta1.abs() * (rho0 * spec.b[0].abs() + 1.0) * t_end;
    let ratio = sc.mu_beta2.abs() / sc.mu_beta1.abs();
    let rho2 = spec.b[0].abs() * sc.mu_beta2.abs() / (spec.a[0] + spec.b[0]).abs() * t_end * t_end
        + spec.b[0].abs() * sc.nu_beta1.abs() / (spec.a[0] + spec.b[0]).abs() * ratio * t_end
        + sc.nu_beta1.abs() * ratio * t_end
        + sc.mu_beta2.abs() * t_end * t_end;
    let g2b1 = gamma(2.0 - spec.beta1)?;
    let g3b1 = gamma(3.0 - spec.beta1)?;
    let rho_tilde1 = sc.nu_beta1.abs() * t_end.powf(1.0 - spec.beta1) / g2b1;
    let rho_tilde2 = sc.mu_beta2.abs() * sc.nu_beta1.abs() * t_end.powf(1.0 - spec.beta1)
        / (sc.mu_beta1.abs() * g2b1)
        + 2.0 * sc.mu_beta2.abs() * t_end.powf(2.0 - spec.beta1) / g3b1;
    // displayed form: Gamma(3 - beta1) in the denominator
    let rho_hat2 = 2.0 * sc.mu_beta2.abs() * t_end.powf(2.0 - spec.beta2) / g3b1;
    Ok(RhoBounds {
        rho: [rho0, rho1, rho2],
        rho_tilde: [0.0, rho_tilde1, rho_tilde2],
        rho_hat: [0.0, 0.0, rho_hat2],
    })
}

/// Default Hoelder parameter: the midpoint of the admissible interval
/// `(0, min(1, alpha - beta2))`.
pub fn default_tau(spec: &ProblemSpec) -> f64 {
    0.5 * f64::min(1.0, spec.alpha - spec.beta2)
}

fn check_tau(spec: &ProblemSpec, tau: f64) -> Result<()> {
    let hi = f64::min(1.0, spec.alpha - spec.beta2);
    if !(tau > 0.0 && tau < hi) {
        return Err(Error::domain(format!(
            "tau = {tau} outside admissible interval (0, {hi})"
        )));
    }
    Ok(())
}

/// The three channel bounds `Delta_0, Delta_1, Delta_2`.
///
/// With `constant_lf` the simple form `T^(alpha-beta_i)/Gamma(alpha-beta_i+1)`
/// is used (exact for a constant Lipschitz weight and independent of `tau`);
/// otherwise the Hoelder form with exponents `T^(alpha-beta_i-tau)` and
/// factors `((1-tau)/(alpha-beta_i-tau))^(1-tau)`.
pub fn delta_bounds(spec: &ProblemSpec, tau: Option<f64>, constant_lf: bool) -> Result<[f64; 3]> {
    spec.ensure_valid()?;
    let bounds = rho_bounds(spec)?;
    let (alpha, t_end, eta) = (spec.alpha, spec.t_end, spec.eta);
    let betas = [0.0, spec.beta1, spec.beta2];
    if constant_lf {
        let head = |m: f64| -> Result<f64> { Ok(t_end.powf(alpha - m) / gamma(alpha - m + 1.0)?) };
        let pair = |i: usize| -> Result<f64> {
            Ok((spec.b[i].abs() * t_end.powf(alpha - betas[i])
                + spec.a[i].abs() * eta.powf(alpha - betas[i]))
                / gamma(alpha - betas[i] + 1.0)?)
        };
        let d0 = head(0.0)?
            + bounds.rho[0] * spec.b[0].abs() * t_end.powf(alpha) / gamma(alpha + 1.0)?
            + bounds.rho[1] * pair(1)?
            + bounds.rho[2] * pair(2)?;
        let d1 = head(spec.beta1)? + bounds.rho_tilde[1] * pair(1)? + bounds.rho_tilde[2] * pair(2)?;
        let d2 = head(spec.beta2)? + bounds.rho_hat[2] * pair(2)?;
        return Ok([d0, d1, d2]);
    }
    let tau = tau.unwrap_or_else(|| default_tau(spec));
    check_tau(spec, tau)?;
    let hoelder = |m: f64| ((1.0 - tau) / (alpha - m - tau)).powf(1.0 - tau);
    let head = |m: f64| -> Result<f64> {
        Ok(t_end.powf(alpha - m - tau) / gamma(alpha - m)? * hoelder(m))
    };
    let pair = |i: usize| -> Result<f64> {
        Ok((spec.b[i].abs() * t_end.powf(alpha - betas[i] - tau)
            + spec.a[i].abs() * eta.powf(alpha - betas[i] - tau))
            / gamma(alpha - betas[i])?
            * hoelder(betas[i]))
    };
    let d0 = head(0.0)?
        + bounds.rho[0] * spec.b[0].abs() * t_end.powf(alpha - tau) / gamma(alpha)? * hoelder(0.0)
        + bounds.rho[1] * pair(1)?
        + bounds.rho[2] * pair(2)?;
    let d1 = head(spec.beta1)? + bounds.rho_tilde[1] * pair(1)? + bounds.rho_tilde[2] * pair(2)?;
    let d2 = head(spec.beta2)? + bounds.rho_hat[2] * pair(2)?;
    Ok([d0, d1, d2])
}

/// `L^(1/tau)` norm `(int_0^T l(s)^(1/tau) ds)^tau`; a constant weight `c`
/// gives `c * T^tau` exactly.
pub fn holder_norm(l: &LipschitzWeight, tau: f64, t_end: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(format!("Hoelder exponent tau = {tau} outside (0, 1)")));
    }
    if !l.is_nonnegative() {
        return Err(Error::domain("Lipschitz weight must be nonnegative".to_string()));
    }
    match l {
        LipschitzWeight::Constant(c) => Ok(c * t_end.powf(tau)),
        LipschitzWeight::Sampled(f) => {
            let grid = f.grid();
            let powered: Vec<f64> = f.values().iter().map(|v| v.powf(1.0 / tau)).collect();
            let integral = crate::grid::SampledFunction::new(grid, powered)?.trapezoid();
            Ok(integral.powf(tau))
        }
    }
}

/// `L^1` norm `int_0^T l(s) ds`.
pub fn l1_norm(l: &LipschitzWeight, t_end: f64) -> Result<f64> {
    if !l.is_nonnegative() {
        return Err(Error::domain("Lipschitz weight must be nonnegative".to_string()));
    }
    match l {
        LipschitzWeight::Constant(c) => Ok(c * t_end),
        LipschitzWeight::Sampled(f) => Ok(f.trapezoid()),
    }
}

/// Which condition a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Uniqueness,
    Existence,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::Uniqueness => write!(f, "uniqueness"),
            CertificateKind::Existence => write!(f, "existence"),
        }
    }
}

/// Itemized outcome of a certificate computation.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub certified: bool,
    /// total contraction constant (uniqueness only)
    pub contraction_constant: Option<f64>,
    /// smallest admissible bound `K` (existence only, when certified)
    pub k_threshold: Option<f64>,
    /// search cap that was exhausted when existence is refused
    pub cap: Option<f64>,
    /// named component terms, in evaluation order
    pub terms: Vec<(String, f64)>,
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "verdict: {}", if self.certified { "certified" } else { "not-certified" })?;
        if let Some(c) = self.contraction_constant {
            writeln!(f, "contraction_constant: {c:.11e}")?;
        }
        if let Some(k) = self.k_threshold {
            writeln!(f, "k_threshold: {k:.6}")?;
        }
        if let Some(cap) = self.cap {
            writeln!(f, "search_cap: {cap:.3e}")?;
        }
        for (name, value) in &self.terms {
            writeln!(f, "{name}: {value:.11e}")?;
        }
        Ok(())
    }
}

/// Decide the contraction condition for the given Lipschitz data.
///
/// With `constant_lf` the weight `l_f` must be a constant; the certificate
/// then uses the exact simple-form `Delta` constants and needs no Hoelder
/// parameter.
pub fn uniqueness_certificate(
    spec: &ProblemSpec,
    lip: &LipschitzData,
    constant_lf: bool,
) -> Result<CertificateReport> {
    spec.ensure_valid()?;
    let bounds = rho_bounds(spec)?;
    let tau = match lip.tau {
        Some(t) => {
            check_tau(spec, t)?;
            t
        }
        None => default_tau(spec),
    };
    let lf_norm = if constant_lf {
        match lip.l_f {
            LipschitzWeight::Constant(c) if c >= 0.0 => c,
            LipschitzWeight::Constant(c) => {
                return Err(Error::domain(format!("l_f must be nonnegative, got {c}")))
            }
            _ => return Err(Error::domain("constant-l_f mode needs a constant weight".to_string())),
        }
    } else {
        holder_norm(&lip.l_f, tau, spec.t_end)?
    };
    let delta = delta_bounds(spec, Some(tau), constant_lf)?;
    let lg_norms = [
        l1_norm(&lip.l_g[0], spec.t_end)?,
        l1_norm(&lip.l_g[1], spec.t_end)?,
        l1_norm(&lip.l_g[2], spec.t_end)?,
    ];
    let lf_term = (delta[0] + delta[1] + delta[2]) * lf_norm;
    let mut g_term = 0.0;
    for i in 0..3 {
        g_term += bounds.rho[i] * spec.lambda[i].abs() * lg_norms[i];
    }
    for i in 1..3 {
        g_term += bounds.rho_tilde[i] * spec.lambda[i].abs() * lg_norms[i];
    }
    g_term += bounds.rho_hat[2] * spec.lambda[2].abs() * lg_norms[2];
    let total = lf_term + g_term;
    let mut terms = vec![
        ("delta0".to_string(), delta[0]),
        ("delta1".to_string(), delta[1]),
        ("delta2".to_string(), delta[2]),
        ("lf_norm".to_string(), lf_norm),
        ("lf_term".to_string(), lf_term),
        ("g_term".to_string(), g_term),
    ];
    for i in 0..3 {
        terms.push((format!("rho{i}"), bounds.rho[i]));
    }
    terms.push(("rho_tilde1".to_string(), bounds.rho_tilde[1]));
    terms.push(("rho_tilde2".to_string(), bounds.rho_tilde[2]));
    terms.push(("rho_hat2".to_string(), bounds.rho_hat[2]));
    Ok(CertificateReport {
        kind: CertificateKind::Uniqueness,
        certified: total < 1.0,
        contraction_constant: Some(total),
        k_threshold: None,
        cap: None,
        terms,
    })
}

/// Options for the existence search.
#[derive(Debug, Clone, Copy)]
pub struct ExistenceOptions {
    /// cap above which the ladder gives up
    pub cap: f64,
    /// use the simple-form `Delta` constants (exact for constant `l_f`)
    pub constant_lf: bool,
}

impl Default for ExistenceOptions {
    fn default() -> Self {
        ExistenceOptions { cap: 1e9, constant_lf: false }
    }
}

/// Search for the smallest `K` making the growth ratio exceed one.
///
/// Scans the geometric ladder `K = 2^k * 1e-6`, then bisects the first
/// bracketing pair down to three decimal places. The ladder guards against
/// non-monotone growth majorants.
pub fn existence_certificate(
    spec: &ProblemSpec,
    growth: &GrowthData,
    lip: &LipschitzData,
    opts: ExistenceOptions,
) -> Result<CertificateReport> {
    spec.ensure_valid()?;
    let bounds = rho_bounds(spec)?;
    let tau = match lip.tau {
        Some(t) => {
            check_tau(spec, t)?;
            t
        }
        None => default_tau(spec),
    };
    let lf_norm = if opts.constant_lf {
        match lip.l_f {
            LipschitzWeight::Constant(c) if c >= 0.0 => c,
            _ => return Err(Error::domain("constant-l_f mode needs a constant weight".to_string())),
        }
    } else {
        holder_norm(&lip.l_f, tau, spec.t_end)?
    };
    let delta = delta_bounds(spec, Some(tau), opts.constant_lf)?;
    let delta_sum = delta[0] + delta[1] + delta[2];
    let lg_norms = [
        l1_norm(&lip.l_g[0], spec.t_end)?,
        l1_norm(&lip.l_g[1], spec.t_end)?,
        l1_norm(&lip.l_g[2], spec.t_end)?,
    ];
    let denominator = |k: f64| -> Result<f64> {
        let phi = (growth.phi)(k);
        if !phi.is_finite() || phi < 0.0 {
            return Err(Error::domain(format!("phi({k}) = {phi} is not a nonnegative real")));
        }
        let mut d = phi * lf_norm * delta_sum;
        for i in 0..3 {
            let psi = (growth.psi[i])(k);
            if !psi.is_finite() || psi < 0.0 {
                return Err(Error::domain(format!("psi{i}({k}) = {psi} is not a nonnegative real")));
            }
            d += (bounds.rho[i] + bounds.rho_tilde[i] + bounds.rho_hat[i])
                * spec.lambda[i].abs()
                * psi
                * lg_norms[i];
        }
        Ok(d)
    };
    let admits = |k: f64| -> Result<bool> {
        let d = denominator(k)?;
        Ok(d <= 0.0 || k / d > 1.0)
    };
    let mut terms = vec![
        ("delta_sum".to_string(), delta_sum),
        ("lf_norm".to_string(), lf_norm),
    ];
    // geometric ladder
    let mut lo = 0.0;
    let mut found = None;
    let mut k = 1e-6;
    while k <= opts.cap {
        if admits(k)? {
            found = Some(k);
            break;
        }
        lo = k;
        k *= 2.0;
    }
    let Some(mut hi) = found else {
        terms.push(("ratio_at_cap".to_string(), opts.cap / denominator(opts.cap)?));
        return Ok(CertificateReport {
            kind: CertificateKind::Existence,
            certified: false,
            contraction_constant: None,
            k_threshold: None,
            cap: Some(opts.cap),
            terms,
        });
    };
    // bisect to three decimals
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if admits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    terms.push(("denominator_at_threshold".to_string(), denominator(hi)?));
    Ok(CertificateReport {
        kind: CertificateKind::Existence,
        certified: true,
        contraction_constant: None,
        k_threshold: Some(hi),
        cap: None,
        terms,
    })
}
