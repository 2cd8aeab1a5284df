//! Problem definition, hypothesis validation, builtin examples and
//! manufactured solutions.
//!
//! A [`ProblemSpec`] describes the boundary value problem
//!
//! ```text
//! D^alpha u(t) = f(t, u, D^beta1 u, D^beta2 u),   0 <= t <= T,  2 < alpha <= 3,
//! a0 u(0)            + b0 u(T)            = lambda0 * int_0^T g0(s, u(s)) ds,
//! a1 D^beta1 u(eta)  + b1 D^beta1 u(T)    = lambda1 * int_0^T g1(s, u(s)) ds,
//! a2 D^beta2 u(eta)  + b2 D^beta2 u(T)    = lambda2 * int_0^T g2(s, u(s)) ds,
//! ```
//!
//! with `0 < beta1 <= 1`, `1 < beta2 <= 2` and `0 < eta < T`.

use crate::error::{Error, Result};
use crate::fracops::{caputo_monomial, FracOrder, MonomialCaputo};
use crate::grid::{SampledFunction, UniformGrid};
use std::fmt;
use std::sync::Arc;

/// Right-hand side handle `(t, u, v, w) -> f` where `v = D^beta1 u`,
/// `w = D^beta2 u`.
pub type Nonlinearity = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

/// Boundary integrand handle `(s, u) -> g_i`.
pub type BoundaryIntegrand = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Nondecreasing growth majorant `K -> phi(K)`.
pub type GrowthFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Full description of the boundary value problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub t_end: f64,
    pub eta: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub lambda: [f64; 3],
    pub f: Nonlinearity,
    pub g: [BoundaryIntegrand; 3],
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("beta1", &self.beta1)
            .field("beta2", &self.beta2)
            .field("t_end", &self.t_end)
            .field("eta", &self.eta)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("lambda", &self.lambda)
            .finish_non_exhaustive()
    }
}

/// Threshold below which a non-degeneracy denominator counts as zero.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// One violated hypothesis with the computed left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub requirement: String,
    pub lhs: f64,
}

/// Outcome of [`validate`]; empty means every hypothesis holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "pass");
        }
        for v in &self.violations {
            writeln!(f, "violated: {} (lhs = {:.6e})", v.requirement, v.lhs)?;
        }
        Ok(())
    }
}

/// Check every standing hypothesis; failures are reported, never panicked.
pub fn validate(spec: &ProblemSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let mut req = |ok: bool, requirement: &str, lhs: f64| {
        if !ok {
            violations.push(Violation { requirement: requirement.to_string(), lhs });
        }
    };
    req(spec.t_end > 0.0, "T > 0", spec.t_end);
    req(spec.alpha > 2.0 && spec.alpha <= 3.0, "2 < alpha <= 3", spec.alpha);
    req(spec.beta1 > 0.0 && spec.beta1 <= 1.0, "0 < beta1 <= 1", spec.beta1);
    req(spec.beta2 > 1.0 && spec.beta2 <= 2.0, "1 < beta2 <= 2", spec.beta2);
    req(spec.eta > 0.0 && spec.eta < spec.t_end, "0 < eta < T", spec.eta);
    let all_finite = [spec.alpha, spec.beta1, spec.beta2, spec.t_end, spec.eta]
        .iter()
        .chain(spec.a.iter())
        .chain(spec.b.iter())
        .chain(spec.lambda.iter())
        .all(|x| x.is_finite());
    req(all_finite, "all parameters finite", f64::NAN);
    if spec.eta > 0.0 && spec.eta < spec.t_end && spec.t_end > 0.0 {
        let d0 = spec.a[0] + spec.b[0];
        req(d0.abs() > DEGENERACY_EPS, "a0 + b0 != 0", d0);
        let d1 = spec.a[1] * spec.eta.powf(1.0 - spec.beta1) + spec.b[1] * spec.t_end.powf(1.0 - spec.beta1);
        req(d1.abs() > DEGENERACY_EPS, "a1 eta^(1-beta1) + b1 T^(1-beta1) != 0", d1);
        let d2 = spec.a[1] * spec.eta.powf(2.0 - spec.beta1) + spec.b[1] * spec.t_end.powf(2.0 - spec.beta1);
        req(d2.abs() > DEGENERACY_EPS, "a1 eta^(2-beta1) + b1 T^(2-beta1) != 0", d2);
        let d3 = spec.a[2] * spec.eta.powf(2.0 - spec.beta2) + spec.b[2] * spec.t_end.powf(2.0 - spec.beta2);
        req(d3.abs() > DEGENERACY_EPS, "a2 eta^(2-beta2) + b2 T^(2-beta2) != 0", d3);
    }
    ValidationReport { violations }
}

impl ProblemSpec {
    /// Error out unless every standing hypothesis holds.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(report))
        }
    }
}

/// Lipschitz weight: a constant or a nonnegative sampled function.
#[derive(Debug, Clone)]
pub enum LipschitzWeight {
    Constant(f64),
    Sampled(SampledFunction),
}

impl LipschitzWeight {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            LipschitzWeight::Constant(c) => *c >= 0.0,
            LipschitzWeight::Sampled(f) => f.values().iter().all(|v| *v >= 0.0),
        }
    }
}

/// Lipschitz data for the uniqueness certificate.
#[derive(Debug, Clone)]
pub struct LipschitzData {
    pub l_f: LipschitzWeight,
    pub l_g: [LipschitzWeight; 3],
    /// Hoelder parameter; `None` selects the default `min(1, alpha - beta2)/2`.
    pub tau: Option<f64>,
}

/// Growth data for the existence certificate.
#[derive(Clone)]
pub struct GrowthData {
    pub phi: GrowthFn,
    pub psi: [GrowthFn; 3],
}

impl fmt::Debug for GrowthData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowthData").finish_non_exhaustive()
    }
}

/// A builtin example problem together with its certificate data.
#[derive(Debug, Clone)]
pub struct BuiltinExample {
    pub spec: ProblemSpec,
    pub lipschitz: LipschitzData,
    pub growth: Option<GrowthData>,
}

fn shared_example_spec(f: Nonlinearity, g: [BoundaryIntegrand; 3]) -> ProblemSpec {
    ProblemSpec {
        alpha: 2.5,
        beta1: 0.5,
        beta2: 1.5,
        t_end: 1.0,
        eta: 0.1,
        a: [1.0; 3],
        b: [1.0; 3],
        lambda: [1.0, 0.5, 1.0 / 3.0],
        f,
        g,
    }
}

/// First builtin example with an explicit Lipschitz factor `l_f` in front of
/// the nonlinearity.
pub fn example1_with_lf(l_f: f64) -> BuiltinExample {
    let f: Nonlinearity = Arc::new(move |_t, u: f64, v: f64, w: f64| {
        l_f * (u.abs() / (1.0 + u.abs()) + v.abs() / (1.0 + v.abs()) + w.atan())
    });
    let g0: BoundaryIntegrand = Arc::new(|s, u| u / ((1.0 + s) * (1.0 + s)));
    let g1: BoundaryIntegrand = Arc::new(|s, u| s.exp() * u / (1.0 + 2.0 * s.exp()) + 0.5);
    let g2: BoundaryIntegrand = Arc::new(|s, u| u / (1.0 + s.exp()) + 0.75);
    BuiltinExample {
        spec: shared_example_spec(f, [g0, g1, g2]),
        lipschitz: LipschitzData {
            l_f: LipschitzWeight::Constant(l_f),
            l_g: [
                LipschitzWeight::Constant(1.0),
                LipschitzWeight::Constant(1.0),
                LipschitzWeight::Constant(1.0),
            ],
            tau: None,
        },
        growth: None,
    }
}

/// Default Lipschitz factor used when example 1 is requested without one.
pub const EXAMPLE1_DEFAULT_LF: f64 = 0.05;

/// Second builtin example: bounded nonlinearity with growth data
/// `phi(K) = 11/12`, `psi_i(K) = K`, `l_f = l_gi = 1/3`.
pub fn example2() -> BuiltinExample {
    let f: Nonlinearity = Arc::new(|_t, u: f64, v: f64, _w| {
        let cu = u.abs().powi(3);
        let sv = v.sin().abs();
        cu / (9.0 * (cu + 3.0)) + sv / (9.0 * (sv + 1.0)) + 1.0 / 12.0
    });
    let g0: BoundaryIntegrand = Arc::new(|s, u| u / (3.0 * (1.0 + s) * (1.0 + s)));
    let g1: BoundaryIntegrand = Arc::new(|s, u| {
        let e = s.exp();
        e * u / (3.0 * (1.0 + e) * (1.0 + e))
    });
    let g2: BoundaryIntegrand = Arc::new(|s, u| {
        let e = s.exp();
        u / (3.0 * (1.0 + e) * (1.0 + e))
    });
    let third = 1.0 / 3.0;
    BuiltinExample {
        spec: shared_example_spec(f, [g0, g1, g2]),
        lipschitz: LipschitzData {
            l_f: LipschitzWeight::Constant(third),
            l_g: [
                LipschitzWeight::Constant(third),
                LipschitzWeight::Constant(third),
                LipschitzWeight::Constant(third),
            ],
            tau: None,
        },
        growth: Some(GrowthData {
            phi: Arc::new(|_k| 11.0 / 12.0),
            psi: [Arc::new(|k| k), Arc::new(|k| k), Arc::new(|k| k)],
        }),
    }
}

/// Builtin example by id (1 or 2).
pub fn example(id: u8) -> Result<BuiltinExample> {
    match id {
        1 => Ok(example1_with_lf(EXAMPLE1_DEFAULT_LF)),
        2 => Ok(example2()),
        other => Err(Error::domain(format!("unknown example id {other}, expected 1 or 2"))),
    }
}

/// Manufactured problem with known exact solution `u*(t) = t^gamma_exp`.
#[derive(Debug, Clone)]
pub struct Manufactured {
    /// Forcing `D^alpha u*` sampled on the working grid.
    pub forcing: SampledFunction,
    /// Closed form of the forcing.
    pub forcing_form: MonomialCaputo,
    /// Boundary row right-hand sides `R_i = a_i chan_i(eta|0) + b_i chan_i(T)`.
    pub boundary_rows: [f64; 3],
    /// Plain integrals `int_0^T g_i = R_i / lambda_i` fed to the linear solver.
    pub g_integrals: [f64; 3],
    /// Constant integrand levels `c_i = R_i / (lambda_i T)`.
    pub g_constants: [f64; 3],
    /// Exact solution triple sampled on the working grid.
    pub exact_u: SampledFunction,
    pub exact_du_beta1: SampledFunction,
    pub exact_du_beta2: SampledFunction,
    /// Closed forms of the derivative channels.
    pub du_beta1_form: MonomialCaputo,
    pub du_beta2_form: MonomialCaputo,
}

/// Build forcing, boundary data and the exact triple for `u*(t) = t^gamma_exp`.
///
/// The boundary data is encoded by constant integrands `g_i = c_i` chosen so
/// that `lambda_i * int_0^T c_i ds` equals the exact row value.
pub fn manufactured(spec: &ProblemSpec, gamma_exp: f64, grid: UniformGrid) -> Result<Manufactured> {
    spec.ensure_valid()?;
    let alpha = FracOrder::new(spec.alpha)?;
    let forcing_form = caputo_monomial(gamma_exp, alpha)?;
    if !forcing_form.is_zero() && forcing_form.exponent() < 0.0 {
        return Err(Error::domain(format!(
            "manufactured exponent {gamma_exp} yields a singular forcing t^{}",
            forcing_form.exponent()
        )));
    }
    let du_beta1 = caputo_monomial(gamma_exp, FracOrder::new(spec.beta1)?)?;
    let du_beta2 = caputo_monomial(gamma_exp, FracOrder::new(spec.beta2)?)?;
    let u_at = |t: f64| if gamma_exp == 0.0 { 1.0 } else { t.powf(gamma_exp) };
    let rows = [
        spec.a[0] * u_at(0.0) + spec.b[0] * u_at(spec.t_end),
        spec.a[1] * du_beta1.eval(spec.eta) + spec.b[1] * du_beta1.eval(spec.t_end),
        spec.a[2] * du_beta2.eval(spec.eta) + spec.b[2] * du_beta2.eval(spec.t_end),
    ];
    let mut g_integrals = [0.0; 3];
    let mut g_constants = [0.0; 3];
    for i in 0..3 {
        if spec.lambda[i].abs() > DEGENERACY_EPS {
            g_integrals[i] = rows[i] / spec.lambda[i];
            g_constants[i] = rows[i] / (spec.lambda[i] * spec.t_end);
        } else if rows[i].abs() > 1e-10 {
            return Err(Error::domain(format!(
                "row {i} needs nonzero data {} but lambda{i} = 0",
                rows[i]
            )));
        }
    }
    Ok(Manufactured {
        forcing: forcing_form.sample(grid)?,
        forcing_form,
        boundary_rows: rows,
        g_integrals,
        g_constants,
        exact_u: SampledFunction::from_fn(grid, u_at)?,
        exact_du_beta1: du_beta1.sample(grid)?,
        exact_du_beta2: du_beta2.sample(grid)?,
        du_beta1_form: du_beta1,
        du_beta2_form: du_beta2,
    })
}

/// Named nonlinearities available to problem files.
///
/// `zero`, `example1:<lf>`, `example2`, `monomial:<gamma>` (the forcing of the
/// manufactured solution `t^gamma` for the file's `alpha`).
pub fn nonlinearity_from_name(name: &str, alpha: f64) -> Result<Nonlinearity> {
    if name == "zero" {
        return Ok(Arc::new(|_, _, _, _| 0.0));
    }
    if name == "example2" {
        return Ok(example2().spec.f);
    }
    if let Some(rest) = name.strip_prefix("example1:") {
        let lf: f64 = rest
            .parse()
            .map_err(|_| Error::domain(format!("bad example1 factor '{rest}'")))?;
        return Ok(example1_with_lf(lf).spec.f);
    }
    if name == "example1" {
        return Ok(example1_with_lf(EXAMPLE1_DEFAULT_LF).spec.f);
    }
    if let Some(rest) = name.strip_prefix("monomial:") {
        let gamma_exp: f64 = rest
            .parse()
            .map_err(|_| Error::domain(format!("bad monomial exponent '{rest}'")))?;
        let form = caputo_monomial(gamma_exp, FracOrder::new(alpha)?)?;
        return Ok(Arc::new(move |t, _, _, _| form.eval(t)));
    }
    Err(Error::domain(format!("unknown nonlinearity '{name}'")))
}

/// Named boundary integrands available to problem files.
///
/// `zero`, `const:<c>`, `example1_g0..g2`, `example2_g0..g2`.
pub fn integrand_from_name(name: &str) -> Result<BoundaryIntegrand> {
    if name == "zero" {
        return Ok(Arc::new(|_, _| 0.0));
    }
    if let Some(rest) = name.strip_prefix("const:") {
        let c: f64 = rest
            .parse()
            .map_err(|_| Error::domain(format!("bad constant integrand '{rest}'")))?;
        return Ok(Arc::new(move |_, _| c));
    }
    let pick = |ex: BuiltinExample, i: usize| ex.spec.g[i].clone();
    match name {
        "example1_g0" => Ok(pick(example1_with_lf(1.0), 0)),
        "example1_g1" => Ok(pick(example1_with_lf(1.0), 1)),
        "example1_g2" => Ok(pick(example1_with_lf(1.0), 2)),
        "example2_g0" => Ok(pick(example2(), 0)),
        "example2_g1" => Ok(pick(example2(), 1)),
        "example2_g2" => Ok(pick(example2(), 2)),
        _ => Err(Error::domain(format!("unknown boundary integrand '{name}'"))),
    }
}
