//! Principal-value transforms: the harmonic conjugate on the full circle,
//! the arc Hilbert transform H₁(f)(e^{iτ}) = (1/2π) PV ∫ f(e^{iθ})/(e^{iτ} −
//! e^{iθ}) dθ, and the weighted transform H₂(f) = H₁(f·w_α) evaluated in the
//! ω domain where its kernel has a plain simple-pole structure.
//!
//! All PV limits funnel through one primitive for PV ∫ φ(t)/(s−t) dt with
//! smooth φ, so the three user-selectable schemes differ only in how the
//! integrand is brought to that form (or, for symmetric exclusion, in how
//! the ε-window limit is extrapolated).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arc::{ArcParams, Sheet};
use crate::error::{ArcError, Result};
use crate::grid::{ArcEval, Domain, GridFunction};
use crate::measure::{lp_norm_fn, MeasureSpec};
use crate::quadrature::{gauss_legendre, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvMethod {
    SingularitySubtraction,
    SymmetricExclusion,
    OmegaSubstitution,
}

impl PvMethod {
    pub fn id(&self) -> &'static str {
        match self {
            PvMethod::SingularitySubtraction => "subtraction",
            PvMethod::SymmetricExclusion => "exclusion",
            PvMethod::OmegaSubstitution => "omega",
        }
    }

    pub fn from_id(id: &str) -> Option<PvMethod> {
        match id {
            "subtraction" | "singularity-subtraction" => Some(PvMethod::SingularitySubtraction),
            "exclusion" | "symmetric-exclusion" => Some(PvMethod::SymmetricExclusion),
            "omega" | "omega-substitution" => Some(PvMethod::OmegaSubstitution),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvScheme {
    pub method: PvMethod,
    /// Initial exclusion half-width for the symmetric-exclusion method;
    /// the reported value is Richardson-extrapolated from ε and ε/2.
    pub epsilon: f64,
    /// Gauss nodes per graded panel.
    pub nodes: usize,
    /// Agreement demanded between successive refinements when
    /// `check_refinement` is on.
    pub tolerance: f64,
    pub check_refinement: bool,
}

impl Default for PvScheme {
    fn default() -> Self {
        PvScheme {
            method: PvMethod::SingularitySubtraction,
            epsilon: 1e-3,
            nodes: 24,
            tolerance: 1e-7,
            check_refinement: false,
        }
    }
}

impl PvScheme {
    pub fn with_method(method: PvMethod) -> Self {
        PvScheme {
            method,
            ..Default::default()
        }
    }

    fn validate(&self, span: f64) -> Result<()> {
        if self.nodes < 2 {
            return Err(ArcError::TooFewNodes(self.nodes));
        }
        if self.method == PvMethod::SymmetricExclusion
            && !(self.epsilon > 0.0 && self.epsilon < 0.25 * span)
        {
            return Err(ArcError::Grid(format!(
                "exclusion half-width {} outside (0, {})",
                self.epsilon,
                0.25 * span
            )));
        }
        Ok(())
    }
}

/// Dyadically graded distance pairs (inner, outer) covering [near, far]
/// moving away from the singular point; `far` is split in half repeatedly
/// until the innermost panel is shorter than `near`.
pub(crate) fn graded_distances(near: f64, far: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut d = far;
    while d > near * 2.0 {
        out.push((d * 0.5, d));
        d *= 0.5;
    }
    out.push((near, d));
    out
}

/// PV ∫_{lo}^{hi} φ(t)/(s−t) dt for φ smooth on [lo, hi], lo < s < hi:
/// the subtracted part ∫ (φ(t)−φ(s))/(s−t) dt over graded panels plus the
/// closed-form kernel value φ(s)·ln((s−lo)/(hi−s)). A sliver of half-width
/// δ = 1e−9·dist(s, edge) around s is dropped and restored analytically as
/// −2δ·φ′(s).
pub fn pv_line_integral(
    phi: &dyn Fn(f64) -> Complex64,
    s: f64,
    lo: f64,
    hi: f64,
    panel_nodes: usize,
) -> Complex64 {
    let (gx, gw) = gauss_legendre(panel_nodes);
    let edge_dist = (s - lo).min(hi - s);
    let delta = 1e-9 * edge_dist;
    let phi_s = {
        let h = (1e-4 * (hi - lo)).min(0.45 * edge_dist);
        // value and derivative at the pole, by symmetric samples
        (
            (phi(s + h) + phi(s - h)) * 0.5,
            (phi(s + h) - phi(s - h)) / (2.0 * h),
        )
    };
    let (phi_at_s, dphi_at_s) = (phi(s), phi_s.1);
    let mut acc = Complex64::new(0.0, 0.0);
    // left of s: t = s − d, 1/(s−t) = 1/d
    for (d_in, d_out) in graded_distances(delta, s - lo) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            let d = c + h * x;
            acc += (phi(s - d) - phi_at_s) / d * (h * w);
        }
    }
    // right of s: t = s + d, 1/(s−t) = −1/d
    for (d_in, d_out) in graded_distances(delta, hi - s) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            let d = c + h * x;
            acc -= (phi(s + d) - phi_at_s) / d * (h * w);
        }
    }
    acc - 2.0 * delta * dphi_at_s + phi_at_s * ((s - lo) / (hi - s)).ln()
}

/// x / sin x with the removable singularity filled in.
fn x_over_sin(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + x * x / 6.0
    } else {
        x / x.sin()
    }
}

/// e^{iτ} − e^{iθ} = e^{i(τ+θ)/2} · 2i sin((τ−θ)/2), so
/// (τ−θ)/(e^{iτ} − e^{iθ}) stays accurate down to the diagonal.
fn circle_diff_ratio(tau: f64, theta: f64) -> Complex64 {
    let half = 0.5 * (tau - theta);
    Complex64::new(x_over_sin(half), 0.0)
        / (Complex64::from_polar(1.0, 0.5 * (tau + theta)) * Complex64::new(0.0, 1.0))
}

/// h(e^{is}) − h(e^{it}) through the pole-free factorization
/// 8(β + 1/β) e^{i(s+t)} sin((t+s)/2) sin((t−s)/2) / Π with
/// Π = (e^{is}+β)(e^{it}+β)(e^{is}+1/β)(e^{it}+1/β); exact by partial
/// fractions, no cancellation near s = t.
pub fn disk_map_circle_diff(params: &ArcParams, s: f64, t: f64) -> Complex64 {
    let b = params.beta();
    let vs = Complex64::from_polar(1.0, s);
    let vt = Complex64::from_polar(1.0, t);
    let pi_prod = (vs + b) * (vt + b) * (vs + 1.0 / b) * (vt + 1.0 / b);
    8.0 * (b + 1.0 / b)
        * Complex64::from_polar(1.0, s + t)
        * (0.5 * (t + s)).sin()
        * (0.5 * (t - s)).sin()
        / pi_prod
}

/// d/ds h(e^{is}) = h'(e^{is}) · i e^{is}.
pub fn disk_map_circle_deriv(params: &ArcParams, s: f64) -> Result<Complex64> {
    let v = Complex64::from_polar(1.0, s);
    Ok(params.disk_map_deriv(v)? * Complex64::new(0.0, 1.0) * v)
}

fn check_tau_interior(params: &ArcParams, tau: f64) -> Result<()> {
    let (lo, hi) = params.arc_span();
    if !(tau > lo + crate::arc::ENDPOINT_BAND && tau < hi - crate::arc::ENDPOINT_BAND) {
        return Err(ArcError::ThetaOutsideArc { theta: tau, lo, hi });
    }
    Ok(())
}

/// Closed-form H₁(1)(e^{iτ}): from the antiderivative of 1/(e^{iτ}−e^{iθ}),
/// the logarithmic endpoint terms survive and the symmetric limits at τ
/// cancel, leaving e^{−iτ}[(π−α) + i·ln(sin((τ+α)/2)/sin((τ−α)/2))]/(2π).
pub fn hilbert_unit_closed_form(params: &ArcParams, tau: f64) -> Result<Complex64> {
    check_tau_interior(params, tau)?;
    let a = params.alpha();
    let log_term = ((0.5 * (tau + a)).sin() / (0.5 * (tau - a)).sin()).ln();
    Ok(
        Complex64::from_polar(1.0, -tau) * Complex64::new(std::f64::consts::PI - a, log_term)
            / (2.0 * std::f64::consts::PI),
    )
}

/// H₁ of a function given as a closure in θ.
pub fn hilbert_arc_fn<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    tau: f64,
    scheme: &PvScheme,
) -> Result<Complex64> {
    check_tau_interior(params, tau)?;
    let (lo, hi) = params.arc_span();
    scheme.validate(hi - lo)?;
    let value = match scheme.method {
        PvMethod::SingularitySubtraction => subtraction_value(params, f, tau, scheme.nodes),
        PvMethod::SymmetricExclusion => {
            let eps = scheme.epsilon.min(0.25 * (tau - lo).min(hi - tau));
            let i1 = exclusion_value(params, f, tau, eps, scheme.nodes);
            let i2 = exclusion_value(params, f, tau, 0.5 * eps, scheme.nodes);
            let first = 2.0 * i2 - i1;
            if scheme.check_refinement {
                let i3 = exclusion_value(params, f, tau, 0.25 * eps, scheme.nodes);
                let second = 2.0 * i3 - i2;
                let delta = (second - first).norm();
                if delta > scheme.tolerance {
                    return Err(ArcError::PvNotConverged {
                        delta,
                        tol: scheme.tolerance,
                    });
                }
                return Ok(second);
            }
            first
        }
        PvMethod::OmegaSubstitution => {
            omega_subtraction_value(params, f, tau, scheme.nodes, false)?
        }
    };
    if scheme.check_refinement && scheme.method != PvMethod::SymmetricExclusion {
        let refined = match scheme.method {
            PvMethod::SingularitySubtraction => subtraction_value(params, f, tau, 2 * scheme.nodes),
            PvMethod::OmegaSubstitution => {
                omega_subtraction_value(params, f, tau, 2 * scheme.nodes, false)?
            }
            PvMethod::SymmetricExclusion => unreachable!(),
        };
        let delta = (refined - value).norm();
        if delta > scheme.tolerance {
            return Err(ArcError::PvNotConverged {
                delta,
                tol: scheme.tolerance,
            });
        }
        return Ok(refined);
    }
    Ok(value)
}

/// H₁ of a sampled function; ω-domain samples are pulled back to θ.
pub fn hilbert_arc(
    params: &ArcParams,
    f: &GridFunction,
    tau: f64,
    scheme: &PvScheme,
) -> Result<Complex64> {
    match f.domain() {
        Domain::ThetaArc { .. } | Domain::Circle => hilbert_arc_fn(params, f, tau, scheme),
        Domain::Omega => {
            let g = |th: f64| f.eval(params.omega_from_theta(th, Sheet::Upper).unwrap());
            hilbert_arc_fn(params, &g, tau, scheme)
        }
    }
}

fn subtraction_value<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    tau: f64,
    nodes: usize,
) -> Complex64 {
    let (lo, hi) = params.arc_span();
    let phi = |th: f64| f.at(th) * circle_diff_ratio(tau, th);
    pv_line_integral(&phi, tau, lo, hi, nodes) / (2.0 * std::f64::consts::PI)
}

fn exclusion_value<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    tau: f64,
    eps: f64,
    nodes: usize,
) -> Complex64 {
    let (lo, hi) = params.arc_span();
    let (gx, gw) = gauss_legendre(nodes);
    let kernel =
        |th: f64| f.at(th) / (Complex64::from_polar(1.0, tau) - Complex64::from_polar(1.0, th));
    let mut acc = Complex64::new(0.0, 0.0);
    for (d_in, d_out) in graded_distances(eps, tau - lo) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            acc += kernel(tau - (c + h * x)) * (h * w);
        }
    }
    for (d_in, d_out) in graded_distances(eps, hi - tau) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            acc += kernel(tau + (c + h * x)) * (h * w);
        }
    }
    acc / (2.0 * std::f64::consts::PI)
}

/// Shared ω-domain core: with s = ω(τ) and H(t) = h(e^{it}),
///   H₁(g)(τ)      = (1/2π) PV ∫₀^π g(θ(t)) / (H(s) − H(t)) · dθ/dt dt,
/// and since dθ/dt = 1/w_α(θ(t)), the weighted transform H₂(f) = H₁(f·w_α)
/// absorbs the Jacobian exactly:
///   H₂(f)(τ)      = (1/2π) PV ∫₀^π f(θ(t)) / (H(s) − H(t)) dt.
/// `weighted` selects which of the two integrands is used.
fn omega_subtraction_value<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    tau: f64,
    nodes: usize,
    weighted: bool,
) -> Result<Complex64> {
    let s = params.omega_from_theta(tau, Sheet::Upper)?;
    let deriv = disk_map_circle_deriv(params, s)?;
    let pole_ratio = |t: f64| -> Complex64 {
        // (s−t)/(H(s)−H(t)) via the factorization; x/sin extends the diagonal
        let b = params.beta();
        let vs = Complex64::from_polar(1.0, s);
        let vt = Complex64::from_polar(1.0, t);
        let pi_prod = (vs + b) * (vt + b) * (vs + 1.0 / b) * (vt + 1.0 / b);
        let half = 0.5 * (t - s);
        Complex64::new(-2.0 * x_over_sin(half), 0.0) * pi_prod
            / (8.0 * (b + 1.0 / b) * Complex64::from_polar(1.0, s + t) * (0.5 * (t + s)).sin())
    };
    // 1/w_α(θ(t)) = 2 sin²(θ/2) sin t / tan(α/2): smooth in t and free of
    // the endpoint-band guard of weight() as t → 0, π
    let half_alpha_tan = (0.5 * params.alpha()).tan();
    let phi = |t: f64| -> Complex64 {
        let th = params.theta_from_omega(t).expect("interior omega");
        let base = f.at(th) * pole_ratio(t);
        if weighted {
            base
        } else {
            base * (2.0 * (0.5 * th).sin().powi(2) * t.sin() / half_alpha_tan)
        }
    };
    let value = pv_line_integral(&phi, s, 0.0, std::f64::consts::PI, nodes);
    // confirm the pole normalization against the analytic derivative: the
    // subtracted value near s must equal f/(H′(s)·w) (or f/H′ when weighted)
    debug_assert!({
        let direct = if weighted {
            f.at(tau) / deriv
        } else {
            f.at(tau) / (deriv * params.weight(tau).unwrap())
        };
        let probe = if s < 0.5 * std::f64::consts::PI {
            s + 1e-7
        } else {
            s - 1e-7
        };
        (phi(probe) - direct).norm() < 1e-3 * (1.0 + direct.norm())
    });
    Ok(value / (2.0 * std::f64::consts::PI))
}

/// H₂(f)(e^{iτ}) = H₁(f·w_α)(e^{iτ}), computed in the ω domain where the
/// Jacobian cancels the weight. The subtraction and ω-substitution methods
/// coincide here by construction; symmetric exclusion excludes an ε-window
/// in ω and extrapolates, as for H₁.
pub fn hilbert_arc_weighted_fn<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    tau: f64,
    scheme: &PvScheme,
) -> Result<Complex64> {
    check_tau_interior(params, tau)?;
    scheme.validate(std::f64::consts::PI)?;
    match scheme.method {
        PvMethod::SingularitySubtraction | PvMethod::OmegaSubstitution => {
            let value = omega_subtraction_value(params, f, tau, scheme.nodes, true)?;
            if scheme.check_refinement {
                let refined = omega_subtraction_value(params, f, tau, 2 * scheme.nodes, true)?;
                let delta = (refined - value).norm();
                if delta > scheme.tolerance {
                    return Err(ArcError::PvNotConverged {
                        delta,
                        tol: scheme.tolerance,
                    });
                }
                return Ok(refined);
            }
            Ok(value)
        }
        PvMethod::SymmetricExclusion => {
            let s = params.omega_from_theta(tau, Sheet::Upper)?;
            let span_guard = 0.25 * s.min(std::f64::consts::PI - s);
            let eps = scheme.epsilon.min(span_guard);
            let i1 = weighted_exclusion_value(params, f, s, eps, scheme.nodes);
            let i2 = weighted_exclusion_value(params, f, s, 0.5 * eps, scheme.nodes);
            let first = 2.0 * i2 - i1;
            if scheme.check_refinement {
                let i3 = weighted_exclusion_value(params, f, s, 0.25 * eps, scheme.nodes);
                let second = 2.0 * i3 - i2;
                let delta = (second - first).norm();
                if delta > scheme.tolerance {
                    return Err(ArcError::PvNotConverged {
                        delta,
                        tol: scheme.tolerance,
                    });
                }
                return Ok(second);
            }
            Ok(first)
        }
    }
}

pub fn hilbert_arc_weighted(
    params: &ArcParams,
    f: &GridFunction,
    tau: f64,
    scheme: &PvScheme,
) -> Result<Complex64> {
    match f.domain() {
        Domain::ThetaArc { .. } | Domain::Circle => hilbert_arc_weighted_fn(params, f, tau, scheme),
        Domain::Omega => {
            let g = |th: f64| f.eval(params.omega_from_theta(th, Sheet::Upper).unwrap());
            hilbert_arc_weighted_fn(params, &g, tau, scheme)
        }
    }
}

fn weighted_exclusion_value<F: ArcEval + ?Sized>(
    params: &ArcParams,
    f: &F,
    s: f64,
    eps: f64,
    nodes: usize,
) -> Complex64 {
    let (gx, gw) = gauss_legendre(nodes);
    let integrand = |t: f64| -> Complex64 {
        let th = params.theta_from_omega(t).expect("interior omega");
        f.at(th) / disk_map_circle_diff(params, s, t)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (d_in, d_out) in graded_distances(eps, s) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            acc += integrand(s - (c + h * x)) * (h * w);
        }
    }
    for (d_in, d_out) in graded_distances(eps, std::f64::consts::PI - s) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&x, &w) in gx.iter().zip(&gw) {
            acc += integrand(s + (c + h * x)) * (h * w);
        }
    }
    acc / (2.0 * std::f64::consts::PI)
}

/// Harmonic conjugate on the circle by the trigonometric multiplier
/// c_k ↦ −i·sgn(k)·c_k (k = 0 and the Nyquist mode are annihilated).
pub fn conjugate_fft(f: &GridFunction) -> Result<GridFunction> {
    let n = f.len();
    if f.domain() != Domain::Circle || !f.is_uniform_circle() || n & (n - 1) != 0 {
        return Err(ArcError::Grid(
            "conjugate needs a uniform circle grid with power-of-two length".into(),
        ));
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let mut buf: Vec<Complex64> = f.values().to_vec();
    fwd.process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        // frequencies: k < n/2 ↦ +k, k > n/2 ↦ k − n, k = n/2 is Nyquist
        let sign = if k == 0 || k == n / 2 {
            0.0
        } else if k < n / 2 {
            1.0
        } else {
            -1.0
        };
        *c *= Complex64::new(0.0, -sign);
    }
    let inv = planner.plan_fft_inverse(n);
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    let values: Vec<Complex64> = buf.into_iter().map(|v| v * scale).collect();
    GridFunction::circle_values(f.nodes().to_vec(), values)
}

/// Harmonic conjugate by the odd-offset PV quadrature
/// f̃(x_j) = (2/N) Σ_{(j−k) odd} f(t_k) · cot((x_j − t_k)/2);
/// the effective node spacing doubles because only odd offsets are sampled.
/// Algebraically identical to the multiplier path on every sample vector
/// (checked in tests), but O(N²).
pub fn conjugate_pv(f: &GridFunction) -> Result<GridFunction> {
    let n = f.len();
    if f.domain() != Domain::Circle || !f.is_uniform_circle() || !n.is_multiple_of(2) {
        return Err(ArcError::Grid(
            "conjugate needs a uniform circle grid of even length".into(),
        ));
    }
    let nodes = f.nodes();
    let vals = f.values();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            if (j + k) % 2 == 1 {
                acc += vals[k] * (0.5 * (nodes[j] - nodes[k])).tan().recip();
            }
        }
        out.push(acc * 2.0 / n as f64);
    }
    GridFunction::circle_values(nodes.to_vec(), out)
}

/// Multiplier-path conjugate, cross-checked against the PV quadrature;
/// returns the conjugate and the maximum pointwise disagreement.
pub fn circle_conjugate(f: &GridFunction) -> Result<(GridFunction, f64)> {
    let fast = conjugate_fft(f)?;
    let slow = conjugate_pv(f)?;
    let disagreement = fast
        .values()
        .iter()
        .zip(slow.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    Ok((fast, disagreement))
}

/// Conjugate of an even 2π-periodic function by folding the circle integral
/// onto (0, π): f̃(x) = (1/2π) PV ∫₀^π f(t)[cot((x−t)/2) + cot((x+t)/2)] dt.
pub fn even_conjugate_reduction(
    f: &dyn Fn(f64) -> Complex64,
    x: f64,
    panel_nodes: usize,
) -> Complex64 {
    let pi = std::f64::consts::PI;
    // singular half: cot((x−t)/2) = 2/(x−t) · [(x−t)/2·cot((x−t)/2)]
    let phi = |t: f64| {
        let half = 0.5 * (x - t);
        let smooth = if half.abs() < 1e-8 {
            1.0 - half * half / 3.0
        } else {
            half / half.tan()
        };
        f(t) * smooth
    };
    let singular = 2.0 * pv_line_integral(&phi, x, 0.0, pi, panel_nodes);
    // regular half: pole of cot((x+t)/2) sits at x+t = 2π, outside for
    // interior x; grade toward t = π anyway
    let (gx, gw) = gauss_legendre(panel_nodes);
    let mut regular = Complex64::new(0.0, 0.0);
    for (d_in, d_out) in graded_distances(1e-12 * (pi - x).min(x), pi) {
        let c = 0.5 * (d_in + d_out);
        let h = 0.5 * (d_out - d_in);
        for (&u, &w) in gx.iter().zip(&gw) {
            let t = pi - (c + h * u);
            regular += f(t) * (0.5 * (x + t)).tan().recip() * (h * w);
        }
    }
    (singular + regular) / (2.0 * pi)
}

/// ‖H₁ f‖_{p,w_α} / ‖f‖_{p,w_α} with the transform evaluated at the θ-nodes
/// of `rule`.
pub fn riesz_ratio_with_rule(
    params: &ArcParams,
    f: &GridFunction,
    p: f64,
    scheme: &PvScheme,
    rule: &QuadratureRule,
) -> Result<f64> {
    let measure = MeasureSpec::base(*params);
    let f_norm = crate::measure::lp_norm_weighted_with_rule(f, p, &measure, rule)?;
    if f_norm == 0.0 {
        return Err(ArcError::ZeroNorm(0));
    }
    let transformed: Vec<Complex64> = rule
        .theta()
        .iter()
        .map(|&tau| hilbert_arc(params, f, tau, scheme))
        .collect::<Result<_>>()?;
    let h_norm = lp_norm_fn(
        &GridSamples {
            rule,
            values: &transformed,
        },
        p,
        &measure,
        rule,
    )?;
    Ok(h_norm / f_norm)
}

/// Values pre-computed at exactly the rule's θ-nodes; `at` only ever gets
/// called with those nodes, in order.
struct GridSamples<'a> {
    rule: &'a QuadratureRule,
    values: &'a [Complex64],
}

impl ArcEval for GridSamples<'_> {
    fn at(&self, x: f64) -> Complex64 {
        // nodes are strictly increasing: binary-search the exact θ
        let idx = self
            .rule
            .theta()
            .partition_point(|&t| t < x)
            .min(self.values.len() - 1);
        self.values[idx]
    }
}

pub fn riesz_ratio(params: &ArcParams, f: &GridFunction, p: f64) -> Result<f64> {
    let rule = QuadratureRule::gauss(params, 256)?;
    riesz_ratio_with_rule(params, f, p, &PvScheme::default(), &rule)
}
