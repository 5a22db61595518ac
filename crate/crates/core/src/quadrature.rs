//! Quadrature in the ω variable. The substitution θ ↦ ω(θ) absorbs the
//! weight: ∫ f(θ) w_α(θ) dθ = ∫₀^π f(θ(ω)) dω, and the transformed
//! integrand is endpoint-regular. Rules come in two flavors: a plain
//! Gauss–Legendre rule on (0, π), and a composite rule whose panels are
//! split until the basis phase n·(Δθ + Δλ) fits the per-panel node budget
//! and are dyadically graded toward declared singular points.

use num_complex::Complex64;

use crate::arc::{ArcParams, Sheet};
use crate::error::{ArcError, Result};
use crate::grid::ArcEval;

/// Default node count for the plain rule.
pub const DEFAULT_NODES: usize = 512;

/// Nodes per panel in composite rules.
const PANEL_NODES: usize = 24;

/// A panel of `PANEL_NODES` Gauss–Legendre points resolves this much
/// oscillation phase (radians) with headroom; found empirically, with the
/// Gram defect of the degree-256 basis as the acceptance signal.
const PHASE_BUDGET: f64 = 0.9 * PANEL_NODES as f64;

/// Relative scale of the innermost graded panel around a singular point.
const GRADING_FLOOR: f64 = 1e-11;

/// Gauss–Legendre nodes and weights on (−1, 1), by Newton iteration on the
/// three-term recurrence. Accurate to ~1e-15 for the sizes used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let pk = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = pk;
            }
            dp = nf * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    params: ArcParams,
    panels: Vec<(f64, f64)>,
    per_panel: usize,
    omega: Vec<f64>,
    weight: Vec<f64>,
    theta: Vec<f64>,
}

impl QuadratureRule {
    /// Plain Gauss–Legendre rule with `n` nodes on (0, π).
    pub fn gauss(params: &ArcParams, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(ArcError::TooFewNodes(n));
        }
        Self::from_panels(params, vec![(0.0, std::f64::consts::PI)], n)
    }

    /// Composite rule resolving integrands that oscillate like the basis at
    /// `max_degree` (pass the highest total degree occurring in the
    /// integrand, e.g. 2n for inner products of degree-n polynomials).
    /// Panel edges are forced at the ω-images of `breaks_theta`, and panels
    /// are dyadically graded toward the ω-images of `singular_theta`.
    pub fn resolved(
        params: &ArcParams,
        max_degree: usize,
        breaks_theta: &[f64],
        singular_theta: &[f64],
    ) -> Result<Self> {
        let pi = std::f64::consts::PI;
        let mut edges = vec![0.0, pi];
        let to_omega = |th: f64| -> Result<f64> { params.omega_from_theta(th, Sheet::Upper) };
        for &th in breaks_theta {
            edges.push(to_omega(th)?);
        }
        let mut singular_omega = Vec::new();
        for &th in singular_theta {
            let om = to_omega(th)?;
            singular_omega.push(om);
            edges.push(om);
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

        let mut panels = Vec::new();
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            // grade toward a singular point sitting at either edge
            let at_lo = singular_omega.iter().any(|&s| (s - lo).abs() < 1e-13);
            let at_hi = singular_omega.iter().any(|&s| (s - hi).abs() < 1e-13);
            match (at_lo, at_hi) {
                (true, _) => grade_panels(lo, hi, true, &mut panels),
                (_, true) => grade_panels(lo, hi, false, &mut panels),
                _ => panels.push((lo, hi)),
            }
        }
        // split until the basis phase fits the budget
        let deg = max_degree.max(1) as f64;
        let mut resolved = Vec::new();
        let mut stack = panels;
        while let Some((lo, hi)) = stack.pop() {
            if resolved.len() + stack.len() > 100_000 {
                return Err(ArcError::Grid("panel subdivision exploded".into()));
            }
            let th_lo = params.theta_from_omega(lo)?;
            let th_hi = params.theta_from_omega(hi)?;
            let phase = deg
                * ((th_hi - th_lo).abs()
                    + (params.lambda_angle(th_hi)? - params.lambda_angle(th_lo)?).abs());
            if phase > PHASE_BUDGET && hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                stack.push((lo, mid));
                stack.push((mid, hi));
            } else {
                resolved.push((lo, hi));
            }
        }
        resolved.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self::from_panels(params, resolved, PANEL_NODES)
    }

    fn from_panels(params: &ArcParams, panels: Vec<(f64, f64)>, per_panel: usize) -> Result<Self> {
        let (gx, gw) = gauss_legendre(per_panel);
        let mut omega = Vec::with_capacity(panels.len() * per_panel);
        let mut weight = Vec::with_capacity(panels.len() * per_panel);
        let mut theta = Vec::with_capacity(panels.len() * per_panel);
        for &(lo, hi) in &panels {
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            for (&x, &w) in gx.iter().zip(&gw) {
                let om = c + h * x;
                omega.push(om);
                weight.push(h * w);
                theta.push(params.theta_from_omega(om)?);
            }
        }
        Ok(QuadratureRule {
            params: *params,
            panels,
            per_panel,
            omega,
            weight,
            theta,
        })
    }

    pub fn params(&self) -> &ArcParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Nodes in the ω variable.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Weights paired with the ω nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    /// Paired θ_j = arg h(e^{iω_j}) nodes on the arc.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// ∫₀^π g(ω) dω.
    pub fn integrate_omega(&self, mut g: impl FnMut(f64) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&om, &w) in self.omega.iter().zip(&self.weight) {
            acc += g(om) * w;
        }
        acc
    }

    /// ∫ f(θ) w_α(θ) dθ over the arc, computed as ∫₀^π f(θ(ω)) dω.
    /// With f ≡ 1 this is π (the weight has mass 1/2 under 1/2π).
    pub fn integrate_arc<F: ArcEval + ?Sized>(&self, f: &F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&th, &w) in self.theta.iter().zip(&self.weight) {
            acc += f.at(th) * w;
        }
        acc
    }

    /// Weighted sum over precomputed samples at the rule's θ nodes.
    pub fn integrate_values(&self, vals: &[Complex64]) -> Complex64 {
        debug_assert_eq!(vals.len(), self.weight.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, &w) in vals.iter().zip(&self.weight) {
            acc += v * w;
        }
        acc
    }

    /// (1/2π) ∫ f conj(g) w_α dθ.
    pub fn inner_product<F: ArcEval + ?Sized, G: ArcEval + ?Sized>(
        &self,
        f: &F,
        g: &G,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&th, &w) in self.theta.iter().zip(&self.weight) {
            acc += f.at(th) * g.at(th).conj() * w;
        }
        acc / (2.0 * std::f64::consts::PI)
    }

    /// The same rule with every panel bisected (doubles the node count);
    /// used for refinement checks.
    pub fn refine(&self) -> Result<Self> {
        let mut panels = Vec::with_capacity(2 * self.panels.len());
        for &(lo, hi) in &self.panels {
            let mid = 0.5 * (lo + hi);
            panels.push((lo, mid));
            panels.push((mid, hi));
        }
        Self::from_panels(&self.params, panels, self.per_panel)
    }
}

fn grade_panels(lo: f64, hi: f64, toward_lo: bool, out: &mut Vec<(f64, f64)>) {
    let span = hi - lo;
    if span <= 0.0 {
        return;
    }
    let mut scales = Vec::new();
    let mut s = 1.0;
    while s > GRADING_FLOOR {
        scales.push(s);
        s *= 0.5;
    }
    scales.push(s);
    // widths [s_{k+1}, s_k]·span stacked against the singular edge
    for k in 0..scales.len() {
        let outer = scales[k];
        let inner = if k + 1 < scales.len() {
            scales[k + 1]
        } else {
            0.0
        };
        if toward_lo {
            out.push((lo + inner * span, lo + outer * span));
        } else {
            out.push((hi - outer * span, hi - inner * span));
        }
    }
    if toward_lo {
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }
}
