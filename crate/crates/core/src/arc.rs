//! Geometry of the arc Δ_α = {e^{iθ} : α < θ < 2π − α} and the associated
//! conformal machinery: the endpoint-singular weight w_α, the disk map h,
//! the two-sheeted uniformizing angle ω, the on-arc phase angle λ, and the
//! inverse-Joukowski-type map χ used to evaluate the polynomial basis off
//! the arc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ArcError, Result};

/// Admissible α stay this far away from 0 and π.
pub const ALPHA_MARGIN: f64 = 1e-6;

/// Half-width of the exclusion band around the arc endpoints; the weight and
/// the branch selector refuse to evaluate inside it.
pub const ENDPOINT_BAND: f64 = 1e-10;

/// Branch of the map χ: `Outer` is the root with |χ| > 1 off the closed
/// unit disk slit along the arc, `Inner` the one with |χ| < 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Outer,
    Inner,
}

/// Sheet of the angle ω: `Upper` maps the arc to (0, π), `Lower` to (π, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Upper,
    Lower,
}

#[derive(Serialize, Deserialize)]
struct ArcParamsRepr {
    alpha: f64,
    beta_im: f64,
    gamma: f64,
    big_k: f64,
}

/// Derived constants for one arc half-gap α. β = i·tan((π−α)/4) is purely
/// imaginary, γ = cos(α/2), and K normalizes the polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcParamsRepr", into = "ArcParamsRepr")]
pub struct ArcParams {
    alpha: f64,
    beta_im: f64,
    gamma: f64,
    big_k: f64,
}

impl From<ArcParams> for ArcParamsRepr {
    fn from(p: ArcParams) -> Self {
        ArcParamsRepr {
            alpha: p.alpha,
            beta_im: p.beta_im,
            gamma: p.gamma,
            big_k: p.big_k,
        }
    }
}

impl TryFrom<ArcParamsRepr> for ArcParams {
    type Error = String;

    fn try_from(r: ArcParamsRepr) -> std::result::Result<Self, String> {
        let p = ArcParams::new(r.alpha).map_err(|e| e.to_string())?;
        let ok = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        if !(ok(p.beta_im, r.beta_im) && ok(p.gamma, r.gamma) && ok(p.big_k, r.big_k)) {
            return Err(format!(
                "derived fields inconsistent with alpha = {}: expected beta_im = {}, gamma = {}, big_k = {}",
                r.alpha, p.beta_im, p.gamma, p.big_k
            ));
        }
        Ok(p)
    }
}

impl ArcParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite()
            || alpha <= ALPHA_MARGIN
            || alpha >= std::f64::consts::PI - ALPHA_MARGIN
        {
            return Err(ArcError::AlphaOutOfRange(alpha));
        }
        let half = 0.5 * alpha;
        let sin_half = half.sin();
        Ok(ArcParams {
            alpha,
            beta_im: ((std::f64::consts::PI - alpha) / 4.0).tan(),
            gamma: half.cos(),
            big_k: (2.0 * sin_half / (1.0 + sin_half)).sqrt(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// β as a complex number (purely imaginary, Im β ∈ (0, 1)).
    pub fn beta(&self) -> Complex64 {
        Complex64::new(0.0, self.beta_im)
    }

    pub fn beta_im(&self) -> f64 {
        self.beta_im
    }

    /// γ = cos(α/2).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Normalization constant K = √(2 sin(α/2) / (1 + sin(α/2))).
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// The open angular span (α, 2π − α) of the arc.
    pub fn arc_span(&self) -> (f64, f64) {
        (self.alpha, 2.0 * std::f64::consts::PI - self.alpha)
    }

    /// Arc endpoints e^{iα} and e^{−iα}.
    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(1.0, self.alpha),
            Complex64::from_polar(1.0, -self.alpha),
        )
    }

    pub fn contains_theta(&self, theta: f64) -> bool {
        let (lo, hi) = self.arc_span();
        theta > lo && theta < hi
    }

    fn check_theta_open(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.arc_span();
        if !(theta > lo && theta < hi) {
            return Err(ArcError::ThetaOutsideArc { theta, lo, hi });
        }
        Ok(())
    }

    /// The weight w_α(θ) = sin(α/2) / (2 sin(θ/2) √(cos²(α/2) − cos²(θ/2))),
    /// normalized so that (1/2π) ∫ w_α dθ = 1/2. Integrable endpoint
    /// singularities; evaluation refuses the band within
    /// [`ENDPOINT_BAND`] of either endpoint.
    pub fn weight(&self, theta: f64) -> Result<f64> {
        self.check_theta_open(theta)?;
        let (lo, hi) = self.arc_span();
        let dist = (theta - lo).min(hi - theta);
        if dist < ENDPOINT_BAND {
            return Err(ArcError::EndpointBand(theta, ENDPOINT_BAND));
        }
        // cos²(α/2) − cos²(θ/2) = sin((θ−α)/2)·sin((θ+α)/2), exact near the
        // endpoints where the squared cosines cancel catastrophically.
        let prod = (0.5 * (theta - self.alpha)).sin() * (0.5 * (theta + self.alpha)).sin();
        Ok((0.5 * self.alpha).sin() / (2.0 * (0.5 * theta).sin() * prod.sqrt()))
    }

    /// √(cos²(α/2) − cos²(θ/2)), the factor that damps errors near the
    /// endpoints in weighted convergence statements. Defined on the closed
    /// arc (zero at the endpoints).
    pub fn endpoint_damping(&self, theta: f64) -> Result<f64> {
        let (lo, hi) = self.arc_span();
        if theta < lo - 1e-12 || theta > hi + 1e-12 {
            return Err(ArcError::ThetaOutsideArc { theta, lo, hi });
        }
        let prod = (0.5 * (theta - self.alpha)).sin() * (0.5 * (theta + self.alpha)).sin();
        Ok(prod.max(0.0).sqrt())
    }

    /// The degree-two rational map h(v) = (v−β)(βv−1) / ((v+β)(βv+1)).
    /// Symmetric under v ↦ 1/v, takes the unit circle onto the arc.
    pub fn disk_map(&self, v: Complex64) -> Result<Complex64> {
        let b = self.beta();
        let d1 = v + b;
        let d2 = b * v + Complex64::new(1.0, 0.0);
        let scale = 1.0 + v.norm();
        if d1.norm() < 1e-13 * scale || d2.norm() < 1e-13 * scale {
            return Err(ArcError::DiskMapPole(v));
        }
        Ok((v - b) * (b * v - Complex64::new(1.0, 0.0)) / (d1 * d2))
    }

    /// Derivative h'(v) of the disk map.
    pub fn disk_map_deriv(&self, v: Complex64) -> Result<Complex64> {
        let b = self.beta();
        let one = Complex64::new(1.0, 0.0);
        let d1 = v + b;
        let d2 = b * v + one;
        let scale = 1.0 + v.norm();
        if d1.norm() < 1e-13 * scale || d2.norm() < 1e-13 * scale {
            return Err(ArcError::DiskMapPole(v));
        }
        let bb = b * b;
        let num = (v - b) * (b * v - one);
        let num_d = 2.0 * b * v - (one + bb);
        let den = d1 * d2;
        let den_d = 2.0 * b * v + (one + bb);
        Ok((num_d * den - num * den_d) / (den * den))
    }

    /// χ(z): the branch of (z + 1 ± √(z² − 2z cos α + 1)) / (2γ) selected by
    /// `branch`. The two branches satisfy χ₊·χ₋ = z and χ₊ + χ₋ = (z+1)/γ.
    /// At the arc endpoints the roots are confluent and the double root
    /// (z+1)/(2γ) is returned for either branch. Off the closed arc the
    /// selection is by modulus; in the thin band where the moduli coincide
    /// the branch is resolved by a short continuity walk (radially outward
    /// for |z| ≥ 1, toward 0 otherwise). Points strictly inside the arc are
    /// rejected: the map is two-valued there.
    pub fn uniformizer(&self, z: Complex64, branch: Branch) -> Result<Complex64> {
        let outer = self.chi_outer(z)?;
        Ok(match branch {
            Branch::Outer => outer,
            // χ₊ χ₋ = z keeps the inner branch stable when |χ₊| is large.
            Branch::Inner => z / outer,
        })
    }

    fn chi_candidates(&self, z: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let v = z * z - 2.0 * self.alpha.cos() * z + one;
        let s = v.sqrt();
        let c1 = (z + one + s) / (2.0 * self.gamma);
        let c2 = (z + one - s) / (2.0 * self.gamma);
        (c1, c2)
    }

    fn chi_outer(&self, z: Complex64) -> Result<Complex64> {
        let (c1, c2) = self.chi_candidates(z);
        // Confluent roots (arc endpoints): both branches collapse to the
        // double root, so there is nothing to select.
        if (c1 - c2).norm() <= 1e-7 * (c1.norm() + c2.norm()) {
            return Ok((z + 1.0) / (2.0 * self.gamma));
        }
        let (m1, m2) = (c1.norm(), c2.norm());
        if (m1 - m2).abs() > 1e-9 * (m1 + m2 + 1e-300) {
            return Ok(if m1 > m2 { c1 } else { c2 });
        }
        // On the arc proper the two branches have equal modulus and genuinely
        // distinct values: two-valued, reject.
        if ((z.norm() - 1.0).abs()) <= 1e-12 {
            let mut th = z.arg();
            if th <= 0.0 {
                th += 2.0 * std::f64::consts::PI;
            }
            let (lo, hi) = self.arc_span();
            if th >= lo - ENDPOINT_BAND && th <= hi + ENDPOINT_BAND {
                return Err(ArcError::BranchAmbiguous(z));
            }
        }
        // Moduli coincide off the arc: walk in from an unambiguous anchor,
        // tracking the outer branch by continuity.
        let r = z.norm();
        let (anchor, steps) = if r >= 1.0 {
            (z * (2.0 / r.max(1.0)).max(2.0), 28)
        } else {
            (z * 1e-3, 28)
        };
        let mut prev = {
            let (a1, a2) = self.chi_candidates(anchor);
            if a1.norm() > a2.norm() {
                a1
            } else {
                a2
            }
        };
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            // geometric interpolation of the scale factor from anchor to z
            let p = anchor * ((z / anchor).powf(t));
            let (c1, c2) = self.chi_candidates(p);
            prev = if (c1 - prev).norm() <= (c2 - prev).norm() {
                c1
            } else {
                c2
            };
        }
        if !prev.is_finite() {
            return Err(ArcError::BranchAmbiguous(z));
        }
        Ok(prev)
    }

    /// On-arc phase angle λ(θ) ∈ [0, π] with cos λ = cos(θ/2)/cos(α/2).
    /// Defined on the closed arc; λ(α) = 0, λ(2π−α) = π.
    pub fn lambda_angle(&self, theta: f64) -> Result<f64> {
        let (lo, hi) = self.arc_span();
        if theta < lo - 1e-12 || theta > hi + 1e-12 {
            return Err(ArcError::ThetaOutsideArc { theta, lo, hi });
        }
        let ratio = ((0.5 * theta).cos() / self.gamma).clamp(-1.0, 1.0);
        Ok(ratio.acos())
    }

    /// The uniformizing angle ω(θ) with cos ω = tan(α/2)·cot(θ/2); the
    /// `Upper` sheet lands in (0, π) and satisfies dω/dθ = w_α(θ), the
    /// `Lower` sheet is its reflection 2π − ω. Evaluated with
    /// cot = cos/sin so θ = π is regular (ω(π) = π/2).
    pub fn omega_from_theta(&self, theta: f64, sheet: Sheet) -> Result<f64> {
        self.check_theta_open(theta)?;
        let half = 0.5 * self.alpha;
        let c = (half.sin() * (0.5 * theta).cos()) / (half.cos() * (0.5 * theta).sin());
        let omega = c.clamp(-1.0, 1.0).acos();
        Ok(match sheet {
            Sheet::Upper => omega,
            Sheet::Lower => 2.0 * std::f64::consts::PI - omega,
        })
    }

    /// Inverse of [`ArcParams::omega_from_theta`] on the upper sheet:
    /// θ(ω) = arg h(e^{iω}) for ω ∈ [0, π], with θ(0) = α, θ(π) = 2π − α.
    pub fn theta_from_omega(&self, omega: f64) -> Result<f64> {
        if !(-1e-12..=std::f64::consts::PI + 1e-12).contains(&omega) {
            return Err(ArcError::OmegaOutOfRange(omega));
        }
        let om = omega.clamp(0.0, std::f64::consts::PI);
        let z = self.disk_map(Complex64::from_polar(1.0, om))?;
        let mut th = z.arg();
        if th <= 0.0 {
            th += 2.0 * std::f64::consts::PI;
        }
        let (lo, hi) = self.arc_span();
        Ok(th.clamp(lo, hi))
    }
}
