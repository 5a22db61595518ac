//! Test-function catalogue shared by the convergence experiments and the
//! CLI: smooth data, an interior jump, an integrable power singularity,
//! endpoint bumps, and seeded random trigonometric polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arc::ArcParams;

/// A named input for partial-sum and transform experiments. All members
/// are bounded except [`TestFunction::InteriorSingular`], which lies in
/// L^p of the arc exactly for p < 5.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// exp(e^{iϑ}); entire in e^{iϑ}, so expansion errors collapse
    /// geometrically.
    Smooth,
    /// sign(ϑ − π).
    Jump,
    /// |ϑ − π|^{−1/5}.
    InteriorSingular,
    /// C^∞ bump occupying the fraction `width_frac` of the arc adjacent
    /// to one endpoint, peak value exp(−1) at the band centre.
    EndpointBump { left: bool, width_frac: f64 },
    /// Σ_k (cos_c[k]·cos kϑ + sin_c[k]·sin kϑ), complex coefficients.
    TrigPoly {
        cos_c: Vec<Complex64>,
        sin_c: Vec<Complex64>,
    },
}

impl TestFunction {
    pub fn eval(&self, params: &ArcParams, theta: f64) -> Complex64 {
        match self {
            TestFunction::Smooth => Complex64::from_polar(1.0, theta).exp(),
            TestFunction::Jump => Complex64::new(if theta >= PI { 1.0 } else { -1.0 }, 0.0),
            TestFunction::InteriorSingular => Complex64::new((theta - PI).abs().powf(-0.2), 0.0),
            TestFunction::EndpointBump { left, width_frac } => {
                let (lo, hi) = params.arc_span();
                let w = width_frac * (hi - lo);
                let c = if *left { lo + 0.5 * w } else { hi - 0.5 * w };
                let x = (theta - c) / (0.5 * w);
                if x.abs() >= 1.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((-1.0 / (1.0 - x * x)).exp(), 0.0)
                }
            }
            TestFunction::TrigPoly { cos_c, sin_c } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in cos_c.iter().enumerate() {
                    acc += c * (k as f64 * theta).cos();
                }
                for (k, s) in sin_c.iter().enumerate() {
                    acc += s * (k as f64 * theta).sin();
                }
                acc
            }
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            TestFunction::Smooth => "smooth",
            TestFunction::Jump => "jump",
            TestFunction::InteriorSingular => "cusp",
            TestFunction::EndpointBump { left: true, .. } => "bump-left",
            TestFunction::EndpointBump { left: false, .. } => "bump-right",
            TestFunction::TrigPoly { .. } => "trig",
        }
    }

    /// Canonical instance for each CLI id. "trig" is cos ϑ + sin(3ϑ)/2.
    pub fn from_id(id: &str) -> Option<TestFunction> {
        let zero = Complex64::new(0.0, 0.0);
        match id {
            "smooth" => Some(TestFunction::Smooth),
            "jump" => Some(TestFunction::Jump),
            "cusp" => Some(TestFunction::InteriorSingular),
            "bump-left" => Some(TestFunction::EndpointBump {
                left: true,
                width_frac: 0.25,
            }),
            "bump-right" => Some(TestFunction::EndpointBump {
                left: false,
                width_frac: 0.25,
            }),
            "trig" => Some(TestFunction::TrigPoly {
                cos_c: vec![zero, Complex64::new(1.0, 0.0)],
                sin_c: vec![zero, zero, zero, Complex64::new(0.5, 0.0)],
            }),
            _ => None,
        }
    }

    /// θ values where the function jumps or loses smoothness; quadrature
    /// panel edges should land here.
    pub fn breakpoints(&self, params: &ArcParams) -> Vec<f64> {
        match self {
            TestFunction::Jump => vec![PI],
            TestFunction::EndpointBump { left, width_frac } => {
                let (lo, hi) = params.arc_span();
                let w = width_frac * (hi - lo);
                if *left {
                    vec![lo + w]
                } else {
                    vec![hi - w]
                }
            }
            _ => Vec::new(),
        }
    }

    /// θ values where the function blows up; quadrature should grade
    /// toward these.
    pub fn singularities(&self) -> Vec<f64> {
        match self {
            TestFunction::InteriorSingular => vec![PI],
            _ => Vec::new(),
        }
    }

    /// Package as a plain evaluator capturing the arc parameters.
    pub fn into_fn(self, params: ArcParams) -> impl Fn(f64) -> Complex64 {
        move |theta| self.eval(&params, theta)
    }
}

/// Twenty-member family for the operator-norm sweeps: fourteen seeded
/// random trigonometric polynomials of degree at most 12 (coefficients
/// damped like 1/(1+k)), the five canonical shapes, and the analytic
/// product e^{iϑ}cos ϑ.
pub fn family20(seed: u64) -> Vec<(String, TestFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(20);
    for j in 0..14 {
        let deg = rng.gen_range(3usize..=12);
        let mut cos_c = Vec::with_capacity(deg + 1);
        let mut sin_c = Vec::with_capacity(deg + 1);
        for k in 0..=deg {
            let scale = 1.0 / (1.0 + k as f64);
            cos_c.push(Complex64::new(
                scale * rng.gen_range(-1.0..1.0),
                scale * rng.gen_range(-1.0..1.0),
            ));
            sin_c.push(Complex64::new(
                scale * rng.gen_range(-1.0..1.0),
                scale * rng.gen_range(-1.0..1.0),
            ));
        }
        out.push((
            format!("rand-trig-{j:02}"),
            TestFunction::TrigPoly { cos_c, sin_c },
        ));
    }
    for id in ["smooth", "jump", "cusp", "bump-left", "bump-right"] {
        out.push((id.to_string(), TestFunction::from_id(id).unwrap()));
    }
    // e^{iϑ}cos ϑ = 1/2 + (cos 2ϑ + i sin 2ϑ)/2
    out.push((
        "plane-wave".to_string(),
        TestFunction::TrigPoly {
            cos_c: vec![Complex64::new(0.5, 0.0), zero, Complex64::new(0.5, 0.0)],
            sin_c: vec![zero, zero, Complex64::new(0.0, 0.5)],
        },
    ));
    out
}
