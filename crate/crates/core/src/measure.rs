//! Measures on the arc: the base weight w_α and Lipschitz perturbations
//! k(θ)·w_α with k bounded below, plus weighted L^p norms evaluated in the
//! ω domain (where the endpoint singularities of w_α disappear).

use num_complex::Complex64;

use crate::arc::ArcParams;
use crate::error::{ArcError, Result};
use crate::grid::{ArcEval, Domain, GridFunction};
use crate::quadrature::QuadratureRule;

/// Smallest admissible exponent; quadrature conditioning degrades toward
/// p = 1 and the convergence statements need p > 1 anyway.
pub const MIN_EXPONENT: f64 = 1.05;

/// Sample count for validating a perturbation against its declared bounds.
const VALIDATION_SAMPLES: usize = 4096;

/// Built-in multiplier catalogue. The last entry is Lipschitz but not
/// differentiable at θ = π.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KFamily {
    One,
    Four,
    TwoPlusSin,
    TwoPlusAbsDev,
}

impl KFamily {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            KFamily::One => 1.0,
            KFamily::Four => 4.0,
            KFamily::TwoPlusSin => 2.0 + theta.sin(),
            KFamily::TwoPlusAbsDev => 2.0 + (theta - std::f64::consts::PI).abs(),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            KFamily::One => "one",
            KFamily::Four => "four",
            KFamily::TwoPlusSin => "two-plus-sin",
            KFamily::TwoPlusAbsDev => "two-plus-absdev",
        }
    }

    pub fn from_id(id: &str) -> Option<KFamily> {
        match id {
            "one" | "1" => Some(KFamily::One),
            "four" | "4" => Some(KFamily::Four),
            "two-plus-sin" | "sin" => Some(KFamily::TwoPlusSin),
            "two-plus-absdev" | "absdev" => Some(KFamily::TwoPlusAbsDev),
            _ => None,
        }
    }

    /// Exact lower bound of the multiplier on any arc.
    pub fn lower_bound(&self) -> f64 {
        match self {
            KFamily::One => 1.0,
            KFamily::Four => 4.0,
            KFamily::TwoPlusSin => 1.0,
            KFamily::TwoPlusAbsDev => 2.0,
        }
    }

    /// Exact Lipschitz constant on any arc.
    pub fn lipschitz(&self) -> f64 {
        match self {
            KFamily::One | KFamily::Four => 0.0,
            KFamily::TwoPlusSin | KFamily::TwoPlusAbsDev => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    Base,
    Perturbed {
        family: KFamily,
        k_lower: f64,
        lipschitz_const: f64,
    },
}

/// A positive measure k(θ)·w_α(θ)dθ on the arc. Construction validates the
/// declared bounds of a perturbation by sampling; the constants themselves
/// are caller-supplied, not inferred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    params: ArcParams,
    kind: MeasureKind,
}

impl MeasureSpec {
    pub fn base(params: ArcParams) -> Self {
        MeasureSpec {
            params,
            kind: MeasureKind::Base,
        }
    }

    pub fn perturbed(
        params: ArcParams,
        family: KFamily,
        k_lower: f64,
        lipschitz_const: f64,
    ) -> Result<Self> {
        if !(k_lower > 0.0) || !lipschitz_const.is_finite() || lipschitz_const < 0.0 {
            return Err(ArcError::WeightBelowLower {
                got: k_lower,
                declared: 0.0,
            });
        }
        let (lo, hi) = params.arc_span();
        let span = hi - lo;
        let n = VALIDATION_SAMPLES;
        let mut prev: Option<(f64, f64)> = None;
        for j in 0..n {
            let th = lo + span * (j as f64 + 0.5) / n as f64;
            let k = family.eval(th);
            if k < k_lower - 1e-9 {
                return Err(ArcError::WeightBelowLower {
                    got: k,
                    declared: k_lower,
                });
            }
            if let Some((th0, k0)) = prev {
                let quotient = (k - k0).abs() / (th - th0);
                if quotient > lipschitz_const * (1.0 + 1e-6) {
                    return Err(ArcError::LipschitzExceeded {
                        got: quotient,
                        declared: lipschitz_const,
                    });
                }
            }
            prev = Some((th, k));
        }
        Ok(MeasureSpec {
            params,
            kind: MeasureKind::Perturbed {
                family,
                k_lower,
                lipschitz_const,
            },
        })
    }

    /// Perturbed measure with the catalogue's exact constants.
    pub fn from_family(params: ArcParams, family: KFamily) -> Result<Self> {
        Self::perturbed(params, family, family.lower_bound(), family.lipschitz())
    }

    pub fn params(&self) -> &ArcParams {
        &self.params
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn is_perturbed(&self) -> bool {
        matches!(self.kind, MeasureKind::Perturbed { .. })
    }

    pub fn family(&self) -> Option<KFamily> {
        match self.kind {
            MeasureKind::Base => None,
            MeasureKind::Perturbed { family, .. } => Some(family),
        }
    }

    /// Lower bound k₀ of the multiplier (1 for the base measure).
    pub fn k_lower(&self) -> f64 {
        match self.kind {
            MeasureKind::Base => 1.0,
            MeasureKind::Perturbed { k_lower, .. } => k_lower,
        }
    }

    /// The multiplier k(θ); identically 1 for the base measure.
    pub fn multiplier(&self, theta: f64) -> f64 {
        match self.kind {
            MeasureKind::Base => 1.0,
            MeasureKind::Perturbed { family, .. } => family.eval(theta),
        }
    }
}

/// ‖f‖_{p,μ} = (∫ |f|^p dμ)^{1/p} with dμ = k·w_α dθ, under the plain
/// ∫ dθ convention (so f ≡ 1 against the base weight gives π^{1/p}).
/// Evaluated with the supplied rule in the ω domain.
pub fn lp_norm_fn<F: ArcEval + ?Sized>(
    f: &F,
    p: f64,
    measure: &MeasureSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    if !(p >= MIN_EXPONENT) || !p.is_finite() {
        return Err(ArcError::UnsupportedExponent(p));
    }
    let mut acc = 0.0;
    for (j, &w) in rule.weights().iter().enumerate() {
        let th = rule.theta()[j];
        let v = f.at(th);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(ArcError::NonFinite("sample value in lp norm"));
        }
        acc += v.norm().powf(p) * measure.multiplier(th) * w;
    }
    if !acc.is_finite() {
        return Err(ArcError::NonFinite("lp norm accumulator"));
    }
    Ok(acc.powf(1.0 / p))
}

/// Domain-aware norm of a sampled function: θ-arc and circle grids are
/// interpolated in θ, ω-interval grids in ω.
pub fn lp_norm_weighted(
    params: &ArcParams,
    f: &GridFunction,
    p: f64,
    measure: &MeasureSpec,
) -> Result<f64> {
    let rule = QuadratureRule::gauss(params, crate::quadrature::DEFAULT_NODES)?;
    lp_norm_weighted_with_rule(f, p, measure, &rule)
}

pub fn lp_norm_weighted_with_rule(
    f: &GridFunction,
    p: f64,
    measure: &MeasureSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    match f.domain() {
        Domain::ThetaArc { .. } | Domain::Circle => lp_norm_fn(f, p, measure, rule),
        Domain::Omega => {
            if !(p >= MIN_EXPONENT) || !p.is_finite() {
                return Err(ArcError::UnsupportedExponent(p));
            }
            let mut acc = 0.0;
            for (j, &w) in rule.weights().iter().enumerate() {
                let om = rule.omega()[j];
                let v = f.eval(om);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(ArcError::NonFinite("sample value in lp norm"));
                }
                acc += v.norm().powf(p) * measure.multiplier(rule.theta()[j]) * w;
            }
            Ok(acc.powf(1.0 / p))
        }
    }
}

/// Inner product ⟨f, g⟩ = (1/2π)∫ f·conj(g) dμ.
pub fn inner_product_weighted<F, G>(
    f: &F,
    g: &G,
    measure: &MeasureSpec,
    rule: &QuadratureRule,
) -> Complex64
where
    F: ArcEval + ?Sized,
    G: ArcEval + ?Sized,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &w) in rule.weights().iter().enumerate() {
        let th = rule.theta()[j];
        acc += f.at(th) * g.at(th).conj() * (measure.multiplier(th) * w);
    }
    acc / (2.0 * std::f64::consts::PI)
}
