//! Expansions in the arc basis: coefficients, partial sums (directly and
//! through the reproducing kernel, including a near/far split of the kernel
//! integral), L^p error curves, and operator-norm probes for the
//! partial-sum maps S_n.

use num_complex::Complex64;

use crate::error::{ArcError, Result};
use crate::grid::ArcEval;
use crate::measure::MIN_EXPONENT;
use crate::poly::PolySystem;
use crate::quadrature::QuadratureRule;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Angular half-width separating "near" from "far" in the kernel split:
/// 30% of the half-arc length.
pub fn default_split_width(sys: &PolySystem) -> f64 {
    0.3 * (std::f64::consts::PI - sys.params().alpha())
}

/// f expanded through degree `coeffs.len() − 1`:
/// c_j = (1/2π) ∫ f(ϑ) conj(ψ_j(ϑ)) w(ϑ) dϑ.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    sys: PolySystem,
    coeffs: Vec<Complex64>,
    quad_nodes: usize,
}

impl FourierExpansion {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Node count of the rule the coefficients were computed with.
    pub fn quad_nodes(&self) -> usize {
        self.quad_nodes
    }

    pub fn system(&self) -> &PolySystem {
        &self.sys
    }

    /// Σ_j |c_j|²; by Bessel this never exceeds (1/2π)∫|f|² w dθ.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// S_n f(θ) = Σ_{j≤n} c_j ψ_j(θ).
    pub fn partial_sum(&self, n: usize, theta: f64) -> Result<Complex64> {
        if n > self.degree() {
            return Err(ArcError::DegreeTooLarge(n, self.degree()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            acc += self.coeffs[j] * self.sys.psi_arc(j, theta)?;
        }
        Ok(acc)
    }

    /// S_n f sampled on a θ grid.
    pub fn partial_sum_values(&self, n: usize, thetas: &[f64]) -> Result<Vec<Complex64>> {
        if n > self.degree() {
            return Err(ArcError::DegreeTooLarge(n, self.degree()));
        }
        let psi = self.sys.psi_matrix(n, thetas)?;
        let mut out = vec![Complex64::new(0.0, 0.0); thetas.len()];
        for (j, row) in psi.iter().enumerate() {
            let c = self.coeffs[j];
            for (o, v) in out.iter_mut().zip(row) {
                *o += c * v;
            }
        }
        Ok(out)
    }
}

/// Coefficients of `f` through `degree`, by quadrature against the basis.
pub fn expand<F: ArcEval + ?Sized>(
    sys: &PolySystem,
    f: &F,
    degree: usize,
    rule: &QuadratureRule,
) -> Result<FourierExpansion> {
    if degree > sys.max_degree() {
        return Err(ArcError::DegreeTooLarge(degree, sys.max_degree()));
    }
    let thetas = rule.theta();
    let weights = rule.weights();
    let fvals: Vec<Complex64> = thetas.iter().map(|&th| f.at(th)).collect();
    let psi = sys.psi_matrix(degree, thetas)?;
    let mut coeffs = Vec::with_capacity(degree + 1);
    for row in &psi {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((fv, pv), &w) in fvals.iter().zip(row).zip(weights) {
            acc += fv * pv.conj() * w;
        }
        coeffs.push(acc / TWO_PI);
    }
    Ok(FourierExpansion {
        sys: *sys,
        coeffs,
        quad_nodes: rule.len(),
    })
}

/// Expansion plus the largest coefficient movement when every quadrature
/// panel is bisected; a well-resolved expansion moves by < 1e−8.
pub fn expand_with_check<F: ArcEval + ?Sized>(
    sys: &PolySystem,
    f: &F,
    degree: usize,
    rule: &QuadratureRule,
) -> Result<(FourierExpansion, f64)> {
    let coarse = expand(sys, f, degree, rule)?;
    let fine = expand(sys, f, degree, &rule.refine()?)?;
    let delta = coarse
        .coeffs
        .iter()
        .zip(&fine.coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    Ok((fine, delta))
}

/// S_n f(τ) through the kernel: (1/2π) ∫ f(ϑ) K_n(ϑ, τ) w(ϑ) dϑ with
/// K_n(ϑ, τ) = Σ_{j≤n} conj(ψ_j(ϑ)) ψ_j(τ).
pub fn partial_sum_kernel<F: ArcEval + ?Sized>(
    sys: &PolySystem,
    f: &F,
    n: usize,
    tau: f64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&th, &w) in rule.theta().iter().zip(rule.weights()) {
        acc += f.at(th) * sys.cd_kernel(n, th, tau)? * w;
    }
    Ok(acc / TWO_PI)
}

/// The kernel integral split at |ϑ − τ| = `width` (default
/// [`default_split_width`]); returns (near, far). Their sum is the kernel
/// partial sum on the same rule.
pub fn partial_sum_split<F: ArcEval + ?Sized>(
    sys: &PolySystem,
    f: &F,
    n: usize,
    tau: f64,
    rule: &QuadratureRule,
    width: Option<f64>,
) -> Result<(Complex64, Complex64)> {
    let delta = width.unwrap_or_else(|| default_split_width(sys));
    let mut near = Complex64::new(0.0, 0.0);
    let mut far = Complex64::new(0.0, 0.0);
    for (&th, &w) in rule.theta().iter().zip(rule.weights()) {
        let term = f.at(th) * sys.cd_kernel(n, th, tau)? * w;
        if (th - tau).abs() < delta {
            near += term;
        } else {
            far += term;
        }
    }
    Ok((near / TWO_PI, far / TWO_PI))
}

/// One point of an error curve: E_n = ∫ |f − S_n f|^p w dθ (the p-th power
/// of the plain L^p(w) norm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub degree: usize,
    pub error_pow_p: f64,
}

impl CurvePoint {
    pub fn error_lp(&self, p: f64) -> f64 {
        self.error_pow_p.powf(1.0 / p)
    }
}

/// E_n over the requested degrees (sorted, deduplicated). The rule must
/// resolve both the basis at max degree and any jumps of f; build it with
/// [`QuadratureRule::resolved`] passing f's break points.
pub fn convergence_curve<F: ArcEval + ?Sized>(
    sys: &PolySystem,
    f: &F,
    p: f64,
    degrees: &[usize],
    rule: &QuadratureRule,
) -> Result<Vec<CurvePoint>> {
    if !(p >= MIN_EXPONENT) {
        return Err(ArcError::UnsupportedExponent(p));
    }
    let mut degs: Vec<usize> = degrees.to_vec();
    degs.sort_unstable();
    degs.dedup();
    let top = *degs
        .last()
        .ok_or_else(|| ArcError::Grid("empty degree list".into()))?;
    let expansion = expand(sys, f, top, rule)?;
    let thetas = rule.theta();
    let weights = rule.weights();
    let fvals: Vec<Complex64> = thetas.iter().map(|&th| f.at(th)).collect();
    let psi = sys.psi_matrix(top, thetas)?;
    let mut running = vec![Complex64::new(0.0, 0.0); thetas.len()];
    let mut out = Vec::with_capacity(degs.len());
    let mut want = degs.iter().peekable();
    for (j, (&c, row)) in expansion.coeffs.iter().zip(&psi).enumerate() {
        for (r, v) in running.iter_mut().zip(row) {
            *r += c * v;
        }
        if want.peek() == Some(&&j) {
            want.next();
            let mut err = 0.0;
            for ((fv, s), &w) in fvals.iter().zip(&running).zip(weights) {
                err += (fv - s).norm().powf(p) * w;
            }
            if !err.is_finite() {
                return Err(ArcError::NonFinite("convergence curve accumulator"));
            }
            out.push(CurvePoint {
                degree: j,
                error_pow_p: err,
            });
        }
    }
    Ok(out)
}

/// Worst ratio ‖S_n f‖_p / ‖f‖_p over a family at one degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormProbe {
    pub degree: usize,
    pub max_ratio: f64,
    /// Index of the family member attaining the max.
    pub argmax: usize,
}

/// Probe the L^p operator norm of S_n over a function family: for each
/// degree, the largest ratio ‖S_n f‖_p / ‖f‖_p. Boundedness shows up as a
/// flat trend of `max_ratio` against n (fit the log-log slope and expect
/// it near zero); at p = 2 every ratio is ≤ 1 up to quadrature error.
pub fn operator_norm_probe(
    sys: &PolySystem,
    family: &[&dyn ArcEval],
    degrees: &[usize],
    p: f64,
    rule: &QuadratureRule,
) -> Result<Vec<NormProbe>> {
    if !(p >= MIN_EXPONENT) {
        return Err(ArcError::UnsupportedExponent(p));
    }
    let mut degs: Vec<usize> = degrees.to_vec();
    degs.sort_unstable();
    degs.dedup();
    let top = *degs
        .last()
        .ok_or_else(|| ArcError::Grid("empty degree list".into()))?;
    let thetas = rule.theta();
    let weights = rule.weights();
    let psi = sys.psi_matrix(top, thetas)?;
    let mut probes: Vec<NormProbe> = degs
        .iter()
        .map(|&d| NormProbe {
            degree: d,
            max_ratio: 0.0,
            argmax: 0,
        })
        .collect();
    for (i, f) in family.iter().enumerate() {
        let fvals: Vec<Complex64> = thetas.iter().map(|&th| f.at(th)).collect();
        let mut fnorm = 0.0;
        for (fv, &w) in fvals.iter().zip(weights) {
            fnorm += fv.norm().powf(p) * w;
        }
        fnorm = fnorm.powf(1.0 / p);
        if !(fnorm > 1e-300) {
            return Err(ArcError::ZeroNorm(i));
        }
        let expansion = expand(sys, *f, top, rule)?;
        let mut running = vec![Complex64::new(0.0, 0.0); thetas.len()];
        let mut slot = 0usize;
        for (j, (&c, row)) in expansion.coeffs.iter().zip(&psi).enumerate() {
            for (r, v) in running.iter_mut().zip(row) {
                *r += c * v;
            }
            if slot < degs.len() && degs[slot] == j {
                let mut snorm = 0.0;
                for (s, &w) in running.iter().zip(weights) {
                    snorm += s.norm().powf(p) * w;
                }
                let ratio = snorm.powf(1.0 / p) / fnorm;
                if !ratio.is_finite() {
                    return Err(ArcError::NonFinite("operator norm probe"));
                }
                if ratio > probes[slot].max_ratio {
                    probes[slot].max_ratio = ratio;
                    probes[slot].argmax = i;
                }
                slot += 1;
            }
        }
    }
    Ok(probes)
}

/// Least-squares slope of ln y against ln x. All inputs must be positive.
pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::ArcParams;
    use std::f64::consts::PI;

    fn setup(alpha: f64, nodes: usize) -> (PolySystem, QuadratureRule) {
        let params = ArcParams::new(alpha).unwrap();
        let sys = PolySystem::new(params, 300);
        let rule = QuadratureRule::gauss(&params, nodes).unwrap();
        (sys, rule)
    }

    fn smooth(th: f64) -> Complex64 {
        Complex64::from_polar(1.0, th).exp()
    }

    #[test]
    fn basis_members_have_kronecker_coefficients() {
        let (sys, rule) = setup(PI / 2.0, 512);
        for m in [0usize, 3, 11] {
            let f = |th: f64| sys.psi_arc(m, th).unwrap();
            let e = expand(&sys, &f, 15, &rule).unwrap();
            for (j, c) in e.coeffs().iter().enumerate() {
                let expect = if j == m { 1.0 } else { 0.0 };
                assert!((c - expect).norm() < 1e-10, "m = {m}, j = {j}: {c}");
            }
        }
    }

    #[test]
    fn constant_projects_onto_degree_zero() {
        let (sys, rule) = setup(2.5, 512);
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let e = expand(&sys, &one, 10, &rule).unwrap();
        assert!((e.coeff(0) - 0.5f64.sqrt()).norm() < 1e-12);
        for j in 1..=10 {
            assert!(e.coeff(j).norm() < 1e-10, "j = {j}: {}", e.coeff(j));
        }
    }

    #[test]
    fn degree_beyond_system_maximum_is_rejected() {
        let (sys, rule) = setup(PI / 2.0, 64);
        let err = expand(&sys, &smooth, 301, &rule).unwrap_err();
        assert!(matches!(err, ArcError::DegreeTooLarge(301, 300)));
    }

    #[test]
    fn projection_reproduces_its_own_span() {
        let (sys, rule) = setup(PI / 6.0, 512);
        let coef = [
            Complex64::new(0.3, -1.1),
            Complex64::new(-0.7, 0.2),
            Complex64::new(0.0, 0.9),
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.2, -0.4),
        ];
        let f = |th: f64| -> Complex64 {
            coef.iter()
                .enumerate()
                .map(|(j, c)| c * sys.psi_arc(j, th).unwrap())
                .sum()
        };
        let e = expand(&sys, &f, 12, &rule).unwrap();
        for (j, c) in e.coeffs().iter().enumerate() {
            if j < coef.len() {
                assert!((c - coef[j]).norm() < 1e-10);
            } else {
                // coefficients past the true degree are quadrature noise
                assert!(c.norm() < 1e-13, "j = {j}: {}", c.norm());
            }
        }
        let (lo, hi) = sys.params().arc_span();
        for k in 1..200 {
            let th = lo + (hi - lo) * k as f64 / 200.0;
            let s = e.partial_sum(4, th).unwrap();
            assert!((s - f(th)).norm() < 1e-9, "theta = {th}");
        }
    }

    #[test]
    fn expansions_nest() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let little = expand(&sys, &smooth, 12, &rule).unwrap();
        let big = expand(&sys, &smooth, 24, &rule).unwrap();
        for j in 0..=12 {
            assert!((little.coeff(j) - big.coeff(j)).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_sum_matches_kernel_form() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let e = expand(&sys, &smooth, 30, &rule).unwrap();
        let (lo, hi) = sys.params().arc_span();
        let taus: Vec<f64> = (1..=5).map(|k| lo + (hi - lo) * k as f64 / 6.0).collect();
        for &n in &[0usize, 5, 17, 30] {
            for &tau in &taus {
                let direct = e.partial_sum(n, tau).unwrap();
                let kernel = partial_sum_kernel(&sys, &smooth, n, tau, &rule).unwrap();
                assert!(
                    (direct - kernel).norm() < 1e-8,
                    "n = {n}, tau = {tau}: {direct} vs {kernel}"
                );
            }
        }
    }

    #[test]
    fn split_pieces_sum_to_the_kernel_form() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let tau = PI + 0.4;
        for &n in &[3usize, 12] {
            let total = partial_sum_kernel(&sys, &smooth, n, tau, &rule).unwrap();
            let (near, far) = partial_sum_split(&sys, &smooth, n, tau, &rule, None).unwrap();
            assert!((near + far - total).norm() < 1e-12);
            // most of a smooth function's mass reconstructs from the near part
            let direct = expand(&sys, &smooth, n, &rule)
                .unwrap()
                .partial_sum(n, tau)
                .unwrap();
            assert!((total - direct).norm() < 1e-8);
            assert!(far.norm() < total.norm());
        }
    }

    #[test]
    fn energy_satisfies_bessel_and_parseval() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let norm2 = rule.inner_product(&smooth, &smooth).re;
        let e_small = expand(&sys, &smooth, 10, &rule).unwrap();
        assert!(e_small.coeff_energy() <= norm2 + 1e-12);
        let e_big = expand(&sys, &smooth, 48, &rule).unwrap();
        assert!((e_big.coeff_energy() - norm2).abs() < 1e-6 * norm2);
        // and exactly on the nose for a finite combination
        let f = |th: f64| sys.psi_arc(3, th).unwrap() + 2.0 * sys.psi_arc(7, th).unwrap();
        let e = expand(&sys, &f, 20, &rule).unwrap();
        assert!((e.coeff_energy() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn expansion_is_linear() {
        let (sys, rule) = setup(2.5, 256);
        let g = |th: f64| Complex64::new(th.cos(), (2.0 * th).sin());
        let a = Complex64::new(0.7, -0.3);
        let b = Complex64::new(-1.2, 0.5);
        let combo = |th: f64| a * smooth(th) + b * g(th);
        let ef = expand(&sys, &smooth, 16, &rule).unwrap();
        let eg = expand(&sys, &g, 16, &rule).unwrap();
        let ec = expand(&sys, &combo, 16, &rule).unwrap();
        for j in 0..=16 {
            let expect = a * ef.coeff(j) + b * eg.coeff(j);
            assert!((ec.coeff(j) - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn coefficients_settle_under_rule_refinement() {
        let (sys, rule) = setup(PI / 6.0, 512);
        let (_, delta) = expand_with_check(&sys, &smooth, 24, &rule).unwrap();
        assert!(delta < 1e-8, "delta = {delta:e}");
    }

    #[test]
    fn smooth_error_curve_collapses() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let curve = convergence_curve(&sys, &smooth, 2.0, &[4, 8, 16, 32], &rule).unwrap();
        assert_eq!(curve.len(), 4);
        // superexponential collapse: each doubling gains orders of magnitude
        // until the ~1e−27 arithmetic floor (pointwise residuals ~1e−14,
        // squared); past that the values are noise and carry no order
        assert!(curve[1].error_pow_p < 1e-6 * curve[0].error_pow_p);
        assert!(curve[2].error_pow_p < 1e-6 * curve[1].error_pow_p);
        for pt in &curve {
            assert!(pt.error_pow_p.is_finite() && pt.error_pow_p >= 0.0);
        }
        assert!(curve[3].error_pow_p < 1e-24);
    }

    #[test]
    fn jump_error_curve_decays_but_slowly() {
        let params = ArcParams::new(PI / 2.0).unwrap();
        let sys = PolySystem::new(params, 300);
        let rule = QuadratureRule::resolved(&params, 160, &[], &[PI]).unwrap();
        let jump = |th: f64| Complex64::new(if th > PI { 1.0 } else { -1.0 }, 0.0);
        let curve = convergence_curve(&sys, &jump, 2.0, &[5, 20, 80], &rule).unwrap();
        for pair in curve.windows(2) {
            assert!(pair[1].error_pow_p < pair[0].error_pow_p);
        }
        // a jump keeps the error polynomial in n, nowhere near machine floor
        assert!(curve[2].error_pow_p > 1e-6);
    }

    #[test]
    fn l2_partial_sums_contract() {
        let (sys, rule) = setup(PI / 2.0, 512);
        let g = |th: f64| Complex64::new((3.0 * th).cos(), th.sin());
        let family: Vec<&dyn ArcEval> = vec![&smooth, &g];
        let probes = operator_norm_probe(&sys, &family, &[2, 8, 32], 2.0, &rule).unwrap();
        for probe in probes {
            assert!(
                probe.max_ratio <= 1.0 + 1e-6,
                "degree {}: ratio {}",
                probe.degree,
                probe.max_ratio
            );
        }
    }

    #[test]
    fn probe_trend_is_flat_for_l2() {
        let (sys, rule) = setup(2.5, 512);
        let g = |th: f64| Complex64::new((5.0 * th).cos(), 0.0);
        let h = |th: f64| smooth(th) * th.sin();
        let family: Vec<&dyn ArcEval> = vec![&smooth, &g, &h];
        let degrees = [8usize, 16, 32, 64];
        let probes = operator_norm_probe(&sys, &family, &degrees, 2.0, &rule).unwrap();
        let xs: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        let ys: Vec<f64> = probes.iter().map(|p| p.max_ratio).collect();
        let slope = fit_log_slope(&xs, &ys);
        assert!(slope.abs() < 0.05, "slope = {slope}");
    }

    #[test]
    fn zero_norm_family_member_is_refused() {
        let (sys, rule) = setup(PI / 2.0, 128);
        let zero = |_: f64| Complex64::new(0.0, 0.0);
        let family: Vec<&dyn ArcEval> = vec![&smooth, &zero];
        let err = operator_norm_probe(&sys, &family, &[4], 2.0, &rule).unwrap_err();
        assert!(matches!(err, ArcError::ZeroNorm(1)));
    }

    #[test]
    fn log_slope_recovers_power_laws() {
        let xs = [2.0f64, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * x.powf(-1.5)).collect();
        assert!((fit_log_slope(&xs, &ys) + 1.5).abs() < 1e-12);
    }
}
