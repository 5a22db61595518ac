//! Orthonormal bases for perturbed arc measures k(ϑ)·w_α dϑ, built
//! numerically in value space: Gram–Schmidt (with one reorthogonalization
//! pass) over the monomials at quadrature nodes. Includes leading
//! coefficients, a uniform-bound probe, the damped weighted convergence
//! experiment, and the damped weighted transform probe.

use num_complex::Complex64;

use crate::error::{ArcError, Result};
use crate::fourier::CurvePoint;
use crate::grid::ArcEval;
use crate::hilbert::{hilbert_arc_weighted_fn, PvScheme};
use crate::measure::{MeasureSpec, MIN_EXPONENT};
use crate::quadrature::QuadratureRule;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Default construction cap: Gram–Schmidt in doubles is dependable to about
/// this degree across the supported arcs; raise it only with an eye on the
/// condition estimate.
pub const DEFAULT_DEGREE_CAP: usize = 50;

/// The damping factor sqrt(cos²(α/2) − cos²(τ/2)), clamped at 0; vanishes
/// like |e^{iτ} − e^{iα}|^{1/2} at the endpoints.
pub fn damping(params: &crate::arc::ArcParams, theta: f64) -> f64 {
    let g = params.gamma();
    (g * g - (0.5 * theta).cos().powi(2)).max(0.0).sqrt()
}

#[derive(Debug, Clone)]
pub struct PerturbedBasis {
    measure: MeasureSpec,
    max_degree: usize,
    /// Column n: coefficients of φ_j (j < n) in the monomial e^{inθ}.
    cols: Vec<Vec<Complex64>>,
    /// Diagonal entries: e^{inθ} = Σ_{j<n} cols[n][j] φ_j + diag[n] φ_n.
    diag: Vec<f64>,
    /// Row n: φ_n sampled at the build rule's θ nodes.
    values: Vec<Vec<Complex64>>,
    rule: QuadratureRule,
    gram_residual: f64,
}

impl PerturbedBasis {
    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Leading coefficient κ_n > 0 of φ_n.
    pub fn kappa(&self, n: usize) -> f64 {
        1.0 / self.diag[n]
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.diag.iter().map(|d| 1.0 / d).collect()
    }

    /// Largest orthonormality defect |⟨φ_i, φ_j⟩ − δ_ij| on the build rule.
    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    pub fn build_rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// φ_n at the build rule's θ nodes.
    pub fn values_row(&self, n: usize) -> &[Complex64] {
        &self.values[n]
    }

    /// All of φ_0..φ_deg at one point, by forward substitution through the
    /// triangular change of basis from the monomials.
    pub fn phi_all_at(&self, deg: usize, theta: f64) -> Result<Vec<Complex64>> {
        if deg > self.max_degree {
            return Err(ArcError::DegreeTooLarge(deg, self.max_degree));
        }
        let mut phi: Vec<Complex64> = Vec::with_capacity(deg + 1);
        for n in 0..=deg {
            let mut u = Complex64::from_polar(1.0, n as f64 * theta);
            for (j, c) in self.cols[n].iter().enumerate() {
                u -= c * phi[j];
            }
            phi.push(u / self.diag[n]);
        }
        Ok(phi)
    }

    pub fn phi_eval(&self, n: usize, theta: f64) -> Result<Complex64> {
        Ok(*self.phi_all_at(n, theta)?.last().unwrap())
    }

    /// Coefficients ĉ_j = (1/2π) ∫ f conj(φ_j) k w dθ through `degree`,
    /// on the build rule.
    pub fn expand<F: ArcEval + ?Sized>(&self, f: &F, degree: usize) -> Result<Vec<Complex64>> {
        if degree > self.max_degree {
            return Err(ArcError::DegreeTooLarge(degree, self.max_degree));
        }
        let fk: Vec<Complex64> = self
            .rule
            .theta()
            .iter()
            .zip(self.rule.weights())
            .map(|(&th, &w)| f.at(th) * self.measure.multiplier(th) * w)
            .collect();
        let mut coeffs = Vec::with_capacity(degree + 1);
        for row in &self.values[..=degree] {
            let mut acc = Complex64::new(0.0, 0.0);
            for (fv, pv) in fk.iter().zip(row) {
                acc += fv * pv.conj();
            }
            coeffs.push(acc / TWO_PI);
        }
        Ok(coeffs)
    }

    /// Kernel K_n(ϑ, τ) = Σ_{j≤n} conj(φ_j(ϑ)) φ_j(τ) by the two-term
    /// closed form (the reversed polynomial on the circle is
    /// φ*_n = e^{inθ} conj(φ_n)); falls back to the direct sum near the
    /// diagonal.
    pub fn cd_kernel(&self, n: usize, theta: f64, tau: f64) -> Result<Complex64> {
        let rot = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, tau - theta);
        if rot.norm() < crate::poly::CD_DIAGONAL_TOL {
            return self.cd_kernel_direct(n, theta, tau);
        }
        let pt = self.phi_eval(n + 1, theta)?;
        let pu = self.phi_eval(n + 1, tau)?;
        let nf = (n + 1) as f64;
        let st = Complex64::from_polar(1.0, nf * theta) * pt.conj();
        let su = Complex64::from_polar(1.0, nf * tau) * pu.conj();
        Ok((st.conj() * su - pt.conj() * pu) / rot)
    }

    pub fn cd_kernel_direct(&self, n: usize, theta: f64, tau: f64) -> Result<Complex64> {
        let pt = self.phi_all_at(n, theta)?;
        let pu = self.phi_all_at(n, tau)?;
        Ok(pt.iter().zip(&pu).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Discrete inner product (1/2π) Σ a_i conj(b_i) k_i w_i.
fn ip(a: &[Complex64], b: &[Complex64], kw: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ((x, y), &m) in a.iter().zip(b).zip(kw) {
        acc += x * y.conj() * m;
    }
    acc / TWO_PI
}

/// Build the orthonormal family for a perturbed measure by Gram–Schmidt on
/// the monomials evaluated at the rule's nodes, one reorthogonalization
/// pass, positive real leading coefficients.
pub fn build_perturbed_basis(
    measure: &MeasureSpec,
    max_degree: usize,
    rule: &QuadratureRule,
) -> Result<PerturbedBasis> {
    if !measure.is_perturbed() {
        return Err(ArcError::Grid(
            "perturbed basis requires a perturbed measure kind".into(),
        ));
    }
    let need = 8 * max_degree;
    if rule.len() < need {
        return Err(ArcError::InsufficientResolution {
            got: rule.len(),
            need,
            degree: max_degree,
        });
    }
    let thetas = rule.theta();
    let kw: Vec<f64> = thetas
        .iter()
        .zip(rule.weights())
        .map(|(&th, &w)| measure.multiplier(th) * w)
        .collect();

    let mut values: Vec<Vec<Complex64>> = Vec::with_capacity(max_degree + 1);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(max_degree + 1);
    let mut diag: Vec<f64> = Vec::with_capacity(max_degree + 1);
    let mut d_max = 0.0f64;
    for n in 0..=max_degree {
        let mut u: Vec<Complex64> = thetas
            .iter()
            .map(|&th| Complex64::from_polar(1.0, n as f64 * th))
            .collect();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for _pass in 0..2 {
            for j in 0..n {
                let c = ip(&u, &values[j], &kw);
                for (ui, vj) in u.iter_mut().zip(&values[j]) {
                    *ui -= c * vj;
                }
                col[j] += c;
            }
        }
        let d = ip(&u, &u, &kw).re.sqrt();
        if !(d > 0.0) || !d.is_finite() {
            return Err(ArcError::NonFinite("Gram-Schmidt residual norm"));
        }
        // the monomial Gram matrix is R^H R for the triangular change of
        // basis built here, so (max diag / min diag)^2 estimates its
        // condition from below; past 1e12 the residual directions are
        // rounding noise, not polynomials
        d_max = d_max.max(d);
        let cond = (d_max / d).powi(2);
        if cond > 1e12 {
            return Err(ArcError::IllConditioned(cond, n));
        }
        for ui in u.iter_mut() {
            *ui /= d;
        }
        values.push(u);
        cols.push(col);
        diag.push(d);
    }

    let mut gram_residual = 0.0f64;
    for i in 0..=max_degree {
        for j in i..=max_degree {
            let g = ip(&values[i], &values[j], &kw);
            let target = if i == j { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((g - target).norm());
        }
    }

    Ok(PerturbedBasis {
        measure: *measure,
        max_degree,
        cols,
        diag,
        values,
        rule: rule.clone(),
        gram_residual,
    })
}

/// Per-degree suprema of |φ_n| over a θ grid for n ≤ n_max. A uniformly
/// bounded family shows a flat trend (log-log slope near zero).
pub fn phi_uniform_bound_probe(
    basis: &PerturbedBasis,
    n_max: usize,
    grid: &[f64],
) -> Result<Vec<f64>> {
    if n_max > basis.max_degree() {
        return Err(ArcError::DegreeTooLarge(n_max, basis.max_degree()));
    }
    let mut sups = vec![0.0f64; n_max + 1];
    for &th in grid {
        let phi = basis.phi_all_at(n_max, th)?;
        for (s, p) in sups.iter_mut().zip(&phi) {
            *s = s.max(p.norm());
        }
    }
    Ok(sups)
}

/// Damped weighted errors E_n = ∫ |(f − S_n f)(τ)·D(τ)|^p k(τ) w_α(τ) dτ
/// with D(τ) = sqrt(cos²(α/2) − cos²(τ/2)), over the requested degrees.
/// The rule must resolve f's jumps as well as the basis phase; coefficients
/// are taken on the same rule.
pub fn weighted_convergence_curve<F: ArcEval + ?Sized>(
    basis: &PerturbedBasis,
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
    if top > basis.max_degree() {
        return Err(ArcError::DegreeTooLarge(top, basis.max_degree()));
    }
    let params = *basis.measure().params();
    let thetas = rule.theta();
    let weights = rule.weights();
    let fvals: Vec<Complex64> = thetas.iter().map(|&th| f.at(th)).collect();
    // φ matrix at this rule's nodes (column-wise forward substitution)
    let mut phi_cols: Vec<Vec<Complex64>> = Vec::with_capacity(thetas.len());
    for &th in thetas {
        phi_cols.push(basis.phi_all_at(top, th)?);
    }
    // coefficients on the same rule
    let mut coeffs = vec![Complex64::new(0.0, 0.0); top + 1];
    for ((fv, col), (&th, &w)) in fvals.iter().zip(&phi_cols).zip(thetas.iter().zip(weights)) {
        let m = basis.measure().multiplier(th) * w;
        for (c, pv) in coeffs.iter_mut().zip(col) {
            *c += fv * pv.conj() * m;
        }
    }
    for c in coeffs.iter_mut() {
        *c /= TWO_PI;
    }

    let damp_pow: Vec<f64> = thetas
        .iter()
        .map(|&th| damping(&params, th).powf(p))
        .collect();
    let kview: Vec<f64> = thetas
        .iter()
        .map(|&th| basis.measure().multiplier(th))
        .collect();
    let mut running = vec![Complex64::new(0.0, 0.0); thetas.len()];
    let mut out = Vec::with_capacity(degs.len());
    let mut slot = 0usize;
    for n in 0..=top {
        let c = coeffs[n];
        for (r, col) in running.iter_mut().zip(&phi_cols) {
            *r += c * col[n];
        }
        if slot < degs.len() && degs[slot] == n {
            let mut err = 0.0;
            for (((fv, s), &w), (&dp, &k)) in fvals
                .iter()
                .zip(&running)
                .zip(weights)
                .zip(damp_pow.iter().zip(&kview))
            {
                err += (fv - s).norm().powf(p) * dp * k * w;
            }
            if !err.is_finite() {
                return Err(ArcError::NonFinite("weighted convergence accumulator"));
            }
            out.push(CurvePoint {
                degree: n,
                error_pow_p: err,
            });
            slot += 1;
        }
    }
    Ok(out)
}

/// S_n f(τ) two ways: from the expansion coefficients, and as the
/// quadrature of f against the closed-form kernel. Agreement validates the
/// evaluation path and the orthonormality of the numerical basis at once.
pub fn weighted_partial_sum_crosscheck<F: ArcEval + ?Sized>(
    basis: &PerturbedBasis,
    f: &F,
    n: usize,
    tau: f64,
) -> Result<(Complex64, Complex64)> {
    let coeffs = basis.expand(f, n)?;
    let phi_tau = basis.phi_all_at(n, tau)?;
    let direct: Complex64 = coeffs.iter().zip(&phi_tau).map(|(c, p)| c * p).sum();
    let rule = basis.build_rule();
    let mut kernel = Complex64::new(0.0, 0.0);
    for (&th, &w) in rule.theta().iter().zip(rule.weights()) {
        kernel += f.at(th) * basis.cd_kernel(n, th, tau)? * basis.measure().multiplier(th) * w;
    }
    Ok((direct, kernel / TWO_PI))
}

/// max over the family of ‖H₂(f)·D‖_{p,w_α} / ‖f‖_{p,w_α}, with the damped
/// weighted transform in the numerator and plain arc-weight norms; returns
/// the per-member ratios.
pub fn weighted_hilbert_bound_probe(
    params: &crate::arc::ArcParams,
    family: &[&dyn ArcEval],
    p: f64,
    scheme: &PvScheme,
    norm_nodes: usize,
) -> Result<Vec<f64>> {
    if !(p >= MIN_EXPONENT) {
        return Err(ArcError::UnsupportedExponent(p));
    }
    let rule = QuadratureRule::gauss(params, norm_nodes)?;
    let mut ratios = Vec::with_capacity(family.len());
    for (i, f) in family.iter().enumerate() {
        let mut denom = 0.0;
        for (&th, &w) in rule.theta().iter().zip(rule.weights()) {
            denom += f.at(th).norm().powf(p) * w;
        }
        denom = denom.powf(1.0 / p);
        if !(denom > 1e-300) {
            return Err(ArcError::ZeroNorm(i));
        }
        let mut numer = 0.0;
        for (&tau, &w) in rule.theta().iter().zip(rule.weights()) {
            let h = hilbert_arc_weighted_fn(params, &|th| f.at(th), tau, scheme)?;
            numer += (h.norm() * damping(params, tau)).powf(p) * w;
        }
        let ratio = numer.powf(1.0 / p) / denom;
        if !ratio.is_finite() {
            return Err(ArcError::NonFinite("weighted transform probe"));
        }
        ratios.push(ratio);
    }
    Ok(ratios)
}
