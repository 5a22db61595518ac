//! One runner per experiment id. Every runner validates only against the
//! library's own preconditions, writes a CSV plus a JSON manifest, and
//! reports a pass/fail assertion that `--assert` turns into exit code 3.

// `!(x >= bound)` rejects NaN, unlike `x < bound`
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;

use arcpoly::arc::ArcParams;
use arcpoly::family::{family20, TestFunction};
use arcpoly::fourier::{convergence_curve, fit_log_slope};
use arcpoly::hilbert::{hilbert_arc_fn, hilbert_unit_closed_form, PvMethod, PvScheme};
use arcpoly::measure::{KFamily, MeasureSpec, MIN_EXPONENT};
use arcpoly::muckenhoupt::{muckenhoupt_check, MkParams};
use arcpoly::perturbed::{build_perturbed_basis, weighted_convergence_curve};
use arcpoly::poly::{Endpoint, PolySystem};
use arcpoly::quadrature::QuadratureRule;
use arcpoly::{Complex64, GridFunction};

use crate::output::{fnum, write_csv, write_manifest, write_svg};
use crate::{ExperimentConfig, RunError, EXPERIMENT_IDS};

/// Everything a finished experiment hands back to the driver.
pub struct Outcome {
    pub headline: String,
    /// Empirical constants for the manifest; BTreeMap-backed, so the JSON
    /// key order (and the file bytes) are reproducible.
    pub constants: serde_json::Map<String, serde_json::Value>,
    pub quad_nodes_used: usize,
    /// Named curves for optional plotting, (x, y) pairs.
    pub curves: Vec<(String, Vec<(f64, f64)>)>,
    /// Ok(description of what held) or Err(what failed).
    pub assertion: Result<String, String>,
}

fn konst(v: f64) -> serde_json::Value {
    serde_json::json!(v)
}

/// Validated scalar inputs shared by the runners.
struct Ctx {
    params: ArcParams,
    p: f64,
    degrees: Vec<usize>,
    quad_nodes: usize,
    function: TestFunction,
    k_family: KFamily,
    pv_method: PvMethod,
    seed: u64,
}

fn validate(config: &ExperimentConfig) -> Result<Ctx, RunError> {
    if !EXPERIMENT_IDS.contains(&config.experiment_id.as_str()) {
        return Err(RunError::Config(format!(
            "unknown experiment '{}'; valid ids: {}",
            config.experiment_id,
            EXPERIMENT_IDS.join(", ")
        )));
    }
    let params = ArcParams::new(config.alpha)?;
    if !(config.p >= MIN_EXPONENT) {
        return Err(RunError::Config(format!(
            "p = {} is below the supported minimum {MIN_EXPONENT}",
            config.p
        )));
    }
    let mut degrees = config.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    if degrees.is_empty() {
        return Err(RunError::Config("degree list is empty".into()));
    }
    if config.quad_nodes < 2 {
        return Err(RunError::Config(format!(
            "quad_nodes = {} is too small; need at least 2",
            config.quad_nodes
        )));
    }
    let function = TestFunction::from_id(&config.function_id).ok_or_else(|| {
        RunError::Config(format!(
            "unknown function '{}'; valid ids: smooth, jump, cusp, bump-left, bump-right, trig",
            config.function_id
        ))
    })?;
    let k_family = KFamily::from_id(&config.k_id).ok_or_else(|| {
        RunError::Config(format!(
            "unknown k family '{}'; valid ids: one, four, two-plus-sin, two-plus-absdev",
            config.k_id
        ))
    })?;
    let pv_method = PvMethod::from_id(&config.pv_scheme).ok_or_else(|| {
        RunError::Config(format!(
            "unknown pv scheme '{}'; valid ids: subtraction, exclusion, omega",
            config.pv_scheme
        ))
    })?;
    Ok(Ctx {
        params,
        p: config.p,
        degrees,
        quad_nodes: config.quad_nodes,
        function,
        k_family,
        pv_method,
        seed: config.seed,
    })
}

pub fn run(config: &ExperimentConfig, assert: bool, plot: bool) -> Result<String, RunError> {
    let ctx = validate(config)?;
    std::fs::create_dir_all(&config.output_dir)?;
    let outcome = match config.experiment_id.as_str() {
        "ortho-check" => ortho_check(config, &ctx)?,
        "bound-sweep" => bound_sweep(config, &ctx)?,
        "para-bound" => para_bound(config, &ctx)?,
        "hilbert-ratio" => hilbert_ratio(config, &ctx)?,
        "converge-theorem1" => converge_fixed(config, &ctx)?,
        "converge-theorem42" => converge_perturbed(config, &ctx)?,
        "muckenhoupt" => muckenhoupt(config, &ctx)?,
        "pv-crosscheck" => pv_crosscheck(config, &ctx)?,
        _ => unreachable!("validated above"),
    };
    let mut artifacts = vec![format!("{}.csv", config.experiment_id)];
    if plot && !outcome.curves.is_empty() {
        let name = format!("{}.svg", config.experiment_id);
        write_svg(
            &config.output_dir.join(&name),
            &config.experiment_id,
            &outcome.curves,
        )?;
        artifacts.push(name);
    }
    write_manifest(config, &outcome, &artifacts)?;
    if assert {
        if let Err(why) = &outcome.assertion {
            return Err(RunError::Assertion(why.clone()));
        }
    }
    let verdict = match &outcome.assertion {
        Ok(d) => format!("check passed: {d}"),
        Err(d) => format!("check FAILED: {d}"),
    };
    Ok(format!(
        "{}: {} | {} | artifacts in {}",
        config.experiment_id,
        outcome.headline,
        verdict,
        config.output_dir.display()
    ))
}

/// θ grid equidistributed in the phase angle; clusters near the endpoints
/// where the polynomials peak.
fn lambda_grid(params: &ArcParams, n: usize) -> Vec<f64> {
    (1..n)
        .map(|k| {
            let lam = PI * k as f64 / n as f64;
            2.0 * (params.gamma() * lam.cos()).acos()
        })
        .collect()
}

fn arc_constants(params: &ArcParams, out: &mut serde_json::Map<String, serde_json::Value>) {
    out.insert("beta_im".into(), konst(params.beta_im()));
    out.insert("gamma".into(), konst(params.gamma()));
    out.insert("big_k".into(), konst(params.big_k()));
}

// --- ortho-check -----------------------------------------------------------

/// Gram matrix of the orthonormal system against the arc measure; one CSV
/// row per degree with that row's worst defect.
fn ortho_check(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    let top = *ctx.degrees.last().unwrap();
    let sys = PolySystem::new(ctx.params, top);
    let rule = QuadratureRule::gauss(&ctx.params, ctx.quad_nodes)?;
    let psi = sys.psi_matrix(top, rule.theta())?;
    let w = rule.weights();
    let mut rows = Vec::new();
    let mut curve = Vec::new();
    let mut max_defect = 0.0f64;
    for n in 0..=top {
        let mut defect = 0.0f64;
        for j in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((a, b), &wi) in psi[n].iter().zip(&psi[j]).zip(w) {
                acc += *a * b.conj() * wi;
            }
            acc /= 2.0 * PI;
            let target = if j == n { 1.0 } else { 0.0 };
            defect = defect.max((acc - target).norm());
        }
        max_defect = max_defect.max(defect);
        rows.push(vec![
            fnum(ctx.params.alpha()),
            n.to_string(),
            fnum(defect),
            rule.len().to_string(),
        ]);
        curve.push((n as f64, defect));
    }
    write_csv(
        &config.output_dir.join("ortho-check.csv"),
        &["alpha", "n", "gram_defect", "quad_nodes"],
        &rows,
    )?;
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("max_gram_defect".into(), konst(max_defect));
    let assertion = if max_defect < 1e-8 {
        Ok(format!("max Gram defect {max_defect:.2e} < 1e-8"))
    } else {
        Err(format!("max Gram defect {max_defect:.2e}, needs < 1e-8"))
    };
    Ok(Outcome {
        headline: format!(
            "Gram defect <= {max_defect:.2e} for degrees <= {top} on {} nodes",
            rule.len()
        ),
        constants,
        quad_nodes_used: rule.len(),
        curves: vec![("gram-defect".into(), curve)],
        assertion,
    })
}

// --- bound-sweep -----------------------------------------------------------

/// sup over the arc of |ψ_n| against the closed-form uniform bound.
fn bound_sweep(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    const GRID: usize = 2000;
    let top = *ctx.degrees.last().unwrap();
    let sys = PolySystem::new(ctx.params, top);
    let bound = sys.uniform_arc_bound();
    let grid = lambda_grid(&ctx.params, GRID);
    let psi = sys.psi_matrix(top, &grid)?;
    let mut rows = Vec::new();
    let mut curve = Vec::new();
    let mut max_ratio = 0.0f64;
    for (n, row) in psi.iter().enumerate() {
        let sup = row.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let ratio = sup / bound;
        max_ratio = max_ratio.max(ratio);
        rows.push(vec![
            fnum(ctx.params.alpha()),
            n.to_string(),
            fnum(sup),
            fnum(bound),
            fnum(ratio),
        ]);
        curve.push((n as f64, ratio));
    }
    write_csv(
        &config.output_dir.join("bound-sweep.csv"),
        &["alpha", "n", "sup_psi", "bound", "ratio"],
        &rows,
    )?;
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("uniform_bound".into(), konst(bound));
    constants.insert("max_sup_ratio".into(), konst(max_ratio));
    let assertion = if max_ratio <= 1.0 + 1e-10 {
        Ok(format!("sup|psi_n|/bound <= {max_ratio:.6} stays below 1"))
    } else {
        Err(format!("sup|psi_n|/bound = {max_ratio:.6} exceeds 1"))
    };
    Ok(Outcome {
        headline: format!(
            "sup|psi_n| <= {:.6} x bound ({bound:.6}) for n <= {top}, {GRID}-point phase grid",
            max_ratio
        ),
        constants,
        quad_nodes_used: GRID,
        curves: vec![("sup-ratio".into(), curve)],
        assertion,
    })
}

// --- para-bound ------------------------------------------------------------

/// Size of the endpoint para-orthogonal combination against the square-root
/// chord envelope, at a few fixed interior angles; stability is judged by
/// comparing block suprema over the low and high halves of the degree range.
fn para_bound(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    const FRACS: [f64; 3] = [0.02, 0.1, 0.3];
    let top = (*ctx.degrees.last().unwrap()).max(2);
    let span = 2.0 * (PI - ctx.params.alpha());
    let sys = PolySystem::new(ctx.params, top + 1);
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    let mut worst_drift = 0.0f64;
    for frac in FRACS {
        let th = ctx.params.alpha() + frac * span;
        let chord = (Complex64::from_polar(1.0, th)
            - Complex64::from_polar(1.0, ctx.params.alpha()))
        .norm()
        .sqrt();
        let mut curve = Vec::new();
        let mut low = 0.0f64;
        let mut high = 0.0f64;
        for n in 1..=top {
            let c = sys.para_orthogonal(n, th, Endpoint::Plus)?.norm() / chord;
            if n <= top / 2 {
                low = low.max(c);
            } else {
                high = high.max(c);
            }
            rows.push(vec![
                fnum(ctx.params.alpha()),
                fnum(frac),
                n.to_string(),
                fnum(c),
            ]);
            curve.push((n as f64, c));
        }
        worst_drift = worst_drift.max((low - high).abs() / low.max(high));
        curves.push((format!("frac-{frac}"), curve));
    }
    write_csv(
        &config.output_dir.join("para-bound.csv"),
        &["alpha", "frac", "n", "ratio"],
        &rows,
    )?;
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("block_drift".into(), konst(worst_drift));
    let assertion = if worst_drift < 0.02 {
        Ok(format!(
            "block suprema of the chord-normalized ratio drift {:.2}% < 2%",
            100.0 * worst_drift
        ))
    } else {
        Err(format!(
            "block suprema drift {:.2}%, needs < 2%",
            100.0 * worst_drift
        ))
    };
    Ok(Outcome {
        headline: format!(
            "chord-normalized endpoint ratio stable to {:.2}% over n <= {top}",
            100.0 * worst_drift
        ),
        constants,
        quad_nodes_used: 0,
        curves,
        assertion,
    })
}

// --- hilbert-ratio ---------------------------------------------------------

/// ‖H₁f‖_p/‖f‖_p over a battery of exponents and seeded trigonometric
/// polynomials. There is no closed-form constant to pin, so the check is a
/// sanity ceiling; the CSV carries the measured ratios.
fn hilbert_ratio(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    let mut ps = vec![1.5, 2.0, 4.0];
    if !ps.iter().any(|&q| (q - ctx.p).abs() < 1e-12) {
        ps.push(ctx.p);
    }
    ps.sort_by(|a, b| a.total_cmp(b));
    // smooth members only: the grid transform assumes interpolable samples
    let family: Vec<(String, TestFunction)> = family20(ctx.seed)
        .into_iter()
        .filter(|(_, f)| matches!(f, TestFunction::TrigPoly { .. }))
        .take(6)
        .collect();
    let scheme = PvScheme::with_method(ctx.pv_method);
    let rule = QuadratureRule::gauss(&ctx.params, ctx.quad_nodes)?;
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    for &p in &ps {
        for (name, f) in &family {
            let gf =
                GridFunction::theta_arc_from_fn(&ctx.params, 1024, f.clone().into_fn(ctx.params))?;
            let ratio =
                arcpoly::hilbert::riesz_ratio_with_rule(&ctx.params, &gf, p, &scheme, &rule)?;
            max_ratio = max_ratio.max(ratio);
            rows.push(vec![
                fnum(ctx.params.alpha()),
                fnum(p),
                name.clone(),
                ctx.pv_method.id().to_string(),
                fnum(ratio),
            ]);
        }
    }
    write_csv(
        &config.output_dir.join("hilbert-ratio.csv"),
        &["alpha", "p", "function_id", "pv_scheme", "ratio"],
        &rows,
    )?;
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("max_riesz_ratio".into(), konst(max_ratio));
    let assertion = if max_ratio.is_finite() && max_ratio < 100.0 {
        Ok(format!("max ratio {max_ratio:.4} finite and < 100"))
    } else {
        Err(format!(
            "max ratio {max_ratio:.4e} breaches the sanity ceiling"
        ))
    };
    Ok(Outcome {
        headline: format!(
            "max transform ratio {max_ratio:.4} over p in {ps:?}, {} functions, {} scheme",
            family.len(),
            ctx.pv_method.id()
        ),
        constants,
        quad_nodes_used: rule.len(),
        curves: Vec::new(),
        assertion,
    })
}

// --- converge-theorem1 -----------------------------------------------------

/// Mean-convergence curve E_n = ∫|f − S_n f|^p w dθ for the fixed arc
/// weight. The check asks for a decisive drop across the degree ladder and
/// an essentially monotone trend.
fn converge_fixed(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    let top = *ctx.degrees.last().unwrap();
    let sys = PolySystem::new(ctx.params, top);
    let breaks = ctx.function.breakpoints(&ctx.params);
    let singular = ctx.function.singularities();
    let mut rule = QuadratureRule::resolved(&ctx.params, 2 * top, &breaks, &singular)?;
    while rule.len() < ctx.quad_nodes {
        rule = rule.refine()?;
    }
    let f = ctx.function.clone().into_fn(ctx.params);
    let curve = convergence_curve(&sys, &f, ctx.p, &ctx.degrees, &rule)?;
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for c in &curve {
        rows.push(vec![
            fnum(ctx.params.alpha()),
            fnum(ctx.p),
            c.degree.to_string(),
            fnum(c.error_lp(ctx.p)),
            fnum(c.error_pow_p),
            rule.len().to_string(),
        ]);
        plot.push((c.degree as f64, c.error_lp(ctx.p)));
    }
    write_csv(
        &config.output_dir.join("converge-theorem1.csv"),
        &[
            "alpha",
            "p",
            "n",
            "error_Lp",
            "error_Lp_pow_p",
            "quad_nodes",
        ],
        &rows,
    )?;
    let first = curve.first().unwrap().error_pow_p;
    let last = curve.last().unwrap().error_pow_p;
    let drop = if first > 0.0 { last / first } else { 0.0 };
    let bumps = curve
        .windows(2)
        .filter(|w| w[1].error_pow_p > w[0].error_pow_p * (1.0 + 1e-12))
        .count();
    let xs: Vec<f64> = curve.iter().map(|c| c.degree as f64).collect();
    let ys: Vec<f64> = curve.iter().map(|c| c.error_pow_p.max(1e-300)).collect();
    let slope = fit_log_slope(&xs, &ys);
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("error_drop".into(), konst(drop));
    constants.insert("log_slope".into(), konst(slope));
    let assertion = if drop < 0.1 && bumps <= 1 {
        Ok(format!(
            "E_{}/E_{} = {drop:.4} < 0.1 with {bumps} non-monotone step(s)",
            curve.last().unwrap().degree,
            curve.first().unwrap().degree
        ))
    } else {
        Err(format!(
            "E_{}/E_{} = {drop:.4} with {bumps} non-monotone step(s); needs < 0.1 and <= 1",
            curve.last().unwrap().degree,
            curve.first().unwrap().degree
        ))
    };
    Ok(Outcome {
        headline: format!(
            "E_n drops x{drop:.3e} across degrees {:?} (log-log slope {slope:.3}) for '{}' at p = {}",
            ctx.degrees, config.function_id, ctx.p
        ),
        constants,
        quad_nodes_used: rule.len(),
        curves: vec![("error-Lp".into(), plot)],
        assertion,
    })
}

// --- converge-theorem42 ----------------------------------------------------

/// Same convergence functional, but for a perturbed weight k·w with the
/// endpoint damping folded into the error integrand.
fn converge_perturbed(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    let measure = MeasureSpec::from_family(ctx.params, ctx.k_family)?;
    if !measure.is_perturbed() {
        return Err(RunError::Config(format!(
            "k family '{}' leaves the weight unperturbed; use converge-theorem1 for that case",
            ctx.k_family.id()
        )));
    }
    let top = *ctx.degrees.last().unwrap();
    let breaks = ctx.function.breakpoints(&ctx.params);
    let singular = ctx.function.singularities();
    let mut rule = QuadratureRule::resolved(&ctx.params, 2 * top, &breaks, &singular)?;
    let need = (8 * top).max(ctx.quad_nodes);
    while rule.len() < need {
        rule = rule.refine()?;
    }
    let basis = build_perturbed_basis(&measure, top, &rule)?;
    let f = ctx.function.clone().into_fn(ctx.params);
    let curve = weighted_convergence_curve(&basis, &f, ctx.p, &ctx.degrees, &rule)?;
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for c in &curve {
        rows.push(vec![
            fnum(ctx.params.alpha()),
            fnum(ctx.p),
            ctx.k_family.id().to_string(),
            c.degree.to_string(),
            fnum(c.error_pow_p),
            rule.len().to_string(),
        ]);
        plot.push((c.degree as f64, c.error_pow_p));
    }
    write_csv(
        &config.output_dir.join("converge-theorem42.csv"),
        &["alpha", "p", "k_id", "n", "weighted_error", "quad_nodes"],
        &rows,
    )?;
    let first = curve.first().unwrap().error_pow_p;
    let last = curve.last().unwrap().error_pow_p;
    let drop = if first > 0.0 { last / first } else { 0.0 };
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("gram_residual".into(), konst(basis.gram_residual()));
    constants.insert("error_drop".into(), konst(drop));
    constants.insert("k_lower".into(), konst(measure.k_lower()));
    let assertion = if drop < 0.1 {
        Ok(format!(
            "damped E_{}/E_{} = {drop:.4} < 0.1",
            curve.last().unwrap().degree,
            curve.first().unwrap().degree
        ))
    } else {
        Err(format!(
            "damped E_{}/E_{} = {drop:.4}, needs < 0.1",
            curve.last().unwrap().degree,
            curve.first().unwrap().degree
        ))
    };
    Ok(Outcome {
        headline: format!(
            "damped E_n drops x{drop:.3e} under k = '{}' (basis Gram residual {:.1e})",
            ctx.k_family.id(),
            basis.gram_residual()
        ),
        constants,
        quad_nodes_used: rule.len(),
        curves: vec![("weighted-error".into(), plot)],
        assertion,
    })
}

// --- muckenhoupt -----------------------------------------------------------

/// Half-line kernel inequality: both sides for two test functions across a
/// ladder of integration horizons, the point being that lhs/rhs stabilizes
/// as the horizon grows.
#[allow(clippy::type_complexity)]
fn muckenhoupt(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    const HORIZONS: [f64; 3] = [50.0, 100.0, 200.0];
    let cases: [(&str, Box<dyn Fn(f64) -> f64>, Vec<f64>); 2] = [
        (
            "indicator-1-2",
            Box::new(|y: f64| if (1.0..=2.0).contains(&y) { 1.0 } else { 0.0 }),
            vec![1.0, 2.0],
        ),
        (
            "inverse-square",
            Box::new(|y: f64| (1.0 + y).powi(-2)),
            vec![],
        ),
    ];
    let mut rows = Vec::new();
    let mut constants = serde_json::Map::new();
    let mut worst_drift = 0.0f64;
    let mut all_positive = true;
    let mut lines = Vec::new();
    for (name, f, breaks) in &cases {
        let mut ratios = Vec::new();
        for &t in &HORIZONS {
            let mk = MkParams::standard(ctx.p).with_horizon(t);
            let rep = muckenhoupt_check(f.as_ref(), breaks, &mk)?;
            all_positive &= rep.lhs.is_finite() && rep.lhs > 0.0 && rep.rhs.is_finite();
            ratios.push(rep.ratio);
            rows.push(vec![
                fnum(ctx.p),
                name.to_string(),
                fnum(t),
                fnum(rep.lhs),
                fnum(rep.rhs),
                fnum(rep.ratio),
                fnum(rep.tail_bound),
            ]);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        let drift = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
        worst_drift = worst_drift.max(drift);
        constants.insert(format!("ratio_{name}"), konst(*ratios.last().unwrap()));
        lines.push(format!("{name} ratio {:.4}", ratios.last().unwrap()));
    }
    write_csv(
        &config.output_dir.join("muckenhoupt.csv"),
        &[
            "p",
            "function_id",
            "t_horizon",
            "lhs",
            "rhs",
            "ratio",
            "tail_bound",
        ],
        &rows,
    )?;
    constants.insert("ratio_drift".into(), konst(worst_drift));
    let assertion = if all_positive && worst_drift < 0.03 {
        Ok(format!(
            "both sides finite and positive, ratio drift {:.2}% < 3% across horizons",
            100.0 * worst_drift
        ))
    } else {
        Err(format!(
            "positivity {} / ratio drift {:.2}%, needs positive and < 3%",
            all_positive,
            100.0 * worst_drift
        ))
    };
    Ok(Outcome {
        headline: format!(
            "{} at p = {} over horizons {HORIZONS:?}",
            lines.join(", "),
            ctx.p
        ),
        constants,
        quad_nodes_used: 0,
        curves: Vec::new(),
        assertion,
    })
}

// --- pv-crosscheck ---------------------------------------------------------

/// All three principal-value schemes against the closed form for the
/// constant function, across a sweep of interior evaluation points.
fn pv_crosscheck(config: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome, RunError> {
    const TAUS: usize = 100;
    let one = |_: f64| Complex64::new(1.0, 0.0);
    let span = 2.0 * (PI - ctx.params.alpha());
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for method in [
        PvMethod::SingularitySubtraction,
        PvMethod::SymmetricExclusion,
        PvMethod::OmegaSubstitution,
    ] {
        let scheme = PvScheme::with_method(method);
        for k in 0..TAUS {
            let tau = ctx.params.alpha() + (k as f64 + 0.5) / TAUS as f64 * span;
            let got = hilbert_arc_fn(&ctx.params, &one, tau, &scheme)?;
            let reference = hilbert_unit_closed_form(&ctx.params, tau)?;
            let err = (got - reference).norm();
            worst = worst.max(err);
            rows.push(vec![
                fnum(ctx.params.alpha()),
                method.id().to_string(),
                fnum(tau),
                fnum(got.re),
                fnum(got.im),
                fnum(reference.re),
                fnum(reference.im),
                fnum(err),
            ]);
        }
    }
    write_csv(
        &config.output_dir.join("pv-crosscheck.csv"),
        &[
            "alpha",
            "pv_scheme",
            "tau",
            "got_re",
            "got_im",
            "ref_re",
            "ref_im",
            "abs_err",
        ],
        &rows,
    )?;
    let mut constants = serde_json::Map::new();
    arc_constants(&ctx.params, &mut constants);
    constants.insert("max_abs_err".into(), konst(worst));
    let assertion = if worst < 1e-6 {
        Ok(format!("max |PV - closed form| = {worst:.2e} < 1e-6"))
    } else {
        Err(format!(
            "max |PV - closed form| = {worst:.2e}, needs < 1e-6"
        ))
    };
    Ok(Outcome {
        headline: format!(
            "three PV schemes agree with the closed form to {worst:.2e} at {TAUS} interior points"
        ),
        constants,
        quad_nodes_used: PvScheme::default().nodes,
        curves: Vec::new(),
        assertion,
    })
}
