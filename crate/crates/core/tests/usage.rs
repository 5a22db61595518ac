//! Compile-level guarantee that the quickstart flow from the README works.

use arcpoly::{ArcParams, PolySystem, QuadratureRule, TestFunction};

#[test]
fn quickstart_flow() -> arcpoly::Result<()> {
    let params = ArcParams::new(std::f64::consts::FRAC_PI_2)?;
    let sys = PolySystem::new(params, 64);
    let rule = QuadratureRule::gauss(&params, 512)?;

    let psi = sys.psi_matrix(64, rule.theta())?;
    assert_eq!(psi.len(), 65);

    let jump = TestFunction::Jump.into_fn(params);
    let curve = arcpoly::fourier::convergence_curve(&sys, &jump, 2.0, &[4, 8, 16], &rule)?;
    assert_eq!(curve.len(), 3);
    assert!(curve[2].error_pow_p < curve[0].error_pow_p);

    let h = arcpoly::hilbert::hilbert_arc_fn(&params, &jump, 3.0, &Default::default())?;
    assert!(h.norm().is_finite());
    Ok(())
}
