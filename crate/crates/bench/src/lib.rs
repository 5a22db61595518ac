//! Shared fixtures for the criterion benches.

use arcpoly::{ArcParams, PolySystem};

/// Standard mid-opening configuration used by every bench.
pub fn bench_system() -> PolySystem {
    PolySystem::new(ArcParams::new(std::f64::consts::FRAC_PI_2).unwrap(), 512)
}
