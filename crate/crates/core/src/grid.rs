//! Sampled functions on the three grids the library works with: a θ-grid
//! strictly inside the arc, an ω-grid on (0, π), and a full-circle grid on
//! (0, 2π). Uniform circle grids get barycentric trigonometric
//! interpolation; everything else uses a local cubic.

use num_complex::Complex64;

use crate::arc::ArcParams;
use crate::error::{ArcError, Result};

/// Which interval the grid nodes live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// (lo, hi) = (α, 2π − α), open.
    ThetaArc { lo: f64, hi: f64 },
    /// (0, π), open.
    Omega,
    /// [0, 2π), periodic.
    Circle,
}

impl Domain {
    fn bounds(&self) -> (f64, f64) {
        match self {
            Domain::ThetaArc { lo, hi } => (*lo, *hi),
            Domain::Omega => (0.0, std::f64::consts::PI),
            Domain::Circle => (0.0, 2.0 * std::f64::consts::PI),
        }
    }
}

/// Anything that can be evaluated pointwise on its domain coordinate.
/// Closures implement it directly; [`GridFunction`] interpolates.
pub trait ArcEval {
    fn at(&self, x: f64) -> Complex64;
}

impl<F: Fn(f64) -> Complex64> ArcEval for F {
    fn at(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// Wrap a real-valued function as an [`ArcEval`].
pub fn real_fn<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> Complex64 {
    move |x| Complex64::new(f(x), 0.0)
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    domain: Domain,
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    uniform_circle: bool,
}

impl GridFunction {
    pub fn new(domain: Domain, nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(ArcError::Grid(format!(
                "{} nodes vs {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.len() < 2 {
            return Err(ArcError::Grid("need at least 2 nodes".into()));
        }
        let (lo, hi) = domain.bounds();
        for pair in nodes.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(ArcError::Grid(format!(
                    "nodes not strictly increasing at {} .. {}",
                    pair[0], pair[1]
                )));
            }
        }
        let inside = match domain {
            Domain::Circle => nodes[0] >= lo && *nodes.last().unwrap() < hi,
            _ => nodes[0] > lo && *nodes.last().unwrap() < hi,
        };
        if !inside {
            return Err(ArcError::Grid(format!(
                "nodes must lie strictly inside ({lo}, {hi})"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ArcError::NonFinite("grid values"));
        }
        let uniform_circle = matches!(domain, Domain::Circle) && {
            let n = nodes.len();
            let h = 2.0 * std::f64::consts::PI / n as f64;
            nodes
                .iter()
                .enumerate()
                .all(|(j, &x)| (x - (nodes[0] + j as f64 * h)).abs() < 1e-12)
        };
        Ok(GridFunction {
            domain,
            nodes,
            values,
            uniform_circle,
        })
    }

    pub fn theta_arc(params: &ArcParams, nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let (lo, hi) = params.arc_span();
        Self::new(Domain::ThetaArc { lo, hi }, nodes, values)
    }

    pub fn omega(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        Self::new(Domain::Omega, nodes, values)
    }

    /// Uniform circle grid x_j = 2πj/n sampled from `f`.
    pub fn circle_uniform(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let nodes: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(Domain::Circle, nodes, values)
    }

    pub fn circle_values(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        Self::new(Domain::Circle, nodes, values)
    }

    /// Uniform interior θ-grid sampled from `f` (nodes offset half a step
    /// from the endpoints).
    pub fn theta_arc_from_fn(
        params: &ArcParams,
        n: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let (lo, hi) = params.arc_span();
        let h = (hi - lo) / n as f64;
        let nodes: Vec<f64> = (0..n).map(|j| lo + (j as f64 + 0.5) * h).collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(Domain::ThetaArc { lo, hi }, nodes, values)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_uniform_circle(&self) -> bool {
        self.uniform_circle
    }

    /// Interpolated evaluation. Uniform circle grids use the barycentric
    /// trigonometric formula (spectrally exact for band-limited data);
    /// other grids a local cubic. Arguments outside the node range are
    /// clamped (circle arguments are wrapped).
    pub fn eval(&self, x: f64) -> Complex64 {
        if self.uniform_circle {
            return self.eval_trig(x);
        }
        self.eval_cubic(x)
    }

    fn eval_trig(&self, x: f64) -> Complex64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let x = x.rem_euclid(two_pi);
        let n = self.nodes.len();
        // Even n uses cot weights, odd n csc weights, alternating signs.
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (j, (&xj, &fj)) in self.nodes.iter().zip(&self.values).enumerate() {
            let d = 0.5 * (x - xj);
            let s = d.sin();
            if s.abs() < 1e-14 {
                return fj;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let wj = if n.is_multiple_of(2) {
                sign * d.cos() / s
            } else {
                sign / s
            };
            num += fj * wj;
            den += wj;
        }
        num / den
    }

    fn eval_cubic(&self, x: f64) -> Complex64 {
        let n = self.nodes.len();
        let x = x.clamp(self.nodes[0], self.nodes[n - 1]);
        // first index with node > x
        let hi = self.nodes.partition_point(|&t| t <= x).min(n - 1);
        let i1 = hi.saturating_sub(1);
        if n < 4 {
            let i0 = i1.min(n - 2);
            let t = (x - self.nodes[i0]) / (self.nodes[i0 + 1] - self.nodes[i0]);
            return self.values[i0] * (1.0 - t) + self.values[i0 + 1] * t;
        }
        let lo = i1.saturating_sub(1).min(n - 4);
        let idx = [lo, lo + 1, lo + 2, lo + 3];
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &ia) in idx.iter().enumerate() {
            let mut l = 1.0;
            for (b, &ib) in idx.iter().enumerate() {
                if a != b {
                    l *= (x - self.nodes[ib]) / (self.nodes[ia] - self.nodes[ib]);
                }
            }
            acc += self.values[ia] * l;
        }
        acc
    }
}

impl ArcEval for GridFunction {
    fn at(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
}
