//! Panel-based Gauss–Legendre quadrature with uniform panel doubling.
//!
//! The interval is cut at caller-supplied breakpoints into base panels. Each
//! refinement level halves every panel; integration stops once two
//! successive levels agree to `rel_tol * |I| + abs_tol`. Summation order is
//! fixed, so results are bitwise reproducible for a given configuration.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Node budget and stopping rule shared by every spectral integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    /// Gauss nodes per panel.
    pub nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of panel halvings attempted before giving up.
    pub max_refinements: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            nodes: 512,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_refinements: 6,
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug)]
struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    fn cached(n: usize) -> Arc<GaussRule> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("gauss rule cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussRule::compute(n)))
            .clone()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A configured integration interval.
#[derive(Debug, Clone)]
pub struct Quadrature<T> {
    /// Base panel edges, strictly increasing, first = lower, last = upper.
    edges: Vec<T>,
    rule: Vec<(T, T)>,
    settings: QuadSettings,
}

impl<T: Real> Quadrature<T> {
    pub fn new(lower: T, upper: T, settings: QuadSettings) -> Result<Self> {
        Self::with_breakpoints(lower, upper, std::iter::empty(), settings)
    }

    /// Interval split at every breakpoint strictly inside `(lower, upper)`.
    pub fn with_breakpoints(
        lower: T,
        upper: T,
        breakpoints: impl IntoIterator<Item = T>,
        settings: QuadSettings,
    ) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::domain(
                "quadrature",
                format!("need finite lower < upper, got [{lower}, {upper}]"),
            ));
        }
        if settings.nodes == 0 {
            return Err(Error::domain("quadrature.nodes", "must be positive"));
        }
        let mut edges = vec![lower, upper];
        edges.extend(
            breakpoints
                .into_iter()
                .filter(|b| b.is_finite() && *b > lower && *b < upper),
        );
        edges.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        edges.dedup();
        let g = GaussRule::cached(settings.nodes);
        let rule = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(&x, &w)| (T::lit(x), T::lit(w)))
            .collect();
        Ok(Quadrature { edges, rule, settings })
    }

    pub fn lower(&self) -> T {
        self.edges[0]
    }

    pub fn upper(&self) -> T {
        *self.edges.last().expect("at least two edges")
    }

    pub fn settings(&self) -> QuadSettings {
        self.settings
    }

    /// Base panel edges.
    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    /// Integral at a fixed refinement level (every base panel split into
    /// `2^level` equal pieces).
    pub fn integrate_at_level<F>(&self, level: u32, f: &F) -> Complex<T>
    where
        F: Fn(T) -> Complex<T>,
    {
        let pieces = 1usize << level;
        let mut total = Complex::new(T::zero(), T::zero());
        for w in self.edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let step = (b - a) / T::lit(pieces as f64);
            for k in 0..pieces {
                let lo = a + step * T::lit(k as f64);
                let hi = if k + 1 == pieces { b } else { lo + step };
                let half = (hi - lo) * T::half();
                let mid = (hi + lo) * T::half();
                let mut panel = Complex::new(T::zero(), T::zero());
                for &(x, wt) in &self.rule {
                    panel = panel + f(mid + half * x) * wt;
                }
                total = total + panel * half;
            }
        }
        total
    }

    /// Integrates a complex-valued integrand to the configured tolerance.
    pub fn integrate<F>(&self, f: F) -> Result<Complex<T>>
    where
        F: Fn(T) -> Complex<T>,
    {
        let rel = T::tol(self.settings.rel_tol);
        let abs = T::lit(self.settings.abs_tol);
        let mut previous = self.integrate_at_level(0, &f);
        for level in 1..=self.settings.max_refinements {
            let current = self.integrate_at_level(level, &f);
            if !(current.re.is_finite() && current.im.is_finite()) {
                return Err(Error::domain("integrand", "non-finite value on the interval"));
            }
            if (current - previous).norm() <= rel * current.norm() + abs {
                return Ok(current);
            }
            previous = current;
        }
        let last = self.integrate_at_level(self.settings.max_refinements, &f);
        let before = if self.settings.max_refinements == 0 {
            last
        } else {
            self.integrate_at_level(self.settings.max_refinements - 1, &f)
        };
        Err(Error::NoConvergence {
            last: format!("{last}"),
            previous: format!("{before}"),
        })
    }

    pub fn integrate_real<F>(&self, f: F) -> Result<T>
    where
        F: Fn(T) -> T,
    {
        Ok(self.integrate(|x| Complex::new(f(x), T::zero()))?.re)
    }
}
