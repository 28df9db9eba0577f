//! Panel-based Gauss-Legendre quadrature with panel counts tied to the
//! oscillation count of the integrand.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Tolerances and panel policy for oscillatory integrals.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Panels per full oscillation cycle of the phase.
    pub panels_per_cycle: f64,
    pub min_panels: usize,
    /// Refinement doublings allowed before giving up.
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // abs_tol sits above the evaluation noise of the Bessel kernels, so
        // refinement terminates instead of chasing roundoff.
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            panels_per_cycle: 7.0,
            min_panels: 10,
            max_refinements: 3,
        }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
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
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl24() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(24))
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

fn panel_sum(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    rule: &(Vec<f64>, Vec<f64>),
) -> Complex64 {
    let (nodes, weights) = rule;
    let width = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += *w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

/// Integrates a complex integrand whose phase runs through roughly `cycles`
/// full oscillations over [a, b]. The panel count scales with the cycle
/// count; a 16-point shadow rule provides the error estimate and panels are
/// doubled until the estimate meets the tolerance.
pub fn integrate_oscillatory(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    cycles: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(b > a) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut panels = spec
        .min_panels
        .max((spec.panels_per_cycle * cycles.abs()).ceil() as usize);
    for refinement in 0..=spec.max_refinements {
        let coarse = panel_sum(&mut f, a, b, panels, gl16());
        let fine = panel_sum(&mut f, a, b, panels, gl24());
        let err = (fine - coarse).norm();
        if err <= spec.abs_tol.max(spec.rel_tol * fine.norm()) {
            return Ok(fine);
        }
        if refinement == spec.max_refinements {
            return Err(Error::QuadratureNonConvergent(format!(
                "error estimate {err:.3e} after {panels} panels on [{a}, {b}]"
            )));
        }
        panels *= 2;
    }
    unreachable!()
}

/// Real-valued convenience wrapper.
pub fn integrate_real(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    cycles: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    integrate_oscillatory(|x| Complex64::new(f(x), 0.0), a, b, cycles, spec).map(|z| z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn gl_nodes_match_known_values() {
        let (nodes, weights) = gauss_legendre(5);
        // classical 5-point values
        assert!((nodes[0] + 0.906179845938664).abs() < 1e-14);
        assert!((nodes[2]).abs() < 1e-15);
        assert!((weights[2] - 128.0 / 225.0).abs() < 1e-14);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn polynomial_exactness() {
        // GL-n integrates degree 2n-1 exactly
        for n in [2usize, 5, 16, 24, 64] {
            let (nodes, weights) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let num: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * x.powi(deg as i32 - 1))
                .sum();
            // integral of x^(deg-1) on [-1,1]; deg-1 even
            let exact = 2.0 / deg as f64;
            assert!((num - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn oscillatory_sine_integral() {
        let spec = QuadratureSpec::default();
        // int_0^1 e(25 x) dx = 0 exactly
        let v = integrate_oscillatory(
            |x| Complex64::from_polar(1.0, TAU * 25.0 * x),
            0.0,
            1.0,
            25.0,
            &spec,
        )
        .unwrap();
        assert!(v.norm() < 1e-12);
        // int_0^pi sin x dx = 2
        let v = integrate_real(|x| x.sin(), 0.0, PI, 1.0, &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_is_zero() {
        let spec = QuadratureSpec::default();
        let v = integrate_oscillatory(|_| Complex64::new(1.0, 0.0), 1.0, 1.0, 0.0, &spec).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn underestimated_cycles_still_converges_by_refinement() {
        let spec = QuadratureSpec {
            min_panels: 2,
            ..QuadratureSpec::default()
        };
        // claim 1 cycle but integrate 40 cycles; refinement must catch it
        let v = integrate_oscillatory(
            |x| Complex64::from_polar(1.0, TAU * 40.0 * x),
            0.0,
            1.0,
            1.0,
            &spec,
        );
        match v {
            Ok(z) => assert!(z.norm() < 1e-8),
            Err(Error::QuadratureNonConvergent(_)) => {} // acceptable honest failure
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
