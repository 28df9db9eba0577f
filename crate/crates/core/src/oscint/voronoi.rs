//! Two-sided numerical verification of the level-1 holomorphic summation
//! formula: the twisted coefficient sum against its dual Bessel-kernel sum.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::bessel::bessel_j;
use super::quadrature::{integrate_oscillatory, QuadratureSpec};
use super::window::SmoothWindow;
use crate::autforms::CuspFormCoefficients;
use crate::modarith::{divisor_count, gcd, inv_mod, reduce_signed};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// Cache of the dual-side kernel integrals
/// int F(x) J_{k-1}(4 pi sqrt(n x) / c) dx,
/// which depend on (c, window, weight) but not on the twist numerator a.
pub struct VoronoiKernel {
    pub c: u64,
    pub weight: u32,
    pub window: SmoothWindow,
    pub quad: QuadratureSpec,
    integrals: Vec<Complex64>,
}

impl VoronoiKernel {
    pub fn new(c: u64, weight: u32, window: SmoothWindow, quad: QuadratureSpec) -> Self {
        VoronoiKernel {
            c,
            weight,
            window,
            quad,
            integrals: Vec::new(),
        }
    }

    /// Kernel integral for dual index n (1-based), computed on demand.
    pub fn integral(&mut self, n: u64) -> Result<Complex64> {
        while self.integrals.len() < n as usize {
            let next = self.integrals.len() as u64 + 1;
            let v = self.compute(next)?;
            self.integrals.push(v);
        }
        Ok(self.integrals[(n - 1) as usize])
    }

    fn compute(&self, n: u64) -> Result<Complex64> {
        let (lo, hi) = self.window.support();
        let cf = self.c as f64;
        let nf = n as f64;
        let nu = self.weight - 1;
        // phase of J(4 pi sqrt(n x)/c) in cycles: 2 sqrt(n x)/c
        let cycles = 2.0 * nf.sqrt() * (hi.sqrt() - lo.sqrt()) / cf;
        integrate_oscillatory(
            |x| {
                let arg = 4.0 * std::f64::consts::PI * (nf * x).sqrt() / cf;
                let j = bessel_j(nu, arg).expect("order checked at construction");
                Complex64::new(self.window.eval(x) * j, 0.0)
            },
            lo,
            hi,
            cycles,
            &self.quad,
        )
    }
}

/// Both sides of the summation formula for coprime a, c and a smooth window
/// F (already scaled, supported inside [N, 2N]):
///   LHS = c  sum_n lambda(n) e(a n / c) F(n)
///   RHS = sum_n lambda(n) e(-a_inv n / c) int F(x) 2 pi i^k J_{k-1}(4 pi sqrt(nx)/c) dx
/// The dual sum is truncated once its terms stay below tolerance relative to
/// the LHS magnitude.
pub fn voronoi_check(
    a: u64,
    c: u64,
    coeffs: &CuspFormCoefficients,
    window: &SmoothWindow,
    quad: &QuadratureSpec,
) -> Result<VerificationReport> {
    let mut kernel = VoronoiKernel::new(c, coeffs.weight, *window, *quad);
    voronoi_check_with_kernel(a, coeffs, &mut kernel)
}

/// As `voronoi_check`, reusing a kernel cache across twists with the same c.
pub fn voronoi_check_with_kernel(
    a: u64,
    coeffs: &CuspFormCoefficients,
    kernel: &mut VoronoiKernel,
) -> Result<VerificationReport> {
    let c = kernel.c;
    if c == 0 || gcd(a, c) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "need c >= 1 and gcd(a, c) = 1, got a = {a}, c = {c}"
        )));
    }
    let (lo, hi) = kernel.window.support();
    coeffs.ensure_range(hi.ceil() as u64)?;

    // LHS over the window support.
    let cf = c as f64;
    let mut lhs = Complex64::new(0.0, 0.0);
    let n_lo = (lo.floor() as u64).max(1);
    for n in n_lo..=(hi.ceil() as u64) {
        let f = kernel.window.eval(n as f64);
        if f == 0.0 {
            continue;
        }
        let phase = TAU * reduce_signed((a as i128 * n as i128 % c as i128) as i64, c) as f64 / cf;
        lhs += coeffs.lambda(n) * f * Complex64::from_polar(1.0, phase);
    }
    lhs *= cf;

    // RHS dual sum.
    let abar = if c == 1 { 0 } else { inv_mod(a as i64, c)? };
    let ik = Complex64::i().powu(coeffs.weight % 4);
    let prefactor = TAU * ik; // 2 pi i^k
    let term_tol = 1e-10 * lhs.norm().max(1e-8);
    let tail_window = 8usize;
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut recent: Vec<f64> = Vec::new();
    let mut n = 1u64;
    let dual_terms = loop {
        coeffs.ensure_range(n).map_err(|_| Error::CoefficientRangeExceeded {
            needed: n,
            available: coeffs.nmax(),
        })?;
        let integral = kernel.integral(n)?;
        let phase =
            -TAU * reduce_signed((abar as i128 * n as i128 % c as i128) as i64, c) as f64 / cf;
        let term = coeffs.lambda(n) * Complex64::from_polar(1.0, phase) * prefactor * integral;
        rhs += term;
        // Tail envelope: |lambda| <= d(n) lets the kernel magnitude bound
        // every possible upcoming term of comparable index.
        let envelope = TAU * divisor_count(n) as f64 * integral.norm();
        recent.push(term.norm().max(envelope));
        if recent.len() > tail_window {
            recent.remove(0);
        }
        if n >= 16 && recent.len() == tail_window && recent.iter().all(|&t| t < term_tol) {
            break n;
        }
        n += 1;
    };

    let report = VerificationReport::new("voronoi-two-sided", "Lemma V")
        .param("a", a)
        .param("c", c)
        .param("window_support", vec![lo, hi])
        .param("weight", coeffs.weight)
        .param("dual_terms", dual_terms)
        .param("source", coeffs.describe())
        .sides(lhs, rhs);
    let pass = report.rel_error <= 1e-6;
    Ok(report.passed(pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autforms::tau_series;

    #[test]
    fn narrow_window_identity() {
        let coeffs = tau_series(1500);
        let w = SmoothWindow::dual_check_window(40.0);
        let quad = QuadratureSpec::default();
        let rep = voronoi_check(1, 1, &coeffs, &w, &quad).unwrap();
        assert!(rep.pass, "{rep}");
    }

    #[test]
    fn small_identity_c1() {
        let coeffs = tau_series(2000);
        let w = SmoothWindow::dual_check_window(120.0);
        let quad = QuadratureSpec::default();
        let rep = voronoi_check(1, 1, &coeffs, &w, &quad).unwrap();
        assert!(rep.pass, "rel error {}", rep.rel_error);
    }

    #[test]
    fn small_identity_c5() {
        let coeffs = tau_series(6000);
        let w = SmoothWindow::dual_check_window(100.0);
        let quad = QuadratureSpec::default();
        let rep = voronoi_check(2, 5, &coeffs, &w, &quad).unwrap();
        assert!(rep.pass, "rel error {}", rep.rel_error);
    }

    #[test]
    fn kernel_reuse_is_consistent() {
        let coeffs = tau_series(6000);
        let w = SmoothWindow::dual_check_window(100.0);
        let quad = QuadratureSpec::default();
        let mut kernel = VoronoiKernel::new(5, 12, w, quad);
        let r2 = voronoi_check_with_kernel(2, &coeffs, &mut kernel).unwrap();
        let r3 = voronoi_check_with_kernel(3, &coeffs, &mut kernel).unwrap();
        let fresh = voronoi_check(3, 5, &coeffs, &w, &quad).unwrap();
        assert!(r2.pass && r3.pass);
        assert!((r3.rhs.re - fresh.rhs.re).abs() < 1e-12);
        assert!((r3.rhs.im - fresh.rhs.im).abs() < 1e-12);
    }

    #[test]
    fn coprimality_enforced() {
        let coeffs = tau_series(100);
        let w = SmoothWindow::dual_check_window(20.0);
        let quad = QuadratureSpec::default();
        assert!(voronoi_check(2, 4, &coeffs, &w, &quad).is_err());
    }
}
