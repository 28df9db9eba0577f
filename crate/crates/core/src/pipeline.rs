//! Desk-scale re-enactment of the circle-method approximation: the direct
//! coefficient sum S(N) against its moduli-averaged counterpart, with the
//! approximation-gap envelope check.
//!
//! The averaged sum is computed per quadrature node x by the factored method:
//! for each modulus q and reduced a, the n- and m-sums are grouped by residue
//! class mod p, and the full b-sum collapses onto matching classes. A literal
//! triple-sum evaluator is kept alongside as the algebra oracle for tiny
//! instances.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

use crate::autforms::CuspFormCoefficients;
use crate::circle::{build_moduli, ModuliMode, ModuliSet};
use crate::modarith::{gcd, is_prime};
use crate::oscint::{gauss_legendre, SmoothWindow};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// All tunables of one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub p: u64,
    pub n_scale: u64,
    pub eta: f64,
    /// Q = ceil(sqrt(N/p) p^eta).
    pub q_scale: u64,
    /// delta = p / N.
    pub delta: f64,
    pub moduli: ModuliSet,
    pub alpha_nodes: usize,
    pub v_window: SmoothWindow,
    pub u_window: SmoothWindow,
}

impl PipelineParams {
    pub fn new(
        p: u64,
        n_scale: u64,
        eta: f64,
        mode: ModuliMode,
        alpha_nodes: usize,
    ) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n_scale == 0 || alpha_nodes == 0 {
            return Err(Error::PreconditionViolated(
                "need N >= 1 and at least one quadrature node".into(),
            ));
        }
        let q_scale = ((n_scale as f64 / p as f64).sqrt() * (p as f64).powf(eta)).ceil() as u64;
        let moduli = build_moduli(q_scale.max(2), p, mode)?;
        let delta = p as f64 / n_scale as f64;
        Ok(PipelineParams {
            p,
            n_scale,
            eta,
            q_scale: q_scale.max(2),
            delta,
            moduli,
            alpha_nodes,
            v_window: SmoothWindow::standard_v(),
            u_window: SmoothWindow::standard_u(),
        })
    }

    pub fn delta_in_window(&self) -> bool {
        self.moduli.delta_in_range(self.delta)
    }

    /// Envelope N sqrt(Q^2 / (delta L^2)) of the approximation gap.
    pub fn gap_envelope(&self) -> f64 {
        let l = self.moduli.totient_sum as f64;
        let q = self.q_scale as f64;
        self.n_scale as f64 * (q * q / (self.delta * l * l)).sqrt()
    }
}

/// S(N) = sum_n lambda_f(n) lambda_g(n) V(n/N).
pub fn s_direct(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
) -> Result<Complex64> {
    let nf = params.n_scale as f64;
    let (lo, hi) = params.v_window.support();
    let n_hi = (hi * nf).ceil() as u64;
    f.ensure_range(n_hi)?;
    g.ensure_range(n_hi)?;
    let n_lo = ((lo * nf).floor() as u64).max(1);
    let mut total = 0.0f64;
    for n in n_lo..=n_hi {
        let v = params.v_window.eval(n as f64 / nf);
        if v != 0.0 {
            total += f.lambda(n) * g.lambda(n) * v;
        }
    }
    Ok(Complex64::new(total, 0.0))
}

/// Active coefficient terms under a window: (n, lambda(n) * window(n/N)).
fn windowed_terms(
    coeffs: &CuspFormCoefficients,
    window: &SmoothWindow,
    n_scale: u64,
) -> Result<Vec<(u64, f64)>> {
    let nf = n_scale as f64;
    let (lo, hi) = window.support();
    let n_hi = (hi * nf).ceil() as u64;
    coeffs.ensure_range(n_hi)?;
    let n_lo = ((lo * nf).floor() as u64).max(1);
    Ok((n_lo..=n_hi)
        .filter_map(|n| {
            let w = window.eval(n as f64 / nf);
            (w != 0.0).then(|| (n, coeffs.lambda(n) * w))
        })
        .collect())
}

/// The averaged sum at a single offset x, factored per (q, a):
/// (1/(L p)) sum_q sum*_a sum_b [n-sum](a,q,b,x) [m-sum](a,q,b,x).
/// Grouping each inner sum by the residue class of n mod p collapses the
/// b-sum onto p * sum_r h_g[r] h_f[r].
pub fn s_tilde_x(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
    x: f64,
) -> Result<Complex64> {
    let p = params.p;
    let pf = p as f64;
    let g_terms = windowed_terms(g, &params.v_window, params.n_scale)?;
    let f_terms = windowed_terms(f, &params.u_window, params.n_scale)?;

    // e(x n / p) tables over the active ranges.
    let ex_g: Vec<Complex64> = g_terms
        .iter()
        .map(|&(n, _)| Complex64::from_polar(1.0, TAU * x * n as f64 / pf))
        .collect();
    let ex_f: Vec<Complex64> = f_terms
        .iter()
        .map(|&(m, _)| Complex64::from_polar(1.0, -TAU * x * m as f64 / pf))
        .collect();

    let mut per_q: Vec<(u64, Complex64)> = params
        .moduli
        .moduli
        .par_iter()
        .map(|&q| {
            let pq = p * q;
            // e(j / pq) table; indices stay below pq
            let epq: Vec<Complex64> = (0..pq)
                .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / pq as f64))
                .collect();
            let mut q_total = Complex64::new(0.0, 0.0);
            let mut h_g = vec![Complex64::new(0.0, 0.0); p as usize];
            let mut h_f = vec![Complex64::new(0.0, 0.0); p as usize];
            for a in 1..q {
                if gcd(a, q) != 1 {
                    continue;
                }
                h_g.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                h_f.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for (i, &(n, c)) in g_terms.iter().enumerate() {
                    let idx = (a as u128 * n as u128 % pq as u128) as usize;
                    h_g[(n % p) as usize] += c * epq[idx] * ex_g[i];
                }
                for (i, &(m, c)) in f_terms.iter().enumerate() {
                    let idx = (a as u128 * m as u128 % pq as u128) as usize;
                    h_f[(m % p) as usize] += c * epq[idx].conj() * ex_f[i];
                }
                let mut pair = Complex64::new(0.0, 0.0);
                for r in 0..p as usize {
                    pair += h_g[r] * h_f[r];
                }
                q_total += pair;
            }
            (q, q_total * pf)
        })
        .collect();

    // Deterministic reduction in sorted moduli order, independent of both the
    // worker count and the input ordering of the set.
    per_q.sort_by_key(|&(q, _)| q);
    let total: Complex64 = per_q.into_iter().map(|(_, v)| v).sum();
    Ok(total / (params.moduli.totient_sum as f64 * pf))
}

/// Literal evaluation of the same quantity as a triple sum over (b, n, m);
/// an independent algebra oracle for tiny instances.
pub fn s_tilde_x_direct(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
    x: f64,
) -> Result<Complex64> {
    let p = params.p;
    let pf = p as f64;
    let g_terms = windowed_terms(g, &params.v_window, params.n_scale)?;
    let f_terms = windowed_terms(f, &params.u_window, params.n_scale)?;
    let mut total = Complex64::new(0.0, 0.0);
    for &q in &params.moduli.moduli {
        let pq = (p * q) as f64;
        for a in 1..q {
            if gcd(a, q) != 1 {
                continue;
            }
            for b in 0..p {
                let mut n_sum = Complex64::new(0.0, 0.0);
                for &(n, c) in &g_terms {
                    let phase = TAU
                        * ((a * n) as f64 / pq + (b as f64 + x) * n as f64 / pf);
                    n_sum += c * Complex64::from_polar(1.0, phase);
                }
                let mut m_sum = Complex64::new(0.0, 0.0);
                for &(m, c) in &f_terms {
                    let phase = -TAU
                        * ((a * m) as f64 / pq + (b as f64 + x) * m as f64 / pf);
                    m_sum += c * Complex64::from_polar(1.0, phase);
                }
                total += n_sum * m_sum;
            }
        }
    }
    Ok(total / (params.moduli.totient_sum as f64 * pf))
}

/// The averaged sum: (1/(2 delta)) integral over [-delta, delta] of the
/// per-offset sum, by Gauss-Legendre quadrature with `alpha_nodes` nodes.
pub fn s_tilde(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
) -> Result<Complex64> {
    s_tilde_with_nodes(params, f, g, params.alpha_nodes)
}

pub fn s_tilde_with_nodes(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
    nodes: usize,
) -> Result<Complex64> {
    let (xs, ws) = gauss_legendre(nodes);
    let delta = params.delta;
    // values at all nodes, computed independently, then reduced in node order
    let values: Result<Vec<Complex64>> = xs
        .iter()
        .map(|&t| s_tilde_x(params, f, g, delta * t))
        .collect();
    let values = values?;
    let mut total = Complex64::new(0.0, 0.0);
    for (v, w) in values.iter().zip(ws.iter()) {
        total += *w * *v;
    }
    // (1/(2 delta)) * integral, with the [-1,1] -> [-delta, delta] Jacobian
    Ok(total * 0.5)
}

/// |S - S_tilde| against the envelope N sqrt(Q^2/(delta L^2)); the quadrature
/// error is self-reported from a half-node evaluation.
pub fn approximation_gap_check(
    params: &PipelineParams,
    f: &CuspFormCoefficients,
    g: &CuspFormCoefficients,
    envelope_factor: f64,
) -> Result<VerificationReport> {
    let direct = s_direct(params, f, g)?;
    let averaged = s_tilde(params, f, g)?;
    let coarse = s_tilde_with_nodes(params, f, g, (params.alpha_nodes / 2).max(2))?;
    let quadrature_estimate = (averaged - coarse).norm();
    let gap = (direct - averaged).norm();
    let envelope = params.gap_envelope();
    let report = VerificationReport::new("approximation-gap", "Lemma 3.1")
        .param("p", params.p)
        .param("n", params.n_scale)
        .param("eta", params.eta)
        .param("q_scale", params.q_scale)
        .param("l", params.moduli.totient_sum)
        .param("moduli_count", params.moduli.moduli.len())
        .param("delta", params.delta)
        .param("delta_in_window", params.delta_in_window())
        .param("alpha_nodes", params.alpha_nodes)
        .param("quadrature_estimate", quadrature_estimate)
        .param("envelope", envelope)
        .param("envelope_factor", envelope_factor)
        .param("lambda_f", f.describe())
        .param("lambda_g", g.describe())
        .sides(direct, averaged)
        .ratio(gap / (envelope_factor * envelope));
    let pass = gap <= envelope_factor * envelope;
    Ok(report.passed(pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autforms::tau_series;
    use crate::circle::tilde_indicator;

    fn tiny_params(p: u64, n: u64) -> PipelineParams {
        PipelineParams::new(p, n, 0.15, ModuliMode::Primes, 16).unwrap()
    }

    #[test]
    fn factored_matches_direct_oracle() {
        let params = tiny_params(3, 160);
        let coeffs = tau_series(3 * 160 + 8);
        let f = coeffs.with_multiples_zeroed(3);
        for x in [0.0, params.delta / 3.0, -params.delta * 0.8] {
            let fast = s_tilde_x(&params, &f, &coeffs, x).unwrap();
            let slow = s_tilde_x_direct(&params, &f, &coeffs, x).unwrap();
            assert!(
                (fast - slow).norm() <= 1e-8 * slow.norm().max(1.0),
                "x={x}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn vanishing_u_window_gives_zero() {
        let mut params = tiny_params(3, 120);
        // a sliver whose scaled support (120.5004, 120.5048) contains no integer
        params.u_window =
            SmoothWindow::new(1.004_17, 1.004_18, 1.004_19, 1.004_20).unwrap();
        let coeffs = tau_series(3 * 120 + 8);
        let v = s_tilde_x(&params, &coeffs, &coeffs, 0.001).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn linearity_and_reproducibility() {
        let params = tiny_params(3, 150);
        let coeffs = tau_series(3 * 150 + 8);
        let s1 = s_direct(&params, &coeffs, &coeffs).unwrap();
        // scaling the integrand linearly scales the sum
        let doubled = CuspFormCoefficients::from_lambda_for_tests(
            coeffs.lambda_slice().iter().map(|&l| 2.0 * l).collect(),
        );
        let s2 = s_direct(&params, &doubled, &coeffs).unwrap();
        assert!((s2 - 2.0 * s1).norm() <= 1e-12 * s1.norm().max(1.0));
        // bit-for-bit reproducibility across runs
        let s1_again = s_direct(&params, &coeffs, &coeffs).unwrap();
        assert_eq!(s1, s1_again);
    }

    #[test]
    fn delta_like_g_matches_circle_fourier() {
        // single nonzero lambda_g at n0: S_tilde reduces to an approximant-
        // weighted single frequency computed from the circle module
        let params = tiny_params(3, 120);
        let n0 = 150u64; // V(150/120) = V(1.25) = 1
        let nmax = 3 * 120 + 8;
        let f = tau_series(nmax as u64);
        let mut lam = vec![0.0f64; nmax];
        lam[(n0 - 1) as usize] = 1.0;
        let g = CuspFormCoefficients::from_lambda_for_tests(lam);
        let s = s_tilde(&params, &f, &g).unwrap();

        let approx = tilde_indicator(&params.moduli, params.delta).unwrap();
        let nf = params.n_scale as f64;
        let (lo, hi) = params.u_window.support();
        let mut expected = Complex64::new(0.0, 0.0);
        let m_lo = ((lo * nf).floor() as u64).max(1);
        let m_hi = (hi * nf).ceil() as u64;
        for m in m_lo..=m_hi {
            if (n0 as i64 - m as i64).rem_euclid(params.p as i64) != 0 {
                continue;
            }
            let u = params.u_window.eval(m as f64 / nf);
            if u == 0.0 {
                continue;
            }
            let t = (n0 as f64 - m as f64) / params.p as f64;
            expected += f.lambda(m) * u * approx.fourier_at(t);
        }
        expected *= params.v_window.eval(n0 as f64 / nf); // = 1
        assert!(
            (s - expected).norm() <= 1e-6 * expected.norm().max(1e-6),
            "pipeline {s} vs circle-module {expected}"
        );
    }

    #[test]
    fn quadrature_node_convergence() {
        let params = tiny_params(3, 120);
        let coeffs = tau_series(3 * 120 + 8);
        let f = coeffs.with_multiples_zeroed(3);
        let s16 = s_tilde_with_nodes(&params, &f, &coeffs, 16).unwrap();
        let s8 = s_tilde_with_nodes(&params, &f, &coeffs, 8).unwrap();
        let s32 = s_tilde_with_nodes(&params, &f, &coeffs, 32).unwrap();
        let reported = (s16 - s8).norm();
        let actual_gain = (s32 - s16).norm();
        assert!(actual_gain <= reported.max(1e-12), "{actual_gain} vs {reported}");
    }

    #[test]
    fn moduli_order_invariance() {
        let params = tiny_params(3, 120);
        let coeffs = tau_series(3 * 120 + 8);
        let mut reversed = params.clone();
        reversed.moduli.moduli.reverse();
        let a = s_tilde_x(&params, &coeffs, &coeffs, 0.001).unwrap();
        let b = s_tilde_x(&reversed, &coeffs, &coeffs, 0.001).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn gap_check_small() {
        let params = tiny_params(3, 200);
        let coeffs = tau_series(3 * 200 + 8);
        let f = coeffs.with_multiples_zeroed(3);
        let rep = approximation_gap_check(&params, &f, &coeffs, 10.0).unwrap();
        assert!(rep.pass, "{rep}");
    }
}
