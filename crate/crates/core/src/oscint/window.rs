//! C-infinity bump windows glued from exp(-1/t) transitions.

use crate::{Error, Result};

use super::quadrature::{integrate_real, QuadratureSpec};

/// exp(-1/t) for t > 0, zero otherwise.
#[inline]
fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// d/dt exp(-1/t) = exp(-1/t)/t^2.
#[inline]
fn psi_prime(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp() / (t * t)
    } else {
        0.0
    }
}

/// Smooth 0-to-1 step on [0, 1]: psi(t) / (psi(t) + psi(1-t)).
#[inline]
pub(crate) fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = psi(t);
    let b = psi(1.0 - t);
    a / (a + b)
}

/// Analytic derivative of `smoothstep`.
#[inline]
pub(crate) fn smoothstep_prime(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let a = psi(t);
    let b = psi(1.0 - t);
    let ap = psi_prime(t);
    let bp = psi_prime(1.0 - t);
    (ap * b + a * bp) / ((a + b) * (a + b))
}

/// A smooth window: identically 1 on the flat core, identically 0 outside
/// the support, glued with exp(-1/t) transitions in between.
#[derive(Clone, Copy, Debug)]
pub struct SmoothWindow {
    support: (f64, f64),
    core: (f64, f64),
}

impl SmoothWindow {
    pub fn new(a: f64, core_lo: f64, core_hi: f64, b: f64) -> Result<Self> {
        if !(a < core_lo && core_lo <= core_hi && core_hi < b) {
            return Err(Error::PreconditionViolated(format!(
                "window needs a < core_lo <= core_hi < b, got {a}, {core_lo}, {core_hi}, {b}"
            )));
        }
        Ok(SmoothWindow {
            support: (a, b),
            core: (core_lo, core_hi),
        })
    }

    /// The window supported on [1/2, 3] and flat on [1, 2].
    pub fn standard_v() -> Self {
        SmoothWindow {
            support: (0.5, 3.0),
            core: (1.0, 2.0),
        }
    }

    /// Companion window of the same shape for the second coefficient sum.
    pub fn standard_u() -> Self {
        Self::standard_v()
    }

    /// Window scaled to [N, 2N] with flat core [1.25N, 1.625N], for the
    /// two-sided summation-formula check.
    pub fn dual_check_window(n_scale: f64) -> Self {
        SmoothWindow {
            support: (n_scale, 2.0 * n_scale),
            core: (1.25 * n_scale, 1.625 * n_scale),
        }
    }

    /// Smoother variant of the standard window (short flat core, long
    /// tapers), used where fast decay under oscillation matters.
    pub fn tapered_v() -> Self {
        SmoothWindow {
            support: (0.5, 3.0),
            core: (1.2, 1.5),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn core(&self) -> (f64, f64) {
        self.core
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        let (c, d) = self.core;
        if x <= a || x >= b {
            0.0
        } else if x >= c && x <= d {
            1.0
        } else if x < c {
            smoothstep((x - a) / (c - a))
        } else {
            smoothstep((b - x) / (b - d))
        }
    }

    /// Analytic first derivative.
    pub fn derivative(&self, x: f64) -> f64 {
        let (a, b) = self.support;
        let (c, d) = self.core;
        if x <= a || x >= b || (x >= c && x <= d) {
            0.0
        } else if x < c {
            smoothstep_prime((x - a) / (c - a)) / (c - a)
        } else {
            -smoothstep_prime((b - x) / (b - d)) / (b - d)
        }
    }

    /// Integral over the support (smooth integrand, fixed panel rule).
    pub fn integral(&self) -> f64 {
        let (a, b) = self.support;
        let spec = QuadratureSpec {
            min_panels: 24,
            ..QuadratureSpec::default()
        };
        integrate_real(|x| self.eval(x), a, b, 4.0, &spec)
            .expect("smooth window integral converges")
    }

    /// Rescale domain by s: the result is supported on [s a, s b].
    pub fn scaled(&self, s: f64) -> Self {
        SmoothWindow {
            support: (self.support.0 * s, self.support.1 * s),
            core: (self.core.0 * s, self.core.1 * s),
        }
    }
}
