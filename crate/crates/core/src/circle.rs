//! Jutila-style circle-method approximant: a moduli set, the associated
//! piecewise-constant approximation to the interval indicator, and exact
//! L2 deviation measurement.
//!
//! The approximant is an average of indicator functions of short intervals
//! centered at reduced fractions d/q. Everything here is piecewise constant,
//! so integration is done by exact breakpoint merging rather than quadrature;
//! the only numerical error is float summation.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::modarith::{euler_phi, gcd, primes_in};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// How the moduli collection is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuliMode {
    /// Primes in the dyadic window [Q, 2Q], excluding p.
    Primes,
    /// Products q1 q2 of primes drawn from two disjoint dyadic prime sets
    /// with Q1 Q2 close to Q; members land in the widened window [Q, 4Q].
    ProductOfTwoPrimeSets,
}

impl fmt::Display for ModuliMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliMode::Primes => write!(f, "primes"),
            ModuliMode::ProductOfTwoPrimeSets => write!(f, "product"),
        }
    }
}

/// A sorted collection of moduli with its totient mass L.
#[derive(Clone, Debug)]
pub struct ModuliSet {
    pub moduli: Vec<u64>,
    pub q_scale: u64,
    pub p_excluded: u64,
    pub mode: ModuliMode,
    /// L = sum of phi(q) over the set, in exact integer arithmetic.
    pub totient_sum: u64,
    /// The two prime factors lists in product mode.
    pub prime_factors: Option<(Vec<u64>, Vec<u64>)>,
}

impl ModuliSet {
    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    /// The admissible delta window (Q^-2, Q^-1) for this scale.
    pub fn delta_window(&self) -> (f64, f64) {
        let q = self.q_scale as f64;
        (q.powi(-2), q.recip())
    }

    pub fn delta_in_range(&self, delta: f64) -> bool {
        let (lo, hi) = self.delta_window();
        delta >= lo && delta <= hi
    }
}

/// Builds the moduli set for scale Q, excluding multiples of p.
pub fn build_moduli(q_scale: u64, p: u64, mode: ModuliMode) -> Result<ModuliSet> {
    if q_scale < 2 {
        return Err(Error::PreconditionViolated(format!(
            "Q must be >= 2, got {q_scale}"
        )));
    }
    let (moduli, factors) = match mode {
        ModuliMode::Primes => {
            let qs: Vec<u64> = primes_in(q_scale, 2 * q_scale)
                .into_iter()
                .filter(|&q| q % p != 0)
                .collect();
            (qs, None)
        }
        ModuliMode::ProductOfTwoPrimeSets => {
            let q1_scale = (q_scale as f64).sqrt().floor().max(2.0) as u64;
            let q2_scale = (q_scale / q1_scale).max(2);
            let phi1: Vec<u64> = primes_in(q1_scale, 2 * q1_scale)
                .into_iter()
                .filter(|&q| q % p != 0)
                .collect();
            let phi2: Vec<u64> = primes_in(q2_scale, 2 * q2_scale)
                .into_iter()
                .filter(|&q| q % p != 0 && !phi1.contains(&q))
                .collect();
            if phi2.is_empty() && phi1.len() >= 2 {
                // Windows coincide; split the primes alternately.
                let all = phi1.clone();
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (i, q) in all.into_iter().enumerate() {
                    if i % 2 == 0 {
                        a.push(q);
                    } else {
                        b.push(q);
                    }
                }
                return finish_product(q_scale, p, a, b);
            }
            if phi1.is_empty() || phi2.is_empty() {
                return Err(Error::EmptySet(format!(
                    "no disjoint prime windows at Q1={q1_scale}, Q2={q2_scale} avoiding p={p}"
                )));
            }
            let mut prods: Vec<u64> = phi1
                .iter()
                .flat_map(|&a| phi2.iter().map(move |&b| a * b))
                .collect();
            prods.sort_unstable();
            prods.dedup();
            (prods, Some((phi1, phi2)))
        }
    };
    if moduli.is_empty() {
        return Err(Error::EmptySet(format!(
            "no admissible moduli in [{q_scale}, {}] avoiding p={p}",
            2 * q_scale
        )));
    }
    let totient_sum = moduli.iter().map(|&q| euler_phi(q)).sum();
    Ok(ModuliSet {
        moduli,
        q_scale,
        p_excluded: p,
        mode,
        totient_sum,
        prime_factors: factors,
    })
}

fn finish_product(q_scale: u64, p: u64, phi1: Vec<u64>, phi2: Vec<u64>) -> Result<ModuliSet> {
    if phi1.is_empty() || phi2.is_empty() {
        return Err(Error::EmptySet(format!(
            "prime window too thin for product mode at Q={q_scale}"
        )));
    }
    let mut prods: Vec<u64> = phi1
        .iter()
        .flat_map(|&a| phi2.iter().map(move |&b| a * b))
        .collect();
    prods.sort_unstable();
    prods.dedup();
    let totient_sum = prods.iter().map(|&q| euler_phi(q)).sum();
    Ok(ModuliSet {
        moduli: prods,
        q_scale,
        p_excluded: p,
        mode: ModuliMode::ProductOfTwoPrimeSets,
        totient_sum,
        prime_factors: Some((phi1, phi2)),
    })
}

/// A piecewise-constant function: values[i] on (breakpoints[i], breakpoints[i+1]),
/// zero outside the breakpoint range.
#[derive(Clone, Debug)]
pub struct PiecewiseConstantFn {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstantFn {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> (f64, f64) {
        if self.breakpoints.is_empty() {
            (0.0, 0.0)
        } else {
            (self.breakpoints[0], *self.breakpoints.last().unwrap())
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.breakpoints.len() < 2 || x < self.breakpoints[0] || x >= *self.breakpoints.last().unwrap() {
            return 0.0;
        }
        // Last interval strictly below the partition point found.
        let i = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).expect("no NaN breakpoints"))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        self.values[i.min(self.values.len() - 1)]
    }

    /// Exact integral as sum of value * length.
    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(v, w)| v * (w[1] - w[0]))
            .sum()
    }

    /// Integral of f(x) e(t x) dx in closed form per piece.
    pub fn fourier_at(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(self.integral(), 0.0);
        }
        let omega = TAU * t;
        let mut total = Complex64::new(0.0, 0.0);
        for (v, w) in self.values.iter().zip(self.breakpoints.windows(2)) {
            let eb = Complex64::from_polar(1.0, omega * w[1]);
            let ea = Complex64::from_polar(1.0, omega * w[0]);
            total += *v * (eb - ea);
        }
        total / Complex64::new(0.0, omega)
    }

    fn from_events(mut events: Vec<(f64, i64)>, height: f64) -> Self {
        // Events carry integer multiplicities of a common height, so the
        // merged values are independent of input order.
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN events"));
        let mut breakpoints = Vec::with_capacity(events.len());
        let mut deltas: Vec<i64> = Vec::with_capacity(events.len());
        for (x, d) in events {
            if let Some(&last) = breakpoints.last() {
                if last == x {
                    *deltas.last_mut().unwrap() += d;
                    continue;
                }
            }
            breakpoints.push(x);
            deltas.push(d);
        }
        let mut values = Vec::with_capacity(breakpoints.len().saturating_sub(1));
        let mut level = 0i64;
        for d in &deltas[..deltas.len().saturating_sub(1)] {
            level += d;
            values.push(level as f64 * height);
        }
        // Drop zero-effect breakpoints (adjacent equal levels).
        let mut bp = Vec::with_capacity(breakpoints.len());
        let mut vals = Vec::with_capacity(values.len());
        for (i, &b) in breakpoints.iter().enumerate() {
            if i == 0 || i == breakpoints.len() - 1 {
                bp.push(b);
                if i < values.len() {
                    vals.push(values[i]);
                }
                continue;
            }
            if values[i] != values[i - 1] {
                bp.push(b);
                vals.push(values[i]);
            }
        }
        PiecewiseConstantFn {
            breakpoints: bp,
            values: vals,
        }
    }
}

/// The normalized overlay of intervals [d/q - delta, d/q + delta] over all
/// reduced fractions of the moduli set, with height 1/(2 delta L) each.
pub fn tilde_indicator(phi: &ModuliSet, delta: f64) -> Result<PiecewiseConstantFn> {
    if !(delta > 0.0) {
        return Err(Error::InvalidDelta(delta));
    }
    let height = 1.0 / (2.0 * delta * phi.totient_sum as f64);
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * phi.totient_sum as usize);
    for &q in &phi.moduli {
        for d in reduced_residues(q) {
            let center = d as f64 / q as f64;
            events.push((center - delta, 1));
            events.push((center + delta, -1));
        }
    }
    Ok(PiecewiseConstantFn::from_events(events, height))
}

fn reduced_residues(q: u64) -> Vec<u64> {
    if q == 1 {
        return vec![0];
    }
    (1..q).filter(|&d| gcd(d, q) == 1).collect()
}

/// Exact integral of |1_[0,1] - tilde_indicator|^2 over the real line,
/// by merging the approximant's breakpoints with {0, 1}.
pub fn l2_deviation(phi: &ModuliSet, delta: f64) -> Result<f64> {
    let approx = tilde_indicator(phi, delta)?;
    Ok(l2_deviation_from(&approx))
}

/// L2 distance of a piecewise-constant function from the indicator of [0,1].
pub fn l2_deviation_from(approx: &PiecewiseConstantFn) -> f64 {
    let mut cuts: Vec<f64> = approx.breakpoints().to_vec();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("no NaN breakpoints"));
    cuts.dedup();
    let mut total = 0.0f64;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let mid = 0.5 * (x0 + x1);
        let indicator = if (0.0..=1.0).contains(&mid) && x0 >= 0.0 && x1 <= 1.0 {
            1.0
        } else {
            0.0
        };
        let v = approx.eval(mid);
        let d = indicator - v;
        total += d * d * (x1 - x0);
    }
    total
}

/// Delta selection rule for sweeps: either a fixed value or coeff * Q^exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaRule {
    Fixed(f64),
    PowerOfQ { coeff: f64, exponent: f64 },
}

impl DeltaRule {
    pub fn delta_for(&self, q_scale: u64) -> f64 {
        match *self {
            DeltaRule::Fixed(d) => d,
            DeltaRule::PowerOfQ { coeff, exponent } => coeff * (q_scale as f64).powf(exponent),
        }
    }
}

impl FromStr for DeltaRule {
    type Err = String;

    /// Accepts "0.01", "q^-1.5" or "2.5*q^-1.5".
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(idx) = s.find("q^") {
            let coeff_part = s[..idx].trim().trim_end_matches('*').trim();
            let coeff = if coeff_part.is_empty() {
                1.0
            } else {
                coeff_part
                    .parse::<f64>()
                    .map_err(|e| format!("bad coefficient {coeff_part:?}: {e}"))?
            };
            let exponent = s[idx + 2..]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad exponent in {s:?}: {e}"))?;
            Ok(DeltaRule::PowerOfQ { coeff, exponent })
        } else {
            s.parse::<f64>()
                .map(DeltaRule::Fixed)
                .map_err(|e| format!("bad delta rule {s:?}: {e}"))
        }
    }
}

impl fmt::Display for DeltaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DeltaRule::Fixed(d) => write!(f, "{d}"),
            DeltaRule::PowerOfQ { coeff, exponent } => {
                if coeff == 1.0 {
                    write!(f, "q^{exponent}")
                } else {
                    write!(f, "{coeff}*q^{exponent}")
                }
            }
        }
    }
}

/// One row of the deviation sweep.
#[derive(Clone, Debug)]
pub struct JutilaRow {
    pub q_scale: u64,
    pub moduli_count: usize,
    pub totient_sum: u64,
    pub delta: f64,
    pub delta_in_range: bool,
    pub integral: f64,
    pub deviation: f64,
    /// Q^2 / (delta L^2).
    pub bound: f64,
    pub ratio: f64,
}

/// Sweeps Q over `q_list`, measuring the exact deviation against the
/// Q^2/(delta L^2) envelope. Pass requires ratio <= `envelope` throughout;
/// L is reported on every row rather than asserted against a normalization.
pub fn jutila_bound_scan(
    q_list: &[u64],
    delta_rule: DeltaRule,
    p: u64,
    mode: ModuliMode,
    envelope: f64,
) -> Result<(Vec<JutilaRow>, VerificationReport)> {
    let mut rows = Vec::with_capacity(q_list.len());
    for &q_scale in q_list {
        let phi = build_moduli(q_scale, p, mode)?;
        let delta = delta_rule.delta_for(q_scale);
        if !(delta > 0.0) {
            return Err(Error::InvalidDelta(delta));
        }
        let approx = tilde_indicator(&phi, delta)?;
        let integral = approx.integral();
        let deviation = l2_deviation_from(&approx);
        let l = phi.totient_sum as f64;
        let bound = (q_scale as f64).powi(2) / (delta * l * l);
        rows.push(JutilaRow {
            q_scale,
            moduli_count: phi.len(),
            totient_sum: phi.totient_sum,
            delta,
            delta_in_range: phi.delta_in_range(delta),
            integral,
            deviation,
            bound,
            ratio: deviation / bound,
        });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    let worst_integral_err = rows
        .iter()
        .map(|r| (r.integral - 1.0).abs())
        .fold(0.0f64, f64::max);
    let report = VerificationReport::new("jutila-l2-deviation", "Lemma 2.2")
        .param("q_list", q_list.to_vec())
        .param("delta_rule", delta_rule.to_string())
        .param("p", p)
        .param("mode", mode.to_string())
        .param("envelope", envelope)
        .param("max_integral_error", worst_integral_err)
        .sides(max_ratio, envelope)
        .ratio(max_ratio / envelope);
    let pass = max_ratio <= envelope && worst_integral_err <= 1e-12;
    Ok((rows, report.passed(pass)))
}
