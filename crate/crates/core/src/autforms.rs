//! Fourier coefficients of the weight-12 level-1 discriminant form, used as
//! the concrete coefficient source, plus coefficient-average checks.
//!
//! Raw coefficients are exact integers from the eta-product expansion; the
//! arithmetic is checked 128-bit, which is exact (with ample margin) for the
//! ranges in play and panics rather than wrap on any overflow. The normalized
//! values lambda(n) = a(n) / n^{(k-1)/2} are derived once as doubles.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::modarith::divisor_count;
use crate::report::VerificationReport;
use crate::{Error, Result};

/// Where a coefficient sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientKind {
    /// Exact discriminant-form coefficients.
    Delta,
    /// Seeded random unimodular multiplicative model (Chebyshev lifts of
    /// random angles at primes).
    RandomMultiplicative { seed: u64 },
}

/// Normalized Hecke eigenvalues with weight metadata.
#[derive(Clone, Debug)]
pub struct CuspFormCoefficients {
    pub weight: u32,
    pub level: u32,
    pub kind: CoefficientKind,
    /// Prime whose multiples were zeroed, when emulating a form with
    /// vanishing coefficients at p.
    pub zeroed_at: Option<u64>,
    raw: Option<Vec<i128>>,
    lambda: Vec<f64>,
}

impl CuspFormCoefficients {
    pub fn nmax(&self) -> u64 {
        self.lambda.len() as u64
    }

    /// lambda(n); panics when n is out of range (use `ensure_range` first).
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda[(n - 1) as usize]
    }

    pub fn lambda_slice(&self) -> &[f64] {
        &self.lambda
    }

    /// Exact integer coefficient a(n), when the source is exact.
    pub fn raw(&self, n: u64) -> Option<i128> {
        self.raw.as_ref().map(|r| r[(n - 1) as usize])
    }

    pub fn ensure_range(&self, needed: u64) -> Result<()> {
        if needed > self.nmax() {
            return Err(Error::CoefficientRangeExceeded {
                needed,
                available: self.nmax(),
            });
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let base = match self.kind {
            CoefficientKind::Delta => "delta".to_string(),
            CoefficientKind::RandomMultiplicative { seed } => {
                format!("random-multiplicative(seed={seed})")
            }
        };
        match self.zeroed_at {
            Some(p) => format!("{base}, p-primitive emulation (p={p})"),
            None => base,
        }
    }

    /// Copy with coefficients at multiples of p set to zero.
    pub fn with_multiples_zeroed(&self, p: u64) -> Self {
        let mut out = self.clone();
        out.zeroed_at = Some(p);
        let step = p as usize;
        if let Some(raw) = out.raw.as_mut() {
            for i in (step - 1..raw.len()).step_by(step) {
                raw[i] = 0;
            }
        }
        for i in (step - 1..out.lambda.len()).step_by(step) {
            out.lambda[i] = 0.0;
        }
        out
    }

    /// Random multiplicative sequence: at each prime draw an angle theta and
    /// set lambda(p^j) by the Hecke recurrence with lambda(p) = 2 cos(theta),
    /// then extend multiplicatively.
    pub fn random_multiplicative(nmax: u64, seed: u64) -> Self {
        let n = nmax as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // smallest-prime-factor sieve
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                for j in (i..=n).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        let mut lam_p = vec![0.0f64; n + 1];
        for p in 2..=n {
            if spf[p] == p as u32 {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                lam_p[p] = 2.0 * theta.cos();
            }
        }
        let mut lambda = vec![0.0f64; n];
        if n >= 1 {
            lambda[0] = 1.0;
        }
        for m in 2..=n {
            let p = spf[m] as usize;
            // m = p^e * rest
            let mut e = 0u32;
            let mut rest = m;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if rest > 1 {
                lambda[m - 1] = lambda[rest - 1] * lambda[m / rest - 1];
            } else {
                // pure prime power: recurrence lam(p^e) = lam(p) lam(p^{e-1}) - lam(p^{e-2})
                lambda[m - 1] = if e == 1 {
                    lam_p[p]
                } else {
                    lam_p[p] * lambda[m / p - 1]
                        - if e >= 2 { lambda[m / (p * p) - 1] } else { 0.0 }
                };
            }
        }
        CuspFormCoefficients {
            weight: 12,
            level: 1,
            kind: CoefficientKind::RandomMultiplicative { seed },
            zeroed_at: None,
            raw: None,
            lambda,
        }
    }

    /// Largest violation of |lambda(n)| <= d(n) over the whole table.
    pub fn max_deligne_excess(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for n in 1..=self.nmax() {
            let excess = self.lambda(n).abs() - divisor_count(n) as f64;
            if excess > worst {
                worst = excess;
            }
        }
        worst
    }

    /// Number of prime powers p^j <= limit violating the exact recursion
    /// a(p^{j+1}) = a(p) a(p^j) - p^{k-1} a(p^{j-1}). Requires raw integers.
    pub fn hecke_recursion_violations(&self, limit: u64) -> Result<usize> {
        let raw = self
            .raw
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("no exact coefficients".into()))?;
        self.ensure_range(limit)?;
        let a = |n: u64| raw[(n - 1) as usize];
        let mut violations = 0usize;
        let pk = |p: u64| (p as i128).pow(self.weight - 1);
        for p in crate::modarith::primes_in(2, limit) {
            let mut prev = 1i128; // a(p^0)
            let mut cur = a(p);
            let mut power = p;
            while power * p <= limit {
                let next = a(power * p);
                let expected = a(p)
                    .checked_mul(cur)
                    .and_then(|x| x.checked_sub(pk(p).checked_mul(prev).expect("overflow")))
                    .expect("overflow");
                if next != expected {
                    violations += 1;
                }
                prev = cur;
                cur = next;
                power *= p;
            }
        }
        Ok(violations)
    }

    /// Writes the coefficient table as a text cache with a checksummed header.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let raw = self
            .raw
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("no exact coefficients to cache".into()))?;
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut body = String::with_capacity(raw.len() * 8);
        for (i, v) in raw.iter().enumerate() {
            body.push_str(&format!("{} {}\n", i + 1, v));
        }
        let checksum = fnv1a(body.as_bytes());
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        writeln!(
            f,
            "# ntcheck coefficient cache v1\n# weight={} level={} nmax={} checksum={:016x}",
            self.weight,
            self.level,
            raw.len(),
            checksum
        )?;
        f.write_all(body.as_bytes())?;
        f.sync_all().ok();
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines();
        let magic = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("empty file".into()))?;
        if magic != "# ntcheck coefficient cache v1" {
            return Err(Error::CacheFormat(format!("bad magic line {magic:?}")));
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("missing header".into()))?;
        let mut weight = 0u32;
        let mut nmax = 0usize;
        let mut checksum = 0u64;
        let mut level = 1u32;
        for field in header.trim_start_matches('#').split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::CacheFormat(format!("bad header field {field:?}")))?;
            match key {
                "weight" => weight = value.parse().map_err(|_| bad_field(field))?,
                "level" => level = value.parse().map_err(|_| bad_field(field))?,
                "nmax" => nmax = value.parse().map_err(|_| bad_field(field))?,
                "checksum" => {
                    checksum = u64::from_str_radix(value, 16).map_err(|_| bad_field(field))?
                }
                _ => return Err(bad_field(field)),
            }
        }
        let body_start = text
            .match_indices('\n')
            .nth(1)
            .map(|(i, _)| i + 1)
            .ok_or_else(|| Error::CacheFormat("missing body".into()))?;
        let body = &text[body_start..];
        if fnv1a(body.as_bytes()) != checksum {
            return Err(Error::CacheFormat("checksum mismatch".into()));
        }
        let mut raw = Vec::with_capacity(nmax);
        for (i, line) in body.lines().enumerate() {
            let (n_str, v_str) = line
                .split_once(' ')
                .ok_or_else(|| Error::CacheFormat(format!("bad row {line:?}")))?;
            let n: usize = n_str.parse().map_err(|_| bad_row(line))?;
            if n != i + 1 {
                return Err(Error::CacheFormat(format!("row {n} out of order")));
            }
            raw.push(v_str.parse::<i128>().map_err(|_| bad_row(line))?);
        }
        if raw.len() != nmax {
            return Err(Error::CacheFormat(format!(
                "expected {nmax} rows, found {}",
                raw.len()
            )));
        }
        Ok(from_raw(weight, level, raw))
    }

    /// Loads from `dir/tau_<nmax>.txt`, rebuilding and caching when absent or
    /// unreadable.
    pub fn load_or_build(nmax: u64, dir: &Path) -> Result<Self> {
        let path = cache_path(dir, nmax);
        if path.exists() {
            match Self::read_cache(&path) {
                Ok(c) if c.nmax() == nmax && c.weight == 12 => return Ok(c),
                _ => {} // fall through and regenerate
            }
        }
        let coeffs = tau_series(nmax);
        coeffs.write_cache(&path)?;
        Ok(coeffs)
    }
}

pub fn cache_path(dir: &Path, nmax: u64) -> PathBuf {
    dir.join(format!("tau_{nmax}.txt"))
}

impl CuspFormCoefficients {
    /// Bare lambda container for cross-module oracle tests.
    #[doc(hidden)]
    pub fn from_lambda_for_tests(lambda: Vec<f64>) -> Self {
        CuspFormCoefficients {
            weight: 12,
            level: 1,
            kind: CoefficientKind::Delta,
            zeroed_at: None,
            raw: None,
            lambda,
        }
    }
}

fn bad_field(field: &str) -> Error {
    Error::CacheFormat(format!("bad header field {field:?}"))
}

fn bad_row(line: &str) -> Error {
    Error::CacheFormat(format!("bad row {line:?}"))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn from_raw(weight: u32, level: u32, raw: Vec<i128>) -> CuspFormCoefficients {
    let exponent = (weight as f64 - 1.0) / 2.0;
    let lambda = raw
        .iter()
        .enumerate()
        .map(|(i, &v)| v as f64 / ((i + 1) as f64).powf(exponent))
        .collect();
    CuspFormCoefficients {
        weight,
        level,
        kind: CoefficientKind::Delta,
        zeroed_at: None,
        raw: Some(raw),
        lambda,
    }
}

/// Expands q prod (1 - q^n)^24 to exact integer coefficients tau(1..nmax)
/// via the sparse pentagonal-number series multiplied in 24 times.
pub fn tau_series(nmax: u64) -> CuspFormCoefficients {
    let size = nmax as usize; // exponents 0..=nmax-1 of the eta quotient
    assert!(size >= 1, "nmax must be >= 1");
    // generalized pentagonal exponents g(k) = k(3k-1)/2, k = 0, ±1, ±2, ...
    let mut pentagonal: Vec<(usize, bool)> = vec![(0, true)];
    let mut k = 1i64;
    loop {
        let sign = k % 2 == 0;
        let e1 = (k * (3 * k - 1) / 2) as usize;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e1 >= size && e2 >= size {
            break;
        }
        if e1 < size {
            pentagonal.push((e1, sign));
        }
        if e2 < size {
            pentagonal.push((e2, sign));
        }
        k += 1;
    }
    let mut acc = vec![0i128; size];
    acc[0] = 1;
    let mut next = vec![0i128; size];
    for _ in 0..24 {
        next.iter_mut().for_each(|v| *v = 0);
        for &(e, positive) in &pentagonal {
            if positive {
                for i in e..size {
                    next[i] = next[i].checked_add(acc[i - e]).expect("tau overflow");
                }
            } else {
                for i in e..size {
                    next[i] = next[i].checked_sub(acc[i - e]).expect("tau overflow");
                }
            }
        }
        std::mem::swap(&mut acc, &mut next);
    }
    from_raw(12, 1, acc)
}

/// Fits the log-log slope of N -> sum_{n<=N} |lambda(n)|^2 and reports the
/// constants; pass requires slope within [0.9, 1.1].
pub fn ramanujan_average_check(
    coeffs: &CuspFormCoefficients,
    n_list: &[u64],
) -> Result<VerificationReport> {
    if n_list.len() < 2 {
        return Err(Error::PreconditionViolated(
            "need at least two N values to fit a slope".into(),
        ));
    }
    let max_n = *n_list.iter().max().unwrap();
    coeffs.ensure_range(max_n)?;
    let mut sums = Vec::with_capacity(n_list.len());
    let mut sorted = n_list.to_vec();
    sorted.sort_unstable();
    let mut acc = 0.0f64;
    let mut cursor = 1u64;
    for &n in &sorted {
        while cursor <= n {
            let l = coeffs.lambda(cursor);
            acc += l * l;
            cursor += 1;
        }
        sums.push(acc);
    }
    // least squares on (ln N, ln sum)
    let xs: Vec<f64> = sorted.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = sums.iter().map(|&s| s.ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let report = VerificationReport::new("ramanujan-average", "Eq. (RA)")
        .param("n_list", sorted.clone())
        .param("sums", sums.clone())
        .param("constant", intercept.exp())
        .param("source", coeffs.describe())
        .sides(slope, 1.0)
        .ratio(slope);
    let pass = (0.9..=1.1).contains(&slope) && sums.windows(2).all(|w| w[1] >= w[0]);
    Ok(report.passed(pass))
}

/// Measures sup over sampled x of |sum lambda(n) e(x n) V(n/N)| / sqrt(N)
/// on a deterministic grid of x values; pass envelope is C N^epsilon.
pub fn wilton_scan(
    coeffs: &CuspFormCoefficients,
    n_scale: u64,
    x_samples: usize,
    window: &dyn Fn(f64) -> f64,
    envelope_c: f64,
    envelope_eps: f64,
) -> Result<VerificationReport> {
    coeffs.ensure_range(3 * n_scale)?;
    if x_samples == 0 {
        return Err(Error::PreconditionViolated("x_samples must be > 0".into()));
    }
    let nf = n_scale as f64;
    // active coefficient range under the window
    let terms: Vec<(u64, f64)> = (1..=3 * n_scale)
        .filter_map(|n| {
            let v = window(n as f64 / nf);
            (v != 0.0).then(|| (n, coeffs.lambda(n) * v))
        })
        .collect();
    let mut sup = 0.0f64;
    let mut arg_sup = 0.0f64;
    for j in 0..x_samples {
        let x = j as f64 / x_samples as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for &(n, c) in &terms {
            // e(x n) with the integer part reduced before multiplication
            let phase = TAU * (x * n as f64).fract();
            total += c * Complex64::from_polar(1.0, phase);
        }
        let ratio = total.norm() / nf.sqrt();
        if ratio > sup {
            sup = ratio;
            arg_sup = x;
        }
    }
    let envelope = envelope_c * nf.powf(envelope_eps);
    let report = VerificationReport::new("wilton-sup", "Lemma 3.1 (Wilton bound)")
        .param("n", n_scale)
        .param("x_samples", x_samples)
        .param("argmax_x", arg_sup)
        .param("envelope_c", envelope_c)
        .param("envelope_eps", envelope_eps)
        .param("source", coeffs.describe())
        .sides(sup, envelope)
        .ratio(sup / envelope);
    let pass = sup <= envelope;
    Ok(report.passed(pass))
}
