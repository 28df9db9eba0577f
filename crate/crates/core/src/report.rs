//! Per-check verification records with lossless JSON/CSV serialization.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number serialized as `{re, im}`.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<f64> for ComplexValue {
    fn from(x: f64) -> Self {
        ComplexValue { re: x, im: 0.0 }
    }
}

impl ComplexValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Record of a single verification: inputs, both sides, errors, pass flag.
///
/// `params` is a sorted map so that serialization order is stable; `wall_ms`
/// is populated only when timing output is requested, keeping default output
/// byte-identical across runs and worker counts.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VerificationReport {
    pub check: String,
    /// Claim identifier for the statement being verified, e.g. "Lemma 2.2".
    pub anchor: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_error: f64,
    pub rel_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_ratio: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl VerificationReport {
    pub fn new(check: &str, anchor: &str) -> Self {
        VerificationReport {
            check: check.to_string(),
            anchor: anchor.to_string(),
            params: BTreeMap::new(),
            lhs: ComplexValue { re: 0.0, im: 0.0 },
            rhs: ComplexValue { re: 0.0, im: 0.0 },
            abs_error: 0.0,
            rel_error: 0.0,
            bound_ratio: None,
            pass: false,
            wall_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Sets both sides and derives absolute/relative errors.
    pub fn sides(mut self, lhs: impl Into<ComplexValue>, rhs: impl Into<ComplexValue>) -> Self {
        self.lhs = lhs.into();
        self.rhs = rhs.into();
        let dre = self.lhs.re - self.rhs.re;
        let dim = self.lhs.im - self.rhs.im;
        self.abs_error = dre.hypot(dim);
        let scale = self.lhs.abs().max(self.rhs.abs());
        self.rel_error = if scale > 0.0 { self.abs_error / scale } else { 0.0 };
        self
    }

    pub fn ratio(mut self, ratio: f64) -> Self {
        self.bound_ratio = Some(ratio);
        self
    }

    pub fn passed(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn csv_header() -> &'static str {
        "check,anchor,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,bound_ratio,pass"
    }

    pub fn to_csv_line(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},\"{}\",{},{},{},{},{},{},{},{}",
            self.check,
            self.anchor,
            params,
            self.lhs.re,
            self.lhs.im,
            self.rhs.re,
            self.rhs.im,
            self.abs_error,
            self.rel_error,
            self.bound_ratio.map(|r| r.to_string()).unwrap_or_default(),
            self.pass
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({}): abs={:.3e} rel={:.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.anchor,
            self.abs_error,
            self.rel_error,
            self.bound_ratio
                .map(|r| format!(" ratio={r:.3}"))
                .unwrap_or_default()
        )
    }
}
