//! Probabilists' Hermite polynomials and the Breuer–Major constant `sigma_H`.
//!
//! `H_q(x) = (-1)^q e^{x^2/2} d^q/dx^q e^{-x^2/2}`, so `H_2(x) = x^2 - 1`,
//! `H_3(x) = x^3 - 3x`, `H_4(x) = x^4 - 6x^2 + 3`. The physicists'
//! polynomials (`2x`, `4x^2 - 2`, ...) are not supported anywhere in this
//! crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{rho_h, HurstIndex};
use crate::numeric::CompensatedSum;

/// Highest degree accepted by [`hermite_eval`].
pub const MAX_HERMITE_DEGREE: u32 = 32;
/// Highest monomial degree accepted by [`monomial_to_hermite`].
pub const MAX_MONOMIAL_DEGREE: u32 = 8;

/// Three-term recurrence without bounds checks.
#[inline]
pub(crate) fn hermite(q: u32, x: f64) -> f64 {
    match q {
        0 => 1.0,
        1 => x,
        2 => x * x - 1.0,
        3 => x * (x * x - 3.0),
        _ => {
            let (mut prev, mut cur) = (x * x - 1.0, x * (x * x - 3.0));
            for j in 3..q {
                let next = x * cur - j as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `H_q(x)` via `H_{q+1} = x H_q - q H_{q-1}`.
pub fn hermite_eval(q: u32, x: f64) -> Result<f64> {
    if q > MAX_HERMITE_DEGREE {
        return Err(Error::Domain(format!("Hermite degree {q} exceeds {MAX_HERMITE_DEGREE}")));
    }
    Ok(hermite(q, x))
}

/// Coefficients of `x^degree` in the Hermite basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteCoeffs {
    pub degree: u32,
    /// `coeffs[q]` multiplies `H_q`.
    pub coeffs: Vec<f64>,
}

impl HermiteCoeffs {
    pub fn coeff(&self, q: u32) -> f64 {
        self.coeffs.get(q as usize).copied().unwrap_or(0.0)
    }

    /// `sum_q coeffs[q] H_q(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(q, c)| if *c == 0.0 { 0.0 } else { c * hermite(q as u32, x) })
            .sum()
    }
}

/// Expand `x^p` as `sum_q c_q H_q(x)`.
///
/// Built by repeated multiplication with `x`, using
/// `x H_q = H_{q+1} + q H_{q-1}`.
pub fn monomial_to_hermite(p: u32) -> Result<HermiteCoeffs> {
    if p > MAX_MONOMIAL_DEGREE {
        return Err(Error::Domain(format!("monomial degree {p} exceeds {MAX_MONOMIAL_DEGREE}")));
    }
    let mut coeffs = vec![1.0];
    for _ in 0..p {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (q, &c) in coeffs.iter().enumerate() {
            next[q + 1] += c;
            if q > 0 {
                next[q - 1] += q as f64 * c;
            }
        }
        coeffs = next;
    }
    Ok(HermiteCoeffs { degree: p, coeffs })
}

/// Value of `sigma_H` together with the evidence that the truncated series
/// has stabilised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaCertificate {
    pub hurst: f64,
    pub value: f64,
    /// Truncation point `2K` of the returned value.
    pub truncation: u64,
    /// Value at truncation `K`.
    pub half_truncation_value: f64,
    /// `|value - half_truncation_value|`.
    pub difference: f64,
    /// Upper bound on `sigma_H - value` from the analytic tail estimate.
    pub tail_bound: f64,
    pub tol: f64,
}

/// Tuning of the series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SigmaOptions {
    pub initial_truncation: u64,
    pub max_truncation: u64,
}

impl Default for SigmaOptions {
    fn default() -> Self {
        Self { initial_truncation: 1024, max_truncation: 1 << 20 }
    }
}

/// Bound on `sum_{k > K} rho_H(k)^2`.
///
/// `rho_H(k)` is half a second difference of `x^{2H}`, so
/// `|rho_H(k)| <= H |2H - 1| (k - 1)^{2H - 2}` for `k >= 2`, and the tail is
/// dominated by `c^2 (K - 1)^{4H - 3} / (3 - 4H)`.
fn rho_square_tail_bound(h: HurstIndex, truncation: u64) -> f64 {
    let hv = h.value();
    let c = hv * (2.0 * hv - 1.0).abs();
    if c == 0.0 {
        return 0.0;
    }
    let e = 4.0 * hv - 3.0;
    c * c * ((truncation as f64) - 1.0).powf(e) / -e
}

/// Partial sum `sum_{|k| <= K} rho_H(k)^2` evaluated from the smallest terms up.
pub fn rho_square_partial_sum(h: HurstIndex, truncation: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for k in (1..=truncation).rev() {
        acc.add(2.0 * rho_h(h, k as i64).powi(2));
    }
    acc.add(1.0);
    acc.total()
}

/// `sigma_H = sqrt(2 sum_{k in Z} rho_H(k)^2)` for `0 < H < 3/4`.
///
/// At `H = 1/4` this is `sqrt(1/2 sum_k (sqrt|k+1| + sqrt|k-1| - 2 sqrt|k|)^2)`.
pub fn sigma_h(h: HurstIndex, tol: f64) -> Result<SigmaCertificate> {
    sigma_h_with(h, tol, SigmaOptions::default())
}

pub fn sigma_h_with(h: HurstIndex, tol: f64, opts: SigmaOptions) -> Result<SigmaCertificate> {
    if h.value() >= 0.75 {
        return Err(Error::UnsupportedRegime(format!(
            "sigma_H diverges for H >= 3/4, got H = {h}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut k = opts.initial_truncation.max(2);
    // Running sum over 1..=k; extended in place as k doubles.
    let mut tail = CompensatedSum::new();
    for j in (1..=k).rev() {
        tail.add(rho_h(h, j as i64).powi(2));
    }
    loop {
        let half_value = (2.0 * (1.0 + 2.0 * tail.total())).sqrt();
        let mut ext = CompensatedSum::new();
        for j in ((k + 1)..=(2 * k)).rev() {
            ext.add(rho_h(h, j as i64).powi(2));
        }
        tail.add(ext.total());
        let value = (2.0 * (1.0 + 2.0 * tail.total())).sqrt();
        let difference = (value - half_value).abs();
        // sigma^2 gains at most 4 * tail; sqrt is concave.
        let tail_bound = 2.0 * rho_square_tail_bound(h, 2 * k) / value;
        if difference < tol && tail_bound < tol {
            return Ok(SigmaCertificate {
                hurst: h.value(),
                value,
                truncation: 2 * k,
                half_truncation_value: half_value,
                difference,
                tail_bound,
                tol,
            });
        }
        k *= 2;
        if 2 * k > opts.max_truncation {
            return Err(Error::NotConverged(format!(
                "sigma_H at H = {h}: difference {difference:e}, tail bound {tail_bound:e} at truncation {k}"
            )));
        }
    }
}
