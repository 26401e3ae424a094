//! Covariance kernel of fractional Brownian motion and the discrete inner
//! products it induces on a uniform grid.
//!
//! Notation used below: on the canonical grid `k/n`, `delta_k` is the
//! indicator of `[k/n, (k+1)/n]` and `eps_l` the indicator of `[0, l/n]`.
//! Their inner products are covariances of the fBm increments and values:
//!
//! * `<delta_k, delta_l> = E[dB_k dB_l] = n^{-2H} rho_H(k - l)`
//! * `<eps_l, delta_k>   = E[B_{l/n} dB_k]`

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::stats::{rate_regression, RateFit};

/// Hurst index `H`, validated to lie in the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstIndex(f64);

/// Position of a Hurst index relative to the critical value `1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `H < 1/4`: the symmetric integral does not exist.
    Rough,
    /// `H = 1/4`: the symmetric sum converges only stably, with an
    /// independent Gaussian correction.
    Critical,
    /// `H > 1/4`: the classical change-of-variable formula holds.
    Smooth,
}

impl HurstIndex {
    /// The critical index `1/4` (exactly representable).
    pub const QUARTER: HurstIndex = HurstIndex(0.25);
    /// Standard Brownian motion.
    pub const HALF: HurstIndex = HurstIndex(0.5);

    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 && h < 1.0 {
            Ok(Self(h))
        } else {
            Err(Error::InvalidHurst(h))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the exponent appearing in every kernel.
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }

    pub fn regime(self) -> Regime {
        match self.0.partial_cmp(&0.25).expect("finite Hurst index") {
            std::cmp::Ordering::Less => Regime::Rough,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Smooth,
        }
    }

    pub fn is_critical(self) -> bool {
        self.regime() == Regime::Critical
    }

    pub(crate) fn require_critical(self, what: &str) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::UnsupportedRegime(format!(
                "{what} is only defined at H = 1/4, got H = {}",
                self.0
            )))
        }
    }
}

impl TryFrom<f64> for HurstIndex {
    type Error = Error;

    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

impl From<HurstIndex> for f64 {
    fn from(h: HurstIndex) -> f64 {
        h.0
    }
}

impl fmt::Display for HurstIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Uniform time grid of `n` steps on `[0, horizon]`.
///
/// The canonical grid has `horizon = 1` and times `k/n`. Estimator scalings
/// written as powers of `n` on the canonical grid use [`GridSpec::rate`]
/// (steps per unit time) on a general grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    horizon: f64,
}

impl GridSpec {
    pub fn new(n: usize, horizon: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 steps, got {n}")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidGrid(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self { n, horizon })
    }

    /// Canonical grid `k/n`, `k = 0..=n`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.n as f64
    }

    /// Steps per unit time; equals `n` on the canonical grid.
    pub fn rate(&self) -> f64 {
        self.n as f64 / self.horizon
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n {
            self.horizon
        } else {
            k as f64 * self.step()
        }
    }

    /// Index `m` with `time(m) = t` for a grid multiple `t` in `(0, horizon]`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        if !(t.is_finite() && t > 0.0) || t > self.horizon * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "time {t} outside (0, {}]",
                self.horizon
            )));
        }
        let scaled = t * self.rate();
        let m = scaled.round();
        if (scaled - m).abs() > 1e-9 * scaled.max(1.0) || m < 1.0 {
            return Err(Error::Domain(format!(
                "time {t} is not a multiple of the grid step {}",
                self.step()
            )));
        }
        Ok((m as usize).min(self.n))
    }
}

/// `R_H(t, s) = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2`.
pub fn covariance_rh(h: HurstIndex, t: f64, s: f64) -> Result<f64> {
    if !(t.is_finite() && s.is_finite()) || t < 0.0 || s < 0.0 {
        return Err(Error::Domain(format!(
            "covariance needs finite nonnegative times, got ({t}, {s})"
        )));
    }
    let e = h.twice();
    Ok(0.5 * (t.powf(e) + s.powf(e) - (t - s).abs().powf(e)))
}

/// Autocorrelation of unit-step fractional Gaussian noise,
/// `rho_H(k) = (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2`.
pub fn rho_h(h: HurstIndex, k: i64) -> f64 {
    let e = h.twice();
    let k = k.unsigned_abs() as f64;
    0.5 * ((k + 1.0).powf(e) + (k - 1.0).abs().powf(e) - 2.0 * k.powf(e))
}

fn check_index(name: &str, idx: usize, n: usize) -> Result<()> {
    if n == 0 || idx >= n {
        return Err(Error::Domain(format!("{name} = {idx} outside 0..{n}")));
    }
    Ok(())
}

/// `<delta_k, delta_l> = n^{-2H} rho_H(k - l)` for `0 <= k, l < n`.
pub fn inner_delta_delta(h: HurstIndex, k: usize, l: usize, n: usize) -> Result<f64> {
    check_index("k", k, n)?;
    check_index("l", l, n)?;
    Ok((n as f64).powf(-h.twice()) * rho_h(h, k as i64 - l as i64))
}

/// `<eps_l, delta_k> = E[B_{l/n} (B_{(k+1)/n} - B_{k/n})]` in closed form:
/// `n^{-2H}/2 ((k+1)^{2H} - k^{2H} - |k+1-l|^{2H} + |k-l|^{2H})`.
pub fn inner_eps_delta(h: HurstIndex, l: usize, k: usize, n: usize) -> Result<f64> {
    check_index("l", l, n)?;
    check_index("k", k, n)?;
    let e = h.twice();
    let k1 = (k + 1) as f64;
    let kf = k as f64;
    let lf = l as f64;
    let raw = k1.powf(e) - kf.powf(e) - (k1 - lf).abs().powf(e) + (kf - lf).abs().powf(e);
    Ok(0.5 * (n as f64).powf(-e) * raw)
}

/// The deterministic kernel sums whose growth in `n` controls every
/// estimator bound at `H = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSum {
    /// `sum_{k,l} |<eps_l, delta_k>|`, of order `n`.
    EpsDeltaAbs,
    /// `sum_{k,l} |<delta_l, delta_k>|^r`, of order `n^{1 - r/2}`.
    DeltaDeltaPow(u32),
    /// `sum_k |<eps_k, delta_k> + 1/(2 sqrt n)|`, identically `1/2`.
    DiagonalShift,
    /// `sum_k |<eps_k, delta_k>^2 - 1/(4n)|`, of order `n^{-1/2}`.
    DiagonalSquareShift,
}

impl KernelSum {
    /// Exponent of the asymptotic order in `n`.
    pub fn expected_exponent(self) -> f64 {
        match self {
            KernelSum::EpsDeltaAbs => 1.0,
            KernelSum::DeltaDeltaPow(r) => 1.0 - r as f64 / 2.0,
            KernelSum::DiagonalShift => 0.0,
            KernelSum::DiagonalSquareShift => -0.5,
        }
    }

    /// Parts of order `O(1)` are checked by boundedness rather than slope.
    pub fn is_bounded_order(self) -> bool {
        self.expected_exponent() == 0.0
    }

    /// Short label used on the command line (`ii`, `iii:r`, `iv`, `v`).
    pub fn label(self) -> String {
        match self {
            KernelSum::EpsDeltaAbs => "ii".into(),
            KernelSum::DeltaDeltaPow(r) => format!("iii:{r}"),
            KernelSum::DiagonalShift => "iv".into(),
            KernelSum::DiagonalSquareShift => "v".into(),
        }
    }
}

impl FromStr for KernelSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ii" => Ok(KernelSum::EpsDeltaAbs),
            "iv" => Ok(KernelSum::DiagonalShift),
            "v" => Ok(KernelSum::DiagonalSquareShift),
            _ => {
                let r = s
                    .strip_prefix("iii:")
                    .and_then(|r| r.parse::<u32>().ok())
                    .ok_or_else(|| Error::Domain(format!("unknown kernel sum `{s}`")))?;
                if r == 0 {
                    return Err(Error::Domain("kernel sum power must be >= 1".into()));
                }
                Ok(KernelSum::DeltaDeltaPow(r))
            }
        }
    }
}

/// Table `j^{2H}` for `j = 0..=n`.
fn power_table(h: HurstIndex, n: usize) -> Vec<f64> {
    let e = h.twice();
    (0..=n).map(|j| (j as f64).powf(e)).collect()
}

/// Exact value of a deterministic kernel sum on the canonical grid of size `n`.
///
/// The two diagonal sums carry `H = 1/4` centering constants and reject any
/// other index.
pub fn kernel_sum(part: KernelSum, h: HurstIndex, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("kernel sums need n >= 1".into()));
    }
    let nf = n as f64;
    let scale = nf.powf(-h.twice());
    match part {
        KernelSum::EpsDeltaAbs => {
            let p = power_table(h, n);
            let mut acc = CompensatedSum::new();
            for l in 0..n {
                for k in 0..n {
                    let a = k.abs_diff(l);
                    let b = (k + 1).abs_diff(l);
                    acc.add((p[k + 1] - p[k] - p[b] + p[a]).abs());
                }
            }
            Ok(0.5 * scale * acc.total())
        }
        KernelSum::DeltaDeltaPow(r) => {
            if r == 0 {
                return Err(Error::Domain("kernel sum power must be >= 1".into()));
            }
            // Toeplitz structure: each lag j appears n - |j| times.
            let lag = |j: usize| rho_h(h, j as i64).abs().powi(r as i32);
            let off = compensated_sum((1..n).map(|j| 2.0 * (n - j) as f64 * lag(j)));
            Ok(scale.powi(r as i32) * (nf * lag(0) + off))
        }
        KernelSum::DiagonalShift => {
            h.require_critical("the diagonal shift sum")?;
            let centre = 0.5 / nf.sqrt();
            let terms = (0..n).map(|k| (inner_eps_delta(h, k, k, n).unwrap() + centre).abs());
            Ok(compensated_sum(terms))
        }
        KernelSum::DiagonalSquareShift => {
            h.require_critical("the diagonal squared shift sum")?;
            let centre = 0.25 / nf;
            let terms = (0..n).map(|k| {
                let v = inner_eps_delta(h, k, k, n).unwrap();
                (v * v - centre).abs()
            });
            Ok(compensated_sum(terms))
        }
    }
}

/// Growth-rate diagnosis of a kernel sum over a list of grid sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelRateReport {
    pub part: KernelSum,
    pub n_list: Vec<usize>,
    pub values: Vec<f64>,
    pub fit: RateFit,
    pub expected_exponent: f64,
    /// `max / min` of the values; only meaningful for `O(1)` parts.
    pub max_min_ratio: f64,
}

impl KernelRateReport {
    /// Slope within `tol` of the expected exponent, or boundedness
    /// (`max/min <= 1.5`) for `O(1)` parts.
    pub fn matches(&self, tol: f64) -> bool {
        if self.part.is_bounded_order() {
            self.max_min_ratio <= 1.5
        } else {
            (self.fit.slope - self.expected_exponent).abs() <= tol
        }
    }
}

/// Evaluate a kernel sum over `n_list` and regress `log(sum)` on `log(n)`.
///
/// `n_list` must hold at least four increasing sizes spanning two octaves.
pub fn kernel_sum_rate_fit(part: KernelSum, h: HurstIndex, n_list: &[usize]) -> Result<KernelRateReport> {
    if n_list.len() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: n_list.len() });
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid sizes must be strictly increasing".into()));
    }
    if n_list[n_list.len() - 1] < 4 * n_list[0] {
        return Err(Error::Domain("grid sizes must span at least two octaves".into()));
    }
    let values = n_list
        .iter()
        .map(|&n| kernel_sum(part, h, n))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, f64)> = n_list.iter().map(|&n| n as f64).zip(values.iter().copied()).collect();
    let fit = rate_regression(&pairs)?;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    Ok(KernelRateReport {
        part,
        n_list: n_list.to_vec(),
        values,
        fit,
        expected_exponent: part.expected_exponent(),
        max_min_ratio: max / min,
    })
}
