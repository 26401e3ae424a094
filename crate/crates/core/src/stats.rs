//! Sample statistics used by the Monte Carlo harness: moments, Kolmogorov–Smirnov
//! tests against centered normal laws, Pearson correlations and log-log rate
//! regression.

use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Limit law targeted by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    /// Convergence in probability to a constant.
    Degenerate { value: f64 },
    /// Convergence in law to `N(0, variance)`.
    CenteredNormal { variance: f64 },
    /// Conditionally Gaussian limit; only its second moment is checkable.
    MixedNormal {
        conditional_variance: String,
        second_moment: Option<f64>,
    },
    /// No limit: the standard deviation grows like `n^{rate_exponent}`.
    Divergent { rate_exponent: f64 },
}

impl LimitLaw {
    pub fn centered_normal(variance: f64) -> Result<Self> {
        if variance.is_finite() && variance > 0.0 {
            Ok(LimitLaw::CenteredNormal { variance })
        } else {
            Err(Error::Domain(format!("normal limit needs positive variance, got {variance}")))
        }
    }

    /// Divergent law of the mixed product sum at Hurst index `h < 1/4`.
    pub fn divergent_for_hurst(h: f64) -> Self {
        LimitLaw::Divergent { rate_exponent: 0.5 - 2.0 * h }
    }
}

/// Sample mean, variance and standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub var: f64,
    /// Standard error of the mean.
    pub se: f64,
    /// Mean of the squared samples.
    pub second_moment: f64,
    /// Standard error of `second_moment`.
    pub second_moment_se: f64,
}

impl Moments {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let count = samples.len();
        if count < 2 {
            return Err(Error::InsufficientData { needed: 2, got: count });
        }
        let n = count as f64;
        let mean = compensated_sum(samples.iter().copied()) / n;
        let var = compensated_sum(samples.iter().map(|x| (x - mean).powi(2))) / (n - 1.0);
        let second_moment = compensated_sum(samples.iter().map(|x| x * x)) / n;
        let sq_var =
            compensated_sum(samples.iter().map(|x| (x * x - second_moment).powi(2))) / (n - 1.0);
        Ok(Self {
            count,
            mean,
            var,
            se: (var / n).sqrt(),
            second_moment,
            second_moment_se: (sq_var / n).sqrt(),
        })
    }

    pub fn std(&self) -> f64 {
        self.var.sqrt()
    }
}

/// Outcome of a Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-theta form, fast for small arguments.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let y = -pi2 / (8.0 * lambda * lambda);
        let w = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let s: f64 = (1..=8).map(|j| ((2 * j - 1) as f64).powi(2) * y).map(f64::exp).sum();
        (1.0 - w * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for j in 1..=100 {
            let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
            s += if j % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value with Stephens' small-sample correction.
fn ks_p_value(statistic: f64, effective_n: f64) -> f64 {
    let sn = effective_n.sqrt();
    kolmogorov_survival((sn + 0.12 + 0.11 / sn) * statistic)
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("KS sample".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// One-sample KS test against `N(0, variance)`.
pub fn ks_normal(samples: &[f64], variance: f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let sd = variance.sqrt();
    let xs = sorted(samples)?;
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let f = normal_cdf(x / sd);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult { statistic: d, p_value: ks_p_value(d, n) })
}

/// One-sample KS test against a limit law. Only centered normal laws have a
/// fully specified distribution function.
pub fn ks_test(samples: &[f64], law: &LimitLaw) -> Result<KsResult> {
    match law {
        LimitLaw::CenteredNormal { variance } => ks_normal(samples, *variance),
        other => Err(Error::UnsupportedLaw(format!("KS test needs a centered normal law, got {other:?}"))),
    }
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let (xa, xb) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult { statistic: d, p_value: ks_p_value(d, na * nb / (na + nb)) })
}

/// Pearson correlation coefficient.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("length mismatch {} vs {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: a.len() });
    }
    let n = a.len() as f64;
    let ma = compensated_sum(a.iter().copied()) / n;
    let mb = compensated_sum(b.iter().copied()) / n;
    let sab = compensated_sum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let saa = compensated_sum(a.iter().map(|x| (x - ma).powi(2)));
    let sbb = compensated_sum(b.iter().map(|y| (y - mb).powi(2)));
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(sab / (saa * sbb).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEntry {
    pub functional: String,
    pub correlation: f64,
    /// Half-width of the acceptance band, `3/sqrt(reps)`.
    pub band: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub entries: Vec<CorrelationEntry>,
    pub pass: bool,
}

/// Correlate a statistic with path functionals; passes when every
/// correlation lies within `±3/sqrt(reps)`.
pub fn independence_check(samples: &[f64], functionals: &[(String, Vec<f64>)]) -> Result<IndependenceReport> {
    let band = 3.0 / (samples.len() as f64).sqrt();
    let entries = functionals
        .iter()
        .map(|(name, values)| {
            let correlation = pearson(samples, values)?;
            Ok(CorrelationEntry {
                functional: name.clone(),
                correlation,
                band,
                within_band: correlation.abs() < band,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = entries.iter().all(|e| e.within_band);
    Ok(IndependenceReport { entries, pass })
}

/// Ordinary least-squares fit of `log(value) = intercept + slope * log(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// Standard error of the slope from the residual variance.
    pub slope_se: f64,
    pub points: usize,
}

/// Log-log OLS over `(n, statistic)` pairs; needs four points with
/// positive coordinates.
pub fn rate_regression(pairs: &[(f64, f64)]) -> Result<RateFit> {
    if pairs.len() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: pairs.len() });
    }
    if let Some(&(n, v)) = pairs.iter().find(|(n, v)| !(*n > 0.0 && *v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("log-log regression needs positive values, got ({n}, {v})")));
    }
    let xs: Vec<f64> = pairs.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("regression needs at least two distinct sizes".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(RateFit {
        slope,
        intercept,
        residual: (ssr / m).sqrt(),
        slope_se: (ssr / (m - 2.0) / sxx).sqrt(),
        points: pairs.len(),
    })
}
