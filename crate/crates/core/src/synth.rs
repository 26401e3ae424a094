//! Exact synthesis of fractional Brownian motion on a uniform grid.
//!
//! Two samplers draw from the same Gaussian law (fractional Gaussian noise
//! with autocovariance `step^{2H} rho_H(k)`, cumulated into a path):
//!
//! * [`CholeskySampler`] factors the full increment covariance, `O(n^3)`
//!   setup and `O(n^2)` per path;
//! * [`CirculantSampler`] embeds the covariance in a `2n` circulant and
//!   samples with one FFT per path (Davies–Harte), `O(n log n)`.
//!
//! Both precompute their factorisation once and are `Sync`, so a single
//! sampler serves every replication of an experiment.

use std::io::Write;
use std::sync::Arc;

use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{rho_h, GridSpec, HurstIndex};
use crate::numeric::format_sig17;
use crate::rng::{GaussianStream, SeedSpec};

/// Sampled values `B_{k step}`, `k = 0..=n`, of a one-dimensional fBm.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath1D {
    hurst: HurstIndex,
    grid: GridSpec,
    values: Vec<f64>,
}

impl FbmPath1D {
    pub fn from_values(hurst: HurstIndex, grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() + 1 {
            return Err(Error::Domain(format!(
                "path needs {} values, got {}",
                grid.n() + 1,
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::Domain(format!("path must start at 0, got {}", values[0])));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("path values".into()));
        }
        Ok(Self { hurst, grid, values })
    }

    /// Cumulate increments into a path starting at zero.
    pub fn from_increments(hurst: HurstIndex, grid: GridSpec, increments: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for d in increments {
            acc += d;
            values.push(acc);
        }
        Self::from_values(hurst, grid, values)
    }

    pub fn zero(hurst: HurstIndex, grid: GridSpec) -> Self {
        Self { hurst, grid, values: vec![0.0; grid.n() + 1] }
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `B_{(k+1) step} - B_{k step}`.
    #[inline]
    pub fn increment(&self, k: usize) -> f64 {
        self.values[k + 1] - self.values[k]
    }

    pub fn increments(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// Value at the end of the path.
    pub fn terminal(&self) -> f64 {
        self.values[self.grid.n()]
    }
}

/// Planar fBm `(B1, B2)` with independent components on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath2D {
    first: FbmPath1D,
    second: FbmPath1D,
}

impl FbmPath2D {
    pub fn new(first: FbmPath1D, second: FbmPath1D) -> Result<Self> {
        if first.grid != second.grid {
            return Err(Error::Domain("path components live on different grids".into()));
        }
        if first.hurst != second.hurst {
            return Err(Error::Domain("path components have different Hurst indices".into()));
        }
        Ok(Self { first, second })
    }

    pub fn zero(hurst: HurstIndex, grid: GridSpec) -> Self {
        Self { first: FbmPath1D::zero(hurst, grid), second: FbmPath1D::zero(hurst, grid) }
    }

    pub fn first(&self) -> &FbmPath1D {
        &self.first
    }

    pub fn second(&self) -> &FbmPath1D {
        &self.second
    }

    pub fn grid(&self) -> GridSpec {
        self.first.grid
    }

    pub fn hurst(&self) -> HurstIndex {
        self.first.hurst
    }

    /// `(B1_k, B2_k)`.
    #[inline]
    pub fn point(&self, k: usize) -> (f64, f64) {
        (self.first.values[k], self.second.values[k])
    }

    /// `(B2, B1)`.
    pub fn swapped(&self) -> Self {
        Self { first: self.second.clone(), second: self.first.clone() }
    }

    /// CSV export with header `t,b1,b2` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,b1,b2")?;
        let grid = self.grid();
        for k in 0..=grid.n() {
            let (b1, b2) = self.point(k);
            writeln!(out, "{},{},{}", format_sig17(grid.time(k)), format_sig17(b1), format_sig17(b2))?;
        }
        Ok(())
    }
}

/// `((B1 + B2)/sqrt 2, (B1 - B2)/sqrt 2)`, again a planar fBm of the same
/// index. The map is an involution.
pub fn rotate_pair(path: &FbmPath2D) -> FbmPath2D {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (path.first.values(), path.second.values());
    let plus = a.iter().zip(b).map(|(x, y)| (x + y) * s).collect();
    let minus = a.iter().zip(b).map(|(x, y)| (x - y) * s).collect();
    FbmPath2D {
        first: FbmPath1D { values: plus, ..path.first.clone() },
        second: FbmPath1D { values: minus, ..path.second.clone() },
    }
}

/// Dense row-major covariance matrix of the `n` grid increments.
pub fn increment_covariance(h: HurstIndex, grid: GridSpec) -> Vec<f64> {
    let n = grid.n();
    let scale = grid.step().powf(h.twice());
    let lags: Vec<f64> = (0..n).map(|k| scale * rho_h(h, k as i64)).collect();
    let mut cov = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cov[i * n + j] = lags[i.abs_diff(j)];
        }
    }
    cov
}

/// Packed lower-triangular Cholesky factor of a dense symmetric matrix.
/// Row `i` occupies `i(i+1)/2 .. i(i+1)/2 + i + 1`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // negated so NaN pivots are rejected
pub fn cholesky_packed(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let row = |i: usize| i * (i + 1) / 2;
    let mut l = vec![0.0; n * (n + 1) / 2];
    for i in 0..n {
        let ri = row(i);
        for j in 0..=i {
            let rj = row(j);
            let dot: f64 = l[ri..ri + j].iter().zip(&l[rj..rj + j]).map(|(a, b)| a * b).sum();
            let v = matrix[i * n + j] - dot;
            if i == j {
                if !(v > 0.0) {
                    return Err(Error::NotPositiveDefinite { pivot: i, value: v });
                }
                l[ri + i] = v.sqrt();
            } else {
                l[ri + j] = v / l[rj + j];
            }
        }
    }
    Ok(l)
}

/// Largest grid accepted by [`CholeskySampler::new`].
pub const DEFAULT_CHOLESKY_CAP: usize = 4096;

/// Exact sampler through the Cholesky factor of the increment covariance.
#[derive(Debug, Clone)]
pub struct CholeskySampler {
    hurst: HurstIndex,
    grid: GridSpec,
    lower: Vec<f64>,
}

impl CholeskySampler {
    pub fn new(hurst: HurstIndex, grid: GridSpec) -> Result<Self> {
        Self::with_cap(hurst, grid, DEFAULT_CHOLESKY_CAP)
    }

    pub fn with_cap(hurst: HurstIndex, grid: GridSpec, cap: usize) -> Result<Self> {
        if grid.n() > cap {
            return Err(Error::Capacity { n: grid.n(), cap });
        }
        let cov = increment_covariance(hurst, grid);
        let lower = cholesky_packed(&cov, grid.n())?;
        Ok(Self { hurst, grid, lower })
    }

    pub fn sample_increments<R: Rng>(&self, normals: &mut GaussianStream<R>, out: &mut [f64]) {
        let n = self.grid.n();
        let mut z = vec![0.0; n];
        normals.fill(&mut z);
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let r = i * (i + 1) / 2;
            *o = self.lower[r..=r + i].iter().zip(&z).map(|(a, b)| a * b).sum();
        }
    }

    pub fn sample(&self, seed: &SeedSpec, substream: u64) -> FbmPath1D {
        let mut inc = vec![0.0; self.grid.n()];
        self.sample_increments(&mut seed.gaussian_stream(substream), &mut inc);
        FbmPath1D::from_increments(self.hurst, self.grid, &inc).expect("finite increments")
    }
}

/// Relative tolerance for negative circulant eigenvalues.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Davies–Harte sampler: circulant embedding of the fGn autocovariance.
#[derive(Clone)]
pub struct CirculantSampler {
    hurst: HurstIndex,
    grid: GridSpec,
    /// `sqrt(lambda_j / 2n) * step^H`.
    weights: Vec<f64>,
    min_relative_eigenvalue: f64,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSampler")
            .field("hurst", &self.hurst)
            .field("grid", &self.grid)
            .field("min_relative_eigenvalue", &self.min_relative_eigenvalue)
            .finish()
    }
}

impl CirculantSampler {
    pub fn new(hurst: HurstIndex, grid: GridSpec) -> Result<Self> {
        let n = grid.n();
        if !n.is_power_of_two() {
            return Err(Error::Domain(format!("circulant embedding needs a power-of-two grid, got n = {n}")));
        }
        let m = 2 * n;
        let mut buf: Vec<Complex<f64>> = (0..m)
            .map(|j| {
                let lag = if j <= n { j } else { m - j };
                Complex::new(rho_h(hurst, lag as i64), 0.0)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut buf);
        let max = buf.iter().map(|c| c.re).fold(f64::MIN, f64::max);
        let (idx, min) = buf
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.re))
            .fold((0, f64::MAX), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        if min < -EIGENVALUE_TOLERANCE * max {
            return Err(Error::EmbeddingFailure { index: idx, eigenvalue: min, max });
        }
        let scale = grid.step().powf(hurst.value());
        let weights = buf.iter().map(|c| (c.re.max(0.0) / m as f64).sqrt() * scale).collect();
        Ok(Self { hurst, grid, weights, min_relative_eigenvalue: min / max, fft })
    }

    /// Smallest embedding eigenvalue divided by the largest.
    pub fn min_relative_eigenvalue(&self) -> f64 {
        self.min_relative_eigenvalue
    }

    pub fn sample_increments<R: Rng>(&self, normals: &mut GaussianStream<R>, out: &mut [f64]) {
        let mut buf: Vec<Complex<f64>> = self
            .weights
            .iter()
            .map(|w| {
                let re = normals.next_normal();
                let im = normals.next_normal();
                Complex::new(w * re, w * im)
            })
            .collect();
        self.fft.process(&mut buf);
        for (o, c) in out.iter_mut().zip(&buf[..self.grid.n()]) {
            *o = c.re;
        }
    }

    pub fn sample(&self, seed: &SeedSpec, substream: u64) -> FbmPath1D {
        let mut inc = vec![0.0; self.grid.n()];
        self.sample_increments(&mut seed.gaussian_stream(substream), &mut inc);
        FbmPath1D::from_increments(self.hurst, self.grid, &inc).expect("finite increments")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Cholesky,
    Circulant,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cholesky" => Ok(Algorithm::Cholesky),
            "circulant" => Ok(Algorithm::Circulant),
            other => Err(Error::Domain(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Either sampler behind one interface.
#[derive(Debug, Clone)]
pub enum PathSampler {
    Cholesky(CholeskySampler),
    Circulant(CirculantSampler),
}

impl PathSampler {
    pub fn new(algorithm: Algorithm, hurst: HurstIndex, grid: GridSpec) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::Cholesky => PathSampler::Cholesky(CholeskySampler::new(hurst, grid)?),
            Algorithm::Circulant => PathSampler::Circulant(CirculantSampler::new(hurst, grid)?),
        })
    }

    /// Circulant embedding on power-of-two grids, Cholesky otherwise.
    pub fn preferred_algorithm(grid: GridSpec) -> Algorithm {
        if grid.n().is_power_of_two() {
            Algorithm::Circulant
        } else {
            Algorithm::Cholesky
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            PathSampler::Cholesky(_) => Algorithm::Cholesky,
            PathSampler::Circulant(_) => Algorithm::Circulant,
        }
    }

    pub fn grid(&self) -> GridSpec {
        match self {
            PathSampler::Cholesky(s) => s.grid,
            PathSampler::Circulant(s) => s.grid,
        }
    }

    pub fn sample_1d(&self, seed: &SeedSpec, substream: u64) -> FbmPath1D {
        match self {
            PathSampler::Cholesky(s) => s.sample(seed, substream),
            PathSampler::Circulant(s) => s.sample(seed, substream),
        }
    }

    /// Components drawn from sub-streams 0 and 1 of `seed`.
    pub fn sample_2d(&self, seed: &SeedSpec) -> FbmPath2D {
        FbmPath2D { first: self.sample_1d(seed, 0), second: self.sample_1d(seed, 1) }
    }
}

pub fn sample_fgn_cholesky(hurst: HurstIndex, grid: GridSpec, seed: &SeedSpec) -> Result<FbmPath1D> {
    Ok(CholeskySampler::new(hurst, grid)?.sample(seed, 0))
}

pub fn sample_fgn_circulant(hurst: HurstIndex, grid: GridSpec, seed: &SeedSpec) -> Result<FbmPath1D> {
    Ok(CirculantSampler::new(hurst, grid)?.sample(seed, 0))
}

pub fn sample_path_2d(hurst: HurstIndex, grid: GridSpec, seed: &SeedSpec, algorithm: Algorithm) -> Result<FbmPath2D> {
    Ok(PathSampler::new(algorithm, hurst, grid)?.sample_2d(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_normal, pearson, Moments};

    fn h(v: f64) -> HurstIndex {
        HurstIndex::new(v).unwrap()
    }

    #[test]
    fn cholesky_reconstructs_matrix() {
        let grid = GridSpec::unit(12).unwrap();
        let cov = increment_covariance(h(0.3), grid);
        let l = cholesky_packed(&cov, 12).unwrap();
        let at = |i: usize, j: usize| if j <= i { l[i * (i + 1) / 2 + j] } else { 0.0 };
        for i in 0..12 {
            for j in 0..12 {
                let v: f64 = (0..12).map(|k| at(i, k) * at(j, k)).sum();
                assert!((v - cov[i * 12 + j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_reports_pivot() {
        // Rank-one matrix fails at the second pivot.
        let m = [1.0, 1.0, 1.0, 1.0];
        match cholesky_packed(&m, 2) {
            Err(Error::NotPositiveDefinite { pivot: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn increment_covariance_is_positive_semidefinite() {
        // Smallest eigenvalue >= -1e-9 iff C + 1e-9 I admits a Cholesky factor.
        for &hv in &[0.1, 0.25, 0.4, 0.5, 0.7] {
            for &n in &[16usize, 128, 512] {
                let grid = GridSpec::unit(n).unwrap();
                let mut cov = increment_covariance(h(hv), grid);
                for i in 0..n {
                    cov[i * n + i] += 1e-9;
                }
                cholesky_packed(&cov, n).unwrap_or_else(|e| panic!("H={hv} n={n}: {e}"));
            }
        }
    }

    #[test]
    fn capacity_and_shape_errors() {
        let g = GridSpec::unit(100).unwrap();
        assert!(matches!(CholeskySampler::with_cap(h(0.3), g, 64), Err(Error::Capacity { n: 100, cap: 64 })));
        assert!(matches!(CirculantSampler::new(h(0.3), g), Err(Error::Domain(_))));
    }

    #[test]
    fn circulant_embedding_eigenvalues_nonnegative() {
        for &hv in &[0.05, 0.1, 0.25, 0.4, 0.5, 0.7, 0.9] {
            let s = CirculantSampler::new(h(hv), GridSpec::unit(1024).unwrap()).unwrap();
            assert!(s.min_relative_eigenvalue() >= -EIGENVALUE_TOLERANCE, "H={hv}");
        }
    }

    #[test]
    fn paths_start_at_zero_and_are_deterministic() {
        let grid = GridSpec::unit(4096).unwrap();
        let seed = SeedSpec::new(99, 3);
        let a = sample_fgn_circulant(HurstIndex::QUARTER, grid, &seed).unwrap();
        let b = sample_fgn_circulant(HurstIndex::QUARTER, grid, &seed).unwrap();
        assert_eq!(a.values()[0], 0.0);
        assert_eq!(a.values().len(), 4097);
        let bits = |p: &FbmPath1D| p.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let small = GridSpec::unit(64).unwrap();
        let c = sample_fgn_cholesky(h(0.3), small, &seed).unwrap();
        assert_eq!(bits(&c), bits(&sample_fgn_cholesky(h(0.3), small, &seed).unwrap()));
    }

    #[test]
    fn brownian_increments_are_white() {
        let n = 1024;
        let grid = GridSpec::unit(n).unwrap();
        let p = sample_fgn_cholesky(HurstIndex::HALF, grid, &SeedSpec::new(5, 0)).unwrap();
        let inc: Vec<f64> = p.increments().collect();
        let r1 = pearson(&inc[..n - 1], &inc[1..]).unwrap();
        assert!(r1.abs() < 3.0 / (n as f64).sqrt(), "lag-1 correlation {r1}");
        let scaled: Vec<f64> = inc.iter().map(|d| d * (n as f64).sqrt()).collect();
        assert!(ks_normal(&scaled, 1.0).unwrap().p_value > 0.01);
    }

    #[test]
    fn cholesky_marginals_at_quarter() {
        let n = 256;
        let grid = GridSpec::unit(n).unwrap();
        let sampler = CholeskySampler::new(HurstIndex::QUARTER, grid).unwrap();
        let reps = 2000;
        let paths: Vec<FbmPath1D> = (0..reps).map(|r| sampler.sample(&SeedSpec::new(17, r), 0)).collect();
        let terminal: Vec<f64> = paths.iter().map(|p| p.terminal()).collect();
        let m = Moments::from_samples(&terminal).unwrap();
        assert!((m.var - 1.0).abs() < 0.05, "Var(B_1) = {}", m.var);
        // Cov(dB_0, dB_1) against n^{-1/2} rho(1).
        let prods: Vec<f64> = paths.iter().map(|p| p.increment(0) * p.increment(1)).collect();
        let m = Moments::from_samples(&prods).unwrap();
        let want = (n as f64).powf(-0.5) * rho_h(HurstIndex::QUARTER, 1);
        assert!((m.mean - want).abs() < 3.0 * m.se, "{} vs {want} (se {})", m.mean, m.se);
    }

    #[test]
    fn self_similarity_of_midpoint_variance() {
        let grid = GridSpec::unit(64).unwrap();
        for &hv in &[0.1, 0.25, 0.4] {
            let s = CirculantSampler::new(h(hv), grid).unwrap();
            let mid: Vec<f64> = (0..4000).map(|r| s.sample(&SeedSpec::new(23, r), 0).values()[32]).collect();
            let m = Moments::from_samples(&mid).unwrap();
            let want = 0.5f64.powf(2.0 * hv);
            let se = m.var * (2.0 / 3999.0f64).sqrt();
            assert!((m.var - want).abs() < 4.0 * se, "H={hv}: {} vs {want}", m.var);
        }
    }

    #[test]
    fn two_dimensional_components_are_independent() {
        let grid = GridSpec::unit(1024).unwrap();
        let sampler = PathSampler::new(Algorithm::Circulant, HurstIndex::QUARTER, grid).unwrap();
        let reps = 2000;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for r in 0..reps {
            let p = sampler.sample_2d(&SeedSpec::new(31, r));
            assert_ne!(p.first().values(), p.second().values());
            a.push(p.first().terminal());
            b.push(p.second().terminal());
        }
        assert!(pearson(&a, &b).unwrap().abs() < 0.07);
    }

    #[test]
    fn rotation_is_an_involution() {
        let grid = GridSpec::unit(256).unwrap();
        let p = sample_path_2d(HurstIndex::QUARTER, grid, &SeedSpec::new(1, 1), Algorithm::Circulant).unwrap();
        let back = rotate_pair(&rotate_pair(&p));
        for k in 0..=256 {
            let (x, y) = p.point(k);
            let (u, v) = back.point(k);
            assert!((x - u).abs() < 1e-12 && (y - v).abs() < 1e-12);
        }
        let z = FbmPath2D::zero(HurstIndex::QUARTER, grid);
        assert_eq!(rotate_pair(&z), z);
    }

    #[test]
    fn rotation_preserves_independence() {
        let grid = GridSpec::unit(256).unwrap();
        let sampler = PathSampler::new(Algorithm::Circulant, HurstIndex::QUARTER, grid).unwrap();
        let reps = 2000;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for r in 0..reps {
            let p = rotate_pair(&sampler.sample_2d(&SeedSpec::new(77, r)));
            a.push(p.first().terminal());
            b.push(p.second().terminal());
        }
        assert!(pearson(&a, &b).unwrap().abs() < 3.0 / (reps as f64).sqrt());
        assert!((Moments::from_samples(&a).unwrap().var - 1.0).abs() < 0.1);
    }

    #[test]
    fn path_construction_errors() {
        let grid = GridSpec::unit(4).unwrap();
        assert!(FbmPath1D::from_values(h(0.3), grid, vec![0.0; 4]).is_err());
        assert!(FbmPath1D::from_values(h(0.3), grid, vec![1.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        let a = FbmPath1D::zero(h(0.3), grid);
        let b = FbmPath1D::zero(h(0.3), GridSpec::unit(5).unwrap());
        assert!(FbmPath2D::new(a.clone(), b).is_err());
        assert!(FbmPath2D::new(a, FbmPath1D::zero(h(0.4), grid)).is_err());
    }

    #[test]
    fn csv_layout() {
        let grid = GridSpec::unit(4).unwrap();
        let p = FbmPath2D::new(
            FbmPath1D::from_increments(h(0.3), grid, &[0.1, 0.2, -0.3, 0.5]).unwrap(),
            FbmPath1D::zero(h(0.3), grid),
        )
        .unwrap();
        let mut out = Vec::new();
        p.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,b1,b2");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[1], "0,0,0");
        assert_eq!(lines[2], "0.25,0.10000000000000001,0");
        let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(last, vec![1.0, p.first().terminal(), 0.0]);
    }
}
