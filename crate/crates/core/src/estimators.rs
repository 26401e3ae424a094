//! Discrete path functionals: the symmetric Riemann sum, its residual against
//! `f(B_t) - f(0)`, quadratic and mixed variations, weighted Hermite sums and
//! the ten third/fourth-order sums `S^(1)..S^(10)`.
//!
//! Everything is evaluated at grid times only. On a grid with `n` steps over
//! `[0, T]` the normalisations use the sampling rate `n / T` where the unit
//! interval would use `n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{require_order, PartialField, RotatedField, ScalarField};
use crate::hermite::{hermite, monomial_to_hermite};
use crate::numeric::{powi, CompensatedSum};
use crate::rng::SeedSpec;
use crate::kernels::GridSpec;
use crate::synth::{rotate_pair, FbmPath1D, FbmPath2D};

/// A realised estimator value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorValue {
    pub value: f64,
    pub grid: GridSpec,
    pub estimator: String,
    pub seed: Option<SeedSpec>,
}

impl EstimatorValue {
    pub fn new(value: f64, grid: GridSpec, estimator: impl Into<String>, seed: Option<SeedSpec>) -> Result<Self> {
        let estimator = estimator.into();
        if !value.is_finite() {
            return Err(Error::NonFinite(estimator));
        }
        Ok(Self { value, grid, estimator, seed })
    }
}

/// Symmetric Riemann sum up to grid time `t`: the `x`-increment is weighted
/// by the mean of `d1 f` at its two endpoints (second coordinate frozen), the
/// `y`-increment likewise with `d2 f`.
pub fn symmetric_integral<F: ScalarField + ?Sized>(f: &F, path: &FbmPath2D, t: f64) -> Result<f64> {
    require_order(f, 1)?;
    let m = path.grid().index_of(t)?;
    let (b1, b2) = (path.first().values(), path.second().values());
    let mut acc = CompensatedSum::new();
    for k in 0..m {
        let (a, b, c, d) = (b1[k], b1[k + 1], b2[k], b2[k + 1]);
        acc.add(0.5 * (f.partial(1, 0, a, c) + f.partial(1, 0, b, c)) * (b - a));
        acc.add(0.5 * (f.partial(0, 1, a, c) + f.partial(0, 1, a, d)) * (d - c));
    }
    Ok(acc.total())
}

/// `f(B_t) - f(0, 0) - I_n(t)`.
pub fn cov_residual<F: ScalarField + ?Sized>(f: &F, path: &FbmPath2D, t: f64) -> Result<f64> {
    let integral = symmetric_integral(f, path, t)?;
    let m = path.grid().index_of(t)?;
    let (x, y) = path.point(m);
    Ok(f.eval(x, y) - f.eval(0.0, 0.0) - integral)
}

/// `rate^{2H-1} sum_{k < m} (dB_k)^2`, with expectation exactly `t`.
pub fn quadratic_variation(path: &FbmPath1D, t: f64) -> Result<f64> {
    let grid = path.grid();
    let m = grid.index_of(t)?;
    let scale = grid.rate().powf(path.hurst().twice() - 1.0);
    let sum: CompensatedSum = (0..m).map(|k| powi(path.increment(k), 2)).collect();
    Ok(scale * sum.total())
}

/// [`quadratic_variation`] computed through the Hermite expansion of `x^2`
/// applied to the normalised increments.
pub fn quadratic_variation_hermite(path: &FbmPath1D, t: f64) -> Result<f64> {
    let grid = path.grid();
    let m = grid.index_of(t)?;
    let coeffs = monomial_to_hermite(2)?;
    let norm = grid.rate().powf(path.hurst().value());
    let sum: CompensatedSum = (0..m)
        .map(|k| {
            let x = norm * path.increment(k);
            (0..=2).map(|q| coeffs.coeff(q) * hermite(q, x)).sum::<f64>()
        })
        .collect();
    Ok(sum.total() / grid.rate())
}

/// Breuer–Major fluctuation of the quadratic variation over the whole grid,
/// `rate^{-1/2} sum_k (rate^{2H} (dB_k)^2 - 1)`. Its variance tends to
/// `sigma_H^2` for `H < 3/4`.
pub fn qv_fluctuation(path: &FbmPath1D) -> f64 {
    let grid = path.grid();
    let scale = grid.rate().powf(path.hurst().twice());
    let sum: CompensatedSum = path.increments().map(|d| scale * d * d - 1.0).collect();
    sum.total() / grid.rate().sqrt()
}

/// `sum_{k < m} dB1_k dB2_k`, unnormalised.
pub fn mixed_product_sum(path: &FbmPath2D, t: f64) -> Result<f64> {
    let m = path.grid().index_of(t)?;
    let (p, q) = (path.first(), path.second());
    Ok((0..m).map(|k| p.increment(k) * q.increment(k)).collect::<CompensatedSum>().total())
}

/// `rate^{2H - 1/2}` times [`mixed_product_sum`]; converges in law to a
/// centred normal of variance `sigma_H^2 / 2` (up to the horizon factor).
pub fn normalized_mixed_product_sum(path: &FbmPath2D, t: f64) -> Result<f64> {
    let scale = path.grid().rate().powf(path.hurst().twice() - 0.5);
    Ok(scale * mixed_product_sum(path, t)?)
}

pub const MAX_VN_ALPHA: u32 = 4;
pub const MAX_VN_DEGREE: u32 = 6;

/// `rate^{-q/4} sum_k g(B_k) (dB1_k)^alpha H_q(rate^{1/4} dB2_k)` on a path
/// of index 1/4.
pub fn weighted_hermite_sum_vn<G: ScalarField + ?Sized>(g: &G, alpha: u32, q: u32, path: &FbmPath2D) -> Result<f64> {
    path.hurst().require_critical("weighted Hermite sum")?;
    if alpha > MAX_VN_ALPHA || !(2..=MAX_VN_DEGREE).contains(&q) {
        return Err(Error::Domain(format!(
            "need alpha <= {MAX_VN_ALPHA} and 2 <= q <= {MAX_VN_DEGREE}, got alpha = {alpha}, q = {q}"
        )));
    }
    let rate = path.grid().rate();
    let norm = rate.powf(0.25);
    let (p, s) = (path.first(), path.second());
    let mut acc = CompensatedSum::new();
    for k in 0..path.grid().n() {
        let (x, y) = path.point(k);
        acc.add(g.eval(x, y) * powi(p.increment(k), alpha) * hermite(q, norm * s.increment(k)));
    }
    Ok(rate.powf(-(q as f64) / 4.0) * acc.total())
}

/// The pair `(G_n, G~_n)` with
/// `G_n = rate^{-1/2} sum_k g(b_k, b~_k) (rate^{1/2} (db_k)^2 - 1)` and `G~_n`
/// the same with `g~` and `db~`, on a path `(b, b~)` of index 1/4.
pub fn weighted_qv_pair_gn<G: ScalarField + ?Sized, Gt: ScalarField + ?Sized>(
    g: &G,
    gtilde: &Gt,
    pair: &FbmPath2D,
) -> Result<(f64, f64)> {
    pair.hurst().require_critical("weighted quadratic variation")?;
    let rate = pair.grid().rate();
    let root = rate.sqrt();
    let (p, s) = (pair.first(), pair.second());
    let (mut first, mut second) = (CompensatedSum::new(), CompensatedSum::new());
    for k in 0..pair.grid().n() {
        let (x, y) = pair.point(k);
        first.add(g.eval(x, y) * (root * powi(p.increment(k), 2) - 1.0));
        second.add(gtilde.eval(x, y) * (root * powi(s.increment(k), 2) - 1.0));
    }
    Ok((first.total() / root, second.total() / root))
}

/// Orders `(a, b)` of the sum `S^(i) = sum_k d1^a d2^b f(B_k) (dB1_k)^a (dB2_k)^b`.
pub fn sn_orders(i: u32) -> Result<(u32, u32)> {
    Ok(match i {
        1 => (3, 0),
        2 => (4, 0),
        3 => (0, 3),
        4 => (0, 4),
        5 => (1, 1),
        6 => (2, 1),
        7 => (1, 2),
        8 => (2, 2),
        9 => (3, 1),
        10 => (1, 3),
        _ => return Err(Error::Domain(format!("sum index must lie in 1..=10, got {i}"))),
    })
}

/// Limit of `S^(i)` at index 1/4: `coefficient * int_0^1 d1^a d2^b f(B_s) ds`
/// with `(a, b) = partial`, plus, for `i = 5` only, an independent mixed
/// Gaussian term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnLimit {
    pub coefficient: f64,
    pub partial: (u32, u32),
    pub mixed_gaussian: bool,
}

pub fn sn_limit(i: u32) -> Result<SnLimit> {
    sn_orders(i)?;
    let (coefficient, partial) = match i {
        1 => (-1.5, (4, 0)),
        2 => (3.0, (4, 0)),
        3 => (-1.5, (0, 4)),
        4 => (3.0, (0, 4)),
        5 => (0.25, (2, 2)),
        6 | 7 => (-0.5, (2, 2)),
        8 => (1.0, (2, 2)),
        _ => (0.0, (2, 2)),
    };
    Ok(SnLimit { coefficient, partial, mixed_gaussian: i == 5 })
}

/// `S^(i)` over the whole grid of a path of index 1/4.
pub fn sn_sum<F: ScalarField + ?Sized>(i: u32, f: &F, path: &FbmPath2D) -> Result<f64> {
    let (a, b) = sn_orders(i)?;
    path.hurst().require_critical("third/fourth-order sums")?;
    require_order(f, a + b)?;
    let (p, s) = (path.first(), path.second());
    let mut acc = CompensatedSum::new();
    for k in 0..path.grid().n() {
        let (x, y) = path.point(k);
        acc.add(f.partial(a, b, x, y) * powi(p.increment(k), a) * powi(s.increment(k), b));
    }
    Ok(acc.total())
}

/// Left-point Riemann approximation `step * sum_{k < n} phi(B_k)` of
/// `int_0^T phi(B_s) ds`.
pub fn time_integral(path: &FbmPath2D, phi: impl Fn(f64, f64) -> f64) -> f64 {
    let grid = path.grid();
    let sum: CompensatedSum = (0..grid.n()).map(|k| {
        let (x, y) = path.point(k);
        phi(x, y)
    }).collect();
    grid.step() * sum.total()
}

/// `S^(5)` recomputed as `(G_n - G~_n) / 2` on the rotated path with
/// `g = g~ = d12 f` composed with the rotation; algebraically equal to
/// `sn_sum(5, f, path)`.
pub fn sn5_by_rotation<F: ScalarField>(f: F, path: &FbmPath2D) -> Result<f64> {
    let g = RotatedField::new(PartialField::new(f, 1, 1)?);
    let (gn, gtn) = weighted_qv_pair_gn(&g, &g, &rotate_pair(path))?;
    Ok(0.5 * (gn - gtn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{catalog_get, Factor, SeparableField};
    use crate::kernels::HurstIndex;
    use crate::synth::{Algorithm, PathSampler};

    fn quarter_path(n: usize, rep: u64) -> FbmPath2D {
        PathSampler::new(Algorithm::Circulant, HurstIndex::QUARTER, GridSpec::unit(n).unwrap())
            .unwrap()
            .sample_2d(&SeedSpec::new(2024, rep))
    }

    fn hand_path() -> FbmPath2D {
        let h = HurstIndex::QUARTER;
        let grid = GridSpec::unit(4).unwrap();
        FbmPath2D::new(
            FbmPath1D::from_values(h, grid, vec![0.0, 0.3, -0.2, 0.5, 1.1]).unwrap(),
            FbmPath1D::from_values(h, grid, vec![0.0, -0.4, 0.1, 0.9, 0.6]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn trigprod_matches_term_by_term_evaluation() {
        let p = hand_path();
        let b1 = [0.0, 0.3, -0.2, 0.5, 1.1f64];
        let b2 = [0.0, -0.4, 0.1, 0.9, 0.6f64];
        let mut want = 0.0;
        for k in 0..4 {
            let d1 = |x: f64, y: f64| x.cos() * y.sin();
            let d2 = |x: f64, y: f64| x.sin() * y.cos();
            want += 0.5 * (d1(b1[k], b2[k]) + d1(b1[k + 1], b2[k])) * (b1[k + 1] - b1[k]);
            want += 0.5 * (d2(b1[k], b2[k]) + d2(b1[k], b2[k + 1])) * (b2[k + 1] - b2[k]);
        }
        let got = symmetric_integral(&catalog_get("trigprod").unwrap(), &p, 1.0).unwrap();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        // Partial horizon stops after two steps.
        let half = symmetric_integral(&catalog_get("trigprod").unwrap(), &p, 0.5).unwrap();
        assert!((half - got).abs() > 1e-3);
    }

    #[test]
    fn product_residual_is_mixed_sum() {
        let f = SeparableField::product();
        for rep in 0..5 {
            let p = quarter_path(512, rep);
            for t in [0.25, 1.0] {
                let r = cov_residual(&f, &p, t).unwrap();
                let m = mixed_product_sum(&p, t).unwrap();
                assert!((r - m).abs() <= 1e-10 * m.abs().max(1e-3), "{r} vs {m}");
            }
            assert_eq!(sn_sum(5, &f, &p).unwrap(), mixed_product_sum(&p, 1.0).unwrap());
            assert_eq!(sn_sum(8, &f, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn x_only_fields_telescope() {
        let p = quarter_path(256, 9);
        let x = SeparableField::first_coordinate();
        assert!((symmetric_integral(&x, &p, 1.0).unwrap() - p.first().terminal()).abs() < 1e-12);
        assert!(cov_residual(&x, &p, 0.5).unwrap().abs() < 1e-12);
        // The endpoint average integrates linear `d1 f` exactly, so x^2/2 also
        // telescopes; sin(x) does not.
        let sq = SeparableField::new("halfsq-x", 1.0, Factor::HalfSquare, Factor::One);
        assert!(cov_residual(&sq, &p, 1.0).unwrap().abs() < 1e-12);
        let sine = SeparableField::new("sin-x", 1.0, Factor::Sine, Factor::One);
        assert!(cov_residual(&sine, &p, 1.0).unwrap().abs() > 1e-6);
    }

    #[test]
    fn swapping_components_and_arguments_preserves_integral() {
        let p = quarter_path(256, 4);
        for name in ["trigprod", "gaussprod", "quartic"] {
            let f = catalog_get(name).unwrap();
            let a = symmetric_integral(&f, &p, 1.0).unwrap();
            let b = symmetric_integral(&f.swapped(), &p.swapped(), 1.0).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn rotation_identity_for_s5() {
        for name in ["product", "quartic", "trigprod", "gaussprod"] {
            let f = catalog_get(name).unwrap();
            for rep in 0..3 {
                let p = quarter_path(1024, rep);
                let direct = sn_sum(5, &f, &p).unwrap();
                let rotated = sn5_by_rotation(f.clone(), &p).unwrap();
                assert!((direct - rotated).abs() < 1e-9, "{name}: {direct} vs {rotated}");
            }
        }
    }

    #[test]
    fn hermite_reduction_of_quadratic_variation() {
        let p = quarter_path(2048, 1);
        for t in [0.5, 1.0] {
            let a = quadratic_variation(p.first(), t).unwrap();
            let b = quadratic_variation_hermite(p.first(), t).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn qv_fluctuation_is_gn_with_unit_weight() {
        let p = quarter_path(512, 2);
        let one = SeparableField::one();
        let (g, gt) = weighted_qv_pair_gn(&one, &one, &p).unwrap();
        assert!((g - qv_fluctuation(p.first())).abs() < 1e-12);
        assert!((gt - qv_fluctuation(p.second())).abs() < 1e-12);
        let v = weighted_hermite_sum_vn(&one, 0, 2, &p.swapped()).unwrap();
        assert!((v - g).abs() < 1e-12);
    }

    #[test]
    fn gn_swap_symmetry() {
        let p = quarter_path(512, 5);
        let g = catalog_get("trigprod").unwrap();
        let gt = catalog_get("gaussprod").unwrap();
        let (a, b) = weighted_qv_pair_gn(&g, &gt, &p).unwrap();
        let (c, d) = weighted_qv_pair_gn(&gt.swapped(), &g.swapped(), &p.swapped()).unwrap();
        assert!((a - d).abs() < 1e-12 && (b - c).abs() < 1e-12);
    }

    #[test]
    fn zero_path_edge_cases() {
        let z = FbmPath2D::zero(HurstIndex::QUARTER, GridSpec::unit(64).unwrap());
        let one = SeparableField::one();
        assert_eq!(weighted_hermite_sum_vn(&one, 1, 3, &z).unwrap(), 0.0);
        assert_eq!(mixed_product_sum(&z, 1.0).unwrap(), 0.0);
        // H_2(0) = -1 in every term.
        let v = weighted_hermite_sum_vn(&one, 0, 2, &z).unwrap();
        assert!((v + 64f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn critical_index_is_enforced() {
        let grid = GridSpec::unit(64).unwrap();
        let p = FbmPath2D::zero(HurstIndex::new(0.3).unwrap(), grid);
        let f = SeparableField::product();
        assert!(matches!(sn_sum(5, &f, &p), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(weighted_hermite_sum_vn(&f, 0, 2, &p), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(weighted_qv_pair_gn(&f, &f, &p), Err(Error::UnsupportedRegime(_))));
        let q = FbmPath2D::zero(HurstIndex::QUARTER, grid);
        assert!(sn_sum(0, &f, &q).is_err() && sn_sum(11, &f, &q).is_err());
        assert!(weighted_hermite_sum_vn(&f, 5, 2, &q).is_err());
        assert!(weighted_hermite_sum_vn(&f, 0, 1, &q).is_err());
    }

    #[test]
    fn off_grid_times_are_rejected() {
        let p = quarter_path(64, 0);
        let f = SeparableField::product();
        assert!(symmetric_integral(&f, &p, 0.0).is_err());
        assert!(symmetric_integral(&f, &p, 1.5).is_err());
        assert!(cov_residual(&f, &p, 0.3).is_err());
    }

    #[test]
    fn quadratic_variation_mean_at_quarter() {
        let sampler = PathSampler::new(Algorithm::Circulant, HurstIndex::QUARTER, GridSpec::unit(4096).unwrap()).unwrap();
        let v: Vec<f64> = (0..400)
            .map(|r| quadratic_variation(&sampler.sample_1d(&SeedSpec::new(12, r), 0), 1.0).unwrap())
            .collect();
        let m = crate::stats::Moments::from_samples(&v).unwrap();
        assert!((m.mean - 1.0).abs() < 3.0 * m.se, "{} +- {}", m.mean, m.se);
    }

    #[test]
    fn sn_limits_table() {
        assert_eq!(sn_limit(1).unwrap().coefficient, -1.5);
        assert_eq!(sn_limit(4).unwrap().partial, (0, 4));
        assert!(sn_limit(5).unwrap().mixed_gaussian);
        assert_eq!(sn_limit(10).unwrap().coefficient, 0.0);
        assert!(sn_limit(0).is_err());
    }

    #[test]
    fn general_horizon_uses_rate() {
        let grid = GridSpec::new(1024, 2.0).unwrap();
        let sampler = PathSampler::new(Algorithm::Circulant, HurstIndex::HALF, grid).unwrap();
        let v: Vec<f64> = (0..200)
            .map(|r| quadratic_variation(&sampler.sample_1d(&SeedSpec::new(3, r), 0), 2.0).unwrap())
            .collect();
        let m = crate::stats::Moments::from_samples(&v).unwrap();
        assert!((m.mean - 2.0).abs() < 3.0 * m.se);
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let g = GridSpec::unit(4).unwrap();
        assert!(EstimatorValue::new(f64::NAN, g, "qv", None).is_err());
        assert!(EstimatorValue::new(1.0, g, "qv", Some(SeedSpec::new(1, 2))).is_ok());
    }
}
