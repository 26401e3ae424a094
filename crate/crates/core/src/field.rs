//! Test functions `f: R^2 -> R` with hand-coded partial derivatives.
//!
//! Every catalog member is a product `scale * u(x) * v(y)` of one-dimensional
//! factors whose derivatives up to order four are written out, so
//! `partial(a, b, x, y) = scale * u^{(a)}(x) * v^{(b)}(y)`. All of them grow
//! at most polynomially together with their partials, which is what the
//! moment hypothesis on the test function requires.

use serde::Serialize;

use crate::error::{Error, Result};

/// Names accepted by [`catalog_get`].
pub const CATALOG: [&str; 4] = ["product", "quartic", "trigprod", "gaussprod"];

/// A scalar field on the plane with partial derivatives up to
/// [`ScalarField::max_order`].
///
/// Callers must not request `partial(a, b, ..)` with `a + b > max_order()`;
/// implementations may panic in that case.
pub trait ScalarField: Send + Sync {
    fn name(&self) -> String;

    /// Highest total derivative order available.
    fn max_order(&self) -> u32 {
        4
    }

    /// `d^{a+b} f / dx^a dy^b` at `(x, y)`.
    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64;

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.partial(0, 0, x, y)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn name(&self) -> String {
        (**self).name()
    }
    fn max_order(&self) -> u32 {
        (**self).max_order()
    }
    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
        (**self).partial(a, b, x, y)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for Box<F> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn max_order(&self) -> u32 {
        (**self).max_order()
    }
    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
        (**self).partial(a, b, x, y)
    }
}

/// Check that a field provides partials up to `order`.
pub fn require_order<F: ScalarField + ?Sized>(field: &F, order: u32) -> Result<()> {
    if field.max_order() < order {
        return Err(Error::Domain(format!(
            "field `{}` provides partials up to order {}, {order} needed",
            field.name(),
            field.max_order()
        )));
    }
    Ok(())
}

/// One-dimensional factor of a separable field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Factor {
    /// `1`
    One,
    /// `x`
    Identity,
    /// `x^2 / 2`
    HalfSquare,
    /// `sin x`
    Sine,
    /// `x exp(-x^2/2)`
    GaussWeighted,
}

impl Factor {
    /// `k`-th derivative, `k <= 4`.
    pub fn derivative(self, k: u32, x: f64) -> f64 {
        match self {
            Factor::One => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Factor::Identity => match k {
                0 => x,
                1 => 1.0,
                _ => 0.0,
            },
            Factor::HalfSquare => match k {
                0 => 0.5 * x * x,
                1 => x,
                2 => 1.0,
                _ => 0.0,
            },
            Factor::Sine => match k % 4 {
                0 => x.sin(),
                1 => x.cos(),
                2 => -x.sin(),
                _ => -x.cos(),
            },
            Factor::GaussWeighted => {
                let w = (-0.5 * x * x).exp();
                let x2 = x * x;
                w * match k {
                    0 => x,
                    1 => 1.0 - x2,
                    2 => x * (x2 - 3.0),
                    3 => -(x2 * x2 - 6.0 * x2 + 3.0),
                    4 => x * (x2 * x2 - 10.0 * x2 + 15.0),
                    _ => panic!("GaussWeighted derivatives are tabulated up to order 4"),
                }
            }
        }
    }
}

/// `scale * u(x) * v(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableField {
    name: String,
    scale: f64,
    x_factor: Factor,
    y_factor: Factor,
}

impl SeparableField {
    pub fn new(name: impl Into<String>, scale: f64, x_factor: Factor, y_factor: Factor) -> Self {
        Self { name: name.into(), scale, x_factor, y_factor }
    }

    /// `f(x, y) = xy`
    pub fn product() -> Self {
        Self::new("product", 1.0, Factor::Identity, Factor::Identity)
    }

    /// `f(x, y) = x^2 y^2 / 4`
    pub fn quartic() -> Self {
        Self::new("quartic", 1.0, Factor::HalfSquare, Factor::HalfSquare)
    }

    /// `f(x, y) = sin(x) sin(y)`
    pub fn trigprod() -> Self {
        Self::new("trigprod", 1.0, Factor::Sine, Factor::Sine)
    }

    /// `f(x, y) = xy exp(-(x^2 + y^2)/2)`
    pub fn gaussprod() -> Self {
        Self::new("gaussprod", 1.0, Factor::GaussWeighted, Factor::GaussWeighted)
    }

    /// The constant field `g = 1`.
    pub fn one() -> Self {
        Self::new("one", 1.0, Factor::One, Factor::One)
    }

    /// `f(x, y) = x`.
    pub fn first_coordinate() -> Self {
        Self::new("x", 1.0, Factor::Identity, Factor::One)
    }

    /// `f(x, y) = y`.
    pub fn second_coordinate() -> Self {
        Self::new("y", 1.0, Factor::One, Factor::Identity)
    }

    /// `(x, y) -> f(y, x)`.
    pub fn swapped(&self) -> Self {
        Self::new(format!("{}_swapped", self.name), self.scale, self.y_factor, self.x_factor)
    }
}

impl ScalarField for SeparableField {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
        debug_assert!(a + b <= 4, "partial ({a},{b}) beyond order 4");
        self.scale * self.x_factor.derivative(a, x) * self.y_factor.derivative(b, y)
    }
}

/// Look up a catalog member: `product`, `quartic`, `trigprod` or `gaussprod`.
pub fn catalog_get(name: &str) -> Result<SeparableField> {
    match name {
        "product" => Ok(SeparableField::product()),
        "quartic" => Ok(SeparableField::quartic()),
        "trigprod" => Ok(SeparableField::trigprod()),
        "gaussprod" => Ok(SeparableField::gaussprod()),
        other => Err(Error::UnknownField(other.to_string())),
    }
}

/// Catalog lookup extended with the auxiliary fields `one` (constant),
/// `x` and `y` (coordinate projections).
pub fn lookup_field(name: &str) -> Result<SeparableField> {
    match name {
        "one" => Ok(SeparableField::one()),
        "x" => Ok(SeparableField::first_coordinate()),
        "y" => Ok(SeparableField::second_coordinate()),
        other => catalog_get(other),
    }
}

/// The field `(x, y) -> d^{da+db} f / dx^da dy^db (x, y)`.
#[derive(Debug, Clone)]
pub struct PartialField<F> {
    inner: F,
    da: u32,
    db: u32,
}

impl<F: ScalarField> PartialField<F> {
    pub fn new(inner: F, da: u32, db: u32) -> Result<Self> {
        require_order(&inner, da + db)?;
        Ok(Self { inner, da, db })
    }
}

impl<F: ScalarField> ScalarField for PartialField<F> {
    fn name(&self) -> String {
        format!("d{}{}({})", self.da, self.db, self.inner.name())
    }

    fn max_order(&self) -> u32 {
        self.inner.max_order() - self.da - self.db
    }

    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
        self.inner.partial(a + self.da, b + self.db, x, y)
    }
}

/// The field `g(x, y) = f((x + y)/sqrt 2, (x - y)/sqrt 2)`.
///
/// With `D1`, `D2` the partials of `f`, `d/dx = (D1 + D2)/sqrt 2` and
/// `d/dy = (D1 - D2)/sqrt 2`, so partials of `g` are binomial combinations
/// of partials of `f` of the same total order.
#[derive(Debug, Clone)]
pub struct RotatedField<F> {
    inner: F,
}

impl<F: ScalarField> RotatedField<F> {
    pub fn new(inner: F) -> Self {
        Self { inner }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl<F: ScalarField> ScalarField for RotatedField<F> {
    fn name(&self) -> String {
        format!("rot({})", self.inner.name())
    }

    fn max_order(&self) -> u32 {
        self.inner.max_order()
    }

    fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (u, v) = ((x + y) * s, (x - y) * s);
        let mut total = 0.0;
        for i in 0..=a {
            for j in 0..=b {
                let sign = if (b - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                let c = binomial(a, i) * binomial(b, j) * sign;
                total += c * self.inner.partial(i + j, a + b - i - j, u, v);
            }
        }
        total * s.powi((a + b) as i32)
    }
}

/// Largest discrepancy between an analytic partial and its finite-difference
/// estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialDiscrepancy {
    pub a: u32,
    pub b: u32,
    pub max_discrepancy: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub field: String,
    pub partials: Vec<PartialDiscrepancy>,
}

impl ValidationReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.partials.iter().map(|p| p.max_discrepancy).fold(0.0, f64::max)
    }
}

/// Finite-difference step used by [`validate_field`].
pub const FD_STEP: f64 = 1e-5;
/// Absolute tolerance used by [`validate_field`].
pub const FD_TOLERANCE: f64 = 1e-6;

/// Central difference of the analytic partial one order below `(a, b)`:
/// differentiates in `x` when `a > 0`, otherwise in `y`.
pub fn finite_difference_partial<F: ScalarField + ?Sized>(field: &F, a: u32, b: u32, x: f64, y: f64) -> f64 {
    let h = FD_STEP;
    if a > 0 {
        (field.partial(a - 1, b, x + h, y) - field.partial(a - 1, b, x - h, y)) / (2.0 * h)
    } else {
        (field.partial(a, b - 1, x, y + h) - field.partial(a, b - 1, x, y - h)) / (2.0 * h)
    }
}

/// Compare every partial of total order `1..=max_order` against a central
/// difference of the next-lower analytic partial on the grid
/// `{-2, -1, 0, 1, 2}^2`, and `partial(0, 0)` against `eval`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // negated so NaN counts as a failure
pub fn validate_field<F: ScalarField + ?Sized>(field: &F) -> Result<ValidationReport> {
    let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut partials = Vec::new();
    for order in 0..=field.max_order() {
        for a in (0..=order).rev() {
            let b = order - a;
            let mut worst = PartialDiscrepancy { a, b, max_discrepancy: 0.0, x: 0.0, y: 0.0 };
            for &x in &grid {
                for &y in &grid {
                    let analytic = field.partial(a, b, x, y);
                    let reference = if order == 0 { field.eval(x, y) } else { finite_difference_partial(field, a, b, x, y) };
                    let d = (analytic - reference).abs();
                    if !(d <= worst.max_discrepancy) {
                        worst = PartialDiscrepancy { a, b, max_discrepancy: d, x, y };
                    }
                }
            }
            if !(worst.max_discrepancy <= FD_TOLERANCE) {
                return Err(Error::FieldValidation {
                    field: field.name(),
                    a,
                    b,
                    x: worst.x,
                    y: worst.y,
                    discrepancy: worst.max_discrepancy,
                });
            }
            partials.push(worst);
        }
    }
    Ok(ValidationReport { field: field.name(), partials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn catalog_examples() {
        let p = catalog_get("product").unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.5, -2.0), (-3.0, 7.0)] {
            assert_eq!(p.partial(1, 1, x, y), 1.0);
            assert_eq!(p.partial(2, 2, x, y), 0.0);
            assert_eq!(p.eval(x, y), x * y);
        }
        assert_eq!(catalog_get("trigprod").unwrap().partial(1, 1, 0.0, 0.0), 1.0);
        assert_abs_diff_eq!(catalog_get("quartic").unwrap().eval(2.0, 3.0), 9.0, epsilon = 1e-15);
        assert_eq!(catalog_get("quartic").unwrap().partial(2, 2, 0.3, -1.0), 1.0);
        let g = catalog_get("gaussprod").unwrap();
        assert_abs_diff_eq!(g.eval(1.0, 2.0), 2.0 * (-2.5f64).exp(), epsilon = 1e-15);
        assert!(matches!(catalog_get("one"), Err(Error::UnknownField(_))));
        assert!(lookup_field("one").is_ok());
    }

    #[test]
    fn catalog_members_validate() {
        for name in CATALOG {
            let report = validate_field(&catalog_get(name).unwrap()).unwrap();
            assert_eq!(report.partials.len(), 15);
            assert!(report.max_discrepancy() < FD_TOLERANCE, "{name}: {report:?}");
        }
        assert!(validate_field(&SeparableField::product()).unwrap().max_discrepancy() < 1e-9);
    }

    struct Corrupted(SeparableField);

    impl ScalarField for Corrupted {
        fn name(&self) -> String {
            "corrupted".into()
        }
        fn partial(&self, a: u32, b: u32, x: f64, y: f64) -> f64 {
            let v = self.0.partial(a, b, x, y);
            if (a, b) == (1, 1) {
                v + 1e-3
            } else {
                v
            }
        }
    }

    #[test]
    fn corrupted_field_fails_at_mixed_partial() {
        match validate_field(&Corrupted(SeparableField::gaussprod())) {
            Err(Error::FieldValidation { a: 1, b: 1, .. }) => {}
            other => panic!("expected failure at (1,1), got {other:?}"),
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let h = FD_STEP;
        for name in CATALOG {
            let f = catalog_get(name).unwrap();
            for &x in &[-2.0, -0.5, 1.0, 2.0] {
                for &y in &[-1.0, 0.0, 1.5] {
                    let via_x = (f.partial(0, 1, x + h, y) - f.partial(0, 1, x - h, y)) / (2.0 * h);
                    let via_y = (f.partial(1, 0, x, y + h) - f.partial(1, 0, x, y - h)) / (2.0 * h);
                    assert!((via_x - via_y).abs() < 1e-6, "{name} at ({x},{y})");
                    assert!((via_x - f.partial(1, 1, x, y)).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn polynomial_envelope() {
        // |partial| <= C (1 + x^2 + y^2)^2 with one constant for the catalog.
        const C: f64 = 16.0;
        let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
        for name in CATALOG {
            let f = catalog_get(name).unwrap();
            for order in 0..=4u32 {
                for a in 0..=order {
                    for &x in &grid {
                        for &y in &grid {
                            let env = C * (1.0f64 + x * x + y * y).powi(2);
                            assert!(f.partial(a, order - a, x, y).abs() <= env);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derived_fields_validate() {
        let f = SeparableField::trigprod();
        let d = PartialField::new(&f, 1, 1).unwrap();
        assert_eq!(d.max_order(), 2);
        assert_eq!(d.eval(0.3, 0.4), f.partial(1, 1, 0.3, 0.4));
        validate_field(&d).unwrap();
        let r = RotatedField::new(SeparableField::gaussprod());
        validate_field(&r).unwrap();
        let rd = RotatedField::new(PartialField::new(SeparableField::quartic(), 1, 1).unwrap());
        validate_field(&rd).unwrap();
        assert!(PartialField::new(&f, 3, 2).is_err());
    }

    #[test]
    fn rotation_composes_coordinates() {
        let f = SeparableField::trigprod();
        let g = RotatedField::new(&f);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for &(x, y) in &[(0.2, 0.9), (-1.0, 2.0)] {
            assert_abs_diff_eq!(g.eval(x, y), f.eval((x + y) * s, (x - y) * s), epsilon = 1e-15);
        }
        // Rotating twice is the identity map on the plane.
        let gg = RotatedField::new(RotatedField::new(&f));
        for order in 0..=4u32 {
            for a in 0..=order {
                assert_abs_diff_eq!(gg.partial(a, order - a, 0.4, -0.7), f.partial(a, order - a, 0.4, -0.7), epsilon = 1e-12);
            }
        }
    }
}
