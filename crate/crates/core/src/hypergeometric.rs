//! The hypergeometric function `F(1/3, 2/3; 1/2; x)` on `[0, 1)`.
//!
//! Two evaluation routes are provided: the Gauss power series, summed by its
//! term recurrence, and the closed form `F(sin² z) = cos(z/3) / cos z`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Above this argument the series is replaced by the closed form.
pub const SERIES_CUTOFF: f64 = 0.98;

/// Truncation control for [`f_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative bound on the truncated tail at which summation stops.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: 1e-15,
            max_terms: 2000,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config("series tolerance must be positive"));
        }
        if self.max_terms == 0 {
            return Err(Error::Config("series needs at least one term"));
        }
        Ok(())
    }
}

/// Sums `Σ (1/3)ₙ (2/3)ₙ / ((1/2)ₙ n!) xⁿ`.
///
/// Arguments above [`SERIES_CUTOFF`], where the series would need thousands
/// of terms, use the closed form `cos(z/3) / cos z` with `sin² z = x`. There
/// `cos z = √(1 − x)` is taken directly (`1 − x` is exact for `x ≥ 1/2`), since
/// going through `arcsin √x` loses digits as `x → 1`.
pub fn f_series(x: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            what: "F(1/3, 2/3; 1/2; x)",
            value: x,
        });
    }
    if x > SERIES_CUTOFF {
        let cos_z = (1.0 - x).sqrt();
        let z = x.sqrt().atan2(cos_z);
        return Ok((z / 3.0).cos() / cos_z);
    }
    let (sum, _) = partial_sum(x, cfg)?;
    Ok(sum)
}

/// Series sum together with the number of terms used.
pub(crate) fn partial_sum(x: f64, cfg: &SeriesConfig) -> Result<(f64, usize)> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut n = 0usize;
    let tail_factor = (x / (1.0 - x)).max(1.0);
    loop {
        if n + 1 >= cfg.max_terms {
            return Err(Error::NonConvergence {
                x,
                terms: cfg.max_terms,
            });
        }
        let nf = n as f64;
        term *= x * (nf + 1.0 / 3.0) * (nf + 2.0 / 3.0) / ((nf + 0.5) * (nf + 1.0));
        sum += term;
        n += 1;
        // term ratios stay below x, so the tail is at most term · x / (1 − x)
        if term.abs() * tail_factor < cfg.tol * sum.abs() {
            // one more term past the first small one
            let nf = n as f64;
            term *= x * (nf + 1.0 / 3.0) * (nf + 2.0 / 3.0) / ((nf + 0.5) * (nf + 1.0));
            sum += term;
            return Ok((sum, n + 2));
        }
    }
}

/// `cos(z/3) / cos z`, which equals `F(1/3, 2/3; 1/2; sin² z)` for `|z| < π/2`.
pub fn f_closed(z: f64) -> Result<f64> {
    if !(z.abs() < FRAC_PI_2) {
        return Err(Error::Domain {
            what: "cos(z/3)/cos(z)",
            value: z,
        });
    }
    let c = z.cos();
    if c == 0.0 {
        return Err(Error::Domain {
            what: "cos(z/3)/cos(z)",
            value: z,
        });
    }
    Ok((z / 3.0).cos() / c)
}

/// `F(1/3, 2/3; 1/2; y²)` for `|y| < 1`, via `z = arcsin y`.
///
/// Avoids forming `y²` and taking a square root again, so it stays accurate
/// up to `|y| → 1`. This is the integrand of the phase map.
pub fn f_of_sine(y: f64) -> f64 {
    debug_assert!(y.abs() < 1.0);
    let z = y.asin();
    let cos_z = ((1.0 - y) * (1.0 + y)).sqrt();
    (z / 3.0).cos() / cos_z
}

/// `4 cos³(z/3) − 3 cos(z/3) − cos z`; vanishes identically.
pub fn triplication_residual(z: f64) -> f64 {
    let c = (z / 3.0).cos();
    4.0 * c * c * c - 3.0 * c - z.cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Independent partial sum: each term rebuilt from Pochhammer products.
    fn pochhammer_sum(x: f64, n_terms: usize) -> f64 {
        let mut total = 0.0;
        for n in 0..n_terms {
            let mut t = 1.0;
            for j in 0..n {
                let j = j as f64;
                t *= (1.0 / 3.0 + j) * (2.0 / 3.0 + j) / ((0.5 + j) * (1.0 + j)) * x;
            }
            total += t;
        }
        total
    }

    #[test]
    fn origin_is_one() {
        assert_eq!(f_series(0.0, &SeriesConfig::default()).unwrap(), 1.0);
        assert_eq!(f_closed(0.0).unwrap(), 1.0);
    }

    #[test]
    fn half_matches_closed_value_and_oracle() {
        let expected = (1.0 + 3f64.sqrt()) / 2.0;
        let got = f_series(0.5, &SeriesConfig::default()).unwrap();
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        assert!((pochhammer_sum(0.5, 200) - expected).abs() < 1e-13);
        assert!((f_closed(PI / 4.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn sin_squared_point_three() {
        let x = 0.3f64.sin().powi(2);
        let lhs = f_series(x, &SeriesConfig::default()).unwrap();
        let rhs = 0.1f64.cos() / 0.3f64.cos();
        assert!((lhs - rhs).abs() < 1e-13);
        assert!((f_closed(0.3).unwrap() - lhs).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        let cfg = SeriesConfig::default();
        assert!(matches!(f_series(-0.1, &cfg), Err(Error::Domain { .. })));
        assert!(matches!(f_series(1.0, &cfg), Err(Error::Domain { .. })));
        assert!(f_closed(FRAC_PI_2).is_err());
        assert!(f_closed(-FRAC_PI_2).is_err());
    }

    #[test]
    fn term_cap_reports_non_convergence() {
        let cfg = SeriesConfig {
            tol: 1e-15,
            max_terms: 10,
        };
        assert!(matches!(
            f_series(0.9, &cfg),
            Err(Error::NonConvergence { terms: 10, .. })
        ));
        let bad = SeriesConfig {
            tol: 0.0,
            max_terms: 10,
        };
        assert!(f_series(0.1, &bad).is_err());
    }

    #[test]
    fn triplication_examples() {
        assert_eq!(triplication_residual(0.0), 0.0);
        assert!(triplication_residual(PI).abs() < 1e-15);
        assert!(triplication_residual(1.234).abs() < 1e-15);
    }

    #[test]
    fn series_and_cutoff_branch_agree_near_cutoff() {
        let cfg = SeriesConfig::default();
        let below = partial_sum(SERIES_CUTOFF, &cfg).unwrap().0;
        let closed = f_closed(SERIES_CUTOFF.sqrt().asin()).unwrap();
        assert!((below - closed).abs() < 1e-12 * closed);
    }

    #[test]
    fn f_of_sine_matches_series() {
        let cfg = SeriesConfig::default();
        for &y in &[0.0, 0.1, 0.45, -0.7, 0.9] {
            let a = f_of_sine(y);
            let b = f_series(y * y, &cfg).unwrap();
            assert!((a - b).abs() < 1e-14 * b, "{y}: {a} {b}");
        }
    }
}
