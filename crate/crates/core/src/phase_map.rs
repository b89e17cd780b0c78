//! The phase map `u(φ) = ∫₀^φ F(1/3, 2/3; 1/2; k² sin² θ) dθ`, its inverse on
//! the principal branch `|φ| ≤ π/2`, and the real functions `s`, `c`, `d`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::hypergeometric::{f_of_sine, f_series, SeriesConfig};
use crate::modulus::Modulus;
use crate::quadrature::integrate;

pub use crate::quadrature::QuadratureConfig;

const NEWTON_MAX_ITER: usize = 50;

/// Values of `s = sin φ(u)`, `c = cos φ(u)` and `d = φ′(u)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Scd {
    pub s: f64,
    pub c: f64,
    pub d: f64,
}

/// Central-difference residuals of `s′ = c d`, `c′ = −s d`,
/// `d′ = −(8/3) k² s c / (2 + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeResiduals {
    pub rs: f64,
    pub rc: f64,
    pub rd: f64,
}

impl DerivativeResiduals {
    pub fn max(&self) -> f64 {
        self.rs.max(self.rc).max(self.rd)
    }
}

/// Real-variable construction for one modulus.
///
/// Construction integrates once to find `U_max = u(π/2)`; everything else is
/// computed on demand.
#[derive(Debug, Clone)]
pub struct PhaseMap {
    k: Modulus,
    cfg: QuadratureConfig,
    u_max: f64,
}

impl PhaseMap {
    pub fn new(k: Modulus) -> Result<Self> {
        Self::with_config(k, QuadratureConfig::default())
    }

    pub fn with_config(k: Modulus, cfg: QuadratureConfig) -> Result<Self> {
        let mut map = PhaseMap { k, cfg, u_max: 0.0 };
        map.u_max = map.integral(0.0, FRAC_PI_2)?;
        Ok(map)
    }

    pub fn modulus(&self) -> Modulus {
        self.k
    }

    /// `u(π/2)`; the inverse is defined on `[-U_max, U_max]`.
    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// `du/dφ = F(1/3, 2/3; 1/2; k² sin² φ)`.
    pub fn du_dphi(&self, phi: f64) -> f64 {
        f_of_sine(self.k.k() * phi.sin())
    }

    fn integral(&self, from: f64, to: f64) -> Result<f64> {
        let k = self.k.k();
        integrate(|t| f_of_sine(k * t.sin()), from, to, &self.cfg)
    }

    pub fn u_of_phi(&self, phi: f64) -> Result<f64> {
        if !(phi.abs() <= FRAC_PI_2) {
            return Err(Error::Domain {
                what: "phase map (principal branch |φ| ≤ π/2)",
                value: phi,
            });
        }
        if phi < 0.0 {
            return Ok(-self.integral(0.0, -phi)?);
        }
        self.integral(0.0, phi)
    }

    /// Inverse of [`PhaseMap::u_of_phi`]: an RK4 solve of `dφ/du = d(φ)`
    /// supplies the starting point, Newton on `u(φ) − u` finishes it.
    pub fn phi_of_u(&self, u: f64) -> Result<f64> {
        let u_max = self.u_max;
        if !(u.abs() <= u_max * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::OutOfRange { u, u_max });
        }
        if u < 0.0 {
            return Ok(-self.phi_of_u(-u)?);
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let mut phi = self.rk4_guess(u).clamp(0.0, FRAC_PI_2);
        let mut u_at = self.integral(0.0, phi)?;
        let (mut lo, mut hi) = (0.0_f64, FRAC_PI_2);
        for _ in 0..NEWTON_MAX_ITER {
            let g = u_at - u;
            if g > 0.0 {
                hi = hi.min(phi);
            } else {
                lo = lo.max(phi);
            }
            let mut next = phi - g / self.du_dphi(phi);
            if !(next > lo && next < hi) {
                next = if next >= hi {
                    0.5 * (phi + hi)
                } else {
                    0.5 * (phi + lo)
                };
                if g == 0.0 {
                    next = phi;
                }
            }
            if (next - phi).abs() <= 4.0 * f64::EPSILON * phi.max(1e-300) {
                return Ok(next);
            }
            // integrate only the increment
            u_at += self.integral(phi, next)?;
            phi = next;
        }
        Ok(phi)
    }

    fn rk4_guess(&self, u: f64) -> f64 {
        let steps = ((u / 0.05).ceil() as usize).max(4);
        let h = u / steps as f64;
        let rate = |phi: f64| 1.0 / self.du_dphi(phi.clamp(-FRAC_PI_2, FRAC_PI_2));
        let mut phi = 0.0;
        for _ in 0..steps {
            let k1 = rate(phi);
            let k2 = rate(phi + 0.5 * h * k1);
            let k3 = rate(phi + 0.5 * h * k2);
            let k4 = rate(phi + h * k3);
            phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        phi
    }

    /// `(sin φ(u), cos φ(u), 1/F(k² sin² φ(u)))`.
    pub fn scd(&self, u: f64) -> Result<Scd> {
        let phi = self.phi_of_u(u)?;
        let (s, c) = phi.sin_cos();
        let f = f_series(self.k.k2() * s * s, &SeriesConfig::default())?;
        Ok(Scd { s, c, d: 1.0 / f })
    }

    pub fn derivative_residuals(&self, u: f64, h: f64) -> Result<DerivativeResiduals> {
        if !(h > 0.0) {
            return Err(Error::Config("finite-difference step must be positive"));
        }
        let mid = self.scd(u)?;
        let plus = self.scd(u + h)?;
        let minus = self.scd(u - h)?;
        let fd = |a: f64, b: f64| (a - b) / (2.0 * h);
        let k2 = self.k.k2();
        Ok(DerivativeResiduals {
            rs: (fd(plus.s, minus.s) - mid.c * mid.d).abs(),
            rc: (fd(plus.c, minus.c) + mid.s * mid.d).abs(),
            rd: (fd(plus.d, minus.d) + 8.0 / 3.0 * k2 * mid.s * mid.c / (2.0 + mid.d)).abs(),
        })
    }

    /// `(d′)² − (4/9)(1 − d)(d³ + 3d² + 4k² − 4)` with a central-difference `d′`.
    pub fn ode_residual(&self, u: f64, h: f64) -> Result<f64> {
        let d = self.scd(u)?.d;
        let dp = (self.scd(u + h)?.d - self.scd(u - h)?.d) / (2.0 * h);
        let k2 = self.k.k2();
        Ok((dp * dp - 4.0 / 9.0 * (1.0 - d) * (d * d * d + 3.0 * d * d + 4.0 * k2 - 4.0)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(k: f64) -> PhaseMap {
        PhaseMap::new(Modulus::new(k).unwrap()).unwrap()
    }

    #[test]
    fn origin_and_small_phi() {
        let m = map(0.5);
        assert_eq!(m.u_of_phi(0.0).unwrap(), 0.0);
        assert!((m.u_of_phi(1e-8).unwrap() - 1e-8).abs() < 1e-15);
        assert_eq!(m.phi_of_u(0.0).unwrap(), 0.0);
        let scd = m.scd(0.0).unwrap();
        assert_eq!((scd.s, scd.c, scd.d), (0.0, 1.0, 1.0));
    }

    #[test]
    fn domain_and_range_errors() {
        let m = map(0.5);
        assert!(matches!(m.u_of_phi(2.0), Err(Error::Domain { .. })));
        assert!(matches!(
            m.phi_of_u(m.u_max() * 1.01),
            Err(Error::OutOfRange { .. })
        ));
        assert!(m.derivative_residuals(0.1, 0.0).is_err());
    }

    #[test]
    fn round_trip_grid() {
        for &k in &[0.2, 0.5, 0.8] {
            let m = map(k);
            for &phi in &[0.1, 0.5, 1.0] {
                let u = m.u_of_phi(phi).unwrap();
                let back = m.phi_of_u(u).unwrap();
                assert!((back - phi).abs() < 1e-11, "k={k} φ={phi}: {back}");
            }
        }
    }

    #[test]
    fn inverse_reaches_the_end_of_the_branch() {
        let m = map(0.95);
        let phi = m.phi_of_u(m.u_max()).unwrap();
        assert!((phi - FRAC_PI_2).abs() < 1e-10);
        let phi = m.phi_of_u(-m.u_max()).unwrap();
        assert!((phi + FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn derivative_at_origin() {
        let m = map(0.6);
        let h = 1e-4;
        let slope = m.phi_of_u(h).unwrap() / h;
        assert!((slope - 1.0).abs() < 1e-8);
        let r = m.derivative_residuals(0.0, h).unwrap();
        assert!(r.rs < h * h);
        assert!(r.rd < h * h);
    }

    #[test]
    fn derivative_formulas_at_interior_point() {
        let r = map(0.7).derivative_residuals(0.3, 1e-5).unwrap();
        assert!(r.max() < 1e-8, "{r:?}");
    }

    #[test]
    fn cubic_relation_on_real_branch() {
        let m = map(0.5);
        let k2 = 0.25;
        for &u in &[0.4, -0.9, 1.3, m.u_max() * 0.999] {
            let Scd { s, c, d } = m.scd(u).unwrap();
            assert!((d * d * d + 3.0 * d * d - 4.0 * (1.0 - k2 * s * s)).abs() < 1e-11);
            assert!((4.0 * k2 * s * s - (1.0 - d) * (2.0 + d).powi(2)).abs() < 1e-11);
            assert!((s * s + c * c - 1.0).abs() < 1e-13);
            assert!(d > 0.0 && d <= 1.0);
        }
    }
}
