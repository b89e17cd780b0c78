//! `d`, `s²`, `c²` and `s c` as elliptic functions of a complex variable,
//! realised through `℘`, together with residuals of every identity that ties
//! them to each other and to the real construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::phase_map::PhaseMap;
use crate::weierstrass::{Invariants, Lattice, Weierstrass};

/// `d` is reported as a pole when `|℘ + 1/3|` drops below this.
pub const D_POLE_EXCLUSION: f64 = 1e-10;

/// Default finite-difference step for complex derivatives.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Radii `1e-2 · 2⁻ʲ` for `j = 0..=10`, spanning `1e-2` down to `~1e-5`.
pub fn dyadic_radii() -> Vec<f64> {
    (0..=10).map(|j| 1e-2 / f64::from(1u32 << j)).collect()
}

/// Everything derived from one modulus: invariants, lattice, `℘` and the
/// real phase map.
#[derive(Debug, Clone)]
pub struct ShenContext {
    k: Modulus,
    wp: Weierstrass,
    phase: PhaseMap,
}

impl ShenContext {
    pub fn new(k: Modulus) -> Result<Self> {
        Ok(ShenContext {
            k,
            wp: Weierstrass::of_modulus(k)?,
            phase: PhaseMap::new(k)?,
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        Self::new(Modulus::new(k)?)
    }

    pub fn modulus(&self) -> Modulus {
        self.k
    }

    pub fn invariants(&self) -> &Invariants {
        self.wp.invariants()
    }

    pub fn lattice(&self) -> &Lattice {
        self.wp.lattice()
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.wp
    }

    pub fn phase_map(&self) -> &PhaseMap {
        &self.phase
    }

    /// The pole `(2/3) i K′` of `d`.
    pub fn pole_of_d(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 / 3.0 * self.lattice().big_k_prime)
    }

    /// `1 − d = (4/9) k² / (℘ + 1/3)`, zero at lattice points.
    pub fn one_minus_d(&self, z: Complex64) -> Result<Complex64> {
        let p = match self.wp.wp(z) {
            Ok(p) => p,
            Err(Error::Pole { .. }) => return Ok(Complex64::new(0.0, 0.0)),
            Err(e) => return Err(e),
        };
        let shifted = p + 1.0 / 3.0;
        if shifted.norm() < D_POLE_EXCLUSION {
            return Err(Error::Pole {
                what: "d",
                re: z.re,
                im: z.im,
            });
        }
        Ok(4.0 / 9.0 * self.k.k2() / shifted)
    }

    /// `d = 1 − (4/9) k² (℘ + 1/3)⁻¹`.
    pub fn d(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 - self.one_minus_d(z)?)
    }

    /// `s² = (1 − d)(2 + d)² / (4k²)`.
    pub fn s_squared(&self, z: Complex64) -> Result<Complex64> {
        let omd = self.one_minus_d(z)?;
        let two_plus_d = 3.0 - omd;
        Ok(omd * two_plus_d * two_plus_d / (4.0 * self.k.k2()))
    }

    /// `c² = 1 − s²`.
    pub fn c_squared(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 - self.s_squared(z)?)
    }

    /// `s c = −(3/(16k²)) {(d + 2)²}′`, with the derivative taken by central
    /// differences of step `h` along the real direction, or the imaginary one
    /// when the real stencil touches a pole.
    pub fn sc_product(&self, z: Complex64, h: f64) -> Result<Complex64> {
        let g = |w: Complex64| -> Result<Complex64> {
            let t = self.d(w)? + 2.0;
            Ok(t * t)
        };
        self.check_regular(z)?;
        let deriv = central_difference(g, z, h)?;
        Ok(-3.0 / (16.0 * self.k.k2()) * deriv)
    }

    /// Central-difference `d′(z)`.
    pub fn d_prime_fd(&self, z: Complex64, h: f64) -> Result<Complex64> {
        central_difference(|w| self.d(w), z, h)
    }

    /// Richardson-extrapolated central difference `(4 D(h/2) − D(h)) / 3`,
    /// accurate to `O(h⁴)`.
    pub fn d_prime_richardson(&self, z: Complex64, h: f64) -> Result<Complex64> {
        let coarse = self.d_prime_fd(z, h)?;
        let fine = self.d_prime_fd(z, 0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// Right-hand side `(4/9)(1 − d)(d³ + 3d² + 4k² − 4)` of the equation
    /// for `(d′)²`.
    pub fn d_ode_rhs(&self, z: Complex64) -> Result<Complex64> {
        let d = self.d(z)?;
        let k2 = self.k.k2();
        Ok(4.0 / 9.0 * (1.0 - d) * (d * d * d + 3.0 * d * d + 4.0 * k2 - 4.0))
    }

    fn check_regular(&self, z: Complex64) -> Result<()> {
        self.one_minus_d(z).map(|_| ())
    }

    /// `|d³ + 3d² − 4(1 − k² s²)|`.
    pub fn cubic_relation_residual(&self, z: Complex64) -> Result<f64> {
        let d = self.d(z)?;
        let s2 = self.s_squared(z)?;
        Ok((d * d * d + 3.0 * d * d - 4.0 * (1.0 - self.k.k2() * s2)).norm())
    }

    /// `|(d′)² − (4/9)(1 − d)(d³ + 3d² + 4k² − 4)|` with `d′` by central
    /// differences.
    pub fn d_ode_residual(&self, z: Complex64, h: f64) -> Result<f64> {
        let dp = self.d_prime_fd(z, h)?;
        Ok((dp * dp - self.d_ode_rhs(z)?).norm())
    }

    /// `d` taken from the real phase map when `z` lies on the principal real
    /// interval, and from the `℘` form otherwise.
    pub fn d_two_path(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && z.re.abs() <= self.phase.u_max() {
            Ok(Complex64::new(self.phase.scd(z.re)?.d, 0.0))
        } else {
            self.d(z)
        }
    }

    /// Runs the change of variables `r = 1/(1 − d)`, `q = (4k²/9) r`,
    /// `p = q − 1/3` and returns `|p − ℘(z)|`.
    pub fn substitution_chain_check(&self, z: Complex64) -> Result<f64> {
        let d = self.d_two_path(z)?;
        let omd = 1.0 - d;
        if omd.norm() == 0.0 {
            return Err(Error::Degenerate("d = 1: z is a lattice point"));
        }
        let r = omd.inv();
        let q = 4.0 / 9.0 * self.k.k2() * r;
        let p = q - 1.0 / 3.0;
        Ok((p - self.wp.wp(z)?).norm())
    }

    /// Log-log slopes of `|d|` and `|s²|` approaching `pole` along the real
    /// direction.
    pub fn pole_orders(&self, pole: Complex64) -> Result<PoleOrders> {
        let radii = dyadic_radii();
        let mut d_abs = Vec::with_capacity(radii.len());
        let mut s2_abs = Vec::with_capacity(radii.len());
        for &r in &radii {
            let z = pole + r;
            d_abs.push(self.d(z)?.norm());
            s2_abs.push(self.s_squared(z)?.norm());
        }
        Ok(PoleOrders {
            d_slope: loglog_slope(&radii, &d_abs),
            s2_slope: loglog_slope(&radii, &s2_abs),
        })
    }
}

/// Growth exponents measured near a pole: `−1` for a simple pole, `−3` for
/// a triple one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleOrders {
    pub d_slope: f64,
    pub s2_slope: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn central_difference<F>(f: F, z: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(h > 0.0) {
        return Err(Error::Config("finite-difference step must be positive"));
    }
    for dir in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
        match (f(z + dir), f(z - dir)) {
            (Ok(a), Ok(b)) => return Ok((a - b) / (2.0 * dir)),
            (Err(Error::Pole { .. }), _) | (_, Err(Error::Pole { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Err(Error::Degenerate(
        "finite-difference stencil hits a pole in both directions",
    ))
}
