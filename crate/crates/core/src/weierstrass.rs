//! Weierstrass `℘` with the invariants of the family, its rectangular period
//! lattice, and evaluation of `℘`, `℘′` anywhere in the complex plane.
//!
//! Evaluation reduces `z` into the cell centred at the origin, halves it until
//! the Laurent series converges fast, sums the series and then applies the
//! duplication formula on the way back up. No theta functions are involved.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::quadrature::{integrate, QuadratureConfig};

/// Points this close to a lattice point are treated as poles of `℘`.
pub const POLE_EXCLUSION_RADIUS: f64 = 1e-8;

/// Halving stops once `|z| ≤ LAURENT_RADIUS_FRACTION · min(2K, 2K′)`.
pub const LAURENT_RADIUS_FRACTION: f64 = 0.5;

const LAURENT_TERMS: usize = 48;

/// `g₂`, `g₃` and the discriminant `Δ = g₂³ − 27 g₃²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub g2: f64,
    pub g3: f64,
    pub delta: f64,
}

impl Invariants {
    /// Invariants of an arbitrary real cubic; `delta` is computed from them.
    pub fn new(g2: f64, g3: f64) -> Self {
        Invariants {
            g2,
            g3,
            delta: g2 * g2 * g2 - 27.0 * g3 * g3,
        }
    }

    /// `g₂ = (4/27)(9 − 8k²)`, `g₃ = (8/27²)(8k⁴ − 36k² + 27)`, with `Δ`
    /// taken from its factored form `(16³/27³) k⁶ (1 − k²)`.
    pub fn of_modulus(k: Modulus) -> Self {
        let k2 = k.k2();
        Invariants {
            g2: 4.0 / 27.0 * (9.0 - 8.0 * k2),
            g3: 8.0 / 729.0 * (8.0 * k2 * k2 - 36.0 * k2 + 27.0),
            delta: discriminant_factored(k),
        }
    }

    /// `g₂³ − 27 g₃²` computed directly from the stored invariants.
    pub fn delta_from_invariants(&self) -> f64 {
        self.g2 * self.g2 * self.g2 - 27.0 * self.g3 * self.g3
    }

    /// `4t³ − g₂ t − g₃`.
    pub fn cubic(&self, t: f64) -> f64 {
        (4.0 * t * t - self.g2) * t - self.g3
    }

    fn cubic_prime(&self, t: f64) -> f64 {
        12.0 * t * t - self.g2
    }
}

/// `(16³/27³) k⁶ (1 − k²)`.
pub fn discriminant_factored(k: Modulus) -> f64 {
    let k2 = k.k2();
    4096.0 / 19683.0 * k2 * k2 * k2 * (1.0 - k2)
}

/// Half-periods and the real roots of `4t³ − g₂t − g₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    /// `2K` is the real fundamental period.
    pub big_k: f64,
    /// `2iK′` is the imaginary fundamental period.
    pub big_k_prime: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl Lattice {
    /// Rectangular lattice of a cubic with positive discriminant.
    pub fn of_invariants(inv: &Invariants) -> Result<Self> {
        if !(inv.delta > 0.0) {
            return Err(Error::Degenerate(
                "non-positive discriminant: lattice is not rectangular",
            ));
        }
        let ([e1, e2, e3], [gap12, gap23]) = cubic_roots(inv);
        let cfg = QuadratureConfig {
            abs_tol: 1e-13,
            max_refinements: 40,
        };
        // t = e1 + s² removes the endpoint singularity; s = √b tan θ then
        // maps s ∈ [0, ∞) onto θ ∈ [0, π/2].
        let gap13 = gap12 + gap23;
        let big_k = complete_integral(gap12, gap13, &cfg)?;
        let big_k_prime = complete_integral(gap13, gap23, &cfg)?;
        Ok(Lattice {
            big_k,
            big_k_prime,
            e1,
            e2,
            e3,
        })
    }

    pub fn omega1(&self) -> Complex64 {
        Complex64::new(self.big_k, 0.0)
    }

    pub fn omega3(&self) -> Complex64 {
        Complex64::new(0.0, self.big_k_prime)
    }

    /// Translate `z` by a lattice vector into `[-K, K] × [-K′, K′]`.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let n = (z.re / (2.0 * self.big_k)).round();
        let m = (z.im / (2.0 * self.big_k_prime)).round();
        Complex64::new(
            z.re - 2.0 * self.big_k * n,
            z.im - 2.0 * self.big_k_prime * m,
        )
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        self.reduce(z).norm()
    }
}

/// `∫₀^{π/2} dθ / √(a cos²θ + b sin²θ)` for `a, b > 0`.
fn complete_integral(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    // the integral is symmetric in (a, b); keep any peak at θ = 0, where θ
    // is represented exactly
    let (a, b) = (a.min(b), a.max(b));
    integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            1.0 / (a * c * c + b * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        cfg,
    )
}

/// Real roots of `4t³ − g₂t − g₃` (descending) and the gaps
/// `e₁ − e₂`, `e₂ − e₃`.
///
/// The trigonometric solution locates the roots; the isolated one is then
/// Newton-polished and the close pair rebuilt from `e₁ + e₂ + e₃ = 0` and
/// `(e₁ − e₂)(e₁ − e₃)(e₂ − e₃) = √Δ / 4`, which keeps the small gap accurate
/// when two roots nearly coincide.
fn cubic_roots(inv: &Invariants) -> ([f64; 3], [f64; 2]) {
    // t³ + p t + q with p = −g₂/4, q = −g₃/4
    let p = -inv.g2 / 4.0;
    let q = -inv.g3 / 4.0;
    let amp = 2.0 * (-p / 3.0).sqrt();
    let arg = (1.5 * q / p * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let mut r = [0, 1, 2].map(|j| amp * (theta - 2.0 * PI * j as f64 / 3.0).cos());
    r.sort_by(|a, b| b.total_cmp(a));
    let polish = |mut t: f64| {
        for _ in 0..3 {
            let d = inv.cubic_prime(t);
            if d != 0.0 {
                t -= inv.cubic(t) / d;
            }
        }
        t
    };
    let sqrt_delta = inv.delta.sqrt();
    if r[0] - r[1] >= r[1] - r[2] {
        let e1 = polish(r[0]);
        let gap23 = sqrt_delta / inv.cubic_prime(e1);
        let e2 = 0.5 * (-e1 + gap23);
        let e3 = 0.5 * (-e1 - gap23);
        ([e1, e2, e3], [e1 - e2, gap23])
    } else {
        let e3 = polish(r[2]);
        let gap12 = sqrt_delta / inv.cubic_prime(e3);
        let e1 = 0.5 * (-e3 + gap12);
        let e2 = 0.5 * (-e3 - gap12);
        ([e1, e2, e3], [gap12, e2 - e3])
    }
}

/// `℘` for a fixed real lattice, with its Laurent coefficients cached.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    inv: Invariants,
    lat: Lattice,
    /// `c_j` for `℘(z) = z⁻² + Σ_{j≥2} c_j z^{2j−2}`, stored from `j = 2`.
    coeffs: Vec<f64>,
    laurent_radius: f64,
}

impl Weierstrass {
    pub fn new(inv: Invariants) -> Result<Self> {
        let lat = Lattice::of_invariants(&inv)?;
        Ok(Self::with_lattice(inv, lat))
    }

    pub fn of_modulus(k: Modulus) -> Result<Self> {
        Self::new(Invariants::of_modulus(k))
    }

    pub fn with_lattice(inv: Invariants, lat: Lattice) -> Self {
        Weierstrass {
            inv,
            lat,
            coeffs: laurent_coefficients(&inv, LAURENT_TERMS),
            laurent_radius: LAURENT_RADIUS_FRACTION * 2.0 * lat.big_k.min(lat.big_k_prime),
        }
    }

    pub fn invariants(&self) -> &Invariants {
        &self.inv
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.wp_and_prime(z)?.0)
    }

    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.wp_and_prime(z)?.1)
    }

    /// `℘″ = 6℘² − g₂/2`.
    pub fn wp_second(&self, z: Complex64) -> Result<Complex64> {
        let p = self.wp(z)?;
        Ok(6.0 * p * p - 0.5 * self.inv.g2)
    }

    /// `(℘(z), ℘′(z))`.
    pub fn wp_and_prime(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain {
                what: "℘ (non-finite argument)",
                value: if z.re.is_finite() { z.im } else { z.re },
            });
        }
        let mut w = self.lat.reduce(z);
        if w.norm() < POLE_EXCLUSION_RADIUS {
            return Err(Error::Pole {
                what: "℘",
                re: z.re,
                im: z.im,
            });
        }
        // expand about the nearest of 0 and the half-periods
        let (centre, shift) = self.nearest_centre(w);
        w -= centre;
        let Some((e, product)) = shift else {
            return Ok(self.near_origin(w));
        };
        if w.norm() < 1e-100 {
            return Ok((Complex64::new(e, 0.0), Complex64::new(0.0, 0.0)));
        }
        // ℘(ω + t) = e + (e − e′)(e − e″) / (℘(t) − e)
        let (p, dp) = self.near_origin(w);
        let denom = (p - e).inv();
        Ok((e + product * denom, -product * dp * denom * denom))
    }

    /// Nearest expansion centre to a reduced point, with `℘(ω)` and
    /// `(e − e′)(e − e″)` when the centre is a half-period.
    fn nearest_centre(&self, w: Complex64) -> (Complex64, Option<(f64, f64)>) {
        let Lattice {
            big_k,
            big_k_prime,
            e1,
            e2,
            e3,
        } = self.lat;
        let sx = if w.re >= 0.0 { big_k } else { -big_k };
        let sy = if w.im >= 0.0 {
            big_k_prime
        } else {
            -big_k_prime
        };
        let candidates = [
            (Complex64::new(0.0, 0.0), None),
            (Complex64::new(sx, 0.0), Some((e1, (e1 - e2) * (e1 - e3)))),
            (Complex64::new(0.0, sy), Some((e3, (e3 - e1) * (e3 - e2)))),
            (Complex64::new(sx, sy), Some((e2, (e2 - e1) * (e2 - e3)))),
        ];
        candidates
            .into_iter()
            .min_by(|a, b| (w - a.0).norm().total_cmp(&(w - b.0).norm()))
            .expect("non-empty candidate list")
    }

    /// Laurent series, preceded by halvings and followed by duplications
    /// when `w` lies outside the Laurent radius.
    fn near_origin(&self, mut w: Complex64) -> (Complex64, Complex64) {
        let mut halvings = 0;
        while w.norm() > self.laurent_radius {
            w *= 0.5;
            halvings += 1;
        }
        let (mut p, mut dp) = self.laurent(w);
        let half_g2 = 0.5 * self.inv.g2;
        for _ in 0..halvings {
            let slope = (6.0 * p * p - half_g2) / dp;
            let p2 = 0.25 * slope * slope - 2.0 * p;
            dp = slope * (p - p2) - dp;
            p = p2;
        }
        (p, dp)
    }

    fn laurent(&self, w: Complex64) -> (Complex64, Complex64) {
        let w2 = w * w;
        let inv_w2 = w2.inv();
        let mut p = inv_w2;
        let mut dp = -2.0 * inv_w2 * inv_w2 * w;
        // power = w^{2j-4}, starting at j = 2
        let mut power = Complex64::new(1.0, 0.0);
        let scale = p.norm();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let j = (idx + 2) as f64;
            let term = c * power * w2;
            p += term;
            dp += (2.0 * j - 2.0) * c * power * w;
            if term.norm() < 1e-17 * scale && idx > 2 {
                break;
            }
            power *= w2;
        }
        (p, dp)
    }

    /// Residual of `℘(2a) + 2℘(a) = ¼ (℘″(a)/℘′(a))²`.
    pub fn duplication_check(&self, a: Complex64) -> Result<f64> {
        let (p, dp) = self.wp_and_prime(a)?;
        if dp.norm() < 1e-8 {
            return Err(Error::Degenerate("℘′(a) vanishes: a is a half-period"));
        }
        let p_double = self.wp(2.0 * a)?;
        let ratio = (6.0 * p * p - 0.5 * self.inv.g2) / dp;
        Ok((p_double + 2.0 * p - 0.25 * ratio * ratio).norm())
    }

    /// `|℘′² − (4℘³ − g₂℘ − g₃)|` at `z`.
    pub fn ode_residual(&self, z: Complex64) -> Result<f64> {
        let (p, dp) = self.wp_and_prime(z)?;
        Ok((dp * dp - (4.0 * p * p * p - self.inv.g2 * p - self.inv.g3)).norm())
    }
}

/// Laurent coefficients `c_2, c_3, …` with `c_2 = g₂/20`, `c_3 = g₃/28` and
/// `c_j = 3/((2j+1)(j−3)) Σ_{m=2}^{j−2} c_m c_{j−m}` for `j ≥ 4`.
pub fn laurent_coefficients(inv: &Invariants, count: usize) -> Vec<f64> {
    let mut c = vec![0.0; count.max(2) + 2];
    c[2] = inv.g2 / 20.0;
    c[3] = inv.g3 / 28.0;
    for j in 4..c.len() {
        let s: f64 = (2..=j - 2).map(|m| c[m] * c[j - m]).sum();
        c[j] = 3.0 / ((2 * j + 1) as f64 * (j - 3) as f64) * s;
    }
    c.drain(..2);
    c.truncate(count);
    c
}
