//! Certification that `d` has a pole at `(2/3) i K′`, i.e. that
//! `℘((2/3) i K′) = −1/3`.
//!
//! The polynomial side (the quartic built from the duplication formula, its
//! factor `w + 1`, the cubic cofactor and its discriminant) is checked in
//! exact rational arithmetic. The transcendental side evaluates `℘`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::ShenContext;
use crate::modulus::Modulus;
use crate::poly::{ratio, RationalPoly};
use crate::weierstrass::Invariants;

/// Exact `(g₂, g₃)` for a rational `k²`.
pub fn invariants_exact(k2: &BigRational) -> (BigRational, BigRational) {
    let g2 = ratio(4, 27) * (ratio(9, 1) - ratio(8, 1) * k2);
    let g3 = ratio(8, 729) * (ratio(8, 1) * k2 * k2 - ratio(36, 1) * k2 + ratio(27, 1));
    (g2, g3)
}

/// `f(z) = 12 z (4z³ − g₂ z − g₃) − (6z² − g₂/2)²`, assembled by polynomial
/// arithmetic from the exact invariants of `k²`.
pub fn quartic_f_exact(k2: &BigRational) -> RationalPoly {
    let (g2, g3) = invariants_exact(k2);
    let z = RationalPoly::x();
    let cubic = RationalPoly::new(vec![-g3, -g2.clone(), BigRational::zero(), ratio(4, 1)]);
    let left = (&z * &cubic).scale(&ratio(12, 1));
    let quad = RationalPoly::new(vec![-(g2 * ratio(1, 2)), BigRational::zero(), ratio(6, 1)]);
    &left - &(&quad * &quad)
}

/// Floating-point coefficients of `f`, lowest degree first:
/// `f(z) = 12z⁴ − 6g₂z² − 12g₃z − g₂²/4`.
pub fn quartic_f(inv: &Invariants) -> [f64; 5] {
    [
        -0.25 * inv.g2 * inv.g2,
        -12.0 * inv.g3,
        -6.0 * inv.g2,
        0.0,
        12.0,
    ]
}

pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// `(27/4) f(w/3)`.
pub fn rescaled_quartic_exact(k2: &BigRational) -> RationalPoly {
    quartic_f_exact(k2)
        .compose_scaled(&ratio(1, 3))
        .scale(&ratio(27, 4))
}

/// `w⁴ − (2/3)(9 − 8k²)w² − (8/27)(8k⁴ − 36k² + 27)w − (1/27)(9 − 8k²)²`.
pub fn displayed_quartic_exact(k2: &BigRational) -> RationalPoly {
    let a = ratio(9, 1) - ratio(8, 1) * k2;
    let b = ratio(8, 1) * k2 * k2 - ratio(36, 1) * k2 + ratio(27, 1);
    RationalPoly::new(vec![
        -(ratio(1, 27) * &a * &a),
        -(ratio(8, 27) * b),
        -(ratio(2, 3) * a),
        BigRational::zero(),
        BigRational::one(),
    ])
}

/// `w³ − w² + (1/3)(16k² − 15)w − (1/27)(9 − 8k²)²`.
pub fn cubic_factor_exact(k2: &BigRational) -> RationalPoly {
    let a = ratio(9, 1) - ratio(8, 1) * k2;
    RationalPoly::new(vec![
        -(ratio(1, 27) * &a * &a),
        ratio(1, 3) * (ratio(16, 1) * k2 - ratio(15, 1)),
        -BigRational::one(),
        BigRational::one(),
    ])
}

/// Floating-point cubic factor, lowest degree first.
pub fn cubic_factor(k: Modulus) -> [f64; 4] {
    let k2 = k.k2();
    let a = 9.0 - 8.0 * k2;
    [-a * a / 27.0, (16.0 * k2 - 15.0) / 3.0, -1.0, 1.0]
}

/// Expands `(27/4) f(w/3)`, the displayed expansion and
/// `(w + 1) · cubic` exactly and compares all coefficients.
pub fn factorization_check(k2: &BigRational) -> bool {
    let lhs = rescaled_quartic_exact(k2);
    let displayed = displayed_quartic_exact(k2);
    let linear = RationalPoly::new(vec![BigRational::one(), BigRational::one()]);
    let product = &linear * &cubic_factor_exact(k2);
    lhs.degree() == Some(4) && lhs == displayed && lhs == product
}

/// `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²` for `a x³ + b x² + c x + d`.
pub fn cubic_discriminant_of(a: f64, b: f64, c: f64, d: f64) -> f64 {
    18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c
        - 4.0 * a * c * c * c
        - 27.0 * a * a * d * d
}

/// The cubic factor's discriminant by its closed form and from coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicDiscriminant {
    pub formula: f64,
    pub from_coefficients: f64,
}

impl CubicDiscriminant {
    pub fn relative_gap(&self) -> f64 {
        (self.formula - self.from_coefficients).abs() / self.formula.abs()
    }
}

/// `−(4096/27) k⁴ (1 − k²)²`, paired with the discriminant computed from the
/// cubic's coefficients.
///
/// The coefficient side is evaluated exactly at the binary value of `k²` and
/// rounded once: in floating point the five discriminant terms cancel down
/// to `O(k⁴)` and lose about `log₁₀(1/k⁴)` digits.
pub fn cubic_discriminant(k: Modulus) -> CubicDiscriminant {
    let k2 = k.k2();
    let formula = -4096.0 / 27.0 * k2 * k2 * (1.0 - k2) * (1.0 - k2);
    let exact_k2 = BigRational::from_float(k2).expect("finite modulus");
    CubicDiscriminant {
        formula,
        from_coefficients: cubic_discriminant_exact(&exact_k2)
            .to_f64()
            .expect("representable discriminant"),
    }
}

/// Exact discriminant of the cubic factor for rational `k²`.
pub fn cubic_discriminant_exact(k2: &BigRational) -> BigRational {
    let p = cubic_factor_exact(k2);
    let (a, b, c, d) = (p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
    ratio(18, 1) * &a * &b * &c * &d - ratio(4, 1) * &b * &b * &b * &d + &b * &b * &c * &c
        - ratio(4, 1) * &a * &c * &c * &c
        - ratio(27, 1) * &a * &a * &d * &d
}

/// The four zeros of `f`: `−1/3`, one positive real zero, and a conjugate
/// pair (stored with positive imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootClassification {
    pub minus_third: f64,
    pub positive: f64,
    pub complex_pair: Complex64,
}

impl RootClassification {
    pub fn roots(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.minus_third, 0.0),
            Complex64::new(self.positive, 0.0),
            self.complex_pair,
            self.complex_pair.conj(),
        ]
    }
}

/// Finds the zeros of `f` by removing the known factor `w + 1` and solving
/// the cubic cofactor in closed form, then checks the pattern.
pub fn classify_quartic_roots(k: Modulus) -> Result<RootClassification> {
    let [c0, c1, c2, _] = cubic_factor(k);
    let (real_w, pair_w) = solve_monic_cubic_one_real(c2, c1, c0)?;
    let inv = Invariants::of_modulus(k);
    let f = quartic_f(&inv);
    let minus_third = -1.0 / 3.0;
    let positive = real_w / 3.0;
    let complex_pair = pair_w / 3.0;

    let scale = 12.0;
    if eval_real(&f, minus_third).abs() > 1e-12 * scale {
        return Err(Error::Classification(format!(
            "f(-1/3) = {} is not zero",
            eval_real(&f, minus_third)
        )));
    }
    if !(positive > 0.0) {
        return Err(Error::Classification(format!(
            "real zero {positive} of the cubic factor is not positive"
        )));
    }
    if !(complex_pair.im.abs() > 1e-12) {
        return Err(Error::Classification(format!(
            "expected a non-real conjugate pair, got {complex_pair}"
        )));
    }
    for r in [Complex64::new(positive, 0.0), complex_pair] {
        let size = r.norm().max(1.0).powi(4) * scale;
        if eval_complex(&f, r).norm() > 1e-10 * size {
            return Err(Error::Classification(format!("{r} is not a zero of f")));
        }
    }
    Ok(RootClassification {
        minus_third,
        positive,
        complex_pair,
    })
}

/// Zeros of `w³ + b w² + c w + d` when the discriminant is negative: the real
/// zero by Cardano (Newton-polished), the pair from the deflated quadratic.
fn solve_monic_cubic_one_real(b: f64, c: f64, d: f64) -> Result<(f64, Complex64)> {
    let disc = cubic_discriminant_of(1.0, b, c, d);
    if !(disc < 0.0) {
        return Err(Error::Classification(format!(
            "cubic discriminant {disc} is not negative"
        )));
    }
    // w = t − b/3: t³ + p t + q
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let root_d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let t = (-q / 2.0 + root_d).cbrt() + (-q / 2.0 - root_d).cbrt();
    let mut w = t - shift;
    for _ in 0..3 {
        let val = ((w + b) * w + c) * w + d;
        let der = (3.0 * w + 2.0 * b) * w + c;
        if der == 0.0 {
            break;
        }
        w -= val / der;
    }
    // w² + (b + w) x + (c + w(b + w))
    let lin = b + w;
    let cst = c + w * lin;
    let disc2 = lin * lin - 4.0 * cst;
    let pair = Complex64::new(-lin / 2.0, (-disc2).max(0.0).sqrt() / 2.0);
    Ok((w, pair))
}

/// Outcome of evaluating `℘` at `a = (2/3) i K′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCertificate {
    pub wp_at_pole: Complex64,
    /// `|℘(a) + 1/3|`.
    pub residual: f64,
    /// `|℘(−a) − ℘(a)|`: the mirror pole at `−a`.
    pub mirror_residual: f64,
    /// `|℘(2a) − ℘(a)|`, since `2a ≡ −a` modulo `2iK′`.
    pub congruence_residual: f64,
    /// `|f(℘(a))|` for the quartic of the duplication formula.
    pub quartic_residual: f64,
}

impl PoleCertificate {
    /// Whether `℘(a)` is real to `tol` and strictly negative.
    pub fn real_and_negative(&self, tol: f64) -> bool {
        self.wp_at_pole.im.abs() < tol && self.wp_at_pole.re < 0.0
    }

    /// Largest residual among all the checks, including `|Im ℘(a)|`.
    pub fn max_residual(&self) -> f64 {
        self.residual
            .max(self.mirror_residual)
            .max(self.congruence_residual)
            .max(self.wp_at_pole.im.abs())
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.real_and_negative(tol) && self.max_residual() < tol
    }
}

pub fn certify_pole(ctx: &ShenContext) -> Result<PoleCertificate> {
    let wp = ctx.weierstrass();
    let a = ctx.pole_of_d();
    let b = wp.wp(a)?;
    let mirror = wp.wp(-a)?;
    let doubled = wp.wp(2.0 * a)?;
    let f = quartic_f(wp.invariants());
    Ok(PoleCertificate {
        wp_at_pole: b,
        residual: (b + 1.0 / 3.0).norm(),
        mirror_residual: (mirror - b).norm(),
        congruence_residual: (doubled - b).norm(),
        quartic_residual: eval_complex(&f, b).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: f64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn leading_coefficient_is_twelve() {
        for k2 in [ratio(1, 4), ratio(1, 2), ratio(999, 1000)] {
            let f = quartic_f_exact(&k2);
            assert_eq!(f.degree(), Some(4));
            assert_eq!(f.coeff(4), ratio(12, 1));
            assert!(f.coeff(3).is_zero());
        }
    }

    #[test]
    fn minus_third_is_exact_root() {
        let f = quartic_f_exact(&ratio(1, 4));
        assert!(f.eval(&ratio(-1, 3)).is_zero());
        let (_, rem) = f.deflate(&ratio(-1, 3));
        assert!(rem.is_zero());
    }

    #[test]
    fn float_quartic_matches_exact() {
        let k = m(0.5);
        let exact = quartic_f_exact(&ratio(1, 4)).to_f64();
        let float = quartic_f(&Invariants::of_modulus(k));
        for (a, b) in exact.iter().zip(float.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn factorization_at_quarter() {
        let k2 = ratio(1, 4);
        assert!(factorization_check(&k2));
        let cubic = cubic_factor_exact(&k2);
        assert_eq!(
            cubic,
            RationalPoly::from_i64_ratios(&[(-49, 27), (-11, 3), (-1, 1), (1, 1)])
        );
        assert!(factorization_check(&ratio(1, 2)));
    }

    #[test]
    fn discriminant_at_half() {
        let d = cubic_discriminant(m(0.5));
        assert!((d.formula + 16.0 / 3.0).abs() < 1e-13);
        assert!(d.relative_gap() < 1e-12);
        assert_eq!(cubic_discriminant_exact(&ratio(1, 4)), ratio(-16, 3));
    }

    #[test]
    fn roots_at_half() {
        let r = classify_quartic_roots(m(0.5)).unwrap();
        assert_eq!(r.minus_third, -1.0 / 3.0);
        assert!(r.positive > 0.0);
        assert!(r.complex_pair.im > 0.0);
    }

    #[test]
    fn certificate_at_half() {
        let ctx = ShenContext::from_k(0.5).unwrap();
        let c = certify_pole(&ctx).unwrap();
        assert!(c.residual < 1e-10, "{c:?}");
        assert!(c.passed(1e-10));
        assert!(c.quartic_residual < 1e-9);
    }
}
