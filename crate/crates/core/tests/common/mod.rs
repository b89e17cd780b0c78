//! Reference implementations that share no code with the library.

#![allow(dead_code)]

/// Arithmetic-geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// Roots `e1 > e2 > e3` of `4t³ − g₂t − g₃` for the modulus `k`, together
/// with the gaps `[e1 − e2, e1 − e3, e2 − e3]`.
///
/// Built from the critical values `δ` of `d` (the zeros of
/// `δ³ + 3δ² + 4k² − 4`) through `e = (4k²/9)/(1 − δ) − 1/3`. The two
/// negative `δ` sit about `2k/√3` either side of `−2`, so unlike the roots
/// `e2`, `e3` they stay well separated as `k → 0`.
pub fn roots_and_gaps(k: f64) -> ([f64; 3], [f64; 3]) {
    let c = 4.0 * k * k - 4.0;
    let newton = |mut x: f64| {
        for _ in 0..100 {
            let step = (x * x * x + 3.0 * x * x + c) / (3.0 * x * x + 6.0 * x);
            x -= step;
            if step.abs() < 1e-17 * x.abs() {
                break;
            }
        }
        x
    };
    let eps = 2.0 * k / 3f64.sqrt();
    let d1 = newton(1.0);
    let d2 = newton(-2.0 + eps);
    let d3 = newton(-2.0 - eps);
    let a = 4.0 * k * k / 9.0;
    let e = |d: f64| a / (1.0 - d) - 1.0 / 3.0;
    let gap = |x: f64, y: f64| a * (x - y) / ((1.0 - x) * (1.0 - y));
    (
        [e(d1), e(d2), e(d3)],
        [gap(d1, d2), gap(d1, d3), gap(d2, d3)],
    )
}

/// Half-periods `(ω₁, ω₃/i)` from the root gaps `[e1 − e2, e1 − e3, e2 − e3]`.
pub fn half_periods(gaps: [f64; 3]) -> (f64, f64) {
    let [g12, g13, g23] = gaps;
    let half_pi = std::f64::consts::FRAC_PI_2;
    (
        half_pi / agm(g13.sqrt(), g12.sqrt()),
        half_pi / agm(g13.sqrt(), g23.sqrt()),
    )
}

/// Jacobi `sn(u | m)` for real `u`, `0 ≤ m < 1`, by the descending AGM.
pub fn jacobi_sn(u: f64, m: f64) -> f64 {
    let mut a = vec![1.0_f64];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > 1e-17 && a.len() < 40 {
        let an = *a.last().unwrap();
        c.push(0.5 * (an - b));
        a.push(0.5 * (an + b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    phi.sin()
}

/// `℘(x)` on the real axis: `e3 + (e1 − e3) / sn²(√(e1 − e3) x | m)`.
pub fn wp_real(x: f64, k: f64) -> f64 {
    let ([_, _, e3], [_, g13, g23]) = roots_and_gaps(k);
    let sn = jacobi_sn(g13.sqrt() * x, g23 / g13);
    e3 + g13 / (sn * sn)
}

/// `℘(iy)` on the imaginary axis, from `℘(iy; g₂, g₃) = −℘(y; g₂, −g₃)`.
pub fn wp_imag(y: f64, k: f64) -> f64 {
    let ([e1, _, _], [g12, g13, _]) = roots_and_gaps(k);
    let sn = jacobi_sn(g13.sqrt() * y, g12 / g13);
    e1 - g13 / (sn * sn)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `F(1/3, 2/3; 1/2; x)` with each term rebuilt from Pochhammer products.
pub fn hypergeometric_terms(x: f64, n_terms: usize) -> f64 {
    (0..n_terms)
        .map(|n| {
            let mut t = 1.0;
            for j in 0..n {
                let j = j as f64;
                t *= (1.0 / 3.0 + j) * (2.0 / 3.0 + j) / ((0.5 + j) * (1.0 + j)) * x;
            }
            t
        })
        .sum()
}

/// Exact invariants for `k`: `g₂ = (4/27)(9 − 8k²)`, `g₃ = (8/729)(8k⁴ − 36k² + 27)`.
pub fn invariants(k: f64) -> (f64, f64) {
    let k2 = k * k;
    (
        4.0 / 27.0 * (9.0 - 8.0 * k2),
        8.0 / 729.0 * (8.0 * k2 * k2 - 36.0 * k2 + 27.0),
    )
}

/// `℘(z)` for half-periods `K`, `iK′` from the q-series
///
/// `℘(z) = −(π/K)²/12 (1 − 24S₀) + (π/2K)² csc²(πz/2K) − 2(π/K)² Σ n q²ⁿ/(1 − q²ⁿ) cos(nπz/K)`
///
/// with `q = e^{−πK′/K}` and `S₀ = Σ n q²ⁿ/(1 − q²ⁿ)`. Valid for `|Im z| < 2K′`.
pub fn wp_q_series(
    z: shen_elliptic::Complex64,
    big_k: f64,
    big_k_prime: f64,
) -> shen_elliptic::Complex64 {
    use std::f64::consts::PI;
    let q2 = (-2.0 * PI * big_k_prime / big_k).exp();
    let mut s0 = 0.0;
    let mut s = shen_elliptic::Complex64::new(0.0, 0.0);
    let mut q2n = 1.0;
    for n in 1..2000 {
        q2n *= q2;
        let w = n as f64 * q2n / (1.0 - q2n);
        let term = w * (n as f64 * PI * z / big_k).cos();
        s0 += w;
        s += term;
        if term.norm() < 1e-18 * s.norm().max(1e-300) && w < 1e-18 {
            break;
        }
    }
    let a = PI / big_k;
    let sin = (0.5 * a * z).sin();
    -a * a / 12.0 * (1.0 - 24.0 * s0) + 0.25 * a * a / (sin * sin) - 2.0 * a * a * s
}
