//! Batch certification: one [`VerificationReport`] per (identity, modulus).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::ShenContext;
use crate::modulus::Modulus;
use crate::poles::{certify_pole, factorization_check};

/// Tolerance used by `verify` when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Base step of the extrapolated central differences in the `d-ode` identity.
pub const ODE_STEP: f64 = 1e-3;

/// Step used for `s c` when checking periodicity. The difference-quotient
/// error is itself periodic and cancels; a wide step keeps roundoff small.
pub const PERIODICITY_SC_STEP: f64 = 1e-3;

/// Allowed deviation of the measured log-log slope from `−1` (for `d`) and
/// from `−3` (for `s²`).
pub const D_SLOPE_TOLERANCE: f64 = 0.05;
pub const S2_SLOPE_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    Pythagorean,
    CubicRelation,
    DOde,
    Duplication,
    SubstitutionChain,
    Factorization,
    Pole,
    Periodicity,
    PoleOrder,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::Pythagorean,
        Identity::CubicRelation,
        Identity::DOde,
        Identity::Duplication,
        Identity::SubstitutionChain,
        Identity::Factorization,
        Identity::Pole,
        Identity::Periodicity,
        Identity::PoleOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Pythagorean => "pythagorean",
            Identity::CubicRelation => "cubic-relation",
            Identity::DOde => "d-ode",
            Identity::Duplication => "duplication",
            Identity::SubstitutionChain => "substitution-chain",
            Identity::Factorization => "factorization",
            Identity::Pole => "pole",
            Identity::Periodicity => "periodicity",
            Identity::PoleOrder => "pole-order",
        }
    }

    fn seed(self, k: f64) -> u64 {
        (self as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k.to_bits()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Parses `all` or a comma-separated list of identity names.
pub fn parse_suite(spec: &str) -> Result<Vec<Identity>> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(Identity::ALL.to_vec());
    }
    let mut ids = spec
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<Identity>>>()?;
    ids.sort_by_key(|id| id.name());
    ids.dedup();
    if ids.is_empty() {
        return Err(Error::UnknownName(spec.to_string()));
    }
    Ok(ids)
}

/// Outcome of checking one identity at one modulus.
///
/// `passed` holds exactly when `max_residual < tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_name: String,
    pub k: f64,
    pub samples: usize,
    /// Non-finite values (failed evaluations) serialize as `null`.
    #[serde(with = "nonfinite_as_null")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(
        identity: Identity,
        k: f64,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        VerificationReport {
            identity_name: identity.name().to_string(),
            k,
            samples,
            max_residual,
            tolerance,
            passed: max_residual < tolerance,
        }
    }
}

mod nonfinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Runs every identity for every modulus. Reports are sorted by identity
/// name, then `k`, whatever the execution order.
pub fn run(
    ks: &[f64],
    identities: &[Identity],
    tol: f64,
    exec: Execution,
) -> Result<Vec<VerificationReport>> {
    if !(tol > 0.0) {
        return Err(Error::Config("tolerance must be positive"));
    }
    let moduli = ks
        .iter()
        .map(|&k| Modulus::new(k))
        .collect::<Result<Vec<_>>>()?;
    let contexts = exec
        .map(&moduli, |&k| ShenContext::new(k))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(Identity, &ShenContext)> = identities
        .iter()
        .flat_map(|&id| contexts.iter().map(move |ctx| (id, ctx)))
        .collect();
    let mut reports = exec.map(&jobs, |&(id, ctx)| check(id, ctx, tol));
    reports.sort_by(|a, b| {
        a.identity_name
            .cmp(&b.identity_name)
            .then(a.k.total_cmp(&b.k))
    });
    Ok(reports)
}

/// Checks a single identity; evaluation failures yield an infinite residual.
pub fn check(id: Identity, ctx: &ShenContext, tol: f64) -> VerificationReport {
    let k = ctx.modulus().k();
    let mut rng = ChaCha8Rng::seed_from_u64(id.seed(k));
    let outcome = match id {
        Identity::Pythagorean => pythagorean(ctx, &mut rng),
        Identity::CubicRelation => cubic_relation(ctx, &mut rng),
        Identity::DOde => d_ode(ctx, &mut rng),
        Identity::Duplication => duplication(ctx, &mut rng),
        Identity::SubstitutionChain => substitution_chain(ctx, &mut rng),
        Identity::Factorization => Ok(factorization(&mut rng)),
        Identity::Pole => pole(ctx, tol),
        Identity::Periodicity => periodicity(ctx, &mut rng),
        Identity::PoleOrder => {
            return match pole_order(ctx) {
                Ok((n, r)) => VerificationReport::new(id, k, n, r, 1.0),
                Err(_) => VerificationReport::new(id, k, 0, f64::INFINITY, 1.0),
            }
        }
    };
    match outcome {
        Ok((samples, residual)) => VerificationReport::new(id, k, samples, residual, tol),
        Err(_) => VerificationReport::new(id, k, 0, f64::INFINITY, tol),
    }
}

type Outcome = Result<(usize, f64)>;

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Outcome {
    let mut n = 0;
    let mut worst = 0.0_f64;
    for v in values {
        let v = v?;
        n += 1;
        worst = if v.is_nan() {
            f64::INFINITY
        } else {
            worst.max(v)
        };
    }
    Ok((n, worst))
}

/// Random points of the period cell `[-K, K] × [-K′, K′]` keeping at least
/// `margin · min(K, K′)` away from lattice points, from `±(2/3) i K′` and,
/// optionally, from the half-periods.
pub fn cell_samples<R: Rng>(
    ctx: &ShenContext,
    rng: &mut R,
    count: usize,
    margin: f64,
    avoid_half_periods: bool,
) -> Vec<Complex64> {
    let lat = *ctx.lattice();
    let min_dist = margin * lat.big_k.min(lat.big_k_prime);
    let mut avoid = vec![Complex64::new(0.0, 0.0), ctx.pole_of_d(), -ctx.pole_of_d()];
    if avoid_half_periods {
        avoid.extend([lat.omega1(), lat.omega3(), lat.omega1() + lat.omega3()]);
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::new(
            rng.gen_range(-lat.big_k..lat.big_k),
            rng.gen_range(-lat.big_k_prime..lat.big_k_prime),
        );
        if avoid
            .iter()
            .all(|&p| lat.distance_to_lattice(z - p) >= min_dist)
        {
            out.push(z);
        }
    }
    out
}

fn real_samples<R: Rng>(
    ctx: &ShenContext,
    rng: &mut R,
    count: usize,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let u_max = ctx.phase_map().u_max();
    (0..count)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * u_max * rng.gen_range(lo..hi)
        })
        .collect()
}

fn pythagorean<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let real = real_samples(ctx, rng, 20, 0.0, 1.0);
    let cplx = cell_samples(ctx, rng, 20, 0.1, false);
    max_of(
        real.iter()
            .map(|&u| {
                ctx.phase_map()
                    .scd(u)
                    .map(|t| (t.s * t.s + t.c * t.c - 1.0).abs())
            })
            .chain(
                cplx.iter()
                    .map(|&z| Ok((ctx.s_squared(z)? + ctx.c_squared(z)? - 1.0).norm())),
            ),
    )
}

fn cubic_relation<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let k2 = ctx.modulus().k2();
    let real = real_samples(ctx, rng, 20, 0.0, 1.0);
    let cplx = cell_samples(ctx, rng, 100, 0.25, false);
    max_of(
        real.iter()
            .map(|&u| {
                let t = ctx.phase_map().scd(u)?;
                Ok((t.d * t.d * t.d + 3.0 * t.d * t.d - 4.0 * (1.0 - k2 * t.s * t.s)).abs())
            })
            .chain(cplx.iter().map(|&z| ctx.cubic_relation_residual(z))),
    )
}

/// `|f − g| / max(1, |f|)`.
fn scaled_gap(f: Complex64, g: Complex64) -> f64 {
    (f - g).norm() / f.norm().max(1.0)
}

fn d_ode<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let cplx = cell_samples(ctx, rng, 20, 0.25, false);
    max_of(cplx.iter().map(|&z| {
        let dp = ctx.d_prime_richardson(z, ODE_STEP)?;
        Ok(scaled_gap(dp * dp, ctx.d_ode_rhs(z)?))
    }))
}

fn duplication<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let cplx = cell_samples(ctx, rng, 20, 0.25, true);
    let third = ctx.pole_of_d() * 0.5;
    max_of(
        cplx.iter()
            .chain(std::iter::once(&third))
            .map(|&a| ctx.weierstrass().duplication_check(a)),
    )
}

fn substitution_chain<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let real: Vec<Complex64> = real_samples(ctx, rng, 10, 0.3, 0.95)
        .into_iter()
        .map(|u| Complex64::new(u, 0.0))
        .collect();
    let cplx = cell_samples(ctx, rng, 10, 0.25, false);
    max_of(
        real.iter()
            .chain(&cplx)
            .map(|&z| ctx.substitution_chain_check(z)),
    )
}

/// Random `k² = p/q` with `1 ≤ p < q ≤ 1000`.
pub fn random_k2<R: Rng>(rng: &mut R) -> BigRational {
    let q: i64 = rng.gen_range(2..=1000);
    let p: i64 = rng.gen_range(1..q);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn factorization<R: Rng>(rng: &mut R) -> (usize, f64) {
    let failures = (0..20)
        .filter(|_| !factorization_check(&random_k2(rng)))
        .count();
    (20, failures as f64)
}

fn pole(ctx: &ShenContext, tol: f64) -> Outcome {
    let cert = certify_pole(ctx)?;
    let residual = if cert.real_and_negative(tol) {
        cert.max_residual()
    } else {
        f64::INFINITY
    };
    Ok((4, residual))
}

fn periodicity<R: Rng>(ctx: &ShenContext, rng: &mut R) -> Outcome {
    let lat = *ctx.lattice();
    let shifts = [2.0 * lat.omega1(), 2.0 * lat.omega3()];
    let cplx = cell_samples(ctx, rng, 50, 0.25, false);
    max_of(cplx.iter().map(|&z| {
        let eval = |w: Complex64| -> Result<[Complex64; 4]> {
            Ok([
                ctx.d(w)?,
                ctx.s_squared(w)?,
                ctx.c_squared(w)?,
                ctx.sc_product(w, PERIODICITY_SC_STEP)?,
            ])
        };
        let base = eval(z)?;
        let mut worst = scaled_gap(base[0], ctx.d(-z)?);
        for shift in shifts {
            let moved = eval(z + shift)?;
            for (a, b) in base.iter().zip(&moved) {
                worst = worst.max(scaled_gap(*a, *b));
            }
        }
        Ok(worst)
    }))
}

/// Normalised slope deviation: `≤ 1` means both poles of `d` are simple and
/// both poles of `s²` triple within the slope tolerances.
fn pole_order(ctx: &ShenContext) -> Outcome {
    let z0 = ctx.pole_of_d();
    let mut worst = 0.0_f64;
    for pole in [z0, -z0] {
        let o = ctx.pole_orders(pole)?;
        worst = worst
            .max((o.d_slope + 1.0).abs() / D_SLOPE_TOLERANCE)
            .max((o.s2_slope + 3.0).abs() / S2_SLOPE_TOLERANCE);
    }
    Ok((2 * crate::field::dyadic_radii().len(), worst))
}
