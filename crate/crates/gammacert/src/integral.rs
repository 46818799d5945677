//! Independent numerical oracles for the coupling integral
//!
//!   I(n) = ∫₀¹∫₀¹ (x(1−x)y(1−y))ⁿ / ((1−xy)·(−log xy)) dx dy,
//!
//! three ways: double-exponential quadrature of the integral itself, the
//! telescoped closed-form series, and the Laplace leading-order size. The
//! same machinery evaluates the companion double integral whose value is
//! Euler's constant, and the residual of the central identity
//! I(n) = C(2n,n)·γ + L(n) − A(n) that ties the oracles to the exact side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::certified::CertifiedReal;
use crate::dyadic::Dyadic;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_harmonic_sum, binomial_row};
use crate::logs::{bits_for, LogTable};

/// Variable change used to neutralize the boundary behavior of the
/// integrands on the unit square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryTransform {
    /// x = 1/(1 + exp(−π·sinh t)): double-exponential clustering at both
    /// endpoints.
    #[default]
    TanhSinh,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the level-to-level difference.
    pub tolerance: f64,
    /// Trapezoid refinement levels (spacing 2^-level in the transformed
    /// variable).
    pub max_levels: u32,
    pub transform: BoundaryTransform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            tolerance: 1e-10,
            max_levels: 9,
            transform: BoundaryTransform::TanhSinh,
        }
    }
}

/// One transformed node: abscissa x, complement 1−x, log x, and the weight
/// (all f64; the quadrature oracle is estimated, not rigorous).
struct Node {
    x: f64,
    comp: f64,
    logx: f64,
    weight: f64,
}

/// Clip in t beyond which 1−x underflows past any useful contribution;
/// keeps min(x, 1−x) above ~1e-68 so no denominator product can underflow.
const T_MAX: f64 = 4.6;

fn nodes(level: u32) -> Vec<Node> {
    let h = 0.5f64.powi(level as i32);
    let steps = (T_MAX / h).floor() as i64;
    (-steps..=steps)
        .map(|k| {
            let t = k as f64 * h;
            let s = std::f64::consts::PI * t.sinh();
            let x = 1.0 / (1.0 + (-s).exp());
            let comp = 1.0 / (1.0 + s.exp());
            let logx = if s < 0.0 {
                s - s.exp().ln_1p()
            } else {
                -(-s).exp().ln_1p()
            };
            let weight = std::f64::consts::PI * t.cosh() * x * comp;
            Node {
                x,
                comp,
                logx,
                weight,
            }
        })
        .collect()
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Tensor-product pass at one level. `corner_power` is the exponent n of
/// the vanishing factor; `numer` picks the integrand family.
fn tensor_pass(level: u32, integrand: impl Fn(&Node, &Node) -> f64 + Sync) -> f64 {
    let h = 0.5f64.powi(level as i32);
    let pts = nodes(level);
    let rows: Vec<f64> = pts
        .par_iter()
        .map(|p| kahan_sum(pts.iter().map(|q| integrand(p, q))))
        .collect();
    kahan_sum(rows.into_iter()) * h * h
}

fn refine(
    spec: &QuadratureSpec,
    integrand: impl Fn(&Node, &Node) -> f64 + Sync,
) -> Result<CertifiedReal> {
    let BoundaryTransform::TanhSinh = spec.transform;
    let mut prev: Option<f64> = None;
    let mut best = f64::NAN;
    let mut achieved = f64::INFINITY;
    for level in 3..=spec.max_levels.max(4) {
        let val = tensor_pass(level, &integrand);
        if let Some(p) = prev {
            achieved = (val - p).abs();
            best = val;
            if achieved <= spec.tolerance {
                // estimated (not rigorous) radius: the level difference with
                // a rounding floor, since the level difference can hit zero
                let floor = 64.0 * f64::EPSILON * val.abs();
                let radius = achieved.max(floor).max(1e-300);
                return Ok(CertifiedReal::new(
                    Dyadic::from_f64(val),
                    Dyadic::from_f64(radius),
                ));
            }
        }
        prev = Some(val);
    }
    Err(Error::QuadratureDidNotConverge {
        best,
        achieved,
        levels: spec.max_levels,
    })
}

/// The coupling integral by 2-D double-exponential quadrature. The radius
/// is an estimate (level-to-level difference), not a rigorous bound; the
/// series oracle is the rigorous one.
pub fn integral_by_quadrature(n: u64, spec: &QuadratureSpec) -> Result<CertifiedReal> {
    assert!(n >= 1);
    let p = n as i32;
    refine(spec, move |a, b| {
        let core = (a.x * a.comp * b.x * b.comp).powi(p) * a.weight * b.weight;
        let one_minus_xy = a.comp + b.comp - a.comp * b.comp;
        let neg_log_xy = -(a.logx + b.logx);
        core / (one_minus_xy * neg_log_xy)
    })
}

/// Euler's constant as the double integral of −(1−x)/((1−xy)·log xy)
/// over the unit square, same quadrature scheme.
pub fn gamma_by_quadrature(spec: &QuadratureSpec) -> Result<CertifiedReal> {
    refine(spec, "constant double integral", |a, b| {
        let one_minus_xy = a.comp + b.comp - a.comp * b.comp;
        let neg_log_xy = -(a.logx + b.logx);
        a.comp * a.weight * b.weight / (one_minus_xy * neg_log_xy)
    })
}

/// Rigorous tail bound for the series: Σ_{v>V} F(v) ≤ (n!)²/((2n+1)·2n·V^(2n)).
fn series_tail_bound(n: u64, v: u64) -> BigRational {
    let mut fact2 = BigInt::one();
    for k in 2..=n {
        fact2 *= BigInt::from(k);
    }
    fact2 = &fact2 * &fact2;
    BigRational::new(
        fact2,
        BigInt::from(2 * n + 1) * BigInt::from(2 * n) * BigInt::from(v).pow(2 * n as u32),
    )
}

fn dyadic_upper_of_rational(r: &BigRational, bits: u32) -> Dyadic {
    let (q, err) = Dyadic::from_int(r.numer().clone()).div_int(r.denom(), bits);
    q.add(&err)
}

/// Certified sum Σ_{m=a}^{b} 1/m at the given working precision.
fn reciprocal_segment(a: u64, b: u64, bits: u32) -> CertifiedReal {
    let mut acc = CertifiedReal::zero();
    for m in a..=b {
        let (q, err) = Dyadic::one().div_int(&BigInt::from(m), bits);
        acc = acc.add(&CertifiedReal::new(q, err), bits);
    }
    acc
}

/// The coupling integral as the tail series Σ_{v=n+1}^∞ F(v), where each
/// F(v) has the partial-fraction closed form
///
///   F(v) = Σᵢ C(n,i)²/(v+i)
///        + 2·Σ_{i<j} (−1)^(i+j)·C(n,i)·C(n,j)·log((v+j)/(v+i))/(j−i).
///
/// Summed to a truncation index V chosen so the rigorous tail bound is at
/// most tolerance/2 (the bound joins the radius); the log terms telescope
/// across v, so only the ~2n window logs at both ends are ever computed.
pub fn integral_by_series(n: u64, tolerance: &Dyadic, logs: &LogTable) -> CertifiedReal {
    assert!(n >= 1);
    assert!(tolerance.is_positive());
    let tol_rational = BigRational::new(
        tolerance.mantissa().clone(),
        BigInt::one() << tolerance.exponent().unsigned_abs(),
    );
    let tol_rational = if tolerance.exponent() >= 0 {
        BigRational::from_integer(tolerance.mantissa() << tolerance.exponent() as u64)
    } else {
        tol_rational
    };
    let half_tol = tol_rational / BigInt::from(2);
    let mut v = n + 1;
    while series_tail_bound(n, v) > half_tol {
        v = (v + 1).max(v + v / 4);
    }
    while v > n + 1 && series_tail_bound(n, v - 1) <= half_tol {
        v -= 1;
    }

    let bits = bits_for(tolerance) + 64;
    let row = binomial_row(n);

    // rational part: Σ_i C(n,i)²·(H_{V+i} − H_{n+i}); the i = 0 window is
    // computed once and the others are end adjustments
    let base = reciprocal_segment(n + 1, v, bits);
    let mut rational_part = CertifiedReal::zero();
    let mut window = base;
    let mut i = 0u64;
    loop {
        let c2 = &row[i as usize] * &row[i as usize];
        rational_part = rational_part.add(&window.mul_int(&c2, bits), bits);
        if i == n {
            break;
        }
        // slide: drop 1/(n+i+1), gain 1/(V+i+1)
        window = window
            .sub(&reciprocal_segment(n + i + 1, n + i + 1, bits), bits)
            .add(&reciprocal_segment(v + i + 1, v + i + 1, bits), bits);
        i += 1;
    }

    // log part, telescoped: Σ_{v'=n+1}^{V} log((v'+j)/(v'+i)) equals the
    // top window Σ_{m=V+i+1}^{V+j} log m minus the bottom window
    // Σ_{m=n+i+1}^{n+j} log m
    let coeff_bits = bits + 2 * n as u32 + 16;
    let log_bits = coeff_bits + 16;
    let mut log_part = CertifiedReal::zero();
    for i in 0..=n {
        for j in (i + 1)..=n {
            let mut window = CertifiedReal::zero();
            for m in (v + i + 1)..=(v + j) {
                window = window.add(&logs.ln_int(m, log_bits), coeff_bits);
            }
            for m in (n + i + 1)..=(n + j) {
                window = window.sub(&logs.ln_int(m, log_bits), coeff_bits);
            }
            let mut coeff = BigRational::new(
                &row[i as usize] * &row[j as usize] * BigInt::from(2),
                BigInt::from(j - i),
            );
            if (i + j) % 2 == 1 {
                coeff = -coeff;
            }
            log_part = log_part.add(&window.mul_rational(&coeff, coeff_bits), coeff_bits);
        }
    }

    let partial = rational_part.add(&log_part, bits);
    let tail = dyadic_upper_of_rational(&series_tail_bound(n, v), 32);
    let out = CertifiedReal::new(
        partial.value().clone(),
        partial.radius().add(&tail).coarsen_upper(),
    );
    assert!(
        out.radius().le(tolerance),
        "series radius {:?} missed tolerance {:?} at n={n}",
        out.radius(),
        tolerance
    );
    out
}

/// Laplace leading-order size of the integral: 4^(−2n)·π/(3n·log 4), with a
/// configurable relative slack as its radius (default 100% — it is an
/// asymptotic estimate, not a bound).
pub fn integral_asymptotic_with_slack(n: u64, rel_slack: f64, logs: &LogTable) -> CertifiedReal {
    assert!(n >= 1);
    let bits = 96;
    let pi = logs.pi(bits);
    let ln2 = logs.ln2(bits);
    let denom = ln2.mul_int(&BigInt::from(6 * n), bits);
    let est = pi.div(&denom, bits).mul_pow2(-(4 * n as i64));
    let slack = est
        .value()
        .abs()
        .mul(&Dyadic::from_f64(rel_slack))
        .add(est.radius());
    CertifiedReal::new(est.value().clone(), slack.coarsen_upper())
}

pub fn integral_asymptotic(n: u64, logs: &LogTable) -> CertifiedReal {
    integral_asymptotic_with_slack(n, 1.0, logs)
}

/// Residual of the central identity at index n:
/// I − (C(2n,n)·γ_ref + L(n) − A(n)). For a sound `i_value` and `gamma_ref`
/// the returned interval contains zero; its width is the combined error
/// budget of the inputs plus the (much smaller) linear-form radius.
pub fn identity_residual(
    n: u64,
    i_value: &CertifiedReal,
    gamma_ref: &CertifiedReal,
    engine: &Engine,
) -> Result<CertifiedReal> {
    assert!(n >= 1);
    let c = binomial(2 * n, n as i64);
    // the linear form should not dominate the input budgets
    let l_target = if i_value.radius().is_positive() {
        let (q, _) = i_value.radius().div_int(&BigInt::from(8), 24);
        let floor = Dyadic::pow2(-4096);
        if q.lt(&floor) {
            floor
        } else {
            q
        }
    } else {
        Dyadic::pow2(-128)
    };
    let l = engine.linear_form(n, &l_target)?;
    let bits = bits_for(&l_target) + 2 * n as u32 + 64;
    let a = CertifiedReal::from_rational(&binomial_harmonic_sum(n), bits);
    let rhs = gamma_ref.mul_int(&c, bits).add(&l, bits).sub(&a, bits);
    Ok(i_value.sub(&rhs, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::pow2_at_most_pow10;

    fn f64_of(x: &CertifiedReal) -> f64 {
        x.value().to_f64_lossy()
    }

    #[test]
    fn quadrature_first_integral() {
        // closed form: I(1) = 2γ + 2 log 2 − 5/2 = 0.040725690922956340...
        let i1 = integral_by_quadrature(1, &QuadratureSpec::default()).unwrap();
        assert!((f64_of(&i1) - 0.04072569092295634).abs() < 1e-12);
    }

    #[test]
    fn quadrature_decay_band() {
        let spec = QuadratureSpec::default();
        let i2 = integral_by_quadrature(2, &spec).unwrap();
        assert!(f64_of(&i2) > 0.0 && f64_of(&i2) < 16f64.powi(-2));
        // level-difference radius is honest enough for a coarse band at n=8
        let i8 = integral_by_quadrature(8, &spec).unwrap();
        let ratio = f64_of(&i8) / f64_of(&integral_asymptotic(8, &LogTable::new()));
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
    }

    #[test]
    fn quadrature_nonconvergence_is_explicit() {
        let spec = QuadratureSpec {
            tolerance: 1e-30, // unreachable in f64
            max_levels: 4,
            transform: BoundaryTransform::TanhSinh,
        };
        match integral_by_quadrature(1, &spec) {
            Err(Error::QuadratureDidNotConverge { best, achieved, .. }) => {
                assert!((best - 0.04072569).abs() < 1e-6);
                assert!(achieved > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn series_single_term_closed_form() {
        // n=1, first term F(2) = 1/2 + 1/3 − 2·log(3/2) = 0.0224031171170045...
        // obtained by truncating the series right after v = 2: run with a
        // coarse tolerance but V forced by construction is not exposed, so
        // check instead that the series minus the rest matches at tolerance
        let logs = LogTable::new();
        let tol = pow2_at_most_pow10(-13);
        let s = integral_by_series(1, &tol, &logs);
        assert!((f64_of(&s) - 0.04072569092295634).abs() < 2e-11);
    }

    #[test]
    fn series_decay() {
        let logs = LogTable::new();
        let tol = pow2_at_most_pow10(-12);
        let i4 = integral_by_series(4, &tol, &logs);
        assert!(f64_of(&i4) < 16f64.powi(-4));
        assert!(f64_of(&i4) > 0.0);
    }

    #[test]
    fn oracles_agree_small() {
        let logs = LogTable::new();
        let spec = QuadratureSpec::default();
        for n in 1..=3u64 {
            let q = integral_by_quadrature(n, &spec).unwrap();
            let s = integral_by_series(n, &pow2_at_most_pow10(-12), &logs);
            let diff = q.sub(&s, 128);
            assert!(
                diff.contains_zero(),
                "oracles disagree at n={n}: {diff:?}"
            );
        }
    }

    #[test]
    fn residual_and_negative_control() {
        let engine = Engine::new();
        let logs = LogTable::new();
        let gamma_ref = engine
            .gamma_enclosure_for(&pow2_at_most_pow10(-40))
            .unwrap();
        let s2 = integral_by_series(2, &pow2_at_most_pow10(-12), &logs);
        let r = identity_residual(2, &s2, &gamma_ref, &engine).unwrap();
        assert!(r.contains_zero());
        // perturbing the integral by 1e-4 must push zero out of the interval
        let perturbed = CertifiedReal::new(
            s2.value().add(&Dyadic::from_f64(1e-4)),
            s2.radius().clone(),
        );
        let r_bad = identity_residual(2, &perturbed, &gamma_ref, &engine).unwrap();
        assert!(!r_bad.contains_zero());
    }
}
