//! Hermite function of arbitrary real order,
//!
//! ```text
//! H_ν(z) = 2^ν √π [ 1F1(-ν/2; 1/2; z²) / Γ((1-ν)/2) - 2z 1F1((1-ν)/2; 3/2; z²) / Γ(-ν/2) ]
//! ```
//!
//! For `z > 0` the two branches grow like `e^{z²}` and cancel, so the
//! combination is re-evaluated in double-double arithmetic (series and
//! reciprocal gammas alike) whenever the cancellation exceeds the escalation
//! threshold. Non-negative integer orders hit a pole of one gamma factor and
//! the corresponding branch drops out exactly.
//!
//! Far out on the positive axis even double-double cannot absorb the
//! cancellation. There `H_ν(z) = 2^ν U(-ν/2, 1/2, z²)` and the asymptotic
//! series of `U` is used instead; its smallest term is about `e^{-z²}`.

use std::f64::consts::PI;

use super::dd::{DoubleDouble, DD_EPS};
use super::gamma::rgamma_dd;
use super::kummer::{series_dd, series_f64, ESCALATION_CONDITION, TARGET_REL};
use super::EvalResult;
use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn validate(nu: f64, z: f64) -> Result<()> {
    if nu.is_finite() && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "Hermite arguments must be finite (nu={nu}, z={z})"
        )))
    }
}

/// Reciprocal gamma rounded to double, with its relative error bound.
fn rgamma_with_error(x: f64) -> (f64, f64) {
    let r = rgamma_dd(DoubleDouble::from_f64(x)).to_f64();
    (r, 2.0 * f64::EPSILON)
}

fn double_route(nu: f64, z: f64) -> Option<EvalResult> {
    let z2 = z * z;
    let (rg1, e1) = rgamma_with_error(0.5 * (1.0 - nu));
    let (rg2, e2) = rgamma_with_error(-0.5 * nu);
    let prefactor = (nu * std::f64::consts::LN_2).exp() * SQRT_PI;

    let mut terms = 0;
    let mut t1 = 0.0;
    let mut t1_err = 0.0;
    if rg1 != 0.0 {
        let s = series_f64(-0.5 * nu, 0.5, z2);
        if !s.converged || s.condition(s.sum) > ESCALATION_CONDITION {
            return None;
        }
        terms += s.terms;
        t1 = s.sum * rg1;
        t1_err = (4.0 * f64::EPSILON * s.abs_sum + 3.0 * s.last_term) * rg1.abs() + t1.abs() * e1;
    }
    let mut t2 = 0.0;
    let mut t2_err = 0.0;
    if rg2 != 0.0 && z != 0.0 {
        let s = series_f64(0.5 * (1.0 - nu), 1.5, z2);
        if !s.converged || s.condition(s.sum) > ESCALATION_CONDITION {
            return None;
        }
        terms += s.terms;
        t2 = 2.0 * z * s.sum * rg2;
        t2_err = (4.0 * f64::EPSILON * s.abs_sum + 3.0 * s.last_term) * (2.0 * z * rg2).abs()
            + t2.abs() * e2;
    }
    let diff = t1 - t2;
    let spread = t1.abs() + t2.abs();
    if spread > ESCALATION_CONDITION * diff.abs() {
        return None;
    }
    let value = prefactor * diff;
    let err =
        prefactor * (t1_err + t2_err + f64::EPSILON * spread) + 2.0 * f64::EPSILON * value.abs();
    if !(err <= TARGET_REL * value.abs().max(1.0)) {
        return None;
    }
    Some(EvalResult {
        value,
        abs_error_estimate: err,
        terms_used: terms,
        escalated: false,
    })
}

/// `(2z)^ν Σ_k (-ν/2)_k ((1-ν)/2)_k (-z²)^{-k} / k!`, truncated at its
/// smallest term. Only used for `z > 0`.
fn asymptotic_route(nu: f64, z: f64) -> Option<EvalResult> {
    if z <= 0.0 {
        return None;
    }
    let inv_z2 = -1.0 / (z * z);
    let (p, q) = (-0.5 * nu, 0.5 * (1.0 - nu));
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut remainder = 0.0;
    let mut terms = 1;
    for k in 0..500 {
        let kf = f64::from(k);
        let next = term * (p + kf) * (q + kf) / (kf + 1.0) * inv_z2;
        if next == 0.0 {
            // integer order: the series terminates
            remainder = 0.0;
            break;
        }
        if next.abs() >= term.abs() {
            remainder = term.abs();
            break;
        }
        sum += next;
        abs_sum += next.abs();
        term = next;
        terms += 1;
        remainder = next.abs();
    }
    let prefactor = (nu * (2.0 * z).ln()).exp();
    let value = prefactor * sum;
    let err =
        prefactor * (remainder + 4.0 * f64::EPSILON * abs_sum) + 2.0 * f64::EPSILON * value.abs();
    if !(value.is_finite() && err <= TARGET_REL * value.abs().max(1.0)) {
        return None;
    }
    Some(EvalResult {
        value,
        abs_error_estimate: err,
        terms_used: terms,
        escalated: false,
    })
}

/// Double-double evaluation; returns the value, its error bound, and terms used.
pub(crate) fn hermite_dd(nu: f64, z: f64) -> Result<(DoubleDouble, f64, usize)> {
    let prefactor = (nu * std::f64::consts::LN_2).exp() * PI.sqrt();
    let (core, scale, truncation, terms) = hermite_dd_core(DoubleDouble::from_f64(nu), z)?;
    let value = core * prefactor;
    let err = prefactor * (16.0 * DD_EPS * scale + 3.0 * truncation)
        + 2.0 * f64::EPSILON * value.hi.abs();
    Ok((value, err, terms))
}

/// `H_ν(z) / (2^ν √π)` in double-double, with the absolute sum and
/// truncation bound of the series. Callers that combine orders `ν` and
/// `ν - 1` apply one rounded prefactor to both, so that relations between
/// the two orders hold to double-double accuracy. The order is taken in
/// double-double so that `ν - 1` is exact.
pub(crate) fn hermite_dd_core(nu: DoubleDouble, z: f64) -> Result<(DoubleDouble, f64, f64, usize)> {
    let z2 = DoubleDouble::from_prod(z, z);
    let a1 = nu * -0.5;
    let a2 = (-nu).add_f64(1.0) * 0.5;
    let nu = nu.to_f64();
    let rg1 = rgamma_dd(a2);
    let rg2 = rgamma_dd(a1);

    let mut terms = 0;
    let mut t1 = DoubleDouble::ZERO;
    let mut scale = 0.0;
    let mut truncation = 0.0;
    if rg1.hi != 0.0 {
        let s = series_dd(a1, DoubleDouble::from_f64(0.5), z2);
        if !s.converged {
            return Err(Error::Precision(format!(
                "Hermite series for nu={nu}, z={z} did not converge"
            )));
        }
        terms += s.terms;
        t1 = s.sum * rg1;
        scale += s.abs_sum * rg1.hi.abs();
        truncation += s.last_term * rg1.hi.abs();
    }
    let mut t2 = DoubleDouble::ZERO;
    if rg2.hi != 0.0 && z != 0.0 {
        let s = series_dd(a2, DoubleDouble::from_f64(1.5), z2);
        if !s.converged {
            return Err(Error::Precision(format!(
                "Hermite series for nu={nu}, z={z} did not converge"
            )));
        }
        terms += s.terms;
        t2 = s.sum * rg2 * (2.0 * z);
        scale += s.abs_sum * (2.0 * z * rg2.hi).abs();
        truncation += s.last_term * (2.0 * z * rg2.hi).abs();
    }
    Ok((t1 - t2, scale, truncation, terms))
}

/// `H_ν(z)` for real order and argument.
pub fn hermite_h(nu: f64, z: f64) -> Result<EvalResult> {
    validate(nu, z)?;
    if let Some(r) = double_route(nu, z) {
        return Ok(r);
    }
    let (value, err, terms) = match hermite_dd(nu, z) {
        Ok(r) => r,
        Err(e) => return asymptotic_route(nu, z).ok_or(e),
    };
    let v = value.to_f64();
    if !(err <= TARGET_REL * v.abs().max(1.0)) {
        if let Some(r) = asymptotic_route(nu, z) {
            return Ok(r);
        }
        return Err(Error::Precision(format!(
            "H_{nu}({z}): Γ-weighted branches cancel beyond double-double reach (error {err:.3e}, value {v:.3e})"
        )));
    }
    Ok(EvalResult {
        value: v,
        abs_error_estimate: err,
        terms_used: terms,
        escalated: true,
    })
}

/// `H_ν'(z) = 2ν H_{ν-1}(z)`.
pub fn hermite_h_deriv(nu: f64, z: f64) -> Result<EvalResult> {
    validate(nu, z)?;
    if nu == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            terms_used: 0,
            escalated: false,
        });
    }
    let lower = hermite_h(nu - 1.0, z)?;
    Ok(EvalResult {
        value: 2.0 * nu * lower.value,
        abs_error_estimate: 2.0 * nu.abs() * lower.abs_error_estimate,
        ..lower
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Classical Hermite polynomial by Horner's rule on its explicit coefficients.
    fn hermite_poly_horner(n: usize, z: f64) -> f64 {
        // coefficients of H_n from c_{n,k}: H_{n+1} = 2z H_n - 2n H_{n-1}
        let mut prev = vec![1.0];
        if n == 0 {
            return 1.0;
        }
        let mut cur = vec![0.0, 2.0];
        for k in 1..n {
            let mut next = vec![0.0; k + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= 2.0 * k as f64 * c;
            }
            prev = cur;
            cur = next;
        }
        cur.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }

    #[test]
    fn order_zero_is_one() {
        assert!((hermite_h(0.0, 1.7).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_two_polynomial() {
        assert!((hermite_h(2.0, 1.0).unwrap().value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn half_order_at_origin() {
        // 2^{1/2} √π / Γ(1/4), extended precision
        let r = hermite_h(0.5, 0.0).unwrap();
        assert!((r.value - 0.691_367_339_036_293_35).abs() < 1e-15);
    }

    #[test]
    fn derivative_trivial_cases() {
        assert_eq!(hermite_h_deriv(0.0, 0.3).unwrap().value, 0.0);
        assert!((hermite_h_deriv(1.0, 0.9).unwrap().value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        let fd = (hermite_h(0.86, -1.3 + h).unwrap().value
            - hermite_h(0.86, -1.3 - h).unwrap().value)
            / (2.0 * h);
        let d = hermite_h_deriv(0.86, -1.3).unwrap().value;
        assert!((d - fd).abs() < 1e-6, "{d} vs {fd}");
        assert!((d - 3.764_724_527_471_726_1).abs() < 1e-13);
    }

    #[test]
    fn integer_orders_collapse_to_polynomials() {
        for n in 0..=10 {
            for &z in &[-5.5, -2.0, -0.7, 0.0, 0.3, 1.9, 4.4, 6.0] {
                let want = hermite_poly_horner(n, z);
                let got = hermite_h(n as f64, z).unwrap().value;
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "n={n} z={z}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn frozen_extended_precision_values() {
        let cases = [
            (0.86, -1.3, -2.849_231_063_170_878_67),
            (0.3, 2.5, 1.633_235_787_905_350_02),
            (2.7, 4.0, 254.664_439_223_589_3),
            (5.5, -3.0, 2_521.600_909_949_719),
            (11.2, 6.0, 480_966_799_419.087_8),
            (0.2, 6.0, 1.645_547_523_562_287_2),
            (-0.7, 1.1, 0.494_685_539_661_689_85),
            (-2.5, -2.0, 215.850_244_017_367_83),
            (7.3, 0.4, -627.737_859_458_754_45),
            (1.5, 5.5, 36.257_423_920_300_288),
        ];
        for (nu, z, want) in cases {
            let r = hermite_h(nu, z).unwrap();
            assert!(
                (r.value - want).abs() <= 1e-12 * want.abs().max(1.0),
                "H_{nu}({z}) = {} want {want}",
                r.value
            );
            assert!(r.abs_error_estimate.is_finite() && r.abs_error_estimate >= 0.0);
        }
    }

    #[test]
    fn positive_argument_cancellation_is_escalated() {
        let r = hermite_h(0.2, 6.0).unwrap();
        assert!(r.escalated);
        assert!(r.abs_error_estimate <= 1e-12 * r.value.abs().max(1.0));
    }

    #[test]
    fn far_positive_argument_uses_the_asymptotic_series() {
        // 40-digit reference values
        let cases = [
            (0.37, 10.0, 3.031_326_896_443_209_038_5),
            (
                19.837_176_084_004_8,
                25.837_176_084_004_8,
                8.412_188_934_905_789_886_7e33,
            ),
            (5.5, 8.0, 3_795_723.237_345_245_099_7),
            (-0.6, 12.0, 0.148_304_603_419_927_586_97),
            (8.84, 9.5, 164_883_847_622.485_924_35),
        ];
        for (nu, z, want) in cases {
            let r = hermite_h(nu, z).unwrap();
            assert!(
                (r.value - want).abs() <= 1e-12 * want.abs().max(1.0),
                "H_{nu}({z}) = {} want {want}",
                r.value
            );
        }
    }

    #[test]
    fn asymptotic_series_terminates_for_integer_order() {
        let r = asymptotic_route(3.0, 7.0).unwrap();
        assert!(r.abs_error_estimate <= 1e-9);
        let want = 8.0 * 343.0 - 12.0 * 7.0;
        assert!((r.value - want).abs() <= 1e-12 * want);
    }
}
