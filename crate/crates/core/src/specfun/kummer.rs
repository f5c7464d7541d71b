//! Kummer's confluent hypergeometric function `1F1(a; b; z)` for real
//! arguments, summed as a power series.

use super::dd::{DoubleDouble, DD_EPS};
use super::EvalResult;
use crate::error::{Error, Result};

pub(crate) const MAX_TERMS: usize = 500;
/// Running condition number above which the sum is redone in double-double.
pub(crate) const ESCALATION_CONDITION: f64 = 1e4;
/// Relative accuracy required of every non-escalated result.
pub(crate) const TARGET_REL: f64 = 1e-12;

const STOP_REL_F64: f64 = 1e-17;
const STOP_REL_DD: f64 = 1e-33;

/// Partial result of a series summation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum<T> {
    pub sum: T,
    /// Σ|term|, the magnitude scale for rounding errors.
    pub abs_sum: f64,
    pub last_term: f64,
    pub terms: usize,
    pub converged: bool,
}

impl<T> SeriesSum<T> {
    pub fn condition(&self, value: f64) -> f64 {
        if value == 0.0 {
            if self.abs_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_sum / value.abs()
        }
    }
}

pub(crate) fn is_pole(b: f64) -> bool {
    b <= 0.0 && b == b.floor()
}

fn is_terminating(a: f64) -> bool {
    a <= 0.0 && a == a.floor()
}

/// Tracks the stopping rule: three consecutive small terms, and only once the
/// terms have started shrinking.
struct StopRule {
    small_run: u32,
    rel: f64,
}

impl StopRule {
    fn new(rel: f64) -> Self {
        Self { small_run: 0, rel }
    }

    fn done(&mut self, term: f64, partial: f64, ratio: f64, exact_zero: bool) -> bool {
        if exact_zero {
            return true;
        }
        if term.abs() < self.rel * partial.abs() && ratio.abs() < 1.0 {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 3
    }
}

/// Direct power series in double precision.
pub(crate) fn series_f64(a: f64, b: f64, z: f64) -> SeriesSum<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut abs_sum = 1.0_f64;
    let mut stop = StopRule::new(STOP_REL_F64);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * z / (kf + 1.0);
        term *= ratio;
        sum += term;
        abs_sum += term.abs();
        if stop.done(term, sum, ratio, term == 0.0) {
            return SeriesSum {
                sum,
                abs_sum,
                last_term: term.abs(),
                terms: k + 2,
                converged: true,
            };
        }
    }
    SeriesSum {
        sum,
        abs_sum,
        last_term: term.abs(),
        terms: MAX_TERMS + 1,
        converged: false,
    }
}

/// Direct power series with double-double parameters and accumulator.
pub(crate) fn series_dd(
    a: DoubleDouble,
    b: DoubleDouble,
    z: DoubleDouble,
) -> SeriesSum<DoubleDouble> {
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut abs_sum = 1.0_f64;
    let mut stop = StopRule::new(STOP_REL_DD);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let num = a.add_f64(kf) * z;
        let den = b.add_f64(kf) * (kf + 1.0);
        let ratio = num / den;
        term = term * ratio;
        sum = sum + term;
        abs_sum += term.hi.abs();
        if stop.done(term.hi, sum.hi, ratio.hi, term.hi == 0.0) {
            return SeriesSum {
                sum,
                abs_sum,
                last_term: term.hi.abs(),
                terms: k + 2,
                converged: true,
            };
        }
    }
    SeriesSum {
        sum,
        abs_sum,
        last_term: term.hi.abs(),
        terms: MAX_TERMS + 1,
        converged: false,
    }
}

fn validate(a: f64, b: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "1F1 arguments must be finite (a={a}, b={b}, z={z})"
        )));
    }
    if is_pole(b) {
        return Err(Error::Pole(format!(
            "1F1 lower parameter b={b} is a non-positive integer"
        )));
    }
    Ok(())
}

/// Sums the series directly (no Kummer transformation), escalating to
/// double-double when the running condition estimate exceeds 1e4.
pub fn kummer_1f1_direct(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    validate(a, b, z)?;
    direct(a, b, z, 1.0)
}

fn direct(a: f64, b: f64, z: f64, scale: f64) -> Result<EvalResult> {
    let s = series_f64(a, b, z);
    let cond = s.condition(s.sum);
    let err = 4.0 * f64::EPSILON * s.abs_sum + 3.0 * s.last_term;
    if s.converged && cond <= ESCALATION_CONDITION && err <= TARGET_REL * s.sum.abs().max(1.0) {
        return Ok(EvalResult {
            value: scale * s.sum,
            abs_error_estimate: scale.abs() * err + f64::EPSILON * (scale * s.sum).abs(),
            terms_used: s.terms,
            escalated: false,
        });
    }
    let d = series_dd(
        DoubleDouble::from_f64(a),
        DoubleDouble::from_f64(b),
        DoubleDouble::from_f64(z),
    );
    if !d.converged {
        return Err(Error::Precision(format!(
            "1F1({a}; {b}; {z}) did not converge within {MAX_TERMS} terms"
        )));
    }
    let v = d.sum.to_f64();
    let err = 8.0 * DD_EPS * d.abs_sum + 3.0 * d.last_term + f64::EPSILON * v.abs();
    if !(err <= TARGET_REL * v.abs().max(1.0)) {
        return Err(Error::Precision(format!(
            "1F1({a}; {b}; {z}): cancellation leaves error {err:.3e} on value {v:.3e}"
        )));
    }
    Ok(EvalResult {
        value: scale * v,
        abs_error_estimate: scale.abs() * err + f64::EPSILON * (scale * v).abs(),
        terms_used: s.terms + d.terms,
        escalated: true,
    })
}

/// `1F1(a; b; z) = Σ (a)_k / (b)_k z^k / k!`.
///
/// Negative `z` is routed through Kummer's transformation
/// `1F1(a; b; z) = e^z 1F1(b - a; b; -z)` unless the series terminates.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<EvalResult> {
    validate(a, b, z)?;
    if z == 0.0 {
        return Ok(EvalResult {
            value: 1.0,
            abs_error_estimate: 0.0,
            terms_used: 1,
            escalated: false,
        });
    }
    if z < 0.0 && !is_terminating(a) {
        return direct(b - a, b, -z, z.exp());
    }
    direct(a, b, z, 1.0)
}
