//! Bound states: solutions with `ψ(0) = 0` that decay at infinity.
//!
//! Vanishing at the origin fixes `c1/c2`; decay at infinity then quantises
//! `a` through
//!
//! ```text
//! f(a) = √(2a) H_{a-1}(-√(2a)) + H_a(-√(2a)) = 0
//! ```
//!
//! whose roots sit close to `n - 1/(2π)`.

use std::f64::consts::PI;

use crate::closed_form::{
    closed_form_psi, match_tail, spectral_point, AsymptoticTail, PhysicalSystem, Solution,
    SolutionCoefficients, SpectralPoint,
};
use crate::error::{Error, Result};
use crate::grid::{logspace, GridFunction};
use crate::quadrature::{integrate, integrate_semi_infinite};
use crate::specfun::{hermite_h, kummer_1f1};

/// Largest `n` the default tables go up to.
pub const DEFAULT_MAX_N: u32 = 20;

const ROOT_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-11;

/// How an energy level was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Approx,
}

/// Interval over which the spectrum function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    fn new(lo: f64, hi: f64) -> Result<Option<Self>> {
        let f_lo = spectrum_fn(lo)?;
        let f_hi = spectrum_fn(hi)?;
        Ok(
            (f_lo.signum() != f_hi.signum() || f_lo == 0.0 || f_hi == 0.0).then_some(Self {
                lo,
                hi,
                f_lo,
                f_hi,
            }),
        )
    }
}

fn check_order(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("order a must be positive, got {a}")))
    }
}

/// `c1/c2` making `ψ(0) = 0`.
pub fn coefficient_ratio(a: f64) -> Result<f64> {
    check_order(a)?;
    let k = (2.0 * a).sqrt();
    let m2 = kummer_1f1(1.0 - 0.5 * a, 1.5, 2.0 * a)?;
    let m1 = kummer_1f1(-0.5 * a, 0.5, 2.0 * a)?;
    let hm = hermite_h(a - 1.0, k)?;
    let h = hermite_h(a, k)?;
    let num = 2.0 * a * m2.value + m1.value;
    let den = k * hm.value - h.value;
    let den_err = k * hm.abs_error_estimate + h.abs_error_estimate;
    if den.abs() <= 10.0 * den_err.max(f64::EPSILON * (k * hm.value).abs()) {
        return Err(Error::SingularRatio { a });
    }
    Ok(num / den)
}

fn spectrum_terms(a: f64) -> Result<(f64, f64)> {
    check_order(a)?;
    let k = (2.0 * a).sqrt();
    Ok((k * hermite_h(a - 1.0, -k)?.value, hermite_h(a, -k)?.value))
}

/// `f(a) = √(2a) H_{a-1}(-√(2a)) + H_a(-√(2a))`.
pub fn spectrum_fn(a: f64) -> Result<f64> {
    let (p, q) = spectrum_terms(a)?;
    Ok(p + q)
}

/// Magnitude against which `f(a)` is judged to vanish.
pub fn spectrum_fn_scale(a: f64) -> Result<f64> {
    let (p, q) = spectrum_terms(a)?;
    Ok(p.abs() + q.abs())
}

/// `F(a) = √(2a) H_{a-1}(-√(2a)) / H_a(-√(2a)) + 1`.
pub fn eval_f(a: f64) -> Result<f64> {
    check_order(a)?;
    let k = (2.0 * a).sqrt();
    let den = hermite_h(a, -k)?;
    let num = hermite_h(a - 1.0, -k)?;
    if den.value.abs() <= 10.0 * den.abs_error_estimate {
        return Err(Error::Pole(format!("H_a(-sqrt(2a)) vanishes at a = {a}")));
    }
    Ok(k * num.value / den.value + 1.0)
}

/// Root of `sin(πa + 1/2 - a e^{-2a}) = 0` next to `n`; without refinement
/// the exponential is dropped, giving `n - 1/(2π)`.
pub fn approx_root(n: u32, refine: bool) -> f64 {
    let nf = f64::from(n.max(1));
    let coarse = nf - 0.5 / PI;
    if !refine {
        return coarse;
    }
    let mut a = coarse;
    for _ in 0..100 {
        let e = (-2.0 * a).exp();
        let g = PI * a + 0.5 - a * e - nf * PI;
        let dg = PI - e + 2.0 * a * e;
        let step = g / dg;
        a -= step;
        if step.abs() < 1e-12 * a.max(1.0) {
            break;
        }
    }
    a
}

/// Bracket for the `n`-th root: seeded around the approximate root and
/// widened geometrically if no sign change is found.
pub fn bracket_root(n: u32) -> Result<RootBracket> {
    let centre = approx_root(n, false);
    let (mut below, mut above) = (0.29, 0.21);
    for _ in 0..=8 {
        let lo = (centre - below).max(1e-3);
        if let Some(b) = RootBracket::new(lo, centre + above)? {
            return Ok(b);
        }
        below *= 1.6;
        above *= 1.6;
    }
    Err(Error::Bracket(format!(
        "no sign change of f(a) found near n = {n}"
    )))
}

/// Exact order `a_n` by bisection with a secant safeguard.
pub fn solve_exact_root(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "quantum number must be at least 1".into(),
        ));
    }
    let b = bracket_root(n)?;
    let (mut lo, mut hi, mut flo, mut fhi) = (b.lo, b.hi, b.f_lo, b.f_hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    let mut use_secant = true;
    for _ in 0..200 {
        let width = hi - lo;
        let mut mid = 0.5 * (lo + hi);
        if use_secant {
            let s = hi - fhi * (hi - lo) / (fhi - flo);
            // keep secant steps well inside the bracket
            if s > lo + 0.01 * width && s < hi - 0.01 * width {
                mid = s;
            }
        }
        let fm = spectrum_fn(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        // alternate when the bracket fails to halve
        use_secant = hi - lo < 0.5 * width;
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let root = if flo.abs() < fhi.abs() { lo } else { hi };
    let residual = spectrum_fn(root)?;
    let scale = spectrum_fn_scale(root)?;
    if residual.abs() > ROOT_TOL * scale {
        return Err(Error::Convergence(format!(
            "root {n} stalled at a = {root}: |f| = {:.3e}, scale {scale:.3e}",
            residual.abs()
        )));
    }
    Ok(root)
}

/// `E = -(1/(2m)) (m² V0² / (ħ a))^{2/3}`.
pub fn energy_from_a(sys: &PhysicalSystem, a: f64) -> Result<f64> {
    check_order(a)?;
    sys.require_attractive()?;
    let PhysicalSystem { mass, hbar, v0 } = *sys;
    Ok(-(mass * mass * v0 * v0 / (hbar * a)).powf(2.0 / 3.0) / (2.0 * mass))
}

/// `E_n = (V0/2) (-m V0/ħ²)^{1/3} (n - 1/(2π))^{-2/3}`.
pub fn approx_spectrum(sys: &PhysicalSystem, n: u32) -> Result<f64> {
    sys.require_attractive()?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "quantum number must be at least 1".into(),
        ));
    }
    let PhysicalSystem { mass, hbar, v0 } = *sys;
    Ok(0.5 * v0 * (-mass * v0 / (hbar * hbar)).cbrt() * approx_root(n, false).powf(-2.0 / 3.0))
}

/// Exact bound-state energy of level `n`.
pub fn exact_energy(sys: &PhysicalSystem, n: u32) -> Result<f64> {
    sys.require_attractive()?;
    energy_from_a(sys, solve_exact_root(n)?)
}

/// A normalised bound state.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub n: u32,
    pub a_n: f64,
    pub energy: f64,
    /// Gauge `c2 = 1`, `c1` from [`coefficient_ratio`].
    pub coeffs: SolutionCoefficients,
    /// Multiplies the `coeffs` solution to unit L² norm with a positive
    /// first lobe.
    pub norm: f64,
    pub method: Method,
    sys: PhysicalSystem,
    sp: SpectralPoint,
    tail: AsymptoticTail,
    /// Converts the recessive member to the `coeffs` member.
    recessive_factor: f64,
}

/// Level `n` with its coefficients, normalisation and matched tail.
///
/// At a root, the `coeffs` solution is a multiple of the recessive member
/// `H_a(-y)`, namely `-c1` times it. Evaluating through that member avoids
/// the cancellation between `H_a(y)` and the Kummer term far out.
pub fn bound_state(sys: &PhysicalSystem, n: u32) -> Result<BoundState> {
    sys.require_attractive()?;
    let a_n = solve_exact_root(n)?;
    let energy = energy_from_a(sys, a_n)?;
    let mut sp = spectral_point(sys, energy)?;
    sp.a = a_n;
    let c1 = coefficient_ratio(a_n)?;
    let coeffs = SolutionCoefficients::new(c1, 1.0)?;
    let tail = match_tail(sys, &sp, &Solution::Recessive)?;
    let mut state = BoundState {
        n,
        a_n,
        energy,
        coeffs,
        norm: 1.0,
        method: Method::Exact,
        sys: *sys,
        sp,
        tail,
        recessive_factor: -c1,
    };
    let norm2 = state.integrate(|p| p * p)?;
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::Convergence(format!(
            "bound state {n} has norm² {norm2}"
        )));
    }
    // sign convention: ψ'(0) > 0, so the first lobe is positive
    let slope = -c1 * closed_form_psi(sys, &sp, &Solution::Recessive, 0.0)?.1;
    state.norm = slope.signum() / norm2.sqrt();
    Ok(state)
}

impl BoundState {
    pub fn spectral_point(&self) -> SpectralPoint {
        self.sp
    }

    pub fn system(&self) -> PhysicalSystem {
        self.sys
    }

    /// Where the analytic tail takes over.
    pub fn switch_point(&self) -> f64 {
        self.tail.x_match
    }

    /// Normalised `ψ_n(x)`.
    pub fn psi(&self, x: f64) -> Result<f64> {
        Ok(self.norm * self.raw(x)?)
    }

    fn raw(&self, x: f64) -> Result<f64> {
        let r = if x > self.tail.x_match {
            self.tail.eval(x)
        } else {
            closed_form_psi(&self.sys, &self.sp, &Solution::Recessive, x)?.0
        };
        Ok(self.recessive_factor * r)
    }

    /// `∫_0^∞ g(ψ_raw(x)) dx`, split at the switch point.
    fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        half_line_integral(self.tail.x_match, self.sp.delta, |x| self.raw(x).map(&g))
    }

    pub fn sample(&self, xs: Vec<f64>) -> Result<GridFunction> {
        GridFunction::sample(xs, |x| self.psi(x))
    }

    /// Interior sign changes on a log-spaced grid out to the tail.
    pub fn node_count(&self) -> Result<usize> {
        let xs = logspace(1e-6, 1.5 * self.tail.x_match, 4000);
        let g = self.sample(xs)?;
        Ok(g.sign_changes(1e-10 * g.max_abs()))
    }
}

/// `∫_0^∞ h(x) dx` as a finite part on `[0, split]` (in a few panels) plus a
/// semi-infinite part in units of `1/δ`.
fn half_line_integral(split: f64, delta: f64, h: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut failure = None;
    let mut guarded = |x: f64| match h(x) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let panels = 8;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = split * f64::from(i) / f64::from(panels);
        let hi = split * f64::from(i + 1) / f64::from(panels);
        total += integrate(&mut guarded, lo, hi, QUAD_TOL)?;
    }
    let scale = 1.0 / delta;
    total += integrate_semi_infinite(|s| guarded(split + s * scale) * scale, QUAD_TOL)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Constant that brings a quasi-polynomial state to unit L² norm. These
/// states do not vanish at the origin, so they are not bound states of the
/// half-line problem, but they do decay.
pub fn quasipoly_norm(sys: &PhysicalSystem, n: u32) -> Result<f64> {
    let energy = crate::closed_form::quasipoly_energy(sys, n)?;
    let sp = spectral_point(sys, energy)?;
    let norm2 = half_line_integral(sp.switch_point(), sp.delta, |x| {
        crate::closed_form::quasipoly_psi(sys, n, x).map(|p| p * p)
    })?;
    Ok(1.0 / norm2.sqrt())
}

/// `∫_0^∞ ψ_n ψ_m dx` for two normalised states of one system.
pub fn overlap(p: &BoundState, q: &BoundState) -> Result<f64> {
    if p.sys != q.sys {
        return Err(Error::InvalidInput(
            "overlap needs states of the same system".into(),
        ));
    }
    let split = p.switch_point().max(q.switch_point());
    let delta = p.sp.delta.min(q.sp.delta);
    half_line_integral(split, delta, |x| Ok(p.psi(x)? * q.psi(x)?))
}
