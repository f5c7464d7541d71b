//! The general closed-form solution of
//!
//! ```text
//! ψ'' + (2m/ħ²)(E - V0/√x) ψ = 0
//! ```
//!
//! written as `ψ(x) = e^{-δx/2} du/dy` with
//! `u(y) = e^{-√(2a) y} (c1 H_a(y) + c2 1F1(-a/2; 1/2; y²))` and
//! `y = sgn(V0) √(δx) + √(2a)`, together with the quasi-polynomial family
//! obtained at integer `a`.
//!
//! Writing `k = √(2a)`, `P = e^{-δx/2 - k y}` and `h(y)` for the bracket in
//! `u`, which solves Hermite's equation `h'' - 2y h' + 2a h = 0`, every
//! quantity reduces to
//!
//! ```text
//! ψ  = P (h' - k h)
//! ψ' = (δ/2) P (h' + k h)
//! ```
//!
//! The second identity uses `k² = 2a` and is regular at `x = 0`.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::specfun::dd::DoubleDouble;
use crate::specfun::hermite::hermite_dd_core;
use crate::specfun::kummer::series_dd;
use crate::specfun::{hermite_h, kummer_1f1};

/// Base offset of `√(δx) - √(2a)` beyond which the tail is continued
/// analytically. The switch also moves out by `a/2`, because the leading
/// tail form is only accurate once `√(δx) - √(2a)` is large against the order.
pub const ASYMPTOTIC_SWITCH: f64 = 6.0;

/// Largest relative ODE residual accepted for a matched tail.
const TAIL_RESIDUAL_LIMIT: f64 = 0.05;

/// Mass, Planck constant and potential strength of `V(x) = V0 / √x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSystem {
    pub mass: f64,
    pub hbar: f64,
    pub v0: f64,
}

impl PhysicalSystem {
    pub fn new(mass: f64, hbar: f64, v0: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidInput(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidInput(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !v0.is_finite() || v0 == 0.0 {
            return Err(Error::InvalidInput(format!(
                "V0 must be finite and nonzero, got {v0}"
            )));
        }
        Ok(Self { mass, hbar, v0 })
    }

    /// `m = ħ = 1`, `V0 = -1`.
    pub fn unit_attractive() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            v0: -1.0,
        }
    }

    pub fn v0_sign(&self) -> Sign {
        if self.v0 < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.v0 / x.sqrt()
    }

    /// `2m/ħ²`.
    pub fn kinetic_factor(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// Classical turning point `V(x) = E` for `E < 0 < -V0`.
    pub fn turning_point(&self, energy: f64) -> f64 {
        (self.v0 / energy).powi(2)
    }

    pub(crate) fn require_attractive(&self) -> Result<()> {
        if self.v0 < 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "bound states need an attractive potential (V0 < 0), got V0 = {}",
                self.v0
            )))
        }
    }
}

/// Sign of `V0`, selecting the branch of the coordinate map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Positive => 1.0,
        }
    }
}

/// Energy with the derived scale `δ = √(-8mE/ħ²)` and order `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub energy: f64,
    pub delta: f64,
    pub a: f64,
}

impl SpectralPoint {
    /// `√(2a)`.
    pub fn k(&self) -> f64 {
        (2.0 * self.a).sqrt()
    }

    /// Position where `√(δx) - √(2a)` reaches [`ASYMPTOTIC_SWITCH`]` + a/2`.
    pub fn switch_point(&self) -> f64 {
        (self.k() + ASYMPTOTIC_SWITCH + 0.5 * self.a).powi(2) / self.delta
    }
}

/// Parameters `δ` and `a` for energy `E < 0`.
pub fn spectral_point(sys: &PhysicalSystem, energy: f64) -> Result<SpectralPoint> {
    if !(energy.is_finite() && energy < 0.0) {
        return Err(Error::Domain(format!(
            "energy must be negative (scattering states are not supported), got {energy}"
        )));
    }
    let PhysicalSystem { mass, hbar, v0 } = *sys;
    let delta = (-8.0 * mass * energy).sqrt() / hbar;
    let a = mass * mass * v0 * v0 / (hbar * (-2.0 * mass * energy).powf(1.5));
    Ok(SpectralPoint { energy, delta, a })
}

/// The pair `(c1, c2)` multiplying `H_a(y)` and `1F1(-a/2; 1/2; y²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionCoefficients {
    pub c1: f64,
    pub c2: f64,
}

impl SolutionCoefficients {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "coefficients must be finite: ({c1}, {c2})"
            )));
        }
        if c1 == 0.0 && c2 == 0.0 {
            return Err(Error::InvalidInput(
                "coefficients (0, 0) give the trivial solution".into(),
            ));
        }
        Ok(Self { c1, c2 })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.c1, self.c2).map(|_| ())
    }
}

/// Which member of the solution space to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solution {
    /// `c1 H_a(y) + c2 1F1(-a/2; 1/2; y²)`.
    Kummer(SolutionCoefficients),
    /// `H_a(-y)`: the member that stays bounded as `y → -∞`. Since
    /// `H_a(y) + H_a(-y) = 2 A 1F1(-a/2; 1/2; y²)` with
    /// `A = 2^a √π / Γ((1-a)/2)`, it is the Kummer pair `(-1, 2A)`.
    Recessive,
}

/// `y = sgn(V0) √(δx) + √(2a)`.
pub fn map_y(sp: &SpectralPoint, v0_sign: Sign, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "coordinate must be finite and non-negative, got {x}"
        )));
    }
    Ok(v0_sign.as_f64() * (sp.delta * x).sqrt() + sp.k())
}

/// `h(y)` and `h'(y)` for the chosen solution.
fn hermite_bracket(sp: &SpectralPoint, sol: &Solution, y: f64) -> Result<(f64, f64)> {
    let a = sp.a;
    match sol {
        Solution::Kummer(c) => {
            let mut h = 0.0;
            let mut dh = 0.0;
            if c.c1 != 0.0 {
                h += c.c1 * hermite_h(a, y)?.value;
                if a != 0.0 {
                    dh += 2.0 * a * c.c1 * hermite_h(a - 1.0, y)?.value;
                }
            }
            if c.c2 != 0.0 {
                let y2 = y * y;
                h += c.c2 * kummer_1f1(-0.5 * a, 0.5, y2)?.value;
                dh -= 2.0 * a * y * c.c2 * kummer_1f1(1.0 - 0.5 * a, 1.5, y2)?.value;
            }
            Ok((h, dh))
        }
        Solution::Recessive => {
            let h = hermite_h(a, -y)?.value;
            let dh = if a == 0.0 {
                0.0
            } else {
                -2.0 * a * hermite_h(a - 1.0, -y)?.value
            };
            Ok((h, dh))
        }
    }
}

/// `u`, `du/dy` and `d²u/dy²` at `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UDerivatives {
    pub u: f64,
    pub dudy: f64,
    pub d2udy2: f64,
}

pub fn eval_u_derivatives(sp: &SpectralPoint, sol: &Solution, y: f64) -> Result<UDerivatives> {
    if let Solution::Kummer(c) = sol {
        c.check()?;
    }
    let k = sp.k();
    let (h, dh) = hermite_bracket(sp, sol, y)?;
    let e = (-k * y).exp();
    Ok(UDerivatives {
        u: e * h,
        dudy: e * (dh - k * h),
        d2udy2: 2.0 * (y - k) * e * dh,
    })
}

/// `u(y)` and `du/dy` for Kummer coefficients `c`.
pub fn eval_u_and_dudy(sp: &SpectralPoint, c: SolutionCoefficients, y: f64) -> Result<(f64, f64)> {
    let d = eval_u_derivatives(sp, &Solution::Kummer(c), y)?;
    Ok((d.u, d.dudy))
}

/// `ψ(x)` and `dψ/dx` from the closed form, without tail continuation.
pub(crate) fn closed_form_psi(
    sys: &PhysicalSystem,
    sp: &SpectralPoint,
    sol: &Solution,
    x: f64,
) -> Result<(f64, f64)> {
    let y = map_y(sp, sys.v0_sign(), x)?;
    let k = sp.k();
    let (h, dh) = hermite_bracket(sp, sol, y)?;
    let p = (-0.5 * sp.delta * x - k * y).exp();
    Ok((p * (dh - k * h), 0.5 * sp.delta * p * (dh + k * h)))
}

/// Tail `ψ ≈ C exp(-δx/2 - β√x) x^σ`, `β = 4mV0/(ħ²δ)`, matched in value and
/// logarithmic derivative at `x_match`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTail {
    pub x_match: f64,
    pub psi_match: f64,
    pub delta: f64,
    pub beta: f64,
    pub sigma: f64,
    /// Largest relative ODE residual of the tail form on `[x_match, 4 x_match]`.
    pub residual: f64,
}

impl AsymptoticTail {
    fn log_derivative(&self, x: f64) -> f64 {
        -0.5 * self.delta - 0.5 * self.beta / x.sqrt() + self.sigma / x
    }

    fn relative_residual(&self, sys: &PhysicalSystem, energy: f64, x: f64) -> f64 {
        let l = self.log_derivative(x);
        let dl = 0.25 * self.beta / x.powf(1.5) - self.sigma / (x * x);
        let f = sys.kinetic_factor() * (sys.potential(x) - energy);
        (l * l + dl - f).abs() / f.abs()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let xm = self.x_match;
        self.psi_match
            * (-0.5 * self.delta * (x - xm) - self.beta * (x.sqrt() - xm.sqrt())).exp()
            * (x / xm).powf(self.sigma)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval(x) * self.log_derivative(x)
    }

    /// `∫_{x_match}^∞ ψ_tail² dx` by the substitution
    /// `x = x_match + s/δ`, integrated adaptively.
    pub fn square_integral(&self) -> Result<f64> {
        let scale = 1.0 / self.delta;
        let xm = self.x_match;
        crate::quadrature::integrate_semi_infinite(
            |s| {
                let v = self.eval(xm + s * scale);
                v * v * scale
            },
            1e-10,
        )
    }
}

/// Fits the tail of `sol` at its switch point and checks it against the ODE.
pub fn match_tail(
    sys: &PhysicalSystem,
    sp: &SpectralPoint,
    sol: &Solution,
) -> Result<AsymptoticTail> {
    let xm = sp.switch_point();
    let (psi, dpsi) = closed_form_psi(sys, sp, sol, xm)?;
    if psi == 0.0 || !psi.is_finite() || !dpsi.is_finite() {
        return Err(Error::Precision(format!(
            "cannot match the asymptotic tail at x = {xm}: psi = {psi}"
        )));
    }
    let beta = 4.0 * sys.mass * sys.v0 / (sys.hbar * sys.hbar * sp.delta);
    let l = dpsi / psi;
    let sigma = xm * (l + 0.5 * sp.delta + 0.5 * beta / xm.sqrt());
    let mut tail = AsymptoticTail {
        x_match: xm,
        psi_match: psi,
        delta: sp.delta,
        beta,
        sigma,
        residual: 0.0,
    };
    tail.residual = [1.0, 1.5, 2.0, 3.0, 4.0]
        .iter()
        .map(|f| tail.relative_residual(sys, sp.energy, f * xm))
        .fold(0.0, f64::max);
    if !(tail.residual <= TAIL_RESIDUAL_LIMIT) {
        return Err(Error::Precision(format!(
            "asymptotic tail at x = {xm:.4} fails its ODE check (relative residual {:.3e}); \
             the solution is not decaying",
            tail.residual
        )));
    }
    Ok(tail)
}

/// `ψ(x)` and `dψ/dx` for any member of the solution space, continuing
/// analytically beyond the switch point.
pub fn eval_solution(
    sys: &PhysicalSystem,
    sp: &SpectralPoint,
    sol: &Solution,
    x: f64,
) -> Result<(f64, f64)> {
    if let Solution::Kummer(c) = sol {
        c.check()?;
    }
    if x > sp.switch_point() {
        let tail = match_tail(sys, sp, sol)?;
        return Ok((tail.eval(x), tail.derivative(x)));
    }
    closed_form_psi(sys, sp, sol, x)
}

/// `ψ(x) = e^{-δx/2} du/dy` for Kummer coefficients `c`.
pub fn eval_psi(
    sys: &PhysicalSystem,
    sp: &SpectralPoint,
    c: SolutionCoefficients,
    x: f64,
) -> Result<f64> {
    eval_solution(sys, sp, &Solution::Kummer(c), x).map(|(psi, _)| psi)
}

/// Samples a solution on `xs`, matching the tail once.
pub fn sample_solution(
    sys: &PhysicalSystem,
    sp: &SpectralPoint,
    sol: &Solution,
    xs: Vec<f64>,
) -> Result<GridFunction> {
    let xs_switch = sp.switch_point();
    let tail = if xs.iter().any(|&x| x > xs_switch) {
        Some(match_tail(sys, sp, sol)?)
    } else {
        None
    };
    GridFunction::sample(xs, |x| match &tail {
        Some(t) if x > xs_switch => Ok(t.eval(x)),
        _ => closed_form_psi(sys, sp, sol, x).map(|(psi, _)| psi),
    })
}

/// `h` and `h'` of the two Kummer basis solutions in double-double, for
/// cancellation-free Wronskians.
pub(crate) fn basis_brackets_dd(
    sp: &SpectralPoint,
    y: f64,
) -> Result<[(DoubleDouble, DoubleDouble); 2]> {
    let a = sp.a;
    // one prefactor for both orders (the lower one carries exactly half), so
    // h1' = 2a H_{a-1} stays consistent with h1 beyond double precision
    let prefactor = (a * std::f64::consts::LN_2).exp() * std::f64::consts::PI.sqrt();
    let h1 = hermite_dd_core(DoubleDouble::from_f64(a), y)?.0 * prefactor;
    let dh1 = hermite_dd_core(DoubleDouble::from_sum(a, -1.0), y)?.0 * prefactor * a;
    let y2 = DoubleDouble::from_prod(y, y);
    let m1 = series_dd(
        DoubleDouble::from_f64(-0.5 * a),
        DoubleDouble::from_f64(0.5),
        y2,
    );
    let m2 = series_dd(
        DoubleDouble::from_sum(1.0, -0.5 * a),
        DoubleDouble::from_f64(1.5),
        y2,
    );
    if !(m1.converged && m2.converged) {
        return Err(Error::Precision(format!(
            "Kummer basis series did not converge at y = {y}"
        )));
    }
    let dh2 = -(m2.sum * y) * (2.0 * a);
    Ok([(h1, dh1), (m1.sum, dh2)])
}

/// `E_n = (V0/2) (-m V0/ħ²)^{1/3} n^{-2/3}`.
pub fn quasipoly_energy(sys: &PhysicalSystem, n: u32) -> Result<f64> {
    sys.require_attractive()?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "quantum number must be at least 1".into(),
        ));
    }
    let PhysicalSystem { mass, hbar, v0 } = *sys;
    Ok(0.5 * v0 * (-mass * v0 / (hbar * hbar)).cbrt() * f64::from(n).powf(-2.0 / 3.0))
}

/// Unnormalised quasi-polynomial state
/// `ψ_n = e^{-√(2n) y - δx/2} (H_n(y) - √(2n) H_{n-1}(y))`, `y = √(2n) - √(δx)`.
pub fn quasipoly_psi(sys: &PhysicalSystem, n: u32, x: f64) -> Result<f64> {
    let (sp, y) = quasipoly_coordinate(sys, n, x)?;
    let nf = f64::from(n);
    let k = (2.0 * nf).sqrt();
    let poly = hermite_h(nf, y)?.value - k * hermite_h(nf - 1.0, y)?.value;
    Ok(quasipoly_prefactor(&sp, y, x) * poly)
}

/// The explicit low-order forms of the quasi-polynomial states (n = 1, 2, 3).
pub fn quasipoly_psi_explicit(sys: &PhysicalSystem, n: u32, x: f64) -> Result<f64> {
    let (sp, y) = quasipoly_coordinate(sys, n, x)?;
    let s2 = std::f64::consts::SQRT_2;
    let s6 = 6.0_f64.sqrt();
    let poly = match n {
        1 => 1.0 - s2 * y,
        2 => 1.0 + 2.0 * y - 2.0 * y * y,
        3 => 3.0 - 3.0 * s6 * y - 6.0 * y * y + 2.0 * s6 * y * y * y,
        _ => {
            return Err(Error::InvalidInput(format!(
                "explicit quasi-polynomials are tabulated for n = 1, 2, 3 only, got {n}"
            )))
        }
    };
    Ok(quasipoly_prefactor(&sp, y, x) * poly)
}

fn quasipoly_coordinate(sys: &PhysicalSystem, n: u32, x: f64) -> Result<(SpectralPoint, f64)> {
    let energy = quasipoly_energy(sys, n)?;
    let mut sp = spectral_point(sys, energy)?;
    // a = n up to rounding; pin it so the Hermite orders are exact integers
    sp.a = f64::from(n);
    let y = map_y(&sp, Sign::Negative, x)?;
    Ok((sp, y))
}

fn quasipoly_prefactor(sp: &SpectralPoint, y: f64, x: f64) -> f64 {
    (-sp.k() * y - 0.5 * sp.delta * x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalSystem {
        PhysicalSystem::unit_attractive()
    }

    #[test]
    fn spectral_point_examples() {
        let sp = spectral_point(&unit(), -0.5).unwrap();
        assert!((sp.delta - 2.0).abs() < 1e-15);
        assert!((sp.a - 1.0).abs() < 1e-15);
        let sp = spectral_point(&unit(), -0.125).unwrap();
        assert!((sp.delta - 1.0).abs() < 1e-15);
        assert!((sp.a - 8.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_point_general_units() {
        // direct substitution, extended precision
        let sys = PhysicalSystem::new(2.0, 1.0, -0.5).unwrap();
        let sp = spectral_point(&sys, -0.3).unwrap();
        assert!((sp.delta - 2.190_890_230_020_664_4).abs() < 1e-14);
        assert!((sp.a - 0.760_725_774_312_730_76).abs() < 1e-14);
        // a δ³ = 8 m² V0² / ħ⁴
        let lhs = sp.a * sp.delta.powi(3);
        assert!((lhs - 8.0 * 4.0 * 0.25).abs() < 1e-13);
    }

    #[test]
    fn spectral_point_rejects_non_negative_energy() {
        assert!(matches!(
            spectral_point(&unit(), 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            spectral_point(&unit(), 0.3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn physical_system_validation() {
        assert!(PhysicalSystem::new(0.0, 1.0, -1.0).is_err());
        assert!(PhysicalSystem::new(1.0, -1.0, -1.0).is_err());
        assert!(PhysicalSystem::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn coordinate_map_examples() {
        let sp = SpectralPoint {
            energy: -0.5,
            delta: 2.0,
            a: 1.0,
        };
        let s2 = std::f64::consts::SQRT_2;
        assert!((map_y(&sp, Sign::Negative, 0.0).unwrap() - s2).abs() < 1e-15);
        assert!((map_y(&sp, Sign::Negative, 0.25).unwrap() - 1.0 / s2).abs() < 1e-15);
        assert!((map_y(&sp, Sign::Positive, 2.0).unwrap() - (2.0 + s2)).abs() < 1e-15);
        assert!(matches!(
            map_y(&sp, Sign::Negative, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn u_and_derivative_at_origin() {
        let sp = spectral_point(&unit(), -0.5).unwrap();
        let (u, du) =
            eval_u_and_dudy(&sp, SolutionCoefficients::new(0.0, 1.0).unwrap(), 0.0).unwrap();
        assert!((u - 1.0).abs() < 1e-15);
        assert!((du + std::f64::consts::SQRT_2).abs() < 1e-15);
        let (u, du) =
            eval_u_and_dudy(&sp, SolutionCoefficients::new(1.0, 0.0).unwrap(), 0.0).unwrap();
        assert!(u.abs() < 1e-15);
        assert!((du - 2.0).abs() < 1e-15);
    }

    #[test]
    fn u_derivative_matches_finite_difference() {
        let sp = SpectralPoint {
            energy: f64::NAN,
            delta: f64::NAN,
            a: 0.86,
        };
        let c = SolutionCoefficients::new(1.0, 0.5).unwrap();
        let (u, du) = eval_u_and_dudy(&sp, c, -1.2).unwrap();
        // extended-precision references
        assert!((u - -13.760_996_136_249_42).abs() < 1e-12);
        assert!((du - 43.682_346_549_620_42).abs() < 1e-12);
        let h = 1e-5;
        let up = eval_u_and_dudy(&sp, c, -1.2 + h).unwrap().0;
        let um = eval_u_and_dudy(&sp, c, -1.2 - h).unwrap().0;
        assert!(((up - um) / (2.0 * h) - du).abs() < 1e-6 * du.abs());
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let sp = SpectralPoint {
            energy: f64::NAN,
            delta: f64::NAN,
            a: 2.3,
        };
        let sol = Solution::Kummer(SolutionCoefficients::new(0.7, -1.1).unwrap());
        let y = 0.4;
        let h = 1e-4;
        let d = eval_u_derivatives(&sp, &sol, y).unwrap();
        let fd = (eval_u_derivatives(&sp, &sol, y + h).unwrap().dudy
            - eval_u_derivatives(&sp, &sol, y - h).unwrap().dudy)
            / (2.0 * h);
        assert!((d.d2udy2 - fd).abs() < 1e-6 * d.d2udy2.abs().max(1.0));
    }

    #[test]
    fn quasi_polynomial_node_and_origin_value() {
        let sys = unit();
        let sp = spectral_point(&sys, -0.5).unwrap();
        let c = SolutionCoefficients::new(1.0, 0.0).unwrap();
        // y(0.25) = 1/√2 zeroes the factor (1 - √2 y)
        assert!(eval_psi(&sys, &sp, c, 0.25).unwrap().abs() < 1e-10);
        let want = (-2.0_f64).exp() * (2.0 - 4.0);
        assert!((eval_psi(&sys, &sp, c, 0.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn trivial_coefficients_rejected() {
        let sys = unit();
        let sp = spectral_point(&sys, -0.5).unwrap();
        let c = SolutionCoefficients { c1: 0.0, c2: 0.0 };
        assert!(eval_psi(&sys, &sp, c, 1.0).is_err());
        assert!(SolutionCoefficients::new(0.0, 0.0).is_err());
    }

    #[test]
    fn quasipoly_energy_examples() {
        let sys = unit();
        assert!((quasipoly_energy(&sys, 1).unwrap() + 0.5).abs() < 1e-15);
        assert!((quasipoly_energy(&sys, 8).unwrap() + 0.125).abs() < 1e-15);
        assert!((quasipoly_energy(&sys, 3).unwrap() + 0.240_374_928_384_568_06).abs() < 1e-15);
        let repulsive = PhysicalSystem::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            quasipoly_energy(&repulsive, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn quasipoly_energy_round_trips_to_integer_order() {
        for sys in [unit(), PhysicalSystem::new(2.0, 0.7, -1.9).unwrap()] {
            for n in 1..=20 {
                let sp = spectral_point(&sys, quasipoly_energy(&sys, n).unwrap()).unwrap();
                assert!((sp.a - f64::from(n)).abs() <= 1e-12 * f64::from(n));
            }
        }
    }

    #[test]
    fn quasipoly_states_do_not_vanish_at_origin() {
        for n in 1..=3 {
            assert!(quasipoly_psi(&unit(), n, 0.0).unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn quasipoly_two_at_zero_y() {
        // δ = 2^{4/3}·... chosen so that y = 0, i.e. δx = 4
        let sys = unit();
        let sp = spectral_point(&sys, quasipoly_energy(&sys, 2).unwrap()).unwrap();
        let x = 4.0 / sp.delta;
        let psi = quasipoly_psi(&sys, 2, x).unwrap();
        assert!((psi - (-2.0_f64).exp() * -2.0).abs() < 1e-14);
        let explicit = quasipoly_psi_explicit(&sys, 2, x).unwrap();
        assert!((explicit - (-2.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn quasipoly_matches_general_solution_up_to_constant() {
        let sys = unit();
        for n in 1..=6 {
            let energy = quasipoly_energy(&sys, n).unwrap();
            let mut sp = spectral_point(&sys, energy).unwrap();
            sp.a = f64::from(n);
            let c = SolutionCoefficients::new(1.0, 0.0).unwrap();
            let k = (2.0 * f64::from(n)).sqrt();
            let xs = crate::grid::linspace(0.0, 0.9 * sp.switch_point(), 200);
            let peak = xs
                .iter()
                .map(|&x| quasipoly_psi(&sys, n, x).unwrap().abs())
                .fold(0.0, f64::max);
            for &x in &xs {
                let q = quasipoly_psi(&sys, n, x).unwrap();
                let g = closed_form_psi(&sys, &sp, &Solution::Kummer(c), x)
                    .unwrap()
                    .0;
                assert!(
                    (g + k * q).abs() < 1e-9 * peak,
                    "n={n} x={x}: {g} vs {}",
                    -k * q
                );
            }
        }
    }

    #[test]
    fn explicit_forms_need_small_n() {
        assert!(quasipoly_psi_explicit(&unit(), 4, 1.0).is_err());
    }

    #[test]
    fn recessive_member_is_a_kummer_pair() {
        // H_a(-y) = 2A 1F1(-a/2;1/2;y²) - H_a(y)
        let a = 0.86_f64;
        let sp = SpectralPoint {
            energy: f64::NAN,
            delta: f64::NAN,
            a,
        };
        let big_a = 2f64.powf(a)
            * std::f64::consts::PI.sqrt()
            * crate::specfun::gamma::rgamma(0.5 * (1.0 - a));
        let kummer = Solution::Kummer(SolutionCoefficients::new(-1.0, 2.0 * big_a).unwrap());
        for y in [-2.0, -0.5, 0.3, 1.1] {
            let r = eval_u_derivatives(&sp, &Solution::Recessive, y).unwrap();
            let k = eval_u_derivatives(&sp, &kummer, y).unwrap();
            assert!((r.u - k.u).abs() < 1e-12 * r.u.abs().max(1.0));
            assert!((r.dudy - k.dudy).abs() < 1e-12 * r.dudy.abs().max(1.0));
        }
    }

    #[test]
    fn growing_solution_fails_tail_check() {
        let sys = unit();
        let sp = spectral_point(&sys, -0.37).unwrap();
        let c = SolutionCoefficients::new(1.0, 0.0).unwrap();
        let x = 1.5 * sp.switch_point();
        assert!(matches!(
            eval_psi(&sys, &sp, c, x),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn decaying_solution_continues_smoothly() {
        let sys = unit();
        let sp = spectral_point(&sys, -0.37).unwrap();
        let sol = Solution::Recessive;
        let xs = sp.switch_point();
        let (inside, _) = closed_form_psi(&sys, &sp, &sol, xs * (1.0 - 1e-9)).unwrap();
        let (outside, _) = eval_solution(&sys, &sp, &sol, xs * (1.0 + 1e-9)).unwrap();
        assert!((inside - outside).abs() < 1e-6 * inside.abs());
        let tail = match_tail(&sys, &sp, &sol).unwrap();
        assert!(tail.residual < TAIL_RESIDUAL_LIMIT);
        // slightly past the switch point the closed form is still usable
        let x = 1.05 * xs;
        let (exact, _) = closed_form_psi(&sys, &sp, &sol, x).unwrap();
        assert!((tail.eval(x) - exact).abs() < 1e-2 * exact.abs());
    }
}
