//! An independent route to the same solutions through the tri-confluent
//! Heun equation
//!
//! ```text
//! u'' + (γ + δz + εz²) u' + (αz - q) u = 0
//! ```
//!
//! With `γ = ε = q = 0`, `δ_h = ±2√(-2mE)/ħ` and `α = -2√2 m V0/ħ²`, the
//! function `w = e^{δ_h z²/2} u'` gives `ψ(x) = e^{-δ_h z²/4} w` a solution of
//! the Schrödinger equation at `z = √(2x)`. Everything here is for
//! verification only.

use crate::closed_form::{
    closed_form_psi, spectral_point, PhysicalSystem, Solution, SolutionCoefficients,
};
use crate::error::{Error, Result};
use crate::grid::GridFunction;

const LOCAL_TOL: f64 = 1e-12;
const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriConfluentParams {
    pub gamma_h: f64,
    pub delta_h: f64,
    pub epsilon_h: f64,
    pub alpha_h: f64,
    pub q_h: f64,
}

impl TriConfluentParams {
    fn damping(&self, z: f64) -> f64 {
        self.gamma_h + self.delta_h * z + self.epsilon_h * z * z
    }

    fn rhs(&self, z: f64, u: f64, du: f64) -> (f64, f64) {
        (
            du,
            -self.damping(z) * du - (self.alpha_h * z - self.q_h) * u,
        )
    }
}

/// Parameters for energy `E` and the sign `branch` of `δ_h`.
pub fn heun_params_from_physics(
    sys: &PhysicalSystem,
    energy: f64,
    branch: i8,
) -> Result<TriConfluentParams> {
    if !(energy < 0.0) {
        return Err(Error::Domain(format!(
            "Heun route needs E < 0, got {energy}"
        )));
    }
    if branch != 1 && branch != -1 {
        return Err(Error::InvalidInput(format!(
            "branch must be +1 or -1, got {branch}"
        )));
    }
    let PhysicalSystem { mass, hbar, v0 } = *sys;
    Ok(TriConfluentParams {
        gamma_h: 0.0,
        delta_h: f64::from(branch) * 2.0 * (-2.0 * mass * energy).sqrt() / hbar,
        epsilon_h: 0.0,
        alpha_h: -2.0 * std::f64::consts::SQRT_2 * mass * v0 / (hbar * hbar),
        q_h: 0.0,
    })
}

/// Samples of `u` and `u'` on an increasing grid.
#[derive(Debug, Clone)]
pub struct HeunTrajectory {
    pub zs: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
}

impl HeunTrajectory {
    /// `u'` and `u''` on the grid, the latter from the equation itself.
    fn derivative_pairs(&self, p: &TriConfluentParams) -> Vec<(f64, f64)> {
        self.zs
            .iter()
            .zip(self.u.iter().zip(&self.u_prime))
            .map(|(&z, (&u, &du))| (du, p.rhs(z, u, du).1))
            .collect()
    }
}

fn rk4_step(p: &TriConfluentParams, z: f64, u: f64, du: f64, h: f64) -> (f64, f64) {
    let (k1u, k1v) = p.rhs(z, u, du);
    let (k2u, k2v) = p.rhs(z + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1v);
    let (k3u, k3v) = p.rhs(z + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2v);
    let (k4u, k4v) = p.rhs(z + h, u + h * k3u, du + h * k3v);
    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Classical RK4 with step doubling; each accepted step is Richardson
/// extrapolated and the local error held below `1e-12` relative.
pub fn integrate_tch(
    p: &TriConfluentParams,
    z_grid: &[f64],
    init: (f64, f64),
) -> Result<HeunTrajectory> {
    if z_grid.len() < 2 || z_grid[0] != 0.0 {
        return Err(Error::Grid(
            "Heun grid must start at z = 0 with at least two points".into(),
        ));
    }
    if z_grid.windows(2).any(|w| !(w[1] > w[0])) || !z_grid.iter().all(|z| z.is_finite()) {
        return Err(Error::Grid(
            "Heun grid must be finite and strictly increasing".into(),
        ));
    }
    let (mut u, mut du) = init;
    let mut zs = vec![0.0];
    let mut us = vec![u];
    let mut dus = vec![du];
    let mut h = (z_grid[1] - z_grid[0]).min(1e-2);
    for w in z_grid.windows(2) {
        let (mut z, end) = (w[0], w[1]);
        while z < end {
            let mut halvings = 0;
            loop {
                let step = h.min(end - z);
                let (fu, fv) = rk4_step(p, z, u, du, step);
                let (mu, mv) = rk4_step(p, z, u, du, 0.5 * step);
                let (hu, hv) = rk4_step(p, z + 0.5 * step, mu, mv, 0.5 * step);
                let err = ((hu - fu).abs() + (hv - fv).abs()) / 15.0;
                let scale = hu.abs() + hv.abs();
                if err <= LOCAL_TOL * scale || scale == 0.0 {
                    u = hu + (hu - fu) / 15.0;
                    du = hv + (hv - fv) / 15.0;
                    z = if step == end - z { end } else { z + step };
                    if err < 0.02 * LOCAL_TOL * scale {
                        h = 2.0 * step;
                    }
                    break;
                }
                h = 0.5 * step;
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::Tolerance(format!(
                        "step control failed near z = {z} (error {err:.3e})"
                    )));
                }
            }
        }
        if !(u.is_finite() && du.is_finite()) {
            return Err(Error::Tolerance(format!(
                "Heun solution overflowed at z = {end}"
            )));
        }
        zs.push(end);
        us.push(u);
        dus.push(du);
    }
    Ok(HeunTrajectory {
        zs,
        u: us,
        u_prime: dus,
    })
}

/// Cubic Hermite interpolation of `(value, slope)` pairs.
fn hermite_interp(zs: &[f64], pairs: &[(f64, f64)], z: f64) -> Result<f64> {
    let last = *zs.last().expect("non-empty trajectory");
    if !(z >= zs[0] && z <= last) {
        return Err(Error::Range(format!(
            "z = {z} outside the trajectory [{}, {last}]",
            zs[0]
        )));
    }
    let i = match zs.binary_search_by(|v| v.total_cmp(&z)) {
        Ok(i) => return Ok(pairs[i].0),
        Err(i) => i - 1,
    };
    let h = zs[i + 1] - zs[i];
    let t = (z - zs[i]) / h;
    let (y0, m0) = pairs[i];
    let (y1, m1) = pairs[i + 1];
    let t2 = t * t;
    let t3 = t2 * t;
    Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * m1)
}

/// Interpolated `u'(z)`.
pub fn interpolate_u_prime(p: &TriConfluentParams, traj: &HeunTrajectory, z: f64) -> Result<f64> {
    hermite_interp(&traj.zs, &traj.derivative_pairs(p), z)
}

/// `ψ(x) = e^{δ_h z²/4} u'(z)` at `z = √(2x)`.
pub fn reconstruct_psi(
    p: &TriConfluentParams,
    traj: &HeunTrajectory,
    x_grid: Vec<f64>,
) -> Result<GridFunction> {
    let pairs = traj.derivative_pairs(p);
    GridFunction::sample(x_grid, |x| {
        if !(x >= 0.0) {
            return Err(Error::Range(format!("x = {x} is negative")));
        }
        let z = (2.0 * x).sqrt();
        Ok((0.25 * p.delta_h * z * z).exp() * hermite_interp(&traj.zs, &pairs, z)?)
    })
}

/// Pointwise `ψ` from a trajectory, for use with stencil checks.
pub fn psi_from_trajectory<'a>(
    p: &'a TriConfluentParams,
    traj: &'a HeunTrajectory,
) -> impl Fn(f64) -> Result<f64> + 'a {
    let pairs = traj.derivative_pairs(p);
    move |x: f64| {
        let z = (2.0 * x).sqrt();
        Ok((0.25 * p.delta_h * z * z).exp() * hermite_interp(&traj.zs, &pairs, z)?)
    }
}

/// Relative finite-difference residual of
/// `w'' - (γ + δz + εz² + 1/z) w' + α z w = 0` for `w = e^{γz+δz²/2+εz³/3} u'`,
/// sampled on `zs` (which must keep a stencil clear of `z = 0`).
pub fn w_equation_residual(
    p: &TriConfluentParams,
    traj: &HeunTrajectory,
    zs: &[f64],
    h: f64,
) -> Result<f64> {
    let pairs = traj.derivative_pairs(p);
    let w = |z: f64| -> Result<f64> {
        let phase = p.gamma_h * z + 0.5 * p.delta_h * z * z + p.epsilon_h * z * z * z / 3.0;
        Ok(phase.exp() * hermite_interp(&traj.zs, &pairs, z)?)
    };
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for &z in zs {
        if z - 2.0 * h <= 0.0 {
            return Err(Error::Grid(format!(
                "stencil at z = {z} reaches the singular point"
            )));
        }
        let (m2, m1, w0, p1, p2) = (
            w(z - 2.0 * h)?,
            w(z - h)?,
            w(z)?,
            w(z + h)?,
            w(z + 2.0 * h)?,
        );
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * w0 + 16.0 * p1 - p2) / (12.0 * h * h);
        let drift = p.damping(z) + 1.0 / z;
        let potential = p.alpha_h * z - p.q_h;
        worst = worst.max((d2 - drift * d1 + potential * w0).abs());
        scale = scale.max(d2.abs() + (drift * d1).abs() + (potential * w0).abs());
    }
    Ok(worst / scale)
}

/// Least-squares fit of Heun-route samples onto the closed-form basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteFit {
    pub c1: f64,
    pub c2: f64,
    /// `max |ψ_heun - fit| / max |ψ_heun|`.
    pub max_rel_residual: f64,
}

/// Fits `ψ ≈ c1 ψ_(1,0) + c2 ψ_(0,1)` by Gram–Schmidt least squares.
pub fn fit_to_closed_form(
    sys: &PhysicalSystem,
    energy: f64,
    psi: &GridFunction,
) -> Result<RouteFit> {
    let sp = spectral_point(sys, energy)?;
    let basis = |c1, c2| -> Result<Vec<f64>> {
        let sol = Solution::Kummer(SolutionCoefficients::new(c1, c2)?);
        psi.xs()
            .iter()
            .map(|&x| closed_form_psi(sys, &sp, &sol, x).map(|v| v.0))
            .collect()
    };
    let b1 = basis(1.0, 0.0)?;
    let b2 = basis(0.0, 1.0)?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let n1 = dot(&b1, &b1).sqrt();
    let q1: Vec<f64> = b1.iter().map(|v| v / n1).collect();
    let r12 = dot(&q1, &b2);
    let mut q2: Vec<f64> = b2.iter().zip(&q1).map(|(b, q)| b - r12 * q).collect();
    let n2 = dot(&q2, &q2).sqrt();
    if !(n2 > 1e-12 * n1.max(1.0)) {
        return Err(Error::Precision(
            "closed-form basis is numerically dependent on this grid".into(),
        ));
    }
    q2.iter_mut().for_each(|v| *v /= n2);
    let target = psi.values();
    let (t1, t2) = (dot(&q1, target), dot(&q2, target));
    let c2 = t2 / n2;
    let c1 = (t1 - r12 * c2) / n1;
    let peak = psi.max_abs();
    let max_rel_residual = target
        .iter()
        .zip(b1.iter().zip(&b2))
        .map(|(t, (u, v))| (t - c1 * u - c2 * v).abs() / peak)
        .fold(0.0, f64::max);
    Ok(RouteFit {
        c1,
        c2,
        max_rel_residual,
    })
}

/// A uniform `z` grid from 0 reaching `√(2 x_max)`.
pub fn z_grid_for(x_max: f64, points: usize) -> Vec<f64> {
    crate::grid::linspace(0.0, (2.0 * x_max).sqrt() * (1.0 + 1e-12), points.max(2))
}
