//! Verification suites run by `invsqrt verify`.
//!
//! Every check compares one measured quantity with a fixed threshold. Grids
//! and trial energies are expressed in the natural units of the system so
//! the same suite is meaningful for any mass, ħ and coupling.

use clap::ValueEnum;
use serde::Serialize;

use invsqrt_core::closed_form::{quasipoly_energy, quasipoly_psi};
use invsqrt_core::grid::{linspace, logspace};
use invsqrt_core::heun_check::{
    fit_to_closed_form, heun_params_from_physics, integrate_tch, psi_from_trajectory,
    reconstruct_psi, w_equation_residual, z_grid_for,
};
use invsqrt_core::oracle::{
    numerov_eigenvalue, residual_check, wronskian_scan, wronskian_spread, ShootingConfig,
};
use invsqrt_core::spectrum::{approx_spectrum, bound_state, exact_energy};
use invsqrt_core::{PhysicalSystem, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Residual,
    Numerov,
    Heun,
    Wronskian,
    All,
}

impl Suite {
    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Residual,
                Suite::Numerov,
                Suite::Heun,
                Suite::Wronskian,
            ],
            s => vec![s],
        }
    }

    fn label(self) -> &'static str {
        match self {
            Suite::Residual => "residual",
            Suite::Numerov => "numerov",
            Suite::Heun => "heun",
            Suite::Wronskian => "wronskian",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Natural length and energy units of `V0/√x` with mass `m` and `ħ`.
struct Scales {
    length: f64,
    energy: f64,
}

fn scales(sys: &PhysicalSystem) -> Scales {
    let length = (sys.hbar * sys.hbar / (sys.mass * sys.v0.abs())).powf(2.0 / 3.0);
    Scales {
        length,
        energy: sys.v0.abs() / length.sqrt(),
    }
}

fn check(suite: Suite, name: String, measured: f64, threshold: f64) -> Check {
    Check {
        suite: suite.label(),
        name,
        measured,
        threshold,
        // NaN never passes
        pass: measured <= threshold,
    }
}

fn residual_suite(sys: &PhysicalSystem) -> Result<Vec<Check>> {
    let u = scales(sys);
    let xs = logspace(0.05 * u.length, 30.0 * u.length, 4000);
    let mut out = Vec::new();
    for n in 1..=6 {
        let e = quasipoly_energy(sys, n)?;
        let r = residual_check(|x| quasipoly_psi(sys, n, x), sys, e, &xs)?;
        out.push(check(
            Suite::Residual,
            format!("quasi-polynomial n={n}"),
            r.max_rel_residual,
            1e-6,
        ));
    }
    for n in 1..=3 {
        let s = bound_state(sys, n)?;
        let xs = logspace(0.05 * u.length, 0.9 * s.switch_point(), 4000);
        let r = residual_check(|x| s.psi(x), sys, s.energy, &xs)?;
        out.push(check(
            Suite::Residual,
            format!("bound state n={n}"),
            r.max_rel_residual,
            1e-6,
        ));
    }
    Ok(out)
}

fn numerov_suite(sys: &PhysicalSystem) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let exact = exact_energy(sys, n)?;
        let cfg = ShootingConfig::around(sys, approx_spectrum(sys, n)?, 0.02, 20000)?;
        let shot = numerov_eigenvalue(sys, &cfg)?;
        out.push(check(
            Suite::Numerov,
            format!("eigenvalue n={n}"),
            ((shot - exact) / exact).abs(),
            1e-5,
        ));
    }
    Ok(out)
}

fn heun_suite(sys: &PhysicalSystem) -> Result<Vec<Check>> {
    let u = scales(sys);
    let x_max = 10.0 * u.length;
    let xs_res = logspace(0.1 * u.length, x_max, 3000);
    let xs_fit = linspace(0.1 * u.length, x_max, 400);
    let zs = z_grid_for(1.05 * x_max, 20001);
    // z = √(2x) scales with the square root of the length unit
    let z_unit = u.length.sqrt();
    let zs_check = linspace(0.1 * z_unit, 0.96 * zs[zs.len() - 1], 200);
    let mut out = Vec::new();
    for factor in [-0.43, -0.21, -0.77] {
        let e = factor * u.energy;
        for branch in [-1, 1] {
            let p = heun_params_from_physics(sys, e, branch)?;
            let (mut residual, mut fit, mut w_res) = (0.0_f64, 0.0_f64, 0.0_f64);
            for init in [(1.0, 0.0), (0.0, 1.0)] {
                let traj = integrate_tch(&p, &zs, init)?;
                residual = residual.max(
                    residual_check(psi_from_trajectory(&p, &traj), sys, e, &xs_res)?
                        .max_rel_residual,
                );
                let psi = reconstruct_psi(&p, &traj, xs_fit.clone())?;
                fit = fit.max(fit_to_closed_form(sys, e, &psi)?.max_rel_residual);
                w_res = w_res.max(w_equation_residual(&p, &traj, &zs_check, 1e-3 * z_unit)?);
            }
            let tag = format!("E={e:.4} branch={branch:+}");
            out.push(check(
                Suite::Heun,
                format!("Schroedinger residual {tag}"),
                residual,
                1e-6,
            ));
            out.push(check(
                Suite::Heun,
                format!("closed-form fit {tag}"),
                fit,
                1e-6,
            ));
            out.push(check(
                Suite::Heun,
                format!("w-equation residual {tag}"),
                w_res,
                1e-6,
            ));
        }
    }
    Ok(out)
}

fn wronskian_suite(sys: &PhysicalSystem) -> Result<Vec<Check>> {
    let u = scales(sys);
    let mut out = Vec::new();
    for factor in [-0.5, -0.3, -0.8] {
        let e = factor * u.energy;
        let w = wronskian_scan(sys, e, linspace(0.05 * u.length, 20.0 * u.length, 500))?;
        out.push(check(
            Suite::Wronskian,
            format!("spread E={e:.4}"),
            wronskian_spread(&w),
            1e-8,
        ));
    }
    Ok(out)
}

/// Runs the selected suites. Numerical failures abort the run; threshold
/// misses are recorded in the report.
pub fn run(sys: &PhysicalSystem, suite: Suite) -> Result<Report> {
    let mut checks = Vec::new();
    for s in suite.expand() {
        checks.extend(match s {
            Suite::Residual => residual_suite(sys)?,
            Suite::Numerov => numerov_suite(sys)?,
            Suite::Heun => heun_suite(sys)?,
            Suite::Wronskian => wronskian_suite(sys)?,
            Suite::All => unreachable!("expanded above"),
        });
    }
    Ok(Report {
        passed: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_scales_are_one() {
        let u = scales(&PhysicalSystem::unit_attractive());
        assert!((u.length - 1.0).abs() < 1e-15);
        assert!((u.energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wronskian_suite_passes_for_scaled_units() {
        let sys = PhysicalSystem::new(2.0, 0.7, -1.3).unwrap();
        let r = run(&sys, Suite::Wronskian).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.passed, "{:?}", r.checks);
    }

    #[test]
    fn nan_is_a_failure() {
        assert!(!check(Suite::Residual, "x".into(), f64::NAN, 1.0).pass);
    }
}
