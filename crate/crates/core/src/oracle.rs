//! Checks that do not trust the closed form: finite-difference residuals of
//! the Schrödinger equation, Wronskians of the basis pair, and an
//! independent Numerov shooting eigensolver.

use crate::closed_form::{basis_brackets_dd, map_y, spectral_point, PhysicalSystem};
use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Largest `h² |f|` allowed in a five-point stencil.
const STENCIL_COARSENESS: f64 = 0.1;

/// Result of [`residual_check`].
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// `max |ψ'' + f ψ| / scale` over the grid.
    pub max_rel_residual: f64,
    /// Pointwise relative residuals.
    pub grid: GridFunction,
    /// `max|ψ| · max|f|` with `f = 2m(E - V)/ħ²`.
    pub scale: f64,
}

/// Residual of `ψ'' + (2m/ħ²)(E - V0/√x) ψ = 0` with `ψ''` from a five-point
/// central difference. The stencil step at each point is the smaller of
/// the two adjacent grid spacings, so on a uniform grid it is the grid
/// itself.
pub fn residual_check<F>(
    mut psi: F,
    sys: &PhysicalSystem,
    energy: f64,
    xs: &[f64],
) -> Result<ResidualReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    if xs.len() < 3 {
        return Err(Error::Grid(
            "residual check needs at least three points".into(),
        ));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    let kf = sys.kinetic_factor();
    let f = |x: f64| kf * (energy - sys.potential(x));
    let mut raw = Vec::with_capacity(xs.len());
    let mut peak_psi = 0.0_f64;
    let mut peak_f = 0.0_f64;
    for (i, &x) in xs.iter().enumerate() {
        let left = if i > 0 { x - xs[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < xs.len() {
            xs[i + 1] - x
        } else {
            f64::INFINITY
        };
        let h = left.min(right);
        if x - 2.0 * h <= 0.0 {
            return Err(Error::Grid(format!(
                "stencil at x = {x} with step {h} reaches the origin"
            )));
        }
        let fx = f(x);
        if h * h * fx.abs() > STENCIL_COARSENESS {
            return Err(Error::Grid(format!(
                "spacing {h:.3e} at x = {x} too coarse for a five-point stencil (h²|f| = {:.3e})",
                h * h * fx.abs()
            )));
        }
        let p0 = psi(x)?;
        let d2 = (-psi(x + 2.0 * h)? + 16.0 * psi(x + h)? - 30.0 * p0 + 16.0 * psi(x - h)?
            - psi(x - 2.0 * h)?)
            / (12.0 * h * h);
        raw.push(d2 + fx * p0);
        peak_psi = peak_psi.max(p0.abs());
        peak_f = peak_f.max(fx.abs());
    }
    let scale = peak_psi * peak_f;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Grid(format!("degenerate residual scale {scale}")));
    }
    let rel: Vec<f64> = raw.iter().map(|r| r.abs() / scale).collect();
    let max_rel_residual = rel.iter().copied().fold(0.0, f64::max);
    let grid = GridFunction::new(xs.to_vec(), rel)?.with_meta("quantity", "relative residual");
    Ok(ResidualReport {
        max_rel_residual,
        grid,
        scale,
    })
}

/// Setup for [`numerov_eigenvalue`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Start of the Numerov grid; the two seed values come from the series.
    pub x0: f64,
    pub x_max: f64,
    pub steps: usize,
    pub e_bracket: (f64, f64),
    /// Absolute energy tolerance of the bisection.
    pub tol_e: f64,
}

impl ShootingConfig {
    /// Bracket `[(1 + width) E, (1 - width) E]` around a guess, with
    /// `x0 = L/2` and `x_max = max(60 L, 12/δ + turning point)` in terms of
    /// the natural length `L = (ħ²/(m|V0|))^{2/3}`.
    pub fn around(sys: &PhysicalSystem, e_guess: f64, width: f64, steps: usize) -> Result<Self> {
        let sp = spectral_point(sys, e_guess)?;
        let length = (sys.hbar * sys.hbar / (sys.mass * sys.v0.abs())).powf(2.0 / 3.0);
        let x_max = (60.0 * length).max(12.0 / sp.delta + sys.turning_point(e_guess));
        let cfg = Self {
            x0: 0.5 * length,
            x_max,
            steps,
            e_bracket: ((1.0 + width) * e_guess, (1.0 - width) * e_guess),
            tol_e: 1e-14 * e_guess.abs(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.e_bracket;
        if !(self.x0 > 0.0 && self.x0 < self.x_max && self.x_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 0 < x0 < x_max, got x0 = {}, x_max = {}",
                self.x0, self.x_max
            )));
        }
        if !(lo < hi && hi < 0.0) {
            return Err(Error::InvalidInput(format!(
                "need E_lo < E_hi < 0, got ({lo}, {hi})"
            )));
        }
        if self.steps < 1000 {
            return Err(Error::InvalidInput(format!(
                "need at least 1000 steps, got {}",
                self.steps
            )));
        }
        if !(self.tol_e > 0.0) {
            return Err(Error::InvalidInput(
                "energy tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Regular solution near the origin, `ψ = x + (8mV0/(15ħ²)) x^{5/2} + …`,
/// summed as a series `Σ b_k s^k` in `s = √x`. Substituting into the
/// equation gives `b_2 = 1`, `b_0 = b_1 = b_3 = b_4 = 0` and
/// `(j+2) j b_{j+2} = G b_{j-1} - K b_{j-2}` with `G = 8mV0/ħ²`, `K = 8mE/ħ²`.
pub fn frobenius_start(sys: &PhysicalSystem, energy: f64, x: f64) -> Result<f64> {
    let g = 8.0 * sys.mass * sys.v0 / (sys.hbar * sys.hbar);
    let k = 8.0 * sys.mass * energy / (sys.hbar * sys.hbar);
    let s = x.sqrt();
    // b_{m-4} .. b_{m-1}
    let mut window = [0.0, 0.0, 0.0, 1.0];
    let mut sum = s * s;
    let mut power = s * s;
    let mut small = 0;
    for m in 3..400usize {
        let mf = m as f64;
        let next = (g * window[1] - k * window[0]) / (mf * (mf - 2.0));
        window = [window[1], window[2], window[3], next];
        power *= s;
        let term = next * power;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence(format!(
        "start series did not converge at x = {x}"
    )))
}

/// `ψ(x_max)` from outward Numerov integration at energy `E`.
pub fn shoot(sys: &PhysicalSystem, cfg: &ShootingConfig, energy: f64) -> Result<f64> {
    let h = (cfg.x_max - cfg.x0) / cfg.steps as f64;
    let kf = sys.kinetic_factor();
    // ψ'' = g ψ with g = (2m/ħ²)(V - E)
    let w = |x: f64| 1.0 - h * h * kf * (sys.potential(x) - energy) / 12.0;
    let mut y_prev = frobenius_start(sys, energy, cfg.x0)?;
    let mut y = frobenius_start(sys, energy, cfg.x0 + h)?;
    let mut w_prev = w(cfg.x0);
    let mut w_cur = w(cfg.x0 + h);
    for i in 1..cfg.steps {
        let w_next = w(cfg.x0 + (i + 1) as f64 * h);
        let y_next = ((12.0 - 10.0 * w_cur) * y - w_prev * y_prev) / w_next;
        y_prev = y;
        y = y_next;
        w_prev = w_cur;
        w_cur = w_next;
    }
    if !y.is_finite() {
        return Err(Error::Convergence(format!(
            "Numerov solution overflowed at E = {energy}"
        )));
    }
    Ok(y)
}

/// Bisection on the sign of `ψ(x_max)`.
pub fn numerov_eigenvalue(sys: &PhysicalSystem, cfg: &ShootingConfig) -> Result<f64> {
    cfg.validate()?;
    sys.require_attractive()?;
    let (mut lo, mut hi) = cfg.e_bracket;
    let f_lo = shoot(sys, cfg, lo)?;
    let f_hi = shoot(sys, cfg, hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "psi(x_max) keeps its sign across E in [{lo}, {hi}]"
        )));
    }
    while hi - lo > cfg.tol_e {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::Convergence(format!(
                "bisection stalled at E = {mid} before reaching tolerance {}",
                cfg.tol_e
            )));
        }
        if shoot(sys, cfg, mid)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `W = ψ1 ψ2' - ψ2 ψ1'` for the basis `c = (1, 0)`, `(0, 1)`.
///
/// The `e^{y²}` growth of the Hermite-side factors cancels between the two
/// products, so that part is formed in double-double before the decaying
/// prefactor is applied.
pub fn wronskian_scan(sys: &PhysicalSystem, energy: f64, xs: Vec<f64>) -> Result<GridFunction> {
    if let Some(&x) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain(format!(
            "Wronskian grid must lie in x > 0 (dy/dx is singular at the origin), got {x}"
        )));
    }
    let sp = spectral_point(sys, energy)?;
    let k = sp.k();
    let sign = sys.v0_sign();
    GridFunction::sample(xs, |x| {
        let y = map_y(&sp, sign, x)?;
        let [(h1, dh1), (h2, dh2)] = basis_brackets_dd(&sp, y)?;
        // ψ_i = P (h_i' - k h_i), ψ_i' = (δ/2) P (h_i' + k h_i)
        let a1 = dh1 - h1 * k;
        let b1 = dh1 + h1 * k;
        let a2 = dh2 - h2 * k;
        let b2 = dh2 + h2 * k;
        let core = (a1 * b2 - a2 * b1).to_f64();
        let p2 = (-sp.delta * x - 2.0 * k * y).exp();
        Ok(0.5 * sp.delta * p2 * core)
    })
    .map(|g| g.with_meta("quantity", "wronskian"))
}

/// `max |W(x) - W(x_0)| / |W(x_0)|` over a Wronskian scan.
pub fn wronskian_spread(w: &GridFunction) -> f64 {
    let v = w.values();
    let reference = v[0];
    v.iter()
        .map(|x| (x - reference).abs() / reference.abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::quasipoly_psi;
    use crate::grid::{linspace, logspace};

    fn unit() -> PhysicalSystem {
        PhysicalSystem::unit_attractive()
    }

    #[test]
    fn start_series_leading_terms() {
        // ψ = x + (8 m V0 / 15 ħ²) x^{5/2} - (m E / 3 ħ²) x^3 + …
        let sys = PhysicalSystem::new(1.3, 0.8, -0.7).unwrap();
        let e = -0.4;
        let x = 1e-3_f64;
        let b5 = 8.0 * 1.3 * -0.7 / (15.0 * 0.64);
        let b6 = -1.3 * e / (3.0 * 0.64);
        let want = x + b5 * x.powf(2.5) + b6 * x.powi(3);
        let got = frobenius_start(&sys, e, x).unwrap();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn start_series_satisfies_the_equation() {
        let sys = unit();
        let e = -0.55;
        let xs = linspace(0.2, 1.0, 801);
        let r = residual_check(|x| frobenius_start(&sys, e, x), &sys, e, &xs).unwrap();
        assert!(r.max_rel_residual < 1e-8, "{}", r.max_rel_residual);
    }

    #[test]
    fn quasi_polynomial_residual_is_small() {
        let sys = unit();
        let xs = logspace(0.05, 30.0, 4000);
        let r = residual_check(|x| quasipoly_psi(&sys, 1, x), &sys, -0.5, &xs).unwrap();
        assert!(r.max_rel_residual <= 1e-6, "{}", r.max_rel_residual);
    }

    #[test]
    fn wrong_function_is_caught() {
        let sys = unit();
        let xs = linspace(0.5, 10.0, 2000);
        let r = residual_check(|x: f64| Ok(x.sin()), &sys, -0.5, &xs).unwrap();
        assert!(r.max_rel_residual > 1e-2);
    }

    #[test]
    fn stencil_error_scales_as_fourth_power() {
        let sys = unit();
        let e = crate::closed_form::quasipoly_energy(&sys, 2).unwrap();
        let run = |n| {
            let xs = linspace(1.0, 8.0, n);
            residual_check(|x| quasipoly_psi(&sys, 2, x), &sys, e, &xs)
                .unwrap()
                .max_rel_residual
        };
        let coarse = run(71);
        let fine = run(141);
        let ratio = coarse / fine;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn coarse_grid_rejected() {
        let sys = unit();
        let xs = linspace(1.0, 40.0, 5);
        assert!(matches!(
            residual_check(|x| quasipoly_psi(&sys, 1, x), &sys, -0.5, &xs),
            Err(Error::Grid(_))
        ));
        let xs = linspace(0.01, 1.0, 3);
        assert!(matches!(
            residual_check(|x| quasipoly_psi(&sys, 1, x), &sys, -0.5, &xs),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn numerov_reproduces_ground_state() {
        let sys = unit();
        let exact = -0.551_897_381_445_456_2;
        let cfg = ShootingConfig::around(&sys, -0.55, 0.02, 20000).unwrap();
        let e = numerov_eigenvalue(&sys, &cfg).unwrap();
        assert!((e - exact).abs() <= 1e-5 * exact.abs(), "{e}");
    }

    #[test]
    fn numerov_gap_bracket_fails() {
        let sys = unit();
        let mut cfg = ShootingConfig::around(&sys, -0.55, 0.02, 2000).unwrap();
        // between the first two levels (-0.552 and -0.331)
        cfg.e_bracket = (-0.5, -0.4);
        assert!(matches!(
            numerov_eigenvalue(&sys, &cfg),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn shooting_config_validation() {
        let mut cfg = ShootingConfig::around(&unit(), -0.55, 0.02, 2000).unwrap();
        cfg.steps = 10;
        assert!(cfg.validate().is_err());
        cfg.steps = 2000;
        cfg.e_bracket = (-0.5, 0.1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn wronskian_is_constant_and_nonzero() {
        let sys = unit();
        let w = wronskian_scan(&sys, -0.5, linspace(0.05, 20.0, 400)).unwrap();
        assert!(w.values()[0].abs() > 1e-3);
        assert!(wronskian_spread(&w) <= 1e-8, "{}", wronskian_spread(&w));
        let w2 = wronskian_scan(&sys, -0.5, linspace(0.07, 19.0, 37)).unwrap();
        assert!((w2.values()[0] - w.values()[0]).abs() <= 1e-8 * w.values()[0].abs());
    }

    #[test]
    fn wronskian_is_constant_for_orders_off_the_round_grid() {
        // orders below 1/2 make a - 1 inexact in double precision, and the
        // rounding of shared prefactors used to leak into the result
        let sys = unit();
        for a in [
            0.3031001,
            0.3062002,
            0.4941,
            0.494_105_884_401_309_26,
            0.9366006,
            2.7,
        ] {
            let e = crate::spectrum::energy_from_a(&sys, a).unwrap();
            let w = wronskian_scan(&sys, e, linspace(0.05, 20.0, 200)).unwrap();
            assert!(
                wronskian_spread(&w) <= 1e-10,
                "a={a}: {}",
                wronskian_spread(&w)
            );
        }
    }

    #[test]
    fn wronskian_rejects_origin() {
        assert!(matches!(
            wronskian_scan(&unit(), -0.5, vec![0.0, 1.0]),
            Err(Error::Domain(_))
        ));
    }
}
