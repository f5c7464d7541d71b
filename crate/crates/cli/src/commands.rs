//! Table builders behind each subcommand.

use invsqrt_core::closed_form::{quasipoly_energy, quasipoly_psi};
use invsqrt_core::grid::linspace;
use invsqrt_core::spectrum::{
    approx_root, approx_spectrum, bound_state, energy_from_a, quasipoly_norm, solve_exact_root,
};
use invsqrt_core::{PhysicalSystem, Result};

use crate::table::{Cell, Table};
use crate::verify::Report;
use crate::{SpectrumMode, WaveMode};

/// Rows `(n, a_n, E_n, rel_err_vs_exact)`; the last column is filled only in
/// the approximate mode.
pub fn spectrum(sys: &PhysicalSystem, mode: SpectrumMode, lo: u32, hi: u32) -> Result<Table> {
    let mut t = Table::new(&["n", "a_n", "E_n", "rel_err_vs_exact"]);
    for n in lo..=hi {
        let (a, e, rel) = match mode {
            SpectrumMode::Exact => {
                let a = solve_exact_root(n)?;
                (a, energy_from_a(sys, a)?, None)
            }
            SpectrumMode::Approx => {
                let e = approx_spectrum(sys, n)?;
                let exact = energy_from_a(sys, solve_exact_root(n)?)?;
                (approx_root(n, false), e, Some(((e - exact) / exact).abs()))
            }
            SpectrumMode::Quasipoly => (f64::from(n), quasipoly_energy(sys, n)?, None),
        };
        t.push(vec![n.into(), a.into(), e.into(), rel.into()]);
    }
    Ok(t)
}

/// Samples `(x, psi)` on `[0, x_max]`.
pub fn wavefunction(
    sys: &PhysicalSystem,
    n: u32,
    mode: WaveMode,
    x_max: f64,
    points: usize,
    normalize: bool,
) -> Result<Table> {
    let xs = linspace(0.0, x_max, points);
    let psi = states(sys, &[n], mode, normalize, &xs)?;
    Ok(columns(&["x", "psi"], &xs, &psi))
}

/// One column per state, evaluated on `xs`.
fn states(
    sys: &PhysicalSystem,
    ns: &[u32],
    mode: WaveMode,
    normalize: bool,
    xs: &[f64],
) -> Result<Vec<Vec<f64>>> {
    ns.iter()
        .map(|&n| match mode {
            WaveMode::Bound => {
                let s = bound_state(sys, n)?;
                xs.iter().map(|&x| s.psi(x)).collect()
            }
            WaveMode::Quasipoly => {
                let c = if normalize {
                    quasipoly_norm(sys, n)?
                } else {
                    1.0
                };
                xs.iter()
                    .map(|&x| quasipoly_psi(sys, n, x).map(|p| c * p))
                    .collect()
            }
        })
        .collect()
}

fn columns(names: &[&str], xs: &[f64], series: &[Vec<f64>]) -> Table {
    let mut t = Table::new(names);
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![Cell::Float(x)];
        row.extend(series.iter().map(|s| Cell::Float(s[i])));
        t.push(row);
    }
    t
}

/// Data files for one figure, as `(file stem, table)` pairs.
pub fn figure(
    sys: &PhysicalSystem,
    fig: u8,
    x_max: f64,
    points: usize,
) -> Result<Vec<(String, Table)>> {
    let xs = linspace(0.0, x_max, points);
    let header = ["x", "psi_1", "psi_2", "psi_3"];
    Ok(match fig {
        1 => {
            let psi = states(sys, &[1, 2, 3], WaveMode::Quasipoly, false, &xs)?;
            vec![("fig1".into(), columns(&header, &xs, &psi))]
        }
        4 => {
            let psi = states(sys, &[1, 2, 3], WaveMode::Bound, true, &xs)?;
            vec![("fig4".into(), columns(&header, &xs, &psi))]
        }
        _ => {
            // the potential is singular at the origin, so start one step out
            let xv = linspace(x_max / points as f64, x_max, points);
            let mut pot = Table::new(&["x", "V"]);
            for &x in &xv {
                pot.push(vec![x.into(), sys.potential(x).into()]);
            }
            let mut levels = Table::new(&["n", "E_exact", "E_approx"]);
            let mut inset = Table::new(&["n", "rel_err"]);
            for n in 1..=invsqrt_core::spectrum::DEFAULT_MAX_N {
                let exact = energy_from_a(sys, solve_exact_root(n)?)?;
                let approx = approx_spectrum(sys, n)?;
                levels.push(vec![n.into(), exact.into(), approx.into()]);
                inset.push(vec![n.into(), ((approx - exact) / exact).abs().into()]);
            }
            vec![
                ("fig3_potential".into(), pot),
                ("fig3_levels".into(), levels),
                ("fig3_inset".into(), inset),
            ]
        }
    })
}

pub fn report_table(report: &Report) -> Table {
    let mut t = Table::new(&["suite", "name", "measured", "threshold", "pass"]);
    for c in &report.checks {
        t.push(vec![
            c.suite.into(),
            Cell::Text(c.name.clone()),
            c.measured.into(),
            c.threshold.into(),
            c.pass.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasipoly_rows_follow_the_power_law() {
        let sys = PhysicalSystem::unit_attractive();
        let t = spectrum(&sys, SpectrumMode::Quasipoly, 1, 3).unwrap();
        for (row, n) in t.rows.iter().zip(1..) {
            let want = -0.5 * f64::from(n).powf(-2.0 / 3.0);
            match row[2] {
                Cell::Float(e) => assert!((e - want).abs() < 1e-15, "{e} vs {want}"),
                ref c => panic!("unexpected cell {c:?}"),
            }
            assert_eq!(row[3], Cell::Empty);
        }
    }

    #[test]
    fn bound_wavefunction_vanishes_at_origin() {
        let sys = PhysicalSystem::unit_attractive();
        let t = wavefunction(&sys, 2, WaveMode::Bound, 40.0, 400, false).unwrap();
        let vals: Vec<f64> = t
            .rows
            .iter()
            .map(|r| match r[1] {
                Cell::Float(v) => v,
                _ => unreachable!(),
            })
            .collect();
        let peak = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(vals[0].abs() <= 1e-9 * peak);
    }
}
