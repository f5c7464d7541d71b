//! Sampled real functions on strictly increasing grids.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A sampled real-valued function `values[i] = f(xs[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    values: Vec<f64>,
    pub meta: BTreeMap<String, String>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::Grid(format!(
                "grid needs at least 2 points, got {}",
                xs.len()
            )));
        }
        if xs.len() != values.len() {
            return Err(Error::Grid(format!(
                "length mismatch: {} abscissae, {} values",
                xs.len(),
                values.len()
            )));
        }
        if let Some(bad) = xs.iter().chain(values.iter()).find(|v| !v.is_finite()) {
            return Err(Error::Grid(format!("non-finite entry {bad}")));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid("abscissae must be strictly increasing".into()));
        }
        Ok(Self {
            xs,
            values,
            meta: BTreeMap::new(),
        })
    }

    /// Samples `f` on `xs`, propagating the first error.
    pub fn sample<F>(xs: Vec<f64>, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let values = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(xs, values)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Number of strict sign changes, ignoring samples with
    /// `|v| <= threshold`.
    pub fn sign_changes(&self, threshold: f64) -> usize {
        let mut last = 0.0_f64;
        let mut count = 0;
        for &v in &self.values {
            if v.abs() <= threshold {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + h * i as f64 })
        .collect()
}

/// `n` logarithmically spaced points from `a > 0` to `b`.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    linspace(la, lb, n).into_iter().map(f64::exp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn counts_sign_changes() {
        let g = GridFunction::new(
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
            vec![0.0, 1.0, -1.0, 0.0, 2.0],
        )
        .unwrap();
        assert_eq!(g.sign_changes(0.0), 2);
        assert_eq!(g.max_abs(), 2.0);
    }

    #[test]
    fn linspace_endpoints_exact() {
        let xs = linspace(0.0, 40.0, 2000);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[1999], 40.0);
    }
}
