use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::signals::SignalSpec;

/// A compactly supported step function with left-closed, right-open pieces.
///
/// `values[i]` holds on `[breakpoints[i], breakpoints[i + 1])`; the function
/// is zero outside `[breakpoints[0], breakpoints[last])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::invalid(format!(
                "{} breakpoints cannot bound {} pieces",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::invalid("breakpoints must be finite and strictly increasing"));
        }
        Ok(PiecewiseConstant { breakpoints, values })
    }

    /// `1` on `[a, b)`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![1.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> Interval {
        Interval::new(self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.breakpoints[0] || x >= *self.breakpoints.last().unwrap() {
            return 0.0;
        }
        self.values[self.breakpoints.partition_point(|&b| b <= x) - 1]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `x ↦ 2^{j/2} g(2^j x − k)`.
    pub fn dilate(&self, j: i32, k: i64) -> Self {
        let scale = 2f64.powi(j);
        let amp = scale.sqrt();
        PiecewiseConstant {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|&b| (b + k as f64) / scale)
                .collect(),
            values: self.values.iter().map(|v| v * amp).collect(),
        }
    }

    /// `x ↦ g(x − k)`.
    pub fn translate(&self, k: i64) -> Self {
        PiecewiseConstant {
            breakpoints: self.breakpoints.iter().map(|&b| b + k as f64).collect(),
            values: self.values.clone(),
        }
    }

    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// `∫ g f` against an analytic intensity.
    pub fn integrate_signal(&self, signal: &SignalSpec) -> f64 {
        self.pieces().map(|(a, b, v)| v * signal.mass(a, b)).sum()
    }

    /// `∫ g² f` against an analytic intensity.
    pub fn integrate_sq_signal(&self, signal: &SignalSpec) -> f64 {
        self.pieces().map(|(a, b, v)| v * v * signal.mass(a, b)).sum()
    }

    /// `∫ g(x) x^p dx`, exact piece by piece.
    pub fn moment(&self, p: i32) -> f64 {
        self.pieces()
            .map(|(a, b, v)| v * (b.powi(p + 1) - a.powi(p + 1)) / (p + 1) as f64)
            .sum()
    }

    /// Merges adjacent pieces that carry the same value.
    pub fn simplified(&self) -> Self {
        let mut breakpoints = vec![self.breakpoints[0]];
        let mut values: Vec<f64> = Vec::new();
        for (_, b, v) in self.pieces() {
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = b;
            } else {
                values.push(v);
                breakpoints.push(b);
            }
        }
        PiecewiseConstant { breakpoints, values }
    }
}
