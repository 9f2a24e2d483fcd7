//! Data-driven thresholding of empirical wavelet coefficients.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pointprocess::PointSample;
use crate::wavelets::{ActiveSet, BasisSpec, CoeffSet, CoefficientTable};

/// Which variance term enters the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Inflated variance `Ṽ` (see [`v_tilde`]).
    Theoretical,
    /// Plain empirical variance `V̂`; the threshold is then explicit in `γ`.
    Simulation,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Theoretical => write!(f, "theoretical"),
            Variant::Simulation => write!(f, "simulation"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "theoretical" => Ok(Variant::Theoretical),
            "simulation" => Ok(Variant::Simulation),
            _ => Err(Error::invalid(format!("unknown threshold variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    gamma: f64,
    n: u64,
    j0: i32,
    variant: Variant,
    window: Interval,
}

impl ThresholdParams {
    pub fn new(gamma: f64, n: u64, j0: i32, variant: Variant, window: Interval) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        check_n(n)?;
        if j0 < -1 {
            return Err(Error::invalid(format!("j0={j0} is below -1")));
        }
        let window = Interval::finite(window.lo, window.hi)?;
        Ok(ThresholdParams {
            gamma,
            n,
            j0,
            variant,
            window,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn j0(&self) -> i32 {
        self.j0
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.n, self.j0, self.variant, self.window)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("scale n must be at least 2, got {n}")));
    }
    Ok(())
}

/// `V̂ + √(2γ ln n V̂ ‖φ_λ‖∞²/n²) + 3γ ln n ‖φ_λ‖∞²/n²`.
pub fn v_tilde(vhat: f64, gamma: f64, n: u64, supnorm: f64) -> f64 {
    let ln_n = (n as f64).ln();
    let s2n2 = (supnorm / n as f64).powi(2);
    vhat + (2.0 * gamma * ln_n * vhat * s2n2).sqrt() + 3.0 * gamma * ln_n * s2n2
}

/// `η = √(2γ V ln n) + γ ln n ‖φ_λ‖∞ / (3n)` with `V = Ṽ` or `V̂`.
pub fn threshold_value(vhat: f64, gamma: f64, n: u64, supnorm: f64, variant: Variant) -> f64 {
    let ln_n = (n as f64).ln();
    let v = match variant {
        Variant::Simulation => vhat,
        Variant::Theoretical => v_tilde(vhat, gamma, n, supnorm),
    };
    (2.0 * gamma * v * ln_n).sqrt() + gamma * ln_n * supnorm / (3.0 * n as f64)
}

pub fn threshold(vhat: f64, params: &ThresholdParams, supnorm: f64) -> f64 {
    threshold_value(vhat, params.gamma, params.n, supnorm, params.variant)
}

/// Keeps `β̂_λ` iff `|β̂_λ| ≥ η_λ` and `j ≤ j0`. Exact zeros are not stored.
pub fn threshold_coeffs(
    emp: &CoeffSet,
    vhats: &CoeffSet,
    params: &ThresholdParams,
    supnorms: &CoeffSet,
) -> CoeffSet {
    emp.iter()
        .filter(|&(l, b)| {
            l.j <= params.j0 && b != 0.0 && b.abs() >= threshold(vhats.get(l), params, supnorms.get(l))
        })
        .collect()
}

/// Thresholds a precomputed empirical table.
pub fn threshold_table(table: &CoefficientTable, params: &ThresholdParams) -> CoeffSet {
    table
        .iter()
        .filter(|&(l, b, v, s)| l.j <= params.j0 && b != 0.0 && b.abs() >= threshold(v, params, s))
        .map(|(l, b, _, _)| (l, b))
        .collect()
}

/// Full pipeline: enumerate, compute `β̂` and `V̂`, threshold.
pub fn estimate(sample: &PointSample, basis: &BasisSpec, params: &ThresholdParams) -> Result<CoeffSet> {
    if sample.n() != params.n {
        return Err(Error::invalid(format!(
            "sample scale {} differs from threshold scale {}",
            sample.n(),
            params.n
        )));
    }
    let active = ActiveSet::new(basis, params.window, params.j0)?;
    let table = CoefficientTable::empirical(basis, &active, sample);
    Ok(threshold_table(&table, params))
}

/// Largest `γ` for which a coefficient survives the Simulation threshold,
/// i.e. the root of `a√γ + bγ = |β̂|` with `a = √(2 V̂ ln n)` and
/// `b = ln n ‖φ_λ‖∞ / (3n)`.
pub fn gamma_breakpoint(beta_hat: f64, vhat: f64, n: u64, supnorm: f64) -> Result<f64> {
    check_n(n)?;
    if !(supnorm > 0.0) || !supnorm.is_finite() {
        return Err(Error::invalid(format!("sup norm must be positive, got {supnorm}")));
    }
    if !(vhat >= 0.0) {
        return Err(Error::invalid(format!("variance must be >= 0, got {vhat}")));
    }
    let beta = beta_hat.abs();
    if beta == 0.0 {
        return Ok(0.0);
    }
    let ln_n = (n as f64).ln();
    let a = (2.0 * vhat * ln_n).sqrt();
    let b = ln_n * supnorm / (3.0 * n as f64);
    // Rationalized root, free of cancellation when a² ≫ b|β̂|.
    let root = 2.0 * beta / (a + (a * a + 4.0 * b * beta).sqrt());
    Ok(root * root)
}

/// Observation window: the support when it is finite, otherwise the range
/// of the points widened by one unit (the width of the coarse analysis atom)
/// on each side.
pub fn estimation_window(support: Interval, sample: &PointSample) -> Result<Interval> {
    if support.is_finite() {
        return Interval::finite(support.lo, support.hi);
    }
    let pts = sample.points();
    match (pts.first(), pts.last()) {
        (Some(&lo), Some(&hi)) => {
            let lo = if support.lo.is_finite() { support.lo.max(lo - 1.0) } else { lo - 1.0 };
            let hi = if support.hi.is_finite() { support.hi.min(hi + 1.0) } else { hi + 1.0 };
            Interval::finite(lo, hi)
        }
        _ => Err(Error::invalid(
            "cannot place an observation window for an unbounded support without points",
        )),
    }
}
