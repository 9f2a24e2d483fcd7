//! Realizations of a Poisson process on the line and integrals against them.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseConstant;

/// One realization `N` of a Poisson process with intensity `n·f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    points: Vec<f64>,
    n: u64,
}

impl PointSample {
    /// Points must be finite and sorted ascending; `n >= 1`.
    pub fn new(points: Vec<f64>, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("scale n must be at least 1"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("sample contains a non-finite point"));
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("sample points must be sorted ascending"));
        }
        Ok(PointSample { points, n })
    }

    /// Sorts the points first.
    pub fn from_unsorted(mut points: Vec<f64>, n: u64) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        Self::new(points, n)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `card(N)`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in `[a, b)`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.points.partition_point(|&x| x < a);
        let hi = self.points.partition_point(|&x| x < b);
        hi.saturating_sub(lo)
    }

    /// Superposition of two independent realizations; the scales add.
    pub fn merge(&self, other: &PointSample) -> PointSample {
        let mut points = Vec::with_capacity(self.len() + other.len());
        points.extend_from_slice(&self.points);
        points.extend_from_slice(&other.points);
        points.sort_by(f64::total_cmp);
        PointSample {
            points,
            n: self.n + other.n,
        }
    }
}

/// One Poisson draw with the given mean.
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::invalid(format!("Poisson mean {mean} must be finite and >= 0")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(dist.sample(rng) as u64)
}

/// `∫ g dN = Σ_{T ∈ N} g(T)`.
pub fn integrate_against(g: &PiecewiseConstant, sample: &PointSample) -> f64 {
    let support = g.support();
    let pts = sample.points();
    let lo = pts.partition_point(|&x| x < support.lo);
    let hi = pts.partition_point(|&x| x < support.hi);
    pts[lo..hi].iter().map(|&t| g.eval(t)).sum()
}
