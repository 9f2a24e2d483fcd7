//! Binned comparison procedures: Anscombe transform, universal hard
//! thresholding in the orthonormal Haar filter bank, optional cycle spinning.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::interval::Interval;
use crate::pointprocess::PointSample;

/// Default number of bins.
pub const DEFAULT_BINS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCounts {
    window: Interval,
    counts: Vec<u64>,
    n: u64,
    dropped: usize,
}

impl BinnedCounts {
    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Points that fell outside the window.
    pub fn dropped(&self) -> usize {
        self.dropped
    }
}

fn check_dyadic(b: usize) -> Result<()> {
    if b < 2 || !b.is_power_of_two() {
        return Err(Error::invalid(format!("bin count must be a power of two >= 2, got {b}")));
    }
    Ok(())
}

/// Equal-width, left-closed bins over `window`.
pub fn bin_counts(sample: &PointSample, window: Interval, bins: usize) -> Result<BinnedCounts> {
    check_dyadic(bins)?;
    let window = Interval::finite(window.lo, window.hi)?;
    let mut counts = vec![0u64; bins];
    let mut dropped = 0;
    let scale = bins as f64 / window.width();
    for &x in sample.points() {
        if !window.contains(x) {
            dropped += 1;
            continue;
        }
        let i = (((x - window.lo) * scale).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    Ok(BinnedCounts {
        window,
        counts,
        n: sample.n(),
        dropped,
    })
}

/// `[min, max]` of the points as a half-open window that still holds the
/// largest point.
pub fn data_window(sample: &PointSample) -> Result<Interval> {
    match (sample.points().first(), sample.points().last()) {
        (Some(&lo), Some(&hi)) => {
            let hi = if hi > lo { hi.next_up() } else { lo + 1.0 };
            Interval::finite(lo, hi)
        }
        _ => Err(Error::invalid("an empty sample has no data range")),
    }
}

/// `2√(N + 3/8)` per bin.
pub fn anscombe(counts: &BinnedCounts) -> Vec<f64> {
    counts
        .counts
        .iter()
        .map(|&c| 2.0 * (c as f64 + 0.375).sqrt())
        .collect()
}

/// Orthonormal Haar analysis over `levels` steps. The output holds the
/// coarse approximation first, then detail bands from coarse to fine.
pub fn haar_dwt(y: &[f64], levels: u32) -> Result<Vec<f64>> {
    check_dyadic(y.len())?;
    check_levels(y.len(), levels)?;
    let mut out = y.to_vec();
    let mut len = y.len();
    let mut tmp = vec![0.0; len];
    for _ in 0..levels {
        let half = len / 2;
        for i in 0..half {
            let (a, b) = (out[2 * i], out[2 * i + 1]);
            tmp[i] = (a + b) * std::f64::consts::FRAC_1_SQRT_2;
            tmp[half + i] = (a - b) * std::f64::consts::FRAC_1_SQRT_2;
        }
        out[..len].copy_from_slice(&tmp[..len]);
        len = half;
    }
    Ok(out)
}

/// Inverse of [`haar_dwt`].
pub fn haar_idwt(c: &[f64], levels: u32) -> Result<Vec<f64>> {
    check_dyadic(c.len())?;
    check_levels(c.len(), levels)?;
    let mut out = c.to_vec();
    let mut tmp = vec![0.0; c.len()];
    let mut len = c.len() >> levels;
    for _ in 0..levels {
        for i in 0..len {
            let (s, d) = (out[i], out[len + i]);
            tmp[2 * i] = (s + d) * std::f64::consts::FRAC_1_SQRT_2;
            tmp[2 * i + 1] = (s - d) * std::f64::consts::FRAC_1_SQRT_2;
        }
        len *= 2;
        out[..len].copy_from_slice(&tmp[..len]);
    }
    Ok(out)
}

fn check_levels(len: usize, levels: u32) -> Result<()> {
    let max = len.trailing_zeros();
    if levels > max {
        return Err(Error::invalid(format!("{levels} levels exceed log2({len}) = {max}")));
    }
    Ok(())
}

/// Hard-thresholds every detail coefficient at `σ√(2 ln B)`; `levels`
/// defaults to the full depth `log2 B`.
pub fn universal_haar_denoise(y: &[f64], sigma: f64, levels: Option<u32>) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    check_dyadic(y.len())?;
    let levels = levels.unwrap_or(y.len().trailing_zeros());
    let mut c = haar_dwt(y, levels)?;
    let t = sigma * (2.0 * (y.len() as f64).ln()).sqrt();
    let coarse = y.len() >> levels;
    for d in &mut c[coarse..] {
        if d.abs() <= t {
            *d = 0.0;
        }
    }
    haar_idwt(&c, levels)
}

/// `max(0, (ŷ/2)² − 3/8) · B / (n |window|)` per bin.
pub fn inverse_anscombe_to_intensity(yhat: &[f64], window: Interval, n: u64) -> Vec<f64> {
    let scale = yhat.len() as f64 / (n as f64 * window.width());
    yhat.iter()
        .map(|&y| ((0.25 * y * y) - 0.375).max(0.0) * scale)
        .collect()
}

/// Mean over `shifts` evenly spaced circular shifts `s` of
/// `unshift(denoise(shift(y, s)))`.
pub fn cycle_spin<F>(y: &[f64], denoise: F, shifts: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let b = y.len();
    if shifts == 0 || b % shifts != 0 {
        return Err(Error::invalid(format!("{shifts} shifts do not divide {b} bins")));
    }
    let step = b / shifts;
    let mut acc = vec![0.0; b];
    let mut shifted = vec![0.0; b];
    for s in (0..b).step_by(step) {
        for i in 0..b {
            shifted[i] = y[(i + s) % b];
        }
        let d = denoise(&shifted)?;
        for i in 0..b {
            acc[(i + s) % b] += d[i];
        }
    }
    for v in &mut acc {
        *v /= shifts as f64;
    }
    Ok(acc)
}

/// Piecewise-constant intensity on equal bins of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedEstimate {
    pub window: Interval,
    pub values: Vec<f64>,
}

impl BinnedEstimate {
    pub fn eval(&self, x: f64) -> f64 {
        if !self.window.contains(x) {
            return 0.0;
        }
        let b = self.values.len();
        let i = (((x - self.window.lo) / self.window.width() * b as f64).floor() as usize).min(b - 1);
        self.values[i]
    }

    pub fn on_grid(&self, grid: &UniformGrid) -> Vec<f64> {
        grid.points().map(|x| self.eval(x)).collect()
    }
}

/// Anscombe transform, universal Haar thresholding (cycle-spun over all `B`
/// shifts when `translation_invariant`), inverse transform.
pub fn anscombe_estimate(
    sample: &PointSample,
    window: Interval,
    bins: usize,
    levels: Option<u32>,
    translation_invariant: bool,
) -> Result<BinnedEstimate> {
    let counts = bin_counts(sample, window, bins)?;
    let y = anscombe(&counts);
    let yhat = if translation_invariant {
        cycle_spin(&y, |v| universal_haar_denoise(v, 1.0, levels), bins)?
    } else {
        universal_haar_denoise(&y, 1.0, levels)?
    };
    Ok(BinnedEstimate {
        window: counts.window(),
        values: inverse_anscombe_to_intensity(&yhat, counts.window(), sample.n()),
    })
}
