use crate::error::{Error, Result};
use crate::interval::Interval;

/// Midpoint grid of `size` cells over a finite window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    window: Interval,
    size: usize,
}

impl UniformGrid {
    pub fn new(window: Interval, size: usize) -> Result<Self> {
        let window = Interval::finite(window.lo, window.hi)?;
        if size == 0 {
            return Err(Error::invalid("grid needs at least one cell"));
        }
        Ok(UniformGrid { window, size })
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Cell width.
    pub fn step(&self) -> f64 {
        self.window.width() / self.size as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.window.lo + (i as f64 + 0.5) * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    /// Indices whose midpoints fall in `[a, b)`.
    pub fn index_range(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let h = self.step();
        let to_index = |x: f64| {
            let t = ((x - self.window.lo) / h - 0.5).ceil();
            t.clamp(0.0, self.size as f64) as usize
        };
        let (mut lo, mut hi) = (to_index(a), to_index(b));
        // Settle rounding at the edges against the exact midpoints.
        while lo > 0 && self.point(lo - 1) >= a {
            lo -= 1;
        }
        while lo < self.size && self.point(lo) < a {
            lo += 1;
        }
        while hi > 0 && self.point(hi - 1) >= b {
            hi -= 1;
        }
        while hi < self.size && self.point(hi) < b {
            hi += 1;
        }
        lo..hi.max(lo)
    }
}
