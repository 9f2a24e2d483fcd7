//! Synthesis-side functions of the spline pair, tabulated on dyadic grids.
//!
//! The synthesis scaling function satisfies
//! `φ̃(x) = 2 Σ_l m_l φ̃(2x − l)` with the ten-tap mask below (taps at
//! `l = −4..=5`). Its values at the integers form the eigenvector of the
//! refinement matrix for eigenvalue 1, normalized to sum to one; every finer
//! dyadic level then follows exactly from the refinement equation. The
//! wavelet is `ψ̃(x) = φ̃(2x) − φ̃(2x − 1)`.

use nalgebra::{DMatrix, DVector};

/// Synthesis low-pass mask (sum 1), in 256ths, for `l = −4..=5`.
pub(crate) const SYNTHESIS_MASK_256THS: [i32; 10] = [3, -3, -22, 22, 128, 128, 22, -22, -3, 3];
pub(crate) const MASK_FIRST: i64 = -4;

pub(crate) fn synthesis_mask() -> [f64; 10] {
    SYNTHESIS_MASK_256THS.map(|m| m as f64 / 256.0)
}

/// Samples of a continuous compactly supported function at
/// `lo + i·2^{-depth}`, evaluated by linear interpolation in between.
#[derive(Debug, Clone)]
pub struct DyadicTable {
    lo: f64,
    depth: u32,
    values: Vec<f64>,
    /// `cumulative[i]` = integral of the interpolant from `lo` to node `i`.
    cumulative: Vec<f64>,
}

impl DyadicTable {
    fn new(lo: f64, depth: u32, values: Vec<f64>) -> Self {
        let h = 2f64.powi(-(depth as i32));
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cumulative.push(acc);
        }
        DyadicTable {
            lo,
            depth,
            values,
            cumulative,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.lo + self.step() * (self.values.len() - 1) as f64)
    }

    pub fn step(&self) -> f64 {
        2f64.powi(-(self.depth as i32))
    }

    /// Value at node `i` (exact dyadic sample).
    pub fn node(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.lo) * 2f64.powi(self.depth as i32);
        if !(t >= 0.0) || t >= (self.values.len() - 1) as f64 {
            return 0.0;
        }
        let i = t as usize;
        let f = t - i as f64;
        self.values[i] + f * (self.values[i + 1] - self.values[i])
    }

    fn primitive(&self, x: f64) -> f64 {
        let scale = 2f64.powi(self.depth as i32);
        let last = self.values.len() - 1;
        let t = (x - self.lo) * scale;
        if !(t > 0.0) {
            return 0.0;
        }
        if t >= last as f64 {
            return self.cumulative[last];
        }
        let i = t as usize;
        let f = t - i as f64;
        let (a, b) = (self.values[i], self.values[i + 1]);
        self.cumulative[i] + (f * a + 0.5 * f * f * (b - a)) / scale
    }

    /// Exact integral of the interpolant over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.primitive(b) - self.primitive(a)
    }
}

/// Tabulated `φ̃` and `ψ̃` at dyadic depth `D`.
#[derive(Debug, Clone)]
pub struct SynthesisTables {
    pub phi: DyadicTable,
    pub psi: DyadicTable,
}

impl SynthesisTables {
    pub fn build(depth: u32) -> Self {
        let mask = synthesis_mask();
        let m = |l: i64| -> f64 {
            let idx = l - MASK_FIRST;
            if (0..10).contains(&idx) {
                mask[idx as usize]
            } else {
                0.0
            }
        };

        // Integer samples: solve (T − I) v = 0 with Σ v = 1, where
        // T[i][n] = 2 m_{2i − n} on the integer nodes −4..=5.
        let nodes: Vec<i64> = (-4..=5).collect();
        let size = nodes.len();
        let mut a = DMatrix::<f64>::zeros(size, size);
        for (r, &i) in nodes.iter().enumerate() {
            for (c, &n) in nodes.iter().enumerate() {
                a[(r, c)] = 2.0 * m(2 * i - n) - if r == c { 1.0 } else { 0.0 };
            }
        }
        let mut rhs = DVector::<f64>::zeros(size);
        for c in 0..size {
            a[(size - 1, c)] = 1.0;
        }
        rhs[size - 1] = 1.0;
        let integer_values = a
            .lu()
            .solve(&rhs)
            .expect("refinement system for the synthesis scaling function is singular");

        // Level d holds φ̃ at −4 + i/2^d, i = 0..=9·2^d.
        let mut level: Vec<f64> = integer_values.iter().copied().collect();
        for d in 1..=depth {
            let count = 9 * (1usize << d) + 1;
            let half = 1i64 << (d - 1);
            let prev = &level;
            let next: Vec<f64> = (0..count as i64)
                .map(|i| {
                    (-4..=5)
                        .map(|l: i64| {
                            let idx = i - (4 + l) * half;
                            if idx >= 0 && (idx as usize) < prev.len() {
                                2.0 * m(l) * prev[idx as usize]
                            } else {
                                0.0
                            }
                        })
                        .sum()
                })
                .collect();
            level = next;
        }
        let phi = DyadicTable::new(-4.0, depth, level);

        // ψ̃ on −2 + i/2^D, i = 0..=5·2^D; 2x and 2x − 1 land on φ̃ nodes.
        let count = 5 * (1usize << depth) + 1;
        let shift = 1usize << depth;
        let psi_values: Vec<f64> = (0..count)
            .map(|i| {
                let a = 2 * i;
                let first = phi.values.get(a).copied().unwrap_or(0.0);
                let second = if a >= shift {
                    phi.values.get(a - shift).copied().unwrap_or(0.0)
                } else {
                    0.0
                };
                first - second
            })
            .collect();
        let psi = DyadicTable::new(-2.0, depth, psi_values);
        SynthesisTables { phi, psi }
    }
}
