//! Dense per-level coefficient computation.
//!
//! At level `j` every analysis atom is a linear combination of indicator
//! cells of width `2^-(j+r)` (`r = 1` for wavelets, `r = 0` for the box
//! scaling function), and atom `(j, k)` uses the cells of the mother function
//! shifted by `2^r k`. Cell masses (or cell point counts) are therefore
//! computed once per level and shared by all atoms of that level.

use super::{level_scale, BasisSpec, CoeffSet, LambdaIndex};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pointprocess::PointSample;
use crate::signals::SignalSpec;

/// Contiguous translations `k_min..=k_max` at level `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub j: i32,
    pub k_min: i64,
    pub k_max: i64,
}

impl LevelRange {
    pub fn len(&self) -> usize {
        if self.k_max < self.k_min {
            0
        } else {
            (self.k_max - self.k_min + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = LambdaIndex> + '_ {
        let j = self.j;
        (self.k_min..=self.k_max).map(move |k| LambdaIndex::new(j, k))
    }
}

/// Every index with `j ≤ j0` whose atom meets a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    window: Interval,
    levels: Vec<LevelRange>,
}

impl ActiveSet {
    pub fn new(basis: &BasisSpec, window: Interval, j0: i32) -> Result<Self> {
        let window = Interval::finite(window.lo, window.hi)?;
        if j0 < -1 {
            return Err(Error::invalid(format!("j0={j0} is below -1")));
        }
        if j0 > 40 {
            return Err(Error::invalid(format!("j0={j0} exceeds 40")));
        }
        let levels = (-1..=j0)
            .map(|j| {
                let (lo, hi) = basis.enumeration_base_support(j == -1);
                let s = level_scale(j);
                // (lo + k)/s < b and (hi + k)/s > a.
                let k_min = (window.lo * s - hi).floor() as i64 + 1;
                let k_max = (window.hi * s - lo).ceil() as i64 - 1;
                LevelRange { j, k_min, k_max }
            })
            .collect();
        Ok(ActiveSet { window, levels })
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn levels(&self) -> &[LevelRange] {
        &self.levels
    }

    pub fn j0(&self) -> i32 {
        self.levels.last().map(|l| l.j).unwrap_or(-1)
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(LevelRange::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = LambdaIndex> + '_ {
        self.levels.iter().flat_map(|l| l.indices())
    }
}

/// Coefficients, variances and atom sup-norms for one [`ActiveSet`], stored
/// level by level in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    levels: Vec<LevelData>,
}

#[derive(Debug, Clone, PartialEq)]
struct LevelData {
    range: LevelRange,
    sup_norm: f64,
    coeff: Vec<f64>,
    variance: Vec<f64>,
}

/// Cell geometry of one level.
struct LevelCells<'a> {
    amp: f64,
    stride: i64,
    first_cell: i64,
    values: &'a [f64],
    resolution: f64,
    /// Global cell index of the first entry of the dense cell array.
    origin: i64,
    count: usize,
}

impl<'a> LevelCells<'a> {
    fn new(basis: &'a BasisSpec, range: LevelRange) -> Self {
        let proto = LambdaIndex::new(range.j, 0);
        let cells = basis.cells(proto);
        let stride = 1i64 << cells.shift;
        let s = level_scale(range.j);
        let amp = if proto.is_scaling() { 1.0 } else { s.sqrt() };
        let origin = cells.first_cell + stride * range.k_min;
        let last = cells.first_cell + cells.values.len() as i64 - 1 + stride * range.k_max;
        LevelCells {
            amp,
            stride,
            first_cell: cells.first_cell,
            values: &cells.values,
            resolution: s * stride as f64,
            origin,
            count: (last - origin + 1).max(0) as usize,
        }
    }

    /// `(amp Σ v_c M, amp² Σ v_c² M)` for every `k` in the range.
    fn combine(&self, range: LevelRange, masses: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut coeff = Vec::with_capacity(range.len());
        let mut second = Vec::with_capacity(range.len());
        for k in range.k_min..=range.k_max {
            let start = (self.first_cell + self.stride * k - self.origin) as usize;
            let mut c = 0.0;
            let mut q = 0.0;
            for (i, v) in self.values.iter().enumerate() {
                let m = masses[start + i];
                c += v * m;
                q += v * v * m;
            }
            coeff.push(self.amp * c);
            second.push(self.amp * self.amp * q);
        }
        (coeff, second)
    }
}

impl CoefficientTable {
    /// `β̂_λ` and `V̂_{λ,n}` from a point sample.
    pub fn empirical(basis: &BasisSpec, active: &ActiveSet, sample: &PointSample) -> Self {
        let n = sample.n() as f64;
        let levels = active
            .levels()
            .iter()
            .map(|&range| {
                let cells = LevelCells::new(basis, range);
                let mut counts = vec![0.0; cells.count];
                for &x in sample.points() {
                    let m = (x * cells.resolution).floor();
                    let idx = m - cells.origin as f64;
                    if idx >= 0.0 && idx < cells.count as f64 {
                        counts[idx as usize] += 1.0;
                    }
                }
                let (coeff, second) = cells.combine(range, &counts);
                LevelData {
                    range,
                    sup_norm: basis.atom_sup_norm(LambdaIndex::new(range.j, 0)),
                    coeff: coeff.into_iter().map(|c| c / n).collect(),
                    variance: second.into_iter().map(|q| q / (n * n)).collect(),
                }
            })
            .collect();
        CoefficientTable { levels }
    }

    /// `β_λ` and `V_{λ,n}` from the signal's exact interval masses.
    pub fn truth(basis: &BasisSpec, active: &ActiveSet, signal: &SignalSpec, n: u64) -> Self {
        let levels = active
            .levels()
            .iter()
            .map(|&range| {
                let cells = LevelCells::new(basis, range);
                let support = signal.support();
                let masses: Vec<f64> = (0..cells.count)
                    .map(|i| {
                        let m = (cells.origin + i as i64) as f64;
                        let a = m / cells.resolution;
                        let b = (m + 1.0) / cells.resolution;
                        if b <= support.lo || a >= support.hi {
                            0.0
                        } else {
                            signal.mass(a, b)
                        }
                    })
                    .collect();
                let (coeff, second) = cells.combine(range, &masses);
                LevelData {
                    range,
                    sup_norm: basis.atom_sup_norm(LambdaIndex::new(range.j, 0)),
                    coeff,
                    variance: second.into_iter().map(|q| q / n as f64).collect(),
                }
            })
            .collect();
        CoefficientTable { levels }
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.coeff.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(λ, coefficient, variance, ‖φ_λ‖∞)` in index order.
    pub fn iter(&self) -> impl Iterator<Item = (LambdaIndex, f64, f64, f64)> + '_ {
        self.levels.iter().flat_map(|l| {
            l.range
                .indices()
                .zip(l.coeff.iter().zip(&l.variance))
                .map(move |(lambda, (&c, &v))| (lambda, c, v, l.sup_norm))
        })
    }

    /// Coefficients and variances as sparse maps, zeros omitted.
    pub fn to_coeff_sets(&self) -> (CoeffSet, CoeffSet) {
        let mut coeffs = CoeffSet::new();
        let mut variances = CoeffSet::new();
        for (lambda, c, v, _) in self.iter() {
            if c != 0.0 {
                coeffs.insert(lambda, c);
            }
            if v != 0.0 {
                variances.insert(lambda, v);
            }
        }
        (coeffs, variances)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};
    use crate::signals::SignalKind;

    fn rel_close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn active_set_matches_brute_force() {
        for basis in [BasisSpec::haar(), BasisSpec::spline15_with_depth(3)] {
            let window = Interval::new(-0.37, 1.61);
            let active = ActiveSet::new(&basis, window, 4).unwrap();
            for j in -1..=4 {
                let s = level_scale(j);
                let (lo, hi) = basis.enumeration_base_support(j == -1);
                let brute: Vec<i64> = (-200..200)
                    .filter(|&k| (lo + k as f64) / s < window.hi && (hi + k as f64) / s > window.lo)
                    .collect();
                let got: Vec<i64> = active.levels()[(j + 1) as usize]
                    .indices()
                    .map(|l| l.k)
                    .collect();
                assert_eq!(got, brute, "{:?} level {j}", basis.kind());
            }
        }
    }

    #[test]
    fn bulk_matches_single_atom_paths() {
        for basis in [BasisSpec::haar(), BasisSpec::spline15_with_depth(3)] {
            for kind in [SignalKind::Blocks, SignalKind::Gauss1, SignalKind::Bumps] {
                let signal = SignalSpec::new(kind);
                let n = 512;
                let sample = signal.sample_points(n, &mut stream(3, 0, Purpose::Fixture)).unwrap();
                let window = Interval::new(-1.0, 2.0);
                let active = ActiveSet::new(&basis, window, 6).unwrap();
                let emp = CoefficientTable::empirical(&basis, &active, &sample);
                let tru = CoefficientTable::truth(&basis, &active, &signal, n);
                for ((l, c, v, s), (_, b, vt, _)) in emp.iter().zip(tru.iter()) {
                    assert!(rel_close(c, basis.empirical_coeff(l, &sample)), "{l}");
                    assert!(rel_close(v, basis.empirical_variance(l, &sample)), "{l}");
                    assert!(rel_close(b, basis.true_coeff(l, &signal)), "{l}");
                    assert!(rel_close(vt, basis.true_variance(l, &signal, n)), "{l}");
                    assert_eq!(s, basis.atom_sup_norm(l));
                }
            }
        }
    }

    #[test]
    fn haar1_truth_is_exactly_sparse() {
        let basis = BasisSpec::haar();
        let signal = SignalSpec::new(SignalKind::Haar1);
        let active = ActiveSet::new(&basis, Interval::new(0.0, 1.0), 8).unwrap();
        let tru = CoefficientTable::truth(&basis, &active, &signal, 100);
        let (coeffs, _) = tru.to_coeff_sets();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs.get(LambdaIndex::scaling(0)), 1.0);
    }
}
