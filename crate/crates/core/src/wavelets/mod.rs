//! Wavelet bases with piecewise-constant analysis atoms.
//!
//! Two bases are provided. `Haar` is orthonormal (analysis = synthesis).
//! `Spline15` is a biorthogonal spline pair: the analysis scaling function is
//! the box `1_[0,1)` and the analysis wavelet is a step function on
//! half-integers with five vanishing moments; the synthesis pair is
//! continuous and is tabulated by [`synthesis::SynthesisTables`].
//!
//! Atoms are indexed by [`LambdaIndex`]: `j = −1` encodes the scaling
//! functions `φ_k = φ(· − k)`, `j ≥ 0` the wavelets
//! `ψ_{j,k} = 2^{j/2} ψ(2^j · − k)`.

pub mod synthesis;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::interval::Interval;
use crate::piecewise::PiecewiseConstant;
use crate::pointprocess::{integrate_against, PointSample};
use crate::signals::SignalSpec;

pub use synthesis::{DyadicTable, SynthesisTables};
pub use table::{ActiveSet, CoefficientTable, LevelRange};

/// Cascade depth of the synthesis tables.
pub const SYNTHESIS_DEPTH: u32 = 12;

/// Wavelet index `λ = (j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaIndex {
    pub j: i32,
    pub k: i64,
}

impl LambdaIndex {
    pub const fn new(j: i32, k: i64) -> Self {
        LambdaIndex { j, k }
    }

    pub const fn scaling(k: i64) -> Self {
        LambdaIndex { j: -1, k }
    }

    pub fn is_scaling(&self) -> bool {
        self.j == -1
    }

    fn validate(&self) -> Result<()> {
        if self.j < -1 {
            return Err(Error::invalid(format!("level j={} is below -1", self.j)));
        }
        if self.j > 52 {
            return Err(Error::invalid(format!("level j={} exceeds 52", self.j)));
        }
        Ok(())
    }
}

impl fmt::Display for LambdaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.k)
    }
}

/// Sparse coefficient map `λ ↦ value`; absent entries are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffSet(BTreeMap<LambdaIndex, f64>);

impl CoeffSet {
    pub fn new() -> Self {
        CoeffSet(BTreeMap::new())
    }

    pub fn get(&self, lambda: LambdaIndex) -> f64 {
        self.0.get(&lambda).copied().unwrap_or(0.0)
    }

    pub fn insert(&mut self, lambda: LambdaIndex, value: f64) {
        self.0.insert(lambda, value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lambda: LambdaIndex) -> bool {
        self.0.contains_key(&lambda)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LambdaIndex, f64)> + '_ {
        self.0.iter().map(|(&l, &v)| (l, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = LambdaIndex> + '_ {
        self.0.keys().copied()
    }

    /// `Σ c_λ²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.0.values().map(|v| v * v).sum()
    }

    /// CSV with header `j,k,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,value\n");
        for (l, v) in self.iter() {
            out.push_str(&format!("{},{},{}\n", l.j, l.k, v));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut set = CoeffSet::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("j,") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("line {}: expected j,k,value", line_no + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let j: i32 = fields[0].parse().map_err(|_| bad())?;
            let k: i64 = fields[1].parse().map_err(|_| bad())?;
            let v: f64 = fields[2].parse().map_err(|_| bad())?;
            let l = LambdaIndex::new(j, k);
            l.validate()?;
            set.insert(l, v);
        }
        Ok(set)
    }
}

impl FromIterator<(LambdaIndex, f64)> for CoeffSet {
    fn from_iter<I: IntoIterator<Item = (LambdaIndex, f64)>>(iter: I) -> Self {
        CoeffSet(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Haar,
    Spline15,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Haar => write!(f, "haar"),
            BasisKind::Spline15 => write!(f, "spline15"),
        }
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(BasisKind::Haar),
            "spline15" | "spline" => Ok(BasisKind::Spline15),
            _ => Err(Error::invalid(format!("unknown basis '{s}'"))),
        }
    }
}

/// Step function stored as values on consecutive cells of width `2^-shift`.
#[derive(Debug, Clone)]
pub(crate) struct CellFunction {
    /// Cells per unit length, as a power of two.
    pub shift: u32,
    pub first_cell: i64,
    pub values: Vec<f64>,
}

impl CellFunction {
    fn to_piecewise(&self) -> PiecewiseConstant {
        let w = 2f64.powi(-(self.shift as i32));
        let breaks = (0..=self.values.len())
            .map(|i| (self.first_cell + i as i64) as f64 * w)
            .collect();
        PiecewiseConstant::new(breaks, self.values.clone())
            .expect("cell functions have increasing breakpoints")
            .simplified()
    }
}

/// An analysis/synthesis wavelet pair.
#[derive(Debug, Clone)]
pub struct BasisSpec {
    kind: BasisKind,
    phi_cells: CellFunction,
    psi_cells: CellFunction,
    phi: PiecewiseConstant,
    psi: PiecewiseConstant,
    synthesis: Option<SynthesisTables>,
    frame: OnceLock<(f64, f64)>,
}

impl BasisSpec {
    pub fn new(kind: BasisKind) -> Self {
        match kind {
            BasisKind::Haar => Self::haar(),
            BasisKind::Spline15 => Self::spline15(),
        }
    }

    /// `φ = 1_[0,1)`, `ψ = 1_[0,½) − 1_[½,1)`.
    pub fn haar() -> Self {
        let phi_cells = CellFunction {
            shift: 0,
            first_cell: 0,
            values: vec![1.0],
        };
        let psi_cells = CellFunction {
            shift: 1,
            first_cell: 0,
            values: vec![1.0, -1.0],
        };
        BasisSpec {
            kind: BasisKind::Haar,
            phi: phi_cells.to_piecewise(),
            psi: psi_cells.to_piecewise(),
            phi_cells,
            psi_cells,
            synthesis: None,
            frame: OnceLock::new(),
        }
    }

    /// Box analysis scaling function with the ten-tap spline synthesis mask.
    pub fn spline15() -> Self {
        Self::spline15_with_depth(SYNTHESIS_DEPTH)
    }

    pub fn spline15_with_depth(depth: u32) -> Self {
        let mask = synthesis::synthesis_mask();
        let m = |l: i64| -> f64 {
            let idx = l - synthesis::MASK_FIRST;
            if (0..10).contains(&idx) {
                mask[idx as usize]
            } else {
                0.0
            }
        };
        // ψ = 2 Σ_c (−1)^c m_{1−c} φ(2x − c), c = −4..=5.
        let psi_values: Vec<f64> = (-4..=5i64)
            .map(|c| {
                let sign = if c.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                2.0 * sign * m(1 - c)
            })
            .collect();
        let phi_cells = CellFunction {
            shift: 0,
            first_cell: 0,
            values: vec![1.0],
        };
        let psi_cells = CellFunction {
            shift: 1,
            first_cell: -4,
            values: psi_values,
        };
        BasisSpec {
            kind: BasisKind::Spline15,
            phi: phi_cells.to_piecewise(),
            psi: psi_cells.to_piecewise(),
            phi_cells,
            psi_cells,
            synthesis: Some(SynthesisTables::build(depth)),
            frame: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Analysis scaling function `φ`.
    pub fn phi(&self) -> &PiecewiseConstant {
        &self.phi
    }

    /// Analysis wavelet `ψ`.
    pub fn psi(&self) -> &PiecewiseConstant {
        &self.psi
    }

    pub fn synthesis_tables(&self) -> Option<&SynthesisTables> {
        self.synthesis.as_ref()
    }

    pub fn is_orthonormal(&self) -> bool {
        self.kind == BasisKind::Haar
    }

    pub(crate) fn cells(&self, lambda: LambdaIndex) -> &CellFunction {
        if lambda.is_scaling() {
            &self.phi_cells
        } else {
            &self.psi_cells
        }
    }

    /// Exact analysis atom `φ_λ`.
    pub fn analysis_atom(&self, lambda: LambdaIndex) -> PiecewiseConstant {
        if lambda.is_scaling() {
            self.phi.translate(lambda.k)
        } else {
            self.psi.dilate(lambda.j, lambda.k)
        }
    }

    /// `‖φ_λ‖∞`.
    pub fn atom_sup_norm(&self, lambda: LambdaIndex) -> f64 {
        if lambda.is_scaling() {
            self.phi.sup_norm()
        } else {
            2f64.powf(lambda.j as f64 / 2.0) * self.psi.sup_norm()
        }
    }

    /// Support of the mother functions `(φ̃, ψ̃)` on the synthesis side.
    fn synthesis_base_support(&self, scaling: bool) -> (f64, f64) {
        match (&self.synthesis, scaling) {
            (None, true) => (0.0, 1.0),
            (None, false) => (0.0, 1.0),
            (Some(t), true) => t.phi.support(),
            (Some(t), false) => t.psi.support(),
        }
    }

    /// Base-unit interval covering both the analysis and the synthesis atom;
    /// indices are enumerated against it.
    pub(crate) fn enumeration_base_support(&self, scaling: bool) -> (f64, f64) {
        let analysis = if scaling { self.phi.support() } else { self.psi.support() };
        let (slo, shi) = self.synthesis_base_support(scaling);
        (analysis.lo.min(slo), analysis.hi.max(shi))
    }

    /// Support of `φ̃_λ`.
    pub fn synthesis_support(&self, lambda: LambdaIndex) -> Interval {
        let (lo, hi) = self.synthesis_base_support(lambda.is_scaling());
        let s = level_scale(lambda.j);
        Interval::new((lo + lambda.k as f64) / s, (hi + lambda.k as f64) / s)
    }

    /// `φ̃_λ(x)`.
    pub fn synthesis_eval(&self, lambda: LambdaIndex, x: f64) -> f64 {
        match &self.synthesis {
            None => self.analysis_atom(lambda).eval(x),
            Some(t) => {
                if lambda.is_scaling() {
                    t.phi.eval(x - lambda.k as f64)
                } else {
                    let s = level_scale(lambda.j);
                    s.sqrt() * t.psi.eval(s * x - lambda.k as f64)
                }
            }
        }
    }

    /// `∫ g φ̃_λ` for a step function `g`; exact for Haar, exact against the
    /// tabulated interpolant for the spline basis.
    pub fn integrate_with_synthesis(&self, g: &PiecewiseConstant, lambda: LambdaIndex) -> f64 {
        match &self.synthesis {
            None => {
                let atom = self.analysis_atom(lambda);
                g.pieces()
                    .map(|(a, b, v)| {
                        atom.pieces()
                            .map(|(c, d, w)| {
                                let lo = a.max(c);
                                let hi = b.min(d);
                                if hi > lo {
                                    v * w * (hi - lo)
                                } else {
                                    0.0
                                }
                            })
                            .sum::<f64>()
                    })
                    .sum()
            }
            Some(t) => {
                let s = level_scale(lambda.j);
                let k = lambda.k as f64;
                let table = if lambda.is_scaling() { &t.phi } else { &t.psi };
                g.pieces()
                    .map(|(a, b, v)| v * table.integral(s * a - k, s * b - k) / s.sqrt())
                    .sum()
            }
        }
    }

    /// `β_λ = ∫ φ_λ f`, exact from the signal's interval masses.
    pub fn true_coeff(&self, lambda: LambdaIndex, signal: &SignalSpec) -> f64 {
        self.analysis_atom(lambda).integrate_signal(signal)
    }

    /// `V_{λ,n} = (1/n) ∫ φ_λ² f`.
    pub fn true_variance(&self, lambda: LambdaIndex, signal: &SignalSpec, n: u64) -> f64 {
        self.analysis_atom(lambda).integrate_sq_signal(signal) / n as f64
    }

    /// `β̂_λ = (1/n) Σ_T φ_λ(T)`.
    pub fn empirical_coeff(&self, lambda: LambdaIndex, sample: &PointSample) -> f64 {
        integrate_against(&self.analysis_atom(lambda), sample) / sample.n() as f64
    }

    /// `V̂_{λ,n} = (1/n²) Σ_T φ_λ(T)²`.
    pub fn empirical_variance(&self, lambda: LambdaIndex, sample: &PointSample) -> f64 {
        let atom = self.analysis_atom(lambda);
        let sq = PiecewiseConstant::new(
            atom.breakpoints().to_vec(),
            atom.values().iter().map(|v| v * v).collect(),
        )
        .expect("same breakpoints");
        let n = sample.n() as f64;
        integrate_against(&sq, sample) / (n * n)
    }

    /// All `λ` with `j ≤ j0` whose atom meets `window`.
    pub fn active_indices(&self, window: Interval, j0: i32) -> Result<Vec<LambdaIndex>> {
        Ok(ActiveSet::new(self, window, j0)?.indices().collect())
    }

    /// `Σ c_λ φ̃_λ(x)` at every grid point.
    pub fn reconstruct(&self, coeffs: &CoeffSet, grid: &UniformGrid) -> Vec<f64> {
        let mut out = vec![0.0; grid.len()];
        for (lambda, c) in coeffs.iter() {
            if c == 0.0 {
                continue;
            }
            let support = self.synthesis_support(lambda);
            let range = grid.index_range(support.lo, support.hi);
            match &self.synthesis {
                None => {
                    let atom = self.analysis_atom(lambda);
                    for i in range {
                        out[i] += c * atom.eval(grid.point(i));
                    }
                }
                Some(t) => {
                    let s = level_scale(lambda.j);
                    let k = lambda.k as f64;
                    let (table, amp) = if lambda.is_scaling() {
                        (&t.phi, 1.0)
                    } else {
                        (&t.psi, s.sqrt())
                    };
                    for i in range {
                        out[i] += c * amp * table.eval(s * grid.point(i) - k);
                    }
                }
            }
        }
        out
    }

    /// `inf |ψ|` over the support of the analysis wavelet.
    pub fn mu_psi(&self) -> f64 {
        self.psi
            .values()
            .iter()
            .filter(|v| **v != 0.0)
            .fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }

    /// Riesz bounds `(c₁, c₂)` of the synthesis system, estimated once as the
    /// extreme eigenvalues of its Gram matrix over all atoms with `j ≤ 2`
    /// meeting `[0, 2)`. Exactly `(1, 1)` for Haar.
    pub fn frame_bounds(&self) -> (f64, f64) {
        *self.frame.get_or_init(|| match &self.synthesis {
            None => (1.0, 1.0),
            Some(_) => {
                let gram = self.synthesis_gram(Interval::new(0.0, 2.0), 2);
                let eig = SymmetricEigen::new(gram).eigenvalues;
                let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        })
    }

    /// Indices used by [`frame_bounds`](Self::frame_bounds).
    pub fn frame_probe_indices(&self) -> Vec<LambdaIndex> {
        self.active_indices(Interval::new(0.0, 2.0), 2)
            .expect("fixed window is valid")
    }

    fn synthesis_gram(&self, window: Interval, j_max: i32) -> DMatrix<f64> {
        let atoms = self.frame_probe_indices();
        debug_assert!(atoms.iter().all(|l| l.j <= j_max) && window.width() > 0.0);
        let lo = atoms
            .iter()
            .map(|&l| self.synthesis_support(l).lo)
            .fold(f64::INFINITY, f64::min);
        let hi = atoms
            .iter()
            .map(|&l| self.synthesis_support(l).hi)
            .fold(f64::NEG_INFINITY, f64::max);
        let grid = UniformGrid::new(Interval::new(lo, hi), ((hi - lo) * 2048.0) as usize)
            .expect("non-empty span");
        let h = grid.step();
        let samples: Vec<Vec<f64>> = atoms
            .iter()
            .map(|&l| grid.points().map(|x| self.synthesis_eval(l, x)).collect())
            .collect();
        let m = atoms.len();
        let mut gram = DMatrix::<f64>::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let v: f64 = samples[a].iter().zip(&samples[b]).map(|(x, y)| x * y).sum::<f64>() * h;
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        gram
    }
}

/// Dilation factor of level `j` (`1` for the scaling level).
pub(crate) fn level_scale(j: i32) -> f64 {
    2f64.powi(j.max(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::SignalKind;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn haar_atoms() {
        let b = BasisSpec::haar();
        let a = b.analysis_atom(LambdaIndex::scaling(0));
        assert_eq!(a.breakpoints(), &[0.0, 1.0]);
        assert_eq!(a.values(), &[1.0]);
        let a = b.analysis_atom(LambdaIndex::new(1, 0));
        assert_eq!(a.breakpoints(), &[0.0, 0.25, 0.5]);
        assert!(approx(a.values()[0], 2f64.sqrt(), 1e-15));
        assert!(approx(a.values()[1], -(2f64.sqrt()), 1e-15));
    }

    #[test]
    fn atom_sup_norm_scales() {
        for basis in [BasisSpec::haar(), BasisSpec::spline15_with_depth(4)] {
            for j in 0..6 {
                let l = LambdaIndex::new(j, 3);
                let direct = basis.analysis_atom(l).sup_norm();
                assert!(approx(basis.atom_sup_norm(l), direct, 1e-12));
                assert!(approx(direct, 2f64.powf(j as f64 / 2.0) * basis.psi().sup_norm(), 1e-12));
            }
        }
    }

    #[test]
    fn spline_supports_inside_minus4_5() {
        let b = BasisSpec::spline15_with_depth(6);
        let psi = b.analysis_atom(LambdaIndex::new(0, 0)).support();
        let phi = b.analysis_atom(LambdaIndex::scaling(0)).support();
        let t = b.synthesis_tables().unwrap();
        for (lo, hi) in [(psi.lo, psi.hi), (phi.lo, phi.hi), t.phi.support(), t.psi.support()] {
            assert!(lo >= -4.0 && hi <= 5.0, "[{lo},{hi})");
        }
        assert_eq!((psi.lo, psi.hi), (-2.0, 3.0));
    }

    #[test]
    fn spline_vanishing_moments() {
        let b = BasisSpec::spline15_with_depth(4);
        for p in 0..=4 {
            let m = b.psi().moment(p);
            assert!(m.abs() < 1e-12, "moment {p} = {m}");
        }
        assert!(b.psi().moment(5).abs() > 1e-3);
        assert_eq!(b.mu_psi(), 3.0 / 128.0);
    }

    #[test]
    fn true_coeff_examples() {
        let h = BasisSpec::haar();
        let haar1 = SignalSpec::new(SignalKind::Haar1);
        assert_eq!(h.true_coeff(LambdaIndex::scaling(0), &haar1), 1.0);
        for j in 0..6 {
            for k in 0..(1i64 << j) {
                assert_eq!(h.true_coeff(LambdaIndex::new(j, k), &haar1), 0.0);
            }
        }
        let haar2 = SignalSpec::new(SignalKind::Haar2);
        assert!(approx(h.true_coeff(LambdaIndex::new(2, 0), &haar2), 0.25, 1e-15));
    }

    #[test]
    fn true_variance_examples() {
        let h = BasisSpec::haar();
        let haar1 = SignalSpec::new(SignalKind::Haar1);
        let n = 1024;
        for j in 0..5 {
            for k in 0..(1i64 << j) {
                let v = h.true_variance(LambdaIndex::new(j, k), &haar1, n);
                assert!(approx(v, 1.0 / n as f64, 1e-15));
            }
        }
        assert_eq!(h.true_variance(LambdaIndex::scaling(5), &haar1, n), 0.0);
        let haar2 = SignalSpec::new(SignalKind::Haar2);
        assert!(approx(h.true_variance(LambdaIndex::new(0, 0), &haar2, n), 1.0 / 1024.0, 1e-15));
    }

    #[test]
    fn empirical_examples() {
        let h = BasisSpec::haar();
        let s = PointSample::new(vec![0.3], 1024).unwrap();
        assert_eq!(h.empirical_coeff(LambdaIndex::new(0, 0), &s), 1.0 / 1024.0);
        let empty = PointSample::new(vec![], 1024).unwrap();
        assert_eq!(h.empirical_coeff(LambdaIndex::new(0, 0), &empty), 0.0);
        assert_eq!(h.empirical_variance(LambdaIndex::new(0, 0), &empty), 0.0);
        let s = PointSample::new(vec![0.2, 0.7], 100).unwrap();
        assert_eq!(h.empirical_coeff(LambdaIndex::new(0, 0), &s), 0.0);
        assert!(approx(h.empirical_variance(LambdaIndex::new(0, 0), &s), 2.0 / 1e4, 1e-18));
        let s = PointSample::new(vec![0.1], 100).unwrap();
        assert!(approx(h.empirical_variance(LambdaIndex::new(1, 0), &s), 2.0 / 1e4, 1e-18));
    }

    #[test]
    fn active_index_examples() {
        let h = BasisSpec::haar();
        let w = Interval::new(0.0, 1.0);
        assert_eq!(
            h.active_indices(w, 0).unwrap(),
            vec![LambdaIndex::scaling(0), LambdaIndex::new(0, 0)]
        );
        assert_eq!(h.active_indices(w, 2).unwrap().len(), 8);
        let s = BasisSpec::spline15_with_depth(4);
        let idx = s.active_indices(w, 0).unwrap();
        for k in -4..=0 {
            assert!(idx.contains(&LambdaIndex::scaling(k)), "missing φ_{k}");
        }
        let mut dedup = idx.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), idx.len());
        assert!(h.active_indices(Interval::new(1.0, 0.0), 3).is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let h = BasisSpec::haar();
        let grid = UniformGrid::new(Interval::new(0.0, 1.0), 64).unwrap();
        let ones: CoeffSet = [(LambdaIndex::scaling(0), 1.0)].into_iter().collect();
        assert!(h.reconstruct(&ones, &grid).iter().all(|&v| v == 1.0));
        assert!(h.reconstruct(&CoeffSet::new(), &grid).iter().all(|&v| v == 0.0));
        let grid = UniformGrid::new(Interval::new(0.0, 1.0), 2).unwrap();
        let psi: CoeffSet = [(LambdaIndex::new(0, 0), 1.0)].into_iter().collect();
        assert_eq!(h.reconstruct(&psi, &grid), vec![1.0, -1.0]);
    }

    #[test]
    fn haar_parseval_on_grid() {
        let h = BasisSpec::haar();
        let grid = UniformGrid::new(Interval::new(-1.0, 3.0), 1 << 14).unwrap();
        let coeffs: CoeffSet = [
            (LambdaIndex::scaling(0), 0.7),
            (LambdaIndex::scaling(1), -0.2),
            (LambdaIndex::new(0, 0), 0.3),
            (LambdaIndex::new(3, 5), -1.1),
            (LambdaIndex::new(6, 70), 0.4),
        ]
        .into_iter()
        .collect();
        let vals = h.reconstruct(&coeffs, &grid);
        let q: f64 = vals.iter().map(|v| v * v).sum::<f64>() * grid.step();
        assert!(approx(q, coeffs.l2_norm_sq(), 1e-6));
    }

    #[test]
    fn coeff_csv_round_trip() {
        let c: CoeffSet = [(LambdaIndex::scaling(-2), 0.5), (LambdaIndex::new(4, 9), -1e-7)]
            .into_iter()
            .collect();
        assert_eq!(CoeffSet::from_csv(&c.to_csv()).unwrap(), c);
        assert!(CoeffSet::from_csv("j,k,value\n1,2\n").is_err());
    }
}
