//! Monte-Carlo drivers: single reconstructions, risk-ratio calibration,
//! method comparison and the oracle-inequality check.
//!
//! Replication `r` always draws its points from
//! `stream(seed, r, Purpose::Sample)`, so every method sees the same sample
//! and results do not depend on how replications are scheduled.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::baselines::{anscombe_estimate, data_window};
use crate::error::{Error, Result};
use crate::estimator::{estimation_window, threshold_table, ThresholdParams, Variant};
use crate::grid::UniformGrid;
use crate::interval::Interval;
use crate::pointprocess::PointSample;
use crate::risk::{
    average_curves, coeff_risk, curve_terms, gamma_min, l2_grid_risk, risk_curve_from_terms, StepCurve,
};
use crate::rng::{stream, Purpose};
use crate::signals::{SignalKind, SignalSpec};
use crate::wavelets::{ActiveSet, BasisKind, BasisSpec, CoeffSet, CoefficientTable};

/// Mass left outside the evaluation window of the comparison study.
pub const EVAL_TAIL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 1 << 14;
pub const DEFAULT_GAMMA_CAP: f64 = 400.0;

/// Points of replication `rep`.
pub fn replicate_sample(signal: &SignalSpec, n: u64, seed: u64, rep: u64) -> Result<PointSample> {
    signal.sample_points(n, &mut stream(seed, rep, Purpose::Sample))
}

/// `⌊log₂ n⌋`.
pub fn default_j0(n: u64) -> i32 {
    63 - n.max(1).leading_zeros() as i32
}

/// Default replication count of the calibration study.
pub fn default_calibration_reps(kind: SignalKind) -> u64 {
    match kind {
        SignalKind::Haar1 | SignalKind::Gauss1 | SignalKind::Bumps => 1000,
        _ => 100,
    }
}

/// `# config k=v ...` line.
pub fn config_line(pairs: &[(&str, String)]) -> String {
    let mut s = String::from("# config");
    for (k, v) in pairs {
        let _ = write!(s, " {k}={v}");
    }
    s.push('\n');
    s
}

fn check_reps(reps: u64) -> Result<()> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    Ok(())
}

fn window_for(signal: &SignalSpec, sample: &PointSample) -> Result<Interval> {
    estimation_window(signal.support(), sample)
}

#[derive(Debug, Clone)]
pub struct ReconstructConfig {
    pub signal: SignalSpec,
    pub basis: BasisKind,
    pub n: u64,
    pub j0: i32,
    pub gamma: f64,
    pub variant: Variant,
    pub seed: u64,
    pub grid: usize,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub grid: UniformGrid,
    pub truth: Vec<f64>,
    pub estimate: Vec<f64>,
    pub coeffs: CoeffSet,
    pub sample_size: usize,
}

impl Reconstruction {
    pub fn to_csv(&self, config: &str) -> String {
        let mut out = String::from(config);
        out.push_str("x,f_true,f_estimate\n");
        for (i, x) in self.grid.points().enumerate() {
            let _ = writeln!(out, "{},{},{}", x, self.truth[i], self.estimate[i]);
        }
        out
    }
}

/// One sample (replication 0), one estimate, both evaluated on a grid over
/// the estimation window.
pub fn run_reconstruct(cfg: &ReconstructConfig) -> Result<Reconstruction> {
    let basis = BasisSpec::new(cfg.basis);
    let sample = replicate_sample(&cfg.signal, cfg.n, cfg.seed, 0)?;
    let window = window_for(&cfg.signal, &sample)?;
    let params = ThresholdParams::new(cfg.gamma, cfg.n, cfg.j0, cfg.variant, window)?;
    let coeffs = crate::estimator::estimate(&sample, &basis, &params)?;
    let grid = UniformGrid::new(window, cfg.grid)?;
    Ok(Reconstruction {
        truth: grid.points().map(|x| cfg.signal.pdf(x)).collect(),
        estimate: basis.reconstruct(&coeffs, &grid),
        grid,
        coeffs,
        sample_size: sample.len(),
    })
}

#[derive(Debug, Clone)]
pub struct CalibrateConfig {
    pub signal: SignalSpec,
    pub basis: BasisKind,
    pub n: u64,
    pub j0: i32,
    pub reps: u64,
    pub seed: u64,
    pub gamma_cap: f64,
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub curve: StepCurve,
    pub gamma_min: f64,
    pub reps: u64,
}

impl Calibration {
    pub fn to_csv(&self, config: &str) -> String {
        let mut out = String::from(config);
        let _ = writeln!(out, "# gamma_min={} reps={}", self.gamma_min, self.reps);
        out.push_str(&self.curve.to_csv());
        out
    }
}

/// Risk-ratio curves of every replication, in replication order.
pub fn replicate_curves(cfg: &CalibrateConfig) -> Result<Vec<StepCurve>> {
    check_reps(cfg.reps)?;
    let basis = BasisSpec::new(cfg.basis);
    // With a fixed window the true coefficients are shared by all replications.
    let fixed = if cfg.signal.has_compact_support() {
        let window = Interval::finite(cfg.signal.support().lo, cfg.signal.support().hi)?;
        let active = ActiveSet::new(&basis, window, cfg.j0)?;
        let truth = CoefficientTable::truth(&basis, &active, &cfg.signal, cfg.n);
        Some((active, truth))
    } else {
        None
    };
    (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = replicate_sample(&cfg.signal, cfg.n, cfg.seed, rep)?;
            match &fixed {
                Some((active, truth)) => {
                    let emp = CoefficientTable::empirical(&basis, active, &sample);
                    risk_curve_from_terms(&curve_terms(&emp, truth)?, cfg.n, active.window())
                }
                None => crate::risk::risk_curve(&sample, &cfg.signal, &basis, cfg.n, cfg.j0),
            }
        })
        .collect()
}

/// Average risk-ratio curve and its minimizer.
pub fn run_calibrate(cfg: &CalibrateConfig) -> Result<Calibration> {
    let curves = replicate_curves(cfg)?;
    let curve = average_curves(&curves)?;
    Ok(Calibration {
        gamma_min: gamma_min(&curve, cfg.gamma_cap)?,
        curve,
        reps: cfg.reps,
    })
}

/// Estimation method of the comparison study.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    RandThreshHaar,
    RandThreshSpline,
    AnscombeUni,
    AnscombeUniTi,
    /// Grid estimates read from a CSV file.
    External(String),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::RandThreshHaar => write!(f, "rand-thresh-haar"),
            Method::RandThreshSpline => write!(f, "rand-thresh-spline"),
            Method::AnscombeUni => write!(f, "anscombe-uni"),
            Method::AnscombeUniTi => write!(f, "anscombe-uni-ti"),
            Method::External(name) => write!(f, "{name}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand-thresh-haar" => Ok(Method::RandThreshHaar),
            "rand-thresh-spline" => Ok(Method::RandThreshSpline),
            "anscombe-uni" => Ok(Method::AnscombeUni),
            "anscombe-uni-ti" => Ok(Method::AnscombeUniTi),
            _ => Err(Error::invalid(format!("unknown method '{s}'"))),
        }
    }
}

impl Method {
    pub const BUILTIN: [Method; 4] = [
        Method::RandThreshHaar,
        Method::RandThreshSpline,
        Method::AnscombeUni,
        Method::AnscombeUniTi,
    ];
}

/// Externally produced estimates, per replication, as `(x, value)` knots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExternalEstimates {
    by_rep: BTreeMap<u64, Vec<(f64, f64)>>,
}

impl ExternalEstimates {
    /// Parses rows `rep,x,estimate`; a header and `#` lines are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut by_rep: BTreeMap<u64, Vec<(f64, f64)>> = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("rep") {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected rep,x,estimate", no + 1));
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let rep: u64 = f[0].parse().map_err(|_| bad())?;
            let x: f64 = f[1].parse().map_err(|_| bad())?;
            let v: f64 = f[2].parse().map_err(|_| bad())?;
            if !x.is_finite() || !v.is_finite() {
                return Err(bad());
            }
            by_rep.entry(rep).or_default().push((x, v));
        }
        for knots in by_rep.values_mut() {
            knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        Ok(ExternalEstimates { by_rep })
    }

    /// Linear interpolation of replication `rep` onto the grid, zero outside
    /// the knot range.
    pub fn on_grid(&self, rep: u64, grid: &UniformGrid) -> Result<Vec<f64>> {
        let knots = self
            .by_rep
            .get(&rep)
            .ok_or_else(|| Error::invalid(format!("external estimates lack replication {rep}")))?;
        Ok(grid
            .points()
            .map(|x| {
                let i = knots.partition_point(|k| k.0 <= x);
                if i == 0 || i == knots.len() {
                    return if i > 0 && knots[i - 1].0 == x { knots[i - 1].1 } else { 0.0 };
                }
                let (x0, y0) = knots[i - 1];
                let (x1, y1) = knots[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            })
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub signal: SignalSpec,
    pub n: u64,
    pub j0: i32,
    pub gamma: f64,
    pub reps: u64,
    pub seed: u64,
    pub grid: usize,
    pub bins: usize,
    /// Coarse level count of the binned Haar transform; `None` means all.
    pub levels: Option<u32>,
    pub methods: Vec<Method>,
    pub externals: BTreeMap<String, ExternalEstimates>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub rep: u64,
    pub method: Method,
    pub mse: f64,
}

/// Evaluation grid of the comparison study: fixed by the signal alone.
pub fn comparison_grid(signal: &SignalSpec, size: usize) -> Result<UniformGrid> {
    UniformGrid::new(signal.tail_window(EVAL_TAIL), size)
}

/// Per-replication squared `L²` error of each method on common samples.
pub fn run_compare(cfg: &CompareConfig) -> Result<Vec<CompareRow>> {
    check_reps(cfg.reps)?;
    if cfg.methods.is_empty() {
        return Err(Error::invalid("no methods selected"));
    }
    for m in &cfg.methods {
        if let Method::External(name) = m {
            if !cfg.externals.contains_key(name) {
                return Err(Error::invalid(format!("no estimates supplied for external method '{name}'")));
            }
        }
    }
    let grid = comparison_grid(&cfg.signal, cfg.grid)?;
    let haar = BasisSpec::haar();
    let spline = cfg
        .methods
        .contains(&Method::RandThreshSpline)
        .then(BasisSpec::spline15);
    let per_rep: Vec<Vec<CompareRow>> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = replicate_sample(&cfg.signal, cfg.n, cfg.seed, rep)?;
            cfg.methods
                .iter()
                .map(|m| {
                    let est = match m {
                        Method::RandThreshHaar => wavelet_grid_estimate(&sample, &cfg.signal, &haar, cfg, &grid)?,
                        Method::RandThreshSpline => {
                            let basis = spline.as_ref().expect("spline basis built when selected");
                            wavelet_grid_estimate(&sample, &cfg.signal, basis, cfg, &grid)?
                        }
                        Method::AnscombeUni | Method::AnscombeUniTi => {
                            let window = if cfg.signal.has_compact_support() {
                                cfg.signal.support()
                            } else {
                                data_window(&sample)?
                            };
                            anscombe_estimate(&sample, window, cfg.bins, cfg.levels, *m == Method::AnscombeUniTi)?
                                .on_grid(&grid)
                        }
                        Method::External(name) => cfg.externals[name].on_grid(rep, &grid)?,
                    };
                    Ok(CompareRow {
                        rep,
                        method: m.clone(),
                        mse: l2_grid_risk(&est, &cfg.signal, &grid)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_rep.into_iter().flatten().collect())
}

fn wavelet_grid_estimate(
    sample: &PointSample,
    signal: &SignalSpec,
    basis: &BasisSpec,
    cfg: &CompareConfig,
    grid: &UniformGrid,
) -> Result<Vec<f64>> {
    let window = window_for(signal, sample)?;
    let params = ThresholdParams::new(cfg.gamma, cfg.n, cfg.j0, Variant::Simulation, window)?;
    let coeffs = crate::estimator::estimate(sample, basis, &params)?;
    Ok(basis.reconstruct(&coeffs, grid))
}

pub fn compare_csv(rows: &[CompareRow], config: &str) -> String {
    let mut out = String::from(config);
    out.push_str("rep,method,mse\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.rep, r.method, r.mse);
    }
    out
}

/// Median of the rows of one method.
pub fn median_mse(rows: &[CompareRow], method: &Method) -> Option<f64> {
    let mut v: Vec<f64> = rows.iter().filter(|r| &r.method == method).map(|r| r.mse).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[derive(Debug, Clone)]
pub struct BoundConfig {
    pub signal: SignalSpec,
    pub basis: BasisKind,
    pub n: u64,
    pub j0: i32,
    pub gamma: f64,
    pub variant: Variant,
    pub reps: u64,
    pub seed: u64,
}

/// Monte-Carlo check of `E Σ(β̃ − β)² ≤ 12 ln n (Σ min(β², V) + 1/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub reps: u64,
    pub mean_risk: f64,
    pub std_error: f64,
    pub mean_oracle: f64,
    pub bound: f64,
}

impl BoundCheck {
    /// Passes when the mean plus two standard errors is below the bound.
    pub fn passes(&self) -> bool {
        self.mean_risk + 2.0 * self.std_error < self.bound
    }

    pub fn to_csv(&self, config: &str) -> String {
        let mut out = String::from(config);
        out.push_str("reps,mean_risk,std_error,oracle,bound,pass\n");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            self.reps,
            self.mean_risk,
            self.std_error,
            self.mean_oracle,
            self.bound,
            self.passes()
        );
        out
    }
}

/// Coefficient risk `Σ(β̃ − β)²` and oracle risk of one replication.
pub fn replicate_coeff_risk(
    sample: &PointSample,
    signal: &SignalSpec,
    basis: &BasisSpec,
    j0: i32,
    gamma: f64,
    variant: Variant,
) -> Result<(f64, f64)> {
    let n = sample.n();
    let window = window_for(signal, sample)?;
    let active = ActiveSet::new(basis, window, j0)?;
    let emp = CoefficientTable::empirical(basis, &active, sample);
    let truth = CoefficientTable::truth(basis, &active, signal, n);
    let params = ThresholdParams::new(gamma, n, j0, variant, window)?;
    let kept = threshold_table(&emp, &params);
    let (beta, var) = truth.to_coeff_sets();
    Ok((coeff_risk(&kept, &beta), crate::risk::oracle_risk(&beta, &var)))
}

pub fn check_bound(cfg: &BoundConfig) -> Result<BoundCheck> {
    check_reps(cfg.reps)?;
    let basis = BasisSpec::new(cfg.basis);
    let pairs: Vec<(f64, f64)> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = replicate_sample(&cfg.signal, cfg.n, cfg.seed, rep)?;
            replicate_coeff_risk(&sample, &cfg.signal, &basis, cfg.j0, cfg.gamma, cfg.variant)
        })
        .collect::<Result<_>>()?;
    let r = cfg.reps as f64;
    let mean = pairs.iter().map(|p| p.0).sum::<f64>() / r;
    let var = if cfg.reps > 1 {
        pairs.iter().map(|p| (p.0 - mean).powi(2)).sum::<f64>() / (r - 1.0)
    } else {
        0.0
    };
    let oracle = pairs.iter().map(|p| p.1).sum::<f64>() / r;
    let n = cfg.n as f64;
    Ok(BoundCheck {
        reps: cfg.reps,
        mean_risk: mean,
        std_error: (var / r).sqrt(),
        mean_oracle: oracle,
        bound: 12.0 * n.ln() * (oracle + 1.0 / n),
    })
}

/// Mean coefficient risk at each `γ` (Simulation variant), read off the
/// exact per-replication curves.
pub fn mean_coeff_risk(cfg: &CalibrateConfig, gammas: &[f64]) -> Result<Vec<f64>> {
    check_reps(cfg.reps)?;
    let basis = BasisSpec::new(cfg.basis);
    let per_rep: Vec<Vec<f64>> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = replicate_sample(&cfg.signal, cfg.n, cfg.seed, rep)?;
            gammas
                .iter()
                .map(|&g| {
                    replicate_coeff_risk(&sample, &cfg.signal, &basis, cfg.j0, g, Variant::Simulation)
                        .map(|p| p.0)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let r = cfg.reps as f64;
    Ok((0..gammas.len())
        .map(|i| per_rep.iter().map(|v| v[i]).sum::<f64>() / r)
        .collect())
}

/// CSV of the points of each replication: `rep,x`.
pub fn samples_csv(signal: &SignalSpec, n: u64, seed: u64, reps: u64, config: &str) -> Result<String> {
    check_reps(reps)?;
    let mut out = String::from(config);
    out.push_str("rep,x\n");
    for rep in 0..reps {
        let s = replicate_sample(signal, n, seed, rep)?;
        for x in s.points() {
            let _ = writeln!(out, "{rep},{x}");
        }
    }
    Ok(out)
}
