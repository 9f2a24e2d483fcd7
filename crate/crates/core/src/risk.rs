//! Oracle risk, thresholding risk and the exact risk-ratio curve in `γ`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::estimator::{estimation_window, gamma_breakpoint};
use crate::grid::UniformGrid;
use crate::interval::Interval;
use crate::pointprocess::PointSample;
use crate::signals::SignalSpec;
use crate::wavelets::{ActiveSet, BasisKind, BasisSpec, CoeffSet, CoefficientTable, LambdaIndex};

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = Accumulator::default();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Piecewise-constant function of `γ ≥ 0`: `values[0]` on `[0, γ₁)`,
/// `values[i]` on `[γ_i, γ_{i+1})`, `values[m]` on `[γ_m, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCurve {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepCurve {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::invalid(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if breakpoints.first().is_some_and(|&b| !(b > 0.0))
            || breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::invalid("breakpoints must be positive, finite and strictly increasing"));
        }
        Ok(StepCurve { breakpoints, values })
    }

    pub fn constant(value: f64) -> Self {
        StepCurve {
            breakpoints: Vec::new(),
            values: vec![value],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Left endpoint of piece `i`.
    pub fn piece_start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.breakpoints[i - 1]
        }
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        self.values[self.breakpoints.partition_point(|&b| b <= gamma)]
    }

    /// Value as `γ → ∞`.
    pub fn limit(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `(min, max)` over the pieces meeting `[a, b]`.
    pub fn range_over(&self, a: f64, b: f64) -> (f64, f64) {
        let first = self.breakpoints.partition_point(|&g| g <= a);
        let last = self.breakpoints.partition_point(|&g| g <= b);
        self.values[first..=last]
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// CSV rows `gamma_from,value`, first row at `0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma_from,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.piece_start(i), v);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut starts = Vec::new();
        let mut values = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("gamma_from") {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected gamma_from,value", no + 1));
            let (g, v) = line.split_once(',').ok_or_else(bad)?;
            starts.push(g.trim().parse::<f64>().map_err(|_| bad())?);
            values.push(v.trim().parse::<f64>().map_err(|_| bad())?);
        }
        if starts.first() != Some(&0.0) {
            return Err(Error::Parse("first row must start at gamma 0".into()));
        }
        StepCurve::new(starts[1..].to_vec(), values)
    }
}

/// `Σ min(β_λ², V_λ)` over the union of both key sets.
pub fn oracle_risk(true_coeffs: &CoeffSet, variances: &CoeffSet) -> f64 {
    let mut keys: Vec<LambdaIndex> = true_coeffs.keys().chain(variances.keys()).collect();
    keys.sort_unstable();
    keys.dedup();
    compensated_sum(keys.into_iter().map(|l| {
        let b = true_coeffs.get(l);
        (b * b).min(variances.get(l))
    }))
}

/// `Σ (β̃_λ − β_λ)²` over the union of both key sets.
pub fn coeff_risk(kept: &CoeffSet, true_coeffs: &CoeffSet) -> f64 {
    let mut keys: Vec<LambdaIndex> = kept.keys().chain(true_coeffs.keys()).collect();
    keys.sort_unstable();
    keys.dedup();
    compensated_sum(keys.into_iter().map(|l| (kept.get(l) - true_coeffs.get(l)).powi(2)))
}

/// Midpoint quadrature of `(f̃ − f)²` over the grid window.
pub fn l2_grid_risk(estimate: &[f64], signal: &SignalSpec, grid: &UniformGrid) -> Result<f64> {
    if estimate.len() != grid.len() {
        return Err(Error::invalid(format!(
            "{} estimate values for a grid of {}",
            estimate.len(),
            grid.len()
        )));
    }
    let h = grid.step();
    Ok(compensated_sum(
        estimate
            .iter()
            .zip(grid.points())
            .map(|(e, x)| (e - signal.pdf(x)).powi(2)),
    ) * h)
}

/// Summary of one estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub oracle: f64,
    pub coeff_risk: f64,
    pub l2_grid_risk: f64,
    pub kept_count: usize,
    /// `Σ β²` over levels above `j0`, when computed.
    pub tail_energy: f64,
}

/// Per-coefficient data the ratio curve is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveTerm {
    pub lambda: LambdaIndex,
    pub beta_hat: f64,
    pub vhat: f64,
    pub sup_norm: f64,
    pub beta: f64,
    pub variance: f64,
}

/// Pairs an empirical and a true table over the same active set.
pub fn curve_terms(empirical: &CoefficientTable, truth: &CoefficientTable) -> Result<Vec<CurveTerm>> {
    if empirical.len() != truth.len() {
        return Err(Error::invalid("empirical and true tables cover different index sets"));
    }
    empirical
        .iter()
        .zip(truth.iter())
        .map(|((l, bh, vh, s), (lt, b, v, _))| {
            if l != lt {
                return Err(Error::invalid("empirical and true tables are not aligned"));
            }
            Ok(CurveTerm {
                lambda: l,
                beta_hat: bh,
                vhat: vh,
                sup_norm: s,
                beta: b,
                variance: v,
            })
        })
        .collect()
}

/// Exact ratio `R_n(γ)` of thresholding loss to oracle risk.
///
/// Coefficient `λ` is kept for `γ ≤ γ*_λ`; the returned pieces take the
/// value just after each breakpoint, which differs from the closed rule
/// only at the breakpoints themselves.
pub fn risk_curve_from_terms(terms: &[CurveTerm], n: u64, window: Interval) -> Result<StepCurve> {
    let oracle = compensated_sum(terms.iter().map(|t| (t.beta * t.beta).min(t.variance)));
    if !(oracle > 0.0) {
        return Err(Error::ZeroOracleRisk {
            lo: window.lo,
            hi: window.hi,
        });
    }
    let mut items: Vec<(f64, f64, f64)> = Vec::with_capacity(terms.len());
    for t in terms {
        let g = gamma_breakpoint(t.beta_hat, t.vhat, n, t.sup_norm)?;
        items.push((g, t.beta * t.beta, (t.beta_hat - t.beta).powi(2)));
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Distinct positive breakpoints; `ends[i]` is one past the last item
    // with γ* ≤ breakpoint i. Items with γ* = 0 are killed from the start.
    let zero_end = items.partition_point(|it| it.0 <= 0.0);
    let mut breakpoints = Vec::new();
    let mut ends = vec![zero_end];
    let mut i = zero_end;
    while i < items.len() {
        let g = items[i].0;
        while i < items.len() && items[i].0 == g {
            i += 1;
        }
        breakpoints.push(g);
        ends.push(i);
    }

    // killed[m] = Σ_{first m items} β², kept[m] = Σ_{items m..} (β̂ − β)².
    let m = items.len();
    let mut killed = vec![0.0; m + 1];
    let mut acc = Accumulator::default();
    for (idx, it) in items.iter().enumerate() {
        acc.add(it.1);
        killed[idx + 1] = acc.value();
    }
    let mut kept = vec![0.0; m + 1];
    let mut acc = Accumulator::default();
    for idx in (0..m).rev() {
        acc.add(items[idx].2);
        kept[idx] = acc.value();
    }
    let values = ends.iter().map(|&e| (killed[e] + kept[e]) / oracle).collect();
    StepCurve::new(breakpoints, values)
}

/// Brute-force evaluation of the ratio at one `γ` through the threshold rule.
pub fn brute_force_ratio(terms: &[CurveTerm], n: u64, gamma: f64) -> Result<f64> {
    let oracle = compensated_sum(terms.iter().map(|t| (t.beta * t.beta).min(t.variance)));
    if !(oracle > 0.0) {
        return Err(Error::ZeroOracleRisk {
            lo: f64::NAN,
            hi: f64::NAN,
        });
    }
    let loss = compensated_sum(terms.iter().map(|t| {
        let eta = crate::estimator::threshold_value(
            t.vhat,
            gamma,
            n,
            t.sup_norm,
            crate::estimator::Variant::Simulation,
        );
        let kept = t.beta_hat != 0.0 && t.beta_hat.abs() >= eta;
        let est = if kept { t.beta_hat } else { 0.0 };
        (est - t.beta).powi(2)
    }));
    Ok(loss / oracle)
}

/// Exact `R_n(γ)` for one sample, over the estimation window of the signal.
pub fn risk_curve(
    sample: &PointSample,
    signal: &SignalSpec,
    basis: &BasisSpec,
    n: u64,
    j0: i32,
) -> Result<StepCurve> {
    if sample.n() != n {
        return Err(Error::invalid(format!("sample scale {} differs from n={n}", sample.n())));
    }
    let window = estimation_window(signal.support(), sample)?;
    let active = ActiveSet::new(basis, window, j0)?;
    let emp = CoefficientTable::empirical(basis, &active, sample);
    let truth = CoefficientTable::truth(basis, &active, signal, n);
    risk_curve_from_terms(&curve_terms(&emp, &truth)?, n, window)
}

/// Exact pointwise mean of step curves.
pub fn average_curves(curves: &[StepCurve]) -> Result<StepCurve> {
    if curves.is_empty() {
        return Err(Error::invalid("cannot average an empty list of curves"));
    }
    if curves.len() == 1 {
        return Ok(curves[0].clone());
    }
    let count = curves.len() as f64;
    // Each breakpoint of each curve contributes the jump of that curve; the
    // running total is kept in a compensated accumulator.
    let mut events: Vec<(f64, usize, f64)> = curves
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| {
            c.breakpoints
                .iter()
                .zip(c.values.windows(2))
                .map(move |(&g, w)| (g, ci, w[1] - w[0]))
        })
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut acc = Accumulator::default();
    for c in curves {
        acc.add(c.values[0]);
    }
    let mut acc_values = vec![acc.value() / count];
    let mut breakpoints = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let g = events[i].0;
        while i < events.len() && events[i].0 == g {
            acc.add(events[i].2);
            i += 1;
        }
        breakpoints.push(g);
        acc_values.push(acc.value() / count);
    }
    StepCurve::new(breakpoints, acc_values)
}

/// Left end of the first piece attaining the minimum among pieces starting
/// at or below `gamma_cap`.
pub fn gamma_min(curve: &StepCurve, gamma_cap: f64) -> Result<f64> {
    if !(gamma_cap > 0.0) {
        return Err(Error::invalid(format!("gamma cap must be positive, got {gamma_cap}")));
    }
    let last = curve.breakpoints.partition_point(|&g| g <= gamma_cap);
    let mut best = 0;
    for i in 1..=last {
        if curve.values[i] < curve.values[best] {
            best = i;
        }
    }
    Ok(curve.piece_start(best))
}

/// `F_λ`: mass of the signal over the support of the analysis atom.
pub fn f_lambda(signal: &SignalSpec, basis: &BasisSpec, lambda: LambdaIndex) -> f64 {
    let s = basis.analysis_atom(lambda).support();
    signal.mass(s.lo, s.hi)
}

/// Outcome of [`class_membership`].
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub reason: String,
}

/// Coefficients smaller than this are treated as zero by the class test.
pub const NONZERO_COEFF: f64 = 1e-12;

/// Tests the norm bounds and the lower bound
/// `F_λ ≥ (ln n)(ln ln n)/n` on every nonzero Haar coefficient with
/// `j ≤ probe_depth`.
pub fn class_membership(
    signal: &SignalSpec,
    basis: &BasisSpec,
    n: u64,
    r: f64,
    probe_depth: i32,
) -> Result<Membership> {
    if basis.kind() != BasisKind::Haar {
        return Err(Error::invalid("the class test is defined for the Haar basis"));
    }
    if n < 3 {
        return Err(Error::invalid("n must be at least 3 so that ln ln n > 0"));
    }
    let not = |reason: String| Ok(Membership { member: false, reason });
    if signal.l1_norm() > r {
        return not(format!("L1 norm {} exceeds R={r}", signal.l1_norm()));
    }
    if !(signal.sup_norm() <= r) {
        return not(format!("sup norm {} exceeds R={r}", signal.sup_norm()));
    }
    let l2 = signal.l2_norm_sq();
    if l2 > r {
        return not(format!("squared L2 norm {l2} exceeds R={r}"));
    }
    let nf = n as f64;
    let bound = nf.ln() * nf.ln().ln() / nf;
    let window = signal.tail_window(1e-12);
    let active = ActiveSet::new(basis, window, probe_depth + 1)?;
    let truth = CoefficientTable::truth(basis, &active, signal, n);
    let mut beyond = 0usize;
    for (l, beta, _, _) in truth.iter() {
        if beta.abs() <= NONZERO_COEFF {
            continue;
        }
        if l.j > probe_depth {
            beyond += 1;
            continue;
        }
        let f = f_lambda(signal, basis, l);
        if f < bound {
            return not(format!("F at {l} is {f:.3e} < {bound:.3e} with beta={beta:.3e}"));
        }
    }
    if beyond > 0 {
        return not(format!(
            "{beyond} nonzero coefficients at level {} beyond the probe depth",
            probe_depth + 1
        ));
    }
    Ok(Membership {
        member: true,
        reason: format!("all nonzero coefficients up to level {probe_depth} have F >= {bound:.3e}"),
    })
}
