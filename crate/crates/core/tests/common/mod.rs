//! Statistical and structural checks shared by the property tests and the
//! acceptance run. Each returns `Err` with a description on failure.

#![allow(dead_code)]

use intensity_core::estimator::{gamma_breakpoint, threshold_value, v_tilde, Variant};
use intensity_core::pointprocess::{integrate_against, poisson_count};
use intensity_core::rng::{stream, Purpose};
use intensity_core::wavelets::{ActiveSet, CoefficientTable};
use intensity_core::{BasisSpec, CoeffSet, Interval, LambdaIndex, SignalKind, SignalSpec, UniformGrid};
use rand::Rng;

pub type Check = Result<String, String>;

pub struct Moments {
    pub mean: f64,
    pub var: f64,
    pub m4: f64,
    pub count: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let r = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / r;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / r;
    Moments { mean, var, m4, count: r }
}

impl Moments {
    pub fn se_mean(&self) -> f64 {
        (self.var / self.count).sqrt()
    }

    pub fn se_var(&self) -> f64 {
        ((self.m4 - self.var * self.var).max(0.0) / self.count).sqrt()
    }
}

fn within(label: &str, value: f64, target: f64, se: f64) -> Check {
    if (value - target).abs() <= 4.0 * se {
        Ok(format!("{label}: {value:.5} vs {target:.5} (4se={:.5})", 4.0 * se))
    } else {
        Err(format!("{label}: {value:.5} vs {target:.5} exceeds 4se={:.5}", 4.0 * se))
    }
}

fn tail_ok(label: &str, freq: f64, bound: f64, reps: f64) -> Check {
    let se = (bound.min(1.0) * (1.0 - bound.min(1.0)) / reps).sqrt();
    if freq <= bound + 4.0 * se {
        Ok(format!("{label}: {freq:.5} <= {bound:.5} + 4se"))
    } else {
        Err(format!("{label}: {freq:.5} > {bound:.5} + 4se ({:.5})", 4.0 * se))
    }
}

const CAMPBELL_REPS: u64 = 10_000;

/// `∫ψ_{3,2} dN` for Haar1 at `n = 256`, per replication.
fn campbell_draws(seed: u64) -> (Vec<f64>, f64, f64, f64) {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Haar1);
    let g = basis.analysis_atom(LambdaIndex::new(3, 2));
    let n = 256u64;
    let draws = (0..CAMPBELL_REPS)
        .map(|r| {
            let s = signal.sample_points(n, &mut stream(seed, r, Purpose::Fixture)).unwrap();
            integrate_against(&g, &s)
        })
        .collect();
    let mean = n as f64 * g.integrate_signal(&signal);
    let var = n as f64 * g.integrate_sq_signal(&signal);
    (draws, mean, var, g.sup_norm())
}

pub fn campbell_mean_variance() -> Check {
    let (draws, mean, var, _) = campbell_draws(101);
    let m = moments(&draws);
    let a = within("mean", m.mean, mean, m.se_mean())?;
    let b = within("variance", m.var, var, m.se_var())?;
    Ok(format!("{a}; {b}"))
}

pub fn exponential_inequality() -> Check {
    let (draws, mean, var, sup) = campbell_draws(102);
    let mut out = Vec::new();
    for u in [1.0f64, 2.0, 3.0] {
        let level = (2.0 * u * var).sqrt() + sup * u / 3.0;
        let freq = draws.iter().filter(|&&x| x - mean >= level).count() as f64 / draws.len() as f64;
        out.push(tail_ok(&format!("u={u}"), freq, (-u).exp(), draws.len() as f64)?);
    }
    Ok(out.join("; "))
}

/// Deviation and variance-overestimate tails of one coefficient.
pub fn coefficient_concentration() -> Check {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Haar1);
    let lambda = LambdaIndex::new(3, 2);
    let n = 256u64;
    let beta = basis.true_coeff(lambda, &signal);
    let v = basis.true_variance(lambda, &signal, n);
    let sup = basis.atom_sup_norm(lambda);
    let reps = CAMPBELL_REPS;
    let pairs: Vec<(f64, f64)> = (0..reps)
        .map(|r| {
            let s = signal.sample_points(n, &mut stream(103, r, Purpose::Fixture)).unwrap();
            (basis.empirical_coeff(lambda, &s), basis.empirical_variance(lambda, &s))
        })
        .collect();
    let mut out = Vec::new();
    for u in [1.0f64, 2.0, 3.0] {
        let level = (2.0 * u * v).sqrt() + sup * u / (3.0 * n as f64);
        let freq = pairs.iter().filter(|p| (p.0 - beta).abs() >= level).count() as f64 / reps as f64;
        out.push(tail_ok(&format!("deviation u={u}"), freq, 2.0 * (-u).exp(), reps as f64)?);
    }
    for gamma in [0.5f64, 1.0] {
        let freq = pairs
            .iter()
            .filter(|p| v > v_tilde(p.1, gamma, n, sup))
            .count() as f64
            / reps as f64;
        out.push(tail_ok(
            &format!("variance gamma={gamma}"),
            freq,
            (n as f64).powf(-gamma),
            reps as f64,
        )?);
    }
    Ok(out.join("; "))
}

pub fn haar_parseval(trials: u64) -> Check {
    let basis = BasisSpec::haar();
    let grid = UniformGrid::new(Interval::new(-1.0, 3.0), 1 << 14).unwrap();
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = stream(104, t, Purpose::Fixture);
        let size = rng.random_range(1..40);
        let coeffs: CoeffSet = (0..size)
            .map(|_| {
                let j = rng.random_range(-1..=7);
                let k = if j < 0 { rng.random_range(-1..=2) } else { rng.random_range(-(1i64 << j)..(2i64 << j)) };
                (LambdaIndex::new(j, k), rng.random_range(-2.0..2.0))
            })
            .collect();
        let f = basis.reconstruct(&coeffs, &grid);
        let q: f64 = f.iter().map(|v| v * v).sum::<f64>() * grid.step();
        worst = worst.max((q - coeffs.l2_norm_sq()).abs());
    }
    if worst <= 1e-6 {
        Ok(format!("max |quadrature - l2| = {worst:.2e}"))
    } else {
        Err(format!("max |quadrature - l2| = {worst:.2e} > 1e-6"))
    }
}

pub fn spline_vanishing_moments() -> Check {
    let basis = BasisSpec::spline15();
    let worst = (0..=4).map(|p| basis.psi().moment(p).abs()).fold(0.0, f64::max);
    if worst < 1e-12 {
        Ok(format!("max |moment 0..4| = {worst:.2e}"))
    } else {
        Err(format!("max |moment 0..4| = {worst:.2e}"))
    }
}

pub fn spline_biorthogonality() -> Check {
    let basis = BasisSpec::spline15();
    let analysis: Vec<LambdaIndex> = (-3..=3)
        .map(LambdaIndex::scaling)
        .chain((-4..=4).map(|k| LambdaIndex::new(0, k)))
        .chain((-4..=6).map(|k| LambdaIndex::new(1, k)))
        .chain((-2..=8).map(|k| LambdaIndex::new(2, k)))
        .collect();
    let mut worst: f64 = 0.0;
    for &a in &analysis {
        let atom = basis.analysis_atom(a);
        for &b in &analysis {
            let ip = basis.integrate_with_synthesis(&atom, b);
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((ip - want).abs());
        }
    }
    if worst <= 1e-5 {
        Ok(format!("max deviation over {} pairs = {worst:.2e}", analysis.len().pow(2)))
    } else {
        Err(format!("max deviation = {worst:.2e} > 1e-5"))
    }
}

pub fn anscombe_variance() -> Check {
    let mut out = Vec::new();
    for (i, m) in [5.0f64, 10.0, 50.0].into_iter().enumerate() {
        let mut rng = stream(105, i as u64, Purpose::Fixture);
        let ys: Vec<f64> = (0..100_000)
            .map(|_| 2.0 * (poisson_count(m, &mut rng).unwrap() as f64 + 0.375).sqrt())
            .collect();
        let v = moments(&ys).var;
        if !(0.9..=1.1).contains(&v) {
            return Err(format!("mean {m}: variance {v:.4} outside [0.9, 1.1]"));
        }
        out.push(format!("m={m}: {v:.4}"));
    }
    Ok(out.join("; "))
}

pub fn breakpoint_substitution(trials: u64) -> Check {
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = stream(106, t, Purpose::Fixture);
        let n: u64 = rng.random_range(2..100_000);
        let beta: f64 = rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-6..1));
        let vhat: f64 = if rng.random_bool(0.1) { 0.0 } else { 10f64.powf(rng.random_range(-12.0..0.0)) };
        let sup: f64 = 10f64.powf(rng.random_range(-1.0..3.0));
        let g = gamma_breakpoint(beta, vhat, n, sup).unwrap();
        if beta == 0.0 {
            continue;
        }
        let eta = threshold_value(vhat, g, n, sup, Variant::Simulation);
        worst = worst.max((eta - beta.abs()).abs() / beta.abs());
    }
    if worst <= 1e-12 {
        Ok(format!("max relative |eta(g*) - |b|| = {worst:.2e}"))
    } else {
        Err(format!("max relative |eta(g*) - |b|| = {worst:.2e} > 1e-12"))
    }
}

pub fn unbiasedness() -> Check {
    let signal = SignalSpec::new(SignalKind::Blocks);
    let n = 64u64;
    let reps = 10_000u64;
    let mut out = Vec::new();
    for basis in [BasisSpec::haar(), BasisSpec::spline15()] {
        let active = ActiveSet::new(&basis, Interval::new(0.0, 1.0), 3).unwrap();
        let truth = CoefficientTable::truth(&basis, &active, &signal, n);
        let probes: Vec<usize> = (0..truth.len()).step_by(7).collect();
        let mut draws = vec![Vec::with_capacity(reps as usize); probes.len()];
        for r in 0..reps {
            let s = signal.sample_points(n, &mut stream(107, r, Purpose::Fixture)).unwrap();
            let emp: Vec<f64> = CoefficientTable::empirical(&basis, &active, &s).iter().map(|t| t.1).collect();
            for (d, &p) in draws.iter_mut().zip(&probes) {
                d.push(emp[p]);
            }
        }
        let betas: Vec<(LambdaIndex, f64)> = truth.iter().map(|t| (t.0, t.1)).collect();
        for (d, &p) in draws.iter().zip(&probes) {
            let m = moments(d);
            within(&format!("{:?} {}", basis.kind(), betas[p].0), m.mean, betas[p].1, m.se_mean())?;
        }
        out.push(format!("{:?}: {} coefficients", basis.kind(), probes.len()));
    }
    Ok(out.join("; "))
}

/// Random coefficient vectors on the probe set satisfy the frame bounds.
pub fn frame_sandwich() -> Check {
    let basis = BasisSpec::spline15();
    let (c1, c2) = basis.frame_bounds();
    let probes = basis.frame_probe_indices();
    let lo = probes.iter().map(|&l| basis.synthesis_support(l).lo).fold(f64::INFINITY, f64::min);
    let hi = probes.iter().map(|&l| basis.synthesis_support(l).hi).fold(f64::NEG_INFINITY, f64::max);
    let grid = UniformGrid::new(Interval::new(lo, hi), 1 << 16).unwrap();
    for t in 0..100 {
        let mut rng = stream(6, t, Purpose::Fixture);
        let c: CoeffSet = probes
            .iter()
            .filter_map(|&l| {
                let keep = rng.random_bool(0.5);
                let v = rng.random_range(-1.0..1.0);
                keep.then_some((l, v))
            })
            .collect();
        let f = basis.reconstruct(&c, &grid);
        let q: f64 = f.iter().map(|v| v * v).sum::<f64>() * grid.step();
        let e = c.l2_norm_sq();
        if q < c1 * e * (1.0 - 1e-3) || q > c2 * e * (1.0 + 1e-3) {
            return Err(format!("trial {t}: {q} outside [{}, {}]", c1 * e, c2 * e));
        }
    }
    Ok(format!("c1={c1:.4} c2={c2:.4}"))
}
