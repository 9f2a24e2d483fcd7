mod common;

use intensity_core::estimator::{estimate, ThresholdParams};
use intensity_core::experiments::replicate_sample;
use intensity_core::risk::l2_grid_risk;
use intensity_core::wavelets::{ActiveSet, CoefficientTable};
use intensity_core::{BasisSpec, Interval, SignalKind, SignalSpec, UniformGrid, Variant};

#[test]
fn haar_parseval() {
    common::haar_parseval(200).unwrap();
}

#[test]
fn spline_vanishing_moments() {
    common::spline_vanishing_moments().unwrap();
}

#[test]
fn spline_biorthogonality() {
    common::spline_biorthogonality().unwrap();
}

#[test]
fn spline_frame_sandwich() {
    common::frame_sandwich().unwrap();
}

#[test]
fn empirical_coefficients_are_unbiased() {
    common::unbiasedness().unwrap();
}

#[test]
fn coefficient_deviation_tails() {
    common::coefficient_concentration().unwrap();
}

#[test]
fn breakpoint_substitution() {
    common::breakpoint_substitution(10_000).unwrap();
}

#[test]
fn anscombe_stabilizes_variance() {
    common::anscombe_variance().unwrap();
}

#[test]
fn truncated_haar_reconstruction_leaves_the_tail_energy() {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Haar2);
    let window = Interval::new(0.0, 1.0);
    let grid = UniformGrid::new(window, 1 << 14).unwrap();
    for j0 in [-1, 0, 1, 2, 4] {
        let active = ActiveSet::new(&basis, window, j0).unwrap();
        let (beta, _) = CoefficientTable::truth(&basis, &active, &signal, 1).to_coeff_sets();
        let est = basis.reconstruct(&beta, &grid);
        let risk = l2_grid_risk(&est, &signal, &grid).unwrap();
        let tail = signal.l2_norm_sq() - beta.l2_norm_sq();
        assert!((risk - tail).abs() < 1e-9, "j0={j0}: risk {risk} vs tail {tail}");
    }
}

#[test]
fn haar1_estimate_is_nearly_exact() {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Haar1);
    let sample = replicate_sample(&signal, 1024, 11, 0).unwrap();
    let params = ThresholdParams::new(1.0, 1024, 10, Variant::Simulation, Interval::new(0.0, 1.0)).unwrap();
    let kept = estimate(&sample, &basis, &params).unwrap();
    // Only the scaling coefficient survives; it equals the point count over n.
    assert_eq!(kept.len(), 1);
    let c = kept.iter().next().unwrap();
    assert!(c.0.is_scaling());
    assert!((c.1 - sample.len() as f64 / 1024.0).abs() < 1e-15);
}
