//! Poisson intensity estimation by data-driven wavelet thresholding.

pub mod baselines;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod grid;
pub mod interval;
pub mod piecewise;
pub mod pointprocess;
pub mod quadrature;
pub mod risk;
pub mod rng;
pub mod signals;
pub mod wavelets;

pub use error::{Error, Result};
pub use estimator::{ThresholdParams, Variant};
pub use grid::UniformGrid;
pub use interval::Interval;
pub use piecewise::PiecewiseConstant;
pub use pointprocess::PointSample;
pub use risk::{RiskReport, StepCurve};
pub use signals::{SignalKind, SignalSpec};
pub use wavelets::{BasisKind, BasisSpec, CoeffSet, LambdaIndex};
