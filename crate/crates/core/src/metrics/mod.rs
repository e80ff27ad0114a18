//! Chart-local Kähler metrics, their curvature, and normal coordinates.

mod curvature;
mod models;
mod normal;

pub use curvature::{
    christoffels, contract_christoffel, curvature, curvature_from_jet, Christoffels, CurvatureData,
    CurvatureTensor,
};
pub use models::{ChartedKahlerMetric, MetricJet, MetricSpec, ModelKind};
pub use normal::NormalFrame;
