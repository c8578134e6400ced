//! Asymptotically hyperbolic extensions of Bartnik data.
//!
//! The crate builds rotationally symmetric or collar-type Riemannian
//! 3-metrics that extend a prescribed boundary surface `(Σ, g, H)` with
//! scalar curvature `R ≥ -6`, glues them to an AdS-Schwarzschild end and
//! certifies the result on the sampling grids.
//!
//! Every routine is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix `f64`.

pub mod ads;
pub mod error;
pub mod extensions;
pub mod fd;
pub mod geometry;
pub mod gluing;
pub mod linalg;
pub mod ode;
pub mod path;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Real;

/// `f64` instances of the generic types.
pub type ProfileCurve = geometry::ProfileCurve<f64>;
pub type AxisymmetricSurfaceMetric = geometry::AxisymmetricSurfaceMetric<f64>;
pub type BartnikData = geometry::BartnikData<f64>;
pub type CollarMetric = geometry::CollarMetric<f64>;
pub type MetricPath = path::MetricPath<f64>;
pub type EigenPath = path::EigenPath<f64>;
pub type AdSSchwParams = ads::AdSSchwParams<f64>;
pub type StaticProfile = ads::StaticProfile<f64>;
pub type LegendreGrid = spectral::LegendreGrid<f64>;
pub type GluingProblem = gluing::GluingProblem<f64>;
pub type MinimalCollar = extensions::MinimalCollar<f64>;
pub type CmcCollar = extensions::CmcCollar<f64>;
pub type Extension = extensions::Extension<f64>;
pub type ExtensionOptions = extensions::ExtensionOptions<f64>;

pub use extensions::ExtensionVariant;
pub use report::ExtensionReport;
