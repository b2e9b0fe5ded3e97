//! Numerical laboratory for the fluctuations of the imaginary parts of the
//! nontrivial zeros of the Riemann zeta function.
//!
//! Numeric code is generic over [`Real`]; the zero engine and the samplers
//! built on it work in `f64`. The aliases below fix the scalar to `f64`.

pub mod error;
pub mod expsum;
pub mod gaussian;
pub mod predictor;
pub mod report;
pub mod s_functions;
pub mod sampler;
pub mod scalar;
pub mod stats;
pub mod zeros;

pub use error::{Error, Result};
pub use scalar::{CompensatedSum, Real};
pub use zeros::{ZeroCache, ZeroSource, ZeroTable};

pub type PredictedGrid = predictor::PredictedGrid<f64>;
pub type PredictedPoint = predictor::PredictedPoint<f64>;
pub type GFunction = predictor::GFunction<f64>;
pub type SecondDerivative = predictor::SecondDerivative<f64>;
pub type DirichletParams = s_functions::DirichletParams<f64>;
pub type DirichletPolynomial = s_functions::DirichletPolynomial<f64>;
pub type PhaseGrid = expsum::PhaseGrid<f64>;
