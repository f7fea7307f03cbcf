//! Modified generalized Wigner-Yanase-Dyson skew information for quantum
//! states under Kraus channels.

pub mod channels;
pub mod closed_form;
pub mod descriptors;
pub mod eigen;
pub mod error;
pub mod interferometer;
pub mod matrix;
pub mod mz_scan;
pub mod random;
pub mod skew;
pub mod states;
pub mod sweep;
pub mod verify;

pub use channels::KrausChannel;
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use skew::{measure, MeasureReport, SkewParams};
pub use states::{BlochVector, DensityMatrix};
