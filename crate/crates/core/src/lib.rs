//! Magnetic noise near microstructured atom chips: thermal and current
//! noise spectra, the atomic transition rates they drive, decoherence of
//! guided matter waves and a stochastic Gross–Pitaevskii simulator.

pub mod constants;
pub mod error;
pub mod gpe;
pub mod model;
pub mod numerics;
pub mod rates;
pub mod spectra;
pub mod transport;
pub mod units;

pub use error::{Error, Result};
pub use model::{AtomSpecies, HalfInt, Material, SideGuideConfig, WireGeometry, WireKind};
pub use gpe::{CondensateConfig, EnsembleResult};
pub use spectra::{CorrelationForm, CorrelationModel, ElectronVelocityDist, NoiseTensor, VelocityDistKind};
