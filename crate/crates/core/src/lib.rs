//! Channel model and rate analysis for optical inter-satellite links (OISL).
//!
//! The crate covers the full chain from transmitter optics to relay planning:
//!
//! - [`beam`]: Gaussian beam divergence, waist growth and transverse intensity.
//! - [`pointing`]: Rayleigh radial pointing error and the distance-dependent jitter scale.
//! - [`channel`]: the pointing-error channel state `h_PE`, its distribution, mean,
//!   detection threshold and maximum tolerable radial deviation.
//! - [`special`]: `2F1(1, b; b+1; -x)` and the auxiliary function used by the rate closed form.
//! - [`rate`]: average achievable rate of one hop, with quadrature and Monte Carlo oracles.
//! - [`constellation`]: hop geometry on a circular orbit, latency, relay count and
//!   laser-frequency planning.
//!
//! [`quadrature`] and [`montecarlo`] are the numerical plumbing shared by these modules.

pub mod beam;
pub mod channel;
pub mod constellation;
pub mod error;
pub mod montecarlo;
pub mod pointing;
pub mod quadrature;
pub mod rate;
pub mod special;

pub use beam::{BeamParams, WaistMode, SPEED_OF_LIGHT};
pub use channel::{ChannelGeometry, ChannelMoments, ChannelStats, DetectorSpec, RadialLimit};
pub use constellation::{ConstellationConfig, ConstellationPlan, FrequencyChoice, FrequencyRange};
pub use error::{OislError, Result};
pub use pointing::{PointingModel, SigmaMode};
pub use rate::{HopChannel, LinkBudget, LinkModel, MonteCarloRate, RateEstimate};
pub use special::Hyp2F1Request;
