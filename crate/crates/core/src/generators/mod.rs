//! Synthetic graph generators.

mod configuration;
mod lfr;
mod powerlaw;
mod price;
mod stubs;

pub use configuration::{generate_configuration, generate_lognormal};
pub use lfr::{generate_lfr, CommunityLabels, LfrParams};
pub use powerlaw::{sample_lognormal_degrees, sample_powerlaw_degrees, tune_k_min, TruncatedPowerLaw};
pub use price::generate_price;
