//! Spontaneous decay of a two-level emitter whose transition frequency is
//! periodically modulated.
//!
//! The modulation splits the emission into Bessel-weighted sidebands. In a
//! broadband cavity ([`cavity`]) the sidebands interfere, giving a
//! time-dependent decay rate `gamma(t)`, a frequency shift `Omega(t)` and the
//! population law `<S_z(t)> = exp(-2 Gamma(t)) - 1/2`. The free-space variant
//! ([`freespace`]) derives the modulation from a weak low-frequency drive.
//!
//! Rates are in units of the cavity leak rate `kappa` (cavity) or of the
//! free-space decay constant (free space).

pub mod bessel;
pub mod cavity;
pub mod cli;
pub mod error;
pub mod figures;
pub mod freespace;
pub mod oracle;
pub mod output;
pub mod report;
pub mod scan;

pub use cavity::{CavityParams, CavitySeries, Truncation, TruncationChoice};
pub use error::{Error, Result};
pub use freespace::{FreeSpaceParams, FreeSpaceSeries};
pub use scan::{RateTrace, SweepResult};
