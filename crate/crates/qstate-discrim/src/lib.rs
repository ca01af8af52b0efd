//! Optimal guessing performance for qubit state ensembles under classical
//! side information.
//!
//! Two figures of merit are covered: minimum-error success probability
//! ([`minerror`]) and maximum confidence with conclusive rates
//! ([`maxconf`]). Each regime value produced by a closed form can be
//! cross-checked against the independent solvers in [`oracle`].
//!
//! The `parallel` feature (on by default) runs the grid searches and
//! multistarts on rayon; disabling it falls back to equivalent sequential
//! loops with identical results.

pub mod error;
pub mod maxconf;
pub mod minerror;
pub mod oracle;
pub(crate) mod par;

pub use error::{DiscrimError, Result};

/// When the classical side information arrives relative to the measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    /// No side information at all.
    Plain,
    /// Block revealed before the measurement.
    Pre,
    /// Block revealed after the measurement, unannounced.
    Post,
    /// Block revealed after the measurement, partition known in advance.
    Meta,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Plain, Regime::Pre, Regime::Post, Regime::Meta];

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Plain => "none",
            Regime::Pre => "pre",
            Regime::Post => "post",
            Regime::Meta => "meta",
        }
    }
}
