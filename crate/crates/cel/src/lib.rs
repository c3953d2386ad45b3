//! Two-mode squeezing and photon-pair dynamics of a coherently pumped
//! correlated-emission laser.
//!
//! The model is a two-mode cavity driven by three-level atoms whose upper
//! and lower levels are coherently coupled by a classical pump with phase
//! fluctuations.  After adiabatic elimination of the atoms, the field
//! obeys linear moment equations whose drift and diffusion follow from six
//! physical rates ([`params::SystemParams`]).  Everything observable here
//! — quadrature variances of the collective modes and the mean
//! photon-pair number — is a function of three second moments `u`, `v`,
//! `w` ([`closed_form::MomentState`]).
//!
//! Three engines compute those moments independently:
//!
//! - [`closed_form`]: the exact spectral solution, built from the
//!   eigenvalues of the 2x2 drift block ([`closed_form::decompose`]) and
//!   evaluated in complex arithmetic with a real, finite result
//!   guaranteed by explicit residual checks.
//! - [`moment_ode`]: fixed-step fourth-order integration of the same
//!   moment equations — shares the drift algebra but none of the spectral
//!   solution.
//! - [`fock_oracle`]: master-equation evolution on a truncated Fock
//!   lattice — shares nothing but the physical rates, and therefore
//!   serves as the independent oracle for both.
//!
//! [`sweep_io`] adds named figure presets, parallel parameter sweeps, and
//! a fixed CSV/JSON record schema; [`cli`] exposes all of it as the `cel`
//! binary (`evaluate`, `figure`, `sweep`, `verify`).
//!
//! ```
//! use cel::closed_form::Solution;
//! use cel::params::SystemParams;
//!
//! // Default point: gain 10, cavity decay 0.5, weak drive 0.5.
//! let sol = Solution::new(SystemParams::default())?;
//! let m = sol.moments(0.5)?;
//! assert!(m.dc_minus_sq() < 1.0); // transient two-mode squeezing
//! assert!(m.uncertainty_product() >= 1.0);
//! # cel::Result::Ok(())
//! ```
//!
//! The runnable examples cover one capability each: start with
//! `squeezing_evolution`, then `moment_ode_crosscheck` and
//! `fock_crosscheck` for the oracle comparisons, and `figure_presets` for
//! the sweep machinery.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod fock_oracle;
pub mod moment_ode;
pub mod params;
pub mod sweep_io;

pub use error::{Error, Result};
