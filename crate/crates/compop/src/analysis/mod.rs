//! Fits, decay-rate estimates and bound checks on computed spectra.

pub mod calculus;
pub mod fit;
pub mod laws;

pub use calculus::{improvement_bound, BoundCalculus, CalculusReport, Majorant};
pub use fit::{fit_decay, fit_points, fit_window, DecayFit, DecayModel};
pub use laws::{
    beta_estimate, fit_constant, lower_law_probe, power_decay_exponent, s_of_r, sandwich_check,
    BetaEstimate, ConstantFit, ProbeReport, SandwichReport, SANDWICH_TOL,
};
