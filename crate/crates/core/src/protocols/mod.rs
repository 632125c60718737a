//! Protocol metrics on two-mode Gaussian resources: teleportation fidelity,
//! dense-coding mutual information, the asymmetry-compensating LOCC step,
//! and Monte-Carlo validators for the closed forms.

mod dense_coding;
mod locc;
mod monte_carlo;
mod teleport;

pub use dense_coding::{
    dense_coding_mutual_information, mutual_information_closed_form, optimized_mutual_information,
    DenseCodingResult,
};
pub use locc::{
    asymmetry_epsilon, build_locc_compensation, decompose_locc, optimized_fidelity,
    reconstruct_locc, symmetric_reference_resource, LoccChannel, LoccSide,
};
pub use monte_carlo::{
    monte_carlo_dense_coding, monte_carlo_teleportation, MonteCarloEstimate,
};
pub use teleport::{
    optimal_fidelity_lower_bound, teleportation_fidelity, teleportation_fidelity_closed_form,
    TeleportationResult,
};
