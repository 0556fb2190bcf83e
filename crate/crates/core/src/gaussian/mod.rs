//! Stability, steady-state covariance and entanglement measures.

mod covariance;
mod entanglement;
mod stability;
#[cfg(test)]
pub(crate) mod test_states;

pub use covariance::{
    partial_transpose, reduced_covariance, steady_state, steady_state_covariance,
    symplectic_eigenvalues, CovarianceMatrix, SteadyState, PHYSICALITY_TOL, RESIDUAL_TOL,
};
pub use entanglement::{
    analyze, entanglement_report, log_negativity, pairwise_report, quadripartite_witness,
    BipartitionValue, EntanglementReport, QuadWitness, OPTOMAGNONIC, OPTOMICROWAVE,
};
pub use stability::{check_stability, Stability};
