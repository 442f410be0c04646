//! The coupling of BS(p,q) with the rank-one group L ⋊ Aut(T): β, l_θ, the
//! action on the fundamental domain [0,1)×K, rotation and mixing
//! diagnostics, and component counts of subgroup actions.

mod coupling;
mod mixing;
mod periodic;
mod real;
mod rotation;

use thiserror::Error;

pub use coupling::{
    beta_cocycle, beta_step, circle_coordinate, coupling_action, in_n, l_theta, n_elements, CouplingPoint, LTheta,
    ThetaValue,
};
pub use mixing::{cesaro_mixing_test, BernoulliShift, CesaroReport, CesaroSets, Cylinder, Window};
pub use periodic::{component_counts, equivariant_labeling, odometer, periodicity_check, ComponentTable};
pub use real::{Surd, MAX_PRECISION_BITS};
pub use rotation::{rotation_model_orbit, star_discrepancy, OrbitStats};

use crate::profinite::ProfiniteError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error(transparent)]
    Profinite(#[from] ProfiniteError),
    #[error("+{c} on Z/{n} is not ergodic")]
    NotErgodic { c: u64, n: u64 },
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("cannot read theta from {0:?}")]
    InvalidTheta(String),
}
