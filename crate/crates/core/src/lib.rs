//! k-contraction analysis for Lurie and networked nonlinear systems.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below fix it to `f64`, which is what
//! the certification tolerances and the command-line tool assume.

// `!(a < b)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod compound;
pub mod config;
pub mod error;
pub mod indexsets;
pub mod linalg;
pub mod matrix;
pub mod measures;
pub mod scalar;
pub mod simulate;
pub mod systems;

pub use certify::{
    check_ari_k1, check_network_k_contraction, check_scalar_remark, check_theorem1, find_scalar_gamma_p, Certificate,
    CertifyOptions, GainMode, Tolerances,
};
pub use compound::{additive_compound, finite_diff_additive, multiplicative_compound, volume_parallelotope, CompoundMatrix};
pub use config::{hopfield_config, CertificationOutcome, SystemConfig};
pub use error::{Error, Result};
pub use indexsets::{binomial, enumerate_qkn, rank, unrank, IndexTuple, LexIndex};
pub use matrix::Matrix;
pub use measures::{mu2, mu2_scaled, symmetric_sqrt, ScalingQ};
pub use scalar::Real;
pub use simulate::{
    classify_convergence, estimate_decay_rate, hopfield_symmetric_equilibria, integrate, integrate_with_variational,
    EquilibriumSet, IntegrationOptions, Trajectory,
};
pub use systems::{Dynamics, LurieSystem, NetworkSystem, Nonlinearity, System};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type CompoundMatrix64 = CompoundMatrix<f64>;
pub type LurieSystem64 = LurieSystem<f64>;
pub type NetworkSystem64 = NetworkSystem<f64>;
pub type Nonlinearity64 = Nonlinearity<f64>;
pub type Certificate64 = Certificate<f64>;
pub type Trajectory64 = Trajectory<f64>;
