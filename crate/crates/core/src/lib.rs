//! Frequency-space analysis of two-layer quadratic networks trained on
//! multiplication in a finite Abelian group.
//!
//! Weights live in a commutative semi-ring ([`WeightZ`]) whose addition
//! concatenates hidden nodes and whose multiplication takes per-frequency
//! Kronecker products. The projected L2 loss depends on the weights only
//! through sum potentials, each of which is a ring homomorphism, so global
//! optima can be assembled from small partial solutions and trained networks
//! can be factored back into them.

pub mod analyzer;
pub mod constructors;
pub mod error;
pub mod group;
pub mod io;
pub mod loss;
pub mod numeric;
pub mod potentials;
pub mod trainer;
pub mod weight;

pub use error::{CogsError, Result};
pub use group::GroupSpec;
pub use loss::{analytic_loss, forward_loss, forward_output, global_check, GlobalReport, LossBreakdown};
pub use potentials::{classify_01, sp_value, table1_row, Family, SumPotentialIndex};
pub use trainer::{train, TrainConfig, TrainOutput, Trainer};
pub use weight::{RealNet, Role, WeightZ, ROLES};
