//! Dense complex linear algebra for qubit and qubit-pair systems.
//!
//! Conventions: `|x⟩ = |↑⟩ = (1, 0)`, `|y⟩ = |↓⟩ = (0, 1)`, and a composite
//! basis index is `i_A · d_B + i_B`.

mod matrix;
mod observable;
mod setting;
mod state;

pub use matrix::{matrices_close, CplxMatrix};
pub use observable::{
    expectation, joint_expectation, observable_for, photon_ket, photon_observable, spin_ket,
    spin_observable, Observable,
};
pub use setting::{normalize_angle, MeasurementSetting};
pub use state::{density_from_pure, partial_trace, purity, DensityOperator, Ket, Subsystem};

/// Kronecker product `m1 ⊗ m2`.
pub fn kron(m1: &CplxMatrix, m2: &CplxMatrix) -> CplxMatrix {
    m1.kron(m2)
}
