//! Multi-qubit density operators in the correlated Pauli algebra.
//!
//! A density operator on `N` qubits is stored as a [`Multivector`]: a map from
//! Pauli strings (one of `I`, `x`, `y`, `z` per qubit) to complex coefficients,
//! where the imaginary unit plays the role of the shared pseudoscalar `ι`.
//! On top of the algebra the crate provides state constructors (product
//! states, projector spheres, Bell/GHZ/W states), rotor dynamics, CHSH
//! optimisation, local-unitary invariants of two and three qubits, and a
//! solver that rebuilds a three-qubit pure state from its five invariants.
//!
//! The [`oracle`] module is an independent dense-matrix implementation used
//! to check everything else.

pub mod algebra;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod invariants;
pub mod oracle;
pub mod region;
pub mod sampling;
pub mod solver;
pub mod states;
pub mod vec3;

pub use algebra::{single_letter_product, Complex64, Letter, Multivector, PauliString};
pub use error::{Error, Result};
pub use states::{DensityOperator, Frame, ProductState, ProjectorSphere, Rotor};
