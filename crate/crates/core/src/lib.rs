//! Colored Jones polynomials of plat-closed colored braids through Kaul's
//! unitary representation, with a classical simulation of the quantum
//! sampling algorithm, the Reshetikhin–Turaev surgery invariant and
//! independent oracles.

pub mod blocks;
pub mod braid;
pub mod error;
pub mod invariant;
pub mod kaulrep;
pub mod library;
pub mod oracle;
pub mod qalgebra;
pub mod qcircuit;

pub use blocks::{enumerate_basis, vacuum_label, BlockBasis, BlockLabel};
pub use braid::{parse_word, ColoredBraidWord, Letter, LinkComponents, LinkingData};
pub use error::{Error, Result};
pub use invariant::{colored_jones, plat_expectation, rt_invariant, InvariantResult, RtLevel, RtResult};
pub use kaulrep::{KaulRep, UnitaryOp};
pub use library::{library, Library, LibraryEntry};
pub use qalgebra::{Root, Spin};
pub use qcircuit::{compile_word, hadamard_test, required_samples, Component, GateList, QubitRegister, SamplePlan};
