//! Numerical quantum information: density matrices, von Neumann entropy,
//! Holevo χ, channels in Kraus and Stinespring form, POVMs and accessible
//! information, plus numerical versions of the no-cloning and
//! no-disentangling arguments.
//!
//! Matrices are dense and row-major. In every Kronecker product the leftmost
//! factor is subsystem 0. Entropies are in bits.
//!
//! ```
//! use holevo::entropy::holevo_chi;
//! use holevo::states::{DensityMatrix, Ensemble, PureState};
//!
//! let e = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()]).unwrap();
//! let chi = holevo_chi(&e).unwrap().chi;
//! assert!((chi - 0.600876).abs() < 1e-6);
//! ```

pub mod channels;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod measurements;
pub mod no_go;
pub mod random;
pub mod states;

pub use error::{Error, Result};
pub use matrix::{Complex64, ComplexMatrix};
pub use random::Rng;
pub use states::{DensityMatrix, Ensemble, PureState};
