//! Finite-dimensional non-commutative `L^p` spaces and the implementability
//! of evolution operators.
//!
//! * [`linalg`]: Hermitian eigendecomposition, fractional powers, polar
//!   factorization and the positive semidefinite order.
//! * [`lp`]: Schatten and state-weighted norms, the `τ_p` conjugation and
//!   the integrability constant of positive maps.
//! * [`superop`]: maps on matrix algebras, Jordan morphisms, isometry tests
//!   and the `T = W λ J` factorization of onto isometries.
//! * [`classical`]: Koopman and Frobenius–Perron operators of finite point
//!   maps and the classical weighted-permutation structure of isometries.
//! * [`mpc`]: a truncated Bernoulli shift in the Walsh basis with its time
//!   operator, the intertwiner `Λ = f(T) + E_{-∞}` and the Markov
//!   semigroup `W_t`.

pub mod acceptance;
pub mod check;
pub mod classical;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mpc;
pub mod random;
pub mod superop;

pub use check::CheckConfig;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Tolerance};
pub use lp::{PExponent, QuantumMeasure};
pub use superop::SuperOperator;
