//! Exact geometry kernel: exterior algebra over ℚ(√2)(i), the two octonion
//! algebras and their cross products, real Spin(8)/Spin(4,4) gamma matrices,
//! pure-spinor geometry, the Cayley-form families they generate, Urbantke
//! metrics from 2-form triples, and first-order deformation calculus.

pub mod clifford;
pub mod deform;
pub mod exterior;
pub mod families;
pub mod linalg;
pub mod octonion;
pub mod scalar;
pub mod spinor;
pub mod urbantke;

pub use scalar::{rat, rat_int, Rat, Scalar};
