//! Exact arithmetic: prime fields with NTT convolution, and multi-prime
//! bases whose CRT lifts residues to big integers.

pub mod basis;
pub mod field;
pub mod ntt;
pub mod rational;

pub use basis::{select_prime_basis, PrimeBasis, PRIME_TABLE};
pub use field::PrimeField;
pub use ntt::ntt_convolve;
pub use rational::{to_decimal, to_f64, BigCount, BigRational};
