//! Numerical laboratory for z-measures on partitions and signatures: weights,
//! determinantal correlation kernels, the L/(1+L) calculus, exact-enumeration
//! oracles, DPP sampling and scaling-limit scans.

pub mod combinatorics;
pub mod dpp;
pub mod kernels;
pub mod limits;
pub mod measures;
pub mod opkernels;
pub mod specfun;

pub use num_complex::Complex64 as C64;
