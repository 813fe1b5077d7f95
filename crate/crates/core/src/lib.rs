//! Numerical core for one-dimensional two-component photon fluids:
//! parameter maps from laboratory optics to effective Lieb-Liniger and
//! Luttinger-liquid descriptions, the density-density spectral function
//! built on Appell hypergeometric functions, a split-step Fourier solver
//! for the coupled nonlinear Schrödinger equations, and bosonization
//! bookkeeping for charge/spin sector fields.
//!
//! All quantities are in normalized units with ħ = 1; lengths and times are
//! whatever consistent pair the caller picks. Every function in the crate is
//! a pure map of its inputs: no global state, no randomness, no time stamps,
//! so results are reproducible bit-for-bit across runs and thread counts.

pub mod bosonize;
pub mod dynamics;
pub mod params;
pub mod specfun;
pub mod spectral;

pub use num_complex::Complex64;
