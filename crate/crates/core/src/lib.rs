//! Generalized oscillators built from Meixner and Meixner–Pollaczek
//! polynomials.

pub mod cli;
pub mod coherent;
pub mod diffops;
pub mod oscillator;
pub mod polyfam;
pub mod quadrature;
pub mod specfun;
pub mod verify;
