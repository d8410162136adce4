//! Numerical core: function spaces and seminorms on the circle and line,
//! mollifier-based quasiconformal extensions and their Beltrami fields,
//! flows of smooth vector fields, the exponential map onto normalized
//! Weil-Petersson homeomorphisms, and the Cauchy-type deformation operators
//! on the upper half plane — with a verification battery that checks the
//! quantitative identities connecting them.

pub mod config;
pub mod error;
pub mod flow;
pub mod functions;
pub mod manifest;
pub mod mollifier;
pub mod numerics;
pub mod reich;
pub mod semmes;
pub mod suite;
pub mod wpmap;

pub use error::{Error, Result};
