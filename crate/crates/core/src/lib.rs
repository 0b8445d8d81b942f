//! Boolean radii of real functions on the Boolean cube `{-1,+1}^N`.
//!
//! A function `f` is stored as its truth table and analysed through its
//! Fourier-Walsh expansion `f(x) = Σ_S f̂(S) x^S`. The Boolean radius `ρ(f)`
//! is the point where the absolute-coefficient majorant `Σ_S |f̂(S)| ρ^|S|`
//! reaches `‖f‖_∞`.
//!
//! Modules:
//! - [`cube`]: truth tables, the Walsh transform, norms, noise operator.
//! - [`radius`]: the radius solver for dense and symmetric spectra, class radii,
//!   the exact radius of the class of all functions and its brute-force check.
//! - [`families`]: dictators, parities, thresholds, majority, biased indicators.
//! - [`threshold`]: exact large-N spectra of threshold functions and the
//!   special functions used to sandwich their radii.
//! - [`lab`]: randomized and exhaustive verification of the inequalities that
//!   govern the radii.
//! - [`cli`]: the `boolrad` command-line front end.

pub mod cli;
pub mod cube;
pub mod error;
pub mod exact;
pub mod families;
pub mod lab;
pub mod parallel;
pub mod quadrature;
pub mod radius;
pub mod special;
pub mod threshold;

pub use cube::{BooleanFunction, Spectrum, SymmetricSpectrum, MAX_DENSE_N, ZERO_TOL};
pub use error::{Error, Result};
pub use radius::{LevelProfile, Method, RadiusResult};
