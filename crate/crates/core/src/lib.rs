//! Numerical certification toolkit for the minimality of the product of two
//! one-dimensional `Y` sets in R⁴.
//!
//! The crate is organised bottom-up:
//!
//! - [`exterior`]: 2-vectors in ∧²R⁴, the 4-form pairing and the comass norm
//!   (closed form plus an independent optimizer).
//! - [`geometry`]: the reference `Y×Y` scene, its squares, cycles and
//!   calibration 2-vectors, and the triangulated product.
//! - [`homology`]: GF(2) simplicial chains, boundary matrices, filling of
//!   cycles, the nine-piece decomposition, mod-2 degree and linking classes.
//! - [`calib`]: calibration functionals and the exhaustive sign-sum bounds.
//! - [`ffproj`]: polyhedral complexes, roundness, radial projections and the
//!   full Federer–Fleming projection on PL surfaces.
//! - [`experiments`]: discrete competitors, chain minimization, calibration
//!   certificates and the product-deformation measure identity.
//! - [`cones`]: the spherical net, stereographic projection and the
//!   half-plane frame equations.
//! - [`io`] and [`report`]: text formats and delimited report rows shared
//!   with the command-line driver.

pub mod calib;
pub mod cones;
pub mod config;
pub mod experiments;
pub mod exterior;
pub mod ffproj;
pub mod geometry;
pub mod homology;
pub mod io;
pub mod report;

pub use config::Tolerances;
pub use exterior::{comass, comass_numeric, det4, wedge, TwoVector, Vec4};
pub use geometry::{build_scene, ProductScene};
pub use homology::{ChainZ2, SimplicialComplex};
