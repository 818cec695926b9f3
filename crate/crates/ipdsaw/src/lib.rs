//! Exact computation for the 1+1-dimensional interacting partially directed
//! self-avoiding walk: partition functions by enumeration and by the
//! auxiliary-walk representation, the entropic function of the collapsed
//! phase, the variational free energy with its critical points, and exact
//! Boltzmann path sampling.
//!
//! Everything is computed in log space with explicit error control; no
//! Monte Carlo enters except the sampler, which draws from the exact finite-
//! volume law. Modules build on each other in the order
//! [`lattice`] → [`walk`] → [`entropy`] → [`free_energy`] → [`sampler`].
//!
//! Numeric routines are generic over the scalar through
//! [`scalar::LogFloat`]; the aliases below fix the concrete choices used by
//! the command-line tools and the test suites.

pub mod entropy;
pub mod free_energy;
pub mod lattice;
pub mod numerics;
pub mod sampler;
pub mod scalar;
pub mod walk;

/// Default scalar for all log-domain computation.
pub type Scalar = f64;

/// Return-probability table over the default scalar.
pub type Table = walk::ReturnTable<Scalar>;

/// Full-layer table (sampling) over the default scalar.
pub type Layers = walk::LayerTable<Scalar>;

/// Increment law over the default scalar.
pub type Law = walk::GeometricLaw<Scalar>;

/// Entropy curve over the default scalar.
pub type Curve = entropy::EntropyCurve<Scalar>;

/// Path sample over the default scalar.
pub type Sample = sampler::PathSample<Scalar>;
