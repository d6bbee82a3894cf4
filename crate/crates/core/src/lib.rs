//! Boundary complexes of normal crossings divisors as generalized Δ-complexes.
//!
//! The crate is organised in four layers:
//!
//! * [`symdelta`]: generalized Δ-complexes, maps, coequalizers, canonical forms;
//! * [`cones`]: smooth generalized cone complexes and their subdivisions;
//! * [`homotopy`]: collapses, expansions, homology and equivalence search;
//! * [`boundary`]: complexes built from strata data, blow-up and root moves.
//!
//! [`io`] holds the JSON formats shared with the command-line tool and
//! [`corpus`] a set of named desk-scale examples.

pub mod boundary;
pub mod cones;
pub mod corpus;
pub mod error;
pub mod homotopy;
pub mod io;
mod perm;
pub mod symdelta;
mod unionfind;

pub use error::{Error, Result};
pub use symdelta::{GeneralizedDeltaComplex, SimplexId};
