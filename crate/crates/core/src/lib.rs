//! Numerical toolkit for coconvex geometry inside pointed convex cones.
//!
//! The crate works with *C-polytopes*: closed convex sets `A ⊂ C` cut out of a
//! pointed cone `C` by finitely many halfspaces whose outer normals lie in the
//! interior of the polar cone. Such a set has bounded complement `C \ A`, and
//! most of what is computed here is really a statement about that bounded
//! "coconvex" region.
//!
//! The main pieces are:
//!
//! * [`cone`]: pointed cones, polar cones and the spherical domains
//!   `Ω_C = S^{n-1} ∩ int C`.
//! * [`polytope`]: C-polytopes as Wulff shapes, radial and support
//!   functions, copolar evaluation, p-co-sums and a few metric diagnostics.
//! * [`quadrature`] and [`measures`]: spherical grids, dual volumes, dual
//!   entropy and the (p,q)-th dual curvature measures, computed both by
//!   spherical quadrature and by integrating over the facets.
//! * [`solver`]: the variational solver for the discrete L_p dual Minkowski
//!   problem and the L_p Alexandrov problem.
//! * [`monge_ampere`]: residual checks of smooth planar solutions.
//! * [`io`]: JSON schemas shared with the command line tool.

pub mod cone;
pub mod error;
pub mod io;
pub mod measures;
pub mod monge_ampere;
pub mod polytope;
pub mod quadrature;
pub mod solver;

mod convex;
mod linalg;

pub use cone::{Cone, ConeKind, UnitVector, Vector};
pub use error::{Error, Result};
pub use measures::{Atom, DiscreteMeasure, Domain};
pub use polytope::{CPolytope, Facet};
pub use quadrature::QuadratureGrid;
pub use solver::{Problem, Solution, SolverConfig};
