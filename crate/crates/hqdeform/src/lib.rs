//! Exact computer algebra for braided module-algebra structures on crossed
//! products of polynomial rings with finite groups, and for the q-exponential
//! deformations those structures induce.
//!
//! The crate is organized bottom-up:
//! * [`scalar`]: exact fields (`Q`, `F_p`) and q-integer combinatorics.
//! * [`linalg`]: exact Gaussian elimination with infeasibility certificates.
//! * [`group`]: finite groups by Cayley table, 2-cocycles, characters.
//! * [`poly`]: sparse multivariate polynomials and group representations.
//! * [`crossed`]: the crossed product `S(V) #_f G` and its arithmetic.
//! * [`hopf`]: the braided Hopf algebra on generators `D1`, `D2`, `sigma`,
//!   its axioms, and the q-exponential twisting series.
//! * [`structure`]: building and validating module-algebra structures on a
//!   crossed product, with closed forms for iterated `delta` powers.
//! * [`deform`]: the deformed product, associativity checking, and the
//!   degree-one (infinitesimal) part.
//! * [`resolution`]: the small bimodule resolution, its differentials and
//!   homotopies, and the comparison map into the bar resolution.
//! * [`cohomology`]: the cochain complex on the small resolution, transport
//!   of the infinitesimal, and the nontriviality verdict (cocycle check,
//!   coboundary solve with certificate, direct obstruction).
//! * [`config`], [`parse`], [`fixtures`], [`cli`]: the JSON configuration
//!   format, the element expression grammar, built-in worked structures, and
//!   the command-line surface.
//!
//! The `examples/` directory is the guided tour: one runnable example per
//! capability, from q-binomials up to the full nontriviality verdict.

pub mod cli;
pub mod cohomology;
pub mod config;
pub mod crossed;
pub mod deform;
pub mod fixtures;
pub mod group;
pub mod hopf;
pub mod linalg;
pub mod poly;
pub mod resolution;
pub mod scalar;
pub mod structure;
