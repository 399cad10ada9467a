//! meyerkit — exact arithmetic for cut-and-project schemes.
//!
//! A cut-and-project scheme (CPS) here is a triple of a physical space `R^d`,
//! an internal space `H = R^m x F` with `F` a finite abelian group, and a
//! structure lattice `Z^n` (`n = d + m`) embedded in both: physically through a
//! `d x n` matrix `A`, internally through an `m x n` matrix `B` together with a
//! finite component `c : Z^n -> F`. All matrix entries live in a fixed real
//! quadratic field `Q(sqrt(D))` and every computation below is exact — no
//! floating point enters any decision.
//!
//! The crate provides, bottom up:
//!
//! * [`numeric`] — the field `Q(sqrt(D))` ([`numeric::QuadExt`]) and integer
//!   lattice normal forms ([`numeric::IntMatrix`], Hermite/Smith).
//! * [`fingroup`] — finite abelian groups as explicit products of cyclic
//!   groups, their homomorphisms, subgroups and quotients.
//! * [`region`] — finite unions of closed boxes fibered over `F`: the window
//!   algebra (membership, comparison, regularization, diameters).
//! * [`cps`] — schemes themselves: validation, star map, lattice coordinate
//!   resolution and certified point enumeration.
//! * [`pointset`] — colored point sets with finite-scale Delone/Meyer
//!   verifiers (packing, covering, Meyer defect, repetition radius).
//! * [`modelset`] — window-driven generation of model multiple sets and
//!   interpolation checking.
//! * [`minimal`] — the constructive minimalization pipeline: star closure,
//!   redundancy quotient, structure-group shrinking, and the smallest model
//!   multiple set containing a given Meyer multiple set, with a certified
//!   inclusion chain.
//! * [`omega`] — truncated window-intersection parameter maps and the
//!   same-fiber test they induce.
//! * [`morphism`] — presented CPS morphisms, onto/open certification, and
//!   finite-index amalgamation of structure groups.
//! * [`cli`] — the `meyerkit` command-line front end (thin dispatch over the
//!   library; see `src/bin/meyerkit.rs`).
//!
//! Design ground rules: windows are finite unions of closed boxes with
//! `Q(sqrt(D))` endpoints (`m <= 3`), finite groups are manipulated by
//! exhaustion (orders capped), generation uses the closed-window convention,
//! and every verifier reports what it actually certified at the requested
//! finite scale rather than extrapolating.

pub mod cli;
pub mod cps;
pub mod fingroup;
pub mod fixtures;
pub mod io;
pub mod minimal;
pub mod modelset;
pub mod morphism;
pub mod numeric;
pub mod omega;
pub mod pointset;
pub mod region;
pub mod svg;

pub use cps::{CpsParams, CutProjectScheme};
pub use fingroup::{FinAbGroup, FinElem, FinHom, FreeHom};
pub use minimal::{minimalize, verify_minimal, Minimalization, MinimalizeOptions};
pub use modelset::{NamedWindow, WindowFamily, WindowMode};
pub use morphism::{amalgamated_cps, validate_morphism, Amalgamation, MorphismReport};
pub use omega::{omega_of_patch, omega_point, omega_region, srp_test, OmegaOptions, SrpVerdict};
pub use numeric::{IntMatrix, QMatrix, QuadExt};
pub use pointset::MultiPointSet;
pub use region::{HPoint, Location, RBox, Region, RegionOrder};
