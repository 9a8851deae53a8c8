//! Exact enumeration of regular dessins whose underlying graph is a complete
//! bipartite graph `K_{p^d, p^e}` for an odd prime `p`.
//!
//! The automorphism group of such a dessin is one of the metacyclic groups in
//! [`group`]; dessins correspond to exact bicyclic generating pairs
//! ([`bicyclic`]) up to the action of [`autgroup`], which [`classify`] counts by
//! explicit orbit enumeration. [`dessin`] realises each class as a rotation
//! system.

pub mod autgroup;
pub mod bicyclic;
pub mod classify;
pub mod cli;
pub mod dessin;
pub mod error;
pub mod group;
pub mod numtheory;

pub use autgroup::AutMap;
pub use bicyclic::{BicyclicPair, Mode};
pub use classify::{verify, CountReport, VerifyOptions};
pub use dessin::{build_dessin, Dessin, DessinSummary};
pub use error::{Error, Result};
pub use group::{enumerate_specs, Element, Family, Group, GroupSpec};
