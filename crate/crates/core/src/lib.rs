//! Finite models of groupoids, Morita equivalences and equivariant
//! resolutions.
//!
//! Every space is a finite Alexandrov space, i.e. a preorder, so all the
//! constructions (quotients, fibered products, transports of modules along
//! bimodules) are computed exactly and every statement about them can be
//! checked by exhaustive search on small instances.

pub mod cli;
pub mod correspondence;
pub mod enumerate;
pub mod error;
pub mod finspace;
pub mod fixtures;
pub mod groupoid;
pub mod instance;
mod iso;
pub mod modaction;
pub mod morita;
pub mod report;
pub mod resolution;

pub use correspondence::SubgroupoidMorita;
pub use error::{Error, Result};
pub use finspace::{CMap, FinSpace, PointSet};
pub use groupoid::{Group, Groupoid, Subgroupoid};
pub use modaction::{LeftModule, RightModule};
pub use morita::{Bimodule, MoritaEquivalence};
pub use report::{Report, Violation};
pub use resolution::{LCompatibility, Resolution};
