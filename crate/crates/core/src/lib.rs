//! Finite assemblers: small Grothendieck sites with an initial object covered
//! by the empty family, common refinements of disjoint covers, and only monic
//! morphisms.
//!
//! The crate builds such assemblers from explicit composition tables, decides
//! covering and disjointness, computes K₀ as an exact integer presentation, and
//! provides the constructions needed to check dévissage, localization, cofiber
//! and sink-group statements on finite instances.

pub mod assembler;
pub mod budget;
pub mod category;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod kzero;
pub mod nerve;
pub mod ops;
pub mod simplicial;
pub mod sink;
pub mod snf;
pub mod wcat;

pub use assembler::{Assembler, AxiomReport, CoverFamily, SiteBuilder};
pub use budget::Budget;
pub use category::{FiniteCategory, MorId, ObjId};
pub use error::{Error, Result};
pub use group::{AbelianGroup, GroupHom, PresentedGroup};
pub use kzero::{K0Class, K0Group};
pub use ops::AssemblerMorphism;
