//! Exact arithmetic for Stickelberger elements, Sinnott-Kurihara ideals and
//! Fitting ideals of abelian CM extensions of `Q`.

pub mod abelian;
pub mod arith;
pub mod corpus;
pub mod cyclo;
pub mod error;
pub mod extension;
pub mod fitting;
pub mod fixture;
pub mod group_ring;
pub mod lattice;
pub mod linalg;
pub mod lvalues;
pub mod padic;
pub mod places;
pub mod report;
pub mod stark;
pub mod stickelberger;
pub mod suite;
pub mod verify;

pub use abelian::{Character, FiniteAbelianGroup, GroupElement, Quotient, Subgroup};
pub use cyclo::CycloNumber;
pub use error::{Error, Result};
pub use extension::{ExtensionDatum, LocalData, UnitGroup};
pub use fitting::ModulePresentation;
pub use fixture::{Fixture, FixtureFile};
pub use group_ring::{assemble_from_char_values, GroupRingElt, MinusContext};
pub use lattice::{Ambient, ZLattice};
pub use lvalues::{DirichletChar, LValueProvider};
pub use places::PlaceSet;
pub use report::{Report, Status, Verdict};
pub use stickelberger::{sku_ideal, theta};
