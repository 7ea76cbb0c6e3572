pub mod action;
pub mod bitset;
pub mod corpus;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod fn_algebra;
pub mod groupoid;
pub mod io;
pub mod ideals;
pub mod linalg;
pub mod report;
pub mod skew;
pub mod stone;
pub mod transformation;
pub mod ultragraph;
pub mod verify;

pub use action::{FibredAction, PartialAction, RawAction, RawPoint};
pub use bitset::BitSet;
pub use error::{Error, Result};
pub use groupoid::{Groupoid, RawGroupoid, RawMorphism};
pub use ultragraph::{LoopCount, RawEdge, RawUltragraph, Ultragraph};
pub use field::{FnElement, PrimeField};
pub use fn_algebra::InducedAction;
pub use linalg::Subspace;
pub use skew::{QuotientSequence, SkewElement, SkewRing};
pub use ideals::TwoSidedIdeal;
pub use transformation::{SteinbergIso, TransGroupoid};
