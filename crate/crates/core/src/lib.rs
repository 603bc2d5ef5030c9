//! Exact combinatorics of algebraic Hecke characters (purity, width,
//! critical sets, CM types, Galois signatures, discriminant identities)
//! and numerical evaluation of Hecke L-functions over an
//! imaginary-quadratic catalog of base fields.

pub mod chartypes;
pub mod mp;
pub mod numfield;
pub mod poly;
pub mod qi;

pub use chartypes::{AnalyticType, CMTypeData, CriticalSet, EmbeddingTag, InfinityType};
pub use numfield::{EmbeddingSet, FieldElement, GaloisContext, NumberFieldTower, SurdValue};
