//! Span categories, categories of fractions and restriction structures over
//! finite enumerated categories, plus certificate checking over finite sets
//! and finite preorders.

pub mod backends;
pub mod classes;
pub mod corpus;
pub mod error;
pub mod fincat;
pub mod frontend;
pub mod limits;
pub mod spans;
pub mod structures;

pub use classes::{MorClass, Provenance};
pub use error::{Error, Result};
pub use fincat::{FinCat, FunctorData, MorId, ObjId, RawCategory, Variance};
pub use limits::{Cospan, Ofs, PullbackCone};
pub use spans::{Partition, QuotCat, RelationKind, SpanCategory, SpanClass, SpanId};
