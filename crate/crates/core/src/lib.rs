//! Finite categories, ideals of null morphisms, stars of parallel pairs and
//! the regular completion of a category with weak finite limits.

pub mod completion;
pub mod corpus;
pub mod fincat;
pub mod ideals;
pub mod iso;
pub mod limits;
pub mod report;
pub mod stars;

pub use fincat::{FinCategory, FullSubcategory, MorId, ObjId, ParallelPair, RawCategory};
pub use ideals::{Ideal, MultiPointed};
pub use report::{Report, Verdict};
