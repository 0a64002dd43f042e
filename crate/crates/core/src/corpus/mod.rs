//! Reading and writing corpus files, enumerating small categories, and
//! searching them for counterexamples.

pub mod enumerate;
pub mod format;
pub mod search;

pub use enumerate::{
    enumerate_categories, enumeration_cap, random_category, seeded_rng, EnumerationError,
};
pub use format::{
    parse, parse_and_resolve, resolve, serialize, Block, Corpus, CorpusError, CorpusFile,
    SyntaxError,
};
pub use search::{search_counterexample, Found, SearchConfig, SearchError, SearchProperty};
