pub mod chow;
pub mod cox;
pub mod fan;
pub mod graded;
pub mod ktheory;
pub mod lattice;
