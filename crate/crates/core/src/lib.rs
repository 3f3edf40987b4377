pub mod cli;
pub mod corpus;
pub mod fixtures;
pub mod ga;
pub mod tree;
pub mod harness;
pub mod topdown;
