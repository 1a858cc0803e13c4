//! Storage codes on graphs: exact capacity, combinatorial bounds,
//! constructive codes, index-code duality, and failure resilience.
//!
//! A storage code places one q-ary symbol on each vertex so that every
//! vertex's content is determined by its neighbors' contents. This crate
//! computes the largest such codes on small graphs, brackets the capacity
//! with matching/vertex-cover/cycle/minrank bounds, constructs practical
//! codes (replication, clique parity, LP-driven vector codes), and converts
//! storage codes to broadcast index codes via greedy covering families.

pub mod bitset;
pub mod bounds;
pub mod code;
pub mod combinatorics;
pub mod config;
pub mod constructions;
pub mod duality;
pub mod graph;
pub mod linear;
pub mod mis;
pub mod report;
pub mod resilience;
pub mod simplex;
