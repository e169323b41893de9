//! dpq-core: a workbench for path queries over data graphs.
//!
//! The crate models data graphs (nodes with a unique id and a k-tuple of
//! properties, labeled directed edges) and implements, on top of them:
//!
//! - register data path automata (RDPA): construction, simulation on tuples
//!   of data paths, and grounding against a fixed graph into finite automata;
//! - a multi-tape NFA toolkit over the graph-grounded padded alphabet,
//!   closed under the Boolean operations and projection;
//! - GPC patterns with restrictors: parser, direct denotational semantics,
//!   normal-form rewriting, and a pattern-to-automaton compiler;
//! - walk logic and multi-path walk logic with a bounded evaluator and an
//!   exact translation into path logic;
//! - first-order path logics with automaton atoms and transitive closure,
//!   evaluated by automata-theoretic grounding, plus the fast route for the
//!   universal fragment and a translator from single-automaton queries into
//!   transitive-closure logic over data equality.
//!
//! Every nontrivial evaluator is paired with an independent brute-force
//! oracle and cross-checked in the test suites.

pub mod corpus;
pub mod error;
pub mod gen;
pub mod gpc;
pub mod graph;
pub mod logic;
pub mod nfa;
pub mod rdpa;
pub mod wl;

pub use error::{GraphError, NfaError, RdpaError};
pub use graph::{convolve, label_of, DataGraph, DataPath, DataValue, LabelId, NaryDataPath, NodeId, Path};
