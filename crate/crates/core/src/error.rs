//! Error types shared across the workbench.

use thiserror::Error;

/// Errors raised while loading or validating a data graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("empty node set")]
    EmptyNodeSet,
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown label {0:?} on edge")]
    UnknownLabel(String),
    #[error("unknown node {0:?} on edge")]
    UnknownNode(String),
    #[error("node {id:?} has {got} properties, expected {expected}")]
    WrongPropertyArity { id: String, got: usize, expected: usize },
    #[error("value {0:?} collides with the reserved pad token")]
    ReservedPadToken(String),
    #[error("path endpoints do not meet: {0:?} vs {1:?}")]
    EndpointMismatch(String, String),
    #[error("malformed graph file: {0}")]
    Malformed(String),
}

/// Errors raised by automaton construction and simulation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RdpaError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("initial state {0} is not a data state")]
    InitialNotData(usize),
    #[error("final state {0} is not a word state")]
    FinalNotWord(usize),
    #[error("transition from {0} breaks word/data alternation")]
    AlternationViolation(usize),
    #[error("register {0:?} required both equal and unequal to tape {1}")]
    EqualityConflict(String, usize),
    #[error("tapes {0} and {1} required both equal and unequal")]
    CrossConflict(usize, usize),
    #[error("register index {0:?} out of range")]
    BadRegister(String),
    #[error("tape index {0} out of range for arity {1}")]
    BadTape(usize, usize),
    #[error("constraint on tape {0} which is not value-guarded")]
    UnguardedTape(usize),
    #[error("state index {0} out of range")]
    BadState(usize),
    #[error("expected a {expected} symbol at state {state}")]
    SymbolKindMismatch { state: usize, expected: &'static str },
    #[error("input tuple has arity {got}, automaton expects {expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("unknown builtin automaton {0:?}")]
    UnknownBuiltin(String),
    #[error("grounded state cap {0} exceeded")]
    StateCapExceeded(usize),
    #[error("malformed automaton file: {0}")]
    Malformed(String),
}

/// Errors raised by NFA operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NfaError {
    #[error("operands are over different tape layouts")]
    LayoutMismatch,
    #[error("determinization state cap {0} exceeded")]
    StateCapExceeded(usize),
    #[error("tape index {0} out of range for arity {1}")]
    BadTape(usize, usize),
    #[error("projection requires arity of at least 2")]
    ProjectUnary,
}
