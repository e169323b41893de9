//! Walk logic and multi-path walk logic.
