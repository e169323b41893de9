//! Seeded random generators for graphs, patterns and formulas.
