//! Path logics with automaton atoms and transitive closure.
