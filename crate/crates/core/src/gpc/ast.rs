//! Pattern and condition ASTs plus the well-formedness rules.

use std::collections::BTreeSet;

use thiserror::Error;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    /// `()` or `(x)`.
    Node(Option<Var>),
    /// `->` or `-[a]->`; `None` matches any label.
    Edge(Option<String>),
    Union(Box<Pattern>, Box<Pattern>),
    Concat(Box<Pattern>, Box<Pattern>),
    /// `p{n..m}`; `None` upper bound is unbounded.
    Repeat(Box<Pattern>, u32, Option<u32>),
    /// `p<theta>`.
    Cond(Box<Pattern>, Condition),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    DataEq(Var, Var),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Condition::DataEq(x, y) => BTreeSet::from([x.clone(), y.clone()]),
            Condition::Not(c) => c.vars(),
            Condition::And(a, b) => {
                let mut v = a.vars();
                v.extend(b.vars());
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Restrictor {
    Simple,
    Shortest,
    ShortestSimple,
}

impl Restrictor {
    pub fn keyword(&self) -> &'static str {
        match self {
            Restrictor::Simple => "simple",
            Restrictor::Shortest => "shortest",
            Restrictor::ShortestSimple => "shortestsimple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpcQuery {
    pub restrictor: Restrictor,
    pub pattern: Pattern,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GpcError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable {0:?} of a repetition sub-pattern is used outside it")]
    RepetitionVarReuse(Var),
    #[error("condition variable {0:?} is not free in the conditioned pattern")]
    UnboundConditionVar(Var),
    #[error("repetition bounds {0}..{1} are inverted")]
    BadBounds(u32, u32),
    #[error("data-equality condition on a graph without properties (k = 0)")]
    DataEqualityUnavailable,
    #[error("evaluation cap exceeded: {0}")]
    CapExceeded(String),
}

/// Free variables: node variables not bounded by a repetition.
pub fn free_vars(p: &Pattern) -> BTreeSet<Var> {
    match p {
        Pattern::Node(Some(x)) => BTreeSet::from([x.clone()]),
        Pattern::Node(None) | Pattern::Edge(_) => BTreeSet::new(),
        Pattern::Union(a, b) | Pattern::Concat(a, b) => {
            let mut v = free_vars(a);
            v.extend(free_vars(b));
            v
        }
        Pattern::Repeat(_, _, _) => BTreeSet::new(),
        Pattern::Cond(q, _) => free_vars(q),
    }
}

/// Every variable occurring anywhere, bounded or free.
pub fn all_vars(p: &Pattern) -> BTreeSet<Var> {
    match p {
        Pattern::Node(Some(x)) => BTreeSet::from([x.clone()]),
        Pattern::Node(None) | Pattern::Edge(_) => BTreeSet::new(),
        Pattern::Union(a, b) | Pattern::Concat(a, b) => {
            let mut v = all_vars(a);
            v.extend(all_vars(b));
            v
        }
        Pattern::Repeat(q, _, _) => all_vars(q),
        Pattern::Cond(q, c) => {
            let mut v = all_vars(q);
            v.extend(c.vars());
            v
        }
    }
}

/// Whether any condition appears in the pattern.
pub fn uses_condition(p: &Pattern) -> bool {
    match p {
        Pattern::Node(_) | Pattern::Edge(_) => false,
        Pattern::Union(a, b) | Pattern::Concat(a, b) => uses_condition(a) || uses_condition(b),
        Pattern::Repeat(q, _, _) => uses_condition(q),
        Pattern::Cond(_, _) => true,
    }
}

/// Checks the syntactic restrictions: repetition bounds are ordered, a
/// variable used inside a repetition sub-pattern appears nowhere else, and
/// condition variables are free in the conditioned pattern.
pub fn validate(p: &Pattern) -> Result<(), GpcError> {
    fn walk(p: &Pattern, root: &Pattern) -> Result<(), GpcError> {
        match p {
            Pattern::Node(_) | Pattern::Edge(_) => Ok(()),
            Pattern::Union(a, b) | Pattern::Concat(a, b) => {
                walk(a, root)?;
                walk(b, root)
            }
            Pattern::Repeat(q, n, m) => {
                if let Some(m) = m {
                    if n > m {
                        return Err(GpcError::BadBounds(*n, *m));
                    }
                }
                let inner = all_vars(q);
                let outside = vars_outside(root, p);
                if let Some(x) = inner.intersection(&outside).next() {
                    return Err(GpcError::RepetitionVarReuse(x.clone()));
                }
                walk(q, root)
            }
            Pattern::Cond(q, c) => {
                let fv = free_vars(q);
                for x in c.vars() {
                    if !fv.contains(&x) {
                        return Err(GpcError::UnboundConditionVar(x));
                    }
                }
                walk(q, root)
            }
        }
    }
    // all vars of `root` outside the subtree `skip` (compared by address)
    fn vars_outside(root: &Pattern, skip: &Pattern) -> BTreeSet<Var> {
        fn go(p: &Pattern, skip: *const Pattern, out: &mut BTreeSet<Var>) {
            if std::ptr::eq(p, skip as *const Pattern) {
                return;
            }
            match p {
                Pattern::Node(Some(x)) => {
                    out.insert(x.clone());
                }
                Pattern::Node(None) | Pattern::Edge(_) => {}
                Pattern::Union(a, b) | Pattern::Concat(a, b) => {
                    go(a, skip, out);
                    go(b, skip, out);
                }
                Pattern::Repeat(q, _, _) => go(q, skip, out),
                Pattern::Cond(q, c) => {
                    go(q, skip, out);
                    out.extend(c.vars());
                }
            }
        }
        let mut out = BTreeSet::new();
        go(root, skip as *const Pattern, &mut out);
        out
    }
    walk(p, p)
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pattern::Node(None) => write!(f, "()"),
            Pattern::Node(Some(x)) => write!(f, "({x})"),
            Pattern::Edge(None) => write!(f, "->"),
            Pattern::Edge(Some(a)) => write!(f, "-[{a}]->"),
            Pattern::Union(a, b) => write!(f, "( {a} + {b} )"),
            Pattern::Concat(a, b) => write!(f, "{a} {b}"),
            Pattern::Repeat(q, n, Some(m)) => write!(f, "( {q} ){{{n}..{m}}}"),
            Pattern::Repeat(q, n, None) => write!(f, "( {q} ){{{n}..inf}}"),
            Pattern::Cond(q, c) => write!(f, "( {q} )<{c}>"),
        }
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition::DataEq(x, y) => write!(f, "{x} ~data {y}"),
            Condition::Not(c) => write!(f, "!({c})"),
            Condition::And(a, b) => write!(f, "({a}) & ({b})"),
        }
    }
}

impl std::fmt::Display for GpcQuery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.restrictor.keyword(), self.pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(x: &str) -> Pattern {
        Pattern::Node(Some(x.to_string()))
    }

    #[test]
    fn free_vars_of_atoms() {
        assert!(free_vars(&Pattern::Node(None)).is_empty());
        let p = Pattern::Concat(Box::new(var("x")), Box::new(var("y")));
        let fv: Vec<_> = free_vars(&p).into_iter().collect();
        assert_eq!(fv, ["x", "y"]);
    }

    #[test]
    fn repetition_vars_are_bounded() {
        let rep = Pattern::Repeat(Box::new(var("y")), 1, Some(2));
        assert!(free_vars(&rep).is_empty());
        let p = Pattern::Concat(Box::new(var("x")), Box::new(rep));
        assert_eq!(free_vars(&p).len(), 1);
        assert!(validate(&p).is_ok());
    }

    #[test]
    fn repetition_var_reuse_rejected() {
        let rep = Pattern::Repeat(Box::new(var("x")), 1, Some(2));
        let p = Pattern::Concat(Box::new(var("x")), Box::new(rep));
        assert_eq!(validate(&p), Err(GpcError::RepetitionVarReuse("x".into())));
    }

    #[test]
    fn condition_vars_must_be_free() {
        let c = Condition::DataEq("x".into(), "y".into());
        let p = Pattern::Cond(Box::new(var("x")), c);
        assert_eq!(validate(&p), Err(GpcError::UnboundConditionVar("y".into())));
    }

    #[test]
    fn inverted_bounds_rejected() {
        let p = Pattern::Repeat(Box::new(var("x")), 3, Some(2));
        assert_eq!(validate(&p), Err(GpcError::BadBounds(3, 2)));
    }
}
