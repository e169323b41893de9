//! Register data path automata: bipartite word/data state machines with id-
//! and data-registers, simulated on (tuples of) data paths and grounded
//! against a fixed graph into finite automata.
//!
//! Data transitions carry equality/inequality preconditions between registers
//! and tape components, equality/inequality preconditions between two
//! components of the same input tuple, an update set, and a reset set that
//! returns registers to the unset value. Word transitions carry a label
//! pattern per tape plus cross-tape label (in)equality constraints.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::RdpaError;
use crate::graph::{convolve, DataGraph, DataPath, DataValue, NaryDataPath, NodeId};
use crate::nfa::{Comp, GroundedAlphabet, Letter, Nfa, TapeKind};

pub mod builtins;

/// Default cap on the number of grounded product states.
pub const DEFAULT_GROUND_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Word,
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegKind {
    Id,
    Data,
}

/// A typed register reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Reg {
    pub kind: RegKind,
    pub index: usize,
}

impl Reg {
    pub fn id(index: usize) -> Self {
        Reg { kind: RegKind::Id, index }
    }
    pub fn data(index: usize) -> Self {
        Reg { kind: RegKind::Data, index }
    }
}

/// Label pattern for one tape of a word transition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelPat {
    /// The tape must be padded here.
    Pad,
    /// Any real label.
    Any,
    /// A real label or the pad.
    Free,
    /// Exactly this label.
    Is(String),
}

/// Guard for one tape of a data transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TapeGuard {
    /// A real data value.
    Value,
    /// The pad.
    Pad,
    /// Either.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTransition {
    pub from: usize,
    pub labels: Vec<LabelPat>,
    /// Pairs of tapes whose labels must both be real and equal.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq_labels: Vec<(usize, usize)>,
    /// Pairs of tapes whose labels must both be real and different.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ne_labels: Vec<(usize, usize)>,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataTransition {
    pub from: usize,
    pub guards: Vec<TapeGuard>,
    /// E: register must equal the tape component (ids for id registers,
    /// property tuples for data registers).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq: Vec<(Reg, usize)>,
    /// I: register must differ from the tape component. An unset register
    /// differs from every real value.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ne: Vec<(Reg, usize)>,
    /// Cross-tape component equality (id or property part).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq_inputs: Vec<(RegKind, usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ne_inputs: Vec<(RegKind, usize, usize)>,
    /// U: registers written with the tape component after the checks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub update: Vec<(Reg, usize)>,
    /// Registers returned to the unset value (applied before updates).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reset: Vec<Reg>,
    pub to: usize,
}

/// A register data path automaton over m tapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rdpa {
    pub arity: usize,
    pub kinds: Vec<StateKind>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub id_registers: usize,
    pub data_registers: usize,
    pub word_transitions: Vec<WordTransition>,
    pub data_transitions: Vec<DataTransition>,
}

impl Rdpa {
    /// Validates every structural invariant; all constructors funnel here.
    pub fn validate(&self) -> Result<(), RdpaError> {
        if self.arity == 0 {
            return Err(RdpaError::ZeroArity);
        }
        let n = self.kinds.len();
        let check_state = |s: usize| if s < n { Ok(()) } else { Err(RdpaError::BadState(s)) };
        check_state(self.initial)?;
        if self.kinds[self.initial] != StateKind::Data {
            return Err(RdpaError::InitialNotData(self.initial));
        }
        for &f in &self.finals {
            check_state(f)?;
            if self.kinds[f] != StateKind::Word {
                return Err(RdpaError::FinalNotWord(f));
            }
        }
        let check_reg = |r: &Reg| {
            let bound = match r.kind {
                RegKind::Id => self.id_registers,
                RegKind::Data => self.data_registers,
            };
            if r.index < bound {
                Ok(())
            } else {
                Err(RdpaError::BadRegister(format!("{r:?}")))
            }
        };
        let check_tape = |t: usize| {
            if t < self.arity {
                Ok(())
            } else {
                Err(RdpaError::BadTape(t, self.arity))
            }
        };
        for wt in &self.word_transitions {
            check_state(wt.from)?;
            check_state(wt.to)?;
            if self.kinds[wt.from] != StateKind::Word || self.kinds[wt.to] != StateKind::Data {
                return Err(RdpaError::AlternationViolation(wt.from));
            }
            if wt.labels.len() != self.arity {
                return Err(RdpaError::ArityMismatch { got: wt.labels.len(), expected: self.arity });
            }
            for &(i, j) in wt.eq_labels.iter().chain(&wt.ne_labels) {
                check_tape(i)?;
                check_tape(j)?;
            }
            let eqs: BTreeSet<(usize, usize)> =
                wt.eq_labels.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
            for &(i, j) in &wt.ne_labels {
                if eqs.contains(&(i.min(j), i.max(j))) {
                    return Err(RdpaError::CrossConflict(i, j));
                }
            }
        }
        for dt in &self.data_transitions {
            check_state(dt.from)?;
            check_state(dt.to)?;
            if self.kinds[dt.from] != StateKind::Data || self.kinds[dt.to] != StateKind::Word {
                return Err(RdpaError::AlternationViolation(dt.from));
            }
            if dt.guards.len() != self.arity {
                return Err(RdpaError::ArityMismatch { got: dt.guards.len(), expected: self.arity });
            }
            let value_guarded =
                |t: usize| dt.guards.get(t).map(|g| *g == TapeGuard::Value).unwrap_or(false);
            for (r, t) in dt.eq.iter().chain(&dt.ne).chain(&dt.update) {
                check_reg(r)?;
                check_tape(*t)?;
                if !value_guarded(*t) {
                    return Err(RdpaError::UnguardedTape(*t));
                }
            }
            for r in &dt.reset {
                check_reg(r)?;
            }
            for &(_, i, j) in dt.eq_inputs.iter().chain(&dt.ne_inputs) {
                check_tape(i)?;
                check_tape(j)?;
                if !value_guarded(i) || !value_guarded(j) {
                    return Err(RdpaError::UnguardedTape(if value_guarded(i) { j } else { i }));
                }
            }
            let eqs: BTreeSet<(Reg, usize)> = dt.eq.iter().copied().collect();
            for &(r, t) in &dt.ne {
                if eqs.contains(&(r, t)) {
                    return Err(RdpaError::EqualityConflict(format!("{r:?}"), t));
                }
            }
            let eqi: BTreeSet<(RegKind, usize, usize)> =
                dt.eq_inputs.iter().map(|&(k, i, j)| (k, i.min(j), i.max(j))).collect();
            for &(k, i, j) in &dt.ne_inputs {
                if eqi.contains(&(k, i.min(j), i.max(j))) {
                    return Err(RdpaError::CrossConflict(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.kinds.len()
    }

    /// Initial configuration: the initial state with every register unset.
    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.initial,
            id_regs: vec![None; self.id_registers],
            data_regs: vec![None; self.data_registers],
        }
    }

    pub fn is_final(&self, c: &Configuration) -> bool {
        self.finals.contains(&c.state)
    }

    /// JSON dump of the automaton.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("automaton serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, RdpaError> {
        let a: Rdpa =
            serde_json::from_value(v.clone()).map_err(|e| RdpaError::Malformed(e.to_string()))?;
        a.validate()?;
        Ok(a)
    }

    /// GraphViz rendering for inspection.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        for (i, kind) in self.kinds.iter().enumerate() {
            let shape = match kind {
                StateKind::Word => "box",
                StateKind::Data => "circle",
            };
            let peripheries = if self.finals.contains(&i) { 2 } else { 1 };
            let _ = writeln!(out, "  s{i} [shape={shape} peripheries={peripheries} label=\"{i}\"];");
        }
        let _ = writeln!(out, "  init [shape=point]; init -> s{};", self.initial);
        for wt in &self.word_transitions {
            let lbl: Vec<String> = wt
                .labels
                .iter()
                .map(|p| match p {
                    LabelPat::Pad => "#".into(),
                    LabelPat::Any => "*".into(),
                    LabelPat::Free => "~".into(),
                    LabelPat::Is(a) => a.clone(),
                })
                .collect();
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", wt.from, wt.to, lbl.join(","));
        }
        for dt in &self.data_transitions {
            let mut lbl = String::new();
            let _ = write!(lbl, "E{:?} I{:?} U{:?}", dt.eq.len(), dt.ne.len(), dt.update.len());
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\" style=dashed];", dt.from, dt.to, lbl);
        }
        let _ = writeln!(out, "}}");
        out
    }
}

/// A simulation configuration: current state plus register contents.
/// `None` is the unset value; id registers hold ids, data registers hold
/// property tuples, so the typed-domain invariant holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: usize,
    pub id_regs: Vec<Option<String>>,
    pub data_regs: Vec<Option<Vec<String>>>,
}

/// One input symbol of a convolved word.
#[derive(Debug, Clone)]
pub enum InputSymbol<'a> {
    Labels(&'a [Option<String>]),
    Data(&'a [Option<DataValue>]),
}

/// All configurations reachable from `c` by one enabled transition on `sym`.
/// The empty set means the automaton is stuck.
pub fn step(
    a: &Rdpa,
    c: &Configuration,
    sym: &InputSymbol<'_>,
) -> Result<BTreeSet<Configuration>, RdpaError> {
    let mut out = BTreeSet::new();
    match (a.kinds[c.state], sym) {
        (StateKind::Data, InputSymbol::Data(comps)) => {
            if comps.len() != a.arity {
                return Err(RdpaError::ArityMismatch { got: comps.len(), expected: a.arity });
            }
            for dt in a.data_transitions.iter().filter(|t| t.from == c.state) {
                if let Some(next) = apply_data(a, c, dt, comps) {
                    out.insert(next);
                }
            }
        }
        (StateKind::Word, InputSymbol::Labels(comps)) => {
            if comps.len() != a.arity {
                return Err(RdpaError::ArityMismatch { got: comps.len(), expected: a.arity });
            }
            for wt in a.word_transitions.iter().filter(|t| t.from == c.state) {
                if word_enabled(wt, comps) {
                    let mut next = c.clone();
                    next.state = wt.to;
                    out.insert(next);
                }
            }
        }
        (StateKind::Data, InputSymbol::Labels(_)) => {
            return Err(RdpaError::SymbolKindMismatch { state: c.state, expected: "data" })
        }
        (StateKind::Word, InputSymbol::Data(_)) => {
            return Err(RdpaError::SymbolKindMismatch { state: c.state, expected: "label" })
        }
    }
    Ok(out)
}

fn word_enabled(wt: &WordTransition, comps: &[Option<String>]) -> bool {
    for (pat, comp) in wt.labels.iter().zip(comps) {
        let ok = match (pat, comp) {
            (LabelPat::Pad, None) => true,
            (LabelPat::Any, Some(_)) => true,
            (LabelPat::Free, _) => true,
            (LabelPat::Is(a), Some(b)) => a == b,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    for &(i, j) in &wt.eq_labels {
        match (&comps[i], &comps[j]) {
            (Some(a), Some(b)) if a == b => {}
            _ => return false,
        }
    }
    for &(i, j) in &wt.ne_labels {
        match (&comps[i], &comps[j]) {
            (Some(a), Some(b)) if a != b => {}
            _ => return false,
        }
    }
    true
}

fn apply_data(
    _a: &Rdpa,
    c: &Configuration,
    dt: &DataTransition,
    comps: &[Option<DataValue>],
) -> Option<Configuration> {
    for (guard, comp) in dt.guards.iter().zip(comps) {
        let ok = match (guard, comp) {
            (TapeGuard::Value, Some(_)) => true,
            (TapeGuard::Pad, None) => true,
            (TapeGuard::Any, _) => true,
            _ => false,
        };
        if !ok {
            return None;
        }
    }
    let reg_matches = |r: &Reg, t: usize| -> bool {
        let v = comps[t].as_ref().expect("guarded tape");
        match r.kind {
            RegKind::Id => c.id_regs[r.index].as_deref() == Some(v.id.as_str()),
            RegKind::Data => c.data_regs[r.index].as_ref() == Some(&v.props),
        }
    };
    for &(r, t) in &dt.eq {
        if !reg_matches(&r, t) {
            return None;
        }
    }
    for &(r, t) in &dt.ne {
        if reg_matches(&r, t) {
            return None;
        }
    }
    for &(kind, i, j) in &dt.eq_inputs {
        let (x, y) = (comps[i].as_ref()?, comps[j].as_ref()?);
        let eq = match kind {
            RegKind::Id => x.id == y.id,
            RegKind::Data => x.props == y.props,
        };
        if !eq {
            return None;
        }
    }
    for &(kind, i, j) in &dt.ne_inputs {
        let (x, y) = (comps[i].as_ref()?, comps[j].as_ref()?);
        let eq = match kind {
            RegKind::Id => x.id == y.id,
            RegKind::Data => x.props == y.props,
        };
        if eq {
            return None;
        }
    }
    let mut next = c.clone();
    next.state = dt.to;
    for r in &dt.reset {
        match r.kind {
            RegKind::Id => next.id_regs[r.index] = None,
            RegKind::Data => next.data_regs[r.index] = None,
        }
    }
    for &(r, t) in &dt.update {
        let v = comps[t].as_ref().expect("guarded tape");
        match r.kind {
            RegKind::Id => next.id_regs[r.index] = Some(v.id.clone()),
            RegKind::Data => next.data_regs[r.index] = Some(v.props.clone()),
        }
    }
    Some(next)
}

/// Runs the automaton on an m-tuple of data paths: true iff the convolution
/// has an accepting computation. Breadth-first over configurations with
/// memoization per column.
pub fn accepts(a: &Rdpa, paths: &[DataPath]) -> Result<bool, RdpaError> {
    if paths.len() != a.arity {
        return Err(RdpaError::ArityMismatch { got: paths.len(), expected: a.arity });
    }
    let conv = convolve(paths);
    accepts_convolution(a, &conv)
}

/// Same as [`accepts`] but starting from an already-convolved word.
pub fn accepts_convolution(a: &Rdpa, conv: &NaryDataPath) -> Result<bool, RdpaError> {
    if conv.arity() != a.arity {
        return Err(RdpaError::ArityMismatch { got: conv.arity(), expected: a.arity });
    }
    let mut frontier: HashSet<Configuration> = HashSet::new();
    frontier.insert(a.initial_configuration());
    for j in 0..=conv.len() {
        let sym = InputSymbol::Data(conv.data_col(j));
        let mut next = HashSet::new();
        for c in &frontier {
            next.extend(step(a, c, &sym)?);
        }
        frontier = next;
        if frontier.is_empty() {
            return Ok(false);
        }
        if j < conv.len() {
            let sym = InputSymbol::Labels(conv.label_col(j));
            let mut next = HashSet::new();
            for c in &frontier {
                next.extend(step(a, c, &sym)?);
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(frontier.iter().any(|c| a.is_final(c)))
}

// ---------------------------------------------------------------------------
// Grounding: Rdpa x DataGraph -> Nfa
// ---------------------------------------------------------------------------

/// Per-tape walk position inside the grounded product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum TapePos {
    /// Before the first data value.
    Start,
    /// Positioned at a node (after reading its data value).
    At(NodeId),
    /// Committed to move to this node (after reading an edge label).
    Head(NodeId),
    /// Padded out.
    Done,
}

/// Register valuation with values restricted to those occurring in the graph:
/// id registers hold nodes, data registers hold indices into the distinct
/// property-tuple table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct GroundRegs {
    ids: Vec<Option<NodeId>>,
    props: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct GroundState {
    state: usize,
    regs: GroundRegs,
    tapes: Vec<TapePos>,
}

/// Grounds the automaton against a fixed graph: the result is an m-tape NFA
/// over the graph's token alphabet accepting exactly the convolutions of
/// m-tuples of data paths of the graph accepted by the automaton. The
/// construction is the product of the automaton with the graph, with register
/// values drawn from the values occurring in the graph.
pub fn ground(a: &Rdpa, g: &Arc<DataGraph>) -> Result<Nfa, RdpaError> {
    ground_with_cap(a, g, DEFAULT_GROUND_CAP)
}

pub fn ground_with_cap(a: &Rdpa, g: &Arc<DataGraph>, cap: usize) -> Result<Nfa, RdpaError> {
    a.validate()?;
    let prop_table: Vec<Vec<String>> = g.distinct_props();
    let prop_index: HashMap<&[String], u32> =
        prop_table.iter().enumerate().map(|(i, p)| (p.as_slice(), i as u32)).collect();

    let mut alphabet = GroundedAlphabet::new(Arc::clone(g), vec![TapeKind::Path; a.arity]);
    let mut states: HashMap<GroundState, u32> = HashMap::new();
    let mut order: Vec<GroundState> = Vec::new();
    let mut transitions: Vec<(u32, u32, u32)> = Vec::new();

    let init = GroundState {
        state: a.initial,
        regs: GroundRegs {
            ids: vec![None; a.id_registers],
            props: vec![None; a.data_registers],
        },
        tapes: vec![TapePos::Start; a.arity],
    };
    states.insert(init.clone(), 0);
    order.push(init);
    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(0);

    while let Some(idx) = queue.pop_front() {
        let gs = order[idx as usize].clone();
        match a.kinds[gs.state] {
            StateKind::Data => {
                for dt in a.data_transitions.iter().filter(|t| t.from == gs.state) {
                    ground_data_step(
                        a, g, &prop_index, &gs, dt, &mut alphabet, &mut states, &mut order,
                        &mut transitions, &mut queue, idx, cap,
                    )?;
                }
            }
            StateKind::Word => {
                for wt in a.word_transitions.iter().filter(|t| t.from == gs.state) {
                    ground_word_step(
                        a, g, &gs, wt, &mut alphabet, &mut states, &mut order, &mut transitions,
                        &mut queue, idx, cap,
                    )?;
                }
            }
        }
    }

    let finals: BTreeSet<u32> = order
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            a.finals.contains(&s.state)
                && s.tapes.iter().all(|t| matches!(t, TapePos::At(_) | TapePos::Done))
        })
        .map(|(i, _)| i as u32)
        .collect();

    let mut nfa = Nfa::new(alphabet, order.len() as u32, BTreeSet::from([0u32]), finals);
    for (s, l, t) in transitions {
        nfa.add_transition(s, l, t);
    }
    Ok(nfa.pruned())
}

#[allow(clippy::too_many_arguments)]
fn ground_data_step(
    a: &Rdpa,
    g: &Arc<DataGraph>,
    prop_index: &HashMap<&[String], u32>,
    gs: &GroundState,
    dt: &DataTransition,
    alphabet: &mut GroundedAlphabet,
    states: &mut HashMap<GroundState, u32>,
    order: &mut Vec<GroundState>,
    transitions: &mut Vec<(u32, u32, u32)>,
    queue: &mut VecDeque<u32>,
    from: u32,
    cap: usize,
) -> Result<(), RdpaError> {
    // Per-tape options: the node read (or None for a pad).
    let mut options: Vec<Vec<Option<NodeId>>> = Vec::with_capacity(a.arity);
    for (t, pos) in gs.tapes.iter().enumerate() {
        let guard = dt.guards[t];
        let opts: Vec<Option<NodeId>> = match *pos {
            TapePos::Start => {
                if guard == TapeGuard::Pad {
                    vec![]
                } else {
                    g.nodes().map(Some).collect()
                }
            }
            TapePos::Head(w) => {
                if guard == TapeGuard::Pad {
                    vec![]
                } else {
                    vec![Some(w)]
                }
            }
            TapePos::Done => {
                if guard == TapeGuard::Value {
                    vec![]
                } else {
                    vec![None]
                }
            }
            TapePos::At(_) => unreachable!("data phase cannot see a post-data tape"),
        };
        let opts = match guard {
            TapeGuard::Value => opts.into_iter().filter(|o| o.is_some()).collect(),
            TapeGuard::Pad => opts.into_iter().filter(|o| o.is_none()).collect(),
            TapeGuard::Any => opts,
        };
        if opts.is_empty() {
            return Ok(());
        }
        options.push(opts);
    }

    let mut choice = vec![0usize; a.arity];
    loop {
        let comps: Vec<Option<NodeId>> =
            choice.iter().enumerate().map(|(t, &i)| options[t][i]).collect();
        if comps.iter().any(|c| c.is_some()) {
            ground_try_data(
                a, g, prop_index, gs, dt, &comps, alphabet, states, order, transitions, queue,
                from, cap,
            )?;
        }
        // advance the mixed-radix counter
        let mut t = 0;
        loop {
            if t == a.arity {
                return Ok(());
            }
            choice[t] += 1;
            if choice[t] < options[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn ground_try_data(
    _a: &Rdpa,
    g: &Arc<DataGraph>,
    prop_index: &HashMap<&[String], u32>,
    gs: &GroundState,
    dt: &DataTransition,
    comps: &[Option<NodeId>],
    alphabet: &mut GroundedAlphabet,
    states: &mut HashMap<GroundState, u32>,
    order: &mut Vec<GroundState>,
    transitions: &mut Vec<(u32, u32, u32)>,
    queue: &mut VecDeque<u32>,
    from: u32,
    cap: usize,
) -> Result<(), RdpaError> {
    let prop_of = |v: NodeId| prop_index[g.props_of(v)];
    for &(r, t) in &dt.eq {
        let v = comps[t].expect("guarded");
        let ok = match r.kind {
            RegKind::Id => gs.regs.ids[r.index] == Some(v),
            RegKind::Data => gs.regs.props[r.index] == Some(prop_of(v)),
        };
        if !ok {
            return Ok(());
        }
    }
    for &(r, t) in &dt.ne {
        let v = comps[t].expect("guarded");
        let hit = match r.kind {
            RegKind::Id => gs.regs.ids[r.index] == Some(v),
            RegKind::Data => gs.regs.props[r.index] == Some(prop_of(v)),
        };
        if hit {
            return Ok(());
        }
    }
    for &(kind, i, j) in &dt.eq_inputs {
        let (x, y) = (comps[i].expect("guarded"), comps[j].expect("guarded"));
        let eq = match kind {
            RegKind::Id => x == y,
            RegKind::Data => prop_of(x) == prop_of(y),
        };
        if !eq {
            return Ok(());
        }
    }
    for &(kind, i, j) in &dt.ne_inputs {
        let (x, y) = (comps[i].expect("guarded"), comps[j].expect("guarded"));
        let eq = match kind {
            RegKind::Id => x == y,
            RegKind::Data => prop_of(x) == prop_of(y),
        };
        if eq {
            return Ok(());
        }
    }
    let mut regs = gs.regs.clone();
    for r in &dt.reset {
        match r.kind {
            RegKind::Id => regs.ids[r.index] = None,
            RegKind::Data => regs.props[r.index] = None,
        }
    }
    for &(r, t) in &dt.update {
        let v = comps[t].expect("guarded");
        match r.kind {
            RegKind::Id => regs.ids[r.index] = Some(v),
            RegKind::Data => regs.props[r.index] = Some(prop_of(v)),
        }
    }
    let tapes: Vec<TapePos> = comps
        .iter()
        .map(|c| match c {
            Some(v) => TapePos::At(*v),
            None => TapePos::Done,
        })
        .collect();
    let letter = Letter(
        comps
            .iter()
            .map(|c| match c {
                Some(v) => Comp::Node(v.0),
                None => Comp::Pad,
            })
            .collect(),
    );
    let next = GroundState { state: dt.to, regs, tapes };
    let lid = alphabet.intern(letter);
    let target = intern_state(next, states, order, queue, cap)?;
    transitions.push((from, lid, target));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn ground_word_step(
    a: &Rdpa,
    g: &Arc<DataGraph>,
    gs: &GroundState,
    wt: &WordTransition,
    alphabet: &mut GroundedAlphabet,
    states: &mut HashMap<GroundState, u32>,
    order: &mut Vec<GroundState>,
    transitions: &mut Vec<(u32, u32, u32)>,
    queue: &mut VecDeque<u32>,
    from: u32,
    cap: usize,
) -> Result<(), RdpaError> {
    // Per-tape options: (label read or pad, next tape position).
    type Opt = (Option<crate::graph::LabelId>, TapePos);
    let mut options: Vec<Vec<Opt>> = Vec::with_capacity(a.arity);
    for (t, pos) in gs.tapes.iter().enumerate() {
        let pat = &wt.labels[t];
        let mut opts: Vec<Opt> = Vec::new();
        match *pos {
            TapePos::At(v) => {
                for &(l, w) in g.successors(v) {
                    let matches = match pat {
                        LabelPat::Any | LabelPat::Free => true,
                        LabelPat::Is(s) => g.label_name(l) == s,
                        LabelPat::Pad => false,
                    };
                    if matches {
                        opts.push((Some(l), TapePos::Head(w)));
                    }
                }
                if matches!(pat, LabelPat::Pad | LabelPat::Free) {
                    opts.push((None, TapePos::Done));
                }
            }
            TapePos::Done => {
                if matches!(pat, LabelPat::Pad | LabelPat::Free) {
                    opts.push((None, TapePos::Done));
                }
            }
            TapePos::Start | TapePos::Head(_) => {
                unreachable!("word phase cannot see a pre-data tape")
            }
        }
        if opts.is_empty() {
            return Ok(());
        }
        options.push(opts);
    }

    let mut choice = vec![0usize; a.arity];
    loop {
        let comps: Vec<&Opt> = choice.iter().enumerate().map(|(t, &i)| &options[t][i]).collect();
        let labels_ok = {
            let lab = |i: usize| comps[i].0.map(|l| g.label_name(l));
            wt.eq_labels.iter().all(|&(i, j)| match (lab(i), lab(j)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            }) && wt.ne_labels.iter().all(|&(i, j)| match (lab(i), lab(j)) {
                (Some(a), Some(b)) => a != b,
                _ => false,
            })
        };
        let any_real = comps.iter().any(|c| c.0.is_some());
        if labels_ok && any_real {
            let letter = Letter(
                comps
                    .iter()
                    .map(|c| match c.0 {
                        Some(l) => Comp::Label(l.0),
                        None => Comp::Pad,
                    })
                    .collect(),
            );
            let next = GroundState {
                state: wt.to,
                regs: gs.regs.clone(),
                tapes: comps.iter().map(|c| c.1).collect(),
            };
            let lid = alphabet.intern(letter);
            let target = intern_state(next, states, order, queue, cap)?;
            transitions.push((from, lid, target));
        }
        let mut t = 0;
        loop {
            if t == a.arity {
                return Ok(());
            }
            choice[t] += 1;
            if choice[t] < options[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

fn intern_state(
    s: GroundState,
    states: &mut HashMap<GroundState, u32>,
    order: &mut Vec<GroundState>,
    queue: &mut VecDeque<u32>,
    cap: usize,
) -> Result<u32, RdpaError> {
    if let Some(&i) = states.get(&s) {
        return Ok(i);
    }
    if order.len() >= cap {
        return Err(RdpaError::StateCapExceeded(cap));
    }
    let i = order.len() as u32;
    states.insert(s.clone(), i);
    order.push(s);
    queue.push_back(i);
    Ok(i)
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

/// Incremental construction helper; validation happens in [`RdpaBuilder::build`].
pub struct RdpaBuilder {
    arity: usize,
    kinds: Vec<StateKind>,
    initial: Option<usize>,
    finals: BTreeSet<usize>,
    id_registers: usize,
    data_registers: usize,
    word_transitions: Vec<WordTransition>,
    data_transitions: Vec<DataTransition>,
}

impl RdpaBuilder {
    pub fn new(arity: usize) -> Self {
        RdpaBuilder {
            arity,
            kinds: Vec::new(),
            initial: None,
            finals: BTreeSet::new(),
            id_registers: 0,
            data_registers: 0,
            word_transitions: Vec::new(),
            data_transitions: Vec::new(),
        }
    }

    pub fn registers(&mut self, id: usize, data: usize) -> &mut Self {
        self.id_registers = id;
        self.data_registers = data;
        self
    }

    pub fn data_state(&mut self) -> usize {
        self.kinds.push(StateKind::Data);
        self.kinds.len() - 1
    }

    pub fn word_state(&mut self) -> usize {
        self.kinds.push(StateKind::Word);
        self.kinds.len() - 1
    }

    pub fn initial(&mut self, s: usize) -> &mut Self {
        self.initial = Some(s);
        self
    }

    pub fn final_state(&mut self, s: usize) -> &mut Self {
        self.finals.insert(s);
        self
    }

    pub fn word(&mut self, from: usize, labels: Vec<LabelPat>, to: usize) -> &mut Self {
        self.word_transitions.push(WordTransition {
            from,
            labels,
            eq_labels: vec![],
            ne_labels: vec![],
            to,
        });
        self
    }

    pub fn word_full(&mut self, wt: WordTransition) -> &mut Self {
        self.word_transitions.push(wt);
        self
    }

    pub fn data(&mut self, from: usize, guards: Vec<TapeGuard>, to: usize) -> &mut Self {
        self.data_full(DataTransition {
            from,
            guards,
            eq: vec![],
            ne: vec![],
            eq_inputs: vec![],
            ne_inputs: vec![],
            update: vec![],
            reset: vec![],
            to,
        })
    }

    pub fn data_full(&mut self, dt: DataTransition) -> &mut Self {
        self.data_transitions.push(dt);
        self
    }

    pub fn build(&self) -> Result<Rdpa, RdpaError> {
        let a = Rdpa {
            arity: self.arity,
            kinds: self.kinds.clone(),
            initial: self.initial.expect("initial state not set"),
            finals: self.finals.clone(),
            id_registers: self.id_registers,
            data_registers: self.data_registers,
            word_transitions: self.word_transitions.clone(),
            data_transitions: self.data_transitions.clone(),
        };
        a.validate()?;
        Ok(a)
    }
}

/// Convenience constructor for a data transition.
pub fn dtrans(from: usize, guards: Vec<TapeGuard>, to: usize) -> DataTransition {
    DataTransition {
        from,
        guards,
        eq: vec![],
        ne: vec![],
        eq_inputs: vec![],
        ne_inputs: vec![],
        update: vec![],
        reset: vec![],
        to,
    }
}

/// Maps over a builtin-style automaton union: the operands keep their states;
/// a fresh initial data state receives copies of both initial states'
/// outgoing transitions. Register pools are merged by taking maxima, so
/// operands written against disjoint register indices stay independent.
pub fn union(a: &Rdpa, b: &Rdpa) -> Result<Rdpa, RdpaError> {
    assert_eq!(a.arity, b.arity, "union requires equal arity");
    let offset = a.kinds.len();
    let mut kinds = a.kinds.clone();
    kinds.extend(b.kinds.iter().copied());
    let fresh = kinds.len();
    kinds.push(StateKind::Data);
    let mut word_transitions = a.word_transitions.clone();
    let mut data_transitions = a.data_transitions.clone();
    for wt in &b.word_transitions {
        let mut wt = wt.clone();
        wt.from += offset;
        wt.to += offset;
        word_transitions.push(wt);
    }
    for dt in &b.data_transitions {
        let mut dt = dt.clone();
        dt.from += offset;
        dt.to += offset;
        data_transitions.push(dt);
    }
    // copy initial-state outgoing transitions onto the fresh initial
    let mut extra = Vec::new();
    for dt in &data_transitions {
        if dt.from == a.initial || dt.from == b.initial + offset {
            let mut dt = dt.clone();
            dt.from = fresh;
            extra.push(dt);
        }
    }
    data_transitions.extend(extra);
    let mut finals = a.finals.clone();
    finals.extend(b.finals.iter().map(|f| f + offset));
    let merged = Rdpa {
        arity: a.arity,
        kinds,
        initial: fresh,
        finals,
        id_registers: a.id_registers.max(b.id_registers),
        data_registers: a.data_registers.max(b.data_registers),
        word_transitions,
        data_transitions,
    };
    merged.validate()?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::builtins;
    use super::*;

    fn dv(id: &str, props: &[&str]) -> DataValue {
        DataValue::new(id, props.iter().map(|s| s.to_string()).collect())
    }

    fn dpath(props: &[&str]) -> DataPath {
        // distinct ids, one property each, labels all "a"
        let values: Vec<DataValue> =
            props.iter().enumerate().map(|(i, p)| dv(&format!("i{i}"), &[p])).collect();
        let labels = vec!["a".to_string(); props.len().saturating_sub(1)];
        DataPath::new(values, labels)
    }

    #[test]
    fn fig2_step_stores_first_value() {
        let a = builtins::first_value_repeats();
        let c = a.initial_configuration();
        assert_eq!(c.data_regs, vec![None]);
        let col = [Some(dv("i0", &["d"]))];
        let next = step(&a, &c, &InputSymbol::Data(&col)).unwrap();
        assert_eq!(next.len(), 1);
        let n = next.first().unwrap();
        assert_eq!(n.data_regs[0].as_deref(), Some(["d".to_string()].as_slice()));
    }

    #[test]
    fn fig2_step_checks_register_equality() {
        let a = builtins::first_value_repeats();
        // configuration at the checking data state with x = d
        let mut c = a.initial_configuration();
        let col = [Some(dv("i0", &["d"]))];
        c = step(&a, &c, &InputSymbol::Data(&col)).unwrap().pop_first().unwrap();
        let lab = [Some("a".to_string())];
        let c = step(&a, &c, &InputSymbol::Labels(&lab)).unwrap().pop_first().unwrap();
        let col2 = [Some(dv("i1", &["d"]))];
        let next = step(&a, &c, &InputSymbol::Data(&col2)).unwrap();
        assert!(next.iter().any(|n| a.finals.contains(&n.state)));
    }

    #[test]
    fn fig2_step_rejects_wrong_symbol_kind() {
        let a = builtins::first_value_repeats();
        let c = a.initial_configuration();
        let lab = [Some("a".to_string())];
        let err = step(&a, &c, &InputSymbol::Labels(&lab)).unwrap_err();
        assert!(matches!(err, RdpaError::SymbolKindMismatch { .. }));
    }

    #[test]
    fn fig2_accepts_value_repeat() {
        let a = builtins::first_value_repeats();
        assert!(accepts(&a, &[dpath(&["1", "2", "1"])]).unwrap());
        assert!(!accepts(&a, &[dpath(&["1"])]).unwrap());
        assert!(!accepts(&a, &[dpath(&["1", "2", "3"])]).unwrap());
        assert!(accepts(&a, &[dpath(&["1", "1"])]).unwrap());
    }

    #[test]
    fn equality_conflict_rejected_at_construction() {
        let mut b = RdpaBuilder::new(1);
        let d0 = b.data_state();
        let w0 = b.word_state();
        b.registers(1, 0).initial(d0).final_state(w0);
        let mut dt = dtrans(d0, vec![TapeGuard::Value], w0);
        dt.eq.push((Reg::id(0), 0));
        dt.ne.push((Reg::id(0), 0));
        b.data_full(dt);
        let err = b.build().unwrap_err();
        assert!(matches!(err, RdpaError::EqualityConflict(_, _)));
    }

    #[test]
    fn arity_mismatch_detected() {
        let a = builtins::even_length();
        let err = accepts(&a, &[dpath(&["1"]), dpath(&["2"])]).unwrap_err();
        assert!(matches!(err, RdpaError::ArityMismatch { .. }));
    }

    #[test]
    fn union_accepts_either_language() {
        let u = union(&builtins::even_length(), &builtins::first_value_repeats()).unwrap();
        assert!(accepts(&u, &[dpath(&["1", "2"])]).unwrap() == false);
        assert!(accepts(&u, &[dpath(&["1", "2", "3"])]).unwrap()); // even length
        assert!(accepts(&u, &[dpath(&["1", "2", "1", "4"])]).unwrap()); // repeat of first
    }

    #[test]
    fn automaton_json_round_trip() {
        let a = builtins::same_endpoints();
        let j = a.to_json();
        let b = Rdpa::from_json(&j).unwrap();
        assert_eq!(a, b);
    }
}
