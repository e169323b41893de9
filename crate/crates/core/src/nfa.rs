//! Finite multi-tape automata over the graph-grounded padded alphabet,
//! closed under union, intersection, relativized complement, projection and
//! cylindrification.
//!
//! Letters are interned integers local to each automaton; the alphabet
//! object owns the token table. Words alternate data letters (tuples of
//! node tokens or pads) and label letters, starting and ending with a data
//! letter, and respect the tail-padding discipline by construction.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::NfaError;
use crate::graph::{DataGraph, DataPath, DataValue, NaryDataPath, NodeId, Path};

/// Default cap on subset-construction states during complementation.
pub const DEFAULT_DETERMINIZE_CAP: usize = 1 << 20;

/// One component of a letter: a node-data token, an edge label, or the pad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comp {
    Pad,
    Node(u32),
    Label(u16),
}

/// An m-tuple of components; all-data or all-label per the alternation
/// discipline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub Vec<Comp>);

impl Letter {
    pub fn is_all_pad(&self) -> bool {
        self.0.iter().all(|c| *c == Comp::Pad)
    }

    pub fn pad_set(&self) -> u64 {
        let mut bits = 0u64;
        for (i, c) in self.0.iter().enumerate() {
            if *c == Comp::Pad {
                bits |= 1 << i;
            }
        }
        bits
    }

    pub fn is_data(&self) -> bool {
        self.0.iter().any(|c| matches!(c, Comp::Node(_)))
            || self.0.iter().all(|c| *c == Comp::Pad)
    }

    fn drop_tape(&self, tape: usize) -> Letter {
        let mut v = self.0.clone();
        v.remove(tape);
        Letter(v)
    }

    fn insert_tape(&self, tape: usize, comp: Comp) -> Letter {
        let mut v = self.0.clone();
        v.insert(tape, comp);
        Letter(v)
    }
}

/// Whether a tape ranges over arbitrary data paths or over single nodes
/// (length-0 data paths, the encoding of node variables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TapeKind {
    Path,
    Node,
}

/// The token table and letter interner for automata over a fixed graph and
/// tape layout.
#[derive(Debug, Clone)]
pub struct GroundedAlphabet {
    graph: Arc<DataGraph>,
    kinds: Vec<TapeKind>,
    letters: Vec<Letter>,
    index: HashMap<Letter, u32>,
}

impl GroundedAlphabet {
    pub fn new(graph: Arc<DataGraph>, kinds: Vec<TapeKind>) -> Self {
        GroundedAlphabet { graph, kinds, letters: Vec::new(), index: HashMap::new() }
    }

    pub fn graph(&self) -> &Arc<DataGraph> {
        &self.graph
    }

    pub fn arity(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[TapeKind] {
        &self.kinds
    }

    pub fn intern(&mut self, letter: Letter) -> u32 {
        if let Some(&i) = self.index.get(&letter) {
            return i;
        }
        let i = self.letters.len() as u32;
        self.index.insert(letter.clone(), i);
        self.letters.push(letter);
        i
    }

    pub fn lookup(&self, letter: &Letter) -> Option<u32> {
        self.index.get(letter).copied()
    }

    pub fn get(&self, id: u32) -> &Letter {
        &self.letters[id as usize]
    }

    pub fn compatible(&self, other: &GroundedAlphabet) -> bool {
        self.kinds == other.kinds
            && (Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph)
    }

    pub fn comp_text(&self, c: &Comp) -> String {
        match c {
            Comp::Pad => "#".to_string(),
            Comp::Node(i) => format!("n:{}", self.graph.id_of(NodeId(*i))),
            Comp::Label(i) => self.graph.label_name(crate::graph::LabelId(*i)).to_string(),
        }
    }

    pub fn letter_text(&self, l: &Letter) -> String {
        let parts: Vec<String> = l.0.iter().map(|c| self.comp_text(c)).collect();
        format!("({})", parts.join(","))
    }
}

/// A multi-tape NFA over a grounded alphabet.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: GroundedAlphabet,
    num_states: u32,
    initials: BTreeSet<u32>,
    finals: BTreeSet<u32>,
    trans: Vec<Vec<(u32, u32)>>,
}

impl Nfa {
    pub fn new(
        alphabet: GroundedAlphabet,
        num_states: u32,
        initials: BTreeSet<u32>,
        finals: BTreeSet<u32>,
    ) -> Self {
        Nfa {
            alphabet,
            num_states,
            initials,
            finals,
            trans: vec![Vec::new(); num_states as usize],
        }
    }

    /// The automaton with the empty language over the given layout.
    pub fn empty(graph: Arc<DataGraph>, kinds: Vec<TapeKind>) -> Self {
        Nfa::new(GroundedAlphabet::new(graph, kinds), 0, BTreeSet::new(), BTreeSet::new())
    }

    pub fn add_transition(&mut self, from: u32, letter: u32, to: u32) {
        self.trans[from as usize].push((letter, to));
    }

    pub fn alphabet(&self) -> &GroundedAlphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity()
    }

    pub fn state_count(&self) -> usize {
        self.num_states as usize
    }

    pub fn transition_count(&self) -> usize {
        self.trans.iter().map(|t| t.len()).sum()
    }

    fn letter_map(&self) -> Vec<BTreeMap<&Letter, Vec<u32>>> {
        let mut out: Vec<BTreeMap<&Letter, Vec<u32>>> = vec![BTreeMap::new(); self.trans.len()];
        for (s, list) in self.trans.iter().enumerate() {
            for &(l, t) in list {
                out[s].entry(self.alphabet.get(l)).or_default().push(t);
            }
        }
        out
    }

    /// Removes states that are unreachable or cannot reach a final state.
    pub fn pruned(&self) -> Nfa {
        let n = self.num_states as usize;
        let mut fwd = vec![false; n];
        let mut queue: VecDeque<u32> = self.initials.iter().copied().collect();
        for &i in &self.initials {
            fwd[i as usize] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &(_, t) in &self.trans[s as usize] {
                if !fwd[t as usize] {
                    fwd[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut rev_adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (s, list) in self.trans.iter().enumerate() {
            for &(_, t) in list {
                rev_adj[t as usize].push(s as u32);
            }
        }
        let mut bwd = vec![false; n];
        let mut queue: VecDeque<u32> = self.finals.iter().copied().collect();
        for &f in &self.finals {
            bwd[f as usize] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev_adj[s as usize] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| fwd[i] && bwd[i]).collect();
        let remap: HashMap<usize, u32> =
            keep.iter().enumerate().map(|(new, &old)| (old, new as u32)).collect();
        let mut alphabet = GroundedAlphabet::new(
            Arc::clone(&self.alphabet.graph),
            self.alphabet.kinds.clone(),
        );
        let mut out = Nfa::new(
            alphabet.clone(),
            keep.len() as u32,
            self.initials.iter().filter_map(|i| remap.get(&(*i as usize)).copied()).collect(),
            self.finals.iter().filter_map(|f| remap.get(&(*f as usize)).copied()).collect(),
        );
        for &old in &keep {
            let from = remap[&old];
            for &(l, t) in &self.trans[old] {
                if let Some(&to) = remap.get(&(t as usize)) {
                    let lid = alphabet.intern(self.alphabet.get(l).clone());
                    out.trans[from as usize].push((lid, to));
                }
            }
        }
        out.alphabet = alphabet;
        out
    }

    /// Language union; layouts must match.
    pub fn union(&self, other: &Nfa) -> Result<Nfa, NfaError> {
        if !self.alphabet.compatible(&other.alphabet) {
            return Err(NfaError::LayoutMismatch);
        }
        let off = self.num_states;
        let mut alphabet =
            GroundedAlphabet::new(Arc::clone(&self.alphabet.graph), self.alphabet.kinds.clone());
        let mut initials = self.initials.clone();
        initials.extend(other.initials.iter().map(|i| i + off));
        let mut finals = self.finals.clone();
        finals.extend(other.finals.iter().map(|f| f + off));
        let mut out =
            Nfa::new(alphabet.clone(), self.num_states + other.num_states, initials, finals);
        for (s, list) in self.trans.iter().enumerate() {
            for &(l, t) in list {
                let lid = alphabet.intern(self.alphabet.get(l).clone());
                out.trans[s].push((lid, t));
            }
        }
        for (s, list) in other.trans.iter().enumerate() {
            for &(l, t) in list {
                let lid = alphabet.intern(other.alphabet.get(l).clone());
                out.trans[s + off as usize].push((lid, t + off));
            }
        }
        out.alphabet = alphabet;
        Ok(out.pruned())
    }

    /// Language intersection via the synchronous product.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa, NfaError> {
        if !self.alphabet.compatible(&other.alphabet) {
            return Err(NfaError::LayoutMismatch);
        }
        let bmap = other.letter_map();
        let mut alphabet =
            GroundedAlphabet::new(Arc::clone(&self.alphabet.graph), self.alphabet.kinds.clone());
        let mut states: HashMap<(u32, u32), u32> = HashMap::new();
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in &self.initials {
            for &j in &other.initials {
                let id = order.len() as u32;
                if states.insert((i, j), id).is_none() {
                    order.push((i, j));
                    queue.push_back(id);
                }
            }
        }
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(idx) = queue.pop_front() {
            let (p, q) = order[idx as usize];
            for &(l, t) in &self.trans[p as usize] {
                let letter = self.alphabet.get(l);
                if let Some(qts) = bmap[q as usize].get(letter) {
                    for &qt in qts {
                        let key = (t, qt);
                        let target = *states.entry(key).or_insert_with(|| {
                            let id = order.len() as u32;
                            order.push(key);
                            queue.push_back(id);
                            id
                        });
                        let lid = alphabet.intern(letter.clone());
                        transitions.push((idx, lid, target));
                    }
                }
            }
        }
        let finals: BTreeSet<u32> = order
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| self.finals.contains(p) && other.finals.contains(q))
            .map(|(i, _)| i as u32)
            .collect();
        let mut out = Nfa::new(alphabet, order.len() as u32, BTreeSet::from([0u32]), finals);
        out.initials = (0..order.len() as u32)
            .filter(|i| {
                let (p, q) = order[*i as usize];
                self.initials.contains(&p) && other.initials.contains(&q)
            })
            .collect();
        for (s, l, t) in transitions {
            out.trans[s as usize].push((l, t));
        }
        Ok(out.pruned())
    }

    /// Relative complement: L(universe) minus L(self), by subset construction
    /// driven by the universe automaton's transitions.
    pub fn complement(&self, universe: &Nfa) -> Result<Nfa, NfaError> {
        self.complement_with_cap(universe, DEFAULT_DETERMINIZE_CAP)
    }

    pub fn complement_with_cap(&self, universe: &Nfa, cap: usize) -> Result<Nfa, NfaError> {
        if !self.alphabet.compatible(&universe.alphabet) {
            return Err(NfaError::LayoutMismatch);
        }
        let amap = self.letter_map();
        type SubState = (u32, BTreeSet<u32>);
        let mut alphabet =
            GroundedAlphabet::new(Arc::clone(&self.alphabet.graph), self.alphabet.kinds.clone());
        let mut states: HashMap<SubState, u32> = HashMap::new();
        let mut order: Vec<SubState> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        let base: BTreeSet<u32> = self.initials.clone();
        for &u in &universe.initials {
            let key = (u, base.clone());
            let id = order.len() as u32;
            if states.insert(key.clone(), id).is_none() {
                order.push(key);
                queue.push_back(id);
            }
        }
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(idx) = queue.pop_front() {
            let (u, subset) = order[idx as usize].clone();
            for &(l, ut) in &universe.trans[u as usize] {
                let letter = universe.alphabet.get(l);
                let mut next: BTreeSet<u32> = BTreeSet::new();
                for &q in &subset {
                    if let Some(ts) = amap[q as usize].get(letter) {
                        next.extend(ts.iter().copied());
                    }
                }
                let key = (ut, next);
                let target = match states.get(&key) {
                    Some(&t) => t,
                    None => {
                        if order.len() >= cap {
                            return Err(NfaError::StateCapExceeded(cap));
                        }
                        let id = order.len() as u32;
                        states.insert(key.clone(), id);
                        order.push(key);
                        queue.push_back(id);
                        id
                    }
                };
                let lid = alphabet.intern(letter.clone());
                transitions.push((idx, lid, target));
            }
        }
        let finals: BTreeSet<u32> = order
            .iter()
            .enumerate()
            .filter(|(_, (u, subset))| {
                universe.finals.contains(u) && subset.iter().all(|q| !self.finals.contains(q))
            })
            .map(|(i, _)| i as u32)
            .collect();
        let initials: BTreeSet<u32> = order
            .iter()
            .enumerate()
            .filter(|(_, (u, subset))| universe.initials.contains(u) && *subset == base)
            .map(|(i, _)| i as u32)
            .collect();
        let mut out = Nfa::new(alphabet, order.len() as u32, initials, finals);
        for (s, l, t) in transitions {
            out.trans[s as usize].push((l, t));
        }
        Ok(out.pruned())
    }

    /// Drops a tape. Accepts a word iff some extension on the dropped tape is
    /// accepted by the original; trailing columns that became all-pad are
    /// re-normalized away. Assumes the language respects the padding
    /// discipline (every automaton built by this crate does).
    pub fn project(&self, tape: usize) -> Result<Nfa, NfaError> {
        let m = self.arity();
        if m < 2 {
            return Err(NfaError::ProjectUnary);
        }
        if tape >= m {
            return Err(NfaError::BadTape(tape, m));
        }
        let mut kinds = self.alphabet.kinds.clone();
        kinds.remove(tape);
        let mut alphabet = GroundedAlphabet::new(Arc::clone(&self.alphabet.graph), kinds);
        // finals extend backwards over transitions whose projected letter is
        // all-pad (such letters occur only in trailing runs)
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); self.num_states as usize];
        for (s, list) in self.trans.iter().enumerate() {
            for &(l, t) in list {
                if self.alphabet.get(l).drop_tape(tape).is_all_pad() {
                    rev[t as usize].push(s as u32);
                }
            }
        }
        let mut finals = self.finals.clone();
        let mut queue: VecDeque<u32> = finals.iter().copied().collect();
        while let Some(f) = queue.pop_front() {
            for &p in &rev[f as usize] {
                if finals.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        let mut out =
            Nfa::new(alphabet.clone(), self.num_states, self.initials.clone(), finals);
        for (s, list) in self.trans.iter().enumerate() {
            for &(l, t) in list {
                let letter = self.alphabet.get(l).drop_tape(tape);
                if letter.is_all_pad() {
                    continue;
                }
                let lid = alphabet.intern(letter);
                out.trans[s].push((lid, t));
            }
        }
        out.alphabet = alphabet;
        Ok(out.pruned())
    }

    /// Inserts an unconstrained tape at the given position, ranging over
    /// valid data paths (or single nodes) of the graph, with correct padding
    /// on both sides.
    pub fn cylindrify(&self, tape: usize, kind: TapeKind) -> Result<Nfa, NfaError> {
        let m = self.arity();
        if tape > m {
            return Err(NfaError::BadTape(tape, m + 1));
        }
        let g = Arc::clone(&self.alphabet.graph);
        let mut kinds = self.alphabet.kinds.clone();
        kinds.insert(tape, kind);
        let mut alphabet = GroundedAlphabet::new(Arc::clone(&g), kinds);

        // Extension states for the base automaton: real states, then an
        // all-pad tail once a final has been reached.
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Ext {
            Real(u32),
            TailWord,
            TailData,
        }
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Phase {
            Data,
            Word,
        }
        type CState = (Ext, Tracker, Phase);
        let mut states: HashMap<CState, u32> = HashMap::new();
        let mut order: Vec<CState> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in &self.initials {
            let key = (Ext::Real(i), Tracker::Start, Phase::Data);
            let id = order.len() as u32;
            if states.insert(key, id).is_none() {
                order.push(key);
                queue.push_back(id);
            }
        }
        let all_pad_base = Letter(vec![Comp::Pad; m]);
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(idx) = queue.pop_front() {
            let (ext, tr, phase) = order[idx as usize];
            // base moves: real transitions, or entering/continuing the tail
            let mut base_moves: Vec<(Letter, Ext)> = Vec::new();
            match ext {
                Ext::Real(q) => {
                    for &(l, t) in &self.trans[q as usize] {
                        base_moves.push((self.alphabet.get(l).clone(), Ext::Real(t)));
                    }
                    if self.finals.contains(&q) && phase == Phase::Word {
                        base_moves.push((all_pad_base.clone(), Ext::TailData));
                    }
                }
                Ext::TailData => base_moves.push((all_pad_base.clone(), Ext::TailWord)),
                Ext::TailWord => base_moves.push((all_pad_base.clone(), Ext::TailData)),
            }
            let tracker_moves = tr.moves(&g, kind, phase == Phase::Data);
            for (base_letter, next_ext) in &base_moves {
                for (comp, next_tr) in &tracker_moves {
                    if base_letter.is_all_pad() && *comp == Comp::Pad {
                        continue;
                    }
                    let letter = base_letter.insert_tape(tape, *comp);
                    let next_phase = match phase {
                        Phase::Data => Phase::Word,
                        Phase::Word => Phase::Data,
                    };
                    let key = (*next_ext, *next_tr, next_phase);
                    let target = *states.entry(key).or_insert_with(|| {
                        let id = order.len() as u32;
                        order.push(key);
                        queue.push_back(id);
                        id
                    });
                    let lid = alphabet.intern(letter);
                    transitions.push((idx, lid, target));
                }
            }
        }
        let finals: BTreeSet<u32> = order
            .iter()
            .enumerate()
            .filter(|(_, (ext, tr, phase))| {
                *phase == Phase::Word
                    && tr.at_end()
                    && match ext {
                        Ext::Real(q) => self.finals.contains(q),
                        Ext::TailWord => true,
                        Ext::TailData => false,
                    }
            })
            .map(|(i, _)| i as u32)
            .collect();
        let initials: BTreeSet<u32> = order
            .iter()
            .enumerate()
            .filter(|(_, (ext, tr, phase))| {
                matches!(ext, Ext::Real(q) if self.initials.contains(q))
                    && *tr == Tracker::Start
                    && *phase == Phase::Data
            })
            .map(|(i, _)| i as u32)
            .collect();
        let mut out = Nfa::new(alphabet, order.len() as u32, initials, finals);
        for (s, l, t) in transitions {
            out.trans[s as usize].push((l, t));
        }
        Ok(out.pruned())
    }

    /// True iff the language is empty.
    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// A shortest accepted word, when one exists.
    pub fn witness(&self) -> Option<Vec<Letter>> {
        self.shortest_word()
    }

    fn shortest_word(&self) -> Option<Vec<Letter>> {
        let mut prev: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut seen: BTreeSet<u32> = self.initials.clone();
        let mut queue: VecDeque<u32> = self.initials.iter().copied().collect();
        let mut hit = self.initials.iter().copied().find(|s| self.finals.contains(s));
        while hit.is_none() {
            let s = queue.pop_front()?;
            for &(l, t) in &self.trans[s as usize] {
                if seen.insert(t) {
                    prev.insert(t, (s, l));
                    if self.finals.contains(&t) {
                        hit = Some(t);
                        break;
                    }
                    queue.push_back(t);
                }
            }
        }
        let mut at = hit?;
        let mut letters = Vec::new();
        while let Some(&(p, l)) = prev.get(&at) {
            letters.push(self.alphabet.get(l).clone());
            at = p;
        }
        letters.reverse();
        Some(letters)
    }

    /// Membership of an explicit word.
    pub fn accepts_letters(&self, word: &[Letter]) -> bool {
        let mut cur: BTreeSet<u32> = self.initials.clone();
        for letter in word {
            let Some(lid) = self.alphabet.lookup(letter) else {
                return false;
            };
            let mut next = BTreeSet::new();
            for &s in &cur {
                for &(l, t) in &self.trans[s as usize] {
                    if l == lid {
                        next.insert(t);
                    }
                }
            }
            cur = next;
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|s| self.finals.contains(s))
    }

    /// Membership of a convolved tuple of data paths.
    pub fn accepts_nary(&self, word: &NaryDataPath) -> bool {
        match encode_nary(&self.alphabet.graph, word) {
            Some(letters) => self.accepts_letters(&letters),
            None => false,
        }
    }

    /// Membership of a single data path (arity-1 automata).
    pub fn accepts_data_path(&self, dp: &DataPath) -> bool {
        self.accepts_nary(&crate::graph::convolve(std::slice::from_ref(dp)))
    }

    /// All accepted words of at most `max_letters` letters, decoded; the
    /// debugging language dump.
    pub fn sample_language(&self, max_letters: usize) -> BTreeSet<Vec<Letter>> {
        let mut out = BTreeSet::new();
        let init: BTreeSet<u32> = self.initials.clone();
        let mut stack: Vec<(BTreeSet<u32>, Vec<Letter>)> = vec![(init, Vec::new())];
        while let Some((set, word)) = stack.pop() {
            if set.iter().any(|s| self.finals.contains(s)) && !word.is_empty() {
                out.insert(word.clone());
            }
            if word.len() >= max_letters {
                continue;
            }
            let mut by_letter: BTreeMap<&Letter, BTreeSet<u32>> = BTreeMap::new();
            for &s in &set {
                for &(l, t) in &self.trans[s as usize] {
                    by_letter.entry(self.alphabet.get(l)).or_default().insert(t);
                }
            }
            for (letter, next) in by_letter {
                let mut w = word.clone();
                w.push(letter.clone());
                stack.push((next, w));
            }
        }
        out
    }

    /// Structural check of the alternation and tail-padding discipline.
    pub fn check_discipline(&self) -> bool {
        // phase consistency by BFS from initials
        let mut phase: Vec<Option<bool>> = vec![None; self.num_states as usize]; // true = expects data
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in &self.initials {
            phase[i as usize] = Some(true);
            queue.push_back(i);
        }
        while let Some(s) = queue.pop_front() {
            let expects_data = phase[s as usize].unwrap();
            for &(l, t) in &self.trans[s as usize] {
                let letter = self.alphabet.get(l);
                let is_data = letter
                    .0
                    .iter()
                    .all(|c| matches!(c, Comp::Node(_) | Comp::Pad));
                let is_label = letter
                    .0
                    .iter()
                    .all(|c| matches!(c, Comp::Label(_) | Comp::Pad));
                if letter.is_all_pad() {
                    return false;
                }
                if expects_data && !is_data {
                    return false;
                }
                if !expects_data && !is_label {
                    return false;
                }
                match phase[t as usize] {
                    None => {
                        phase[t as usize] = Some(!expects_data);
                        queue.push_back(t);
                    }
                    Some(p) => {
                        if p != !expects_data {
                            return false;
                        }
                    }
                }
            }
        }
        // finals must sit after data letters
        for &f in &self.finals {
            if let Some(p) = phase[f as usize] {
                if p {
                    return false;
                }
            }
        }
        // pad monotonicity: incoming pads subset of outgoing pads, per state
        for s in 0..self.num_states as usize {
            let mut in_pads = 0u64;
            let mut has_in = false;
            for list in &self.trans {
                for &(l, t) in list {
                    if t as usize == s {
                        in_pads |= self.alphabet.get(l).pad_set();
                        has_in = true;
                    }
                }
            }
            if !has_in {
                continue;
            }
            for &(l, _) in &self.trans[s] {
                if in_pads & !self.alphabet.get(l).pad_set() != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        for s in 0..self.num_states {
            let peripheries = if self.finals.contains(&s) { 2 } else { 1 };
            let _ = writeln!(out, "  s{s} [shape=circle peripheries={peripheries}];");
        }
        for &i in &self.initials {
            let _ = writeln!(out, "  i{i} [shape=point]; i{i} -> s{i};");
        }
        for (s, list) in self.trans.iter().enumerate() {
            for &(l, t) in list {
                let _ = writeln!(
                    out,
                    "  s{} -> s{} [label=\"{}\"];",
                    s,
                    t,
                    self.alphabet.letter_text(self.alphabet.get(l))
                );
            }
        }
        let _ = writeln!(out, "}}");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let trans: Vec<serde_json::Value> = self
            .trans
            .iter()
            .enumerate()
            .flat_map(|(s, list)| {
                list.iter().map(move |&(l, t)| {
                    serde_json::json!([s, self.alphabet.letter_text(self.alphabet.get(l)), t])
                })
            })
            .collect();
        serde_json::json!({
            "arity": self.arity(),
            "states": self.num_states,
            "initials": self.initials,
            "finals": self.finals,
            "transitions": trans,
        })
    }
}

/// Walk state of one tape inside universe/cylindrification constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Tracker {
    Start,
    At(NodeId),
    Head(NodeId),
    PadPending,
    Done,
}

impl Tracker {
    /// The possible (component, next state) moves for one letter.
    pub(crate) fn moves(&self, g: &DataGraph, kind: TapeKind, data_phase: bool) -> Vec<(Comp, Tracker)> {
        let mut out = Vec::new();
        if data_phase {
            match *self {
                Tracker::Start => {
                    for v in g.nodes() {
                        out.push((Comp::Node(v.0), Tracker::At(v)));
                    }
                }
                Tracker::Head(w) => out.push((Comp::Node(w.0), Tracker::At(w))),
                Tracker::PadPending => out.push((Comp::Pad, Tracker::Done)),
                Tracker::At(_) | Tracker::Done => unreachable!("phase desync"),
            }
        } else {
            match *self {
                Tracker::At(v) => {
                    if kind == TapeKind::Path {
                        for &(l, w) in g.successors(v) {
                            out.push((Comp::Label(l.0), Tracker::Head(w)));
                        }
                    }
                    out.push((Comp::Pad, Tracker::PadPending));
                }
                Tracker::Done => out.push((Comp::Pad, Tracker::PadPending)),
                Tracker::Start | Tracker::Head(_) | Tracker::PadPending => {
                    unreachable!("phase desync")
                }
            }
        }
        out
    }

    pub(crate) fn at_end(&self) -> bool {
        matches!(self, Tracker::At(_) | Tracker::Done)
    }
}

/// The universe automaton: accepts exactly the convolutions of tuples of
/// data paths of the graph (single nodes on node tapes).
pub fn universe_kinds(g: &Arc<DataGraph>, kinds: &[TapeKind]) -> Nfa {
    let m = kinds.len();
    assert!(m >= 1);
    let mut alphabet = GroundedAlphabet::new(Arc::clone(g), kinds.to_vec());
    type UState = (Vec<Tracker>, bool); // trackers, expects-data
    let mut states: HashMap<UState, u32> = HashMap::new();
    let mut order: Vec<UState> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let init = (vec![Tracker::Start; m], true);
    states.insert(init.clone(), 0);
    order.push(init);
    queue.push_back(0);
    let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
    while let Some(idx) = queue.pop_front() {
        let (trs, data_phase) = order[idx as usize].clone();
        let per_tape: Vec<Vec<(Comp, Tracker)>> =
            trs.iter().zip(kinds).map(|(t, k)| t.moves(g, *k, data_phase)).collect();
        let mut choice = vec![0usize; m];
        'outer: loop {
            let comps: Vec<(Comp, Tracker)> =
                choice.iter().enumerate().map(|(t, &i)| per_tape[t][i]).collect();
            if comps.iter().any(|(c, _)| *c != Comp::Pad) {
                let letter = Letter(comps.iter().map(|(c, _)| *c).collect());
                let key: UState = (comps.iter().map(|(_, t)| *t).collect(), !data_phase);
                let target = *states.entry(key.clone()).or_insert_with(|| {
                    let id = order.len() as u32;
                    order.push(key);
                    queue.push_back(id);
                    id
                });
                let lid = alphabet.intern(letter);
                transitions.push((idx, lid, target));
            }
            let mut t = 0;
            loop {
                if t == m {
                    break 'outer;
                }
                choice[t] += 1;
                if choice[t] < per_tape[t].len() {
                    break;
                }
                choice[t] = 0;
                t += 1;
            }
        }
    }
    let finals: BTreeSet<u32> = order
        .iter()
        .enumerate()
        .filter(|(_, (trs, data_phase))| !data_phase && trs.iter().all(|t| t.at_end()))
        .map(|(i, _)| i as u32)
        .collect();
    let mut out = Nfa::new(alphabet, order.len() as u32, BTreeSet::from([0u32]), finals);
    for (s, l, t) in transitions {
        out.trans[s as usize].push((l, t));
    }
    out.pruned()
}

/// The universe over m path tapes.
pub fn universe(g: &Arc<DataGraph>, arity: usize) -> Nfa {
    universe_kinds(g, &vec![TapeKind::Path; arity])
}

/// Encodes a convolved word over the graph's tokens; `None` when a value or
/// label does not occur in the graph.
pub fn encode_nary(g: &Arc<DataGraph>, word: &NaryDataPath) -> Option<Vec<Letter>> {
    let mut letters = Vec::with_capacity(2 * word.len() + 1);
    let node_of = |dv: &DataValue| -> Option<Comp> {
        let v = g.node_by_id(&dv.id)?;
        if g.props_of(v) == dv.props.as_slice() {
            Some(Comp::Node(v.0))
        } else {
            None
        }
    };
    for j in 0..=word.len() {
        let mut comps = Vec::with_capacity(word.arity());
        for c in word.data_col(j) {
            comps.push(match c {
                Some(dv) => node_of(dv)?,
                None => Comp::Pad,
            });
        }
        letters.push(Letter(comps));
        if j < word.len() {
            let mut comps = Vec::with_capacity(word.arity());
            for c in word.label_col(j) {
                comps.push(match c {
                    Some(l) => Comp::Label(g.label_by_name(l)?.0),
                    None => Comp::Pad,
                });
            }
            letters.push(Letter(comps));
        }
    }
    Some(letters)
}

/// Decodes an accepted word back into per-tape paths of the graph; `None`
/// components of the result are tapes that were entirely pad (impossible for
/// valid words).
pub fn decode_word(g: &Arc<DataGraph>, kinds: &[TapeKind], word: &[Letter]) -> Vec<Option<Path>> {
    let m = kinds.len();
    let mut paths: Vec<Option<Path>> = vec![None; m];
    for t in 0..m {
        let mut nodes: Vec<NodeId> = Vec::new();
        let mut labels: Vec<crate::graph::LabelId> = Vec::new();
        for (j, letter) in word.iter().enumerate() {
            match letter.0[t] {
                Comp::Node(v) => nodes.push(NodeId(v)),
                Comp::Label(l) => labels.push(crate::graph::LabelId(l)),
                Comp::Pad => {}
            }
            let _ = j;
        }
        if nodes.is_empty() {
            continue;
        }
        let steps: Vec<(crate::graph::LabelId, NodeId)> =
            labels.into_iter().zip(nodes.iter().skip(1).copied()).collect();
        let p = Path { start: nodes[0], steps };
        debug_assert!(g.is_path(&p));
        paths[t] = Some(p);
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::convolve;
    use crate::rdpa::{builtins, ground};
    use std::sync::Arc;

    fn tri() -> Arc<DataGraph> {
        Arc::new(corpus::directed_cycle(3))
    }

    #[test]
    fn universe_accepts_exactly_convolutions() {
        let g = tri();
        let u = universe(&g, 2);
        let paths: Vec<_> = g.paths_up_to(3).collect();
        for p in paths.iter().take(8) {
            for q in paths.iter().take(8) {
                let w = convolve(&[g.dp(p), g.dp(q)]);
                assert!(u.accepts_nary(&w), "universe must accept {} | {}", p.render(&g), q.render(&g));
            }
        }
        assert!(u.check_discipline());
    }

    #[test]
    fn universe_unary_equals_ground_of_accept_all() {
        let g = tri();
        let u = universe(&g, 1);
        let ga = ground(&builtins::accept_all(1), &g).unwrap();
        let lu = u.sample_language(7);
        let la = ga.sample_language(7);
        assert_eq!(lu, la);
    }

    #[test]
    fn union_with_empty_is_identity() {
        let g = tri();
        let a = ground(&builtins::even_length(), &g).unwrap();
        let e = Nfa::empty(Arc::clone(&g), vec![TapeKind::Path]);
        let u = a.union(&e).unwrap();
        assert_eq!(u.sample_language(7), a.sample_language(7));
    }

    #[test]
    fn intersect_with_complement_is_empty() {
        let g = tri();
        let a = ground(&builtins::even_length(), &g).unwrap();
        let u = universe(&g, 1);
        let c = a.complement(&u).unwrap();
        assert!(a.intersect(&c).unwrap().is_empty());
    }

    #[test]
    fn double_complement_restores_language() {
        let g = tri();
        let a = ground(&builtins::node_repeats(), &g).unwrap();
        let u = universe(&g, 1);
        let cc = a.complement(&u).unwrap().complement(&u).unwrap();
        assert_eq!(cc.sample_language(9), a.sample_language(9));
    }

    #[test]
    fn project_cylindrify_round_trip() {
        let g = tri();
        let a = ground(&builtins::even_length(), &g).unwrap();
        let c = a.cylindrify(1, TapeKind::Path).unwrap();
        assert!(c.check_discipline());
        let p = c.project(1).unwrap();
        assert_eq!(p.sample_language(7), a.sample_language(7));
    }

    #[test]
    fn project_of_equality_automaton_is_universe() {
        let g = tri();
        let eq = ground(&builtins::path_equal(), &g).unwrap();
        let p = eq.project(1).unwrap();
        let u = universe(&g, 1);
        assert_eq!(p.sample_language(7), u.sample_language(7));
    }

    #[test]
    fn witness_is_shortest() {
        let g = tri();
        let u = universe(&g, 1);
        assert!(!u.is_empty());
        let w = u.witness().unwrap();
        assert_eq!(w.len(), 1, "a single data letter is the shortest word");
    }

    #[test]
    fn empty_automaton_is_empty() {
        let g = tri();
        let e = Nfa::empty(Arc::clone(&g), vec![TapeKind::Path]);
        assert!(e.is_empty());
        assert!(e.witness().is_none());
    }
}
