//! The built-in automaton library: length and endpoint comparators, prefix
//! and repeat detectors, the simplicity contract, and the small helper
//! automata used by the logic translations.

use super::{dtrans, union, LabelPat, Rdpa, RdpaBuilder, Reg, RegKind, TapeGuard, WordTransition};
use crate::error::RdpaError;

/// Looks up a library automaton by name. `a_repeat` and `a_nonsimple` are
/// the same construction under both of its roles.
pub fn builtin(name: &str) -> Result<Rdpa, RdpaError> {
    match name {
        "a_even" => Ok(even_length()),
        "a_repeat" | "a_nonsimple" => Ok(node_repeats()),
        "a_visit" => Ok(visits_first_of()),
        "a_prefix" => Ok(prefix_of()),
        "a_same" => Ok(same_endpoints()),
        "a_le" => Ok(length_le()),
        "a_lt" => Ok(length_lt()),
        "a_simple" => Ok(simple_contract()),
        "a_3val" => Ok(exactly_three_values()),
        "a_first_repeat" => Ok(first_value_repeats()),
        "a_all" => Ok(accept_all(1)),
        _ => Err(RdpaError::UnknownBuiltin(name.to_string())),
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &[
        "a_even",
        "a_repeat",
        "a_nonsimple",
        "a_visit",
        "a_prefix",
        "a_same",
        "a_le",
        "a_lt",
        "a_simple",
        "a_3val",
        "a_first_repeat",
        "a_all",
    ]
}

/// Unary: data paths of even length.
pub fn even_length() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let d_even = b.data_state();
    let w_even = b.word_state();
    let d_odd = b.data_state();
    let w_odd = b.word_state();
    b.initial(d_even).final_state(w_even);
    b.data(d_even, vec![TapeGuard::Value], w_even);
    b.word(w_even, vec![LabelPat::Any], d_odd);
    b.data(d_odd, vec![TapeGuard::Value], w_odd);
    b.word(w_odd, vec![LabelPat::Any], d_even);
    b.build().expect("builtin is valid")
}

/// Unary, one id register: nondeterministically records a node id and
/// accepts exactly when the recorded id repeats, i.e. the path is not simple.
pub fn node_repeats() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let d_skip = b.data_state();
    let w_skip = b.word_state();
    let d_st = b.data_state();
    let w_st = b.word_state();
    let d_acc = b.data_state();
    let w_acc = b.word_state();
    b.registers(1, 0).initial(d_skip).final_state(w_acc);
    let r = Reg::id(0);
    b.data(d_skip, vec![TapeGuard::Value], w_skip);
    let mut store = dtrans(d_skip, vec![TapeGuard::Value], w_st);
    store.update.push((r, 0));
    b.data_full(store);
    b.word(w_skip, vec![LabelPat::Any], d_skip);
    b.word(w_st, vec![LabelPat::Any], d_st);
    b.data(d_st, vec![TapeGuard::Value], w_st);
    let mut hit = dtrans(d_st, vec![TapeGuard::Value], w_acc);
    hit.eq.push((r, 0));
    b.data_full(hit);
    b.word(w_acc, vec![LabelPat::Any], d_acc);
    b.data(d_acc, vec![TapeGuard::Value], w_acc);
    b.build().expect("builtin is valid")
}

/// Binary, one id register: stores the first node id of the first tape and
/// accepts when that id appears anywhere along the second tape.
pub fn visits_first_of() -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let s = b.data_state();
    let w_search = b.word_state();
    let d_search = b.data_state();
    let w_acc = b.word_state();
    let d_acc = b.data_state();
    b.registers(1, 0).initial(s).final_state(w_acc);
    let r = Reg::id(0);
    let vv = vec![TapeGuard::Value, TapeGuard::Value];
    let mut hit0 = dtrans(s, vv.clone(), w_acc);
    hit0.eq_inputs.push((RegKind::Id, 0, 1));
    hit0.update.push((r, 0));
    b.data_full(hit0);
    let mut store = dtrans(s, vv, w_search);
    store.update.push((r, 0));
    b.data_full(store);
    b.word(w_search, vec![LabelPat::Free, LabelPat::Free], d_search);
    let mut hit = dtrans(d_search, vec![TapeGuard::Any, TapeGuard::Value], w_acc);
    hit.eq.push((r, 1));
    b.data_full(hit);
    b.data(d_search, vec![TapeGuard::Any, TapeGuard::Any], w_search);
    b.word(w_acc, vec![LabelPat::Free, LabelPat::Free], d_acc);
    b.data(d_acc, vec![TapeGuard::Any, TapeGuard::Any], w_acc);
    b.build().expect("builtin is valid")
}

/// Binary: the first tape is a prefix (possibly the whole) of the second.
pub fn prefix_of() -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let d_b = b.data_state();
    let w_b = b.word_state();
    let d_t = b.data_state();
    let w_t = b.word_state();
    b.initial(d_b).final_state(w_b).final_state(w_t);
    let mut both = dtrans(d_b, vec![TapeGuard::Value, TapeGuard::Value], w_b);
    both.eq_inputs.push((RegKind::Id, 0, 1));
    both.eq_inputs.push((RegKind::Data, 0, 1));
    b.data_full(both);
    b.word_full(WordTransition {
        from: w_b,
        labels: vec![LabelPat::Any, LabelPat::Any],
        eq_labels: vec![(0, 1)],
        ne_labels: vec![],
        to: d_b,
    });
    b.word(w_b, vec![LabelPat::Pad, LabelPat::Any], d_t);
    b.data(d_t, vec![TapeGuard::Pad, TapeGuard::Value], w_t);
    b.word(w_t, vec![LabelPat::Pad, LabelPat::Any], d_t);
    b.build().expect("builtin is valid")
}

/// Binary comparators on endpoint data: `kind` selects id or property
/// comparison of the two last values; `require_first_eq` additionally
/// requires the first ids to coincide (the same-endpoints automaton).
fn endpoints_automaton(kind: RegKind, require_first_eq: bool) -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let s = b.data_state();
    let w_run = b.word_state();
    let d_run = b.data_state();
    let w_g0 = b.word_state();
    let d_0e = b.data_state();
    let w_0run = b.word_state();
    let w_g1 = b.word_state();
    let d_1e = b.data_state();
    let w_1run = b.word_state();
    let w_acc = b.word_state();
    match kind {
        RegKind::Id => b.registers(1, 0),
        RegKind::Data => b.registers(0, 1),
    };
    b.initial(s).final_state(w_acc);
    let r = Reg { kind, index: 0 };
    let vv = vec![TapeGuard::Value, TapeGuard::Value];
    // the four guesses, from the start column and from every running column
    for from in [s, d_run] {
        let first_eq = |dt: &mut super::DataTransition| {
            if require_first_eq && from == s {
                dt.eq_inputs.push((RegKind::Id, 0, 1));
            }
        };
        let mut run = dtrans(from, vv.clone(), w_run);
        first_eq(&mut run);
        b.data_full(run);
        let mut g0 = dtrans(from, vv.clone(), w_g0);
        first_eq(&mut g0);
        g0.update.push((r, 0));
        b.data_full(g0);
        let mut g1 = dtrans(from, vv.clone(), w_g1);
        first_eq(&mut g1);
        g1.update.push((r, 1));
        b.data_full(g1);
        let mut both_end = dtrans(from, vv.clone(), w_acc);
        first_eq(&mut both_end);
        both_end.eq_inputs.push((kind, 0, 1));
        b.data_full(both_end);
    }
    b.word(w_run, vec![LabelPat::Any, LabelPat::Any], d_run);
    b.word(w_g0, vec![LabelPat::Pad, LabelPat::Any], d_0e);
    b.data(d_0e, vec![TapeGuard::Pad, TapeGuard::Value], w_0run);
    let mut acc0 = dtrans(d_0e, vec![TapeGuard::Pad, TapeGuard::Value], w_acc);
    acc0.eq.push((r, 1));
    b.data_full(acc0);
    b.word(w_0run, vec![LabelPat::Pad, LabelPat::Any], d_0e);
    b.word(w_g1, vec![LabelPat::Any, LabelPat::Pad], d_1e);
    b.data(d_1e, vec![TapeGuard::Value, TapeGuard::Pad], w_1run);
    let mut acc1 = dtrans(d_1e, vec![TapeGuard::Value, TapeGuard::Pad], w_acc);
    acc1.eq.push((r, 0));
    b.data_full(acc1);
    b.word(w_1run, vec![LabelPat::Any, LabelPat::Pad], d_1e);
    b.build().expect("builtin is valid")
}

/// Binary, one id register: the two tapes have the same endpoints (equal
/// first ids and equal last ids).
pub fn same_endpoints() -> Rdpa {
    endpoints_automaton(RegKind::Id, true)
}

/// Binary: the last nodes of the two tapes have the same id.
pub fn last_id_eq() -> Rdpa {
    endpoints_automaton(RegKind::Id, false)
}

/// Binary: the last nodes of the two tapes have the same property tuple.
pub fn last_data_eq() -> Rdpa {
    endpoints_automaton(RegKind::Data, false)
}

fn length_compare(strict: bool) -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let d_b = b.data_state();
    let w_b = b.word_state();
    let d_t = b.data_state();
    let w_t = b.word_state();
    b.initial(d_b).final_state(w_t);
    if !strict {
        b.final_state(w_b);
    }
    b.data(d_b, vec![TapeGuard::Value, TapeGuard::Value], w_b);
    b.word(w_b, vec![LabelPat::Any, LabelPat::Any], d_b);
    b.word(w_b, vec![LabelPat::Pad, LabelPat::Any], d_t);
    b.data(d_t, vec![TapeGuard::Pad, TapeGuard::Value], w_t);
    b.word(w_t, vec![LabelPat::Pad, LabelPat::Any], d_t);
    b.build().expect("builtin is valid")
}

/// Binary: the first tape is no longer than the second.
pub fn length_le() -> Rdpa {
    length_compare(false)
}

/// Binary: the first tape is strictly shorter than the second.
pub fn length_lt() -> Rdpa {
    length_compare(true)
}

/// Ternary contract behind the universal simplicity formula: accepts
/// (rho, omega, theta) unless omega and theta are prefixes of rho of
/// different lengths whose last nodes share an id. A path is simple iff all
/// triples built from it are accepted.
pub fn simple_contract() -> Rdpa {
    let d1 = not_prefix(1);
    let d2 = not_prefix(2);
    let d3 = equal_lengths_23();
    let d4 = last_ids_differ_23();
    union(&union(&d1, &d2).expect("arity matches"), &union(&d3, &d4).expect("arity matches"))
        .expect("arity matches")
}

/// Ternary: tape `sub` is not a data-path prefix of tape 0 (mismatch in ids,
/// properties, or labels, or it is longer).
fn not_prefix(sub: usize) -> Rdpa {
    let mut b = RdpaBuilder::new(3);
    let d_f = b.data_state();
    let w_f = b.word_state();
    let d_hit = b.data_state();
    let w_hit = b.word_state();
    b.initial(d_f).final_state(w_hit);
    let any3 = vec![TapeGuard::Any, TapeGuard::Any, TapeGuard::Any];
    let free3 = vec![LabelPat::Free, LabelPat::Free, LabelPat::Free];
    b.data(d_f, any3.clone(), w_f);
    b.word(w_f, free3.clone(), d_f);
    // overrun: tape 0 padded while the candidate prefix is still running
    let mut overrun = any3.clone();
    overrun[0] = TapeGuard::Pad;
    overrun[sub] = TapeGuard::Value;
    b.data(d_f, overrun, w_hit);
    // value mismatch while both are running
    let mut both = any3.clone();
    both[0] = TapeGuard::Value;
    both[sub] = TapeGuard::Value;
    for kind in [RegKind::Id, RegKind::Data] {
        let mut t = dtrans(d_f, both.clone(), w_hit);
        t.ne_inputs.push((kind, 0, sub));
        b.data_full(t);
    }
    // label mismatch
    let mut lab = free3.clone();
    lab[0] = LabelPat::Any;
    lab[sub] = LabelPat::Any;
    b.word_full(WordTransition {
        from: w_f,
        labels: lab,
        eq_labels: vec![],
        ne_labels: vec![(0, sub)],
        to: d_hit,
    });
    b.data(d_hit, any3.clone(), w_hit);
    b.word(w_hit, free3, d_hit);
    b.build().expect("builtin is valid")
}

/// Ternary: tapes 1 and 2 have equal length.
fn equal_lengths_23() -> Rdpa {
    let mut b = RdpaBuilder::new(3);
    let d_b = b.data_state();
    let w_b = b.word_state();
    let d_t = b.data_state();
    let w_t = b.word_state();
    b.initial(d_b).final_state(w_b).final_state(w_t);
    b.data(d_b, vec![TapeGuard::Any, TapeGuard::Value, TapeGuard::Value], w_b);
    b.word(w_b, vec![LabelPat::Free, LabelPat::Any, LabelPat::Any], d_b);
    b.word(w_b, vec![LabelPat::Free, LabelPat::Pad, LabelPat::Pad], d_t);
    b.data(d_t, vec![TapeGuard::Value, TapeGuard::Pad, TapeGuard::Pad], w_t);
    b.word(w_t, vec![LabelPat::Free, LabelPat::Pad, LabelPat::Pad], d_t);
    b.build().expect("builtin is valid")
}

/// Ternary, one id register: the last nodes of tapes 1 and 2 have different
/// ids.
fn last_ids_differ_23() -> Rdpa {
    let mut b = RdpaBuilder::new(3);
    let s = b.data_state();
    let w_run = b.word_state();
    let d_run = b.data_state();
    let w_g1 = b.word_state();
    let d_1e = b.data_state();
    let w_1run = b.word_state();
    let w_g2 = b.word_state();
    let d_2e = b.data_state();
    let w_2run = b.word_state();
    let w_acc = b.word_state();
    let d_acc = b.data_state();
    b.registers(1, 0).initial(s).final_state(w_acc);
    let r = Reg::id(0);
    let run_guard = |s0| vec![s0, TapeGuard::Value, TapeGuard::Value];
    for from in [s, d_run] {
        let g0 = if from == s { TapeGuard::Value } else { TapeGuard::Any };
        b.data(from, run_guard(g0), w_run);
        let mut g1 = dtrans(from, run_guard(g0), w_g1);
        g1.update.push((r, 1));
        b.data_full(g1);
        let mut g2 = dtrans(from, run_guard(g0), w_g2);
        g2.update.push((r, 2));
        b.data_full(g2);
        let mut both = dtrans(from, run_guard(g0), w_acc);
        both.ne_inputs.push((RegKind::Id, 1, 2));
        b.data_full(both);
    }
    b.word(w_run, vec![LabelPat::Free, LabelPat::Any, LabelPat::Any], d_run);
    b.word(w_g1, vec![LabelPat::Free, LabelPat::Pad, LabelPat::Any], d_1e);
    b.data(d_1e, vec![TapeGuard::Any, TapeGuard::Pad, TapeGuard::Value], w_1run);
    let mut acc1 = dtrans(d_1e, vec![TapeGuard::Any, TapeGuard::Pad, TapeGuard::Value], w_acc);
    acc1.ne.push((r, 2));
    b.data_full(acc1);
    b.word(w_1run, vec![LabelPat::Free, LabelPat::Pad, LabelPat::Any], d_1e);
    b.word(w_g2, vec![LabelPat::Free, LabelPat::Any, LabelPat::Pad], d_2e);
    b.data(d_2e, vec![TapeGuard::Any, TapeGuard::Value, TapeGuard::Pad], w_2run);
    let mut acc2 = dtrans(d_2e, vec![TapeGuard::Any, TapeGuard::Value, TapeGuard::Pad], w_acc);
    acc2.ne.push((r, 1));
    b.data_full(acc2);
    b.word(w_2run, vec![LabelPat::Free, LabelPat::Any, LabelPat::Pad], d_2e);
    b.word(w_acc, vec![LabelPat::Free, LabelPat::Pad, LabelPat::Pad], d_acc);
    b.data(d_acc, vec![TapeGuard::Value, TapeGuard::Pad, TapeGuard::Pad], w_acc);
    b.build().expect("builtin is valid")
}

/// Unary, three data registers: the number of distinct property tuples along
/// the path is exactly three.
pub fn exactly_three_values() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let d0 = b.data_state();
    let w1 = b.word_state();
    let d1 = b.data_state();
    let w2 = b.word_state();
    let d2 = b.data_state();
    let w3 = b.word_state();
    let d3 = b.data_state();
    b.registers(0, 3).initial(d0).final_state(w3);
    let v = vec![TapeGuard::Value];
    let r = |i| Reg::data(i);
    let mut first = dtrans(d0, v.clone(), w1);
    first.update.push((r(0), 0));
    b.data_full(first);
    b.word(w1, vec![LabelPat::Any], d1);
    let mut seen0 = dtrans(d1, v.clone(), w1);
    seen0.eq.push((r(0), 0));
    b.data_full(seen0);
    let mut second = dtrans(d1, v.clone(), w2);
    second.ne.push((r(0), 0));
    second.update.push((r(1), 0));
    b.data_full(second);
    b.word(w2, vec![LabelPat::Any], d2);
    for i in 0..2 {
        let mut seen = dtrans(d2, v.clone(), w2);
        seen.eq.push((r(i), 0));
        b.data_full(seen);
    }
    let mut third = dtrans(d2, v.clone(), w3);
    third.ne.push((r(0), 0));
    third.ne.push((r(1), 0));
    third.update.push((r(2), 0));
    b.data_full(third);
    b.word(w3, vec![LabelPat::Any], d3);
    for i in 0..3 {
        let mut seen = dtrans(d3, v.clone(), w3);
        seen.eq.push((r(i), 0));
        b.data_full(seen);
    }
    b.build().expect("builtin is valid")
}

/// Unary, one data register: the example automaton that stores the first
/// property tuple and accepts once a later node carries the same one.
pub fn first_value_repeats() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let q0 = b.data_state();
    let q1 = b.word_state();
    let q2 = b.data_state();
    let q3 = b.word_state();
    let q4 = b.data_state();
    b.registers(0, 1).initial(q0).final_state(q3);
    let x = Reg::data(0);
    let mut store = dtrans(q0, vec![TapeGuard::Value], q1);
    store.update.push((x, 0));
    b.data_full(store);
    b.word(q1, vec![LabelPat::Any], q2);
    let mut check = dtrans(q2, vec![TapeGuard::Value], q3);
    check.eq.push((x, 0));
    b.data_full(check);
    b.data(q2, vec![TapeGuard::Value], q1);
    b.word(q3, vec![LabelPat::Any], q4);
    b.data(q4, vec![TapeGuard::Value], q3);
    b.build().expect("builtin is valid")
}

/// Unary, three id registers: the path visits at least four distinct nodes.
pub fn four_distinct_nodes() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let s_d = b.data_state();
    let s_w = b.word_state();
    b.registers(3, 0).initial(s_d);
    let v = vec![TapeGuard::Value];
    b.data(s_d, v.clone(), s_w);
    b.word(s_w, vec![LabelPat::Any], s_d);
    let mut prev_d = s_d;
    let mut prev_w;
    for k in 0..4usize {
        let w = b.word_state();
        let d = b.data_state();
        let mut store = dtrans(prev_d, v.clone(), w);
        for i in 0..k {
            store.ne.push((Reg::id(i), 0));
        }
        if k < 3 {
            store.update.push((Reg::id(k), 0));
        }
        b.data_full(store);
        b.word(w, vec![LabelPat::Any], d);
        b.data(d, v.clone(), w);
        if k == 3 {
            b.final_state(w);
        }
        prev_w = w;
        let _ = prev_w;
        prev_d = d;
    }
    b.build().expect("builtin is valid")
}

/// Unary, one data register: some property tuple occurs twice along the path.
pub fn data_value_repeats() -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let d_skip = b.data_state();
    let w_skip = b.word_state();
    let d_st = b.data_state();
    let w_st = b.word_state();
    let d_acc = b.data_state();
    let w_acc = b.word_state();
    b.registers(0, 1).initial(d_skip).final_state(w_acc);
    let r = Reg::data(0);
    b.data(d_skip, vec![TapeGuard::Value], w_skip);
    let mut store = dtrans(d_skip, vec![TapeGuard::Value], w_st);
    store.update.push((r, 0));
    b.data_full(store);
    b.word(w_skip, vec![LabelPat::Any], d_skip);
    b.word(w_st, vec![LabelPat::Any], d_st);
    b.data(d_st, vec![TapeGuard::Value], w_st);
    let mut hit = dtrans(d_st, vec![TapeGuard::Value], w_acc);
    hit.eq.push((r, 0));
    b.data_full(hit);
    b.word(w_acc, vec![LabelPat::Any], d_acc);
    b.data(d_acc, vec![TapeGuard::Value], w_acc);
    b.build().expect("builtin is valid")
}

/// Unary: the label word matches `a b* a` for the given two labels.
pub fn labels_a_bstar_a(a: &str, bee: &str) -> Rdpa {
    let mut b = RdpaBuilder::new(1);
    let d0 = b.data_state();
    let w0 = b.word_state();
    let d1 = b.data_state();
    let w1 = b.word_state();
    let d_end = b.data_state();
    let w_end = b.word_state();
    b.initial(d0).final_state(w_end);
    b.data(d0, vec![TapeGuard::Value], w0);
    b.word(w0, vec![LabelPat::Is(a.to_string())], d1);
    b.data(d1, vec![TapeGuard::Value], w1);
    b.word(w1, vec![LabelPat::Is(bee.to_string())], d1);
    b.word(w1, vec![LabelPat::Is(a.to_string())], d_end);
    b.data(d_end, vec![TapeGuard::Value], w_end);
    b.build().expect("builtin is valid")
}

/// Ternary, one id register: (x, pi, y) — tapes 0 and 2 are single nodes and
/// tape 1 runs from the first to the second.
pub fn path_between() -> Rdpa {
    let mut b = RdpaBuilder::new(3);
    let s = b.data_state();
    let w_run = b.word_state();
    let d_run = b.data_state();
    let w_acc = b.word_state();
    b.registers(1, 0).initial(s).final_state(w_acc);
    let r = Reg::id(0);
    let vvv = vec![TapeGuard::Value, TapeGuard::Value, TapeGuard::Value];
    let mut singleton = dtrans(s, vvv.clone(), w_acc);
    singleton.eq_inputs.push((RegKind::Id, 0, 1));
    singleton.eq_inputs.push((RegKind::Id, 1, 2));
    b.data_full(singleton);
    let mut start = dtrans(s, vvv, w_run);
    start.eq_inputs.push((RegKind::Id, 0, 1));
    start.update.push((r, 2));
    b.data_full(start);
    b.word(w_run, vec![LabelPat::Pad, LabelPat::Any, LabelPat::Pad], d_run);
    b.data(d_run, vec![TapeGuard::Pad, TapeGuard::Value, TapeGuard::Pad], w_run);
    let mut last = dtrans(d_run, vec![TapeGuard::Pad, TapeGuard::Value, TapeGuard::Pad], w_acc);
    last.eq.push((r, 1));
    b.data_full(last);
    b.build().expect("builtin is valid")
}

/// Binary: the two tapes are the same data path.
pub fn path_equal() -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let d_b = b.data_state();
    let w_b = b.word_state();
    b.initial(d_b).final_state(w_b);
    let mut both = dtrans(d_b, vec![TapeGuard::Value, TapeGuard::Value], w_b);
    both.eq_inputs.push((RegKind::Id, 0, 1));
    b.data_full(both);
    b.word_full(WordTransition {
        from: w_b,
        labels: vec![LabelPat::Any, LabelPat::Any],
        eq_labels: vec![(0, 1)],
        ne_labels: vec![],
        to: d_b,
    });
    b.build().expect("builtin is valid")
}

/// Binary: length of tape 1 is length of tape 0 plus one, and the last label
/// of tape 1 is `label` (any label when `None`).
pub fn successor_prefix(label: Option<&str>) -> Rdpa {
    let mut b = RdpaBuilder::new(2);
    let d_b = b.data_state();
    let w_b = b.word_state();
    let d_last = b.data_state();
    let w_end = b.word_state();
    b.initial(d_b).final_state(w_end);
    b.data(d_b, vec![TapeGuard::Value, TapeGuard::Value], w_b);
    b.word(w_b, vec![LabelPat::Any, LabelPat::Any], d_b);
    let pat = match label {
        Some(a) => LabelPat::Is(a.to_string()),
        None => LabelPat::Any,
    };
    b.word(w_b, vec![LabelPat::Pad, pat], d_last);
    b.data(d_last, vec![TapeGuard::Pad, TapeGuard::Value], w_end);
    b.build().expect("builtin is valid")
}

/// The trivial automaton accepting every m-tuple of data paths.
pub fn accept_all(arity: usize) -> Rdpa {
    let mut b = RdpaBuilder::new(arity);
    let d = b.data_state();
    let w = b.word_state();
    b.initial(d).final_state(w);
    b.data(d, vec![TapeGuard::Any; arity], w);
    b.word(w, vec![LabelPat::Free; arity], d);
    b.build().expect("builtin is valid")
}

/// The automaton accepting no input at all.
pub fn accept_none(arity: usize) -> Rdpa {
    let mut b = RdpaBuilder::new(arity);
    let d = b.data_state();
    let _w = b.word_state();
    b.initial(d);
    b.build().expect("builtin is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DataPath, DataValue};
    use crate::rdpa::accepts;

    fn dp_ids(ids: &[&str]) -> DataPath {
        let values: Vec<DataValue> =
            ids.iter().map(|i| DataValue::new(*i, vec![format!("p{i}")])).collect();
        let labels = vec!["a".to_string(); ids.len().saturating_sub(1)];
        DataPath::new(values, labels)
    }

    fn dp_props(props: &[&str]) -> DataPath {
        let values: Vec<DataValue> = props
            .iter()
            .enumerate()
            .map(|(i, p)| DataValue::new(format!("i{i}"), vec![p.to_string()]))
            .collect();
        let labels = vec!["a".to_string(); props.len().saturating_sub(1)];
        DataPath::new(values, labels)
    }

    #[test]
    fn even_length_counts_labels() {
        let a = even_length();
        assert!(accepts(&a, &[dp_ids(&["1"])]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["1", "2"])]).unwrap());
        assert!(accepts(&a, &[dp_ids(&["1", "2", "3"])]).unwrap());
    }

    #[test]
    fn node_repeats_matches_simplicity() {
        let a = node_repeats();
        assert!(!accepts(&a, &[dp_ids(&["1", "2", "3"])]).unwrap());
        assert!(accepts(&a, &[dp_ids(&["1", "2", "1"])]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["1"])]).unwrap());
    }

    #[test]
    fn visit_checks_membership_of_first() {
        let a = visits_first_of();
        assert!(accepts(&a, &[dp_ids(&["7"]), dp_ids(&["1", "7", "3"])]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["9"]), dp_ids(&["1", "7", "3"])]).unwrap());
        // match at the very first column
        assert!(accepts(&a, &[dp_ids(&["1", "5"]), dp_ids(&["1"])]).unwrap());
    }

    #[test]
    fn prefix_detects_prefixes_only() {
        let a = prefix_of();
        let long = dp_ids(&["1", "2", "3"]);
        assert!(accepts(&a, &[dp_ids(&["1", "2"]), long.clone()]).unwrap());
        assert!(accepts(&a, &[long.clone(), long.clone()]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["1", "3"]), long.clone()]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["1", "2", "3", "4"]), long]).unwrap());
    }

    #[test]
    fn same_endpoints_on_identical_path() {
        let a = same_endpoints();
        let p = dp_ids(&["1", "2", "3"]);
        assert!(accepts(&a, &[p.clone(), p.clone()]).unwrap());
        assert!(accepts(&a, &[p.clone(), dp_ids(&["1", "9", "3"])]).unwrap());
        assert!(!accepts(&a, &[p.clone(), dp_ids(&["1", "9", "4"])]).unwrap());
        assert!(!accepts(&a, &[p, dp_ids(&["2", "9", "3"])]).unwrap());
        // different lengths, same endpoints
        assert!(accepts(&a, &[dp_ids(&["1", "3"]), dp_ids(&["1", "9", "8", "3"])]).unwrap());
    }

    #[test]
    fn length_comparators() {
        let le = length_le();
        let lt = length_lt();
        let two = dp_ids(&["1", "2"]);
        let three = dp_ids(&["4", "5", "6"]);
        assert!(accepts(&le, &[two.clone(), two.clone()]).unwrap());
        assert!(accepts(&le, &[two.clone(), three.clone()]).unwrap());
        assert!(!accepts(&le, &[three.clone(), two.clone()]).unwrap());
        assert!(!accepts(&lt, &[two.clone(), two.clone()]).unwrap());
        assert!(accepts(&lt, &[two, three]).unwrap());
    }

    #[test]
    fn three_values_exactly() {
        let a = exactly_three_values();
        assert!(accepts(&a, &[dp_props(&["1", "2", "3", "1"])]).unwrap());
        assert!(!accepts(&a, &[dp_props(&["1", "2"])]).unwrap());
        assert!(!accepts(&a, &[dp_props(&["1", "2", "3", "4"])]).unwrap());
    }

    #[test]
    fn three_values_against_count_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let a = exactly_three_values();
        for _ in 0..200 {
            let len = rng.gen_range(1..=6);
            let props: Vec<String> =
                (0..len).map(|_| format!("{}", rng.gen_range(0..5))).collect();
            let refs: Vec<&str> = props.iter().map(|s| s.as_str()).collect();
            let dp = dp_props(&refs);
            let distinct: std::collections::BTreeSet<&String> = props.iter().collect();
            let expect = distinct.len() == 3;
            assert_eq!(accepts(&a, &[dp]).unwrap(), expect, "props {props:?}");
        }
    }

    #[test]
    fn simple_contract_encodes_simplicity() {
        let a = simple_contract();
        // counterexample triple: both prefixes of rho, different lengths,
        // same last id
        let rho = dp_ids(&["1", "2", "1"]);
        let om = dp_ids(&["1"]);
        let th = dp_ids(&["1", "2", "1"]);
        assert!(!accepts(&a, &[rho.clone(), om.clone(), th]).unwrap());
        // a simple path: every prefix pair passes
        let s = dp_ids(&["1", "2", "3"]);
        let p1 = dp_ids(&["1", "2"]);
        let p2 = dp_ids(&["1", "2", "3"]);
        assert!(accepts(&a, &[s.clone(), p1, p2]).unwrap());
        // non-prefixes are accepted vacuously
        assert!(accepts(&a, &[s.clone(), dp_ids(&["9"]), s.clone()]).unwrap());
        // equal lengths are accepted vacuously
        assert!(accepts(&a, &[s.clone(), s.clone(), s]).unwrap());
    }

    #[test]
    fn successor_prefix_checks_length_and_label() {
        let a = successor_prefix(Some("b"));
        let short = dp_ids(&["1", "2"]);
        let long = DataPath::new(
            vec![
                DataValue::new("1", vec!["p1".into()]),
                DataValue::new("2", vec!["p2".into()]),
                DataValue::new("3", vec!["p3".into()]),
            ],
            vec!["a".into(), "b".into()],
        );
        assert!(accepts(&a, &[short.clone(), long.clone()]).unwrap());
        let wrong_label = DataPath::new(
            vec![
                DataValue::new("1", vec!["p1".into()]),
                DataValue::new("2", vec!["p2".into()]),
                DataValue::new("3", vec!["p3".into()]),
            ],
            vec!["a".into(), "a".into()],
        );
        assert!(!accepts(&a, &[short.clone(), wrong_label]).unwrap());
        assert!(!accepts(&a, &[short, dp_ids(&["1", "2", "3", "4"])]).unwrap());
    }

    #[test]
    fn four_distinct_nodes_counts_ids() {
        let a = four_distinct_nodes();
        assert!(accepts(&a, &[dp_ids(&["1", "2", "3", "4"])]).unwrap());
        assert!(!accepts(&a, &[dp_ids(&["1", "2", "3", "1"])]).unwrap());
        assert!(accepts(&a, &[dp_ids(&["1", "2", "1", "3", "4"])]).unwrap());
    }

    #[test]
    fn path_between_checks_endpoints() {
        let a = path_between();
        let x = dp_ids(&["1"]);
        let y = dp_ids(&["3"]);
        let pi = dp_ids(&["1", "2", "3"]);
        assert!(accepts(&a, &[x.clone(), pi.clone(), y.clone()]).unwrap());
        assert!(!accepts(&a, &[y.clone(), pi.clone(), x.clone()]).unwrap());
        let single = dp_ids(&["5"]);
        assert!(accepts(&a, &[single.clone(), single.clone(), single]).unwrap());
        let _ = (x, y);
    }

    #[test]
    fn accept_all_and_none() {
        assert!(accepts(&accept_all(1), &[dp_ids(&["1", "2"])]).unwrap());
        assert!(!accepts(&accept_none(1), &[dp_ids(&["1", "2"])]).unwrap());
        assert!(accepts(&accept_all(2), &[dp_ids(&["1"]), dp_ids(&["2", "3"])]).unwrap());
    }

    #[test]
    fn unknown_builtin_errors() {
        assert!(matches!(builtin("a_bogus"), Err(crate::error::RdpaError::UnknownBuiltin(_))));
        for name in builtin_names() {
            builtin(name).unwrap();
        }
    }
}
