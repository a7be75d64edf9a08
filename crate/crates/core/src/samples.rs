//! Small hand-built machines used by the demo command and the tests.

use crate::monoid::{Element, Monoid};
use crate::transducer::Transducer;

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn el(m: &Monoid, text: &str) -> Element {
    m.parse(text)
        .unwrap_or_else(|e| panic!("sample output {text:?} is not in the monoid: {e}"))
}

/// Four-state machine over `{a, b}` recognizing `bⁿ ↦ βⁿα`, with an
/// unreachable state `4` and an unproductive state `2`.
///
/// `monoid` must have generators named `α` and `β`.
pub fn b_loop(monoid: Monoid) -> Transducer {
    let m = monoid.clone();
    let mut t = Transducer::new(monoid, strings(&["a", "b"]), strings(&["1", "2", "3", "4"]))
        .expect("valid names");
    t.set_initial(Some((m.unit(), 0)));
    t.set_termination(0, Some(el(&m, "α")));
    t.set_termination(2, Some(el(&m, "α")));
    t.set_termination(3, Some(m.unit()));
    t.add_transition(0, 0, m.unit(), 1);
    t.add_transition(0, 1, el(&m, "β"), 2);
    t.add_transition(2, 1, el(&m, "β"), 2);
    t
}

/// One-state machine `(α, s)`, `s --b/β--> s`, `t(s) = ε`: the minimal form of
/// [`b_loop`] over the free commutative monoid.
pub fn b_loop_minimal(monoid: Monoid) -> Transducer {
    let m = monoid.clone();
    let mut t = Transducer::new(monoid, strings(&["a", "b"]), strings(&["1"])).expect("valid names");
    t.set_initial(Some((el(&m, "α"), 0)));
    t.set_termination(0, Some(m.unit()));
    t.add_transition(0, 1, el(&m, "β"), 0);
    t
}

/// Three-state target over `{a, b}` with outputs in a quotient of `{α, β, γ}*`.
///
/// Its values include `e ↦ α`, `a ↦ γαβα`, `aa ↦ γαβγβαα`, `b ↦ αα` and
/// `bb ↦ ⊥`. States `1` and `2` only differ by the order of `α` and `β` in
/// their `a`-outputs.
pub fn three_state_target(monoid: Monoid) -> Transducer {
    let m = monoid.clone();
    let mut t = Transducer::new(monoid, strings(&["a", "b"]), strings(&["1", "2", "3"]))
        .expect("valid names");
    t.set_initial(Some((m.unit(), 0)));
    for s in 0..3 {
        t.set_termination(s, Some(el(&m, "α")));
    }
    t.add_transition(0, 0, el(&m, "γ·α·β"), 1);
    t.add_transition(0, 1, el(&m, "α"), 2);
    t.add_transition(1, 0, el(&m, "γ·β·α"), 1);
    t.add_transition(1, 1, el(&m, "α"), 2);
    t.add_transition(2, 0, el(&m, "γ·α·β"), 1);
    t
}

/// The two-state hypothesis the learner builds for [`three_state_target`]
/// before its first counterexample: `b` loops back to the initial state.
pub fn two_state_hypothesis(monoid: Monoid) -> Transducer {
    let m = monoid.clone();
    let mut t = Transducer::new(monoid, strings(&["a", "b"]), strings(&["1", "2"]))
        .expect("valid names");
    t.set_initial(Some((m.unit(), 0)));
    t.set_termination(0, Some(el(&m, "α")));
    t.set_termination(1, Some(el(&m, "α")));
    t.add_transition(0, 0, el(&m, "γ·α·β"), 1);
    t.add_transition(0, 1, el(&m, "α"), 0);
    t.add_transition(1, 0, el(&m, "γ·β·α"), 1);
    t.add_transition(1, 1, el(&m, "α"), 0);
    t
}

/// One-state machine over `{a}`: `s --a/αβ--> s`, `t(s) = γ`, so that
/// `aⁿ ↦ (αβ)ⁿγ`.
pub fn ab_power(monoid: Monoid) -> Transducer {
    let m = monoid.clone();
    let mut t = Transducer::new(monoid, strings(&["a"]), strings(&["s"])).expect("valid names");
    t.set_initial(Some((m.unit(), 0)));
    t.set_termination(0, Some(el(&m, "γ")));
    t.add_transition(0, 0, el(&m, "α·β"), 0);
    t
}

/// `{α, β, γ}*` with `α` and `β` commuting.
pub fn alpha_beta_trace() -> Monoid {
    Monoid::trace(&["α", "β", "γ"], &[("α", "β")]).expect("valid trace monoid")
}
