//! Random monoid elements and machines for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::monoid::{Element, Monoid};
use crate::transducer::{StateId, Transducer};

/// One instance of each monoid family: free over `{α, β}`, the trace monoid
/// `{α, β, γ}` with `α` and `β` commuting, free commutative over `{α, β}`,
/// `(ℕ, +)` and `ℤ/5ℤ`.
pub fn monoid_instances() -> Vec<Monoid> {
    vec![
        Monoid::free(&["α", "β"]),
        Monoid::trace(&["α", "β", "γ"], &[("α", "β")]).expect("valid trace monoid"),
        Monoid::commutative(&["α", "β"]),
        Monoid::nat_add(),
        Monoid::cyclic(5).expect("valid cyclic group"),
    ]
}

/// An element built from at most `max_len` random generators (for `(ℕ, +)`
/// and cyclic groups, a value in `0..=max_len`).
pub fn element<R: Rng + ?Sized>(m: &Monoid, rng: &mut R, max_len: usize) -> Element {
    let len = rng.gen_range(0..=max_len);
    let gens = m.generators().len().max(1) as u32;
    let word: Vec<u32> = (0..len).map(|_| rng.gen_range(0..gens)).collect();
    m.from_generators(&word)
}

/// Shape of random machines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineShape {
    pub max_states: usize,
    pub letters: usize,
    /// Probability that a given transition exists.
    pub transition_density: f64,
    /// Probability that a given termination value is defined.
    pub termination_density: f64,
    /// Bound on the generator count of each output.
    pub max_output_len: usize,
}

impl Default for MachineShape {
    fn default() -> Self {
        MachineShape {
            max_states: 6,
            letters: 3,
            transition_density: 0.8,
            termination_density: 0.6,
            max_output_len: 2,
        }
    }
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// A random machine with between one and `shape.max_states` states over the
/// letters `a, b, …`.
pub fn machine<R: Rng + ?Sized>(m: &Monoid, rng: &mut R, shape: MachineShape) -> Transducer {
    let n = rng.gen_range(1..=shape.max_states.max(1));
    let mut t = Transducer::new(m.clone(), letters(shape.letters), state_names(n))
        .expect("generated names are distinct");
    t.set_initial(Some((element(m, rng, shape.max_output_len), 0)));
    for s in 0..n {
        if rng.gen_bool(shape.termination_density) {
            t.set_termination(s, Some(element(m, rng, shape.max_output_len)));
        }
        for a in 0..shape.letters {
            if rng.gen_bool(shape.transition_density) {
                let target = rng.gen_range(0..n);
                t.add_transition(s, a, element(m, rng, shape.max_output_len), target);
            }
        }
    }
    t
}

/// Copies of a machine recognizing the same function but built differently.
///
/// With base outputs `c(s, a)`, initial value `c₀` and random per-state
/// elements `u_s`, the first copy outputs `c(s, a) ⊗ u_{s'}` on `s --a--> s'`
/// and starts with `c₀ ⊗ u_{s₀}`; the second outputs `u_s ⊗ c(s, a)` and
/// terminates with `u_s ⊗ t(s)`. Both compute `c₀ u_{s₀} c₁ u_{s₁} ⋯ u_{sₙ} t`.
/// Some states of the second copy are then split in two, with incoming
/// transitions distributed randomly among the copies.
pub fn equivalent_pair<R: Rng + ?Sized>(
    m: &Monoid,
    rng: &mut R,
    shape: MachineShape,
) -> (Transducer, Transducer) {
    let base = machine(m, rng, shape);
    let n = base.num_states();
    let u: Vec<Element> = (0..n).map(|_| element(m, rng, shape.max_output_len)).collect();

    let mut first = base.clone();
    let (c0, s0) = base.initial().cloned().expect("random machines have an initial state");
    first.set_initial(Some((m.mul(&c0, &u[s0]), s0)));
    for (s, a, tr) in base.transitions() {
        first.add_transition(s, a, m.mul(&tr.output, &u[tr.target]), tr.target);
    }

    let mut second = base.clone();
    for s in 0..n {
        let shifted = base.termination(s).as_ref().map(|v| m.mul(&u[s], v));
        second.set_termination(s, shifted);
    }
    for (s, a, tr) in base.transitions() {
        second.add_transition(s, a, m.mul(&u[s], &tr.output), tr.target);
    }
    let split: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    (first, split_states(&second, &split, rng))
}

/// Duplicates each state of `split` (same termination and outgoing
/// transitions) and redirects each incoming transition to the original or
/// the duplicate at random.
pub fn split_states<R: Rng + ?Sized>(t: &Transducer, split: &[StateId], rng: &mut R) -> Transducer {
    let n = t.num_states();
    let mut names = t.states().to_vec();
    let mut copy_of = vec![None; n];
    for &s in split {
        copy_of[s] = Some(names.len());
        names.push(format!("{}'", t.states()[s]));
    }
    let mut out = Transducer::new(t.monoid().clone(), t.alphabet().to_vec(), names)
        .expect("primed names are fresh");
    let pick = |s: StateId, rng: &mut R| match copy_of[s] {
        Some(c) if rng.gen_bool(0.5) => c,
        _ => s,
    };
    if let Some((v, s)) = t.initial() {
        let s = pick(*s, rng);
        out.set_initial(Some((v.clone(), s)));
    }
    for s in 0..n {
        let sources: Vec<StateId> = std::iter::once(s).chain(copy_of[s]).collect();
        for &src in &sources {
            out.set_termination(src, t.termination(s).clone());
            for a in 0..t.alphabet().len() {
                if let Some(tr) = t.transition(s, a) {
                    let target = pick(tr.target, rng);
                    out.add_transition(src, a, tr.output.clone(), target);
                }
            }
        }
    }
    out
}

/// A copy of `t` with one transition output or termination value replaced by
/// a different random element, or with one defined termination removed.
/// Returns `None` when the machine has nothing to perturb.
pub fn perturbed<R: Rng + ?Sized>(t: &Transducer, rng: &mut R, max_len: usize) -> Option<Transducer> {
    let m = t.monoid();
    let edges: Vec<_> = t.transitions().map(|(s, a, tr)| (s, a, tr.clone())).collect();
    let terminating: Vec<StateId> = (0..t.num_states()).filter(|&s| t.termination(s).is_some()).collect();
    let mut out = t.clone();
    let fresh = |old: &Element, rng: &mut R| loop {
        let x = element(m, rng, max_len + 1);
        if x != *old {
            return x;
        }
    };
    if !edges.is_empty() && (terminating.is_empty() || rng.gen_bool(0.5)) {
        let (s, a, tr) = edges.choose(rng)?.clone();
        let output = fresh(&tr.output, rng);
        out.add_transition(s, a, output, tr.target);
    } else {
        let &s = terminating.choose(rng)?;
        let old = t.termination(s).clone().expect("chosen among defined terminations");
        if rng.gen_bool(0.3) {
            out.set_termination(s, None);
        } else {
            out.set_termination(s, Some(fresh(&old, rng)));
        }
    }
    Some(out)
}
