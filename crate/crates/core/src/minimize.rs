//! Minimization in four stages: keep reachable states, keep productive
//! states, push outputs towards the initial arrow, then merge states whose
//! functions are equal up to an invertible on the left.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::monoid::{Element, PartialValue};
use crate::transducer::{StateId, Transducer, Transition};

/// Default round cap of the state left-gcd fixpoint.
pub const DEFAULT_LGCD_ROUNDS: usize = 10_000;

/// How a state of the prefix stage was mapped into the minimal machine:
/// `L_state = witness · L_representative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateWitness {
    pub state: String,
    pub representative: String,
    pub witness: Element,
}

#[derive(Debug, Clone)]
pub struct StagedMinimization {
    pub reach: Transducer,
    pub total: Transducer,
    pub prefix: Transducer,
    pub minimal: Transducer,
    pub state_witnesses: Vec<StateWitness>,
}

impl StagedMinimization {
    /// State counts of the reach, total, prefix and minimal stages.
    pub fn state_counts(&self) -> [usize; 4] {
        [
            self.reach.num_states(),
            self.total.num_states(),
            self.prefix.num_states(),
            self.minimal.num_states(),
        ]
    }
}

pub fn reach(t: &Transducer) -> Transducer {
    t.restrict(&t.reachable_states())
}

pub fn total(t: &Transducer) -> Transducer {
    t.restrict(&t.productive_states())
}

/// Left-gcd of the function recognized from each state (⊥ for unproductive
/// states).
pub fn state_lgcds(t: &Transducer) -> Result<Vec<PartialValue>> {
    state_lgcds_with_cap(t, DEFAULT_LGCD_ROUNDS)
}

/// Fixpoint of `w(s) = lgcd({t(s)} ∪ {out(s,a) ⊗ w(s·a)})` starting from the
/// terminations. Each round can only replace a value by one of its left
/// divisors, so right-noetherian monoids stabilize.
pub fn state_lgcds_with_cap(t: &Transducer, max_rounds: usize) -> Result<Vec<PartialValue>> {
    let m = t.monoid();
    let n = t.num_states();
    let mut current: Vec<PartialValue> = (0..n).map(|s| t.termination(s).clone()).collect();
    for _ in 0..max_rounds {
        let next: Vec<PartialValue> = (0..n)
            .map(|s| {
                let mut family = vec![t.termination(s).clone()];
                for a in 0..t.alphabet().len() {
                    if let Some(tr) = t.transition(s, a) {
                        family.push(current[tr.target].as_ref().map(|w| m.mul(&tr.output, w)));
                    }
                }
                m.lgcd_family(&family)
            })
            .collect();
        let stable = next
            .iter()
            .zip(&current)
            .all(|(a, b)| m.equal_up_to_right_invertible(a, b));
        if stable {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::IterationBudgetExceeded(max_rounds))
}

/// Conjugates every output by the state left-gcds so that each state
/// recognizes a left-coprime function. Expects a trim machine.
pub fn prefix(t: &Transducer) -> Result<Transducer> {
    let m = t.monoid();
    let lgcds = state_lgcds(t)?
        .into_iter()
        .map(|g| g.ok_or_else(|| Error::InternalInconsistency("prefix expects a trim machine".into())))
        .collect::<Result<Vec<Element>>>()?;
    let mut out = t.clone();
    out.set_initial(t.initial().map(|(v, s)| (m.mul(v, &lgcds[*s]), *s)));
    for s in 0..t.num_states() {
        out.set_termination(s, m.left_divide_partial(&Some(lgcds[s].clone()), t.termination(s))?);
        for a in 0..t.alphabet().len() {
            if let Some(tr) = t.transition(s, a) {
                let pushed = m.mul(&tr.output, &lgcds[tr.target]);
                let output = m.left_divide(&lgcds[s], &pushed).ok_or(Error::NotDivisible)?;
                out.add_transition(s, a, output, tr.target);
            }
        }
    }
    Ok(out)
}

/// Witnesses `χ` such that `L¹_{s₁} = χ · L²_{s₂}` for every pair reachable
/// from `(s₁, s₂, χ₀)` in lockstep, or `None` if some pair disagrees.
///
/// Both machines must be trim and prefix-normalized and the monoid
/// cancellative; then `o₁ · L¹_{x₁} = χ · o₂ · L²_{x₂}` forces
/// `L¹_{x₁} = χ' · L²_{x₂}` with `χ' = o₁ \ (χ ⊗ o₂)` invertible.
pub(crate) fn lockstep_witnesses(
    t1: &Transducer,
    t2: &Transducer,
    start: (StateId, StateId, Element),
) -> Option<HashMap<(StateId, StateId), Element>> {
    let m = t1.monoid();
    let mut seen: HashMap<(StateId, StateId), Element> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert((start.0, start.1), start.2.clone());
    queue.push_back(start);
    while let Some((s1, s2, chi)) = queue.pop_front() {
        let expected = t2.termination(s2).as_ref().map(|v| m.mul(&chi, v));
        if *t1.termination(s1) != expected {
            return None;
        }
        for a in 0..t1.alphabet().len() {
            match (t1.transition(s1, a), t2.transition(s2, a)) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    let next = m.left_divide(&x.output, &m.mul(&chi, &y.output))?;
                    if !m.is_invertible(&next) {
                        return None;
                    }
                    match seen.get(&(x.target, y.target)) {
                        Some(prev) if *prev != next => return None,
                        Some(_) => {}
                        None => {
                            seen.insert((x.target, y.target), next.clone());
                            queue.push_back((x.target, y.target, next));
                        }
                    }
                }
                _ => return None,
            }
        }
    }
    Some(seen)
}

/// Shortest word on which state `s` is defined, by breadth-first search.
fn shortest_defined_word(t: &Transducer, s: StateId) -> Option<Vec<usize>> {
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; t.num_states()];
    let mut seen = vec![false; t.num_states()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        if t.termination(u).is_some() {
            let mut word = Vec::new();
            let mut cur = u;
            while let Some((p, a)) = parent[cur] {
                word.push(a);
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for a in 0..t.alphabet().len() {
            if let Some(tr) = t.transition(u, a) {
                if !seen[tr.target] {
                    seen[tr.target] = true;
                    parent[tr.target] = Some((u, a));
                    queue.push_back(tr.target);
                }
            }
        }
    }
    None
}

/// The invertible `χ` with `L_{s1} = χ · L_{s2}` in a trim prefix-normalized
/// machine, if the two functions are equal up to invertibles on the left.
pub(crate) fn left_invertible_witness(t: &Transducer, s1: StateId, s2: StateId) -> Option<Element> {
    let m = t.monoid();
    let w = shortest_defined_word(t, s2)?;
    let v1 = t.state_eval(s1, &w).ok()?;
    let v2 = t.state_eval(s2, &w).ok()?;
    let chi = m.factor_left_invertible(&v1, &v2)?;
    lockstep_witnesses(t, t, (s1, s2, chi.clone())).map(|_| chi)
}

/// Merges states recognizing functions equal up to invertibles on the left.
/// Each block is represented by its earliest state; transitions into a merged
/// state are rerouted to the representative with their output multiplied on
/// the right by the witness.
pub fn observe(t: &Transducer) -> (Transducer, Vec<StateWitness>) {
    let m = t.monoid();
    let n = t.num_states();
    let mut representatives: Vec<StateId> = Vec::new();
    let mut block: Vec<(usize, Element)> = Vec::with_capacity(n);
    for s in 0..n {
        let found = representatives
            .iter()
            .enumerate()
            .find_map(|(b, &r)| left_invertible_witness(t, s, r).map(|chi| (b, chi)));
        match found {
            Some(entry) => block.push(entry),
            None => {
                block.push((representatives.len(), m.unit()));
                representatives.push(s);
            }
        }
    }

    let names = representatives.iter().map(|&r| t.states()[r].clone()).collect();
    let mut out = Transducer::new(m.clone(), t.alphabet().to_vec(), names).expect("subset of valid names");
    out.set_initial(t.initial().map(|(v, s)| {
        let (b, chi) = &block[*s];
        (m.mul(v, chi), *b)
    }));
    for (b, &r) in representatives.iter().enumerate() {
        out.set_termination(b, t.termination(r).clone());
        for a in 0..t.alphabet().len() {
            let rerouted = t.transition(r, a).map(|tr| {
                let (target, chi) = &block[tr.target];
                Transition {
                    output: m.mul(&tr.output, chi),
                    target: *target,
                }
            });
            out.set_transition(b, a, rerouted);
        }
    }

    let witnesses = (0..n)
        .map(|s| StateWitness {
            state: t.states()[s].clone(),
            representative: t.states()[representatives[block[s].0]].clone(),
            witness: block[s].1.clone(),
        })
        .collect();
    (out, witnesses)
}

pub fn minimize(t: &Transducer) -> Result<StagedMinimization> {
    let reach = reach(t);
    let total = total(&reach);
    let prefix = prefix(&total)?;
    let (minimal, state_witnesses) = observe(&prefix);
    Ok(StagedMinimization {
        reach,
        total,
        prefix,
        minimal,
        state_witnesses,
    })
}

/// Whether every state is reachable and the states recognize pairwise
/// distinct left-coprime functions.
pub fn check_minimal(t: &Transducer) -> bool {
    if t.reachable_states().len() != t.num_states() {
        return false;
    }
    let coprime = match state_lgcds(t) {
        Ok(lgcds) => lgcds
            .iter()
            .all(|g| g.as_ref().is_some_and(|g| t.monoid().is_invertible(g))),
        Err(_) => false,
    };
    if !coprime {
        return false;
    }
    (0..t.num_states()).all(|s| (0..s).all(|r| left_invertible_witness(t, s, r).is_none()))
}
