//! Membership and equivalence oracles, isomorphism of minimal machines and
//! brute-force comparison.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::minimize::{check_minimal, lockstep_witnesses, minimize};
use crate::monoid::{Element, Monoid, PartialValue};
use crate::transducer::{Letter, StateId, Transducer, Word};

/// Answers the target function on a word.
pub trait MembershipOracle {
    fn query(&self, word: &[Letter]) -> Result<PartialValue>;
}

/// Decides whether a hypothesis recognizes the target function.
pub trait EquivalenceOracle {
    fn check(&self, hypothesis: &Transducer) -> Result<EquivalenceVerdict>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent,
    /// A word with the reference value (`left`) and the hypothesis value
    /// (`right`), which differ.
    CounterExample {
        word: Word,
        left: PartialValue,
        right: PartialValue,
    },
}

/// Membership answers read off a reference machine.
#[derive(Debug, Clone)]
pub struct ReferenceMembership {
    reference: Transducer,
}

impl ReferenceMembership {
    pub fn new(reference: Transducer) -> Self {
        ReferenceMembership { reference }
    }
}

impl MembershipOracle for ReferenceMembership {
    fn query(&self, word: &[Letter]) -> Result<PartialValue> {
        self.reference.eval(word)
    }
}

pub fn membership_oracle(reference: Transducer) -> ReferenceMembership {
    ReferenceMembership::new(reference)
}

/// Exact equivalence against a reference machine.
#[derive(Debug, Clone)]
pub struct ReferenceEquivalence {
    reference: Transducer,
}

impl ReferenceEquivalence {
    pub fn new(reference: Transducer) -> Self {
        ReferenceEquivalence { reference }
    }
}

impl EquivalenceOracle for ReferenceEquivalence {
    fn check(&self, hypothesis: &Transducer) -> Result<EquivalenceVerdict> {
        equivalence(&self.reference, hypothesis)
    }
}

pub fn equivalence_oracle(reference: Transducer) -> ReferenceEquivalence {
    ReferenceEquivalence::new(reference)
}

/// An equivalence oracle that fails the run whenever it is consulted.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbortingEquivalence;

impl EquivalenceOracle for AbortingEquivalence {
    fn check(&self, hypothesis: &Transducer) -> Result<EquivalenceVerdict> {
        Err(Error::EquivalenceAborted(format!(
            "hypothesis with {} states submitted",
            hypothesis.num_states()
        )))
    }
}

/// Membership oracle over the one-letter alphabet `{a}` answering `aⁿ` with
/// the canonical form of `αⁿβⁿγ` in its monoid. Over the free monoid it
/// keeps the learner from ever closing its table.
#[derive(Debug, Clone)]
pub struct AdversarialOracle {
    monoid: Monoid,
    generators: [u32; 3],
}

impl AdversarialOracle {
    /// `monoid` must have generators named `α`, `β` and `γ`.
    pub fn new(monoid: Monoid) -> Result<Self> {
        let index = |name: &str| {
            monoid
                .generators()
                .iter()
                .position(|g| g == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let generators = [index("α")?, index("β")?, index("γ")?];
        Ok(AdversarialOracle { monoid, generators })
    }

    /// The oracle over the free monoid `{α, β, γ}*`.
    pub fn free() -> Self {
        Self::new(Monoid::free(&["α", "β", "γ"])).expect("generators are present")
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn alphabet() -> Vec<String> {
        vec!["a".to_string()]
    }
}

impl MembershipOracle for AdversarialOracle {
    fn query(&self, word: &[Letter]) -> Result<PartialValue> {
        if let Some(a) = word.iter().find(|&&a| a != 0) {
            return Err(Error::UnknownLetter(format!("#{a}")));
        }
        let n = word.len();
        let [alpha, beta, gamma] = self.generators;
        let mut gens = vec![alpha; n];
        gens.extend(std::iter::repeat_n(beta, n));
        gens.push(gamma);
        Ok(Some(self.monoid.from_generators(&gens)))
    }
}

/// A state bijection between two minimal machines: state `s` of the left
/// machine corresponds to `pairs[s].0` of the right one with
/// `L_s = pairs[s].1 · L_{pairs[s].0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub pairs: Vec<(StateId, Element)>,
}

/// Isomorphism up to invertibles between two minimal machines.
pub fn iso_check(t1: &Transducer, t2: &Transducer) -> Result<Option<Isomorphism>> {
    if !t1.compatible(t2) {
        return Err(Error::Incompatible);
    }
    if t1.num_states() != t2.num_states() {
        return Ok(None);
    }
    if !check_minimal(t1) || !check_minimal(t2) {
        return Err(Error::NotMinimalInput);
    }
    let m = t1.monoid();
    let (v1, s1, v2, s2) = match (t1.initial(), t2.initial()) {
        (None, None) => return Ok(Some(Isomorphism { pairs: vec![] })),
        (Some((v1, s1)), Some((v2, s2))) => (v1, *s1, v2, *s2),
        _ => return Ok(None),
    };
    let chi = match m.left_divide(v1, v2) {
        Some(chi) if m.is_invertible(&chi) => chi,
        _ => return Ok(None),
    };
    let Some(pairing) = lockstep_witnesses(t1, t2, (s1, s2, chi)) else {
        return Ok(None);
    };
    // Minimal machines are fully reachable, so the lockstep covers every
    // state; it must do so bijectively.
    let mut pairs: Vec<Option<(StateId, Element)>> = vec![None; t1.num_states()];
    let mut used = vec![false; t2.num_states()];
    for ((a, b), chi) in pairing {
        if pairs[a].is_some() || used[b] {
            return Ok(None);
        }
        used[b] = true;
        pairs[a] = Some((b, chi));
    }
    Ok(pairs
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .map(|pairs| Isomorphism { pairs }))
}

type Config = Option<(Element, StateId)>;

fn start_config(t: &Transducer) -> Config {
    t.initial().map(|(v, s)| (v.clone(), *s))
}

fn step_config(t: &Transducer, c: &Config, a: Letter) -> Config {
    c.as_ref().and_then(|(v, s)| {
        t.transition(*s, a)
            .map(|tr| (t.monoid().mul(v, &tr.output), tr.target))
    })
}

fn finish_config(t: &Transducer, c: &Config) -> PartialValue {
    c.as_ref()
        .and_then(|(v, s)| t.termination(*s).as_ref().map(|x| t.monoid().mul(v, x)))
}

/// First word, in length-then-lexicographic order and of length at most
/// `max_len`, on which the two machines differ. Every word is evaluated on
/// both machines except extensions of words on which both runs are already
/// undefined.
pub fn brute_force_diff(t1: &Transducer, t2: &Transducer, max_len: usize) -> Result<Option<Word>> {
    if !t1.compatible(t2) {
        return Err(Error::Incompatible);
    }
    let k = t1.alphabet().len();
    let mut level: Vec<(Word, Config, Config)> = vec![(vec![], start_config(t1), start_config(t2))];
    for len in 0..=max_len {
        for (w, c1, c2) in &level {
            if finish_config(t1, c1) != finish_config(t2, c2) {
                return Ok(Some(w.clone()));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * k);
        for (w, c1, c2) in &level {
            for a in 0..k {
                let (n1, n2) = (step_config(t1, c1, a), step_config(t2, c2, a));
                if n1.is_none() && n2.is_none() {
                    continue;
                }
                let mut v = w.clone();
                v.push(a);
                next.push((v, n1, n2));
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(None)
}


/// Breadth-first search for the length-lexicographically first word of length
/// at most `bound` on which the machines differ. Configuration pairs are
/// normalized by their common left-gcd (the monoids are left-cancellative),
/// and a pair already seen at a smaller word is not expanded again: any
/// difference below it is found first from the earlier word.
pub fn first_difference(t1: &Transducer, t2: &Transducer, bound: usize) -> Result<Option<Word>> {
    if !t1.compatible(t2) {
        return Err(Error::Incompatible);
    }
    let m = t1.monoid();
    let normalize = |c1: Config, c2: Config| -> (Config, Config) {
        match (c1, c2) {
            (Some((v1, s1)), Some((v2, s2))) => {
                let g = m.lgcd(&v1, &v2);
                let r1 = m.left_divide(&g, &v1).expect("lgcd divides");
                let r2 = m.left_divide(&g, &v2).expect("lgcd divides");
                (Some((r1, s1)), Some((r2, s2)))
            }
            (Some((_, s1)), None) => (Some((m.unit(), s1)), None),
            (None, Some((_, s2))) => (None, Some((m.unit(), s2))),
            (None, None) => (None, None),
        }
    };
    let start = normalize(start_config(t1), start_config(t2));
    let mut seen: HashSet<(Config, Config)> = HashSet::new();
    let mut queue: VecDeque<(Word, Config, Config)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((vec![], start.0, start.1));
    while let Some((w, c1, c2)) = queue.pop_front() {
        if finish_config(t1, &c1) != finish_config(t2, &c2) {
            return Ok(Some(w));
        }
        if w.len() == bound {
            continue;
        }
        for a in 0..t1.alphabet().len() {
            let next = normalize(step_config(t1, &c1, a), step_config(t2, &c2, a));
            if next == (None, None) || !seen.insert(next.clone()) {
                continue;
            }
            let mut v = w.clone();
            v.push(a);
            queue.push_back((v, next.0, next.1));
        }
    }
    Ok(None)
}

/// Exact equivalence: both machines are minimized; isomorphic minimal forms
/// are equivalent, otherwise the first differing word is searched up to
/// length `(|S_ref| + 1)(|S_hyp| + 1)`.
pub fn equivalence(reference: &Transducer, hypothesis: &Transducer) -> Result<EquivalenceVerdict> {
    if !reference.compatible(hypothesis) {
        return Err(Error::Incompatible);
    }
    let r = minimize(reference)?.minimal;
    let h = minimize(hypothesis)?.minimal;
    if iso_check(&r, &h)?.is_some() {
        return Ok(EquivalenceVerdict::Equivalent);
    }
    let bound = (r.num_states() + 1) * (h.num_states() + 1);
    match first_difference(&r, &h, bound)? {
        Some(word) => Ok(EquivalenceVerdict::CounterExample {
            left: reference.eval(&word)?,
            right: hypothesis.eval(&word)?,
            word,
        }),
        None => Err(Error::SearchBoundExceeded(bound)),
    }
}

/// Values of `t` on every word of length at most `max_len`, keyed by word.
pub fn values_up_to(t: &Transducer, s: StateId, max_len: usize) -> Result<HashMap<Word, PartialValue>> {
    let mut out = HashMap::new();
    let mut level: Vec<Word> = vec![vec![]];
    for len in 0..=max_len {
        for w in &level {
            out.insert(w.clone(), t.state_eval(s, w)?);
        }
        if len == max_len {
            break;
        }
        level = level
            .iter()
            .flat_map(|w| {
                (0..t.alphabet().len()).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}
