//! Deterministic transducers with outputs in a [`Monoid`].
//!
//! Partiality is encoded by absence: the initial pair, terminations and
//! transitions are all optional. States and letters are referred to by their
//! declaration index.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid, PartialValue, EPSILON, SEPARATOR};

pub type Letter = usize;
pub type StateId = usize;
/// A word over the input alphabet, as letter indices.
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub output: Element,
    pub target: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    monoid: Monoid,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Option<(Element, StateId)>,
    termination: Vec<PartialValue>,
    transitions: Vec<Vec<Option<Transition>>>,
}

impl Transducer {
    /// A machine with the given states and no initial pair, terminations or
    /// transitions.
    pub fn new(monoid: Monoid, alphabet: Vec<String>, states: Vec<String>) -> Result<Self> {
        check_names("alphabet", &alphabet)?;
        check_names("states", &states)?;
        let n = states.len();
        let k = alphabet.len();
        Ok(Transducer {
            monoid,
            alphabet,
            states,
            initial: None,
            termination: vec![None; n],
            transitions: vec![vec![None; k]; n],
        })
    }

    /// Machine without states; recognizes the nowhere-defined function.
    pub fn empty(monoid: Monoid, alphabet: Vec<String>) -> Self {
        Self::new(monoid, alphabet, vec![]).expect("no states to validate")
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> Option<&(Element, StateId)> {
        self.initial.as_ref()
    }

    pub fn termination(&self, s: StateId) -> &PartialValue {
        &self.termination[s]
    }

    pub fn transition(&self, s: StateId, a: Letter) -> Option<&Transition> {
        self.transitions[s][a].as_ref()
    }

    /// Defined transitions as `(from, letter, transition)`, in state then
    /// letter order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, &Transition)> {
        self.transitions.iter().enumerate().flat_map(|(s, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, t)| t.as_ref().map(|t| (s, a, t)))
        })
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn set_initial(&mut self, initial: Option<(Element, StateId)>) {
        if let Some((_, s)) = &initial {
            assert!(*s < self.states.len(), "initial state out of range");
        }
        self.initial = initial;
    }

    pub fn set_termination(&mut self, s: StateId, value: PartialValue) {
        self.termination[s] = value;
    }

    pub fn set_transition(&mut self, s: StateId, a: Letter, t: Option<Transition>) {
        if let Some(t) = &t {
            assert!(t.target < self.states.len(), "transition target out of range");
        }
        self.transitions[s][a] = t;
    }

    /// Adds `s --a / output--> target`.
    pub fn add_transition(&mut self, s: StateId, a: Letter, output: Element, target: StateId) {
        self.set_transition(s, a, Some(Transition { output, target }));
    }

    /// Whether both machines read the same alphabet and write to the same monoid.
    pub fn compatible(&self, other: &Transducer) -> bool {
        self.monoid == other.monoid && self.alphabet == other.alphabet
    }

    fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&a| a >= self.alphabet.len()) {
            Some(a) => Err(Error::UnknownLetter(format!("#{a}"))),
            None => Ok(()),
        }
    }

    /// Reads `w` from the configuration `(value, s)`.
    pub fn run_from(&self, value: Element, s: StateId, w: &[Letter]) -> Result<Option<(Element, StateId)>> {
        self.check_word(w)?;
        let mut config = (value, s);
        for &a in w {
            match &self.transitions[config.1][a] {
                Some(t) => config = (self.monoid.mul(&config.0, &t.output), t.target),
                None => return Ok(None),
            }
        }
        Ok(Some(config))
    }

    /// Configuration reached from the initial pair after reading `w`.
    pub fn run(&self, w: &[Letter]) -> Result<Option<(Element, StateId)>> {
        match &self.initial {
            Some((v, s)) => self.run_from(v.clone(), *s, w),
            None => self.check_word(w).map(|_| None),
        }
    }

    /// The recognized function `L(w)`.
    pub fn eval(&self, w: &[Letter]) -> Result<PartialValue> {
        Ok(self.run(w)?.and_then(|(v, s)| self.finish(&v, s)))
    }

    /// The function recognized from state `s` with the unit as initial value.
    pub fn state_eval(&self, s: StateId, w: &[Letter]) -> Result<PartialValue> {
        Ok(self
            .run_from(self.monoid.unit(), s, w)?
            .and_then(|(v, s)| self.finish(&v, s)))
    }

    fn finish(&self, v: &Element, s: StateId) -> PartialValue {
        self.termination[s].as_ref().map(|t| self.monoid.mul(v, t))
    }

    /// States reachable from the initial state, in declaration order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::new();
        if let Some((_, s0)) = &self.initial {
            seen[*s0] = true;
            queue.push_back(*s0);
        }
        while let Some(s) = queue.pop_front() {
            for t in self.transitions[s].iter().flatten() {
                if !seen[t.target] {
                    seen[t.target] = true;
                    queue.push_back(t.target);
                }
            }
        }
        indices(&seen)
    }

    /// States recognizing a function defined on at least one word.
    pub fn productive_states(&self) -> Vec<StateId> {
        let n = self.states.len();
        let mut predecessors = vec![Vec::new(); n];
        for (s, _, t) in self.transitions() {
            predecessors[t.target].push(s);
        }
        let mut seen: Vec<bool> = self.termination.iter().map(Option::is_some).collect();
        let mut queue: VecDeque<StateId> = indices(&seen).into();
        while let Some(s) = queue.pop_front() {
            for &p in &predecessors[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        indices(&seen)
    }

    /// Restriction to `keep` (declaration order preserved). Transitions into
    /// dropped states disappear; the initial pair is cleared if its state is
    /// dropped.
    pub fn restrict(&self, keep: &[StateId]) -> Transducer {
        let mut map = vec![None; self.states.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut out = Transducer::new(
            self.monoid.clone(),
            self.alphabet.clone(),
            keep.iter().map(|&s| self.states[s].clone()).collect(),
        )
        .expect("subset of valid names");
        out.initial = self
            .initial
            .as_ref()
            .and_then(|(v, s)| map[*s].map(|s| (v.clone(), s)));
        for (new, &old) in keep.iter().enumerate() {
            out.termination[new] = self.termination[old].clone();
            for (a, t) in self.transitions[old].iter().enumerate() {
                out.transitions[new][a] = t.as_ref().and_then(|t| {
                    map[t.target].map(|target| Transition {
                        output: t.output.clone(),
                        target,
                    })
                });
            }
        }
        out
    }

    /// Same machine with states renamed.
    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.states.len() {
            return Err(Error::schema("states", "wrong number of state names"));
        }
        check_names("states", &names)?;
        self.states = names;
        Ok(self)
    }

    /// Parses a word. Letters are joined by `·`; a bare string is read one
    /// character per letter when every letter name is a single character.
    /// The empty string and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(&self.alphabet, text)
    }

    pub fn render_word(&self, w: &[Letter]) -> String {
        render_word(&self.alphabet, w)
    }
}

pub fn parse_word(alphabet: &[String], text: &str) -> Result<Word> {
    let text = text.trim();
    if text.is_empty() || (text == EPSILON && !alphabet.iter().any(|a| a == EPSILON)) {
        return Ok(vec![]);
    }
    let single_chars = alphabet.iter().all(|a| a.chars().count() == 1);
    let pieces: Vec<String> = if text.contains(SEPARATOR) || !single_chars {
        text.split(SEPARATOR).map(|p| p.trim().to_string()).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    };
    pieces
        .into_iter()
        .map(|p| {
            alphabet
                .iter()
                .position(|a| *a == p)
                .ok_or(Error::UnknownLetter(p))
        })
        .collect()
}

pub fn render_word(alphabet: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return EPSILON.to_string();
    }
    let single_chars = alphabet.iter().all(|a| a.chars().count() == 1);
    let letters: Vec<&str> = w.iter().map(|&a| alphabet[a].as_str()).collect();
    if single_chars {
        letters.concat()
    } else {
        letters.join(&SEPARATOR.to_string())
    }
}

fn indices(flags: &[bool]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter_map(|(i, &f)| f.then_some(i))
        .collect()
}

fn check_names(field: &str, names: &[String]) -> Result<()> {
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::schema(format!("{field}[{i}]"), "empty name"));
        }
        if names[..i].contains(name) {
            return Err(Error::schema(format!("{field}[{i}]"), format!("duplicate name {name:?}")));
        }
    }
    Ok(())
}
