//! Machine documents and DOT export.
//!
//! A machine document is a JSON object:
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "monoid": {"kind":"free","generators":["α","β"]},
//!   "alphabet": ["a","b"],
//!   "states": ["1","2"],
//!   "initial": {"value":[],"state":"1"},
//!   "termination": {"1":["α"],"2":null},
//!   "transitions": [
//!     {"from":"1","letter":"b","output":["β"],"to":"2"}
//!   ]
//! }
//! ```
//!
//! `initial` is `null` when undefined, and so are undefined terminations.
//! Elements use the wire forms of [`Monoid::to_json`].

use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::monoid::{Monoid, MonoidSpec};
use crate::transducer::Transducer;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: u64,
    monoid: MonoidSpec,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Option<InitialEntry>,
    #[serde(default)]
    termination: Map<String, Value>,
    #[serde(default)]
    transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialEntry {
    value: Value,
    state: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionEntry {
    from: String,
    letter: String,
    output: Value,
    to: String,
}

/// A decoded machine with the notes produced while canonicalizing it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub machine: Transducer,
    pub warnings: Vec<String>,
}

fn compact<T: serde::Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("in-memory JSON serialization")
}

/// Renders the machine document. Output depends only on the machine.
pub fn serialize(t: &Transducer) -> String {
    let m = t.monoid();
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"format_version\": {FORMAT_VERSION},");
    let _ = writeln!(out, "  \"monoid\": {},", compact(m.spec()));
    let _ = writeln!(out, "  \"alphabet\": {},", compact(t.alphabet()));
    let _ = writeln!(out, "  \"states\": {},", compact(t.states()));
    let initial = match t.initial() {
        Some((v, s)) => {
            let mut obj = Map::new();
            obj.insert("value".into(), m.to_json(v));
            obj.insert("state".into(), Value::String(t.states()[*s].clone()));
            Value::Object(obj)
        }
        None => Value::Null,
    };
    let _ = writeln!(out, "  \"initial\": {},", compact(&initial));
    let termination: Map<String, Value> = (0..t.num_states())
        .map(|s| (t.states()[s].clone(), m.partial_to_json(t.termination(s))))
        .collect();
    let _ = writeln!(out, "  \"termination\": {},", compact(&termination));
    let transitions: Vec<String> = t
        .transitions()
        .map(|(s, a, tr)| {
            let mut obj = Map::new();
            obj.insert("from".into(), Value::String(t.states()[s].clone()));
            obj.insert("letter".into(), Value::String(t.alphabet()[a].clone()));
            obj.insert("output".into(), m.to_json(&tr.output));
            obj.insert("to".into(), Value::String(t.states()[tr.target].clone()));
            format!("    {}", compact(&obj))
        })
        .collect();
    if transitions.is_empty() {
        out.push_str("  \"transitions\": []\n");
    } else {
        let _ = write!(out, "  \"transitions\": [\n{}\n  ]\n", transitions.join(",\n"));
    }
    out.push_str("}\n");
    out
}

/// Parses and validates a machine document.
pub fn deserialize(text: &str) -> Result<Loaded> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| Error::schema("document", e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::schema(
            "format_version",
            format!("unsupported version {}", doc.format_version),
        ));
    }
    let monoid = Monoid::new(doc.monoid).map_err(|e| Error::schema("monoid", e.to_string()))?;
    let mut warnings = Vec::new();
    let mut machine = Transducer::new(monoid.clone(), doc.alphabet, doc.states)?;

    let state = |path: &str, name: &str| {
        machine
            .state_index(name)
            .ok_or_else(|| Error::schema(path, format!("unknown state {name:?}")))
    };
    let mut element = |path: String, value: &Value| {
        let (x, canonical) = monoid
            .from_json(value)
            .map_err(|e| Error::schema(path.clone(), e.to_string()))?;
        if !canonical {
            let note = format!("{path}: value {value} canonicalized to {}", monoid.to_json(&x));
            log::warn!("{note}");
            warnings.push(note);
        }
        Ok::<_, Error>(x)
    };

    let initial = match &doc.initial {
        Some(init) => Some((
            element("initial.value".into(), &init.value)?,
            state("initial.state", &init.state)?,
        )),
        None => None,
    };
    let mut terminations = Vec::new();
    for (name, value) in &doc.termination {
        let path = format!("termination.{name}");
        let s = state(&path, name)?;
        if !value.is_null() {
            terminations.push((s, element(path, value)?));
        }
    }
    let mut transitions = Vec::new();
    for (i, tr) in doc.transitions.iter().enumerate() {
        let from = state(&format!("transitions[{i}].from"), &tr.from)?;
        let to = state(&format!("transitions[{i}].to"), &tr.to)?;
        let letter = machine.letter_index(&tr.letter).ok_or_else(|| {
            Error::schema(
                format!("transitions[{i}].letter"),
                format!("unknown letter {:?}", tr.letter),
            )
        })?;
        let output = element(format!("transitions[{i}].output"), &tr.output)?;
        transitions.push((i, from, letter, output, to));
    }

    machine.set_initial(initial);
    for (s, v) in terminations {
        machine.set_termination(s, Some(v));
    }
    for (i, from, letter, output, to) in transitions {
        if machine.transition(from, letter).is_some() {
            return Err(Error::schema(
                format!("transitions[{i}]"),
                "second transition for the same state and letter",
            ));
        }
        machine.add_transition(from, letter, output, to);
    }
    Ok(Loaded { machine, warnings })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: one node per state (termination in the label, ⊥
/// omitted), one edge per transition labeled `letter / output`, and an entry
/// arrow labeled with the initial value.
pub fn to_dot(t: &Transducer) -> String {
    let m = t.monoid();
    let mut out = String::from("digraph transducer {\n  rankdir=LR;\n");
    if t.num_states() == 0 {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  node [shape=circle];\n");
    for (s, name) in t.states().iter().enumerate() {
        match t.termination(s) {
            Some(v) => {
                let label = format!("{name} / {}", m.render(v));
                let _ = writeln!(out, "  {} [label={}, shape=doublecircle];", quote(name), quote(&label));
            }
            None => {
                let _ = writeln!(out, "  {} [label={}];", quote(name), quote(name));
            }
        }
    }
    if let Some((v, s)) = t.initial() {
        out.push_str("  \"__start\" [shape=point, label=\"\"];\n");
        let _ = writeln!(
            out,
            "  \"__start\" -> {} [label={}];",
            quote(&t.states()[*s]),
            quote(&m.render(v))
        );
    }
    for (s, a, tr) in t.transitions() {
        let label = format!("{} / {}", t.alphabet()[a], m.render(&tr.output));
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&t.states()[s]),
            quote(&t.states()[tr.target]),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}
