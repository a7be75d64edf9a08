//! Active learning of the minimal transducer from membership and equivalence
//! queries.
//!
//! The learner keeps a prefix-closed set `Q` and a suffix-closed set `T` of
//! input words, and for every `q ∈ Q` and `a ∈ A ∪ {e}` the left-gcd `Λ(q, a)`
//! of the values `L(qat)` over `t ∈ T` together with the left-coprime residual
//! row `R(q, a, ·)`. It extends `Q` and `T` until the table has no closure or
//! consistency defect, assembles a hypothesis and asks the equivalence oracle;
//! counterexamples are added to `Q` with their prefixes.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{Monoid, PartialRow, PartialValue};
use crate::oracle::{EquivalenceOracle, EquivalenceVerdict, MembershipOracle};
use crate::transducer::{render_word, Letter, Transducer, Word};

/// A reason why the table cannot yet be merged into a hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    /// `qa` has a residual row matching no row of `Q`; add it to `Q`.
    Closure(Word),
    /// `at` witnesses a disagreement in definedness: either a prefix with a
    /// nowhere-defined row has a defined extension, or two prefixes whose rows
    /// merge have extensions of which only one is defined. Add it to `T`.
    ConsistencyTot(Word),
    /// `at` witnesses an extension value not left-divisible by the prefix's
    /// left-gcd; add it to `T`.
    ConsistencyInv(Word),
    /// `at` witnesses two merged prefixes whose defined extensions disagree
    /// up to the merging invertible; add it to `T`.
    ConsistencyInj(Word),
}

impl Defect {
    pub fn word(&self) -> &Word {
        match self {
            Defect::Closure(w)
            | Defect::ConsistencyTot(w)
            | Defect::ConsistencyInv(w)
            | Defect::ConsistencyInj(w) => w,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Defect::Closure(_) => "Closure",
            Defect::ConsistencyTot(_) => "ConsistencyTot",
            Defect::ConsistencyInv(_) => "ConsistencyInv",
            Defect::ConsistencyInj(_) => "ConsistencyInj",
        }
    }

    /// `Kind(word)` with the word rendered over `alphabet`.
    pub fn render(&self, alphabet: &[String]) -> String {
        format!("{}({})", self.kind(), render_word(alphabet, self.word()))
    }
}

/// Query and update counters of a learning run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LearnStats {
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    pub q_updates: usize,
    pub t_updates: usize,
    pub loop_iterations: usize,
}

/// Caps after which a run fails with [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest allowed `|Q|`.
    pub max_q: usize,
    /// Largest number of loop iterations (defect repairs plus hypotheses).
    pub max_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 1000,
            max_iterations: 10_000,
        }
    }
}

/// Observation table. Extension index `0` stands for the empty word `e` and
/// index `1 + a` for the letter `a`.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    monoid: Monoid,
    alphabet: Vec<String>,
    q: Vec<Word>,
    t: Vec<Word>,
    lambda: Vec<Vec<PartialValue>>,
    r: Vec<Vec<PartialRow>>,
    answers: HashMap<Word, PartialValue>,
}

impl ObservationTable {
    /// The table with `Q = T = {e}`, not yet filled.
    pub fn new(monoid: Monoid, alphabet: Vec<String>) -> Self {
        ObservationTable {
            monoid,
            alphabet,
            q: vec![vec![]],
            t: vec![vec![]],
            lambda: vec![],
            r: vec![],
            answers: HashMap::new(),
        }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.q
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.t
    }

    /// `Λ(q, ext)` for the `qi`-th prefix.
    pub fn lambda(&self, qi: usize, ext: Option<Letter>) -> &PartialValue {
        &self.lambda[qi][ext.map_or(0, |a| a + 1)]
    }

    /// `R(q, ext, ·)` over `T` for the `qi`-th prefix.
    pub fn row(&self, qi: usize, ext: Option<Letter>) -> &[PartialValue] {
        &self.r[qi][ext.map_or(0, |a| a + 1)]
    }

    /// The memoized membership answer for `w`, if it was queried.
    pub fn answer(&self, w: &[Letter]) -> Option<&PartialValue> {
        self.answers.get(w)
    }

    /// Number of distinct words submitted to the membership oracle.
    pub fn membership_queries(&self) -> usize {
        self.answers.len()
    }

    fn value(&self, w: &[Letter]) -> &PartialValue {
        self.answers
            .get(w)
            .expect("every cell of a filled table has been queried")
    }

    fn word(&self, qi: usize, ext: usize, suffix: &[Letter]) -> Word {
        let mut w = self.q[qi].clone();
        if ext > 0 {
            w.push(ext - 1);
        }
        w.extend_from_slice(suffix);
        w
    }

    /// Queries every missing cell once and recomputes `Λ` and `R`.
    pub fn fill(&mut self, membership: &dyn MembershipOracle) -> Result<()> {
        let width = self.alphabet.len() + 1;
        let mut lambda = Vec::with_capacity(self.q.len());
        let mut rows = Vec::with_capacity(self.q.len());
        for qi in 0..self.q.len() {
            let mut lambda_q = Vec::with_capacity(width);
            let mut rows_q = Vec::with_capacity(width);
            for ext in 0..width {
                let mut raw = Vec::with_capacity(self.t.len());
                for ti in 0..self.t.len() {
                    let w = self.word(qi, ext, &self.t[ti]);
                    let v = match self.answers.get(&w) {
                        Some(v) => v.clone(),
                        None => {
                            let v = membership.query(&w)?;
                            self.answers.insert(w, v.clone());
                            v
                        }
                    };
                    raw.push(v);
                }
                lambda_q.push(self.monoid.lgcd_family(&raw));
                rows_q.push(self.monoid.red_row(&raw));
            }
            lambda.push(lambda_q);
            rows.push(rows_q);
        }
        self.lambda = lambda;
        self.r = rows;
        Ok(())
    }

    fn somewhere_defined(row: &[PartialValue]) -> bool {
        row.iter().any(Option::is_some)
    }

    /// First defect in the deterministic scan order: closure before
    /// consistency, consistency kinds in the order Tot, Inv, Inj, and within
    /// a kind prefixes in insertion order, then letters, then suffixes in
    /// insertion order.
    pub fn find_defect(&self) -> Option<Defect> {
        let m = &self.monoid;
        let k = self.alphabet.len();
        let nq = self.q.len();
        let nt = self.t.len();

        for qi in 0..nq {
            for a in 0..k {
                let row = &self.r[qi][a + 1];
                let matched =
                    (0..nq).any(|q2| m.rows_equal_up_to_left_invertible(row, &self.r[q2][0]).is_some());
                if !matched {
                    return Some(Defect::Closure(self.word(qi, a + 1, &[])));
                }
            }
        }

        // Prefix pairs whose rows merge, with the merging invertible:
        // `R(q, e, ·) = χ · R(q', e, ·)`.
        let merges: Vec<Vec<(usize, _)>> = (0..nq)
            .map(|qi| {
                (0..nq)
                    .filter(|&q2| q2 != qi)
                    .filter_map(|q2| {
                        m.rows_equal_up_to_left_invertible(&self.r[qi][0], &self.r[q2][0])
                            .map(|chi| (q2, chi))
                    })
                    .collect()
            })
            .collect();
        let at = |a: Letter, ti: usize| {
            let mut w = vec![a];
            w.extend_from_slice(&self.t[ti]);
            w
        };

        for qi in 0..nq {
            let row_defined = Self::somewhere_defined(&self.r[qi][0]);
            for a in 0..k {
                for ti in 0..nt {
                    let here = self.r[qi][a + 1][ti].is_some();
                    if here && !row_defined {
                        return Some(Defect::ConsistencyTot(at(a, ti)));
                    }
                    let mismatch = merges[qi]
                        .iter()
                        .any(|(q2, _)| self.r[*q2][a + 1][ti].is_some() != here);
                    if mismatch {
                        return Some(Defect::ConsistencyTot(at(a, ti)));
                    }
                }
            }
        }

        for qi in 0..nq {
            let Some(l) = &self.lambda[qi][0] else { continue };
            for a in 0..k {
                for ti in 0..nt {
                    if let Some(v) = self.value(&self.word(qi, a + 1, &self.t[ti])) {
                        if !m.left_divides(l, v) {
                            return Some(Defect::ConsistencyInv(at(a, ti)));
                        }
                    }
                }
            }
        }

        let residual = |qi: usize, a: Letter, ti: usize| -> PartialValue {
            let l = self.lambda[qi][0].as_ref()?;
            let v = self.value(&self.word(qi, a + 1, &self.t[ti])).as_ref()?;
            m.left_divide(l, v)
        };
        for qi in 0..nq {
            for a in 0..k {
                for ti in 0..nt {
                    let Some(x) = residual(qi, a, ti) else { continue };
                    let broken = merges[qi].iter().any(|(q2, chi)| match residual(*q2, a, ti) {
                        Some(y) => m.mul(chi, &y) != x,
                        None => false,
                    });
                    if broken {
                        return Some(Defect::ConsistencyInj(at(a, ti)));
                    }
                }
            }
        }
        None
    }

    fn add_prefix(&mut self, w: Word) -> bool {
        if self.q.contains(&w) {
            return false;
        }
        self.q.push(w);
        true
    }

    fn add_suffix(&mut self, w: Word) -> bool {
        if self.t.contains(&w) {
            return false;
        }
        self.t.push(w);
        true
    }

    /// Adds `w` and its missing prefixes to `Q`, shortest first. Returns the
    /// number of words added; the table must be re-filled afterwards.
    pub fn add_prefixes(&mut self, w: &[Letter]) -> usize {
        (0..=w.len())
            .filter(|&n| self.add_prefix(w[..n].to_vec()))
            .count()
    }

    /// Adds `w` and its missing suffixes to `T`, shortest first. Returns the
    /// number of words added; the table must be re-filled afterwards.
    pub fn add_suffixes(&mut self, w: &[Letter]) -> usize {
        (0..=w.len())
            .rev()
            .filter(|&n| self.add_suffix(w[n..].to_vec()))
            .count()
    }

    /// Repairs a defect found by [`find_defect`](Self::find_defect) and
    /// re-fills. Returns `(prefixes added, suffixes added)`.
    pub fn apply_defect(
        &mut self,
        defect: &Defect,
        membership: &dyn MembershipOracle,
    ) -> Result<(usize, usize)> {
        let added = match defect {
            Defect::Closure(w) => (self.add_prefixes(w), 0),
            Defect::ConsistencyTot(w) | Defect::ConsistencyInv(w) | Defect::ConsistencyInj(w) => {
                (0, self.add_suffixes(w))
            }
        };
        self.fill(membership)?;
        Ok(added)
    }

    /// Adds a counterexample and its prefixes to `Q` and re-fills. Returns the
    /// number of prefixes added.
    pub fn process_counterexample(
        &mut self,
        w: &[Letter],
        membership: &dyn MembershipOracle,
    ) -> Result<usize> {
        let added = self.add_prefixes(w);
        self.fill(membership)?;
        Ok(added)
    }

    /// Assembles the hypothesis of a defect-free table. States are the
    /// prefixes picked greedily in `Q` order among those with a
    /// somewhere-defined row not matching an earlier pick, named by the
    /// rendered prefix.
    pub fn build_hypothesis(&self) -> Result<Transducer> {
        let m = &self.monoid;
        if !Self::somewhere_defined(&self.r[0][0]) {
            return Ok(Transducer::empty(m.clone(), self.alphabet.clone()));
        }
        let mut picked: Vec<usize> = Vec::new();
        for qi in 0..self.q.len() {
            let row = &self.r[qi][0];
            if Self::somewhere_defined(row)
                && picked
                    .iter()
                    .all(|&p| m.rows_equal_up_to_left_invertible(row, &self.r[p][0]).is_none())
            {
                picked.push(qi);
            }
        }
        let names = picked
            .iter()
            .map(|&qi| render_word(&self.alphabet, &self.q[qi]))
            .collect();
        let mut h = Transducer::new(m.clone(), self.alphabet.clone(), names)?;
        let lambda_e = |qi: usize| {
            self.lambda[qi][0]
                .clone()
                .expect("picked prefixes have somewhere-defined rows")
        };
        h.set_initial(Some((lambda_e(0), 0)));
        for (s, &qi) in picked.iter().enumerate() {
            h.set_termination(s, self.r[qi][0][0].clone());
            for a in 0..self.alphabet.len() {
                let row = &self.r[qi][a + 1];
                if !Self::somewhere_defined(row) {
                    continue;
                }
                let (target, chi) = picked
                    .iter()
                    .enumerate()
                    .find_map(|(s2, &q2)| {
                        m.rows_equal_up_to_left_invertible(row, &self.r[q2][0])
                            .map(|chi| (s2, chi))
                    })
                    .ok_or_else(|| {
                        Error::InternalInconsistency(format!(
                            "no state matches the row of {}",
                            render_word(&self.alphabet, &self.word(qi, a + 1, &[]))
                        ))
                    })?;
                let lambda_a = self.lambda[qi][a + 1]
                    .as_ref()
                    .expect("somewhere-defined rows have a left-gcd");
                let step = m.left_divide(&lambda_e(qi), lambda_a).ok_or_else(|| {
                    Error::InternalInconsistency(format!(
                        "Λ({}) does not left-divide Λ({})",
                        render_word(&self.alphabet, &self.q[qi]),
                        render_word(&self.alphabet, &self.word(qi, a + 1, &[]))
                    ))
                })?;
                h.add_transition(s, a, m.mul(&step, &chi), target);
            }
        }
        Ok(h)
    }
}

impl fmt::Display for ObservationTable {
    /// One line per prefix and extension: `q·a | Λ | R(t₁) R(t₂) …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.monoid;
        let suffixes = self.t.iter().map(|t| render_word(&self.alphabet, t)).join(", ");
        writeln!(f, "T = {{{suffixes}}}")?;
        for qi in 0..self.q.len() {
            for ext in 0..=self.alphabet.len() {
                let row = self.r[qi][ext].iter().map(|v| m.render_partial(v)).join(", ");
                writeln!(
                    f,
                    "{:>8} | Λ = {} | R = ({})",
                    render_word(&self.alphabet, &self.word(qi, ext, &[])),
                    m.render_partial(&self.lambda[qi][ext]),
                    row
                )?;
            }
        }
        Ok(())
    }
}

/// Something that happened during a learning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LearnEvent {
    Defect(Defect),
    Hypothesis(Transducer),
    /// A counterexample with the target value (`left`) and the hypothesis
    /// value (`right`).
    CounterExample {
        word: Word,
        left: PartialValue,
        right: PartialValue,
    },
    Accepted,
}

/// A learning run in progress.
pub struct Learner<'a> {
    table: ObservationTable,
    membership: &'a dyn MembershipOracle,
    equivalence: &'a dyn EquivalenceOracle,
    limits: Limits,
    stats: LearnStats,
    events: Vec<LearnEvent>,
}

/// Outcome of one loop iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Repaired(Defect),
    Rejected(Word),
    Accepted(Transducer),
}

impl<'a> Learner<'a> {
    /// Starts a run with `Q = T = {e}` and the initial table filled.
    pub fn new(
        monoid: Monoid,
        alphabet: Vec<String>,
        membership: &'a dyn MembershipOracle,
        equivalence: &'a dyn EquivalenceOracle,
        limits: Limits,
    ) -> Result<Self> {
        let mut table = ObservationTable::new(monoid, alphabet);
        table.fill(membership)?;
        let mut learner = Learner {
            table,
            membership,
            equivalence,
            limits,
            stats: LearnStats::default(),
            events: Vec::new(),
        };
        learner.sync_queries();
        Ok(learner)
    }

    pub fn table(&self) -> &ObservationTable {
        &self.table
    }

    pub fn stats(&self) -> LearnStats {
        self.stats
    }

    pub fn events(&self) -> &[LearnEvent] {
        &self.events
    }

    fn sync_queries(&mut self) {
        self.stats.membership_queries = self.table.membership_queries();
    }

    fn check_budget(&self) -> Result<()> {
        if self.table.prefixes().len() > self.limits.max_q
            || self.stats.loop_iterations >= self.limits.max_iterations
        {
            return Err(Error::BudgetExceeded { stats: self.stats });
        }
        Ok(())
    }

    /// Runs one iteration: repairs the first defect, or builds a hypothesis
    /// and submits it.
    pub fn step(&mut self) -> Result<Step> {
        self.check_budget()?;
        self.stats.loop_iterations += 1;
        if let Some(defect) = self.table.find_defect() {
            log::debug!("defect {}", defect.render(self.table.alphabet()));
            let (dq, dt) = self.table.apply_defect(&defect, self.membership)?;
            self.stats.q_updates += dq;
            self.stats.t_updates += dt;
            self.sync_queries();
            self.events.push(LearnEvent::Defect(defect.clone()));
            return Ok(Step::Repaired(defect));
        }
        let hypothesis = self.table.build_hypothesis()?;
        self.events.push(LearnEvent::Hypothesis(hypothesis.clone()));
        self.stats.equivalence_queries += 1;
        match self.equivalence.check(&hypothesis)? {
            EquivalenceVerdict::Equivalent => {
                self.events.push(LearnEvent::Accepted);
                Ok(Step::Accepted(hypothesis))
            }
            EquivalenceVerdict::CounterExample { word, left, right } => {
                log::debug!(
                    "counterexample {}",
                    render_word(self.table.alphabet(), &word)
                );
                self.stats.q_updates += self.table.process_counterexample(&word, self.membership)?;
                self.sync_queries();
                self.events.push(LearnEvent::CounterExample {
                    word: word.clone(),
                    left,
                    right,
                });
                Ok(Step::Rejected(word))
            }
        }
    }

    /// Iterates until a hypothesis is accepted or a cap is hit.
    pub fn run(&mut self) -> Result<Transducer> {
        loop {
            if let Step::Accepted(h) = self.step()? {
                return Ok(h);
            }
        }
    }
}

/// Learns the minimal transducer of the function behind `membership`.
pub fn learn(
    monoid: Monoid,
    alphabet: Vec<String>,
    membership: &dyn MembershipOracle,
    equivalence: &dyn EquivalenceOracle,
    limits: Limits,
) -> Result<(Transducer, LearnStats)> {
    let mut learner = Learner::new(monoid, alphabet, membership, equivalence, limits)?;
    let machine = learner.run()?;
    Ok((machine, learner.stats()))
}
