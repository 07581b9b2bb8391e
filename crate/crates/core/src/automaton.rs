//! Bounded state-closure exploration, recursion tables and DOT export.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::action::{Alphabet, SelfSimilarAction, Word};
use crate::error::Result;
use crate::group::{GroupElement, GroupModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_states: 10_000,
            max_depth: 1_000,
        }
    }
}

/// Finite transducer whose states are group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyAutomaton {
    pub states: Vec<GroupElement>,
    /// transitions[s][x] = (output letter, target state)
    pub transitions: Vec<Vec<(usize, usize)>>,
    pub seeds: Vec<usize>,
}

impl MealyAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.transitions.first().map_or(0, Vec::len)
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.states.iter().position(|s| s == g)
    }

    pub fn edge_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Output word and final state index.
    pub fn run(&self, state: usize, w: &Word) -> (Word, usize) {
        let mut out = Vec::with_capacity(w.len());
        let mut s = state;
        for &x in w.letters() {
            let (y, t) = self.transitions[s][x];
            out.push(y);
            s = t;
        }
        (Word(out), s)
    }

    /// DOT digraph with edges labelled `x|y`. Node labels come from the
    /// dictionary when given, coordinates otherwise.
    pub fn to_dot(&self, alphabet: Alphabet, names: Option<&WordDictionary>) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for (i, s) in self.states.iter().enumerate() {
            let label = names
                .and_then(|d| d.name(s))
                .unwrap_or_else(|| s.to_string());
            let shape = if self.seeds.contains(&i) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  s{i} [label=\"{label}\", shape={shape}];");
        }
        for (i, row) in self.transitions.iter().enumerate() {
            for (x, &(y, t)) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  s{i} -> s{t} [label=\"{}|{}\"];",
                    alphabet.label(x),
                    alphabet.label(y)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub states_found: usize,
    pub frontier_depth: usize,
    /// States in discovery order whose norm beats every earlier one, each
    /// with the word leading to it from its seed.
    pub witness_chain: Vec<(Word, GroupElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplorationOutcome {
    Finite(MealyAutomaton),
    BoundExceeded(BoundReport),
}

impl ExplorationOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExplorationOutcome::Finite(_))
    }

    pub fn automaton(&self) -> Option<&MealyAutomaton> {
        match self {
            ExplorationOutcome::Finite(m) => Some(m),
            ExplorationOutcome::BoundExceeded(_) => None,
        }
    }
}

/// Breadth-first closure of the seeds under all sections, letters in
/// ascending order.
pub fn explore(
    a: &SelfSimilarAction,
    seeds: &[GroupElement],
    bounds: Bounds,
) -> Result<ExplorationOutcome> {
    let mut states: Vec<GroupElement> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    let mut index: HashMap<GroupElement, usize> = HashMap::new();
    let mut seed_idx = Vec::new();
    for s in seeds {
        a.model().check(s)?;
        let i = *index.entry(s.clone()).or_insert_with(|| {
            states.push(s.clone());
            depth.push(0);
            parent.push(None);
            states.len() - 1
        });
        if !seed_idx.contains(&i) {
            seed_idx.push(i);
        }
    }
    let mut transitions = Vec::new();
    let mut queue: VecDeque<usize> = (0..states.len()).collect();
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(a.degree());
        for x in 0..a.degree() {
            let step = a.step(&states[i], x)?;
            let t = match index.get(&step.state) {
                Some(&t) => t,
                None => {
                    if depth[i] + 1 > bounds.max_depth || states.len() >= bounds.max_states {
                        return Ok(ExplorationOutcome::BoundExceeded(bound_report(
                            &states, &depth, &parent,
                        )));
                    }
                    states.push(step.state.clone());
                    depth.push(depth[i] + 1);
                    parent.push(Some((i, x)));
                    index.insert(step.state, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            row.push((step.output, t));
        }
        transitions.push(row);
    }
    Ok(ExplorationOutcome::Finite(MealyAutomaton {
        states,
        transitions,
        seeds: seed_idx,
    }))
}

fn bound_report(
    states: &[GroupElement],
    depth: &[usize],
    parent: &[Option<(usize, usize)>],
) -> BoundReport {
    let word_to = |mut i: usize| {
        let mut letters = Vec::new();
        while let Some((p, x)) = parent[i] {
            letters.push(x);
            i = p;
        }
        letters.reverse();
        Word(letters)
    };
    let mut chain = Vec::new();
    let mut best = None;
    for (i, s) in states.iter().enumerate() {
        let n = s.norm();
        if best.as_ref().is_none_or(|b| &n > b) {
            chain.push((word_to(i), s.clone()));
            best = Some(n);
        }
    }
    BoundReport {
        states_found: states.len(),
        frontier_depth: depth.iter().copied().max().unwrap_or(0),
        witness_chain: chain,
    }
}

/// Names group elements as short words: powers of named elements first,
/// then the shortest word over the generators (ties broken by generator
/// order, generators before inverses).
#[derive(Clone, Debug)]
pub struct WordDictionary {
    named: Vec<(String, GroupElement)>,
    words: HashMap<GroupElement, String>,
    model: GroupModel,
}

const MAX_POWER: i64 = 8;
const MAX_WORD_LENGTH: usize = 6;

impl WordDictionary {
    /// `generators` selects which named elements may appear in longer words.
    pub fn new(model: GroupModel, named: Vec<(String, GroupElement)>, generators: &[&str]) -> Self {
        let letters: Vec<(String, i64, GroupElement)> = {
            let gens: Vec<&(String, GroupElement)> = generators
                .iter()
                .filter_map(|g| named.iter().find(|(n, _)| n == g))
                .collect();
            gens.iter()
                .map(|(n, g)| (n.clone(), 1, g.clone()))
                .chain(gens.iter().map(|(n, g)| (n.clone(), -1, model.inverse(g))))
                .collect()
        };
        let mut words = HashMap::new();
        words.insert(model.identity(), String::new());
        let mut layer: Vec<(GroupElement, Vec<(usize, i64)>)> =
            vec![(model.identity(), Vec::new())];
        for _ in 0..MAX_WORD_LENGTH {
            let mut next = Vec::new();
            for (g, w) in &layer {
                for (li, (_, sign, h)) in letters.iter().enumerate() {
                    let prod = model.mul_unchecked(g, h);
                    if words.contains_key(&prod) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    let gi = li % (letters.len() / 2).max(1);
                    match w2.last_mut() {
                        Some((last, e)) if *last == gi && e.signum() == *sign => *e += sign,
                        _ => w2.push((gi, *sign)),
                    }
                    let rendered = w2
                        .iter()
                        .map(|&(i, e)| power_string(&letters[i].0, e))
                        .collect::<String>();
                    words.insert(prod.clone(), rendered);
                    next.push((prod, w2));
                }
            }
            layer = next;
        }
        WordDictionary {
            named,
            words,
            model,
        }
    }

    /// a = (1,0,0), b = (0,1,0), c = (0,0,1) with words over a and b.
    pub fn heisenberg() -> Self {
        let named = vec![
            ("a".to_string(), GroupElement::from_i64s(&[1, 0, 0])),
            ("b".to_string(), GroupElement::from_i64s(&[0, 1, 0])),
            ("c".to_string(), GroupElement::from_i64s(&[0, 0, 1])),
        ];
        WordDictionary::new(GroupModel::heisenberg(), named, &["a", "b"])
    }

    pub fn named(&self) -> &[(String, GroupElement)] {
        &self.named
    }

    pub fn lookup(&self, name: &str) -> Option<&GroupElement> {
        self.named.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn name(&self, g: &GroupElement) -> Option<String> {
        if g.is_identity() {
            return Some("e".into());
        }
        for (n, x) in &self.named {
            for k in (1..=MAX_POWER).flat_map(|k| [k, -k]) {
                if &self.model.pow(x, k) == g {
                    return Some(power_string(n, k));
                }
            }
        }
        self.words.get(g).cloned()
    }

    pub fn name_or_coords(&self, g: &GroupElement) -> String {
        self.name(g).unwrap_or_else(|| g.to_string())
    }
}

pub(crate) fn power_string(name: &str, e: i64) -> String {
    match e {
        1 => name.to_string(),
        2..=9 => format!("{name}^{e}"),
        _ => format!("{name}^{{{e}}}"),
    }
}

/// One line g(xv) = y·g|ₓ(v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionRow {
    pub element: String,
    pub input: usize,
    pub output: usize,
    pub state: GroupElement,
    pub state_name: String,
}

impl fmt::Display for RecursionRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("{}({}v)={}", self.element, self.input, self.output);
        if self.state.is_identity() {
            return write!(f, "{head}v");
        }
        let atomic = self.state_name.starts_with('(') || is_single_power(&self.state_name);
        if atomic {
            write!(f, "{head}{}(v)", self.state_name)
        } else {
            write!(f, "{head}({})(v)", self.state_name)
        }
    }
}

/// `a`, `c^2` or `a^{-1}`: needs no parentheses before `(v)`.
fn is_single_power(s: &str) -> bool {
    let mut it = s.chars();
    if !it.next().is_some_and(char::is_alphabetic) {
        return false;
    }
    let rest = it.as_str();
    let Some(exp) = rest.strip_prefix('^') else {
        return rest.is_empty();
    };
    let exp = exp
        .strip_prefix('{')
        .and_then(|e| e.strip_suffix('}'))
        .unwrap_or(exp);
    exp.parse::<i64>().is_ok()
}

/// One row per (element, letter), using alphabet labels.
pub fn recursion_table(
    a: &SelfSimilarAction,
    elements: &[(String, GroupElement)],
    dict: &WordDictionary,
) -> Result<Vec<RecursionRow>> {
    let al = a.alphabet();
    let mut rows = Vec::new();
    for (name, g) in elements {
        for x in 0..a.degree() {
            let s = a.step(g, x)?;
            rows.push(RecursionRow {
                element: name.clone(),
                input: al.label(x),
                output: al.label(s.output),
                state_name: dict.name_or_coords(&s.state),
                state: s.state,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::from_i64s(c)
    }

    fn rules(a: &SelfSimilarAction, names: &[&str]) -> Vec<String> {
        let dict = WordDictionary::heisenberg();
        let elems: Vec<(String, GroupElement)> = names
            .iter()
            .map(|n| (n.to_string(), dict.lookup(n).unwrap().clone()))
            .collect();
        recursion_table(a, &elems, &dict)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn first_recursion_display() {
        let got = rules(&SelfSimilarAction::heisenberg_d(), &["a", "b"]);
        let want = [
            "a(1v)=1a(v)",
            "a(2v)=4a(v)",
            "a(3v)=3a(v)",
            "a(4v)=2(b^{-1}ab)(v)",
            "b(1v)=2v",
            "b(2v)=1b(v)",
            "b(3v)=4v",
            "b(4v)=3b(v)",
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn second_recursion_display() {
        let got = rules(&SelfSimilarAction::heisenberg_d_prime(), &["a", "b", "c"]);
        assert_eq!(
            &got[..8],
            [
                "a(1v)=1a(v)",
                "a(2v)=4a(v)",
                "a(3v)=3a(v)",
                "a(4v)=2(b^{-1}ab)(v)",
                "b(1v)=2a(v)",
                "b(2v)=1(a^{-1}b)(v)",
                "b(3v)=4v",
                "b(4v)=3b(v)",
            ]
        );
        assert_eq!(
            &got[8..],
            [
                "c(1v)=3a(v)",
                "c(2v)=4v",
                "c(3v)=1(ba^{-1}b^{-1})(v)",
                "c(4v)=2c(v)"
            ]
        );
    }

    #[test]
    fn identity_rows() {
        let a = SelfSimilarAction::heisenberg_d();
        let dict = WordDictionary::heisenberg();
        let rows = recursion_table(&a, &[("e".into(), e(&[0, 0, 0]))], &dict).unwrap();
        let s: Vec<String> = rows.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["e(1v)=1v", "e(2v)=2v", "e(3v)=3v", "e(4v)=4v"]);
    }

    #[test]
    fn names() {
        let d = WordDictionary::heisenberg();
        assert_eq!(d.name(&e(&[0, 0, 2])).unwrap(), "c^2");
        assert_eq!(d.name(&e(&[-1, 0, 0])).unwrap(), "a^{-1}");
        assert_eq!(d.name(&e(&[1, 0, 1])).unwrap(), "b^{-1}ab");
        assert_eq!(d.name(&e(&[0, 0, 0])).unwrap(), "e");
    }

    #[test]
    fn explore_heisenberg() {
        let a = SelfSimilarAction::heisenberg_d();
        let out = explore(&a, &[e(&[1, 0, 0])], Bounds::default()).unwrap();
        let m = out.automaton().unwrap();
        assert_eq!(m.states, vec![e(&[1, 0, 0]), e(&[1, 0, 1])]);
        assert_eq!(m.edge_count(), 8);
        let out = explore(&a, &[e(&[0, 1, 0])], Bounds::default()).unwrap();
        assert_eq!(
            out.automaton().unwrap().states,
            vec![e(&[0, 1, 0]), e(&[0, 0, 0])]
        );
        let id = explore(&a, &[e(&[0, 0, 0])], Bounds::default()).unwrap();
        assert_eq!(id.automaton().unwrap().len(), 1);
    }

    #[test]
    fn c_is_not_finite_state() {
        let p = SelfSimilarAction::heisenberg_d_prime();
        let out = explore(
            &p,
            &[e(&[0, 0, 1])],
            Bounds {
                max_states: 100,
                ..Bounds::default()
            },
        )
        .unwrap();
        let ExplorationOutcome::BoundExceeded(r) = out else {
            panic!("expected bound exceeded")
        };
        assert_eq!(r.states_found, 100);
        let norms: Vec<_> = r.witness_chain.iter().map(|(_, g)| g.norm()).collect();
        assert!(norms.windows(2).all(|w| w[0] < w[1]));
        for (w, g) in &r.witness_chain {
            assert_eq!(&p.state(&e(&[0, 0, 1]), w).unwrap(), g);
        }
    }

    #[test]
    fn odometer_dot() {
        let o = SelfSimilarAction::odometer();
        let out = explore(&o, &[e(&[1])], Bounds::default()).unwrap();
        let m = out.automaton().unwrap();
        assert_eq!(m.states, vec![e(&[1]), e(&[0])]);
        let dot = m.to_dot(o.alphabet(), None);
        assert!(dot.contains("s0 -> s1 [label=\"0|1\"]"));
        assert!(dot.contains("s0 -> s0 [label=\"1|0\"]"));
        assert!(dot.contains("s1 -> s1 [label=\"0|0\"]"));
    }
}
