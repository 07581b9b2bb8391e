//! The self-similar action g(xv) = y·g|ₓ(v) determined by (G, φ, D).
//!
//! For a letter x the output y is the unique letter with
//! h_y⁻¹·g·h_x ∈ H, and the section is g|ₓ = φ(h_y⁻¹·g·h_x).

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{
    format_rat_vec, DigitSet, GroupElement, GroupModel, SubgroupSpec, Transversal,
    VirtualEndomorphism,
};
use crate::linalg::rat_vec_to_int;
use crate::Rat;

/// Letters are stored 0-based; `first_label` is how letter 0 is printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub size: usize,
    pub first_label: usize,
}

/// A finite word, first letter first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn repeat(letter: usize, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

impl Alphabet {
    pub fn label(&self, letter: usize) -> usize {
        letter + self.first_label
    }

    fn separated(&self) -> bool {
        self.first_label + self.size > 10
    }

    pub fn format(&self, w: &Word) -> String {
        let labels: Vec<String> = w.0.iter().map(|&x| self.label(x).to_string()).collect();
        labels.join(if self.separated() { "," } else { "" })
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        let tokens: Vec<&str> = if s.is_empty() {
            Vec::new()
        } else if self.separated() || s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else {
            s.split("").filter(|t| !t.is_empty()).collect()
        };
        tokens
            .into_iter()
            .map(|t| {
                let label: usize = t.parse().map_err(|_| Error::InvalidLetter(t.to_string()))?;
                if label < self.first_label || label >= self.first_label + self.size {
                    return Err(Error::InvalidLetter(t.to_string()));
                }
                Ok(label - self.first_label)
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterStep {
    pub output: usize,
    pub state: GroupElement,
}

/// First-level portrait: root permutation and sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathRecursion {
    pub permutation: Vec<usize>,
    pub states: Vec<GroupElement>,
}

#[derive(Clone, Debug)]
pub struct SelfSimilarAction {
    phi: VirtualEndomorphism,
    digits: DigitSet,
    inverses: Vec<GroupElement>,
    alphabet: Alphabet,
}

impl SelfSimilarAction {
    pub fn new(phi: VirtualEndomorphism, digits: DigitSet, first_label: usize) -> Result<Self> {
        let model = *phi.model();
        for r in digits.reps() {
            model.check(r)?;
        }
        match digits.validate(&model, phi.subgroup()) {
            Transversal::Valid => {}
            Transversal::WrongSize { expected, found } => {
                return Err(Error::InvalidTransversal(format!(
                    "{found} digits for a subgroup of index {expected}"
                )))
            }
            Transversal::SameCoset(i, j) => {
                return Err(Error::InvalidTransversal(format!(
                    "{} and {} lie in the same coset",
                    digits.reps()[i],
                    digits.reps()[j]
                )))
            }
        }
        let report = phi.validate();
        if !report.passed() {
            return Err(Error::NotAnAutomorphism(report.failed().join(", ")));
        }
        let inverses = digits.reps().iter().map(|r| model.inverse(r)).collect();
        let alphabet = Alphabet {
            size: digits.len(),
            first_label,
        };
        Ok(SelfSimilarAction {
            phi,
            digits,
            inverses,
            alphabet,
        })
    }

    /// Binary odometer on ℤ with D = {0, 1}, letters printed 0 and 1.
    pub fn odometer() -> Self {
        let d = DigitSet::from_i64s(&[&[0], &[1]]);
        Self::new(VirtualEndomorphism::odometer(), d, 0).expect("valid odometer")
    }

    /// Heisenberg action with D = {(0,0,0), (0,1,0), (0,0,1), (0,1,1)}.
    pub fn heisenberg_d() -> Self {
        let d = DigitSet::from_i64s(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]);
        Self::new(VirtualEndomorphism::heisenberg(), d, 1).expect("valid digit set")
    }

    /// Heisenberg action with D′ = {(1,0,0), (0,1,0), (0,0,1), (0,1,1)}.
    pub fn heisenberg_d_prime() -> Self {
        let d = DigitSet::from_i64s(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]);
        Self::new(VirtualEndomorphism::heisenberg(), d, 1).expect("valid digit set")
    }

    pub fn model(&self) -> &GroupModel {
        self.phi.model()
    }

    pub fn phi(&self) -> &VirtualEndomorphism {
        &self.phi
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        self.phi.subgroup()
    }

    pub fn digits(&self) -> &DigitSet {
        &self.digits
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.alphabet.size
    }

    pub fn step(&self, g: &GroupElement, x: usize) -> Result<LetterStep> {
        if x >= self.degree() {
            return Err(Error::InvalidLetter(x.to_string()));
        }
        let model = self.model();
        model.check(g)?;
        let gx = model.mul_unchecked(g, &self.digits.reps()[x]);
        let mut found = None;
        for (y, inv) in self.inverses.iter().enumerate() {
            let t = model.mul_unchecked(inv, &gx);
            if self.subgroup().contains(&t) {
                if found.is_some() {
                    return Err(Error::InvalidTransversal(format!(
                        "two output letters for {g} at letter {x}"
                    )));
                }
                found = Some((y, t));
            }
        }
        let (output, t) = found.ok_or_else(|| {
            Error::InvalidTransversal(format!("no output letter for {g} at letter {x}"))
        })?;
        Ok(LetterStep {
            output,
            state: self.phi.apply(&t)?,
        })
    }

    /// Image word and final section.
    pub fn run(&self, g: &GroupElement, w: &Word) -> Result<(Word, GroupElement)> {
        let mut out = Vec::with_capacity(w.len());
        let mut cur = g.clone();
        for &x in w.letters() {
            let s = self.step(&cur, x)?;
            out.push(s.output);
            cur = s.state;
        }
        Ok((Word(out), cur))
    }

    pub fn act(&self, g: &GroupElement, w: &Word) -> Result<Word> {
        self.run(g, w).map(|r| r.0)
    }

    pub fn state(&self, g: &GroupElement, w: &Word) -> Result<GroupElement> {
        self.run(g, w).map(|r| r.1)
    }

    fn phi_power(&self, v: &[Rat], k: usize) -> Vec<Rat> {
        (0..k).fold(v.to_vec(), |acc, _| self.phi.apply_rational(&acc))
    }

    /// The section evaluated as one product in the rational completion:
    /// φ(h_{yₙ}⁻¹)·φ²(h_{yₙ₋₁}⁻¹)⋯φⁿ(h_{y₁}⁻¹)·φⁿ(g)·φⁿ(h_{x₁})⋯φ(h_{xₙ}).
    pub fn state_closed_form(&self, g: &GroupElement, w: &Word) -> Result<GroupElement> {
        let ys = self.act(g, w)?;
        let model = self.model();
        let n = w.len();
        let mut acc = model.identity().to_rational();
        for i in (0..n).rev() {
            let f = self.phi_power(&self.inverses[ys.0[i]].to_rational(), n - i);
            acc = model.mul_rational(&acc, &f);
        }
        acc = model.mul_rational(&acc, &self.phi_power(&g.to_rational(), n));
        for (i, &x) in w.letters().iter().enumerate() {
            let f = self.phi_power(&self.digits.reps()[x].to_rational(), n - i);
            acc = model.mul_rational(&acc, &f);
        }
        rat_vec_to_int(&acc)
            .map(GroupElement)
            .ok_or_else(|| Error::NotInLattice(format_rat_vec(&acc)))
    }

    pub fn wreath_recursion(&self, g: &GroupElement) -> Result<WreathRecursion> {
        let mut permutation = Vec::with_capacity(self.degree());
        let mut states = Vec::with_capacity(self.degree());
        for x in 0..self.degree() {
            let s = self.step(g, x)?;
            permutation.push(s.output);
            states.push(s.state);
        }
        Ok(WreathRecursion {
            permutation,
            states,
        })
    }
}

impl fmt::Display for SelfSimilarAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} with digits {}", self.model(), self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::from_i64s(c)
    }

    #[test]
    fn heisenberg_steps() {
        let a = SelfSimilarAction::heisenberg_d();
        let s = a.step(&e(&[1, 0, 0]), 1).unwrap();
        assert_eq!((s.output, s.state), (3, e(&[1, 0, 0])));
        let id = a.step(&e(&[0, 0, 0]), 2).unwrap();
        assert_eq!((id.output, id.state), (2, e(&[0, 0, 0])));
        let p = SelfSimilarAction::heisenberg_d_prime();
        let s = p.step(&e(&[0, 1, 0]), 0).unwrap();
        assert_eq!((s.output, s.state), (1, e(&[1, 0, 0])));
        assert_eq!(p.step(&e(&[0, 1, 0]), 1).unwrap().state, e(&[-1, 1, -1]));
    }

    #[test]
    fn words_and_states() {
        let a = SelfSimilarAction::heisenberg_d();
        let al = a.alphabet();
        let w = al.parse("22").unwrap();
        assert_eq!(al.format(&a.act(&e(&[1, 0, 0]), &w).unwrap()), "44");
        let four = al.parse("4").unwrap();
        assert_eq!(a.state(&e(&[1, 0, 0]), &four).unwrap(), e(&[1, 0, 1]));
        assert_eq!(
            a.state_closed_form(&e(&[1, 0, 0]), &four).unwrap(),
            e(&[1, 0, 1])
        );
        assert_eq!(
            a.state(&e(&[3, 1, 4]), &Word::default()).unwrap(),
            e(&[3, 1, 4])
        );
        assert!(al.parse("15").is_err());
    }

    #[test]
    fn wreath_of_b() {
        let a = SelfSimilarAction::heisenberg_d();
        let r = a.wreath_recursion(&e(&[0, 1, 0])).unwrap();
        assert_eq!(r.permutation, vec![1, 0, 3, 2]);
        let b = e(&[0, 1, 0]);
        let id = e(&[0, 0, 0]);
        assert_eq!(r.states, vec![id.clone(), b.clone(), id, b]);
    }

    #[test]
    fn c_under_d_prime() {
        let p = SelfSimilarAction::heisenberg_d_prime();
        let c = e(&[0, 0, 1]);
        let r = p.wreath_recursion(&c).unwrap();
        assert_eq!(r.permutation, vec![2, 3, 0, 1]);
        assert_eq!(
            r.states,
            vec![e(&[1, 0, 0]), e(&[0, 0, 0]), e(&[-1, 0, 1]), c.clone()]
        );
        let w = p.alphabet().parse("44").unwrap();
        assert_eq!(
            p.state_closed_form(&c, &w).unwrap(),
            p.state(&c, &w).unwrap()
        );
        for n in 1..6 {
            let w = Word::repeat(2, n);
            assert_eq!(p.state(&c, &w).unwrap(), e(&[-(n as i64), 0, 1]));
        }
    }

    #[test]
    fn odometer_counts() {
        let o = SelfSimilarAction::odometer();
        let al = o.alphabet();
        assert_eq!(
            al.format(&o.act(&e(&[1]), &al.parse("000").unwrap()).unwrap()),
            "100"
        );
        assert_eq!(
            al.format(&o.act(&e(&[1]), &al.parse("110").unwrap()).unwrap()),
            "001"
        );
        let s = o.step(&e(&[1]), 1).unwrap();
        assert_eq!((s.output, s.state), (0, e(&[1])));
    }
}
