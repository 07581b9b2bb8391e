//! Digit sets that make the action finite-state, or not.
//!
//! Finite-state digits are coset representatives taken from the contracting
//! part G_c = G ∩ exp(ℒ_c), where ℒ_c is the sum of the generalized
//! eigenspaces of φ for eigenvalues inside the unit disk. Replacing the
//! identity digit by a nontrivial φ-fixed element of H destroys
//! finite-stateness when φ has eigenvalue 1.

use num_traits::{Signed, Zero};

use crate::action::{SelfSimilarAction, Word};
use crate::automaton::{explore, Bounds, ExplorationOutcome};
use crate::error::{Error, Result};
use crate::group::{DigitSet, GroupElement, LieVector, Transversal, VirtualEndomorphism};
use crate::linalg::{primitive_integer_vector, span_rank, QMatrix};
use crate::poly::RatPolynomial;
use crate::spectral::{classify, cyclotomic, Verdict};
use crate::{Int, Rat};

pub const DEFAULT_BOX_CAP: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractingSubspace {
    pub basis: Vec<LieVector>,
    /// μ with its cyclotomic factors removed; ℒ_c = ker q(M).
    pub q: RatPolynomial,
}

impl ContractingSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        span_rank(&vs) == self.basis.len()
    }
}

pub fn contracting_subspace(phi: &VirtualEndomorphism) -> Result<ContractingSubspace> {
    let c = classify(phi);
    if c.verdict == Verdict::NoFiniteStateAction {
        return Err(Error::Unsupported("φ admits no finite-state action".into()));
    }
    let mut q = c.mu.clone();
    for f in &c.split.unit_root_part {
        let phi_m = cyclotomic(f.order);
        for _ in 0..f.mu_multiplicity {
            q = q.div_exact(&phi_m).expect("cyclotomic factor of μ");
        }
    }
    let basis = q.eval_matrix(phi.lie_matrix()).kernel();
    Ok(ContractingSubspace { basis, q })
}

fn zigzag_rank(t: &Int) -> Int {
    if t.is_positive() {
        t * 2 - 1
    } else {
        -t * 2
    }
}

/// Integer points with ℓ∞ norm exactly r, ordered by the zigzag rank
/// 0, 1, −1, 2, −2, … with the last coordinate most significant.
pub fn box_shell(dim: usize, r: i64) -> Vec<GroupElement> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(dim as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut c = Vec::with_capacity(dim);
        for _ in 0..dim {
            c.push((code % side) as i64 - r);
            code /= side;
        }
        if c.iter().any(|v| v.abs() == r) || r == 0 {
            out.push(GroupElement::from_i64s(&c));
        }
    }
    out.sort_by_key(|g| g.coords().iter().rev().map(zigzag_rank).collect::<Vec<_>>());
    out
}

pub fn finite_state_digits(phi: &VirtualEndomorphism) -> Result<DigitSet> {
    finite_state_digits_with_cap(phi, DEFAULT_BOX_CAP)
}

/// Greedy search through growing boxes for representatives inside G_c.
pub fn finite_state_digits_with_cap(phi: &VirtualEndomorphism, cap: i64) -> Result<DigitSet> {
    let lc = contracting_subspace(phi)?;
    let model = *phi.model();
    let h = phi.subgroup();
    let index = h.index();
    let mut reps: Vec<GroupElement> = Vec::new();
    let mut inverses: Vec<GroupElement> = Vec::new();
    for r in 0..=cap {
        for g in box_shell(model.coordinate_count(), r) {
            if Int::from(reps.len()) == index {
                return Ok(DigitSet::new(reps));
            }
            if !lc.contains(&model.log(&g)) {
                continue;
            }
            if inverses
                .iter()
                .any(|inv| h.contains(&model.mul_unchecked(inv, &g)))
            {
                continue;
            }
            inverses.push(model.inverse(&g));
            reps.push(g);
        }
    }
    if Int::from(reps.len()) == index {
        return Ok(DigitSet::new(reps));
    }
    Err(Error::SearchExhausted(format!(
        "found {} of {index} representatives inside G_c within box radius {cap}",
        reps.len()
    )))
}

/// A nontrivial element h ∈ H with φ(h) = h.
pub fn fixed_element(phi: &VirtualEndomorphism) -> Result<GroupElement> {
    let m = phi.lie_matrix();
    let n = m.rows();
    let kernel = m.sub(&QMatrix::identity(n)).kernel();
    let Some(v) = kernel.first() else {
        return Err(Error::NoFixedElement);
    };
    let base = primitive_integer_vector(v);
    let model = phi.model();
    for t in 1..=64i64 {
        let w: Vec<Rat> = base.iter().map(|c| Rat::from_integer(c * t)).collect();
        let Ok(g) = model.exp_integral(&w) else {
            continue;
        };
        if phi.subgroup().contains(&g) && phi.apply(&g).as_ref() == Ok(&g) {
            return Ok(g);
        }
    }
    Err(Error::SearchExhausted(
        "no multiple of the fixed Lie vector up to 64 lies in H".into(),
    ))
}

/// D with its identity digit replaced by a φ-fixed element of H. For k > 1
/// the central digits are first raised to the k-th power.
pub fn non_finite_state_digits(
    phi: &VirtualEndomorphism,
    d: &DigitSet,
    k: u32,
) -> Result<DigitSet> {
    if k == 0 {
        return Err(Error::InvalidK("k must be positive".into()));
    }
    let model = *phi.model();
    let pos = d.identity_position().ok_or_else(|| {
        Error::InvalidTransversal("the digit set must contain the identity".into())
    })?;
    let h = fixed_element(phi)?;
    let center = model.center_coordinates();
    let mut reps = d.reps().to_vec();
    if k > 1 {
        for r in reps.iter_mut() {
            let central = r
                .coords()
                .iter()
                .enumerate()
                .all(|(i, c)| c.is_zero() || center.contains(&i));
            if central && !r.is_identity() {
                *r = model.pow(r, i64::from(k));
            }
        }
    }
    reps[pos] = h;
    let out = DigitSet::new(reps);
    match out.validate(&model, phi.subgroup()) {
        Transversal::Valid => Ok(out),
        bad if k > 1 => Err(Error::InvalidK(format!("{bad:?}"))),
        bad => Err(Error::InvalidTransversal(format!("{bad:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmpiricalVerdict {
    AllSeedsFinite(Bounds),
    WitnessUnbounded {
        element: GroupElement,
        chain: Vec<(Word, GroupElement)>,
    },
}

#[derive(Clone, Debug)]
pub struct DigitSearchReport {
    pub digits: DigitSet,
    pub outcomes: Vec<(GroupElement, ExplorationOutcome)>,
    pub verdict: EmpiricalVerdict,
}

/// Explores each seed and reports the first unbounded one.
pub fn empirical_classify(
    a: &SelfSimilarAction,
    seeds: &[GroupElement],
    bounds: Bounds,
) -> Result<DigitSearchReport> {
    let mut outcomes = Vec::new();
    let mut witness = None;
    for s in seeds {
        let out = explore(a, std::slice::from_ref(s), bounds)?;
        if let (None, ExplorationOutcome::BoundExceeded(r)) = (&witness, &out) {
            witness = Some(EmpiricalVerdict::WitnessUnbounded {
                element: s.clone(),
                chain: r.witness_chain.clone(),
            });
        }
        outcomes.push((s.clone(), out));
    }
    Ok(DigitSearchReport {
        digits: a.digits().clone(),
        outcomes,
        verdict: witness.unwrap_or(EmpiricalVerdict::AllSeedsFinite(bounds)),
    })
}

/// Exponents e with state(g, xⁿ) = g^e for n = 1..=count, or None where the
/// state is not a power of g.
pub fn power_exponents(
    a: &SelfSimilarAction,
    g: &GroupElement,
    letter: usize,
    count: usize,
) -> Result<Vec<Option<i64>>> {
    let model = a.model();
    let mut out = Vec::with_capacity(count);
    let mut cur = g.clone();
    for _ in 0..count {
        cur = a.step(&cur, letter)?.state;
        let e = (-64..=64i64).find(|&e| model.pow(g, e) == cur);
        out.push(e);
    }
    Ok(out)
}
