//! Exact spectral tests on the Lie matrix of φ.
//!
//! A finite-state action exists iff every eigenvalue has modulus at most 1
//! and those of modulus 1 are semisimple roots of unity. Every action is
//! finite-state iff all eigenvalues lie strictly inside the unit disk. The
//! φ-core is trivial iff no eigenvalue of φ on the centre is an algebraic
//! integer.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor::{factor_over_rationals, is_integral_monic, DEFAULT_DEGREE_CAP};
use crate::group::VirtualEndomorphism;
use crate::linalg::QMatrix;
use crate::poly::RatPolynomial;
use crate::{Int, Rat};

/// Characteristic polynomial det(xI − M) by Faddeev–LeVerrier.
pub fn char_poly(m: &QMatrix) -> RatPolynomial {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let n = m.rows();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk = QMatrix::zero(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&QMatrix::identity(n).scale(&c[n - k + 1]));
        let am = m.mul(&mk);
        let trace: Rat = (0..n).map(|i| am[(i, i)].clone()).sum();
        c[n - k] = -trace / Rat::from_integer(Int::from(k));
    }
    RatPolynomial::new(c)
}

/// Minimal polynomial: the first linear dependency among I, M, M², ….
pub fn min_poly(m: &QMatrix) -> RatPolynomial {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let n = m.rows();
    let flat = |a: &QMatrix| -> Vec<Rat> { (0..n).flat_map(|i| a.row(i).to_vec()).collect() };
    let mut powers = vec![flat(&QMatrix::identity(n))];
    let mut p = QMatrix::identity(n);
    for _ in 1..=n {
        p = p.mul(m);
        powers.push(flat(&p));
        let kernel = QMatrix::from_columns(&powers).kernel();
        if let Some(v) = kernel.first() {
            return RatPolynomial::new(v.clone()).monic();
        }
    }
    unreachable!("Cayley–Hamilton bounds the degree by n")
}

/// Schur–Cohn recursion: all complex roots have modulus < 1. A nonzero
/// constant has no roots and passes.
pub fn strictly_inside_unit_disk(p: &RatPolynomial) -> bool {
    assert!(!p.is_zero(), "zero polynomial");
    let mut cur = p.clone();
    while cur.degree() > 0 {
        let a0 = cur.coeff(0);
        let an = cur.leading();
        if a0.abs() >= an.abs() {
            return false;
        }
        let r = cur.scale(&an).sub(&cur.reversed().scale(&a0));
        cur = RatPolynomial::new(r.coeffs()[1..].to_vec());
    }
    true
}

pub fn totient(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

/// Φₘ by exact division of xᵐ − 1 by the Φ_d with d | m, d < m.
pub fn cyclotomic(m: u64) -> RatPolynomial {
    let mut p = RatPolynomial::monomial(m as usize).sub(&RatPolynomial::one());
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        p = p.div_exact(&cyclotomic(d)).expect("Φ_d divides x^m - 1");
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactor {
    pub order: u64,
    pub chi_multiplicity: usize,
    pub mu_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSplit {
    pub unit_root_part: Vec<CyclotomicFactor>,
    /// χ with every cyclotomic factor divided out.
    pub remainder: RatPolynomial,
    pub lcm_order: u64,
}

/// Every Φₘ with φ(m) ≤ deg χ, extracted by repeated exact division.
pub fn cyclotomic_split(chi: &RatPolynomial, mu: &RatPolynomial) -> CyclotomicSplit {
    let deg = chi.degree() as u64;
    let mut remainder = chi.monic();
    let mut parts = Vec::new();
    let mut lcm = 1u64;
    // totient(m) ≥ √(m/2), so m ≤ 2·deg² covers every candidate
    for m in 1..=(2 * deg * deg).max(2) {
        if totient(m) > deg {
            continue;
        }
        let phi_m = cyclotomic(m);
        let k = remainder.multiplicity_of(&phi_m);
        if k == 0 {
            continue;
        }
        remainder = (0..k).fold(remainder, |r, _| r.div_exact(&phi_m).expect("counted"));
        parts.push(CyclotomicFactor {
            order: m,
            chi_multiplicity: k,
            mu_multiplicity: mu.multiplicity_of(&phi_m),
        });
        lcm = lcm.lcm(&m);
    }
    CyclotomicSplit {
        unit_root_part: parts,
        remainder,
        lcm_order: lcm,
    }
}

/// Every cyclotomic factor of χ is simple in μ.
pub fn semisimple_on_unit_circle(chi: &RatPolynomial, mu: &RatPolynomial) -> bool {
    cyclotomic_split(chi, mu)
        .unit_root_part
        .iter()
        .all(|f| f.mu_multiplicity == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    StrictlyContracting,
    MixedFiniteStateCapable,
    NoFiniteStateAction,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::StrictlyContracting => "StrictlyContracting",
            Verdict::MixedFiniteStateCapable => "MixedFiniteStateCapable",
            Verdict::NoFiniteStateAction => "NoFiniteStateAction",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralClassification {
    pub verdict: Verdict,
    pub chi: RatPolynomial,
    pub mu: RatPolynomial,
    pub split: CyclotomicSplit,
    /// Schur–Cohn on χ.
    pub chi_inside_disk: bool,
    /// Schur–Cohn on the non-cyclotomic part of χ.
    pub remainder_inside_disk: bool,
    pub semisimple: bool,
}

pub fn classify_matrix(m: &QMatrix) -> SpectralClassification {
    let chi = char_poly(m);
    let mu = min_poly(m);
    let split = cyclotomic_split(&chi, &mu);
    let chi_inside_disk = strictly_inside_unit_disk(&chi);
    let remainder_inside_disk = strictly_inside_unit_disk(&split.remainder);
    let semisimple = split.unit_root_part.iter().all(|f| f.mu_multiplicity == 1);
    let verdict = if chi_inside_disk {
        Verdict::StrictlyContracting
    } else if remainder_inside_disk && semisimple {
        Verdict::MixedFiniteStateCapable
    } else {
        Verdict::NoFiniteStateAction
    };
    SpectralClassification {
        verdict,
        chi,
        mu,
        split,
        chi_inside_disk,
        remainder_inside_disk,
        semisimple,
    }
}

pub fn classify(phi: &VirtualEndomorphism) -> SpectralClassification {
    classify_matrix(phi.lie_matrix())
}

/// The Lie matrix restricted to the centre, after checking that φ maps the
/// centre into itself.
pub fn center_restriction(phi: &VirtualEndomorphism) -> Result<QMatrix> {
    let center = phi.model().center_coordinates();
    let m = phi.lie_matrix();
    for &c in &center {
        for r in (0..m.rows()).filter(|r| !center.contains(r)) {
            if !m[(r, c)].is_zero() {
                return Err(Error::InconsistentEndomorphism(
                    "the centre is not φ-invariant".into(),
                ));
            }
        }
    }
    Ok(m.select(&center, &center))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreReport {
    pub trivial: bool,
    pub factors: Vec<(RatPolynomial, usize)>,
    /// A monic integral irreducible factor, whose roots are algebraic
    /// integer eigenvalues on the centre.
    pub integral_factor: Option<RatPolynomial>,
}

pub fn core_is_trivial(phi: &VirtualEndomorphism) -> Result<CoreReport> {
    core_is_trivial_with_cap(phi, DEFAULT_DEGREE_CAP)
}

pub fn core_is_trivial_with_cap(phi: &VirtualEndomorphism, cap: usize) -> Result<CoreReport> {
    let z = center_restriction(phi)?;
    let factors = factor_over_rationals(&char_poly(&z), cap)?;
    let integral_factor = factors
        .iter()
        .map(|(f, _)| f)
        .find(|f| is_integral_monic(f))
        .cloned();
    Ok(CoreReport {
        trivial: integral_factor.is_none(),
        factors,
        integral_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupModel, SubgroupSpec};
    use crate::linalg::rat;

    fn heis_diag() -> QMatrix {
        QMatrix::diagonal(&[rat(1, 1), rat(1, 2), rat(1, 2)])
    }

    #[test]
    fn polynomials_of_heisenberg_matrix() {
        let l1 = RatPolynomial::linear(rat(1, 1));
        let lh = RatPolynomial::linear(rat(1, 2));
        assert_eq!(char_poly(&heis_diag()), l1.mul(&lh).mul(&lh));
        assert_eq!(min_poly(&heis_diag()), l1.mul(&lh));
        let jordan = QMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(min_poly(&jordan), l1.pow(2));
        assert_eq!(min_poly(&QMatrix::identity(2)), l1);
        assert_eq!(char_poly(&QMatrix::identity(2)), l1.pow(2));
    }

    #[test]
    fn schur_cohn() {
        assert!(strictly_inside_unit_disk(&RatPolynomial::linear(rat(1, 2))));
        let heis = char_poly(&heis_diag());
        assert!(!strictly_inside_unit_disk(&heis));
        let p = RatPolynomial::new(vec![rat(1, 8), rat(-1, 4), rat(1, 1)]);
        assert!(strictly_inside_unit_disk(&p));
        assert!(!strictly_inside_unit_disk(&RatPolynomial::from_ints(&[
            1, 0, 1
        ])));
        assert!(strictly_inside_unit_disk(&RatPolynomial::one()));
        // roots 0 and 1/3
        assert!(strictly_inside_unit_disk(&RatPolynomial::new(vec![
            rat(0, 1),
            rat(-1, 3),
            rat(1, 1)
        ])));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), RatPolynomial::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(3), RatPolynomial::from_ints(&[1, 1, 1]));
        assert_eq!(cyclotomic(12), RatPolynomial::from_ints(&[1, 0, -1, 0, 1]));
        let chi = RatPolynomial::from_ints(&[1, 1, 1]).mul(&RatPolynomial::linear(rat(1, 3)));
        let split = cyclotomic_split(&chi, &chi);
        assert_eq!(
            split.unit_root_part,
            vec![CyclotomicFactor {
                order: 3,
                chi_multiplicity: 1,
                mu_multiplicity: 1
            }]
        );
        assert_eq!(split.remainder, RatPolynomial::linear(rat(1, 3)));
        assert_eq!(split.lcm_order, 3);
    }

    #[test]
    fn verdicts() {
        let h = classify(&VirtualEndomorphism::heisenberg());
        assert_eq!(h.verdict, Verdict::MixedFiniteStateCapable);
        assert_eq!(h.split.lcm_order, 1);
        assert_eq!(
            classify(&VirtualEndomorphism::odometer()).verdict,
            Verdict::StrictlyContracting
        );
        let bad = QMatrix::diagonal(&[rat(2, 1), rat(1, 3)]);
        assert_eq!(classify_matrix(&bad).verdict, Verdict::NoFiniteStateAction);
        let jordan = QMatrix::from_rows(vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2)],
        ]);
        assert_eq!(
            classify_matrix(&jordan).verdict,
            Verdict::NoFiniteStateAction
        );
        // rotation by 90 degrees: eigenvalues ±i, semisimple roots of unity
        let rot = QMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(
            classify_matrix(&rot).verdict,
            Verdict::MixedFiniteStateCapable
        );
        // eigenvalues (3 ± 4i)/5 have modulus 1 but are not roots of unity
        let pyth = QMatrix::from_rows(vec![
            vec![rat(3, 5), rat(-4, 5)],
            vec![rat(4, 5), rat(3, 5)],
        ]);
        assert_eq!(classify_matrix(&pyth).verdict, Verdict::NoFiniteStateAction);
    }

    #[test]
    fn centre_and_core() {
        let h = VirtualEndomorphism::heisenberg();
        assert_eq!(
            center_restriction(&h).unwrap(),
            QMatrix::diagonal(&[rat(1, 2)])
        );
        assert!(core_is_trivial(&h).unwrap().trivial);
        let g = GroupModel::heisenberg();
        let swap = QMatrix::from_int_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]);
        let phi = VirtualEndomorphism::lie(g, SubgroupSpec::whole_group(&g), swap).unwrap();
        assert!(phi.validate().passed(), "{}", phi.validate());
        assert_eq!(
            center_restriction(&phi).unwrap(),
            QMatrix::diagonal(&[rat(-1, 1)])
        );
        let z = GroupModel::abelian(1).unwrap();
        let h2 = SubgroupSpec::lattice(&z, vec![vec![Int::from(1)]]).unwrap();
        let two = VirtualEndomorphism::coordinate(z, h2.clone(), QMatrix::diagonal(&[rat(2, 1)]))
            .unwrap();
        let r = core_is_trivial(&two).unwrap();
        assert!(!r.trivial);
        assert_eq!(r.integral_factor, Some(RatPolynomial::from_ints(&[-2, 1])));
        let one = VirtualEndomorphism::coordinate(z, h2, QMatrix::identity(1)).unwrap();
        assert!(!core_is_trivial(&one).unwrap().trivial);
        assert!(
            core_is_trivial(&VirtualEndomorphism::odometer())
                .unwrap()
                .trivial
        );
    }
}
