//! Group models, subgroups, virtual endomorphisms and digit sets.
//!
//! Elements of UTₙ(ℤ) are stored as their strict upper-triangular entries in
//! superdiagonal-major order: e₁₂, e₂₃, …, e₍ₙ₋₁₎ₙ, then e₁₃, e₂₄, …, with the
//! central entry e₁ₙ last. For UT₃ this is (x, y, z) = (e₁₂, e₂₃, e₁₃).

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{int_vec_to_rat, rat_vec_to_int, QMatrix};
use crate::{Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupModel {
    Abelian { rank: usize },
    Unitriangular { n: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement(pub Vec<Int>);

pub type LieVector = Vec<Rat>;

impl GroupElement {
    pub fn from_i64s(c: &[i64]) -> Self {
        GroupElement(c.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// ℓ¹ norm of the coordinate vector.
    pub fn norm(&self) -> Int {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        int_vec_to_rat(&self.0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `1,0,-2` with or without surrounding parentheses.
impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Err(Error::Parse(format!("empty element {s:?}")));
        }
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<Int>()
                    .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupElement)
    }
}

/// Index of entry (i, j), 0-based with i < j, in superdiagonal-major order.
pub fn ut_index(n: usize, i: usize, j: usize) -> usize {
    let k = j - i;
    (k - 1) * n - (k - 1) * k / 2 + i
}

fn ut_mul<T: Num + Clone>(n: usize, a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect();
    for i in 0..n {
        for j in i + 2..n {
            let mut acc = T::zero();
            for k in i + 1..j {
                acc = acc + a[ut_index(n, i, k)].clone() * b[ut_index(n, k, j)].clone();
            }
            let idx = ut_index(n, i, j);
            out[idx] = out[idx].clone() + acc;
        }
    }
    out
}

fn ut_inv<T: Num + Clone>(n: usize, a: &[T]) -> Vec<T> {
    let mut b = vec![T::zero(); a.len()];
    for k in 1..n {
        for i in 0..n - k {
            let j = i + k;
            let mut acc = T::zero() - a[ut_index(n, i, j)].clone();
            for m in i + 1..j {
                acc = acc - a[ut_index(n, i, m)].clone() * b[ut_index(n, m, j)].clone();
            }
            b[ut_index(n, i, j)] = acc;
        }
    }
    b
}

impl GroupModel {
    pub fn abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Parse("abelian rank must be positive".into()));
        }
        Ok(GroupModel::Abelian { rank })
    }

    pub fn unitriangular(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parse("unitriangular size must be at least 2".into()));
        }
        Ok(GroupModel::Unitriangular { n })
    }

    pub fn heisenberg() -> Self {
        GroupModel::Unitriangular { n: 3 }
    }

    pub fn coordinate_count(&self) -> usize {
        match *self {
            GroupModel::Abelian { rank } => rank,
            GroupModel::Unitriangular { n } => n * (n - 1) / 2,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![Int::zero(); self.coordinate_count()])
    }

    pub fn basis_element(&self, i: usize) -> GroupElement {
        let mut g = self.identity();
        g.0[i] = Int::one();
        g
    }

    /// Coordinate indices spanning the centre.
    pub fn center_coordinates(&self) -> Vec<usize> {
        match *self {
            GroupModel::Abelian { rank } => (0..rank).collect(),
            GroupModel::Unitriangular { n } => vec![ut_index(n, 0, n - 1)],
        }
    }

    /// Coordinate indices of the standard generators: every basis vector for
    /// ℤⁿ, the superdiagonal entries for UTₙ.
    pub fn generator_coordinates(&self) -> Vec<usize> {
        match *self {
            GroupModel::Abelian { rank } => (0..rank).collect(),
            GroupModel::Unitriangular { n } => (0..n - 1).collect(),
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.0.len() != self.coordinate_count() {
            return Err(Error::ModelMismatch(format!(
                "element {g} has {} coordinates, model expects {}",
                g.0.len(),
                self.coordinate_count()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(self.mul_generic(&a.0, &b.0))
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement(self.inv_generic(&a.0))
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        factors
            .into_iter()
            .fold(self.identity(), |acc, g| self.mul_unchecked(&acc, g))
    }

    pub fn pow(&self, g: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse(g) } else { g.clone() };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul_unchecked(&acc, &base))
    }

    /// The same multiplication law on rational coordinates, i.e. in the
    /// rational Mal'cev completion.
    pub fn mul_rational(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        self.mul_generic(a, b)
    }

    pub fn inverse_rational(&self, a: &[Rat]) -> Vec<Rat> {
        self.inv_generic(a)
    }

    fn mul_generic<T: Num + Clone>(&self, a: &[T], b: &[T]) -> Vec<T> {
        match *self {
            GroupModel::Abelian { .. } => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
            GroupModel::Unitriangular { n } => ut_mul(n, a, b),
        }
    }

    fn inv_generic<T: Num + Clone>(&self, a: &[T]) -> Vec<T> {
        match *self {
            GroupModel::Abelian { .. } => a.iter().map(|x| T::zero() - x.clone()).collect(),
            GroupModel::Unitriangular { n } => ut_inv(n, a),
        }
    }

    /// log(I + N) = N − N²/2 + N³/3 − …, a finite sum.
    pub fn log_rational(&self, g: &[Rat]) -> LieVector {
        match *self {
            GroupModel::Abelian { .. } => g.to_vec(),
            GroupModel::Unitriangular { n } => {
                let nm = nilpotent_of(n, g);
                let mut power = nm.clone();
                let mut acc = QMatrix::zero(n, n);
                for k in 1..n {
                    let coeff = Rat::new(Int::from(if k % 2 == 1 { 1 } else { -1 }), Int::from(k));
                    acc = acc.add(&power.scale(&coeff));
                    power = power.mul(&nm);
                }
                coords_of_nilpotent(n, &acc)
            }
        }
    }

    pub fn log(&self, g: &GroupElement) -> LieVector {
        self.log_rational(&g.to_rational())
    }

    /// exp(L) = I + L + L²/2! + …, returned as rational group coordinates.
    pub fn exp(&self, v: &[Rat]) -> Vec<Rat> {
        match *self {
            GroupModel::Abelian { .. } => v.to_vec(),
            GroupModel::Unitriangular { n } => {
                let l = nilpotent_of(n, v);
                let mut term = l.clone();
                let mut acc = l.clone();
                for k in 2..n {
                    term = term.mul(&l).scale(&Rat::new(Int::one(), Int::from(k)));
                    acc = acc.add(&term);
                }
                coords_of_nilpotent(n, &acc)
            }
        }
    }

    /// exp, demanding an integer element.
    pub fn exp_integral(&self, v: &[Rat]) -> Result<GroupElement> {
        let c = self.exp(v);
        rat_vec_to_int(&c)
            .map(GroupElement)
            .ok_or_else(|| Error::NotInLattice(format_rat_vec(&c)))
    }

    /// Lie bracket in coordinates; zero on the abelian model.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> LieVector {
        match *self {
            GroupModel::Abelian { rank } => vec![Rat::zero(); rank],
            GroupModel::Unitriangular { n } => {
                let a = nilpotent_of(n, u);
                let b = nilpotent_of(n, v);
                coords_of_nilpotent(n, &a.mul(&b).sub(&b.mul(&a)))
            }
        }
    }

    /// Bilinear part Q of the product: a·b = a + b + Q(a, b).
    fn quadratic(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let p = self.mul_rational(a, b);
        p.iter()
            .zip(a)
            .zip(b)
            .map(|((p, a), b)| p - a - b)
            .collect()
    }

    pub fn random_element(&self, rng: &mut impl Rng, bound: i64) -> GroupElement {
        GroupElement(
            (0..self.coordinate_count())
                .map(|_| Int::from(rng.gen_range(-bound..=bound)))
                .collect(),
        )
    }
}

fn nilpotent_of(n: usize, v: &[Rat]) -> QMatrix {
    let mut m = QMatrix::zero(n, n);
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = v[ut_index(n, i, j)].clone();
        }
    }
    m
}

fn coords_of_nilpotent(n: usize, m: &QMatrix) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n * (n - 1) / 2];
    for i in 0..n {
        for j in i + 1..n {
            v[ut_index(n, i, j)] = m[(i, j)].clone();
        }
    }
    v
}

pub(crate) fn format_rat_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Finite-index subgroup H of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// coords[i] ≡ 0 mod moduli[i].
    CongruenceDiagonal { moduli: Vec<Int> },
    /// Integer span of the rows of `basis` (abelian model only); `hnf` is its
    /// Hermite normal form.
    IntegerLattice {
        basis: Vec<Vec<Int>>,
        hnf: Vec<Vec<Int>>,
    },
}

impl SubgroupSpec {
    /// Rejects moduli that do not cut out a subgroup. For UTₙ the exact
    /// criterion is m_ij | m_ik·m_kj for every i < k < j.
    pub fn congruence(model: &GroupModel, moduli: Vec<Int>) -> Result<Self> {
        if moduli.len() != model.coordinate_count() {
            return Err(Error::DimensionMismatch {
                expected: model.coordinate_count(),
                found: moduli.len(),
            });
        }
        if let Some(m) = moduli.iter().find(|m| !m.is_positive()) {
            return Err(Error::Parse(format!("modulus {m} must be positive")));
        }
        if let GroupModel::Unitriangular { n } = *model {
            for i in 0..n {
                for j in i + 2..n {
                    for k in i + 1..j {
                        let prod = &moduli[ut_index(n, i, k)] * &moduli[ut_index(n, k, j)];
                        if !prod.is_multiple_of(&moduli[ut_index(n, i, j)]) {
                            return Err(Error::Parse(format!(
                                "moduli do not define a subgroup: m{}{} does not divide m{}{}·m{}{}",
                                i + 1, j + 1, i + 1, k + 1, k + 1, j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(SubgroupSpec::CongruenceDiagonal { moduli })
    }

    pub fn lattice(model: &GroupModel, basis: Vec<Vec<Int>>) -> Result<Self> {
        let GroupModel::Abelian { rank } = *model else {
            return Err(Error::Unsupported(
                "lattice subgroups require the abelian model".into(),
            ));
        };
        if basis.len() != rank || basis.iter().any(|r| r.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: basis.len(),
            });
        }
        let hnf = hermite_normal_form(&basis);
        if hnf.len() != rank {
            return Err(Error::Parse("lattice basis is singular".into()));
        }
        Ok(SubgroupSpec::IntegerLattice { basis, hnf })
    }

    pub fn whole_group(model: &GroupModel) -> Self {
        SubgroupSpec::CongruenceDiagonal {
            moduli: vec![Int::one(); model.coordinate_count()],
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self {
            SubgroupSpec::CongruenceDiagonal { moduli } => {
                g.0.len() == moduli.len()
                    && g.0.iter().zip(moduli).all(|(c, m)| c.is_multiple_of(m))
            }
            SubgroupSpec::IntegerLattice { hnf, .. } => {
                g.0.len() == hnf.len() && hnf_contains(hnf, &g.0)
            }
        }
    }

    pub fn index(&self) -> Int {
        match self {
            SubgroupSpec::CongruenceDiagonal { moduli } => moduli.iter().product(),
            SubgroupSpec::IntegerLattice { hnf, .. } => hnf
                .iter()
                .map(|row| {
                    row.iter()
                        .find(|c| !c.is_zero())
                        .cloned()
                        .unwrap_or_default()
                })
                .product(),
        }
    }

    /// A generating set of H.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            SubgroupSpec::CongruenceDiagonal { moduli } => (0..moduli.len())
                .map(|i| {
                    let mut c = vec![Int::zero(); moduli.len()];
                    c[i] = moduli[i].clone();
                    GroupElement(c)
                })
                .collect(),
            SubgroupSpec::IntegerLattice { basis, .. } => {
                basis.iter().cloned().map(GroupElement).collect()
            }
        }
    }

    /// Uniformly sampled member with bounded multipliers.
    pub fn random_member(&self, rng: &mut impl Rng, bound: i64) -> GroupElement {
        match self {
            SubgroupSpec::CongruenceDiagonal { moduli } => GroupElement(
                moduli
                    .iter()
                    .map(|m| m * Int::from(rng.gen_range(-bound..=bound)))
                    .collect(),
            ),
            SubgroupSpec::IntegerLattice { basis, .. } => {
                let mut c = vec![Int::zero(); basis.len()];
                for row in basis {
                    let t = Int::from(rng.gen_range(-bound..=bound));
                    for (ci, r) in c.iter_mut().zip(row) {
                        *ci += &t * r;
                    }
                }
                GroupElement(c)
            }
        }
    }
}

/// Row-style Hermite normal form: nonzero rows only, pivots positive and
/// strictly increasing in column, entries above each pivot reduced into
/// [0, pivot).
pub fn hermite_normal_form(rows: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let m = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        while let Some(p) = (r..m)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].abs())
        {
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                clean &= a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let q = row[c].div_floor(&pivot_row[c]);
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

fn hnf_contains(hnf: &[Vec<Int>], v: &[Int]) -> bool {
    let mut rest = v.to_vec();
    for row in hnf {
        let Some(pc) = row.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        let (q, r) = rest[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

/// How φ is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiForm {
    /// φ acts linearly on group coordinates.
    Coordinate(QMatrix),
    /// φ = exp ∘ M ∘ log for a Lie algebra endomorphism M.
    Lie(QMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualEndomorphism {
    model: GroupModel,
    subgroup: SubgroupSpec,
    form: PhiForm,
    lie: QMatrix,
}

fn lie_columns(model: &GroupModel, phi: &QMatrix) -> QMatrix {
    let k = model.coordinate_count();
    let columns: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut v = vec![Rat::zero(); k];
            v[i] = Rat::one();
            model.log_rational(&phi.mul_vec(&model.exp(&v)))
        })
        .collect();
    QMatrix::from_columns(&columns)
}

/// Matrix of log∘φ∘exp for a coordinate-linear φ, with a linearity check on
/// sums of basis vectors.
pub fn lie_matrix_of(model: &GroupModel, phi: &QMatrix) -> Result<QMatrix> {
    let k = model.coordinate_count();
    if phi.rows() != k || phi.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: phi.rows(),
        });
    }
    let through = |v: &[Rat]| model.log_rational(&phi.mul_vec(&model.exp(v)));
    let unit = |i: usize| {
        let mut v = vec![Rat::zero(); k];
        v[i] = Rat::one();
        v
    };
    let m = lie_columns(model, phi);
    for i in 0..k {
        for j in i..k {
            let mut v = unit(i);
            v[j] += Rat::one();
            if through(&v) != m.mul_vec(&v) {
                return Err(Error::NotAnAutomorphism(format!(
                    "log∘φ∘exp is not linear on e{} + e{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(m)
}

impl VirtualEndomorphism {
    /// The Lie matrix is read off basis vectors; when φ is not a
    /// homomorphism it is only a linear approximation and `validate` says so.
    pub fn coordinate(model: GroupModel, subgroup: SubgroupSpec, phi: QMatrix) -> Result<Self> {
        let k = model.coordinate_count();
        if phi.rows() != k || phi.cols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: phi.rows(),
            });
        }
        let lie = lie_columns(&model, &phi);
        Ok(VirtualEndomorphism {
            model,
            subgroup,
            form: PhiForm::Coordinate(phi),
            lie,
        })
    }

    pub fn lie(model: GroupModel, subgroup: SubgroupSpec, m: QMatrix) -> Result<Self> {
        let k = model.coordinate_count();
        if m.rows() != k || m.cols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: m.rows(),
            });
        }
        Ok(VirtualEndomorphism {
            model,
            subgroup,
            form: PhiForm::Lie(m.clone()),
            lie: m,
        })
    }

    /// The odometer's base: ℤ, H = 2ℤ, φ(2a) = a.
    pub fn odometer() -> Self {
        let model = GroupModel::Abelian { rank: 1 };
        let h = SubgroupSpec::lattice(&model, vec![vec![Int::from(2)]]).expect("valid lattice");
        let phi = QMatrix::from_rows(vec![vec![Rat::new(Int::one(), Int::from(2))]]);
        Self::coordinate(model, h, phi).expect("linear")
    }

    /// UT₃ with H = {(x, 2y, 2z)} and φ(x, y, z) = (x, y/2, z/2).
    pub fn heisenberg() -> Self {
        let model = GroupModel::heisenberg();
        let h = SubgroupSpec::congruence(&model, vec![Int::one(), Int::from(2), Int::from(2)])
            .expect("subgroup");
        let half = Rat::new(Int::one(), Int::from(2));
        let phi = QMatrix::diagonal(&[Rat::one(), half.clone(), half]);
        Self::coordinate(model, h, phi).expect("linear")
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        &self.subgroup
    }

    pub fn form(&self) -> &PhiForm {
        &self.form
    }

    pub fn lie_matrix(&self) -> &QMatrix {
        &self.lie
    }

    /// φ on rational coordinates (its extension to the completion).
    pub fn apply_rational(&self, v: &[Rat]) -> Vec<Rat> {
        match &self.form {
            PhiForm::Coordinate(p) => p.mul_vec(v),
            PhiForm::Lie(m) => self.model.exp(&m.mul_vec(&self.model.log_rational(v))),
        }
    }

    pub fn apply(&self, h: &GroupElement) -> Result<GroupElement> {
        self.model.check(h)?;
        if !self.subgroup.contains(h) {
            return Err(Error::DomainError(h.to_string()));
        }
        let image = self.apply_rational(&h.to_rational());
        rat_vec_to_int(&image)
            .map(GroupElement)
            .ok_or_else(|| Error::NotInLattice(format_rat_vec(&image)))
    }

    /// [G:H], cross-checked against |det M|⁻¹.
    pub fn checked_index(&self) -> Result<Int> {
        let index = self.subgroup.index();
        let det = self.lie.determinant();
        if det.is_zero() || Rat::from_integer(index.clone()) != det.abs().recip() {
            return Err(Error::InconsistentEndomorphism(format!(
                "[G:H] = {index} but det of the Lie matrix is {det}"
            )));
        }
        Ok(index)
    }

    fn homomorphism_check(&self) -> (bool, String) {
        let k = self.model.coordinate_count();
        let unit = |i: usize| {
            let mut v = vec![Rat::zero(); k];
            v[i] = Rat::one();
            v
        };
        for p in 0..k {
            for q in 0..k {
                let (ep, eq) = (unit(p), unit(q));
                let ok = match &self.form {
                    PhiForm::Coordinate(m) => {
                        m.mul_vec(&self.model.quadratic(&ep, &eq))
                            == self.model.quadratic(&m.mul_vec(&ep), &m.mul_vec(&eq))
                    }
                    PhiForm::Lie(m) => {
                        m.mul_vec(&self.model.bracket(&ep, &eq))
                            == self.model.bracket(&m.mul_vec(&ep), &m.mul_vec(&eq))
                    }
                };
                if !ok {
                    return (
                        false,
                        format!("fails on basis pair (e{}, e{})", p + 1, q + 1),
                    );
                }
            }
        }
        (true, "bilinear identity holds on all basis pairs".into())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        let bad = self
            .subgroup
            .generators()
            .into_iter()
            .find(|g| rat_vec_to_int(&self.apply_rational(&g.to_rational())).is_none());
        checks.push(Check {
            name: "integrality",
            passed: bad.is_none(),
            exact: true,
            detail: match &bad {
                None => "φ maps the generators of H to integer elements".into(),
                Some(g) => format!(
                    "φ{g} = {} is not integral",
                    format_rat_vec(&self.apply_rational(&g.to_rational()))
                ),
            },
        });

        if let PhiForm::Coordinate(p) = &self.form {
            let linear = lie_matrix_of(&self.model, p);
            checks.push(Check {
                name: "lie-linearity",
                passed: linear.is_ok(),
                exact: true,
                detail: match linear {
                    Ok(_) => "log∘φ∘exp is linear".into(),
                    Err(e) => e.to_string(),
                },
            });
        }

        let (hom, detail) = self.homomorphism_check();
        checks.push(Check {
            name: "homomorphism",
            passed: hom,
            exact: true,
            detail,
        });

        let mut rng = ChaCha8Rng::seed_from_u64(0x10c5);
        let mut failure = None;
        for _ in 0..200 {
            let h = self.subgroup.random_member(&mut rng, 50);
            let lhs = self.lie.mul_vec(&self.model.log(&h));
            let rhs = self
                .model
                .log_rational(&self.apply_rational(&h.to_rational()));
            if lhs != rhs {
                failure = Some(h);
                break;
            }
        }
        checks.push(Check {
            name: "log-commutation",
            passed: failure.is_none(),
            exact: false,
            detail: match failure {
                None => "M·log(h) = log(φ(h)) on 200 sampled h ∈ H".into(),
                Some(h) => format!("M·log(h) ≠ log(φ(h)) at h = {h}"),
            },
        });

        let det = self.lie.determinant();
        checks.push(Check {
            name: "injectivity",
            passed: !det.is_zero(),
            exact: true,
            detail: format!("det M = {det}"),
        });

        let index = self.checked_index();
        checks.push(Check {
            name: "index",
            passed: index.is_ok(),
            exact: true,
            detail: match index {
                Ok(i) => format!("[G:H] = {i} = |det M|⁻¹"),
                Err(e) => e.to_string(),
            },
        });
        ValidationReport { checks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// false for sampled checks.
    pub exact: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<16} {} {}{}",
                c.name,
                if c.passed { "ok  " } else { "FAIL" },
                c.detail,
                if c.exact { "" } else { " (sampled)" }
            )?;
        }
        Ok(())
    }
}

/// Ordered coset representatives; letter i names `reps[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSet {
    reps: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transversal {
    Valid,
    WrongSize {
        expected: Int,
        found: usize,
    },
    /// reps[j]⁻¹·reps[i] ∈ H.
    SameCoset(usize, usize),
}

impl Transversal {
    pub fn is_valid(&self) -> bool {
        matches!(self, Transversal::Valid)
    }
}

impl DigitSet {
    pub fn new(reps: Vec<GroupElement>) -> Self {
        DigitSet { reps }
    }

    pub fn from_i64s(reps: &[&[i64]]) -> Self {
        DigitSet {
            reps: reps.iter().map(|r| GroupElement::from_i64s(r)).collect(),
        }
    }

    pub fn reps(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn identity_position(&self) -> Option<usize> {
        self.reps.iter().position(GroupElement::is_identity)
    }

    pub fn validate(&self, model: &GroupModel, h: &SubgroupSpec) -> Transversal {
        let index = h.index();
        if Int::from(self.reps.len()) != index {
            return Transversal::WrongSize {
                expected: index,
                found: self.reps.len(),
            };
        }
        let inverses: Vec<GroupElement> = self.reps.iter().map(|r| model.inverse(r)).collect();
        for i in 0..self.reps.len() {
            for (j, inv) in inverses.iter().enumerate().take(i) {
                if h.contains(&model.mul_unchecked(inv, &self.reps[i])) {
                    return Transversal::SameCoset(j, i);
                }
            }
        }
        Transversal::Valid
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.reps.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::from_i64s(c)
    }

    #[test]
    fn heisenberg_products() {
        let g = GroupModel::heisenberg();
        let (a, b) = (e(&[1, 0, 0]), e(&[0, 1, 0]));
        assert_eq!(g.mul(&a, &b).unwrap(), e(&[1, 1, 1]));
        let comm = g.product([&g.inverse(&a), &g.inverse(&b), &a, &b]);
        assert_eq!(comm, e(&[0, 0, 1]));
        assert_eq!(g.inverse(&e(&[1, 1, 0])), e(&[-1, -1, 1]));
        assert_eq!(g.inverse(&a), e(&[-1, 0, 0]));
        assert!(matches!(
            g.mul(&a, &e(&[1, 0])),
            Err(Error::ModelMismatch(_))
        ));
    }

    #[test]
    fn ut4_matches_matrix_product() {
        let g = GroupModel::unitriangular(4).unwrap();
        let to_m = |v: &GroupElement| {
            let mut m = QMatrix::identity(4);
            for i in 0..4 {
                for j in i + 1..4 {
                    m[(i, j)] = Rat::from_integer(v.0[ut_index(4, i, j)].clone());
                }
            }
            m
        };
        let a = e(&[1, -2, 3, 4, 0, -1]);
        let b = e(&[2, 5, -1, 1, 3, 7]);
        assert_eq!(to_m(&g.mul(&a, &b).unwrap()), to_m(&a).mul(&to_m(&b)));
        assert!(g.mul(&a, &g.inverse(&a)).unwrap().is_identity());
        assert_eq!(g.center_coordinates(), vec![5]);
    }

    #[test]
    fn log_exp_heisenberg() {
        let g = GroupModel::heisenberg();
        let v = g.log(&e(&[3, 5, 7]));
        assert_eq!(v, vec![rat(3, 1), rat(5, 1), rat(7, 1) - rat(15, 2)]);
        assert_eq!(
            g.exp_integral(&g.log(&e(&[1, 1, 1]))).unwrap(),
            e(&[1, 1, 1])
        );
        assert!(matches!(
            g.exp_integral(&[rat(1, 1), rat(1, 1), rat(0, 1)]),
            Err(Error::NotInLattice(_))
        ));
    }

    #[test]
    fn subgroup_membership_and_index() {
        let g = GroupModel::heisenberg();
        let h = SubgroupSpec::congruence(&g, vec![1.into(), 2.into(), 2.into()]).unwrap();
        assert!(h.contains(&e(&[1, 2, 2])));
        assert!(h.contains(&e(&[0, 0, 0])));
        assert!(!h.contains(&e(&[0, 1, 0])));
        assert_eq!(h.index(), Int::from(4));
        assert_eq!(SubgroupSpec::whole_group(&g).index(), Int::one());
        // m13 = 2 must divide m12·m23 = 1
        assert!(SubgroupSpec::congruence(&g, vec![1.into(), 1.into(), 2.into()]).is_err());
    }

    #[test]
    fn lattice_hnf() {
        let z2 = GroupModel::abelian(2).unwrap();
        let basis = vec![
            vec![Int::from(4), Int::from(6)],
            vec![Int::from(2), Int::from(4)],
        ];
        let h = SubgroupSpec::lattice(&z2, basis).unwrap();
        assert_eq!(h.index(), Int::from(4));
        assert!(h.contains(&e(&[6, 10])));
        assert!(h.contains(&e(&[2, 0])));
        assert!(!h.contains(&e(&[1, 0])));
        assert!(!h.contains(&e(&[0, 1])));
        let z = GroupModel::abelian(1).unwrap();
        assert_eq!(
            SubgroupSpec::lattice(&z, vec![vec![Int::from(2)]])
                .unwrap()
                .index(),
            Int::from(2)
        );
    }

    #[test]
    fn heisenberg_endomorphism() {
        let phi = VirtualEndomorphism::heisenberg();
        assert_eq!(phi.apply(&e(&[1, 2, 2])).unwrap(), e(&[1, 1, 1]));
        assert_eq!(phi.apply(&e(&[0, 0, 0])).unwrap(), e(&[0, 0, 0]));
        assert!(matches!(
            phi.apply(&e(&[0, 1, 0])),
            Err(Error::DomainError(_))
        ));
        assert_eq!(
            phi.lie_matrix(),
            &QMatrix::diagonal(&[rat(1, 1), rat(1, 2), rat(1, 2)])
        );
        assert_eq!(phi.checked_index().unwrap(), Int::from(4));
        let report = phi.validate();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn odometer_endomorphism() {
        let phi = VirtualEndomorphism::odometer();
        assert_eq!(phi.apply(&e(&[6])).unwrap(), e(&[3]));
        assert_eq!(phi.lie_matrix(), &QMatrix::diagonal(&[rat(1, 2)]));
        assert_eq!(phi.checked_index().unwrap(), Int::from(2));
        assert!(phi.validate().passed());
    }

    #[test]
    fn invalid_endomorphisms() {
        let g = GroupModel::heisenberg();
        let h = SubgroupSpec::congruence(&g, vec![1.into(), 2.into(), 2.into()]).unwrap();
        let zero = VirtualEndomorphism::coordinate(g, h.clone(), QMatrix::zero(3, 3)).unwrap();
        let failed = zero.validate().failed();
        assert!(failed.contains(&"injectivity") && failed.contains(&"index"));
        let third = QMatrix::diagonal(&[rat(1, 1), rat(1, 2), rat(1, 3)]);
        let bad = VirtualEndomorphism::coordinate(g, h, third).unwrap();
        assert!(bad.validate().failed().contains(&"integrality"));
    }

    #[test]
    fn identity_lie_matrix() {
        let g = GroupModel::heisenberg();
        let id =
            VirtualEndomorphism::coordinate(g, SubgroupSpec::whole_group(&g), QMatrix::identity(3))
                .unwrap();
        assert_eq!(id.lie_matrix(), &QMatrix::identity(3));
    }

    #[test]
    fn transversals() {
        let g = GroupModel::heisenberg();
        let h = SubgroupSpec::congruence(&g, vec![1.into(), 2.into(), 2.into()]).unwrap();
        let d = DigitSet::from_i64s(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]);
        let d2 = DigitSet::from_i64s(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1]]);
        let bad = DigitSet::from_i64s(&[&[0, 0, 0], &[0, 2, 0], &[0, 0, 1], &[0, 1, 1]]);
        assert!(d.validate(&g, &h).is_valid());
        assert!(d2.validate(&g, &h).is_valid());
        assert_eq!(bad.validate(&g, &h), Transversal::SameCoset(0, 1));
    }

    #[test]
    fn parse_element() {
        assert_eq!("1,0,-2".parse::<GroupElement>().unwrap(), e(&[1, 0, -2]));
        assert_eq!("(1, 0, 0)".parse::<GroupElement>().unwrap(), e(&[1, 0, 0]));
        assert!("".parse::<GroupElement>().is_err());
    }
}
