//! Univariate polynomials over ℚ, lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::QMatrix;
use crate::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPolynomial {
    coeffs: Vec<Rat>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_int_coeffs(coeffs: &[Int]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// x - root
    pub fn linear(root: Rat) -> Self {
        Self::new(vec![-root, Rat::one()])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![Rat::zero(); degree + 1];
        c[degree] = Rat::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0; check `is_zero` first
    /// where that matters.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&QMatrix::identity(n).scale(c));
        }
        acc
    }

    /// x^n p(1/x)
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Multiplicity of `factor` in `self` by repeated exact division.
    pub fn multiplicity_of(&self, factor: &Self) -> usize {
        if self.is_zero() || factor.degree() == 0 {
            return 0;
        }
        let mut count = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(factor) {
            cur = q;
            count += 1;
        }
        count
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn to_primitive_integer(&self) -> Vec<Int> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(Signed::is_negative) {
            -1
        } else {
            1
        };
        ints.into_iter().map(|c| c / &g * sign).collect()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders as `x^2 - 3/2x + 1/2`.
impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if abs.is_one() && i > 0 {
                String::new()
            } else {
                abs.to_string()
            };
            match i {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-1/2)^2
        let p = RatPolynomial::linear(rat(1, 1)).mul(&RatPolynomial::linear(rat(1, 2)).pow(2));
        let q = RatPolynomial::linear(rat(1, 2));
        assert_eq!(p.multiplicity_of(&q), 2);
        assert_eq!(p.gcd(&p.derivative()), q);
        let (quot, rem) = p.div_rem(&RatPolynomial::from_ints(&[1, 0, 1]));
        assert_eq!(quot.mul(&RatPolynomial::from_ints(&[1, 0, 1])).add(&rem), p);
    }

    #[test]
    fn display_format() {
        let p = RatPolynomial::new(vec![rat(1, 8), rat(-1, 4), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.to_string(), "x^3 - 1/4x + 1/8");
        assert_eq!(RatPolynomial::zero().to_string(), "0");
        assert_eq!(RatPolynomial::from_ints(&[-1, 1]).to_string(), "x - 1");
    }

    #[test]
    fn primitive_integer_form() {
        let p = RatPolynomial::new(vec![rat(1, 8), rat(-1, 4), rat(1, 1)]);
        let ints: Vec<i64> = p
            .to_primitive_integer()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        assert_eq!(ints, vec![1, -2, 8]);
    }
}
