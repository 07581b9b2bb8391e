//! Irreducible factorization over ℚ.
//!
//! Yun's squarefree decomposition over ℚ, then Zassenhaus on each primitive
//! squarefree part: factor modulo a small prime (distinct-degree followed by
//! Cantor–Zassenhaus equal-degree splitting), Hensel-lift to a power of the
//! prime exceeding the Mignotte bound, and recombine lifted factors by trial
//! division over ℤ.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::poly::RatPolynomial;
use crate::Int;

pub const DEFAULT_DEGREE_CAP: usize = 24;

/// Irreducible monic factors with multiplicities, sorted by degree then
/// coefficients. Constants are dropped.
pub fn factor_over_rationals(
    p: &RatPolynomial,
    degree_cap: usize,
) -> Result<Vec<(RatPolynomial, usize)>, Error> {
    if p.is_zero() || p.degree() == 0 {
        return Ok(Vec::new());
    }
    if p.degree() > degree_cap {
        return Err(Error::Unsupported(format!(
            "factorization degree {} exceeds cap {}",
            p.degree(),
            degree_cap
        )));
    }
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(p) {
        let f = IntPoly::new(part.to_primitive_integer());
        for factor in zassenhaus(&f) {
            out.push((factor.to_monic_rational(), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
            .then(a.1.cmp(&b.1))
    });
    Ok(out)
}

/// Yun's algorithm; returns squarefree monic parts `a_i` with multiplicity
/// `i`, skipping trivial parts.
pub fn squarefree_decomposition(p: &RatPolynomial) -> Vec<(RatPolynomial, usize)> {
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let nc = d.div_exact(&a).expect("gcd divides");
        d = nc.sub(&nb.derivative());
        b = nb;
        if a.degree() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly(Vec<Int>);

impl IntPoly {
    fn new(mut c: Vec<Int>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly(c)
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &Int {
        self.0.last().expect("nonzero polynomial")
    }

    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![Int::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        IntPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default()
                        - o.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    fn scale(&self, s: &Int) -> Self {
        IntPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let sign = if self.lc().is_negative() {
            -Int::one()
        } else {
            Int::one()
        };
        IntPoly::new(self.0.iter().map(|c| c / &g * &sign).collect())
    }

    /// Exact division over ℤ.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.0.is_empty() {
            return None;
        }
        if self.0.is_empty() {
            return Some(self.clone());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.0.clone();
        let dd = d.degree();
        let mut q = vec![Int::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let (c, r) = rem[k + dd].div_rem(d.lc());
            if !r.is_zero() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(q))
    }

    fn reduce(&self, m: &Int) -> Self {
        IntPoly::new(self.0.iter().map(|c| c.mod_floor(m)).collect())
    }

    fn symmetric(&self, m: &Int) -> Self {
        let half = m / 2;
        IntPoly::new(
            self.0
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    fn to_mod(&self, p: u64) -> ModPoly {
        let bp = Int::from(p);
        ModPoly::new(
            self.0
                .iter()
                .map(|c| c.mod_floor(&bp).to_u64().unwrap())
                .collect(),
            p,
        )
    }

    fn from_mod(m: &ModPoly) -> Self {
        IntPoly::new(m.c.iter().map(|&c| Int::from(c)).collect())
    }

    fn to_monic_rational(&self) -> RatPolynomial {
        RatPolynomial::from_int_coeffs(&self.0).monic()
    }

    fn norm2_ceil(&self) -> Int {
        let s: Int = self.0.iter().map(|c| c * c).sum();
        s.sqrt() + 1
    }
}

/// Polynomial over 𝔽_p with p < 2³², lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModPoly {
    c: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn one(p: u64) -> Self {
        ModPoly::new(vec![1], p)
    }

    fn x(p: u64) -> Self {
        ModPoly::new(vec![0, 1], p)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.inv(self.lc());
        self.scale(inv)
    }

    fn scale(&self, s: u64) -> Self {
        ModPoly::new(self.c.iter().map(|&v| v * s % self.p).collect(), self.p)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        ModPoly::new(
            (0..n)
                .map(|i| self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0))
                .collect(),
            self.p,
        )
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        ModPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)
                })
                .collect(),
            self.p,
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(Vec::new(), self.p);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        ModPoly::new(out, self.p)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        if self.degree() < d.degree() || self.is_zero() {
            return (ModPoly::new(Vec::new(), self.p), self.clone());
        }
        let p = self.p;
        let inv = self.inv(d.lc());
        let dd = d.degree();
        let mut rem = self.c.clone();
        let mut q = vec![0u64; self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd] * inv % p;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * dc % p) % p;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (ModPoly::new(q, p), ModPoly::new(rem, p))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·self + t·o = g, g monic.
    fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::new(Vec::new(), p));
        let (mut t0, mut t1) = (ModPoly::new(Vec::new(), p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let ns = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, ns);
            let nt = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, nt);
        }
        let inv = self.inv(r0.lc());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    fn derivative(&self) -> Self {
        ModPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &v)| (i as u64 % self.p) * v % self.p)
                .collect(),
            self.p,
        )
    }

    fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPoly::one(self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn small_odd_primes() -> impl Iterator<Item = u64> {
    (3u64..20_000).step_by(2).filter(|&n| {
        (3..)
            .step_by(2)
            .take_while(|d| d * d <= n)
            .all(|d| n % d != 0)
    })
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = ModPoly::x(p);
    let mut i = 1;
    while rest.degree() >= 2 * i {
        h = h.pow_mod(&BigUint::from(p), &rest);
        let g = rest.gcd(&h.sub(&ModPoly::x(p)));
        if g.degree() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree() > 0 {
        let d = rest.degree();
        out.push((rest, d));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (p odd).
fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = f.degree();
    if n == d {
        out.push(f.clone());
        return;
    }
    let p = f.p;
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = ModPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.degree() == 0 {
            continue;
        }
        let mut g = a.gcd(f);
        if g.degree() == 0 {
            g = a.pow_mod(&exp, f).sub(&ModPoly::one(p)).gcd(f);
        }
        if g.degree() > 0 && g.degree() < n {
            let other = f.div_rem(&g).0.monic();
            equal_degree(&g, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

fn factor_mod_p(f: &ModPoly) -> Vec<ModPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_5171);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f.monic()) {
        equal_degree(&g, d, &mut rng, &mut out);
    }
    out
}

fn mod_inverse(a: &Int, m: &Int) -> Int {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Lifts f ≡ g·h (mod p), g monic, to the same congruence modulo p^k.
fn lift_pair(f: &IntPoly, g: &ModPoly, h: &ModPoly, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let (one, s, t) = g.ext_gcd(h);
    debug_assert_eq!(one, ModPoly::one(p));
    let bp = Int::from(p);
    let mut gg = IntPoly::from_mod(g);
    let mut hh = IntPoly::from_mod(h);
    let mut pj = bp.clone();
    for _ in 1..k {
        let diff = f.sub(&gg.mul(&hh));
        let e = IntPoly::new(diff.0.iter().map(|c| c / &pj).collect()).to_mod(p);
        let (q, dg) = t.mul(&e).div_rem(g);
        let dh = s.mul(&e).add(&q.mul(h));
        let next = &pj * &bp;
        gg = IntPoly::new(
            (0..gg.0.len().max(dg.c.len()))
                .map(|i| {
                    gg.0.get(i).cloned().unwrap_or_default()
                        + &pj * dg.c.get(i).copied().unwrap_or(0)
                })
                .collect(),
        )
        .reduce(&next);
        hh = IntPoly::new(
            (0..hh.0.len().max(dh.c.len()))
                .map(|i| {
                    hh.0.get(i).cloned().unwrap_or_default()
                        + &pj * dh.c.get(i).copied().unwrap_or(0)
                })
                .collect(),
        )
        .reduce(&next);
        pj = next;
    }
    (gg, hh)
}

/// Monic lifts of the modular factors, modulo p^k.
fn hensel_lift(f: &IntPoly, factors: &[ModPoly], p: u64, k: u32) -> Vec<IntPoly> {
    let m = Int::from(p).pow(k);
    if factors.len() == 1 {
        let inv = mod_inverse(f.lc(), &m);
        return vec![f.scale(&inv).reduce(&m)];
    }
    let lc_mod = f.lc().mod_floor(&Int::from(p)).to_u64().unwrap();
    let rest = factors[1..]
        .iter()
        .fold(ModPoly::one(p).scale(lc_mod), |acc, g| acc.mul(g));
    let (g, h) = lift_pair(f, &factors[0], &rest, p, k);
    let mut out = vec![g];
    out.extend(hensel_lift(&h, &factors[1..], p, k));
    out
}

fn choose_prime(f: &IntPoly) -> (u64, Vec<ModPoly>) {
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in small_odd_primes() {
        if (f.lc() % Int::from(p)).is_zero() {
            continue;
        }
        let fp = f.to_mod(p);
        if fp.gcd(&fp.derivative()).degree() > 0 {
            continue;
        }
        let factors = factor_mod_p(&fp);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 6 {
            break;
        }
    }
    best.expect("a suitable prime exists for squarefree input")
}

/// Irreducible factors over ℤ of a primitive squarefree polynomial.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    if f.degree() <= 1 {
        return vec![f.primitive()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.primitive()];
    }
    let bound = Int::from(2).pow(f.degree() as u32) * f.norm2_ceil() * f.lc().abs() * 2;
    let mut k = 1u32;
    let mut m = Int::from(p);
    while m <= bound {
        m *= p;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.clone();
    let mut result = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in combinations(remaining.len(), size) {
            let lc = current.lc().clone();
            let candidate = subset
                .iter()
                .fold(IntPoly::new(vec![lc]), |acc, &i| {
                    acc.mul(&lifted[remaining[i]]).reduce(&m)
                })
                .symmetric(&m)
                .primitive();
            if let Some(q) = current.div_exact(&candidate) {
                result.push(candidate);
                current = q;
                let chosen: Vec<usize> = subset.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|i| !chosen.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.degree() > 0 {
        result.push(current.primitive());
    }
    result
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Convenience: `true` when the monic factor has only integer coefficients,
/// i.e. its roots are algebraic integers.
pub fn is_integral_monic(p: &RatPolynomial) -> bool {
    p.is_monic() && p.has_integer_coefficients()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn p(c: &[i64]) -> RatPolynomial {
        RatPolynomial::from_ints(c)
    }

    #[test]
    fn heisenberg_characteristic_polynomial() {
        let chi = RatPolynomial::linear(rat(1, 1)).mul(&RatPolynomial::linear(rat(1, 2)).pow(2));
        let f = factor_over_rationals(&chi, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(
            f,
            vec![
                (RatPolynomial::linear(rat(1, 1)), 1),
                (RatPolynomial::linear(rat(1, 2)), 2),
            ]
        );
    }

    #[test]
    fn small_cases() {
        let f = factor_over_rationals(&p(&[-1, 0, 1]), 24).unwrap();
        assert_eq!(f, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        let f = factor_over_rationals(&p(&[1, 1, 1]), 24).unwrap();
        assert_eq!(f, vec![(p(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over ℚ but splits modulo every prime
        let f = factor_over_rationals(&p(&[1, 0, -10, 0, 1]), 24).unwrap();
        assert_eq!(f, vec![(p(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn product_reassembles() {
        // (x^2+x+1)(x^3-2)(2x-1)^2(x+3)
        let parts = [
            p(&[1, 1, 1]),
            p(&[-2, 0, 0, 1]),
            p(&[-1, 2]).pow(2),
            p(&[3, 1]),
        ];
        let prod = parts.iter().fold(RatPolynomial::one(), |a, b| a.mul(b));
        let f = factor_over_rationals(&prod, 24).unwrap();
        let back = f
            .iter()
            .fold(RatPolynomial::one(), |a, (q, m)| a.mul(&q.pow(*m)));
        assert_eq!(back, prod.monic());
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(q, _)| q.is_monic()));
    }

    #[test]
    fn cap_is_enforced() {
        let big = RatPolynomial::monomial(30).sub(&RatPolynomial::one());
        assert!(matches!(
            factor_over_rationals(&big, 24),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cyclotomic_twelve_stays_irreducible() {
        // Φ12 = x^4 - x^2 + 1
        let f = factor_over_rationals(&p(&[1, 0, -1, 0, 1]), 24).unwrap();
        assert_eq!(f.len(), 1);
        let g = factor_over_rationals(&RatPolynomial::monomial(12).sub(&RatPolynomial::one()), 24)
            .unwrap();
        // x^12 - 1 = Φ1 Φ2 Φ3 Φ4 Φ6 Φ12
        assert_eq!(g.len(), 6);
    }
}
