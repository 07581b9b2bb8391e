//! Oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use selfsim::linalg::rat;
use selfsim::{Rat, RatPolynomial};

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap()
}

/// Durand–Kerner roots, or None if the iteration does not settle.
pub fn numeric_roots(p: &RatPolynomial) -> Option<Vec<Complex64>> {
    let lead = to_f64(&p.leading());
    let c: Vec<f64> = p.coeffs().iter().map(|x| to_f64(x) / lead).collect();
    let n = p.degree();
    let eval = |z: Complex64| {
        c.iter()
            .rev()
            .fold(Complex64::zero(), |acc, &a| acc * z + a)
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::one();
            for j in (0..n).filter(|&j| j != i) {
                denom *= roots[i] - roots[j];
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            return Some(roots);
        }
    }
    None
}

pub fn random_poly(rng: &mut ChaCha8Rng) -> RatPolynomial {
    let deg = rng.gen_range(1..=8usize);
    if rng.gen_bool(0.5) {
        // product of factors with random small rational roots
        let mut p = RatPolynomial::one();
        for _ in 0..deg {
            p = p.mul(&RatPolynomial::linear(rat(
                rng.gen_range(-12..=12),
                rng.gen_range(1..=10),
            )));
        }
        p
    } else {
        let mut c: Vec<Rat> = (0..deg)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        c.push(rat(rng.gen_range(1..=40), 1));
        RatPolynomial::new(c)
    }
}
