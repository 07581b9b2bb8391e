//! Ball growth in Schreier graphs of the Heisenberg action on 4ⁿ words.
//! The growth degree is fitted inside the radius where level n still agrees
//! with a deeper level.
//!
//! ```bash
//! cargo run --release --example schreier_growth
//! ```

use selfsim::reproduction::free_orbit_basepoint;
use selfsim::schreier::{ball_growth, level_graph, orbital_growth, stabilizer_probe};
use selfsim::{GroupElement, SelfSimilarAction, Word};

fn main() -> selfsim::Result<()> {
    let action = SelfSimilarAction::heisenberg_d();
    let al = action.alphabet();
    let a = GroupElement::from_i64s(&[1, 0, 0]);
    let b = GroupElement::from_i64s(&[0, 1, 0]);
    let gens = [a.clone(), b.clone()];

    let points = [
        ("1^13", Word::repeat(0, 13), 9),
        ("2^13", Word::repeat(1, 13), 9),
        ("√2 point", free_orbit_basepoint(20), 16),
    ];
    for (label, w, level) in &points {
        let est = orbital_growth(&action, &gens, w, *level)?;
        println!(
            "{label:>9} level {level:>2}: stable radius {:>2}, degree {:.3}, |B(8)| = {}",
            est.radius, est.fitted_degree, est.ball_sizes[8]
        );
    }

    let whole = level_graph(&action, &gens, 9, &Word::repeat(0, 9))?;
    let est = ball_growth(&whole)?;
    println!(
        "whole level-9 graph: eccentricity {}, degree {:.3}",
        est.radius, est.fitted_degree
    );

    let named = [("a".to_string(), a), ("b".to_string(), b)];
    for w in [Word::repeat(0, 9), Word::repeat(1, 9)] {
        let stab: Vec<String> = stabilizer_probe(&action, &named, &w, 3)?
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        println!(
            "stabilizer of {} up to length 3: {}",
            al.format(&w),
            stab.join(", ")
        );
    }
    Ok(())
}
