//! Same group and φ as `heisenberg_finite_state`, but the identity digit is
//! replaced by a, which φ fixes. The central element c then has infinitely
//! many states: along 3ⁿ they are a⁻ⁿc.
//!
//! ```bash
//! cargo run --example heisenberg_non_finite_state
//! ```

use selfsim::automaton::{explore, recursion_table, Bounds, ExplorationOutcome, WordDictionary};
use selfsim::{GroupElement, SelfSimilarAction, Word};

fn main() -> selfsim::Result<()> {
    let action = SelfSimilarAction::heisenberg_d_prime();
    let dict = WordDictionary::heisenberg();
    let named: Vec<_> = dict.named().to_vec();
    for row in recursion_table(&action, &named, &dict)? {
        println!("{row}");
    }

    let c = GroupElement::from_i64s(&[0, 0, 1]);
    for n in 1..=6 {
        let s = action.state(&c, &Word::repeat(2, n))?;
        println!("c|3^{n} = {s}");
    }

    let bounds = Bounds {
        max_states: 200,
        ..Bounds::default()
    };
    if let ExplorationOutcome::BoundExceeded(r) = explore(&action, &[c], bounds)? {
        println!(
            "exploration stopped at {} states, depth {}",
            r.states_found, r.frontier_depth
        );
        for (w, g) in r.witness_chain.iter().rev().take(3) {
            println!("  along {}: {g}", action.alphabet().format(w));
        }
    }
    Ok(())
}
