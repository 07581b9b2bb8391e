//! The discrete Heisenberg group with H = {(x, 2y, 2z)}, φ(x, y, z) =
//! (x, y/2, z/2) and digits D = {e, b, c, bc}. Prints the recursion of the
//! generators and the finite automata they generate.
//!
//! ```bash
//! cargo run --example heisenberg_finite_state
//! ```

use selfsim::automaton::{explore, recursion_table, Bounds, WordDictionary};
use selfsim::SelfSimilarAction;

fn main() -> selfsim::Result<()> {
    let action = SelfSimilarAction::heisenberg_d();
    let dict = WordDictionary::heisenberg();
    let gens: Vec<_> = ["a", "b"]
        .iter()
        .map(|n| (n.to_string(), dict.lookup(n).unwrap().clone()))
        .collect();

    for row in recursion_table(&action, &gens, &dict)? {
        println!("{row}");
    }

    for (name, g) in &gens {
        let out = explore(&action, std::slice::from_ref(g), Bounds::default())?;
        let m = out.automaton().expect("finite-state under D");
        let states: Vec<String> = m.states.iter().map(|s| dict.name_or_coords(s)).collect();
        println!("states of {name}: {{{}}}", states.join(", "));
    }

    let report = action.phi().validate();
    print!("{report}");
    Ok(())
}
