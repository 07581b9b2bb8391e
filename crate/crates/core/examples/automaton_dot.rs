//! Writes the automaton generated by a and b under D as Graphviz DOT.
//!
//! ```bash
//! cargo run --example automaton_dot > heisenberg.dot
//! dot -Tsvg heisenberg.dot -o heisenberg.svg
//! ```

use selfsim::automaton::{explore, Bounds, WordDictionary};
use selfsim::SelfSimilarAction;

fn main() -> selfsim::Result<()> {
    let action = SelfSimilarAction::heisenberg_d();
    let dict = WordDictionary::heisenberg();
    let seeds = [
        dict.lookup("a").unwrap().clone(),
        dict.lookup("b").unwrap().clone(),
    ];
    let out = explore(&action, &seeds, Bounds::default())?;
    let m = out.automaton().expect("finite-state");
    eprintln!("{} states, {} transitions", m.len(), m.edge_count());
    print!("{}", m.to_dot(action.alphabet(), Some(&dict)));
    Ok(())
}
